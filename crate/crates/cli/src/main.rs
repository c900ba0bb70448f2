use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use prosol::congruence::Variant;
use prosol_cli::commands::{self, adhoc, compute, render_fields};
use prosol_cli::config::Config;
use prosol_cli::corpus::*;
use prosol_cli::explain::explain;
use prosol_cli::report::run_suite;
use prosol_cli::{read_file, CliError};

#[derive(Parser)]
#[command(name = "prosol", version, about = "Soluble quotients, towers and completions of finitely presented groups")]
struct Cli {
    /// Config file with caps and seeds (defaults are built in).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every entry of a corpus and report pass/fail.
    Run {
        /// Corpus file; the shipped corpus when omitted.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Only run these entries.
        #[arg(long)]
        only: Vec<String>,
        /// Print only the summary line.
        #[arg(long)]
        quiet: bool,
    },
    /// Describe one corpus entry and print its computed evidence.
    Explain {
        name: String,
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Abelian invariants and generator images of a presentation.
    Abelianize {
        presentation: String,
        /// Also print the image of these words.
        #[arg(long = "word")]
        words: Vec<String>,
    },
    /// Derived and lower central series of a permutation group.
    Series {
        #[arg(long)]
        degree: usize,
        /// Generators in cycle notation on 0..degree, e.g. "(0 1 2)(3 4)".
        #[arg(required = true)]
        generators: Vec<String>,
    },
    /// Level quotients of a tree automaton group.
    TreeQuotients {
        /// grigorchuk, grigorchuk-swapped or basilica.
        #[arg(long, default_value = "grigorchuk")]
        builtin: String,
        #[arg(long, default_value_t = 5)]
        levels: usize,
    },
    /// Congruence layers (I + p^{a-1} M) mod p^a.
    Congruence {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        max_a: u32,
        /// sl or gl; both when omitted.
        #[arg(long)]
        variant: Option<Variant>,
        /// Also build the residual p-tower of SL_d.
        #[arg(long)]
        residual: bool,
    },
    /// Tower distance between words.
    Metric {
        /// Cyclic tower moduli, e.g. 2,4,8,16.
        #[arg(long, value_delimiter = ',')]
        moduli: Option<Vec<u64>>,
        /// Otherwise an abelian p-tower of this presentation.
        #[arg(long)]
        presentation: Option<String>,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        max_a: Option<u32>,
        /// Pairs `x,y`: integers for cyclic towers, words otherwise.
        #[arg(required = true)]
        pairs: Vec<String>,
    },
    /// Compare the derived tower with finite p-towers of a presentation.
    Compare {
        presentation: String,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 3)]
        stages: u32,
    },
    /// Kernel verdict for a presentation, with an optional certificate file.
    Kernel {
        presentation: String,
        /// TOML or JSON certificate.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Lower central depth of words in a free group.
    NilpotentDepth {
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 8)]
        cutoff: usize,
        /// Also print layer ranks up to this class.
        #[arg(long, default_value_t = 1)]
        class: usize,
        /// Words over x, y, z, w, u, v.
        words: Vec<String>,
    },
    /// Rank and membership for a subgroup of a free group.
    Subgroup {
        /// Ambient generator names.
        #[arg(long, value_delimiter = ',', default_value = "x,y")]
        names: Vec<String>,
        /// Subgroup generators.
        #[arg(long = "gen", required = true)]
        generators: Vec<String>,
        /// Words to test for membership.
        #[arg(long = "query")]
        queries: Vec<String>,
        /// Class for the nilpotent surjectivity check.
        #[arg(long, default_value_t = 2)]
        class: usize,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let cfg = Config::load(cli.config.as_deref())?;
    let single = |name: &str, payload: Payload| -> Result<bool, CliError> {
        print!("{}", render_fields(&compute(&adhoc(name, payload), &cfg)?));
        Ok(true)
    };
    match cli.command {
        Command::Run {
            corpus,
            report,
            only,
            quiet,
        } => {
            let corpus = Corpus::load(corpus.as_deref())?;
            if let Some(missing) = only.iter().find(|n| corpus.get(n).is_none()) {
                return Err(CliError::UnknownEntry(missing.clone()));
            }
            let r = run_suite(&corpus, &cfg, &only);
            if let Some(path) = report {
                std::fs::write(&path, r.to_json()).map_err(|e| CliError::Io {
                    path: path.display().to_string(),
                    msg: e.to_string(),
                })?;
            }
            let text = r.render_text();
            if quiet {
                print!("{}", text.lines().last().map(|l| format!("{l}\n")).unwrap_or_default());
            } else {
                print!("{text}");
            }
            Ok(r.all_passed())
        }
        Command::Explain { name, corpus } => {
            let corpus = Corpus::load(corpus.as_deref())?;
            print!("{}", explain(&corpus, &cfg, &name)?);
            Ok(true)
        }
        Command::Abelianize { presentation, words } => {
            single("abelianize", commands::presentation(&presentation, words))
        }
        Command::Series { degree, generators } => single(
            "series",
            Payload::PermutationGroup(PermPayload { degree, generators }),
        ),
        Command::TreeQuotients { builtin, levels } => single(
            "tree-quotients",
            Payload::TreeAutomaton(TreePayload {
                builtin: Some(builtin),
                states: Vec::new(),
                generators: Vec::new(),
                levels,
            }),
        ),
        Command::Congruence {
            d,
            p,
            max_a,
            variant,
            residual,
        } => single(
            "congruence",
            Payload::Congruence(CongruencePayload {
                d,
                p,
                max_a,
                variants: variant.map(|v| vec![v]).unwrap_or_else(|| vec![Variant::Sl, Variant::Gl]),
                residual,
                scan: false,
            }),
        ),
        Command::Metric {
            moduli,
            presentation,
            prime,
            max_a,
            pairs,
        } => {
            let split = |s: &String| -> Result<(String, String), CliError> {
                s.split_once(',')
                    .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                    .ok_or_else(|| CliError::Usage(format!("expected a pair `x,y`, got `{s}`")))
            };
            let pairs = pairs.iter().map(split).collect::<Result<Vec<_>, _>>()?;
            let (distances, word_distances) = if moduli.is_some() {
                let int = |s: &str| {
                    s.parse::<i64>()
                        .map_err(|_| CliError::Usage(format!("`{s}` is not an integer")))
                };
                let d = pairs
                    .iter()
                    .map(|(a, b)| Ok((int(a)?, int(b)?)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                (d, Vec::new())
            } else {
                (Vec::new(), pairs)
            };
            single(
                "metric",
                Payload::Tower(TowerPayload {
                    moduli,
                    presentation,
                    prime,
                    max_a,
                    distances,
                    word_distances,
                    refine_with: None,
                    canonical: Vec::new(),
                }),
            )
        }
        Command::Compare {
            presentation,
            primes,
            stages,
        } => single(
            "compare",
            Payload::Presentation(PresentationPayload {
                presentation,
                certificate: None,
                words: Vec::new(),
                expand: Vec::new(),
                compare_primes: primes,
                compare_stages: stages,
            }),
        ),
        Command::Kernel { presentation, cert } => {
            let certificate = cert
                .map(|p| read_file(&p).and_then(|t| commands::parse_certificate(&t)))
                .transpose()?;
            let fields = compute(
                &adhoc(
                    "kernel",
                    Payload::Presentation(PresentationPayload {
                        presentation,
                        certificate,
                        words: Vec::new(),
                        expand: Vec::new(),
                        compare_primes: Vec::new(),
                        compare_stages: 3,
                    }),
                ),
                &cfg,
            )?;
            print!("{}", render_fields(&fields));
            // A rejected certificate is a failed check, not a usage error.
            Ok(fields.get("certificate_accepted") != Some(&serde_json::Value::Bool(false)))
        }
        Command::NilpotentDepth {
            rank,
            cutoff,
            class,
            words,
        } => single(
            "nilpotent-depth",
            Payload::Nilpotent(NilpotentPayload {
                rank,
                class,
                words,
                cutoff,
            }),
        ),
        Command::Subgroup {
            names,
            generators,
            queries,
            class,
        } => single(
            "subgroup",
            Payload::FreeSubgroup(FreeSubgroupPayload {
                names,
                subgroup: generators,
                queries,
                class,
            }),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
