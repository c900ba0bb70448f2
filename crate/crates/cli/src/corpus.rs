//! Corpus files: a TOML list of `[[entry]]` tables, each with a `kind` and a
//! kind-specific payload, plus optional expectations on report fields.

use std::collections::{BTreeMap, HashSet};

use prosol::certify::CertificateSpec;
use prosol::congruence::Variant;
use prosol::treeauto::StateSpec;
use serde::Deserialize;

use crate::CliError;

/// The shipped corpus.
pub const SHIPPED_CORPUS: &str = include_str!("../data/paper.corpus");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCorpus {
    #[serde(default)]
    entry: Vec<RawEntry>,
}

#[derive(Debug, Clone, Deserialize)]
struct RawEntry {
    name: String,
    kind: String,
    #[serde(default)]
    flags: Vec<String>,
    #[serde(default)]
    topics: Vec<String>,
    #[serde(default)]
    expect: BTreeMap<String, toml::Value>,
    #[serde(flatten)]
    payload: toml::Table,
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub name: String,
    pub flags: Vec<String>,
    pub topics: Vec<String>,
    pub expect: BTreeMap<String, toml::Value>,
    pub payload: Payload,
}

impl Entry {
    pub fn kind(&self) -> &'static str {
        self.payload.kind()
    }
}

#[derive(Debug, Clone)]
pub enum Payload {
    Presentation(PresentationPayload),
    PermutationGroup(PermPayload),
    MatrixGroup(MatrixPayload),
    Wreath(WreathPayload),
    TreeAutomaton(TreePayload),
    Tower(TowerPayload),
    Congruence(CongruencePayload),
    Padic(PadicPayload),
    FreeSubgroup(FreeSubgroupPayload),
    Nilpotent(NilpotentPayload),
    Oracle(OraclePayload),
}

pub const KINDS: [&str; 11] = [
    "presentation",
    "permutation-group",
    "matrix-group",
    "wreath",
    "tree-automaton",
    "tower",
    "congruence",
    "padic",
    "free-subgroup",
    "nilpotent",
    "oracle",
];

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Presentation(_) => KINDS[0],
            Payload::PermutationGroup(_) => KINDS[1],
            Payload::MatrixGroup(_) => KINDS[2],
            Payload::Wreath(_) => KINDS[3],
            Payload::TreeAutomaton(_) => KINDS[4],
            Payload::Tower(_) => KINDS[5],
            Payload::Congruence(_) => KINDS[6],
            Payload::Padic(_) => KINDS[7],
            Payload::FreeSubgroup(_) => KINDS[8],
            Payload::Nilpotent(_) => KINDS[9],
            Payload::Oracle(_) => KINDS[10],
        }
    }

    /// Whether the entry describes a finite group with a permutation model.
    pub fn is_finite_group(&self) -> bool {
        matches!(
            self,
            Payload::PermutationGroup(_) | Payload::MatrixGroup(_) | Payload::Wreath(_)
        )
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationPayload {
    pub presentation: String,
    pub certificate: Option<CertificateSpec>,
    /// Words whose abelianization images are reported.
    #[serde(default)]
    pub words: Vec<String>,
    /// Words printed in freely reduced normal form.
    #[serde(default)]
    pub expand: Vec<String>,
    /// Primes for the completion comparison; empty skips it.
    #[serde(default)]
    pub compare_primes: Vec<u64>,
    #[serde(default = "three")]
    pub compare_stages: u32,
}

fn three() -> u32 {
    3
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermPayload {
    pub degree: usize,
    /// Cycle notation on points `0..degree`.
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixPayload {
    pub modulus: u64,
    /// Each generator as a list of rows.
    pub generators: Vec<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WreathPayload {
    pub base: PermPayload,
    pub top: PermPayload,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreePayload {
    /// `grigorchuk`, `grigorchuk-swapped` or `basilica`; otherwise `states`.
    pub builtin: Option<String>,
    #[serde(default)]
    pub states: Vec<StateSpec>,
    #[serde(default)]
    pub generators: Vec<String>,
    pub levels: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerPayload {
    /// Cyclic tower `Z/m_1 ← Z/m_2 ← …` on the generator `t`.
    pub moduli: Option<Vec<u64>>,
    /// Otherwise: the abelian `p`-tower of a presentation.
    pub presentation: Option<String>,
    pub prime: Option<u64>,
    pub max_a: Option<u32>,
    /// Pairs of exponents `(x, y)` of `t`, cyclic towers only.
    #[serde(default)]
    pub distances: Vec<(i64, i64)>,
    /// Pairs of words in the tower alphabet.
    #[serde(default)]
    pub word_distances: Vec<(String, String)>,
    /// Moduli of a second cyclic tower to compare topologies with.
    pub refine_with: Option<Vec<u64>>,
    /// Words whose images are checked to be coherent sequences.
    #[serde(default)]
    pub canonical: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CongruencePayload {
    pub d: usize,
    pub p: u64,
    pub max_a: u32,
    #[serde(default = "both_variants")]
    pub variants: Vec<Variant>,
    /// Also build the tower `K_1/K_a` of `SL_d`.
    #[serde(default)]
    pub residual: bool,
    /// Also scan every `x ≡ I mod p` for invertibility.
    #[serde(default)]
    pub scan: bool,
}

fn both_variants() -> Vec<Variant> {
    vec![Variant::Sl, Variant::Gl]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PadicPayload {
    pub p: u64,
    pub max_a: u32,
    /// Multiplier for the stage-bijection demo.
    pub n: Option<u64>,
    /// Stage images `x_a` for the rank-2 demo; `square-digits` uses `Σ p^{k²}`.
    pub rank2: Option<Rank2Input>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Rank2Input {
    Named(String),
    Explicit(Vec<u64>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeSubgroupPayload {
    /// Generator names of the ambient free group.
    pub names: Vec<String>,
    pub subgroup: Vec<String>,
    #[serde(default)]
    pub queries: Vec<String>,
    #[serde(default = "two")]
    pub class: usize,
}

fn two() -> usize {
    2
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NilpotentPayload {
    pub rank: usize,
    pub class: usize,
    /// Words for lower central depth, over generators `x, y, z, …`.
    #[serde(default)]
    pub words: Vec<String>,
    #[serde(default = "eight")]
    pub cutoff: usize,
}

fn eight() -> usize {
    8
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OraclePayload {
    /// `smith` or `magnus`.
    pub check: String,
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub entries: Vec<Entry>,
}

fn payload<T: for<'de> Deserialize<'de>>(name: &str, t: toml::Table) -> Result<T, CliError> {
    t.try_into().map_err(|e: toml::de::Error| CliError::Entry {
        name: name.to_string(),
        message: e.to_string(),
    })
}

impl Corpus {
    /// Parses and type-checks every entry; names must be unique.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawCorpus = toml::from_str(text).map_err(|e| CliError::Corpus(e.to_string()))?;
        let mut seen = HashSet::new();
        let mut entries = Vec::with_capacity(raw.entry.len());
        for e in raw.entry {
            if !seen.insert(e.name.clone()) {
                return Err(CliError::Entry {
                    name: e.name,
                    message: "duplicate entry name".into(),
                });
            }
            let n = e.name.as_str();
            let p = e.payload;
            let payload = match e.kind.as_str() {
                "presentation" => Payload::Presentation(payload(n, p)?),
                "permutation-group" => Payload::PermutationGroup(payload(n, p)?),
                "matrix-group" => Payload::MatrixGroup(payload(n, p)?),
                "wreath" => Payload::Wreath(payload(n, p)?),
                "tree-automaton" => Payload::TreeAutomaton(payload(n, p)?),
                "tower" => Payload::Tower(payload(n, p)?),
                "congruence" => Payload::Congruence(payload(n, p)?),
                "padic" => Payload::Padic(payload(n, p)?),
                "free-subgroup" => Payload::FreeSubgroup(payload(n, p)?),
                "nilpotent" => Payload::Nilpotent(payload(n, p)?),
                "oracle" => Payload::Oracle(payload(n, p)?),
                other => {
                    return Err(CliError::Entry {
                        name: e.name.clone(),
                        message: format!("unknown kind `{other}` (expected one of {})", KINDS.join(", ")),
                    })
                }
            };
            entries.push(Entry {
                name: e.name,
                flags: e.flags,
                topics: e.topics,
                expect: e.expect,
                payload,
            });
        }
        Ok(Corpus { entries })
    }

    pub fn load(path: Option<&std::path::Path>) -> Result<Self, CliError> {
        match path {
            None => Self::parse(SHIPPED_CORPUS),
            Some(p) => Self::parse(&crate::read_file(p)?),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }
}
