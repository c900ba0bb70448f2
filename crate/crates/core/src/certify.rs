//! Certificates that an element lies in every term of the derived series, and
//! verdicts on the kernel of `Γ → Γ/D^∞(Γ)` built from them.
//!
//! A certificate for `g` is an identity in the free group on the generators:
//!
//! ```text
//! g^{-1} · Π_k ([w_k1, w_k2]^{u_k})^{±1}  =  Π_j (r_j^{v_j})^{±1}
//! ```
//!
//! where every `w` is a product of conjugates of `g^{±1}` and each `r_j` is a
//! relator. In `Γ` the right side is trivial, so `g` is a product of
//! commutators of elements of `⟨⟨g⟩⟩`. If `g ∈ D^n` then `⟨⟨g⟩⟩ ⊆ D^n`, hence
//! `g ∈ D^{n+1}`; by induction `g ∈ D^n` for every `n`. Checking the identity
//! is free reduction only.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freequot::metabelian_image;
use crate::words::{commutator, conjugate, parse_word, ParseError, Presentation, Word};
use crate::zlattice::abelianize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("relator index {index} out of range ({count} relators)")]
    RelatorIndex { index: usize, count: usize },
    #[error("word uses generator {0} outside the presentation")]
    Alphabet(usize),
    #[error("certificate has no commutator factor")]
    NoFactors,
    #[error("bad witness `{0}`: atoms are g, g^-1, g^(u), and products of these")]
    Witness(String),
    #[error("sign must be 1 or -1, got {0}")]
    Sign(i64),
    #[error("derived stage {0} is not supported for presentations with relators")]
    Unsupported(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// `(g^u)^{±1}` with `g^u = u^{-1} g u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub conjugator: Word,
    pub inverse: bool,
}

/// A product of atoms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Witness(pub Vec<Atom>);

impl Witness {
    pub fn expand(&self, g: &Word) -> Word {
        self.0.iter().fold(Word::identity(), |acc, a| {
            let base = if a.inverse { g.inverse() } else { g.clone() };
            acc.concat(&conjugate(&base, &a.conjugator))
        })
    }

    /// Parses e.g. `g`, `g^(b)`, `g^-1 g^(a b)^-1`.
    pub fn parse(text: &str, names: &[String]) -> Result<Self, CertifyError> {
        let bad = || CertifyError::Witness(text.to_string());
        let chars: Vec<char> = text.chars().collect();
        let mut atoms = Vec::new();
        let mut i = 0;
        let skip_ws = |i: &mut usize| {
            while *i < chars.len() && (chars[*i].is_whitespace() || chars[*i] == '*') {
                *i += 1;
            }
        };
        skip_ws(&mut i);
        if i < chars.len() && chars[i] == '1' {
            i += 1;
            skip_ws(&mut i);
            return if i == chars.len() { Ok(Witness(atoms)) } else { Err(bad()) };
        }
        while i < chars.len() {
            if chars[i] != 'g' {
                return Err(bad());
            }
            i += 1;
            let mut atom = Atom {
                conjugator: Word::identity(),
                inverse: false,
            };
            while i < chars.len() && chars[i] == '^' {
                i += 1;
                if chars[i..].starts_with(&['-', '1']) {
                    atom.inverse = !atom.inverse;
                    i += 2;
                } else if i < chars.len() && chars[i] == '(' {
                    let mut depth = 0;
                    let start = i + 1;
                    let mut end = None;
                    for (j, &c) in chars.iter().enumerate().skip(i) {
                        match c {
                            '(' => depth += 1,
                            ')' => {
                                depth -= 1;
                                if depth == 0 {
                                    end = Some(j);
                                    break;
                                }
                            }
                            _ => {}
                        }
                    }
                    let end = end.ok_or_else(bad)?;
                    let inner: String = chars[start..end].iter().collect();
                    let u = parse_word(&inner, names)?;
                    atom.conjugator = atom.conjugator.concat(&u);
                    i = end + 1;
                } else {
                    return Err(bad());
                }
            }
            atoms.push(atom);
            skip_ws(&mut i);
        }
        Ok(Witness(atoms))
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|a| {
                let mut s = "g".to_string();
                if !a.conjugator.is_empty() {
                    s.push_str(&format!("^({})", a.conjugator.display(names)));
                }
                if a.inverse {
                    s.push_str("^-1");
                }
                s
            })
            .collect();
        parts.join(" ")
    }
}

/// `([w1, w2]^{conjugator})^{±1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorFactor {
    pub w1: Witness,
    pub w2: Witness,
    pub conjugator: Word,
    pub inverse: bool,
}

/// `(r_relator^{conjugator})^{±1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelatorTerm {
    pub relator: usize,
    pub conjugator: Word,
    pub inverse: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedCertificate {
    pub target: Word,
    pub factors: Vec<CommutatorFactor>,
    pub pi: Vec<RelatorTerm>,
}

/// Text form used in certificate files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateSpec {
    pub target: String,
    /// Shorthand for a single factor `[w1, w2]`.
    #[serde(default)]
    pub w1: Option<String>,
    #[serde(default)]
    pub w2: Option<String>,
    #[serde(default, rename = "factor")]
    pub factors: Vec<FactorSpec>,
    /// `(relator index, conjugator, sign)`.
    #[serde(default)]
    pub pi: Vec<(usize, String, i64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorSpec {
    pub w1: String,
    pub w2: String,
    #[serde(default = "one")]
    pub conjugator: String,
    #[serde(default = "plus")]
    pub sign: i64,
}

fn one() -> String {
    "1".into()
}

fn plus() -> i64 {
    1
}

fn sign_of(s: i64) -> Result<bool, CertifyError> {
    match s {
        1 => Ok(false),
        -1 => Ok(true),
        _ => Err(CertifyError::Sign(s)),
    }
}

impl DerivedCertificate {
    pub fn from_spec(spec: &CertificateSpec, p: &Presentation) -> Result<Self, CertifyError> {
        let names = p.names();
        let target = parse_word(&spec.target, &names)?;
        let mut factors = Vec::new();
        if let (Some(a), Some(b)) = (&spec.w1, &spec.w2) {
            factors.push(CommutatorFactor {
                w1: Witness::parse(a, &names)?,
                w2: Witness::parse(b, &names)?,
                conjugator: Word::identity(),
                inverse: false,
            });
        }
        for f in &spec.factors {
            factors.push(CommutatorFactor {
                w1: Witness::parse(&f.w1, &names)?,
                w2: Witness::parse(&f.w2, &names)?,
                conjugator: parse_word(&f.conjugator, &names)?,
                inverse: sign_of(f.sign)?,
            });
        }
        let pi = spec
            .pi
            .iter()
            .map(|(r, u, s)| {
                Ok(RelatorTerm {
                    relator: *r,
                    conjugator: parse_word(u, &names)?,
                    inverse: sign_of(*s)?,
                })
            })
            .collect::<Result<Vec<_>, CertifyError>>()?;
        Ok(DerivedCertificate {
            target,
            factors,
            pi,
        })
    }

    /// `g^{-1} · Π factors`, unreduced.
    pub fn left_side(&self) -> Word {
        let g = &self.target;
        let mut acc = g.inverse();
        for f in &self.factors {
            let c = commutator(&f.w1.expand(g), &f.w2.expand(g));
            let c = conjugate(&c, &f.conjugator);
            acc = acc.concat(&if f.inverse { c.inverse() } else { c });
        }
        acc
    }

    /// `Π (r^v)^{±1}`, unreduced.
    pub fn right_side(&self, p: &Presentation) -> Word {
        self.pi.iter().fold(Word::identity(), |acc, t| {
            let r = conjugate(&p.relators()[t.relator], &t.conjugator);
            acc.concat(&if t.inverse { r.inverse() } else { r })
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateCheck {
    pub accepted: bool,
    /// Free reduction of `left · right^{-1}`; empty exactly when accepted.
    pub residue_length: usize,
    pub statement: Option<String>,
}

fn check_alphabet(w: &Word, k: usize) -> Result<(), CertifyError> {
    match w.letters().iter().find(|l| l.generator() >= k) {
        Some(l) => Err(CertifyError::Alphabet(l.generator())),
        None => Ok(()),
    }
}

/// Structural checks, then the free-group identity.
pub fn verify_certificate(
    p: &Presentation,
    cert: &DerivedCertificate,
) -> Result<CertificateCheck, CertifyError> {
    let k = p.rank();
    if cert.factors.is_empty() {
        return Err(CertifyError::NoFactors);
    }
    check_alphabet(&cert.target, k)?;
    for f in &cert.factors {
        check_alphabet(&f.conjugator, k)?;
        for a in f.w1.0.iter().chain(&f.w2.0) {
            check_alphabet(&a.conjugator, k)?;
        }
    }
    for t in &cert.pi {
        if t.relator >= p.relators().len() {
            return Err(CertifyError::RelatorIndex {
                index: t.relator,
                count: p.relators().len(),
            });
        }
        check_alphabet(&t.conjugator, k)?;
    }
    let residue = cert
        .left_side()
        .concat(&cert.right_side(p).inverse())
        .reduced();
    let accepted = residue.is_empty();
    let names = p.names();
    Ok(CertificateCheck {
        accepted,
        residue_length: residue.len(),
        statement: accepted.then(|| {
            format!(
                "{} lies in D^n for every n, so its normal closure lies in the kernel of the map to the true prosoluble completion",
                cert.target.display(&names)
            )
        }),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerdictStatus {
    /// Free group: residually soluble (indeed residually a finite p-group).
    ResiduallySolubleEvidence,
    /// Certified: the normal closure of `element` lies in `D^∞`, and the
    /// quotient by it is abelian, so `D(Γ) = D^∞(Γ)`.
    KernelContains { element: String },
    /// Derived series reaches 1 after `length` steps.
    Soluble { length: usize },
    /// Trivial abelianization: `D(Γ) = Γ`, so the completion is one point.
    Perfect,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub struct StageData {
    pub n: usize,
    pub description: String,
    /// Per generator, coordinates in the canonical decomposition (stage 1).
    pub generator_images: Vec<Vec<String>>,
    /// Stage 2, free case: whether the queried word is trivial in `F/D²`.
    pub word_trivial: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelVerdict {
    pub group: String,
    pub status: VerdictStatus,
    pub abelianization: String,
    /// `Γ/D^∞(Γ)` when determined.
    pub prosoluble_completion: Option<String>,
    pub certificate: Option<CertificateCheck>,
    pub quotient_after_elimination: Option<String>,
    pub stages: Vec<StageData>,
}

/// Kills `g` and eliminates generators that some relator sets equal to a
/// power-free single letter (`x` or `x^-1`), substituting the identity.
pub fn eliminate_single_letters(p: &Presentation, g: &Word) -> Presentation {
    let names = p.names();
    let mut relators: Vec<Word> = p.relators().to_vec();
    relators.push(g.clone());
    let mut alive = vec![true; names.len()];
    loop {
        let killed = relators.iter().find_map(|r| {
            let r = r.cyclically_reduced();
            (r.len() == 1).then(|| r.letters()[0].generator())
        });
        let Some(x) = killed else { break };
        alive[x] = false;
        relators = relators
            .iter()
            .map(|r| {
                Word::from_letters(
                    r.letters()
                        .iter()
                        .copied()
                        .filter(|l| l.generator() != x)
                        .collect(),
                )
                .cyclically_reduced()
            })
            .filter(|r| !r.is_empty())
            .collect();
    }
    // Renumber surviving generators.
    let mut map = vec![usize::MAX; names.len()];
    let mut kept = Vec::new();
    for (i, n) in names.iter().enumerate() {
        if alive[i] {
            map[i] = kept.len();
            kept.push(n.clone());
        }
    }
    let relators = relators
        .iter()
        .map(|r| {
            Word::from_letters(
                r.letters()
                    .iter()
                    .map(|l| crate::words::Letter::new(map[l.generator()], l.is_inverse()))
                    .collect(),
            )
        })
        .collect();
    Presentation::new(kept, relators).expect("renumbered presentation is valid")
}

/// Cyclic groups, and presentations containing every `[x_i, x_j]` up to
/// cyclic permutation and inversion, are abelian.
pub fn visibly_abelian(p: &Presentation) -> bool {
    let k = p.rank();
    if k <= 1 {
        return true;
    }
    let rel: Vec<Word> = p.relators().iter().map(Word::cyclically_reduced).collect();
    let same_cycle = |a: &Word, b: &Word| {
        a.len() == b.len() && {
            let doubled = a.concat(a);
            (0..a.len()).any(|s| doubled.letters()[s..s + a.len()] == *b.letters())
        }
    };
    (0..k).all(|i| {
        (0..i).all(|j| {
            let c = commutator(&Word::generator(i), &Word::generator(j));
            rel.iter()
                .any(|r| same_cycle(r, &c) || same_cycle(r, &c.inverse()))
        })
    })
}

pub fn prosoluble_kernel_report(
    name: &str,
    p: &Presentation,
    cert: Option<&DerivedCertificate>,
) -> Result<KernelVerdict, CertifyError> {
    let ab = abelianize(p);
    let stage1 = derived_tower_stage(p, 1, None)?;
    let mut verdict = KernelVerdict {
        group: name.to_string(),
        status: VerdictStatus::Unknown,
        abelianization: ab.invariants.to_string(),
        prosoluble_completion: None,
        certificate: None,
        quotient_after_elimination: None,
        stages: vec![stage1],
    };
    if ab.invariants.is_trivial() {
        verdict.status = VerdictStatus::Perfect;
        verdict.prosoluble_completion = Some("1".into());
        return Ok(verdict);
    }
    if p.relators().is_empty() {
        if p.rank() == 1 {
            verdict.status = VerdictStatus::Soluble { length: 1 };
            verdict.prosoluble_completion = Some(ab.invariants.to_string());
        } else {
            verdict.status = VerdictStatus::ResiduallySolubleEvidence;
        }
        return Ok(verdict);
    }
    if let Some(c) = cert {
        let check = verify_certificate(p, c)?;
        let accepted = check.accepted;
        verdict.certificate = Some(check);
        if accepted {
            let q = eliminate_single_letters(p, &c.target);
            verdict.quotient_after_elimination = Some(q.to_string());
            if visibly_abelian(&q) {
                verdict.status = VerdictStatus::KernelContains {
                    element: c.target.display(&p.names()).to_string(),
                };
                verdict.prosoluble_completion = Some(ab.invariants.to_string());
            }
        }
    } else if visibly_abelian(p) {
        verdict.status = VerdictStatus::Soluble { length: 1 };
        verdict.prosoluble_completion = Some(ab.invariants.to_string());
    }
    Ok(verdict)
}

/// `n = 1`: the abelianization with generator images. `n = 2`: triviality of
/// `w` in `F/D²(F)`, free groups only.
pub fn derived_tower_stage(
    p: &Presentation,
    n: usize,
    w: Option<&Word>,
) -> Result<StageData, CertifyError> {
    match n {
        1 => {
            let ab = abelianize(p);
            let s = |v: &Vec<BigInt>| v.iter().map(|x| x.to_string()).collect();
            Ok(StageData {
                n,
                description: ab.invariants.to_string(),
                generator_images: ab.images.iter().map(s).collect(),
                word_trivial: w.map(|w| ab.image_of(w).iter().all(|x| x == &BigInt::from(0))),
            })
        }
        2 if p.relators().is_empty() => Ok(StageData {
            n,
            description: format!("free metabelian of rank {}", p.rank()),
            generator_images: Vec::new(),
            word_trivial: w.map(|w| metabelian_image(w, p.rank()).is_trivial()),
        }),
        _ => Err(CertifyError::Unsupported(n)),
    }
}
