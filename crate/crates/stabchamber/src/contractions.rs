//! Birational contractions of the configured surface.
//!
//! A subset S of the exceptional indices is a valid contraction target when
//! it is closed under the infinitely-near relation: contracting C_j first
//! requires contracting every curve whose point lies on C_j. Each valid S
//! carries a list of generators, one per contracted index, whose numerical
//! classes drive all chamber inequalities downstream.

use std::collections::BTreeSet;
use std::fmt;

use crate::configuration::BlowUpConfig;
use crate::error::{EngineError, Result};
use crate::lattice::{ChernCharacter, NSClass};

/// A valid subset of exceptional indices, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContractionSet(BTreeSet<usize>);

impl ContractionSet {
    pub fn empty() -> Self {
        ContractionSet(BTreeSet::new())
    }

    pub fn full(n: usize) -> Self {
        ContractionSet((1..=n).collect())
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        ContractionSet(indices.iter().copied().collect())
    }

    pub fn indices(&self) -> &BTreeSet<usize> {
        &self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn without(&self, j: usize) -> Self {
        let mut s = self.0.clone();
        s.remove(&j);
        ContractionSet(s)
    }

    /// Parse `1,3` or `{1,3}`; `-` and the empty string denote the identity.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim().trim_start_matches('{').trim_end_matches('}');
        if t.is_empty() || t == "-" {
            return Ok(ContractionSet::empty());
        }
        let mut s = BTreeSet::new();
        for piece in t.split(',') {
            let i: usize = piece.trim().parse().map_err(|_| {
                EngineError::Argument(format!("cannot parse contraction index {piece:?}"))
            })?;
            s.insert(i);
        }
        Ok(ContractionSet(s))
    }
}

impl PartialOrd for ContractionSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ContractionSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for ContractionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// The point of the curve lies on no later contracted curve.
    TypeI,
    /// The point lies on a later contracted curve; kappa is the first one.
    TypeII,
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorKind::TypeI => write!(f, "I"),
            GeneratorKind::TypeII => write!(f, "II"),
        }
    }
}

/// One generator of the contracted category, known only through its
/// numerical class; the divisor note renders the underlying sheaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub index: usize,
    pub kind: GeneratorKind,
    pub kappa: Option<usize>,
    pub ch: ChernCharacter,
    pub divisor_note: String,
}

/// S is valid iff for every j in S all indices whose point lies on C_j are
/// in S as well. The empty set is the identity morphism.
pub fn is_valid(cfg: &BlowUpConfig, s: &ContractionSet) -> bool {
    if s.iter().any(|j| j == 0 || j > cfg.n()) {
        return false;
    }
    for i in 1..=cfg.n() {
        for &j in cfg.on(i) {
            if s.contains(j) && !s.contains(i) {
                return false;
            }
        }
    }
    true
}

pub fn require_valid(cfg: &BlowUpConfig, s: &ContractionSet) -> Result<()> {
    if is_valid(cfg, s) {
        Ok(())
    } else {
        Err(EngineError::InvalidContraction {
            set: s.to_string(),
            reason: "not closed under infinitely-near predecessors".to_string(),
        })
    }
}

/// Every valid contraction set, ordered by size then content.
pub fn all_contractions(cfg: &BlowUpConfig) -> Result<Vec<ContractionSet>> {
    let n = cfg.n();
    if n > 16 {
        return Err(EngineError::ContractionCap { n });
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let s = ContractionSet((1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect());
        if is_valid(cfg, &s) {
            out.push(s);
        }
    }
    out.sort();
    Ok(out)
}

/// Relative type of index i within S: type II with the smallest carrier in S
/// when one exists, type I otherwise.
pub fn classify(
    cfg: &BlowUpConfig,
    s: &ContractionSet,
    i: usize,
) -> Result<(GeneratorKind, Option<usize>)> {
    require_valid(cfg, s)?;
    if !s.contains(i) {
        return Err(EngineError::Argument(format!("index {i} is not in {s}")));
    }
    match cfg.on(i).iter().copied().find(|j| s.contains(*j)) {
        Some(kappa) => Ok((GeneratorKind::TypeII, Some(kappa))),
        None => Ok((GeneratorKind::TypeI, None)),
    }
}

/// The generators attached to S, one per contracted index in increasing
/// order. Type I carries (0, -Chat_i, -1/2); type II carries
/// (0, Chat_kappa - Chat_i, 0), computed as a difference of divisor-sheaf
/// classes rather than hard-coded.
pub fn generators(cfg: &BlowUpConfig, s: &ContractionSet) -> Result<Vec<Generator>> {
    require_valid(cfg, s)?;
    let n = cfg.n();
    let mut out = Vec::with_capacity(s.len());
    for i in s.iter() {
        let (kind, kappa) = classify(cfg, s, i)?;
        let total_i = NSClass::exceptional(n, i)?;
        let (ch, divisor_note) = match kind {
            GeneratorKind::TypeI => {
                let ch = ChernCharacter::of_divisor_sheaf(&total_i).shift_parity(1);
                (ch, format!("O_{{{}}}[-1]", render_total(cfg, i)))
            }
            GeneratorKind::TypeII => {
                let k = kappa.expect("type II has kappa");
                let total_k = NSClass::exceptional(n, k)?;
                let ch = ChernCharacter::of_divisor_sheaf(&total_k)
                    .sub(&ChernCharacter::of_divisor_sheaf(&total_i))?;
                (ch, render_difference_note(cfg, k, i))
            }
        };
        out.push(Generator {
            index: i,
            kind,
            kappa,
            ch,
            divisor_note,
        });
    }
    Ok(out)
}

/// Indices of relative type I: exactly the curves contractible last, so that
/// removing one yields a valid set and a single point blow-up between the
/// two targets.
pub fn blowdown_successors(
    cfg: &BlowUpConfig,
    s: &ContractionSet,
) -> Result<Vec<(usize, ContractionSet)>> {
    require_valid(cfg, s)?;
    let mut out = Vec::new();
    for j in s.iter() {
        if let (GeneratorKind::TypeI, _) = classify(cfg, s, j)? {
            out.push((j, s.without(j)));
        }
    }
    Ok(out)
}

/// Multiplicity of each strict transform inside the total transform Chat_j.
fn total_in_strict_basis(cfg: &BlowUpConfig, j: usize) -> Vec<(usize, i64)> {
    let mut coeffs = vec![0i64; cfg.n() + 1];
    fn add(cfg: &BlowUpConfig, j: usize, mult: i64, coeffs: &mut Vec<i64>) {
        coeffs[j] += mult;
        for i in cfg.children(j) {
            add(cfg, i, mult, coeffs);
        }
    }
    add(cfg, j, 1, &mut coeffs);
    (1..=cfg.n())
        .filter(|&m| coeffs[m] != 0)
        .map(|m| (m, coeffs[m]))
        .collect()
}

fn strict_symbol(cfg: &BlowUpConfig, m: usize) -> String {
    if cfg.children(m).is_empty() {
        format!("C_{m}")
    } else {
        format!("C̄_{m}")
    }
}

fn render_terms(cfg: &BlowUpConfig, terms: &[(usize, i64)]) -> String {
    let mut out = String::new();
    for &(m, mult) in terms {
        let sym = strict_symbol(cfg, m);
        let piece = match mult {
            1 => sym,
            -1 => format!("-{sym}"),
            k => format!("{k}{sym}"),
        };
        if out.is_empty() {
            out = piece;
        } else if piece.starts_with('-') {
            out = format!("{out}{piece}");
        } else {
            out = format!("{out}+{piece}");
        }
    }
    out
}

fn render_total(cfg: &BlowUpConfig, j: usize) -> String {
    render_terms(cfg, &total_in_strict_basis(cfg, j))
}

/// Note for a type II generator supported on Chat_kappa - Chat_i. When the
/// difference is a single strict transform the twist is a point of degree
/// one on it; otherwise the twisted point is named explicitly.
fn render_difference_note(cfg: &BlowUpConfig, kappa: usize, i: usize) -> String {
    let mut coeffs = vec![0i64; cfg.n() + 1];
    for (m, mult) in total_in_strict_basis(cfg, kappa) {
        coeffs[m] += mult;
    }
    for (m, mult) in total_in_strict_basis(cfg, i) {
        coeffs[m] -= mult;
    }
    let terms: Vec<(usize, i64)> = (1..=cfg.n())
        .filter(|&m| coeffs[m] != 0)
        .map(|m| (m, coeffs[m]))
        .collect();
    let body = render_terms(cfg, &terms);
    if terms.len() == 1 && terms[0].1 == 1 {
        format!("O_{{{body}}}(-1)")
    } else {
        format!("O_{{{body}}}(-p_{i})")
    }
}
