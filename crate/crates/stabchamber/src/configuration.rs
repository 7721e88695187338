//! Ordered blow-up configurations of the projective plane, including
//! infinitely-near points.
//!
//! Index conventions: the surface is obtained from the plane by blowing up
//! points p_n, ..., p_1 in that order (index 1 is the deepest, last blow-up).
//! The relation `j in on(i)` records that p_i lies on the exceptional curve
//! C_j of a later-contracted index j > i.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{Signed, Zero};

use crate::contractions::{generators, ContractionSet};
use crate::error::{EngineError, Result};
use crate::lattice::NSClass;
use crate::rat::{self, Rat};

/// Ordered blow-up data plus user-declared special-position curves.
#[derive(Debug)]
pub struct BlowUpConfig {
    n: usize,
    on: BTreeMap<usize, BTreeSet<usize>>,
    extra_curves: Vec<NSClass>,
    curves: OnceLock<Result<CurveSet>>,
    forms: RwLock<BTreeMap<BTreeSet<usize>, Arc<Vec<NSClass>>>>,
}

impl Clone for BlowUpConfig {
    fn clone(&self) -> Self {
        BlowUpConfig {
            n: self.n,
            on: self.on.clone(),
            extra_curves: self.extra_curves.clone(),
            curves: OnceLock::new(),
            forms: RwLock::new(BTreeMap::new()),
        }
    }
}

impl PartialEq for BlowUpConfig {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.on == other.on && self.extra_curves == other.extra_curves
    }
}

/// A violated configuration rule. Violations are data, not faults.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub indices: Vec<usize>,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// |on(i)| <= 2: a point lies on at most two transverse branches.
    CarrierCount,
    /// Every member of on(i) must exceed i.
    CarrierOrder,
    /// Members of on(i) must be exceptional indices <= n.
    CarrierRange,
    /// j, k in on(i) with j < k forces k in on(j).
    CarrierChain,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::CarrierCount => "carrier-count",
            Rule::CarrierOrder => "carrier-order",
            Rule::CarrierRange => "carrier-range",
            Rule::CarrierChain => "carrier-chain",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.rule.name(), self.message)
    }
}

/// Effective curve classes used as the positivity oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSet {
    classes: Vec<NSClass>,
}

impl CurveSet {
    pub fn classes(&self) -> &[NSClass] {
        &self.classes
    }

    pub fn iter(&self) -> std::slice::Iter<'_, NSClass> {
        self.classes.iter()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

static EMPTY_SET: BTreeSet<usize> = BTreeSet::new();

impl BlowUpConfig {
    /// `on` maps i to the set { j > i : p_i lies on C_j }. Empty entries may
    /// be omitted. No validation happens here; see [`BlowUpConfig::violations`].
    pub fn new(n: usize, on: BTreeMap<usize, BTreeSet<usize>>, extra_curves: Vec<NSClass>) -> Self {
        let on = on.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        BlowUpConfig {
            n,
            on,
            extra_curves,
            curves: OnceLock::new(),
            forms: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn unrelated(n: usize) -> Self {
        BlowUpConfig::new(n, BTreeMap::new(), Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn on(&self, i: usize) -> &BTreeSet<usize> {
        self.on.get(&i).unwrap_or(&EMPTY_SET)
    }

    pub fn on_relation(&self) -> &BTreeMap<usize, BTreeSet<usize>> {
        &self.on
    }

    pub fn extra_curves(&self) -> &[NSClass] {
        &self.extra_curves
    }

    /// Indices whose points lie on C_j.
    pub fn children(&self, j: usize) -> BTreeSet<usize> {
        (1..=self.n).filter(|&i| self.on(i).contains(&j)).collect()
    }

    /// Check every structural rule; an empty report means the data is
    /// geometrically consistent.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (&i, carriers) in &self.on {
            if i == 0 || i > self.n {
                out.push(Violation {
                    rule: Rule::CarrierRange,
                    indices: vec![i],
                    message: format!("point index {i} outside 1..={}", self.n),
                });
                continue;
            }
            if carriers.len() > 2 {
                out.push(Violation {
                    rule: Rule::CarrierCount,
                    indices: vec![i],
                    message: format!(
                        "p_{i} lies on {} exceptional branches; at most 2 are transverse",
                        carriers.len()
                    ),
                });
            }
            for &j in carriers {
                if j > self.n {
                    out.push(Violation {
                        rule: Rule::CarrierRange,
                        indices: vec![i, j],
                        message: format!("on({i}) contains {j} > n = {}", self.n),
                    });
                } else if j <= i {
                    out.push(Violation {
                        rule: Rule::CarrierOrder,
                        indices: vec![i, j],
                        message: format!("on({i}) contains {j} <= {i}; carriers must come later"),
                    });
                }
            }
            let carriers: Vec<usize> = carriers.iter().copied().collect();
            for a in 0..carriers.len() {
                for b in (a + 1)..carriers.len() {
                    let (j, k) = (carriers[a], carriers[b]);
                    if j > i && k > j && k <= self.n && !self.on(j).contains(&k) {
                        out.push(Violation {
                            rule: Rule::CarrierChain,
                            indices: vec![i, j, k],
                            message: format!(
                                "p_{i} lies on C_{j} and C_{k}, so contracting C_{j} \
                                 puts p_{j} on C_{k}: {k} must belong to on({j})"
                            ),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(EngineError::InvalidConfiguration(
                violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            ))
        }
    }

    /// Class of the strict transform of C_j: Chat_j minus the total
    /// transforms of the points lying on it.
    pub fn strict_transform(&self, j: usize) -> Result<NSClass> {
        if j == 0 || j > self.n {
            return Err(EngineError::IndexOutOfRange {
                index: j,
                max: self.n,
            });
        }
        let mut c = NSClass::exceptional(self.n, j)?;
        for i in self.children(j) {
            c = &c - &NSClass::exceptional(self.n, i)?;
        }
        Ok(c)
    }

    /// The curve classes backing every positivity test: strict transforms,
    /// the enumerated generic classes of self-intersection -1, and
    /// user-declared extras, deduplicated.
    ///
    /// The enumeration is complete only for points in general position; for
    /// special position the caller must declare the extra curves. Memoized.
    pub fn negative_curves(&self) -> Result<&CurveSet> {
        self.curves
            .get_or_init(|| self.compute_negative_curves())
            .as_ref()
            .map_err(|e| e.clone())
    }

    fn compute_negative_curves(&self) -> Result<CurveSet> {
        let n = self.n;
        if n > 8 && self.extra_curves.is_empty() {
            return Err(EngineError::EnumerationCap { n });
        }
        let mut seen: BTreeSet<Vec<Rat>> = BTreeSet::new();
        let mut classes: Vec<NSClass> = Vec::new();
        let mut push = |c: NSClass, classes: &mut Vec<NSClass>| {
            if seen.insert(c.coeffs().to_vec()) {
                classes.push(c);
            }
        };
        for j in 1..=n {
            push(self.strict_transform(j)?, &mut classes);
        }
        if n <= 8 {
            for c in minus_one_classes(n)? {
                push(c, &mut classes);
            }
            if n == 1 {
                // The second extremal ray of the effective cone of a single
                // blow-up is the ruling class H - Chat_1; for n >= 2 every
                // such class decomposes into enumerated ones.
                push(
                    &NSClass::hyperplane(1) - &NSClass::exceptional(1, 1)?,
                    &mut classes,
                );
            }
        }
        for c in &self.extra_curves {
            if c.n() != n {
                return Err(EngineError::DimensionMismatch {
                    left: c.n() + 1,
                    right: n + 1,
                });
            }
            push(c.clone(), &mut classes);
        }
        classes.sort_by(|a, b| {
            a.coeff_h()
                .cmp(b.coeff_h())
                .then_with(|| b.coeffs()[1..].cmp(&a.coeffs()[1..]))
        });
        Ok(CurveSet { classes })
    }

    /// The generator linear forms D -> D . c1(S_i) attached to a valid
    /// contraction set, memoized per set: membership queries evaluate these
    /// forms point after point and must not rebuild the generator list.
    pub fn generator_forms(&self, s: &ContractionSet) -> Result<Arc<Vec<NSClass>>> {
        if let Some(found) = self.forms.read().expect("forms lock").get(s.indices()) {
            return Ok(found.clone());
        }
        let computed: Vec<NSClass> = generators(self, s)?.into_iter().map(|g| g.ch.c1).collect();
        let arc = Arc::new(computed);
        self.forms
            .write()
            .expect("forms lock")
            .entry(s.indices().clone())
            .or_insert_with(|| arc.clone());
        Ok(arc)
    }

    /// Positivity test for omega pulled back from the contraction target:
    /// omega^2 > 0, omega.H > 0, and omega positive against every oracle
    /// curve that survives the contraction (classes inside the contracted
    /// span are skipped; by the projection formula they intersect trivially).
    pub fn is_ample_on_target(&self, omega: &NSClass, s: &ContractionSet) -> Result<bool> {
        self.positive_on_target(omega, s, true)
    }

    /// Closure variant: strict inequalities relaxed to non-strict (nef).
    pub fn is_nef_on_target(&self, omega: &NSClass, s: &ContractionSet) -> Result<bool> {
        self.positive_on_target(omega, s, false)
    }

    fn positive_on_target(
        &self,
        omega: &NSClass,
        s: &ContractionSet,
        strict: bool,
    ) -> Result<bool> {
        if omega.n() != self.n {
            return Err(EngineError::DimensionMismatch {
                left: omega.n() + 1,
                right: self.n + 1,
            });
        }
        for &i in s.indices() {
            if !omega.coeff_exc(i)?.is_zero() {
                return Err(EngineError::Orthogonality(format!(
                    "class {omega} has a Ĉ{i} component but {i} is contracted by {s}"
                )));
            }
        }
        let pos = |r: &Rat| {
            if strict {
                r.is_positive()
            } else {
                !r.is_negative()
            }
        };
        if !pos(omega.coeff_h()) {
            return Ok(false);
        }
        for c in self.negative_curves()?.iter() {
            if c.supported_on(s.indices()) {
                continue;
            }
            if !pos(&omega.dot(c)?) {
                return Ok(false);
            }
        }
        Ok(pos(&omega.square()))
    }
}

/// Integral classes dH - sum m_i Chat_i with square -1 and K-pairing -1,
/// by bounded search over the degree (d <= 6 suffices for n <= 8).
fn minus_one_classes(n: usize) -> Result<Vec<NSClass>> {
    if n > 8 {
        return Err(EngineError::EnumerationCap { n });
    }
    let mut out = Vec::new();
    for i in 1..=n {
        out.push(NSClass::exceptional(n, i)?);
    }
    let mut mults = vec![0i64; n];
    for d in 1..=6i64 {
        let sum = 3 * d - 1;
        let sq = d * d + 1;
        search_multiplicities(n, d, 0, sum, sq, &mut mults, &mut out);
    }
    Ok(out)
}

fn search_multiplicities(
    n: usize,
    d: i64,
    pos: usize,
    sum_left: i64,
    sq_left: i64,
    mults: &mut Vec<i64>,
    out: &mut Vec<NSClass>,
) {
    if pos == n {
        if sum_left == 0 && sq_left == 0 {
            let mut coeffs = vec![rat::int(d)];
            coeffs.extend(mults.iter().map(|&m| rat::int(-m)));
            out.push(NSClass::new(coeffs));
        }
        return;
    }
    if sum_left < 0 || sq_left < 0 {
        return;
    }
    let remaining = (n - pos) as i64;
    // each remaining multiplicity contributes at least sum^2/remaining to sq
    if sum_left * sum_left > sq_left * remaining {
        return;
    }
    for m in 0..=d.min(sum_left) {
        mults[pos] = m;
        search_multiplicities(n, d, pos + 1, sum_left - m, sq_left - m * m, mults, out);
    }
    mults[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::canonical_class;
    use crate::prng::SplitMix64;

    fn cfg_chain2() -> BlowUpConfig {
        // p_1 on C_2
        BlowUpConfig::new(2, BTreeMap::from([(1, BTreeSet::from([2]))]), vec![])
    }

    fn cfg_two_on_one() -> BlowUpConfig {
        // p_1 and p_2 both on C_3
        BlowUpConfig::new(
            3,
            BTreeMap::from([(1, BTreeSet::from([3])), (2, BTreeSet::from([3]))]),
            vec![],
        )
    }

    #[test]
    fn validate_legal_configurations() {
        assert!(cfg_two_on_one().violations().is_empty());
        assert!(cfg_chain2().violations().is_empty());
        assert!(BlowUpConfig::unrelated(0).violations().is_empty());
    }

    #[test]
    fn validate_chain_consistency() {
        // p_1 on C_2 and C_3 without 3 in on(2) is inconsistent
        let cfg = BlowUpConfig::new(3, BTreeMap::from([(1, BTreeSet::from([2, 3]))]), vec![]);
        let vs = cfg.violations();
        assert_eq!(vs.len(), 1);
        assert_eq!(vs[0].rule, Rule::CarrierChain);
        assert_eq!(vs[0].indices, vec![1, 2, 3]);

        // adding 3 to on(2) repairs it
        let cfg = BlowUpConfig::new(
            3,
            BTreeMap::from([(1, BTreeSet::from([2, 3])), (2, BTreeSet::from([3]))]),
            vec![],
        );
        assert!(cfg.violations().is_empty());
    }

    #[test]
    fn validate_order_count_range() {
        let cfg = BlowUpConfig::new(2, BTreeMap::from([(2, BTreeSet::from([1]))]), vec![]);
        assert!(cfg
            .violations()
            .iter()
            .any(|v| v.rule == Rule::CarrierOrder));
        let cfg = BlowUpConfig::new(2, BTreeMap::from([(1, BTreeSet::from([5]))]), vec![]);
        assert!(cfg
            .violations()
            .iter()
            .any(|v| v.rule == Rule::CarrierRange));
        let cfg = BlowUpConfig::new(
            5,
            BTreeMap::from([
                (1, BTreeSet::from([2, 3, 4])),
                (2, BTreeSet::from([3, 4])),
                (3, BTreeSet::from([4])),
            ]),
            vec![],
        );
        assert!(cfg
            .violations()
            .iter()
            .any(|v| v.rule == Rule::CarrierCount));
    }

    #[test]
    fn strict_transform_examples() {
        let cfg = cfg_chain2();
        assert_eq!(
            cfg.strict_transform(2).unwrap(),
            NSClass::from_integers(&[0, -1, 1])
        );
        let cfg = cfg_two_on_one();
        assert_eq!(
            cfg.strict_transform(3).unwrap(),
            NSClass::from_integers(&[0, -1, -1, 1])
        );
        let cfg = BlowUpConfig::unrelated(1);
        assert_eq!(
            cfg.strict_transform(1).unwrap(),
            NSClass::from_integers(&[0, 1])
        );
        assert!(cfg.strict_transform(2).is_err());
    }

    #[test]
    fn strict_transform_square_counts_children() {
        let cfg = cfg_two_on_one();
        for j in 1..=3 {
            let square = cfg.strict_transform(j).unwrap().square();
            let expected = -1 - cfg.children(j).len() as i64;
            assert_eq!(square, rat::int(expected));
        }
    }

    #[test]
    fn negative_curves_small_cases() {
        let cfg = BlowUpConfig::unrelated(1);
        let curves = cfg.negative_curves().unwrap();
        assert_eq!(
            curves.classes(),
            &[
                NSClass::from_integers(&[0, 1]),
                NSClass::from_integers(&[1, -1]),
            ]
        );

        let cfg = BlowUpConfig::unrelated(2);
        let curves = cfg.negative_curves().unwrap();
        assert_eq!(
            curves.classes(),
            &[
                NSClass::from_integers(&[0, 1, 0]),
                NSClass::from_integers(&[0, 0, 1]),
                NSClass::from_integers(&[1, -1, -1]),
            ]
        );

        let cfg = BlowUpConfig::unrelated(0);
        assert!(cfg.negative_curves().unwrap().is_empty());
    }

    #[test]
    fn minus_one_class_counts() {
        // classic counts for general position: 27 lines on the cubic surface,
        // 240 classes at n = 8
        assert_eq!(minus_one_classes(6).unwrap().len(), 27);
        assert_eq!(minus_one_classes(8).unwrap().len(), 240);
    }

    #[test]
    fn minus_one_class_invariants() {
        for n in 1..=6 {
            let k = canonical_class(n);
            for c in minus_one_classes(n).unwrap() {
                assert!(c.is_integral());
                assert_eq!(c.square(), rat::int(-1));
                assert_eq!(c.dot(&k).unwrap(), rat::int(-1));
            }
        }
    }

    #[test]
    fn enumeration_cap() {
        let cfg = BlowUpConfig::unrelated(9);
        assert!(matches!(
            cfg.negative_curves(),
            Err(EngineError::EnumerationCap { n: 9 })
        ));
    }

    #[test]
    fn ample_examples_one_point() {
        let cfg = BlowUpConfig::unrelated(1);
        let s1 = ContractionSet::from_indices(&[1]);
        let s0 = ContractionSet::empty();
        // x H with x > 0 is ample on the plane target
        assert!(cfg
            .is_ample_on_target(&NSClass::from_integers(&[3, 0]), &s1)
            .unwrap());
        // 2H - Chat_1 is ample on the blown-up surface
        assert!(cfg
            .is_ample_on_target(&NSClass::from_integers(&[2, -1]), &s0)
            .unwrap());
        // positive Chat_1 coefficient leaves the ample cone
        assert!(!cfg
            .is_ample_on_target(&NSClass::from_integers(&[1, 1]), &s0)
            .unwrap());
        // orthogonality precondition
        assert!(cfg
            .is_ample_on_target(&NSClass::from_integers(&[1, 1]), &s1)
            .is_err());
    }

    #[test]
    fn ample_cone_of_one_point_blowup_exact() {
        // {xH + yChat_1 : x > 0, -x < y < 0} on a rational grid, both inclusions
        let cfg = BlowUpConfig::unrelated(1);
        let s0 = ContractionSet::empty();
        for xi in -12i64..=12 {
            for yi in -12i64..=12 {
                let (x, y) = (rat::frac(xi, 3), rat::frac(yi, 3));
                let omega = NSClass::new(vec![x.clone(), y.clone()]);
                let expected = x.is_positive() && y.is_negative() && (&x + &y).is_positive();
                assert_eq!(
                    cfg.is_ample_on_target(&omega, &s0).unwrap(),
                    expected,
                    "x={} y={}",
                    rat::display(&x),
                    rat::display(&y)
                );
            }
        }
    }

    #[test]
    fn declared_collinear_line_shrinks_the_ample_cone() {
        // three collinear points: the line through them is an effective
        // class of square -2 that the generic enumeration cannot know about
        let line = NSClass::from_integers(&[1, -1, -1, -1]);
        let generic = BlowUpConfig::unrelated(3);
        let special = BlowUpConfig::new(3, BTreeMap::new(), vec![line.clone()]);
        assert!(special.negative_curves().unwrap().classes().contains(&line));

        let s0 = ContractionSet::empty();
        // positive against every generic curve but zero against the line
        let omega = NSClass::from_integers(&[3, -1, -1, -1]);
        assert!(generic.is_ample_on_target(&omega, &s0).unwrap());
        assert!(!special.is_ample_on_target(&omega, &s0).unwrap());
        // far enough from the line's wall both agree
        let omega = NSClass::from_integers(&[4, -1, -1, -1]);
        assert!(generic.is_ample_on_target(&omega, &s0).unwrap());
        assert!(special.is_ample_on_target(&omega, &s0).unwrap());
    }

    #[test]
    fn large_configurations_require_declared_curves() {
        let mut coeffs = vec![1i64; 10];
        coeffs[0] = 1;
        for c in coeffs.iter_mut().skip(1) {
            *c = -1;
        }
        // n = 9 with a declared curve list skips the enumeration branch
        let declared = BlowUpConfig::new(9, BTreeMap::new(), vec![NSClass::from_integers(&coeffs)]);
        let curves = declared.negative_curves().unwrap();
        // nine strict transforms plus the declared class
        assert_eq!(curves.len(), 10);
    }

    #[test]
    fn ampleness_is_scale_invariant() {
        let cfg = cfg_two_on_one();
        let s0 = ContractionSet::empty();
        let mut rng = SplitMix64::new(5);
        for _ in 0..40 {
            let omega = NSClass::new((0..=3).map(|_| rng.rat_in(6, &[1, 2, 3])).collect());
            let lambda = rat::frac(1 + rng.below(9) as i64, 1 + rng.below(9) as i64);
            assert_eq!(
                cfg.is_ample_on_target(&omega, &s0).unwrap(),
                cfg.is_ample_on_target(&omega.scale(&lambda), &s0).unwrap()
            );
        }
    }
}
