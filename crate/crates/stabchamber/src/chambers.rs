//! Chamber geometry.
//!
//! Each valid contraction set S cuts out an open chamber in the class space:
//! the classes omega + D where omega is ample on the target surface, D lives
//! on the contracted span with every generator form positive, and the total
//! square stays positive. Chambers attached to sets differing by one type-I
//! index share a codimension-one facet; crossing it removes or restores a
//! point blow-up. Everything here is decided in exact rational arithmetic;
//! chambers are predicates plus symbolic inequality lists, never vertex
//! enumerations.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::configuration::BlowUpConfig;
use crate::contractions::{
    all_contractions, blowdown_successors, classify, generators, require_valid, ContractionSet,
    GeneratorKind,
};
use crate::error::{EngineError, Result};
use crate::lattice::{split, NSClass};
use crate::rat::{self, Rat};

/// Symbolic membership data for one chamber: the set, the generator linear
/// forms (paired with their index), and implicitly the ample and square
/// conditions.
#[derive(Debug, Clone)]
pub struct ChamberSpec {
    s: ContractionSet,
    forms: Vec<(usize, NSClass)>,
}

impl ChamberSpec {
    /// Builds the membership data and verifies symbolically that on the contracted span
    /// the i-th form reads t_i (type I) or t_i - t_kappa (type II) in the
    /// coordinates D = sum t_i Chat_i.
    pub fn new(cfg: &BlowUpConfig, s: &ContractionSet) -> Result<Self> {
        let gens = generators(cfg, s)?;
        let mut forms = Vec::with_capacity(gens.len());
        for g in &gens {
            for l in s.iter() {
                let basis = NSClass::exceptional(cfg.n(), l)?;
                let coefficient = basis.dot(&g.ch.c1)?;
                let expected = match (g.kind, g.kappa) {
                    (GeneratorKind::TypeI, _) => {
                        if l == g.index {
                            rat::one()
                        } else {
                            rat::zero()
                        }
                    }
                    (GeneratorKind::TypeII, Some(k)) => {
                        if l == g.index {
                            rat::one()
                        } else if l == k {
                            rat::int(-1)
                        } else {
                            rat::zero()
                        }
                    }
                    (GeneratorKind::TypeII, None) => unreachable!("type II carries kappa"),
                };
                if coefficient != expected {
                    return Err(EngineError::Domain(format!(
                        "coordinate form of generator {} disagrees with its type at Ĉ{l}",
                        g.index
                    )));
                }
            }
            forms.push((g.index, g.ch.c1.clone()));
        }
        Ok(ChamberSpec {
            s: s.clone(),
            forms,
        })
    }

    pub fn contraction(&self) -> &ContractionSet {
        &self.s
    }

    /// The linear forms D -> D . c1(S_i), keyed by generator index.
    pub fn forms(&self) -> &[(usize, NSClass)] {
        &self.forms
    }

    /// Membership through the chamber's own data: ample omega-part, all
    /// stored forms positive, and alpha^2 > 0. Equivalent to
    /// [`a_dagger_contains`] because alpha^2 = omega^2 + D^2 across the
    /// orthogonal split.
    pub fn contains(&self, cfg: &BlowUpConfig, alpha: &NSClass) -> Result<bool> {
        let (omega, d) = split(alpha, self.s.indices())?;
        if !cfg.is_ample_on_target(&omega, &self.s)? {
            return Ok(false);
        }
        for (_, form) in &self.forms {
            if !d.dot(form)?.is_positive() {
                return Ok(false);
            }
        }
        Ok(alpha.square().is_positive())
    }
}

/// D lies in the polyhedral fiber region iff every generator form is
/// positive on D and D^2 + k > 0.
pub fn c_fk_contains(cfg: &BlowUpConfig, s: &ContractionSet, d: &NSClass, k: &Rat) -> Result<bool> {
    if !k.is_positive() {
        return Err(EngineError::Argument(format!(
            "the radius parameter must be positive, got {}",
            rat::display(k)
        )));
    }
    if !d.supported_on(s.indices()) {
        return Err(EngineError::UnsupportedDivisor {
            set: s.to_string(),
            class: d.to_string(),
        });
    }
    for form in cfg.generator_forms(s)?.iter() {
        if !d.dot(form)?.is_positive() {
            return Ok(false);
        }
    }
    Ok((d.square() + k).is_positive())
}

/// Open-chamber membership: split alpha over S, demand an ample omega-part
/// and a D-part inside the fiber region of radius omega^2. The positivity of
/// alpha^2 = omega^2 + D^2 is implied.
pub fn a_dagger_contains(cfg: &BlowUpConfig, s: &ContractionSet, alpha: &NSClass) -> Result<bool> {
    require_valid(cfg, s)?;
    let (omega, d) = split(alpha, s.indices())?;
    if !cfg.is_ample_on_target(&omega, s)? {
        return Ok(false);
    }
    c_fk_contains(cfg, s, &d, &omega.square())
}

/// Closure membership: ample relaxed to nef, strict inequalities to
/// non-strict.
pub fn closure_contains(cfg: &BlowUpConfig, s: &ContractionSet, alpha: &NSClass) -> Result<bool> {
    require_valid(cfg, s)?;
    let (omega, d) = split(alpha, s.indices())?;
    if !cfg.is_nef_on_target(&omega, s)? {
        return Ok(false);
    }
    for form in cfg.generator_forms(s)?.iter() {
        if d.dot(form)?.is_negative() {
            return Ok(false);
        }
    }
    Ok(!(&d.square() + &omega.square()).is_negative())
}

/// Membership in the open facet between the chambers of S and S \ {j}: the
/// pivot coordinate vanishes, the omega-part is ample on the smaller target,
/// and the rest of the D-part sits strictly inside the lower fiber region.
pub fn facet_contains(
    cfg: &BlowUpConfig,
    s: &ContractionSet,
    pivot: usize,
    alpha: &NSClass,
) -> Result<bool> {
    require_pivot(cfg, s, pivot)?;
    let (omega, d) = split(alpha, s.indices())?;
    if !d.coeff_exc(pivot)?.is_zero() {
        return Ok(false);
    }
    if !cfg.is_ample_on_target(&omega, s)? {
        return Ok(false);
    }
    c_fk_contains(cfg, &s.without(pivot), &d, &omega.square())
}

fn require_pivot(cfg: &BlowUpConfig, s: &ContractionSet, pivot: usize) -> Result<()> {
    match classify(cfg, s, pivot)? {
        (GeneratorKind::TypeI, _) => Ok(()),
        (GeneratorKind::TypeII, Some(kappa)) => Err(EngineError::PivotNotTypeI {
            index: pivot,
            kappa,
        }),
        _ => unreachable!(),
    }
}

/// A codimension-one wall between two chambers related by one point
/// blow-up, with a rational facet witness and its two chamber-interior
/// perturbations.
#[derive(Debug, Clone)]
pub struct Wall {
    pub lower: ContractionSet,
    pub upper: ContractionSet,
    pub pivot: usize,
    pub eps: Rat,
    /// Rational point on the open facet.
    pub witness: NSClass,
    /// witness + eps Chat_pivot, inside the upper chamber.
    pub upper_witness: NSClass,
    /// witness - eps Chat_pivot, inside the lower chamber.
    pub lower_witness: NSClass,
}

impl Wall {
    pub fn contains(&self, cfg: &BlowUpConfig, alpha: &NSClass) -> Result<bool> {
        facet_contains(cfg, &self.upper, self.pivot, alpha)
    }
}

/// Deterministic rational ample class on the target of S: the hyperplane
/// class minus geometrically nested weights on the surviving exceptional
/// indices, shrunk until the positivity oracle accepts it.
pub fn ample_witness(cfg: &BlowUpConfig, s: &ContractionSet) -> Result<NSClass> {
    require_valid(cfg, s)?;
    let n = cfg.n();
    let survivors: Vec<usize> = (1..=n).filter(|i| !s.contains(*i)).collect();
    let mut t = rat::frac(1, n as i64 + 2);
    for _ in 0..64 {
        let mut omega = NSClass::hyperplane(n);
        for &i in &survivors {
            let weight = pow_rat(&t, (n + 1 - i) as u32);
            omega = &omega - &NSClass::exceptional(n, i)?.scale(&weight);
        }
        if cfg.is_ample_on_target(&omega, s)? {
            return Ok(omega);
        }
        t /= rat::int(2);
    }
    Err(EngineError::WitnessSearch {
        set: s.to_string(),
        reason: "no ample class found in the nested-weight family; \
                 declared extra curves may exclude it"
            .to_string(),
    })
}

fn pow_rat(r: &Rat, e: u32) -> Rat {
    let mut out = rat::one();
    for _ in 0..e {
        out *= r;
    }
    out
}

/// Deterministic rational point in the open chamber of S.
pub fn chamber_witness(cfg: &BlowUpConfig, s: &ContractionSet) -> Result<NSClass> {
    let omega = ample_witness(cfg, s)?;
    let d = fiber_witness(cfg, s, &omega.square())?;
    let alpha = &omega + &d;
    debug_assert!(a_dagger_contains(cfg, s, &alpha)?);
    Ok(alpha)
}

/// Point of the fiber region of radius k over S: strictly decreasing
/// coordinates satisfy both type-I and type-II forms, scaled until the
/// square condition holds.
fn fiber_witness(cfg: &BlowUpConfig, s: &ContractionSet, k: &Rat) -> Result<NSClass> {
    let n = cfg.n();
    if s.is_empty() {
        return Ok(NSClass::zero(n));
    }
    let mut sum_squares = rat::zero();
    for i in s.iter() {
        let c = rat::int((n + 1 - i) as i64);
        sum_squares += &c * &c;
    }
    let mut rho = rat::frac(1, 2);
    for _ in 0..512 {
        if (&rho * &rho * &sum_squares) < *k {
            let mut d = NSClass::zero(n);
            for i in s.iter() {
                let weight = &rho * rat::int((n + 1 - i) as i64);
                d = &d + &NSClass::exceptional(n, i)?.scale(&weight);
            }
            return Ok(d);
        }
        rho /= rat::int(2);
    }
    Err(EngineError::WitnessSearch {
        set: s.to_string(),
        reason: "fiber radius underflow".to_string(),
    })
}

/// The wall attached to removing a type-I pivot from S. The witness is a
/// rational facet point; the two perturbations along the pivot direction are
/// verified to land in exactly one open chamber each, scaling the witness
/// until the margin beats eps.
pub fn wall(cfg: &BlowUpConfig, s: &ContractionSet, pivot: usize, eps: &Rat) -> Result<Wall> {
    require_pivot(cfg, s, pivot)?;
    if !eps.is_positive() {
        return Err(EngineError::Argument(format!(
            "eps must be positive, got {}",
            rat::display(eps)
        )));
    }
    let lower = s.without(pivot);
    let omega = ample_witness(cfg, s)?;
    let d = fiber_witness(cfg, &lower, &omega.square())?;
    let base = &omega + &d;
    let direction = NSClass::exceptional(cfg.n(), pivot)?;
    let nodes = all_contractions(cfg)?;
    let mut scale = rat::one();
    for _ in 0..40 {
        let witness = base.scale(&scale);
        let upper_witness = &witness + &direction.scale(eps);
        let lower_witness = &witness - &direction.scale(eps);
        if facet_contains(cfg, s, pivot, &witness)?
            && in_exactly(cfg, &nodes, &upper_witness, s)?
            && in_exactly(cfg, &nodes, &lower_witness, &lower)?
        {
            return Ok(Wall {
                lower,
                upper: s.clone(),
                pivot,
                eps: eps.clone(),
                witness,
                upper_witness,
                lower_witness,
            });
        }
        scale *= rat::int(4);
    }
    Err(EngineError::WitnessSearch {
        set: s.to_string(),
        reason: format!(
            "perturbations by eps = {} never separated cleanly",
            rat::display(eps)
        ),
    })
}

fn in_exactly(
    cfg: &BlowUpConfig,
    nodes: &[ContractionSet],
    alpha: &NSClass,
    target: &ContractionSet,
) -> Result<bool> {
    for s in nodes {
        let inside = a_dagger_contains(cfg, s, alpha)?;
        if inside != (s == target) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All chambers and all single-blow-down walls between them.
#[derive(Debug, Clone)]
pub struct ChamberGraph {
    pub nodes: Vec<ContractionSet>,
    pub edges: Vec<Wall>,
}

pub fn chamber_graph(cfg: &BlowUpConfig, eps: &Rat) -> Result<ChamberGraph> {
    let nodes = all_contractions(cfg)?;
    let mut edges = Vec::new();
    for s in &nodes {
        for (pivot, _) in blowdown_successors(cfg, s)? {
            edges.push(wall(cfg, s, pivot, eps)?);
        }
    }
    edges.sort_by(|a, b| a.upper.cmp(&b.upper).then(a.pivot.cmp(&b.pivot)));
    Ok(ChamberGraph { nodes, edges })
}

/// Identifier of a facet, small enough to embed in reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallId {
    pub lower: ContractionSet,
    pub upper: ContractionSet,
    pub pivot: usize,
}

/// Verdict of point location: the chambers containing alpha, the facets
/// containing it, or neither. Boundary points report as walls, never as
/// chamber members.
#[derive(Debug, Clone)]
pub struct Location {
    pub chambers: Vec<ContractionSet>,
    pub walls: Vec<WallId>,
    pub outside: bool,
}

pub fn locate(cfg: &BlowUpConfig, alpha: &NSClass) -> Result<Location> {
    let mut chambers = Vec::new();
    let mut walls = Vec::new();
    for s in all_contractions(cfg)? {
        if a_dagger_contains(cfg, &s, alpha)? {
            chambers.push(s.clone());
        }
        for (pivot, lower) in blowdown_successors(cfg, &s)? {
            if facet_contains(cfg, &s, pivot, alpha)? {
                walls.push(WallId {
                    lower,
                    upper: s.clone(),
                    pivot,
                });
            }
        }
    }
    let outside = chambers.is_empty() && walls.is_empty();
    Ok(Location {
        chambers,
        walls,
        outside,
    })
}

/// Per-point verdict on a planar slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    /// Index into the legend (the node list of the graph).
    Chamber(usize),
    Wall,
    Outside,
    /// Two open chambers claimed the point; reported, never silently merged.
    Overlap,
}

/// Region map of the affine plane origin + a u + b v over the symmetric
/// window |a|, |b| <= window, sampled at grid x grid cell centers. Row 0
/// holds the largest b (image order).
#[derive(Debug, Clone)]
pub struct SliceMap {
    pub origin: NSClass,
    pub u: NSClass,
    pub v: NSClass,
    pub grid: usize,
    pub window: Rat,
    pub legend: Vec<ContractionSet>,
    pub cells: Vec<Vec<Cell>>,
    pub axis: Vec<Rat>,
}

/// Cell-center coordinate for index i of k over the window [-w, w].
pub fn grid_coordinate(i: usize, k: usize, w: &Rat) -> Rat {
    // -w + 2w (2i + 1) / (2k)
    let step = Rat::new(BigInt::from(2 * i as i64 + 1), BigInt::from(2 * k as i64));
    -w + w * rat::int(2) * step
}

pub fn slice(
    cfg: &BlowUpConfig,
    origin: &NSClass,
    u: &NSClass,
    v: &NSClass,
    grid: usize,
    window: &Rat,
) -> Result<SliceMap> {
    if grid == 0 {
        return Err(EngineError::Argument("grid must be at least 1".to_string()));
    }
    if !window.is_positive() {
        return Err(EngineError::Argument("window must be positive".to_string()));
    }
    require_independent(u, v)?;
    let legend = all_contractions(cfg)?;
    let axis: Vec<Rat> = (0..grid)
        .map(|i| grid_coordinate(i, grid, window))
        .collect();
    let mut cells = Vec::with_capacity(grid);
    for row in 0..grid {
        let b = &axis[grid - 1 - row];
        let mut line = Vec::with_capacity(grid);
        for a in &axis {
            let alpha = &(origin + &u.scale(a)) + &v.scale(b);
            line.push(classify_point(cfg, &legend, &alpha)?);
        }
        cells.push(line);
    }
    Ok(SliceMap {
        origin: origin.clone(),
        u: u.clone(),
        v: v.clone(),
        grid,
        window: window.clone(),
        legend,
        cells,
        axis,
    })
}

fn classify_point(cfg: &BlowUpConfig, legend: &[ContractionSet], alpha: &NSClass) -> Result<Cell> {
    let loc = locate(cfg, alpha)?;
    match loc.chambers.len() {
        0 if !loc.walls.is_empty() => Ok(Cell::Wall),
        0 => Ok(Cell::Outside),
        1 => {
            let idx = legend
                .iter()
                .position(|s| s == &loc.chambers[0])
                .expect("legend lists every chamber");
            Ok(Cell::Chamber(idx))
        }
        _ => Ok(Cell::Overlap),
    }
}

/// The slice basis must span as much as the ambient space allows: a plane
/// when n >= 1, at least a line in the one-dimensional n = 0 case (where a
/// second independent direction cannot exist and the picture degenerates to
/// stripes by design).
fn require_independent(u: &NSClass, v: &NSClass) -> Result<()> {
    if u.n() != v.n() {
        return Err(EngineError::DimensionMismatch {
            left: u.n() + 1,
            right: v.n() + 1,
        });
    }
    if u.n() == 0 {
        if u.is_zero() && v.is_zero() {
            return Err(EngineError::DegenerateBasis);
        }
        return Ok(());
    }
    let coords_u = u.coeffs();
    let coords_v = v.coeffs();
    for i in 0..coords_u.len() {
        for j in (i + 1)..coords_u.len() {
            if !(&coords_u[i] * &coords_v[j] - &coords_u[j] * &coords_v[i]).is_zero() {
                return Ok(());
            }
        }
    }
    Err(EngineError::DegenerateBasis)
}

/// Vertex of the minimal-model path: alternating chamber interiors and wall
/// crossings.
#[derive(Debug, Clone)]
pub enum PathVertex {
    Chamber { s: ContractionSet, point: NSClass },
    Wall { id: WallId, point: NSClass },
}

impl PathVertex {
    pub fn point(&self) -> &NSClass {
        match self {
            PathVertex::Chamber { point, .. } | PathVertex::Wall { point, .. } => point,
        }
    }
}

/// Piecewise-linear path through the chamber chain of the full contraction
/// tower {} -> {1} -> {1,2} -> ... -> {1..n}: chamber witnesses joined
/// through the corresponding wall witnesses. Chambers are convex (every
/// defining condition is linear or a positive-cone component), so each
/// segment stays inside its chamber and crossings happen exactly at the wall
/// vertices.
pub fn mmp_path(cfg: &BlowUpConfig, eps: &Rat) -> Result<Vec<PathVertex>> {
    let n = cfg.n();
    let mut vertices = Vec::with_capacity(2 * n + 1);
    let mut current = ContractionSet::empty();
    vertices.push(PathVertex::Chamber {
        point: chamber_witness(cfg, &current)?,
        s: current.clone(),
    });
    for k in 1..=n {
        let next = ContractionSet::from_indices(&(1..=k).collect::<Vec<_>>());
        let w = wall(cfg, &next, k, eps)?;
        vertices.push(PathVertex::Wall {
            id: WallId {
                lower: current.clone(),
                upper: next.clone(),
                pivot: k,
            },
            point: w.witness.clone(),
        });
        vertices.push(PathVertex::Chamber {
            point: chamber_witness(cfg, &next)?,
            s: next.clone(),
        });
        current = next;
    }
    verify_path_segments(cfg, &vertices)?;
    Ok(vertices)
}

/// Spot-check that interior samples of every path segment stay in the
/// expected chamber. Convexity guarantees it; declared extra curves could
/// break the witnesses, and a wrong path must fail loudly.
fn verify_path_segments(cfg: &BlowUpConfig, vertices: &[PathVertex]) -> Result<()> {
    for (k, pair) in vertices.windows(2).enumerate() {
        let expected = match pair {
            [PathVertex::Chamber { s, .. }, PathVertex::Wall { .. }]
            | [PathVertex::Wall { .. }, PathVertex::Chamber { s, .. }] => s,
            _ => unreachable!("path alternates chambers and walls"),
        };
        let (a, b) = (pair[0].point(), pair[1].point());
        for num in 1..4i64 {
            let t = rat::frac(num, 4);
            let sample = a + &(b - a).scale(&t);
            if !a_dagger_contains(cfg, expected, &sample)? {
                return Err(EngineError::WitnessSearch {
                    set: expected.to_string(),
                    reason: format!("path segment {k} leaves its chamber at parameter {num}/4"),
                });
            }
        }
    }
    Ok(())
}

/// Symbolic description of a chamber restricted to the plane a u + b v: the
/// strict linear forms (p, q) meaning p a + q b > 0 in primitive integer
/// coordinates, plus the quadratic square form (A, B, C) for
/// A a^2 + B ab + C b^2 > 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneDescription {
    pub linear: Vec<(BigInt, BigInt)>,
    pub quadratic: (Rat, Rat, Rat),
}

pub fn plane_description(
    cfg: &BlowUpConfig,
    s: &ContractionSet,
    u: &NSClass,
    v: &NSClass,
) -> Result<PlaneDescription> {
    require_valid(cfg, s)?;
    require_independent(u, v)?;
    let (u_omega, u_d) = split(u, s.indices())?;
    let (v_omega, v_d) = split(v, s.indices())?;
    let mut linear = Vec::new();
    let h = NSClass::hyperplane(cfg.n());
    linear.push((u_omega.dot(&h)?, v_omega.dot(&h)?));
    for c in cfg.negative_curves()?.iter() {
        if c.supported_on(s.indices()) {
            continue;
        }
        linear.push((u_omega.dot(c)?, v_omega.dot(c)?));
    }
    for g in generators(cfg, s)? {
        linear.push((u_d.dot(&g.ch.c1)?, v_d.dot(&g.ch.c1)?));
    }
    let linear = canonical_forms(&linear);
    let quadratic = (u.square(), rat::int(2) * u.dot(v)?, v.square());
    Ok(PlaneDescription { linear, quadratic })
}

/// Scale each rational form to a primitive integer vector, preserving the
/// inequality direction, and deduplicate.
fn canonical_forms(forms: &[(Rat, Rat)]) -> Vec<(BigInt, BigInt)> {
    use std::collections::BTreeSet;
    let mut set: BTreeSet<(BigInt, BigInt)> = BTreeSet::new();
    for (p, q) in forms {
        if p.is_zero() && q.is_zero() {
            continue;
        }
        set.insert(primitive(p, q));
    }
    set.into_iter().collect()
}

/// Attempt to absorb the quadratic form into the linear ones: factor it as a
/// product of two rational linear forms, and if one factor already lies in
/// the cone spanned by the strict forms (hence is implied), replace the
/// quadratic by the other factor. Returns the reduced linear set and whether
/// the quadratic was absorbed.
pub fn reduce_plane_description(desc: &PlaneDescription) -> (Vec<(BigInt, BigInt)>, bool) {
    let mut linear = desc.linear.clone();
    let Some((f1, f2)) = factor_quadratic(&desc.quadratic) else {
        return (linear, false);
    };
    for (implied, kept) in [(&f1, &f2), (&f2, &f1)] {
        for sign in [1i64, -1] {
            let implied_signed = (&implied.0 * sign, &implied.1 * sign);
            let kept_signed = (&kept.0 * sign, &kept.1 * sign);
            if in_plane_cone(&implied_signed, &linear) {
                if !in_plane_cone(&kept_signed, &linear) {
                    linear.push(kept_signed);
                    linear.sort();
                    linear.dedup();
                }
                return (linear, true);
            }
        }
    }
    (linear, false)
}

/// Factor A a^2 + B ab + C b^2 into two primitive integer linear forms whose
/// product is a positive multiple of the quadratic, when the discriminant is
/// a rational square.
fn factor_quadratic(q: &(Rat, Rat, Rat)) -> Option<((BigInt, BigInt), (BigInt, BigInt))> {
    let (a, b, c) = q;
    let disc = b * b - rat::int(4) * a * c;
    if disc.is_negative() {
        return None;
    }
    if a.is_zero() {
        // B ab + C b^2 = b (B a + C b)
        if b.is_zero() {
            return None;
        }
        return Some((primitive(&rat::zero(), &rat::one()), primitive(b, c)));
    }
    let root = rat_sqrt(&disc)?;
    // A (a - r1 b)(a - r2 b) with r = (-B +- root) / (2A); fold the sign of A
    // into the first factor so the product matches the quadratic's sign.
    let two_a = rat::int(2) * a;
    let r1 = (-b + &root) / &two_a;
    let r2 = (-b - &root) / &two_a;
    let f1 = primitive(&rat::one(), &-r1);
    let f2 = primitive(&rat::one(), &-r2);
    if a.is_negative() {
        return Some(((-&f1.0, -&f1.1), f2));
    }
    Some((f1, f2))
}

fn primitive(p: &Rat, q: &Rat) -> (BigInt, BigInt) {
    let denom_lcm = num_integer::lcm(p.denom().clone(), q.denom().clone());
    let pi = p.numer() * (&denom_lcm / p.denom());
    let qi = q.numer() * (&denom_lcm / q.denom());
    if pi.is_zero() && qi.is_zero() {
        return (pi, qi);
    }
    let g = num_integer::gcd(pi.clone(), qi.clone());
    (pi / &g, qi / &g)
}

/// Exact square root of a non-negative rational, if one exists.
fn rat_sqrt(r: &Rat) -> Option<Rat> {
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    if &(&num * &num) == r.numer() && &(&den * &den) == r.denom() {
        Some(Rat::new(num, den))
    } else {
        None
    }
}

/// Exact 2D cone membership: g is a non-negative combination of the listed
/// forms. By Caratheodory two generators suffice in the plane.
pub fn in_plane_cone(g: &(BigInt, BigInt), forms: &[(BigInt, BigInt)]) -> bool {
    let cross =
        |x: &(BigInt, BigInt), y: &(BigInt, BigInt)| -> BigInt { &x.0 * &y.1 - &x.1 * &y.0 };
    let dot = |x: &(BigInt, BigInt), y: &(BigInt, BigInt)| -> BigInt { &x.0 * &y.0 + &x.1 * &y.1 };
    if g.0.is_zero() && g.1.is_zero() {
        return true;
    }
    for f in forms {
        if cross(f, g).is_zero() && dot(f, g).is_positive() {
            return true;
        }
    }
    for (i, f1) in forms.iter().enumerate() {
        for f2 in &forms[i + 1..] {
            let det = cross(f1, f2);
            if det.is_zero() {
                continue;
            }
            // g = lambda f1 + mu f2; signs of the Cramer numerators against det
            let lambda_num = cross(g, f2);
            let mu_num = cross(f1, g);
            let lambda_ok = lambda_num.is_zero() || lambda_num.sign() == det.sign();
            let mu_ok = mu_num.is_zero() || mu_num.sign() == det.sign();
            if lambda_ok && mu_ok {
                return true;
            }
        }
    }
    false
}
