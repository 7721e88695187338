//! Central charges, phases, moduli identification and support-property
//! quantities.
//!
//! The charge of a class (r, c1, ch2) at a polarization alpha is
//! -ch2 + (alpha^2/2) r + i (c1 . alpha). Phases are compared through exact
//! sign tests on the real and imaginary parts; floating point appears only
//! in reported angle values.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_traits::{Signed, Zero};

use crate::chambers::{locate, Location, WallId};
use crate::configuration::BlowUpConfig;
use crate::contractions::{generators, require_valid, ContractionSet};
use crate::error::{EngineError, Result};
use crate::lattice::{split, ChernCharacter, NSClass};
use crate::rat::{self, Rat};

/// Exact complex value of a central charge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeValue {
    pub re: Rat,
    pub im: Rat,
}

impl ChargeValue {
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Inside the closed upper half plane slit along the positive real axis:
    /// im > 0, or im = 0 with re < 0.
    pub fn in_upper_slit(&self) -> bool {
        self.im.is_positive() || (self.im.is_zero() && self.re.is_negative())
    }
}

impl std::fmt::Display for ChargeValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} + {}i",
            rat::display(&self.re),
            rat::display(&self.im)
        )
    }
}

/// Charge of `ch` at the polarization class `alpha`:
/// re = -ch2 + (alpha^2 / 2) rank, im = c1 . alpha.
pub fn z_eval(ch: &ChernCharacter, alpha: &NSClass) -> Result<ChargeValue> {
    let re = -&ch.ch2 + alpha.square() / rat::int(2) * rat::int(ch.rank);
    let im = ch.c1.dot(alpha)?;
    Ok(ChargeValue { re, im })
}

/// Charge on the contraction target: the plain charge at omega shifted by
/// (D^2 / 2) rank in the real part. Requires omega orthogonal to D.
pub fn z_target(ch: &ChernCharacter, omega: &NSClass, d: &NSClass) -> Result<ChargeValue> {
    if !omega.dot(d)?.is_zero() {
        return Err(EngineError::Orthogonality(format!(
            "omega = {omega} and D = {d} are not orthogonal"
        )));
    }
    let mut z = z_eval(ch, omega)?;
    z.re += d.square() / rat::int(2) * rat::int(ch.rank);
    Ok(z)
}

/// Phase in (0, 1]: arg(z) / pi for charges inside the upper half slit.
pub fn phase(z: &ChargeValue) -> Result<f64> {
    if z.is_zero() || !z.in_upper_slit() {
        return Err(EngineError::Positivity { z: z.to_string() });
    }
    if z.im.is_zero() {
        return Ok(1.0);
    }
    Ok(rat::to_f64(&z.im).atan2(rat::to_f64(&z.re)) / PI)
}

/// Exact phase comparison for charges in the upper half slit: the cross
/// product re1 im2 - im1 re2 is positive iff z2 has the larger phase.
pub fn phase_less(z1: &ChargeValue, z2: &ChargeValue) -> bool {
    (&z1.re * &z2.im - &z1.im * &z2.re).is_positive()
}

/// Extremal phases of the generator charges at D; every non-negative
/// combination of generators lands inside [theta, theta_prime].
#[derive(Debug, Clone)]
pub struct PhaseCone {
    pub theta: f64,
    pub theta_prime: f64,
    pub min_charge: ChargeValue,
    pub max_charge: ChargeValue,
}

pub fn phase_cone(cfg: &BlowUpConfig, s: &ContractionSet, d: &NSClass) -> Result<PhaseCone> {
    let gens = generators(cfg, s)?;
    if gens.is_empty() {
        return Err(EngineError::EmptyGenerators);
    }
    let mut min: Option<ChargeValue> = None;
    let mut max: Option<ChargeValue> = None;
    for g in &gens {
        let z = z_eval(&g.ch, d)?;
        if !z.im.is_positive() {
            return Err(EngineError::Positivity { z: z.to_string() });
        }
        if min.as_ref().is_none_or(|m| phase_less(&z, m)) {
            min = Some(z.clone());
        }
        if max.as_ref().is_none_or(|m| phase_less(m, &z)) {
            max = Some(z);
        }
    }
    let (min_charge, max_charge) = (min.unwrap(), max.unwrap());
    Ok(PhaseCone {
        theta: phase(&min_charge)?,
        theta_prime: phase(&max_charge)?,
        min_charge,
        max_charge,
    })
}

/// Where the moduli of the skyscraper class lives for a polarization alpha.
#[derive(Debug, Clone)]
pub enum ModuliVerdict {
    /// alpha sits in the chamber of S; the moduli surface is its target.
    Surface {
        s: ContractionSet,
        descriptor: SurfaceDescriptor,
    },
    /// alpha lies on one or more walls.
    Wall { walls: Vec<WallId> },
    /// alpha lies in no chamber and on no wall.
    Outside,
    /// alpha claimed by several open chambers; reported, never resolved
    /// silently.
    Overlap { chambers: Vec<ContractionSet> },
}

/// The contraction target described as a blow-up datum of its own: the plane
/// blown up at the surviving indices with the induced incidence relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceDescriptor {
    pub label: String,
    pub remaining: Vec<usize>,
    pub induced_on: BTreeMap<usize, Vec<usize>>,
}

pub fn surface_descriptor(cfg: &BlowUpConfig, s: &ContractionSet) -> SurfaceDescriptor {
    let remaining: Vec<usize> = (1..=cfg.n()).filter(|i| !s.contains(*i)).collect();
    let mut induced_on = BTreeMap::new();
    for &i in &remaining {
        let carriers: Vec<usize> = cfg
            .on(i)
            .iter()
            .copied()
            .filter(|j| !s.contains(*j))
            .collect();
        if !carriers.is_empty() {
            induced_on.insert(i, carriers);
        }
    }
    let label = if remaining.is_empty() {
        "P2".to_string()
    } else if s.is_empty() {
        "X".to_string()
    } else {
        format!("Y_{s}")
    };
    SurfaceDescriptor {
        label,
        remaining,
        induced_on,
    }
}

/// Locate alpha and attach the moduli interpretation of the skyscraper
/// class: inside the chamber of S the moduli surface is the target of S.
pub fn moduli_of_point(cfg: &BlowUpConfig, alpha: &NSClass) -> Result<(Location, ModuliVerdict)> {
    let loc = locate(cfg, alpha)?;
    let verdict = match loc.chambers.len() {
        1 => ModuliVerdict::Surface {
            s: loc.chambers[0].clone(),
            descriptor: surface_descriptor(cfg, &loc.chambers[0]),
        },
        0 if !loc.walls.is_empty() => ModuliVerdict::Wall {
            walls: loc.walls.clone(),
        },
        0 => ModuliVerdict::Outside,
        _ => ModuliVerdict::Overlap {
            chambers: loc.chambers.clone(),
        },
    };
    Ok((loc, verdict))
}

/// Trace of one destabilizing hyperplane {alpha : alpha . c = 0} on the
/// slice plane origin + a u + b v: coefficients of p a + q b + r = 0 plus
/// the clipped segment inside the window box, when the line meets it.
#[derive(Debug, Clone)]
pub struct WallTrace {
    pub class: NSClass,
    pub line: (Rat, Rat, Rat),
    pub segment: Option<[(Rat, Rat); 2]>,
}

/// Hyperplane traces of every oracle curve class on the given slice. These
/// contain all chamber facets of the skyscraper wall structure; the list is
/// a superset candidate, not an exact enumeration.
pub fn point_class_walls(
    cfg: &BlowUpConfig,
    origin: &NSClass,
    u: &NSClass,
    v: &NSClass,
    window: &Rat,
) -> Result<Vec<WallTrace>> {
    let mut out = Vec::new();
    for c in cfg.negative_curves()?.iter() {
        let p = u.dot(c)?;
        let q = v.dot(c)?;
        let r = origin.dot(c)?;
        if p.is_zero() && q.is_zero() {
            continue;
        }
        let segment = clip_line(&p, &q, &r, window);
        out.push(WallTrace {
            class: c.clone(),
            line: (p, q, r),
            segment,
        });
    }
    Ok(out)
}

/// Clip p a + q b + r = 0 to the box |a|, |b| <= w. Returns the two extreme
/// boundary intersections when the line crosses the box.
fn clip_line(p: &Rat, q: &Rat, r: &Rat, w: &Rat) -> Option<[(Rat, Rat); 2]> {
    let mut points: Vec<(Rat, Rat)> = Vec::new();
    let in_box = |x: &Rat, w: &Rat| !(x.abs() > *w);
    for a in [-w, w.clone()] {
        if !q.is_zero() {
            let b = -(r + p * &a) / q;
            if in_box(&b, w) {
                points.push((a.clone(), b));
            }
        }
    }
    for b in [-w, w.clone()] {
        if !p.is_zero() {
            let a = -(r + q * &b) / p;
            if in_box(&a, w) {
                points.push((a, b.clone()));
            }
        }
    }
    points.sort();
    points.dedup();
    if points.len() >= 2 {
        let last = points.len() - 1;
        Some([points[0].clone(), points[last].clone()])
    } else {
        None
    }
}

/// The computable support-property certificates at a chamber point.
#[derive(Debug, Clone)]
pub struct SupportReport {
    pub s: ContractionSet,
    pub omega: NSClass,
    pub d_part: NSClass,
    /// max of -c^2 omega^2 / (c . omega)^2 over oracle curves with c^2 <= 0
    /// and c . omega != 0; None when no curve qualifies.
    pub c_omega: Option<Rat>,
    /// sup of u / (u + omega^2/2)^2 over u > 0, attained at u = omega^2/2.
    pub l_sup: Rat,
    /// sup of y^2 / ((omega^2/2 - y)^2 + x^2) over x^2 >= 2 omega^2 y; the
    /// value 1 is approached but never attained.
    pub m_sup: Rat,
    pub m_sup_attained: bool,
    /// Extremal generator phases at the D-part; absent for the identity
    /// contraction, which has no generators.
    pub theta: Option<(f64, f64)>,
    /// sin^2(pi theta) / 2 under the adopted reading of the angular bound.
    pub k_theta: Option<f64>,
}

/// Lower bound constant attached to a phase cone angle.
pub fn k_of_theta(theta: f64) -> f64 {
    let s = (PI * theta).sin();
    s * s / 2.0
}

pub fn support_quantities(
    cfg: &BlowUpConfig,
    s: &ContractionSet,
    alpha: &NSClass,
) -> Result<SupportReport> {
    require_valid(cfg, s)?;
    let (omega, d_part) = split(alpha, s.indices())?;
    if !cfg.is_ample_on_target(&omega, s)? {
        return Err(EngineError::Domain(format!(
            "the omega-part {omega} is not ample on the target of {s}"
        )));
    }
    let omega_sq = omega.square();
    let mut c_omega: Option<Rat> = None;
    for c in cfg.negative_curves()?.iter() {
        let sq = c.square();
        if sq.is_positive() {
            continue;
        }
        let pairing = c.dot(&omega)?;
        if pairing.is_zero() {
            continue;
        }
        let value = -&sq * &omega_sq / (&pairing * &pairing);
        if c_omega.as_ref().is_none_or(|best| value > *best) {
            c_omega = Some(value);
        }
    }
    let l_sup = rat::one() / (rat::int(2) * &omega_sq);
    let theta = if s.is_empty() {
        None
    } else {
        let cone = phase_cone(cfg, s, &d_part)?;
        Some((cone.theta, cone.theta_prime))
    };
    Ok(SupportReport {
        s: s.clone(),
        omega,
        d_part,
        c_omega,
        l_sup,
        m_sup: rat::one(),
        m_sup_attained: false,
        theta,
        k_theta: theta.map(|(t, _)| k_of_theta(t)),
    })
}
