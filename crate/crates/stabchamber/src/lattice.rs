//! Exact arithmetic in the Neron-Severi lattice of an iterated blow-up of
//! the projective plane.
//!
//! Classes live in the fixed basis (H, Chat_1, ..., Chat_n): the pull-back of
//! a line followed by the total transforms of the exceptional curves. The
//! intersection form is diag(1, -1, ..., -1) and is never materialized.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Signed;

use crate::error::{EngineError, Result};
use crate::rat::{self, Rat};

/// A rational divisor class in the basis (H, Chat_1, ..., Chat_n).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NSClass {
    coeffs: Vec<Rat>,
}

impl NSClass {
    /// `coeffs[0]` multiplies H; `coeffs[i]` multiplies Chat_i.
    pub fn new(coeffs: Vec<Rat>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a class needs at least the H coordinate"
        );
        NSClass { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        NSClass::new(coeffs.iter().map(|&c| rat::int(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        NSClass::new(vec![rat::zero(); n + 1])
    }

    pub fn hyperplane(n: usize) -> Self {
        let mut c = vec![rat::zero(); n + 1];
        c[0] = rat::one();
        NSClass::new(c)
    }

    /// The total transform Chat_i (1-based).
    pub fn exceptional(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(EngineError::IndexOutOfRange { index: i, max: n });
        }
        let mut c = vec![rat::zero(); n + 1];
        c[i] = rat::one();
        Ok(NSClass::new(c))
    }

    /// Number of exceptional indices (basis length minus one).
    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff_h(&self) -> &Rat {
        &self.coeffs[0]
    }

    /// Coefficient of Chat_i (1-based).
    pub fn coeff_exc(&self, i: usize) -> Result<&Rat> {
        if i == 0 || i > self.n() {
            return Err(EngineError::IndexOutOfRange {
                index: i,
                max: self.n(),
            });
        }
        Ok(&self.coeffs[i])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(num_traits::Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// True iff the class lies in the span of {Chat_i : i in support}.
    pub fn supported_on(&self, support: &BTreeSet<usize>) -> bool {
        if !num_traits::Zero::is_zero(self.coeff_h()) {
            return false;
        }
        (1..=self.n()).all(|i| support.contains(&i) || num_traits::Zero::is_zero(&self.coeffs[i]))
    }

    pub fn scale(&self, factor: &Rat) -> Self {
        NSClass::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    /// Intersection product against diag(1, -1, ..., -1).
    pub fn dot(&self, other: &NSClass) -> Result<Rat> {
        if self.coeffs.len() != other.coeffs.len() {
            return Err(EngineError::DimensionMismatch {
                left: self.coeffs.len(),
                right: other.coeffs.len(),
            });
        }
        let mut acc = &self.coeffs[0] * &other.coeffs[0];
        for (a, b) in self.coeffs[1..].iter().zip(&other.coeffs[1..]) {
            acc -= a * b;
        }
        Ok(acc)
    }

    /// Self-intersection.
    pub fn square(&self) -> Rat {
        self.dot(self).expect("same length")
    }
}

impl Add for &NSClass {
    type Output = NSClass;
    fn add(self, rhs: &NSClass) -> NSClass {
        assert_eq!(self.coeffs.len(), rhs.coeffs.len(), "length mismatch");
        NSClass::new(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &NSClass {
    type Output = NSClass;
    fn sub(self, rhs: &NSClass) -> NSClass {
        assert_eq!(self.coeffs.len(), rhs.coeffs.len(), "length mismatch");
        NSClass::new(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &NSClass {
    type Output = NSClass;
    fn neg(self) -> NSClass {
        NSClass::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for NSClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if num_traits::Zero::is_zero(c) {
                continue;
            }
            let mag = rat::display(&c.abs());
            let sym = if i == 0 {
                "H".to_string()
            } else {
                format!("Ĉ{i}")
            };
            if wrote {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            if mag == "1" {
                write!(f, "{sym}")?;
            } else {
                write!(f, "{mag}{sym}")?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// K_X = -3H + sum_i Chat_i; satisfies K^2 = 9 - n.
pub fn canonical_class(n: usize) -> NSClass {
    let mut c = vec![rat::one(); n + 1];
    c[0] = rat::int(-3);
    NSClass::new(c)
}

/// Orthogonal decomposition alpha = omega + D with D supported on
/// {Chat_i : i in support} and omega perpendicular to that span.
pub fn split(alpha: &NSClass, support: &BTreeSet<usize>) -> Result<(NSClass, NSClass)> {
    let n = alpha.n();
    for &i in support {
        if i == 0 || i > n {
            return Err(EngineError::IndexOutOfRange { index: i, max: n });
        }
    }
    let mut d = NSClass::zero(n);
    for &i in support {
        d.coeffs[i] = alpha.coeffs[i].clone();
    }
    let omega = alpha - &d;
    Ok((omega, d))
}

/// Numerical Chern character (ch0, ch1, ch2) of an object.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChernCharacter {
    pub rank: i64,
    pub c1: NSClass,
    pub ch2: Rat,
}

impl ChernCharacter {
    pub fn new(rank: i64, c1: NSClass, ch2: Rat) -> Self {
        ChernCharacter { rank, c1, ch2 }
    }

    /// ch of the structure sheaf of a divisor: (0, D, -D^2/2).
    pub fn of_divisor_sheaf(d: &NSClass) -> Self {
        let ch2 = -d.square() / rat::int(2);
        debug_assert!(rat::is_half_integral(&ch2));
        ChernCharacter::new(0, d.clone(), ch2)
    }

    /// ch of a skyscraper sheaf: (0, 0, 1).
    pub fn point(n: usize) -> Self {
        ChernCharacter::new(0, NSClass::zero(n), rat::one())
    }

    /// The homological shift by k multiplies every component by (-1)^k.
    pub fn shift_parity(&self, k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            self.clone()
        } else {
            ChernCharacter::new(-self.rank, -&self.c1, -&self.ch2)
        }
    }

    pub fn add(&self, other: &ChernCharacter) -> Result<ChernCharacter> {
        if self.c1.n() != other.c1.n() {
            return Err(EngineError::DimensionMismatch {
                left: self.c1.coeffs.len(),
                right: other.c1.coeffs.len(),
            });
        }
        Ok(ChernCharacter::new(
            self.rank + other.rank,
            &self.c1 + &other.c1,
            &self.ch2 + &other.ch2,
        ))
    }

    pub fn sub(&self, other: &ChernCharacter) -> Result<ChernCharacter> {
        self.add(&other.shift_parity(1))
    }

    pub fn scale_int(&self, k: i64) -> ChernCharacter {
        ChernCharacter::new(
            self.rank * k,
            self.c1.scale(&rat::int(k)),
            &self.ch2 * rat::int(k),
        )
    }
}

impl fmt::Display for ChernCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            self.rank,
            self.c1,
            rat::display(&self.ch2)
        )
    }
}
