//! The nine-length monoclinic parallelepiped and its defining equations.
//!
//! Edge `x` is orthogonal to both `y` and `z`; `(y, z)` spans the oblique
//! parallelogram face. The lengths satisfy
//!
//! ```text
//! (1) x² + y² = a²           (5) 2y² + 2z² = c1² + c2²
//! (2) x² + z² = b²           (6) 2y² + 2b² = d1² + d2²
//! (3) x² + c1² = d1²         (7) 2a² + 2z² = d1² + d2²
//! (4) x² + c2² = d2²
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exactmath::gcd_many;
use crate::Error;

/// Field names in record order.
pub const FIELD_NAMES: [&str; 9] = ["x", "y", "z", "a", "b", "c1", "c2", "d1", "d2"];

/// Nine nonnegative integer lengths `(x, y, z, a, b, c1, c2, d1, d2)`.
///
/// `c1` pairs with `d1` and `c2` with `d2`; any swap of the face diagonals
/// must swap the body diagonals with them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonoclinicPiped {
    lengths: [BigInt; 9],
}

impl MonoclinicPiped {
    /// Rejects negative lengths.
    pub fn new(lengths: [BigInt; 9]) -> Result<Self, Error> {
        if let Some(k) = lengths.iter().position(Signed::is_negative) {
            return Err(Error::NegativeLength {
                field: FIELD_NAMES[k],
            });
        }
        Ok(Self { lengths })
    }

    pub fn from_i64(lengths: [i64; 9]) -> Result<Self, Error> {
        Self::new(lengths.map(BigInt::from))
    }

    pub fn lengths(&self) -> &[BigInt; 9] {
        &self.lengths
    }

    pub fn into_lengths(self) -> [BigInt; 9] {
        self.lengths
    }

    pub fn x(&self) -> &BigInt {
        &self.lengths[0]
    }
    pub fn y(&self) -> &BigInt {
        &self.lengths[1]
    }
    pub fn z(&self) -> &BigInt {
        &self.lengths[2]
    }
    pub fn a(&self) -> &BigInt {
        &self.lengths[3]
    }
    pub fn b(&self) -> &BigInt {
        &self.lengths[4]
    }
    pub fn c1(&self) -> &BigInt {
        &self.lengths[5]
    }
    pub fn c2(&self) -> &BigInt {
        &self.lengths[6]
    }
    pub fn d1(&self) -> &BigInt {
        &self.lengths[7]
    }
    pub fn d2(&self) -> &BigInt {
        &self.lengths[8]
    }

    pub fn is_zero(&self) -> bool {
        self.lengths.iter().all(Zero::is_zero)
    }

    /// Every length multiplied by `k` (`k` must be nonnegative).
    pub fn scaled(&self, k: &BigInt) -> Result<Self, Error> {
        Self::new(self.lengths.clone().map(|v| v * k))
    }

    /// Exchanges `(y, a)` with `(z, b)`.
    pub fn swap_edges(&self) -> Self {
        let mut l = self.lengths.clone();
        l.swap(1, 2);
        l.swap(3, 4);
        Self { lengths: l }
    }

    /// Exchanges `(c1, d1)` with `(c2, d2)`.
    pub fn swap_diagonals(&self) -> Self {
        let mut l = self.lengths.clone();
        l.swap(5, 6);
        l.swap(7, 8);
        Self { lengths: l }
    }
}

impl fmt::Display for MonoclinicPiped {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, v) in self.lengths.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Outcome of checking equations (1)–(7) in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquationReport {
    pub passes: [bool; 7],
}

impl EquationReport {
    pub fn all_pass(&self) -> bool {
        self.passes.iter().all(|&p| p)
    }

    /// 1-based numbers of failing equations.
    pub fn failures(&self) -> Vec<usize> {
        self.passes
            .iter()
            .enumerate()
            .filter(|(_, &p)| !p)
            .map(|(k, _)| k + 1)
            .collect()
    }
}

/// Human-readable form of equation `k` (1-based).
pub fn equation_label(k: usize) -> &'static str {
    const LABELS: [&str; 7] = [
        "x^2 + y^2 = a^2",
        "x^2 + z^2 = b^2",
        "x^2 + c1^2 = d1^2",
        "x^2 + c2^2 = d2^2",
        "2y^2 + 2z^2 = c1^2 + c2^2",
        "2y^2 + 2b^2 = d1^2 + d2^2",
        "2a^2 + 2z^2 = d1^2 + d2^2",
    ];
    LABELS[k - 1]
}

/// Checks the seven equations exactly over the integers.
pub fn verify_equations(p: &MonoclinicPiped) -> EquationReport {
    let [x, y, z, a, b, c1, c2, d1, d2] = p.lengths.each_ref().map(|v| v * v);
    let two = |v: &BigInt| v * 2u32;
    EquationReport {
        passes: [
            &x + &y == a,
            &x + &z == b,
            &x + &c1 == d1,
            &x + &c2 == d2,
            two(&y) + two(&z) == &c1 + &c2,
            two(&y) + two(&b) == &d1 + &d2,
            two(&a) + two(&z) == &d1 + &d2,
        ],
    }
}

/// True when the lengths describe an actual monoclinic solid: all seven
/// equations hold, every edge is positive, and the `(y, z, c1, c2)` face is a
/// genuine non-rectangular parallelogram.
pub fn is_realizable(p: &MonoclinicPiped) -> bool {
    verify_equations(p).all_pass()
        && p.x().is_positive()
        && is_oblique_parallelogram(p.y(), p.z(), p.c1(), p.c2())
}

/// Sides `y`, `z` with diagonals `c1`, `c2` form a non-degenerate parallelogram
/// that is not a rectangle. Assumes `c1² + c2² = 2y² + 2z²`.
pub(crate) fn is_oblique_parallelogram(y: &BigInt, z: &BigInt, c1: &BigInt, c2: &BigInt) -> bool {
    if !y.is_positive() || !z.is_positive() || c1 == c2 {
        return false;
    }
    let diff = y - z;
    let sum = y + z;
    let c1_sq = c1 * c1;
    &diff * &diff < c1_sq && c1_sq < &sum * &sum
}

/// Divides out the gcd of the nine lengths and returns it alongside.
pub fn primitive_reduce(p: &MonoclinicPiped) -> Result<(MonoclinicPiped, BigInt), Error> {
    let g = gcd_many(p.lengths.iter());
    if g.is_zero() {
        return Err(Error::ZeroPiped);
    }
    let reduced = MonoclinicPiped {
        lengths: p.lengths.clone().map(|v| v / &g),
    };
    Ok((reduced, g))
}

/// Orders the tuple so that `y <= z` and `c1 <= c2`, swapping paired fields.
/// Ties are left unswapped.
pub fn canonicalize(p: &MonoclinicPiped) -> MonoclinicPiped {
    let mut out = p.clone();
    if out.y() > out.z() {
        out = out.swap_edges();
    }
    if out.c1() > out.c2() {
        out = out.swap_diagonals();
    }
    out
}

/// True when the tuple is already in canonical order.
pub fn is_canonical(p: &MonoclinicPiped) -> bool {
    p.y() <= p.z() && p.c1() <= p.c2()
}
