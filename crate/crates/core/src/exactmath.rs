//! Exact integer, rational and polynomial arithmetic.
//!
//! Every length, coefficient and ratio in this crate is computed exactly.
//! Integers are [`num_bigint::BigInt`], ratios are [`num_rational::BigRational`]
//! (always stored in lowest terms with a positive denominator), bivariate
//! polynomials are sparse exponent maps, and the univariate quartics that
//! bound the validity ranges are dense coefficient vectors.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision signed integer.
pub type BigIntVal = BigInt;

/// Normalized arbitrary-precision rational.
pub type RationalVal = BigRational;

/// Builds the normalized rational `num / den`.
///
/// Panics if `den` is zero.
pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> RationalVal {
    BigRational::new(num.into(), den.into())
}

/// Parses a plain decimal literal such as `-0.052065383121` into an exact rational.
pub fn parse_decimal(text: &str) -> Option<RationalVal> {
    let text = text.trim();
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().ok()?
    };
    if negative {
        num = -num;
    }
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    Some(BigRational::new(num, den))
}

/// Renders a rational as a decimal rounded toward zero to `places` digits.
pub fn format_decimal(value: &RationalVal, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = (value.numer().abs() * &scale) / value.denom();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let sign = if value.is_negative() { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part:0>places$}")
    }
}

/// Nonnegative gcd of every value. The gcd of an empty or all-zero list is 0.
pub fn gcd_many<'a, I>(values: I) -> BigIntVal
where
    I: IntoIterator<Item = &'a BigIntVal>,
{
    values.into_iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

/// Exact polynomial in two variables `m` and `n` with integer coefficients.
///
/// Stored as a map from exponent pair `(i, j)` (the monomial `m^i n^j`) to a
/// nonzero coefficient, so two polynomials are equal exactly when their maps are.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// The single term `c · m^i · n^j`.
    pub fn monomial(c: impl Into<BigInt>, m_exp: u32, n_exp: u32) -> Self {
        let mut p = Self::zero();
        p.add_term((m_exp, n_exp), c.into());
        p
    }

    pub fn m() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn n() -> Self {
        Self::monomial(1, 0, 1)
    }

    /// Builds a polynomial from `(m_exp, n_exp, coefficient)` triples. Repeated
    /// exponent pairs are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term((i, j), c.into());
        }
        p
    }

    /// Homogeneous form of total degree `coeffs.len() - 1` where `coeffs[i]`
    /// multiplies `m^i n^(d-i)`.
    pub fn homogeneous(coeffs: &[i64]) -> Self {
        let degree = coeffs.len().saturating_sub(1) as u32;
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as u32, degree - i as u32, c)),
        )
    }

    fn add_term(&mut self, exps: (u32, u32), c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `m^i n^j` (zero when absent).
    pub fn coeff(&self, m_exp: u32, n_exp: u32) -> BigInt {
        self.terms
            .get(&(m_exp, n_exp))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &BigInt)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    /// Largest total degree of any term, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    /// True when every term has total degree `degree`.
    pub fn is_homogeneous_of(&self, degree: u32) -> bool {
        self.terms.keys().all(|(i, j)| i + j == degree)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e, c * k)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Exact value at the integer point `(m, n)`.
    pub fn eval(&self, m: &BigInt, n: &BigInt) -> BigInt {
        let max_m = self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0);
        let max_n = self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0);
        let m_pows = powers(m, max_m);
        let n_pows = powers(n, max_n);
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * &m_pows[i as usize] * &n_pows[j as usize])
            .sum()
    }
}

fn powers(base: &BigInt, max_exp: u32) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(max_exp as usize + 1);
    out.push(BigInt::one());
    for k in 1..=max_exp as usize {
        let next = &out[k - 1] * base;
        out.push(next);
    }
    out
}

/// Coefficient-wise sum.
pub fn poly_add(p: &BivariatePoly, q: &BivariatePoly) -> BivariatePoly {
    p + q
}

/// Exact product.
pub fn poly_mul(p: &BivariatePoly, q: &BivariatePoly) -> BivariatePoly {
    p * q
}

pub fn poly_eval(p: &BivariatePoly, m: &BigInt, n: &BigInt) -> BigInt {
    p.eval(m, n)
}

impl Add for &BivariatePoly {
    type Output = BivariatePoly;

    fn add(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Add for BivariatePoly {
    type Output = BivariatePoly;

    fn add(self, rhs: BivariatePoly) -> BivariatePoly {
        &self + &rhs
    }
}

impl Sub for &BivariatePoly {
    type Output = BivariatePoly;

    fn sub(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c);
        }
        out
    }
}

impl Sub for BivariatePoly {
    type Output = BivariatePoly;

    fn sub(self, rhs: BivariatePoly) -> BivariatePoly {
        &self - &rhs
    }
}

impl Mul for &BivariatePoly {
    type Output = BivariatePoly;

    fn mul(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = BivariatePoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for BivariatePoly {
    type Output = BivariatePoly;

    fn mul(self, rhs: BivariatePoly) -> BivariatePoly {
        &self * &rhs
    }
}

impl Neg for &BivariatePoly {
    type Output = BivariatePoly;

    fn neg(self) -> BivariatePoly {
        BivariatePoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for BivariatePoly {
    type Output = BivariatePoly;

    fn neg(self) -> BivariatePoly {
        -&self
    }
}

impl fmt::Display for BivariatePoly {
    /// Terms in descending powers of `n`, e.g. `n^2 + 2mn + 2m^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by_key(|&(&(i, j), _)| (std::cmp::Reverse(i + j), i));
        for (k, (&(i, j), c)) in ordered.into_iter().enumerate() {
            let mag = c.abs();
            match (k, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() || (i == 0 && j == 0) {
                write!(f, "{mag}")?;
            }
            for (var, e) in [("m", i), ("n", j)] {
                match e {
                    0 => {}
                    1 => f.write_str(var)?,
                    _ => write!(f, "{var}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// Dense univariate polynomial `q(t) = Σ coeffs[k] t^k` with integer coefficients.
///
/// The range quartics are all degree 4; Sturm counting works for any degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnivariatePoly {
    coeffs: Vec<BigInt>,
}

impl UnivariatePoly {
    /// Coefficients in ascending powers of `t`. Trailing zeros are dropped.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Coefficients in descending powers, the way the quartics are usually written:
    /// `from_descending(&[12, 24, 16, 4, -3])` is `12t^4 + 24t^3 + 16t^2 + 4t - 3`.
    pub fn from_descending(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().rev().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `q(-t)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Companion for the reciprocal substitution `t = 1/(k·s)`: the polynomial
    /// `(k·s)^d · q(1/(k·s))`, whose roots are `1/(k·r)` for each nonzero root `r` of `q`.
    pub fn reciprocal(&self, k: i64) -> Self {
        let d = match self.degree() {
            Some(d) => d,
            None => return self.clone(),
        };
        let k = BigInt::from(k);
        let mut out = vec![BigInt::zero(); d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[d - i] = c * k.pow((d - i) as u32);
        }
        Self::new(out)
    }

    /// Divides out the gcd of the coefficients, keeping the leading sign.
    pub fn primitive_part(&self) -> Self {
        let g = gcd_many(self.coeffs.iter());
        if g.is_zero() {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn eval(&self, t: &RationalVal) -> RationalVal {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * t + BigRational::from_integer(c.clone())
            })
    }

    /// Exact sign of `q(t)`: the sign of `Σ c_k num^k den^(d-k)`, which differs from
    /// `q(t)` by the positive factor `den^d`.
    pub fn sign_at(&self, t: &RationalVal) -> Sign {
        let d = match self.degree() {
            Some(d) => d,
            None => return Sign::NoSign,
        };
        let num_pows = powers(t.numer(), d as u32);
        let den_pows = powers(t.denom(), d as u32);
        let total: BigInt = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * &num_pows[k] * &den_pows[d - k])
            .sum();
        total.sign()
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`,
    /// counted with a Sturm sequence.
    pub fn count_roots_between(&self, lo: &RationalVal, hi: &RationalVal) -> usize {
        if lo >= hi || self.degree().is_none_or(|d| d == 0) {
            return 0;
        }
        let chain = sturm_chain(self);
        let at_lo = sign_variations(&chain, lo);
        let at_hi = sign_variations(&chain, hi);
        at_lo.saturating_sub(at_hi)
    }
}

/// Quartic sign test on `t = m/n`; see [`UnivariatePoly::sign_at`].
pub fn quartic_sign_at(q: &UnivariatePoly, t: &RationalVal) -> Sign {
    q.sign_at(t)
}

/// Converts a [`Sign`] to -1, 0 or +1.
pub fn sign_to_i32(sign: Sign) -> i32 {
    match sign {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

type RationalPoly = Vec<BigRational>;

fn sturm_chain(q: &UnivariatePoly) -> Vec<RationalPoly> {
    let p0: RationalPoly = q
        .coeffs
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let p1: RationalPoly = p0
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
        .collect();
    let mut chain = vec![p0, p1];
    loop {
        let len = chain.len();
        if chain[len - 1].is_empty() {
            chain.pop();
            break;
        }
        let rem = poly_rem(&chain[len - 2], &chain[len - 1]);
        if rem.is_empty() {
            break;
        }
        chain.push(rem.into_iter().map(|c| -c).collect());
    }
    chain
}

fn trim(mut p: RationalPoly) -> RationalPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_rem(num: &RationalPoly, den: &RationalPoly) -> RationalPoly {
    let mut rem = trim(num.clone());
    let den = trim(den.clone());
    let lead = den.last().expect("division by zero polynomial").clone();
    while rem.len() >= den.len() && !rem.is_empty() {
        let shift = rem.len() - den.len();
        let factor = rem.last().unwrap() / &lead;
        for (k, c) in den.iter().enumerate() {
            rem[shift + k] -= &factor * c;
        }
        rem.pop();
        rem = trim(rem);
    }
    rem
}

fn sign_variations(chain: &[RationalPoly], t: &RationalVal) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for p in chain {
        let v = p
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + c);
        if v.is_zero() {
            continue;
        }
        let positive = v.is_positive();
        if last.is_some_and(|prev| prev != positive) {
            count += 1;
        }
        last = Some(positive);
    }
    count
}
