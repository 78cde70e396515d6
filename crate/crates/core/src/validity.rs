//! Exact membership in the listed `m/n` validity ranges of each family.
//!
//! Each family's valid ratios are a union of open intervals. Endpoints are
//! rationals, infinities, or real roots of a quartic. A root endpoint is held
//! as the stored quartic, an optional substitution that turns it into the
//! quartic actually vanishing at the endpoint, the reference decimal, and the
//! sign that quartic takes just inside the interval. Membership never touches
//! floating point: a ratio outside the root's `±10⁻⁶` bracket is placed by
//! rational comparison, and one inside it by the quartic's exact sign.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::exactmath::{format_decimal, parse_decimal, ratio, RationalVal, UnivariatePoly};
use crate::families::{family, FamilyId};
use crate::Error;

/// Half-width of the bracket placed around each reference root decimal.
pub fn bracket_radius() -> RationalVal {
    ratio(1, 1_000_000)
}

/// Width the self check bisects down to.
pub fn bisection_width() -> RationalVal {
    ratio(1, 10_000_000_000u64)
}

/// Largest allowed distance between the bisected root and the reference decimal.
pub fn anchor_tolerance() -> RationalVal {
    ratio(1, 1_000_000_000)
}

/// How the stored radicand relates to the quartic vanishing at the endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Substitution {
    /// The radicand itself.
    Identity,
    /// Endpoint is `1/(k·r)` for the radicand root `r`.
    Reciprocal(i64),
    /// Endpoint is `-r`.
    Reflect,
}

/// An endpoint defined as a real root of a quartic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarticRoot {
    pub label: &'static str,
    /// The radicand as stored.
    pub radicand: UnivariatePoly,
    pub substitution: Substitution,
    /// Reference decimal approximation of the endpoint.
    pub approx: &'static str,
    /// Sign of [`QuarticRoot::quartic`] just inside the adjacent interval.
    pub inside_sign: Sign,
}

impl QuarticRoot {
    /// Quartic whose root is the endpoint.
    pub fn quartic(&self) -> UnivariatePoly {
        match self.substitution {
            Substitution::Identity => self.radicand.clone(),
            Substitution::Reciprocal(k) => self.radicand.reciprocal(k).primitive_part(),
            Substitution::Reflect => self.radicand.reflect(),
        }
    }

    pub fn approx_value(&self) -> RationalVal {
        parse_decimal(self.approx).expect("root decimals are valid literals")
    }

    /// `[approx - 10⁻⁶, approx + 10⁻⁶]`.
    pub fn bracket(&self) -> (RationalVal, RationalVal) {
        let a = self.approx_value();
        let r = bracket_radius();
        (&a - &r, &a + &r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RangeBound {
    Rational(RationalVal),
    QuarticRoot(QuarticRoot),
    PlusInfinity,
    MinusInfinity,
}

impl RangeBound {
    /// Is `t` strictly above this bound, taken as an interval's lower end?
    fn below(&self, t: &RationalVal) -> bool {
        match self {
            RangeBound::Rational(v) => v < t,
            RangeBound::MinusInfinity => true,
            RangeBound::PlusInfinity => false,
            RangeBound::QuarticRoot(r) => {
                let (lo, hi) = r.bracket();
                if *t <= lo {
                    false
                } else if *t >= hi {
                    true
                } else {
                    r.quartic().sign_at(t) == r.inside_sign
                }
            }
        }
    }

    /// Is `t` strictly below this bound, taken as an interval's upper end?
    fn above(&self, t: &RationalVal) -> bool {
        match self {
            RangeBound::Rational(v) => t < v,
            RangeBound::PlusInfinity => true,
            RangeBound::MinusInfinity => false,
            RangeBound::QuarticRoot(r) => {
                let (lo, hi) = r.bracket();
                if *t >= hi {
                    false
                } else if *t <= lo {
                    true
                } else {
                    r.quartic().sign_at(t) == r.inside_sign
                }
            }
        }
    }

    fn quartic_root(&self) -> Option<&QuarticRoot> {
        match self {
            RangeBound::QuarticRoot(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for RangeBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RangeBound::Rational(v) => write!(f, "{v}"),
            RangeBound::QuarticRoot(r) => write!(f, "{} ~ {}", r.label, r.approx),
            RangeBound::PlusInfinity => f.write_str("+inf"),
            RangeBound::MinusInfinity => f.write_str("-inf"),
        }
    }
}

/// Open interval `(lower, upper)` with a rational point known to lie inside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lower: RangeBound,
    pub upper: RangeBound,
    pub witness: RationalVal,
}

impl Interval {
    pub fn contains(&self, t: &RationalVal) -> bool {
        self.lower.below(t) && self.upper.above(t)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lower, self.upper)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeSpec {
    pub family: FamilyId,
    pub intervals: Vec<Interval>,
}

impl RangeSpec {
    pub fn contains(&self, t: &RationalVal) -> bool {
        self.intervals.iter().any(|iv| iv.contains(t))
    }

    /// Certifies every quartic-root endpoint; see [`BoundCheck`].
    pub fn self_check(&self) -> SelfCheckReport {
        let mut bounds = Vec::new();
        for iv in &self.intervals {
            if let Some(r) = iv.lower.quartic_root() {
                bounds.push(check_bound(self.family, r, &iv.witness, true));
            }
            if let Some(r) = iv.upper.quartic_root() {
                bounds.push(check_bound(self.family, r, &iv.witness, false));
            }
        }
        SelfCheckReport {
            family: self.family,
            bounds,
        }
    }
}

/// Stage of the root certification that failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStage {
    /// (i) the quartic has exactly one root, with a sign change, in the bracket.
    Bracket,
    /// (ii) the inside sign holds at the witness and nothing crosses zero on the way there.
    Witness,
    /// (iii) bisection lands within tolerance of the reference decimal.
    Anchor,
}

impl fmt::Display for CheckStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStage::Bracket => "stage (i) bracket",
            CheckStage::Witness => "stage (ii) witness",
            CheckStage::Anchor => "stage (iii) anchor",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub family: FamilyId,
    pub label: &'static str,
    pub approx: &'static str,
    /// Midpoint of the final bisection interval, when stage (i) passed.
    pub bisected: Option<RationalVal>,
    pub failure: Option<(CheckStage, String)>,
}

impl BoundCheck {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for BoundCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(
                f,
                "{} {}: bracket confirmed at {} (bisected {})",
                self.family,
                self.label,
                self.approx,
                self.bisected
                    .as_ref()
                    .map(|b| format_decimal(b, 12))
                    .unwrap_or_default()
            ),
            Some((stage, why)) => {
                write!(f, "{} {}: {stage} failed: {why}", self.family, self.label)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfCheckReport {
    pub family: FamilyId,
    pub bounds: Vec<BoundCheck>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.bounds.iter().all(BoundCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundCheck> + '_ {
        self.bounds.iter().filter(|b| !b.passed())
    }
}

fn check_bound(
    family: FamilyId,
    root: &QuarticRoot,
    witness: &RationalVal,
    is_lower: bool,
) -> BoundCheck {
    let fail = |stage, why: String| BoundCheck {
        family,
        label: root.label,
        approx: root.approx,
        bisected: None,
        failure: Some((stage, why)),
    };
    let q = root.quartic();
    let (lo, hi) = root.bracket();
    let (s_lo, s_hi) = (q.sign_at(&lo), q.sign_at(&hi));
    if s_lo == Sign::NoSign || s_hi == Sign::NoSign || s_lo == s_hi {
        return fail(
            CheckStage::Bracket,
            format!(
                "no sign change across [{}, {}]",
                format_decimal(&lo, 7),
                format_decimal(&hi, 7)
            ),
        );
    }
    let roots = q.count_roots_between(&lo, &hi);
    if roots != 1 {
        return fail(
            CheckStage::Bracket,
            format!("{roots} roots inside the bracket"),
        );
    }

    // The inner bracket edge lies inside the interval; the witness must sit on
    // the same side with no root of the quartic in between.
    let inner = if is_lower { &hi } else { &lo };
    let inner_sign = if is_lower { s_hi } else { s_lo };
    if inner_sign != root.inside_sign {
        return fail(
            CheckStage::Witness,
            format!(
                "inside sign {:?} but quartic is {:?} at the inner bracket edge",
                root.inside_sign, inner_sign
            ),
        );
    }
    let on_inside = if is_lower {
        witness >= inner
    } else {
        witness <= inner
    };
    if !on_inside {
        return fail(
            CheckStage::Witness,
            format!("witness {witness} is not inside the interval"),
        );
    }
    if q.sign_at(witness) != root.inside_sign {
        return fail(
            CheckStage::Witness,
            format!("quartic sign at witness {witness} differs"),
        );
    }
    let (a, b) = if is_lower {
        (inner, witness)
    } else {
        (witness, inner)
    };
    if q.count_roots_between(a, b) != 0 {
        return fail(
            CheckStage::Witness,
            format!("quartic vanishes between the bracket and witness {witness}"),
        );
    }

    let root_value = bisect(&q, lo, hi, s_lo);
    let distance = (&root_value - root.approx_value()).abs();
    if distance > anchor_tolerance() {
        return BoundCheck {
            bisected: Some(root_value.clone()),
            ..fail(
                CheckStage::Anchor,
                format!(
                    "bisected root {} is {} away",
                    format_decimal(&root_value, 12),
                    format_decimal(&distance, 12)
                ),
            )
        };
    }
    BoundCheck {
        family,
        label: root.label,
        approx: root.approx,
        bisected: Some(root_value),
        failure: None,
    }
}

/// Bisects a sign change of `q` on `[lo, hi]` down to [`bisection_width`] and
/// returns the midpoint of the final interval.
pub fn bisect(
    q: &UnivariatePoly,
    mut lo: RationalVal,
    mut hi: RationalVal,
    sign_lo: Sign,
) -> RationalVal {
    let width = bisection_width();
    let two = BigRational::from_integer(BigInt::from(2));
    while &hi - &lo > width {
        let mid = (&lo + &hi) / &two;
        match q.sign_at(&mid) {
            Sign::NoSign => return mid,
            s if s == sign_lo => lo = mid,
            _ => hi = mid,
        }
    }
    (lo + hi) / two
}

fn rational(num: i64, den: i64) -> RangeBound {
    RangeBound::Rational(ratio(num, den))
}

fn root(
    label: &'static str,
    radicand: &[i64],
    substitution: Substitution,
    approx: &'static str,
    inside_sign: Sign,
) -> RangeBound {
    RangeBound::QuarticRoot(QuarticRoot {
        label,
        radicand: UnivariatePoly::from_descending(radicand),
        substitution,
        approx,
        inside_sign,
    })
}

fn interval(lower: RangeBound, upper: RangeBound, witness: (i64, i64)) -> Interval {
    Interval {
        lower,
        upper,
        witness: ratio(witness.0, witness.1),
    }
}

use RangeBound::PlusInfinity as PosInf;
use Sign::{Minus, Plus};
use Substitution::{Identity, Reciprocal, Reflect};

fn build_spec(id: FamilyId) -> RangeSpec {
    let intervals = match id {
        FamilyId::P1 => {
            let q1: &[i64] = &[12, 24, 16, 4, -3];
            vec![
                interval(
                    rational(0, 1),
                    root("r1", q1, Identity, "0.28126795021", Minus),
                    (1, 8),
                ),
                interval(
                    root("r2", q1, Reciprocal(2), "1.77766432195", Minus),
                    PosInf,
                    (2, 1),
                ),
                interval(
                    root(
                        "r3",
                        &[12, 56, 80, 52, 13],
                        Identity,
                        "-0.60976156477",
                        Plus,
                    ),
                    rational(-1, 2),
                    (-11, 20),
                ),
                interval(
                    rational(-1, 1),
                    root(
                        "r4",
                        &[52, 104, 80, 28, 3],
                        Identity,
                        "-0.81999264776",
                        Plus,
                    ),
                    (-9, 10),
                ),
            ]
        }
        FamilyId::P2 => vec![
            interval(
                root(
                    "r1",
                    &[48, 64, -40, -112, -53],
                    Identity,
                    "1.27766432195",
                    Plus,
                ),
                PosInf,
                (2, 1),
            ),
            interval(
                rational(-1, 2),
                root(
                    "r2",
                    &[48, 192, 280, 176, 27],
                    Identity,
                    "-0.21873204978",
                    Minus,
                ),
                (-3, 10),
            ),
            interval(
                rational(-3, 2),
                root(
                    "r3",
                    &[208, 832, 1256, 848, 213],
                    Identity,
                    "-1.31999264776",
                    Plus,
                ),
                (-7, 5),
            ),
        ],
        FamilyId::P3 => vec![
            interval(
                rational(0, 1),
                root(
                    "r1",
                    &[768, 2304, 2464, 1104, -37],
                    Identity,
                    "0.0312679502117",
                    Minus,
                ),
                (1, 64),
            ),
            interval(
                root(
                    "r2",
                    &[768, 256, -1120, -1328, -453],
                    Identity,
                    "1.52766432195",
                    Plus,
                ),
                PosInf,
                (2, 1),
            ),
            interval(rational(-1, 4), rational(0, 1), (-1, 8)),
            interval(rational(-5, 4), rational(-3, 4), (-1, 1)),
        ],
        FamilyId::P4 => vec![
            interval(
                root(
                    "r1",
                    &[324, 216, -432, -636, -241],
                    Identity,
                    "1.44433098861",
                    Plus,
                ),
                PosInf,
                (2, 1),
            ),
            interval(
                rational(-1, 3),
                // The stored radicand vanishes at +0.052065…; the endpoint is its mirror image.
                root(
                    "r2",
                    &[324, -1080, 1296, -660, 31],
                    Reflect,
                    "-0.052065383121",
                    Minus,
                ),
                (-1, 5),
            ),
            interval(
                root(
                    "r3",
                    &[108, 648, 1296, 1132, 373],
                    Identity,
                    "-0.94309489810",
                    Plus,
                ),
                rational(-5, 6),
                (-9, 10),
            ),
            interval(
                rational(-4, 3),
                root(
                    "r4",
                    &[4212, 14040, 17712, 10020, 2083],
                    Identity,
                    "-1.15332598109",
                    Plus,
                ),
                (-6, 5),
            ),
        ],
    };
    RangeSpec {
        family: id,
        intervals,
    }
}

static SPECS: OnceLock<[RangeSpec; 4]> = OnceLock::new();

pub fn range_spec(id: FamilyId) -> &'static RangeSpec {
    &SPECS.get_or_init(|| FamilyId::ALL.map(build_spec))[id as usize]
}

pub fn self_check(id: FamilyId) -> SelfCheckReport {
    range_spec(id).self_check()
}

/// Is `m/n` inside one of the family's open intervals?
pub fn contains(id: FamilyId, m: &BigInt, n: &BigInt) -> Result<bool, Error> {
    if n.is_zero() {
        return Err(Error::UndefinedRatio);
    }
    Ok(range_spec(id).contains(&BigRational::new(m.clone(), n.clone())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    Valid,
    OutOfRange,
    DegenerateParameter,
    UndefinedRatio,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Valid => "Valid",
            Classification::OutOfRange => "OutOfRange",
            Classification::DegenerateParameter => "DegenerateParameter",
            Classification::UndefinedRatio => "UndefinedRatio",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Classification {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        [
            Classification::Valid,
            Classification::OutOfRange,
            Classification::DegenerateParameter,
            Classification::UndefinedRatio,
        ]
        .into_iter()
        .find(|c| c.as_str() == s)
        .ok_or_else(|| Error::Parse(format!("unknown classification {s:?}")))
    }
}

pub fn classify(id: FamilyId, m: &BigInt, n: &BigInt) -> Classification {
    if n.is_zero() {
        return Classification::UndefinedRatio;
    }
    if family(id)
        .degenerate_factors()
        .iter()
        .any(|f| f.eval(m, n).is_zero())
    {
        return Classification::DegenerateParameter;
    }
    if range_spec(id).contains(&BigRational::new(m.clone(), n.clone())) {
        Classification::Valid
    } else {
        Classification::OutOfRange
    }
}

/// Orders `t` against a quartic-root endpoint using the certified bracket.
pub fn compare_to_root(root: &QuarticRoot, t: &RationalVal) -> Ordering {
    let (lo, hi) = root.bracket();
    if *t <= lo {
        return Ordering::Less;
    }
    if *t >= hi {
        return Ordering::Greater;
    }
    let q = root.quartic();
    match q.sign_at(t) {
        Sign::NoSign => Ordering::Equal,
        s if s == q.sign_at(&lo) => Ordering::Less,
        _ => Ordering::Greater,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn negative_part(spec: &RangeSpec) -> Vec<&Interval> {
        spec.intervals
            .iter()
            .filter(|iv| iv.witness.is_negative())
            .collect()
    }

    #[test]
    fn p3_negative_part_is_rational() {
        let neg = negative_part(range_spec(FamilyId::P3));
        assert_eq!(neg.len(), 2);
        assert_eq!(neg[0].lower, rational(-1, 4));
        assert_eq!(neg[0].upper, rational(0, 1));
        assert_eq!(neg[1].lower, rational(-5, 4));
        assert_eq!(neg[1].upper, rational(-3, 4));
    }

    #[test]
    fn interval_counts() {
        assert_eq!(range_spec(FamilyId::P1).intervals.len(), 4);
        assert_eq!(range_spec(FamilyId::P2).intervals.len(), 3);
        assert_eq!(range_spec(FamilyId::P3).intervals.len(), 4);
        assert_eq!(range_spec(FamilyId::P4).intervals.len(), 4);
        let p1 = range_spec(FamilyId::P1);
        assert_eq!(p1.intervals[0].lower, rational(0, 1));
        assert!(matches!(&p1.intervals[0].upper, RangeBound::QuarticRoot(r) if r.label == "r1"));
        assert!(matches!(&p1.intervals[1].lower, RangeBound::QuarticRoot(r) if r.label == "r2"));
        assert_eq!(p1.intervals[1].upper, PosInf);
    }

    #[test]
    fn companion_quartic_for_p1_r2() {
        let r2 = range_spec(FamilyId::P1).intervals[1]
            .lower
            .quartic_root()
            .unwrap()
            .clone();
        assert_eq!(
            r2.quartic(),
            UnivariatePoly::from_descending(&[-12, 8, 16, 12, 3])
        );
    }

    #[test]
    fn contains_examples() {
        assert!(contains(FamilyId::P1, &big(1), &big(4)).unwrap());
        assert!(!contains(FamilyId::P1, &big(1), &big(3)).unwrap());
        assert!(contains(FamilyId::P3, &big(-1), &big(5)).unwrap());
        assert!(matches!(
            contains(FamilyId::P1, &big(1), &big(0)),
            Err(Error::UndefinedRatio)
        ));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify(FamilyId::P1, &big(0), &big(1)),
            Classification::DegenerateParameter
        );
        assert_eq!(
            classify(FamilyId::P1, &big(1), &big(-2)),
            Classification::DegenerateParameter
        );
        assert_eq!(
            classify(FamilyId::P1, &big(2), &big(1)),
            Classification::Valid
        );
        assert_eq!(
            classify(FamilyId::P1, &big(1), &big(3)),
            Classification::OutOfRange
        );
        assert_eq!(
            classify(FamilyId::P1, &big(3), &big(0)),
            Classification::UndefinedRatio
        );
        assert_eq!(
            classify(FamilyId::P1, &big(0), &big(0)),
            Classification::UndefinedRatio
        );
    }

    #[test]
    fn ratio_two_above_companion_root() {
        let r2 = range_spec(FamilyId::P1).intervals[1]
            .lower
            .quartic_root()
            .unwrap()
            .clone();
        assert_eq!(compare_to_root(&r2, &ratio(2, 1)), Ordering::Greater);
        assert_eq!(r2.quartic().sign_at(&ratio(2, 1)), Sign::Minus);
        assert_eq!(
            compare_to_root(&r2, &ratio(1777664, 1000000)),
            Ordering::Less
        );
        assert_eq!(
            compare_to_root(&r2, &ratio(1777665, 1000000)),
            Ordering::Greater
        );
    }

    #[test]
    fn points_near_roots_use_sign_test() {
        // 0.281267 < r1 < 0.281268 are both inside the bracket
        let p1 = range_spec(FamilyId::P1);
        assert!(p1.contains(&ratio(281267, 1_000_000)));
        assert!(!p1.contains(&ratio(281268, 1_000_000)));
        // the reference decimal itself is just below r1 = 0.2812679502117…
        assert!(p1.contains(&parse_decimal("0.28126795021").unwrap()));
    }

    #[test]
    fn all_self_checks_pass() {
        for id in FamilyId::ALL {
            let report = self_check(id);
            assert!(
                report.passed(),
                "{:?}",
                report.failures().collect::<Vec<_>>()
            );
        }
        assert_eq!(self_check(FamilyId::P3).bounds.len(), 2);
        let total: usize = FamilyId::ALL
            .iter()
            .map(|&id| self_check(id).bounds.len())
            .sum();
        assert_eq!(total, 13);
    }

    #[test]
    fn mistranscribed_quartic_fails_bracket_stage() {
        let mut spec = range_spec(FamilyId::P1).clone();
        if let RangeBound::QuarticRoot(r) = &mut spec.intervals[0].upper {
            // -3 -> +3 in the constant term
            r.radicand = UnivariatePoly::from_descending(&[12, 24, 16, 4, 3]);
        }
        let report = spec.self_check();
        let failure = report.failures().next().unwrap();
        assert_eq!(failure.label, "r1");
        assert_eq!(failure.failure.as_ref().unwrap().0, CheckStage::Bracket);
        assert!(failure
            .to_string()
            .starts_with("P1 r1: stage (i) bracket failed"));
    }

    #[test]
    fn unreflected_p4_r2_radicand_misses_the_anchor() {
        let mut spec = range_spec(FamilyId::P4).clone();
        if let RangeBound::QuarticRoot(r) = &mut spec.intervals[1].upper {
            r.substitution = Substitution::Identity;
        }
        let report = spec.self_check();
        let f = report.failures().next().unwrap();
        assert_eq!(
            (f.label, f.failure.as_ref().unwrap().0),
            ("r2", CheckStage::Bracket)
        );
    }

    #[test]
    fn wrong_inside_sign_fails_witness_stage() {
        let mut spec = range_spec(FamilyId::P2).clone();
        if let RangeBound::QuarticRoot(r) = &mut spec.intervals[0].lower {
            r.inside_sign = Sign::Minus;
        }
        let report = spec.self_check();
        let f = report.failures().next().unwrap();
        assert_eq!(f.failure.as_ref().unwrap().0, CheckStage::Witness);
    }

    #[test]
    fn shifted_decimal_fails_anchor_stage() {
        let mut spec = range_spec(FamilyId::P4).clone();
        if let RangeBound::QuarticRoot(r) = &mut spec.intervals[0].lower {
            r.approx = "1.44433098961"; // one unit in the 9th place
        }
        let report = spec.self_check();
        let f = report.failures().next().unwrap();
        assert_eq!(f.failure.as_ref().unwrap().0, CheckStage::Anchor);
    }

    #[test]
    fn rational_endpoints_are_never_valid() {
        for id in FamilyId::ALL {
            for iv in &range_spec(id).intervals {
                for b in [&iv.lower, &iv.upper] {
                    if let RangeBound::Rational(v) = b {
                        let c = classify(id, v.numer(), v.denom());
                        assert_ne!(c, Classification::Valid, "{id} endpoint {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn classification_round_trips_through_text() {
        for c in [
            Classification::Valid,
            Classification::OutOfRange,
            Classification::DegenerateParameter,
            Classification::UndefinedRatio,
        ] {
            assert_eq!(c.as_str().parse::<Classification>().unwrap(), c);
        }
    }
}
