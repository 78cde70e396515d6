//! The four parametrization families as polynomial data.
//!
//! Each family is a table of nine formulas, one per length, written in the
//! usual factored notation (`4(n^2-2m^2)(n^2+2mn+2m^2)(n^2+4mn+2m^2)`) next to
//! the expanded coefficient row of the same degree-6 form. The factored text is
//! parsed and multiplied out at load time; the tests require it to agree with
//! the expanded row, and [`ParamFamily::identity_report`] checks the seven
//! piped equations as polynomial identities.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exactmath::BivariatePoly;
use crate::piped::MonoclinicPiped;
use crate::Error;

/// Total degree of every family formula.
pub const FAMILY_DEGREE: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    P1,
    P2,
    P3,
    P4,
}

impl FamilyId {
    pub const ALL: [FamilyId; 4] = [FamilyId::P1, FamilyId::P2, FamilyId::P3, FamilyId::P4];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::P1 => "P1",
            FamilyId::P2 => "P2",
            FamilyId::P3 => "P3",
            FamilyId::P4 => "P4",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_uppercase().as_str() {
            "P1" => Ok(FamilyId::P1),
            "P2" => Ok(FamilyId::P2),
            "P3" => Ok(FamilyId::P3),
            "P4" => Ok(FamilyId::P4),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

/// One of the nine lengths, in record order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Length {
    X,
    Y,
    Z,
    A,
    B,
    C1,
    C2,
    D1,
    D2,
}

impl Length {
    pub const ALL: [Length; 9] = [
        Length::X,
        Length::Y,
        Length::Z,
        Length::A,
        Length::B,
        Length::C1,
        Length::C2,
        Length::D1,
        Length::D2,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        crate::piped::FIELD_NAMES[self.index()]
    }
}

/// A formula in factored form: an integer scale times a product of powers of
/// polynomial factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub text: String,
    pub scale: BigInt,
    pub factors: Vec<(BivariatePoly, u32)>,
}

impl Formula {
    /// Parses notation such as `16mn(n+m)(n+2m)(n^2+2mn+2m^2)` or `4(n^2+2mn+2m^2)^3`.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut parser = Notation::new(text);
        let formula = parser.formula()?;
        parser.expect_end()?;
        Ok(formula)
    }

    /// Multiplies the factor list out.
    pub fn expand(&self) -> BivariatePoly {
        self.factors.iter().fold(
            BivariatePoly::constant(self.scale.clone()),
            |acc, (f, e)| &acc * &f.pow(*e),
        )
    }

    /// Factors of total degree one.
    pub fn linear_factors(&self) -> impl Iterator<Item = &BivariatePoly> + '_ {
        self.factors
            .iter()
            .map(|(f, _)| f)
            .filter(|f| f.total_degree() == Some(1))
    }
}

struct Notation<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Notation<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            text,
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Notation {
            text: self.text.to_string(),
            position: self.pos,
            message: what.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect_end(&mut self) -> Result<(), Error> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.err("unexpected trailing input")),
        }
    }

    fn integer(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.text[start..self.pos].parse().unwrap())
    }

    fn exponent(&mut self) -> Result<u32, Error> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let e = self
            .integer()
            .ok_or_else(|| self.err("expected exponent"))?;
        u32::try_from(e).map_err(|_| self.err("exponent too large"))
    }

    fn variable(&mut self) -> Option<BivariatePoly> {
        match self.peek()? {
            b'm' => {
                self.pos += 1;
                Some(BivariatePoly::m())
            }
            b'n' => {
                self.pos += 1;
                Some(BivariatePoly::n())
            }
            _ => None,
        }
    }

    fn formula(&mut self) -> Result<Formula, Error> {
        let scale = self.integer().unwrap_or_else(|| BigInt::from(1));
        let mut factors = Vec::new();
        loop {
            match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    let inner = self.sum()?;
                    if self.peek() != Some(b')') {
                        return Err(self.err("expected ')'"));
                    }
                    self.pos += 1;
                    let e = self.exponent()?;
                    factors.push((inner, e));
                }
                Some(b'm') | Some(b'n') => {
                    let v = self.variable().unwrap();
                    let e = self.exponent()?;
                    factors.push((v, e));
                }
                None => break,
                Some(_) => return Err(self.err("expected factor")),
            }
        }
        Ok(Formula {
            text: self.text.to_string(),
            scale,
            factors,
        })
    }

    fn sum(&mut self) -> Result<BivariatePoly, Error> {
        let mut acc = BivariatePoly::zero();
        let mut negative = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            negative = true;
        }
        loop {
            let t = self.term()?;
            acc = if negative { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<BivariatePoly, Error> {
        let coeff = self.integer();
        let mut t = BivariatePoly::constant(coeff.clone().unwrap_or_else(|| BigInt::from(1)));
        let mut saw_var = false;
        while let Some(v) = self.variable() {
            let e = self.exponent()?;
            t = &t * &v.pow(e);
            saw_var = true;
        }
        if coeff.is_none() && !saw_var {
            return Err(self.err("expected term"));
        }
        Ok(t)
    }
}

/// Static transcription: factored text plus the expanded row, where entry `i`
/// of the row is the coefficient of `m^i n^(6-i)`.
type FamilyTable = [(&'static str, [i64; 7]); 9];

const P1_TABLE: FamilyTable = [
    (
        "4(n^2-2m^2)(n^2+2mn+2m^2)(n^2+4mn+2m^2)",
        [4, 24, 40, 0, -80, -96, -32],
    ),
    (
        "3(n^2-2m^2)(n^2+2mn+2m^2)(n^2+4mn+2m^2)",
        [3, 18, 30, 0, -60, -72, -24],
    ),
    (
        "16mn(n+m)(n+2m)(n^2+2mn+2m^2)",
        [0, 16, 80, 160, 160, 64, 0],
    ),
    (
        "5(n^2-2m^2)(n^2+2mn+2m^2)(n^2+4mn+2m^2)",
        [5, 30, 50, 0, -100, -120, -40],
    ),
    ("4(n^2+2mn+2m^2)^3", [4, 24, 72, 128, 144, 96, 32]),
    (
        "(n^2+4mn+2m^2)(n^2+4mn+6m^2)(3n^2+4mn+2m^2)",
        [3, 28, 106, 208, 212, 112, 24],
    ),
    (
        "(n^2-2m^2)(n^2+2m^2)(3n^2+8mn+6m^2)",
        [3, 8, 6, 0, -12, -32, -24],
    ),
    (
        "(n^2+4mn+2m^2)(5n^4+16mn^3+28m^2n^2+32m^3n+20m^4)",
        [5, 36, 102, 176, 204, 144, 40],
    ),
    (
        "(n^2-2m^2)(5n^4+24mn^3+52m^2n^2+48m^3n+20m^4)",
        [5, 24, 42, 0, -84, -96, -40],
    ),
];

const P2_TABLE: FamilyTable = [
    (
        "4(n^2-4mn-4m^2)(5n^2+8mn+4m^2)(7n^2+12mn+4m^2)",
        [140, -96, -1840, -3840, -3520, -1536, -256],
    ),
    (
        "3(n^2-4mn-4m^2)(5n^2+8mn+4m^2)(7n^2+12mn+4m^2)",
        [105, -72, -1380, -2880, -2640, -1152, -192],
    ),
    (
        "32n(n+m)(n+2m)(3n+2m)(5n^2+8mn+4m^2)",
        [480, 2528, 5120, 5120, 2560, 512, 0],
    ),
    (
        "5(n^2-4mn-4m^2)(5n^2+8mn+4m^2)(7n^2+12mn+4m^2)",
        [175, -120, -2300, -4800, -4400, -1920, -320],
    ),
    (
        "4(5n^2+8mn+4m^2)^3",
        [500, 2400, 5040, 5888, 4032, 1536, 256],
    ),
    (
        "(7n^2+12mn+4m^2)(9n^2+20mn+12m^2)(11n^2+12mn+4m^2)",
        [693, 3484, 7188, 7776, 4656, 1472, 192],
    ),
    (
        "(n^2-4mn-4m^2)(3n^2+4mn+4m^2)(17n^2+28mn+12m^2)",
        [51, -52, -596, -1312, -1456, -832, -192],
    ),
    (
        "(7n^2+12mn+4m^2)(101n^4+312mn^3+424m^2n^2+288m^3n+80m^4)",
        [707, 3396, 7116, 8352, 5712, 2112, 320],
    ),
    (
        "(n^2-4mn-4m^2)(149n^4+488mn^3+616m^2n^2+352m^3n+80m^4)",
        [149, -108, -1932, -4064, -3792, -1728, -320],
    ),
];

const P3_TABLE: FamilyTable = [
    (
        "4(7n^2-8mn-16m^2)(13n^2+24mn+16m^2)(17n^2+40mn+16m^2)",
        [6188, 18912, -3520, -76800, -117760, -73728, -16384],
    ),
    (
        "3(7n^2-8mn-16m^2)(13n^2+24mn+16m^2)(17n^2+40mn+16m^2)",
        [4641, 14184, -2640, -57600, -88320, -55296, -12288],
    ),
    (
        "32n(n+4m)(3n+4m)(5n+4m)(13n^2+24mn+16m^2)",
        [6240, 49792, 138240, 184320, 122880, 32768, 0],
    ),
    (
        "5(7n^2-8mn-16m^2)(13n^2+24mn+16m^2)(17n^2+40mn+16m^2)",
        [7735, 23640, -4400, -96000, -147200, -92160, -20480],
    ),
    (
        "4(13n^2+24mn+16m^2)^3",
        [8788, 48672, 122304, 175104, 150528, 73728, 16384],
    ),
    (
        "(17n^2+40mn+16m^2)(19n^2+56mn+48m^2)(33n^2+40mn+16m^2)",
        [10659, 69416, 184528, 254720, 191744, 75776, 12288],
    ),
    (
        "(7n^2-8mn-16m^2)(9n^2+8mn+16m^2)(43n^2+88mn+48m^2)",
        [2709, 4856, -2512, -20224, -38144, -34816, -12288],
    ),
    (
        "(17n^2+40mn+16m^2)(725n^4+2384mn^3+3808m^2n^2+3328m^3n+1280m^4)",
        [12325, 69528, 171696, 247040, 215808, 104448, 20480],
    ),
    (
        "(7n^2-8mn-16m^2)(965n^4+3856mn^3+6112m^2n^2+4352m^3n+1280m^4)",
        [6755, 19272, -3504, -80128, -123648, -79872, -20480],
    ),
];

const P4_TABLE: FamilyTable = [
    (
        "4(7n^2-12mn-18m^2)(17n^2+30mn+18m^2)(23n^2+48mn+18m^2)",
        [10948, 23400, -39960, -172800, -213840, -116640, -23328],
    ),
    (
        "3(7n^2-12mn-18m^2)(17n^2+30mn+18m^2)(23n^2+48mn+18m^2)",
        [8211, 17550, -29970, -129600, -160380, -87480, -17496],
    ),
    (
        "48n(n+3m)(4n+3m)(5n+6m)(17n^2+30mn+18m^2)",
        [16320, 109584, 270000, 324000, 194400, 46656, 0],
    ),
    (
        "5(7n^2-12mn-18m^2)(17n^2+30mn+18m^2)(23n^2+48mn+18m^2)",
        [13685, 29250, -49950, -216000, -267300, -145800, -29160],
    ),
    (
        "4(17n^2+30mn+18m^2)^3",
        [19652, 104040, 246024, 328320, 260496, 116640, 23328],
    ),
    (
        "9(3n^2+8mn+6m^2)(23n^2+48mn+18m^2)(41n^2+48mn+18m^2)",
        [25461, 150840, 365418, 461376, 319788, 116640, 17496],
    ),
    (
        "3(7n^2-12mn-18m^2)(11n^2+12mn+18m^2)(19n^2+36mn+18m^2)",
        [4389, 5580, -13338, -50544, -76788, -58320, -17496],
    ),
    (
        "(23n^2+48mn+18m^2)(1205n^4+3912mn^3+5940m^2n^2+4752m^3n+1620m^4)",
        [27715, 147816, 346086, 464832, 372276, 163296, 29160],
    ),
    (
        "(7n^2-12mn-18m^2)(1685n^4+6288mn^3+9180m^2n^2+6048m^3n+1620m^4)",
        [11795, 23796, -41526, -181008, -226476, -128304, -29160],
    ),
];

fn table(id: FamilyId) -> &'static FamilyTable {
    match id {
        FamilyId::P1 => &P1_TABLE,
        FamilyId::P2 => &P2_TABLE,
        FamilyId::P3 => &P3_TABLE,
        FamilyId::P4 => &P4_TABLE,
    }
}

/// One parametrization: nine signed degree-6 forms in `(m, n)`.
///
/// `polys` holds the expanded forms used for evaluation and identity checks;
/// `formulas` keeps the factored transcription they were checked against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamFamily {
    pub id: FamilyId,
    pub formulas: [Formula; 9],
    pub polys: [BivariatePoly; 9],
}

impl ParamFamily {
    fn load(id: FamilyId) -> Self {
        let rows = table(id);
        let formulas = rows
            .each_ref()
            .map(|(text, _)| Formula::parse(text).unwrap_or_else(|e| panic!("{id} table: {e}")));
        let polys = rows
            .each_ref()
            .map(|(_, row)| BivariatePoly::homogeneous(row));
        Self {
            id,
            formulas,
            polys,
        }
    }

    pub fn poly(&self, length: Length) -> &BivariatePoly {
        &self.polys[length.index()]
    }

    pub fn formula(&self, length: Length) -> &Formula {
        &self.formulas[length.index()]
    }

    /// Signed values of the nine forms at `(m, n)`.
    pub fn signed_values(&self, m: &BigInt, n: &BigInt) -> [BigInt; 9] {
        self.polys.each_ref().map(|p| p.eval(m, n))
    }

    /// The piped at `(m, n)`: the absolute value of each form.
    pub fn evaluate(&self, m: &BigInt, n: &BigInt) -> Result<MonoclinicPiped, Error> {
        if m.is_zero() && n.is_zero() {
            return Err(Error::DegenerateParameterPoint);
        }
        MonoclinicPiped::new(self.signed_values(m, n).map(|v| v.abs()))
    }

    /// Residuals of the seven equations as polynomials in `(m, n)`.
    pub fn identity_report(&self) -> IdentityReport {
        let sq = |l: Length| {
            let p = self.poly(l);
            p * p
        };
        let [x, y, z, a, b, c1, c2, d1, d2] = Length::ALL.map(sq);
        let two = BigInt::from(2);
        let residuals = [
            &(&x + &y) - &a,
            &(&x + &z) - &b,
            &(&x + &c1) - &d1,
            &(&x + &c2) - &d2,
            &(&y + &z).scale(&two) - &(&c1 + &c2),
            &(&y + &b).scale(&two) - &(&d1 + &d2),
            &(&a + &z).scale(&two) - &(&d1 + &d2),
        ];
        IdentityReport {
            family: self.id,
            residuals,
        }
    }

    /// `3X = 4Y` and `4A = 5X` as polynomial identities.
    pub fn ratio_345_holds(&self) -> bool {
        let x = self.poly(Length::X);
        let y = self.poly(Length::Y);
        let a = self.poly(Length::A);
        x.scale(&BigInt::from(3)) == y.scale(&BigInt::from(4))
            && a.scale(&BigInt::from(4)) == x.scale(&BigInt::from(5))
    }

    /// Linear factors of the `z` formula; the piped collapses where any vanishes.
    pub fn degenerate_factors(&self) -> Vec<&BivariatePoly> {
        self.formula(Length::Z).linear_factors().collect()
    }
}

/// Per-equation residual polynomials for one family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub family: FamilyId,
    pub residuals: [BivariatePoly; 7],
}

impl IdentityReport {
    pub fn passes(&self) -> [bool; 7] {
        self.residuals.each_ref().map(BivariatePoly::is_zero)
    }

    pub fn all_pass(&self) -> bool {
        self.residuals.iter().all(BivariatePoly::is_zero)
    }

    /// `(equation number, residual)` for each failing equation.
    pub fn failures(&self) -> impl Iterator<Item = (usize, &BivariatePoly)> + '_ {
        self.residuals
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_zero())
            .map(|(k, r)| (k + 1, r))
    }
}

static FAMILIES: OnceLock<[ParamFamily; 4]> = OnceLock::new();

/// The transcribed family for `id`.
pub fn family(id: FamilyId) -> &'static ParamFamily {
    &FAMILIES.get_or_init(|| FamilyId::ALL.map(ParamFamily::load))[id.index()]
}

pub fn evaluate(id: FamilyId, m: &BigInt, n: &BigInt) -> Result<MonoclinicPiped, Error> {
    family(id).evaluate(m, n)
}

pub fn verify_identities(id: FamilyId) -> IdentityReport {
    family(id).identity_report()
}

pub fn ratio_345_check(id: FamilyId) -> bool {
    family(id).ratio_345_holds()
}
