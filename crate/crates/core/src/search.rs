//! Family scans over parameter space, the brute-force oracle, and coverage.
//!
//! Both searches split their work across rayon workers and merge the pieces
//! in a fixed order, so the output never depends on the thread count.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;

use crate::families::{evaluate, FamilyId};
use crate::piped::{canonicalize, is_canonical, primitive_reduce, MonoclinicPiped};
use crate::validity::{classify, Classification};
use crate::Error;

/// Where a catalog entry came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    Family { id: FamilyId, m: BigInt, n: BigInt },
    BruteForce,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Family { id, m, n } => write!(f, "{id}({m}, {n})"),
            Source::BruteForce => f.write_str("bruteforce"),
        }
    }
}

/// A found piped with its provenance and normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CatalogEntry {
    pub source: Source,
    pub raw: MonoclinicPiped,
    /// `canonicalize(primitive_reduce(raw))`.
    pub primitive: MonoclinicPiped,
    pub content: BigInt,
}

impl CatalogEntry {
    pub fn new(source: Source, raw: MonoclinicPiped) -> Result<Self, Error> {
        let (reduced, content) = primitive_reduce(&raw)?;
        Ok(Self {
            source,
            primitive: canonicalize(&reduced),
            raw,
            content,
        })
    }

    /// Builds the entry for a family point.
    pub fn from_family(id: FamilyId, m: BigInt, n: BigInt) -> Result<Self, Error> {
        let raw = evaluate(id, &m, &n)?;
        Self::new(Source::Family { id, m, n }, raw)
    }

    /// True when `primitive` really is the canonical primitive form.
    pub fn primitive_is_normal(&self) -> bool {
        is_canonical(&self.primitive)
            && primitive_reduce(&self.primitive).is_ok_and(|(_, g)| g.is_one())
    }
}

/// Result of [`scan`] with the bookkeeping the CLI summarizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanOutcome {
    pub entries: Vec<CatalogEntry>,
    /// Coprime `(m, n)` pairs examined.
    pub pairs_tried: u64,
    /// Pairs that classified as valid (before deduplication).
    pub valid_pairs: u64,
}

/// Scans coprime `(m, n)` with `1 <= n <= height`, `|m| <= height`, keeps the
/// valid ones, and returns entries ordered by `(n, m)` with repeated primitive
/// tuples dropped after their first appearance.
pub fn scan(id: FamilyId, height: u32) -> Result<ScanOutcome, Error> {
    if height == 0 {
        return Err(Error::InvalidArgument("height must be at least 1".into()));
    }
    let h = i64::from(height);
    let per_n: Vec<(u64, Vec<CatalogEntry>)> = (1..=h)
        .into_par_iter()
        .map(|n| {
            let mut tried = 0;
            let mut found = Vec::new();
            for m in -h..=h {
                if m.gcd(&n) != 1 {
                    continue;
                }
                tried += 1;
                let (mb, nb) = (BigInt::from(m), BigInt::from(n));
                if classify(id, &mb, &nb) == Classification::Valid {
                    found.push(
                        CatalogEntry::from_family(id, mb, nb)
                            .expect("valid parameters are never (0, 0)"),
                    );
                }
            }
            (tried, found)
        })
        .collect();

    let pairs_tried = per_n.iter().map(|(t, _)| t).sum();
    let valid_pairs = per_n.iter().map(|(_, f)| f.len() as u64).sum();
    let mut seen = HashSet::new();
    let entries = per_n
        .into_iter()
        .flat_map(|(_, f)| f)
        .filter(|e| seen.insert(e.primitive.clone()))
        .collect();
    Ok(ScanOutcome {
        entries,
        pairs_tried,
        valid_pairs,
    })
}

pub fn scan_family(id: FamilyId, height: u32) -> Result<Vec<CatalogEntry>, Error> {
    scan(id, height).map(|o| o.entries)
}

/// Largest `x` the oracle accepts; keeps every intermediate inside `u128`.
pub const MAX_BRUTE_FORCE_X: u64 = 1_000_000_000;

/// Every primitive monoclinic piped with `x <= x_max`, in ascending tuple order.
///
/// Because a primitive tuple is found at its own `x`, the result for a smaller
/// bound is always a prefix of the result for a larger one.
pub fn brute_force(x_max: u64) -> Result<Vec<CatalogEntry>, Error> {
    if x_max == 0 || x_max > MAX_BRUTE_FORCE_X {
        return Err(Error::InvalidArgument(format!(
            "x_max must be in 1..={MAX_BRUTE_FORCE_X}"
        )));
    }
    let per_x: Vec<Vec<CatalogEntry>> = (1..=x_max).into_par_iter().map(brute_force_at).collect();
    let mut merged: BTreeMap<MonoclinicPiped, CatalogEntry> = BTreeMap::new();
    for entry in per_x.into_iter().flatten() {
        merged.entry(entry.primitive.clone()).or_insert(entry);
    }
    Ok(merged.into_values().collect())
}

/// All pipeds whose edge `x` is exactly `x`, as canonical primitive entries.
pub fn brute_force_at(x: u64) -> Vec<CatalogEntry> {
    let legs = pythagorean_legs(x);
    let leg_set: HashSet<u128> = legs.iter().copied().collect();
    let x = u128::from(x);
    let x_sq = x * x;
    let mut found: BTreeMap<MonoclinicPiped, CatalogEntry> = BTreeMap::new();
    for (i, &y) in legs.iter().enumerate() {
        for &z in &legs[i..] {
            let (lo, hi) = (z - y, y + z);
            let face = 2 * y * y + 2 * z * z;
            for &c1 in legs.iter().filter(|&&c| lo < c && c < hi) {
                let Some(c2) = exact_sqrt(face - c1 * c1) else {
                    continue;
                };
                if c1 >= c2 || !leg_set.contains(&c2) {
                    continue;
                }
                let root = |leg: u128| exact_sqrt(x_sq + leg * leg).expect("leg of x");
                let raw = MonoclinicPiped::new(
                    [x, y, z, root(y), root(z), c1, c2, root(c1), root(c2)].map(BigInt::from),
                )
                .expect("lengths are nonnegative");
                let entry = CatalogEntry::new(Source::BruteForce, raw).expect("x > 0");
                found.entry(entry.primitive.clone()).or_insert(entry);
            }
        }
    }
    found.into_values().collect()
}

/// Sorted positive `y` with `x² + y²` a perfect square, from the factor pairs
/// `r·s = x²` of equal parity (`y = (s - r)/2`).
pub fn pythagorean_legs(x: u64) -> Vec<u128> {
    if x == 0 {
        return Vec::new();
    }
    let x_sq = u128::from(x) * u128::from(x);
    let mut legs: Vec<u128> = divisors_of_square(x)
        .into_iter()
        .filter(|&r| r < u128::from(x))
        .filter_map(|r| {
            let s = x_sq / r;
            ((s - r) % 2 == 0).then(|| (s - r) / 2)
        })
        .collect();
    legs.sort_unstable();
    legs
}

fn divisors_of_square(x: u64) -> Vec<u128> {
    let mut divisors = vec![1u128];
    let mut rest = x;
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            divisors = expand_divisors(&divisors, u128::from(p), 2 * e);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        divisors = expand_divisors(&divisors, u128::from(rest), 2);
    }
    divisors
}

fn expand_divisors(divisors: &[u128], p: u128, exp: u32) -> Vec<u128> {
    let mut out = Vec::with_capacity(divisors.len() * (exp as usize + 1));
    for &d in divisors {
        let mut pk = 1u128;
        for _ in 0..=exp {
            out.push(d * pk);
            pk *= p;
        }
    }
    out
}

fn exact_sqrt(v: u128) -> Option<u128> {
    let r = v.isqrt();
    (r * r == v).then_some(r)
}

/// Brute-force tuples matched to family scan output by primitive tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    /// Oracle entry with the source of the first scan entry sharing its primitive.
    pub matched: Vec<(CatalogEntry, Source)>,
    pub unmatched: Vec<CatalogEntry>,
    pub oracle_entries: usize,
    pub scan_entries: usize,
}

pub fn coverage(oracle: &[CatalogEntry], scans: &[CatalogEntry]) -> Result<CoverageReport, Error> {
    if let Some(bad) = oracle
        .iter()
        .chain(scans)
        .find(|e| !e.primitive_is_normal())
    {
        return Err(Error::NotPrimitive(bad.primitive.to_string()));
    }
    let mut by_primitive: BTreeMap<&MonoclinicPiped, &Source> = BTreeMap::new();
    for e in scans {
        by_primitive.entry(&e.primitive).or_insert(&e.source);
    }
    let mut matched = Vec::new();
    let mut unmatched = Vec::new();
    for e in oracle {
        match by_primitive.get(&e.primitive) {
            Some(&src) => matched.push((e.clone(), src.clone())),
            None => unmatched.push(e.clone()),
        }
    }
    Ok(CoverageReport {
        matched,
        unmatched,
        oracle_entries: oracle.len(),
        scan_entries: scans.len(),
    })
}
