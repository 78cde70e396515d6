//! Bi-orthogonal monoclinic Diophantine parallelepipeds in exact arithmetic.
//!
//! A monoclinic piped has edges `x, y, z` with `x` orthogonal to the oblique
//! `(y, z)` parallelogram, face diagonals `a, b, c1, c2` and body diagonals
//! `d1, d2`, all integers. This crate
//!
//! - stores the four known integer parametrizations in `(m, n)` as polynomial
//!   data ([`families`]) and proves each one satisfies the seven defining
//!   equations as polynomial identities,
//! - decides exactly whether a ratio `m/n` lies in a family's validity range,
//!   including endpoints that are real roots of quartics ([`validity`]),
//! - scans parameter space, runs an independent brute-force search over edge
//!   lengths, and compares the two ([`search`]),
//! - reads and writes reproducible catalog files ([`catalog`]).
//!
//! ```
//! use monoclinic::{families::{evaluate, FamilyId}, piped::is_realizable};
//!
//! let p = evaluate(FamilyId::P1, &1.into(), &4.into()).unwrap();
//! assert_eq!(p.x().to_string(), "49504");
//! assert!(is_realizable(&p));
//! ```

pub mod catalog;
pub mod exactmath;
pub mod families;
pub mod piped;
pub mod search;
pub mod validity;

pub use families::{family, FamilyId, Length, ParamFamily};
pub use piped::{EquationReport, MonoclinicPiped};
pub use search::{CatalogEntry, Source};
pub use validity::Classification;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("zero piped has no primitive form")]
    ZeroPiped,
    #[error("degenerate parameter point (m, n) = (0, 0)")]
    DegenerateParameterPoint,
    #[error("ratio undefined: n = 0")]
    UndefinedRatio,
    #[error("unknown family {0:?} (expected P1, P2, P3 or P4)")]
    UnknownFamily(String),
    #[error("length {field} is negative")]
    NegativeLength { field: &'static str },
    #[error("entry is not primitive and canonical: {0}")]
    NotPrimitive(String),
    #[error("cannot parse {text:?} at byte {position}: {message}")]
    Notation {
        text: String,
        position: usize,
        message: String,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0}")]
    Parse(String),
    #[error("line {line}: {message}")]
    CatalogParse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
