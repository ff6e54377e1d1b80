//! Root-string bounds `B_kj` for Lie superalgebras with Cartan matrix over
//! fields of positive characteristic (and ℚ), and the simple-root reflection
//! they determine.
//!
//! `B_kj` is the largest `m >= 0` such that `α_j + m·α_k` is a root. It is
//! computed two independent ways: by scanning the scalar recursion
//! `d_m = (-1)^{i_k} (d_{m-1} - A_kj - m·A_kk)` for its first zero
//! ([`b_recursive`]) and by the closed-form case analysis ([`b_closed`]).
//!
//! Indices are 0-based throughout the library. The command-line tool and the
//! report documents use 1-based indices.

pub mod cartan;
mod error;
pub mod field;
pub mod format;
pub mod reflection;
pub mod report;

pub use cartan::{
    b_closed, b_closed_pair, b_recursive, b_recursive_pair, b_recursive_with_cap, b_table,
    d_closed_even, d_closed_odd, d_next, d_sequence, BValue, CartanDatum, DSequence, Parity,
    DEFAULT_RATIONAL_SCAN,
};
pub use error::Error;
pub use field::{check_irreducible, lift, FieldElement, FieldError, FieldSpec};
pub use format::{parse_cartan, serialize_cartan, ParseError, ParseErrorCode, ParseOptions};
pub use reflection::{determinant, reflect, unimodularity_check, ReflectionResult, RootVector};
pub use report::{ExitStatus, ReportDocument};

pub type Result<T, E = Error> = std::result::Result<T, E>;
