//! Verification workbench for finite additively idempotent semirings.
//!
//! The crate is organised bottom-up: [`algebra`] holds the table
//! representation and axiom checks, [`term`] and [`parse`] the identity
//! language, [`satisfaction`] the brute-force decision procedure, and the
//! remaining modules build catalog, search and verification on top.

pub mod algebra;
pub mod basis;
pub mod catalog;
pub mod congruence;
pub mod construct;
pub mod enumerate;
pub mod error;
pub mod oracles;
pub mod parse;
pub mod satisfaction;
pub mod search;
pub mod structural;
pub mod term;
pub mod textfmt;

pub use algebra::{AdditiveOrder, Axiom, FiniteAiSemiring, ValidationReport, Violation};
pub use congruence::{is_congruence, quotient, Partition};
pub use construct::{adjoin_zero, direct_product, dual, power, strip_zero, subalgebra};
pub use error::{Error, Result};
pub use parse::{parse_identity, parse_identity_file, parse_scheme, parse_sum, parse_word};
pub use satisfaction::{
    satisfies, satisfies_scheme, Assignment, Budget, Corpus, CorpusBounds, SchemeVerdict, Verdict,
};
pub use term::{Identity, IdentityScheme, TermSum, UQPair, Var, Word};
pub use textfmt::{parse_algebra, print_algebra};
