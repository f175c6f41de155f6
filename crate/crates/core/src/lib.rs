//! Membership in the balanced languages O_n, balanced decompositions, and
//! machine-checkable derivations of O₂ words in the 2-MCFG G₂.
//!
//! ```
//! use o2_mcfg::{grammar, parser, Word};
//!
//! let w: Word = "abAB".parse().unwrap();
//! let tree = parser::parse(&w, parser::Strategy::Guided).unwrap();
//! assert_eq!(grammar::certify(&grammar::g2(), &tree), Ok(w));
//! ```

pub mod decompose;
pub mod grammar;
pub mod oracle;
pub mod parser;
pub mod sample;
pub mod words;

pub use decompose::{BalDecomposition, FactorRef};
pub use grammar::{check_derivation, g2, DerivationTree, Mcfg};
pub use parser::{parse, ParseError, Strategy};
pub use words::{Balance, Bump, Letter, Word};
