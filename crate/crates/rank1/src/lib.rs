//! Combinatorial decision procedures for rank-one transformations presented
//! by their cutting and spacer parameters.
//!
//! A rank-one construction is described by a cutting parameter `r_n ≥ 2` and
//! a spacer parameter `s_n` (a word of `r_n - 1` naturals) per stage. This
//! crate represents finitely presented parameter sequences (an explicit
//! preamble plus an optional eventually periodic tail), materializes their
//! generating sequences, and mechanically decides isomorphism,
//! non-isomorphism, disjointness, partial total ergodicity, and minimal
//! self-joinings for the bounded and canonically bounded cases. Every
//! definite verdict carries witnesses that re-verify from the word-calculus
//! primitives alone.
//!
//! Module map:
//!
//! - [`words`]: finite words, occurrences, the incompatibility relation `⊥`,
//!   built-from decompositions, stage composition.
//! - [`params`]: parameter specs, validation, heights, bounds,
//!   commensurability, the spec text format.
//! - [`generate`]: generating sequences, telescoping, built-from analysis,
//!   canonical-at-depth reports, the incompatibility telescope.
//! - [`ergodic`]: the modular ergodicity criterion for powers, with
//!   re-verifiable traces.
//! - [`symbolic`]: pointed configurations, labeling functions, overlap
//!   intervals, replacement maps.
//! - [`decide`]: the verdict engine composing the above into justified
//!   answers.
//!
//! ```
//! use rank1::{decide, params::ParameterSpec, Answer};
//!
//! let chacon = ParameterSpec::parse_str("period:\nstage r=3 s=0,1\n").unwrap();
//! let mirror = ParameterSpec::parse_str("period:\nstage r=3 s=1,0\n").unwrap();
//! let opts = decide::Options::default();
//!
//! let verdict = decide::check_isomorphic(&chacon, &mirror, &opts).unwrap();
//! assert_eq!(verdict.answer, Answer::No);
//! assert!(verdict.certificates().all(|cert| cert.verify()));
//!
//! let verdict = decide::check_disjoint(&chacon, &mirror, &opts).unwrap();
//! assert_eq!(verdict.answer, Answer::Yes);
//! ```

// congruence checks are written as explicit modular arithmetic
#![allow(clippy::manual_is_multiple_of)]

pub mod decide;
pub mod ergodic;
pub mod error;
pub mod generate;
pub mod params;
pub mod symbolic;
pub mod words;

pub use decide::{Answer, Options, Rule, Verdict, Witness};
pub use ergodic::EdTrace;
pub use error::{Error, StageViolation};
pub use generate::{CanonicalReport, GeneratingSequence, TelescopeCertificate};
pub use params::{Heights, ParameterSpec, Stage};
pub use words::{Decomposition, FiniteWord, Occurrence};
