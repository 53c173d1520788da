//! Symbolic engine for the filtered Rabinowitz Floer chain complex of a
//! negative line bundle `E -> M`.
//!
//! Generators, actions and gradings are computed exactly from a handful of
//! scenario parameters. The fibre differential `d_0` is built in; higher
//! pieces of the differential are supplied as validated tables. Given a
//! cycle, [`vanishing::find_primitive`] constructs a primitive level by level
//! and verifies it by direct evaluation.

pub mod bounds;
pub mod bundle;
pub mod chain;
pub mod commands;
pub mod differential;
pub mod error;
pub mod generator;
pub mod random;
pub mod rational;
pub mod scenario;
pub mod vanishing;

pub use bundle::{BundleParams, CaseTag, CritPoint, Sphericity, TheoremCase};
pub use chain::{Chain, Terms, Truncated};
pub use differential::{FilteredDifferential, HigherDifferentialEntry, Rule, TableReport};
pub use error::{Error, Result};
pub use generator::{Generator, Grading, Sign, Slice};
pub use rational::Rational;
pub use scenario::Scenario;
pub use vanishing::PrimitiveResult;
