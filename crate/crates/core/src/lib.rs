//! Numerical toolkit for planar harmonic mappings f = h + conj(g) on the
//! unit disk: Schwarzian-type differential operators, hyperbolic derivatives,
//! weighted sup-norms along radius ladders, valence counting by the argument
//! principle with a Newton cross-check, and pass/fail verdicts for the
//! classical and harmonic univalence / bounded-valence criteria.
//!
//! Layering, bottom up:
//!
//! * [`expr`]: analytic expression trees with order-3 jet evaluation.
//! * [`harmonic`]: pairs (h, g) in canonical form, dilatation jets, Jacobian.
//! * [`operators`]: P, S, their harmonic versions, hyperbolic derivative,
//!   chain-rule residuals.
//! * [`sampling`]: circle suprema, radius ladders, boundary limsup estimates.
//! * [`valence`]: winding numbers, Newton preimages, target sweeps.
//! * [`criteria`]: univalence / bounded-valence verdicts and their
//!   cross-validation against measured valence.
//! * [`cover`]: annulus cover families and derivative growth checks.
//! * [`report`]: deterministic JSON / CSV serialization for the CLI.
//!
//! All evaluation happens strictly inside |z| < 1; every numerical hazard
//! (small denominators, branch cuts, unimodular dilatations, singular
//! Jacobians) is an explicit error, never a silent NaN.

pub mod cover;
pub mod criteria;
pub mod error;
pub mod expr;
pub mod harmonic;
pub mod mobius;
pub mod operators;
pub mod quasi;
pub mod report;
pub mod sampling;
pub mod valence;

pub use error::{Error, Result};
pub use expr::{AnalyticExpr, Jet3};
pub use harmonic::{DilatationJet, HarmonicMap, PointEval};
pub use operators::OperatorValues;
pub use sampling::{RadialProfile, SupEstimate};
pub use valence::ValenceReport;
pub use criteria::Verdict;
pub use cover::CoverFamily;
