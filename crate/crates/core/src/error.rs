use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every layer of the crate.
///
/// Parse-time variants carry a byte offset into the source text; evaluation
/// and sweep variants carry the point or target that triggered them so a
/// report can say *where* a computation died.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },

    #[error("`{name}` at byte {offset} does not define an analytic function")]
    NonAnalyticConstruct { offset: usize, name: String },

    #[error("math domain violation at {at}: {what}")]
    MathDomain { at: Complex64, what: String },

    #[error("evaluation point {at} lies outside the open unit disk")]
    OutsideDisk { at: Complex64 },

    #[error("inner value {value} at {at} leaves the unit disk, composition undefined")]
    RangeViolation { at: Complex64, value: Complex64 },

    #[error("map is not orientation-preserving at 0: |h'(0)| = {hp0} <= |g'(0)| = {gp0}")]
    OrientationError { hp0: f64, gp0: f64 },

    #[error("dilatation is unimodular at {at}, hyperbolic weight degenerates")]
    DilatationUnimodular { at: Complex64 },

    #[error("contour of radius {radius} passes through target {target}")]
    ContourThroughTarget { target: Complex64, radius: f64 },

    #[error("Jacobian {jacobian} at witness {at} violates positive orientation")]
    OrientationViolation { at: Complex64, jacobian: f64 },

    #[error("iteration failed to converge: {what}")]
    NonConvergence { what: String },

    #[error("Jacobian is numerically singular at seed {at}")]
    JacobianSingular { at: Complex64 },

    #[error("seed lattice needs {needed} points, budget is {budget}")]
    SeedBudgetExceeded { needed: usize, budget: usize },

    #[error("radial profile has {rungs} rungs, limsup extrapolation needs at least 6")]
    InsufficientProfile { rungs: usize },

    #[error("missing parameter `{name}` required by this criterion")]
    MissingParam { name: &'static str },

    #[error("criterion `{criterion}` applies to analytic maps only, dilatation is not identically zero")]
    AnalyticOnly { criterion: String },

    #[error("invalid grid: {what}")]
    BadGrid { what: String },
}

pub type Result<T> = std::result::Result<T, Error>;
