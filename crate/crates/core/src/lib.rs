//! Numerical toolkit for probing discreteness of subgroups of SL(2,ℂ)
//! against a fixed loxodromic or elliptic test map.
//!
//! The pieces: quaternion arithmetic, 2×2 matrix algebra over ℂ and ℍ with
//! the indefinite Hermitian form, the isometric embedding of SL(2,ℂ) into
//! U(1,1;ℍ), element classification, Jørgensen-inequality evaluation, the
//! upper-triangular conjugation that kills an off-diagonal entry, and a
//! breadth-first word scanner that looks for non-discreteness witnesses.

pub mod classify;
pub mod conjugate;
pub mod embed;
pub mod jorgensen;
pub mod matrix2;
pub mod quaternion;
pub mod sample;
pub mod scanner;

pub use classify::{classify, commutator, fixed_points, is_elementary_pair, ElementClass, Kind};
pub use conjugate::{conj_kill, midpoint_conjugation_check, perturbed_sequence, solve_beta};
pub use embed::{detect_form, embed, project_ball, sl2c_trace_type, SubmanifoldType};
pub use jorgensen::{jorgensen_diag, jorgensen_value, JorgensenReport, TestMap};
pub use matrix2::{HermPair, Mat2C, Mat2H};
pub use quaternion::Quaternion;
pub use scanner::{enumerate_words, scan, GroupSpec, ScanConfig, ScanReport};

/// Tolerance defaults shared across the toolkit. Every contract below pins
/// the value it is checked against; callers can override per operation where
/// an `eps`/`tol` parameter exists.
pub mod tol {
    /// |det g − 1| allowed at `Mat2C` construction.
    pub const DET: f64 = 1e-9;
    /// ‖g*Jg − J‖_F allowed at `Mat2H` construction.
    pub const UNITARY: f64 = 1e-9;
    /// Componentwise absolute tolerance of `Quaternion::approx_eq`.
    pub const APPROX_EQ: f64 = 1e-10;
    /// A complex trace t counts as real when |Im t| ≤ REAL_TRACE·(1+|t|).
    pub const REAL_TRACE: f64 = 1e-9;
    /// Default boundary band for `classify`.
    pub const CLASSIFY_EPS: f64 = 1e-9;
    /// Default tolerance of the invariant-submanifold form detectors.
    pub const FORM: f64 = 1e-8;
    /// Default near-identity cutoff of the scanner.
    pub const NEAR_IDENTITY_DELTA: f64 = 1e-3;
    /// Jørgensen values in [1, 1+TIGHT_BAND] are flagged tight.
    pub const TIGHT_BAND: f64 = 1e-6;
    /// Default element cap of the word enumerator.
    pub const WORD_CAP: usize = 2_000_000;
    /// Quantization grid of the up-to-sign dedup fingerprint.
    pub const DEDUP_GRID: f64 = 1e-9;
}

/// Errors surfaced by the library. Input-shaped problems (bad matrices,
/// degenerate configurations) are distinguished from internal tolerance
/// failures so the CLI can map them to different exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("zero divisor: the zero quaternion has no inverse")]
    ZeroDivisor,
    #[error("not in SL(2,C): |det - 1| = {residual:.3e} exceeds {tol:.1e}")]
    NotSl2C { residual: f64, tol: f64 },
    #[error("not in U(1,1;H): form residual {residual:.3e} exceeds {tol:.1e}")]
    NotUnitary { residual: f64, tol: f64 },
    #[error("point at infinity of the chart: second coordinate is zero")]
    PointAtInfinity,
    #[error("vector outside the closed ball: <z,z> = {0:.6e} > 0")]
    OutsideBall(f64),
    #[error("identity has no isolated fixed points")]
    IdentityFixedPoints,
    #[error("no solution (degenerate): c = 0, a = d, b != 0")]
    DegenerateConjugation,
    #[error("quadratic needs c != 0; pre-swap the matrix or use conj_kill")]
    QuadraticNeedsC,
    #[error("not diagonalizable in this sense: {0}")]
    NotDiagonalizable(String),
    #[error("test map must be loxodromic or elliptic, got {0}")]
    BadTestMap(String),
    #[error("depth too large: {count} elements exceed the cap {cap}")]
    DepthTooLarge { count: usize, cap: usize },
    #[error("invalid group spec: {0}")]
    BadGroupSpec(String),
    #[error("internal tolerance failure: {0}")]
    ToleranceFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
