//! Numerical tolerances shared by the state algebra, the copier constructions
//! and the invariant suite.

/// Hermiticity, unit trace and positivity slack for a 2×2 density matrix.
pub const STATE: f64 = 1e-12;

/// Unit-norm slack for a joint pure state.
pub const JOINT_NORM: f64 = 1e-12;

/// Bloch vectors longer than `1 + BLOCH_REJECT` are rejected outright.
pub const BLOCH_REJECT: f64 = 1e-9;

/// Radicands and logarithm arguments in `[-RADICAND, 0)` are clamped to zero.
pub const RADICAND: f64 = 1e-12;

/// Radicand slack accepted when building the ultimate copier's amplitudes.
pub const AMPLITUDE_RADICAND: f64 = 1e-10;

/// Imaginary part below which a companion eigenvalue is real.
pub const ROOT_REALITY: f64 = 1e-9;

/// Imaginary part below which a conjugate pair is read as a near-double real root.
pub const ROOT_NEAR_DOUBLE: f64 = 1e-6;

/// Window around `[-1, 1]` in which a selected `cos φ` root is accepted.
pub const ROOT_WINDOW: f64 = 1e-9;

/// Maximum quartic residual at an accepted root.
pub const ROOT_RESIDUAL: f64 = 1e-8;

/// Maximum residual of the two overlap/norm constraints at a feasible solution.
pub const FEASIBILITY: f64 = 1e-8;

/// `cos φ` values within this distance of −1 are snapped to the WZ regime.
pub const WZ_SNAP: f64 = 1e-9;

/// Resolution of the golden-section refinement over `r`.
pub const R_RESOLUTION: f64 = 1e-10;

/// Resolution of the golden-section refinement over the measurement angle.
pub const ANGLE_RESOLUTION: f64 = 1e-10;

/// Slack used by the ordering checks between copier families.
pub const ORDERING: f64 = 1e-9;
