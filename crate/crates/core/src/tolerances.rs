//! Numerical thresholds shared by the class predicates and theorem verifiers.
//!
//! Every tolerance that decides a verdict lives here so that library code,
//! the CLI and the acceptance suite agree on the same numbers.

/// A grid margin above `-MEMBERSHIP` counts as membership. Sharp functions
/// touch the boundary of the conic domain only in the limit `|z| -> 1`.
pub const MEMBERSHIP: f64 = 1e-9;

/// One-sided slack for coefficient bounds: `observed <= bound + BOUND_SLACK`.
pub const BOUND_SLACK: f64 = 1e-9;

/// Sharp members must come within this distance of the bound they attain.
pub const SHARPNESS: f64 = 1e-6;

/// Closed-form versus extracted conic coefficient P1.
pub const P1_AGREEMENT: f64 = 1e-8;

/// Closed-form versus extracted conic coefficient P2.
pub const P2_AGREEMENT: f64 = 1e-6;

/// Imaginary parts of extracted conic coefficients (they are real).
pub const IMAG_PART: f64 = 1e-8;

/// Multiplier form versus Jackson-sum form of the integral operator.
pub const OPERATOR_FORMS: f64 = 1e-9;

/// Equality in the sufficient coefficient condition for the sharp functions.
pub const SHARP_EQUALITY: f64 = 1e-12;

/// Residual of the modulus equation `cosh(pi K'(t) / 4K(t)) = k`.
pub const MODULUS_RESIDUAL: f64 = 1e-10;

/// Continuity of the real Fekete-Szego bound across its thresholds.
pub const BRANCH_CONTINUITY: f64 = 1e-10;

/// Covering-radius slack on the boundary minimum modulus.
pub const COVERING: f64 = 1e-6;

/// Rogosinski bound slack `|c_n| <= P1 + ROGOSINSKI`.
pub const ROGOSINSKI: f64 = 1e-9;
