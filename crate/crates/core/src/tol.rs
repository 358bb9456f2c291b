//! Central numerical tolerances.
//!
//! Every classification over the quadrics happens in floating point, so
//! "lightlike", "parabolic", "on the plane" are closed bands rather than
//! exact loci.  All band widths live here; no other module hard-codes one.

/// Relative width of the null band: a vector `v` is lightlike when
/// `|q(v)| <= EPS_CLASSIFY * |v|_inf^2`.  Also the parabolic trace band.
pub const EPS_CLASSIFY: f64 = 1e-9;

/// Determinant defect allowed for a projective 2x2 matrix.
pub const EPS_DET: f64 = 1e-12;

/// Agreement required between two lifted boundary maps representing the
/// same projective element (degree extraction, fixed-point checks).
pub const EPS_LIFT: f64 = 1e-8;

/// Refinement width for first-return fixed-point bisection.
pub const EPS_BISECT: f64 = 1e-12;

/// Band around a tangential fixed point that is still reported as a
/// degenerate closed leaf.
pub const EPS_TANGENT: f64 = 1e-9;

/// Number of initial subintervals scanned for sign changes of the
/// first-return displacement.
pub const BISECT_GRID: usize = 1 << 10;

/// Default tolerance for sampled curve/causality checks.
pub const EPS_CURVE: f64 = 1e-6;

/// Tolerance on convexity side tests and duality inner products.
pub const EPS_GEOM: f64 = 1e-9;

/// Finite-difference step for metric derivatives (4th order stencils).
pub const FD_STEP: f64 = 1e-2;
