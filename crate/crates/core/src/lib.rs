//! Computational kernel for 3-dimensional anti-de Sitter spacetimes
//! with conical singularities.
//!
//! The crate is organized around the objects it manipulates:
//!
//! * [`form`] — the quadrics of signature (2,2), (1,2), (1,3), their
//!   causal classification, ray spaces, duality and conjugate points;
//! * [`isometry`] — PSL(2,R), trace classification, fixed points on
//!   the projective line and on the ray space, the adjoint SO(1,2)
//!   representation, and the two-sided isometries of the AdS quadric;
//! * [`lift`] — the universal cover of PSL(2,R) with exact degree
//!   bookkeeping and translation numbers;
//! * [`link`] — projective circles, link circles of singular points and
//!   the taxonomy of singular lines (massive particles, tachyons,
//!   photons, BTZ-like, Misner, high degree), with positivity and
//!   causality predicates;
//! * [`retmap`] — first-return maps of the isotropic foliations of
//!   de Sitter annuli and closed-causal-curve detection;
//! * [`surface`] — combinatorial singular HS-surfaces: doubled
//!   triangles, region decomposition, causality, and the interaction
//!   classifier;
//! * [`polyhedron`] — convex polyhedra in the ray space of `q13`, type
//!   classification, induced boundary structures, positivity and
//!   positive-mass checks;
//! * [`spacetime`] — constructive spacetime recipes: suspensions,
//!   model wedges, warped products, cyclic quotients, and collision
//!   surgeries, with chart-level metric/causality verification;
//! * [`suites`] — the seeded verification suites shared by the CLI and
//!   the acceptance tests;
//! * [`svg`] — deterministic figure output.

pub mod error;
pub mod form;
pub mod isometry;
pub mod lift;
pub mod link;
pub mod polyhedron;
pub mod retmap;
pub mod spacetime;
pub mod suites;
pub mod surface;
pub mod svg;
pub mod tol;

pub use error::{Error, Result};
