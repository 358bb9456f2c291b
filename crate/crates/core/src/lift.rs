//! The universal cover of PSL(2,R) acting on the lifted projective
//! line.
//!
//! An element is stored as an integer degree `k` together with a
//! projective matrix `g`: the represented map is `delta^k . l_g` where
//! `delta` is the central translation by 2pi and `l_g` is the canonical
//! lift of `g`:
//!
//! * non-elliptic `g`: the unique lift fixing the lifted fixed points;
//! * elliptic `g`: the lift whose displacement stays in (0, 2pi);
//! * identity: the identity map.
//!
//! All evaluations recompute the lifted map from the matrix and the
//! degree, so composition of degrees is exact integer arithmetic.

use crate::error::{Error, Result};
use crate::isometry::{
    classify_isometry, fixed_points_rp1, FixedPoints, IsomClass, ProjMatrix, TAU,
};
use serde::{Deserialize, Serialize};

/// Element of the universal cover of PSL(2,R).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftedIsometry {
    pub degree: i64,
    pub base: ProjMatrix,
}

/// Smallest lifted fixed angle of a non-elliptic matrix in [0, 2pi).
fn first_fixed_angle(g: &ProjMatrix) -> Option<f64> {
    match fixed_points_rp1(g) {
        FixedPoints::All => Some(0.0),
        FixedPoints::Points(pts) => pts
            .iter()
            .map(|p| p.angle().rem_euclid(TAU))
            .min_by(|a, b| a.partial_cmp(b).expect("finite angles")),
    }
}

/// Canonical lift of `g` evaluated at a lifted angle.
pub fn eval_canonical(g: &ProjMatrix, theta: f64) -> f64 {
    match classify_isometry(g) {
        IsomClass::Identity => theta,
        IsomClass::Elliptic { .. } => {
            // displacement representative in (0, 2pi)
            let mut d = (g.raw_angle(theta) - theta).rem_euclid(TAU);
            if d == 0.0 {
                d = TAU;
            }
            theta + d
        }
        _ => {
            let theta0 = first_fixed_angle(g).expect("non-elliptic maps have fixed points");
            // the canonical lift maps [theta0 + 2pi n, theta0 + 2pi (n+1))
            // onto itself
            let t = (theta - theta0).rem_euclid(TAU);
            let base = theta - t;
            let mut s = (g.raw_angle(theta) - theta0).rem_euclid(TAU);
            // rounding guard: inputs at a window end must not wrap a
            // full period
            if s > TAU - 1e-9 && t < 1e-6 {
                s = 0.0;
            } else if s < 1e-9 && t > TAU - 1e-6 {
                s = TAU;
            }
            base + s
        }
    }
}

impl LiftedIsometry {
    pub fn new(degree: i64, base: ProjMatrix) -> Self {
        LiftedIsometry { degree, base }
    }

    /// Canonical lift of a projective matrix (degree zero).
    pub fn canonical(base: ProjMatrix) -> Self {
        LiftedIsometry { degree: 0, base }
    }

    pub fn identity() -> Self {
        LiftedIsometry { degree: 0, base: ProjMatrix::identity() }
    }

    /// The lifted boundary map.
    pub fn eval(&self, theta: f64) -> f64 {
        eval_canonical(&self.base, theta) + TAU * self.degree as f64
    }

    /// Product in the universal cover: the degree is extracted by
    /// comparing the composed lift with the canonical lift of the
    /// product matrix at a base angle.
    pub fn compose(&self, other: &LiftedIsometry) -> LiftedIsometry {
        let product = self.base.mul(&other.base);
        let composed_at_zero = eval_canonical(&self.base, eval_canonical(&other.base, 0.0));
        let canonical_at_zero = eval_canonical(&product, 0.0);
        let winding = ((composed_at_zero - canonical_at_zero) / TAU).round() as i64;
        LiftedIsometry {
            degree: self.degree + other.degree + winding,
            base: product,
        }
    }

    pub fn inverse(&self) -> LiftedIsometry {
        let inv = self.base.inverse();
        let extra = match classify_isometry(&self.base) {
            // the inverse of an elliptic canonical lift has displacement
            // in (-2pi, 0), one deck transformation below the canonical
            // lift of the inverse matrix
            IsomClass::Elliptic { .. } => -1,
            _ => 0,
        };
        LiftedIsometry { degree: -self.degree + extra, base: inv }
    }

    /// Translation (rotation) number of the lifted map:
    /// `lim l^n(0) / n`.  Exact: 2pi * degree for maps with fixed
    /// points, plus the elliptic angle otherwise.
    pub fn translation_number(&self) -> f64 {
        let base_tau = match classify_isometry(&self.base) {
            IsomClass::Elliptic { angle } => angle,
            _ => 0.0,
        };
        TAU * self.degree as f64 + base_tau
    }

    pub fn class(&self) -> IsomClass {
        classify_isometry(&self.base)
    }

    /// Lifted fixed points of the canonical part in [0, 2pi), sorted.
    /// Empty for elliptic or when the degree shift removes all fixed
    /// points (degree != 0 never has any).
    pub fn fixed_angles(&self) -> Vec<f64> {
        if self.degree != 0 {
            return vec![];
        }
        match fixed_points_rp1(&self.base) {
            FixedPoints::All => vec![],
            FixedPoints::Points(pts) => {
                let mut angles: Vec<f64> =
                    pts.iter().map(|p| p.angle().rem_euclid(TAU)).collect();
                angles.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
                angles
            }
        }
    }

    /// Conjugation in the universal cover by the canonical lift of `h`.
    pub fn conjugate_by(&self, h: &ProjMatrix) -> LiftedIsometry {
        let lh = LiftedIsometry::canonical(*h);
        lh.compose(self).compose(&lh.inverse())
    }
}

/// Validates that a claimed lift (degree, base) represents a genuine
/// element of the cover with `degree >= 0` (the normalization used by
/// projective circles).
pub fn check_circle_degree(l: &LiftedIsometry) -> Result<()> {
    if l.degree < 0 {
        return Err(Error::math(format!(
            "projective circles are normalized to non-negative degree, got {}",
            l.degree
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn canonical_lift_fixes_points_of_nonelliptic() {
        let p = ProjMatrix::new([[1.0, 1.0], [0.0, 1.0]]).unwrap();
        // fixed point at infinity, lifted angle 0
        assert!(eval_canonical(&p, 0.0).abs() < 1e-12);
        assert!((eval_canonical(&p, TAU) - TAU).abs() < 1e-12);

        let h = ProjMatrix::boost(2.0);
        for a in LiftedIsometry::canonical(h).fixed_angles() {
            assert!((eval_canonical(&h, a) - a).abs() < 1e-9);
        }
    }

    #[test]
    fn canonical_lift_is_monotone_and_equivariant() {
        let mut r = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let g = crate::isometry::random_psl(&mut r);
            let mut prev = f64::NEG_INFINITY;
            for i in 0..200 {
                let theta = -10.0 + 20.0 * (i as f64) / 199.0;
                let v = eval_canonical(&g, theta);
                assert!(v >= prev - 1e-9, "monotone violated");
                prev = v;
                let shifted = eval_canonical(&g, theta + TAU);
                assert!((shifted - v - TAU).abs() < 1e-9, "equivariance violated");
            }
        }
    }

    #[test]
    fn identity_lift_and_center() {
        let id = LiftedIsometry::identity();
        assert_eq!(id.translation_number(), 0.0);
        let d1 = LiftedIsometry::new(1, ProjMatrix::identity());
        let d2 = LiftedIsometry::new(2, ProjMatrix::identity());
        let c = d1.compose(&d2);
        assert_eq!(c.degree, 3);
        assert!(c.base.is_identity());
        assert!((c.translation_number() - 3.0 * TAU).abs() < 1e-12);
    }

    #[test]
    fn rotation_lift_translation_number() {
        for theta in [0.25, PI * 0.5, 5.0] {
            let l = LiftedIsometry::canonical(ProjMatrix::rotation(theta));
            assert!((l.translation_number() - theta).abs() < 1e-9);
            // iteration oracle
            let n = 10_000;
            let mut x = 0.0;
            for _ in 0..n {
                x = l.eval(x);
            }
            assert!((x / n as f64 - theta).abs() < 1e-6);
        }
    }

    #[test]
    fn composition_of_rotations_captures_degree() {
        let a = LiftedIsometry::canonical(ProjMatrix::rotation(4.0));
        let b = LiftedIsometry::canonical(ProjMatrix::rotation(3.0));
        let c = a.compose(&b);
        // 4 + 3 = 7 > 2pi: degree 1, base rotation by 7 - 2pi
        assert_eq!(c.degree, 1);
        match c.class() {
            IsomClass::Elliptic { angle } => assert!((angle - (7.0 - TAU)).abs() < 1e-9),
            k => panic!("expected elliptic, got {k:?}"),
        }
        assert!((c.translation_number() - 7.0).abs() < 1e-9);
    }

    #[test]
    fn inverse_cancels() {
        let mut r = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let g = crate::isometry::random_psl(&mut r);
            let k = r.gen_range(-3..4);
            let l = LiftedIsometry::new(k, g);
            let c = l.compose(&l.inverse());
            assert_eq!(c.degree, 0, "degree for {:?}", classify_isometry(&g));
            assert!(c.base.is_identity());
        }
    }

    #[test]
    fn composition_is_associative() {
        let mut r = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let a = LiftedIsometry::new(r.gen_range(-2..3), crate::isometry::random_psl(&mut r));
            let b = LiftedIsometry::new(r.gen_range(-2..3), crate::isometry::random_psl(&mut r));
            let c = LiftedIsometry::new(r.gen_range(-2..3), crate::isometry::random_psl(&mut r));
            let left = a.compose(&b).compose(&c);
            let right = a.compose(&b.compose(&c));
            assert_eq!(left.degree, right.degree);
            for (x, y) in left.base.m.iter().flatten().zip(right.base.m.iter().flatten()) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn translation_number_additive_for_commuting_elliptics() {
        // elliptics about a common fixed point commute; their lifted
        // rotation numbers add
        let mut r = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let h = crate::isometry::random_psl(&mut r);
            let t1 = r.gen_range(0.1..TAU - 0.1);
            let t2 = r.gen_range(0.1..TAU - 0.1);
            let a = LiftedIsometry::canonical(ProjMatrix::rotation(t1)).conjugate_by(&h);
            let b = LiftedIsometry::canonical(ProjMatrix::rotation(t2)).conjugate_by(&h);
            let ab = a.compose(&b);
            let sum = a.translation_number() + b.translation_number();
            assert!((ab.translation_number() - sum).abs() < 1e-6);
        }
    }

    #[test]
    fn translation_number_is_conjugation_invariant() {
        let mut r = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let g = crate::isometry::random_psl(&mut r);
            let h = crate::isometry::random_psl(&mut r);
            let l = LiftedIsometry::new(r.gen_range(0..3), g);
            let c = l.conjugate_by(&h);
            assert!(
                (l.translation_number() - c.translation_number()).abs() < 1e-7,
                "tau changed under conjugation"
            );
        }
    }

    #[test]
    fn nonelliptic_canonical_lift_has_zero_translation_number() {
        for g in [ProjMatrix::parabolic(1.5), ProjMatrix::boost(0.7)] {
            let l = LiftedIsometry::canonical(g);
            assert_eq!(l.translation_number(), 0.0);
        }
    }
}
