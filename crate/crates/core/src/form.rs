//! Quadratic forms of signature (2,2), (1,2), (1,3) and the associated
//! ray spaces.
//!
//! Coordinate conventions are fixed once and for all:
//!
//! ```text
//! q22(x) = -x0^2 - x1^2 + x2^2 + x3^2         on R^{2,2}
//! q12(x) = -x0^2 + x1^2 + x2^2                on R^{1,2}
//! q13(x) = -x0^2 + x1^2 + x2^2 + x3^2         on R^{3,1}
//! ```
//!
//! The anti-de Sitter quadric is `{q22 = -1}`.  The ray space of `q12`
//! (resp. `q13`) splits into two hyperbolic components, a de Sitter
//! component and two boundary circles (spheres); points are stored as
//! representative vectors of rays, never as projective classes, so the
//! double cover is kept throughout.  Time orientation is the sign of the
//! first coordinate.

use crate::error::{Error, Result};
use crate::tol::EPS_CLASSIFY;
use serde::{Deserialize, Serialize};

/// Which quadratic form a vector belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormTag {
    /// Signature (2,2) on four coordinates.
    Q22,
    /// Signature (1,2) on three coordinates.
    Q12,
    /// Signature (1,3) on four coordinates.
    Q13,
}

impl FormTag {
    pub fn dim(self) -> usize {
        match self {
            FormTag::Q22 => 4,
            FormTag::Q12 => 3,
            FormTag::Q13 => 4,
        }
    }

    /// Diagonal signs of the form in the fixed coordinates.
    pub fn signs(self) -> &'static [f64] {
        match self {
            FormTag::Q22 => &[-1.0, -1.0, 1.0, 1.0],
            FormTag::Q12 => &[-1.0, 1.0, 1.0],
            FormTag::Q13 => &[-1.0, 1.0, 1.0, 1.0],
        }
    }
}

/// A vector of one of the three fixed quadratic spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormVector {
    pub coords: Vec<f64>,
    pub form: FormTag,
}

/// Causal type of a vector or of a linear subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalClass {
    Timelike,
    Spacelike,
    Lightlike,
    /// Only the zero vector.
    Zero,
}

/// The five pieces of the ray space of `q12` (and, with the obvious
/// reading, of `q13`): two hyperbolic components, the de Sitter
/// component, and the two boundary circles/spheres.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Hash)]
pub enum HsRegion {
    HypPlus,
    HypMinus,
    DeSitter,
    BoundaryPlus,
    BoundaryMinus,
}

impl HsRegion {
    /// Image of the region under the antipodal map `v -> -v`.
    pub fn antipode(self) -> HsRegion {
        match self {
            HsRegion::HypPlus => HsRegion::HypMinus,
            HsRegion::HypMinus => HsRegion::HypPlus,
            HsRegion::DeSitter => HsRegion::DeSitter,
            HsRegion::BoundaryPlus => HsRegion::BoundaryMinus,
            HsRegion::BoundaryMinus => HsRegion::BoundaryPlus,
        }
    }

    pub fn is_timelike(self) -> bool {
        matches!(self, HsRegion::HypPlus | HsRegion::HypMinus)
    }

    pub fn is_boundary(self) -> bool {
        matches!(self, HsRegion::BoundaryPlus | HsRegion::BoundaryMinus)
    }
}

impl FormVector {
    pub fn new(form: FormTag, coords: &[f64]) -> Result<Self> {
        if coords.len() != form.dim() {
            return Err(Error::input(format!(
                "form {:?} needs {} coordinates, got {}",
                form,
                form.dim(),
                coords.len()
            )));
        }
        Ok(FormVector { coords: coords.to_vec(), form })
    }

    pub fn q22(coords: [f64; 4]) -> Self {
        FormVector { coords: coords.to_vec(), form: FormTag::Q22 }
    }

    pub fn q12(coords: [f64; 3]) -> Self {
        FormVector { coords: coords.to_vec(), form: FormTag::Q12 }
    }

    pub fn q13(coords: [f64; 4]) -> Self {
        FormVector { coords: coords.to_vec(), form: FormTag::Q13 }
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        FormVector {
            coords: self.coords.iter().map(|c| c * lambda).collect(),
            form: self.form,
        }
    }

    pub fn neg(&self) -> Self {
        self.scaled(-1.0)
    }

    pub fn add(&self, other: &FormVector) -> Result<Self> {
        self.check_same_form(other)?;
        Ok(FormVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
            form: self.form,
        })
    }

    pub fn norm_inf(&self) -> f64 {
        self.coords.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.norm_inf() == 0.0
    }

    /// Representative of the same ray normalized to sup-norm 1.
    pub fn normalized_ray(&self) -> Result<Self> {
        let n = self.norm_inf();
        if n == 0.0 {
            return Err(Error::math("cannot normalize the zero vector"));
        }
        Ok(self.scaled(1.0 / n))
    }

    fn check_same_form(&self, other: &FormVector) -> Result<()> {
        if self.form != other.form {
            return Err(Error::input("mixed quadratic forms"));
        }
        Ok(())
    }
}

/// q(v) in the fixed diagonal coordinates.
pub fn evaluate_form(v: &FormVector) -> Result<f64> {
    if v.coords.len() != v.form.dim() {
        return Err(Error::input(format!(
            "form {:?} needs {} coordinates, got {}",
            v.form,
            v.form.dim(),
            v.coords.len()
        )));
    }
    Ok(v
        .form
        .signs()
        .iter()
        .zip(&v.coords)
        .map(|(s, c)| s * c * c)
        .sum())
}

/// Polarized inner product `<u, v>` of the common form.
pub fn inner(u: &FormVector, v: &FormVector) -> Result<f64> {
    u.check_same_form(v)?;
    if u.coords.len() != u.form.dim() || v.coords.len() != v.form.dim() {
        return Err(Error::input("dimension mismatch with form tag"));
    }
    Ok(u
        .form
        .signs()
        .iter()
        .zip(u.coords.iter().zip(&v.coords))
        .map(|(s, (a, b))| s * a * b)
        .sum())
}

/// Sign classification of q(v) with the relative null band `EPS_CLASSIFY`.
pub fn classify_vector(v: &FormVector) -> Result<CausalClass> {
    if v.is_zero() {
        return Ok(CausalClass::Zero);
    }
    let q = evaluate_form(v)?;
    let scale = v.norm_inf();
    let band = EPS_CLASSIFY * scale * scale;
    Ok(if q < -band {
        CausalClass::Timelike
    } else if q > band {
        CausalClass::Spacelike
    } else {
        CausalClass::Lightlike
    })
}

/// A 2-plane through the origin, spanned by two independent vectors.
/// Its projection meets the quadric in a geodesic whose causal type is
/// the type of the restricted form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSpan {
    pub basis: [FormVector; 2],
}

impl GeodesicSpan {
    pub fn new(u: FormVector, v: FormVector) -> Result<Self> {
        u.check_same_form(&v)?;
        let span = GeodesicSpan { basis: [u, v] };
        if span.gram_det_scale().0.abs() < 1e-14 * span.gram_det_scale().1 && !span.independent() {
            return Err(Error::math("dependent basis for a geodesic span"));
        }
        Ok(span)
    }

    fn independent(&self) -> bool {
        // Euclidean Gram determinant — rank test, independent of the form.
        let a = &self.basis[0].coords;
        let b = &self.basis[1].coords;
        let aa: f64 = a.iter().map(|x| x * x).sum();
        let bb: f64 = b.iter().map(|x| x * x).sum();
        let ab: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        aa * bb - ab * ab > 1e-20 * (aa * bb).max(1.0)
    }

    fn gram_det_scale(&self) -> (f64, f64) {
        let g00 = inner(&self.basis[0], &self.basis[0]).unwrap_or(0.0);
        let g11 = inner(&self.basis[1], &self.basis[1]).unwrap_or(0.0);
        let g01 = inner(&self.basis[0], &self.basis[1]).unwrap_or(0.0);
        let det = g00 * g11 - g01 * g01;
        let scale = (g00.abs() + g01.abs()).max(g11.abs() + g01.abs()).max(1e-300);
        (det, scale * scale)
    }
}

/// Causal type of the restricted form on the span: positive definite is
/// spacelike, degenerate is lightlike, and any plane containing a
/// timelike direction (indefinite or negative definite) is timelike.
pub fn classify_plane(span: &GeodesicSpan) -> Result<CausalClass> {
    if !span.independent() {
        return Err(Error::math("dependent basis for a geodesic span"));
    }
    let g00 = inner(&span.basis[0], &span.basis[0])?;
    let g11 = inner(&span.basis[1], &span.basis[1])?;
    let g01 = inner(&span.basis[0], &span.basis[1])?;
    let det = g00 * g11 - g01 * g01;
    let scale = {
        let s = g00.abs().max(g11.abs()).max(g01.abs()).max(1.0);
        s * s
    };
    let band = EPS_CLASSIFY * scale;
    Ok(if det.abs() <= band {
        CausalClass::Lightlike
    } else if det > 0.0 {
        if g00 > 0.0 {
            CausalClass::Spacelike
        } else {
            // negative definite: the plane is filled with timelike vectors
            CausalClass::Timelike
        }
    } else {
        CausalClass::Timelike
    })
}

/// Region of the ray of a nonzero vector of `q12` or `q13`.
pub fn hs_classify_ray(v: &FormVector) -> Result<HsRegion> {
    if v.form == FormTag::Q22 {
        return Err(Error::input("hs_classify_ray expects q12 or q13"));
    }
    if v.is_zero() {
        return Err(Error::math("zero vector has no ray"));
    }
    let class = classify_vector(v)?;
    let future = v.coords[0] > 0.0;
    Ok(match class {
        CausalClass::Timelike => {
            if future {
                HsRegion::HypPlus
            } else {
                HsRegion::HypMinus
            }
        }
        CausalClass::Spacelike => HsRegion::DeSitter,
        CausalClass::Lightlike => {
            if future {
                HsRegion::BoundaryPlus
            } else {
                HsRegion::BoundaryMinus
            }
        }
        CausalClass::Zero => unreachable!(),
    })
}

/// The hyperplane `p^perp` for a point `p` of the AdS quadric.  Its
/// intersection with the quadric is the spacelike plane dual to `p`;
/// every point of it lies at timelike distance pi/2 from `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualPlane {
    pub normal: FormVector,
}

impl DualPlane {
    pub fn contains(&self, v: &FormVector) -> Result<bool> {
        Ok(inner(&self.normal, v)?.abs() <= EPS_CLASSIFY * self.normal.norm_inf() * v.norm_inf())
    }

    /// A q22-orthogonal basis of the hyperplane, signature (-,+,+):
    /// one timelike and two spacelike directions orthogonal to the
    /// normal.  Used to sample points of the dual plane.
    pub fn basis(&self) -> Result<[FormVector; 3]> {
        let p = &self.normal;
        // Gram-Schmidt against p (q(p) = -1) from the standard basis.
        let mut out: Vec<FormVector> = Vec::new();
        for k in 0..4 {
            let mut e = [0.0; 4];
            e[k] = 1.0;
            let mut v = FormVector::q22(e);
            // remove p component: v - <v,p>/<p,p> p = v + <v,p> p
            let vp = inner(&v, p)?;
            v = v.add(&p.scaled(vp))?;
            // remove components of previously accepted vectors
            for w in &out {
                let ww = inner(w, w)?;
                let vw = inner(&v, w)?;
                v = v.add(&w.scaled(-vw / ww))?;
            }
            let norm = evaluate_form(&v)?.abs();
            if norm > 1e-9 {
                out.push(v.scaled(1.0 / norm.sqrt()));
            }
            if out.len() == 3 {
                break;
            }
        }
        if out.len() != 3 {
            return Err(Error::math("degenerate dual plane basis"));
        }
        Ok([out.remove(0), out.remove(0), out.remove(0)])
    }
}

fn check_on_quadric(p: &FormVector) -> Result<()> {
    if p.form != FormTag::Q22 {
        return Err(Error::input("expected a q22 vector"));
    }
    let q = evaluate_form(p)?;
    if (q + 1.0).abs() > 1e-9 {
        return Err(Error::math(format!("point not on the quadric: q = {q}")));
    }
    Ok(())
}

/// Dual spacelike plane of a quadric point.
pub fn dual_plane(p: &FormVector) -> Result<DualPlane> {
    check_on_quadric(p)?;
    Ok(DualPlane { normal: p.clone() })
}

/// The first conjugate points of `p` in the future and in the past.
/// Both project to the antipode `-p` on the quadric; every geodesic
/// 2-plane through `p` also contains them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugatePair {
    pub future: FormVector,
    pub past: FormVector,
}

pub fn conjugate_points(p: &FormVector) -> Result<ConjugatePair> {
    check_on_quadric(p)?;
    Ok(ConjugatePair { future: p.neg(), past: p.neg() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn form_values_on_basis_vectors() {
        assert_eq!(evaluate_form(&FormVector::q22([1.0, 0.0, 0.0, 0.0])).unwrap(), -1.0);
        assert_eq!(evaluate_form(&FormVector::q22([1.0, 0.0, 1.0, 0.0])).unwrap(), 0.0);
        assert_eq!(evaluate_form(&FormVector::q12([0.0, 1.0, 0.0])).unwrap(), 1.0);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let v = FormVector { coords: vec![1.0, 0.0], form: FormTag::Q12 };
        assert!(evaluate_form(&v).is_err());
        assert!(FormVector::new(FormTag::Q22, &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn vector_classification() {
        assert_eq!(
            classify_vector(&FormVector::q12([1.0, 0.0, 0.0])).unwrap(),
            CausalClass::Timelike
        );
        assert_eq!(
            classify_vector(&FormVector::q12([1.0, 1.0, 0.0])).unwrap(),
            CausalClass::Lightlike
        );
        assert_eq!(
            classify_vector(&FormVector::q12([0.0, 0.0, 0.0])).unwrap(),
            CausalClass::Zero
        );
    }

    #[test]
    fn scale_invariance_of_classification() {
        let mut r = rng(7);
        for _ in 0..10_000 {
            let v = FormVector::q12([
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
            ]);
            if v.is_zero() {
                continue;
            }
            let lambda: f64 = loop {
                let l: f64 = r.gen_range(-100.0..100.0);
                if l.abs() > 1e-3 {
                    break l;
                }
            };
            assert_eq!(
                classify_vector(&v).unwrap(),
                classify_vector(&v.scaled(lambda)).unwrap()
            );
        }
    }

    #[test]
    fn plane_classification_examples() {
        let sp = GeodesicSpan::new(
            FormVector::q22([0.0, 0.0, 1.0, 0.0]),
            FormVector::q22([0.0, 0.0, 0.0, 1.0]),
        )
        .unwrap();
        assert_eq!(classify_plane(&sp).unwrap(), CausalClass::Spacelike);

        let tl = GeodesicSpan::new(
            FormVector::q22([1.0, 0.0, 0.0, 0.0]),
            FormVector::q22([0.0, 0.0, 1.0, 0.0]),
        )
        .unwrap();
        assert_eq!(classify_plane(&tl).unwrap(), CausalClass::Timelike);

        // span{(1,0,1,0),(0,0,0,1)}: Gram = [[0,0],[0,1]], degenerate.
        let ll = GeodesicSpan::new(
            FormVector::q22([1.0, 0.0, 1.0, 0.0]),
            FormVector::q22([0.0, 0.0, 0.0, 1.0]),
        )
        .unwrap();
        assert_eq!(classify_plane(&ll).unwrap(), CausalClass::Lightlike);

        // negative definite plane: closed timelike geodesic
        let nd = GeodesicSpan::new(
            FormVector::q22([1.0, 0.0, 0.0, 0.0]),
            FormVector::q22([0.0, 1.0, 0.0, 0.0]),
        )
        .unwrap();
        assert_eq!(classify_plane(&nd).unwrap(), CausalClass::Timelike);
    }

    /// Brute-force oracle: eigenvalues of the 2x2 Gram matrix.
    fn plane_class_by_eigenvalues(span: &GeodesicSpan) -> CausalClass {
        let g00 = inner(&span.basis[0], &span.basis[0]).unwrap();
        let g11 = inner(&span.basis[1], &span.basis[1]).unwrap();
        let g01 = inner(&span.basis[0], &span.basis[1]).unwrap();
        let tr = g00 + g11;
        let disc = ((g00 - g11) * (g00 - g11) + 4.0 * g01 * g01).sqrt();
        let l1 = (tr + disc) / 2.0;
        let l2 = (tr - disc) / 2.0;
        let scale = g00.abs().max(g11.abs()).max(g01.abs()).max(1.0);
        let band = EPS_CLASSIFY * scale;
        if l1.abs() <= band || l2.abs() <= band {
            CausalClass::Lightlike
        } else if l1 > 0.0 && l2 > 0.0 {
            CausalClass::Spacelike
        } else {
            CausalClass::Timelike
        }
    }

    #[test]
    fn plane_classification_matches_eigenvalue_oracle() {
        let mut r = rng(11);
        let mut checked = 0;
        while checked < 10_000 {
            let u = FormVector::q22([
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
            ]);
            let v = FormVector::q22([
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
            ]);
            let span = match GeodesicSpan::new(u, v) {
                Ok(s) => s,
                Err(_) => continue,
            };
            if !span.independent() {
                continue;
            }
            checked += 1;
            assert_eq!(
                classify_plane(&span).unwrap(),
                plane_class_by_eigenvalues(&span)
            );
        }
    }

    #[test]
    fn ray_regions() {
        assert_eq!(
            hs_classify_ray(&FormVector::q12([1.0, 0.0, 0.0])).unwrap(),
            HsRegion::HypPlus
        );
        assert_eq!(
            hs_classify_ray(&FormVector::q12([0.0, 1.0, 0.0])).unwrap(),
            HsRegion::DeSitter
        );
        assert_eq!(
            hs_classify_ray(&FormVector::q12([-1.0, 1.0, 0.0])).unwrap(),
            HsRegion::BoundaryMinus
        );
        assert!(hs_classify_ray(&FormVector::q12([0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn ray_partition_and_antipode() {
        let mut r = rng(3);
        for _ in 0..10_000 {
            let v = FormVector::q12([
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
            ]);
            if v.norm_inf() < 1e-6 {
                continue;
            }
            let reg = hs_classify_ray(&v).unwrap();
            let anti = hs_classify_ray(&v.neg()).unwrap();
            assert_eq!(anti, reg.antipode());
        }
    }

    #[test]
    fn dual_plane_orthogonality_samples() {
        let mut r = rng(5);
        for _ in 0..100 {
            // random quadric point: normalize a timelike-ish vector
            let raw = FormVector::q22([
                r.gen_range(0.5..2.0),
                r.gen_range(-1.0..1.0),
                r.gen_range(-0.4..0.4),
                r.gen_range(-0.4..0.4),
            ]);
            let q = evaluate_form(&raw).unwrap();
            if q >= -1e-3 {
                continue;
            }
            let p = raw.scaled(1.0 / (-q).sqrt());
            let plane = dual_plane(&p).unwrap();
            let basis = plane.basis().unwrap();
            for _ in 0..100 {
                let c: [f64; 3] = [
                    r.gen_range(-1.0..1.0),
                    r.gen_range(-1.0..1.0),
                    r.gen_range(-1.0..1.0),
                ];
                let mut y = basis[0].scaled(c[0]);
                y = y.add(&basis[1].scaled(c[1])).unwrap();
                y = y.add(&basis[2].scaled(c[2])).unwrap();
                let ip = inner(&p, &y).unwrap();
                assert!(ip.abs() < 1e-9, "inner product {ip}");
            }
        }
    }

    #[test]
    fn dual_plane_of_axis_points() {
        let p = FormVector::q22([1.0, 0.0, 0.0, 0.0]);
        let plane = dual_plane(&p).unwrap();
        // {x0 = 0}
        assert!(plane.contains(&FormVector::q22([0.0, 1.0, 2.0, -1.0])).unwrap());
        assert!(!plane.contains(&FormVector::q22([0.5, 1.0, 0.0, 0.0])).unwrap());

        let p1 = FormVector::q22([0.0, 1.0, 0.0, 0.0]);
        let plane1 = dual_plane(&p1).unwrap();
        assert!(plane1.contains(&FormVector::q22([2.0, 0.0, 1.0, 1.0])).unwrap());
    }

    #[test]
    fn conjugate_points_are_antipodes_and_lie_on_planes_through_p() {
        let mut r = rng(9);
        for _ in 0..200 {
            let raw = FormVector::q22([
                r.gen_range(0.5..2.0),
                r.gen_range(-1.0..1.0),
                r.gen_range(-0.4..0.4),
                r.gen_range(-0.4..0.4),
            ]);
            let q = evaluate_form(&raw).unwrap();
            if q >= -1e-3 {
                continue;
            }
            let p = raw.scaled(1.0 / (-q).sqrt());
            let cp = conjugate_points(&p).unwrap();
            assert_eq!(cp.future, p.neg());
            // -p lies in every 2-plane through p: it is -1 * p plus 0 * u.
            let u = FormVector::q22([
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
            ]);
            if let Ok(span) = GeodesicSpan::new(p.clone(), u) {
                // membership: -p = (-1) * basis[0]
                let target = cp.future.clone();
                let b0 = &span.basis[0];
                let dot: f64 = b0
                    .coords
                    .iter()
                    .zip(&target.coords)
                    .map(|(a, b)| a * b)
                    .sum();
                let nb: f64 = b0.coords.iter().map(|a| a * a).sum();
                let nt: f64 = target.coords.iter().map(|a| a * a).sum();
                assert!((dot * dot - nb * nt).abs() < 1e-12 * nb * nt.max(1.0));
            }
        }
    }

    #[test]
    fn conjugate_of_off_quadric_point_rejected() {
        assert!(conjugate_points(&FormVector::q22([2.0, 0.0, 0.0, 0.0])).is_err());
    }
}
