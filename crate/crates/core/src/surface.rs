//! Combinatorial singular HS-surfaces.
//!
//! A surface is stored as its decomposition data: regions (hyperbolic
//! future/past or de Sitter, each with its topology and singular
//! points), circles of photons carrying projective structures from
//! both sides, and the isolated photon points (cuspidal and extreme
//! BTZ-like singularities).  Developing maps are never built globally;
//! each de Sitter region instead carries a causality certificate —
//! elliptic boundary holonomy, a first-return reduction, or interior
//! BTZ sinks absorbing every isotropic leaf — and anything else is
//! reported as undecidable rather than silently passed.

use crate::error::{Error, Result};
use crate::form::{classify_vector, hs_classify_ray, inner, CausalClass, FormTag, FormVector, HsRegion};
use crate::isometry::{ProjMatrix, TAU};
use crate::lift::LiftedIsometry;
use crate::link::{
    classify_rp1_circle, classify_singularity, is_causal_line, is_positive, model_link,
    CausalVerdict, IntervalKind, LinkCircle, Rp1Circle, Rp1CircleClass, SingularityType, TimeSide,
};
use crate::retmap::{detect_ccc, FirstReturnSystem};
use serde::{Deserialize, Serialize};

/// Region kinds of the three-way decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionKind {
    Hyperbolic(TimeSide),
    DeSitter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionTopology {
    Disk,
    Annulus,
    Sphere,
}

/// How a de Sitter region certifies the absence (or presence) of
/// closed causal curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DsCertificate {
    /// Boundary holonomy is elliptic: the isotropic foliations have no
    /// closed leaf.
    EllipticHolonomy { angle: f64 },
    /// Explicit first-return reduction; closed leaves are located by
    /// the fixed-point search.
    FirstReturn(FirstReturnSystem),
    /// Every isotropic leaf limits to an interior BTZ point (disk with
    /// one, sphere with one of each time side): no closed leaves.
    BtzAbsorbing,
    /// De Sitter part of the suspension of a single link circle; its
    /// causality is exactly the causality of that singular line.
    ModelLink,
    /// No reduction available.
    Unknown,
}

/// One region of the decomposition.  `topology` describes the region
/// together with its interior singular points; boundary circles and
/// boundary photon points are listed separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub kind: RegionKind,
    pub topology: RegionTopology,
    pub interior_singularities: Vec<usize>,
    pub boundary_circles: Vec<usize>,
    /// Cuspidal / extreme BTZ points on the closure of this region.
    pub boundary_points: Vec<usize>,
    pub certificate: DsCertificate,
}

/// A circle of photons with its two projective structures.  When the
/// circle carries lightlike singularities, the de Sitter side is the
/// hyperbolic side composed with one parabolic correction per
/// singularity; otherwise the two coincide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhotonCircle {
    pub hyperbolic_side: Rp1Circle,
    pub de_sitter_side: Rp1Circle,
    pub corrections: Vec<ProjMatrix>,
    pub lightlike_singularities: Vec<usize>,
}

impl PhotonCircle {
    pub fn clean(structure: Rp1Circle) -> Self {
        PhotonCircle {
            hyperbolic_side: structure.clone(),
            de_sitter_side: structure,
            corrections: vec![],
            lightlike_singularities: vec![],
        }
    }
}

/// A singular point of the surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Singularity {
    pub link: LinkCircle,
}

/// Combinatorial singular HS-surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsSurface {
    pub regions: Vec<Region>,
    pub photon_circles: Vec<PhotonCircle>,
    pub singularities: Vec<Singularity>,
    pub sphere: bool,
    /// Set when the surface is the suspension of a single link circle.
    pub suspension_of: Option<LinkCircle>,
}

/// The interaction taxonomy for positive causal HS-spheres.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InteractionClass {
    CausallyRegular,
    BlackHoleInteraction,
    WhiteHoleInteraction,
    BigBang,
    BigCrunch,
    BlackWhiteInteraction,
}

// ---------------------------------------------------------------------
// Triangles in the ray space of q12
// ---------------------------------------------------------------------

/// A triangle of rays in the ray space of `q12`, spanned positively by
/// three pairwise independent, non-antipodal, non-lightlike rays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hs2Triangle {
    pub vertices: [FormVector; 3],
}

fn det3(cols: &[&FormVector; 3]) -> f64 {
    let c = |i: usize, k: usize| cols[i].coords[k];
    c(0, 0) * (c(1, 1) * c(2, 2) - c(1, 2) * c(2, 1))
        - c(1, 0) * (c(0, 1) * c(2, 2) - c(0, 2) * c(2, 1))
        + c(2, 0) * (c(0, 1) * c(1, 2) - c(0, 2) * c(1, 1))
}

impl Hs2Triangle {
    pub fn new(vertices: [FormVector; 3]) -> Result<Self> {
        for v in &vertices {
            if v.form != FormTag::Q12 {
                return Err(Error::input("triangle vertices must be q12 rays"));
            }
            if v.is_zero() {
                return Err(Error::math("zero vector is not a ray"));
            }
            if classify_vector(v)? == CausalClass::Lightlike {
                return Err(Error::math("triangle vertices must avoid the boundary circles"));
            }
        }
        let t = Hs2Triangle { vertices };
        let d = det3(&[&t.vertices[0], &t.vertices[1], &t.vertices[2]]);
        let scale: f64 = t.vertices.iter().map(|v| v.norm_inf()).product();
        if d.abs() < 1e-9 * scale {
            return Err(Error::math("degenerate triangle: rays are coplanar"));
        }
        Ok(t)
    }

    pub fn regions(&self) -> Result<[HsRegion; 3]> {
        Ok([
            hs_classify_ray(&self.vertices[0])?,
            hs_classify_ray(&self.vertices[1])?,
            hs_classify_ray(&self.vertices[2])?,
        ])
    }

    /// Tangent projection of vertex `j` at vertex `i`, with its norm.
    fn tangent(&self, i: usize, j: usize) -> Result<(FormVector, f64)> {
        let u = &self.vertices[i];
        let w = &self.vertices[j];
        let qu = inner(u, u)?;
        let uw = inner(u, w)?;
        let proj = w.add(&u.scaled(-uw / qu))?;
        let qp = inner(&proj, &proj)?;
        Ok((proj, qp))
    }

    /// Interior angle at a hyperbolic vertex.
    pub fn interior_angle(&self, i: usize) -> Result<f64> {
        let (a, qa) = self.tangent(i, (i + 1) % 3)?;
        let (b, qb) = self.tangent(i, (i + 2) % 3)?;
        if qa <= 0.0 || qb <= 0.0 {
            return Err(Error::math("hyperbolic vertex angle needs spacelike tangents"));
        }
        let c = inner(&a, &b)? / (qa * qb).sqrt();
        Ok(c.clamp(-1.0, 1.0).acos())
    }

    /// Lorentzian boost angle at a de Sitter vertex whose two edges
    /// point at timelike vertices of a common time side.
    pub fn boost_angle(&self, i: usize) -> Result<f64> {
        let (a, qa) = self.tangent(i, (i + 1) % 3)?;
        let (b, qb) = self.tangent(i, (i + 2) % 3)?;
        if qa >= 0.0 || qb >= 0.0 {
            return Err(Error::math(
                "de Sitter vertex angle needs timelike edge directions",
            ));
        }
        if (a.coords[0] > 0.0) != (b.coords[0] > 0.0) {
            return Err(Error::math(
                "de Sitter vertex edges must point to a common time side",
            ));
        }
        let c = -inner(&a, &b)? / (qa * qb).sqrt();
        Ok(c.max(1.0).acosh())
    }

    /// Hyperbolic distance between two timelike vertices of a common
    /// sheet.
    pub fn vertex_distance(&self, i: usize, j: usize) -> Result<f64> {
        let u = &self.vertices[i];
        let v = &self.vertices[j];
        let qu = inner(u, u)?;
        let qv = inner(v, v)?;
        if qu >= 0.0 || qv >= 0.0 {
            return Err(Error::math("distance needs timelike vertices"));
        }
        let c = -inner(u, v)? / (qu * qv).sqrt();
        Ok(c.max(1.0).acosh())
    }

    /// Boundary crossings of the positive edge arc between vertices `i`
    /// and `j`: the parameters in (0,1) where `q` vanishes, with the
    /// boundary side.
    pub fn edge_crossings(&self, i: usize, j: usize) -> Result<Vec<(f64, HsRegion)>> {
        let u = &self.vertices[i];
        let v = &self.vertices[j];
        // q((1-t) u + t v) is quadratic in t
        let quu = inner(u, u)?;
        let qvv = inner(v, v)?;
        let quv = inner(u, v)?;
        let a = quu - 2.0 * quv + qvv;
        let b = 2.0 * (quv - quu);
        let c = quu;
        let mut roots = vec![];
        if a.abs() < 1e-14 {
            if b.abs() > 1e-14 {
                roots.push(-c / b);
            }
        } else {
            let disc = b * b - 4.0 * a * c;
            if disc > 0.0 {
                let s = disc.sqrt();
                roots.push((-b + s) / (2.0 * a));
                roots.push((-b - s) / (2.0 * a));
            }
        }
        let mut out = vec![];
        for t in roots {
            if t > 1e-12 && t < 1.0 - 1e-12 {
                let p = u.scaled(1.0 - t).add(&v.scaled(t))?;
                let side = if p.coords[0] > 0.0 {
                    HsRegion::BoundaryPlus
                } else {
                    HsRegion::BoundaryMinus
                };
                out.push((t, side));
            }
        }
        out.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite"));
        Ok(out)
    }
}

/// Rotation about the point at hyperbolic distance `s` along the model
/// axis (the conjugate of `rotation(theta)` by `boost(s)`).
fn rotation_about(s: f64, theta: f64) -> ProjMatrix {
    let b = ProjMatrix::boost(s);
    b.mul(&ProjMatrix::rotation(theta)).mul(&b.inverse())
}

/// Lifted peripheral holonomy of a hyperbolic disk with cone points of
/// the given angles, placed along a common axis at the given
/// separation.  Supports one or two cone points.
pub(crate) fn composed_peripheral(angles: &[f64], separation: f64) -> Result<LiftedIsometry> {
    match angles.len() {
        1 => Ok(LiftedIsometry::canonical(rotation_about(0.0, angles[0]))),
        2 => {
            let a = LiftedIsometry::canonical(rotation_about(0.0, angles[0]));
            let b = LiftedIsometry::canonical(rotation_about(separation, angles[1]));
            Ok(a.compose(&b))
        }
        n => Err(Error::math(format!(
            "peripheral composition supports 1 or 2 cone points, got {n}"
        ))),
    }
}

impl HsSurface {
    /// The regular HS-sphere: two hyperbolic disks and a de Sitter
    /// annulus, no singularities, elliptic structures of angle 2pi.
    pub fn regular() -> HsSurface {
        let structure = || {
            Rp1Circle::new(LiftedIsometry::new(1, ProjMatrix::identity()), None)
        };
        HsSurface {
            regions: vec![
                Region {
                    kind: RegionKind::Hyperbolic(TimeSide::Future),
                    topology: RegionTopology::Disk,
                    interior_singularities: vec![],
                    boundary_circles: vec![0],
                    boundary_points: vec![],
                    certificate: DsCertificate::Unknown,
                },
                Region {
                    kind: RegionKind::Hyperbolic(TimeSide::Past),
                    topology: RegionTopology::Disk,
                    interior_singularities: vec![],
                    boundary_circles: vec![1],
                    boundary_points: vec![],
                    certificate: DsCertificate::Unknown,
                },
                Region {
                    kind: RegionKind::DeSitter,
                    topology: RegionTopology::Annulus,
                    interior_singularities: vec![],
                    boundary_circles: vec![0, 1],
                    boundary_points: vec![],
                    certificate: DsCertificate::EllipticHolonomy { angle: TAU },
                },
            ],
            photon_circles: vec![
                PhotonCircle::clean(structure()),
                PhotonCircle::clean(structure()),
            ],
            singularities: vec![],
            sphere: true,
            suspension_of: None,
        }
    }

    /// Double of a triangle of rays.  Cone angles are twice the
    /// interior angles; the region decomposition follows the vertex
    /// placement.
    pub fn double_triangle(t: &Hs2Triangle) -> Result<HsSurface> {
        let regions = t.regions()?;
        let hyp_plus: Vec<usize> =
            (0..3).filter(|&i| regions[i] == HsRegion::HypPlus).collect();
        let hyp_minus: Vec<usize> =
            (0..3).filter(|&i| regions[i] == HsRegion::HypMinus).collect();
        let ds: Vec<usize> = (0..3).filter(|&i| regions[i] == HsRegion::DeSitter).collect();

        match (hyp_plus.len(), hyp_minus.len(), ds.len()) {
            (3, 0, 0) => Self::double_one_sheet(t, TimeSide::Future),
            (0, 3, 0) => Self::double_one_sheet(t, TimeSide::Past),
            (1, 2, 0) => {
                Self::double_mixed(t, hyp_plus[0], [hyp_minus[0], hyp_minus[1]], TimeSide::Future)
            }
            (2, 1, 0) => {
                Self::double_mixed(t, hyp_minus[0], [hyp_plus[0], hyp_plus[1]], TimeSide::Past)
            }
            (0, 2, 1) => {
                Self::double_with_ds_vertex(t, ds[0], [hyp_minus[0], hyp_minus[1]], TimeSide::Past)
            }
            (2, 0, 1) => {
                Self::double_with_ds_vertex(t, ds[0], [hyp_plus[0], hyp_plus[1]], TimeSide::Future)
            }
            other => Err(Error::math(format!(
                "doubling is not supported for vertex placement {other:?}"
            ))),
        }
    }

    /// All three vertices on one hyperbolic sheet: a singular
    /// hyperbolic sphere, no photons, no de Sitter region.
    fn double_one_sheet(t: &Hs2Triangle, side: TimeSide) -> Result<HsSurface> {
        let mut singularities = vec![];
        for i in 0..3 {
            let angle = 2.0 * t.interior_angle(i)?;
            singularities.push(Singularity {
                link: model_link(&SingularityType::MassiveParticle { angle }, 1.0)?
                    .with_time_side(side),
            });
        }
        // no edge may cross the boundary circles
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if !t.edge_crossings(i, j)?.is_empty() {
                return Err(Error::math("one-sheet triangle has a boundary crossing"));
            }
        }
        Ok(HsSurface {
            regions: vec![Region {
                kind: RegionKind::Hyperbolic(side),
                topology: RegionTopology::Sphere,
                interior_singularities: vec![0, 1, 2],
                boundary_circles: vec![],
                boundary_points: vec![],
                certificate: DsCertificate::Unknown,
            }],
            photon_circles: vec![],
            singularities,
            sphere: true,
            suspension_of: None,
        })
    }

    /// One vertex on one sheet, two on the other: two hyperbolic disks
    /// joined by a de Sitter annulus.  `lone_side` is the time side of
    /// the lone vertex.
    fn double_mixed(
        t: &Hs2Triangle,
        lone: usize,
        pair: [usize; 2],
        lone_side: TimeSide,
    ) -> Result<HsSurface> {
        let lone_angle = 2.0 * t.interior_angle(lone)?;
        let pair_angles = [
            2.0 * t.interior_angle(pair[0])?,
            2.0 * t.interior_angle(pair[1])?,
        ];
        // the two mixed edges cross both boundary circles; the pair edge
        // crosses none
        for &p in &pair {
            if t.edge_crossings(lone, p)?.len() != 2 {
                return Err(Error::math("mixed edge must cross both boundary circles"));
            }
        }
        if !t.edge_crossings(pair[0], pair[1])?.is_empty() {
            return Err(Error::math("same-sheet edge must not cross the boundary"));
        }

        let lone_structure = Rp1Circle::new(composed_peripheral(&[lone_angle], 0.0)?, None);
        let sep = t.vertex_distance(pair[0], pair[1])?;
        let pair_lift = composed_peripheral(&pair_angles, sep)?;
        match classify_rp1_circle(&Rp1Circle::new(pair_lift, None))? {
            Rp1CircleClass::Elliptic { .. } => {}
            other => {
                return Err(Error::math(format!(
                    "doubled triangle boundary holonomy is not elliptic: {other:?}"
                )))
            }
        }
        let pair_structure = Rp1Circle::new(pair_lift, None);

        let pair_side = lone_side.flip();
        let mut singularities = vec![Singularity {
            link: model_link(&SingularityType::MassiveParticle { angle: lone_angle }, 1.0)?
                .with_time_side(lone_side),
        }];
        for a in pair_angles {
            singularities.push(Singularity {
                link: model_link(&SingularityType::MassiveParticle { angle: a }, 1.0)?
                    .with_time_side(pair_side),
            });
        }

        let lone_region = Region {
            kind: RegionKind::Hyperbolic(lone_side),
            topology: RegionTopology::Disk,
            interior_singularities: vec![0],
            boundary_circles: vec![0],
            boundary_points: vec![],
            certificate: DsCertificate::Unknown,
        };
        let pair_region = Region {
            kind: RegionKind::Hyperbolic(pair_side),
            topology: RegionTopology::Disk,
            interior_singularities: vec![1, 2],
            boundary_circles: vec![1],
            boundary_points: vec![],
            certificate: DsCertificate::Unknown,
        };
        let annulus = Region {
            kind: RegionKind::DeSitter,
            topology: RegionTopology::Annulus,
            interior_singularities: vec![],
            boundary_circles: vec![0, 1],
            boundary_points: vec![],
            certificate: DsCertificate::EllipticHolonomy { angle: lone_angle },
        };
        Ok(HsSurface {
            regions: vec![lone_region, pair_region, annulus],
            photon_circles: vec![
                PhotonCircle::clean(lone_structure),
                PhotonCircle::clean(pair_structure),
            ],
            singularities,
            sphere: true,
            suspension_of: None,
        })
    }

    /// One de Sitter vertex, two timelike vertices on one sheet: one
    /// hyperbolic disk, one de Sitter disk with a BTZ-like point.
    /// `pair_side` is the time side of the two timelike vertices.
    fn double_with_ds_vertex(
        t: &Hs2Triangle,
        ds_vertex: usize,
        pair: [usize; 2],
        pair_side: TimeSide,
    ) -> Result<HsSurface> {
        let boost = t.boost_angle(ds_vertex)?;
        let pair_angles = [
            2.0 * t.interior_angle(pair[0])?,
            2.0 * t.interior_angle(pair[1])?,
        ];
        for &p in &pair {
            if t.edge_crossings(ds_vertex, p)?.len() != 1 {
                return Err(Error::math(
                    "edge from the de Sitter vertex must cross one boundary circle",
                ));
            }
        }
        if !t.edge_crossings(pair[0], pair[1])?.is_empty() {
            return Err(Error::math("same-sheet edge must not cross the boundary"));
        }

        // the doubled de Sitter vertex is BTZ-like: future type when its
        // edges point into the past cone
        let btz_side = pair_side.flip();
        let btz_length = 2.0 * boost;
        let btz_link = model_link(&SingularityType::Btz { side: btz_side }, btz_length)?;

        let sep = t.vertex_distance(pair[0], pair[1])?;
        let circle_lift = composed_peripheral(&pair_angles, sep)?;
        match classify_rp1_circle(&Rp1Circle::new(circle_lift, None))? {
            Rp1CircleClass::Hyperbolic { translation_length, .. } => {
                if (translation_length - btz_length).abs() > 1e-6 {
                    return Err(Error::math(format!(
                        "photon circle holonomy length {translation_length} does not match \
                         the doubled vertex boost {btz_length}"
                    )));
                }
            }
            other => {
                return Err(Error::math(format!(
                    "expected hyperbolic photon circle holonomy, got {other:?}"
                )))
            }
        }
        let structure = Rp1Circle::new(circle_lift, None);

        let mut singularities = vec![Singularity { link: btz_link }];
        for a in pair_angles {
            singularities.push(Singularity {
                link: model_link(&SingularityType::MassiveParticle { angle: a }, 1.0)?
                    .with_time_side(pair_side),
            });
        }

        Ok(HsSurface {
            regions: vec![
                Region {
                    kind: RegionKind::Hyperbolic(pair_side),
                    topology: RegionTopology::Disk,
                    interior_singularities: vec![1, 2],
                    boundary_circles: vec![0],
                    boundary_points: vec![],
                    certificate: DsCertificate::Unknown,
                },
                Region {
                    kind: RegionKind::DeSitter,
                    topology: RegionTopology::Disk,
                    interior_singularities: vec![0],
                    boundary_circles: vec![0],
                    boundary_points: vec![],
                    certificate: DsCertificate::BtzAbsorbing,
                },
            ],
            photon_circles: vec![PhotonCircle::clean(structure)],
            singularities,
            sphere: true,
            suspension_of: None,
        })
    }

    /// Suspension of a single link circle: the sphere carrying the two
    /// antipodal singular points of the circle.
    pub fn suspension_of_link(link: &LinkCircle) -> Result<HsSurface> {
        link.validate()?;
        let t = classify_singularity(link)?;
        let anti = crate::link::antipodal_type(&t);
        let here = Singularity { link: link.clone() };
        let length = match classify_rp1_circle(&link.rp1)? {
            Rp1CircleClass::Elliptic { angle } => angle,
            Rp1CircleClass::Hyperbolic { translation_length, .. } => translation_length,
            Rp1CircleClass::Parabolic { .. } => 1.0,
        };
        let there = Singularity { link: model_link(&anti, length.max(1e-6))? };
        let mut s = match t {
            SingularityType::MassiveParticle { angle } => {
                let structure = Rp1Circle::new(link.rp1.holonomy, None);
                HsSurface {
                    regions: vec![
                        Region {
                            kind: RegionKind::Hyperbolic(TimeSide::Future),
                            topology: RegionTopology::Disk,
                            interior_singularities: vec![0],
                            boundary_circles: vec![0],
                            boundary_points: vec![],
                            certificate: DsCertificate::Unknown,
                        },
                        Region {
                            kind: RegionKind::Hyperbolic(TimeSide::Past),
                            topology: RegionTopology::Disk,
                            interior_singularities: vec![1],
                            boundary_circles: vec![1],
                            boundary_points: vec![],
                            certificate: DsCertificate::Unknown,
                        },
                        Region {
                            kind: RegionKind::DeSitter,
                            topology: RegionTopology::Annulus,
                            interior_singularities: vec![],
                            boundary_circles: vec![0, 1],
                            boundary_points: vec![],
                            certificate: DsCertificate::EllipticHolonomy { angle },
                        },
                    ],
                    photon_circles: vec![
                        PhotonCircle::clean(structure.clone()),
                        PhotonCircle::clean(structure),
                    ],
                    singularities: vec![here, there],
                    sphere: true,
                    suspension_of: None,
                }
            }
            SingularityType::Btz { side } => {
                Self::btz_link_sphere_inner(length, side, [here, there])
            }
            SingularityType::Misner => {
                let sys = FirstReturnSystem::new(link.rp1.holonomy.base, vec![])?;
                HsSurface {
                    regions: vec![Region {
                        kind: RegionKind::DeSitter,
                        topology: RegionTopology::Sphere,
                        interior_singularities: vec![0, 1],
                        boundary_circles: vec![],
                        boundary_points: vec![],
                        certificate: DsCertificate::FirstReturn(sys),
                    }],
                    photon_circles: vec![],
                    singularities: vec![here, there],
                    sphere: true,
                    suspension_of: None,
                }
            }
            SingularityType::Tachyon { .. }
            | SingularityType::HighDegree { lightlike: false, .. } => {
                let structure =
                    Rp1Circle::new(LiftedIsometry::new(1, link.rp1.holonomy.base), None);
                HsSurface {
                    regions: vec![
                        Region {
                            kind: RegionKind::Hyperbolic(TimeSide::Future),
                            topology: RegionTopology::Disk,
                            interior_singularities: vec![],
                            boundary_circles: vec![0],
                            boundary_points: vec![],
                            certificate: DsCertificate::Unknown,
                        },
                        Region {
                            kind: RegionKind::Hyperbolic(TimeSide::Past),
                            topology: RegionTopology::Disk,
                            interior_singularities: vec![],
                            boundary_circles: vec![1],
                            boundary_points: vec![],
                            certificate: DsCertificate::Unknown,
                        },
                        Region {
                            kind: RegionKind::DeSitter,
                            topology: RegionTopology::Annulus,
                            interior_singularities: vec![0, 1],
                            boundary_circles: vec![0, 1],
                            boundary_points: vec![],
                            certificate: DsCertificate::ModelLink,
                        },
                    ],
                    photon_circles: vec![
                        PhotonCircle::clean(structure.clone()),
                        PhotonCircle::clean(structure),
                    ],
                    singularities: vec![here, there],
                    sphere: true,
                    suspension_of: None,
                }
            }
            SingularityType::Photon { .. }
            | SingularityType::HighDegree { lightlike: true, .. } => {
                let hyp = Rp1Circle::new(LiftedIsometry::new(1, link.rp1.holonomy.base), None);
                let correction = link.rp1.holonomy.base;
                let ds_lift = hyp.holonomy.compose(&LiftedIsometry::canonical(correction));
                let ds = Rp1Circle::new(ds_lift, None);
                let mk_circle = |sing: usize| PhotonCircle {
                    hyperbolic_side: hyp.clone(),
                    de_sitter_side: ds.clone(),
                    corrections: vec![correction],
                    lightlike_singularities: vec![sing],
                };
                HsSurface {
                    regions: vec![
                        Region {
                            kind: RegionKind::Hyperbolic(TimeSide::Future),
                            topology: RegionTopology::Disk,
                            interior_singularities: vec![],
                            boundary_circles: vec![0],
                            boundary_points: vec![],
                            certificate: DsCertificate::Unknown,
                        },
                        Region {
                            kind: RegionKind::Hyperbolic(TimeSide::Past),
                            topology: RegionTopology::Disk,
                            interior_singularities: vec![],
                            boundary_circles: vec![1],
                            boundary_points: vec![],
                            certificate: DsCertificate::Unknown,
                        },
                        Region {
                            kind: RegionKind::DeSitter,
                            topology: RegionTopology::Annulus,
                            interior_singularities: vec![],
                            boundary_circles: vec![0, 1],
                            boundary_points: vec![],
                            certificate: DsCertificate::ModelLink,
                        },
                    ],
                    photon_circles: vec![mk_circle(0), mk_circle(1)],
                    singularities: vec![here, there],
                    sphere: true,
                    suspension_of: None,
                }
            }
            SingularityType::ExtremeBtz { .. } | SingularityType::Cuspidal { .. } => {
                // one cusped hyperbolic annulus and one de Sitter
                // annulus, sharing a single circle of photons, with the
                // two photon points at the far ends
                let (cusp_idx, ebtz_idx, hyp_side) = match t {
                    SingularityType::Cuspidal { side } => (0usize, 1usize, side),
                    _ => (
                        1usize,
                        0usize,
                        match anti {
                            SingularityType::Cuspidal { side } => side,
                            _ => unreachable!("antipode of extreme BTZ is cuspidal"),
                        },
                    ),
                };
                let structure = Rp1Circle::new(
                    LiftedIsometry::canonical(link.rp1.holonomy.base),
                    Some(IntervalKind::FutureArc),
                );
                HsSurface {
                    regions: vec![
                        Region {
                            kind: RegionKind::Hyperbolic(hyp_side),
                            topology: RegionTopology::Annulus,
                            interior_singularities: vec![],
                            boundary_circles: vec![0],
                            boundary_points: vec![cusp_idx],
                            certificate: DsCertificate::Unknown,
                        },
                        Region {
                            kind: RegionKind::DeSitter,
                            topology: RegionTopology::Annulus,
                            interior_singularities: vec![],
                            boundary_circles: vec![0],
                            boundary_points: vec![ebtz_idx],
                            certificate: DsCertificate::ModelLink,
                        },
                    ],
                    photon_circles: vec![PhotonCircle::clean(structure)],
                    singularities: vec![here, there],
                    sphere: true,
                    suspension_of: None,
                }
            }
        };
        s.suspension_of = Some(link.clone());
        Ok(s)
    }

    fn btz_link_sphere_inner(length: f64, side: TimeSide, sings: [Singularity; 2]) -> HsSurface {
        let hyp_side = side.flip();
        let structure = || {
            Rp1Circle::new(
                LiftedIsometry::canonical(ProjMatrix::boost(length)),
                Some(IntervalKind::SpacelikeArc),
            )
        };
        HsSurface {
            regions: vec![
                Region {
                    kind: RegionKind::Hyperbolic(hyp_side),
                    topology: RegionTopology::Annulus,
                    interior_singularities: vec![],
                    boundary_circles: vec![0, 1],
                    boundary_points: vec![],
                    certificate: DsCertificate::Unknown,
                },
                Region {
                    kind: RegionKind::DeSitter,
                    topology: RegionTopology::Disk,
                    interior_singularities: vec![0],
                    boundary_circles: vec![0],
                    boundary_points: vec![],
                    certificate: DsCertificate::BtzAbsorbing,
                },
                Region {
                    kind: RegionKind::DeSitter,
                    topology: RegionTopology::Disk,
                    interior_singularities: vec![1],
                    boundary_circles: vec![1],
                    boundary_points: vec![],
                    certificate: DsCertificate::BtzAbsorbing,
                },
            ],
            photon_circles: vec![
                PhotonCircle::clean(structure()),
                PhotonCircle::clean(structure()),
            ],
            singularities: sings.to_vec(),
            sphere: true,
            suspension_of: None,
        }
    }

    /// The HS-sphere of a static BTZ spacetime: a hyperbolic annulus
    /// between two de Sitter disks, each holding one BTZ point.
    pub fn btz_link_sphere(length: f64, side: TimeSide) -> Result<HsSurface> {
        let link = model_link(&SingularityType::Btz { side }, length)?;
        Self::suspension_of_link(&link)
    }

    /// A sphere with no hyperbolic region: one future and one past
    /// BTZ-like point joined across a de Sitter sphere, with the
    /// positive tachyon produced by the gluing.
    pub fn black_white_sphere(
        future_length: f64,
        past_length: f64,
        tachyon_length: f64,
    ) -> Result<HsSurface> {
        Ok(HsSurface {
            regions: vec![Region {
                kind: RegionKind::DeSitter,
                topology: RegionTopology::Sphere,
                interior_singularities: vec![0, 1, 2],
                boundary_circles: vec![],
                boundary_points: vec![],
                certificate: DsCertificate::BtzAbsorbing,
            }],
            photon_circles: vec![],
            singularities: vec![
                Singularity {
                    link: model_link(
                        &SingularityType::Btz { side: TimeSide::Future },
                        future_length,
                    )?,
                },
                Singularity {
                    link: model_link(&SingularityType::Btz { side: TimeSide::Past }, past_length)?,
                },
                Singularity {
                    link: model_link(&SingularityType::Tachyon { sign: 1 }, tachyon_length)?,
                },
            ],
            sphere: true,
            suspension_of: None,
        })
    }

    /// Structural consistency of the stored decomposition.
    pub fn validate(&self) -> Result<()> {
        for (ri, r) in self.regions.iter().enumerate() {
            for &i in r.interior_singularities.iter().chain(r.boundary_points.iter()) {
                if i >= self.singularities.len() {
                    return Err(Error::input(format!(
                        "region {ri}: singularity index {i} out of range"
                    )));
                }
            }
            for &c in &r.boundary_circles {
                if c >= self.photon_circles.len() {
                    return Err(Error::input(format!(
                        "region {ri}: circle index {c} out of range"
                    )));
                }
            }
            for &i in &r.interior_singularities {
                let base = self.singularities[i].link.base_class;
                let compatible = match r.kind {
                    RegionKind::Hyperbolic(TimeSide::Future) => base == HsRegion::HypPlus,
                    RegionKind::Hyperbolic(TimeSide::Past) => base == HsRegion::HypMinus,
                    RegionKind::DeSitter => base == HsRegion::DeSitter,
                };
                if !compatible {
                    return Err(Error::math(format!(
                        "region {ri}: singularity {i} has incompatible base class"
                    )));
                }
            }
            for &i in &r.boundary_points {
                if !self.singularities[i].link.base_class.is_boundary() {
                    return Err(Error::math(format!(
                        "region {ri}: boundary point {i} is not a photon point"
                    )));
                }
            }
        }
        for s in &self.singularities {
            s.link.validate()?;
        }
        // every photon circle separates a hyperbolic region from a
        // de Sitter region
        for c in 0..self.photon_circles.len() {
            let mut hyp = 0;
            let mut ds = 0;
            for r in &self.regions {
                let n = r.boundary_circles.iter().filter(|&&x| x == c).count();
                match r.kind {
                    RegionKind::Hyperbolic(_) => hyp += n,
                    RegionKind::DeSitter => ds += n,
                }
            }
            if hyp != 1 || ds != 1 {
                return Err(Error::math(format!(
                    "photon circle {c} must bound one hyperbolic and one de Sitter region \
                     (found {hyp} and {ds})"
                )));
            }
        }
        Ok(())
    }
}

/// Re-homes a massive-particle link on the requested hyperbolic sheet.
trait WithTimeSide {
    fn with_time_side(self, side: TimeSide) -> Self;
}

impl WithTimeSide for LinkCircle {
    fn with_time_side(mut self, side: TimeSide) -> LinkCircle {
        self.base_class = match side {
            TimeSide::Future => HsRegion::HypPlus,
            TimeSide::Past => HsRegion::HypMinus,
        };
        self
    }
}

// ---------------------------------------------------------------------
// Reports and classifiers
// ---------------------------------------------------------------------

/// Census entry for one region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSummary {
    pub kind: RegionKind,
    pub topology: RegionTopology,
    pub cone_points: usize,
    pub btz_points: usize,
    pub other_points: usize,
    pub boundary_circles: usize,
    pub boundary_photon_points: usize,
}

/// The three-way decomposition report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub regions: Vec<RegionSummary>,
    pub photon_circles: usize,
    /// (hyperbolic region, de Sitter region, circle) adjacencies.
    pub adjacency: Vec<(usize, usize, usize)>,
    pub cusp_points: usize,
    pub extreme_btz_points: usize,
}

/// Computes the decomposition census and the region adjacency graph.
pub fn region_decomposition(s: &HsSurface) -> Result<DecompositionReport> {
    s.validate()?;
    let mut regions = vec![];
    for r in &s.regions {
        let mut cone = 0;
        let mut btz = 0;
        let mut other = 0;
        for &i in &r.interior_singularities {
            match classify_singularity(&s.singularities[i].link)? {
                SingularityType::MassiveParticle { .. } => cone += 1,
                SingularityType::Btz { .. } => btz += 1,
                _ => other += 1,
            }
        }
        regions.push(RegionSummary {
            kind: r.kind,
            topology: r.topology,
            cone_points: cone,
            btz_points: btz,
            other_points: other,
            boundary_circles: r.boundary_circles.len(),
            boundary_photon_points: r.boundary_points.len(),
        });
    }
    let mut adjacency = vec![];
    for c in 0..s.photon_circles.len() {
        let mut hyp_region = None;
        let mut ds_region = None;
        for (ri, r) in s.regions.iter().enumerate() {
            if r.boundary_circles.contains(&c) {
                match r.kind {
                    RegionKind::Hyperbolic(_) => hyp_region = Some(ri),
                    RegionKind::DeSitter => ds_region = Some(ri),
                }
            }
        }
        adjacency.push((hyp_region.expect("validated"), ds_region.expect("validated"), c));
    }
    let mut cusps = 0;
    let mut extreme = 0;
    for sing in &s.singularities {
        match classify_singularity(&sing.link)? {
            SingularityType::Cuspidal { .. } => cusps += 1,
            SingularityType::ExtremeBtz { .. } => extreme += 1,
            _ => {}
        }
    }
    Ok(DecompositionReport {
        regions,
        photon_circles: s.photon_circles.len(),
        adjacency,
        cusp_points: cusps,
        extreme_btz_points: extreme,
    })
}

/// Index check for the isotropic foliations of the de Sitter regions:
/// the number of interior BTZ points equals 2 minus the number of
/// boundary components (photon circles plus extreme photon points),
/// and the stored topology matches that count.
pub fn de_sitter_topology_check(s: &HsSurface) -> Result<bool> {
    s.validate()?;
    for r in &s.regions {
        if r.kind != RegionKind::DeSitter {
            continue;
        }
        let mut btz = 0i64;
        for &i in &r.interior_singularities {
            if matches!(
                classify_singularity(&s.singularities[i].link)?,
                SingularityType::Btz { .. }
            ) {
                btz += 1;
            }
        }
        let boundary = (r.boundary_circles.len() + r.boundary_points.len()) as i64;
        let expected_topology = match boundary {
            0 => RegionTopology::Sphere,
            1 => RegionTopology::Disk,
            2 => RegionTopology::Annulus,
            _ => return Ok(false),
        };
        if r.topology != expected_topology || btz != 2 - boundary {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The two projective structures of a photon circle, validated against
/// the stored parabolic corrections.
pub fn photon_circle_structures(s: &HsSurface, circle: usize) -> Result<(Rp1Circle, Rp1Circle)> {
    let c = s
        .photon_circles
        .get(circle)
        .ok_or_else(|| Error::input(format!("no photon circle {circle}")))?;
    if c.corrections.is_empty() {
        // the two structures must coincide
        let a = classify_rp1_circle(&c.hyperbolic_side)?;
        let b = classify_rp1_circle(&c.de_sitter_side)?;
        let same = match (a, b) {
            (Rp1CircleClass::Elliptic { angle: x }, Rp1CircleClass::Elliptic { angle: y }) => {
                (x - y).abs() < 1e-9
            }
            (
                Rp1CircleClass::Hyperbolic { degree: d1, translation_length: l1 },
                Rp1CircleClass::Hyperbolic { degree: d2, translation_length: l2 },
            ) => d1 == d2 && (l1 - l2).abs() < 1e-9,
            (
                Rp1CircleClass::Parabolic { degree: d1, positive: p1 },
                Rp1CircleClass::Parabolic { degree: d2, positive: p2 },
            ) => d1 == d2 && p1 == p2,
            _ => false,
        };
        if !same {
            return Err(Error::math(
                "photon circle without lightlike singularities must carry equal structures",
            ));
        }
    } else {
        // de Sitter side = hyperbolic side composed with the parabolic
        // corrections
        let mut lift = c.hyperbolic_side.holonomy;
        for corr in &c.corrections {
            lift = lift.compose(&LiftedIsometry::canonical(*corr));
        }
        let got = c.de_sitter_side.holonomy;
        if lift.degree != got.degree {
            return Err(Error::math("correction composition degree mismatch"));
        }
        for (x, y) in lift.base.m.iter().flatten().zip(got.base.m.iter().flatten()) {
            if (x - y).abs() > 1e-7 {
                return Err(Error::math("correction composition mismatch"));
            }
        }
    }
    Ok((c.hyperbolic_side.clone(), c.de_sitter_side.clone()))
}

/// Causality of the whole surface: every singular line must be causal
/// and every de Sitter region must certify the absence of closed
/// causal curves.
pub fn surface_causal(s: &HsSurface) -> Result<CausalVerdict> {
    s.validate()?;
    let mut verdict = CausalVerdict::ok();
    for sing in &s.singularities {
        let t = classify_singularity(&sing.link)?;
        verdict = verdict.merge(is_causal_line(&t));
    }
    for (ri, r) in s.regions.iter().enumerate() {
        if r.kind != RegionKind::DeSitter {
            continue;
        }
        match &r.certificate {
            DsCertificate::EllipticHolonomy { angle } => {
                if *angle <= 0.0 {
                    return Err(Error::math("degenerate elliptic certificate"));
                }
            }
            DsCertificate::BtzAbsorbing => {
                // absorbing certificates need the advertised BTZ sinks
                let mut future = 0;
                let mut past = 0;
                for &i in &r.interior_singularities {
                    if let SingularityType::Btz { side } =
                        classify_singularity(&s.singularities[i].link)?
                    {
                        match side {
                            TimeSide::Future => future += 1,
                            TimeSide::Past => past += 1,
                        }
                    }
                }
                let ok = match r.topology {
                    RegionTopology::Disk => future + past == 1,
                    RegionTopology::Sphere => future == 1 && past == 1,
                    RegionTopology::Annulus => false,
                };
                if !ok {
                    return Err(Error::undecidable(format!(
                        "region {ri}: BTZ-absorbing certificate does not match its census"
                    )));
                }
            }
            DsCertificate::FirstReturn(sys) => {
                let rep = detect_ccc(sys)?;
                if rep.has_ccc {
                    verdict.causal = false;
                    if !verdict.reasons.contains(&crate::link::ViolationTag::MisnerCtc) {
                        verdict.reasons.push(crate::link::ViolationTag::MisnerCtc);
                    }
                }
            }
            DsCertificate::ModelLink => {
                // causality of the suspension of a single causal line is
                // the causality of the line, checked above
            }
            DsCertificate::Unknown => {
                return Err(Error::undecidable(format!(
                    "region {ri}: no closed-causal-curve reduction available"
                )));
            }
        }
    }
    verdict.causal = verdict.reasons.is_empty();
    Ok(verdict)
}

/// The interaction classifier for positive causal HS-spheres.
pub fn classify_interaction(s: &HsSurface) -> Result<InteractionClass> {
    s.validate()?;
    if !s.sphere {
        return Err(Error::math("interaction classification needs a sphere"));
    }
    for sing in &s.singularities {
        let t = classify_singularity(&sing.link)?;
        if !is_positive(&t) {
            return Err(Error::math(format!("surface is not positive at {t:?}")));
        }
    }
    let verdict = surface_causal(s)?;
    if !verdict.causal {
        return Err(Error::math(format!("surface is not causal: {:?}", verdict.reasons)));
    }

    let future_hyp = s
        .regions
        .iter()
        .filter(|r| r.kind == RegionKind::Hyperbolic(TimeSide::Future))
        .count();
    let past_hyp = s
        .regions
        .iter()
        .filter(|r| r.kind == RegionKind::Hyperbolic(TimeSide::Past))
        .count();
    let ds: Vec<&Region> = s.regions.iter().filter(|r| r.kind == RegionKind::DeSitter).collect();

    if future_hyp > 1 || past_hyp > 1 {
        return Err(Error::math(
            "a positive causal sphere admits at most one hyperbolic region per time side",
        ));
    }

    if future_hyp == 1 && past_hyp == 1 {
        if ds.len() != 1 || ds[0].topology != RegionTopology::Annulus {
            return Err(Error::math(
                "causally regular spheres have a unique de Sitter annulus",
            ));
        }
        return Ok(InteractionClass::CausallyRegular);
    }
    if ds.is_empty() {
        return match (future_hyp, past_hyp) {
            (1, 0) => Ok(InteractionClass::BigBang),
            (0, 1) => Ok(InteractionClass::BigCrunch),
            _ => Err(Error::math("no de Sitter region and no unique hyperbolic region")),
        };
    }
    if future_hyp == 0 && past_hyp == 0 {
        return Ok(InteractionClass::BlackWhiteInteraction);
    }
    // one hyperbolic side with de Sitter regions: each de Sitter region
    // is a disk around its BTZ point (or has an extreme point removed)
    for r in &ds {
        let ok_disk = r.topology == RegionTopology::Disk
            || (r.topology == RegionTopology::Annulus && !r.boundary_points.is_empty());
        if !ok_disk {
            return Err(Error::math(
                "black/white hole interactions need de Sitter disks around their BTZ points",
            ));
        }
    }
    if future_hyp == 0 {
        Ok(InteractionClass::BlackHoleInteraction)
    } else {
        Ok(InteractionClass::WhiteHoleInteraction)
    }
}

// ---------------------------------------------------------------------
// Surface recipes (wire format)
// ---------------------------------------------------------------------

/// Buildable descriptions of surfaces accepted on the wire.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceRecipe {
    Regular,
    DoubledTriangle { vertices: [[f64; 3]; 3] },
    BtzLink { length: f64, side: TimeSide },
    BlackWhite { future_length: f64, past_length: f64, tachyon_length: f64 },
    LinkSuspension { link: serde_json::Value },
}

impl SurfaceRecipe {
    pub fn build(&self) -> Result<HsSurface> {
        match self {
            SurfaceRecipe::Regular => Ok(HsSurface::regular()),
            SurfaceRecipe::DoubledTriangle { vertices } => {
                let vs = [
                    FormVector::q12(vertices[0]),
                    FormVector::q12(vertices[1]),
                    FormVector::q12(vertices[2]),
                ];
                HsSurface::double_triangle(&Hs2Triangle::new(vs)?)
            }
            SurfaceRecipe::BtzLink { length, side } => HsSurface::btz_link_sphere(*length, *side),
            SurfaceRecipe::BlackWhite { future_length, past_length, tachyon_length } => {
                HsSurface::black_white_sphere(*future_length, *past_length, *tachyon_length)
            }
            SurfaceRecipe::LinkSuspension { link } => {
                HsSurface::suspension_of_link(&LinkCircle::from_json(link)?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Triangle with one future vertex and two past vertices.
    pub(crate) fn mixed_triangle() -> Hs2Triangle {
        Hs2Triangle::new([
            FormVector::q12([1.0, 0.0, 0.0]),
            FormVector::q12([-1.3, 0.5, 0.0]),
            FormVector::q12([-1.3, -0.2, 0.45]),
        ])
        .unwrap()
    }

    pub(crate) fn equilateral_future(alpha: f64) -> Hs2Triangle {
        // equilateral triangle with interior angle alpha on the future
        // sheet: cosh(side) = cos(alpha) / (1 - cos(alpha))
        let ca = alpha.cos();
        let d = (ca / (1.0 - ca)).acosh();
        let v0 = FormVector::q12([1.0, 0.0, 0.0]);
        let v1 = FormVector::q12([d.cosh(), d.sinh(), 0.0]);
        let v2 = FormVector::q12([d.cosh(), d.sinh() * alpha.cos(), d.sinh() * alpha.sin()]);
        Hs2Triangle::new([v0, v1, v2]).unwrap()
    }

    #[test]
    fn equilateral_triangle_angles_match_law_of_cosines() {
        let t = equilateral_future(PI / 6.0);
        for i in 0..3 {
            assert!(
                (t.interior_angle(i).unwrap() - PI / 6.0).abs() < 1e-9,
                "angle {i}: {}",
                t.interior_angle(i).unwrap()
            );
        }
        let s = HsSurface::double_triangle(&t).unwrap();
        assert_eq!(s.regions.len(), 1);
        assert_eq!(s.singularities.len(), 3);
        for sing in &s.singularities {
            match classify_singularity(&sing.link).unwrap() {
                SingularityType::MassiveParticle { angle } => {
                    assert!((angle - PI / 3.0).abs() < 1e-9)
                }
                t => panic!("{t:?}"),
            }
        }
    }

    #[test]
    fn mixed_triangle_census() {
        let t = mixed_triangle();
        let s = HsSurface::double_triangle(&t).unwrap();
        let rep = region_decomposition(&s).unwrap();
        assert_eq!(rep.photon_circles, 2);
        assert_eq!(rep.regions.len(), 3);
        let future: Vec<_> = rep
            .regions
            .iter()
            .filter(|r| r.kind == RegionKind::Hyperbolic(TimeSide::Future))
            .collect();
        let past: Vec<_> = rep
            .regions
            .iter()
            .filter(|r| r.kind == RegionKind::Hyperbolic(TimeSide::Past))
            .collect();
        let ds: Vec<_> =
            rep.regions.iter().filter(|r| r.kind == RegionKind::DeSitter).collect();
        assert_eq!(future.len(), 1);
        assert_eq!(future[0].cone_points, 1);
        assert_eq!(future[0].topology, RegionTopology::Disk);
        assert_eq!(past.len(), 1);
        assert_eq!(past[0].cone_points, 2);
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0].topology, RegionTopology::Annulus);
        assert!(de_sitter_topology_check(&s).unwrap());
    }

    #[test]
    fn regular_sphere_census() {
        let s = HsSurface::regular();
        let rep = region_decomposition(&s).unwrap();
        assert_eq!(rep.photon_circles, 2);
        assert_eq!(rep.regions.len(), 3);
        assert_eq!(rep.cusp_points, 0);
        assert!(surface_causal(&s).unwrap().causal);
        assert!(de_sitter_topology_check(&s).unwrap());
        // regular photon circles carry the elliptic structure of angle
        // 2pi on both sides
        let (h, d) = photon_circle_structures(&s, 0).unwrap();
        assert_eq!(
            classify_rp1_circle(&h).unwrap(),
            Rp1CircleClass::Elliptic { angle: TAU }
        );
        assert_eq!(h, d);
    }

    #[test]
    fn doubled_triangle_cone_angles_are_twice_interior_angles() {
        let t = mixed_triangle();
        let s = HsSurface::double_triangle(&t).unwrap();
        let mut angles: Vec<f64> = s
            .singularities
            .iter()
            .map(|sing| match classify_singularity(&sing.link).unwrap() {
                SingularityType::MassiveParticle { angle } => angle,
                t => panic!("{t:?}"),
            })
            .collect();
        let mut expected: Vec<f64> =
            (0..3).map(|i| 2.0 * t.interior_angle(i).unwrap()).collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, e) in angles.iter().zip(&expected) {
            assert!((a - e).abs() < 1e-9, "{a} vs {e}");
        }
    }

    #[test]
    fn ds_vertex_triangle_builds_btz_patch() {
        // one de Sitter vertex, two past vertices
        let t = Hs2Triangle::new([
            FormVector::q12([0.1, 1.0, 0.0]),
            FormVector::q12([-1.2, 0.3, 0.2]),
            FormVector::q12([-1.2, 0.3, -0.2]),
        ])
        .unwrap();
        let s = HsSurface::double_triangle(&t).unwrap();
        assert_eq!(s.regions.len(), 2);
        let kinds: Vec<RegionKind> = s.regions.iter().map(|r| r.kind).collect();
        assert!(kinds.contains(&RegionKind::Hyperbolic(TimeSide::Past)));
        assert!(kinds.contains(&RegionKind::DeSitter));
        let types: Vec<SingularityType> = s
            .singularities
            .iter()
            .map(|x| classify_singularity(&x.link).unwrap())
            .collect();
        assert!(types.contains(&SingularityType::Btz { side: TimeSide::Future }));
        assert!(de_sitter_topology_check(&s).unwrap());
        // the photon circle carries the hyperbolic structure of the
        // doubled boost on both sides
        let (h, _) = photon_circle_structures(&s, 0).unwrap();
        match classify_rp1_circle(&h).unwrap() {
            Rp1CircleClass::Hyperbolic { translation_length, .. } => {
                assert!((translation_length - 2.0 * t.boost_angle(0).unwrap()).abs() < 1e-6);
            }
            k => panic!("{k:?}"),
        }
        assert_eq!(
            classify_interaction(&s).unwrap(),
            InteractionClass::BlackHoleInteraction
        );
    }

    #[test]
    fn interaction_classifier_families() {
        let s = HsSurface::double_triangle(&mixed_triangle()).unwrap();
        assert_eq!(classify_interaction(&s).unwrap(), InteractionClass::CausallyRegular);

        let up = equilateral_future(PI / 6.0);
        let s = HsSurface::double_triangle(&up).unwrap();
        assert_eq!(classify_interaction(&s).unwrap(), InteractionClass::BigBang);

        let down = Hs2Triangle::new([
            up.vertices[0].neg(),
            up.vertices[1].neg(),
            up.vertices[2].neg(),
        ])
        .unwrap();
        let s = HsSurface::double_triangle(&down).unwrap();
        assert_eq!(classify_interaction(&s).unwrap(), InteractionClass::BigCrunch);

        let s = HsSurface::black_white_sphere(2.0, 1.5, 0.7).unwrap();
        assert_eq!(
            classify_interaction(&s).unwrap(),
            InteractionClass::BlackWhiteInteraction
        );
    }

    #[test]
    fn btz_link_sphere_census_and_deg0_circles() {
        let s = HsSurface::btz_link_sphere(2.0, TimeSide::Future).unwrap();
        let rep = region_decomposition(&s).unwrap();
        assert_eq!(rep.photon_circles, 2);
        assert_eq!(rep.regions.len(), 3);
        assert!(de_sitter_topology_check(&s).unwrap());
        // the hyperbolic region is an annulus: its circles carry the
        // degree-zero hyperbolic structure
        let (h, _) = photon_circle_structures(&s, 0).unwrap();
        match classify_rp1_circle(&h).unwrap() {
            Rp1CircleClass::Hyperbolic { degree, translation_length } => {
                assert_eq!(degree, 0);
                assert!((translation_length - 2.0).abs() < 1e-9);
            }
            k => panic!("{k:?}"),
        }
        assert_eq!(
            classify_interaction(&s).unwrap(),
            InteractionClass::BlackHoleInteraction
        );
    }

    #[test]
    fn misner_suspension_is_not_causal() {
        let link = model_link(&SingularityType::Misner, 1.2).unwrap();
        let s = HsSurface::suspension_of_link(&link).unwrap();
        let v = surface_causal(&s).unwrap();
        assert!(!v.causal);
    }

    #[test]
    fn photon_suspension_validates_corrections() {
        let link = model_link(
            &SingularityType::Photon { sign: 1, side: TimeSide::Future },
            1.0,
        )
        .unwrap();
        let s = HsSurface::suspension_of_link(&link).unwrap();
        // structures differ by exactly the stored parabolic correction
        let (h, d) = photon_circle_structures(&s, 0).unwrap();
        assert_ne!(h, d);
        assert!(surface_causal(&s).unwrap().causal);
    }

    #[test]
    fn unknown_certificate_is_undecidable() {
        let mut s = HsSurface::double_triangle(&mixed_triangle()).unwrap();
        for r in &mut s.regions {
            if r.kind == RegionKind::DeSitter {
                r.certificate = DsCertificate::Unknown;
            }
        }
        match surface_causal(&s) {
            Err(Error::Undecidable(_)) => {}
            other => panic!("expected undecidable, got {other:?}"),
        }
    }

    #[test]
    fn composed_peripheral_matches_triangle_identity() {
        // for a doubled triangle the product of the two peripheral
        // rotations of the pair disk is elliptic, determined by the
        // lone vertex angle
        let t = equilateral_future(PI / 7.0);
        let d = t.vertex_distance(1, 2).unwrap();
        let lift = composed_peripheral(
            &[
                2.0 * t.interior_angle(1).unwrap(),
                2.0 * t.interior_angle(2).unwrap(),
            ],
            d,
        )
        .unwrap();
        match classify_rp1_circle(&Rp1Circle::new(lift, None)).unwrap() {
            Rp1CircleClass::Elliptic { angle } => {
                let alpha = 2.0 * t.interior_angle(0).unwrap();
                let matches_direct = (angle - alpha).abs() < 1e-9;
                let matches_reverse = (angle - (TAU - alpha)).abs() < 1e-9;
                assert!(
                    matches_direct || matches_reverse,
                    "composite angle {angle}, lone cone angle {alpha}"
                );
            }
            k => panic!("{k:?}"),
        }
    }

    #[test]
    fn recipes_build() {
        let r: SurfaceRecipe = serde_json::from_value(serde_json::json!({
            "kind": "doubled_triangle",
            "vertices": [[1.0, 0.0, 0.0], [-1.3, 0.5, 0.0], [-1.3, -0.2, 0.45]],
        }))
        .unwrap();
        let s = r.build().unwrap();
        assert_eq!(classify_interaction(&s).unwrap(), InteractionClass::CausallyRegular);
        let r: SurfaceRecipe = serde_json::from_value(serde_json::json!({"kind": "regular"})).unwrap();
        assert!(r.build().is_ok());
    }
}
