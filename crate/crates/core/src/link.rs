//! Projective circles, link circles of singular points, and the
//! taxonomy of singular lines.
//!
//! A projective circle is a circle with a (PSL(2,R), RP1)-structure:
//! elliptic circles are parametrized by a positive angle; parabolic and
//! hyperbolic circles by a non-negative degree together with a
//! conjugacy class, and for degree zero by the choice of a
//! complementary interval of the fixed points.
//!
//! A link circle adds the class of the base point in the ray space and
//! the markers locating the arcs that develop onto future and past
//! timelike directions.  Classifying a link circle yields the type of
//! the singular line it describes: massive particle, tachyon, photon,
//! BTZ-like (extreme or not), cuspidal, Misner, or high degree.

use crate::error::{Error, Result};
use crate::form::HsRegion;
use crate::isometry::{classify_isometry, IsomClass, ProjMatrix, TAU};
use crate::lift::{eval_canonical, LiftedIsometry};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Future or past, for the types that come in both flavors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Hash)]
pub enum TimeSide {
    Future,
    Past,
}

impl TimeSide {
    pub fn flip(self) -> TimeSide {
        match self {
            TimeSide::Future => TimeSide::Past,
            TimeSide::Past => TimeSide::Future,
        }
    }
}

/// Which complementary interval of the fixed points a degree-zero
/// circle quotients: the future timelike arc, the past timelike arc,
/// or a spacelike component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntervalKind {
    FutureArc,
    PastArc,
    SpacelikeArc,
}

/// A circle with a real projective structure, described by its lifted
/// holonomy and, in degree zero, the quotiented interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rp1Circle {
    pub holonomy: LiftedIsometry,
    pub interval: Option<IntervalKind>,
}

/// Isomorphism invariants of a projective circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Rp1CircleClass {
    Elliptic { angle: f64 },
    Parabolic { degree: u32, positive: bool },
    Hyperbolic { degree: u32, translation_length: f64 },
}

impl Rp1Circle {
    pub fn new(holonomy: LiftedIsometry, interval: Option<IntervalKind>) -> Self {
        Rp1Circle { holonomy, interval }
    }

    fn base_class(&self) -> IsomClass {
        classify_isometry(&self.holonomy.base)
    }
}

/// Invariants of a projective circle, with the degree-zero
/// normalization checks.
pub fn classify_rp1_circle(c: &Rp1Circle) -> Result<Rp1CircleClass> {
    if c.holonomy.degree < 0 {
        return Err(Error::math("circle holonomy must have non-negative degree"));
    }
    let class = c.base_class();
    let degree = c.holonomy.degree as u32;
    match class {
        IsomClass::Identity | IsomClass::Elliptic { .. } => {
            if c.interval.is_some() {
                return Err(Error::math("elliptic circles take no interval choice"));
            }
            let angle = c.holonomy.translation_number();
            if angle <= 0.0 {
                return Err(Error::math("elliptic circle needs positive angle"));
            }
            Ok(Rp1CircleClass::Elliptic { angle })
        }
        IsomClass::ParabolicPositive | IsomClass::ParabolicNegative => {
            if degree == 0 {
                if c.interval.is_none() {
                    return Err(Error::math("degree-zero circle needs an interval choice"));
                }
                // a degree-zero parabolic circle is the quotient of the
                // full interval between consecutive lifted fixed points,
                // on which the generator must displace forward
                if class == IsomClass::ParabolicNegative {
                    return Err(Error::math(
                        "degree-zero parabolic circle requires the positive generator",
                    ));
                }
                Ok(Rp1CircleClass::Parabolic { degree: 0, positive: true })
            } else {
                if c.interval.is_some() {
                    return Err(Error::math("interval choice only applies in degree zero"));
                }
                Ok(Rp1CircleClass::Parabolic {
                    degree,
                    positive: class == IsomClass::ParabolicPositive,
                })
            }
        }
        IsomClass::Hyperbolic { translation_length } => {
            if degree == 0 {
                if c.interval.is_none() {
                    return Err(Error::math("degree-zero circle needs an interval choice"));
                }
            } else if c.interval.is_some() {
                return Err(Error::math("interval choice only applies in degree zero"));
            }
            Ok(Rp1CircleClass::Hyperbolic { degree, translation_length })
        }
    }
}

/// Link circle of a singular point: the class of the base point, the
/// underlying projective circle, and the timelike-arc markers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkCircle {
    pub base_class: HsRegion,
    pub rp1: Rp1Circle,
    /// Lifted angle lying inside an arc that develops onto future
    /// timelike directions.  Present for spacelike bases of degree >= 2,
    /// where it selects which complementary arc of the fixed points is
    /// the future one.
    pub future_witness: Option<f64>,
    /// Claimed positivity for degree >= 2 non-timelike links.
    pub sign: Option<i8>,
}

/// The taxonomy of singular lines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SingularityType {
    MassiveParticle { angle: f64 },
    Photon { sign: i8, side: TimeSide },
    Tachyon { sign: i8 },
    Btz { side: TimeSide },
    ExtremeBtz { side: TimeSide },
    Cuspidal { side: TimeSide },
    Misner,
    HighDegree { degree: u32, lightlike: bool, sign: i8 },
}

/// Reasons a singular line can break causality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationTag {
    DegreeAtLeastFour,
    MisnerCtc,
}

/// Verdict of a causality check, with the violations found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CausalVerdict {
    pub causal: bool,
    pub reasons: Vec<ViolationTag>,
}

impl CausalVerdict {
    pub fn ok() -> Self {
        CausalVerdict { causal: true, reasons: vec![] }
    }
    pub fn violated(reasons: Vec<ViolationTag>) -> Self {
        CausalVerdict { causal: false, reasons }
    }
    pub fn merge(mut self, other: CausalVerdict) -> CausalVerdict {
        for r in other.reasons {
            if !self.reasons.contains(&r) {
                self.reasons.push(r);
            }
        }
        self.causal = self.reasons.is_empty() && self.causal && other.causal;
        self
    }
}

impl LinkCircle {
    pub fn new(
        base_class: HsRegion,
        rp1: Rp1Circle,
        future_witness: Option<f64>,
        sign: Option<i8>,
    ) -> Result<Self> {
        let link = LinkCircle { base_class, rp1, future_witness, sign };
        link.validate()?;
        Ok(link)
    }

    pub fn degree(&self) -> i64 {
        self.rp1.holonomy.degree
    }

    fn holonomy_class(&self) -> IsomClass {
        classify_isometry(&self.rp1.holonomy.base)
    }

    /// Structural invariants tying the base class to the holonomy.
    pub fn validate(&self) -> Result<()> {
        let class = self.holonomy_class();
        let k = self.degree();
        if k < 0 {
            return Err(Error::math("link circles carry non-negative degree"));
        }
        match self.base_class {
            HsRegion::HypPlus | HsRegion::HypMinus => {
                let elliptic_like =
                    matches!(class, IsomClass::Elliptic { .. } | IsomClass::Identity);
                if !elliptic_like {
                    return Err(Error::math(
                        "timelike base requires elliptic holonomy",
                    ));
                }
                if self.rp1.holonomy.translation_number() <= 0.0 {
                    return Err(Error::math("timelike link needs positive cone angle"));
                }
                if self.rp1.interval.is_some() || self.future_witness.is_some() || self.sign.is_some() {
                    return Err(Error::math(
                        "timelike links carry no timelike-arc markers",
                    ));
                }
            }
            HsRegion::DeSitter => {
                if !class.is_hyperbolic() {
                    return Err(Error::math("spacelike base requires hyperbolic holonomy"));
                }
                self.validate_nontimelike(k)?;
            }
            HsRegion::BoundaryPlus | HsRegion::BoundaryMinus => {
                if !class.is_parabolic() {
                    return Err(Error::math("lightlike base requires parabolic holonomy"));
                }
                self.validate_nontimelike(k)?;
                if k == 0 && self.rp1.interval == Some(IntervalKind::SpacelikeArc) {
                    return Err(Error::math(
                        "lightlike links have no spacelike complementary arc",
                    ));
                }
            }
        }
        Ok(())
    }

    fn validate_nontimelike(&self, k: i64) -> Result<()> {
        if k == 0 {
            if self.rp1.interval.is_none() {
                return Err(Error::math("degree-zero link needs an interval choice"));
            }
            if self.sign.is_some() {
                return Err(Error::math("degree-zero links carry no positivity sign"));
            }
        } else {
            if k % 2 != 0 {
                return Err(Error::math(format!(
                    "non-timelike links have even degree, got {k}"
                )));
            }
            if self.rp1.interval.is_some() {
                return Err(Error::math("interval choice only applies in degree zero"));
            }
            if self.sign.is_none() && self.future_witness.is_none() {
                return Err(Error::math(
                    "degree >= 2 links need a positivity sign or a future-arc witness",
                ));
            }
        }
        Ok(())
    }

    /// Witness angle inside a future arc, deriving it from the sign
    /// when only the sign is stored.
    fn effective_witness(&self) -> Result<f64> {
        if let Some(w) = self.future_witness {
            return Ok(w);
        }
        let sign = self
            .sign
            .ok_or_else(|| Error::math("no arc marker data on this link"))?;
        // the future arc is the one whose displacement sign matches
        let angles = self.rp1.holonomy.fixed_angles_base();
        if angles.len() < 2 {
            return Err(Error::math("hyperbolic holonomy expected"));
        }
        let mids = [
            (angles[0] + angles[1]) / 2.0,
            (angles[1] + (angles[0] + TAU)) / 2.0,
        ];
        for m in mids {
            let disp = eval_canonical(&self.rp1.holonomy.base, m) - m;
            if (disp > 0.0) == (sign > 0) {
                return Ok(m);
            }
        }
        Err(Error::math("could not locate a future arc for the stored sign"))
    }

    /// Transport the link data by a conjugation of the holonomy.
    pub fn conjugate(&self, h: &ProjMatrix) -> LinkCircle {
        let lh = LiftedIsometry::canonical(*h);
        LinkCircle {
            base_class: self.base_class,
            rp1: Rp1Circle {
                holonomy: self.rp1.holonomy.conjugate_by(h),
                interval: self.rp1.interval,
            },
            future_witness: self.future_witness.map(|w| lh.eval(w)),
            sign: self.sign,
        }
    }
}

trait FixedAnglesBase {
    fn fixed_angles_base(&self) -> Vec<f64>;
}

impl FixedAnglesBase for LiftedIsometry {
    /// Fixed angles of the canonical part regardless of degree.
    fn fixed_angles_base(&self) -> Vec<f64> {
        LiftedIsometry::canonical(self.base).fixed_angles()
    }
}

/// Positivity of a degree >= 2 space- or lightlike link: +1 when the
/// left extremity of each future arc is a repelling fixed point of the
/// holonomy, equivalently when the holonomy displaces the future arcs
/// forward.  Checked against the stored sign when both are present.
pub fn positivity_from_holonomy(l: &LinkCircle) -> Result<i8> {
    l.validate()?;
    if l.base_class.is_timelike() {
        return Err(Error::math("positivity does not apply to timelike links"));
    }
    if l.degree() < 2 {
        return Err(Error::math("positivity needs degree >= 2"));
    }
    let computed = match classify_isometry(&l.rp1.holonomy.base) {
        IsomClass::ParabolicPositive => 1,
        IsomClass::ParabolicNegative => -1,
        IsomClass::Hyperbolic { .. } => {
            let w = l.effective_witness()?;
            let angles = l.rp1.holonomy.fixed_angles_base();
            // locate the arc containing the witness and sample its middle
            let x0 = angles[0];
            let x1 = angles[1];
            let t = (w - x0).rem_euclid(TAU);
            let mid = if t < (x1 - x0) {
                (x0 + x1) / 2.0
            } else {
                (x1 + x0 + TAU) / 2.0
            };
            let disp = eval_canonical(&l.rp1.holonomy.base, mid) - mid;
            if disp > 0.0 {
                1
            } else {
                -1
            }
        }
        _ => return Err(Error::math("unsupported holonomy for positivity")),
    };
    if let Some(s) = l.sign {
        if s != computed {
            return Err(Error::math(format!(
                "stored positivity sign {s} inconsistent with holonomy ({computed})"
            )));
        }
    }
    Ok(computed)
}

/// The complete classification of singular lines from link data.
pub fn classify_singularity(l: &LinkCircle) -> Result<SingularityType> {
    l.validate()?;
    let k = l.degree();
    match l.base_class {
        HsRegion::HypPlus | HsRegion::HypMinus => Ok(SingularityType::MassiveParticle {
            angle: l.rp1.holonomy.translation_number(),
        }),
        HsRegion::DeSitter => match k {
            0 => Ok(match l.rp1.interval.expect("validated") {
                IntervalKind::FutureArc => SingularityType::Btz { side: TimeSide::Past },
                IntervalKind::PastArc => SingularityType::Btz { side: TimeSide::Future },
                IntervalKind::SpacelikeArc => SingularityType::Misner,
            }),
            2 => Ok(SingularityType::Tachyon { sign: positivity_from_holonomy(l)? }),
            _ => Ok(SingularityType::HighDegree {
                degree: k as u32,
                lightlike: false,
                sign: positivity_from_holonomy(l)?,
            }),
        },
        HsRegion::BoundaryPlus | HsRegion::BoundaryMinus => {
            let future_base = l.base_class == HsRegion::BoundaryPlus;
            match k {
                0 => Ok(match (future_base, l.rp1.interval.expect("validated")) {
                    (true, IntervalKind::FutureArc) => {
                        SingularityType::Cuspidal { side: TimeSide::Future }
                    }
                    (true, IntervalKind::PastArc) => {
                        SingularityType::ExtremeBtz { side: TimeSide::Future }
                    }
                    (false, IntervalKind::FutureArc) => {
                        SingularityType::ExtremeBtz { side: TimeSide::Past }
                    }
                    (false, IntervalKind::PastArc) => {
                        SingularityType::Cuspidal { side: TimeSide::Past }
                    }
                    (_, IntervalKind::SpacelikeArc) => unreachable!("validated"),
                }),
                2 => Ok(SingularityType::Photon {
                    sign: positivity_from_holonomy(l)?,
                    side: if future_base { TimeSide::Future } else { TimeSide::Past },
                }),
                _ => Ok(SingularityType::HighDegree {
                    degree: k as u32,
                    lightlike: true,
                    sign: positivity_from_holonomy(l)?,
                }),
            }
        }
    }
}

/// Whether the positive/negative dichotomy applies to this type at all.
pub fn positivity_applicable(t: &SingularityType) -> bool {
    !matches!(
        t,
        SingularityType::Btz { .. }
            | SingularityType::ExtremeBtz { .. }
            | SingularityType::Cuspidal { .. }
            | SingularityType::Misner
    )
}

/// Positivity predicate: cone angle below 2pi for massive particles,
/// positive sign for the degree >= 2 types.  Types without a
/// positive/negative dichotomy count as positive.
pub fn is_positive(t: &SingularityType) -> bool {
    match t {
        SingularityType::MassiveParticle { angle } => *angle < TAU,
        SingularityType::Tachyon { sign } => *sign > 0,
        SingularityType::Photon { sign, .. } => *sign > 0,
        SingularityType::HighDegree { sign, .. } => *sign > 0,
        SingularityType::Btz { .. }
        | SingularityType::ExtremeBtz { .. }
        | SingularityType::Cuspidal { .. }
        | SingularityType::Misner => true,
    }
}

/// A singular line is causal when its suspension contains no closed
/// causal curve and no disconnected future: everything except Misner
/// lines and degree >= 4 lines.
pub fn is_causal_line(t: &SingularityType) -> CausalVerdict {
    match t {
        SingularityType::Misner => CausalVerdict::violated(vec![ViolationTag::MisnerCtc]),
        SingularityType::HighDegree { degree, .. } if *degree >= 4 => {
            CausalVerdict::violated(vec![ViolationTag::DegreeAtLeastFour])
        }
        _ => CausalVerdict::ok(),
    }
}

/// Type of the opposite singular point of the suspension of a link
/// circle.  Spacelike types are unchanged; lightlike types swap their
/// time side; cuspidal and extreme BTZ-like points exchange.
pub fn antipodal_type(t: &SingularityType) -> SingularityType {
    match *t {
        SingularityType::Photon { sign, side } => {
            SingularityType::Photon { sign, side: side.flip() }
        }
        SingularityType::Cuspidal { side } => {
            SingularityType::ExtremeBtz { side: side.flip() }
        }
        SingularityType::ExtremeBtz { side } => {
            SingularityType::Cuspidal { side: side.flip() }
        }
        other => other,
    }
}

/// Connected components of the local future and past of a point on a
/// singular line of this type.
pub fn local_future_components(t: &SingularityType) -> (u32, u32) {
    match *t {
        SingularityType::MassiveParticle { .. }
        | SingularityType::Tachyon { .. }
        | SingularityType::Photon { .. } => (1, 1),
        SingularityType::Btz { side } | SingularityType::ExtremeBtz { side } => match side {
            TimeSide::Future => (0, 1),
            TimeSide::Past => (1, 0),
        },
        SingularityType::Cuspidal { side } => match side {
            TimeSide::Future => (1, 0),
            TimeSide::Past => (0, 1),
        },
        SingularityType::Misner => (0, 0),
        SingularityType::HighDegree { degree, .. } => (degree / 2, degree / 2),
    }
}

/// Mass of a massive particle: `1 - angle / 2pi`.
pub fn particle_mass(t: &SingularityType) -> Option<f64> {
    match t {
        SingularityType::MassiveParticle { angle } => Some(1.0 - angle / TAU),
        _ => None,
    }
}

/// Model link circle of a given singularity type.  `length` is the
/// hyperbolic translation length (or parabolic parameter magnitude)
/// where the type has one; ignored for massive particles, which take
/// their angle from the type.
pub fn model_link(t: &SingularityType, length: f64) -> Result<LinkCircle> {
    if length <= 0.0 {
        return Err(Error::math("model links need a positive length parameter"));
    }
    let lifted_elliptic = |angle: f64| -> Result<LiftedIsometry> {
        if angle <= 0.0 {
            return Err(Error::math("cone angle must be positive"));
        }
        let k = (angle / TAU).floor();
        let rem = angle - TAU * k;
        Ok(if rem == 0.0 {
            LiftedIsometry::new(k as i64, ProjMatrix::identity())
        } else {
            LiftedIsometry::new(k as i64, ProjMatrix::rotation(rem))
        })
    };
    // for the model boost, the arc (pi, 2pi) has repelling left
    // extremity: a witness there marks a positive link
    let boost_witness = |sign: i8| if sign > 0 { 1.5 * PI } else { 0.5 * PI };
    match *t {
        SingularityType::MassiveParticle { angle } => LinkCircle::new(
            HsRegion::HypPlus,
            Rp1Circle::new(lifted_elliptic(angle)?, None),
            None,
            None,
        ),
        SingularityType::Tachyon { sign } => LinkCircle::new(
            HsRegion::DeSitter,
            Rp1Circle::new(LiftedIsometry::new(2, ProjMatrix::boost(length)), None),
            Some(boost_witness(sign)),
            Some(sign),
        ),
        SingularityType::Photon { sign, side } => LinkCircle::new(
            if side == TimeSide::Future { HsRegion::BoundaryPlus } else { HsRegion::BoundaryMinus },
            Rp1Circle::new(
                LiftedIsometry::new(2, ProjMatrix::parabolic(sign as f64 * length)),
                None,
            ),
            None,
            Some(sign),
        ),
        SingularityType::Btz { side } => LinkCircle::new(
            HsRegion::DeSitter,
            Rp1Circle::new(
                LiftedIsometry::canonical(ProjMatrix::boost(length)),
                Some(match side {
                    TimeSide::Future => IntervalKind::PastArc,
                    TimeSide::Past => IntervalKind::FutureArc,
                }),
            ),
            None,
            None,
        ),
        SingularityType::ExtremeBtz { side } => LinkCircle::new(
            if side == TimeSide::Future { HsRegion::BoundaryPlus } else { HsRegion::BoundaryMinus },
            Rp1Circle::new(
                LiftedIsometry::canonical(ProjMatrix::parabolic(length)),
                Some(match side {
                    TimeSide::Future => IntervalKind::PastArc,
                    TimeSide::Past => IntervalKind::FutureArc,
                }),
            ),
            None,
            None,
        ),
        SingularityType::Cuspidal { side } => LinkCircle::new(
            if side == TimeSide::Future { HsRegion::BoundaryPlus } else { HsRegion::BoundaryMinus },
            Rp1Circle::new(
                LiftedIsometry::canonical(ProjMatrix::parabolic(length)),
                Some(match side {
                    TimeSide::Future => IntervalKind::FutureArc,
                    TimeSide::Past => IntervalKind::PastArc,
                }),
            ),
            None,
            None,
        ),
        SingularityType::Misner => LinkCircle::new(
            HsRegion::DeSitter,
            Rp1Circle::new(
                LiftedIsometry::canonical(ProjMatrix::boost(length)),
                Some(IntervalKind::SpacelikeArc),
            ),
            None,
            None,
        ),
        SingularityType::HighDegree { degree, lightlike, sign } => {
            if degree < 4 || degree % 2 != 0 {
                return Err(Error::math("high-degree links have even degree >= 4"));
            }
            if lightlike {
                LinkCircle::new(
                    HsRegion::BoundaryPlus,
                    Rp1Circle::new(
                        LiftedIsometry::new(
                            degree as i64,
                            ProjMatrix::parabolic(sign as f64 * length),
                        ),
                        None,
                    ),
                    None,
                    Some(sign),
                )
            } else {
                LinkCircle::new(
                    HsRegion::DeSitter,
                    Rp1Circle::new(
                        LiftedIsometry::new(degree as i64, ProjMatrix::boost(length)),
                        None,
                    ),
                    Some(boost_witness(sign)),
                    Some(sign),
                )
            }
        }
    }
}

// ---------------------------------------------------------------------
// JSON wire format
// ---------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct LinkJson {
    schema: String,
    base_class: String,
    degree: i64,
    holonomy: [f64; 4],
    interval: Option<String>,
    sign: Option<i8>,
}

pub fn region_name(r: HsRegion) -> &'static str {
    match r {
        HsRegion::HypPlus => "hyp+",
        HsRegion::HypMinus => "hyp-",
        HsRegion::DeSitter => "ds",
        HsRegion::BoundaryPlus => "bnd+",
        HsRegion::BoundaryMinus => "bnd-",
    }
}

pub fn region_from_name(s: &str) -> Result<HsRegion> {
    Ok(match s {
        "hyp+" => HsRegion::HypPlus,
        "hyp-" => HsRegion::HypMinus,
        "ds" => HsRegion::DeSitter,
        "bnd+" => HsRegion::BoundaryPlus,
        "bnd-" => HsRegion::BoundaryMinus,
        other => return Err(Error::input(format!("unknown base class {other:?}"))),
    })
}

impl LinkCircle {
    pub fn to_json(&self) -> serde_json::Value {
        let m = self.rp1.holonomy.base.m;
        serde_json::json!({
            "schema": "link/1",
            "base_class": region_name(self.base_class),
            "degree": self.rp1.holonomy.degree,
            "holonomy": [m[0][0], m[0][1], m[1][0], m[1][1]],
            "interval": self.rp1.interval.map(|i| match i {
                IntervalKind::FutureArc => "i+",
                IntervalKind::PastArc => "i-",
                IntervalKind::SpacelikeArc => "spacelike",
            }),
            "sign": self.sign,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<LinkCircle> {
        let parsed: LinkJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::input(format!("bad link schema: {e}")))?;
        if parsed.schema != "link/1" {
            return Err(Error::input(format!("unsupported schema {:?}", parsed.schema)));
        }
        let base = ProjMatrix::new([
            [parsed.holonomy[0], parsed.holonomy[1]],
            [parsed.holonomy[2], parsed.holonomy[3]],
        ])?;
        let interval = match parsed.interval.as_deref() {
            None => None,
            Some("i+") => Some(IntervalKind::FutureArc),
            Some("i-") => Some(IntervalKind::PastArc),
            Some("spacelike") => Some(IntervalKind::SpacelikeArc),
            Some(other) => return Err(Error::input(format!("unknown interval {other:?}"))),
        };
        LinkCircle::new(
            region_from_name(&parsed.base_class)?,
            Rp1Circle::new(LiftedIsometry::new(parsed.degree, base), interval),
            None,
            parsed.sign,
        )
    }
}
