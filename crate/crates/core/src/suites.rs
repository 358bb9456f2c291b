//! Seeded verification suites.
//!
//! Each suite runs a batch of randomized or enumerated checks against
//! an independent oracle and reports one pass/fail line per property.
//! The command line `check` subcommand and the acceptance tests both
//! run these.

use crate::error::{Error, Result};
use crate::form::{FormVector, HsRegion};
use crate::isometry::{
    classify_isometry, fixed_points_hs2, random_psl, IsomClass, ProjMatrix, TAU,
};
use crate::link::{classify_singularity, model_link, SingularityType, TimeSide};
use crate::polyhedron::{
    classify_polyhedron, face_causal_type, induced_structure, random_bihyperbolic_tetrahedron,
    PolyhedronType, VertexLink,
};
use crate::retmap::{
    detect_ccc, negative_parabolic_threshold, parabolic_surgery, FirstReturnSystem,
};
use crate::spacetime::{
    btz_quotient, construct_model_singularity, geodesic_points, peripheral_holonomy,
    sectional_curvatures, singular_chart_speed_bound, spacelike_distance, surgery_collision,
    time_function_check, warped_metric_fn, SpacetimeRecipe, SurgerySite,
};
use crate::surface::{classify_interaction, Hs2Triangle, HsSurface, InteractionClass};
use crate::form::inner;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// One verified property of a suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyResult {
    pub property: String,
    pub pass: bool,
    pub cases: usize,
    pub detail: String,
}

/// A full suite run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub pass: bool,
    pub properties: Vec<PropertyResult>,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64) -> Self {
        SuiteReport { suite: suite.into(), seed, pass: true, properties: vec![] }
    }

    fn push(&mut self, property: &str, pass: bool, cases: usize, detail: String) {
        self.pass &= pass;
        self.properties.push(PropertyResult {
            property: property.into(),
            pass,
            cases,
            detail,
        });
    }
}

pub const SUITE_NAMES: &[&str] = &[
    "isometry-oracle",
    "links-roundtrip",
    "ccc-sweep",
    "warped-product",
    "btz-duality",
    "interaction-classifier",
    "polyhedra-bihyperbolic",
    "surgery-roundtrip",
    "causal-speed",
];

/// Runs a named suite with the given seed.
pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    match name {
        "isometry-oracle" => Ok(isometry_oracle(seed)),
        "links-roundtrip" => Ok(links_roundtrip(seed)),
        "ccc-sweep" => ccc_sweep(seed),
        "warped-product" => warped_product(seed),
        "btz-duality" => btz_duality(seed),
        "interaction-classifier" => interaction_classifier(seed),
        "polyhedra-bihyperbolic" => polyhedra_bihyperbolic(seed),
        "surgery-roundtrip" => surgery_roundtrip(seed),
        "causal-speed" => causal_speed(seed),
        other => Err(Error::input(format!("unknown suite {other:?}"))),
    }
}

/// Trace classification against the fixed-ray pattern of the adjoint
/// action: elliptic keeps a timelike ray, hyperbolic keeps spacelike
/// rays, parabolic keeps boundary rays only.
pub fn isometry_oracle(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("isometry-oracle", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 10_000;
    let mut mismatches = 0;
    let mut first_bad = String::new();
    for _ in 0..n {
        let g = random_psl(&mut rng);
        if g.is_identity() {
            continue;
        }
        let class = classify_isometry(&g);
        let rays = match fixed_points_hs2(&g) {
            Ok(r) => r,
            Err(e) => {
                mismatches += 1;
                first_bad = format!("fixed rays failed: {e}");
                continue;
            }
        };
        let has = |region: HsRegion| rays.iter().any(|(r, _)| *r == region);
        let pattern_ok = match class {
            IsomClass::Elliptic { .. } => {
                has(HsRegion::HypPlus) && has(HsRegion::HypMinus) && rays.len() == 2
            }
            IsomClass::Hyperbolic { .. } => has(HsRegion::DeSitter) && rays.len() == 6,
            IsomClass::ParabolicPositive | IsomClass::ParabolicNegative => {
                rays.len() == 2
                    && has(HsRegion::BoundaryPlus)
                    && has(HsRegion::BoundaryMinus)
                    && !has(HsRegion::DeSitter)
                    && !has(HsRegion::HypPlus)
            }
            IsomClass::Identity => true,
        };
        if !pattern_ok {
            mismatches += 1;
            if first_bad.is_empty() {
                first_bad = format!("{:?} vs rays {:?}", class, rays);
            }
        }
    }
    report.push(
        "trace classification matches adjoint fixed-ray pattern",
        mismatches == 0,
        n,
        if mismatches == 0 {
            "zero mismatches".into()
        } else {
            format!("{mismatches} mismatches; first: {first_bad}")
        },
    );
    report
}

fn all_types(rng: &mut ChaCha8Rng) -> Vec<SingularityType> {
    let angle = rng.gen_range(0.05..2.0 * TAU);
    let mut types = vec![
        SingularityType::MassiveParticle { angle },
        SingularityType::Misner,
    ];
    for sign in [1i8, -1] {
        types.push(SingularityType::Tachyon { sign });
        for side in [TimeSide::Future, TimeSide::Past] {
            types.push(SingularityType::Photon { sign, side });
        }
        for lightlike in [false, true] {
            types.push(SingularityType::HighDegree { degree: 4, lightlike, sign });
            types.push(SingularityType::HighDegree { degree: 6, lightlike, sign });
        }
    }
    for side in [TimeSide::Future, TimeSide::Past] {
        types.push(SingularityType::Btz { side });
        types.push(SingularityType::ExtremeBtz { side });
        types.push(SingularityType::Cuspidal { side });
    }
    types
}

/// Model construction followed by link classification reproduces every
/// variant of the singular-line taxonomy.
pub fn links_roundtrip(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("links-roundtrip", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = 0;
    let mut failures = 0;
    let mut first_bad = String::new();
    for _ in 0..20 {
        let length = rng.gen_range(0.05..3.0);
        for t in all_types(&mut rng) {
            cases += 1;
            let ok = match construct_model_singularity(&t, length) {
                Ok((_, link)) => match classify_singularity(&link) {
                    Ok(back) => match (t, back) {
                        (
                            SingularityType::MassiveParticle { angle: a },
                            SingularityType::MassiveParticle { angle: b },
                        ) => (a - b).abs() < 1e-6,
                        (x, y) => x == y,
                    },
                    Err(_) => false,
                },
                Err(_) => false,
            };
            if !ok {
                failures += 1;
                if first_bad.is_empty() {
                    first_bad = format!("{t:?}");
                }
            }
        }
    }
    report.push(
        "taxonomy round trip over all variants",
        failures == 0,
        cases,
        if failures == 0 {
            "all variants reproduced".into()
        } else {
            format!("{failures} failures; first: {first_bad}")
        },
    );
    report
}

/// Closed-leaf detection: the bare annulus has two closed leaves, a
/// positive parabolic surgery keeps them, and a negative parabolic
/// surgery of large enough parameter removes them.
pub fn ccc_sweep(_seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("ccc-sweep", 0);
    let base = ProjMatrix::new([[1.0f64.exp(), 0.0], [0.0, (-1.0f64).exp()]])?;
    let anchor = 1.5 * PI;

    let bare = detect_ccc(&FirstReturnSystem::new(base, vec![])?)?;
    report.push(
        "bare annulus has exactly two closed leaves",
        bare.has_ccc && bare.closed_leaves.len() == 2,
        1,
        format!("leaves at {:?}", bare.closed_leaves),
    );

    let pos = detect_ccc(&FirstReturnSystem::new(
        base,
        vec![parabolic_surgery(anchor, 1.0)],
    )?)?;
    report.push(
        "positive parabolic surgery keeps closed leaves",
        pos.has_ccc,
        1,
        format!("{} leaves", pos.closed_leaves.len()),
    );

    let threshold = negative_parabolic_threshold(&base, anchor, 1e6)?;
    let below = detect_ccc(&FirstReturnSystem::new(
        base,
        vec![parabolic_surgery(anchor, -0.5 * threshold)],
    )?)?;
    let above = detect_ccc(&FirstReturnSystem::new(
        base,
        vec![parabolic_surgery(anchor, -1.5 * threshold)],
    )?)?;
    report.push(
        "negative parabolic sweep finds a finite causal threshold",
        threshold.is_finite() && below.has_ccc && !above.has_ccc,
        3,
        format!("threshold parameter {threshold:.6}"),
    );
    Ok(report)
}

/// Finite-difference curvature of the warped metric and the peripheral
/// holonomy around the cone point.
pub fn warped_product(seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("warped-product", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 100;
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let x = [
            rng.gen_range(-1.2..1.2),
            rng.gen_range(0.3..2.0),
            rng.gen_range(0.0..2.0),
        ];
        let k = sectional_curvatures(&warped_metric_fn, x)?;
        for kk in k {
            worst = worst.max((kk + 1.0).abs());
        }
    }
    report.push(
        "sectional curvature is -1 at random regular points",
        worst < 1e-4,
        n,
        format!("max deviation {worst:.2e}"),
    );

    let mut worst_angle: f64 = 0.0;
    for theta in [PI / 2.0, PI, 1.5 * PI] {
        match peripheral_holonomy(theta)? {
            IsomClass::Elliptic { angle } => {
                worst_angle = worst_angle.max((angle - theta).abs());
            }
            other => {
                report.push(
                    "peripheral loop holonomy is elliptic of the cone angle",
                    false,
                    3,
                    format!("non-elliptic holonomy {other:?}"),
                );
                return Ok(report);
            }
        }
    }
    report.push(
        "peripheral loop holonomy is elliptic of the cone angle",
        worst_angle < 1e-6,
        3,
        format!("max angle deviation {worst_angle:.2e}"),
    );
    Ok(report)
}

/// Duality of the invariant geodesics of cyclic quotients.
pub fn btz_duality(seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("btz-duality", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 100;
    let mut max_inner: f64 = 0.0;
    let mut max_fix: f64 = 0.0;
    let mut max_translate: f64 = 0.0;
    for _ in 0..n {
        let length = rng.gen_range(0.4..3.0);
        let conj1 = random_psl(&mut rng);
        let conj2 = random_psl(&mut rng);
        let g1 = conj1.mul(&ProjMatrix::boost(length)).mul(&conj1.inverse());
        let g2 = conj2.mul(&ProjMatrix::boost(length)).mul(&conj2.inverse());
        let data = btz_quotient(&g1, &g2)?;
        let iso = data.isometry();
        let params = [-1.1, -0.4, 0.0, 0.5, 1.2];
        let p1 = geodesic_points(&data.l1, &params)?;
        let p2 = geodesic_points(&data.l2, &params)?;
        for x in &p1 {
            let y = iso.apply_q22(x)?;
            max_fix = max_fix.max(crate::spacetime::projective_defect(x, &y));
        }
        for x in &p2 {
            let y = iso.apply_q22(x)?;
            max_translate = max_translate
                .max((spacelike_distance(x, &y)? - data.translation_length).abs());
        }
        for x in &p1 {
            for y in &p2 {
                max_inner = max_inner.max(inner(x, y)?.abs());
            }
        }
    }
    report.push(
        "inner products between the dual geodesics vanish",
        max_inner < 1e-9,
        n,
        format!("max |<x,y>| = {max_inner:.2e}"),
    );
    report.push(
        "the quotient isometry fixes the adjoined line pointwise",
        max_fix < 1e-9,
        n,
        format!("max displacement {max_fix:.2e}"),
    );
    report.push(
        "the dual line is translated by the common length",
        max_translate < 1e-9,
        n,
        format!("max length deviation {max_translate:.2e}"),
    );
    Ok(report)
}

/// The four doubled-triangle and quotient-sphere interaction families.
pub fn interaction_classifier(_seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("interaction-classifier", 0);

    let mixed = HsSurface::double_triangle(&Hs2Triangle::new([
        FormVector::q12([1.0, 0.0, 0.0]),
        FormVector::q12([-1.3, 0.5, 0.0]),
        FormVector::q12([-1.3, -0.2, 0.45]),
    ])?)?;
    report.push(
        "one future and two past particles: causally regular",
        classify_interaction(&mixed)? == InteractionClass::CausallyRegular,
        1,
        format!("{:?}", classify_interaction(&mixed)?),
    );

    let alpha: f64 = PI / 6.0;
    let d = (alpha.cos() / (1.0 - alpha.cos())).acosh();
    let up = Hs2Triangle::new([
        FormVector::q12([1.0, 0.0, 0.0]),
        FormVector::q12([d.cosh(), d.sinh(), 0.0]),
        FormVector::q12([d.cosh(), d.sinh() * alpha.cos(), d.sinh() * alpha.sin()]),
    ])?;
    let bang = HsSurface::double_triangle(&up)?;
    report.push(
        "future hyperbolic sphere: big bang",
        classify_interaction(&bang)? == InteractionClass::BigBang,
        1,
        format!("{:?}", classify_interaction(&bang)?),
    );

    let down = Hs2Triangle::new([
        up.vertices[0].neg(),
        up.vertices[1].neg(),
        up.vertices[2].neg(),
    ])?;
    let crunch = HsSurface::double_triangle(&down)?;
    report.push(
        "past hyperbolic sphere: big crunch",
        classify_interaction(&crunch)? == InteractionClass::BigCrunch,
        1,
        format!("{:?}", classify_interaction(&crunch)?),
    );

    let bw = HsSurface::black_white_sphere(2.0, 1.4, 0.8)?;
    report.push(
        "BTZ pair sphere: black and white hole interaction",
        classify_interaction(&bw)? == InteractionClass::BlackWhiteInteraction,
        1,
        format!("{:?}", classify_interaction(&bw)?),
    );
    Ok(report)
}

/// Randomized convex bi-hyperbolic polyhedra: timelike faces, cone
/// angles below 2pi, positivity and positive mass.
pub fn polyhedra_bihyperbolic(seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("polyhedra-bihyperbolic", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 1000;
    let mut all_faces_timelike = true;
    let mut all_angles_bounded = true;
    let mut all_positive = true;
    let mut all_positive_mass = true;
    let mut detail = String::new();
    for k in 0..n {
        let p = random_bihyperbolic_tetrahedron(&mut rng);
        if classify_polyhedron(&p)? != PolyhedronType::BiHyperbolic {
            all_faces_timelike = false;
            detail = format!("case {k}: generator produced a non-bi-hyperbolic sample");
            break;
        }
        for f in 0..p.faces.len() {
            if face_causal_type(&p, f)? != crate::form::CausalClass::Timelike {
                all_faces_timelike = false;
                detail = format!("case {k}: face {f} not timelike");
            }
        }
        let rep = induced_structure(&p)?;
        if !rep.is_hs_structure {
            all_faces_timelike = false;
            detail = format!("case {k}: induced structure rejected");
        }
        for (vi, link) in &rep.vertex_links {
            if let VertexLink::ConeAngle { angle } = link {
                if !(*angle > 0.0 && *angle < TAU) {
                    all_angles_bounded = false;
                    detail = format!("case {k}: vertex {vi} cone angle {angle}");
                }
            }
        }
        if rep.positivity != Some(true) {
            all_positive = false;
            detail = format!("case {k}: positivity {:?}", rep.positivity);
        }
        if rep.positive_mass != Some(true) {
            all_positive_mass = false;
            detail = format!("case {k}: positive mass {:?}", rep.positive_mass);
        }
    }
    let ok_detail = |b: bool| if b { "all cases pass".to_string() } else { detail.clone() };
    report.push("faces are timelike", all_faces_timelike, n, ok_detail(all_faces_timelike));
    report.push(
        "hyperbolic cone angles are below 2pi",
        all_angles_bounded,
        n,
        ok_detail(all_angles_bounded),
    );
    report.push("induced structures are positive", all_positive, n, ok_detail(all_positive));
    report.push(
        "positive mass holds",
        all_positive_mass,
        n,
        ok_detail(all_positive_mass),
    );
    Ok(report)
}

/// Collision surgery round trip and rejection of mismatched angles.
pub fn surgery_roundtrip(_seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("surgery-roundtrip", 0);
    let patch = HsSurface::double_triangle(&Hs2Triangle::new([
        FormVector::q12([1.0, 0.0, 0.0]),
        FormVector::q12([-1.3, 0.5, 0.0]),
        FormVector::q12([-1.3, -0.2, 0.45]),
    ])?)?;
    let theta = crate::spacetime::future_circle_angle(&patch)?;
    let base = SpacetimeRecipe::warped(vec![theta]);
    let site = SurgerySite {
        line: 0,
        center_t: 0.0,
        radius: 0.1,
        collar: 0.15,
        spacelike_slice_asserted: false,
    };
    let (recipe, graph) = surgery_collision(&base, site.clone(), &patch)?;
    report.push(
        "collision surgery yields one interaction and three lines",
        graph.interactions.len() == 1 && graph.lines.len() == 3,
        1,
        format!("{} lines, {} interactions", graph.lines.len(), graph.interactions.len()),
    );
    let (excised, excised_graph) = crate::spacetime::excise_surgery(&recipe)?;
    let base_graph = base.singular_graph()?;
    report.push(
        "excision recovers the base singular graph exactly",
        excised == base && excised_graph.same_as(&base_graph),
        1,
        "graphs compared structurally".into(),
    );
    let bad = SpacetimeRecipe::warped(vec![theta + 0.25]);
    let rejected = surgery_collision(&bad, site, &patch).is_err();
    report.push(
        "mismatched cone angles are rejected",
        rejected,
        1,
        "angle mismatch produced an error".into(),
    );
    Ok(report)
}

/// Null-curve saturation of the causal speed bound and time functions
/// along validated causal curves.
pub fn causal_speed(seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("causal-speed", seed);
    let mut worst: f64 = 0.0;
    for m in [0.25, 0.5, 0.75] {
        // integrate the null curve zeta' = zeta^m / (1 - m)
        let mut z = 0.4f64;
        let dt = 1e-5;
        let mut samples = vec![(0.0, [z, 0.0])];
        for i in 1..2000 {
            let f = |w: f64| w.powf(m) / (1.0 - m);
            let k1 = f(z);
            let k2 = f(z + dt / 2.0 * k1);
            let k3 = f(z + dt / 2.0 * k2);
            let k4 = f(z + dt * k3);
            z += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            samples.push((i as f64 * dt, [z, 0.0]));
        }
        let rep = singular_chart_speed_bound(m, &samples)?;
        if !rep.causal || !rep.marginal {
            report.push(
                "null curves saturate the speed bound",
                false,
                3,
                format!("m = {m}: causal {} marginal {}", rep.causal, rep.marginal),
            );
            return Ok(report);
        }
        worst = worst.max(rep.max_excess.abs());
    }
    report.push(
        "null curves saturate the speed bound",
        worst < 1e-6,
        3,
        format!("max saturation defect {worst:.2e}"),
    );

    let recipe = SpacetimeRecipe::warped(vec![PI]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut curves = vec![];
    for _ in 0..1000 {
        let mut t = rng.gen_range(-0.9..-0.2);
        let mut rad = rng.gen_range(0.3..1.2);
        let mut phi = rng.gen_range(0.0..PI);
        let mut curve = vec![[t, rad, phi]];
        for _ in 0..30 {
            let dt = 0.02;
            let speed = rng.gen_range(0.0..0.9);
            let dir = rng.gen_range(0.0..TAU);
            let ct = t.cos();
            rad = (rad + dt * speed * dir.cos() / ct).max(0.05);
            phi += dt * speed * dir.sin() / (ct * rad.sinh().max(0.05));
            t += dt;
            curve.push([t, rad, phi]);
        }
        curves.push(curve);
    }
    let ok = time_function_check(&recipe, &curves)?;
    report.push(
        "the time coordinate increases along validated causal curves",
        ok,
        curves.len(),
        "all curves validated".into(),
    );
    Ok(report)
}
