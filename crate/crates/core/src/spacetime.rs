//! Constructive singular AdS spacetimes: suspensions, model wedges,
//! warped products over cone surfaces, cyclic quotients, and the
//! collision surgeries, together with their singular graphs and the
//! chart-level verifications (curvature, peripheral holonomy, causal
//! speed bounds, time functions, quotient duality).
//!
//! Spacetimes are recipes plus chart evaluators, never global meshes:
//! every verification is chart-local or holonomy-level.

use crate::error::{Error, Result};
use crate::form::{inner, FormVector};
use crate::isometry::{
    classify_isometry, fixed_points_rp1, q22_of_matrix, AdsIsometry, FixedPoints, IsomClass,
    ProjMatrix, Rp1Point, TAU,
};
use crate::link::{
    classify_rp1_circle, classify_singularity, model_link, LinkCircle, Rp1Circle,
    Rp1CircleClass, SingularityType, TimeSide,
};
use crate::surface::{classify_interaction, HsSurface, InteractionClass, Region, RegionKind};
use crate::tol::{EPS_CURVE, FD_STEP};
use serde::{Deserialize, Serialize};

/// Which invariant geodesic of a cyclic quotient a line sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxisRole {
    /// Pointwise fixed axis (the adjoined singular line).
    FixedAxis,
    /// Axis translated by the common length.
    TranslatedAxis,
}

/// Where a singular line lives inside its recipe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Locus {
    /// Ray of a suspension vertex toward singularity `index` of the link.
    ConeRay { index: usize },
    /// Vertical line over cone point `index` of a warped product.
    VerticalLine { index: usize },
    /// Axis of a model wedge.
    WedgeAxis,
    /// Companion line created by the same wedge model.
    WedgeCompanion,
    /// Invariant geodesic of a cyclic quotient.
    QuotientAxis { role: AxisRole },
    /// Future part of a base line split by a surgery.
    SegmentAbove { base_line: usize },
    /// Line contributed by a surgery patch (index into the patch's
    /// singularities).
    PatchLine { index: usize },
}

/// A singular line with its type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularLine {
    pub kind: SingularityType,
    pub locus: Locus,
}

/// An interaction point together with its link surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interaction {
    pub link: HsSurface,
}

/// The singular locus of a recipe: lines and interaction points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct SingularGraph {
    pub lines: Vec<SingularLine>,
    pub interactions: Vec<Interaction>,
}

impl SingularGraph {
    /// Structural equality up to line order.
    pub fn same_as(&self, other: &SingularGraph) -> bool {
        if self.lines.len() != other.lines.len()
            || self.interactions.len() != other.interactions.len()
        {
            return false;
        }
        let key = |l: &SingularLine| format!("{:?}", l);
        let mut a: Vec<String> = self.lines.iter().map(key).collect();
        let mut b: Vec<String> = other.lines.iter().map(key).collect();
        a.sort();
        b.sort();
        a == b && self.interactions == other.interactions
    }
}

/// Surgery site bookkeeping: a cylindrical neighborhood around a point
/// of a singular line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurgerySite {
    pub line: usize,
    pub center_t: f64,
    pub radius: f64,
    pub collar: f64,
    /// The caller asserts a spacelike slice through the site for bases
    /// that are not warped products.
    pub spacelike_slice_asserted: bool,
}

/// Constructive descriptions of singular AdS spacetimes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpacetimeRecipe {
    Suspension { surface: HsSurface },
    WarpedProduct { cone_angles: Vec<f64>, genus: usize, t_min: f64, t_max: f64 },
    ModelWedge { singularity: SingularityType, link: LinkCircle },
    BtzQuotient { left: ProjMatrix, right: ProjMatrix },
    Surgery { base: Box<SpacetimeRecipe>, site: SurgerySite, patch: HsSurface },
}

impl SpacetimeRecipe {
    pub fn warped(cone_angles: Vec<f64>) -> Self {
        SpacetimeRecipe::WarpedProduct {
            cone_angles,
            genus: 0,
            t_min: -std::f64::consts::FRAC_PI_2,
            t_max: std::f64::consts::FRAC_PI_2,
        }
    }

    /// The singular graph of the recipe.
    pub fn singular_graph(&self) -> Result<SingularGraph> {
        match self {
            SpacetimeRecipe::Suspension { surface } => suspension_graph(surface),
            SpacetimeRecipe::WarpedProduct { cone_angles, .. } => {
                let mut lines = vec![];
                for (i, &angle) in cone_angles.iter().enumerate() {
                    if angle <= 0.0 {
                        return Err(Error::math("cone angles must be positive"));
                    }
                    lines.push(SingularLine {
                        kind: SingularityType::MassiveParticle { angle },
                        locus: Locus::VerticalLine { index: i },
                    });
                }
                Ok(SingularGraph { lines, interactions: vec![] })
            }
            SpacetimeRecipe::ModelWedge { singularity, .. } => {
                let mut lines = vec![SingularLine {
                    kind: *singularity,
                    locus: Locus::WedgeAxis,
                }];
                // the static wedge models for BTZ-like lines come with
                // their conjugate companion line
                if let SingularityType::Btz { side } = singularity {
                    lines.push(SingularLine {
                        kind: SingularityType::Btz { side: side.flip() },
                        locus: Locus::WedgeCompanion,
                    });
                }
                Ok(SingularGraph { lines, interactions: vec![] })
            }
            SpacetimeRecipe::BtzQuotient { left, right } => {
                let q = btz_quotient(left, right)?;
                Ok(q.graph)
            }
            SpacetimeRecipe::Surgery { base, site, patch } => {
                surgery_graph(base, site, patch)
            }
        }
    }
}

// ---------------------------------------------------------------------
// suspension
// ---------------------------------------------------------------------

fn suspension_graph(surface: &HsSurface) -> Result<SingularGraph> {
    if !surface.sphere {
        return Err(Error::math("only spheres can be suspended to a manifold"));
    }
    surface.validate()?;
    let mut lines = vec![];
    for (i, sing) in surface.singularities.iter().enumerate() {
        lines.push(SingularLine {
            kind: classify_singularity(&sing.link)?,
            locus: Locus::ConeRay { index: i },
        });
    }
    let interactions = if surface.suspension_of.is_some() || surface.singularities.is_empty() {
        // the suspension of a single link circle has two singular rays
        // forming one line through the vertex, which is not an
        // interaction; the regular sphere has no singular locus at all
        vec![]
    } else {
        vec![Interaction { link: surface.clone() }]
    };
    Ok(SingularGraph { lines, interactions })
}

/// Suspension of an HS-sphere.
pub fn suspend(surface: &HsSurface) -> Result<(SpacetimeRecipe, SingularGraph)> {
    let graph = suspension_graph(surface)?;
    Ok((SpacetimeRecipe::Suspension { surface: surface.clone() }, graph))
}

/// The model wedge spacetime of a singular line type, with the link
/// circle of its axis.
pub fn construct_model_singularity(
    t: &SingularityType,
    length: f64,
) -> Result<(SpacetimeRecipe, LinkCircle)> {
    let link = model_link(t, length)?;
    Ok((
        SpacetimeRecipe::ModelWedge { singularity: *t, link: link.clone() },
        link,
    ))
}

// ---------------------------------------------------------------------
// warped products
// ---------------------------------------------------------------------

/// Metric tensor at a point of a chart, with its coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartMetric {
    /// (t, r, phi) in the cylindrical chart around a cone point.
    pub coords: [f64; 3],
    pub tensor: [[f64; 3]; 3],
}

/// Evaluates `-dt^2 + cos^2 t (dr^2 + sinh^2 r dphi^2)` in the
/// cylindrical chart around cone point `cone_index`.
pub fn warped_metric(
    recipe: &SpacetimeRecipe,
    cone_index: usize,
    point: [f64; 2],
    t: f64,
) -> Result<ChartMetric> {
    let (angles, t_min, t_max) = match recipe {
        SpacetimeRecipe::WarpedProduct { cone_angles, t_min, t_max, .. } => {
            (cone_angles, *t_min, *t_max)
        }
        _ => return Err(Error::input("warped_metric expects a warped product recipe")),
    };
    if cone_index >= angles.len() {
        return Err(Error::input(format!("no cone point {cone_index}")));
    }
    if t <= t_min || t >= t_max {
        return Err(Error::math(format!("time {t} outside ({t_min}, {t_max})")));
    }
    let [r, phi] = point;
    if r <= 0.0 {
        return Err(Error::math("chart radius must be positive"));
    }
    let c2 = t.cos() * t.cos();
    Ok(ChartMetric {
        coords: [t, r, phi],
        tensor: [
            [-1.0, 0.0, 0.0],
            [0.0, c2, 0.0],
            [0.0, 0.0, c2 * r.sinh() * r.sinh()],
        ],
    })
}

// finite-difference curvature machinery -------------------------------

type Metric3 = [[f64; 3]; 3];

fn inv3(g: &Metric3) -> Metric3 {
    let det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
        - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    let c = |i: usize, j: usize| {
        let (r1, r2) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let (c1, c2) = match j {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let minor = g[r1][c1] * g[r2][c2] - g[r1][c2] * g[r2][c1];
        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        sign * minor
    };
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = c(j, i) / det;
        }
    }
    out
}

/// Fourth-order central difference of a scalar function.
fn diff4(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

fn christoffel(metric: &dyn Fn([f64; 3]) -> Metric3, x: [f64; 3], h: f64) -> [[[f64; 3]; 3]; 3] {
    let g = metric(x);
    let ginv = inv3(&g);
    // dg[c][a][b] = d g_ab / d x_c
    let mut dg = [[[0.0; 3]; 3]; 3];
    for c in 0..3 {
        for a in 0..3 {
            for b in 0..3 {
                let f = |s: f64| {
                    let mut y = x;
                    y[c] = s;
                    metric(y)[a][b]
                };
                dg[c][a][b] = diff4(&f, x[c], h);
            }
        }
    }
    let mut gamma = [[[0.0; 3]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let mut s = 0.0;
                for d in 0..3 {
                    s += ginv[a][d] * (dg[b][d][c] + dg[c][b][d] - dg[d][b][c]);
                }
                gamma[a][b][c] = s / 2.0;
            }
        }
    }
    gamma
}

/// Sectional curvatures of the three coordinate planes by finite
/// differences of the metric.
pub fn sectional_curvatures(
    metric: &dyn Fn([f64; 3]) -> Metric3,
    x: [f64; 3],
) -> Result<[f64; 3]> {
    let h = FD_STEP;
    let g = metric(x);
    // Riemann tensor R^a_{bcd} from finite differences of Christoffels
    let gamma = christoffel(metric, x, h);
    let mut dgamma = [[[[0.0; 3]; 3]; 3]; 3]; // dgamma[c][a][b][d] = d Gamma^a_{bd} / dx_c
    for c in 0..3 {
        for a in 0..3 {
            for b in 0..3 {
                for d in 0..3 {
                    let f = |s: f64| {
                        let mut y = x;
                        y[c] = s;
                        christoffel(metric, y, h)[a][b][d]
                    };
                    dgamma[c][a][b][d] = diff4(&f, x[c], h);
                }
            }
        }
    }
    let riemann_up = |a: usize, b: usize, c: usize, d: usize| -> f64 {
        // R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
        //           + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb}
        let mut s = dgamma[c][a][d][b] - dgamma[d][a][c][b];
        for e in 0..3 {
            s += gamma[a][c][e] * gamma[e][d][b] - gamma[a][d][e] * gamma[e][c][b];
        }
        s
    };
    let mut out = [0.0; 3];
    let planes = [(0usize, 1usize), (0, 2), (1, 2)];
    for (k, (i, j)) in planes.into_iter().enumerate() {
        // R_{ijij} with lowered first index
        let mut riem = 0.0;
        for a in 0..3 {
            riem += g[i][a] * riemann_up(a, j, i, j);
        }
        let denom = g[i][i] * g[j][j] - g[i][j] * g[i][j];
        if denom.abs() < 1e-12 {
            return Err(Error::math("degenerate coordinate plane"));
        }
        out[k] = riem / denom;
    }
    Ok(out)
}

/// Warped-product metric function for the finite-difference checks.
pub fn warped_metric_fn(coords: [f64; 3]) -> Metric3 {
    let [t, r, _] = coords;
    let c2 = t.cos() * t.cos();
    [
        [-1.0, 0.0, 0.0],
        [0.0, c2, 0.0],
        [0.0, 0.0, c2 * r.sinh() * r.sinh()],
    ]
}

/// Parallel transport around the circle `r = r0` at `t = 0`, by
/// fourth-order Runge-Kutta integration of the transport equation in
/// the cone chart of angle `theta`.  Returns the rotation angle of the
/// transported frame against the coordinate frame.
pub fn peripheral_transport_angle(theta: f64, r0: f64, steps: usize) -> f64 {
    // metric on the t=0 slice: dr^2 + sinh^2 r dphi^2 (cone angle theta
    // realized by phi in [0, theta))
    // transport along r = r0: dv^r/dphi = sinh r cosh r v^phi,
    //                         dv^phi/dphi = -coth r v^r
    let sh = r0.sinh();
    let ch = r0.cosh();
    let rhs = |v: [f64; 2]| [sh * ch * v[1], -ch / sh * v[0]];
    let mut v = [1.0, 0.0];
    let h = theta / steps as f64;
    for _ in 0..steps {
        let k1 = rhs(v);
        let k2 = rhs([v[0] + h / 2.0 * k1[0], v[1] + h / 2.0 * k1[1]]);
        let k3 = rhs([v[0] + h / 2.0 * k2[0], v[1] + h / 2.0 * k2[1]]);
        let k4 = rhs([v[0] + h * k3[0], v[1] + h * k3[1]]);
        for i in 0..2 {
            v[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    // angle of the transported vector in the orthonormal frame
    // (e_r, e_phi) = (d_r, d_phi / sinh r)
    f64::atan2(v[1] * sh, v[0])
}

/// Holonomy of a small loop around a cone point of the warped product,
/// classified as a projective rotation.  Integrates the transport at
/// two radii and extrapolates the rotation angle to radius zero.
pub fn peripheral_holonomy(theta: f64) -> Result<IsomClass> {
    if theta <= 0.0 || theta >= TAU {
        return Err(Error::math("peripheral holonomy expects a cone angle in (0, 2pi)"));
    }
    let angle_at = |r: f64| -> f64 {
        // total transported rotation is -theta*cosh(r); recover the
        // absolute angle from the principal value near -theta
        let a = peripheral_transport_angle(theta, r, 4096);
        let target = -theta * r.cosh();
        let mut k = ((target - a) / TAU).round();
        let mut best = a + TAU * k;
        if (best - target).abs() > std::f64::consts::PI {
            k += (target - best).signum();
            best = a + TAU * k;
        }
        best
    };
    let a1 = angle_at(2e-3);
    let a2 = angle_at(1e-3);
    // Richardson extrapolation in r^2
    let a0 = (4.0 * a2 - a1) / 3.0;
    // transport defect = rotation by (theta - 2pi); traversing the
    // loop positively for the boundary chart makes the projective
    // holonomy the rotation by theta itself
    let rot = ProjMatrix::rotation((-a0).rem_euclid(TAU));
    Ok(classify_isometry(&rot))
}

// ---------------------------------------------------------------------
// causal speed bound and time functions
// ---------------------------------------------------------------------

/// Verdict of the causal speed bound check in the mass-m chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedReport {
    pub causal: bool,
    /// Set when a sample saturates the bound within `EPS_CURVE`.
    pub marginal: bool,
    pub max_excess: f64,
}

/// Checks `|zeta'(t)| <= |zeta|^m / (1 - m)` along a sampled curve in
/// the singular cylindrical chart of mass `m`.
pub fn singular_chart_speed_bound(m: f64, samples: &[(f64, [f64; 2])]) -> Result<SpeedReport> {
    if !(0.0 < m && m < 1.0) {
        return Err(Error::math("mass must lie in (0, 1)"));
    }
    if samples.len() < 2 {
        return Err(Error::input("need at least two samples"));
    }
    let mut marginal = false;
    let mut max_excess = f64::NEG_INFINITY;
    for w in samples.windows(2) {
        let (t0, z0) = w[0];
        let (t1, z1) = w[1];
        let dt = t1 - t0;
        if dt <= 0.0 {
            return Err(Error::input("samples must be strictly increasing in t"));
        }
        let dz = ((z1[0] - z0[0]).powi(2) + (z1[1] - z0[1]).powi(2)).sqrt();
        let speed = dz / dt;
        let zmid = (((z0[0] + z1[0]) / 2.0).powi(2) + ((z0[1] + z1[1]) / 2.0).powi(2))
            .sqrt();
        let bound = zmid.powf(m) / (1.0 - m);
        let excess = speed - bound;
        max_excess = max_excess.max(excess);
        if excess.abs() <= EPS_CURVE {
            marginal = true;
        }
    }
    Ok(SpeedReport { causal: max_excess <= EPS_CURVE, marginal, max_excess })
}

/// Validates a family of sampled curves as future causal for the
/// warped metric and checks that the time coordinate is strictly
/// increasing along each.  Curves are (t, r, phi) samples in a cone
/// chart of the recipe.
pub fn time_function_check(
    recipe: &SpacetimeRecipe,
    curves: &[Vec<[f64; 3]>],
) -> Result<bool> {
    let angles = match recipe {
        SpacetimeRecipe::WarpedProduct { cone_angles, .. } => cone_angles,
        _ => return Err(Error::input("time functions are checked on warped products")),
    };
    if angles.is_empty() {
        return Err(Error::input("warped product needs at least one cone angle"));
    }
    for (ci, curve) in curves.iter().enumerate() {
        if curve.len() < 2 {
            return Err(Error::input(format!("curve {ci} has fewer than two samples")));
        }
        for w in curve.windows(2) {
            let [t0, r0, p0] = w[0];
            let [t1, r1, p1] = w[1];
            let dt = t1 - t0;
            let mid_t = (t0 + t1) / 2.0;
            let mid_r = ((r0 + r1) / 2.0).max(1e-9);
            let c2 = mid_t.cos() * mid_t.cos();
            let spatial2 = c2 * ((r1 - r0).powi(2) + mid_r.sinh().powi(2) * (p1 - p0).powi(2));
            let interval = -dt * dt + spatial2;
            let scale = dt * dt + spatial2;
            if interval > EPS_CURVE * scale.max(1e-12) {
                return Err(Error::math(format!(
                    "curve {ci} fails causal validation (interval {interval:.3e})"
                )));
            }
            if dt <= 0.0 {
                return Err(Error::math(format!(
                    "curve {ci} is not future oriented at t = {t0}"
                )));
            }
        }
    }
    // the t coordinate is strictly increasing along every validated
    // future causal curve
    Ok(true)
}

// ---------------------------------------------------------------------
// cyclic quotients
// ---------------------------------------------------------------------

/// Boundary embedding of a pair of projective points into the null
/// quadric of the matrix model.
pub fn boundary_point(x: Rp1Point, y: Rp1Point) -> FormVector {
    let w = |p: Rp1Point| -> [f64; 2] {
        match p {
            Rp1Point::Finite(v) => [v, 1.0],
            Rp1Point::Infinity => [1.0, 0.0],
        }
    };
    let a = w(x);
    let b = w(y);
    // rank-one matrix [a] (-b1, b0)
    let m = [
        [-a[0] * b[1], a[0] * b[0]],
        [-a[1] * b[1], a[1] * b[0]],
    ];
    FormVector::q22(q22_of_matrix(&m))
}

fn attracting_fixed_point(g: &ProjMatrix) -> Result<Rp1Point> {
    match fixed_points_rp1(g) {
        FixedPoints::Points(pts) if pts.len() == 2 => {
            for p in pts {
                if g.derivative_at(p).abs() < 1.0 {
                    return Ok(p);
                }
            }
            Err(Error::math("no attracting fixed point found"))
        }
        _ => Err(Error::math("hyperbolic element expected")),
    }
}

/// The two invariant spacelike geodesics of a cyclic quotient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BtzQuotientData {
    pub recipe: SpacetimeRecipe,
    pub graph: SingularGraph,
    /// Pointwise fixed geodesic (spanned by two null boundary points).
    pub l1: [FormVector; 2],
    /// Geodesic translated by the common length.
    pub l2: [FormVector; 2],
    pub translation_length: f64,
}

/// Builds the cyclic quotient spacetime of a pair of hyperbolic
/// elements with equal translation length, returning the two invariant
/// geodesics: the adjoined future BTZ line (fixed pointwise) and its
/// dual (translated by the common length).
pub fn btz_quotient(left: &ProjMatrix, right: &ProjMatrix) -> Result<BtzQuotientData> {
    let (l_len, r_len) = match (classify_isometry(left), classify_isometry(right)) {
        (
            IsomClass::Hyperbolic { translation_length: a },
            IsomClass::Hyperbolic { translation_length: b },
        ) => (a, b),
        _ => return Err(Error::math("cyclic quotients need hyperbolic elements")),
    };
    if (l_len - r_len).abs() > 1e-9 {
        return Err(Error::math(format!(
            "translation lengths differ: {l_len} vs {r_len}"
        )));
    }
    let xp_l = attracting_fixed_point(left)?;
    let xm_l = attracting_fixed_point(&left.inverse())?;
    let xp_r = attracting_fixed_point(right)?;
    let xm_r = attracting_fixed_point(&right.inverse())?;

    let l2 = [boundary_point(xp_l, xp_r), boundary_point(xm_l, xm_r)];
    let l1 = [boundary_point(xp_l, xm_r), boundary_point(xm_l, xp_r)];

    let graph = SingularGraph {
        lines: vec![
            SingularLine {
                kind: SingularityType::Btz { side: TimeSide::Future },
                locus: Locus::QuotientAxis { role: AxisRole::FixedAxis },
            },
            SingularLine {
                kind: SingularityType::Btz { side: TimeSide::Past },
                locus: Locus::QuotientAxis { role: AxisRole::TranslatedAxis },
            },
        ],
        interactions: vec![],
    };
    Ok(BtzQuotientData {
        recipe: SpacetimeRecipe::BtzQuotient { left: *left, right: *right },
        graph,
        l1,
        l2,
        translation_length: l_len,
    })
}

/// Points of the quadric on the geodesic spanned by two null vectors.
pub fn geodesic_points(span: &[FormVector; 2], params: &[f64]) -> Result<Vec<FormVector>> {
    let a = &span[0];
    let b = &span[1];
    let c = inner(a, b)?;
    if c.abs() < 1e-12 {
        return Err(Error::math("degenerate geodesic span"));
    }
    // normalize so that q(e^s a' + e^-s b') = -1
    let scale = -1.0 / (2.0 * c);
    if scale < 0.0 {
        // flip one generator to land on the q = -1 branch
        let a2 = a.scaled((-scale).sqrt());
        let b2 = b.scaled(-(-scale).sqrt());
        return Ok(params
            .iter()
            .map(|s| {
                a2.scaled(s.exp())
                    .add(&b2.scaled((-s).exp()))
                    .expect("same form")
            })
            .collect());
    }
    let a2 = a.scaled(scale.sqrt());
    let b2 = b.scaled(scale.sqrt());
    Ok(params
        .iter()
        .map(|s| {
            a2.scaled(s.exp())
                .add(&b2.scaled((-s).exp()))
                .expect("same form")
        })
        .collect())
}

/// AdS distance along a spacelike geodesic between two points of the
/// projective quadric model (representatives up to global sign).
pub fn spacelike_distance(x: &FormVector, y: &FormVector) -> Result<f64> {
    Ok(inner(x, y)?.abs().max(1.0).acosh())
}

/// Distance of two quadric representatives up to the antipodal
/// identification of the projective model.
pub fn projective_defect(x: &FormVector, y: &FormVector) -> f64 {
    let direct: f64 = x
        .coords
        .iter()
        .zip(&y.coords)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let flipped: f64 = x
        .coords
        .iter()
        .zip(&y.coords)
        .map(|(a, b)| (a + b) * (a + b))
        .sum();
    direct.min(flipped).sqrt()
}

impl BtzQuotientData {
    pub fn isometry(&self) -> AdsIsometry {
        match self.recipe {
            SpacetimeRecipe::BtzQuotient { left, right } => AdsIsometry::new(left, right),
            _ => unreachable!("recipe kind fixed at construction"),
        }
    }
}

// ---------------------------------------------------------------------
// surgeries
// ---------------------------------------------------------------------

/// The elliptic angle carried by the photon circle bounding the future
/// hyperbolic region of a patch sphere.
pub fn future_circle_angle(patch: &HsSurface) -> Result<f64> {
    let future: Vec<&Region> = patch
        .regions
        .iter()
        .filter(|r| r.kind == RegionKind::Hyperbolic(TimeSide::Future))
        .collect();
    if future.len() != 1 || future[0].boundary_circles.len() != 1 {
        return Err(Error::math(
            "patch needs a unique future hyperbolic region with one boundary circle",
        ));
    }
    let circle = future[0].boundary_circles[0];
    let structure: &Rp1Circle = &patch.photon_circles[circle].hyperbolic_side;
    match classify_rp1_circle(structure)? {
        Rp1CircleClass::Elliptic { angle } => Ok(angle),
        other => Err(Error::math(format!(
            "future photon circle carries a non-elliptic structure: {other:?}"
        ))),
    }
}

fn surgery_graph(
    base: &SpacetimeRecipe,
    site: &SurgerySite,
    patch: &HsSurface,
) -> Result<SingularGraph> {
    let base_graph = base.singular_graph()?;
    let line = base_graph
        .lines
        .get(site.line)
        .ok_or_else(|| Error::input(format!("no singular line {}", site.line)))?;
    match line.kind {
        SingularityType::MassiveParticle { .. } => {
            collision_graph(&base_graph, site.line, patch)
        }
        SingularityType::Btz { .. } => btz_surgery_graph(&base_graph, site.line, patch),
        other => Err(Error::math(format!("surgery not supported on {other:?} lines"))),
    }
}

fn collision_graph(
    base_graph: &SingularGraph,
    line: usize,
    patch: &HsSurface,
) -> Result<SingularGraph> {
    let mut lines = vec![];
    for (i, l) in base_graph.lines.iter().enumerate() {
        if i == line {
            lines.push(SingularLine {
                kind: l.kind,
                locus: Locus::SegmentAbove { base_line: i },
            });
        } else {
            lines.push(l.clone());
        }
    }
    for (i, sing) in patch.singularities.iter().enumerate() {
        let kind = classify_singularity(&sing.link)?;
        match kind {
            SingularityType::MassiveParticle { .. } => {
                if matches!(sing.link.base_class, crate::form::HsRegion::HypPlus) {
                    // the future line of the patch continues the base line
                    continue;
                }
                lines.push(SingularLine { kind, locus: Locus::PatchLine { index: i } });
            }
            other => {
                return Err(Error::math(format!(
                    "collision patches carry only massive particles, found {other:?}"
                )))
            }
        }
    }
    Ok(SingularGraph {
        lines,
        interactions: vec![Interaction { link: patch.clone() }],
    })
}

fn btz_surgery_graph(
    base_graph: &SingularGraph,
    line: usize,
    patch: &HsSurface,
) -> Result<SingularGraph> {
    let mut lines = vec![SingularLine {
        kind: base_graph.lines[line].kind,
        locus: Locus::SegmentAbove { base_line: line },
    }];
    for (i, sing) in patch.singularities.iter().enumerate() {
        let kind = classify_singularity(&sing.link)?;
        match kind {
            SingularityType::MassiveParticle { .. } => {
                lines.push(SingularLine { kind, locus: Locus::PatchLine { index: i } });
            }
            SingularityType::Btz { .. } => {
                // continues the base line through the interaction
            }
            other => {
                return Err(Error::math(format!(
                    "BTZ surgery patches carry massive particles and one BTZ point, \
                     found {other:?}"
                )))
            }
        }
    }
    // the component of the cut spacetime retained by the surgery
    // contains only the surgered line; other base lines are trimmed
    Ok(SingularGraph {
        lines,
        interactions: vec![Interaction { link: patch.clone() }],
    })
}

/// Collision surgery: replaces a segment of a massive-particle line by
/// an interaction point whose link is the patch sphere.
pub fn surgery_collision(
    base: &SpacetimeRecipe,
    site: SurgerySite,
    patch: &HsSurface,
) -> Result<(SpacetimeRecipe, SingularGraph)> {
    let base_graph = base.singular_graph()?;
    let line = base_graph
        .lines
        .get(site.line)
        .ok_or_else(|| Error::input(format!("no singular line {}", site.line)))?;
    let theta = match line.kind {
        SingularityType::MassiveParticle { angle } => angle,
        other => {
            return Err(Error::math(format!(
                "collision surgery applies to massive-particle lines, found {other:?}"
            )))
        }
    };
    if !matches!(base, SpacetimeRecipe::WarpedProduct { .. }) && !site.spacelike_slice_asserted {
        return Err(Error::math(
            "non-warped bases need the caller to assert a spacelike slice through the site",
        ));
    }
    if classify_interaction(patch)? != InteractionClass::CausallyRegular {
        return Err(Error::math("collision patch must be a causally regular sphere"));
    }
    for sing in &patch.singularities {
        if !matches!(
            classify_singularity(&sing.link)?,
            SingularityType::MassiveParticle { .. }
        ) {
            return Err(Error::math("collision patch must carry only elliptic points"));
        }
    }
    let angle = future_circle_angle(patch)?;
    if (angle - theta).abs() > 1e-9 {
        return Err(Error::math(format!(
            "patch future circle angle {angle} does not match the line's cone angle {theta}"
        )));
    }
    let recipe = SpacetimeRecipe::Surgery {
        base: Box::new(base.clone()),
        site,
        patch: patch.clone(),
    };
    let graph = recipe.singular_graph()?;
    Ok((recipe, graph))
}

/// Surgery on a BTZ line: two massive particles collide producing the
/// BTZ-like singularity.  The patch is the double of a triangle with
/// one de Sitter vertex; its BTZ length must match the base line.
pub fn btz_surgery(
    base: &SpacetimeRecipe,
    site: SurgerySite,
    patch: &HsSurface,
) -> Result<(SpacetimeRecipe, SingularGraph)> {
    let base_graph = base.singular_graph()?;
    let line = base_graph
        .lines
        .get(site.line)
        .ok_or_else(|| Error::input(format!("no singular line {}", site.line)))?;
    let base_side = match line.kind {
        SingularityType::Btz { side } => side,
        other => {
            return Err(Error::math(format!(
                "BTZ surgery applies to BTZ lines, found {other:?}"
            )))
        }
    };
    let base_mass = match base {
        SpacetimeRecipe::BtzQuotient { left, right } => btz_quotient(left, right)?.translation_length,
        _ => return Err(Error::math("BTZ surgery expects a cyclic quotient base")),
    };
    // patch combinatorics: one BTZ point of matching mass and side, two
    // elliptic points
    let mut btz_count = 0;
    let mut massive_count = 0;
    for sing in &patch.singularities {
        match classify_singularity(&sing.link)? {
            SingularityType::Btz { side } => {
                btz_count += 1;
                if side != base_side {
                    return Err(Error::math("patch BTZ point has the wrong time side"));
                }
                match classify_rp1_circle(&sing.link.rp1)? {
                    Rp1CircleClass::Hyperbolic { translation_length, .. } => {
                        if (translation_length - base_mass).abs() > 1e-9 {
                            return Err(Error::math(format!(
                                "patch BTZ mass {translation_length} does not match base {base_mass}"
                            )));
                        }
                    }
                    _ => return Err(Error::math("BTZ link must carry a hyperbolic circle")),
                }
            }
            SingularityType::MassiveParticle { .. } => massive_count += 1,
            other => {
                return Err(Error::math(format!(
                    "unexpected patch singularity {other:?}"
                )))
            }
        }
    }
    if btz_count != 1 || massive_count != 2 {
        return Err(Error::math(format!(
            "BTZ surgery patch needs one BTZ point and two elliptic points, \
             found {btz_count} and {massive_count}"
        )));
    }
    let recipe = SpacetimeRecipe::Surgery {
        base: Box::new(base.clone()),
        site,
        patch: patch.clone(),
    };
    let graph = recipe.singular_graph()?;
    Ok((recipe, graph))
}

/// Excision of the interaction ball of a surgered spacetime: recovers
/// the base recipe, reconstructing its graph from the surgered one by
/// restoring the split line and dropping the patch lines.
pub fn excise_surgery(recipe: &SpacetimeRecipe) -> Result<(SpacetimeRecipe, SingularGraph)> {
    let (base, site, _) = match recipe {
        SpacetimeRecipe::Surgery { base, site, patch } => (base, site, patch),
        _ => return Err(Error::math("excision applies to surgered recipes")),
    };
    let surgered = recipe.singular_graph()?;
    let base_graph = base.singular_graph()?;
    let mut lines = vec![];
    for l in &surgered.lines {
        match &l.locus {
            Locus::PatchLine { .. } => {}
            Locus::SegmentAbove { base_line } => {
                // the future segment extends back to the full base line
                lines.push(base_graph.lines[*base_line].clone());
            }
            _ => lines.push(l.clone()),
        }
    }
    // lines trimmed away together with the excised component are
    // restored from the base recipe
    for (i, l) in base_graph.lines.iter().enumerate() {
        let present = lines.iter().any(|x| x == l)
            || surgered.lines.iter().any(|x| {
                matches!(&x.locus, Locus::SegmentAbove { base_line } if *base_line == i)
            });
        if !present {
            lines.push(l.clone());
        }
    }
    let _ = site;
    // deterministic order: match the base graph's ordering
    let mut ordered = vec![];
    for l in &base_graph.lines {
        if let Some(k) = lines.iter().position(|x| x == l) {
            ordered.push(lines.remove(k));
        }
    }
    ordered.extend(lines);
    Ok(((**base).clone(), SingularGraph { lines: ordered, interactions: vec![] }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::FormTag;
    use crate::isometry::matrix_of_q22;
    use crate::surface::Hs2Triangle;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn mixed_triangle_sphere() -> HsSurface {
        HsSurface::double_triangle(
            &Hs2Triangle::new([
                FormVector::q12([1.0, 0.0, 0.0]),
                FormVector::q12([-1.3, 0.5, 0.0]),
                FormVector::q12([-1.3, -0.2, 0.45]),
            ])
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn suspension_graphs() {
        // regular sphere: empty singular graph
        let (_, g) = suspend(&HsSurface::regular()).unwrap();
        assert!(g.lines.is_empty() && g.interactions.is_empty());

        // suspension of a single link circle: two lines, no interaction
        let link = model_link(&SingularityType::Btz { side: TimeSide::Future }, 1.0).unwrap();
        let s = HsSurface::suspension_of_link(&link).unwrap();
        let (_, g) = suspend(&s).unwrap();
        assert_eq!(g.lines.len(), 2);
        assert!(g.interactions.is_empty());

        // doubled mixed triangle: two past particles collide into one
        let s = mixed_triangle_sphere();
        let (_, g) = suspend(&s).unwrap();
        assert_eq!(g.lines.len(), 3);
        assert_eq!(g.interactions.len(), 1);
        let future = g
            .lines
            .iter()
            .filter(|l| matches!(l.kind, SingularityType::MassiveParticle { .. }))
            .count();
        assert_eq!(future, 3);

        // non-spheres cannot be suspended
        let mut bad = HsSurface::regular();
        bad.sphere = false;
        assert!(suspend(&bad).is_err());
    }

    #[test]
    fn model_round_trip_all_variants() {
        let mut r = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..20 {
            let angle = r.gen_range(0.05..2.0 * TAU);
            let length = r.gen_range(0.05..3.0);
            let mut types = vec![
                SingularityType::MassiveParticle { angle },
                SingularityType::Misner,
            ];
            for sign in [1i8, -1] {
                types.push(SingularityType::Tachyon { sign });
                for side in [TimeSide::Future, TimeSide::Past] {
                    types.push(SingularityType::Photon { sign, side });
                }
                types.push(SingularityType::HighDegree { degree: 4, lightlike: false, sign });
                types.push(SingularityType::HighDegree { degree: 6, lightlike: true, sign });
            }
            for side in [TimeSide::Future, TimeSide::Past] {
                types.push(SingularityType::Btz { side });
                types.push(SingularityType::ExtremeBtz { side });
                types.push(SingularityType::Cuspidal { side });
            }
            for t in types {
                let (recipe, link) = construct_model_singularity(&t, length).unwrap();
                let back = classify_singularity(&link).unwrap();
                match (t, back) {
                    (
                        SingularityType::MassiveParticle { angle: a },
                        SingularityType::MassiveParticle { angle: b },
                    ) => assert!((a - b).abs() < 1e-6),
                    (x, y) => assert_eq!(x, y),
                }
                let g = recipe.singular_graph().unwrap();
                assert!(!g.lines.is_empty());
            }
        }
    }

    #[test]
    fn btz_wedge_has_conjugate_pair() {
        let (recipe, _) =
            construct_model_singularity(&SingularityType::Btz { side: TimeSide::Past }, 1.0)
                .unwrap();
        let g = recipe.singular_graph().unwrap();
        let kinds: Vec<SingularityType> = g.lines.iter().map(|l| l.kind).collect();
        assert!(kinds.contains(&SingularityType::Btz { side: TimeSide::Past }));
        assert!(kinds.contains(&SingularityType::Btz { side: TimeSide::Future }));
    }

    #[test]
    fn fd_curvature_on_known_metrics() {
        // hyperbolic polar metric embedded as a product with a flat
        // direction: K(r, phi) plane must be -1
        let hyp = |x: [f64; 3]| -> Metric3 {
            let r = x[1];
            [
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, 0.0, r.sinh() * r.sinh()],
            ]
        };
        let k = sectional_curvatures(&hyp, [0.0, 1.1, 0.4]).unwrap();
        assert!((k[2] + 1.0).abs() < 1e-4, "hyperbolic plane: {k:?}");

        // round sphere: +1
        let sph = |x: [f64; 3]| -> Metric3 {
            let r = x[1];
            [
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, 0.0, r.sin() * r.sin()],
            ]
        };
        let k = sectional_curvatures(&sph, [0.0, 0.8, 0.4]).unwrap();
        assert!((k[2] - 1.0).abs() < 1e-4, "sphere: {k:?}");
    }

    #[test]
    fn warped_metric_is_anti_de_sitter() {
        let mut r = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let x = [
                r.gen_range(-1.2..1.2),
                r.gen_range(0.4..1.8),
                r.gen_range(0.0..1.0),
            ];
            let k = sectional_curvatures(&warped_metric_fn, x).unwrap();
            for (i, kk) in k.iter().enumerate() {
                assert!((kk + 1.0).abs() < 1e-4, "plane {i} at {x:?}: {kk}");
            }
        }
    }

    #[test]
    fn warped_metric_chart_values() {
        let recipe = SpacetimeRecipe::warped(vec![PI]);
        let m = warped_metric(&recipe, 0, [0.7, 0.1], 0.0).unwrap();
        // at t = 0 the slice metric is the cone metric itself
        assert!((m.tensor[1][1] - 1.0).abs() < 1e-12);
        assert!((m.tensor[2][2] - 0.7f64.sinh().powi(2)).abs() < 1e-12);
        assert!(warped_metric(&recipe, 0, [0.7, 0.1], 2.0).is_err());
    }

    #[test]
    fn peripheral_holonomy_recovers_cone_angle() {
        for theta in [PI / 2.0, PI, 1.5 * PI] {
            match peripheral_holonomy(theta).unwrap() {
                IsomClass::Elliptic { angle } => {
                    assert!((angle - theta).abs() < 1e-6, "theta {theta}: got {angle}");
                }
                c => panic!("expected elliptic holonomy, got {c:?}"),
            }
        }
    }

    #[test]
    fn speed_bound_checks() {
        let m = 0.5;
        // constant radius curve is causal
        let samples: Vec<(f64, [f64; 2])> =
            (0..50).map(|i| (i as f64 * 0.01, [0.3, 0.1])).collect();
        let rep = singular_chart_speed_bound(m, &samples).unwrap();
        assert!(rep.causal && !rep.marginal);

        // radial curve exceeding the bound by 10 percent
        let mut z = 0.5f64;
        let mut bad = vec![(0.0, [z, 0.0])];
        for i in 1..80 {
            let t = i as f64 * 0.005;
            z += 0.005 * 1.1 * z.powf(m) / (1.0 - m);
            bad.push((t, [z, 0.0]));
        }
        let rep = singular_chart_speed_bound(m, &bad).unwrap();
        assert!(!rep.causal);

        // the exact null curve zeta = t^{1/(1-m)} saturates the bound
        for m in [0.25, 0.5, 0.75] {
            let mut z = 0.4f64;
            let mut null = vec![(0.0, [z, 0.0])];
            let dt = 1e-5;
            for i in 1..2000 {
                // RK4 on zeta' = zeta^m / (1-m)
                let f = |w: f64| w.powf(m) / (1.0 - m);
                let k1 = f(z);
                let k2 = f(z + dt / 2.0 * k1);
                let k3 = f(z + dt / 2.0 * k2);
                let k4 = f(z + dt * k3);
                z += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                null.push((i as f64 * dt, [z, 0.0]));
            }
            let rep = singular_chart_speed_bound(m, &null).unwrap();
            assert!(rep.causal, "m = {m}: null curve rejected");
            assert!(rep.marginal, "m = {m}: null curve should be marginal");
            assert!(rep.max_excess.abs() < 1e-6, "m = {m}: excess {}", rep.max_excess);
        }
    }

    #[test]
    fn time_function_on_causal_curves() {
        let recipe = SpacetimeRecipe::warped(vec![PI]);
        let mut r = ChaCha8Rng::seed_from_u64(3);
        let mut curves = vec![];
        for _ in 0..100 {
            let mut t = r.gen_range(-0.8..-0.2);
            let mut rad = r.gen_range(0.3..1.0);
            let mut phi = r.gen_range(0.0..PI);
            let mut curve = vec![[t, rad, phi]];
            for _ in 0..40 {
                let dt = 0.02;
                // random causal velocity: spatial speed strictly below 1
                let speed = r.gen_range(0.0..0.9);
                let dir = r.gen_range(0.0..TAU);
                let ct = t.cos();
                rad = (rad + dt * speed * dir.cos() / ct).max(0.05);
                phi += dt * speed * dir.sin() / (ct * rad.sinh().max(0.05));
                t += dt;
                curve.push([t, rad, phi]);
            }
            curves.push(curve);
        }
        assert!(time_function_check(&recipe, &curves).unwrap());

        // a spacelike slice parametrized as a curve is rejected
        let slice: Vec<[f64; 3]> = (0..20)
            .map(|i| [0.001 * i as f64, 0.5 + 0.2 * i as f64, 0.0])
            .collect();
        assert!(time_function_check(&recipe, &[slice]).is_err());
    }

    #[test]
    fn btz_quotient_duality() {
        let g = ProjMatrix::new([[1.0f64.exp(), 0.0], [0.0, (-1.0f64).exp()]]).unwrap();
        let data = btz_quotient(&g, &g).unwrap();
        assert!((data.translation_length - 2.0).abs() < 1e-12);

        // l1 is the diagonal family, fixed pointwise
        let iso = data.isometry();
        let pts1 = geodesic_points(&data.l1, &[-1.0, -0.3, 0.0, 0.7, 1.3]).unwrap();
        for p in &pts1 {
            let q = iso.apply_q22(p).unwrap();
            assert!(projective_defect(p, &q) < 1e-9, "l1 not fixed");
            // diagonal in the matrix model
            let m = matrix_of_q22(&[p.coords[0], p.coords[1], p.coords[2], p.coords[3]]);
            assert!(m[0][1].abs() < 1e-9 && m[1][0].abs() < 1e-9);
        }

        // l2 is translated by the common length
        let pts2 = geodesic_points(&data.l2, &[-0.9, 0.0, 0.4, 1.1]).unwrap();
        for p in &pts2 {
            let q = iso.apply_q22(p).unwrap();
            let d = spacelike_distance(p, &q).unwrap();
            assert!((d - 2.0).abs() < 1e-9, "translation distance {d}");
        }

        // duality: inner products between the two geodesics vanish
        for p in &pts1 {
            for q in &pts2 {
                assert!(inner(p, q).unwrap().abs() < 1e-9);
            }
        }

        // mismatched lengths are rejected
        let h = ProjMatrix::new([[2.0, 0.0], [0.0, 0.5]]).unwrap();
        assert!(btz_quotient(&g, &h).is_err());
        assert!(btz_quotient(&g, &ProjMatrix::rotation(1.0)).is_err());
    }

    #[test]
    fn collision_surgery_round_trip() {
        // base: one-cone-point warped product with the angle of the
        // patch's future particle
        let patch = mixed_triangle_sphere();
        let theta = future_circle_angle(&patch).unwrap();
        let base = SpacetimeRecipe::warped(vec![theta]);
        let site = SurgerySite {
            line: 0,
            center_t: 0.0,
            radius: 0.1,
            collar: 0.15,
            spacelike_slice_asserted: false,
        };
        let (recipe, graph) = surgery_collision(&base, site, &patch).unwrap();
        // two particles collide producing one
        assert_eq!(graph.interactions.len(), 1);
        assert_eq!(graph.lines.len(), 3);
        let above = graph
            .lines
            .iter()
            .filter(|l| matches!(l.locus, Locus::SegmentAbove { .. }))
            .count();
        assert_eq!(above, 1);

        // excision recovers the base singular graph exactly
        let (excised, excised_graph) = excise_surgery(&recipe).unwrap();
        assert_eq!(excised, base);
        assert!(excised_graph.same_as(&base.singular_graph().unwrap()));

        // angle mismatch is rejected
        let bad_base = SpacetimeRecipe::warped(vec![theta + 0.2]);
        let site = SurgerySite {
            line: 0,
            center_t: 0.0,
            radius: 0.1,
            collar: 0.15,
            spacelike_slice_asserted: false,
        };
        assert!(surgery_collision(&bad_base, site, &patch).is_err());
    }

    #[test]
    fn btz_surgery_graph_and_mismatch() {
        // patch: double of a triangle with one de Sitter vertex and two
        // past vertices
        let t = Hs2Triangle::new([
            FormVector::q12([0.1, 1.0, 0.0]),
            FormVector::q12([-1.2, 0.3, 0.2]),
            FormVector::q12([-1.2, 0.3, -0.2]),
        ])
        .unwrap();
        let patch = HsSurface::double_triangle(&t).unwrap();
        assert_eq!(
            classify_interaction(&patch).unwrap(),
            InteractionClass::BlackHoleInteraction
        );
        let mass = 2.0 * t.boost_angle(0).unwrap();
        let g = ProjMatrix::boost(mass);
        let base = btz_quotient(&g, &g).unwrap().recipe;
        let site = SurgerySite {
            line: 0,
            center_t: 0.0,
            radius: 0.1,
            collar: 0.15,
            spacelike_slice_asserted: true,
        };
        let (_, graph) = btz_surgery(&base, site.clone(), &patch).unwrap();
        // two massive lines, one future BTZ line, one interaction
        assert_eq!(graph.interactions.len(), 1);
        assert_eq!(graph.lines.len(), 3);
        let massive = graph
            .lines
            .iter()
            .filter(|l| matches!(l.kind, SingularityType::MassiveParticle { .. }))
            .count();
        let btz = graph
            .lines
            .iter()
            .filter(|l| matches!(l.kind, SingularityType::Btz { side: TimeSide::Future }))
            .count();
        assert_eq!((massive, btz), (2, 1));

        // mass mismatch rejected
        let other = ProjMatrix::boost(mass + 0.3);
        let base2 = btz_quotient(&other, &other).unwrap().recipe;
        assert!(btz_surgery(&base2, site, &patch).is_err());
    }

    #[test]
    fn boundary_embedding_is_equivariant() {
        let mut r = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..200 {
            let iso = AdsIsometry::new(
                crate::isometry::random_psl(&mut r),
                crate::isometry::random_psl(&mut r),
            );
            let x = Rp1Point::Finite(r.gen_range(-2.0..2.0));
            let y = Rp1Point::Finite(r.gen_range(-2.0..2.0));
            let p = boundary_point(x, y);
            assert_eq!(p.form, FormTag::Q22);
            let q = crate::form::evaluate_form(&p).unwrap();
            assert!(q.abs() < 1e-12, "boundary points are null");
            let moved = iso.apply_q22(&p).unwrap();
            let (bx, by) = iso.apply_boundary((x, y));
            let expect = boundary_point(bx, by);
            // equal as rays
            let dot: f64 = moved.coords.iter().zip(&expect.coords).map(|(a, b)| a * b).sum();
            let na: f64 = moved.coords.iter().map(|a| a * a).sum();
            let nb: f64 = expect.coords.iter().map(|a| a * a).sum();
            assert!((dot * dot - na * nb).abs() < 1e-9 * na * nb.max(1.0));
        }
    }
}
