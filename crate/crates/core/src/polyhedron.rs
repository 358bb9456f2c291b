//! Convex polyhedra in the ray space of `q13` and the geometric
//! structures they induce on their boundary.
//!
//! Vertices are rays (the double cover is kept), faces are vertex
//! cycles, and convexity means every vertex lies on the supporting
//! side of every face plane.  A polyhedron is of hyperbolic,
//! bi-hyperbolic or compact type according to which hyperbolic
//! components of the ray space its solid cone meets.
//!
//! The induced boundary structure is computed from tangent-space data:
//! face causal types from the normals, cone angles at timelike
//! vertices as sums of corner angles, and vertex-link holonomies by
//! composing the fold maps that develop the boundary around a vertex.

use crate::error::{Error, Result};
use crate::form::{classify_vector, hs_classify_ray, CausalClass, FormTag, FormVector, HsRegion};
use crate::isometry::TAU;
use crate::lift::LiftedIsometry;
use crate::link::{model_link, LinkCircle, SingularityType, TimeSide};
use crate::surface::composed_peripheral;
use crate::tol::EPS_GEOM;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Convex polyhedron given by vertex rays and face cycles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hs3Polyhedron {
    pub vertices: Vec<FormVector>,
    pub faces: Vec<Vec<usize>>,
}

/// Position of the solid polyhedron relative to the two hyperbolic
/// components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolyhedronType {
    Hyperbolic,
    BiHyperbolic,
    Compact,
}

/// Link data reported per vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum VertexLink {
    ConeAngle { angle: f64 },
    Link { link: LinkCircle },
}

/// The induced boundary structure report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InducedReport {
    pub is_hs_structure: bool,
    pub offending_faces: Vec<(usize, CausalClass)>,
    pub vertex_links: Vec<(usize, VertexLink)>,
    pub particle_dictionary: Vec<(usize, SingularityType)>,
    pub positivity: Option<bool>,
    /// None when the check does not apply (non-bi-hyperbolic input).
    pub positive_mass: Option<bool>,
}

// ---------------------------------------------------------------------
// small 4d linear algebra
// ---------------------------------------------------------------------

type V4 = [f64; 4];
type M4 = [[f64; 4]; 4];

fn coords4(v: &FormVector) -> V4 {
    [v.coords[0], v.coords[1], v.coords[2], v.coords[3]]
}

fn det4(m: &M4) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..4 {
        let mut pivot = col;
        for r in col + 1..4 {
            if a[r][col].abs() > a[pivot][col].abs() {
                pivot = r;
            }
        }
        if a[pivot][col].abs() < 1e-300 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..4 {
            let f = a[r][col] / a[col][col];
            for c in col..4 {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}

fn mat4_mul(a: &M4, b: &M4) -> M4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn mat4_apply(a: &M4, v: &V4) -> V4 {
    let mut out = [0.0; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i] += a[i][j] * v[j];
        }
    }
    out
}

fn mat4_inverse(m: &M4) -> Result<M4> {
    let mut a = *m;
    let mut inv = [[0.0; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for col in 0..4 {
        let mut pivot = col;
        for r in col + 1..4 {
            if a[r][col].abs() > a[pivot][col].abs() {
                pivot = r;
            }
        }
        if a[pivot][col].abs() < 1e-12 {
            return Err(Error::math("singular frame matrix"));
        }
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let p = a[col][col];
        for c in 0..4 {
            a[col][c] /= p;
            inv[col][c] /= p;
        }
        for r in 0..4 {
            if r != col {
                let f = a[r][col];
                for c in 0..4 {
                    a[r][c] -= f * a[col][c];
                    inv[r][c] -= f * inv[col][c];
                }
            }
        }
    }
    Ok(inv)
}

fn q13_inner(a: &V4, b: &V4) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

/// Euclidean normal functional of the span of three vectors (the
/// generalized cross product); converting through the metric gives the
/// q13-orthogonal direction.
fn span_normal(a: &V4, b: &V4, c: &V4) -> V4 {
    let minor = |i: usize, j: usize, k: usize| {
        a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i])
            + a[k] * (b[i] * c[j] - b[j] * c[i])
    };
    [
        minor(1, 2, 3),
        -minor(0, 2, 3),
        minor(0, 1, 3),
        -minor(0, 1, 2),
    ]
}

impl Hs3Polyhedron {
    pub fn new(vertices: Vec<FormVector>, faces: Vec<Vec<usize>>) -> Result<Self> {
        let p = Hs3Polyhedron { vertices, faces };
        p.validate()?;
        Ok(p)
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Wire {
            vertices: Vec<[f64; 4]>,
            faces: Vec<Vec<usize>>,
        }
        let w: Wire = serde_json::from_value(value.clone())
            .map_err(|e| Error::input(format!("bad polyhedron schema: {e}")))?;
        Hs3Polyhedron::new(
            w.vertices.into_iter().map(FormVector::q13).collect(),
            w.faces,
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": "polyhedron/1",
            "vertices": self.vertices.iter().map(|v| v.coords.clone()).collect::<Vec<_>>(),
            "faces": self.faces,
        })
    }

    /// Undirected edge list derived from the face cycles.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = vec![];
        for f in &self.faces {
            for k in 0..f.len() {
                let a = f[k];
                let b = f[(k + 1) % f.len()];
                let e = (a.min(b), a.max(b));
                if !out.contains(&e) {
                    out.push(e);
                }
            }
        }
        out.sort();
        out
    }

    /// Structural and convexity validation.
    pub fn validate(&self) -> Result<()> {
        if self.vertices.len() < 4 {
            return Err(Error::math("a polyhedron needs at least four vertices"));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.form != FormTag::Q13 {
                return Err(Error::input(format!("vertex {i} is not a q13 ray")));
            }
            if v.is_zero() {
                return Err(Error::math(format!("vertex {i} is the zero vector")));
            }
            if classify_vector(v)? == CausalClass::Lightlike {
                return Err(Error::math(format!(
                    "vertex {i} lies on the boundary spheres"
                )));
            }
        }
        // combinatorial closed surface: every edge in exactly two faces
        let mut edge_count: Vec<((usize, usize), usize)> = vec![];
        for f in &self.faces {
            if f.len() < 3 {
                return Err(Error::input("faces need at least three vertices"));
            }
            for k in 0..f.len() {
                let a = f[k];
                let b = f[(k + 1) % f.len()];
                if a >= self.vertices.len() || b >= self.vertices.len() {
                    return Err(Error::input("face refers to a missing vertex"));
                }
                let e = (a.min(b), a.max(b));
                match edge_count.iter_mut().find(|(k, _)| *k == e) {
                    Some((_, n)) => *n += 1,
                    None => edge_count.push((e, 1)),
                }
            }
        }
        for ((a, b), n) in &edge_count {
            if *n != 2 {
                return Err(Error::math(format!(
                    "edge ({a},{b}) lies in {n} faces, expected 2"
                )));
            }
        }
        let euler =
            self.vertices.len() as i64 - edge_count.len() as i64 + self.faces.len() as i64;
        if euler != 2 {
            return Err(Error::math(format!(
                "combinatorics is not a sphere: Euler characteristic {euler}"
            )));
        }
        // convexity: every vertex weakly on the supporting side of
        // every face plane, with planar faces
        for (fi, _) in self.faces.iter().enumerate() {
            let (n, side) = self.face_functional(fi)?;
            let _ = side;
            let _ = n;
        }
        // saliency: a functional positive on all vertex rays
        self.saliency_functional()?;
        Ok(())
    }

    /// Euclidean functional of face `fi`, oriented so that all vertices
    /// lie on the non-positive side; checks planarity and convexity.
    fn face_functional(&self, fi: usize) -> Result<(V4, f64)> {
        let f = &self.faces[fi];
        let a = coords4(&self.vertices[f[0]]);
        let b = coords4(&self.vertices[f[1]]);
        let c = coords4(&self.vertices[f[2]]);
        let mut n = span_normal(&a, &b, &c);
        let scale = n.iter().map(|x| x * x).sum::<f64>().sqrt();
        if scale < 1e-12 {
            return Err(Error::math(format!("face {fi} is degenerate")));
        }
        for x in &mut n {
            *x /= scale;
        }
        // planarity of the remaining face vertices
        for &vi in f.iter().skip(3) {
            let d: f64 = coords4(&self.vertices[vi])
                .iter()
                .zip(&n)
                .map(|(x, y)| x * y)
                .sum();
            if d.abs() > EPS_GEOM * 10.0 {
                return Err(Error::math(format!("face {fi} is not planar: defect {d:.2e}")));
            }
        }
        // orient against the other vertices
        let mut side = 0.0f64;
        for (vi, v) in self.vertices.iter().enumerate() {
            if f.contains(&vi) {
                continue;
            }
            let d: f64 = coords4(v).iter().zip(&n).map(|(x, y)| x * y).sum();
            if side == 0.0 {
                side = d.signum();
            }
            if d * side < -EPS_GEOM {
                return Err(Error::math(format!(
                    "vertex {vi} violates convexity against face {fi}"
                )));
            }
        }
        if side > 0.0 {
            for x in &mut n {
                *x = -*x;
            }
        }
        Ok((n, side))
    }

    /// A functional strictly positive on every vertex ray (saliency of
    /// the solid cone).
    fn saliency_functional(&self) -> Result<V4> {
        // least squares solve of <f, v_i> = 1
        let mut ata = [[0.0; 4]; 4];
        let mut atb = [0.0; 4];
        for v in &self.vertices {
            let x = coords4(v);
            for i in 0..4 {
                for j in 0..4 {
                    ata[i][j] += x[i] * x[j];
                }
                atb[i] += x[i];
            }
        }
        let inv = mat4_inverse(&ata)
            .map_err(|_| Error::math("degenerate vertex configuration"))?;
        let f = mat4_apply(&inv, &atb);
        for (i, v) in self.vertices.iter().enumerate() {
            let d: f64 = coords4(v).iter().zip(&f).map(|(x, y)| x * y).sum();
            if d < 1e-9 {
                return Err(Error::math(format!(
                    "vertex rays are not salient (vertex {i})"
                )));
            }
        }
        Ok(f)
    }

    /// Faces incident to a vertex, in cyclic order around it.
    fn faces_around_vertex(&self, v: usize) -> Result<Vec<usize>> {
        let incident: Vec<usize> = self
            .faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.contains(&v))
            .map(|(i, _)| i)
            .collect();
        if incident.len() < 3 {
            return Err(Error::math(format!("vertex {v} has fewer than three faces")));
        }
        // each incident face contributes the two edges at v
        let edges_at = |fi: usize| -> (usize, usize) {
            let f = &self.faces[fi];
            let k = f.iter().position(|&x| x == v).expect("incident");
            (f[(k + f.len() - 1) % f.len()], f[(k + 1) % f.len()])
        };
        let mut order = vec![incident[0]];
        let (_, mut leaving) = edges_at(incident[0]);
        while order.len() < incident.len() {
            let next = incident
                .iter()
                .find(|&&fi| {
                    !order.contains(&fi) && {
                        let (a, b) = edges_at(fi);
                        a == leaving || b == leaving
                    }
                })
                .copied()
                .ok_or_else(|| Error::math(format!("face fan around vertex {v} is broken")))?;
            let (a, b) = edges_at(next);
            leaving = if a == leaving { b } else { a };
            order.push(next);
        }
        Ok(order)
    }
}

/// Causal type of the supporting plane of a face: the class of the
/// q13-orthogonal normal direction, transposed (timelike normal means
/// a spacelike plane).
pub fn face_causal_type(p: &Hs3Polyhedron, face: usize) -> Result<CausalClass> {
    if face >= p.faces.len() {
        return Err(Error::input(format!("no face {face}")));
    }
    let (n, _) = p.face_functional(face)?;
    // metric conversion: the q13-normal vector of the functional
    let normal = FormVector::q13([-n[0], n[1], n[2], n[3]]);
    Ok(match classify_vector(&normal)? {
        CausalClass::Timelike => CausalClass::Spacelike,
        CausalClass::Spacelike => CausalClass::Timelike,
        CausalClass::Lightlike => CausalClass::Lightlike,
        CausalClass::Zero => unreachable!("normal is nonzero"),
    })
}

/// Concave membership margin of the future timelike cone.
fn future_margin(w: &V4) -> f64 {
    w[0] - (w[1] * w[1] + w[2] * w[2] + w[3] * w[3]).sqrt()
}

/// Maximizes a concave margin over the convex hull of the vertex rays
/// by Frank-Wolfe iteration with multistart.
fn hull_margin(vertices: &[V4], past: bool) -> f64 {
    let eval = |w: &V4| {
        if past {
            future_margin(&[-w[0], w[1], w[2], w[3]])
        } else {
            future_margin(w)
        }
    };
    let grad = |w: &V4| -> V4 {
        let s = (w[1] * w[1] + w[2] * w[2] + w[3] * w[3]).sqrt().max(1e-12);
        let t = if past { -1.0 } else { 1.0 };
        [t, -w[1] / s, -w[2] / s, -w[3] / s]
    };
    let mut best = f64::NEG_INFINITY;
    let mut starts: Vec<V4> = vertices.to_vec();
    let mut centroid = [0.0; 4];
    for v in vertices {
        for i in 0..4 {
            centroid[i] += v[i] / vertices.len() as f64;
        }
    }
    starts.push(centroid);
    for start in starts {
        let mut x = start;
        best = best.max(eval(&x));
        for k in 0..400 {
            let g = grad(&x);
            // linear subproblem over the hull: best vertex
            let v = vertices
                .iter()
                .max_by(|a, b| {
                    let da: f64 = a.iter().zip(&g).map(|(x, y)| x * y).sum();
                    let db: f64 = b.iter().zip(&g).map(|(x, y)| x * y).sum();
                    da.partial_cmp(&db).expect("finite")
                })
                .expect("nonempty");
            let step = 2.0 / (k as f64 + 2.0);
            for i in 0..4 {
                x[i] += step * (v[i] - x[i]);
            }
            best = best.max(eval(&x));
        }
    }
    best
}

/// Bi-hyperbolic, hyperbolic or compact type, decided by hull
/// membership of timelike rays of each time orientation.
pub fn classify_polyhedron(p: &Hs3Polyhedron) -> Result<PolyhedronType> {
    p.validate()?;
    let normalized: Vec<V4> = p
        .vertices
        .iter()
        .map(|v| coords4(&v.normalized_ray().expect("validated nonzero")))
        .collect();
    let future = hull_margin(&normalized, false);
    let past = hull_margin(&normalized, true);
    let meets_future = future > 1e-9;
    let meets_past = past > 1e-9;
    Ok(match (meets_future, meets_past) {
        (true, true) => PolyhedronType::BiHyperbolic,
        (false, false) => PolyhedronType::Compact,
        _ => PolyhedronType::Hyperbolic,
    })
}

// ---------------------------------------------------------------------
// vertex links via fold maps
// ---------------------------------------------------------------------

struct CornerFrame {
    /// unit edge direction at the vertex (entry edge of the corner)
    edge_in: V4,
    /// unit edge direction of the exit edge
    edge_out: V4,
    /// in-plane companion of `edge_in` pointing into the corner
    companion_in: V4,
    /// in-plane companion of `edge_out` pointing into the corner
    companion_out: V4,
    /// unit normal of the face plane
    normal: V4,
}

fn normalize_q(v: &V4) -> Result<(V4, f64)> {
    let q = q13_inner(v, v);
    if q.abs() < 1e-12 {
        return Err(Error::math("tolerance breach: lightlike tangent direction"));
    }
    let s = q.abs().sqrt();
    Ok(([v[0] / s, v[1] / s, v[2] / s, v[3] / s], q.signum()))
}

/// Tangent projection at `v` (q13-unit) of the ray `w`.
fn tangent_at(v: &V4, qv: f64, w: &V4) -> V4 {
    let vw = q13_inner(v, w);
    let mut out = *w;
    for i in 0..4 {
        out[i] -= vw / qv * v[i];
    }
    out
}

fn corner_frame(p: &Hs3Polyhedron, vertex: usize, face: usize, enter_from: usize) -> Result<CornerFrame> {
    let f = &p.faces[face];
    let k = f.iter().position(|&x| x == vertex).expect("incident");
    let prev = f[(k + f.len() - 1) % f.len()];
    let next = f[(k + 1) % f.len()];
    let (a, b) = if prev == enter_from { (prev, next) } else { (next, prev) };
    let (v, _) = normalize_q(&coords4(&p.vertices[vertex]))?;
    let qv = q13_inner(&v, &v);
    let ta_raw = tangent_at(&v, qv, &coords4(&p.vertices[a]));
    let tb_raw = tangent_at(&v, qv, &coords4(&p.vertices[b]));
    let (ta, _) = normalize_q(&ta_raw)?;
    let (tb, _) = normalize_q(&tb_raw)?;
    // companions: the other edge direction made orthogonal to the edge
    let comp = |e: &V4, other: &V4| -> Result<V4> {
        let qe = q13_inner(e, e);
        let eo = q13_inner(e, other);
        let mut m = *other;
        for i in 0..4 {
            m[i] -= eo / qe * e[i];
        }
        Ok(normalize_q(&m)?.0)
    };
    let normal_raw = {
        let (n, _) = p.face_functional(face)?;
        // metric conversion to a q13 vector
        [-n[0], n[1], n[2], n[3]]
    };
    let (normal, nsign) = normalize_q(&normal_raw)?;
    if nsign < 0.0 {
        return Err(Error::math(
            "vertex link development needs timelike faces (spacelike normals)",
        ));
    }
    Ok(CornerFrame {
        edge_in: ta,
        edge_out: tb,
        companion_in: comp(&ta, &tb)?,
        companion_out: comp(&tb, &ta)?,
        normal,
    })
}

/// The fold map across the edge shared by two consecutive corners:
/// fixes the vertex and the common edge direction, and sends the
/// incoming corner's companion to the negative of the outgoing one.
fn fold_map(v: &V4, frame_next: &CornerFrame, frame_prev: &CornerFrame) -> Result<M4> {
    // source frame: (v, shared edge, companion in next face, next normal)
    // target frame: (v, shared edge, -companion in previous face, +-prev normal)
    let e = frame_next.edge_in;
    let source = [
        [v[0], e[0], frame_next.companion_in[0], frame_next.normal[0]],
        [v[1], e[1], frame_next.companion_in[1], frame_next.normal[1]],
        [v[2], e[2], frame_next.companion_in[2], frame_next.normal[2]],
        [v[3], e[3], frame_next.companion_in[3], frame_next.normal[3]],
    ];
    let neg_comp = [
        -frame_prev.companion_out[0],
        -frame_prev.companion_out[1],
        -frame_prev.companion_out[2],
        -frame_prev.companion_out[3],
    ];
    let mut target = [
        [v[0], e[0], neg_comp[0], frame_prev.normal[0]],
        [v[1], e[1], neg_comp[1], frame_prev.normal[1]],
        [v[2], e[2], neg_comp[2], frame_prev.normal[2]],
        [v[3], e[3], neg_comp[3], frame_prev.normal[3]],
    ];
    let m = mat4_mul(&target, &mat4_inverse(&source)?);
    if det4(&m) < 0.0 {
        // flip the free normal sign to restore orientation
        for row in &mut target {
            row[3] = -row[3];
        }
        return Ok(mat4_mul(&target, &mat4_inverse(&source)?));
    }
    Ok(m)
}

/// Holonomy of the vertex link circle, as a Lorentz map of the tangent
/// space, together with the counts of future and past timelike
/// sectors around the vertex.
pub struct VertexHolonomy {
    /// 3x3 matrix in an orthonormal tangent basis (timelike first when
    /// the vertex is spacelike; all spacelike for timelike vertices).
    pub matrix: [[f64; 3]; 3],
    pub timelike_vertex: bool,
    pub future_sectors: usize,
    pub past_sectors: usize,
}

fn tangent_basis(v: &V4) -> Result<(Vec<V4>, Vec<f64>)> {
    let qv = q13_inner(v, v);
    let mut basis: Vec<V4> = vec![];
    let mut signs: Vec<f64> = vec![];
    for k in 0..4 {
        let mut e = [0.0; 4];
        e[k] = 1.0;
        let mut t = tangent_at(v, qv, &e);
        for (b, s) in basis.iter().zip(&signs) {
            let c = q13_inner(&t, b) * s;
            for i in 0..4 {
                t[i] -= c * b[i];
            }
        }
        let q = q13_inner(&t, &t);
        if q.abs() > 1e-9 {
            let s = q.abs().sqrt();
            basis.push([t[0] / s, t[1] / s, t[2] / s, t[3] / s]);
            signs.push(q.signum());
        }
        if basis.len() == 3 {
            break;
        }
    }
    if basis.len() != 3 {
        return Err(Error::math("degenerate tangent basis"));
    }
    // put a timelike vector first when there is one, future oriented
    if let Some(k) = signs.iter().position(|&s| s < 0.0) {
        basis.swap(0, k);
        signs.swap(0, k);
        if basis[0][0] < 0.0 {
            for x in &mut basis[0] {
                *x = -*x;
            }
        }
    }
    Ok((basis, signs))
}

/// Walks the faces around a vertex, composing fold maps and counting
/// timelike sectors of the link circle.
pub fn vertex_holonomy(p: &Hs3Polyhedron, vertex: usize) -> Result<VertexHolonomy> {
    let (v, vsign) = normalize_q(&coords4(&p.vertices[vertex]))?;
    let fan = p.faces_around_vertex(vertex)?;
    // corner frames walked consistently: enter each face through the
    // edge shared with the previous one
    let mut frames: Vec<CornerFrame> = vec![];
    let mut enter = {
        // shared edge between the last and first fan faces
        let f_last = &p.faces[fan[fan.len() - 1]];
        let f0 = &p.faces[fan[0]];
        let k = f0.iter().position(|&x| x == vertex).expect("incident");
        let prev = f0[(k + f0.len() - 1) % f0.len()];
        let next = f0[(k + 1) % f0.len()];
        if f_last.contains(&prev) {
            prev
        } else {
            next
        }
    };
    for &fi in &fan {
        let frame = corner_frame(p, vertex, fi, enter)?;
        // the exit edge endpoint
        let f = &p.faces[fi];
        let k = f.iter().position(|&x| x == vertex).expect("incident");
        let prev = f[(k + f.len() - 1) % f.len()];
        let next = f[(k + 1) % f.len()];
        enter = if prev == enter { next } else { prev };
        frames.push(frame);
    }

    // sector census: count future/past timelike maximal arcs around the
    // link (edge directions and interior corner crossings)
    let mut sector_types: Vec<i8> = vec![]; // 1 future, -1 past, 0 spacelike
    for frame in &frames {
        // corner from edge_in to edge_out: sample causal type along the
        // positive combination
        let samples = 8;
        for s in 0..samples {
            let t = (s as f64 + 0.5) / samples as f64;
            let mut d = [0.0; 4];
            for i in 0..4 {
                d[i] = (1.0 - t) * frame.edge_in[i] + t * frame.edge_out[i];
            }
            let q = q13_inner(&d, &d);
            let ty = if q < -1e-12 {
                if d[0] > 0.0 {
                    1
                } else {
                    -1
                }
            } else if q > 1e-12 {
                0
            } else {
                continue;
            };
            if sector_types.last() != Some(&ty) {
                sector_types.push(ty);
            }
        }
    }
    // close the cycle
    if sector_types.len() > 1 && sector_types.first() == sector_types.last() {
        sector_types.pop();
    }
    let future_sectors = sector_types.iter().filter(|&&t| t == 1).count();
    let past_sectors = sector_types.iter().filter(|&&t| t == -1).count();

    // composed fold holonomy
    let mut h = [[0.0; 4]; 4];
    for (i, row) in h.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for i in 0..frames.len() {
        let next = &frames[(i + 1) % frames.len()];
        let prev = &frames[i];
        let m = fold_map(&v, next, prev)?;
        h = mat4_mul(&h, &m);
    }
    // restrict to the tangent space in an orthonormal basis
    let (basis, signs) = tangent_basis(&v)?;
    let mut a = [[0.0; 3]; 3];
    for j in 0..3 {
        let hb = mat4_apply(&h, &basis[j]);
        for i in 0..3 {
            a[i][j] = q13_inner(&hb, &basis[i]) * signs[i];
        }
    }
    Ok(VertexHolonomy {
        matrix: a,
        timelike_vertex: vsign < 0.0,
        future_sectors,
        past_sectors,
    })
}

/// Cone angle at a timelike vertex: the sum of the corner angles of
/// the incident faces in the Riemannian tangent space.
pub fn cone_angle(p: &Hs3Polyhedron, vertex: usize) -> Result<f64> {
    let (v, vsign) = normalize_q(&coords4(&p.vertices[vertex]))?;
    if vsign > 0.0 {
        return Err(Error::math("cone angles apply to timelike vertices"));
    }
    let qv = q13_inner(&v, &v);
    let mut total = 0.0;
    for (fi, f) in p.faces.iter().enumerate() {
        if !f.contains(&vertex) {
            continue;
        }
        let k = f.iter().position(|&x| x == vertex).expect("incident");
        let prev = f[(k + f.len() - 1) % f.len()];
        let next = f[(k + 1) % f.len()];
        let ta = tangent_at(&v, qv, &coords4(&p.vertices[prev]));
        let tb = tangent_at(&v, qv, &coords4(&p.vertices[next]));
        let qa = q13_inner(&ta, &ta);
        let qb = q13_inner(&tb, &tb);
        if qa <= 0.0 || qb <= 0.0 {
            return Err(Error::math(format!(
                "face {fi}: tangent directions at a timelike vertex must be spacelike"
            )));
        }
        let c = q13_inner(&ta, &tb) / (qa * qb).sqrt();
        total += c.clamp(-1.0, 1.0).acos();
    }
    Ok(total)
}

/// The induced structure on the boundary: face typing, vertex links,
/// the particle dictionary, positivity and the positive-mass check.
pub fn induced_structure(p: &Hs3Polyhedron) -> Result<InducedReport> {
    p.validate()?;
    let mut offending = vec![];
    for fi in 0..p.faces.len() {
        let t = face_causal_type(p, fi)?;
        if t != CausalClass::Timelike {
            offending.push((fi, t));
        }
    }
    if !offending.is_empty() {
        return Ok(InducedReport {
            is_hs_structure: false,
            offending_faces: offending,
            vertex_links: vec![],
            particle_dictionary: vec![],
            positivity: None,
            positive_mass: None,
        });
    }

    let ptype = classify_polyhedron(p)?;
    let mut vertex_links = vec![];
    let mut dictionary = vec![];
    let mut positivity = true;
    for (vi, v) in p.vertices.iter().enumerate() {
        match hs_classify_ray(v)? {
            HsRegion::HypPlus | HsRegion::HypMinus => {
                let angle = cone_angle(p, vi)?;
                let side = if hs_classify_ray(v)? == HsRegion::HypPlus {
                    TimeSide::Future
                } else {
                    TimeSide::Past
                };
                let _ = side;
                if angle >= TAU {
                    positivity = false;
                }
                vertex_links.push((vi, VertexLink::ConeAngle { angle }));
                dictionary.push((vi, SingularityType::MassiveParticle { angle }));
            }
            HsRegion::DeSitter => {
                let h = vertex_holonomy(p, vi)?;
                let t: f64 = h.matrix[0][0] + h.matrix[1][1] + h.matrix[2][2];
                // translation length of the restricted holonomy
                let length = {
                    let c = ((t - 1.0) / 2.0).max(1.0);
                    2.0 * c.acosh()
                };
                let kind = match (h.future_sectors, h.past_sectors) {
                    (1, 1) => SingularityType::Tachyon { sign: 1 },
                    (0, 1) => SingularityType::Btz { side: TimeSide::Future },
                    (1, 0) => SingularityType::Btz { side: TimeSide::Past },
                    (0, 0) => SingularityType::Misner,
                    (f, pp) => SingularityType::HighDegree {
                        degree: (f + pp) as u32,
                        lightlike: false,
                        sign: 1,
                    },
                };
                let link = model_link(&kind, length.max(1e-6))?;
                vertex_links.push((vi, VertexLink::Link { link }));
                dictionary.push((vi, kind));
            }
            _ => unreachable!("validated: no lightlike vertex"),
        }
    }

    let positive_mass = if ptype == PolyhedronType::BiHyperbolic {
        Some(positive_mass_value(p)? < TAU)
    } else {
        None
    };

    Ok(InducedReport {
        is_hs_structure: true,
        offending_faces: vec![],
        vertex_links,
        particle_dictionary: dictionary,
        positivity: Some(positivity),
        positive_mass,
    })
}

/// Length of the holonomy-generated closed spacelike geodesic of the
/// de Sitter annulus of a bi-hyperbolic polyhedron.
///
/// The annulus retracts onto the boundary of the future disk; the
/// boundary-developing lift of an n-cone-point disk is the composite
/// of the canonical peripheral lifts shifted by one deck transformation
/// per extra cone point (the one-point model and the flat limit both
/// fix this normalization).  A negative lifted angle means the circle's
/// positive generator is the inverse loop.
pub fn positive_mass_value(p: &Hs3Polyhedron) -> Result<f64> {
    let future: Vec<usize> = (0..p.vertices.len())
        .filter(|&i| hs_classify_ray(&p.vertices[i]).map(|r| r == HsRegion::HypPlus) == Ok(true))
        .collect();
    let composite: LiftedIsometry = match future.len() {
        0 => return Err(Error::math("no future vertices: not bi-hyperbolic")),
        1 => composed_peripheral(&[cone_angle(p, future[0])?], 0.0)?,
        2 => {
            let (a, b) = (future[0], future[1]);
            if !p.edges().contains(&(a.min(b), a.max(b))) {
                return Err(Error::undecidable(
                    "future cone points are not adjacent; annulus holonomy not reduced",
                ));
            }
            let va = normalize_q(&coords4(&p.vertices[a]))?.0;
            let vb = normalize_q(&coords4(&p.vertices[b]))?.0;
            let d = (-q13_inner(&va, &vb)).max(1.0).acosh();
            composed_peripheral(&[cone_angle(p, a)?, cone_angle(p, b)?], d)?
        }
        n => {
            return Err(Error::undecidable(format!(
                "annulus holonomy composition supports up to two future cone points, got {n}"
            )))
        }
    };
    let boundary_lift = LiftedIsometry::new(
        composite.degree - (future.len() as i64 - 1),
        composite.base,
    );
    match classify_isometry_of(&boundary_lift) {
        IsomKind::Elliptic => Ok(boundary_lift.translation_number().abs()),
        IsomKind::Hyperbolic(l) => Ok(l),
        IsomKind::Other => Ok(0.0),
    }
}

enum IsomKind {
    Elliptic,
    Hyperbolic(f64),
    Other,
}

fn classify_isometry_of(lift: &LiftedIsometry) -> IsomKind {
    match crate::isometry::classify_isometry(&lift.base) {
        crate::isometry::IsomClass::Elliptic { .. } | crate::isometry::IsomClass::Identity => {
            IsomKind::Elliptic
        }
        crate::isometry::IsomClass::Hyperbolic { translation_length } => {
            IsomKind::Hyperbolic(translation_length)
        }
        _ => IsomKind::Other,
    }
}

/// The positive-mass predicate of an induced structure: every
/// holonomy-generated simple closed spacelike geodesic of the de
/// Sitter annulus is shorter than 2pi.
pub fn positive_mass_check(report: &InducedReport, p: &Hs3Polyhedron) -> Result<bool> {
    if !report.is_hs_structure {
        return Err(Error::math("not an HS-structure; positive mass does not apply"));
    }
    if classify_polyhedron(p)? != PolyhedronType::BiHyperbolic {
        return Err(Error::math("positive mass applies to bi-hyperbolic polyhedra"));
    }
    Ok(positive_mass_value(p)? < TAU)
}

// ---------------------------------------------------------------------
// random generation and the SO(1,3) action
// ---------------------------------------------------------------------

/// Random point of the future (sign +) or past (sign -) hyperboloid.
fn random_hyperboloid<R: Rng>(r: &mut R, sign: f64) -> FormVector {
    let radius: f64 = r.gen_range(0.3..1.4);
    let phi: f64 = r.gen_range(0.0..TAU);
    let z: f64 = r.gen_range(-1.0..1.0);
    let s = (1.0 - z * z).sqrt();
    let dir = [s * phi.cos(), s * phi.sin(), z];
    FormVector::q13([
        sign * radius.cosh(),
        radius.sinh() * dir[0],
        radius.sinh() * dir[1],
        radius.sinh() * dir[2],
    ])
}

/// Seeded random bi-hyperbolic tetrahedron with one or two future
/// vertices; rejects non-convex samples.
pub fn random_bihyperbolic_tetrahedron<R: Rng>(r: &mut R) -> Hs3Polyhedron {
    loop {
        let up = if r.gen_bool(0.5) { 1 } else { 2 };
        let mut vertices = vec![];
        for _ in 0..up {
            vertices.push(random_hyperboloid(r, 1.0));
        }
        while vertices.len() < 4 {
            vertices.push(random_hyperboloid(r, -1.0));
        }
        let faces = vec![vec![0, 1, 2], vec![0, 3, 1], vec![0, 2, 3], vec![1, 3, 2]];
        if let Ok(p) = Hs3Polyhedron::new(vertices, faces) {
            if classify_polyhedron(&p) == Ok(PolyhedronType::BiHyperbolic) {
                return p;
            }
        }
    }
}

/// Random element of the identity component of the q13 isometry group,
/// as a product of elementary rotations and boosts.
pub fn random_so13<R: Rng>(r: &mut R) -> M4 {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let planes: [(usize, usize, bool); 6] = [
        (1, 2, false),
        (1, 3, false),
        (2, 3, false),
        (0, 1, true),
        (0, 2, true),
        (0, 3, true),
    ];
    for (i, j, boost) in planes {
        let mut e = [[0.0; 4]; 4];
        for (k, row) in e.iter_mut().enumerate() {
            row[k] = 1.0;
        }
        if boost {
            let t: f64 = r.gen_range(-0.8..0.8);
            e[i][i] = t.cosh();
            e[j][j] = t.cosh();
            e[i][j] = t.sinh();
            e[j][i] = t.sinh();
        } else {
            let a: f64 = r.gen_range(0.0..TAU);
            e[i][i] = a.cos();
            e[j][j] = a.cos();
            e[i][j] = -a.sin();
            e[j][i] = a.sin();
        }
        m = mat4_mul(&m, &e);
    }
    m
}

/// Applies a q13 isometry to every vertex.
pub fn transform_polyhedron(p: &Hs3Polyhedron, m: &M4) -> Hs3Polyhedron {
    Hs3Polyhedron {
        vertices: p
            .vertices
            .iter()
            .map(|v| {
                let w = mat4_apply(m, &coords4(v));
                FormVector::q13(w)
            })
            .collect(),
        faces: p.faces.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tetra(vertices: [[f64; 4]; 4]) -> Hs3Polyhedron {
        Hs3Polyhedron::new(
            vertices.into_iter().map(FormVector::q13).collect(),
            vec![vec![0, 1, 2], vec![0, 3, 1], vec![0, 2, 3], vec![1, 3, 2]],
        )
        .unwrap()
    }

    fn one_up_tetra() -> Hs3Polyhedron {
        let d: f64 = 0.8;
        tetra([
            [1.0, 0.0, 0.0, 0.0],
            [-d.cosh(), d.sinh(), 0.0, 0.0],
            [-d.cosh(), -0.4 * d.sinh(), 0.8 * d.sinh(), 0.0],
            [-d.cosh(), -0.4 * d.sinh(), -0.5 * d.sinh(), 0.6 * d.sinh()],
        ])
    }

    #[test]
    fn classify_types() {
        assert_eq!(classify_polyhedron(&one_up_tetra()).unwrap(), PolyhedronType::BiHyperbolic);

        // all four vertices on the future sheet: hyperbolic type
        let d: f64 = 0.6;
        let hyp = tetra([
            [1.0, 0.0, 0.0, 0.0],
            [d.cosh(), d.sinh(), 0.0, 0.0],
            [d.cosh(), 0.0, d.sinh(), 0.0],
            [d.cosh(), 0.0, 0.0, d.sinh()],
        ]);
        assert_eq!(classify_polyhedron(&hyp).unwrap(), PolyhedronType::Hyperbolic);

        // spacelike vertices spanning a cone away from the light cones
        let compact = tetra([
            [0.0, 1.0, 0.05, 0.05],
            [0.0, 1.0, 0.9, 0.0],
            [0.0, 1.0, 0.0, 0.9],
            [0.15, 1.0, 0.3, 0.3],
        ]);
        assert_eq!(classify_polyhedron(&compact).unwrap(), PolyhedronType::Compact);
    }

    #[test]
    fn lightlike_vertex_rejected() {
        let r = Hs3Polyhedron::new(
            vec![
                FormVector::q13([1.0, 1.0, 0.0, 0.0]),
                FormVector::q13([-1.5, 0.5, 0.0, 0.0]),
                FormVector::q13([-1.5, -0.2, 0.4, 0.0]),
                FormVector::q13([-1.5, -0.2, -0.2, 0.3]),
            ],
            vec![vec![0, 1, 2], vec![0, 3, 1], vec![0, 2, 3], vec![1, 3, 2]],
        );
        assert!(r.is_err());
    }

    #[test]
    fn face_types_of_bihyperbolic_are_timelike() {
        let p = one_up_tetra();
        for f in 0..4 {
            assert_eq!(face_causal_type(&p, f).unwrap(), CausalClass::Timelike);
        }
    }

    #[test]
    fn spacelike_face_detected() {
        // three spacelike rays whose span is positive definite
        let p = Hs3Polyhedron::new(
            vec![
                FormVector::q13([0.0, 1.0, 0.0, 0.0]),
                FormVector::q13([0.0, 0.0, 1.0, 0.0]),
                FormVector::q13([0.0, 0.0, 0.0, 1.0]),
                FormVector::q13([-1.5, 0.3, 0.3, 0.3]),
            ],
            vec![vec![0, 1, 2], vec![0, 3, 1], vec![0, 2, 3], vec![1, 3, 2]],
        )
        .unwrap();
        assert_eq!(face_causal_type(&p, 0).unwrap(), CausalClass::Spacelike);
        let rep = induced_structure(&p).unwrap();
        assert!(!rep.is_hs_structure);
        assert!(!rep.offending_faces.is_empty());
    }

    #[test]
    fn bihyperbolic_induced_structure() {
        let p = one_up_tetra();
        let rep = induced_structure(&p).unwrap();
        assert!(rep.is_hs_structure);
        assert_eq!(rep.positivity, Some(true));
        assert_eq!(rep.positive_mass, Some(true));
        // dictionary: four massive particles (one future, three past)
        let massive = rep
            .particle_dictionary
            .iter()
            .filter(|(_, t)| matches!(t, SingularityType::MassiveParticle { .. }))
            .count();
        assert_eq!(massive, 4);
        for (vi, link) in &rep.vertex_links {
            match link {
                VertexLink::ConeAngle { angle } => {
                    assert!(*angle > 0.0 && *angle < TAU, "vertex {vi}: angle {angle}");
                }
                VertexLink::Link { .. } => panic!("no de Sitter vertices here"),
            }
        }
    }

    #[test]
    fn cone_angle_matches_holonomy_rotation() {
        let p = one_up_tetra();
        for vi in 0..4 {
            let angle = cone_angle(&p, vi).unwrap();
            let h = vertex_holonomy(&p, vi).unwrap();
            assert!(h.timelike_vertex);
            // rotation part of the composed fold holonomy realizes the
            // cone angle modulo 2pi
            let t: f64 = h.matrix[0][0] + h.matrix[1][1] + h.matrix[2][2];
            let c = ((t - 1.0) / 2.0).clamp(-1.0, 1.0);
            assert!(
                (c - angle.cos()).abs() < 1e-7,
                "vertex {vi}: angle {angle}, holonomy cos {c}"
            );
            // the link circle of a timelike vertex carries no timelike
            // directions at all
            assert_eq!((h.future_sectors, h.past_sectors), (0, 0));
        }
    }

    #[test]
    fn positive_mass_via_annulus_holonomy() {
        let p = one_up_tetra();
        let rep = induced_structure(&p).unwrap();
        // one future cone point: geodesic length equals its cone angle
        let theta = cone_angle(&p, 0).unwrap();
        let value = positive_mass_value(&p).unwrap();
        assert!((value - theta).abs() < 1e-9);
        assert_eq!(positive_mass_check(&rep, &p).unwrap(), true);
    }

    #[test]
    fn classification_is_isometry_invariant() {
        let mut r = ChaCha8Rng::seed_from_u64(1234);
        for _ in 0..50 {
            let p = random_bihyperbolic_tetrahedron(&mut r);
            let m = random_so13(&mut r);
            let q = transform_polyhedron(&p, &m);
            assert_eq!(
                classify_polyhedron(&p).unwrap(),
                classify_polyhedron(&q).unwrap()
            );
        }
    }

    #[test]
    fn random_suite_smoke() {
        let mut r = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let p = random_bihyperbolic_tetrahedron(&mut r);
            let rep = induced_structure(&p).unwrap();
            assert!(rep.is_hs_structure);
            assert_eq!(rep.positivity, Some(true));
            assert_eq!(rep.positive_mass, Some(true));
        }
    }
}
