//! First-return maps of the isotropic foliations of de Sitter annuli
//! and detection of closed causal curves.
//!
//! The model annulus is the quotient of the strip between the two
//! invariant isotropic lines of a hyperbolic element by the cyclic
//! group it generates.  The first-return map of one isotropic foliation
//! along the other, read on a fixed leaf, is the boundary action of the
//! holonomy itself; closed leaves (closed causal curves) are its fixed
//! points.  Cutting the annulus along a leaf and regluing with a
//! deviation (a tachyon or a lightlike singularity on the leaf)
//! composes the return map with a parabolic or hyperbolic correction
//! fixing the leaf's anchor point; positive deviations push the return
//! map into the past (`f <= f'` pointwise), negative ones into the
//! future.

use crate::error::{Error, Result};
use crate::isometry::{classify_isometry, ProjMatrix, TAU};
use crate::lift::{eval_canonical, LiftedIsometry};
use crate::tol::{BISECT_GRID, EPS_BISECT, EPS_TANGENT};
use serde::{Deserialize, Serialize};

/// A cut-and-reglue deviation along one leaf of the base annulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Surgery {
    /// Correction composed into the return map; parabolic or hyperbolic.
    pub correction: ProjMatrix,
    /// Lifted angle the correction must fix (the developed end of the
    /// cut leaf).
    pub anchor: f64,
    /// Positive surgeries deviate the return map into the past.
    pub positive: bool,
}

/// First-return data of a de Sitter annulus: the hyperbolic base
/// holonomy and the ordered surgery deviations along the return cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstReturnSystem {
    pub base: ProjMatrix,
    pub surgeries: Vec<Surgery>,
}

/// Outcome of the closed-leaf search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CccReport {
    pub has_ccc: bool,
    /// Lifted angles of the closed leaves found in one period.
    pub closed_leaves: Vec<f64>,
    /// Set when a leaf was only tangentially fixed within tolerance.
    pub degenerate: bool,
}

impl FirstReturnSystem {
    pub fn new(base: ProjMatrix, surgeries: Vec<Surgery>) -> Result<Self> {
        let sys = FirstReturnSystem { base, surgeries };
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        if !classify_isometry(&self.base).is_hyperbolic() {
            return Err(Error::math("first-return base holonomy must be hyperbolic"));
        }
        for (i, s) in self.surgeries.iter().enumerate() {
            let class = classify_isometry(&s.correction);
            if !(class.is_parabolic() || class.is_hyperbolic()) {
                return Err(Error::math(format!(
                    "surgery {i}: correction must be parabolic or hyperbolic"
                )));
            }
            let raw = (eval_canonical(&s.correction, s.anchor) - s.anchor).rem_euclid(TAU);
            let moved = raw.min(TAU - raw);
            if moved.abs() > 1e-7 {
                return Err(Error::math(format!(
                    "surgery {i}: correction does not fix its anchor (moved by {moved:.3e})"
                )));
            }
            // the cut leaf sits over the quotiented interval, where the
            // base holonomy displaces forward
            let base_disp = eval_canonical(&self.base, s.anchor) - s.anchor;
            if base_disp < -1e-9 {
                return Err(Error::math(format!(
                    "surgery {i}: anchor lies outside the quotiented interval"
                )));
            }
            // sign convention: positive surgeries deviate the return map
            // into the past (backwards on the transversal)
            let probe = s.anchor + 0.1;
            let disp = eval_canonical(&s.correction, probe) - probe;
            if disp != 0.0 && (disp < 0.0) != s.positive {
                return Err(Error::math(format!(
                    "surgery {i}: claimed sign disagrees with the correction displacement"
                )));
            }
        }
        Ok(())
    }

    /// The composed lifted return map.
    pub fn return_map(&self, theta: f64) -> f64 {
        let mut x = theta;
        for s in &self.surgeries {
            x = eval_canonical(&s.correction, x);
        }
        eval_canonical(&self.base, x)
    }

    /// The unsurgered return map (the base holonomy alone).
    pub fn base_map(&self, theta: f64) -> f64 {
        eval_canonical(&self.base, theta)
    }
}

/// Parabolic correction of parameter `t` anchored at a lifted angle:
/// the conjugate of `x -> x + t` moving its fixed point to the anchor.
/// Negative `t` gives a future (negative) deviation.
pub fn parabolic_surgery(anchor: f64, t: f64) -> Surgery {
    // rotate the fixed point at infinity (angle 0) onto the anchor
    let rot = ProjMatrix::rotation(anchor);
    let correction = rot.mul(&ProjMatrix::parabolic(-t)).mul(&rot.inverse());
    Surgery { correction, anchor, positive: t >= 0.0 }
}

/// Scans one full period of the lifted line for fixed points of the
/// composed return map and reports them as closed leaves.
pub fn detect_ccc(sys: &FirstReturnSystem) -> Result<CccReport> {
    sys.validate()?;
    // anchor the search window at the repelling lifted fixed angle of
    // the base holonomy
    let lifted = LiftedIsometry::canonical(sys.base);
    let fixed = lifted.fixed_angles();
    if fixed.len() != 2 {
        return Err(Error::math("hyperbolic base must have two lifted fixed angles"));
    }
    let repelling = *fixed
        .iter()
        .find(|&&a| {
            let d = 1e-6;
            eval_canonical(&sys.base, a + d) - (a + d) > 0.0
        })
        .unwrap_or(&fixed[0]);
    let w0 = repelling - std::f64::consts::PI;
    let g = |theta: f64| sys.return_map(theta) - theta;

    let mut leaves: Vec<f64> = Vec::new();
    let mut degenerate = false;
    let n = BISECT_GRID;
    let mut prev_theta = w0;
    let mut prev_val = g(w0);
    for i in 1..=n {
        let theta = w0 + TAU * (i as f64) / (n as f64);
        let val = g(theta);
        if prev_val == 0.0 {
            leaves.push(prev_theta);
        } else if prev_val * val < 0.0 {
            // sign change: bisect
            let (mut lo, mut hi, mut flo) = (prev_theta, theta, prev_val);
            while hi - lo > EPS_BISECT {
                let mid = (lo + hi) / 2.0;
                let fm = g(mid);
                if fm == 0.0 {
                    lo = mid;
                    break;
                }
                if flo * fm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            leaves.push((lo + hi) / 2.0);
        } else if prev_val.abs() <= EPS_TANGENT && !near_any(&leaves, prev_theta) {
            // tangential closed leaf: conservative verdict
            leaves.push(prev_theta);
            degenerate = true;
        }
        prev_theta = theta;
        prev_val = val;
    }
    // deduplicate points closer than the refinement scale
    leaves.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    leaves.dedup_by(|a, b| (*a - *b).abs() < 1e-8);
    // drop a duplicate at the period wrap
    if leaves.len() >= 2 {
        let first = leaves[0];
        let last = *leaves.last().expect("nonempty");
        if (last - first - TAU).abs() < 1e-6 {
            leaves.pop();
        }
    }
    Ok(CccReport { has_ccc: !leaves.is_empty(), closed_leaves: leaves, degenerate })
}

fn near_any(xs: &[f64], x: f64) -> bool {
    xs.iter().any(|y| (y - x).abs() < 1e-6)
}

/// Sweeps the parameter of a single negative parabolic surgery at the
/// given anchor and brackets the threshold beyond which the annulus
/// becomes causal.  Returns the threshold parameter.
pub fn negative_parabolic_threshold(base: &ProjMatrix, anchor: f64, max_t: f64) -> Result<f64> {
    let causal_at = |t: f64| -> Result<bool> {
        let sys = FirstReturnSystem::new(*base, vec![parabolic_surgery(anchor, -t)])?;
        Ok(!detect_ccc(&sys)?.has_ccc)
    };
    let bare = FirstReturnSystem::new(*base, vec![])?;
    if !detect_ccc(&bare)?.has_ccc {
        return Err(Error::math("base annulus is already causal; no threshold"));
    }
    let mut hi = 1e-3;
    while !causal_at(hi)? {
        hi *= 2.0;
        if hi > max_t {
            return Err(Error::math(format!(
                "no causal transition found below parameter {max_t}"
            )));
        }
    }
    let mut lo = hi / 2.0;
    for _ in 0..60 {
        let mid = (lo + hi) / 2.0;
        if causal_at(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo + hi) / 2.0)
}
