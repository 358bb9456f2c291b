//! Deterministic SVG figures: the disk-pair-plus-annulus layout of a
//! surface decomposition, and cobweb plots of first-return maps.
//!
//! Output is byte-stable for a fixed input: fixed viewport, elements
//! emitted in sorted order, all coordinates formatted with four
//! decimals.

use crate::error::Result;
use crate::link::classify_singularity;
use crate::retmap::FirstReturnSystem;
use crate::surface::{HsSurface, RegionKind};
use crate::isometry::TAU;
use crate::link::TimeSide;
use std::fmt::Write;

const W: f64 = 800.0;
const H: f64 = 600.0;

fn fmt(x: f64) -> String {
    format!("{x:.4}")
}

fn header(out: &mut String) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\" font-family=\"monospace\" font-size=\"12\">"
    );
    let _ = writeln!(out, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
}

/// Disk-pair-plus-annulus figure of a surface decomposition: the two
/// hyperbolic regions as disks, the de Sitter band between them,
/// photon circles, and labeled singular points.
pub fn surface_figure(s: &HsSurface) -> Result<String> {
    s.validate()?;
    let mut out = String::new();
    header(&mut out);

    let cx = W / 2.0;
    let future_cy = 140.0;
    let past_cy = H - 140.0;
    let disk_r = 95.0;

    let future_regions: Vec<usize> = (0..s.regions.len())
        .filter(|&i| s.regions[i].kind == RegionKind::Hyperbolic(TimeSide::Future))
        .collect();
    let past_regions: Vec<usize> = (0..s.regions.len())
        .filter(|&i| s.regions[i].kind == RegionKind::Hyperbolic(TimeSide::Past))
        .collect();
    let ds_regions: Vec<usize> = (0..s.regions.len())
        .filter(|&i| s.regions[i].kind == RegionKind::DeSitter)
        .collect();

    // de Sitter band
    if !ds_regions.is_empty() {
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#f3e6c8\" \
             stroke=\"none\"/>",
            fmt(cx - 140.0),
            fmt(future_cy + disk_r),
            fmt(280.0),
            fmt(past_cy - future_cy - 2.0 * disk_r),
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" fill=\"#7a5c14\">de Sitter regions: {}</text>",
            fmt(cx + 160.0),
            fmt((future_cy + past_cy) / 2.0),
            ds_regions.len()
        );
    }
    // hyperbolic disks
    for (present, cy, label) in [
        (!future_regions.is_empty(), future_cy, "future hyperbolic"),
        (!past_regions.is_empty(), past_cy, "past hyperbolic"),
    ] {
        if present {
            let _ = writeln!(
                out,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#dbe9f6\" stroke=\"#1f4e79\" \
                 stroke-width=\"2\"/>",
                fmt(cx),
                fmt(cy),
                fmt(disk_r)
            );
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" fill=\"#1f4e79\">{}</text>",
                fmt(cx + disk_r + 18.0),
                fmt(cy),
                label
            );
        }
    }
    // photon circles
    for c in 0..s.photon_circles.len() {
        let y = future_cy + disk_r + 10.0 + 24.0 * c as f64;
        let _ = writeln!(
            out,
            "<ellipse cx=\"{}\" cy=\"{}\" rx=\"{}\" ry=\"8\" fill=\"none\" \
             stroke=\"#b8860b\" stroke-dasharray=\"6 3\" stroke-width=\"2\"/>",
            fmt(cx),
            fmt(y),
            fmt(120.0)
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" fill=\"#b8860b\">photon circle {}</text>",
            fmt(cx - 260.0),
            fmt(y + 4.0),
            c
        );
    }
    // singular points, sorted by index
    for (i, sing) in s.singularities.iter().enumerate() {
        let kind = classify_singularity(&sing.link)?;
        let angle = TAU * (i as f64 + 0.5) / s.singularities.len().max(1) as f64;
        let (cy, color) = match sing.link.base_class {
            crate::form::HsRegion::HypPlus => (future_cy, "#c0392b"),
            crate::form::HsRegion::HypMinus => (past_cy, "#c0392b"),
            crate::form::HsRegion::DeSitter => ((future_cy + past_cy) / 2.0, "#7d3c98"),
            _ => (future_cy + disk_r + 10.0, "#b8860b"),
        };
        let px = cx + 55.0 * angle.cos();
        let py = cy + 40.0 * angle.sin();
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{}\"/>",
            fmt(px),
            fmt(py),
            color
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" fill=\"{}\">{:?}</text>",
            fmt(px + 8.0),
            fmt(py + 4.0),
            color,
            kind
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Cobweb plot of a first-return map over one period, with the
/// diagonal and the located closed leaves.
pub fn cobweb_figure(sys: &FirstReturnSystem) -> Result<String> {
    sys.validate()?;
    let rep = crate::retmap::detect_ccc(sys)?;
    let mut out = String::new();
    header(&mut out);

    let margin = 60.0;
    let span = W.min(H) - 2.0 * margin;
    let x0 = 0.0;
    let x1 = TAU;
    let to_px = |x: f64| margin + (x - x0) / (x1 - x0) * span;
    let to_py = |y: f64| H - margin - (y - x0) / (x1 - x0) * span;

    // frame and diagonal
    let _ = writeln!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>",
        fmt(margin),
        fmt(H - margin - span),
        fmt(span),
        fmt(span)
    );
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#aaa\"/>",
        fmt(to_px(x0)),
        fmt(to_py(x0)),
        fmt(to_px(x1)),
        fmt(to_py(x1))
    );

    // graph of the return displacement over one period
    let n = 256;
    let mut path = String::from("M");
    for i in 0..=n {
        let x = x0 + (x1 - x0) * i as f64 / n as f64;
        let y = sys.return_map(x) - x + x; // lifted value
        let yy = (y - x).rem_euclid(TAU) + x; // display representative
        let _ = write!(path, " {} {}", fmt(to_px(x)), fmt(to_py(yy.min(x1).max(x0))));
    }
    let _ = writeln!(
        out,
        "<path d=\"{path}\" fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"2\"/>"
    );

    // cobweb iterations from the period midpoint
    let mut x = x0 + (x1 - x0) * 0.35;
    for _ in 0..24 {
        let y = x + (sys.return_map(x) - x);
        let yd = (y - x0).rem_euclid(x1 - x0) + x0;
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#c0392b\" \
             stroke-width=\"1\"/>",
            fmt(to_px((x - x0).rem_euclid(x1 - x0) + x0)),
            fmt(to_py((x - x0).rem_euclid(x1 - x0) + x0)),
            fmt(to_px((x - x0).rem_euclid(x1 - x0) + x0)),
            fmt(to_py(yd)),
        );
        x = y;
    }

    // closed leaves
    for leaf in &rep.closed_leaves {
        let xx = (leaf - x0).rem_euclid(x1 - x0) + x0;
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"#b8860b\"/>",
            fmt(to_px(xx)),
            fmt(to_py(xx))
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\">closed leaves: {}</text>",
        fmt(margin),
        fmt(H - margin + 30.0),
        rep.closed_leaves.len()
    );
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::ProjMatrix;

    #[test]
    fn figures_are_deterministic() {
        let s = HsSurface::regular();
        let a = surface_figure(&s).unwrap();
        let b = surface_figure(&s).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("photon circle"));

        let sys = FirstReturnSystem::new(ProjMatrix::boost(2.0), vec![]).unwrap();
        let a = cobweb_figure(&sys).unwrap();
        let b = cobweb_figure(&sys).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("closed leaves: 2"));
    }
}
