//! Four-panel static SVG: half-plane, disk, and two views of the solid torus.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::export::Row;

const PANEL: f64 = 400.0;
const MARGIN: f64 = 20.0;
/// Solid torus `(u, v, theta) -> ((R + rho u) cos theta, (R + rho u) sin theta, rho v)`.
const TORUS_R: f64 = 2.0;
const TORUS_RHO: f64 = 1.0;

fn polyline(out: &mut String, pts: &[(f64, f64)], stroke: &str) {
    out.push_str("<polyline fill=\"none\" stroke=\"");
    out.push_str(stroke);
    out.push_str("\" stroke-width=\"1\" points=\"");
    for (i, (x, y)) in pts.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{x:.6},{y:.6}");
    }
    out.push_str("\"/>\n");
}

/// Affine map of `pts` into panel `index`, preserving aspect ratio; `flip` puts +y up.
fn fit(pts: &[(f64, f64)], bounds: (f64, f64, f64, f64), index: usize) -> Vec<(f64, f64)> {
    let (x0, x1, y0, y1) = bounds;
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = (PANEL - 2.0 * MARGIN) / span;
    let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let left = index as f64 * PANEL + 0.5 * PANEL;
    pts.iter().map(|&(x, y)| (left + (x - cx) * scale, 0.5 * PANEL - (y - cy) * scale)).collect()
}

fn bounds(pts: &[(f64, f64)]) -> (f64, f64, f64, f64) {
    pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY), |b, &(x, y)| {
        (b.0.min(x), b.1.max(x), b.2.min(y), b.3.max(y))
    })
}

fn torus_point(r: &Row) -> [f64; 3] {
    let rad = TORUS_R + TORUS_RHO * r.disk_u;
    let (s, c) = r.theta_mod2pi.sin_cos();
    [rad * c, rad * s, TORUS_RHO * r.disk_v]
}

/// Orthographic view after rotating by `yaw` about z and tilting by `pitch` about x.
fn axonometric(p: [f64; 3], yaw: f64, pitch: f64) -> (f64, f64) {
    let (sy, cy) = yaw.sin_cos();
    let (sp, cp) = pitch.sin_cos();
    let x = cy * p[0] - sy * p[1];
    let y = sy * p[0] + cy * p[1];
    (x, cp * p[2] + sp * y)
}

pub fn render(title: &str, rows: &[Row]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.6}\" height=\"{:.6}\" viewBox=\"0 0 {:.6} {:.6}\">",
        4.0 * PANEL,
        PANEL + 30.0,
        4.0 * PANEL,
        PANEL + 30.0
    );
    let _ = writeln!(out, "<title>{title}</title>");
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    let half: Vec<(f64, f64)> = rows.iter().map(|r| (r.x, r.y)).collect();
    let (x0, x1, _, y1) = bounds(&half);
    // include the boundary line y = 0
    let hb = (x0, x1, 0.0, y1);
    let axis = fit(&[(x0, 0.0), (x1, 0.0)], hb, 0);
    polyline(&mut out, &axis, "#999999");
    polyline(&mut out, &fit(&half, hb, 0), "#1f4e9c");

    let disk: Vec<(f64, f64)> = rows.iter().map(|r| (r.disk_u, r.disk_v)).collect();
    let circle: Vec<(f64, f64)> =
        (0..=256).map(|i| (2.0 * PI * i as f64 / 256.0).sin_cos()).map(|(s, c)| (c, s)).collect();
    let db = (-1.0, 1.0, -1.0, 1.0);
    polyline(&mut out, &fit(&circle, db, 1), "#999999");
    polyline(&mut out, &fit(&disk, db, 1), "#1f4e9c");

    let views = [(PI / 6.0, PI / 3.0), (-PI / 5.0, PI / 9.0)];
    let extent = TORUS_R + TORUS_RHO;
    for (i, (yaw, pitch)) in views.into_iter().enumerate() {
        let tb = (-extent, extent, -extent, extent);
        let core: Vec<(f64, f64)> = (0..=256)
            .map(|j| {
                let t = 2.0 * PI * j as f64 / 256.0;
                axonometric([TORUS_R * t.cos(), TORUS_R * t.sin(), 0.0], yaw, pitch)
            })
            .collect();
        polyline(&mut out, &fit(&core, tb, 2 + i), "#cccccc");
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| axonometric(torus_point(r), yaw, pitch)).collect();
        polyline(&mut out, &fit(&pts, tb, 2 + i), "#b03a2e");
    }
    for (i, label) in ["half-plane", "disk", "solid torus A", "solid torus B"].iter().enumerate() {
        let _ = writeln!(
            out,
            "<text x=\"{:.6}\" y=\"{:.6}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{label}</text>",
            (i as f64 + 0.5) * PANEL,
            PANEL + 20.0
        );
    }
    out.push_str("</svg>\n");
    out
}
