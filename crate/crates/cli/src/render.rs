//! SVG figure: amoeba raster as a translucent fill, the spine as black
//! segments with arrowheads on its rays, and the Newton polygon inset in a corner.

use std::fmt::Write as _;
use std::path::Path;

use harnack::amoeba::{self, AmoebaRaster, Window};
use harnack::lattice::convex_hull;
use harnack::poly::LaurentPolynomial;
use harnack::tropical::{corner_locus, heights_from_f64, PlaneTropicalCurve};
use harnack::LatticePoint;

use crate::commands::{read_json, window_for, write_text, CliError, Out};
use crate::Raster;

const SIZE: f64 = 800.0;
const INSET: f64 = 170.0;
const MARGIN: f64 = 12.0;

struct Frame {
    w: Window,
}

impl Frame {
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let w = &self.w;
        ((x - w.x0) / (w.x1 - w.x0) * SIZE, (w.y1 - y) / (w.y1 - w.y0) * SIZE)
    }
}

fn raster_layer(svg: &mut String, r: &AmoebaRaster) {
    let (cw, ch) = (SIZE / r.res as f64, SIZE / r.res as f64);
    svg.push_str("<g fill=\"#2b6cd4\" fill-opacity=\"0.45\" shape-rendering=\"crispEdges\">\n");
    for j in 0..r.res {
        let mut i = 0;
        while i < r.res {
            if !r.get(i, j) {
                i += 1;
                continue;
            }
            let start = i;
            while i < r.res && r.get(i, j) {
                i += 1;
            }
            let y = SIZE - (j + 1) as f64 * ch;
            let _ = writeln!(
                svg,
                "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\"/>",
                start as f64 * cw,
                y,
                (i - start) as f64 * cw,
                ch
            );
        }
    }
    svg.push_str("</g>\n");
}

/// Parameter where the ray `p + s·d` leaves the window.
fn exit_parameter(w: &Window, p: (f64, f64), d: (f64, f64)) -> f64 {
    let mut s = f64::INFINITY;
    for (pc, dc, lo, hi) in [(p.0, d.0, w.x0, w.x1), (p.1, d.1, w.y0, w.y1)] {
        if dc > 0.0 {
            s = s.min((hi - pc) / dc);
        } else if dc < 0.0 {
            s = s.min((lo - pc) / dc);
        }
    }
    s.max(0.0)
}

fn spine_layer(svg: &mut String, fr: &Frame, c: &PlaneTropicalCurve) {
    svg.push_str("<g stroke=\"#000\" stroke-width=\"2.2\" fill=\"none\" stroke-linecap=\"round\">\n");
    for e in &c.edges {
        let (a, b) = (c.vertex_f64(e.a), c.vertex_f64(e.b));
        let (p, q) = (fr.map(a.0, a.1), fr.map(b.0, b.1));
        let _ = writeln!(svg, "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\"/>", p.0, p.1, q.0, q.1);
    }
    for r in &c.rays {
        let v = c.vertex_f64(r.v);
        let d = (r.dir.x as f64, r.dir.y as f64);
        let s = exit_parameter(&fr.w, v, d);
        let (p, q) = (fr.map(v.0, v.1), fr.map(v.0 + s * d.0, v.1 + s * d.1));
        let _ = writeln!(
            svg,
            "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" marker-end=\"url(#arrow)\"/>",
            p.0, p.1, q.0, q.1
        );
    }
    svg.push_str("</g>\n");
}

fn inset_layer(svg: &mut String, f: &LaurentPolynomial, c: Option<&PlaneTropicalCurve>) -> Result<(), CliError> {
    let poly = f.newton_polygon()?;
    let (lo, hi) = poly.bounding_box();
    let span = ((hi.x - lo.x).max(hi.y - lo.y)).max(1) as f64;
    let unit = (INSET - 2.0 * MARGIN) / span;
    let (ox, oy) = (SIZE - INSET - MARGIN, MARGIN);
    let map = |p: LatticePoint| {
        (ox + MARGIN + (p.x - lo.x) as f64 * unit, oy + INSET - MARGIN - (p.y - lo.y) as f64 * unit)
    };
    let _ = writeln!(
        svg,
        "<rect x=\"{ox:.3}\" y=\"{oy:.3}\" width=\"{INSET:.3}\" height=\"{INSET:.3}\" fill=\"#fff\" stroke=\"#444\"/>"
    );
    if let Some(c) = c {
        svg.push_str("<g stroke=\"#999\" stroke-width=\"1\" fill=\"none\">\n");
        for cell in &c.subdivision.facets {
            let pts: Vec<LatticePoint> = cell.iter().map(|&i| c.subdivision.points[i]).collect();
            let path: Vec<String> = convex_hull(&pts)
                .into_iter()
                .map(|p| {
                    let (x, y) = map(p);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let _ = writeln!(svg, "<polygon points=\"{}\"/>", path.join(" "));
        }
        svg.push_str("</g>\n");
    }
    let outline: Vec<String> = poly
        .vertices()
        .iter()
        .map(|&p| {
            let (x, y) = map(p);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    let _ = writeln!(svg, "<polygon points=\"{}\" fill=\"none\" stroke=\"#000\" stroke-width=\"1.5\"/>", outline.join(" "));
    svg.push_str("<g fill=\"#000\">\n");
    for p in poly.lattice_points() {
        let (x, y) = map(p);
        let _ = writeln!(svg, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"2.5\"/>");
    }
    svg.push_str("</g>\n");
    Ok(())
}

/// Grows the shorter side so that pixels are square and slopes read true.
fn square(w: Window) -> Result<Window, CliError> {
    let (cx, cy) = ((w.x0 + w.x1) / 2.0, (w.y0 + w.y1) / 2.0);
    let h = (w.x1 - w.x0).max(w.y1 - w.y0) / 2.0;
    Ok(Window::new(cx - h, cx + h, cy - h, cy + h)?)
}

pub fn render(path: &Path, with_spine: bool, out: Option<&Path>, r: &Raster) -> Out {
    let f = LaurentPolynomial::from_json(&read_json(path)?)?;
    let w = window_for(&f, r)?;
    let w = if r.window.is_some() { w } else { square(w)? };
    let ras = amoeba::raster(&f, w, r.res, r.phases)?;
    let curve = if with_spine {
        let sh = amoeba::spine_heights_from_raster(&f, &ras)?;
        Some(corner_locus(&heights_from_f64(&sh.heights)?)?)
    } else {
        None
    };
    let fr = Frame { w };
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    );
    svg.push_str(
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"7\" markerHeight=\"7\" \
         orient=\"auto-start-reverse\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#000\"/></marker></defs>\n",
    );
    let _ = writeln!(svg, "<rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"#fff\"/>");
    let _ = writeln!(
        svg,
        "<desc>window x {:.6} {:.6} y {:.6} {:.6}; res {}; phases {}</desc>",
        w.x0, w.x1, w.y0, w.y1, r.res, r.phases
    );
    raster_layer(&mut svg, &ras);
    if let Some(c) = &curve {
        spine_layer(&mut svg, &fr, c);
    }
    inset_layer(&mut svg, &f, curve.as_ref())?;
    svg.push_str("</svg>\n");
    write_text(out, &svg)?;
    Ok(true)
}
