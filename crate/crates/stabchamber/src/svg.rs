//! Static SVG rendering of slice region maps.
//!
//! One filled square per grid cell, wall traces overlaid as line segments,
//! and a legend mapping fills to target surfaces. Coordinates are printed
//! with six decimals so output bytes are reproducible.

use crate::chambers::{Cell, SliceMap};
use crate::rat::{self, Rat};
use crate::stability::{SurfaceDescriptor, WallTrace};

const PLOT_SIZE: f64 = 640.0;
const LEGEND_ROW: f64 = 22.0;

const PALETTE: [&str; 12] = [
    "#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2", "#eeca3b", "#b279a2", "#ff9da6",
    "#9d755d", "#6b4c9a", "#8ca252", "#bab0ac",
];

fn fmt(x: f64) -> String {
    format!("{x:.6}")
}

pub fn chamber_color(index: usize) -> &'static str {
    PALETTE[index % PALETTE.len()]
}

/// Map plane coordinates (a, b) in [-w, w]^2 to pixel coordinates.
fn to_pixel(a: &Rat, b: &Rat, w: &Rat) -> (f64, f64) {
    let wf = rat::to_f64(w);
    let x = (rat::to_f64(a) + wf) / (2.0 * wf) * PLOT_SIZE;
    let y = (wf - rat::to_f64(b)) / (2.0 * wf) * PLOT_SIZE;
    (x, y)
}

pub fn render_slice(
    map: &SliceMap,
    traces: &[WallTrace],
    legend_surfaces: &[SurfaceDescriptor],
) -> String {
    let k = map.grid;
    let cell_px = PLOT_SIZE / k as f64;
    let legend_height = LEGEND_ROW * (legend_surfaces.len() as f64 + 3.0);
    let total_height = PLOT_SIZE + legend_height;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" \
         viewBox=\"0 0 {} {}\">\n",
        fmt(PLOT_SIZE),
        fmt(total_height),
        fmt(PLOT_SIZE),
        fmt(total_height)
    ));
    out.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
        fmt(PLOT_SIZE),
        fmt(total_height)
    ));
    for (row, line) in map.cells.iter().enumerate() {
        for (col, cell) in line.iter().enumerate() {
            let fill = match cell {
                Cell::Chamber(i) => chamber_color(*i),
                Cell::Wall => "#333333",
                Cell::Outside => "#ffffff",
                Cell::Overlap => "#ff00ff",
            };
            if *cell == Cell::Outside {
                continue;
            }
            out.push_str(&format!(
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
                fmt(col as f64 * cell_px),
                fmt(row as f64 * cell_px),
                fmt(cell_px),
                fmt(cell_px),
                fill
            ));
        }
    }
    for trace in traces {
        if let Some([p1, p2]) = &trace.segment {
            let (x1, y1) = to_pixel(&p1.0, &p1.1, &map.window);
            let (x2, y2) = to_pixel(&p2.0, &p2.1, &map.window);
            out.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#111111\" \
                 stroke-width=\"1.500000\"/>\n",
                fmt(x1),
                fmt(y1),
                fmt(x2),
                fmt(y2)
            ));
        }
    }
    out.push_str(&format!(
        "<text x=\"8\" y=\"{}\" font-family=\"monospace\" font-size=\"13\">window: |a|,|b| &lt;= {}, grid {}x{}</text>\n",
        fmt(PLOT_SIZE + LEGEND_ROW),
        rat::display(&map.window),
        k,
        k
    ));
    for (i, (s, surface)) in map.legend.iter().zip(legend_surfaces).enumerate() {
        let y = PLOT_SIZE + LEGEND_ROW * (i as f64 + 2.0);
        out.push_str(&format!(
            "<rect x=\"8\" y=\"{}\" width=\"14\" height=\"14\" fill=\"{}\"/>\n",
            fmt(y),
            chamber_color(i)
        ));
        out.push_str(&format!(
            "<text x=\"28\" y=\"{}\" font-family=\"monospace\" font-size=\"13\">S = {} : moduli surface {}</text>\n",
            fmt(y + 12.0),
            s,
            surface.label
        ));
    }
    let y = PLOT_SIZE + LEGEND_ROW * (map.legend.len() as f64 + 2.0);
    out.push_str(&format!(
        "<rect x=\"8\" y=\"{}\" width=\"14\" height=\"14\" fill=\"#333333\"/>\n",
        fmt(y)
    ));
    out.push_str(&format!(
        "<text x=\"28\" y=\"{}\" font-family=\"monospace\" font-size=\"13\">wall / boundary samples</text>\n",
        fmt(y + 12.0)
    ));
    out.push_str("</svg>\n");
    out
}
