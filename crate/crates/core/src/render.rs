//! Static mesh diagrams: one horizontal line per mode (mode 0 on top), one
//! column per layer, each gate a box spanning its two modes and labeled with
//! its product order.

use std::fmt::Write;

use crate::error::{MeshError, Result};
use crate::refine::{Decomposition, Gate};

/// `grid[layer - 1][mode]` holds the gate whose upper mode is `mode`.
fn layer_grid(dec: &Decomposition) -> Result<Vec<Vec<Option<Gate>>>> {
    let layers = dec.layer_count();
    let mut grid = vec![vec![None; dec.n]; layers];
    let mut busy = vec![vec![false; dec.n]; layers];
    for g in &dec.gates {
        if g.layer == 0 || dec.n < 2 || g.mode > dec.n - 2 {
            return Err(MeshError::Inconsistent(format!(
                "gate {} has layer {} on mode {}",
                g.order, g.layer, g.mode
            )));
        }
        let col = g.layer - 1;
        if busy[col][g.mode] || busy[col][g.mode + 1] {
            return Err(MeshError::Inconsistent(format!(
                "gate {} overlaps another gate in layer {}",
                g.order, g.layer
            )));
        }
        busy[col][g.mode] = true;
        busy[col][g.mode + 1] = true;
        grid[col][g.mode] = Some(*g);
    }
    Ok(grid)
}

fn digits(x: usize) -> usize {
    x.max(1).to_string().len()
}

pub fn render_ascii(dec: &Decomposition) -> Result<String> {
    let grid = layer_grid(dec)?;
    let label_w = digits(dec.n.saturating_sub(1));
    let order_w = digits(dec.gates.len());
    let idle = "-".repeat(order_w + 4);
    let mut out = String::new();
    for m in 0..dec.n {
        let _ = write!(out, "{m:>label_w$} ");
        for column in &grid {
            if let Some(g) = column[m] {
                let _ = write!(out, "-[{:>order_w$}]-", g.order);
            } else if m > 0 && column[m - 1].is_some() {
                let _ = write!(out, "-[{}]-", "_".repeat(order_w));
            } else {
                out.push_str(&idle);
            }
        }
        out.push_str("-\n");
    }
    Ok(out)
}

const MARGIN: usize = 40;
const COL_W: usize = 60;
const ROW_H: usize = 40;

pub fn render_svg(dec: &Decomposition) -> Result<String> {
    let grid = layer_grid(dec)?;
    let width = 2 * MARGIN + grid.len().max(1) * COL_W;
    let height = 2 * MARGIN + dec.n.saturating_sub(1) * ROW_H;
    let y = |m: usize| MARGIN + m * ROW_H;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r#"<g stroke="black" stroke-width="1.5">"#);
    for m in 0..dec.n {
        let _ = writeln!(
            out,
            r#"<line x1="{x1}" y1="{y}" x2="{x2}" y2="{y}"/>"#,
            x1 = MARGIN / 2,
            x2 = width - MARGIN / 2,
            y = y(m)
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g font-family="monospace" font-size="12" text-anchor="middle">"#);
    for m in 0..dec.n {
        let _ = writeln!(out, r#"<text x="{}" y="{}">{m}</text>"#, MARGIN / 4, y(m) + 4);
    }
    for (col, column) in grid.iter().enumerate() {
        for g in column.iter().flatten() {
            let x = MARGIN + col * COL_W + 10;
            let top = y(g.mode) - 10;
            let _ = writeln!(
                out,
                r#"<rect x="{x}" y="{top}" width="{w}" height="{h}" fill="white" stroke="black"/>"#,
                w = COL_W - 20,
                h = ROW_H + 20
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}">{}</text>"#,
                x + (COL_W - 20) / 2,
                y(g.mode) + ROW_H / 2 + 4,
                g.order
            );
        }
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}
