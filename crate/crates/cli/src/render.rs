//! SVG scatter maps.

use std::collections::HashMap;
use std::fmt::Write;

use anyhow::{bail, Result};
use stabmap_core::mapping::{format_sig9, Embedding, FeatureTable};
use stabmap_core::ExtremeKind;

#[derive(Clone, Debug, PartialEq)]
pub enum Coloring {
    /// One palette color per culture.
    Culture,
    /// A color ramp over the named feature column.
    Feature(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderConfig {
    pub coloring: Coloring,
    /// Base-10 log scale for feature coloring. Zeros go to the lowest bin.
    pub log: bool,
    pub width: u32,
    pub height: u32,
    pub legend: bool,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            coloring: Coloring::Culture,
            log: false,
            width: 800,
            height: 800,
            legend: true,
        }
    }
}

const PALETTE: [&str; 24] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5",
    "#393b79", "#637939", "#8c6d31", "#843c39",
];

// Polynomial fit of the viridis colormap, one coefficient triple per power of t.
const VIRIDIS: [[f64; 3]; 7] = [
    [0.2777273272234177, 0.005407344544966578, 0.3340998053353061],
    [0.1050930431085774, 1.404613529898575, 1.384590162594685],
    [-0.3308618287255563, 0.214847559468213, 0.09509516302823659],
    [-4.634230498983486, -5.799100973351585, -19.33244095627987],
    [6.228269936347081, 14.17993336680509, 56.69055260068105],
    [4.776384997670288, -13.74514537774601, -65.35303263337234],
    [-5.435455855934631, 4.645852612178535, 26.3124352495832],
];

pub const RAMP_STEPS: usize = 256;

fn ramp_table() -> Vec<[u8; 3]> {
    (0..RAMP_STEPS)
        .map(|s| {
            let t = s as f64 / (RAMP_STEPS - 1) as f64;
            let mut c = [0u8; 3];
            for (k, out) in c.iter_mut().enumerate() {
                let v = VIRIDIS.iter().rev().fold(0.0, |acc, coef| acc * t + coef[k]);
                *out = (v.clamp(0.0, 1.0) * 255.0).round() as u8;
            }
            c
        })
        .collect()
}

/// Color of `t ∈ [0, 1]` on the 256-step ramp.
pub fn ramp(t: f64) -> String {
    let table = ramp_table();
    let s = (t.clamp(0.0, 1.0) * (RAMP_STEPS - 1) as f64).round() as usize;
    let [r, g, b] = table[s];
    format!("#{r:02x}{g:02x}{b:02x}")
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn anchor_name(id: &str) -> Option<&'static str> {
    ExtremeKind::ALL.iter().map(|k| k.name()).find(|n| *n == id)
}

enum Paint {
    Fill(String),
    Hollow,
}

/// Renders the map. `features` supplies cultures and feature columns and
/// must cover exactly the embedded ids; without it every point is grey and
/// only anchors are labeled.
pub fn render_svg(e: &Embedding, features: Option<&FeatureTable>, cfg: &RenderConfig) -> Result<String> {
    if e.ids.is_empty() {
        bail!("nothing to render: the embedding is empty");
    }
    let row_of: HashMap<&str, usize> = match features {
        Some(t) => {
            let m: HashMap<&str, usize> = t.ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
            if m.len() != e.ids.len() || e.ids.iter().any(|id| !m.contains_key(id.as_str())) {
                bail!("embedding and feature table cover different ids");
            }
            m
        }
        None => HashMap::new(),
    };
    let group = |id: &str| -> String {
        match (features, row_of.get(id)) {
            (Some(t), Some(&r)) => t.groups[r].clone(),
            _ => anchor_name(id).unwrap_or("").to_string(),
        }
    };
    let is_anchor = |id: &str| anchor_name(id).is_some() && group(id) == id;

    let mut legend: Vec<String> = Vec::new();
    let paints: Vec<Paint> = match &cfg.coloring {
        Coloring::Culture => {
            let mut groups: Vec<String> = Vec::new();
            for id in &e.ids {
                let g = group(id);
                if !is_anchor(id) && !groups.contains(&g) {
                    groups.push(g);
                }
            }
            let color = |g: &str| PALETTE[groups.iter().position(|x| x == g).unwrap_or(0) % PALETTE.len()];
            for g in &groups {
                legend.push(format!(
                    "<rect x=\"{{X}}\" y=\"{{Y}}\" width=\"10\" height=\"10\" fill=\"{}\"/><text x=\"{{TX}}\" y=\"{{TY}}\">{}</text>",
                    color(g),
                    esc(if g.is_empty() { "(none)" } else { g })
                ));
            }
            e.ids
                .iter()
                .map(|id| Paint::Fill(if features.is_some() { color(&group(id)).to_string() } else { "#888888".into() }))
                .collect()
        }
        Coloring::Feature(name) => {
            let Some(t) = features else {
                bail!("coloring by `{name}` needs a feature table");
            };
            let Some(col) = t.column(name) else {
                bail!("unknown feature column `{name}`");
            };
            let vals: Vec<Option<f64>> = e.ids.iter().map(|id| col[row_of[id.as_str()]]).collect();
            let present: Vec<f64> = vals.iter().flatten().copied().collect();
            let (lo, hi) = present
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
            let zeros = present.iter().filter(|&&v| v == 0.0).count();
            let scale: Box<dyn Fn(f64) -> f64> = if cfg.log {
                if present.iter().any(|&v| v < 0.0) {
                    bail!("log scale needs non-negative values in `{name}`");
                }
                let pos: Vec<f64> = present.iter().copied().filter(|&v| v > 0.0).map(f64::log10).collect();
                let (a, b) = pos.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
                Box::new(move |v: f64| {
                    if v <= 0.0 || !a.is_finite() || b == a {
                        // Zeros share the lowest bin; a single positive value sits mid-ramp.
                        if v <= 0.0 || !a.is_finite() { 0.0 } else { 0.5 }
                    } else {
                        (v.log10() - a) / (b - a)
                    }
                })
            } else {
                Box::new(move |v: f64| if hi > lo { (v - lo) / (hi - lo) } else { 0.5 })
            };
            if !present.is_empty() {
                legend.push(format!("<text x=\"{{X}}\" y=\"{{Y}}\">{}{}</text>", esc(name), if cfg.log { " (log10)" } else { "" }));
                legend.push("<rect x=\"{X}\" y=\"{Y}\" width=\"120\" height=\"12\" fill=\"url(#ramp)\"/>".into());
                legend.push(format!("<text x=\"{{X}}\" y=\"{{Y}}\">min {}</text>", format_sig9(lo)));
                legend.push(format!("<text x=\"{{X}}\" y=\"{{Y}}\">max {}</text>", format_sig9(hi)));
                if cfg.log && zeros > 0 {
                    legend.push(format!("<text x=\"{{X}}\" y=\"{{Y}}\">{zeros} zero values drawn in the lowest bin</text>"));
                }
            }
            let absent = vals.iter().filter(|v| v.is_none()).count();
            if absent > 0 {
                legend.push(format!(
                    "<circle cx=\"{{CX}}\" cy=\"{{CY}}\" r=\"4\" fill=\"none\" stroke=\"#555555\"/><text x=\"{{TX}}\" y=\"{{TY}}\">no value ({absent})</text>"
                ));
            }
            vals.iter()
                .map(|v| match v {
                    Some(v) => Paint::Fill(ramp(scale(*v))),
                    None => Paint::Hollow,
                })
                .collect()
        }
    };

    let (w, h) = (cfg.width as f64, cfg.height as f64);
    let legend_w = if cfg.legend { 260.0 } else { 0.0 };
    let margin = 30.0;
    let (x0, x1) = e.coords.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p[0]), b.max(p[0])));
    let (y0, y1) = e.coords.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p[1]), b.max(p[1])));
    let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let side = (w - 2.0 * margin).min(h - 2.0 * margin);
    let px = |x: f64| margin + (x - x0) / span * side;
    // SVG's y axis points down.
    let py = |y: f64| h - margin - (y - y0) / span * side;

    let mut s = String::new();
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"11\">",
        w + legend_w,
        h,
        w + legend_w,
        h
    )?;
    if let Coloring::Feature(_) = cfg.coloring {
        s.push_str("<defs><linearGradient id=\"ramp\">");
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            write!(s, "<stop offset=\"{t:.1}\" stop-color=\"{}\"/>", ramp(t))?;
        }
        s.push_str("</linearGradient></defs>\n");
    }
    writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>")?;

    // Ordinary points first so anchors stay visible on top.
    let mut anchors = Vec::new();
    for (i, id) in e.ids.iter().enumerate() {
        if is_anchor(id) {
            anchors.push(i);
            continue;
        }
        let (cx, cy) = (px(e.coords[i][0]), py(e.coords[i][1]));
        match &paints[i] {
            Paint::Fill(c) => writeln!(
                s,
                "<circle data-id=\"{}\" cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"4\" fill=\"{c}\" stroke=\"#333333\" stroke-width=\"0.3\"/>",
                esc(id)
            )?,
            Paint::Hollow => writeln!(
                s,
                "<circle data-id=\"{}\" cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"4\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1\"/>",
                esc(id)
            )?,
        }
    }
    for i in anchors {
        let (cx, cy) = (px(e.coords[i][0]), py(e.coords[i][1]));
        let fill = match &paints[i] {
            Paint::Fill(c) if matches!(cfg.coloring, Coloring::Feature(_)) => c.clone(),
            Paint::Hollow => "none".into(),
            _ => "black".into(),
        };
        writeln!(
            s,
            "<rect data-id=\"{id}\" x=\"{:.2}\" y=\"{:.2}\" width=\"12\" height=\"12\" fill=\"{fill}\" stroke=\"black\" stroke-width=\"1.5\"/><text x=\"{:.2}\" y=\"{:.2}\" font-weight=\"bold\">{id}</text>",
            cx - 6.0,
            cy - 6.0,
            cx + 9.0,
            cy - 8.0,
            id = esc(&e.ids[i])
        )?;
    }

    if cfg.legend {
        let lx = w + 10.0;
        let mut y = margin;
        for item in &legend {
            let line = item
                .replace("{X}", &format!("{lx:.0}"))
                .replace("{Y}", &format!("{:.0}", if item.starts_with("<text") { y + 10.0 } else { y }))
                .replace("{TX}", &format!("{:.0}", lx + 16.0))
                .replace("{TY}", &format!("{:.0}", y + 10.0))
                .replace("{CX}", &format!("{:.0}", lx + 5.0))
                .replace("{CY}", &format!("{:.0}", y + 5.0));
            s.push_str(&line);
            s.push('\n');
            y += 16.0;
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}
