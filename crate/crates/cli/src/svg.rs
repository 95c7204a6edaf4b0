//! Tiny dependency-free SVG renderer: line charts and a rectangular heatmap,
//! just enough to plot the result figures.

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 36.0;
const MARGIN_TOP: f64 = 46.0;
const MARGIN_BOTTOM: f64 = 62.0;

const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

#[derive(Clone, Copy, Debug)]
pub enum Stroke {
    Solid,
    Dashed,
}

impl Stroke {
    fn dash(self) -> Option<&'static str> {
        match self {
            Stroke::Solid => None,
            Stroke::Dashed => Some("9 6"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Series {
    pub label: String,
    pub stroke: Stroke,
    pub points: Vec<(f64, f64)>,
}

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN_LEFT + (v - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM
            - (v - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" { "0".to_string() } else { s.to_string() }
}

fn push_header(out: &mut String, title: &str) {
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        title
    ));
}

fn push_axes(out: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let xv = frame.x_min + t * (frame.x_max - frame.x_min);
        let yv = frame.y_min + t * (frame.y_max - frame.y_min);
        let xp = frame.x(xv);
        let yp = frame.y(yv);
        out.push_str(&format!(
            "<line x1=\"{xp:.1}\" y1=\"{:.1}\" x2=\"{xp:.1}\" y2=\"{:.1}\" stroke=\"#dddddd\"/>\n",
            frame.y(frame.y_min),
            frame.y(frame.y_max)
        ));
        out.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{yp:.1}\" x2=\"{:.1}\" y2=\"{yp:.1}\" stroke=\"#dddddd\"/>\n",
            frame.x(frame.x_min),
            frame.x(frame.x_max)
        ));
        out.push_str(&format!(
            "<text x=\"{xp:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            HEIGHT - MARGIN_BOTTOM + 20.0,
            tick_label(xv)
        ));
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
            MARGIN_LEFT - 8.0,
            yp + 4.0,
            tick_label(yv)
        ));
    }
    out.push_str(&format!(
        "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"#333333\"/>\n",
        MARGIN_LEFT,
        MARGIN_TOP,
        WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
        HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    ));
    out.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_LEFT + (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) / 2.0,
        HEIGHT - 14.0,
        x_label
    ));
    out.push_str(&format!(
        "<text x=\"20\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\" \
         transform=\"rotate(-90 20 {:.1})\">{}</text>\n",
        (MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0,
        (MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0,
        y_label
    ));
}

/// Render one or more (x, y) series as polylines with a legend.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    let pad = ((y_max - y_min) * 0.06).max(1e-6);
    let frame = Frame { x_min, x_max, y_min: y_min - pad, y_max: y_max + pad };

    let mut out = String::new();
    push_header(&mut out, title);
    push_axes(&mut out, &frame, x_label, y_label);
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let dash = s
            .stroke
            .dash()
            .map(|d| format!(" stroke-dasharray=\"{d}\""))
            .unwrap_or_default();
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", frame.x(x), frame.y(y)))
            .collect();
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"{dash} points=\"{}\"/>\n",
            pts.join(" ")
        ));
        // Legend entry, top-right inside the plot frame.
        let ly = MARGIN_TOP + 18.0 + 20.0 * k as f64;
        let lx = WIDTH - MARGIN_RIGHT - 190.0;
        out.push_str(&format!(
            "<line x1=\"{lx:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" \
             stroke=\"{color}\" stroke-width=\"2\"{dash}/>\n",
            lx + 30.0
        ));
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\">{}</text>\n",
            lx + 38.0,
            ly + 4.0,
            s.label
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn ramp(t: f64) -> String {
    // Dark blue -> magenta -> yellow, clamped.
    let t = t.clamp(0.0, 1.0);
    let stops = [(13.0, 8.0, 135.0), (203.0, 71.0, 119.0), (240.0, 249.0, 33.0)];
    let (a, b, u) = if t < 0.5 { (stops[0], stops[1], t * 2.0) } else { (stops[1], stops[2], t * 2.0 - 1.0) };
    let mix = |p: f64, q: f64| (p + (q - p) * u).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

/// Render a value grid as colored cells; `values[i][j]` belongs to
/// (`xs[i]`, `ys[j]`). Cell edges land on the midpoints between samples.
pub fn heatmap(
    title: &str,
    x_label: &str,
    y_label: &str,
    xs: &[f64],
    ys: &[f64],
    values: &[Vec<f64>],
) -> String {
    let x_min = xs[0];
    let x_max = *xs.last().unwrap();
    let y_min = ys[0];
    let y_max = *ys.last().unwrap();
    let frame = Frame { x_min, x_max, y_min, y_max };
    let mut v_min = f64::INFINITY;
    let mut v_max = f64::NEG_INFINITY;
    for row in values {
        for &v in row {
            v_min = v_min.min(v);
            v_max = v_max.max(v);
        }
    }
    let span = (v_max - v_min).max(1e-300);

    let mut out = String::new();
    push_header(&mut out, title);
    let edge = |grid: &[f64], k: usize| -> (f64, f64) {
        let lo = if k == 0 { grid[0] } else { (grid[k - 1] + grid[k]) / 2.0 };
        let hi = if k + 1 == grid.len() { grid[k] } else { (grid[k] + grid[k + 1]) / 2.0 };
        (lo, hi)
    };
    for (i, row) in values.iter().enumerate() {
        let (x_lo, x_hi) = edge(xs, i);
        for (j, &v) in row.iter().enumerate() {
            let (y_lo, y_hi) = edge(ys, j);
            let px = frame.x(x_lo);
            let py = frame.y(y_hi);
            out.push_str(&format!(
                "<rect x=\"{px:.2}\" y=\"{py:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>\n",
                frame.x(x_hi) - px,
                frame.y(y_lo) - py,
                ramp((v - v_min) / span)
            ));
        }
    }
    push_axes(&mut out, &frame, x_label, y_label);
    // Color key: a few labeled swatches under the title.
    for k in 0..=4 {
        let t = k as f64 / 4.0;
        let x = MARGIN_LEFT + 24.0 + 110.0 * k as f64;
        out.push_str(&format!(
            "<rect x=\"{x:.1}\" y=\"30\" width=\"12\" height=\"12\" fill=\"{}\"/>\n",
            ramp(t)
        ));
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"40\" font-size=\"11\">{}</text>\n",
            x + 16.0,
            tick_label(v_min + t * span)
        ));
    }
    out.push_str("</svg>\n");
    out
}
