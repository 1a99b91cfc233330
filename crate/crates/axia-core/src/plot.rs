//! Static SVG emission for accuracy-cost curve sets.
//!
//! Cost runs along the horizontal axis, accuracy along the vertical, with a
//! dashed guide line at the 0.9 viability threshold. Output is plain SVG text
//! assembled deterministically, so re-rendering the same curves reproduces
//! the same bytes.

use crate::meta::{AccuracyCostCurve, VIABILITY_THRESHOLD};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 28.0;
const MARGIN_BOTTOM: f64 = 52.0;

const PALETTE: [&str; 11] = [
    "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#000000",
];

/// Render one curve set (typically all methods of one task/object/index)
/// into a standalone SVG document.
pub fn render_svg(title: &str, curves: &[AccuracyCostCurve]) -> String {
    let max_cost = curves
        .iter()
        .flat_map(|c| c.points.iter().map(|p| p.cost))
        .max()
        .unwrap_or(1)
        .max(1) as f64;
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x = |cost: f64| MARGIN_LEFT + cost / max_cost * plot_w;
    let y = |acc: f64| MARGIN_TOP + (1.0 - acc) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\" \
         text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    ));
    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        MARGIN_LEFT,
        y(0.0),
        x(max_cost),
        y(0.0)
    ));
    svg.push_str(&format!(
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        MARGIN_LEFT,
        y(0.0),
        MARGIN_LEFT,
        y(1.0)
    ));
    for tick in 0..=5 {
        let acc = tick as f64 / 5.0;
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"end\">{:.1}</text>\n",
            MARGIN_LEFT - 6.0,
            y(acc) + 4.0,
            acc
        ));
    }
    for tick in 0..=4 {
        let cost = max_cost * tick as f64 / 4.0;
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" \
             text-anchor=\"middle\">{:.0}</text>\n",
            x(cost),
            y(0.0) + 18.0,
            cost
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\">cost (evaluations)</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 14.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">accuracy</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    ));
    // Viability guide line.
    svg.push_str(&format!(
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#888\" \
         stroke-dasharray=\"6 4\"/>\n",
        MARGIN_LEFT,
        y(VIABILITY_THRESHOLD),
        x(max_cost),
        y(VIABILITY_THRESHOLD)
    ));
    // Curves and a simple legend.
    for (i, curve) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = curve
            .points
            .iter()
            .map(|p| format!("{:.2},{:.2}", x(p.cost as f64), y(p.accuracy)))
            .collect();
        if points.len() == 1 {
            let (px, py) = {
                let p = &curve.points[0];
                (x(p.cost as f64), y(p.accuracy))
            };
            svg.push_str(&format!(
                "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"4\" fill=\"{color}\"/>\n"
            ));
        } else {
            svg.push_str(&format!(
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\" points=\"{}\"/>\n",
                points.join(" ")
            ));
        }
        let ly = MARGIN_TOP + 14.0 * i as f64;
        svg.push_str(&format!(
            "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"10\" height=\"3\" fill=\"{color}\"/>\n",
            MARGIN_LEFT + 8.0,
            ly + 4.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"10\">{}</text>\n",
            MARGIN_LEFT + 22.0,
            ly + 8.0,
            escape(&curve.method)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meta::CurvePoint;

    fn curve(method: &str, points: Vec<(u64, f64)>) -> AccuracyCostCurve {
        AccuracyCostCurve {
            method: method.into(),
            task: 5,
            object: "frequency".into(),
            index: "true_rate".into(),
            k: 50,
            level: 0.95,
            points: points.into_iter().map(|(cost, accuracy)| CurvePoint { cost, accuracy }).collect(),
        }
    }

    #[test]
    fn svg_is_deterministic_and_contains_the_guide_line() {
        let curves = vec![
            curve("eva", vec![(10, 0.6), (30, 0.95), (60, 0.97)]),
            curve("ci_do", vec![(1440, 1.0)]),
        ];
        let a = render_svg("task 5 / frequency / true_rate", &curves);
        let b = render_svg("task 5 / frequency / true_rate", &curves);
        assert_eq!(a, b);
        assert!(a.contains("stroke-dasharray"));
        assert!(a.contains("polyline"));
        assert!(a.contains("circle"));
        assert!(a.starts_with("<svg"));
        assert!(a.trim_end().ends_with("</svg>"));
    }
}
