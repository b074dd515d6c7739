//! Design persistence and board artwork export.
//!
//! JSON is the single persistence format: it is the design's own serde
//! representation, so a save/load cycle reproduces the design byte for
//! byte. SVG export draws the board outline and the five copper traces to
//! scale, one user unit per 0.1 mm, with the dimensions annotated.

use teesplit_core::DividerDesign;

/// User units per metre: 1 unit = 0.1 mm.
const UNITS_PER_METRE: f64 = 1e4;

pub fn to_json(design: &DividerDesign) -> String {
    let mut text = serde_json::to_string_pretty(design).expect("design serialization is total");
    text.push('\n');
    text
}

pub fn from_json(text: &str) -> Result<DividerDesign, serde_json::Error> {
    serde_json::from_str(text)
}

/// Formats a coordinate or dimension with up to three decimals.
fn fmt(value: f64) -> String {
    let mut text = format!("{value:.3}");
    while text.contains('.') && text.ends_with('0') {
        text.pop();
    }
    if text.ends_with('.') {
        text.pop();
    }
    text
}

fn fmt_mm(metres: f64) -> String {
    fmt(metres * 1e3)
}

pub fn svg_export(design: &DividerDesign) -> String {
    let layout = design.layout();
    let board_w = layout.board_width * UNITS_PER_METRE;
    let board_l = layout.board_length * UNITS_PER_METRE;
    // 6 mm margin around the board for the dimension labels.
    let margin = 60.0;
    let view_w = board_w + 2.0 * margin;
    let view_h = board_l + 2.0 * margin;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" \
         width=\"{}mm\" height=\"{}mm\">\n",
        fmt(-margin),
        fmt(-margin),
        fmt(view_w),
        fmt(view_h),
        fmt_mm(view_w / UNITS_PER_METRE),
        fmt_mm(view_h / UNITS_PER_METRE),
    ));
    out.push_str(&format!(
        "  <rect class=\"board\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" \
         fill=\"none\" stroke=\"#444\" stroke-width=\"2\"/>\n",
        fmt(board_w),
        fmt(board_l),
    ));
    out.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"24\" text-anchor=\"middle\" \
         fill=\"#444\">board {} x {} mm</text>\n",
        fmt(board_w / 2.0),
        fmt(board_l + margin / 2.0),
        fmt_mm(layout.board_width),
        fmt_mm(layout.board_length),
    ));
    for segment in &layout.segments {
        let (x, y, w, h) = segment.rect();
        // Flip the vertical axis: SVG y grows downward.
        let y_svg = layout.board_length - y - h;
        out.push_str(&format!(
            "  <rect class=\"trace\" data-name=\"{}\" x=\"{}\" y=\"{}\" \
             width=\"{}\" height=\"{}\" fill=\"#c87533\"/>\n",
            segment.name,
            fmt(x * UNITS_PER_METRE),
            fmt(y_svg * UNITS_PER_METRE),
            fmt(w * UNITS_PER_METRE),
            fmt(h * UNITS_PER_METRE),
        ));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"20\" text-anchor=\"middle\" \
             fill=\"#222\">{} {} x {} mm</text>\n",
            fmt((x + w / 2.0) * UNITS_PER_METRE),
            fmt((y_svg + h / 2.0) * UNITS_PER_METRE),
            segment.name,
            fmt_mm(segment.width),
            fmt_mm(segment.length),
        ));
    }
    out.push_str("</svg>\n");
    out
}
