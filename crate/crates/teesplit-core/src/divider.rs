//! Equal-split T-junction divider synthesis, the published reference
//! geometry, and board-level trace layout.
//!
//! A divider is five traces on one substrate: a feed line at the system
//! impedance, two identical quarter-wave transformers at `Z0 * sqrt(2)`, and
//! two output connector lines back at the system impedance. The layout puts
//! the feed along +x and the two arms along +/-y, mirrored about the feed
//! centreline, with the trace cluster centred on the board.
//!
//! Designs serialize to a geometry document: spec, substrate, five placed
//! segments, board outline, provenance, and advisory warnings. Segment
//! placement is derived data; loading a document reads the electrical
//! dimensions and regenerates placement, so hand-tuned coordinates are not a
//! way to describe a different circuit.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::microstrip::{self, MicrostripError, MicrostripLine};
use crate::substrate::Substrate;

/// Default system impedance, ohms.
pub const DEFAULT_SYSTEM_IMPEDANCE: f64 = 50.0;
/// Default feed and output connector length, metres.
pub const DEFAULT_LINE_LENGTH: f64 = 20e-3;
/// Clearance between the trace bounding box and the board edge for
/// synthesized designs, metres (each side).
pub const BOARD_MARGIN: f64 = 2e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DividerError {
    #[error("impedance {value} ohms must be finite and positive")]
    NonPositiveImpedance { value: f64 },
    #[error("design frequency {freq} Hz must be finite and positive")]
    InvalidDesignFrequency { freq: f64 },
    #[error("line length {length} m must be finite and >= 0")]
    InvalidLineLength { length: f64 },
    #[error("all five traces must share one substrate")]
    InconsistentSubstrates,
    #[error("board {board_w} x {board_l} m does not enclose the {traces_w} x {traces_l} m trace cluster")]
    BoardTooSmall {
        board_w: f64,
        board_l: f64,
        traces_w: f64,
        traces_l: f64,
    },
    #[error("geometry document is missing segment \"{name}\"")]
    MissingSegment { name: &'static str },
    #[error("geometry document defines segment \"{name}\" more than once")]
    DuplicateSegment { name: String },
    #[error("geometry document names unknown segment \"{name}\"")]
    UnknownSegment { name: String },
    #[error(transparent)]
    Microstrip(#[from] MicrostripError),
}

/// What a divider should be: centre frequency, system impedance, substrate,
/// and the (electrically non-critical) feed and connector lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DividerSpec {
    design_freq: f64,
    system_impedance: f64,
    substrate: Substrate,
    input_line_length: f64,
    output_line_length: f64,
}

impl DividerSpec {
    pub fn new(
        design_freq: f64,
        system_impedance: f64,
        substrate: Substrate,
        input_line_length: f64,
        output_line_length: f64,
    ) -> Result<Self, DividerError> {
        if !design_freq.is_finite() || design_freq <= 0.0 {
            return Err(DividerError::InvalidDesignFrequency { freq: design_freq });
        }
        if !system_impedance.is_finite() || system_impedance <= 0.0 {
            return Err(DividerError::NonPositiveImpedance {
                value: system_impedance,
            });
        }
        for length in [input_line_length, output_line_length] {
            if !length.is_finite() || length < 0.0 {
                return Err(DividerError::InvalidLineLength { length });
            }
        }
        Ok(Self {
            design_freq,
            system_impedance,
            substrate,
            input_line_length,
            output_line_length,
        })
    }

    /// Spec with the default impedance and line lengths.
    pub fn standard(design_freq: f64, substrate: Substrate) -> Result<Self, DividerError> {
        Self::new(
            design_freq,
            DEFAULT_SYSTEM_IMPEDANCE,
            substrate,
            DEFAULT_LINE_LENGTH,
            DEFAULT_LINE_LENGTH,
        )
    }

    /// Centre frequency, Hz.
    pub fn design_freq(&self) -> f64 {
        self.design_freq
    }

    /// Port and feed impedance, ohms.
    pub fn system_impedance(&self) -> f64 {
        self.system_impedance
    }

    pub fn substrate(&self) -> &Substrate {
        &self.substrate
    }

    /// Feed line length, metres.
    pub fn input_line_length(&self) -> f64 {
        self.input_line_length
    }

    /// Output connector length, metres.
    pub fn output_line_length(&self) -> f64 {
        self.output_line_length
    }
}

/// How a design came to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    /// Dimensions derived from the spec by width synthesis.
    Synthesized,
    /// The published reference geometry, reproduced verbatim.
    Reference,
}

/// Advisory flags attached to a design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DesignWarning {
    /// The reference table prints a 30 mm quarter-wave transformer width,
    /// which computes to ~10 ohms here rather than the ~70.7 ohms the
    /// transformer needs; likely a misprint, preserved verbatim.
    QwtWidthAnomaly,
    /// The reference feed width (3.1 mm) computes to ~59 ohms on this
    /// stack-up, not the stated 50-ohm system impedance.
    FeedImpedanceInconsistency,
}

impl fmt::Display for DesignWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::QwtWidthAnomaly => write!(
                f,
                "transformer width 30 mm is physically implausible for a \
                 70.7 ohm quarter-wave section (reproduced verbatim)"
            ),
            Self::FeedImpedanceInconsistency => write!(
                f,
                "feed width 3.1 mm computes to ~59 ohms, not the stated \
                 50 ohm system impedance"
            ),
        }
    }
}

/// A complete divider: spec, five traces, nominal transformer impedance,
/// board outline, and provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GeometryDoc", into = "GeometryDoc")]
pub struct DividerDesign {
    spec: DividerSpec,
    input_line: MicrostripLine,
    transformer_a: MicrostripLine,
    transformer_b: MicrostripLine,
    output_line_a: MicrostripLine,
    output_line_b: MicrostripLine,
    transformer_impedance: f64,
    board_width: f64,
    board_length: f64,
    provenance: Provenance,
    warnings: Vec<DesignWarning>,
}

impl DividerDesign {
    /// Assembles and validates a design from parts: one substrate across all
    /// traces, and a board that encloses the trace cluster.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        spec: DividerSpec,
        input_line: MicrostripLine,
        transformer_a: MicrostripLine,
        transformer_b: MicrostripLine,
        output_line_a: MicrostripLine,
        output_line_b: MicrostripLine,
        transformer_impedance: f64,
        board_width: f64,
        board_length: f64,
        provenance: Provenance,
        warnings: Vec<DesignWarning>,
    ) -> Result<Self, DividerError> {
        if !transformer_impedance.is_finite() || transformer_impedance <= 0.0 {
            return Err(DividerError::NonPositiveImpedance {
                value: transformer_impedance,
            });
        }
        let lines = [
            &input_line,
            &transformer_a,
            &transformer_b,
            &output_line_a,
            &output_line_b,
        ];
        if lines.iter().any(|l| l.substrate() != spec.substrate()) {
            return Err(DividerError::InconsistentSubstrates);
        }
        let (_, traces_w, traces_l) = cluster(
            &input_line,
            &transformer_a,
            &transformer_b,
            &output_line_a,
            &output_line_b,
        );
        // Allow exact-fit boards; the tolerance only absorbs rounding.
        if board_width + 1e-12 < traces_w || board_length + 1e-12 < traces_l {
            return Err(DividerError::BoardTooSmall {
                board_w: board_width,
                board_l: board_length,
                traces_w,
                traces_l,
            });
        }
        Ok(Self {
            spec,
            input_line,
            transformer_a,
            transformer_b,
            output_line_a,
            output_line_b,
            transformer_impedance,
            board_width,
            board_length,
            provenance,
            warnings,
        })
    }

    pub fn spec(&self) -> &DividerSpec {
        &self.spec
    }

    pub fn input_line(&self) -> &MicrostripLine {
        &self.input_line
    }

    pub fn transformer_a(&self) -> &MicrostripLine {
        &self.transformer_a
    }

    pub fn transformer_b(&self) -> &MicrostripLine {
        &self.transformer_b
    }

    pub fn output_line_a(&self) -> &MicrostripLine {
        &self.output_line_a
    }

    pub fn output_line_b(&self) -> &MicrostripLine {
        &self.output_line_b
    }

    /// Nominal transformer impedance, ohms.
    pub fn transformer_impedance(&self) -> f64 {
        self.transformer_impedance
    }

    /// Board outline across the feed direction, metres.
    pub fn board_width(&self) -> f64 {
        self.board_width
    }

    /// Board outline along the arm direction, metres.
    pub fn board_length(&self) -> f64 {
        self.board_length
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn warnings(&self) -> &[DesignWarning] {
        &self.warnings
    }

    /// Modified design with both transformers at `width`. The result is a
    /// machine-derived geometry: provenance becomes [`Provenance::Synthesized`],
    /// the nominal transformer impedance is re-analysed from the new width,
    /// and the board is re-fitted with the standard margin.
    pub fn with_transformer_width(&self, width: f64) -> Result<Self, DividerError> {
        let freq = self.spec.design_freq();
        let z = microstrip::analyze_line(self.spec.substrate(), width, freq)?.char_impedance;
        self.rebuilt(
            self.input_line,
            self.transformer_a.with_width(width)?,
            self.transformer_b.with_width(width)?,
            self.output_line_a,
            self.output_line_b,
            z,
        )
    }

    /// Modified design with both transformers at `length`; see
    /// [`Self::with_transformer_width`] for the provenance and board rules.
    pub fn with_transformer_length(&self, length: f64) -> Result<Self, DividerError> {
        self.rebuilt(
            self.input_line,
            self.transformer_a.with_length(length)?,
            self.transformer_b.with_length(length)?,
            self.output_line_a,
            self.output_line_b,
            self.transformer_impedance,
        )
    }

    /// Modified design with both output connectors at `length`.
    pub fn with_output_line_length(&self, length: f64) -> Result<Self, DividerError> {
        let spec = DividerSpec::new(
            self.spec.design_freq(),
            self.spec.system_impedance(),
            *self.spec.substrate(),
            self.spec.input_line_length(),
            length,
        )?;
        let mut next = self.rebuilt(
            self.input_line,
            self.transformer_a,
            self.transformer_b,
            self.output_line_a.with_length(length)?,
            self.output_line_b.with_length(length)?,
            self.transformer_impedance,
        )?;
        next.spec = spec;
        Ok(next)
    }

    /// Modified design with the feed at `length`.
    pub fn with_input_line_length(&self, length: f64) -> Result<Self, DividerError> {
        let spec = DividerSpec::new(
            self.spec.design_freq(),
            self.spec.system_impedance(),
            *self.spec.substrate(),
            length,
            self.spec.output_line_length(),
        )?;
        let mut next = self.rebuilt(
            self.input_line.with_length(length)?,
            self.transformer_a,
            self.transformer_b,
            self.output_line_a,
            self.output_line_b,
            self.transformer_impedance,
        )?;
        next.spec = spec;
        Ok(next)
    }

    fn rebuilt(
        &self,
        input_line: MicrostripLine,
        transformer_a: MicrostripLine,
        transformer_b: MicrostripLine,
        output_line_a: MicrostripLine,
        output_line_b: MicrostripLine,
        transformer_impedance: f64,
    ) -> Result<Self, DividerError> {
        let (_, traces_w, traces_l) = cluster(
            &input_line,
            &transformer_a,
            &transformer_b,
            &output_line_a,
            &output_line_b,
        );
        Self::from_parts(
            self.spec,
            input_line,
            transformer_a,
            transformer_b,
            output_line_a,
            output_line_b,
            transformer_impedance,
            traces_w + 2.0 * BOARD_MARGIN,
            traces_l + 2.0 * BOARD_MARGIN,
            Provenance::Synthesized,
            self.warnings.clone(),
        )
    }

    /// Placed trace rectangles, centred on the board.
    pub fn layout(&self) -> Layout {
        let (rects, traces_w, traces_l) = cluster(
            &self.input_line,
            &self.transformer_a,
            &self.transformer_b,
            &self.output_line_a,
            &self.output_line_b,
        );
        let dx = 0.5 * (self.board_width - traces_w);
        let dy = 0.5 * (self.board_length - traces_l);
        let z0 = self.spec.system_impedance();
        let zt = self.transformer_impedance;
        let meta = [
            ("input_line", &self.input_line, z0, false),
            ("transformer_a", &self.transformer_a, zt, true),
            ("transformer_b", &self.transformer_b, zt, true),
            ("output_line_a", &self.output_line_a, z0, true),
            ("output_line_b", &self.output_line_b, z0, true),
        ];
        let segments = meta
            .iter()
            .zip(rects.iter())
            .map(|((name, line, impedance, vertical), rect)| PlacedSegment {
                name,
                x: rect.x + dx,
                y: rect.y + dy,
                width: line.width(),
                length: line.length(),
                impedance: *impedance,
                vertical: *vertical,
            })
            .collect();
        Layout {
            segments,
            board_width: self.board_width,
            board_length: self.board_length,
        }
    }
}

/// One trace placed on the board. `x`/`y` locate the lower-left corner of
/// the copper rectangle; `width`/`length` are the electrical dimensions
/// (transverse / along propagation).
#[derive(Debug, Clone, PartialEq)]
pub struct PlacedSegment {
    pub name: &'static str,
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub length: f64,
    pub impedance: f64,
    pub vertical: bool,
}

impl PlacedSegment {
    /// Drawing extents `(x, y, w, h)` of the copper rectangle.
    pub fn rect(&self) -> (f64, f64, f64, f64) {
        if self.vertical {
            (self.x, self.y, self.width, self.length)
        } else {
            (self.x, self.y, self.length, self.width)
        }
    }
}

/// The five placed segments plus the board outline, all in metres.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub segments: Vec<PlacedSegment>,
    pub board_width: f64,
    pub board_length: f64,
}

struct RawRect {
    x: f64,
    y: f64,
    w: f64,
    h: f64,
}

/// Places the trace cluster with the feed centreline at y = 0, then shifts
/// so the bounding box starts at the origin. Returns the five rectangles in
/// serialization order plus the bounding-box size.
fn cluster(
    input: &MicrostripLine,
    transformer_a: &MicrostripLine,
    transformer_b: &MicrostripLine,
    output_a: &MicrostripLine,
    output_b: &MicrostripLine,
) -> ([RawRect; 5], f64, f64) {
    let l_in = input.length();
    let arm_x = l_in; // left edge of both transformer rectangles
    let centre_a = arm_x + 0.5 * transformer_a.width();
    let centre_b = arm_x + 0.5 * transformer_b.width();
    let mut rects = [
        // feed: horizontal, centreline y = 0
        RawRect {
            x: 0.0,
            y: -0.5 * input.width(),
            w: l_in,
            h: input.width(),
        },
        // transformer A: up from the junction
        RawRect {
            x: arm_x,
            y: 0.0,
            w: transformer_a.width(),
            h: transformer_a.length(),
        },
        // transformer B: down
        RawRect {
            x: arm_x,
            y: -transformer_b.length(),
            w: transformer_b.width(),
            h: transformer_b.length(),
        },
        // output A: continues up, centred on transformer A
        RawRect {
            x: centre_a - 0.5 * output_a.width(),
            y: transformer_a.length(),
            w: output_a.width(),
            h: output_a.length(),
        },
        // output B: continues down
        RawRect {
            x: centre_b - 0.5 * output_b.width(),
            y: -(transformer_b.length() + output_b.length()),
            w: output_b.width(),
            h: output_b.length(),
        },
    ];
    let min_x = rects.iter().map(|r| r.x).fold(f64::INFINITY, f64::min);
    let max_x = rects
        .iter()
        .map(|r| r.x + r.w)
        .fold(f64::NEG_INFINITY, f64::max);
    let min_y = rects.iter().map(|r| r.y).fold(f64::INFINITY, f64::min);
    let max_y = rects
        .iter()
        .map(|r| r.y + r.h)
        .fold(f64::NEG_INFINITY, f64::max);
    for r in &mut rects {
        r.x -= min_x;
        r.y -= min_y;
    }
    (rects, max_x - min_x, max_y - min_y)
}

/// Impedance of a quarter-wave section matching the system impedance to two
/// identical system-impedance branches in parallel: `z0 * sqrt(2)`.
pub fn quarter_wave_impedance(z0: f64) -> Result<f64, DividerError> {
    if !z0.is_finite() || z0 <= 0.0 {
        return Err(DividerError::NonPositiveImpedance { value: z0 });
    }
    Ok(z0 * std::f64::consts::SQRT_2)
}

/// Turns a spec into physical geometry: width synthesis for the feed,
/// transformer, and connector traces; quarter-wave transformer length at the
/// design frequency; board fitted around the cluster with the standard
/// margin.
pub fn synthesize_divider(spec: &DividerSpec) -> Result<DividerDesign, DividerError> {
    let z0 = spec.system_impedance();
    let zt = quarter_wave_impedance(z0)?;
    let substrate = *spec.substrate();
    let line_width = microstrip::synthesize_width(&substrate, z0)?;
    let transformer_width = microstrip::synthesize_width(&substrate, zt)?;
    let transformer_length =
        microstrip::quarter_wave_length(&substrate, transformer_width, spec.design_freq())?;

    let input_line = MicrostripLine::new(substrate, line_width, spec.input_line_length())?;
    let transformer = MicrostripLine::new(substrate, transformer_width, transformer_length)?;
    let output_line = MicrostripLine::new(substrate, line_width, spec.output_line_length())?;

    let (_, traces_w, traces_l) = cluster(
        &input_line,
        &transformer,
        &transformer,
        &output_line,
        &output_line,
    );
    DividerDesign::from_parts(
        *spec,
        input_line,
        transformer,
        transformer,
        output_line,
        output_line,
        zt,
        traces_w + 2.0 * BOARD_MARGIN,
        traces_l + 2.0 * BOARD_MARGIN,
        Provenance::Synthesized,
        Vec::new(),
    )
}

/// The published reference geometry, verbatim: 20 x 3.1 mm feed and
/// connectors, 1.7 mm transformers printed at 30 mm width, 50 x 80 mm board
/// on the 1.6 mm stack-up. Ships with advisory warnings for the two
/// anomalies in the printed table; analysis accepts it unchanged.
pub fn reference_design() -> DividerDesign {
    let substrate = Substrate::default_ro3003();
    let spec = DividerSpec::standard(28e9, substrate).expect("reference spec is valid");
    let feed = MicrostripLine::new(substrate, 3.1e-3, 20e-3).expect("reference feed is valid");
    let transformer =
        MicrostripLine::new(substrate, 30e-3, 1.7e-3).expect("reference transformer is valid");
    DividerDesign::from_parts(
        spec,
        feed,
        transformer,
        transformer,
        feed,
        feed,
        quarter_wave_impedance(DEFAULT_SYSTEM_IMPEDANCE).expect("50 ohms is valid"),
        0.05,
        0.08,
        Provenance::Reference,
        vec![
            DesignWarning::QwtWidthAnomaly,
            DesignWarning::FeedImpedanceInconsistency,
        ],
    )
    .expect("reference design is internally consistent")
}

// --- serialization -------------------------------------------------------
// The geometry document is the single on-disk schema for designs: the same
// JSON the `export` command emits is what `analyze` and `optimize` read.

#[derive(Serialize, Deserialize)]
struct GeometryDoc {
    spec: SpecDoc,
    substrate: Substrate,
    segments: Vec<SegmentDoc>,
    board: BoardDoc,
    provenance: Provenance,
    warnings: Vec<DesignWarning>,
}

#[derive(Serialize, Deserialize)]
struct SpecDoc {
    design_freq: f64,
    system_impedance: f64,
}

#[derive(Serialize, Deserialize)]
struct SegmentDoc {
    name: String,
    x: f64,
    y: f64,
    width: f64,
    length: f64,
    impedance: f64,
}

#[derive(Serialize, Deserialize)]
struct BoardDoc {
    w: f64,
    l: f64,
}

impl From<DividerDesign> for GeometryDoc {
    fn from(design: DividerDesign) -> Self {
        let layout = design.layout();
        Self {
            spec: SpecDoc {
                design_freq: design.spec.design_freq(),
                system_impedance: design.spec.system_impedance(),
            },
            substrate: *design.spec.substrate(),
            segments: layout
                .segments
                .iter()
                .map(|s| SegmentDoc {
                    name: s.name.to_string(),
                    x: s.x,
                    y: s.y,
                    width: s.width,
                    length: s.length,
                    impedance: s.impedance,
                })
                .collect(),
            board: BoardDoc {
                w: design.board_width,
                l: design.board_length,
            },
            provenance: design.provenance,
            warnings: design.warnings,
        }
    }
}

impl TryFrom<GeometryDoc> for DividerDesign {
    type Error = DividerError;

    fn try_from(doc: GeometryDoc) -> Result<Self, Self::Error> {
        let mut found: [Option<&SegmentDoc>; 5] = [None; 5];
        const NAMES: [&str; 5] = [
            "input_line",
            "transformer_a",
            "transformer_b",
            "output_line_a",
            "output_line_b",
        ];
        for seg in &doc.segments {
            match NAMES.iter().position(|n| *n == seg.name) {
                Some(slot) => {
                    if found[slot].replace(seg).is_some() {
                        return Err(DividerError::DuplicateSegment {
                            name: seg.name.clone(),
                        });
                    }
                }
                None => {
                    return Err(DividerError::UnknownSegment {
                        name: seg.name.clone(),
                    })
                }
            }
        }
        let segment =
            |slot: usize| found[slot].ok_or(DividerError::MissingSegment { name: NAMES[slot] });
        let input = segment(0)?;
        let t_a = segment(1)?;
        let t_b = segment(2)?;
        let o_a = segment(3)?;
        let o_b = segment(4)?;

        let spec = DividerSpec::new(
            doc.spec.design_freq,
            doc.spec.system_impedance,
            doc.substrate,
            input.length,
            o_a.length,
        )?;
        let line = |seg: &SegmentDoc| MicrostripLine::new(doc.substrate, seg.width, seg.length);
        DividerDesign::from_parts(
            spec,
            line(input)?,
            line(t_a)?,
            line(t_b)?,
            line(o_a)?,
            line(o_b)?,
            t_a.impedance,
            doc.board.w,
            doc.board.l,
            doc.provenance,
            doc.warnings,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ro3003() -> Substrate {
        Substrate::default_ro3003()
    }

    #[test]
    fn transformer_impedance_is_root_two_scaled() {
        assert_relative_eq!(
            quarter_wave_impedance(50.0).unwrap(),
            70.710_678_118_654_76,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            quarter_wave_impedance(1.0).unwrap(),
            std::f64::consts::SQRT_2,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            quarter_wave_impedance(75.0).unwrap(),
            106.066_017_177_98,
            max_relative = 1e-12
        );
    }

    #[test]
    fn transformer_impedance_rejects_nonphysical_input() {
        for z in [0.0, -50.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                quarter_wave_impedance(z),
                Err(DividerError::NonPositiveImpedance { .. })
            ));
        }
    }

    #[test]
    fn spec_validation() {
        let s = ro3003();
        assert!(DividerSpec::standard(28e9, s).is_ok());
        assert!(matches!(
            DividerSpec::new(0.0, 50.0, s, 20e-3, 20e-3),
            Err(DividerError::InvalidDesignFrequency { .. })
        ));
        assert!(matches!(
            DividerSpec::new(28e9, -50.0, s, 20e-3, 20e-3),
            Err(DividerError::NonPositiveImpedance { .. })
        ));
        assert!(matches!(
            DividerSpec::new(28e9, 50.0, s, -1e-3, 20e-3),
            Err(DividerError::InvalidLineLength { .. })
        ));
    }

    #[test]
    fn synthesis_reproduces_the_published_transformer() {
        let design = synthesize_divider(&DividerSpec::standard(28e9, ro3003()).unwrap()).unwrap();
        assert_relative_eq!(design.transformer_impedance(), 70.710_678_118_654_76);
        assert_relative_eq!(
            design.transformer_a().length(),
            1.754_678_749_96e-3,
            max_relative = 1e-9
        );
        // Within the published 1.7 +/- 0.1 mm.
        assert!((design.transformer_a().length() - 1.7e-3).abs() < 0.1e-3);
        assert_relative_eq!(
            design.input_line().width(),
            4.023_293_999_67e-3,
            max_relative = 1e-9
        );
        assert_relative_eq!(
            design.transformer_a().width(),
            2.234_148_646_35e-3,
            max_relative = 1e-9
        );
        assert_eq!(design.provenance(), Provenance::Synthesized);
        assert!(design.warnings().is_empty());
    }

    #[test]
    fn synthesis_takes_lengths_from_the_spec() {
        let spec = DividerSpec::new(28e9, 50.0, ro3003(), 5e-3, 7e-3).unwrap();
        let design = synthesize_divider(&spec).unwrap();
        assert_eq!(design.input_line().length(), 5e-3);
        assert_eq!(design.output_line_a().length(), 7e-3);
        assert_eq!(design.output_line_b().length(), 7e-3);
    }

    #[test]
    fn synthesized_designs_are_exactly_symmetric() {
        let design = synthesize_divider(&DividerSpec::standard(28e9, ro3003()).unwrap()).unwrap();
        assert_eq!(design.transformer_a(), design.transformer_b());
        assert_eq!(design.output_line_a(), design.output_line_b());
    }

    #[test]
    fn board_wraps_the_cluster_with_the_standard_margin() {
        let design = synthesize_divider(&DividerSpec::standard(28e9, ro3003()).unwrap()).unwrap();
        let layout = design.layout();
        // Every rectangle sits at least one margin from every edge.
        for seg in &layout.segments {
            let (x, y, w, h) = seg.rect();
            assert!(x >= BOARD_MARGIN - 1e-12);
            assert!(y >= BOARD_MARGIN - 1e-12);
            assert!(x + w <= design.board_width() - BOARD_MARGIN + 1e-12);
            assert!(y + h <= design.board_length() - BOARD_MARGIN + 1e-12);
        }
        // And the arms span the cluster height exactly.
        let expected_height =
            2.0 * (design.transformer_a().length() + design.output_line_a().length()) + 4e-3;
        assert_relative_eq!(design.board_length(), expected_height, max_relative = 1e-12);
    }

    #[test]
    fn scaling_frequency_and_stackup_scales_the_design_exactly() {
        // Halving every physical dimension while doubling the frequency is a
        // fixed point of the quasi-static model, down to the last bit.
        let base_spec = DividerSpec::standard(28e9, ro3003()).unwrap();
        let base = synthesize_divider(&base_spec).unwrap();
        let scaled_sub = Substrate::new(3.0, 0.8e-3, 0.0013, 8.5e-6, 5.8e7).unwrap();
        let scaled_spec = DividerSpec::new(56e9, 50.0, scaled_sub, 10e-3, 10e-3).unwrap();
        let scaled = synthesize_divider(&scaled_spec).unwrap();
        assert_eq!(scaled.input_line().width(), base.input_line().width() / 2.0);
        assert_eq!(
            scaled.transformer_a().width(),
            base.transformer_a().width() / 2.0
        );
        assert_eq!(
            scaled.transformer_a().length(),
            base.transformer_a().length() / 2.0
        );
    }

    #[test]
    fn reference_design_matches_the_published_table() {
        let d = reference_design();
        assert_eq!(d.input_line().length(), 20e-3);
        assert_eq!(d.input_line().width(), 3.1e-3);
        assert_eq!(d.transformer_a().length(), 1.7e-3);
        assert_eq!(d.transformer_a().width(), 30e-3);
        assert_eq!(d.output_line_a().width(), 3.1e-3);
        assert_eq!((d.board_width(), d.board_length()), (0.05, 0.08));
        assert_eq!(d.provenance(), Provenance::Reference);
        assert_eq!(
            d.warnings(),
            &[
                DesignWarning::QwtWidthAnomaly,
                DesignWarning::FeedImpedanceInconsistency
            ]
        );
    }

    #[test]
    fn reference_cluster_fills_the_board_width_exactly() {
        // Feed 20 mm plus transformer width 30 mm equals the 50 mm board.
        let d = reference_design();
        let layout = d.layout();
        let feed = &layout.segments[0];
        assert!(feed.x.abs() < 1e-12);
        let max_x = layout
            .segments
            .iter()
            .map(|s| {
                let (x, _, w, _) = s.rect();
                x + w
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert_relative_eq!(max_x, 0.05, max_relative = 1e-12);
    }

    #[test]
    fn modifiers_preserve_mirror_symmetry_and_refit_the_board() {
        let d = synthesize_divider(&DividerSpec::standard(28e9, ro3003()).unwrap()).unwrap();
        let tuned = d.with_transformer_length(2e-3).unwrap();
        assert_eq!(tuned.transformer_a(), tuned.transformer_b());
        assert_eq!(tuned.transformer_a().length(), 2e-3);
        let expected = 2.0 * (2e-3 + tuned.output_line_a().length()) + 4e-3;
        assert_relative_eq!(tuned.board_length(), expected, max_relative = 1e-12);

        let wider = d.with_transformer_width(3e-3).unwrap();
        let z = microstrip::analyze_line(wider.spec().substrate(), 3e-3, 28e9)
            .unwrap()
            .char_impedance;
        assert_eq!(wider.transformer_impedance(), z);
    }

    #[test]
    fn modified_reference_is_no_longer_verbatim() {
        let d = reference_design().with_transformer_width(2.2e-3).unwrap();
        assert_eq!(d.provenance(), Provenance::Synthesized);
    }

    #[test]
    fn from_parts_rejects_mixed_substrates() {
        let spec = DividerSpec::standard(28e9, ro3003()).unwrap();
        let other = Substrate::lossless(2.2, 1.6e-3, 17e-6).unwrap();
        let good = MicrostripLine::new(ro3003(), 3.1e-3, 20e-3).unwrap();
        let alien = MicrostripLine::new(other, 3.1e-3, 1.7e-3).unwrap();
        let err = DividerDesign::from_parts(
            spec,
            good,
            alien,
            alien,
            good,
            good,
            70.7,
            0.05,
            0.08,
            Provenance::Synthesized,
            Vec::new(),
        )
        .unwrap_err();
        assert_eq!(err, DividerError::InconsistentSubstrates);
    }

    #[test]
    fn from_parts_rejects_an_undersized_board() {
        let spec = DividerSpec::standard(28e9, ro3003()).unwrap();
        let feed = MicrostripLine::new(ro3003(), 3.1e-3, 20e-3).unwrap();
        let t = MicrostripLine::new(ro3003(), 30e-3, 1.7e-3).unwrap();
        let err = DividerDesign::from_parts(
            spec,
            feed,
            t,
            t,
            feed,
            feed,
            70.7,
            0.04,
            0.08,
            Provenance::Reference,
            Vec::new(),
        )
        .unwrap_err();
        assert!(matches!(err, DividerError::BoardTooSmall { .. }));
    }

    #[test]
    fn geometry_document_round_trips_byte_for_byte() {
        for design in [
            synthesize_divider(&DividerSpec::standard(28e9, ro3003()).unwrap()).unwrap(),
            reference_design(),
        ] {
            let text = serde_json::to_string_pretty(&design).unwrap();
            let back: DividerDesign = serde_json::from_str(&text).unwrap();
            assert_eq!(back, design);
            let again = serde_json::to_string_pretty(&back).unwrap();
            assert_eq!(again, text);
        }
    }

    #[test]
    fn geometry_document_rejects_missing_and_duplicate_segments() {
        let design = reference_design();
        let text = serde_json::to_string(&design).unwrap();
        let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();

        let segments = doc["segments"].as_array().unwrap().clone();
        doc["segments"] = serde_json::Value::Array(segments[..4].to_vec());
        assert!(serde_json::from_value::<DividerDesign>(doc.clone()).is_err());

        let mut dup = segments.clone();
        dup[1] = dup[2].clone();
        doc["segments"] = serde_json::Value::Array(dup);
        assert!(serde_json::from_value::<DividerDesign>(doc).is_err());
    }

    #[test]
    fn loader_validates_the_board_outline() {
        let design = reference_design();
        let mut doc: serde_json::Value =
            serde_json::from_str(&serde_json::to_string(&design).unwrap()).unwrap();
        doc["board"]["w"] = serde_json::json!(0.01);
        assert!(serde_json::from_value::<DividerDesign>(doc).is_err());
    }
}
