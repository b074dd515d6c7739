//! Touchstone v1 reading and writing for two- and three-port data.
//!
//! The writer emits the classic layout: an option line `# GHz S <FMT> R <z>`,
//! then one record per frequency. Three-port records span three lines (one
//! matrix row per line, frequency prefixed to the first); two-port records
//! are a single line in the traditional `S11 S21 S12 S22` order. Values are
//! printed with 12 significant digits so magnitude/angle, real/imaginary and
//! dB/angle files all round-trip well below 1e-9 relative error.
//!
//! The parser is deliberately tolerant of the variation seen in real files:
//! `!` comments anywhere, blank lines, arbitrary whitespace and line
//! wrapping, any frequency unit, and all three value formats. Errors carry
//! the 1-based line number where the problem was found.

use std::fmt;

use teesplit_core::metrics::magnitude_db;
use teesplit_core::network::ComplexScalar;
use teesplit_core::{FrequencyError, FrequencyGrid, SParamBlock};
use thiserror::Error;

/// Value encoding used in a Touchstone file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TsFormat {
    /// Linear magnitude and angle in degrees.
    Ma,
    /// Real and imaginary parts.
    Ri,
    /// Magnitude in dB and angle in degrees.
    Db,
}

impl TsFormat {
    fn token(self) -> &'static str {
        match self {
            TsFormat::Ma => "MA",
            TsFormat::Ri => "RI",
            TsFormat::Db => "DB",
        }
    }

    fn encode(self, s: ComplexScalar) -> (f64, f64) {
        match self {
            TsFormat::Ma => (s.norm(), s.arg().to_degrees()),
            TsFormat::Ri => (s.re, s.im),
            TsFormat::Db => (magnitude_db(s), s.arg().to_degrees()),
        }
    }

    fn decode(self, a: f64, b: f64) -> ComplexScalar {
        match self {
            TsFormat::Ma => ComplexScalar::from_polar(a, b.to_radians()),
            TsFormat::Ri => ComplexScalar::new(a, b),
            TsFormat::Db => ComplexScalar::from_polar(10f64.powf(a / 20.0), b.to_radians()),
        }
    }
}

impl fmt::Display for TsFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

impl ParseError {
    fn new(line: usize, reason: impl Into<String>) -> Self {
        Self {
            line,
            reason: reason.into(),
        }
    }
}

/// Formats with 12 significant digits, trimming trailing zeros but keeping
/// at least one fractional digit (`28.0`, not `28`).
fn sig(x: f64) -> String {
    if x == 0.0 {
        return "0.0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(1) as usize;
        let mut text = format!("{x:.decimals$}");
        while text.ends_with('0') && !text.ends_with(".0") {
            text.pop();
        }
        text
    } else {
        format!("{x:.11e}")
    }
}

/// Reference impedance for the option line: full precision, but integral
/// values lose the fractional part (`R 50`, `R 37.5`).
fn ref_token(z: f64) -> String {
    let mut text = sig(z);
    if text.ends_with(".0") {
        text.truncate(text.len() - 2);
    }
    text
}

/// Serializes a block to Touchstone v1 text. Frequencies are written in GHz.
pub fn write_touchstone(block: &SParamBlock, format: TsFormat) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# GHz S {} R {}\n",
        format.token(),
        ref_token(block.ref_impedance())
    ));
    let ports = block.ports();
    for (k, freq) in block.grid().iter().enumerate() {
        let freq_field = sig(freq / 1e9);
        if ports == 3 {
            let indent = " ".repeat(freq_field.len());
            for row in 0..3 {
                let lead = if row == 0 { &freq_field } else { &indent };
                out.push_str(lead);
                for col in 0..3 {
                    let (a, b) = format.encode(block.s(k, row, col));
                    out.push_str(&format!(" {} {}", sig(a), sig(b)));
                }
                out.push('\n');
            }
        } else {
            // Two-port files use the historical S11 S21 S12 S22 order.
            out.push_str(&freq_field);
            for (row, col) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                let (a, b) = format.encode(block.s(k, row, col));
                out.push_str(&format!(" {} {}", sig(a), sig(b)));
            }
            out.push('\n');
        }
    }
    out
}

struct OptionLine {
    freq_scale: f64,
    format: TsFormat,
    ref_impedance: f64,
    line: usize,
}

fn parse_option_line(line_no: usize, text: &str) -> Result<OptionLine, ParseError> {
    let mut freq_scale = 1e9;
    let mut format = TsFormat::Ma;
    let mut ref_impedance = 50.0;
    let body = text.trim_start_matches('#');
    let mut tokens = body.split_whitespace();
    while let Some(token) = tokens.next() {
        match token.to_ascii_lowercase().as_str() {
            "hz" => freq_scale = 1.0,
            "khz" => freq_scale = 1e3,
            "mhz" => freq_scale = 1e6,
            "ghz" => freq_scale = 1e9,
            "thz" => freq_scale = 1e12,
            "ma" => format = TsFormat::Ma,
            "ri" => format = TsFormat::Ri,
            "db" => format = TsFormat::Db,
            "s" => {}
            "y" | "z" | "h" | "g" => {
                return Err(ParseError::new(
                    line_no,
                    format!("unsupported parameter type '{token}': only S-parameters are handled"),
                ));
            }
            "r" => {
                let value = tokens.next().ok_or_else(|| {
                    ParseError::new(line_no, "'R' must be followed by a reference impedance")
                })?;
                ref_impedance = value.parse().map_err(|_| {
                    ParseError::new(line_no, format!("invalid reference impedance '{value}'"))
                })?;
            }
            other => {
                return Err(ParseError::new(
                    line_no,
                    format!("unrecognized option token '{other}'"),
                ));
            }
        }
    }
    Ok(OptionLine {
        freq_scale,
        format,
        ref_impedance,
        line: line_no,
    })
}

/// Splits raw text into an option line and a flat stream of numeric tokens,
/// each tagged with its source line.
fn tokenize(text: &str) -> Result<(OptionLine, Vec<(f64, usize)>), ParseError> {
    let mut option: Option<OptionLine> = None;
    let mut values = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = raw.split('!').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with('#') {
            if option.is_none() {
                option = Some(parse_option_line(line_no, content)?);
            }
            // Later option lines are ignored, matching common practice.
            continue;
        }
        let opt_seen = option.is_some();
        for token in content.split_whitespace() {
            if !opt_seen {
                return Err(ParseError::new(
                    line_no,
                    "data encountered before the '#' option line",
                ));
            }
            let value: f64 = token
                .parse()
                .map_err(|_| ParseError::new(line_no, format!("non-numeric token '{token}'")))?;
            values.push((value, line_no));
        }
    }
    let option =
        option.ok_or_else(|| ParseError::new(last_line.max(1), "missing '#' option line"))?;
    Ok((option, values))
}

/// Checks whether the token stream forms valid `ports`-sized records:
/// count divisible by the record stride and frequencies strictly increasing.
fn try_group(tokens: &[(f64, usize)], ports: usize) -> Result<(), Option<ParseError>> {
    let stride = 1 + 2 * ports * ports;
    if !tokens.len().is_multiple_of(stride) {
        return Err(None);
    }
    let mut prev = f64::NEG_INFINITY;
    for chunk in tokens.chunks(stride) {
        let (freq, line) = chunk[0];
        if freq <= prev {
            return Err(Some(ParseError::new(
                line,
                format!("frequency {freq} is not greater than the previous point"),
            )));
        }
        prev = freq;
    }
    Ok(())
}

/// Parses Touchstone v1 text into an S-parameter block.
///
/// The port count is inferred from the data size: a stream of `1 + 2n^2`
/// values per frequency is an n-port. When a file is consistent with both
/// readings (token counts divisible by 9 and 19) the three-port reading is
/// preferred, since wrapped three-port records are the common case here.
pub fn parse_touchstone(text: &str) -> Result<SParamBlock, ParseError> {
    let (option, tokens) = tokenize(text)?;
    if tokens.is_empty() {
        return Err(ParseError::new(option.line, "no data records found"));
    }

    let mut ports = None;
    let mut monotonic_failure = None;
    for candidate in [3usize, 2] {
        match try_group(&tokens, candidate) {
            Ok(()) => {
                ports = Some(candidate);
                break;
            }
            Err(Some(err)) => {
                monotonic_failure.get_or_insert(err);
            }
            Err(None) => {}
        }
    }
    let ports = match (ports, monotonic_failure) {
        (Some(p), _) => p,
        (None, Some(err)) => return Err(err),
        (None, None) => {
            let (_, line) = *tokens.last().expect("tokens checked non-empty");
            return Err(ParseError::new(
                line,
                format!(
                    "{} values do not form complete 2-port or 3-port records",
                    tokens.len()
                ),
            ));
        }
    };

    let stride = 1 + 2 * ports * ports;
    let records = tokens.len() / stride;
    if records < 2 {
        return Err(ParseError::new(
            tokens[0].1,
            "at least two frequency points are required",
        ));
    }

    let mut freqs = Vec::with_capacity(records);
    let mut freq_lines = Vec::with_capacity(records);
    let mut data = Vec::with_capacity(records * ports * ports);
    for chunk in tokens.chunks(stride) {
        let (freq, line) = chunk[0];
        if !freq.is_finite() || freq <= 0.0 {
            return Err(ParseError::new(
                line,
                format!("frequency must be positive, got {freq}"),
            ));
        }
        freqs.push(freq * option.freq_scale);
        freq_lines.push(line);
        let mut entries = [ComplexScalar::new(0.0, 0.0); 9];
        for (pair, entry) in chunk[1..].chunks(2).zip(entries.iter_mut()) {
            *entry = option.format.decode(pair[0].0, pair[1].0);
        }
        if ports == 3 {
            data.extend_from_slice(&entries[..9]);
        } else {
            // File order S11 S21 S12 S22 back to row-major S11 S12 S21 S22.
            for index in [0, 2, 1, 3] {
                data.push(entries[index]);
            }
        }
    }

    let grid = FrequencyGrid::from_values(freqs).map_err(|err| match err {
        FrequencyError::NonUniformSpacing { index } => ParseError::new(
            freq_lines[index.min(freq_lines.len() - 1)],
            "frequency spacing is not uniform; only uniform sweeps are supported",
        ),
        FrequencyError::NotIncreasing { index } => ParseError::new(
            freq_lines[index.min(freq_lines.len() - 1)],
            "frequencies are not strictly increasing",
        ),
        other => ParseError::new(freq_lines[0], other.to_string()),
    })?;

    SParamBlock::new(grid, option.ref_impedance, ports, data)
        .map_err(|err| ParseError::new(option.line, err.to_string()))
}
