//! Parsing of dimensioned command-line values.
//!
//! Frequencies and lengths on the command line accept an optional SI-style
//! suffix: `28GHz`, `28e9`, `1.6mm`, `17um`, `5mil`. A bare number is taken
//! in base units (hertz or metres).

/// Metres per mil (a thousandth of an inch).
const METRES_PER_MIL: f64 = 25.4e-6;

fn split_suffix<'a>(text: &'a str, suffixes: &[(&str, f64)]) -> (&'a str, f64) {
    let lower = text.to_ascii_lowercase();
    for (suffix, scale) in suffixes {
        if lower.ends_with(suffix) {
            return (text[..text.len() - suffix.len()].trim_end(), *scale);
        }
    }
    (text, 1.0)
}

fn parse_with_units(text: &str, suffixes: &[(&str, f64)], kind: &str) -> Result<f64, String> {
    let trimmed = text.trim();
    let (number, scale) = split_suffix(trimmed, suffixes);
    let value: f64 = number
        .trim()
        .parse()
        .map_err(|_| format!("invalid {kind} '{text}'"))?;
    if !value.is_finite() {
        return Err(format!("invalid {kind} '{text}': not finite"));
    }
    Ok(value * scale)
}

/// Parses a frequency in hertz. Accepts `Hz`, `kHz`, `MHz`, `GHz`, `THz`
/// suffixes in any letter case.
pub fn parse_frequency(text: &str) -> Result<f64, String> {
    const SUFFIXES: &[(&str, f64)] = &[
        ("thz", 1e12),
        ("ghz", 1e9),
        ("mhz", 1e6),
        ("khz", 1e3),
        ("hz", 1.0),
    ];
    parse_with_units(text, SUFFIXES, "frequency")
}

/// Parses a length in metres. Accepts `mil`, `cm`, `mm`, `um`, `nm`, `m`.
pub fn parse_length(text: &str) -> Result<f64, String> {
    const SUFFIXES: &[(&str, f64)] = &[
        ("mil", METRES_PER_MIL),
        ("cm", 1e-2),
        ("mm", 1e-3),
        ("um", 1e-6),
        ("nm", 1e-9),
        ("m", 1.0),
    ];
    parse_with_units(text, SUFFIXES, "length")
}
