//! Quasi-static microstrip line model and width synthesis.
//!
//! Effective permittivity and characteristic impedance use the
//! Hammerstad-Jensen closed forms, accurate to a few tenths of a percent over
//! the aspect-ratio window `0.05 <= w/h <= 20` that this module enforces.
//! Attenuation is split into a dielectric term (filling-factor expression)
//! and a conductor term (surface resistance over the equivalent
//! parallel-plate width); both vanish exactly for a lossless substrate.
//!
//! The model is dispersionless: `eeff` and `Z0` do not depend on frequency.
//! That keeps every downstream quantity auditable against closed-form
//! transmission-line theory, and is the documented accuracy boundary of the
//! toolkit at millimetre-wave frequencies.

use std::f64::consts::PI;

use thiserror::Error;

use crate::constants::{C0, ETA0, MU0};
use crate::substrate::Substrate;

/// Lower edge of the validity window for the closed forms, as `w/h`.
pub const MIN_ASPECT_RATIO: f64 = 0.05;
/// Upper edge of the validity window for the closed forms, as `w/h`.
pub const MAX_ASPECT_RATIO: f64 = 20.0;

/// Narrowest synthesizable impedance, ohms.
pub const MIN_SYNTH_IMPEDANCE: f64 = 15.0;
/// Widest synthesizable impedance, ohms.
pub const MAX_SYNTH_IMPEDANCE: f64 = 150.0;

const MAX_BISECTION_ITERATIONS: u32 = 100;

/// Guaranteed worst-case impedance error of a synthesized width, ohms.
/// In practice bisection runs the bracket down to rounding and lands many
/// orders of magnitude inside this bound.
pub const SYNTH_TOLERANCE: f64 = 0.01;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MicrostripError {
    #[error("invalid trace width {width} m: must be finite and positive")]
    InvalidWidth { width: f64 },
    #[error("invalid line length {length} m: must be finite and >= 0")]
    InvalidLength { length: f64 },
    #[error(
        "aspect ratio w/h = {ratio} outside the model validity window \
         {MIN_ASPECT_RATIO} ..= {MAX_ASPECT_RATIO}"
    )]
    AspectOutOfRange { ratio: f64 },
    #[error("invalid frequency {freq} Hz: must be finite and positive")]
    InvalidFrequency { freq: f64 },
    #[error(
        "target impedance {target} ohms is not achievable on this substrate \
         within the validity window"
    )]
    Unachievable { target: f64 },
    #[error("width synthesis did not converge within {iterations} iterations")]
    NoConvergence { iterations: u32 },
}

/// Electrical description of a microstrip cross-section at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineElectricals {
    /// Effective relative permittivity of the quasi-TEM mode.
    pub eff_permittivity: f64,
    /// Characteristic impedance, ohms (real in the quasi-static model).
    pub char_impedance: f64,
    /// Conductor attenuation constant, Np/m.
    pub alpha_conductor: f64,
    /// Dielectric attenuation constant, Np/m.
    pub alpha_dielectric: f64,
}

impl LineElectricals {
    /// Total attenuation constant, Np/m.
    pub fn alpha_total(&self) -> f64 {
        self.alpha_conductor + self.alpha_dielectric
    }
}

/// A physical trace: substrate, width, and length. Validated on
/// construction so analysis code never sees an out-of-window geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MicrostripLine {
    substrate: Substrate,
    width: f64,
    length: f64,
}

impl MicrostripLine {
    pub fn new(substrate: Substrate, width: f64, length: f64) -> Result<Self, MicrostripError> {
        validate_width(&substrate, width)?;
        if !length.is_finite() || length < 0.0 {
            return Err(MicrostripError::InvalidLength { length });
        }
        Ok(Self {
            substrate,
            width,
            length,
        })
    }

    pub fn substrate(&self) -> &Substrate {
        &self.substrate
    }

    /// Trace width, metres.
    pub fn width(&self) -> f64 {
        self.width
    }

    /// Trace length, metres.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Same trace with a different width.
    pub fn with_width(&self, width: f64) -> Result<Self, MicrostripError> {
        Self::new(self.substrate, width, self.length)
    }

    /// Same trace with a different length.
    pub fn with_length(&self, length: f64) -> Result<Self, MicrostripError> {
        Self::new(self.substrate, self.width, length)
    }

    /// Electrical parameters of this cross-section at `freq`.
    pub fn electricals(&self, freq: f64) -> Result<LineElectricals, MicrostripError> {
        analyze_line(&self.substrate, self.width, freq)
    }
}

/// Hammerstad-Jensen quasi-static fit: returns `(eeff, z0)` for relative
/// permittivity `er` and aspect ratio `u = w/h`.
fn quasi_static(er: f64, u: f64) -> (f64, f64) {
    let u4 = u.powi(4);
    let a = 1.0
        + ((u4 + (u / 52.0).powi(2)) / (u4 + 0.432)).ln() / 49.0
        + (1.0 + (u / 18.1).powi(3)).ln() / 18.7;
    let b = 0.564 * ((er - 0.9) / (er + 3.0)).powf(0.053);
    let eeff = 0.5 * (er + 1.0) + 0.5 * (er - 1.0) * (1.0 + 10.0 / u).powf(-a * b);
    let f = 6.0 + (2.0 * PI - 6.0) * (-(30.666 / u).powf(0.7528)).exp();
    let z01 = ETA0 / (2.0 * PI) * (f / u + (1.0 + (2.0 / u).powi(2)).sqrt()).ln();
    (eeff, z01 / eeff.sqrt())
}

fn validate_width(substrate: &Substrate, width: f64) -> Result<f64, MicrostripError> {
    if !width.is_finite() || width <= 0.0 {
        return Err(MicrostripError::InvalidWidth { width });
    }
    let ratio = width / substrate.height();
    if !(MIN_ASPECT_RATIO..=MAX_ASPECT_RATIO).contains(&ratio) {
        return Err(MicrostripError::AspectOutOfRange { ratio });
    }
    Ok(ratio)
}

fn validate_freq(freq: f64) -> Result<(), MicrostripError> {
    if !freq.is_finite() || freq <= 0.0 {
        return Err(MicrostripError::InvalidFrequency { freq });
    }
    Ok(())
}

/// Effective permittivity, characteristic impedance, and attenuation of a
/// microstrip cross-section. The frequency only enters the attenuation
/// constants; the quasi-static `eeff`/`Z0` are frequency-independent.
pub fn analyze_line(
    substrate: &Substrate,
    width: f64,
    freq: f64,
) -> Result<LineElectricals, MicrostripError> {
    let u = validate_width(substrate, width)?;
    validate_freq(freq)?;
    let er = substrate.rel_permittivity();
    let (eeff, z0) = quasi_static(er, u);

    let k0 = 2.0 * PI * freq / C0;
    let tand = substrate.loss_tangent();
    let alpha_dielectric = if tand == 0.0 {
        0.0
    } else if er == 1.0 {
        // Homogeneous medium: the filling factor degenerates to 1.
        k0 * eeff.sqrt() * tand / 2.0
    } else {
        k0 * er * (eeff - 1.0) * tand / (2.0 * eeff.sqrt() * (er - 1.0))
    };

    let sigma = substrate.metal_conductivity();
    let alpha_conductor = if sigma.is_infinite() {
        0.0
    } else {
        let rs = (PI * freq * MU0 / sigma).sqrt();
        // Equivalent parallel-plate width of a line with this Z0 and eeff:
        // the w/h-dependent correction that accounts for current spreading
        // beyond the physical strip edge.
        let w_eff = ETA0 * substrate.height() / (z0 * eeff.sqrt());
        rs / (z0 * w_eff)
    };

    Ok(LineElectricals {
        eff_permittivity: eeff,
        char_impedance: z0,
        alpha_conductor,
        alpha_dielectric,
    })
}

/// Finds the trace width realising `target` ohms on `substrate`.
///
/// Accepts targets in `15 ..= 150` ohms; the achievable range additionally
/// depends on the permittivity through the aspect-ratio window. Bisection
/// exploits that `Z0` is strictly decreasing in width, and runs the bracket
/// down to floating-point exhaustion, so the returned width reproduces the
/// target far inside the guaranteed [`SYNTH_TOLERANCE`].
pub fn synthesize_width(substrate: &Substrate, target: f64) -> Result<f64, MicrostripError> {
    if !target.is_finite() || !(MIN_SYNTH_IMPEDANCE..=MAX_SYNTH_IMPEDANCE).contains(&target) {
        return Err(MicrostripError::Unachievable { target });
    }
    let er = substrate.rel_permittivity();
    let h = substrate.height();
    let mut lo = MIN_ASPECT_RATIO * h; // narrow: highest impedance
    let mut hi = MAX_ASPECT_RATIO * h; // wide: lowest impedance
    if quasi_static(er, lo / h).1 < target || quasi_static(er, hi / h).1 > target {
        return Err(MicrostripError::Unachievable { target });
    }

    for iterations in 0..MAX_BISECTION_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Bracket exhausted at floating-point resolution.
            let _ = iterations;
            break;
        }
        if quasi_static(er, mid / h).1 > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let width = 0.5 * (lo + hi);
    let achieved = quasi_static(er, width / h).1;
    if (achieved - target).abs() <= SYNTH_TOLERANCE {
        Ok(width)
    } else {
        Err(MicrostripError::NoConvergence {
            iterations: MAX_BISECTION_ITERATIONS,
        })
    }
}

/// Wavelength of the quasi-TEM mode at `freq`: `c / (f * sqrt(eeff))`.
pub fn guided_wavelength(
    substrate: &Substrate,
    width: f64,
    freq: f64,
) -> Result<f64, MicrostripError> {
    let u = validate_width(substrate, width)?;
    validate_freq(freq)?;
    let (eeff, _) = quasi_static(substrate.rel_permittivity(), u);
    Ok(C0 / (freq * eeff.sqrt()))
}

/// A quarter of the guided wavelength: the transformer length.
pub fn quarter_wave_length(
    substrate: &Substrate,
    width: f64,
    freq: f64,
) -> Result<f64, MicrostripError> {
    Ok(guided_wavelength(substrate, width, freq)? / 4.0)
}
