//! Substrate stack-up description and validation.
//!
//! A [`Substrate`] collects the five material/stack-up parameters every other
//! computation needs. It is immutable once constructed and construction
//! validates *every* constraint, so downstream code can trust the numbers.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::COPPER_CONDUCTIVITY;

/// One failed substrate constraint: which field and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub reason: String,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubstrateError {
    /// Carries one entry per violated constraint; validation always checks
    /// every field rather than stopping at the first failure.
    #[error("invalid substrate: {}", list_violations(.0))]
    InvalidSubstrate(Vec<Violation>),
}

fn list_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("{} {}", v.field, v.reason))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Dielectric and metallisation parameters of a microstrip board.
///
/// Losslessness is expressed with in-band sentinels rather than options:
/// `loss_tangent = 0` and `metal_conductivity = +inf` make both attenuation
/// constants exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSubstrate", into = "RawSubstrate")]
pub struct Substrate {
    rel_permittivity: f64,
    height: f64,
    loss_tangent: f64,
    metal_thickness: f64,
    metal_conductivity: f64,
}

impl Substrate {
    /// Validates and builds a substrate. Arguments in stack-up order:
    /// relative permittivity, dielectric height (m), loss tangent, metal
    /// thickness (m), metal conductivity (S/m).
    pub fn new(
        rel_permittivity: f64,
        height: f64,
        loss_tangent: f64,
        metal_thickness: f64,
        metal_conductivity: f64,
    ) -> Result<Self, SubstrateError> {
        let mut violations = Vec::new();
        let mut check = |ok: bool, field: &'static str, reason: &str| {
            if !ok {
                violations.push(Violation {
                    field,
                    reason: reason.to_string(),
                });
            }
        };

        check(
            rel_permittivity.is_finite() && rel_permittivity >= 1.0,
            "rel_permittivity",
            "must be a finite number >= 1",
        );
        check(
            height.is_finite() && height > 0.0,
            "height",
            "must be a finite positive length in metres",
        );
        check(
            loss_tangent.is_finite() && loss_tangent >= 0.0,
            "loss_tangent",
            "must be a finite number >= 0",
        );
        check(
            metal_thickness.is_finite() && metal_thickness > 0.0,
            "metal_thickness",
            "must be a finite positive length in metres",
        );
        // +inf is the lossless-conductor sentinel, so only NaN and
        // non-positive values are rejected.
        check(
            !metal_conductivity.is_nan() && metal_conductivity > 0.0,
            "metal_conductivity",
            "must be positive (S/m); +inf means a perfect conductor",
        );
        if metal_thickness.is_finite() && height.is_finite() && height > 0.0 {
            check(
                metal_thickness < height,
                "metal_thickness",
                "must be smaller than the dielectric height",
            );
        }

        if violations.is_empty() {
            Ok(Self {
                rel_permittivity,
                height,
                loss_tangent,
                metal_thickness,
                metal_conductivity,
            })
        } else {
            Err(SubstrateError::InvalidSubstrate(violations))
        }
    }

    /// A substrate with zero dielectric loss and a perfect conductor.
    pub fn lossless(
        rel_permittivity: f64,
        height: f64,
        metal_thickness: f64,
    ) -> Result<Self, SubstrateError> {
        Self::new(
            rel_permittivity,
            height,
            0.0,
            metal_thickness,
            f64::INFINITY,
        )
    }

    /// The stack-up used throughout the examples: Rogers RO3003 at 1.6 mm
    /// with half-ounce copper.
    pub fn default_ro3003() -> Self {
        Self::new(3.0, 1.6e-3, 0.0013, 17e-6, COPPER_CONDUCTIVITY)
            .expect("built-in stack-up is valid")
    }

    pub fn rel_permittivity(&self) -> f64 {
        self.rel_permittivity
    }

    /// Dielectric height in metres.
    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn loss_tangent(&self) -> f64 {
        self.loss_tangent
    }

    /// Conductor thickness in metres.
    pub fn metal_thickness(&self) -> f64 {
        self.metal_thickness
    }

    /// Conductor bulk conductivity in S/m; `+inf` for a perfect conductor.
    pub fn metal_conductivity(&self) -> f64 {
        self.metal_conductivity
    }

    /// True when both loss mechanisms are switched off exactly.
    pub fn is_lossless(&self) -> bool {
        self.loss_tangent == 0.0 && self.metal_conductivity.is_infinite()
    }
}

/// Serialization mirror. `metal_conductivity` is `null` in JSON for the
/// perfect-conductor sentinel because JSON has no representation of infinity.
#[derive(Serialize, Deserialize)]
struct RawSubstrate {
    rel_permittivity: f64,
    height: f64,
    loss_tangent: f64,
    metal_thickness: f64,
    #[serde(
        serialize_with = "conductivity_to_json",
        deserialize_with = "conductivity_from_json"
    )]
    metal_conductivity: f64,
}

fn conductivity_to_json<S: serde::Serializer>(value: &f64, ser: S) -> Result<S::Ok, S::Error> {
    if value.is_finite() {
        ser.serialize_some(value)
    } else {
        ser.serialize_none()
    }
}

fn conductivity_from_json<'de, D: serde::Deserializer<'de>>(de: D) -> Result<f64, D::Error> {
    let raw: Option<f64> = Option::deserialize(de)?;
    Ok(raw.unwrap_or(f64::INFINITY))
}

impl TryFrom<RawSubstrate> for Substrate {
    type Error = SubstrateError;

    fn try_from(raw: RawSubstrate) -> Result<Self, Self::Error> {
        Self::new(
            raw.rel_permittivity,
            raw.height,
            raw.loss_tangent,
            raw.metal_thickness,
            raw.metal_conductivity,
        )
    }
}

impl From<Substrate> for RawSubstrate {
    fn from(s: Substrate) -> Self {
        Self {
            rel_permittivity: s.rel_permittivity,
            height: s.height,
            loss_tangent: s.loss_tangent,
            metal_thickness: s.metal_thickness,
            metal_conductivity: s.metal_conductivity,
        }
    }
}
