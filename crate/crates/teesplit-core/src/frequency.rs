//! Uniform frequency grids.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrequencyError {
    #[error("invalid frequency range {start} .. {stop} Hz: {reason}")]
    InvalidRange {
        start: f64,
        stop: f64,
        reason: &'static str,
    },
    #[error("invalid point count {points}: a grid needs at least 2 points")]
    InvalidCount { points: usize },
    #[error("frequency values are not strictly increasing at index {index}")]
    NotIncreasing { index: usize },
    #[error("frequency spacing is not uniform at index {index}")]
    NonUniformSpacing { index: usize },
}

/// A strictly increasing, uniformly spaced list of frequencies in Hz.
///
/// The stored values are `start + k * step` with
/// `step = (stop - start) / (points - 1)`; the final point is pinned to
/// `stop` exactly so both endpoints are always representable.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    start: f64,
    stop: f64,
    values: Vec<f64>,
}

impl FrequencyGrid {
    /// Builds a uniform grid of `points` frequencies from `start` to `stop`
    /// inclusive.
    pub fn uniform(start: f64, stop: f64, points: usize) -> Result<Self, FrequencyError> {
        if !(start.is_finite() && stop.is_finite()) {
            return Err(FrequencyError::InvalidRange {
                start,
                stop,
                reason: "endpoints must be finite",
            });
        }
        if start <= 0.0 {
            return Err(FrequencyError::InvalidRange {
                start,
                stop,
                reason: "start must be positive",
            });
        }
        if stop <= start {
            return Err(FrequencyError::InvalidRange {
                start,
                stop,
                reason: "stop must be greater than start",
            });
        }
        if points < 2 {
            return Err(FrequencyError::InvalidCount { points });
        }

        let step = (stop - start) / (points - 1) as f64;
        let mut values: Vec<f64> = (0..points).map(|k| start + k as f64 * step).collect();
        *values.last_mut().expect("points >= 2") = stop;
        Ok(Self {
            start,
            stop,
            values,
        })
    }

    /// Builds a grid from explicit values, e.g. frequencies read back from a
    /// file. The values must be positive, strictly increasing, and uniformly
    /// spaced to within 1e-6 of the mean step (text round-trips perturb
    /// spacing by far less than that).
    pub fn from_values(values: Vec<f64>) -> Result<Self, FrequencyError> {
        if values.len() < 2 {
            return Err(FrequencyError::InvalidCount {
                points: values.len(),
            });
        }
        let start = values[0];
        let stop = *values.last().expect("len >= 2");
        if !start.is_finite() || start <= 0.0 {
            return Err(FrequencyError::InvalidRange {
                start,
                stop,
                reason: "start must be positive and finite",
            });
        }
        for (i, pair) in values.windows(2).enumerate() {
            if !pair[1].is_finite() {
                return Err(FrequencyError::InvalidRange {
                    start,
                    stop,
                    reason: "all values must be finite",
                });
            }
            if pair[1] <= pair[0] {
                return Err(FrequencyError::NotIncreasing { index: i + 1 });
            }
        }
        let mean_step = (stop - start) / (values.len() - 1) as f64;
        for (i, pair) in values.windows(2).enumerate() {
            let step = pair[1] - pair[0];
            if (step - mean_step).abs() > 1e-6 * mean_step {
                return Err(FrequencyError::NonUniformSpacing { index: i + 1 });
            }
        }
        Ok(Self {
            start,
            stop,
            values,
        })
    }

    /// First frequency, Hz.
    pub fn start(&self) -> f64 {
        self.start
    }

    /// Last frequency, Hz.
    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn points(&self) -> usize {
        self.values.len()
    }

    /// Grid spacing, Hz.
    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.points() - 1) as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().copied()
    }

    /// Index of the grid point closest to `freq` (ties round up, ends clamp).
    pub fn nearest_index(&self, freq: f64) -> usize {
        let above = self.values.partition_point(|&v| v < freq);
        if above == 0 {
            return 0;
        }
        if above == self.values.len() {
            return self.values.len() - 1;
        }
        let below = above - 1;
        if freq - self.values[below] < self.values[above] - freq {
            below
        } else {
            above
        }
    }
}
