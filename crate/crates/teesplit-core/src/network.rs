//! Linear network algebra: transmission (ABCD) matrices for line segments,
//! cascading, conversions to admittance and scattering form, and assembly of
//! the three-port T-junction response.
//!
//! Port convention throughout: port 1 is the divider input, ports 2 and 3 are
//! the two outputs. Matrix indices are 0-based in code (`s(k, 0, 0)` is S11).
//!
//! The junction is assembled in nodal-admittance form: each branch two-port
//! becomes a 2x2 admittance stamp, the stamps join at the internal node by
//! Kirchhoff addition, the node is eliminated with a Schur complement, and
//! the resulting 3x3 admittance matrix converts to scattering parameters via
//! `S = (I - z Y)(I + z Y)^-1` at the real uniform reference impedance.
//! A branch tuned to an exact half-wave resonance has a singular admittance
//! form; the conversion reports it as an error rather than emitting garbage
//! (the window around such isolated frequencies is a few kHz wide).

use num_complex::Complex64;
use thiserror::Error;

use crate::constants::C0;
use crate::divider::DividerDesign;
use crate::frequency::FrequencyGrid;
use crate::microstrip::{MicrostripError, MicrostripLine};

/// Complex scalar used for all network quantities.
pub type ComplexScalar = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("cannot combine two-ports at different frequencies ({first} Hz vs {second} Hz)")]
    FrequencyMismatch { first: f64, second: f64 },
    #[error("singular matrix conversion at {freq} Hz (degenerate electrical length)")]
    SingularConversion { freq: f64 },
    #[error("output branch {arm} has zero total length; the port would short to the junction")]
    DegenerateBranch { arm: char },
    #[error("non-finite scattering result at {freq} Hz")]
    NonFiniteResult { freq: f64 },
    #[error("reference impedance {value} must be finite and positive")]
    InvalidReferenceImpedance { value: f64 },
    #[error("unsupported port count {ports}: expected 2 or 3")]
    InvalidPortCount { ports: usize },
    #[error("scattering data has {actual} entries, expected {expected}")]
    DataSizeMismatch { expected: usize, actual: usize },
    #[error("scattering data contains non-finite entries")]
    NonFiniteData,
    #[error(transparent)]
    Microstrip(#[from] MicrostripError),
}

fn c(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::new(re, im)
}

/// Chain (ABCD) matrix of a two-port at a single frequency.
///
/// `b` is in ohms, `c` in siemens, `a` and `d` dimensionless. The matrix maps
/// output-side voltage/current to input-side, so cascading multiplies in
/// signal-flow order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPortAbcd {
    pub a: ComplexScalar,
    pub b: ComplexScalar,
    pub c: ComplexScalar,
    pub d: ComplexScalar,
    pub freq: f64,
}

impl TwoPortAbcd {
    /// The through-connection (zero-length line).
    pub fn identity(freq: f64) -> Self {
        Self {
            a: c(1.0, 0.0),
            b: c(0.0, 0.0),
            c: c(0.0, 0.0),
            d: c(1.0, 0.0),
            freq,
        }
    }

    /// `a*d - b*c`; equals 1 for any reciprocal two-port.
    pub fn determinant(&self) -> ComplexScalar {
        self.a * self.d - self.b * self.c
    }

    /// Input impedance when the output port is terminated in `load`.
    pub fn input_impedance(&self, load: ComplexScalar) -> ComplexScalar {
        (self.a * load + self.b) / (self.c * load + self.d)
    }
}

/// Chain matrix of a uniform microstrip line segment at `freq`:
/// `[[cosh gl, Zc sinh gl], [sinh gl / Zc, cosh gl]]` with
/// `g = alpha + j 2 pi f sqrt(eeff) / c0`. A zero-length segment yields the
/// exact identity.
pub fn line_abcd(line: &MicrostripLine, freq: f64) -> Result<TwoPortAbcd, NetworkError> {
    let e = line.electricals(freq)?;
    let beta = 2.0 * std::f64::consts::PI * freq * e.eff_permittivity.sqrt() / C0;
    let gl = c(e.alpha_total(), beta) * line.length();
    let zc = c(e.char_impedance, 0.0);
    let (sh, ch) = (gl.sinh(), gl.cosh());
    Ok(TwoPortAbcd {
        a: ch,
        b: zc * sh,
        c: sh / zc,
        d: ch,
        freq,
    })
}

/// Matrix product `first * second`: `first` is the segment nearer the input.
pub fn cascade(first: &TwoPortAbcd, second: &TwoPortAbcd) -> Result<TwoPortAbcd, NetworkError> {
    if first.freq != second.freq {
        return Err(NetworkError::FrequencyMismatch {
            first: first.freq,
            second: second.freq,
        });
    }
    Ok(TwoPortAbcd {
        a: first.a * second.a + first.b * second.c,
        b: first.a * second.b + first.b * second.d,
        c: first.c * second.a + first.d * second.c,
        d: first.c * second.b + first.d * second.d,
        freq: first.freq,
    })
}

/// Standard chain-to-scattering conversion at real reference `zref`.
pub fn abcd_to_s(m: &TwoPortAbcd, zref: f64) -> Result<[[ComplexScalar; 2]; 2], NetworkError> {
    if !zref.is_finite() || zref <= 0.0 {
        return Err(NetworkError::InvalidReferenceImpedance { value: zref });
    }
    let z = c(zref, 0.0);
    let den = m.a + m.b / z + m.c * z + m.d;
    if den.norm_sqr() == 0.0 {
        return Err(NetworkError::SingularConversion { freq: m.freq });
    }
    let s11 = (m.a + m.b / z - m.c * z - m.d) / den;
    let s12 = 2.0 * m.determinant() / den;
    let s21 = c(2.0, 0.0) / den;
    let s22 = (-m.a + m.b / z - m.c * z + m.d) / den;
    Ok([[s11, s12], [s21, s22]])
}

/// Chain-to-admittance conversion; singular when `b = 0` (through-connection
/// or exact half-wave line).
pub fn abcd_to_y(m: &TwoPortAbcd) -> Result<[[ComplexScalar; 2]; 2], NetworkError> {
    if m.b.norm_sqr() == 0.0 {
        return Err(NetworkError::SingularConversion { freq: m.freq });
    }
    let det = m.determinant();
    let one = c(1.0, 0.0);
    Ok([[m.d / m.b, -det / m.b], [-one / m.b, m.a / m.b]])
}

/// Junction discontinuity hook: excess shunt capacitance per arm (farads),
/// in port order `[input, output A, output B]`, applied at the junction
/// node. All zeros is the ideal lossless Kirchhoff node used by default.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JunctionModel {
    pub excess_capacitance: [f64; 3],
}

impl JunctionModel {
    pub const IDEAL: Self = Self {
        excess_capacitance: [0.0; 3],
    };

    pub fn is_ideal(&self) -> bool {
        self.excess_capacitance == [0.0; 3]
    }

    /// Lumped admittance the junction adds at the internal node.
    pub fn shunt_admittance(&self, freq: f64) -> ComplexScalar {
        let total: f64 = self.excess_capacitance.iter().sum();
        c(0.0, 2.0 * std::f64::consts::PI * freq * total)
    }
}

/// Per-frequency scattering matrices with their grid and reference impedance.
///
/// Data produced by the assembly routines is reciprocal and passive; parsed
/// external data is only checked for shape and finiteness.
#[derive(Debug, Clone, PartialEq)]
pub struct SParamBlock {
    grid: FrequencyGrid,
    ref_impedance: f64,
    ports: usize,
    data: Vec<ComplexScalar>,
}

impl SParamBlock {
    /// `data` is row-major per frequency: `points * ports * ports` entries.
    pub fn new(
        grid: FrequencyGrid,
        ref_impedance: f64,
        ports: usize,
        data: Vec<ComplexScalar>,
    ) -> Result<Self, NetworkError> {
        if !ref_impedance.is_finite() || ref_impedance <= 0.0 {
            return Err(NetworkError::InvalidReferenceImpedance {
                value: ref_impedance,
            });
        }
        if !(ports == 2 || ports == 3) {
            return Err(NetworkError::InvalidPortCount { ports });
        }
        let expected = grid.points() * ports * ports;
        if data.len() != expected {
            return Err(NetworkError::DataSizeMismatch {
                expected,
                actual: data.len(),
            });
        }
        if data.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(NetworkError::NonFiniteData);
        }
        Ok(Self {
            grid,
            ref_impedance,
            ports,
            data,
        })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    /// Real reference impedance common to all ports, ohms.
    pub fn ref_impedance(&self) -> f64 {
        self.ref_impedance
    }

    pub fn ports(&self) -> usize {
        self.ports
    }

    /// `S[row][col]` at grid point `k`; all indices 0-based.
    pub fn s(&self, k: usize, row: usize, col: usize) -> ComplexScalar {
        self.data[(k * self.ports + row) * self.ports + col]
    }

    /// Row-major matrix slice at grid point `k`.
    pub fn matrix(&self, k: usize) -> &[ComplexScalar] {
        let n = self.ports * self.ports;
        &self.data[k * n..(k + 1) * n]
    }
}

/// Solves `a * x = rhs` for 3x3 complex systems by Gaussian elimination with
/// partial pivoting.
fn solve_3x3(
    mut a: [[ComplexScalar; 3]; 3],
    mut rhs: [[ComplexScalar; 3]; 3],
    freq: f64,
) -> Result<[[ComplexScalar; 3]; 3], NetworkError> {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&r, &s| a[r][col].norm_sqr().total_cmp(&a[s][col].norm_sqr()))
            .expect("non-empty pivot range");
        if a[pivot][col].norm_sqr() == 0.0 {
            return Err(NetworkError::SingularConversion { freq });
        }
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        let pivot_row = a[col];
        let pivot_rhs = rhs[col];
        for row in col + 1..3 {
            let factor = a[row][col] / a[col][col];
            for (entry, pivot) in a[row].iter_mut().zip(pivot_row).skip(col) {
                *entry -= factor * pivot;
            }
            for (entry, pivot) in rhs[row].iter_mut().zip(pivot_rhs) {
                *entry -= factor * pivot;
            }
        }
    }
    let mut x = [[c(0.0, 0.0); 3]; 3];
    for j in 0..3 {
        for row in (0..3).rev() {
            let mut acc = rhs[row][j];
            for k in row + 1..3 {
                acc -= a[row][k] * x[k][j];
            }
            x[row][j] = acc / a[row][row];
        }
    }
    Ok(x)
}

/// Three-port scattering matrix of the divider at one frequency, with an
/// ideal junction.
pub fn assemble_at(
    design: &DividerDesign,
    freq: f64,
) -> Result<[[ComplexScalar; 3]; 3], NetworkError> {
    assemble_at_with(design, freq, &JunctionModel::IDEAL)
}

/// Three-port scattering matrix at one frequency with an explicit junction
/// model.
pub fn assemble_at_with(
    design: &DividerDesign,
    freq: f64,
    junction: &JunctionModel,
) -> Result<[[ComplexScalar; 3]; 3], NetworkError> {
    for (arm, total) in [
        (
            'A',
            design.transformer_a().length() + design.output_line_a().length(),
        ),
        (
            'B',
            design.transformer_b().length() + design.output_line_b().length(),
        ),
    ] {
        if total == 0.0 {
            return Err(NetworkError::DegenerateBranch { arm });
        }
    }

    let arm_a = cascade(
        &line_abcd(design.transformer_a(), freq)?,
        &line_abcd(design.output_line_a(), freq)?,
    )?;
    let arm_b = cascade(
        &line_abcd(design.transformer_b(), freq)?,
        &line_abcd(design.output_line_b(), freq)?,
    )?;
    let y_a = abcd_to_y(&arm_a)?;
    let y_b = abcd_to_y(&arm_b)?;
    let y_junction = junction.shunt_admittance(freq);

    // Indefinite admittance matrix over [port1, port2, port3, node]; the
    // node is eliminated by its Schur complement. A zero-length input line
    // merges port 1 onto the node instead (its admittance form is singular).
    let y3 = if design.input_line().length() == 0.0 {
        let mut y = [[c(0.0, 0.0); 3]; 3];
        y[0][0] += y_a[0][0] + y_b[0][0] + y_junction;
        y[0][1] += y_a[0][1];
        y[1][0] += y_a[1][0];
        y[1][1] += y_a[1][1];
        y[0][2] += y_b[0][1];
        y[2][0] += y_b[1][0];
        y[2][2] += y_b[1][1];
        y
    } else {
        let y_in = abcd_to_y(&line_abcd(design.input_line(), freq)?)?;
        let mut y = [[c(0.0, 0.0); 4]; 4];
        y[0][0] += y_in[0][0];
        y[0][3] += y_in[0][1];
        y[3][0] += y_in[1][0];
        y[3][3] += y_in[1][1];
        y[3][3] += y_a[0][0];
        y[3][1] += y_a[0][1];
        y[1][3] += y_a[1][0];
        y[1][1] += y_a[1][1];
        y[3][3] += y_b[0][0];
        y[3][2] += y_b[0][1];
        y[2][3] += y_b[1][0];
        y[2][2] += y_b[1][1];
        y[3][3] += y_junction;
        if y[3][3].norm_sqr() == 0.0 {
            return Err(NetworkError::SingularConversion { freq });
        }
        let mut reduced = [[c(0.0, 0.0); 3]; 3];
        for (i, row) in reduced.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = y[i][j] - y[i][3] * y[3][j] / y[3][3];
            }
        }
        reduced
    };

    let z = design.spec().system_impedance();
    let mut plus = [[c(0.0, 0.0); 3]; 3]; // I + z Y
    let mut minus = [[c(0.0, 0.0); 3]; 3]; // I - z Y
    for i in 0..3 {
        for j in 0..3 {
            let eye = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
            plus[i][j] = eye + z * y3[i][j];
            minus[i][j] = eye - z * y3[i][j];
        }
    }
    let s = solve_3x3(plus, minus, freq)?;
    if s.iter()
        .flatten()
        .any(|v| !v.re.is_finite() || !v.im.is_finite())
    {
        return Err(NetworkError::NonFiniteResult { freq });
    }
    Ok(s)
}

/// Scattering parameters of the divider over a frequency grid, with an ideal
/// junction. Reference impedance is the design's system impedance.
pub fn assemble_divider_s(
    design: &DividerDesign,
    grid: &FrequencyGrid,
) -> Result<SParamBlock, NetworkError> {
    assemble_divider_s_with(design, grid, &JunctionModel::IDEAL)
}

/// Grid sweep with an explicit junction model. Each frequency point is an
/// independent pure evaluation, so results do not depend on sweep order.
pub fn assemble_divider_s_with(
    design: &DividerDesign,
    grid: &FrequencyGrid,
    junction: &JunctionModel,
) -> Result<SParamBlock, NetworkError> {
    let mut data = Vec::with_capacity(grid.points() * 9);
    for freq in grid.iter() {
        let s = assemble_at_with(design, freq, junction)?;
        data.extend(s.iter().flatten().copied());
    }
    SParamBlock::new(grid.clone(), design.spec().system_impedance(), 3, data)
}
