//! Derivative-free tuning of the transformer section against in-band
//! reflection.
//!
//! The optimizer runs Nelder-Mead over one or two geometric variables
//! (transformer width, transformer length), both applied symmetrically to
//! the two arms. Candidate points are clamped to the bound box before
//! evaluation, the initial simplex is the base point plus a fixed 2% offset
//! per variable, and every evaluated point is recorded in an iteration
//! trace, so runs are reproducible bit for bit and bound compliance can be
//! audited after the fact.
//!
//! Evaluations within one simplex step are independent and could run
//! concurrently; this implementation keeps them sequential, which fixes the
//! reduction order and costs nothing at this problem size.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::divider::{DividerDesign, DividerError};
use crate::microstrip::{MAX_ASPECT_RATIO, MIN_ASPECT_RATIO};
use crate::network::{assemble_at, ComplexScalar, NetworkError};

/// Sample count for a finite-width optimization band; a degenerate band
/// (`band_lo == band_hi`) evaluates that single frequency.
pub const BAND_SAMPLES: usize = 41;
/// Floor for the objective budget.
pub const MIN_BUDGET: usize = 10;
/// Default objective budget.
pub const DEFAULT_BUDGET: usize = 500;
/// Default relative convergence tolerance on the simplex objective spread.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum OptimizeError {
    #[error("band {band_lo}..{band_hi} Hz must be finite, positive, and ordered")]
    InvalidBand { band_lo: f64, band_hi: f64 },
    #[error("no variables selected")]
    NoVariables,
    #[error("variable {0:?} listed twice")]
    DuplicateVariable(Variable),
    #[error("{variables} variables but {bounds} bound pairs")]
    BoundsMismatch { variables: usize, bounds: usize },
    #[error("bounds ({lo}, {hi}) for {variable:?} are infeasible: {reason}")]
    InfeasibleBounds {
        variable: Variable,
        lo: f64,
        hi: f64,
        reason: &'static str,
    },
    #[error("budget {budget} is below the minimum of {MIN_BUDGET}")]
    InvalidBudget { budget: usize },
    #[error("tolerance {tolerance} must be finite and positive")]
    InvalidTolerance { tolerance: f64 },
    #[error(transparent)]
    Divider(#[from] DividerError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// Geometry degree of freedom the optimizer may move. Either one applies to
/// both arms at once, preserving the mirror symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variable {
    TransformerWidth,
    TransformerLength,
}

/// Reduction applied to the in-band input reflection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObjectiveKind {
    /// Worst-case linear |S11| over the band.
    MinimaxS11,
    /// Mean of |S11|^2 over the band.
    MeanSquareS11,
}

/// A fully validated tuning problem.
#[derive(Debug, Clone)]
pub struct OptimizationProblem {
    base: DividerDesign,
    band_lo: f64,
    band_hi: f64,
    variables: Vec<Variable>,
    bounds: Vec<(f64, f64)>,
    objective: ObjectiveKind,
    budget: usize,
    tolerance: f64,
}

impl OptimizationProblem {
    /// Problem with the default budget and tolerance. `bounds` pairs up
    /// with `variables`; width bounds must sit inside the validity window
    /// of the base substrate.
    pub fn new(
        base: DividerDesign,
        band_lo: f64,
        band_hi: f64,
        variables: Vec<Variable>,
        bounds: Vec<(f64, f64)>,
        objective: ObjectiveKind,
    ) -> Result<Self, OptimizeError> {
        if !band_lo.is_finite() || !band_hi.is_finite() || band_lo <= 0.0 || band_lo > band_hi {
            return Err(OptimizeError::InvalidBand { band_lo, band_hi });
        }
        if variables.is_empty() {
            return Err(OptimizeError::NoVariables);
        }
        if variables.len() == 2 && variables[0] == variables[1] {
            return Err(OptimizeError::DuplicateVariable(variables[0]));
        }
        if variables.len() != bounds.len() {
            return Err(OptimizeError::BoundsMismatch {
                variables: variables.len(),
                bounds: bounds.len(),
            });
        }
        let h = base.spec().substrate().height();
        for (&variable, &(lo, hi)) in variables.iter().zip(&bounds) {
            let reason = if !lo.is_finite() || !hi.is_finite() {
                Some("bounds must be finite")
            } else if lo >= hi {
                Some("lower bound must be below upper bound")
            } else {
                match variable {
                    Variable::TransformerWidth
                        if lo < MIN_ASPECT_RATIO * h || hi > MAX_ASPECT_RATIO * h =>
                    {
                        Some("width bounds must stay inside the aspect-ratio window")
                    }
                    Variable::TransformerLength if lo < 0.0 => Some("length cannot be negative"),
                    _ => None,
                }
            };
            if let Some(reason) = reason {
                return Err(OptimizeError::InfeasibleBounds {
                    variable,
                    lo,
                    hi,
                    reason,
                });
            }
        }
        Ok(Self {
            base,
            band_lo,
            band_hi,
            variables,
            bounds,
            objective,
            budget: DEFAULT_BUDGET,
            tolerance: DEFAULT_TOLERANCE,
        })
    }

    pub fn with_budget(mut self, budget: usize) -> Result<Self, OptimizeError> {
        if budget < MIN_BUDGET {
            return Err(OptimizeError::InvalidBudget { budget });
        }
        self.budget = budget;
        Ok(self)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self, OptimizeError> {
        if !tolerance.is_finite() || tolerance <= 0.0 {
            return Err(OptimizeError::InvalidTolerance { tolerance });
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn base(&self) -> &DividerDesign {
        &self.base
    }

    pub fn band(&self) -> (f64, f64) {
        (self.band_lo, self.band_hi)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn objective(&self) -> ObjectiveKind {
        self.objective
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Frequencies the objective integrates over.
    pub fn band_frequencies(&self) -> Vec<f64> {
        if self.band_lo == self.band_hi {
            return vec![self.band_lo];
        }
        let step = (self.band_hi - self.band_lo) / (BAND_SAMPLES - 1) as f64;
        let mut freqs: Vec<f64> = (0..BAND_SAMPLES)
            .map(|k| self.band_lo + k as f64 * step)
            .collect();
        freqs[BAND_SAMPLES - 1] = self.band_hi;
        freqs
    }
}

/// Reduces a set of input-reflection samples to a single figure. Empty
/// input reduces to zero.
pub fn reflection_objective(s11: &[ComplexScalar], objective: ObjectiveKind) -> f64 {
    match objective {
        ObjectiveKind::MinimaxS11 => s11.iter().map(|s| s.norm()).fold(0.0, f64::max),
        ObjectiveKind::MeanSquareS11 => {
            if s11.is_empty() {
                0.0
            } else {
                s11.iter().map(|s| s.norm_sqr()).sum::<f64>() / s11.len() as f64
            }
        }
    }
}

/// Assembles the design at each band frequency and reduces |S11|.
pub fn evaluate_objective(
    design: &DividerDesign,
    band: &[f64],
    objective: ObjectiveKind,
) -> Result<f64, OptimizeError> {
    let mut s11 = Vec::with_capacity(band.len());
    for &freq in band {
        let s = assemble_at(design, freq)?;
        s11.push(s[0][0]);
    }
    Ok(reflection_objective(&s11, objective))
}

/// One optimizer iteration: cumulative evaluation count, the incumbent, and
/// every point evaluated during the iteration (for bound audits). Record 0
/// covers the initial simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub evaluations: usize,
    pub best_objective: f64,
    pub best_point: Vec<f64>,
    pub candidates: Vec<Vec<f64>>,
}

/// Outcome of a tuning run. `converged` is false when the evaluation budget
/// ran out first; the design is still the best point seen.
#[derive(Debug, Clone)]
pub struct OptimizeResult {
    pub design: DividerDesign,
    pub objective: f64,
    pub evaluations: usize,
    pub converged: bool,
    pub trace: Vec<TraceRecord>,
}

/// Applies a candidate point to the base design, variable by variable.
fn apply_point(
    base: &DividerDesign,
    variables: &[Variable],
    point: &[f64],
) -> Result<DividerDesign, DividerError> {
    let mut design = base.clone();
    for (variable, &value) in variables.iter().zip(point) {
        design = match variable {
            Variable::TransformerWidth => design.with_transformer_width(value)?,
            Variable::TransformerLength => design.with_transformer_length(value)?,
        };
    }
    Ok(design)
}

fn read_point(design: &DividerDesign, variables: &[Variable]) -> Vec<f64> {
    variables
        .iter()
        .map(|v| match v {
            Variable::TransformerWidth => design.transformer_a().width(),
            Variable::TransformerLength => design.transformer_a().length(),
        })
        .collect()
}

fn clamp_point(point: &mut [f64], bounds: &[(f64, f64)]) {
    for (x, &(lo, hi)) in point.iter_mut().zip(bounds) {
        *x = x.clamp(lo, hi);
    }
}

struct Evaluator<'a> {
    problem: &'a OptimizationProblem,
    band: Vec<f64>,
    evaluations: usize,
    best_point: Vec<f64>,
    best_objective: f64,
    candidates: Vec<Vec<f64>>,
}

impl<'a> Evaluator<'a> {
    fn exhausted(&self) -> bool {
        self.evaluations >= self.problem.budget
    }

    /// Evaluates a clamped candidate, tracking the incumbent. Strict
    /// improvement is required to displace it, so ties keep the earlier
    /// (base-first) point.
    fn eval(&mut self, point: &[f64]) -> Result<f64, OptimizeError> {
        let design = apply_point(&self.problem.base, &self.problem.variables, point)?;
        let value = evaluate_objective(&design, &self.band, self.problem.objective)?;
        self.evaluations += 1;
        self.candidates.push(point.to_vec());
        if value < self.best_objective {
            self.best_objective = value;
            self.best_point = point.to_vec();
        }
        Ok(value)
    }
}

/// Nelder-Mead over the selected variables: standard reflect/expand/
/// contract/shrink coefficients (1, 2, 0.5, 0.5), candidates clamped to the
/// bound box, deterministic for identical problems. Stops when the relative
/// objective spread of the simplex falls under the tolerance or the budget
/// runs out (non-fatal: the result is flagged, not an error).
pub fn optimize(problem: &OptimizationProblem) -> Result<OptimizeResult, OptimizeError> {
    let n = problem.variables.len();
    let mut x0 = read_point(&problem.base, &problem.variables);
    clamp_point(&mut x0, &problem.bounds);

    let mut ev = Evaluator {
        problem,
        band: problem.band_frequencies(),
        evaluations: 0,
        best_point: x0.clone(),
        best_objective: f64::INFINITY,
        candidates: Vec::new(),
    };

    // Initial simplex: base plus a 2% offset per variable (away from a
    // binding bound if need be).
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = ev.eval(&x0)?;
    simplex.push((x0.clone(), f0));
    for i in 0..n {
        let (lo, hi) = problem.bounds[i];
        let scale = if x0[i] != 0.0 { x0[i].abs() } else { hi - lo };
        let mut v = x0.clone();
        v[i] = (x0[i] + 0.02 * scale).clamp(lo, hi);
        if v[i] == x0[i] {
            v[i] = (x0[i] - 0.02 * scale).clamp(lo, hi);
        }
        let fv = ev.eval(&v)?;
        simplex.push((v, fv));
    }

    let mut trace: Vec<TraceRecord> = Vec::new();
    let mut iteration = 0;
    let mut converged = false;

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        trace.push(TraceRecord {
            iteration,
            evaluations: ev.evaluations,
            best_objective: ev.best_objective,
            best_point: ev.best_point.clone(),
            candidates: std::mem::take(&mut ev.candidates),
        });

        let spread = (simplex[n].1 - simplex[0].1) / simplex[0].1.abs().max(1e-9);
        if spread <= problem.tolerance {
            converged = true;
            break;
        }
        if ev.exhausted() {
            break;
        }
        iteration += 1;

        // Centroid of all vertices but the worst.
        let mut centroid = vec![0.0; n];
        for (v, _) in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let worst = simplex[n].clone();

        let shifted = |t: f64| -> Vec<f64> {
            let mut p: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect();
            clamp_point(&mut p, &problem.bounds);
            p
        };

        let reflected = shifted(1.0);
        let f_r = ev.eval(&reflected)?;
        if f_r < simplex[0].1 {
            // Best so far: try to go further in the same direction.
            if ev.exhausted() {
                simplex[n] = (reflected, f_r);
                continue;
            }
            let expanded = shifted(2.0);
            let f_e = ev.eval(&expanded)?;
            simplex[n] = if f_e < f_r {
                (expanded, f_e)
            } else {
                (reflected, f_r)
            };
        } else if f_r < simplex[n - 1].1 {
            simplex[n] = (reflected, f_r);
        } else {
            if !ev.exhausted() {
                let contracted = if f_r < worst.1 {
                    shifted(0.5) // outside, toward the reflected point
                } else {
                    shifted(-0.5) // inside, back toward the worst vertex
                };
                let f_c = ev.eval(&contracted)?;
                if f_c < f_r.min(worst.1) {
                    simplex[n] = (contracted, f_c);
                    continue;
                }
            }
            // Shrink everything toward the best vertex.
            for i in 1..=n {
                if ev.exhausted() {
                    break;
                }
                let mut v: Vec<f64> = simplex[0]
                    .0
                    .iter()
                    .zip(&simplex[i].0)
                    .map(|(b, x)| b + 0.5 * (x - b))
                    .collect();
                clamp_point(&mut v, &problem.bounds);
                let fv = ev.eval(&v)?;
                simplex[i] = (v, fv);
            }
        }
    }

    let best_point = ev.best_point.clone();
    let objective = ev.best_objective;
    let evaluations = ev.evaluations;
    // A best point identical to the base keeps the base design verbatim.
    let design = if best_point == x0 && x0 == read_point(&problem.base, &problem.variables) {
        problem.base.clone()
    } else {
        apply_point(&problem.base, &problem.variables, &best_point)?
    };
    Ok(OptimizeResult {
        design,
        objective,
        evaluations,
        converged,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divider::{synthesize_divider, DividerSpec};
    use crate::substrate::Substrate;
    use approx::assert_relative_eq;

    fn lossless_base() -> DividerDesign {
        let substrate = Substrate::lossless(3.0, 1.6e-3, 17e-6).unwrap();
        synthesize_divider(&DividerSpec::standard(28e9, substrate).unwrap()).unwrap()
    }

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    #[test]
    fn objective_reduction_on_perfect_match_is_zero() {
        let zeros = vec![c(0.0, 0.0); 5];
        assert_eq!(reflection_objective(&zeros, ObjectiveKind::MinimaxS11), 0.0);
        assert_eq!(
            reflection_objective(&zeros, ObjectiveKind::MeanSquareS11),
            0.0
        );
    }

    #[test]
    fn objective_reduction_matches_hand_values() {
        let samples = [c(0.3, 0.0), c(0.0, 0.4), c(0.1, 0.0)];
        assert_relative_eq!(
            reflection_objective(&samples, ObjectiveKind::MinimaxS11),
            0.4
        );
        assert_relative_eq!(
            reflection_objective(&samples, ObjectiveKind::MeanSquareS11),
            (0.09 + 0.16 + 0.01) / 3.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn centre_frequency_objective_of_synthesized_design_is_tiny() {
        let base = lossless_base();
        let v = evaluate_objective(&base, &[28e9], ObjectiveKind::MinimaxS11).unwrap();
        assert!(v <= 1e-6, "got {v}");
    }

    #[test]
    fn minimax_over_a_symmetric_band_peaks_at_the_edges() {
        let base = lossless_base();
        let band: Vec<f64> = (0..81).map(|k| 24e9 + k as f64 * 1e8).collect();
        let v = evaluate_objective(&base, &band, ObjectiveKind::MinimaxS11).unwrap();
        // Reflection grows monotonically away from centre, so the worst
        // case sits at the band edge; the model is symmetric about 28 GHz.
        let lo = assemble_at(&base, 24e9).unwrap()[0][0].norm();
        let hi = assemble_at(&base, 32e9).unwrap()[0][0].norm();
        assert_relative_eq!(v, lo, max_relative = 1e-9);
        assert_relative_eq!(lo, hi, max_relative = 1e-9);
        assert_relative_eq!(v, 0.078_430_683_866_2, max_relative = 1e-9);
    }

    #[test]
    fn problem_validation_rejects_bad_inputs() {
        let base = lossless_base();
        let w = base.transformer_a().width();
        let ok_bounds = vec![(0.5 * w, 2.0 * w)];
        let vars = vec![Variable::TransformerWidth];

        assert!(matches!(
            OptimizationProblem::new(
                base.clone(),
                32e9,
                24e9,
                vars.clone(),
                ok_bounds.clone(),
                ObjectiveKind::MinimaxS11
            ),
            Err(OptimizeError::InvalidBand { .. })
        ));
        assert!(matches!(
            OptimizationProblem::new(
                base.clone(),
                24e9,
                32e9,
                vec![],
                vec![],
                ObjectiveKind::MinimaxS11
            ),
            Err(OptimizeError::NoVariables)
        ));
        assert!(matches!(
            OptimizationProblem::new(
                base.clone(),
                24e9,
                32e9,
                vec![Variable::TransformerWidth, Variable::TransformerWidth],
                vec![ok_bounds[0], ok_bounds[0]],
                ObjectiveKind::MinimaxS11
            ),
            Err(OptimizeError::DuplicateVariable(_))
        ));
        assert!(matches!(
            OptimizationProblem::new(
                base.clone(),
                24e9,
                32e9,
                vars.clone(),
                vec![],
                ObjectiveKind::MinimaxS11
            ),
            Err(OptimizeError::BoundsMismatch { .. })
        ));
        // Width bounds outside the model's aspect-ratio window.
        assert!(matches!(
            OptimizationProblem::new(
                base.clone(),
                24e9,
                32e9,
                vars.clone(),
                vec![(1e-6, 2.0 * w)],
                ObjectiveKind::MinimaxS11
            ),
            Err(OptimizeError::InfeasibleBounds { .. })
        ));
        assert!(matches!(
            OptimizationProblem::new(
                base.clone(),
                24e9,
                32e9,
                vars.clone(),
                vec![(2.0 * w, 0.5 * w)],
                ObjectiveKind::MinimaxS11
            ),
            Err(OptimizeError::InfeasibleBounds { .. })
        ));
        let problem =
            OptimizationProblem::new(base, 24e9, 32e9, vars, ok_bounds, ObjectiveKind::MinimaxS11)
                .unwrap();
        assert!(matches!(
            problem.clone().with_budget(5),
            Err(OptimizeError::InvalidBudget { .. })
        ));
        assert!(matches!(
            problem.with_tolerance(-1.0),
            Err(OptimizeError::InvalidTolerance { .. })
        ));
    }

    #[test]
    fn degenerate_band_evaluates_one_frequency() {
        let base = lossless_base();
        let problem = OptimizationProblem::new(
            base,
            28e9,
            28e9,
            vec![Variable::TransformerLength],
            vec![(1e-3, 3e-3)],
            ObjectiveKind::MinimaxS11,
        )
        .unwrap();
        assert_eq!(problem.band_frequencies(), vec![28e9]);
    }

    #[test]
    fn already_optimal_base_stays_put() {
        let base = lossless_base();
        let problem = OptimizationProblem::new(
            base.clone(),
            28e9,
            28e9,
            vec![Variable::TransformerLength],
            vec![(1e-3, 3e-3)],
            ObjectiveKind::MinimaxS11,
        )
        .unwrap()
        .with_budget(200)
        .unwrap();
        let result = optimize(&problem).unwrap();
        assert!(result.objective <= 1e-6);
        let drift = (result.design.transformer_a().length() - base.transformer_a().length()).abs()
            / base.transformer_a().length();
        assert!(drift < 0.005, "length drifted {drift}");
    }

    #[test]
    fn perturbed_length_recovers_the_quarter_wave() {
        let base = lossless_base();
        let target = base.transformer_a().length();
        let detuned = base.with_transformer_length(1.1 * target).unwrap();
        let problem = OptimizationProblem::new(
            detuned,
            28e9,
            28e9,
            vec![Variable::TransformerLength],
            vec![(1e-3, 3e-3)],
            ObjectiveKind::MinimaxS11,
        )
        .unwrap()
        .with_budget(200)
        .unwrap();
        let result = optimize(&problem).unwrap();
        let recovered = result.design.transformer_a().length();
        assert!(
            (recovered - target).abs() / target < 0.005,
            "recovered {recovered}, want {target}"
        );
        assert!(result.evaluations <= 200);
        assert!(result.converged);
    }

    #[test]
    fn trace_is_monotone_and_bound_respecting() {
        let base = lossless_base();
        let target = base.transformer_a().length();
        let detuned = base.with_transformer_length(1.1 * target).unwrap();
        let w = detuned.transformer_a().width();
        let bounds = vec![(0.8 * w, 1.2 * w), (1e-3, 3e-3)];
        let problem = OptimizationProblem::new(
            detuned,
            26e9,
            30e9,
            vec![Variable::TransformerWidth, Variable::TransformerLength],
            bounds.clone(),
            ObjectiveKind::MeanSquareS11,
        )
        .unwrap()
        .with_budget(120)
        .unwrap();
        let result = optimize(&problem).unwrap();

        let mut last = f64::INFINITY;
        for record in &result.trace {
            assert!(record.best_objective <= last + 1e-15);
            last = record.best_objective;
            for point in &record.candidates {
                for (x, (lo, hi)) in point.iter().zip(&bounds) {
                    assert!(lo <= x && x <= hi, "candidate {x} outside [{lo}, {hi}]");
                }
            }
        }
        // Final objective never exceeds the initial one.
        assert!(result.objective <= result.trace[0].best_objective + 1e-18);
        // Evaluation counts line up: the last record saw every evaluation.
        assert_eq!(result.trace.last().unwrap().evaluations, result.evaluations);
    }

    #[test]
    fn identical_problems_produce_identical_runs() {
        let run = || {
            let base = lossless_base();
            let detuned = base
                .with_transformer_length(1.08 * base.transformer_a().length())
                .unwrap();
            let problem = OptimizationProblem::new(
                detuned,
                24e9,
                32e9,
                vec![Variable::TransformerLength],
                vec![(1e-3, 3e-3)],
                ObjectiveKind::MinimaxS11,
            )
            .unwrap()
            .with_budget(150)
            .unwrap();
            optimize(&problem).unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        assert_eq!(
            a.design.transformer_a().length().to_bits(),
            b.design.transformer_a().length().to_bits()
        );
    }

    #[test]
    fn tiny_budget_is_flagged_not_fatal() {
        let base = lossless_base();
        let detuned = base
            .with_transformer_length(1.3 * base.transformer_a().length())
            .unwrap();
        let initial = evaluate_objective(&detuned, &[28e9], ObjectiveKind::MinimaxS11).unwrap();
        let problem = OptimizationProblem::new(
            detuned,
            28e9,
            28e9,
            vec![Variable::TransformerLength],
            vec![(1e-3, 3e-3)],
            ObjectiveKind::MinimaxS11,
        )
        .unwrap()
        .with_budget(MIN_BUDGET)
        .unwrap()
        .with_tolerance(1e-14)
        .unwrap();
        let result = optimize(&problem).unwrap();
        assert!(!result.converged);
        assert!(result.evaluations <= MIN_BUDGET + 1);
        assert!(result.objective <= initial);
    }

    #[test]
    fn trace_records_serialize_to_json_lines() {
        let record = TraceRecord {
            iteration: 3,
            evaluations: 11,
            best_objective: 0.025,
            best_point: vec![2.2e-3],
            candidates: vec![vec![2.3e-3], vec![2.1e-3]],
        };
        let line = serde_json::to_string(&record).unwrap();
        assert!(!line.contains('\n'));
        let back: TraceRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(back, record);
    }
}
