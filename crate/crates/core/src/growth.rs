//! Expected value versus long-run growth for the `(a, b)` strategy family.
//!
//! Wealth after one experiment is `(1-a)(1-b)` on heads and `(1+a)(1+b)^2`
//! on tails. Maximizing the average of those two numbers says "bet
//! everything"; maximizing their geometric mean, the factor wealth actually
//! compounds by over many runs, gives `a = 0, b = 1/3`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::types::{check_range, Strategy};

/// Values within this distance are treated as tied on a grid.
pub const GRID_TIE_TOLERANCE: f64 = 1e-12;

/// Gradient ascent gives up after this many iterations.
pub const GRADIENT_ITERATION_CAP: usize = 10_000;

/// Fixed interior starting point for gradient ascent.
pub const GRADIENT_START: (f64, f64) = (0.5, 0.5);

/// Expected end-of-experiment wealth ratio, `((1-a)(1-b) + (1+a)(1+b)^2) / 2`.
pub fn expected_value(s: Strategy) -> f64 {
    let (a, b) = (s.a(), s.b());
    ((1.0 - a) * (1.0 - b) + (1.0 + a) * (1.0 + b) * (1.0 + b)) / 2.0
}

/// Wealth ratio after one heads run and one tails run.
pub fn two_run_multiplier(s: Strategy) -> f64 {
    let (a, b) = (s.a(), s.b());
    // Grouped so the result is exactly even in `a`.
    ((1.0 - a) * (1.0 + a)) * ((1.0 - b) * (1.0 + b) * (1.0 + b))
}

/// Per-experiment wealth multiplier, the square root of
/// [`two_run_multiplier`]. Zero when any factor vanishes.
pub fn experiment_multiplier(s: Strategy) -> f64 {
    two_run_multiplier(s).sqrt()
}

/// `ln` of [`experiment_multiplier`], summed factor by factor; `-inf` on the
/// boundary where a factor is zero.
pub fn log_multiplier(s: Strategy) -> f64 {
    let (a, b) = (s.a(), s.b());
    0.5 * (ln0(1.0 - a) + ln0(1.0 + a) + ln0(1.0 - b) + 2.0 * ln0(1.0 + b))
}

/// Analytic gradient of [`log_multiplier`] with respect to `(a, b)`.
///
/// Only meaningful on the open box; the components diverge at the edges.
pub fn log_multiplier_gradient(s: Strategy) -> [f64; 2] {
    let (a, b) = (s.a(), s.b());
    [
        0.5 * (1.0 / (1.0 + a) - 1.0 / (1.0 - a)),
        0.5 * (2.0 / (1.0 + b) - 1.0 / (1.0 - b)),
    ]
}

fn ln0(x: f64) -> f64 {
    if x <= 0.0 {
        f64::NEG_INFINITY
    } else {
        x.ln()
    }
}

/// Kelly fraction at 1:1 odds, `p - (1 - p)`. Negative means bet on heads.
///
/// Callers pass a probability in `[0, 1]`.
pub fn kelly_fraction_even_odds(p_tails: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p_tails), "p_tails = {p_tails}");
    2.0 * p_tails - 1.0
}

/// The probability of tails implied by betting `fraction` at 1:1 odds.
/// Inverse of [`kelly_fraction_even_odds`].
pub fn infer_probability(fraction: f64) -> f64 {
    debug_assert!((-1.0..=1.0).contains(&fraction), "fraction = {fraction}");
    (1.0 + fraction) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Grid,
    Gradient,
}

/// How to search for the growth-optimal strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthMethod {
    ClosedForm,
    /// Exhaustive search over a lattice on `[-1, 1]^2`.
    Grid { resolution: f64 },
    /// Gradient ascent on the log multiplier until the gradient norm drops
    /// below `tolerance`.
    Gradient { tolerance: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub strategy: Strategy,
    pub objective_value: f64,
    pub method: Method,
    pub evaluations: usize,
}

pub fn optimize_growth(method: GrowthMethod) -> Result<OptimizationResult> {
    match method {
        GrowthMethod::ClosedForm => {
            // d/da of ln((1-a)(1+a)) vanishes at a = 0; d/db of
            // ln((1-b)(1+b)^2) vanishes where 2(1-b) = 1+b.
            let strategy = Strategy::new(0.0, 1.0 / 3.0)?;
            Ok(OptimizationResult {
                strategy,
                objective_value: experiment_multiplier(strategy),
                method: Method::ClosedForm,
                evaluations: 1,
            })
        }
        GrowthMethod::Grid { resolution } => {
            let lattice = checked_lattice(resolution)?;
            let (strategy, _, evaluations) = grid_argmax(&lattice, log_multiplier);
            Ok(OptimizationResult {
                strategy,
                objective_value: experiment_multiplier(strategy),
                method: Method::Grid,
                evaluations,
            })
        }
        GrowthMethod::Gradient { tolerance } => {
            let start = Strategy::new(GRADIENT_START.0, GRADIENT_START.1)?;
            gradient_ascent(start, tolerance, GRADIENT_ITERATION_CAP)
        }
    }
}

fn checked_lattice(resolution: f64) -> Result<Lattice> {
    if !(resolution > 0.0 && resolution <= 2.0) {
        return Err(Error::InvalidConfig(format!(
            "grid resolution must lie in (0, 2], got {resolution}"
        )));
    }
    Ok(Lattice::new(resolution))
}

/// Maximizes `objective` over the lattice squared. Ties within
/// [`GRID_TIE_TOLERANCE`] go to smaller `|a|`, then smaller `b`.
fn grid_argmax(lattice: &Lattice, objective: impl Fn(Strategy) -> f64 + Sync) -> (Strategy, f64, usize) {
    let points: Vec<f64> = lattice.points().collect();
    let best_per_row: Vec<(Strategy, f64)> = points
        .par_iter()
        .map(|&a| {
            points
                .iter()
                .map(|&b| {
                    let s = Strategy::new(a, b).expect("lattice point inside the box");
                    (s, objective(s))
                })
                .reduce(pick_better)
                .expect("non-empty lattice")
        })
        .collect();
    let (best, value) = best_per_row
        .into_iter()
        .reduce(pick_better)
        .expect("non-empty lattice");
    (best, value, points.len() * points.len())
}

fn pick_better(x: (Strategy, f64), y: (Strategy, f64)) -> (Strategy, f64) {
    let (vx, vy) = (x.1, y.1);
    let tied = vx == vy || (vx - vy).abs() <= GRID_TIE_TOLERANCE;
    if tied {
        let kx = (x.0.a().abs(), x.0.b());
        let ky = (y.0.a().abs(), y.0.b());
        if ky < kx {
            y
        } else {
            x
        }
    } else if vy > vx {
        y
    } else {
        x
    }
}

/// Backtracking (Armijo) gradient ascent on [`log_multiplier`].
pub fn gradient_ascent(start: Strategy, tolerance: f64, max_iterations: usize) -> Result<OptimizationResult> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "gradient tolerance must be positive, got {tolerance}"
        )));
    }
    const ARMIJO: f64 = 1e-4;
    let mut x = start;
    let mut fx = log_multiplier(x);
    if !fx.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "gradient ascent needs an interior start, got {start}"
        )));
    }
    let mut evaluations = 1;
    let mut norm = f64::INFINITY;
    for iteration in 0..max_iterations {
        let g = log_multiplier_gradient(x);
        let norm_sq = g[0] * g[0] + g[1] * g[1];
        norm = norm_sq.sqrt();
        if norm <= tolerance {
            return Ok(OptimizationResult {
                strategy: x,
                objective_value: fx.exp(),
                method: Method::Gradient,
                evaluations,
            });
        }
        let mut step = 1.0;
        loop {
            let candidate = Strategy::new(x.a() + step * g[0], x.b() + step * g[1]);
            let f_new = candidate.as_ref().map_or(f64::NEG_INFINITY, |&c| log_multiplier(c));
            evaluations += 1;
            // Near the optimum the predicted gain drops below the rounding
            // error of `fx`; allow that much slack or the step collapses.
            let slack = 4.0 * f64::EPSILON * fx.abs();
            if f_new >= fx + ARMIJO * step * norm_sq - slack {
                x = candidate.expect("finite objective implies valid strategy");
                fx = f_new;
                break;
            }
            step *= 0.5;
            if step < 1e-20 {
                // No ascent possible at f64 precision; report as stuck.
                return Err(Error::NonConvergence {
                    iterations: iteration + 1,
                    last: x,
                    gradient_norm: norm,
                });
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iterations,
        last: x,
        gradient_norm: norm,
    })
}

/// A stationary point of the expected-value polynomial and its type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub strategy: Strategy,
    pub value: f64,
    /// Determinant of the Hessian; negative means a saddle.
    pub hessian_determinant: f64,
}

/// Interior critical points of [`expected_value`].
///
/// `dEV/da = ((1+b)^2 - (1-b)) / 2` vanishes at `b = 0` or `b = -3`; then
/// `dEV/db = (2(1+a)(1+b) - (1-a)) / 2` fixes `a`. Only `(-1/3, 0)` is in the
/// box, and it is a saddle, so the maximum has to sit on the boundary.
pub fn expected_value_critical_points() -> Vec<CriticalPoint> {
    [0.0f64, -3.0]
        .into_iter()
        .filter_map(|b| {
            // 2(1+a)(1+b) = 1-a  =>  a = (1 - 2(1+b)) / (2(1+b) + 1)
            let a = (1.0 - 2.0 * (1.0 + b)) / (2.0 * (1.0 + b) + 1.0);
            let strategy = Strategy::new(a, b).ok()?;
            // EV_aa = 0, EV_ab = (1 + 2(1+b)) / 2, EV_bb = 1 + a
            let ev_ab = (1.0 + 2.0 * (1.0 + b)) / 2.0;
            let ev_bb = 1.0 + a;
            Some(CriticalPoint {
                strategy,
                value: expected_value(strategy),
                hessian_determinant: 0.0 * ev_bb - ev_ab * ev_ab,
            })
        })
        .collect()
}

/// Maximizes [`expected_value`] over the box by comparing interior critical
/// points, critical points along each edge, and the four corners.
pub fn optimize_expected_value() -> OptimizationResult {
    let mut candidates: Vec<Strategy> = expected_value_critical_points()
        .into_iter()
        .map(|c| c.strategy)
        .collect();
    for edge in [-1.0f64, 1.0] {
        // Edge a = const: EV is quadratic in b with vertex
        // 1 + b = (1 - a) / (2(1 + a)). Edges b = const are linear in a.
        if edge > -1.0 {
            let b = (1.0 - edge) / (2.0 * (1.0 + edge)) - 1.0;
            if let Ok(s) = Strategy::new(edge, b) {
                candidates.push(s);
            }
        }
        for other in [-1.0, 1.0] {
            candidates.push(Strategy::new(edge, other).expect("corner"));
        }
    }
    let evaluations = candidates.len();
    let (strategy, objective_value) = candidates
        .into_iter()
        .map(|s| (s, expected_value(s)))
        .reduce(pick_better)
        .expect("corners are always candidates");
    OptimizationResult {
        strategy,
        objective_value,
        method: Method::ClosedForm,
        evaluations,
    }
}

/// Lattice cross-check for [`optimize_expected_value`].
pub fn optimize_expected_value_grid(resolution: f64) -> Result<OptimizationResult> {
    let lattice = checked_lattice(resolution)?;
    let (strategy, objective_value, evaluations) = grid_argmax(&lattice, expected_value);
    Ok(OptimizationResult {
        strategy,
        objective_value,
        method: Method::Grid,
        evaluations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCell {
    pub a: f64,
    pub b: f64,
    pub multiplier: f64,
}

/// [`experiment_multiplier`] sampled on an inclusive rectangular lattice,
/// row-major in `a` then `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    pub a_values: Vec<f64>,
    pub b_values: Vec<f64>,
    pub cells: Vec<SurfaceCell>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceBounds {
    pub a_min: f64,
    pub a_max: f64,
    pub b_min: f64,
    pub b_max: f64,
}

impl SurfaceBounds {
    pub const FULL: SurfaceBounds = SurfaceBounds {
        a_min: -1.0,
        a_max: 1.0,
        b_min: -1.0,
        b_max: 1.0,
    };
}

/// `resolution` is the number of samples per axis.
pub fn surface_grid(bounds: SurfaceBounds, resolution: usize) -> Result<SurfaceGrid> {
    let SurfaceBounds {
        a_min,
        a_max,
        b_min,
        b_max,
    } = bounds;
    for (field, v) in [("a_min", a_min), ("a_max", a_max), ("b_min", b_min), ("b_max", b_max)] {
        check_range(field, v, -1.0, 1.0)?;
    }
    if !(a_min < a_max && b_min < b_max) {
        return Err(Error::InvalidConfig(format!(
            "degenerate surface bounds a in [{a_min}, {a_max}], b in [{b_min}, {b_max}]"
        )));
    }
    if resolution < 2 {
        return Err(Error::InvalidConfig(format!(
            "surface resolution must be at least 2 per axis, got {resolution}"
        )));
    }
    let axis = |lo: f64, hi: f64| -> Vec<f64> {
        let n = (resolution - 1) as f64;
        (0..resolution)
            .map(|i| {
                if i == resolution - 1 {
                    hi
                } else {
                    lo + (hi - lo) * (i as f64) / n
                }
            })
            .collect()
    };
    let a_values = axis(a_min, a_max);
    let b_values = axis(b_min, b_max);
    let cells = a_values
        .par_iter()
        .flat_map_iter(|&a| {
            b_values.iter().map(move |&b| {
                let s = Strategy::new(a, b).expect("bounds checked");
                SurfaceCell {
                    a,
                    b,
                    multiplier: experiment_multiplier(s),
                }
            })
        })
        .collect();
    Ok(SurfaceGrid {
        a_values,
        b_values,
        cells,
    })
}

impl SurfaceGrid {
    /// The cell with the largest multiplier; ties go to smaller `|a|`, then
    /// smaller `b`.
    pub fn argmax(&self) -> SurfaceCell {
        *self
            .cells
            .iter()
            .reduce(|x, y| {
                let sx = Strategy::new(x.a, x.b).expect("cell in box");
                let sy = Strategy::new(y.a, y.b).expect("cell in box");
                if pick_better((sx, x.multiplier), (sy, y.multiplier)).0 == sy {
                    y
                } else {
                    x
                }
            })
            .expect("grid has at least 4 cells")
    }

    /// The cell closest (Euclidean) to `(a, b)`.
    pub fn nearest(&self, a: f64, b: f64) -> SurfaceCell {
        let d = |c: &SurfaceCell| (c.a - a).powi(2) + (c.b - b).powi(2);
        *self
            .cells
            .iter()
            .min_by(|x, y| d(x).total_cmp(&d(y)))
            .expect("grid has at least 4 cells")
    }

    /// CSV with header `a,b,multiplier`, 12 significant digits per value.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "a,b,multiplier")?;
        for c in &self.cells {
            writeln!(
                out,
                "{},{},{}",
                format_significant(c.a, 12),
                format_significant(c.b, 12),
                format_significant(c.multiplier, 12)
            )?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Formats like C's `%.{digits}g`: `digits` significant digits, trailing
/// zeros dropped, scientific notation only for very large or small values.
pub fn format_significant(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        return format!("{}e{}", trim_zeros(mantissa), exp);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(a: f64, b: f64) -> Strategy {
        Strategy::new(a, b).unwrap()
    }

    #[test]
    fn expected_value_examples() {
        assert_eq!(expected_value(s(0.0, 0.0)), 1.0);
        assert_eq!(expected_value(s(1.0, 1.0)), 4.0);
        // 11/9 by exact rationals: ((1)(2/3) + (1)(16/9)) / 2.
        assert!((expected_value(s(0.0, 1.0 / 3.0)) - 11.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn two_run_examples() {
        assert_eq!(two_run_multiplier(s(0.0, 0.0)), 1.0);
        assert!((two_run_multiplier(s(0.0, 1.0 / 3.0)) - 32.0 / 27.0).abs() < 1e-15);
        assert_eq!(two_run_multiplier(s(1.0, 0.0)), 0.0);
    }

    #[test]
    fn experiment_multiplier_examples() {
        assert_eq!(experiment_multiplier(s(0.0, 0.0)), 1.0);
        assert!((experiment_multiplier(s(0.0, 1.0 / 3.0)) - 1.088_662_107_903_635_5).abs() < 1e-15);
        assert!((experiment_multiplier(s(0.5, 0.0)) - 0.866_025_403_784_438_6).abs() < 1e-15);
        assert_eq!(experiment_multiplier(s(1.0, 1.0)), 0.0);
    }

    #[test]
    fn log_multiplier_boundary_is_neg_infinity() {
        assert_eq!(log_multiplier(s(1.0, 0.2)), f64::NEG_INFINITY);
        assert_eq!(log_multiplier(s(0.0, -1.0)), f64::NEG_INFINITY);
        assert_eq!(log_multiplier(s(0.0, 0.0)), 0.0);
    }

    #[test]
    fn kelly_examples() {
        assert!((kelly_fraction_even_odds(2.0 / 3.0) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(kelly_fraction_even_odds(0.5), 0.0);
        assert_eq!(kelly_fraction_even_odds(1.0), 1.0);
        assert!((infer_probability(1.0 / 3.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(infer_probability(0.0), 0.5);
        assert_eq!(infer_probability(-1.0), 0.0);
    }

    #[test]
    fn closed_form_optimum() {
        let r = optimize_growth(GrowthMethod::ClosedForm).unwrap();
        assert_eq!(r.strategy.a(), 0.0);
        assert_eq!(r.strategy.b(), 1.0 / 3.0);
        assert!((r.objective_value - (32.0f64 / 27.0).sqrt()).abs() < 1e-12);
        assert_eq!(r.method, Method::ClosedForm);
    }

    #[test]
    fn grid_on_thirds_hits_optimum_exactly() {
        let r = optimize_growth(GrowthMethod::Grid { resolution: 1.0 / 3.0 }).unwrap();
        assert_eq!(r.strategy, s(0.0, 1.0 / 3.0));
        assert_eq!(r.evaluations, 49);
    }

    #[test]
    fn grid_hundredths_within_resolution() {
        let r = optimize_growth(GrowthMethod::Grid { resolution: 0.01 }).unwrap();
        assert_eq!(r.strategy.a(), 0.0);
        assert!((r.strategy.b() - 1.0 / 3.0).abs() <= 0.01);
        assert!((r.objective_value - experiment_multiplier(r.strategy)).abs() < 1e-12);
    }

    #[test]
    fn gradient_converges() {
        let r = optimize_growth(GrowthMethod::Gradient { tolerance: 1e-10 }).unwrap();
        assert!(r.strategy.a().abs() < 1e-8);
        assert!((r.strategy.b() - 1.0 / 3.0).abs() < 1e-8);
        assert!((r.objective_value - experiment_multiplier(r.strategy)).abs() < 1e-12);
    }

    #[test]
    fn gradient_cap_reports_last_iterate() {
        match gradient_ascent(s(0.5, 0.5), 1e-12, 1) {
            Err(Error::NonConvergence { iterations, last, .. }) => {
                assert_eq!(iterations, 1);
                assert_ne!(last, s(0.5, 0.5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_optimizer_parameters() {
        assert!(optimize_growth(GrowthMethod::Grid { resolution: 0.0 }).is_err());
        assert!(optimize_growth(GrowthMethod::Gradient { tolerance: -1.0 }).is_err());
        assert!(gradient_ascent(s(1.0, 0.0), 1e-6, 10).is_err());
    }

    #[test]
    fn expected_value_optimum_on_boundary() {
        let r = optimize_expected_value();
        assert_eq!(r.strategy, s(1.0, 1.0));
        assert_eq!(r.objective_value, 4.0);
        let crit = expected_value_critical_points();
        assert_eq!(crit.len(), 1);
        assert!((crit[0].strategy.a() + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(crit[0].strategy.b(), 0.0);
        assert!(crit[0].hessian_determinant < 0.0, "interior point is a saddle");
    }

    #[test]
    fn expected_value_grid_agrees() {
        let r = optimize_expected_value_grid(0.05).unwrap();
        assert_eq!(r.strategy, s(1.0, 1.0));
        assert_eq!(r.objective_value, 4.0);
    }

    #[test]
    fn surface_examples() {
        let g = surface_grid(SurfaceBounds::FULL, 201).unwrap();
        assert_eq!(g.cells.len(), 201 * 201);
        let best = g.argmax();
        assert_eq!(best.a, 0.0);
        assert!((best.b - 1.0 / 3.0).abs() <= 0.01);
        assert_eq!(g.nearest(0.0, 0.0).multiplier, 1.0);
        assert_eq!(g.nearest(1.0, 1.0).multiplier, 0.0);
        // row-major in a then b
        assert_eq!(g.cells[1].a, -1.0);
        assert_eq!(g.cells[201].a, g.a_values[1]);
    }

    #[test]
    fn surface_validation() {
        let bad = SurfaceBounds {
            a_min: 0.5,
            a_max: 0.5,
            ..SurfaceBounds::FULL
        };
        assert!(surface_grid(bad, 10).is_err());
        assert!(surface_grid(SurfaceBounds::FULL, 1).is_err());
        let outside = SurfaceBounds {
            b_max: 1.5,
            ..SurfaceBounds::FULL
        };
        assert!(surface_grid(outside, 10).is_err());
    }

    #[test]
    fn csv_layout() {
        let g = surface_grid(SurfaceBounds::FULL, 3).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "a,b,multiplier");
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[1], "-1,-1,0");
        assert_eq!(lines[5], "0,0,1");
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(1.0886621079036347, 12), "1.0886621079");
        assert_eq!(format_significant(0.33, 12), "0.33");
        assert_eq!(format_significant(-0.866025403784438, 12), "-0.866025403784");
        assert_eq!(format_significant(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_significant(1e-9, 12), "1e-9");
        assert_eq!(format_significant(0.0, 12), "0");
        assert_eq!(format_significant(123456789012345.0, 12), "1.23456789012e14");
    }

    mod props {
        use super::*;
        use proptest::prelude::{prop_assert, prop_assert_eq, proptest};

        proptest! {
            #[test]
            fn presleep_sign_symmetry(a in -1.0f64..=1.0, b in -1.0f64..=1.0) {
                prop_assert_eq!(experiment_multiplier(s(a, b)), experiment_multiplier(s(-a, b)));
            }

            #[test]
            fn presleep_bet_alone_never_helps(a in -1.0f64..=1.0) {
                let m = experiment_multiplier(s(a, 0.0));
                prop_assert!(m <= 1.0);
                if a != 0.0 {
                    prop_assert!(m < 1.0);
                }
            }

            #[test]
            fn kelly_round_trip(p in 0.0f64..=1.0) {
                prop_assert!((infer_probability(kelly_fraction_even_odds(p)) - p).abs() <= 1e-15);
            }

            #[test]
            fn gradient_matches_finite_differences(a in -0.95f64..0.95, b in -0.95f64..0.95) {
                let h = 1e-6;
                let g = log_multiplier_gradient(s(a, b));
                let fd = [
                    (log_multiplier(s(a + h, b)) - log_multiplier(s(a - h, b))) / (2.0 * h),
                    (log_multiplier(s(a, b + h)) - log_multiplier(s(a, b - h))) / (2.0 * h),
                ];
                for k in 0..2 {
                    let scale = g[k].abs().max(1e-3);
                    prop_assert!((g[k] - fd[k]).abs() / scale < 1e-5, "k={} g={} fd={}", k, g[k], fd[k]);
                }
            }
        }
    }
}
