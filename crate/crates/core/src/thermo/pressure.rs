use super::subsystem::{build_subsystem, check_irreducible_aperiodic, Bracket, MarkovSubsystem};
use crate::dyadic::{Potential, TorusPoint};
use crate::error::{Error, Result};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

/// Relative Collatz-Wielandt gap at which power iteration stops.
pub const POWER_TOLERANCE: f64 = 1e-12;

/// Iteration cap for power iteration.
pub const POWER_ITERATION_CAP: usize = 100_000;

/// Entries of the rescaled iterate below this are folded into the scaling.
const FOLD_BELOW: f64 = 1e-100;

/// Entries of `D^-1 A D` scaled by `exp(-c)` so that the largest is 1, and `c`.
fn rescaled_edges(successors: &[Vec<usize>], weights: &[f64], ls: &[f64]) -> (Vec<Vec<f64>>, f64) {
    let exponent = |i: usize, j: usize| weights[i] + ls[j] - ls[i];
    let c = (0..successors.len())
        .flat_map(|i| successors[i].iter().map(move |&j| exponent(i, j)))
        .fold(f64::NEG_INFINITY, f64::max);
    let edge = (0..successors.len())
        .map(|i| successors[i].iter().map(|&j| (exponent(i, j) - c).exp()).collect())
        .collect();
    (edge, c)
}

/// Bounds `[min_i (Av)_i / v_i, max_i (Av)_i / v_i]` on the Perron root of
/// `A[i][j] = exp(weights[i])` for `j` in `successors[i]`, in log form.
///
/// At large `|t|` the Perron vector spans more orders of magnitude than an
/// `f64` does, so the iteration runs on `D^-1 A D` with `D = diag(exp(log_scale))`
/// and moves small entries into `log_scale` as they appear. `log_scale` is
/// also the warm start and is left holding the log of the final vector.
fn log_perron_bounds(
    successors: &[Vec<usize>],
    weights: &[f64],
    log_scale: &mut [f64],
) -> Result<(f64, f64)> {
    let n = successors.len();
    let (mut edge, mut shift) = rescaled_edges(successors, weights, log_scale);
    let mut v = vec![1.0; n];
    let mut next = vec![0.0; n];
    let mut gap = f64::INFINITY;
    for _ in 0..POWER_ITERATION_CAP {
        let (mut lo, mut hi, mut top) = (f64::INFINITY, 0.0f64, 0.0f64);
        for i in 0..n {
            next[i] = successors[i].iter().zip(&edge[i]).map(|(&j, e)| e * v[j]).sum();
            let r = next[i] / v[i];
            lo = lo.min(r);
            hi = hi.max(r);
            top = top.max(next[i]);
        }
        gap = (hi - lo) / hi;
        if gap <= POWER_TOLERANCE {
            for (l, x) in log_scale.iter_mut().zip(&v) {
                *l += x.ln();
            }
            return Ok((lo.ln() + shift, hi.ln() + shift));
        }
        // Averaging with the previous vector damps the oscillation of
        // near-periodic chains without moving the Perron vector.
        let mut vmax = 0.0f64;
        for i in 0..n {
            v[i] = 0.5 * (v[i] + next[i] / top);
            vmax = vmax.max(v[i]);
        }
        let mut vmin = f64::INFINITY;
        for x in v.iter_mut() {
            *x /= vmax;
            vmin = vmin.min(*x);
        }
        if vmin < FOLD_BELOW {
            for (l, x) in log_scale.iter_mut().zip(v.iter_mut()) {
                *l += x.ln();
                *x = 1.0;
            }
            (edge, shift) = rescaled_edges(successors, weights, log_scale);
        }
    }
    Err(Error::PowerIterationStall {
        iterations: POWER_ITERATION_CAP,
        gap,
    })
}

/// Pressure bracket `(p_lower, p_upper)` of the recurrent part at `t`.
///
/// Each node is weighted by `exp(t w)` with `w` the end of its bracket that
/// makes `t w` smallest (lower) or largest (upper).
pub fn pressure(m: &MarkovSubsystem, t: f64) -> Result<(f64, f64)> {
    let (irreducible, aperiodic) = check_irreducible_aperiodic(m);
    if !(irreducible && aperiodic) {
        return Err(Error::HypothesisViolated(
            "pressure needs an irreducible aperiodic subsystem".into(),
        ));
    }
    let (succ, brackets) = m.recurrent_graph();
    pressure_on(&succ, &brackets, t, &mut Warm::new(succ.len()))
}

/// Log-scalings carried from one `t` to the next as warm starts.
struct Warm {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Warm {
    fn new(n: usize) -> Self {
        Warm {
            lower: vec![0.0; n],
            upper: vec![0.0; n],
        }
    }
}

fn pressure_on(succ: &[Vec<usize>], brackets: &[Bracket], t: f64, warm: &mut Warm) -> Result<(f64, f64)> {
    let low: Vec<f64> = brackets.iter().map(|b| (t * b.lower).min(t * b.upper)).collect();
    let high: Vec<f64> = brackets.iter().map(|b| (t * b.lower).max(t * b.upper)).collect();
    let (lower, _) = log_perron_bounds(succ, &low, &mut warm.lower)?;
    let (_, upper) = log_perron_bounds(succ, &high, &mut warm.upper)?;
    Ok((lower, upper.max(lower)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PressureSample {
    pub t: f64,
    #[serde(rename = "pLower")]
    pub lower: f64,
    #[serde(rename = "pUpper")]
    pub upper: f64,
}

/// Sampled pressure. `c`, `delta` and `level` are absent for synthetic curves.
#[derive(Clone, Debug, Serialize)]
pub struct PressureCurve {
    pub c: Option<TorusPoint>,
    pub delta: Option<TorusPoint>,
    pub level: Option<u32>,
    pub samples: Vec<PressureSample>,
}

impl PressureCurve {
    /// A synthetic curve from samples; sorted by `t`.
    pub fn from_samples(mut samples: Vec<PressureSample>) -> Self {
        samples.sort_by(|a, b| a.t.total_cmp(&b.t));
        PressureCurve {
            c: None,
            delta: None,
            level: None,
            samples,
        }
    }

    /// A curve with coinciding brackets from a closed form.
    pub fn from_fn(t_grid: &[f64], p: impl Fn(f64) -> f64) -> Self {
        Self::from_samples(
            t_grid
                .iter()
                .map(|&t| PressureSample {
                    t,
                    lower: p(t),
                    upper: p(t),
                })
                .collect(),
        )
    }

    pub fn t_range(&self) -> Option<(f64, f64)> {
        Some((self.samples.first()?.t, self.samples.last()?.t))
    }
}

/// Pressure of the subsystem at every `t` of the grid.
pub fn pressure_curve_of(m: &MarkovSubsystem, t_grid: &[f64]) -> Result<PressureCurve> {
    let (irreducible, aperiodic) = check_irreducible_aperiodic(m);
    if !(irreducible && aperiodic) {
        return Err(Error::HypothesisViolated(
            "pressure needs an irreducible aperiodic subsystem".into(),
        ));
    }
    let (succ, brackets) = m.recurrent_graph();
    // Contiguous runs of the sorted grid share a warm start.
    let mut grid = t_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let run = grid.len().div_ceil(rayon::current_num_threads()).max(1);
    let samples = grid
        .par_chunks(run)
        .map(|ts| {
            let mut warm = Warm::new(succ.len());
            ts.iter()
                .map(|&t| {
                    pressure_on(&succ, &brackets, t, &mut warm)
                        .map(|(lower, upper)| PressureSample { t, lower, upper })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .concat();
    Ok(PressureCurve::from_samples(samples))
}

/// Builds the level-`N` subsystem for `delta` and samples its pressure.
pub fn pressure_curve(
    p: &Potential,
    delta: &BigRational,
    level: u32,
    t_grid: &[f64],
) -> Result<PressureCurve> {
    let mut curve = pressure_curve_of(&build_subsystem(p, delta, level)?, t_grid)?;
    curve.c = Some(p.c().clone());
    curve.delta = Some(TorusPoint::from_ratio(delta.clone()));
    curve.level = Some(level);
    Ok(curve)
}

/// Linear step 1/32 on `[-4, 4]`, then `+-4 * 2^(k/4)` for `k = 1..=16`.
pub fn standard_t_grid() -> Vec<f64> {
    let mut grid: Vec<f64> = (-128..=128).map(|i| i as f64 / 32.0).collect();
    for k in 1..=16 {
        let t = 4.0 * 2f64.powf(k as f64 / 4.0);
        grid.push(t);
        grid.push(-t);
    }
    grid.sort_by(f64::total_cmp);
    grid
}
