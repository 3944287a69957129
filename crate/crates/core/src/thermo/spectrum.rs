use super::legendre::{legendre_transform, Conjugate};
use super::pressure::{pressure_curve, standard_t_grid};
use crate::dyadic::{ExtendedReal, Potential, TorusPoint};
use crate::error::{Error, Result};
use crate::orbit::extremes_scan;
use num_rational::BigRational;
use serde::Serialize;
use std::f64::consts::LN_2;

/// Period up to which orbits are scanned for the admissible window.
pub const SPECTRUM_SCAN_PERIOD: u32 = 12;

/// Successive schedule entries closer than this count as converged.
pub const STALL_TOLERANCE: f64 = 0.01;

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumPoint {
    pub alpha: f64,
    #[serde(rename = "dLower")]
    pub lower: f64,
    #[serde(rename = "dUpper")]
    pub upper: f64,
    pub converged: bool,
    /// `(dLower, dUpper)` for each schedule entry, in order.
    pub trace: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumCurve {
    pub c: TorusPoint,
    #[serde(rename = "alphaGrid")]
    pub alpha_grid: Vec<f64>,
    #[serde(rename = "alphaWindow")]
    pub alpha_window: (ExtendedReal, ExtendedReal),
    #[serde(rename = "D")]
    pub d: Vec<SpectrumPoint>,
}

fn to_dimension(c: Conjugate) -> (f64, f64) {
    match c {
        Conjugate::Finite { lower, upper } => (
            (lower / LN_2).clamp(0.0, 1.0),
            (upper / LN_2).clamp(0.0, 1.0),
        ),
        Conjugate::MinusInfinity => (0.0, 0.0),
    }
}

/// `D(alpha) = p*(alpha) / log 2` along a schedule of shrinking `delta`, with
/// the admissible window taken from a periodic-orbit scan.
pub fn dimension_spectrum(
    p: &Potential,
    alpha_grid: &[f64],
    delta_schedule: &[BigRational],
    level: u32,
) -> Result<SpectrumCurve> {
    let report = extremes_scan(p, SPECTRUM_SCAN_PERIOD)?;
    dimension_spectrum_in(p, alpha_grid, delta_schedule, level, (report.alpha, report.beta))
}

/// As [`dimension_spectrum`] with an explicit window `(alpha_P, beta_P)`.
pub fn dimension_spectrum_in(
    p: &Potential,
    alpha_grid: &[f64],
    delta_schedule: &[BigRational],
    level: u32,
    window: (ExtendedReal, ExtendedReal),
) -> Result<SpectrumCurve> {
    for &alpha in alpha_grid {
        let a = ExtendedReal::from_f64(alpha);
        if a < window.0 || a > window.1 {
            return Err(Error::WindowViolation {
                alpha,
                lower: window.0.to_f64(),
                upper: window.1.to_f64(),
            });
        }
    }
    if delta_schedule.is_empty() {
        return Err(Error::PreconditionViolated("empty delta schedule".into()));
    }
    let grid = standard_t_grid();
    let mut traces = vec![Vec::with_capacity(delta_schedule.len()); alpha_grid.len()];
    for delta in delta_schedule {
        let curve = pressure_curve(p, delta, level, &grid)?;
        for (trace, &alpha) in traces.iter_mut().zip(alpha_grid) {
            trace.push(to_dimension(legendre_transform(&curve, alpha)?));
        }
    }
    let d = alpha_grid
        .iter()
        .zip(traces)
        .map(|(&alpha, trace)| {
            let (lower, upper) = *trace.last().expect("schedule is nonempty");
            let mid = |(l, u): (f64, f64)| (l + u) / 2.0;
            let converged = trace.len() >= 2
                && (mid(trace[trace.len() - 1]) - mid(trace[trace.len() - 2])).abs() < STALL_TOLERANCE;
            SpectrumPoint {
                alpha,
                lower,
                upper,
                converged,
                trace,
            }
        })
        .collect();
    Ok(SpectrumCurve {
        c: p.c().clone(),
        alpha_grid: alpha_grid.to_vec(),
        alpha_window: window,
        d,
    })
}
