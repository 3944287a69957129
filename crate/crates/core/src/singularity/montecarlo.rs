use super::trace::{return_trace, TRACE_GUARD_BITS};
use crate::dyadic::{BinaryFixed, TorusPoint};
use crate::error::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::LN_2;

/// Half-width of the band around `-log 2` counted by the summary.
pub const BAND: f64 = 0.05;

#[derive(Clone, Debug, Serialize)]
pub struct MonteCarloSummary {
    pub samples: usize,
    pub horizon: u64,
    pub seed: u64,
    /// Averages that were computed (self-returning samples excluded).
    pub averages: Vec<f64>,
    /// Indices of samples that returned exactly to themselves.
    pub self_returns: Vec<usize>,
    pub mean: f64,
    pub std_dev: f64,
    pub fraction_within_band: f64,
}

/// The `i`-th sample point: `width` random bits from stream `i` of the seed.
pub fn sample_point(seed: u64, i: u64, width: usize) -> BinaryFixed {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    BinaryFixed::random(&mut rng, width)
}

/// Summarizes `(1/N) sum_{n=1..N} log sin(pi d(T^n x, x))` over given points.
pub fn summarize_points(points: &[TorusPoint], horizon: u64, seed: u64) -> Result<MonteCarloSummary> {
    let traces: Vec<_> = points
        .par_iter()
        .map(|x| return_trace(x, horizon))
        .collect::<Result<_>>()?;
    let mut averages = Vec::new();
    let mut self_returns = Vec::new();
    for (i, t) in traces.iter().enumerate() {
        match (t.periodic_at, t.last_average()) {
            (None, Some(a)) => averages.push(a),
            _ => self_returns.push(i),
        }
    }
    let n = averages.len().max(1) as f64;
    let mean = averages.iter().sum::<f64>() / n;
    let var = averages.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    let within = averages.iter().filter(|a| (*a + LN_2).abs() <= BAND).count();
    Ok(MonteCarloSummary {
        samples: points.len(),
        horizon,
        seed,
        fraction_within_band: within as f64 / n,
        mean,
        std_dev: var.sqrt(),
        averages,
        self_returns,
    })
}

/// Monte Carlo estimate of the return average for random points of width
/// `horizon + 64`, which keeps 64 significant bits after every doubling.
pub fn monte_carlo_a5(samples: usize, horizon: u64, seed: u64) -> Result<MonteCarloSummary> {
    let width = horizon as usize + TRACE_GUARD_BITS;
    let points: Vec<TorusPoint> = (0..samples as u64)
        .into_par_iter()
        .map(|i| TorusPoint::from(sample_point(seed, i, width)))
        .collect();
    summarize_points(&points, horizon, seed)
}
