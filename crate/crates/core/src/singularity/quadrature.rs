use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use std::f64::consts::PI;

/// Geometric refinement depth toward a singular endpoint.
pub const SUBDIVISION_LEVELS: u32 = 60;

/// Relative agreement required between the `n`- and `2n`-node estimates.
pub const QUAD_TOLERANCE: f64 = 1e-6;

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_n`, started from the usual cosine guess.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "a rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=n {
                    let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
        let s: CompensatedSum = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .collect();
        s.value() * half
    }

    /// `int_0^len g(u) du` for `g` with an integrable singularity at `u = 0`,
    /// on panels `[len 2^-(k+1), len 2^-k]` plus one innermost panel.
    pub fn integrate_from_singularity(&self, g: impl Fn(f64) -> f64, len: f64) -> f64 {
        let mut acc = CompensatedSum::new();
        let mut hi = len;
        for _ in 0..SUBDIVISION_LEVELS {
            let lo = hi / 2.0;
            acc.add(self.integrate(&g, lo, hi));
            hi = lo;
        }
        acc.add(self.integrate(&g, 0.0, hi));
        acc.value()
    }
}

/// Evaluates `compute` with `n` and `2n` nodes and accepts the refined value
/// when the two agree to [`QUAD_TOLERANCE`] relative.
pub fn checked(n: usize, compute: impl Fn(&GaussLegendre) -> f64) -> Result<f64> {
    let estimate = compute(&GaussLegendre::new(n));
    let refined = compute(&GaussLegendre::new(2 * n));
    let scale = refined.abs().max(f64::MIN_POSITIVE);
    if !refined.is_finite() || (estimate - refined).abs() > QUAD_TOLERANCE * scale {
        return Err(Error::QuadratureFailure {
            estimate,
            refined,
            tolerance: QUAD_TOLERANCE,
        });
    }
    Ok(refined)
}
