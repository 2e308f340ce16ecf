//! Global-best particle swarm optimization and fractional-order selection.
//!
//! The swarm update is the canonical
//! `v <- w v + c1 r1 (pbest - x) + c2 r2 (gbest - x)` with linearly decaying
//! inertia, per-dimension velocity clamping at half the box width, and a
//! lowest-particle-index tie-break on global-best updates so the result does
//! not depend on evaluation order.

use crate::grey::fit_tmfgm;
use crate::metrics::evaluate;
use crate::rng::SplitMix64;
use crate::series::{Error, FractionalOrder, Result, TimeSeries};

/// Swarm hyperparameters. `bounds` must be set per dimension.
#[derive(Debug, Clone)]
pub struct PsoConfig {
    pub swarm_size: usize,
    pub iterations: usize,
    pub inertia_start: f64,
    pub inertia_end: f64,
    pub cognitive: f64,
    pub social: f64,
    pub bounds: Vec<(f64, f64)>,
    pub seed: u64,
}

impl PsoConfig {
    /// Canonical defaults (30 particles, 100 iterations, w 0.9 -> 0.4,
    /// c1 = c2 = 2) over the given box.
    pub fn for_bounds(bounds: Vec<(f64, f64)>, seed: u64) -> Self {
        Self {
            swarm_size: 30,
            iterations: 100,
            inertia_start: 0.9,
            inertia_end: 0.4,
            cognitive: 2.0,
            social: 2.0,
            bounds,
            seed,
        }
    }

    /// The (alpha, beta) search box used for order selection:
    /// alpha in [0.01, 1], beta in [0.01, 2].
    pub fn for_order_search(seed: u64) -> Self {
        Self::for_bounds(vec![(0.01, 1.0), (0.01, 2.0)], seed)
    }

    fn validate(&self) -> Result<()> {
        if self.swarm_size < 2 {
            return Err(Error::Param("swarm size must be at least 2".into()));
        }
        if self.iterations < 1 {
            return Err(Error::Param("iteration count must be at least 1".into()));
        }
        if self.bounds.is_empty() {
            return Err(Error::Param("bounds must cover at least one dimension".into()));
        }
        for &(lo, hi) in &self.bounds {
            if lo >= hi || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::Param(format!("invalid bound [{lo}, {hi}]")));
            }
        }
        Ok(())
    }
}

/// Outcome of a swarm search.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    pub evaluations: usize,
    /// Global-best fitness after each iteration; non-increasing.
    pub trace: Vec<f64>,
}

fn penalized(f: f64) -> f64 {
    if f.is_nan() {
        f64::INFINITY
    } else {
        f
    }
}

/// Minimize `objective` over the configured box.
///
/// NaN objective values are treated as +inf (the particle is penalized and
/// the search continues); if every evaluation is non-finite the search fails.
pub fn pso_optimize<F>(objective: F, cfg: &PsoConfig) -> Result<SearchResult>
where
    F: Fn(&[f64]) -> f64,
{
    cfg.validate()?;
    let dim = cfg.bounds.len();
    let vmax: Vec<f64> = cfg.bounds.iter().map(|&(lo, hi)| 0.5 * (hi - lo)).collect();
    let mut rng = SplitMix64::new(cfg.seed);

    let mut positions = Vec::with_capacity(cfg.swarm_size);
    let mut velocities = Vec::with_capacity(cfg.swarm_size);
    for _ in 0..cfg.swarm_size {
        let x: Vec<f64> = cfg.bounds.iter().map(|&(lo, hi)| rng.uniform(lo, hi)).collect();
        let v: Vec<f64> = vmax.iter().map(|&m| rng.uniform(-m, m)).collect();
        positions.push(x);
        velocities.push(v);
    }

    let mut evaluations = 0usize;
    let mut pbest = positions.clone();
    let mut pbest_f: Vec<f64> = positions
        .iter()
        .map(|x| {
            evaluations += 1;
            penalized(objective(x))
        })
        .collect();

    let mut gbest_idx = 0;
    for i in 1..cfg.swarm_size {
        if pbest_f[i] < pbest_f[gbest_idx] {
            gbest_idx = i;
        }
    }
    let mut gbest = pbest[gbest_idx].clone();
    let mut gbest_f = pbest_f[gbest_idx];

    let mut trace = Vec::with_capacity(cfg.iterations);
    let span = (cfg.iterations.max(2) - 1) as f64;
    for iter in 0..cfg.iterations {
        let w = cfg.inertia_start + (cfg.inertia_end - cfg.inertia_start) * iter as f64 / span;
        for p in 0..cfg.swarm_size {
            for d in 0..dim {
                let r1 = rng.next_f64();
                let r2 = rng.next_f64();
                let v = w * velocities[p][d]
                    + cfg.cognitive * r1 * (pbest[p][d] - positions[p][d])
                    + cfg.social * r2 * (gbest[d] - positions[p][d]);
                velocities[p][d] = v.clamp(-vmax[d], vmax[d]);
                positions[p][d] =
                    (positions[p][d] + velocities[p][d]).clamp(cfg.bounds[d].0, cfg.bounds[d].1);
            }
            evaluations += 1;
            let f = penalized(objective(&positions[p]));
            if f < pbest_f[p] {
                pbest_f[p] = f;
                pbest[p] = positions[p].clone();
            }
        }
        // Global-best reduction in fixed particle order; strict improvement
        // only, so ties resolve to the lowest index.
        for p in 0..cfg.swarm_size {
            if pbest_f[p] < gbest_f {
                gbest_f = pbest_f[p];
                gbest = pbest[p].clone();
            }
        }
        trace.push(gbest_f);
    }

    if !gbest_f.is_finite() {
        return Err(Error::Search(
            "objective returned no finite value anywhere in the box".into(),
        ));
    }
    Ok(SearchResult {
        best_position: gbest,
        best_fitness: gbest_f,
        evaluations,
        trace,
    })
}

/// In-sample MAPE of the tM-FGM(1,1) restored fit at a candidate order;
/// degenerate fits are penalized as +inf.
pub fn order_fitness(s: &TimeSeries, alpha: f64, beta: f64) -> f64 {
    let Ok(ord) = FractionalOrder::new(alpha, beta) else {
        return f64::INFINITY;
    };
    let Ok(fit) = fit_tmfgm(s, ord) else {
        return f64::INFINITY;
    };
    match evaluate(s, &fit.restored_fit) {
        Ok(report) => report.mape,
        Err(_) => f64::INFINITY,
    }
}

/// Select the fractional order (alpha, beta) minimizing the in-sample MAPE of
/// the tM-FGM(1,1) restored fit.
pub fn select_order(s: &TimeSeries, cfg: &PsoConfig) -> Result<(FractionalOrder, SearchResult)> {
    let result = pso_optimize(|x| order_fitness(s, x[0], x[1]), cfg)?;
    let ord = FractionalOrder::new(result.best_position[0], result.best_position[1])?;
    Ok((ord, result))
}
