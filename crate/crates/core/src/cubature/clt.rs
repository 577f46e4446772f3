use std::time::Instant;

use super::{CubatureResult, SamplerSpec, Termination, ToleranceSpec};
use crate::error::{QmcError, Result};
use crate::integrands::{evaluate_f, Problem};

/// Two-stage IID Monte Carlo: a pilot sample estimates the standard
/// deviation, then `n = ceil((z * inflate * sigma / eps)^2)` fresh samples
/// give the estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltParams {
    pub n_pilot: u64,
    pub inflate: f64,
    /// Normal quantile of the confidence level.
    pub z: f64,
    /// Cap on the stage-two sample size.
    pub n_max: u64,
}

impl Default for CltParams {
    fn default() -> Self {
        CltParams {
            n_pilot: 1024,
            inflate: 1.2,
            z: 2.58,
            n_max: 1 << 32,
        }
    }
}

const CHUNK: u64 = 1 << 16;

pub fn cub_mc_clt(
    p: &Problem,
    sampler: &SamplerSpec,
    tol: &ToleranceSpec,
    params: &CltParams,
) -> Result<CubatureResult> {
    let start = Instant::now();
    if params.n_pilot < 64 {
        return Err(QmcError::usage(format!(
            "the pilot sample needs at least 64 points, got {}",
            params.n_pilot
        )));
    }
    if !(params.inflate > 0.0 && params.z > 0.0) {
        return Err(QmcError::domain("inflate and z must be positive"));
    }
    let mut stream = sampler.build(p.dim(), sampler.seed)?;
    let pilot = evaluate_f(p, &stream.points(0, params.n_pilot)?)?;
    let k = pilot.len() as f64;
    let shift = pilot[0];
    let offset = pilot.iter().map(|v| v - shift).sum::<f64>() / k;
    let pilot_mean = shift + offset;
    let sigma = (pilot
        .iter()
        .map(|v| (v - shift - offset).powi(2))
        .sum::<f64>()
        / (k - 1.0))
        .sqrt();
    let tolerance = tol.bound(pilot_mean);
    let finish = |estimate, n, error_bound, termination| CubatureResult {
        estimate,
        n_total: n,
        error_bound,
        tolerance,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        iterations: if n > params.n_pilot { 2 } else { 1 },
        termination,
        criterion: "mc-clt",
        flags: Vec::new(),
    };
    if sigma == 0.0 {
        return Ok(finish(
            pilot_mean,
            params.n_pilot,
            0.0,
            Termination::Converged,
        ));
    }
    let scale = params.z * params.inflate * sigma;
    let wanted = ((scale / tolerance).powi(2)).ceil();
    let (n, termination) = if wanted > params.n_max as f64 {
        (params.n_max, Termination::BudgetExhausted)
    } else {
        ((wanted as u64).max(1), Termination::Converged)
    };
    let mut sum = 0.0;
    let mut drawn = 0;
    while drawn < n {
        let take = CHUNK.min(n - drawn);
        let block = stream.points(params.n_pilot + drawn, params.n_pilot + drawn + take)?;
        sum += evaluate_f(p, &block)?.iter().sum::<f64>();
        drawn += take;
    }
    Ok(finish(
        sum / n as f64,
        params.n_pilot + n,
        scale / (n as f64).sqrt(),
        termination,
    ))
}
