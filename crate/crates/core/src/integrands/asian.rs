use std::sync::Arc;

use super::Problem;
use crate::error::{QmcError, Result};
use crate::measures::{brownian_motion, TransformLadder};

/// Arithmetic-mean Asian call on geometric Brownian motion, monitored at
/// `tau/d, 2tau/d, ..., tau` and averaged with the trapezoidal rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsianCall {
    pub s0: f64,
    pub strike: f64,
    pub rate: f64,
    pub sigma: f64,
    pub tau: f64,
    pub d: usize,
}

impl AsianCall {
    fn validate(&self) -> Result<()> {
        let checks = [
            (
                self.s0 > 0.0 && self.s0.is_finite(),
                "initial price S0 must be positive",
            ),
            (
                self.strike >= 0.0 && self.strike.is_finite(),
                "strike K must be non-negative",
            ),
            (self.rate.is_finite(), "rate r must be finite"),
            (
                self.sigma >= 0.0 && self.sigma.is_finite(),
                "volatility sigma must be non-negative",
            ),
            (
                self.tau > 0.0 && self.tau.is_finite(),
                "time horizon tau must be positive",
            ),
            (self.d >= 1, "at least one monitoring time is required"),
        ];
        match checks.iter().find(|c| !c.0) {
            Some((_, msg)) => Err(QmcError::domain(*msg)),
            None => Ok(()),
        }
    }

    /// Discounted payoff for the Brownian path `w` (values at the monitoring times).
    pub fn payoff(&self, w: &[f64]) -> f64 {
        let dt = self.tau / self.d as f64;
        let mu = (self.rate - 0.5 * self.sigma * self.sigma) * dt;
        let mut prev = self.s0;
        let mut sum = 0.0;
        for (j, &wj) in w.iter().enumerate() {
            let s = self.s0 * (mu * (j + 1) as f64 + self.sigma * wj).exp();
            sum += prev + s;
            prev = s;
        }
        let avg = sum / (2 * self.d) as f64;
        (avg - self.strike).max(0.0) * (-self.rate * self.tau).exp()
    }
}

/// Price at zero volatility, where the path is deterministic.
pub fn asian_zero_volatility_price(opt: &AsianCall) -> f64 {
    let zero = AsianCall { sigma: 0.0, ..*opt };
    zero.payoff(&vec![0.0; opt.d])
}

/// The Asian call as an expectation over Brownian motion. A nonzero `drift`
/// samples paths from the drifted motion and reweights them by the density
/// ratio (importance sampling).
pub fn asian_call_problem(opt: AsianCall, drift: f64) -> Result<Problem> {
    opt.validate()?;
    let sampler = brownian_motion(opt.tau, opt.d, drift)?;
    let ladder = if drift == 0.0 {
        TransformLadder::matching(sampler)
    } else {
        let target = brownian_motion(opt.tau, opt.d, 0.0)?.measure().clone();
        TransformLadder::new(vec![sampler], target)?
    };
    let mut p = Problem::new(
        "asian-call",
        Arc::new(move |t: &[f64]| opt.payoff(t)),
        ladder,
    );
    if opt.sigma == 0.0 {
        p = p.with_oracle(asian_zero_volatility_price(&opt));
    }
    Ok(p)
}
