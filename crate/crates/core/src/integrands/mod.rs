//! Integration problems: an integrand `g` on the target space paired with a
//! transform ladder, giving the unit-cube integrand `f`.

mod asian;
mod keister;
mod quad;

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{QmcError, Result};
use crate::ld::{Domain, PointBlock};
use crate::measures::TransformLadder;

pub use asian::{asian_call_problem, asian_zero_volatility_price, AsianCall};
pub use keister::{keister_oracle, keister_problem};
pub use quad::integrate as adaptive_quadrature;

/// Original integrand `g` on the target space.
pub type Integrand = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Blocks smaller than this are evaluated on the calling thread.
const PARALLEL_CHUNK: usize = 4096;

#[derive(Clone)]
pub struct Problem {
    name: String,
    g: Integrand,
    ladder: TransformLadder,
    oracle: Option<f64>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("d", &self.dim())
            .field("ladder", &self.ladder.describe())
            .field("oracle", &self.oracle)
            .finish()
    }
}

impl Problem {
    pub fn new(name: impl Into<String>, g: Integrand, ladder: TransformLadder) -> Self {
        Problem {
            name: name.into(),
            g,
            ladder,
            oracle: None,
        }
    }

    /// Attach the known value of the integral.
    pub fn with_oracle(mut self, value: f64) -> Self {
        self.oracle = Some(value);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.ladder.dim()
    }

    pub fn ladder(&self) -> &TransformLadder {
        &self.ladder
    }

    pub fn oracle(&self) -> Option<f64> {
        self.oracle
    }

    pub fn g(&self, t: &[f64]) -> f64 {
        (self.g)(t)
    }

    /// `f(x) = g(Psi_L(x)) w(x)` for a single unit-cube point.
    pub fn f(&self, x: &[f64]) -> Result<f64> {
        let d = self.dim();
        let mut t = vec![0.0; d];
        let mut scratch = vec![0.0; self.ladder.scratch_len()];
        self.f_with(x, &mut t, &mut scratch)
    }

    fn f_with(&self, x: &[f64], t: &mut [f64], scratch: &mut [f64]) -> Result<f64> {
        let w = self.ladder.apply(x, t, scratch)?;
        // a vanishing weight annihilates g, even where g itself overflows
        if w == 0.0 {
            return Ok(0.0);
        }
        let v = (self.g)(t) * w;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QmcError::Evaluation {
                index: 0,
                message: format!("f = {v} (weight {w})"),
            })
        }
    }

    fn eval_rows(&self, values: &[f64], first_index: usize, out: &mut [f64]) -> Result<()> {
        let d = self.dim();
        let mut t = vec![0.0; d];
        let mut scratch = vec![0.0; self.ladder.scratch_len()];
        for (i, (x, y)) in values.chunks_exact(d).zip(out.iter_mut()).enumerate() {
            *y = self
                .f_with(x, &mut t, &mut scratch)
                .map_err(|e| e.at_index(first_index + i))?;
        }
        Ok(())
    }
}

/// Evaluate `f` on every point of a unit-cube block. Large blocks are split
/// across the rayon pool; results keep the block order.
pub fn evaluate_f(p: &Problem, block: &PointBlock) -> Result<Vec<f64>> {
    if block.domain != Domain::UnitCube {
        return Err(QmcError::domain(
            "integrand input must be a unit-cube block",
        ));
    }
    if block.d() != p.dim() {
        return Err(QmcError::domain(format!(
            "block has dimension {}, problem '{}' has dimension {}",
            block.d(),
            p.name(),
            p.dim()
        )));
    }
    let d = p.dim();
    let mut out = vec![0.0; block.n()];
    if block.n() <= PARALLEL_CHUNK {
        p.eval_rows(block.values(), 0, &mut out)?;
    } else {
        out.par_chunks_mut(PARALLEL_CHUNK)
            .zip(block.values().par_chunks(PARALLEL_CHUNK * d))
            .enumerate()
            .try_for_each(|(c, (y, x))| p.eval_rows(x, c * PARALLEL_CHUNK, y))?;
    }
    Ok(out)
}

/// Wrap a user function `g` and a ladder into a problem.
pub fn custom_problem(
    name: impl Into<String>,
    g: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ladder: TransformLadder,
) -> Problem {
    Problem::new(name, Arc::new(g), ladder)
}
