//! Compositions of transform steps and their density-ratio weights.

use super::step::{lebesgue_tail_transform, Measure, Space, TransformStep};
use crate::error::{QmcError, Result};
use crate::ld::{Domain, PointBlock};

/// `[Psi_1 ... Psi_L]` with final target density `lambda`. The base density
/// `varrho` of the input points is uniform on the unit cube.
#[derive(Debug, Clone)]
pub struct TransformLadder {
    steps: Vec<TransformStep>,
    target: Measure,
    dim: usize,
    // L = 1 with lambda_1 = lambda: the weight telescopes to exactly one.
    telescopes: bool,
}

impl TransformLadder {
    pub fn new(steps: Vec<TransformStep>, target: Measure) -> Result<Self> {
        let dim = target.dim();
        if dim == 0 {
            return Err(QmcError::domain("target measure has dimension 0"));
        }
        let mut prev = Space::UnitCube(dim);
        for (l, step) in steps.iter().enumerate() {
            let compatible = match (prev, step.domain()) {
                (a, b) if a == b => true,
                // a step consuming the unit cube accepts any [0,1]^d-valued output
                (Space::UnitCube(a), Space::UnitCube(b)) => a == b,
                _ => false,
            };
            if !compatible {
                return Err(QmcError::domain(format!(
                    "step {} ({}) expects {:?} but receives {:?}",
                    l + 1,
                    step.name(),
                    step.domain(),
                    prev
                )));
            }
            prev = step.codomain();
        }
        if prev.dim() != dim {
            return Err(QmcError::domain(format!(
                "ladder produces dimension {} but the target has dimension {dim}",
                prev.dim()
            )));
        }
        let telescopes = steps.len() == 1 && steps[0].measure().same_density(&target);
        Ok(TransformLadder {
            steps,
            target,
            dim,
            telescopes,
        })
    }

    /// Single step whose mimicked density is also the target.
    pub fn matching(step: TransformStep) -> Self {
        let target = step.measure().clone();
        Self::new(vec![step], target).expect("a single step always forms a valid ladder")
    }

    /// `L = 0`: the identity with uniform target on the unit cube.
    pub fn identity(d: usize) -> Result<Self> {
        Self::new(Vec::new(), Measure::UnitCube(d))
    }

    /// `Phi^{-1}` onto `R^d` with Lebesgue target.
    pub fn lebesgue(d: usize) -> Result<Self> {
        Self::new(vec![lebesgue_tail_transform(d)?], Measure::Lebesgue(d))
    }

    pub fn steps(&self) -> &[TransformStep] {
        &self.steps
    }

    pub fn target(&self) -> &Measure {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn codomain(&self) -> Space {
        self.steps
            .last()
            .map_or(Space::UnitCube(self.dim), |s| s.codomain())
    }

    pub fn describe(&self) -> String {
        if self.steps.is_empty() {
            return "identity".into();
        }
        self.steps
            .iter()
            .map(|s| s.name())
            .collect::<Vec<_>>()
            .join(" -> ")
    }

    /// Scratch length needed by [`TransformLadder::apply`].
    pub fn scratch_len(&self) -> usize {
        3 * self.dim
    }

    /// Map one point: writes `Psi_L(x)` into `t` and returns its weight.
    /// Errors carry point index 0; callers re-tag them.
    pub fn apply(&self, x: &[f64], t: &mut [f64], scratch: &mut [f64]) -> Result<f64> {
        let d = self.dim;
        if self.steps.is_empty() {
            t[..d].copy_from_slice(&x[..d]);
            let log_w = self.target.log_density(t).unwrap_or(f64::NAN);
            return Ok(log_w.exp());
        }
        let (cur, rest) = scratch.split_at_mut(d);
        let (next, work) = rest.split_at_mut(d);
        cur.copy_from_slice(&x[..d]);
        // log varrho(x) = 0 for unit-cube samplers
        let mut log_w = 0.0;
        for (l, step) in self.steps.iter().enumerate() {
            step.forward(cur, next, work)?;
            if !self.telescopes {
                log_w += step.log_input_density(cur);
                let log_lambda = step.log_target_density(next).ok_or_else(|| {
                    weight_error(l, step, "density cannot be evaluated (singular covariance)")
                })?;
                if log_lambda == f64::NEG_INFINITY {
                    return Err(weight_error(l, step, "intermediate density is zero"));
                }
                if log_lambda.is_nan() {
                    return Err(weight_error(
                        l,
                        step,
                        "intermediate density is not a number",
                    ));
                }
                log_w -= log_lambda;
            }
            cur.copy_from_slice(next);
        }
        t[..d].copy_from_slice(cur);
        if self.telescopes {
            return Ok(1.0);
        }
        let log_target = self.target.log_density(t).ok_or_else(|| QmcError::Weight {
            index: 0,
            step: self.steps.len(),
            name: "target".into(),
            message: "target density cannot be evaluated".into(),
        })?;
        Ok((log_target + log_w).exp())
    }
}

fn weight_error(l: usize, step: &TransformStep, message: &str) -> QmcError {
    QmcError::Weight {
        index: 0,
        step: l + 1,
        name: step.name().to_string(),
        message: message.into(),
    }
}

/// Transform every point of a unit-cube block, returning the mapped block
/// and the per-point weights.
pub fn ladder_transform(
    ladder: &TransformLadder,
    block: &PointBlock,
) -> Result<(PointBlock, Vec<f64>)> {
    if block.domain != Domain::UnitCube {
        return Err(QmcError::domain("ladder input must be a unit-cube block"));
    }
    if block.d() != ladder.dim() {
        return Err(QmcError::domain(format!(
            "block has dimension {}, ladder expects {}",
            block.d(),
            ladder.dim()
        )));
    }
    let d = ladder.dim();
    let mut values = vec![0.0; block.n() * d];
    let mut weights = Vec::with_capacity(block.n());
    let mut scratch = vec![0.0; ladder.scratch_len()];
    for (i, (x, t)) in block.rows().zip(values.chunks_exact_mut(d)).enumerate() {
        let w = ladder
            .apply(x, t, &mut scratch)
            .map_err(|e| e.at_index(i))?;
        weights.push(w);
    }
    Ok((
        PointBlock::new(values, d, Domain::Transformed, block.meta.clone()),
        weights,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::step::*;
    use crate::measures::FactorMethod;
    use nalgebra::DMatrix;

    fn block(rows: &[&[f64]]) -> PointBlock {
        PointBlock::from_rows(rows.concat(), rows[0].len())
    }

    #[test]
    fn identity_ladder() {
        let ladder = TransformLadder::identity(2).unwrap();
        let b = block(&[&[0.1, 0.2], &[0.7, 0.3]]);
        let (t, w) = ladder_transform(&ladder, &b).unwrap();
        assert_eq!(t.values(), b.values());
        assert_eq!(w, vec![1.0, 1.0]);
    }

    #[test]
    fn matching_ladder_has_unit_weights() {
        let step = gaussian_transform(
            vec![3.0, 2.0],
            DMatrix::from_row_slice(2, 2, &[9.0, 5.0, 5.0, 4.0]),
            FactorMethod::Pca,
        )
        .unwrap();
        let ladder = TransformLadder::matching(step);
        let b = block(&[&[0.1, 0.9], &[0.5, 0.5], &[0.01, 0.3]]);
        let (_, w) = ladder_transform(&ladder, &b).unwrap();
        assert!(w.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn explicit_telescoping_is_near_one() {
        // a two-step ladder whose densities cancel only numerically
        let kuma = kumaraswamy_transform(vec![1.0, 1.0], vec![1.0, 1.0]).unwrap();
        let gauss = isotropic_gaussian_transform(2, 0.5).unwrap();
        let target = gauss.measure().clone();
        let ladder = TransformLadder::new(vec![kuma, gauss], target).unwrap();
        let b = block(&[&[0.2, 0.6], &[0.9, 0.05]]);
        let (_, w) = ladder_transform(&ladder, &b).unwrap();
        for v in w {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lebesgue_center_weight() {
        let ladder = TransformLadder::lebesgue(3).unwrap();
        let b = block(&[&[0.5, 0.5, 0.5]]);
        let (t, w) = ladder_transform(&ladder, &b).unwrap();
        assert_eq!(t.values(), &[0.0, 0.0, 0.0]);
        let expected = (2.0 * std::f64::consts::PI).sqrt().powi(3);
        assert!((w[0] - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn boundary_error_carries_index() {
        let ladder = TransformLadder::lebesgue(2).unwrap();
        let b = block(&[&[0.5, 0.5], &[0.0, 0.5]]);
        match ladder_transform(&ladder, &b) {
            Err(QmcError::Boundary {
                index, coordinate, ..
            }) => {
                assert_eq!(index, 1);
                assert_eq!(coordinate, 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_intermediate_density_is_weight_error() {
        // alpha > 1 puts zero density at t = 0
        let kuma = kumaraswamy_transform(vec![2.0], vec![1.0]).unwrap();
        let gauss = isotropic_gaussian_transform(1, 1.0).unwrap();
        let target = gauss.measure().clone();
        let ladder = TransformLadder::new(vec![kuma, gauss.clone()], target.clone()).unwrap();
        let b = block(&[&[0.0]]);
        match ladder_transform(&ladder, &b) {
            Err(QmcError::Weight { step, name, .. }) => {
                assert_eq!(step, 1);
                assert_eq!(name, "kumaraswamy");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mismatched_tags_rejected() {
        let gauss = isotropic_gaussian_transform(2, 1.0).unwrap();
        let kuma = kumaraswamy_transform(vec![1.0, 1.0], vec![1.0, 1.0]).unwrap();
        assert!(TransformLadder::new(vec![gauss, kuma], Measure::UnitCube(2)).is_err());
        let gauss3 = isotropic_gaussian_transform(3, 1.0).unwrap();
        assert!(TransformLadder::new(vec![gauss3], Measure::Lebesgue(2)).is_err());
    }
}
