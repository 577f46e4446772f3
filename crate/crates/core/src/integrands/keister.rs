use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use super::quad;
use super::Problem;
use crate::error::{QmcError, Result};
use crate::measures::{isotropic_gaussian_transform, Measure, TransformLadder};

/// Surface area of the unit sphere in `R^d`, `2 pi^{d/2} / Gamma(d/2)`.
fn sphere_area(d: usize) -> f64 {
    let (mut area, mut k) = if d % 2 == 1 { (2.0, 1) } else { (2.0 * PI, 2) };
    while k < d {
        area *= 2.0 * PI / k as f64;
        k += 2;
    }
    area
}

/// `int_{R^d} cos(|t|) exp(-t.t) dt`, by reduction to the radial integral
/// `S_{d-1} int_0^inf cos(r) exp(-r^2) r^{d-1} dr`. Cached per dimension.
pub fn keister_oracle(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(QmcError::domain("Keister dimension must be at least 1"));
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&v) = cache.lock().unwrap().get(&d) {
        return Ok(v);
    }
    let p = (d - 1) as f64;
    // r^{d-1} exp(-r^2) peaks at sqrt((d-1)/2); beyond peak + 40/peak-ish it is negligible
    let r_max = (p / 2.0).sqrt() + 12.0;
    // scale by the peak so the absolute tolerance is relative to the integrand size
    let peak_log = if d > 1 {
        0.5 * p * (p / 2.0).ln() - p / 2.0
    } else {
        0.0
    };
    let radial = quad::integrate(
        |r: f64| {
            if r == 0.0 {
                return if d == 1 { 1.0 } else { 0.0 };
            }
            r.cos() * (p * r.ln() - r * r - peak_log).exp()
        },
        0.0,
        r_max,
        1e-15,
    );
    let v = sphere_area(d) * radial * peak_log.exp();
    cache.lock().unwrap().insert(d, v);
    Ok(v)
}

fn keister_measure(d: usize) -> Result<Measure> {
    Ok(isotropic_gaussian_transform(d, 0.5)?.measure().clone())
}

/// The Keister integral in dimension `d`.
///
/// By default `g(t) = pi^{d/2} cos(|t|)` against `N(0, I/2)`, sampled with the
/// matching transform. A supplied ladder is used as the sampler: its steps
/// are kept and its target replaced by `N(0, I/2)`, so the estimate is an
/// importance-sampling one. A ladder targeting Lebesgue measure switches to
/// `g(t) = cos(|t|) exp(-t.t)`.
pub fn keister_problem(d: usize, ladder: Option<TransformLadder>) -> Result<Problem> {
    let oracle = keister_oracle(d)?;
    let norm = PI.powf(d as f64 / 2.0);
    let (ladder, lebesgue) = match ladder {
        None => (
            TransformLadder::matching(isotropic_gaussian_transform(d, 0.5)?),
            false,
        ),
        Some(l) => {
            if l.dim() != d {
                return Err(QmcError::domain(format!(
                    "ladder has dimension {}, Keister problem has dimension {d}",
                    l.dim()
                )));
            }
            if matches!(l.target(), Measure::Lebesgue(_)) {
                (l, true)
            } else {
                (
                    TransformLadder::new(l.steps().to_vec(), keister_measure(d)?)?,
                    false,
                )
            }
        }
    };
    let name = if lebesgue {
        "keister-lebesgue"
    } else {
        "keister"
    };
    let g: super::Integrand = if lebesgue {
        Arc::new(|t: &[f64]| {
            let r2: f64 = t.iter().map(|v| v * v).sum();
            r2.sqrt().cos() * (-r2).exp()
        })
    } else {
        Arc::new(move |t: &[f64]| norm * t.iter().map(|v| v * v).sum::<f64>().sqrt().cos())
    };
    Ok(Problem::new(name, g, ladder).with_oracle(oracle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrands::evaluate_f;
    use crate::ld::PointBlock;

    #[test]
    fn sphere_areas() {
        assert_eq!(sphere_area(1), 2.0);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-15);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn one_dimensional_closed_form() {
        let exact = PI.sqrt() * (-0.25f64).exp();
        assert!((keister_oracle(1).unwrap() - exact).abs() < 1e-13);
    }

    #[test]
    fn center_value() {
        let p = keister_problem(2, None).unwrap();
        let y = evaluate_f(&p, &PointBlock::from_rows(vec![0.5, 0.5], 2)).unwrap();
        assert!((y[0] - PI).abs() < 1e-15);
    }

    #[test]
    fn lebesgue_center_value() {
        let p = keister_problem(1, Some(TransformLadder::lebesgue(1).unwrap())).unwrap();
        let y = evaluate_f(&p, &PointBlock::from_rows(vec![0.5], 1)).unwrap();
        assert!((y[0] - (2.0 * PI).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rejects_zero_dimension() {
        assert!(keister_problem(0, None).is_err());
    }
}
