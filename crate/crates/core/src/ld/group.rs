//! Group operations shared by lattices (addition mod 1) and digital nets
//! (binary digitwise addition).

/// Componentwise XOR of the first `precision` binary digits of `x` and `y`.
///
/// Digits beyond `precision` are dropped. `precision` is clamped to 53.
pub fn digitwise_add(x: &[f64], y: &[f64], precision: u32) -> Vec<f64> {
    assert_eq!(x.len(), y.len(), "points must have equal dimension");
    let bits = precision.clamp(1, 53) as i32;
    let scale = 2f64.powi(bits);
    x.iter()
        .zip(y)
        .map(|(&a, &b)| {
            let ia = (a * scale).floor() as u64;
            let ib = (b * scale).floor() as u64;
            (ia ^ ib) as f64 / scale
        })
        .collect()
}

/// Componentwise `(x + y) mod 1`.
pub fn lattice_add(x: &[f64], y: &[f64]) -> Vec<f64> {
    assert_eq!(x.len(), y.len(), "points must have equal dimension");
    x.iter().zip(y).map(|(&a, &b)| wrap(a + b)).collect()
}

/// Componentwise `(x - y) mod 1`, the inverse of [`lattice_add`].
pub fn lattice_sub(x: &[f64], y: &[f64]) -> Vec<f64> {
    assert_eq!(x.len(), y.len(), "points must have equal dimension");
    x.iter().zip(y).map(|(&a, &b)| wrap(a - b)).collect()
}

fn wrap(v: f64) -> f64 {
    let r = v - v.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_examples() {
        assert_eq!(
            digitwise_add(&[0.25, 0.75], &[0.125, 0.625], 32),
            vec![0.375, 0.375]
        );
        assert_eq!(
            digitwise_add(&[0.25, 0.75], &[0.125, 0.375], 32),
            vec![0.375, 0.625]
        );
        assert_eq!(
            lattice_add(&[0.25, 0.75], &[0.125, 0.375]),
            vec![0.375, 0.125]
        );
        assert_eq!(lattice_add(&[0.3, 0.7], &[0.0, 0.0]), vec![0.3, 0.7]);
        let w = lattice_add(&[0.9, 0.9], &[0.2, 0.2]);
        assert!(w.iter().all(|v| (v - 0.1).abs() < 1e-15));
    }

    proptest! {
        #[test]
        fn xor_is_self_inverse(x in proptest::collection::vec(0.0f64..1.0, 1..6)) {
            let z = digitwise_add(&x, &x, 53);
            prop_assert!(z.iter().all(|&v| v == 0.0));
        }

        #[test]
        fn lattice_sub_undoes_add(
            x in proptest::collection::vec(0.0f64..1.0, 3),
            y in proptest::collection::vec(0.0f64..1.0, 3),
        ) {
            let back = lattice_sub(&lattice_add(&x, &y), &y);
            for (a, b) in back.iter().zip(&x) {
                let diff = (a - b).abs();
                prop_assert!(diff < 1e-12 || (1.0 - diff) < 1e-12);
            }
        }
    }
}
