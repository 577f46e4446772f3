//! Fast Walsh and Fourier coefficient estimates for doubling criteria.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// In-place unnormalized fast Walsh–Hadamard transform; `y.len()` must be a
/// power of two.
pub fn fwht(y: &mut [f64]) {
    let n = y.len();
    assert!(n.is_power_of_two(), "FWHT length must be a power of two");
    let mut h = 1;
    while h < n {
        for block in y.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, z) = (*a, *b);
                *a = x + z;
                *b = x - z;
            }
        }
        h *= 2;
    }
}

/// Walsh coefficient estimates `(1/n) sum_i f(x_i) (-1)^{<k, i>}` from values
/// in standard index order. Coefficient 0 is the sample mean.
pub fn walsh_coefficients(values: &[f64]) -> Vec<f64> {
    let mut y = values.to_vec();
    fwht(&mut y);
    let n = y.len() as f64;
    y.iter_mut().for_each(|v| *v /= n);
    y
}

/// Magnitudes of the discrete Fourier coefficient estimates of values given
/// in natural (van der Corput) lattice order. The values are permuted into
/// linear order `j/n` before the FFT. Also returns coefficient 0 (the mean).
pub fn lattice_coefficients(values: &[f64]) -> (Vec<f64>, f64) {
    let n = values.len();
    assert!(n.is_power_of_two(), "FFT length must be a power of two");
    if n == 1 {
        return (vec![values[0].abs()], values[0]);
    }
    let m = n.trailing_zeros();
    let mut buf: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); n];
    for (i, &v) in values.iter().enumerate() {
        let j = (i as u64).reverse_bits() >> (64 - m);
        buf[j as usize] = Complex::new(v, 0.0);
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let mean = buf[0].re * scale;
    (buf.iter().map(|c| c.norm() * scale).collect(), mean)
}

/// Reordering of wavenumbers so that, level by level, the larger of each
/// aliasing pair `(k, k + 2^l)` comes first.
pub fn kappa_map(mags: &[f64]) -> Vec<usize> {
    let n = mags.len();
    let m = n.trailing_zeros();
    let mut kmap: Vec<usize> = (0..n).collect();
    for l in (1..m).rev() {
        let nl = 1usize << l;
        for k in 1..nl {
            if mags[kmap[nl + k]] > mags[kmap[k]] {
                let mut b = 0;
                while b < n {
                    kmap.swap(b + k, b + nl + k);
                    b += 2 * nl;
                }
            }
        }
    }
    kmap
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fwht_matches_definition() {
        let v = [1.0, -2.0, 0.5, 3.0, 0.0, 1.5, -1.0, 2.0];
        let got = walsh_coefficients(&v);
        for k in 0..8usize {
            let direct: f64 = v
                .iter()
                .enumerate()
                .map(|(i, &x)| if (i & k).count_ones() % 2 == 0 { x } else { -x })
                .sum::<f64>()
                / 8.0;
            assert!((got[k] - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn lattice_mean_is_coefficient_zero() {
        let v: Vec<f64> = (0..16).map(|i| (i as f64 * 0.37).sin()).collect();
        let (mags, mean) = lattice_coefficients(&v);
        let direct = v.iter().sum::<f64>() / 16.0;
        assert!((mean - direct).abs() < 1e-15);
        assert!((mags[0] - direct.abs()).abs() < 1e-15);
    }

    #[test]
    fn kappa_map_is_permutation() {
        let mags: Vec<f64> = (0..32).map(|i| ((i * 7919) % 31) as f64).collect();
        let mut k = kappa_map(&mags);
        assert_eq!(k[0], 0);
        k.sort_unstable();
        assert_eq!(k, (0..32).collect::<Vec<_>>());
    }
}
