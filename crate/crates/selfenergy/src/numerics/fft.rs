//! 3-D linear self-convolution on a cube, FFT-backed. Dressing kernels need
//! `(c * c)` at every component-wise sum of two profile points, which is the
//! full linear convolution of the coefficient cube with itself.

use ndarray::{Array3, Axis};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Linear convolution of a real cube with itself.
///
/// Input has side `s` (indices `0..s` per axis); the result has side
/// `2s - 1`, with output index `t` holding the sum over `a + b = t`. The
/// cyclic FFT on side `2s - 1` reproduces the linear convolution exactly
/// because the supports cannot wrap.
pub fn self_convolve3(input: &Array3<f64>) -> Array3<f64> {
    let s = input.dim().0;
    assert!(
        input.dim() == (s, s, s) && s > 0,
        "self_convolve3: input must be a nonempty cube"
    );
    let m = 2 * s - 1;

    let mut data = Array3::<Complex<f64>>::zeros((m, m, m));
    for ((i, j, k), &v) in input.indexed_iter() {
        data[(i, j, k)] = Complex::new(v, 0.0);
    }

    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(m);
    let inverse = planner.plan_fft_inverse(m);

    let mut line = vec![Complex::new(0.0, 0.0); m];
    for axis in 0..3 {
        for mut lane in data.lanes_mut(Axis(axis)) {
            for (dst, src) in line.iter_mut().zip(lane.iter()) {
                *dst = *src;
            }
            forward.process(&mut line);
            for (dst, src) in lane.iter_mut().zip(line.iter()) {
                *dst = *src;
            }
        }
    }

    for v in data.iter_mut() {
        *v = *v * *v;
    }

    for axis in 0..3 {
        for mut lane in data.lanes_mut(Axis(axis)) {
            for (dst, src) in line.iter_mut().zip(lane.iter()) {
                *dst = *src;
            }
            inverse.process(&mut line);
            for (dst, src) in lane.iter_mut().zip(line.iter()) {
                *dst = *src;
            }
        }
    }

    let norm = 1.0 / (m * m * m) as f64;
    Array3::from_shape_fn((m, m, m), |idx| data[idx].re * norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn direct_self_convolve(input: &Array3<f64>) -> Array3<f64> {
        let s = input.dim().0;
        let m = 2 * s - 1;
        let mut out = Array3::<f64>::zeros((m, m, m));
        for ((a0, a1, a2), &x) in input.indexed_iter() {
            for ((b0, b1, b2), &y) in input.indexed_iter() {
                out[(a0 + b0, a1 + b1, a2 + b2)] += x * y;
            }
        }
        out
    }

    #[test]
    fn matches_direct_convolution_on_random_cubes() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for &s in &[1usize, 2, 3, 5] {
            let input = Array3::from_shape_fn((s, s, s), |_| rng.gen_range(-1.0..1.0));
            let fftd = self_convolve3(&input);
            let direct = direct_self_convolve(&input);
            for (idx, &v) in direct.indexed_iter() {
                assert!(
                    (fftd[idx] - v).abs() < 1e-12,
                    "side {s}, index {idx:?}: fft {} vs direct {v}",
                    fftd[idx]
                );
            }
        }
    }

    #[test]
    fn total_mass_squares() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let input = Array3::from_shape_fn((4, 4, 4), |_| rng.gen_range(0.0..1.0));
        let total: f64 = input.iter().sum();
        let conv = self_convolve3(&input);
        let mass: f64 = conv.iter().sum();
        assert!((mass - total * total).abs() < 1e-10);
    }

    #[test]
    fn delta_stays_delta() {
        let mut input = Array3::<f64>::zeros((3, 3, 3));
        input[(1, 1, 1)] = 2.0;
        let conv = self_convolve3(&input);
        for (idx, &v) in conv.indexed_iter() {
            let want = if idx == (2, 2, 2) { 4.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-13, "index {idx:?}");
        }
    }

    #[test]
    fn inversion_symmetry_is_preserved() {
        // symmetric input c[n] = c[-n] about the cube center
        let s = 5usize;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut input = Array3::<f64>::zeros((s, s, s));
        for i in 0..s {
            for j in 0..s {
                for k in 0..s {
                    let v = rng.gen_range(0.0..1.0);
                    input[(i, j, k)] = v;
                    input[(s - 1 - i, s - 1 - j, s - 1 - k)] = v;
                }
            }
        }
        let conv = self_convolve3(&input);
        let m = 2 * s - 1;
        for ((i, j, k), &v) in conv.indexed_iter() {
            let mirror = conv[(m - 1 - i, m - 1 - j, m - 1 - k)];
            assert!((v - mirror).abs() < 1e-12);
        }
    }
}
