//! Spectral translation and trigonometric interpolation on uniform grids.
//!
//! Translation multiplies each Fourier mode by a unit-modulus phase, so it is
//! exactly unitary and dispersion-free; it is the evolution primitive for
//! clock packets and pointer branches. Interpolation evaluates the same
//! trigonometric interpolant at arbitrary points, which makes a constant
//! displacement remap agree with [`translate`] to rounding error.
//!
//! Frequency convention: mode `m` carries angular frequency
//! `2π·m̃/(n·Δ)` with `m̃ = m` for `m < n/2` and `m̃ = m − n` otherwise
//! (the usual FFT ordering with a negative Nyquist bin).

use crate::grid::UniformGrid;
use crate::Real;
use num_complex::Complex;
use rustfft::{FftNum, FftPlanner};

/// Angular frequencies in FFT bin order.
pub fn angular_frequencies<R: Real>(n: usize, spacing: R) -> Vec<R> {
    let two_pi = R::PI() + R::PI();
    let length = spacing * R::of_usize(n);
    (0..n)
        .map(|m| {
            let signed = if m < n.div_ceil(2) {
                R::of_usize(m)
            } else {
                R::of_usize(m) - R::of_usize(n)
            };
            two_pi * signed / length
        })
        .collect()
}

/// Samples of ψ(x − shift) given samples of ψ on the periodic grid.
pub fn translate<R: Real + FftNum>(amps: &[Complex<R>], spacing: R, shift: R) -> Vec<Complex<R>> {
    let n = amps.len();
    let mut planner = FftPlanner::<R>::new();
    let mut buf = amps.to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    for (coef, k) in buf.iter_mut().zip(angular_frequencies(n, spacing)) {
        *coef *= Complex::from_polar(R::one(), -k * shift);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = R::one() / R::of_usize(n);
    for coef in &mut buf {
        *coef = coef.scale(scale);
    }
    buf
}

/// Evaluate the trigonometric interpolant of the sampled field at arbitrary
/// coordinates. Direct O(n·targets) summation; desk-scale grids only.
pub fn interpolate<R: Real + FftNum>(
    grid: &UniformGrid<R>,
    amps: &[Complex<R>],
    targets: &[R],
) -> Vec<Complex<R>> {
    let n = amps.len();
    let mut planner = FftPlanner::<R>::new();
    let mut coefs = amps.to_vec();
    planner.plan_fft_forward(n).process(&mut coefs);
    let scale = R::one() / R::of_usize(n);
    for c in &mut coefs {
        *c = c.scale(scale);
    }
    let freqs = angular_frequencies(n, grid.spacing());
    targets
        .iter()
        .map(|&x| {
            let u = x - grid.min();
            coefs
                .iter()
                .zip(freqs.iter())
                .map(|(c, &k)| *c * Complex::from_polar(R::one(), k * u))
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_samples(grid: &UniformGrid<f64>, center: f64, width: f64) -> Vec<Complex<f64>> {
        grid.values()
            .map(|x| {
                let d = x - center;
                Complex::new((-d * d / (4.0 * width * width)).exp(), 0.0)
            })
            .collect()
    }

    #[test]
    fn frequencies_match_fft_order() {
        let f = angular_frequencies::<f64>(8, 0.5);
        let base = 2.0 * std::f64::consts::PI / 4.0;
        let expected = [0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0];
        for (got, want) in f.iter().zip(expected) {
            assert!((got - want * base).abs() < 1e-12);
        }
    }

    #[test]
    fn translate_moves_a_gaussian_exactly() {
        let grid = UniformGrid::new(-20.0, 20.0, 1024).unwrap();
        let amps = gaussian_samples(&grid, 0.0, 1.0);
        let moved = translate(&amps, grid.spacing(), 3.0);
        let expected = gaussian_samples(&grid, 3.0, 1.0);
        let max_err = moved
            .iter()
            .zip(expected.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(max_err < 1e-11, "max_err = {max_err:e}");
    }

    #[test]
    fn translate_preserves_norm() {
        let grid = UniformGrid::new(-20.0, 20.0, 1024).unwrap();
        let amps = gaussian_samples(&grid, -2.0, 0.7);
        let before = grid.norm_sq(&amps);
        let after = grid.norm_sq(&translate(&amps, grid.spacing(), 5.0));
        assert!((before - after).abs() < 1e-12 * before);
    }

    #[test]
    fn interpolation_reproduces_grid_samples() {
        let grid = UniformGrid::new(-10.0, 10.0, 256).unwrap();
        let amps = gaussian_samples(&grid, 1.0, 0.8);
        let targets: Vec<f64> = grid.values().collect();
        let back = interpolate(&grid, &amps, &targets);
        let max_err = back
            .iter()
            .zip(amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(max_err < 1e-12, "max_err = {max_err:e}");
    }

    #[test]
    fn interpolation_at_shifted_points_equals_translate() {
        let grid = UniformGrid::new(-20.0, 20.0, 512).unwrap();
        let amps = gaussian_samples(&grid, 0.0, 1.2);
        let shift = 1.7;
        let via_translate = translate(&amps, grid.spacing(), shift);
        let targets: Vec<f64> = grid.values().map(|x| x - shift).collect();
        let via_interp = interpolate(&grid, &amps, &targets);
        let max_err = via_translate
            .iter()
            .zip(via_interp.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(max_err < 1e-12, "max_err = {max_err:e}");
    }
}
