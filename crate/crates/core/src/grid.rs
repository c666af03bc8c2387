//! Uniform sampling grids and their quadrature.
//!
//! One grid type serves both axes in the crate: the time axis under clock
//! packets and the z axis under pointer fields. The grid is periodic in the
//! FFT sense: `points` samples at `min + i·spacing` with
//! `spacing = (max − min)/points`, so `max` itself is the wrap-around point
//! and is not sampled. All quadratures are plain Riemann sums, which for
//! smooth functions that decay below the boundary threshold are accurate to
//! machine precision.

use crate::{Error, Real, Result};
use num_complex::Complex;

/// Uniformly spaced axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid<R: Real> {
    min: R,
    max: R,
    points: usize,
}

impl<R: Real> UniformGrid<R> {
    pub fn new(min: R, max: R, points: usize) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() || max <= min {
            return Err(Error::domain("grid bounds must be finite with max > min"));
        }
        if points < 8 {
            return Err(Error::domain("grid needs at least 8 points"));
        }
        Ok(UniformGrid { min, max, points })
    }

    pub fn min(&self) -> R {
        self.min
    }

    pub fn max(&self) -> R {
        self.max
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> R {
        (self.max - self.min) / R::of_usize(self.points)
    }

    /// Coordinate of sample `i`.
    pub fn point(&self, i: usize) -> R {
        self.min + self.spacing() * R::of_usize(i)
    }

    pub fn values(&self) -> impl Iterator<Item = R> + '_ {
        (0..self.points).map(move |i| self.point(i))
    }

    /// True when `[lo, hi]` lies inside the grid.
    pub fn covers(&self, lo: R, hi: R) -> bool {
        self.min <= lo && hi <= self.max
    }

    /// Quadrature norm² = Σ|ψ_k|²·Δ.
    pub fn norm_sq(&self, amps: &[Complex<R>]) -> R {
        debug_assert_eq!(amps.len(), self.points);
        amps.iter().map(|a| a.norm_sqr()).sum::<R>() * self.spacing()
    }

    /// Quadrature inner product ⟨a|b⟩ = Σ conj(a_k)·b_k·Δ
    /// (conjugate-linear in `a`, linear in `b`).
    pub fn overlap(&self, a: &[Complex<R>], b: &[Complex<R>]) -> Complex<R> {
        debug_assert_eq!(a.len(), self.points);
        debug_assert_eq!(b.len(), self.points);
        let sum: Complex<R> = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * *y).sum();
        sum * self.spacing()
    }

    /// First moment of the normalized probability density |ψ|².
    pub fn mean(&self, amps: &[Complex<R>]) -> R {
        let mut weight = R::zero();
        let mut first = R::zero();
        for (i, a) in amps.iter().enumerate() {
            let p = a.norm_sqr();
            weight += p;
            first += p * self.point(i);
        }
        first / weight
    }

    /// Central second moment of the normalized probability density.
    pub fn variance(&self, amps: &[Complex<R>]) -> R {
        let m = self.mean(amps);
        let mut weight = R::zero();
        let mut second = R::zero();
        for (i, a) in amps.iter().enumerate() {
            let p = a.norm_sqr();
            let d = self.point(i) - m;
            weight += p;
            second += p * d * d;
        }
        second / weight
    }
}

/// Largest probability density at the two boundary samples.
pub fn boundary_density<R: Real>(amps: &[Complex<R>]) -> R {
    match (amps.first(), amps.last()) {
        (Some(a), Some(b)) => a.norm_sqr().max(b.norm_sqr()),
        _ => R::zero(),
    }
}
