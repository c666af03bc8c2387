//! Position-dependent speed of light.
//!
//! A speed profile c(z) induces a position-dependent Planck constant
//! `ħ(z) = Λ/c(z)²`, fixed by requiring `√ħ(z)·c(z)` to be constant across
//! space. Momentum is deformed to the symmetric ordering
//! `Π = √ħ·(−i∂_z)·√ħ`, whose commutator with z is `iħ(z)` — verified here
//! by a fourth-order finite-difference check. The pointer shift generalizes
//! to the pointwise remap `Φ(z − s(z)·t_B)` with
//! `s(z) = √(ħ₀/ħ(z))·⟨v_z⁰⟩_w`, a non-unitary substitution whose norm
//! defect is reported rather than hidden.
//!
//! Derivatives use fourth-order centered stencils with one-sided rows at the
//! boundary; multiplication by √ħ(z) breaks translation invariance, so a
//! spectral derivative would buy no exactness here.

use crate::grid::UniformGrid;
use crate::pointer::PointerField;
use crate::weakval;
use crate::{Error, Real, Result};
use num_complex::Complex;
use rustfft::FftNum;

/// Speed-of-light profile over the pointer grid.
#[derive(Debug, Clone)]
pub enum SpeedProfileKind<R: Real> {
    Constant {
        c0: R,
    },
    /// Piecewise-linear (z, c) table, constant extension outside.
    Table(Vec<(R, R)>),
    /// c(z) = c0·(1 + amplitude·tanh(z/length_scale)).
    Tanh {
        c0: R,
        amplitude: R,
        length_scale: R,
    },
}

impl<R: Real> SpeedProfileKind<R> {
    fn eval(&self, z: R) -> R {
        match self {
            SpeedProfileKind::Constant { c0 } => *c0,
            SpeedProfileKind::Table(rows) => {
                if z <= rows[0].0 {
                    return rows[0].1;
                }
                if z >= rows[rows.len() - 1].0 {
                    return rows[rows.len() - 1].1;
                }
                let k = rows.partition_point(|&(x, _)| x <= z);
                let (x0, y0) = rows[k - 1];
                let (x1, y1) = rows[k];
                y0 + (y1 - y0) * (z - x0) / (x1 - x0)
            }
            SpeedProfileKind::Tanh {
                c0,
                amplitude,
                length_scale,
            } => *c0 * (R::one() + *amplitude * (z / *length_scale).tanh()),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            SpeedProfileKind::Constant { c0 } => {
                if c0.is_nan() || *c0 <= R::zero() {
                    Err(Error::domain("constant speed profile needs c0 > 0"))
                } else {
                    Ok(())
                }
            }
            SpeedProfileKind::Table(rows) => {
                if rows.is_empty() {
                    return Err(Error::domain("speed table is empty"));
                }
                for w in rows.windows(2) {
                    if w[1].0 <= w[0].0 {
                        return Err(Error::domain("speed table abscissae must increase"));
                    }
                }
                Ok(())
            }
            SpeedProfileKind::Tanh {
                c0,
                amplitude,
                length_scale,
            } => {
                if c0.is_nan() || *c0 <= R::zero() {
                    return Err(Error::domain("tanh speed profile needs c0 > 0"));
                }
                if amplitude.abs() >= R::one() {
                    return Err(Error::domain(
                        "tanh speed profile needs |amplitude| < 1 to stay positive",
                    ));
                }
                if length_scale.is_nan() || *length_scale <= R::zero() {
                    return Err(Error::domain("tanh speed profile needs length_scale > 0"));
                }
                Ok(())
            }
        }
    }
}

/// A profile sampled on a grid, positive everywhere.
#[derive(Debug, Clone)]
pub struct SpeedProfile<R: Real> {
    kind: SpeedProfileKind<R>,
    grid: UniformGrid<R>,
    samples: Vec<R>,
}

impl<R: Real> SpeedProfile<R> {
    pub fn sample(kind: SpeedProfileKind<R>, grid: UniformGrid<R>) -> Result<Self> {
        kind.validate()?;
        let samples: Vec<R> = grid.values().map(|z| kind.eval(z)).collect();
        if samples.iter().any(|&c| !c.is_finite() || c <= R::zero()) {
            return Err(Error::domain("speed profile must be positive on the grid"));
        }
        Ok(SpeedProfile {
            kind,
            grid,
            samples,
        })
    }

    pub fn kind(&self) -> &SpeedProfileKind<R> {
        &self.kind
    }

    pub fn grid(&self) -> &UniformGrid<R> {
        &self.grid
    }

    pub fn samples(&self) -> &[R] {
        &self.samples
    }
}

/// ħ(z) = Λ/c(z)² sampled on the profile's grid.
#[derive(Debug, Clone)]
pub struct HbarProfile<R: Real> {
    lambda: R,
    grid: UniformGrid<R>,
    samples: Vec<R>,
}

impl<R: Real> HbarProfile<R> {
    pub fn lambda(&self) -> R {
        self.lambda
    }

    pub fn grid(&self) -> &UniformGrid<R> {
        &self.grid
    }

    pub fn samples(&self) -> &[R] {
        &self.samples
    }

    /// max |√ħ(z)·c(z) − √Λ| over the grid, given the speed profile.
    pub fn constancy_defect(&self, speed: &SpeedProfile<R>) -> R {
        let root_lambda = self.lambda.sqrt();
        self.samples
            .iter()
            .zip(speed.samples())
            .map(|(&h, &c)| (h.sqrt() * c - root_lambda).abs())
            .fold(R::zero(), R::max)
    }
}

/// Fix ħ(z) from the speed profile and the coupling constant Λ.
pub fn hbar_from_speed<R: Real>(profile: &SpeedProfile<R>, lambda: R) -> Result<HbarProfile<R>> {
    if lambda.is_nan() || lambda <= R::zero() {
        return Err(Error::domain("Λ must be positive"));
    }
    Ok(HbarProfile {
        lambda,
        grid: profile.grid,
        samples: profile.samples.iter().map(|&c| lambda / (c * c)).collect(),
    })
}

/// Fourth-order first derivative; one-sided stencils on the outermost two
/// rows, centered five-point stencil in the interior.
fn derivative4<R: Real>(f: &[Complex<R>], spacing: R) -> Result<Vec<Complex<R>>> {
    let n = f.len();
    if n < 5 {
        return Err(Error::domain("fourth-order derivative needs ≥ 5 samples"));
    }
    let s = |x: f64| Complex::new(R::of(x), R::zero());
    let inv = Complex::new(R::one() / (R::of(12.0) * spacing), R::zero());
    let mut out = vec![Complex::new(R::zero(), R::zero()); n];
    out[0] = (s(-25.0) * f[0] + s(48.0) * f[1] + s(-36.0) * f[2] + s(16.0) * f[3] + s(-3.0) * f[4])
        * inv;
    out[1] =
        (s(-3.0) * f[0] + s(-10.0) * f[1] + s(18.0) * f[2] + s(-6.0) * f[3] + s(1.0) * f[4]) * inv;
    for i in 2..n - 2 {
        out[i] =
            (s(1.0) * f[i - 2] + s(-8.0) * f[i - 1] + s(8.0) * f[i + 1] + s(-1.0) * f[i + 2]) * inv;
    }
    out[n - 2] = (s(3.0) * f[n - 1]
        + s(10.0) * f[n - 2]
        + s(-18.0) * f[n - 3]
        + s(6.0) * f[n - 4]
        + s(-1.0) * f[n - 5])
        * inv;
    out[n - 1] = (s(25.0) * f[n - 1]
        + s(-48.0) * f[n - 2]
        + s(36.0) * f[n - 3]
        + s(-16.0) * f[n - 4]
        + s(3.0) * f[n - 5])
        * inv;
    Ok(out)
}

/// Apply the deformed momentum `Π ψ = √ħ·(−i·d/dz)(√ħ·ψ)`. The result is an
/// operator output, not a normalized state.
pub fn deformed_momentum_apply<R: Real>(
    psi: &PointerField<R>,
    hbar: &HbarProfile<R>,
) -> Result<PointerField<R>> {
    if *psi.grid() != hbar.grid {
        return Err(Error::GridMismatch);
    }
    let roots: Vec<R> = hbar.samples.iter().map(|&h| h.sqrt()).collect();
    let weighted: Vec<Complex<R>> = psi
        .amplitudes()
        .iter()
        .zip(roots.iter())
        .map(|(a, &r)| *a * r)
        .collect();
    let derivative = derivative4(&weighted, psi.grid().spacing())?;
    let minus_i = Complex::new(R::zero(), -R::one());
    let amps: Vec<Complex<R>> = derivative
        .iter()
        .zip(roots.iter())
        .map(|(d, &r)| *d * minus_i * r)
        .collect();
    PointerField::from_samples(*psi.grid(), amps, psi.epsilon_width())
}

/// Max interior deviation of `[z, Π]ψ − iħ(z)ψ` over the supplied test
/// functions. Interior means the centered-stencil rows (index 2..n−2); the
/// deviation there scales as O(Δz⁴).
pub fn commutator_check<R: Real>(
    hbar: &HbarProfile<R>,
    test_functions: &[PointerField<R>],
) -> Result<R> {
    let mut worst = R::zero();
    for psi in test_functions {
        if *psi.grid() != hbar.grid {
            return Err(Error::GridMismatch);
        }
        let z_psi: Vec<Complex<R>> = psi
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, a)| *a * hbar.grid.point(i))
            .collect();
        let z_psi = PointerField::from_samples(hbar.grid, z_psi, psi.epsilon_width())?;
        let pi_psi = deformed_momentum_apply(psi, hbar)?;
        let pi_z_psi = deformed_momentum_apply(&z_psi, hbar)?;
        let n = hbar.grid.points();
        for i in 2..n - 2 {
            let z = hbar.grid.point(i);
            let commutator = pi_psi.amplitudes()[i] * z - pi_z_psi.amplitudes()[i];
            let expected = psi.amplitudes()[i] * Complex::new(R::zero(), hbar.samples[i]);
            let deviation = (commutator - expected).norm();
            worst = worst.max(deviation);
        }
    }
    Ok(worst)
}

/// Result of the remapped pointer shift.
#[derive(Debug, Clone)]
pub struct VslShift<R: Real> {
    pub field: PointerField<R>,
    /// |‖Φ(z − s(z)t_B)‖² − 1| before renormalization; grows with
    /// max|s′|·t_B because the substitution is not unitary.
    pub norm_defect: R,
    /// Local displacement speed s(z) over the grid.
    pub displacement_speed: Vec<R>,
}

/// Local displacement speed `s(z) = √(ħ₀/ħ(z))·v⁰` for a flat-space weak
/// velocity v⁰.
pub fn local_displacement_speed<R: Real>(hbar: &HbarProfile<R>, hbar0: R, v0: R) -> Vec<R> {
    hbar.samples
        .iter()
        .map(|&h| (hbar0 / h).sqrt() * v0)
        .collect()
}

/// Pointwise-remapped pointer shift `Φ(z − s(z)·t_B)`, renormalized, with
/// the pre-renormalization norm defect reported. Sampling off-grid points
/// uses the trigonometric interpolant, so a constant profile reduces to the
/// flat-space rigid displacement exactly.
#[allow(clippy::too_many_arguments)]
pub fn vsl_pointer_shift<R: Real + FftNum>(
    pointer: &PointerField<R>,
    alpha: R,
    beta: R,
    tau: R,
    c0: R,
    hbar0: R,
    profile: &SpeedProfile<R>,
    lambda: R,
    t_b: R,
) -> Result<VslShift<R>> {
    if *pointer.grid() != profile.grid {
        return Err(Error::GridMismatch);
    }
    if hbar0.is_nan() || hbar0 <= R::zero() {
        return Err(Error::domain("ħ₀ must be positive"));
    }
    let v0 = weakval::weak_velocity_closed_form(alpha, beta, Complex::new(tau, R::zero()), c0)?.re;
    let hbar = hbar_from_speed(profile, lambda)?;
    let speed = local_displacement_speed(&hbar, hbar0, v0);
    let grid = pointer.grid();
    // the interpolant is periodic, so only displacements comparable to the
    // grid span are outright overflow; smaller ones are gated by the
    // boundary-density check on the result
    let span = grid.max() - grid.min();
    let max_shift = speed
        .iter()
        .map(|&s| (s * t_b).abs())
        .fold(R::zero(), R::max);
    if max_shift > span / R::of(4.0) {
        return Err(Error::boundary(
            "displacement overflow: |s(z)·t_B| exceeds a quarter of the grid span",
        ));
    }
    let targets: Vec<R> = grid
        .values()
        .zip(speed.iter())
        .map(|(z, &s)| z - s * t_b)
        .collect();
    let amps = crate::spectral::interpolate(grid, pointer.amplitudes(), &targets);
    let density = crate::grid::boundary_density(&amps);
    if density > R::of(crate::tolerances::BOUNDARY_DENSITY) {
        return Err(Error::boundary(format!(
            "remapped field reaches the grid boundary (density {:e})",
            density.to_f64().unwrap_or(f64::NAN),
        )));
    }
    let raw = PointerField::from_samples(*grid, amps, pointer.epsilon_width())?;
    let norm_defect = (raw.norm_sq() - R::one()).abs();
    Ok(VslShift {
        field: raw.normalized()?,
        norm_defect,
        displacement_speed: speed,
    })
}
