//! The Gaussian test particle on the z axis.
//!
//! The particle Hamiltonian is branch-diagonal (`p_z·c·σ_z`), so the exact
//! conditional evolution is two rigid spectral translations — the |↑⟩ branch
//! by +c·t_B, the |↓⟩ branch by −c·t_B — weighted by the post-selected
//! branch amplitudes, which include the clock transition overlaps taken
//! after the internal clock has advanced by `t_B + ∫g`. The first-order weak
//! picture replaces all of that by one rigid displacement of the original
//! Gaussian by `Re⟨v_z⟩_w · t_B`. Comparing the two quantifies the weak
//! approximation.
//!
//! The transverse x and y factors are spectators (the Hamiltonian commutes
//! with them), factor out of every reported ratio, and are dropped: fields
//! here are one-dimensional in z. Width convention: `epsilon_width` is the
//! Gaussian dispersion ε, amplitudes go as `exp(−z²/(2ε²))`, so the position
//! variance of |Φ|² is ε²/2.

use crate::clock::{self, DesyncProfile};
use crate::grid::{boundary_density, UniformGrid};
use crate::weakval::PrePostPair;
use crate::{tolerances, Error, Real, Result};
use num_complex::Complex;
use rustfft::FftNum;
use std::fmt::Write as _;

/// Grid-sampled complex pointer wavefunction.
#[derive(Debug, Clone)]
pub struct PointerField<R: Real> {
    grid: UniformGrid<R>,
    amps: Vec<Complex<R>>,
    epsilon_width: R,
}

impl<R: Real> PointerField<R> {
    /// Wrap raw samples (used for operator outputs; no normalization
    /// implied).
    pub fn from_samples(
        grid: UniformGrid<R>,
        amps: Vec<Complex<R>>,
        epsilon_width: R,
    ) -> Result<Self> {
        if amps.len() != grid.points() {
            return Err(Error::domain("sample count does not match grid"));
        }
        Ok(PointerField {
            grid,
            amps,
            epsilon_width,
        })
    }

    pub fn grid(&self) -> &UniformGrid<R> {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex<R>] {
        &self.amps
    }

    pub fn epsilon_width(&self) -> R {
        self.epsilon_width
    }

    pub fn norm_sq(&self) -> R {
        self.grid.norm_sq(&self.amps)
    }

    pub fn mean_z(&self) -> R {
        self.grid.mean(&self.amps)
    }

    pub fn variance_z(&self) -> R {
        self.grid.variance(&self.amps)
    }

    pub fn normalized(&self) -> Result<PointerField<R>> {
        let norm = self.norm_sq().sqrt();
        if norm < R::of(tolerances::ZERO_STATE_FLOOR) {
            return Err(Error::domain("cannot normalize a zero field"));
        }
        let inv = Complex::new(R::one() / norm, R::zero());
        Ok(PointerField {
            grid: self.grid,
            amps: self.amps.iter().map(|a| *a * inv).collect(),
            epsilon_width: self.epsilon_width,
        })
    }

    /// CSV dump: header `z,re,im,prob_density`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.amps.len() * 80);
        out.push_str("z,re,im,prob_density\n");
        for (i, a) in self.amps.iter().enumerate() {
            let z = self.grid.point(i);
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                z,
                a.re,
                a.im,
                a.norm_sqr()
            );
        }
        out
    }
}

/// What one exact conditional evolution measured.
#[derive(Debug, Clone)]
pub struct PointerReport<R: Real> {
    pub mean_z: R,
    /// mean_z / t_B — the velocity the pointer actually records.
    pub measured_weak_velocity: R,
    pub post_selection_probability: R,
    /// |⟨weak-displaced Gaussian | exact conditional field⟩|².
    pub fidelity_to_weak_prediction: R,
    /// Closed-form weak velocity at readout time (clock overlaps taken after
    /// the internal-clock advance). Displacements use the real part.
    pub predicted_weak_velocity: Complex<R>,
}

/// Moment and fidelity deltas between two fields on one grid.
#[derive(Debug, Clone, Copy)]
pub struct FieldComparison<R: Real> {
    pub fidelity: R,
    pub delta_mean: R,
    pub delta_variance: R,
}

/// Normalized Gaussian pointer centered at the origin.
pub fn gaussian_pointer<R: Real>(
    epsilon_width: R,
    grid: UniformGrid<R>,
) -> Result<PointerField<R>> {
    if epsilon_width.is_nan() || epsilon_width <= R::zero() {
        return Err(Error::domain("pointer width must be positive"));
    }
    if epsilon_width < grid.spacing() * R::of(2.0) {
        return Err(Error::domain(
            "pointer width must span at least two grid spacings",
        ));
    }
    let eight = R::of(8.0);
    if !grid.covers(-eight * epsilon_width, eight * epsilon_width) {
        return Err(Error::boundary(
            "grid does not cover ±8·epsilon_width around the origin",
        ));
    }
    let inv_two_eps_sq = R::one() / (R::of(2.0) * epsilon_width * epsilon_width);
    let amps: Vec<Complex<R>> = grid
        .values()
        .map(|z| Complex::new((-z * z * inv_two_eps_sq).exp(), R::zero()))
        .collect();
    let norm = grid.norm_sq(&amps).sqrt();
    let inv = Complex::new(R::one() / norm, R::zero());
    Ok(PointerField {
        grid,
        amps: amps.into_iter().map(|a| a * inv).collect(),
        epsilon_width,
    })
}

fn check_boundary<R: Real>(amps: &[Complex<R>], what: &str) -> Result<()> {
    let density = boundary_density(amps);
    if density > R::of(tolerances::BOUNDARY_DENSITY) {
        return Err(Error::boundary(format!(
            "{what}: boundary probability density {:e} exceeds {:e}",
            density.to_f64().unwrap_or(f64::NAN),
            tolerances::BOUNDARY_DENSITY,
        )));
    }
    Ok(())
}

fn translated<R: Real + FftNum>(
    field: &PointerField<R>,
    shift: R,
    what: &str,
) -> Result<Vec<Complex<R>>> {
    let eight = R::of(8.0);
    let lo = shift - eight * field.epsilon_width;
    let hi = shift + eight * field.epsilon_width;
    if !field.grid.covers(lo, hi) {
        return Err(Error::boundary(format!(
            "{what}: displacement {} ± 8·width leaves the grid",
            shift.to_f64().unwrap_or(f64::NAN),
        )));
    }
    let amps = crate::spectral::translate(&field.amps, field.grid.spacing(), shift);
    check_boundary(&amps, what)?;
    Ok(amps)
}

/// Exact conditional evolution of a single-spin pair for external-clock time
/// `t_B`, plus the report comparing it against the weak prediction.
pub fn evolve_exact<R: Real + FftNum>(
    pointer: &PointerField<R>,
    pair: &PrePostPair<R>,
    g: &DesyncProfile<R>,
    c: R,
    t_b: R,
) -> Result<(PointerField<R>, PointerReport<R>)> {
    if pair.n_spins() != 1 {
        return Err(Error::domain(
            "exact pointer evolution is implemented for single-spin pairs",
        ));
    }
    if t_b.is_nan() || t_b <= R::zero() {
        return Err(Error::domain("evolution time t_B must be positive"));
    }
    let times = pair.time_states();
    // the internal clock advances by t_B + ∫g before the fin-overlap
    let in_plus = clock::evolve_packet(&times.in_plus, t_b, g)?;
    let in_minus = clock::evolve_packet(&times.in_minus, t_b, g)?;
    let w_plus = clock::overlap(&times.fin_plus, &in_plus)?;
    let w_minus = clock::overlap(&times.fin_minus, &in_minus)?;

    let inv_sqrt2 = R::one() / R::of(2.0).sqrt();
    let a = w_plus * (pair.alpha() * inv_sqrt2);
    let b = w_minus * (pair.beta() * inv_sqrt2);

    let branch_sum = a + b;
    let threshold = R::of(tolerances::ORTHOGONALITY);
    if branch_sum.norm() <= threshold {
        return Err(Error::IllConditioned {
            what: "post-selection branch sum α⟨T⁺⟩ + β⟨T⁻⟩".into(),
            magnitude: branch_sum.norm().to_f64().unwrap_or(f64::NAN),
            threshold: threshold.to_f64().unwrap_or(f64::NAN),
        });
    }
    let predicted = (a - b) / branch_sum * c;

    let displacement = c * t_b;
    let up = translated(pointer, displacement, "|↑⟩ branch")?;
    let down = translated(pointer, -displacement, "|↓⟩ branch")?;
    let amps: Vec<Complex<R>> = up
        .iter()
        .zip(down.iter())
        .map(|(u, d)| *u * a + *d * b)
        .collect();

    let conditional_norm_sq = pointer.grid.norm_sq(&amps);
    let field = PointerField {
        grid: pointer.grid,
        amps,
        epsilon_width: pointer.epsilon_width,
    }
    .normalized()?;

    let weak_field = evolve_weak(pointer, predicted, t_b)?;
    let fidelity = field.grid.overlap(&weak_field.amps, &field.amps).norm_sqr()
        / (weak_field.norm_sq() * field.norm_sq());

    let mean_z = field.mean_z();
    let report = PointerReport {
        mean_z,
        measured_weak_velocity: mean_z / t_b,
        post_selection_probability: conditional_norm_sq,
        fidelity_to_weak_prediction: fidelity,
        predicted_weak_velocity: predicted,
    };
    Ok((field, report))
}

/// First-order weak evolution: one rigid displacement by `Re(v_w)·t_B`.
/// Imaginary parts of the weak velocity are not folded into position shifts.
pub fn evolve_weak<R: Real + FftNum>(
    pointer: &PointerField<R>,
    v_w: impl Into<Complex<R>>,
    t_b: R,
) -> Result<PointerField<R>> {
    let v_w: Complex<R> = v_w.into();
    let amps = translated(pointer, v_w.re * t_b, "weak displacement")?;
    Ok(PointerField {
        grid: pointer.grid,
        amps,
        epsilon_width: pointer.epsilon_width,
    })
}

/// Fidelity |⟨weak|exact⟩|² (normalization divided out) and moment deltas.
pub fn compare<R: Real>(
    exact: &PointerField<R>,
    weak: &PointerField<R>,
) -> Result<FieldComparison<R>> {
    if exact.grid != weak.grid {
        return Err(Error::GridMismatch);
    }
    let fidelity =
        exact.grid.overlap(&weak.amps, &exact.amps).norm_sqr() / (weak.norm_sq() * exact.norm_sq());
    Ok(FieldComparison {
        fidelity,
        delta_mean: exact.mean_z() - weak.mean_z(),
        delta_variance: exact.variance_z() - weak.variance_z(),
    })
}
