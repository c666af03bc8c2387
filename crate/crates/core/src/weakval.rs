//! Pre/post-selected states and weak values.
//!
//! A run pre-selects `⊗_i (|↑_i⟩|T_in⁺⟩ + |↓_i⟩|T_in⁻⟩)/√2` and post-selects
//! `⊗_i (α|↑_i⟩|T_fin⁺⟩ + β|↓_i⟩|T_fin⁻⟩)`, each spin factor carrying its own
//! clock register. The weak value of an observable is the post-selected
//! matrix element over the transition amplitude; for the collective velocity
//! it collapses to the closed form `(α − τβ)/(α + τβ)·c` with
//! `τ = ⟨T_fin⁻|T_in⁻⟩/⟨T_fin⁺|T_in⁺⟩`. This module carries both routes —
//! the closed form and the full tensor contraction — so each can audit the
//! other.
//!
//! Clock-register compression: spin orthogonality removes every cross-branch
//! time overlap from all contractions, so each clock register is represented
//! in the two-dimensional span of its in-packet and the orthogonal remainder
//! of its fin-packet. That reproduces every surviving inner product exactly
//! while keeping the N-spin state at dimension 4^N instead of
//! (2·n_grid)^N.

use crate::clock::{self, TimeStates};
use crate::grid::UniformGrid;
use crate::qcore::{BasisLabel, LinearOperator, Register, StateVector};
use crate::{oneway, tolerances, Error, Real, Result};
use num_complex::Complex;

/// Pre- and post-selected state pair with the selection coefficients and the
/// time states they were built from.
#[derive(Debug, Clone)]
pub struct PrePostPair<R: Real> {
    pre: StateVector<R>,
    post: StateVector<R>,
    alpha: R,
    beta: R,
    n_spins: usize,
    times: TimeStates<R>,
}

impl<R: Real> PrePostPair<R> {
    pub fn pre(&self) -> &StateVector<R> {
        &self.pre
    }

    pub fn post(&self) -> &StateVector<R> {
        &self.post
    }

    pub fn alpha(&self) -> R {
        self.alpha
    }

    pub fn beta(&self) -> R {
        self.beta
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn time_states(&self) -> &TimeStates<R> {
        &self.times
    }

    /// Post-selection gate for this pair: the orthogonality threshold applied
    /// per spin factor.
    pub fn overlap_threshold(&self) -> R {
        R::of(tolerances::ORTHOGONALITY).powi(self.n_spins as i32)
    }

    /// Weak value of an operator on the pair's full (spin ⊗ clock)^N basis.
    pub fn weak_value(&self, op: &LinearOperator<R>) -> Result<WeakValue<R>> {
        weak_value_with_threshold(&self.pre, &self.post, op, self.overlap_threshold())
    }
}

/// A weak value together with the post-selection amplitude it was
/// conditioned on.
#[derive(Debug, Clone, Copy)]
pub struct WeakValue<R: Real> {
    pub value: Complex<R>,
    pub post_selection_amplitude: Complex<R>,
    pub post_selection_probability: R,
}

impl<R: Real> WeakValue<R> {
    fn from_parts(numerator: Complex<R>, denominator: Complex<R>) -> Self {
        WeakValue {
            value: numerator / denominator,
            post_selection_amplitude: denominator,
            post_selection_probability: denominator.norm_sqr(),
        }
    }
}

/// Build the pre/post pair for `n_spins` spin factors, each with its own
/// compressed clock register.
pub fn build_pre_post<R: Real>(
    alpha: R,
    beta: R,
    times: &TimeStates<R>,
    n_spins: usize,
) -> Result<PrePostPair<R>> {
    if n_spins == 0 {
        return Err(Error::domain("pre/post construction needs n_spins ≥ 1"));
    }
    let unit_defect = (alpha * alpha + beta * beta - R::one()).abs();
    if unit_defect > R::of(tolerances::NORMALIZATION) {
        return Err(Error::domain(format!(
            "selection coefficients must satisfy α² + β² = 1 (defect {:e})",
            unit_defect.to_f64().unwrap_or(f64::NAN)
        )));
    }
    let w_plus = clock::overlap(&times.fin_plus, &times.in_plus)?;
    let w_minus = clock::overlap(&times.fin_minus, &times.in_minus)?;

    let zero = Complex::new(R::zero(), R::zero());
    let inv_sqrt2 = Complex::new(R::one() / R::of(2.0).sqrt(), R::zero());
    // residual weight of the fin-packet outside the in-packet direction
    let residual = |w: Complex<R>| (R::one() - w.norm_sqr()).max(R::zero()).sqrt();

    let mut pre: Option<StateVector<R>> = None;
    let mut post: Option<StateVector<R>> = None;
    for i in 1..=n_spins {
        let basis = BasisLabel::new(vec![
            Register::new(format!("spin{i}"), 2)?,
            Register::new(format!("clock{i}"), 2)?,
        ])?;
        let pre_factor = StateVector::new(basis.clone(), vec![inv_sqrt2, zero, inv_sqrt2, zero])?;
        let post_factor = StateVector::new(
            basis,
            vec![
                w_plus.conj() * alpha,
                Complex::new(residual(w_plus) * alpha, R::zero()),
                w_minus.conj() * beta,
                Complex::new(residual(w_minus) * beta, R::zero()),
            ],
        )?;
        pre = Some(match pre {
            Some(acc) => acc.tensor(&pre_factor),
            None => pre_factor,
        });
        post = Some(match post {
            Some(acc) => acc.tensor(&post_factor),
            None => post_factor,
        });
    }
    let pre = pre.expect("n_spins ≥ 1").normalized()?;
    let post = post.expect("n_spins ≥ 1").normalized()?;

    let pair = PrePostPair {
        pre,
        post,
        alpha,
        beta,
        n_spins,
        times: times.clone(),
    };
    let transition = pair.post.inner(&pair.pre)?;
    let gate = pair.overlap_threshold();
    if transition.norm() <= gate {
        return Err(Error::IllConditioned {
            what: "post-selection amplitude ⟨Ψ_fin|Ψ_in⟩".into(),
            magnitude: transition.norm().to_f64().unwrap_or(f64::NAN),
            threshold: gate.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(pair)
}

/// Weak value ⟨post|A|pre⟩ / ⟨post|pre⟩ for arbitrary states on a shared
/// basis.
pub fn weak_value<R: Real>(
    pre: &StateVector<R>,
    post: &StateVector<R>,
    op: &LinearOperator<R>,
) -> Result<WeakValue<R>> {
    weak_value_with_threshold(pre, post, op, R::of(tolerances::ORTHOGONALITY))
}

pub fn weak_value_with_threshold<R: Real>(
    pre: &StateVector<R>,
    post: &StateVector<R>,
    op: &LinearOperator<R>,
    threshold: R,
) -> Result<WeakValue<R>> {
    let denominator = post.inner(pre)?;
    if denominator.norm() <= threshold {
        return Err(Error::IllConditioned {
            what: "weak-value denominator ⟨Ψ_fin|Ψ_in⟩".into(),
            magnitude: denominator.norm().to_f64().unwrap_or(f64::NAN),
            threshold: threshold.to_f64().unwrap_or(f64::NAN),
        });
    }
    let numerator = post.inner(&op.apply(pre)?)?;
    Ok(WeakValue::from_parts(numerator, denominator))
}

/// Closed-form weak velocity `(α − τβ)/(α + τβ)·c`.
pub fn weak_velocity_closed_form<R: Real>(
    alpha: R,
    beta: R,
    tau: Complex<R>,
    c: R,
) -> Result<Complex<R>> {
    let alpha_c = Complex::new(alpha, R::zero());
    let tau_beta = tau * beta;
    let denominator = alpha_c + tau_beta;
    if denominator.norm() <= R::of(tolerances::ORTHOGONALITY) {
        return Err(Error::Pole {
            what: "weak velocity denominator α + τβ".into(),
            magnitude: denominator.norm().to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok((alpha_c - tau_beta) / denominator * c)
}

/// Weak velocity by full tensor contraction: the collective σ_z observable
/// applied spin register by spin register (identity on every clock
/// register), summed, and divided by the transition amplitude. For product
/// pre/post selections this must reproduce [`weak_velocity_closed_form`];
/// the two routes audit each other.
pub fn weak_velocity_full<R: Real>(pair: &PrePostPair<R>, c: R) -> Result<WeakValue<R>> {
    let denominator = pair.post.inner(&pair.pre)?;
    let gate = pair.overlap_threshold();
    if denominator.norm() <= gate {
        return Err(Error::IllConditioned {
            what: "post-selection amplitude ⟨Ψ_fin|Ψ_in⟩".into(),
            magnitude: denominator.norm().to_f64().unwrap_or(f64::NAN),
            threshold: gate.to_f64().unwrap_or(f64::NAN),
        });
    }
    let sigma_z = LinearOperator::<R>::pauli_z("site");
    let mut numerator = Complex::new(R::zero(), R::zero());
    for site in 0..pair.n_spins {
        // spin registers sit at even positions of the interleaved basis
        let applied = sigma_z.apply_local(&pair.pre, 2 * site)?;
        numerator += pair.post.inner(&applied)?;
    }
    let scale = c / R::of_usize(pair.n_spins);
    numerator *= scale;
    Ok(WeakValue::from_parts(numerator, denominator))
}

/// One row of the τ ↦ (⟨v_z⟩_w, ε) table.
#[derive(Debug, Clone, Copy)]
pub struct EpsilonTauRow<R: Real> {
    pub tau: R,
    /// Weak velocity in units of c; `None` on pole rows.
    pub weak_velocity_over_c: Option<R>,
    pub epsilon: Option<R>,
    pub epsilon_in_range: bool,
    pub tau_bound_ok: bool,
    pub pole: bool,
}

/// Tabulate the closed form and the ε map over an inclusive τ grid.
/// Pole rows are marked, not fatal.
pub fn epsilon_tau_scan<R: Real>(
    alpha: R,
    beta: R,
    tau_min: R,
    tau_max: R,
    steps: usize,
) -> Result<Vec<EpsilonTauRow<R>>> {
    if steps < 1 {
        return Err(Error::domain("scan needs at least one step"));
    }
    if tau_max < tau_min {
        return Err(Error::domain("scan range needs tau_max ≥ tau_min"));
    }
    let mut rows = Vec::with_capacity(steps);
    for j in 0..steps {
        let tau = if steps == 1 {
            tau_min
        } else {
            tau_min + (tau_max - tau_min) * R::of_usize(j) / R::of_usize(steps - 1)
        };
        let velocity =
            weak_velocity_closed_form(alpha, beta, Complex::new(tau, R::zero()), R::one())
                .ok()
                .map(|v| v.re);
        let map = oneway::epsilon_from_weak(alpha, beta, tau).ok();
        rows.push(EpsilonTauRow {
            tau,
            weak_velocity_over_c: velocity,
            epsilon: map.as_ref().map(|m| m.epsilon),
            epsilon_in_range: map.as_ref().map(|m| m.in_range).unwrap_or(false),
            tau_bound_ok: map
                .as_ref()
                .map(|m| m.tau_bound_ok)
                .unwrap_or(oneway::tau_coefficient_bound(alpha, beta, tau)),
            pole: velocity.is_none() || map.is_none(),
        });
    }
    Ok(rows)
}

/// Build time states realizing a target τ > 0: both branches share the
/// in-packet; the fin-packet of one branch is separated so the Gaussian
/// overlap ratio lands on τ. Negative or complex targets are not realizable
/// by real packet separations.
pub fn time_states_for_tau<R: Real>(
    target_tau: R,
    width: R,
    grid: UniformGrid<R>,
) -> Result<TimeStates<R>> {
    if target_tau.is_nan() || target_tau <= R::zero() {
        return Err(Error::domain(
            "separation-synthesized τ must be positive; use explicit packets otherwise",
        ));
    }
    let eight = R::of(8.0);
    let ln_tau = target_tau.ln();
    let (sep_plus, sep_minus) = if target_tau <= R::one() {
        (R::zero(), width * (-(eight * ln_tau)).sqrt())
    } else {
        (width * (eight * ln_tau).sqrt(), R::zero())
    };
    let origin = clock::make_packet(R::zero(), width, grid)?;
    Ok(TimeStates {
        in_plus: origin.clone(),
        in_minus: origin,
        fin_plus: clock::make_packet(sep_plus, width, grid)?,
        fin_minus: clock::make_packet(sep_minus, width, grid)?,
    })
}
