//! The classical one-way-speed layer: Reichenbach ε conventions, directional
//! speeds, round-trip consistency, the ε ↔ weak-velocity dictionary, and
//! causality classification.
//!
//! All speeds are signed along +z; "forward" is the +z leg. The two-way
//! speed is the only convention-free quantity: whatever ε says about the
//! forward leg, the backward leg compensates so the round trip always
//! averages to c.

use crate::{tolerances, Error, Real, Result};

/// Clock-synchronization convention: arrival time set by
/// `t₂ = t₁ + ε(t₃ − t₁)` with 0 < ε < 1, on top of a two-way speed.
#[derive(Debug, Clone, Copy)]
pub struct SynchronizationConvention<R: Real> {
    epsilon: R,
    c_two_way: R,
}

impl<R: Real> SynchronizationConvention<R> {
    pub fn new(epsilon: R, c_two_way: R) -> Result<Self> {
        let epsilon_valid = epsilon > R::zero() && epsilon < R::one();
        if !epsilon_valid {
            return Err(Error::domain("ε must lie strictly inside (0, 1)"));
        }
        if c_two_way.is_nan() || c_two_way <= R::zero() {
            return Err(Error::domain("two-way speed must be positive"));
        }
        Ok(SynchronizationConvention { epsilon, c_two_way })
    }

    pub fn epsilon(&self) -> R {
        self.epsilon
    }

    pub fn c_two_way(&self) -> R {
        self.c_two_way
    }
}

/// One-way speeds induced by a convention.
#[derive(Debug, Clone, Copy)]
pub struct DirectionalSpeeds<R: Real> {
    pub forward: R,
    pub backward: R,
}

/// c→ = c/(2ε), c← = c/(2(1−ε)); the harmonic mean of the pair is c.
pub fn directional_speeds<R: Real>(conv: &SynchronizationConvention<R>) -> DirectionalSpeeds<R> {
    let two = R::of(2.0);
    DirectionalSpeeds {
        forward: conv.c_two_way / (two * conv.epsilon),
        backward: conv.c_two_way / (two * (R::one() - conv.epsilon)),
    }
}

/// Timing of one out-and-back leg of length `l`.
#[derive(Debug, Clone, Copy)]
pub struct RoundTrip<R: Real> {
    pub t_forward: R,
    pub t_backward: R,
    pub c_effective: R,
}

/// Out-and-back travel times and the effective round-trip speed
/// `2l/(t→ + t←)`, which equals the two-way speed for every ε.
pub fn roundtrip_check<R: Real>(
    conv: &SynchronizationConvention<R>,
    length: R,
) -> Result<RoundTrip<R>> {
    if length.is_nan() || length <= R::zero() {
        return Err(Error::domain("round-trip length must be positive"));
    }
    let speeds = directional_speeds(conv);
    let t_forward = length / speeds.forward;
    let t_backward = length / speeds.backward;
    Ok(RoundTrip {
        t_forward,
        t_backward,
        c_effective: R::of(2.0) * length / (t_forward + t_backward),
    })
}

/// ε inferred from the selection coefficients and a real τ, with validity
/// flags.
#[derive(Debug, Clone, Copy)]
pub struct EpsilonMap<R: Real> {
    pub epsilon: R,
    /// 0 < ε < 1, the convention's own validity region.
    pub in_range: bool,
    /// The coefficient bound τ < α/(3β) that keeps ε below 1 for β > 0;
    /// vacuous at β = 0, evaluated literally (and reported as-is) for β < 0.
    pub tau_bound_ok: bool,
}

/// ε = (α + τβ)/(2(α − τβ)).
pub fn epsilon_from_weak<R: Real>(alpha: R, beta: R, tau: R) -> Result<EpsilonMap<R>> {
    let denominator = alpha - tau * beta;
    if denominator.abs() <= R::of(tolerances::ORTHOGONALITY) {
        return Err(Error::Pole {
            what: "ε map denominator α − τβ".into(),
            magnitude: denominator.abs().to_f64().unwrap_or(f64::NAN),
        });
    }
    let epsilon = (alpha + tau * beta) / (R::of(2.0) * denominator);
    Ok(EpsilonMap {
        epsilon,
        in_range: epsilon > R::zero() && epsilon < R::one(),
        tau_bound_ok: tau_coefficient_bound(alpha, beta, tau),
    })
}

/// The coefficient bound τ < α/(3β), vacuous at β = 0.
pub fn tau_coefficient_bound<R: Real>(alpha: R, beta: R, tau: R) -> bool {
    if beta == R::zero() {
        true
    } else {
        tau < alpha / (R::of(3.0) * beta)
    }
}

/// Where a reported speed sits relative to the two-way speed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeedRegime {
    Subluminal,
    Luminal,
    Superluminal,
}

impl SpeedRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpeedRegime::Subluminal => "subluminal",
            SpeedRegime::Luminal => "luminal",
            SpeedRegime::Superluminal => "superluminal",
        }
    }
}

/// Causality verdict for a weak velocity. `information_transmitted` is
/// always false: the pointer shift rescales an everywhere-supported analytic
/// wavefunction by the same rule at every point, so no controllable signal
/// rides on it.
#[derive(Debug, Clone)]
pub struct CausalityVerdict {
    pub regime: SpeedRegime,
    pub information_transmitted: bool,
    pub note: String,
}

pub fn causality_class<R: Real>(v_w: R, c: R) -> Result<CausalityVerdict> {
    if c.is_nan() || c <= R::zero() {
        return Err(Error::domain("two-way speed must be positive"));
    }
    let ratio = v_w.abs() / c;
    let regime = if (ratio - R::one()).abs() <= R::of(1e-12) {
        SpeedRegime::Luminal
    } else if ratio < R::one() {
        SpeedRegime::Subluminal
    } else {
        SpeedRegime::Superluminal
    };
    let note = match regime {
        SpeedRegime::Superluminal => {
            "post-selected displacement of an analytic wavepacket; the shift is fixed by the \
             boundary states, applies identically at every point, and carries no controllable \
             signal"
        }
        SpeedRegime::Luminal => "displacement at the two-way speed",
        SpeedRegime::Subluminal => "displacement below the two-way speed",
    };
    Ok(CausalityVerdict {
        regime,
        information_transmitted: false,
        note: note.to_string(),
    })
}
