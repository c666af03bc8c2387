//! Numerical toolkit for weak-velocity measurements with desynchronized
//! quantum clocks.
//!
//! The crate models a pre/post-selected quantum particle whose internal
//! degrees of freedom carry the velocity observable `c·σ_z` (or its N-spin
//! collective generalization), entangled with finite-width clock wavepackets
//! on a time grid. A Gaussian test-particle pointer records the weak value of
//! the velocity; the result maps onto the Reichenbach ε convention for the
//! one-way speed of light and onto a position-dependent-speed extension with
//! a deformed momentum operator.
//!
//! Module map:
//! - [`qcore`] — dense complex states/operators over labelled tensor bases;
//! - [`clock`] — clock wavepackets, desynchronization profiles, overlap
//!   amplitudes and the ratio τ;
//! - [`weakval`] — pre/post-selected pairs, weak values, the weak-velocity
//!   closed form and its N-spin brute-force counterpart;
//! - [`mod@pointer`] — exact vs. first-order pointer evolution on a z grid;
//! - [`oneway`] — directional speeds, round-trip consistency, the ε map and
//!   causality classification;
//! - [`vsl`] — position-dependent speed of light, `ħ(z) = Λ/c(z)²`, the
//!   deformed momentum operator and the remapped pointer shift.
//!
//! Everything is generic over the floating-point scalar through [`Real`];
//! concrete `f64` aliases are exported below.

pub mod clock;
pub mod error;
pub mod grid;
pub mod oneway;
pub mod pointer;
pub mod qcore;
pub mod spectral;
pub mod tolerances;
pub mod vsl;
pub mod weakval;

pub use error::{Error, Result};
pub use num_complex::Complex;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps, ToPrimitive};
use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

/// Floating-point scalar for all simulation code: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssignOps
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lower a fixed `f64` constant (tolerances, closed-form coefficients).
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant")
    }

    /// Lower a count into the scalar type.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("representable count")
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type Grid64 = grid::UniformGrid<f64>;
pub type StateVector64 = qcore::StateVector<f64>;
pub type Operator64 = qcore::LinearOperator<f64>;
pub type ClockPacket64 = clock::ClockPacket<f64>;
pub type TimeStates64 = clock::TimeStates<f64>;
pub type DesyncProfile64 = clock::DesyncProfile<f64>;
pub type TauRatio64 = clock::TauRatio<f64>;
pub type PrePostPair64 = weakval::PrePostPair<f64>;
pub type WeakValue64 = weakval::WeakValue<f64>;
pub type PointerField64 = pointer::PointerField<f64>;
pub type PointerReport64 = pointer::PointerReport<f64>;
pub type SpeedProfile64 = vsl::SpeedProfile<f64>;
pub type HbarProfile64 = vsl::HbarProfile<f64>;

#[cfg(test)]
mod tests {
    use super::*;

    // The generic layer must instantiate at f32 as well; tolerances here are
    // single-precision scale.
    #[test]
    fn f32_instantiation_smoke() {
        let grid = grid::UniformGrid::<f32>::new(-20.0, 20.0, 512).unwrap();
        let packet = clock::make_packet(0.0f32, 1.0, grid).unwrap();
        let auto = clock::overlap(&packet, &packet).unwrap();
        assert!((auto.re - 1.0).abs() < 1e-5);
        let v =
            weakval::weak_velocity_closed_form(0.6f32, 0.8, Complex::new(1.0, 0.0), 1.0).unwrap();
        assert!((v.re + 1.0 / 7.0).abs() < 1e-5);
    }
}
