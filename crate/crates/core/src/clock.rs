//! Quantum-clock time states as Gaussian wavepackets on a time grid.
//!
//! Idealized time eigenstates are non-normalizable, so the clock register is
//! realized as a finite-width packet; every transition amplitude between
//! initial and final time states is then a finite grid quadrature. Evolution
//! is a rigid translation along the time axis by `t_B + ∫₀^{t_B} g(u) du`,
//! where `g` is the desynchronization profile that makes the particle's
//! internal clock tick faster than the external one. Translation is done in
//! the spectral domain (phase multiplication), which is exactly unitary
//! and dispersion-free but requires packets to stay clear of the grid
//! boundary.
//!
//! Width convention: `width` is the standard deviation of the probability
//! density |ψ|², i.e. amplitudes go as `exp(−(t−t₀)²/(4·width²))`. Two
//! normalized packets of equal width separated by Δ then overlap with
//! magnitude `exp(−Δ²/(8·width²))`.

use crate::grid::{boundary_density, UniformGrid};
use crate::{tolerances, Error, Real, Result};
use num_complex::Complex;
use rustfft::FftNum;

/// Grid-sampled clock wavepacket.
#[derive(Debug, Clone)]
pub struct ClockPacket<R: Real> {
    grid: UniformGrid<R>,
    amps: Vec<Complex<R>>,
    center: R,
    width: R,
}

impl<R: Real> ClockPacket<R> {
    pub fn grid(&self) -> &UniformGrid<R> {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex<R>] {
        &self.amps
    }

    /// Nominal packet center (tracked analytically through evolutions).
    pub fn center(&self) -> R {
        self.center
    }

    pub fn width(&self) -> R {
        self.width
    }

    pub fn norm_sq(&self) -> R {
        self.grid.norm_sq(&self.amps)
    }

    /// First moment of |ψ|² measured by grid quadrature.
    pub fn measured_center(&self) -> R {
        self.grid.mean(&self.amps)
    }

    /// Multiply by a global phase (used by invariance tests).
    pub fn with_phase(&self, theta: R) -> ClockPacket<R> {
        let phase = Complex::from_polar(R::one(), theta);
        ClockPacket {
            grid: self.grid,
            amps: self.amps.iter().map(|a| *a * phase).collect(),
            center: self.center,
            width: self.width,
        }
    }
}

/// The four time states of one experiment: initial and final packets for the
/// + and − branches.
#[derive(Debug, Clone)]
pub struct TimeStates<R: Real> {
    pub in_plus: ClockPacket<R>,
    pub in_minus: ClockPacket<R>,
    pub fin_plus: ClockPacket<R>,
    pub fin_minus: ClockPacket<R>,
}

/// Desynchronization profile g(t_B) ≥ 0 coupling the internal clock's
/// Hamiltonian to external-clock time. `Zero` leaves the clocks in step;
/// any other kind makes the internal clock tick at rate 1 + g.
#[derive(Debug, Clone)]
pub enum DesyncProfile<R: Real> {
    Zero,
    Constant(R),
    /// Piecewise-linear table of (u, g(u)) with strictly increasing u;
    /// constant extension outside the tabulated range.
    Table(Vec<(R, R)>),
    /// g(u) = slope·u.
    Ramp {
        slope: R,
    },
    /// g(u) = amplitude·sin²(omega·u).
    SinSquared {
        amplitude: R,
        omega: R,
    },
}

impl<R: Real> DesyncProfile<R> {
    pub fn validate(&self) -> Result<()> {
        match self {
            DesyncProfile::Zero => Ok(()),
            DesyncProfile::Constant(g0) => {
                if *g0 > R::zero() {
                    Ok(())
                } else {
                    Err(Error::domain(
                        "constant desync profile needs g0 > 0 (use zero)",
                    ))
                }
            }
            DesyncProfile::Table(rows) => {
                if rows.is_empty() {
                    return Err(Error::domain("desync table is empty"));
                }
                for w in rows.windows(2) {
                    if w[1].0 <= w[0].0 {
                        return Err(Error::domain("desync table abscissae must increase"));
                    }
                }
                if rows.iter().any(|&(_, g)| g < R::zero()) {
                    return Err(Error::domain("desync profile must be nonnegative"));
                }
                if rows.iter().all(|&(_, g)| g == R::zero()) {
                    return Err(Error::domain("all-zero desync table (use zero)"));
                }
                Ok(())
            }
            DesyncProfile::Ramp { slope } => {
                if *slope > R::zero() {
                    Ok(())
                } else {
                    Err(Error::domain("ramp desync profile needs slope > 0"))
                }
            }
            DesyncProfile::SinSquared { amplitude, omega } => {
                if *amplitude > R::zero() && *omega > R::zero() {
                    Ok(())
                } else {
                    Err(Error::domain(
                        "sin² desync profile needs amplitude > 0 and omega > 0",
                    ))
                }
            }
        }
    }

    pub fn eval(&self, u: R) -> R {
        match self {
            DesyncProfile::Zero => R::zero(),
            DesyncProfile::Constant(g0) => *g0,
            DesyncProfile::Table(rows) => {
                if u <= rows[0].0 {
                    return rows[0].1;
                }
                if u >= rows[rows.len() - 1].0 {
                    return rows[rows.len() - 1].1;
                }
                let k = rows.partition_point(|&(x, _)| x <= u);
                let (x0, y0) = rows[k - 1];
                let (x1, y1) = rows[k];
                y0 + (y1 - y0) * (u - x0) / (x1 - x0)
            }
            DesyncProfile::Ramp { slope } => *slope * u,
            DesyncProfile::SinSquared { amplitude, omega } => {
                let s = (*omega * u).sin();
                *amplitude * s * s
            }
        }
    }
}

/// ∫₀^{t_B} g(u) du. Closed forms where the profile is polynomial or
/// tabulated; adaptive Simpson (absolute tolerance 1e-10·t_B) otherwise.
/// Requires t_B ≥ 0.
pub fn desync_integral<R: Real>(g: &DesyncProfile<R>, t_b: R) -> R {
    assert!(t_b >= R::zero(), "desync integral needs t_B ≥ 0");
    match g {
        DesyncProfile::Zero => R::zero(),
        DesyncProfile::Constant(g0) => *g0 * t_b,
        DesyncProfile::Ramp { slope } => *slope * t_b * t_b / R::of(2.0),
        DesyncProfile::Table(rows) => table_integral(rows, t_b),
        DesyncProfile::SinSquared { .. } => {
            let tol = R::of(1e-10) * t_b.max(R::of(1e-30));
            adaptive_simpson(&|u| g.eval(u), R::zero(), t_b, tol, 40)
        }
    }
}

/// Exact integral of a piecewise-linear table with constant extension.
fn table_integral<R: Real>(rows: &[(R, R)], t_b: R) -> R {
    let half = R::of(0.5);
    let mut acc = R::zero();
    let mut cursor = R::zero();
    // constant extension before the first knot
    if rows[0].0 > R::zero() {
        let upto = rows[0].0.min(t_b);
        acc += rows[0].1 * (upto - cursor).max(R::zero());
        cursor = upto;
    }
    if cursor >= t_b {
        return acc;
    }
    for w in rows.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        if x1 <= cursor {
            continue;
        }
        let lo = cursor.max(x0);
        let hi = x1.min(t_b);
        if hi <= lo {
            break;
        }
        let slope = (y1 - y0) / (x1 - x0);
        let g_lo = y0 + slope * (lo - x0);
        let g_hi = y0 + slope * (hi - x0);
        acc += half * (g_lo + g_hi) * (hi - lo);
        cursor = hi;
        if cursor >= t_b {
            return acc;
        }
    }
    // constant extension past the last knot
    if cursor < t_b {
        acc += rows[rows.len() - 1].1 * (t_b - cursor);
    }
    acc
}

fn simpson<R: Real>(f: &impl Fn(R) -> R, a: R, fa: R, b: R, fb: R) -> (R, R, R) {
    let half = R::of(0.5);
    let m = (a + b) * half;
    let fm = f(m);
    let est = (b - a) / R::of(6.0) * (fa + R::of(4.0) * fm + fb);
    (m, fm, est)
}

fn adaptive_simpson<R: Real>(f: &impl Fn(R) -> R, a: R, b: R, tol: R, depth: u32) -> R {
    let fa = f(a);
    let fb = f(b);
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<R: Real>(
    f: &impl Fn(R) -> R,
    a: R,
    fa: R,
    b: R,
    fb: R,
    m: R,
    fm: R,
    whole: R,
    tol: R,
    depth: u32,
) -> R {
    let (lm, flm, left) = simpson(f, a, fa, m, fm);
    let (rm, frm, right) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= R::of(15.0) * tol {
        return left + right + delta / R::of(15.0);
    }
    let half_tol = tol * R::of(0.5);
    adaptive_step(f, a, fa, m, fm, lm, flm, left, half_tol, depth - 1)
        + adaptive_step(f, m, fm, b, fb, rm, frm, right, half_tol, depth - 1)
}

/// Build a normalized Gaussian packet. The grid must cover
/// `center ± 8·width`, which puts the boundary probability density below
/// the wrap-around threshold, and the width must be resolved by at least
/// two grid spacings.
pub fn make_packet<R: Real>(center: R, width: R, grid: UniformGrid<R>) -> Result<ClockPacket<R>> {
    if width.is_nan() || width <= R::zero() {
        return Err(Error::domain("packet width must be positive"));
    }
    if width < grid.spacing() * R::of(2.0) {
        return Err(Error::domain(
            "packet width must span at least two grid spacings",
        ));
    }
    let eight = R::of(8.0);
    if !grid.covers(center - eight * width, center + eight * width) {
        return Err(Error::boundary(format!(
            "grid does not cover packet center ± 8·width (center {}, width {})",
            center.to_f64().unwrap_or(f64::NAN),
            width.to_f64().unwrap_or(f64::NAN),
        )));
    }
    let quarter_inv = R::one() / (R::of(4.0) * width * width);
    let amps: Vec<Complex<R>> = grid
        .values()
        .map(|t| {
            let d = t - center;
            Complex::new((-d * d * quarter_inv).exp(), R::zero())
        })
        .collect();
    let norm = grid.norm_sq(&amps).sqrt();
    let scale = Complex::new(R::one() / norm, R::zero());
    let amps: Vec<Complex<R>> = amps.into_iter().map(|a| a * scale).collect();
    let packet = ClockPacket {
        grid,
        amps,
        center,
        width,
    };
    check_boundary(&packet.amps, "freshly built packet")?;
    Ok(packet)
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

/// Advance a packet by external-clock duration `t_B`: the internal clock
/// moves by `t_B + ∫₀^{t_B} g`, realized as an exact spectral translation.
pub fn evolve_packet<R: Real + FftNum>(
    packet: &ClockPacket<R>,
    duration: R,
    g: &DesyncProfile<R>,
) -> Result<ClockPacket<R>> {
    if duration < R::zero() {
        return Err(Error::domain("evolution duration must be ≥ 0"));
    }
    g.validate()?;
    let advance = duration + desync_integral(g, duration);
    let new_center = packet.center + advance;
    let eight = R::of(8.0);
    if !packet.grid.covers(
        new_center - eight * packet.width,
        new_center + eight * packet.width,
    ) {
        return Err(Error::boundary(format!(
            "translated packet center {} ± 8·width leaves the grid",
            new_center.to_f64().unwrap_or(f64::NAN),
        )));
    }
    let amps = crate::spectral::translate(&packet.amps, packet.grid.spacing(), advance);
    check_boundary(&amps, "translated packet")?;
    Ok(ClockPacket {
        grid: packet.grid,
        amps,
        center: new_center,
        width: packet.width,
    })
}

/// Transition amplitude ⟨a|b⟩ by grid quadrature.
pub fn overlap<R: Real>(a: &ClockPacket<R>, b: &ClockPacket<R>) -> Result<Complex<R>> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    Ok(a.grid.overlap(&a.amps, &b.amps))
}

/// Ratio of the final/initial transition amplitudes of the two branches,
/// τ = ⟨T_fin⁻|T_in⁻⟩ / ⟨T_fin⁺|T_in⁺⟩.
#[derive(Debug, Clone, Copy)]
pub struct TauRatio<R: Real> {
    pub value: Complex<R>,
    pub plus_overlap: Complex<R>,
    pub minus_overlap: Complex<R>,
}

impl<R: Real> TauRatio<R> {
    /// τ counts as real when its imaginary part is negligible.
    pub fn is_real(&self) -> bool {
        self.value.im.abs() <= R::of(tolerances::REAL_TAU)
    }
}

pub fn tau<R: Real>(states: &TimeStates<R>) -> Result<TauRatio<R>> {
    tau_with_threshold(states, R::of(tolerances::ORTHOGONALITY))
}

pub fn tau_with_threshold<R: Real>(states: &TimeStates<R>, threshold: R) -> Result<TauRatio<R>> {
    let plus = overlap(&states.fin_plus, &states.in_plus)?;
    let minus = overlap(&states.fin_minus, &states.in_minus)?;
    if plus.norm() <= threshold {
        return Err(Error::IllConditioned {
            what: "τ denominator ⟨T_fin⁺|T_in⁺⟩".into(),
            magnitude: plus.norm().to_f64().unwrap_or(f64::NAN),
            threshold: threshold.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(TauRatio {
        value: minus / plus,
        plus_overlap: plus,
        minus_overlap: minus,
    })
}

/// Weak-regime margin g(t_B)·t_B; the first-order pointer picture is
/// trustworthy only while this stays small.
pub fn weak_regime_margin<R: Real>(g: &DesyncProfile<R>, t_b: R) -> R {
    g.eval(t_b) * t_b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> UniformGrid<f64> {
        UniformGrid::new(-20.0, 20.0, 4096).unwrap()
    }

    fn analytic_overlap(separation: f64, width: f64) -> f64 {
        (-separation * separation / (8.0 * width * width)).exp()
    }

    #[test]
    fn packet_is_normalized_and_centered() {
        let p = make_packet(0.0, 1.0, grid()).unwrap();
        assert!((p.norm_sq() - 1.0).abs() < 1e-9);
        assert!(p.measured_center().abs() < 1e-9);

        let wide = UniformGrid::<f64>::new(-40.0, 40.0, 8192).unwrap();
        let q = make_packet(5.0, 2.0, wide).unwrap();
        assert!((q.measured_center() - 5.0).abs() < 1e-9);
        assert!((q.norm_sq() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn packet_requires_coverage() {
        // center + 8·width = 18 fits, 28 does not
        assert!(make_packet(10.0, 1.0, grid()).is_ok());
        assert!(matches!(
            make_packet(20.0, 1.0, grid()),
            Err(Error::Boundary { .. })
        ));
        assert!(make_packet(0.0, -1.0, grid()).is_err());
    }

    #[test]
    fn desync_integrals_match_closed_forms() {
        let zero = DesyncProfile::<f64>::Zero;
        assert_eq!(desync_integral(&zero, 2.0), 0.0);

        let half = DesyncProfile::<f64>::Constant(0.5);
        assert!((desync_integral(&half, 2.0) - 1.0).abs() < 1e-12);

        // g(u) = u over [0,1]: ∫ = 1/2, via the exact table path
        let table = DesyncProfile::<f64>::Table(vec![(0.0, 0.0), (1.0, 1.0)]);
        assert!((desync_integral(&table, 1.0) - 0.5).abs() < 1e-12);
        // and via the ramp closed form
        let ramp = DesyncProfile::<f64>::Ramp { slope: 1.0 };
        assert!((desync_integral(&ramp, 1.0) - 0.5).abs() < 1e-12);

        // sin² goes through adaptive Simpson; antiderivative is
        // a·(t/2 − sin(2ωt)/(4ω))
        let g = DesyncProfile::<f64>::SinSquared {
            amplitude: 0.3,
            omega: 2.0,
        };
        let t = 1.7f64;
        let exact = 0.3 * (t / 2.0 - (2.0 * 2.0 * t).sin() / (4.0 * 2.0));
        assert!((desync_integral(&g, t) - exact).abs() < 1e-10 * t);
    }

    #[test]
    fn table_integral_handles_extension_and_partial_segments() {
        let rows: Vec<(f64, f64)> = vec![(1.0, 1.0), (2.0, 3.0)];
        let g = DesyncProfile::Table(rows);
        // [0,1]: constant 1 → 1; [1,1.5]: trapezoid (1+2)/2·0.5 = 0.75
        assert!((desync_integral(&g, 1.5) - 1.75).abs() < 1e-12);
        // through the table and past it: 1 + (1+3)/2·1 + 3·1 = 6
        assert!((desync_integral(&g, 3.0) - 6.0).abs() < 1e-12);
    }

    #[test]
    fn evolution_translates_by_duration_plus_integral() {
        let p = make_packet(0.0, 1.0, grid()).unwrap();
        let dt = grid().spacing();

        let moved = evolve_packet(&p, 3.0, &DesyncProfile::Zero).unwrap();
        assert!((moved.measured_center() - 3.0).abs() < dt);

        // internal clock ticks faster: advance = 2 + 0.5·2 = 3
        let moved = evolve_packet(&p, 2.0, &DesyncProfile::Constant(0.5)).unwrap();
        assert!((moved.measured_center() - 3.0).abs() < dt);
        assert_eq!(moved.center(), 3.0);
        assert!((moved.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evolution_is_a_semigroup_for_constant_profiles() {
        let g = DesyncProfile::<f64>::Constant(0.5);
        let p = make_packet(0.0, 1.0, grid()).unwrap();
        let twice = evolve_packet(&evolve_packet(&p, 1.0, &g).unwrap(), 1.0, &g).unwrap();
        let once = evolve_packet(&p, 2.0, &g).unwrap();
        let max_err = twice
            .amplitudes()
            .iter()
            .zip(once.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(max_err < 1e-12, "max_err = {max_err:e}");
    }

    #[test]
    fn evolution_rejects_boundary_overflow() {
        let p = make_packet(0.0, 1.0, grid()).unwrap();
        assert!(matches!(
            evolve_packet(&p, 15.0, &DesyncProfile::Zero),
            Err(Error::Boundary { .. })
        ));
    }

    #[test]
    fn overlap_matches_gaussian_oracle() {
        let width = 1.0;
        let a = make_packet(-1.0, width, grid()).unwrap();
        let b = make_packet(1.0, width, grid()).unwrap();
        let got = overlap(&a, &b).unwrap();
        let want = analytic_overlap(2.0, width);
        assert!((got.norm() - want).abs() < 1e-6);
        assert!(got.im.abs() < 1e-12);

        // far-separated packets are numerically orthogonal
        let c = make_packet(-6.0, width, grid()).unwrap();
        let d = make_packet(6.0, width, grid()).unwrap();
        assert!(overlap(&c, &d).unwrap().norm() < 1e-7);

        // self-overlap is the norm
        assert!((overlap(&a, &a).unwrap().re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn overlap_rejects_grid_mismatch() {
        let a = make_packet(0.0, 1.0, grid()).unwrap();
        let other = UniformGrid::new(-20.0, 20.0, 2048).unwrap();
        let b = make_packet(0.0, 1.0, other).unwrap();
        assert!(matches!(overlap(&a, &b), Err(Error::GridMismatch)));
    }

    #[test]
    fn tau_is_one_for_identical_states() {
        let p = make_packet(0.0, 1.0, grid()).unwrap();
        let m = make_packet(2.0, 1.0, grid()).unwrap();
        let states = TimeStates {
            in_plus: p.clone(),
            in_minus: m.clone(),
            fin_plus: p,
            fin_minus: m,
        };
        let t = tau(&states).unwrap();
        assert!((t.value.re - 1.0).abs() < 1e-9);
        assert!(t.value.im.abs() < 1e-12);
        assert!(t.is_real());
    }

    #[test]
    fn tau_is_one_for_equal_branch_separations() {
        // same widths and the same in→fin separation on both branches:
        // the two overlaps agree by symmetry
        let states = TimeStates {
            in_plus: make_packet(0.0, 1.0, grid()).unwrap(),
            in_minus: make_packet(4.0, 1.0, grid()).unwrap(),
            fin_plus: make_packet(1.0, 1.0, grid()).unwrap(),
            fin_minus: make_packet(5.0, 1.0, grid()).unwrap(),
        };
        let t = tau(&states).unwrap();
        assert!((t.value.re - 1.0).abs() < 1e-9);
        assert!(t.value.im.abs() < 1e-10);
    }

    #[test]
    fn tau_matches_gaussian_separation_oracle() {
        // − branch separated by 2σ, + branch by σ → τ = e^{−3/8}
        let width = 1.0;
        let states = TimeStates {
            in_plus: make_packet(0.0, width, grid()).unwrap(),
            in_minus: make_packet(0.0, width, grid()).unwrap(),
            fin_plus: make_packet(1.0, width, grid()).unwrap(),
            fin_minus: make_packet(2.0, width, grid()).unwrap(),
        };
        let t = tau(&states).unwrap();
        let want = (-3.0f64 / 8.0).exp();
        assert!((t.value.re - want).abs() < 1e-6);
        assert!(t.is_real());
    }

    #[test]
    fn tau_rejects_orthogonal_plus_branch() {
        let wide = UniformGrid::new(-40.0, 40.0, 8192).unwrap();
        let states = TimeStates {
            in_plus: make_packet(-15.0, 1.0, wide).unwrap(),
            in_minus: make_packet(0.0, 1.0, wide).unwrap(),
            fin_plus: make_packet(15.0, 1.0, wide).unwrap(),
            fin_minus: make_packet(0.0, 1.0, wide).unwrap(),
        };
        assert!(matches!(tau(&states), Err(Error::IllConditioned { .. })));
    }

    #[test]
    fn tau_is_invariant_under_a_common_global_phase() {
        let states = TimeStates {
            in_plus: make_packet(0.0, 1.0, grid()).unwrap(),
            in_minus: make_packet(0.5, 1.0, grid()).unwrap(),
            fin_plus: make_packet(1.0, 1.0, grid()).unwrap(),
            fin_minus: make_packet(2.5, 1.0, grid()).unwrap(),
        };
        let base = tau(&states).unwrap();
        let theta = 0.9;
        let rotated = TimeStates {
            in_plus: states.in_plus.with_phase(theta),
            in_minus: states.in_minus.with_phase(theta),
            fin_plus: states.fin_plus.with_phase(theta),
            fin_minus: states.fin_minus.with_phase(theta),
        };
        let got = tau(&rotated).unwrap();
        assert!((got.value - base.value).norm() < 1e-12);
    }

    #[test]
    fn weak_regime_margin_examples() {
        assert_eq!(weak_regime_margin(&DesyncProfile::<f64>::Zero, 5.0), 0.0);
        let g = DesyncProfile::<f64>::Constant(0.5);
        assert!((weak_regime_margin(&g, 0.01) - 0.005).abs() < 1e-15);
        let ramp = DesyncProfile::<f64>::Ramp { slope: 1.0 };
        assert!((weak_regime_margin(&ramp, 0.2) - 0.04).abs() < 1e-15);
    }
}
