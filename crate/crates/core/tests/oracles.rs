//! Independent-oracle checks: quantities computed twice through unrelated
//! routes must agree. The oracle side (dense Jacobi diagonalization, closed
//! Gaussian integrals, explicit contraction arithmetic) lives in test code
//! and never calls the implementation path it audits.

mod common;

use common::hermitian_eigenvalues;
use num_complex::Complex64;
use weakvel::clock::{self, DesyncProfile, TimeStates};
use weakvel::grid::UniformGrid;
use weakvel::pointer::{evolve_exact, gaussian_pointer};
use weakvel::qcore::collective_sigma_z;
use weakvel::weakval::{build_pre_post, weak_velocity_closed_form, weak_velocity_full};

fn operator_as_rows(op: &weakvel::Operator64) -> Vec<Vec<Complex64>> {
    let d = op.dimension();
    (0..d)
        .map(|i| (0..d).map(|j| op.entry(i, j)).collect())
        .collect()
}

#[test]
fn jacobi_oracle_nails_known_spectra() {
    // σ_x has eigenvalues ∓1
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let sigma_x = vec![vec![zero, one], vec![one, zero]];
    let eigs = hermitian_eigenvalues(&sigma_x);
    assert!((eigs[0] + 1.0).abs() < 1e-12);
    assert!((eigs[1] - 1.0).abs() < 1e-12);

    // [[1, i], [−i, 1]] has eigenvalues {0, 2}
    let i = Complex64::new(0.0, 1.0);
    let m = vec![vec![one, i], vec![-i, one]];
    let eigs = hermitian_eigenvalues(&m);
    assert!(eigs[0].abs() < 1e-12);
    assert!((eigs[1] - 2.0).abs() < 1e-12);

    // a diagonal matrix is its own spectrum
    let d = vec![
        vec![Complex64::new(-3.0, 0.0), zero, zero],
        vec![zero, Complex64::new(0.5, 0.0), zero],
        vec![zero, zero, Complex64::new(2.0, 0.0)],
    ];
    let eigs = hermitian_eigenvalues(&d);
    assert!((eigs[0] + 3.0).abs() < 1e-12);
    assert!((eigs[1] - 0.5).abs() < 1e-12);
    assert!((eigs[2] - 2.0).abs() < 1e-12);
}

#[test]
fn collective_velocity_spectrum_three_spins() {
    // eigenvalue multiset of the N = 3, c = 2 collective velocity via dense
    // diagonalization: {−2, −2/3 ×3, 2/3 ×3, 2}
    let op = collective_sigma_z::<f64>(3, 2.0).unwrap();
    let eigs = hermitian_eigenvalues(&operator_as_rows(&op));
    let third = 2.0 / 3.0;
    let expected = [-2.0, -third, -third, -third, third, third, third, 2.0];
    assert_eq!(eigs.len(), expected.len());
    for (got, want) in eigs.iter().zip(expected) {
        assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
    }
}

#[test]
fn collective_velocity_spectrum_matches_ladder_for_each_n() {
    for n in 1..=6usize {
        let c = 1.0;
        let op = collective_sigma_z::<f64>(n, c).unwrap();
        let eigs = hermitian_eigenvalues(&operator_as_rows(&op));
        // expected ladder −c + 2c·k/N with binomial multiplicities
        let mut expected = Vec::new();
        for k in 0..=n {
            let value = -c + 2.0 * c * k as f64 / n as f64;
            let mult = binomial(n, k);
            expected.extend(std::iter::repeat_n(value, mult));
        }
        expected.sort_by(f64::total_cmp);
        for (got, want) in eigs.iter().zip(expected) {
            assert!(
                (got - want).abs() < 1e-12,
                "n = {n}: got {got}, want {want}"
            );
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn hand_contraction_oracle_single_spin_weak_velocity() {
    // Independent route: contract the two-register selection by hand from
    // the measured packet overlaps, then compare both library routes.
    let grid = UniformGrid::<f64>::new(-20.0, 20.0, 4096).unwrap();
    let states = TimeStates {
        in_plus: clock::make_packet(0.0, 1.0, grid).unwrap(),
        in_minus: clock::make_packet(0.0, 1.0, grid).unwrap(),
        fin_plus: clock::make_packet(0.6, 1.0, grid).unwrap(),
        fin_minus: clock::make_packet(1.8, 1.0, grid).unwrap(),
    };
    let alpha = 0.6;
    let beta = 0.8;
    let w_plus = clock::overlap(&states.fin_plus, &states.in_plus).unwrap();
    let w_minus = clock::overlap(&states.fin_minus, &states.in_minus).unwrap();
    // oracle arithmetic on the 2-register contraction
    let oracle = (w_plus * alpha - w_minus * beta) / (w_plus * alpha + w_minus * beta);

    let pair = build_pre_post(alpha, beta, &states, 1).unwrap();
    let full = weak_velocity_full(&pair, 1.0).unwrap().value;
    let tau = clock::tau(&states).unwrap().value;
    let closed = weak_velocity_closed_form(alpha, beta, tau, 1.0).unwrap();

    assert!((full - oracle).norm() < 1e-12);
    assert!((closed - oracle).norm() < 1e-12);
}

#[test]
fn pointer_mean_matches_two_gaussian_quadrature_oracle() {
    // Analytic mean of a·G(z−d) + b·G(z+d):
    // d·(a²−b²) / (a²+b²+2ab·e^{−d²/ε²}) for real weights; cross term has
    // zero first moment by symmetry.
    let tgrid = UniformGrid::<f64>::new(-20.0, 20.0, 2048).unwrap();
    let packet = clock::make_packet(0.0, 1.0, tgrid).unwrap();
    let states = TimeStates {
        in_plus: packet.clone(),
        in_minus: packet.clone(),
        fin_plus: packet.clone(),
        fin_minus: packet,
    };
    let alpha = 0.6;
    let beta = 0.8;
    let pair = build_pre_post(alpha, beta, &states, 1).unwrap();

    let eps = 10.0;
    let zgrid = UniformGrid::<f64>::new(-200.0, 200.0, 8192).unwrap();
    let pointer = gaussian_pointer(eps, zgrid).unwrap();
    let c = 1.0;
    let t_b = 0.5;
    let (field, report) = evolve_exact(&pointer, &pair, &DesyncProfile::Zero, c, t_b).unwrap();

    // identical in/fin packets make both branch overlaps equal, so the
    // common factor cancels from the normalized field
    let d = c * t_b;
    let overlap = (-d * d / (eps * eps)).exp();
    let expected_mean = d * (alpha * alpha - beta * beta)
        / (alpha * alpha + beta * beta + 2.0 * alpha * beta * overlap);
    assert!(
        (field.mean_z() - expected_mean).abs() < 1e-9,
        "mean {} vs oracle {}",
        field.mean_z(),
        expected_mean
    );
    assert!((report.mean_z - expected_mean).abs() < 1e-9);
}

#[test]
fn exact_pointer_mean_converges_to_closed_form_at_second_order() {
    let tgrid = UniformGrid::<f64>::new(-20.0, 20.0, 2048).unwrap();
    let packet = clock::make_packet(0.0, 1.0, tgrid).unwrap();
    let states = TimeStates {
        in_plus: packet.clone(),
        in_minus: packet.clone(),
        fin_plus: packet.clone(),
        fin_minus: packet,
    };
    let pair = build_pre_post(0.6, 0.8, &states, 1).unwrap();
    let pointer = gaussian_pointer(1.0, UniformGrid::new(-20.0, 20.0, 4096).unwrap()).unwrap();

    let mut deviations = Vec::new();
    for t_b in [0.1, 0.05, 0.025, 0.0125] {
        let (_, report) = evolve_exact(&pointer, &pair, &DesyncProfile::Zero, 1.0, t_b).unwrap();
        deviations.push((report.measured_weak_velocity - report.predicted_weak_velocity.re).abs());
    }
    for pair_dev in deviations.windows(2) {
        let order = (pair_dev[0] / pair_dev[1]).log2();
        assert!(order >= 1.9, "observed order {order}");
    }
}
