//! Shared test support: an independent dense Hermitian eigensolver. It lives
//! in test code only and never touches the implementation paths it is used
//! to check.

// not every integration-test target uses the oracle
#![allow(dead_code)]
// index loops mirror the textbook rotation formulas
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations, returned
/// sorted ascending. Dense 2×2 complex rotations applied as full matrix
/// products; fine for the ≤ 16-dimensional matrices used in tests.
pub fn hermitian_eigenvalues(matrix: &[Vec<Complex64>]) -> Vec<f64> {
    let n = matrix.len();
    assert!(matrix.iter().all(|row| row.len() == n), "square input");
    let mut a = matrix.to_vec();

    let off_diag = |m: &[Vec<Complex64>]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += m[p][q].norm_sqr();
                }
            }
        }
        s
    };
    let scale: f64 = matrix
        .iter()
        .flatten()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .max(1e-300);

    for _sweep in 0..200 {
        if off_diag(&a) <= 1e-28 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phase = apq / r;
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // unitary J: identity except the (p, q) block
                let mut j = vec![vec![Complex64::new(0.0, 0.0); n]; n];
                for (k, row) in j.iter_mut().enumerate() {
                    row[k] = Complex64::new(1.0, 0.0);
                }
                j[p][p] = Complex64::new(c, 0.0);
                j[q][q] = Complex64::new(c, 0.0);
                j[p][q] = phase * s;
                j[q][p] = -phase.conj() * s;

                a = matmul(&adjoint(&j), &matmul(&a, &j));
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|k| a[k][k].re).collect();
    eigs.sort_by(f64::total_cmp);
    eigs
}

fn matmul(x: &[Vec<Complex64>], y: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = x.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let xik = x[i][k];
            for j in 0..n {
                out[i][j] += xik * y[k][j];
            }
        }
    }
    out
}

fn adjoint(x: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = x.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = x[j][i].conj();
        }
    }
    out
}
