//! Dense complex states and operators over labelled tensor-product bases.
//!
//! Everything here is desk-scale and dense on purpose: dimensions stay small
//! enough that correctness and auditability beat sparsity. Basis ordering is
//! fixed once for the whole crate: registers listed left-to-right map to
//! most-significant-to-least-significant index blocks, i.e. the Kronecker
//! product convention. Spin registers use index 0 for |↑⟩ (σ_z eigenvalue +1)
//! and index 1 for |↓⟩.

use crate::{tolerances, Error, Real, Result};
use num_complex::Complex;

/// One factor of a tensor-product basis: a named register with a local
/// dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    name: String,
    dim: usize,
}

impl Register {
    pub fn new(name: impl Into<String>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("register dimension must be ≥ 1"));
        }
        Ok(Register {
            name: name.into(),
            dim,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Ordered list of registers labelling a basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisLabel {
    registers: Vec<Register>,
}

impl BasisLabel {
    pub fn new(registers: Vec<Register>) -> Result<Self> {
        if registers.is_empty() {
            return Err(Error::domain("basis needs at least one register"));
        }
        Ok(BasisLabel { registers })
    }

    pub fn single(name: impl Into<String>, dim: usize) -> Result<Self> {
        Ok(BasisLabel {
            registers: vec![Register::new(name, dim)?],
        })
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn dimension(&self) -> usize {
        self.registers.iter().map(Register::dim).product()
    }

    /// Flattened concatenation: `self ⊗ other`.
    pub fn concat(&self, other: &BasisLabel) -> BasisLabel {
        let mut registers = self.registers.clone();
        registers.extend(other.registers.iter().cloned());
        BasisLabel { registers }
    }

    /// Index stride of one register: the product of all dimensions to its
    /// right.
    fn stride(&self, register: usize) -> usize {
        self.registers[register + 1..]
            .iter()
            .map(Register::dim)
            .product()
    }

    pub fn describe(&self) -> String {
        self.registers
            .iter()
            .map(|r| format!("{}({})", r.name, r.dim))
            .collect::<Vec<_>>()
            .join("⊗")
    }
}

fn check_same_basis(a: &BasisLabel, b: &BasisLabel) -> Result<()> {
    if a != b {
        return Err(Error::BasisMismatch {
            expected: a.describe(),
            found: b.describe(),
        });
    }
    Ok(())
}

/// Complex amplitude vector over a labelled finite basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<R: Real> {
    basis: BasisLabel,
    amps: Vec<Complex<R>>,
}

impl<R: Real> StateVector<R> {
    pub fn new(basis: BasisLabel, amps: Vec<Complex<R>>) -> Result<Self> {
        if amps.len() != basis.dimension() {
            return Err(Error::domain(format!(
                "amplitude count {} does not match basis dimension {}",
                amps.len(),
                basis.dimension()
            )));
        }
        Ok(StateVector { basis, amps })
    }

    /// Computational basis vector |index⟩.
    pub fn basis_state(basis: BasisLabel, index: usize) -> Result<Self> {
        let d = basis.dimension();
        if index >= d {
            return Err(Error::domain(format!(
                "basis index {index} out of range for dimension {d}"
            )));
        }
        let mut amps = vec![Complex::new(R::zero(), R::zero()); d];
        amps[index] = Complex::new(R::one(), R::zero());
        Ok(StateVector { basis, amps })
    }

    pub fn basis(&self) -> &BasisLabel {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<R>] {
        &self.amps
    }

    pub fn norm_sq(&self) -> R {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> R {
        self.norm_sq().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sq() - R::one()).abs() <= R::of(tolerances::NORMALIZATION)
    }

    /// ⟨self|other⟩ — conjugate-linear in `self`, linear in `other`.
    pub fn inner(&self, other: &StateVector<R>) -> Result<Complex<R>> {
        check_same_basis(&self.basis, &other.basis)?;
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * *b)
            .sum())
    }

    /// Kronecker product `self ⊗ other` with concatenated basis labels.
    pub fn tensor(&self, other: &StateVector<R>) -> StateVector<R> {
        let basis = self.basis.concat(&other.basis);
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(*a * *b);
            }
        }
        StateVector { basis, amps }
    }

    pub fn scaled(&self, factor: Complex<R>) -> StateVector<R> {
        StateVector {
            basis: self.basis.clone(),
            amps: self.amps.iter().map(|a| *a * factor).collect(),
        }
    }

    pub fn try_add(&self, other: &StateVector<R>) -> Result<StateVector<R>> {
        check_same_basis(&self.basis, &other.basis)?;
        Ok(StateVector {
            basis: self.basis.clone(),
            amps: self
                .amps
                .iter()
                .zip(other.amps.iter())
                .map(|(a, b)| *a + *b)
                .collect(),
        })
    }

    pub fn normalized(&self) -> Result<StateVector<R>> {
        let n = self.norm();
        if n < R::of(tolerances::ZERO_STATE_FLOOR) {
            return Err(Error::domain("cannot normalize the zero vector"));
        }
        Ok(self.scaled(Complex::new(R::one() / n, R::zero())))
    }
}

/// Dense square operator over a labelled basis (row-major storage).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator<R: Real> {
    basis: BasisLabel,
    elems: Vec<Complex<R>>,
    hermitian: bool,
}

impl<R: Real> LinearOperator<R> {
    pub fn new(basis: BasisLabel, elems: Vec<Complex<R>>) -> Result<Self> {
        let d = basis.dimension();
        if elems.len() != d * d {
            return Err(Error::domain(format!(
                "element count {} does not match {d}×{d}",
                elems.len()
            )));
        }
        Ok(LinearOperator {
            basis,
            elems,
            hermitian: false,
        })
    }

    /// Construct and verify a Hermitian operator: max |M − M†| must stay
    /// below the hermiticity tolerance.
    pub fn new_hermitian(basis: BasisLabel, elems: Vec<Complex<R>>) -> Result<Self> {
        let mut op = Self::new(basis, elems)?;
        let defect = op.hermiticity_defect();
        if defect > R::of(tolerances::HERMITICITY) {
            return Err(Error::domain(format!(
                "operator is not Hermitian: max |M − M†| = {:e}",
                defect.to_f64().unwrap_or(f64::NAN)
            )));
        }
        op.hermitian = true;
        Ok(op)
    }

    pub fn identity(basis: BasisLabel) -> Self {
        let d = basis.dimension();
        let mut elems = vec![Complex::new(R::zero(), R::zero()); d * d];
        for i in 0..d {
            elems[i * d + i] = Complex::new(R::one(), R::zero());
        }
        LinearOperator {
            basis,
            elems,
            hermitian: true,
        }
    }

    /// σ_z on a single two-dimensional register.
    pub fn pauli_z(register_name: impl Into<String>) -> Self {
        let basis = BasisLabel::single(register_name, 2).expect("two-level register");
        let zero = Complex::new(R::zero(), R::zero());
        let one = Complex::new(R::one(), R::zero());
        LinearOperator {
            basis,
            elems: vec![one, zero, zero, -one],
            hermitian: true,
        }
    }

    pub fn basis(&self) -> &BasisLabel {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.dimension()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex<R> {
        self.elems[row * self.dimension() + col]
    }

    pub fn is_hermitian_flagged(&self) -> bool {
        self.hermitian
    }

    pub fn hermiticity_defect(&self) -> R {
        let d = self.dimension();
        let mut worst = R::zero();
        for i in 0..d {
            for j in 0..d {
                let defect = (self.elems[i * d + j] - self.elems[j * d + i].conj()).norm();
                worst = worst.max(defect);
            }
        }
        worst
    }

    pub fn tensor(&self, other: &LinearOperator<R>) -> LinearOperator<R> {
        let da = self.dimension();
        let db = other.dimension();
        let d = da * db;
        let mut elems = vec![Complex::new(R::zero(), R::zero()); d * d];
        for ia in 0..da {
            for ja in 0..da {
                let a = self.elems[ia * da + ja];
                for ib in 0..db {
                    for jb in 0..db {
                        elems[(ia * db + ib) * d + (ja * db + jb)] = a * other.elems[ib * db + jb];
                    }
                }
            }
        }
        LinearOperator {
            basis: self.basis.concat(&other.basis),
            elems,
            hermitian: self.hermitian && other.hermitian,
        }
    }

    pub fn try_add(&self, other: &LinearOperator<R>) -> Result<LinearOperator<R>> {
        check_same_basis(&self.basis, &other.basis)?;
        Ok(LinearOperator {
            basis: self.basis.clone(),
            elems: self
                .elems
                .iter()
                .zip(other.elems.iter())
                .map(|(a, b)| *a + *b)
                .collect(),
            hermitian: self.hermitian && other.hermitian,
        })
    }

    /// Scale by a real factor (keeps the Hermitian flag).
    pub fn scaled_real(&self, factor: R) -> LinearOperator<R> {
        LinearOperator {
            basis: self.basis.clone(),
            elems: self
                .elems
                .iter()
                .map(|a| *a * Complex::new(factor, R::zero()))
                .collect(),
            hermitian: self.hermitian,
        }
    }

    /// Dense matrix-vector application on the full basis.
    pub fn apply(&self, state: &StateVector<R>) -> Result<StateVector<R>> {
        check_same_basis(&self.basis, &state.basis)?;
        let d = self.dimension();
        let mut amps = vec![Complex::new(R::zero(), R::zero()); d];
        for (i, out) in amps.iter_mut().enumerate() {
            let row = &self.elems[i * d..(i + 1) * d];
            *out = row
                .iter()
                .zip(state.amps.iter())
                .map(|(m, a)| *m * *a)
                .sum();
        }
        Ok(StateVector {
            basis: state.basis.clone(),
            amps,
        })
    }

    /// Apply this single-register operator to one register of a larger
    /// product state, acting as identity everywhere else. Matches by local
    /// dimension; the register name need not agree (σ_z is site-generic).
    pub fn apply_local(&self, state: &StateVector<R>, register: usize) -> Result<StateVector<R>> {
        let regs = state.basis.registers();
        if register >= regs.len() {
            return Err(Error::domain(format!(
                "register index {register} out of range for basis {}",
                state.basis.describe()
            )));
        }
        if self.basis.registers().len() != 1 {
            return Err(Error::BasisMismatch {
                expected: "single-register operator".into(),
                found: self.basis.describe(),
            });
        }
        let m = regs[register].dim();
        if self.dimension() != m {
            return Err(Error::BasisMismatch {
                expected: format!("{}({})", regs[register].name(), m),
                found: self.basis.describe(),
            });
        }
        let stride = state.basis.stride(register);
        let block = m * stride;
        let mut amps = state.amps.clone();
        let mut local = vec![Complex::new(R::zero(), R::zero()); m];
        for outer in (0..state.amps.len()).step_by(block) {
            for offset in 0..stride {
                for (i, slot) in local.iter_mut().enumerate() {
                    *slot = state.amps[outer + i * stride + offset];
                }
                for (i, row) in self.elems.chunks(m).enumerate() {
                    amps[outer + i * stride + offset] =
                        row.iter().zip(local.iter()).map(|(e, v)| *e * *v).sum();
                }
            }
        }
        Ok(StateVector {
            basis: state.basis.clone(),
            amps,
        })
    }
}

/// Collective velocity observable `(c/N)·Σ_i σ_z^(i)` on `n_spins`
/// two-level registers, diagonal in the computational basis with spectrum
/// `{−c, −c + 2c/N, …, c}`.
pub fn collective_sigma_z<R: Real>(n_spins: usize, c: R) -> Result<LinearOperator<R>> {
    if n_spins == 0 {
        return Err(Error::domain("collective σ_z needs at least one spin"));
    }
    let registers = (1..=n_spins)
        .map(|i| Register::new(format!("spin{i}"), 2))
        .collect::<Result<Vec<_>>>()?;
    let basis = BasisLabel::new(registers)?;
    let d = 1usize << n_spins;
    let scale = c / R::of_usize(n_spins);
    let mut elems = vec![Complex::new(R::zero(), R::zero()); d * d];
    for idx in 0..d {
        let downs = idx.count_ones() as usize;
        let ups = n_spins - downs;
        let weight = R::of_usize(ups) - R::of_usize(downs);
        elems[idx * d + idx] = Complex::new(scale * weight, R::zero());
    }
    LinearOperator::new_hermitian(basis, elems)
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn spin(name: &str) -> BasisLabel {
        BasisLabel::single(name, 2).unwrap()
    }

    fn up(name: &str) -> StateVector<f64> {
        StateVector::basis_state(spin(name), 0).unwrap()
    }

    fn down(name: &str) -> StateVector<f64> {
        StateVector::basis_state(spin(name), 1).unwrap()
    }

    #[test]
    fn tensor_of_basis_states() {
        let t = up("a").tensor(&up("b"));
        assert_eq!(t.dimension(), 4);
        assert_eq!(t.amplitudes()[0], c(1.0, 0.0));
        for k in 1..4 {
            assert_eq!(t.amplitudes()[k], c(0.0, 0.0));
        }
        assert_eq!(t.basis().describe(), "a(2)⊗b(2)");
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let i2a = LinearOperator::<f64>::identity(spin("a"));
        let i2b = LinearOperator::<f64>::identity(spin("b"));
        let i4 = i2a.tensor(&i2b);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_eq!(i4.entry(i, j), c(want, 0.0));
            }
        }
    }

    #[test]
    fn sigma_z_tensor_identity_flips_relative_sign() {
        // (σ_z ⊗ I) applied to (|↑⟩+|↓⟩)/√2 ⊗ |↓⟩, checked against an
        // explicit 4×4 matrix-vector product.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = up("a").try_add(&down("a")).unwrap().scaled(c(s, 0.0));
        let input = plus.tensor(&down("b"));
        let op =
            LinearOperator::<f64>::pauli_z("a").tensor(&LinearOperator::<f64>::identity(spin("b")));
        let got = op.apply(&input).unwrap();

        // oracle: dense 4×4 multiply by hand
        let m = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
        ];
        let v = input.amplitudes();
        for (m_row, got_amp) in m.iter().zip(got.amplitudes()) {
            let acc: C = m_row
                .iter()
                .zip(v)
                .map(|(&entry, amp)| c(entry, 0.0) * amp)
                .sum();
            assert!((got_amp - acc).norm() < 1e-15);
        }
        // which is (|↑⟩−|↓⟩)/√2 ⊗ |↓⟩
        let minus = up("a")
            .try_add(&down("a").scaled(c(-1.0, 0.0)))
            .unwrap()
            .scaled(c(s, 0.0));
        let expected = minus.tensor(&down("b"));
        for (g, e) in got.amplitudes().iter().zip(expected.amplitudes()) {
            assert!((g - e).norm() < 1e-15);
        }
    }

    #[test]
    fn inner_products_on_two_level_states() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(up("a").inner(&up("a")).unwrap(), c(1.0, 0.0));
        assert_eq!(up("a").inner(&down("a")).unwrap(), c(0.0, 0.0));
        // ⟨(|↑⟩+i|↓⟩)/√2 | ↓⟩ = −i/√2
        let lhs = up("a")
            .try_add(&down("a").scaled(c(0.0, 1.0)))
            .unwrap()
            .scaled(c(s, 0.0));
        let got = lhs.inner(&down("a")).unwrap();
        assert!((got - c(0.0, -s)).norm() < 1e-15);
    }

    #[test]
    fn inner_rejects_mismatched_bases() {
        let a = up("a");
        let b = up("a").tensor(&up("b"));
        assert!(matches!(a.inner(&b), Err(Error::BasisMismatch { .. })));
    }

    #[test]
    fn collective_sigma_z_single_spin_is_pauli_z() {
        let op = collective_sigma_z::<f64>(1, 1.0).unwrap();
        let pz = LinearOperator::<f64>::pauli_z("spin1");
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(op.entry(i, j), pz.entry(i, j));
            }
        }
        assert!(op.is_hermitian_flagged());
    }

    #[test]
    fn collective_sigma_z_two_spins_spectrum() {
        let op = collective_sigma_z::<f64>(2, 1.0).unwrap();
        let mut eigs: Vec<f64> = (0..4).map(|i| op.entry(i, i).re).collect();
        eigs.sort_by(f64::total_cmp);
        assert_eq!(eigs, vec![-1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn collective_sigma_z_diagonal_entries_count_spins() {
        let n = 4;
        let cc = 2.0;
        let op = collective_sigma_z::<f64>(n, cc).unwrap();
        for idx in 0..(1 << n) {
            let downs = (idx as u32).count_ones() as i32;
            let ups = n as i32 - downs;
            let want = cc / n as f64 * f64::from(ups - downs);
            assert!((op.entry(idx, idx).re - want).abs() < 1e-15);
            // off-diagonal must vanish
            for j in 0..(1 << n) {
                if j != idx {
                    assert_eq!(op.entry(idx, j), c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn collective_sigma_z_rejects_zero_spins() {
        assert!(matches!(
            collective_sigma_z::<f64>(0, 1.0),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn apply_local_matches_dense_extension() {
        // random-ish three-register state, σ_z on the middle register
        let basis = BasisLabel::new(vec![
            Register::new("a", 2).unwrap(),
            Register::new("b", 2).unwrap(),
            Register::new("c", 2).unwrap(),
        ])
        .unwrap();
        let amps: Vec<C> = (0..8)
            .map(|k| c(0.1 * k as f64 - 0.3, 0.05 * k as f64))
            .collect();
        let state = StateVector::new(basis.clone(), amps).unwrap();
        let local = LinearOperator::<f64>::pauli_z("b");
        let via_local = local.apply_local(&state, 1).unwrap();

        let dense = LinearOperator::<f64>::identity(spin("a"))
            .tensor(&LinearOperator::<f64>::pauli_z("b"))
            .tensor(&LinearOperator::<f64>::identity(spin("c")));
        let via_dense = dense.apply(&state).unwrap();
        for (x, y) in via_local.amplitudes().iter().zip(via_dense.amplitudes()) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn hermitian_constructor_rejects_non_hermitian() {
        let elems = vec![c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0)];
        assert!(LinearOperator::<f64>::new_hermitian(spin("a"), elems).is_err());
    }

    #[test]
    fn normalized_rejects_zero_vector() {
        let z = StateVector::<f64>::new(spin("a"), vec![c(0.0, 0.0); 2]).unwrap();
        assert!(z.normalized().is_err());
    }
}
