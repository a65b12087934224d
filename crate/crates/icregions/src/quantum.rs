//! Dense complex linear algebra sized for small quantum systems: density
//! operators, POVM measurements, ±1-valued observables, and purification of
//! mixed states.
//!
//! Everything here works at dimension ≤ a few dozen, so matrices are plain
//! dense row-major buffers and the eigensolver is a cyclic Jacobi iteration —
//! self-contained and accurate well past the 1e-9 tolerances the rest of the
//! crate relies on.
//!
//! Tensor-product convention: in `kron(A, B)` the left factor owns the most
//! significant index digits. Multi-system states document their factor order
//! at the construction site.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::prob::{Alphabet, JointPmf};

/// Tolerance for Hermiticity, trace, and POVM-completeness checks.
pub const OPERATOR_TOLERANCE: f64 = 1e-9;
/// An operator counts as positive semidefinite while its smallest eigenvalue
/// stays above the negative of this.
pub const PSD_TOLERANCE: f64 = 1e-9;
/// The Jacobi sweep stops once every off-diagonal magnitude is below this.
const OFFDIAG_THRESHOLD: f64 = 1e-13;
const MAX_JACOBI_SWEEPS: usize = 64;
/// Eigenvalues at or below this are treated as zero rank when purifying.
const RANK_THRESHOLD: f64 = 1e-14;

/// Dense row-major complex matrix.
#[derive(Debug, Clone)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Column vector from amplitudes.
    pub fn ket(amplitudes: Vec<Complex64>) -> Self {
        let rows = amplitudes.len();
        Self {
            rows,
            cols: 1,
            data: amplitudes,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn ensure_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rows)
    }

    fn ensure_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ensure_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.ensure_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self::new(self.rows, self.cols, data)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Tensor product; the left factor owns the most significant index digits.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out.set(
                            i1 * other.rows + i2,
                            j1 * other.cols + j2,
                            a * other.get(i2, j2),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Result<Complex64> {
        let n = self.ensure_square()?;
        Ok((0..n).map(|i| self.get(i, i)).sum())
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.rows, other.rows);
        debug_assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest deviation from `A = A†`; zero for a Hermitian matrix.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }
}

/// `Tr(A·B)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    let n = a.ensure_square()?;
    if b.ensure_square()? != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.rows(),
        });
    }
    let mut t = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            t += a.get(i, j) * b.get(j, i);
        }
    }
    Ok(t)
}

/// Trace out the right factor of a `dim_left·dim_right` square matrix.
pub fn partial_trace_right(
    m: &ComplexMatrix,
    dim_left: usize,
    dim_right: usize,
) -> Result<ComplexMatrix> {
    let n = m.ensure_square()?;
    if dim_left * dim_right != n {
        return Err(Error::BadPartition {
            dim: n,
            left: dim_left,
            right: dim_right,
        });
    }
    let mut out = ComplexMatrix::zeros(dim_left, dim_left);
    for i in 0..dim_left {
        for j in 0..dim_left {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..dim_right {
                s += m.get(i * dim_right + k, j * dim_right + k);
            }
            out.set(i, j, s);
        }
    }
    Ok(out)
}

/// Trace out the left factor of a `dim_left·dim_right` square matrix.
pub fn partial_trace_left(
    m: &ComplexMatrix,
    dim_left: usize,
    dim_right: usize,
) -> Result<ComplexMatrix> {
    let n = m.ensure_square()?;
    if dim_left * dim_right != n {
        return Err(Error::BadPartition {
            dim: n,
            left: dim_left,
            right: dim_right,
        });
    }
    let mut out = ComplexMatrix::zeros(dim_right, dim_right);
    for i in 0..dim_right {
        for j in 0..dim_right {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..dim_left {
                s += m.get(k * dim_right + i, k * dim_right + j);
            }
            out.set(i, j, s);
        }
    }
    Ok(out)
}

/// Reorder the tensor factors of a state vector. `dims` are the current
/// factor dimensions; output factor `j` is input factor `perm[j]`.
pub fn permute_state_systems(
    state: &ComplexMatrix,
    dims: &[usize],
    perm: &[usize],
) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if state.cols() != 1 || state.rows() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            got: state.rows() * state.cols(),
        });
    }
    let k = dims.len();
    if perm.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            got: perm.len(),
        });
    }
    let mut seen = vec![false; k];
    for &p in perm {
        if p >= k || seen[p] {
            return Err(Error::InvalidConfig {
                reason: "system permutation is not a permutation".into(),
            });
        }
        seen[p] = true;
    }
    let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); total];
    let mut idx = vec![0usize; k];
    for (flat, &amp) in state.data().iter().enumerate() {
        // Decompose the input flat index (row-major over dims).
        let mut rest = flat;
        for (i, &d) in dims.iter().enumerate().rev() {
            idx[i] = rest % d;
            rest /= d;
        }
        let mut out_flat = 0usize;
        for (j, &p) in perm.iter().enumerate() {
            out_flat = out_flat * out_dims[j] + idx[p];
        }
        out[out_flat] = amp;
    }
    ComplexMatrix::new(total, 1, out)
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in descending order and the matching orthonormal
/// eigenvectors as columns. The input must be Hermitian within
/// [`OPERATOR_TOLERANCE`]; the tiny asymmetry is symmetrized away before
/// iterating.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = m.ensure_square()?;
    let dev = m.hermitian_deviation();
    if dev > OPERATOR_TOLERANCE {
        return Err(Error::NotHermitian { deviation: dev });
    }
    // Work on (A + A†)/2 so the iteration sees an exactly Hermitian matrix.
    let mut a = m.add(&m.adjoint())?.scale(Complex64::new(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n);

    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a.get(p, q).norm());
            }
        }
        if off <= OFFDIAG_THRESHOLD {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r <= OFFDIAG_THRESHOLD / 16.0 {
                    continue;
                }
                let phase = apq / r;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = phase * (t * c);
                // Columns: (p, q) ← (c·p − s̄·q, s·p + c·q).
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * c - akq * s.conj());
                    a.set(k, q, akp * s + akq * c);
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c - vkq * s.conj());
                    v.set(k, q, vkp * s + vkq * c);
                }
                // Rows: the adjoint rotation.
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, apk * c - aqk * s);
                    a.set(q, k, apk * s.conj() + aqk * c);
                }
            }
        }
    }
    if !converged {
        // One last check: the final sweep may have finished the job.
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a.get(p, q).norm());
            }
        }
        if off > OFFDIAG_THRESHOLD {
            return Err(Error::NoConvergence {
                sweeps: MAX_JACOBI_SWEEPS,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for k in 0..n {
            vectors.set(k, new_col, v.get(k, old_col));
        }
    }
    Ok((values, vectors))
}

fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    let (vals, _) = hermitian_eigen(m)?;
    Ok(vals.last().copied().unwrap_or(0.0))
}

/// A quantum state: positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let dim = matrix.ensure_square()?;
        let dev = matrix.hermitian_deviation();
        if dev > OPERATOR_TOLERANCE {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let trace = matrix.trace()?.re;
        if (trace - 1.0).abs() > OPERATOR_TOLERANCE {
            return Err(Error::TraceNotOne {
                trace,
                tolerance: OPERATOR_TOLERANCE,
            });
        }
        let min_eig = min_eigenvalue(&matrix)?;
        if min_eig < -PSD_TOLERANCE {
            return Err(Error::NotPsd {
                min_eigenvalue: min_eig,
            });
        }
        Ok(Self { dim, matrix })
    }

    /// `|ψ⟩⟨ψ|` from a unit-norm column vector.
    pub fn pure(ket: &ComplexMatrix) -> Result<Self> {
        if ket.cols() != 1 {
            return Err(Error::NotSquare {
                rows: ket.rows(),
                cols: ket.cols(),
            });
        }
        let norm_sq: f64 = ket.data().iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > OPERATOR_TOLERANCE {
            return Err(Error::TraceNotOne {
                trace: norm_sq,
                tolerance: OPERATOR_TOLERANCE,
            });
        }
        let d = ket.rows();
        let mut m = ComplexMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                m.set(i, j, ket.data()[i] * ket.data()[j].conj());
            }
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// A generalized measurement: labeled PSD operators summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    dim: usize,
    labels: Vec<String>,
    operators: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(outcomes: Vec<(String, ComplexMatrix)>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::EmptyPovm);
        }
        let dim = outcomes[0].1.ensure_square()?;
        let mut labels = Vec::with_capacity(outcomes.len());
        let mut operators = Vec::with_capacity(outcomes.len());
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (label, op) in outcomes {
            if labels.contains(&label) {
                return Err(Error::DuplicateSymbol {
                    name: "measurement outcomes".into(),
                    symbol: label,
                });
            }
            if op.ensure_square()? != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: op.rows(),
                });
            }
            let dev = op.hermitian_deviation();
            if dev > OPERATOR_TOLERANCE {
                return Err(Error::NotHermitian { deviation: dev });
            }
            let min_eig = min_eigenvalue(&op)?;
            if min_eig < -PSD_TOLERANCE {
                return Err(Error::NotPsd {
                    min_eigenvalue: min_eig,
                });
            }
            sum = sum.add(&op)?;
            labels.push(label);
            operators.push(op);
        }
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if deviation > OPERATOR_TOLERANCE {
            return Err(Error::PovmIncomplete {
                deviation,
                tolerance: OPERATOR_TOLERANCE,
            });
        }
        Ok(Self {
            dim,
            labels,
            operators,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn operator(&self, i: usize) -> &ComplexMatrix {
        &self.operators[i]
    }
}

/// A Hermitian involution: outcomes are the eigenvalues ±1.
#[derive(Debug, Clone)]
pub struct Observable {
    matrix: ComplexMatrix,
    sign: i8,
}

impl Observable {
    /// Validate a prospective observable matrix; `sign` records the prefactor
    /// it was built with (purely informational).
    fn checked(matrix: ComplexMatrix, sign: i8) -> Result<Self> {
        let n = matrix.ensure_square()?;
        let dev = matrix.hermitian_deviation();
        if dev > OPERATOR_TOLERANCE {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let sq = matrix.mul(&matrix)?;
        let invol_dev = sq.max_abs_diff(&ComplexMatrix::identity(n));
        if invol_dev > OPERATOR_TOLERANCE {
            return Err(Error::NotInvolutory {
                deviation: invol_dev,
            });
        }
        Ok(Self { matrix, sign })
    }

    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        Self::checked(matrix, 1)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// The 2×2 Pauli matrix named `I`, `X`, `Y`, or `Z`.
pub fn pauli(name: char) -> Result<ComplexMatrix> {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let data = match name {
        'I' => vec![l, o, o, l],
        'X' => vec![o, l, l, o],
        'Y' => vec![o, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), o],
        'Z' => vec![l, o, o, -l],
        other => {
            return Err(Error::InvalidConfig {
                reason: format!("unknown Pauli name `{other}`"),
            })
        }
    };
    ComplexMatrix::new(2, 2, data)
}

/// `sign · (P₁ ⊗ P₂)` for two Pauli names; a valid two-qubit observable.
pub fn build_observable(sign: i8, first: char, second: char) -> Result<Observable> {
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidConfig {
            reason: format!("observable sign must be +1 or -1, got {sign}"),
        });
    }
    let m = pauli(first)?
        .kron(&pauli(second)?)
        .scale(Complex64::new(sign as f64, 0.0));
    Observable::checked(m, sign)
}

/// The projectors `(𝟙 ± O)/2` onto the +1 and −1 eigenspaces.
pub fn spectral_projectors(obs: &Observable) -> (ComplexMatrix, ComplexMatrix) {
    let id = ComplexMatrix::identity(obs.dim());
    let half = Complex64::new(0.5, 0.0);
    let plus = id.add(obs.matrix()).expect("same dim").scale(half);
    let minus = id.sub(obs.matrix()).expect("same dim").scale(half);
    (plus, minus)
}

/// Outcome distribution `p(x) = Tr(L_x ρ)` as a single-variable pmf over the
/// POVM's outcome labels (variable name `outcome`).
pub fn measurement_pmf(povm: &Povm, state: &DensityOperator) -> Result<JointPmf> {
    if povm.dim() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            got: povm.dim(),
        });
    }
    let mut probs = Vec::with_capacity(povm.len());
    for i in 0..povm.len() {
        let p = trace_product(povm.operator(i), state.matrix())?.re;
        if p < -PSD_TOLERANCE {
            return Err(Error::NegativeEntry { index: i, value: p });
        }
        probs.push(p.max(0.0));
    }
    let alphabet = Alphabet::new("outcome", povm.labels().iter().cloned())?;
    JointPmf::new(vec![alphabet], probs)
}

/// A mixed state embedded as a pure state on an enlarged space.
///
/// The vector lives on `E ⊗ S₁ ⊗ S₂` in that factor order, where `E` is the
/// original space (dimension `base_dim`) and each `S_k` has one basis vector
/// per retained eigenvalue: `|ψ⟩ = Σ_z √p(z) |φ_z⟩|z⟩|z⟩`. The retained
/// spectrum is scaled to unit mass (an adjustment of at most the PSD
/// tolerance), so the vector is exactly normalized.
#[derive(Debug, Clone)]
pub struct Purification {
    pure_state: ComplexMatrix,
    spectrum: Vec<f64>,
    basis_labels: Vec<String>,
    base_dim: usize,
}

impl Purification {
    pub fn pure_state(&self) -> &ComplexMatrix {
        &self.pure_state
    }

    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn rank(&self) -> usize {
        self.spectrum.len()
    }

    /// Partial trace over both side spaces; reproduces the purified state.
    pub fn reduced_state(&self) -> ComplexMatrix {
        let d = self.base_dim;
        let r = self.rank();
        let psi = self.pure_state.data();
        let mut out = ComplexMatrix::zeros(d, d);
        for e1 in 0..d {
            for e2 in 0..d {
                let mut s = Complex64::new(0.0, 0.0);
                for z1 in 0..r {
                    for z2 in 0..r {
                        let i = (e1 * r + z1) * r + z2;
                        let j = (e2 * r + z1) * r + z2;
                        s += psi[i] * psi[j].conj();
                    }
                }
                out.set(e1, e2, s);
            }
        }
        out
    }
}

/// Embed a mixed state as `|ψ⟩ = Σ_z √p(z) |φ_z⟩|z⟩|z⟩` over its spectral
/// decomposition, with one side space per party.
pub fn purify(rho: &DensityOperator) -> Result<Purification> {
    let d = rho.dim();
    let (vals, vecs) = hermitian_eigen(rho.matrix())?;
    if let Some(&min) = vals.last() {
        if min < -PSD_TOLERANCE {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
    }
    let kept: Vec<(usize, f64)> = vals
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > RANK_THRESHOLD)
        .map(|(i, &v)| (i, v))
        .collect();
    let mass: f64 = kept.iter().map(|&(_, v)| v).sum();
    let r = kept.len();
    let mut psi = vec![Complex64::new(0.0, 0.0); d * r * r];
    let mut spectrum = Vec::with_capacity(r);
    let mut basis_labels = Vec::with_capacity(r);
    for (z, &(col, val)) in kept.iter().enumerate() {
        let p = val / mass;
        spectrum.push(p);
        basis_labels.push(z.to_string());
        let amp = Complex64::new(p.sqrt(), 0.0);
        for e in 0..d {
            psi[(e * r + z) * r + z] = amp * vecs.get(e, col);
        }
    }
    Ok(Purification {
        pure_state: ComplexMatrix::new(d * r * r, 1, psi)?,
        spectrum,
        basis_labels,
        base_dim: d,
    })
}

/// Attach classical side information: outcome `(x, z)` carries operator
/// `L_x ⊗ |z⟩⟨z|` on the party's space extended by its side space. Labels are
/// `"x@z"`. The `party` index (1 or 2) is recorded for documentation only —
/// both parties extend identically.
pub fn extend_povm(povm: &Povm, basis_labels: &[String], party: u8) -> Result<Povm> {
    if basis_labels.is_empty() {
        return Err(Error::InvalidConfig {
            reason: "empty side-information label set".into(),
        });
    }
    if party != 1 && party != 2 {
        return Err(Error::InvalidConfig {
            reason: format!("party must be 1 or 2, got {party}"),
        });
    }
    let r = basis_labels.len();
    let mut outcomes = Vec::with_capacity(povm.len() * r);
    for i in 0..povm.len() {
        for (z, zl) in basis_labels.iter().enumerate() {
            let mut proj = ComplexMatrix::zeros(r, r);
            proj.set(z, z, Complex64::new(1.0, 0.0));
            outcomes.push((
                format!("{}@{}", povm.label(i), zl),
                povm.operator(i).kron(&proj),
            ));
        }
    }
    Povm::new(outcomes)
}

/// Collapse a measurement over length-`n` outcome strings to the symbol at
/// one position: the operator for symbol `a` is the sum of all operators
/// whose label has `a` at position `i` (1-based). Distinct symbols are
/// emitted in sorted order.
pub fn per_symbol_marginal_povm(povm: &Povm, i: usize) -> Result<Povm> {
    let chars: Vec<Vec<char>> = povm.labels().iter().map(|l| l.chars().collect()).collect();
    let n = chars[0].len();
    if i == 0 || i > n || chars.iter().any(|c| c.len() != n) {
        return Err(Error::InvalidConfig {
            reason: "outcome labels must share one length covering the requested position".into(),
        });
    }
    let mut symbols: Vec<char> = chars.iter().map(|c| c[i - 1]).collect();
    symbols.sort_unstable();
    symbols.dedup();
    let mut outcomes = Vec::with_capacity(symbols.len());
    for &sym in &symbols {
        let mut sum = ComplexMatrix::zeros(povm.dim(), povm.dim());
        for (k, c) in chars.iter().enumerate() {
            if c[i - 1] == sym {
                sum = sum.add(povm.operator(k))?;
            }
        }
        outcomes.push((sym.to_string(), sum));
    }
    Povm::new(outcomes)
}

/// One violated invariant with its measured magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub invariant: String,
    pub magnitude: f64,
}

fn push_violation(report: &mut Vec<Violation>, invariant: &str, magnitude: f64) {
    report.push(Violation {
        invariant: invariant.to_string(),
        magnitude,
    });
}

/// Diagnostic check of the density-operator invariants; empty iff valid.
pub fn validate_density(matrix: &ComplexMatrix) -> Vec<Violation> {
    let mut report = Vec::new();
    if !matrix.is_square() {
        push_violation(
            &mut report,
            "square shape",
            (matrix.rows() as f64 - matrix.cols() as f64).abs(),
        );
        return report;
    }
    let dev = matrix.hermitian_deviation();
    if dev > OPERATOR_TOLERANCE {
        push_violation(&mut report, "Hermitian", dev);
    }
    let trace = matrix.trace().map(|t| t.re).unwrap_or(f64::NAN);
    if (trace - 1.0).abs() > OPERATOR_TOLERANCE {
        push_violation(&mut report, "unit trace", (trace - 1.0).abs());
    }
    let sym = matrix
        .add(&matrix.adjoint())
        .expect("square")
        .scale(Complex64::new(0.5, 0.0));
    match min_eigenvalue(&sym) {
        Ok(min) if min < -PSD_TOLERANCE => {
            push_violation(&mut report, "positive semidefinite", -min);
        }
        Ok(_) => {}
        Err(_) => push_violation(&mut report, "eigensolver convergence", f64::NAN),
    }
    report
}

/// Diagnostic check of the POVM invariants; empty iff valid.
pub fn validate_povm(outcomes: &[(String, ComplexMatrix)]) -> Vec<Violation> {
    let mut report = Vec::new();
    if outcomes.is_empty() {
        push_violation(&mut report, "nonempty outcome set", 0.0);
        return report;
    }
    let dim = outcomes[0].1.rows();
    let mut sum = ComplexMatrix::zeros(dim, dim);
    for (label, op) in outcomes {
        if !op.is_square() || op.rows() != dim {
            push_violation(
                &mut report,
                &format!("outcome `{label}` dimension"),
                (op.rows() * op.cols()) as f64 - (dim * dim) as f64,
            );
            return report;
        }
        let dev = op.hermitian_deviation();
        if dev > OPERATOR_TOLERANCE {
            push_violation(&mut report, &format!("outcome `{label}` Hermitian"), dev);
        }
        let sym = op
            .add(&op.adjoint())
            .expect("square")
            .scale(Complex64::new(0.5, 0.0));
        if let Ok(min) = min_eigenvalue(&sym) {
            if min < -PSD_TOLERANCE {
                push_violation(
                    &mut report,
                    &format!("outcome `{label}` positive semidefinite"),
                    -min,
                );
            }
        }
        sum = sum.add(op).expect("same dim");
    }
    let deviation = sum.max_abs_diff(&ComplexMatrix::identity(dim));
    if deviation > OPERATOR_TOLERANCE {
        push_violation(&mut report, "completeness (sum to identity)", deviation);
    }
    report
}

/// Diagnostic check of the observable invariants; empty iff valid.
pub fn validate_observable(matrix: &ComplexMatrix) -> Vec<Violation> {
    let mut report = Vec::new();
    if !matrix.is_square() {
        push_violation(
            &mut report,
            "square shape",
            (matrix.rows() as f64 - matrix.cols() as f64).abs(),
        );
        return report;
    }
    let dev = matrix.hermitian_deviation();
    if dev > OPERATOR_TOLERANCE {
        push_violation(&mut report, "Hermitian", dev);
    }
    match matrix.mul(matrix) {
        Ok(sq) => {
            let invol = sq.max_abs_diff(&ComplexMatrix::identity(matrix.rows()));
            if invol > OPERATOR_TOLERANCE {
                push_violation(&mut report, "squares to identity", invol);
            }
        }
        Err(_) => unreachable!("square matrix multiplies with itself"),
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_basics() {
        let z = pauli('Z').unwrap();
        assert_eq!(z.get(0, 0), c(1.0, 0.0));
        assert_eq!(z.get(1, 1), c(-1.0, 0.0));
        let x = pauli('X').unwrap();
        assert!(x.mul(&x).unwrap().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
        // X·Y = i·Z.
        let xy = x.mul(&pauli('Y').unwrap()).unwrap();
        let iz = pauli('Z').unwrap().scale(c(0.0, 1.0));
        assert!(xy.max_abs_diff(&iz) < 1e-15);
        assert!(pauli('Q').is_err());
    }

    #[test]
    fn observables_from_pauli_pairs() {
        let o = build_observable(1, 'X', 'I').unwrap();
        assert_eq!(o.dim(), 4);
        assert_eq!(o.sign(), 1);
        let neg = build_observable(-1, 'X', 'Z').unwrap();
        assert_eq!(neg.sign(), -1);
        assert!(neg.matrix().hermitian_deviation() < 1e-15);
        assert!(build_observable(2, 'X', 'X').is_err());
    }

    #[test]
    fn row_two_observables_multiply_to_plus_identity() {
        let a = build_observable(-1, 'X', 'Z').unwrap();
        let b = build_observable(1, 'Y', 'Y').unwrap();
        let d = build_observable(-1, 'Z', 'X').unwrap();
        let prod = a.matrix().mul(b.matrix()).unwrap().mul(d.matrix()).unwrap();
        assert!(prod.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn spectral_projectors_are_projectors() {
        let z = Observable::from_matrix(pauli('Z').unwrap()).unwrap();
        let (plus, minus) = spectral_projectors(&z);
        assert_eq!(plus.get(0, 0), c(1.0, 0.0));
        assert_eq!(plus.get(1, 1), c(0.0, 0.0));
        assert_eq!(minus.get(1, 1), c(1.0, 0.0));

        let xi = build_observable(1, 'X', 'I').unwrap();
        let (p, m) = spectral_projectors(&xi);
        assert!((p.trace().unwrap().re - 2.0).abs() < 1e-12, "rank 2");
        assert!(p.mul(&p).unwrap().max_abs_diff(&p) < 1e-12);
        assert!(p.mul(&m).unwrap().max_abs() < 1e-12, "orthogonality");
        assert!(p.add(&m).unwrap().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
    }

    #[test]
    fn eigen_of_pauli_z() {
        let (vals, vecs) = hermitian_eigen(&pauli('Z').unwrap()).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] + 1.0).abs() < 1e-12);
        // Columns orthonormal.
        let gram = vecs.adjoint().mul(&vecs).unwrap();
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn eigen_reconstructs_random_hermitian() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in [2usize, 3, 5, 8, 16] {
            let mut raw = ComplexMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    raw.set(i, j, c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
                }
            }
            let h = raw.add(&raw.adjoint()).unwrap().scale(c(0.5, 0.0));
            let (vals, vecs) = hermitian_eigen(&h).unwrap();
            // V Λ V† = H.
            let mut lam = ComplexMatrix::zeros(n, n);
            for (i, &v) in vals.iter().enumerate() {
                lam.set(i, i, c(v, 0.0));
            }
            let back = vecs.mul(&lam).unwrap().mul(&vecs.adjoint()).unwrap();
            assert!(back.max_abs_diff(&h) < 1e-11, "n={n}");
            let gram = vecs.adjoint().mul(&vecs).unwrap();
            assert!(gram.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-11);
            // Descending order.
            for w in vals.windows(2) {
                assert!(w[0] >= w[1] - 1e-12);
            }
        }
    }

    #[test]
    fn density_operator_validation() {
        let ok = DensityOperator::new(ComplexMatrix::identity(2).scale(c(0.5, 0.0)));
        assert!(ok.is_ok());
        let bad_trace = ComplexMatrix::identity(2).scale(c(0.45, 0.0));
        assert!(matches!(
            DensityOperator::new(bad_trace),
            Err(Error::TraceNotOne { .. })
        ));
        let not_psd = ComplexMatrix::new(
            2,
            2,
            vec![c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)],
        )
        .unwrap();
        assert!(matches!(
            DensityOperator::new(not_psd),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn measurement_on_eigenstate_is_deterministic() {
        let ket0 = ComplexMatrix::ket(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let rho = DensityOperator::pure(&ket0).unwrap();
        let z = Observable::from_matrix(pauli('Z').unwrap()).unwrap();
        let (p, m) = spectral_projectors(&z);
        let povm = Povm::new(vec![("0".into(), p), ("1".into(), m)]).unwrap();
        let pmf = measurement_pmf(&povm, &rho).unwrap();
        assert!((pmf.probs()[0] - 1.0).abs() < 1e-12);
        assert!(pmf.probs()[1].abs() < 1e-12);

        let trivial = Povm::new(vec![("only".into(), ComplexMatrix::identity(2))]).unwrap();
        let pmf = measurement_pmf(&trivial, &rho).unwrap();
        assert_eq!(pmf.probs(), &[1.0]);
    }

    #[test]
    fn povm_completeness_is_enforced() {
        let (p, _) = spectral_projectors(&Observable::from_matrix(pauli('Z').unwrap()).unwrap());
        assert!(matches!(
            Povm::new(vec![("0".into(), p)]),
            Err(Error::PovmIncomplete { .. })
        ));
    }

    #[test]
    fn purify_pure_state_has_unit_spectrum() {
        let ket = ComplexMatrix::ket(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let rho = DensityOperator::pure(&ket).unwrap();
        let p = purify(&rho).unwrap();
        assert_eq!(p.rank(), 1);
        assert!((p.spectrum()[0] - 1.0).abs() < 1e-12);
        assert!(p.reduced_state().max_abs_diff(rho.matrix()) < 1e-9);
    }

    #[test]
    fn purify_maximally_mixed_two_qubits() {
        let rho = DensityOperator::new(ComplexMatrix::identity(4).scale(c(0.25, 0.0))).unwrap();
        let p = purify(&rho).unwrap();
        assert_eq!(p.rank(), 4);
        for &s in p.spectrum() {
            assert!((s - 0.25).abs() < 1e-12);
        }
        let norm_sq: f64 = p.pure_state().data().iter().map(|a| a.norm_sqr()).sum();
        assert!((norm_sq - 1.0).abs() < 1e-12);
        assert!(p.reduced_state().max_abs_diff(rho.matrix()) < 1e-9);
    }

    #[test]
    fn purify_random_mixed_states_reproduce_input() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let mut g = ComplexMatrix::zeros(4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    g.set(i, j, c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
                }
            }
            let gg = g.mul(&g.adjoint()).unwrap();
            let t = gg.trace().unwrap().re;
            let rho = DensityOperator::new(gg.scale(c(1.0 / t, 0.0))).unwrap();
            let p = purify(&rho).unwrap();
            assert!(p.reduced_state().max_abs_diff(rho.matrix()) < 1e-9);
            let norm_sq: f64 = p.pure_state().data().iter().map(|a| a.norm_sqr()).sum();
            assert!((norm_sq - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn extend_povm_padding_and_identity() {
        let id = Povm::new(vec![("e".into(), ComplexMatrix::identity(2))]).unwrap();
        let single = extend_povm(&id, &["0".into()], 1).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single.label(0), "e@0");
        assert!(single.operator(0).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);

        let two = extend_povm(&id, &["0".into(), "1".into()], 2).unwrap();
        assert_eq!(two.len(), 2);
        let sum = two.operator(0).add(two.operator(1)).unwrap();
        assert!(sum.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
        assert!(extend_povm(&id, &[], 1).is_err());
    }

    #[test]
    fn extended_measurement_on_purification_matches_mixed_state() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        // Random mixed qubit state and a random 2-outcome POVM.
        let mut g = ComplexMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                g.set(i, j, c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
            }
        }
        let gg = g.mul(&g.adjoint()).unwrap();
        let t = gg.trace().unwrap().re;
        let rho = DensityOperator::new(gg.scale(c(1.0 / t, 0.0))).unwrap();
        let z = Observable::from_matrix(pauli('Z').unwrap()).unwrap();
        let (pl, mi) = spectral_projectors(&z);
        let povm = Povm::new(vec![("0".into(), pl), ("1".into(), mi)]).unwrap();

        let pur = purify(&rho).unwrap();
        let r = pur.rank();
        let extended = extend_povm(&povm, pur.basis_labels(), 1).unwrap();
        // The purified state also carries the second side space; pad each
        // extended operator with the identity on it before measuring.
        let pad = ComplexMatrix::identity(r);
        let padded = Povm::new(
            (0..extended.len())
                .map(|i| {
                    (
                        extended.label(i).to_string(),
                        extended.operator(i).kron(&pad),
                    )
                })
                .collect(),
        )
        .unwrap();
        let full_state = DensityOperator::pure(pur.pure_state()).unwrap();
        let ext_pmf = measurement_pmf(&padded, &full_state).unwrap();
        let base_pmf = measurement_pmf(&povm, &rho).unwrap();
        for (k, label) in base_pmf.vars()[0].symbols().iter().enumerate() {
            let marginal: f64 = (0..ext_pmf.probs().len())
                .filter(|&i| {
                    ext_pmf.vars()[0]
                        .symbol(i)
                        .starts_with(&format!("{label}@"))
                })
                .map(|i| ext_pmf.probs()[i])
                .sum();
            assert!(
                (marginal - base_pmf.probs()[k]).abs() < 1e-12,
                "outcome {label}"
            );
        }
    }

    #[test]
    fn per_symbol_marginal_behaviour() {
        // n=1: identity.
        let z = Observable::from_matrix(pauli('Z').unwrap()).unwrap();
        let (pl, mi) = spectral_projectors(&z);
        let povm = Povm::new(vec![("0".into(), pl.clone()), ("1".into(), mi.clone())]).unwrap();
        let same = per_symbol_marginal_povm(&povm, 1).unwrap();
        assert_eq!(same.len(), 2);
        assert!(same.operator(0).max_abs_diff(povm.operator(0)) < 1e-15);

        // Product POVM over two positions: marginal at position 1 is A ⊗ 𝟙.
        let mut outcomes = Vec::new();
        for (la, a) in [("0", &pl), ("1", &mi)] {
            for (lb, b) in [("0", &pl), ("1", &mi)] {
                outcomes.push((format!("{la}{lb}"), a.kron(b)));
            }
        }
        let prod = Povm::new(outcomes).unwrap();
        let marg = per_symbol_marginal_povm(&prod, 1).unwrap();
        assert_eq!(marg.len(), 2);
        assert!(
            marg.operator(0)
                .max_abs_diff(&pl.kron(&ComplexMatrix::identity(2)))
                < 1e-12
        );

        // Marginal-of-pmf equals pmf-of-marginal.
        let ket = ComplexMatrix::ket(vec![c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)]);
        let rho = DensityOperator::pure(&ket).unwrap();
        let full = measurement_pmf(&prod, &rho).unwrap();
        let marg_pmf = measurement_pmf(&marg, &rho).unwrap();
        for (k, sym) in marg_pmf.vars()[0].symbols().iter().enumerate() {
            let from_full: f64 = (0..full.probs().len())
                .filter(|&i| full.vars()[0].symbol(i).starts_with(sym.as_str()))
                .map(|i| full.probs()[i])
                .sum();
            assert!((from_full - marg_pmf.probs()[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_traces_of_product_states() {
        let ket0 = ComplexMatrix::ket(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let rho0 = DensityOperator::pure(&ket0).unwrap();
        let mixed = ComplexMatrix::identity(2).scale(c(0.5, 0.0));
        let prod = rho0.matrix().kron(&mixed);
        let left = partial_trace_right(&prod, 2, 2).unwrap();
        assert!(left.max_abs_diff(rho0.matrix()) < 1e-12);
        let right = partial_trace_left(&prod, 2, 2).unwrap();
        assert!(right.max_abs_diff(&mixed) < 1e-12);
    }

    #[test]
    fn system_permutation_reorders_amplitudes() {
        // |a⟩⊗|b⟩⊗|c⟩ with dims (2,2,2): swap factors 0 and 2.
        let mut data = vec![c(0.0, 0.0); 8];
        for (i, d) in data.iter_mut().enumerate() {
            *d = c(i as f64, 0.0);
        }
        let ket = ComplexMatrix::ket(data);
        let swapped = permute_state_systems(&ket, &[2, 2, 2], &[2, 1, 0]).unwrap();
        // Input index (a,b,c) = a·4+b·2+c maps to output (c,b,a).
        for a in 0..2usize {
            for b in 0..2usize {
                for cc in 0..2usize {
                    let from = a * 4 + b * 2 + cc;
                    let to = cc * 4 + b * 2 + a;
                    assert_eq!(swapped.data()[to], c(from as f64, 0.0));
                }
            }
        }
    }

    #[test]
    fn validation_reports_constructed_defects() {
        assert!(validate_observable(&pauli('X').unwrap()).is_empty());
        let short_trace = ComplexMatrix::identity(2).scale(c(0.45, 0.0));
        let report = validate_density(&short_trace);
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].invariant, "unit trace");
        assert!((report[0].magnitude - 0.1).abs() < 1e-12);

        let z = Observable::from_matrix(pauli('Z').unwrap()).unwrap();
        let (pl, mi) = spectral_projectors(&z);
        let missing = vec![("0".to_string(), pl)];
        let report = validate_povm(&missing);
        assert_eq!(report.len(), 1);
        assert!(report[0].invariant.contains("completeness"));
        // 𝟙 − |0⟩⟨0| has largest entry 1.
        assert!((report[0].magnitude - 1.0).abs() < 1e-12);
        let _ = mi;
    }
}
