//! Two-qubit entanglement and mixedness measures. Entropies use base 2.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{hermitian_eig, hermitian_eigenvalues, CMatrix, DensityMatrix, StateVector};

/// Eigenvalues below this are treated as zero before roots and logarithms.
pub const EIGEN_CLAMP: f64 = 1e-12;

/// Looser than [`crate::hilbert::tol`] so integrator output with small drift is accepted.
pub const INPUT_HERMITIAN_TOL: f64 = 1e-8;
pub const INPUT_TRACE_TOL: f64 = 1e-8;
pub const INPUT_MIN_EIGENVALUE: f64 = -1e-6;

/// A measure evaluated at an optional sweep coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureResult {
    pub value: f64,
    pub gamma: Option<f64>,
}

impl MeasureResult {
    pub fn at(gamma: f64, value: f64) -> Self {
        Self { value, gamma: Some(gamma) }
    }
}

fn check_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch(format!("expected a 4x4 state, got {}x{}", rho.dim(), rho.dim())));
    }
    rho.check_with(INPUT_HERMITIAN_TOL, INPUT_TRACE_TOL, INPUT_MIN_EIGENVALUE)
}

fn xlog2x(p: f64) -> f64 {
    if p <= EIGEN_CLAMP {
        0.0
    } else {
        p * p.log2()
    }
}

/// Binary entropy `h(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    -xlog2x(p) - xlog2x(1.0 - p)
}

/// Von Neumann entropy (bits) of a density matrix.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let ev = hermitian_eigenvalues(rho.matrix())?;
    Ok(-ev.iter().map(|&p| xlog2x(p)).sum::<f64>())
}

/// Entropy of either one-qubit marginal of a pure two-qubit state.
pub fn entanglement_entropy(psi: &StateVector) -> Result<f64> {
    if psi.len() != 4 {
        return Err(Error::DimensionMismatch(format!("expected 4 amplitudes, got {}", psi.len())));
    }
    let n = psi.norm_sqr();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(n));
    }
    let a = psi.amplitudes();
    // marginal of qubit 1: ρ₁ = M M† with M the 2×2 coefficient matrix
    let m = |i: usize, j: usize| a[2 * i + j];
    let r00 = m(0, 0).norm_sqr() + m(0, 1).norm_sqr();
    let r11 = m(1, 0).norm_sqr() + m(1, 1).norm_sqr();
    let r01 = m(0, 0) * m(1, 0).conj() + m(0, 1) * m(1, 1).conj();
    let tr = r00 + r11;
    let disc = ((r00 - r11) * (r00 - r11) + 4.0 * r01.norm_sqr()).sqrt();
    let p = (0.5 * (tr + disc) / tr).clamp(0.0, 1.0);
    Ok(binary_entropy(p))
}

/// `Tr ρ²`
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

fn sigma_yy() -> CMatrix {
    // σy ⊗ σy is real: anti-diagonal (−1, 1, 1, −1)
    let mut m = CMatrix::zeros(4, 4);
    for (i, v) in [-1.0, 1.0, 1.0, -1.0].into_iter().enumerate() {
        m[(i, 3 - i)] = Complex64::new(v, 0.0);
    }
    m
}

/// Wootters concurrence from the spectrum of `√ρ ρ̃ √ρ`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    let h = rho.matrix().hermitian_part();
    let sqrt_rho = hermitian_eig(&h)?.map_spectrum(|x| if x > EIGEN_CLAMP { x.sqrt() } else { 0.0 });
    let yy = sigma_yy();
    let tilde = yy.matmul(&h.conj()).matmul(&yy);
    let r = sqrt_rho.matmul(&tilde).matmul(&sqrt_rho).hermitian_part();
    let mut l: Vec<f64> =
        hermitian_eigenvalues(&r)?.into_iter().map(|x| if x > EIGEN_CLAMP { x.sqrt() } else { 0.0 }).collect();
    l.sort_by(|a, b| b.total_cmp(a));
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// `E_f = h((1 + √(1 − C²))/2)` as a function of the concurrence.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt()))
}

/// Entanglement of formation in bits.
pub fn entanglement_of_formation(rho: &DensityMatrix) -> Result<f64> {
    concurrence(rho).map(eof_from_concurrence)
}

/// Partial transpose of a two-qubit matrix over qubit 1 or 2 (0-based index 0 or 1).
pub fn partial_transpose(m: &CMatrix, qubit: usize) -> CMatrix {
    CMatrix::from_fn(4, 4, |row, col| {
        let (a, b, c, d) = (row >> 1, row & 1, col >> 1, col & 1);
        if qubit == 0 {
            m[(2 * c + b, 2 * a + d)]
        } else {
            m[(2 * a + d, 2 * c + b)]
        }
    })
}

fn negativity_over(rho: &DensityMatrix, qubit: usize) -> Result<f64> {
    check_two_qubit(rho)?;
    let pt = partial_transpose(&rho.matrix().hermitian_part(), qubit);
    let ev = hermitian_eigenvalues(&pt)?;
    Ok(-ev.iter().filter(|&&x| x < -EIGEN_CLAMP).sum::<f64>())
}

/// `−Σ` negative eigenvalues of the partial transpose over qubit 2.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    negativity_over(rho, 1)
}

/// Same as [`negativity`] with the transpose taken over qubit 1.
pub fn negativity_qubit1(rho: &DensityMatrix) -> Result<f64> {
    negativity_over(rho, 0)
}
