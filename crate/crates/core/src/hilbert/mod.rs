//! Dense Hilbert-space machinery: composite kets and density matrices with
//! explicit subsystem dimensions, Fock-space states, and a Hermitian eigensolver.

mod eig;
mod fock;
mod matrix;

pub use eig::{hermitian_eig, hermitian_eigenvalues, HermitianEigen, HERMITIAN_INPUT_TOL};
pub use fock::{
    annihilation, coherent_state, coherent_tail_mass, default_n_max, displacement_matrix,
    squeeze_matrix, squeezed_coherent_state, TAIL_TOLERANCE,
};
pub use matrix::CMatrix;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerances a physical density matrix must satisfy.
pub mod tol {
    /// Max elementwise `|ρ_ij − conj(ρ_ji)|`.
    pub const HERMITIAN: f64 = 1e-10;
    /// `|Tr ρ − 1|`.
    pub const TRACE: f64 = 1e-10;
    /// Smallest eigenvalue allowed.
    pub const MIN_EIGENVALUE: f64 = -1e-9;
}

fn check_dims(dims: &[usize], len: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!("invalid subsystem dims {dims:?}")));
    }
    let prod: usize = dims.iter().product();
    if prod != len {
        return Err(Error::DimensionMismatch(format!(
            "dims {dims:?} (product {prod}) do not match length {len}"
        )));
    }
    Ok(())
}

/// Strides for a row-major multi-index over `dims`.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Complex amplitudes over a tensor-product basis. The last subsystem varies fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
    dims: Vec<usize>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, amps.len())?;
        Ok(Self { amps, dims })
    }

    /// Basis ket `|index⟩` in a single subsystem of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimensionMismatch(format!("basis index {index} >= dim {dim}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Self::new(amps, vec![dim])
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            for z in &mut self.amps {
                *z /= n;
            }
        }
        self
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", self.dims, other.dims)));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn scaled(mut self, s: Complex64) -> Self {
        for z in &mut self.amps {
            *z *= s;
        }
        self
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: Complex64, other: &StateVector) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", self.dims, other.dims)));
        }
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += s * b;
        }
        Ok(())
    }

    /// Kronecker product; subsystem dims are concatenated.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        StateVector { amps, dims }
    }

    /// `|ψ⟩⟨ψ|` (not renormalized).
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix { mat: CMatrix::outer(&self.amps, &self.amps), dims: self.dims.clone() }
    }
}

/// Free-function form of [`StateVector::tensor`].
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    a.tensor(b)
}

/// A density matrix with subsystem-dimension labels.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Wraps a matrix without checking positivity or trace; see [`Self::check_physical`].
    pub fn new(mat: CMatrix, dims: Vec<usize>) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} density matrix", mat.rows(), mat.cols())));
        }
        check_dims(&dims, mat.rows())?;
        Ok(Self { mat, dims })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        psi.projector()
    }

    /// `Σ w_k |ψ_k⟩⟨ψ_k|`
    pub fn mixture(terms: &[(f64, &StateVector)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or_else(|| Error::DimensionMismatch("empty mixture".into()))?;
        let n = first.len();
        let mut mat = CMatrix::zeros(n, n);
        for (w, psi) in terms {
            if psi.dims() != first.dims() {
                return Err(Error::DimensionMismatch("mixture terms with different dims".into()));
            }
            mat.axpy(Complex64::new(*w, 0.0), &CMatrix::outer(psi.amplitudes(), psi.amplitudes()));
        }
        Ok(Self { mat, dims: first.dims().to_vec() })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ_ij ρ_ij ρ_ji = Σ |ρ_ij|² for Hermitian ρ
        let n = self.dim();
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                s += self.mat[(i, j)] * self.mat[(j, i)];
            }
        }
        s.re
    }

    /// `⟨ψ|ρ|ψ⟩`
    pub fn expectation_pure(&self, psi: &StateVector) -> Result<f64> {
        if psi.dims() != self.dims() {
            return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", psi.dims(), self.dims)));
        }
        let rv = self.mat.matvec(psi.amplitudes());
        Ok(psi.amplitudes().iter().zip(&rv).map(|(a, b)| a.conj() * b).sum::<Complex64>().re)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let vals = hermitian_eigenvalues(&self.mat)?;
        Ok(*vals.last().expect("non-empty"))
    }

    /// Checks Hermiticity, unit trace and positivity at the given tolerances.
    pub fn check_with(&self, hermitian: f64, trace: f64, min_eig: f64) -> Result<()> {
        let defect = self.mat.hermiticity_defect();
        if defect > hermitian {
            return Err(Error::InvalidDensityMatrix(format!("Hermiticity defect {defect:.3e}")));
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > trace {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let lo = self.min_eigenvalue()?;
        if lo < min_eig {
            return Err(Error::InvalidDensityMatrix(format!("minimum eigenvalue {lo:.3e}")));
        }
        Ok(())
    }

    /// Checks the invariants of a physical state at the [`tol`] tolerances.
    pub fn check_physical(&self) -> Result<()> {
        self.check_with(tol::HERMITIAN, tol::TRACE, tol::MIN_EIGENVALUE)
    }

    /// Reduced state on the subsystems in `keep` (any order; output keeps the original
    /// subsystem order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        partial_trace(self, keep)
    }
}

/// Reduced density matrix over the subsystems listed in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if keep.is_empty() {
        return Err(Error::InvalidSubsystem("nothing to keep".into()));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(Error::InvalidSubsystem(format!("duplicate indices in {keep:?}")));
    }
    if let Some(&bad) = kept.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::InvalidSubsystem(format!("index {bad} out of range for {} subsystems", dims.len())));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();
    let full_strides = strides(dims);

    let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let kept_total: usize = kept_dims.iter().product();
    let traced_total: usize = traced_dims.iter().product();

    // flat offset in the full space for each kept / traced multi-index
    let offsets = |subs: &[usize], sub_dims: &[usize], total: usize| -> Vec<usize> {
        let st = strides(sub_dims);
        (0..total)
            .map(|flat| {
                subs.iter()
                    .zip(sub_dims.iter().zip(&st))
                    .map(|(&sys, (&d, &s))| ((flat / s) % d) * full_strides[sys])
                    .sum()
            })
            .collect()
    };
    let kept_off = offsets(&kept, &kept_dims, kept_total);
    let traced_off = offsets(&traced, &traced_dims, traced_total);

    let m = rho.matrix();
    let out = CMatrix::from_fn(kept_total, kept_total, |i, j| {
        traced_off.iter().map(|&t| m[(kept_off[i] + t, kept_off[j] + t)]).sum()
    });
    DensityMatrix::new(out, kept_dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_state(dims: Vec<usize>, rng: &mut impl Rng) -> StateVector {
        let n = dims.iter().product();
        let amps = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        StateVector::new(amps, dims).unwrap().normalized()
    }

    #[test]
    fn tensor_bookkeeping() {
        let field = StateVector::new(vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)], vec![3]).unwrap();
        let g = StateVector::basis(2, 0).unwrap();
        let t = field.tensor(&g);
        assert_eq!(t.dims(), &[3, 2]);
        let nonzero: Vec<usize> = (0..t.len()).filter(|&i| t.amplitudes()[i].norm() > 0.0).collect();
        // (n=0,g) -> 0, (n=1,g) -> 2
        assert_eq!(nonzero, vec![0, 2]);
    }

    #[test]
    fn tensor_norms_multiply() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let a = random_state(vec![5], &mut rng).scaled(c(2.0, 0.0));
        let b = random_state(vec![3], &mut rng).scaled(c(0.0, 3.0));
        assert!((a.tensor(&b).norm() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_traces_to_factor() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        let f = random_state(vec![4], &mut rng);
        let a = random_state(vec![2, 2], &mut rng);
        let rho = f.tensor(&a).projector();
        let ra = rho.partial_trace(&[1, 2]).unwrap();
        assert!(ra.matrix().max_abs_diff(a.projector().matrix()) < 1e-14);
        let rf = rho.partial_trace(&[0]).unwrap();
        assert!(rf.matrix().max_abs_diff(f.projector().matrix()) < 1e-14);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let s = 0.5f64.sqrt();
        let bell = StateVector::new(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)], vec![2, 2]).unwrap();
        let r = bell.projector().partial_trace(&[0]).unwrap();
        let half = CMatrix::identity(2).scale_real(0.5);
        assert!(r.matrix().max_abs_diff(&half) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_indices() {
        let rho = StateVector::basis(4, 0).unwrap().projector();
        assert!(matches!(rho.partial_trace(&[]), Err(Error::InvalidSubsystem(_))));
        assert!(matches!(rho.partial_trace(&[1]), Err(Error::InvalidSubsystem(_))));
        let rho2 = StateVector::basis(2, 0).unwrap().tensor(&StateVector::basis(2, 1).unwrap()).projector();
        assert!(matches!(rho2.partial_trace(&[0, 0]), Err(Error::InvalidSubsystem(_))));
    }

    #[test]
    fn mixed_middle_subsystem_trace() {
        // keep subsystems 0 and 2 of a 2x3x2 product
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let a = random_state(vec![2], &mut rng);
        let b = random_state(vec![3], &mut rng);
        let cst = random_state(vec![2], &mut rng);
        let rho = a.tensor(&b).tensor(&cst).projector();
        let r = rho.partial_trace(&[2, 0]).unwrap();
        assert_eq!(r.dims(), &[2, 2]);
        assert!(r.matrix().max_abs_diff(a.tensor(&cst).projector().matrix()) < 1e-14);
    }

    #[test]
    fn physical_checks() {
        let psi = StateVector::basis(3, 1).unwrap();
        psi.projector().check_physical().unwrap();
        let bad = DensityMatrix::new(CMatrix::identity(3), vec![3]).unwrap();
        assert!(bad.check_physical().is_err());
    }

    #[test]
    fn dims_must_match_length() {
        assert!(StateVector::new(vec![c(1.0, 0.0); 6], vec![2, 2]).is_err());
        assert!(StateVector::new(vec![c(1.0, 0.0); 6], vec![3, 2]).is_ok());
    }
}
