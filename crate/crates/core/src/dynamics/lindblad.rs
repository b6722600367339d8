//! Fixed-step RK4 integration of the cavity-loss master equation
//!
//! ```text
//! ∂ρ/∂t = −i[H, ρ] + λ (a ρ a† − ½ a†a ρ − ½ ρ a†a)
//! ```
//!
//! on the dense joint density matrix. The trace is never renormalized; drift is
//! reported by the caller's checks.

use num_complex::Complex64;

use super::{jc_hamiltonian_sparse, Atom, ProtocolConfig, FIELD};
use crate::error::{Error, Result};
use crate::hilbert::{strides, CMatrix, DensityMatrix};

/// Largest step-doubling error estimate accepted at the start of each stage.
pub const LOCAL_ERROR_TOL: f64 = 1e-9;

/// Compressed-row sparse complex operator.
#[derive(Clone, Debug)]
pub(crate) struct SparseOp {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
}

impl SparseOp {
    pub(crate) fn zero(dim: usize) -> Self {
        Self { dim, row_ptr: vec![0; dim + 1], cols: Vec::new(), vals: Vec::new() }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub(crate) fn from_triplets(dim: usize, mut entries: Vec<(usize, usize, Complex64)>) -> Self {
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0; dim + 1];
        let mut cols = Vec::with_capacity(entries.len());
        let mut vals: Vec<Complex64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            if last == Some((r, c)) {
                *vals.last_mut().expect("previous entry") += v;
                continue;
            }
            cols.push(c);
            vals.push(v);
            row_ptr[r + 1] += 1;
            last = Some((r, c));
        }
        for r in 0..dim {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self { dim, row_ptr, cols, vals }
    }

    fn row(&self, r: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        self.cols[a..b].iter().copied().zip(self.vals[a..b].iter().copied())
    }

    /// `out += s · (self · m)`
    fn left_mul_into(&self, m: &CMatrix, s: Complex64, out: &mut CMatrix) {
        for r in 0..self.dim {
            for (k, v) in self.row(r) {
                let f = s * v;
                let src = m.row(k);
                for (o, x) in out.row_mut(r).iter_mut().zip(src) {
                    *o += f * x;
                }
            }
        }
    }

    /// `out += s · (m · self)`
    fn right_mul_into(&self, m: &CMatrix, s: Complex64, out: &mut CMatrix) {
        for i in 0..m.rows() {
            let src = m.row(i);
            let dst = out.row_mut(i);
            for (k, &x) in src.iter().enumerate() {
                if x == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (j, v) in self.row(k) {
                    dst[j] += s * x * v;
                }
            }
        }
    }

    fn adjoint(&self) -> Self {
        let mut entries = Vec::with_capacity(self.vals.len());
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                entries.push((c, r, v.conj()));
            }
        }
        Self::from_triplets(self.dim, entries)
    }

    #[cfg(test)]
    fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                m[(r, c)] += v;
            }
        }
        m
    }
}

/// Field annihilation operator on a joint space whose subsystem 0 is the field.
pub(crate) fn field_annihilation(dims: &[usize]) -> SparseOp {
    let total: usize = dims.iter().product();
    let sf = strides(dims)[FIELD];
    let mut entries = Vec::new();
    for idx in 0..total {
        let n = (idx / sf) % dims[FIELD];
        if n > 0 {
            entries.push((idx - sf, idx, Complex64::new((n as f64).sqrt(), 0.0)));
        }
    }
    SparseOp::from_triplets(total, entries)
}

/// `∂ρ/∂t = −i[H, ρ] + λ (a ρ a† − ½{a†a, ρ})` with a field-loss jump operator.
#[derive(Clone, Debug)]
pub struct MasterEquation {
    hamiltonian: SparseOp,
    jump: SparseOp,
    jump_adj: SparseOp,
    /// diagonal of a†a
    number: Vec<f64>,
    lambda: f64,
}

impl MasterEquation {
    /// Pure photon loss (`H = 0`) at rate `lambda` on the given layout.
    pub fn pure_loss(dims: &[usize], lambda: f64) -> Self {
        let total = dims.iter().product();
        Self::with_hamiltonian(SparseOp::zero(total), dims, lambda)
    }

    /// JC coupling of `atom` with strength `omega` plus photon loss.
    pub fn jaynes_cummings(dims: &[usize], omega: f64, atom: Atom, lambda: f64) -> Result<Self> {
        let h = jc_hamiltonian_sparse(dims, omega, atom)?;
        Ok(Self::with_hamiltonian(h, dims, lambda))
    }

    fn with_hamiltonian(hamiltonian: SparseOp, dims: &[usize], lambda: f64) -> Self {
        let jump = field_annihilation(dims);
        let jump_adj = jump.adjoint();
        let total: usize = dims.iter().product();
        let sf = strides(dims)[FIELD];
        let number = (0..total).map(|idx| ((idx / sf) % dims[FIELD]) as f64).collect();
        Self { hamiltonian, jump, jump_adj, number, lambda }
    }

    pub fn dim(&self) -> usize {
        self.number.len()
    }

    /// Right-hand side of the master equation.
    pub fn rhs(&self, rho: &CMatrix) -> CMatrix {
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        let mi = Complex64::new(0.0, -1.0);
        self.hamiltonian.left_mul_into(rho, mi, &mut out);
        self.hamiltonian.right_mul_into(rho, -mi, &mut out);
        if self.lambda > 0.0 {
            let mut a_rho = CMatrix::zeros(d, d);
            self.jump.left_mul_into(rho, Complex64::new(1.0, 0.0), &mut a_rho);
            self.jump_adj.right_mul_into(&a_rho, Complex64::new(self.lambda, 0.0), &mut out);
            let half = 0.5 * self.lambda;
            for i in 0..d {
                let ni = self.number[i];
                let row = rho.row(i);
                let dst = out.row_mut(i);
                for j in 0..d {
                    dst[j] -= half * (ni + self.number[j]) * row[j];
                }
            }
        }
        out
    }

    fn rk4_step(&self, rho: &CMatrix, h: f64) -> CMatrix {
        let c = |x: f64| Complex64::new(x, 0.0);
        let k1 = self.rhs(rho);
        let mut tmp = rho.clone();
        tmp.axpy(c(0.5 * h), &k1);
        let k2 = self.rhs(&tmp);
        tmp = rho.clone();
        tmp.axpy(c(0.5 * h), &k2);
        let k3 = self.rhs(&tmp);
        tmp = rho.clone();
        tmp.axpy(c(h), &k3);
        let k4 = self.rhs(&tmp);
        let mut out = rho.clone();
        out.axpy(c(h / 6.0), &k1);
        out.axpy(c(h / 3.0), &k2);
        out.axpy(c(h / 3.0), &k3);
        out.axpy(c(h / 6.0), &k4);
        out
    }

    /// Step-doubling estimate of the RK4 local error for one step of size `h`.
    pub fn local_error_estimate(&self, rho: &CMatrix, h: f64) -> f64 {
        let full = self.rk4_step(rho, h);
        let half = self.rk4_step(&self.rk4_step(rho, 0.5 * h), 0.5 * h);
        full.max_abs_diff(&half) * 16.0 / 15.0
    }

    /// Integrate for time `t` with steps no longer than `dt`.
    ///
    /// The first step is checked by step doubling; an estimate above
    /// [`LOCAL_ERROR_TOL`] aborts with [`Error::StepTooLarge`].
    pub fn evolve(&self, rho: &DensityMatrix, t: f64, dt: f64) -> Result<DensityMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!("state dim {} vs generator dim {}", rho.dim(), self.dim())));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::StepTooLarge { dt, reason: "step must be positive and finite".into() });
        }
        if t <= 0.0 {
            return Ok(rho.clone());
        }
        let steps = (t / dt).ceil().max(1.0) as usize;
        let h = t / steps as f64;
        let err = self.local_error_estimate(rho.matrix(), h);
        if err > LOCAL_ERROR_TOL {
            return Err(Error::StepTooLarge {
                dt: h,
                reason: format!("local error estimate {err:.3e} exceeds {LOCAL_ERROR_TOL:.0e}"),
            });
        }
        let mut m = rho.matrix().clone();
        for _ in 0..steps {
            m = self.rk4_step(&m, h);
        }
        DensityMatrix::new(m, rho.dims().to_vec())
    }
}

/// Largest admissible step `0.02 / max(Ω√n_max, λ n_max)` over both stages.
pub fn lindblad_time_step_bound(cfg: &ProtocolConfig) -> f64 {
    let n = cfg.n_max as f64;
    let rate = (cfg.omega1.max(cfg.omega2) * n.sqrt()).max(cfg.lambda * n);
    if rate > 0.0 {
        0.02 / rate
    } else {
        f64::INFINITY
    }
}

/// Open-system protocol: both stages integrated under the master equation.
///
/// `dt = None` uses the stability bound [`lindblad_time_step_bound`]; an explicit step
/// above the bound is rejected.
pub fn lindblad_run(cfg: &ProtocolConfig, dt: Option<f64>) -> Result<DensityMatrix> {
    let psi0 = cfg.initial_state()?;
    let bound = lindblad_time_step_bound(cfg);
    let dt = match dt {
        Some(dt) if dt > bound * (1.0 + 1e-12) => {
            return Err(Error::StepTooLarge { dt, reason: format!("stability bound is {bound:.3e}") });
        }
        Some(dt) => dt,
        None => bound,
    };
    let dims = cfg.dims();
    let (t1, t2) = cfg.interaction_times();
    let rho0 = psi0.projector();
    let stage1 = MasterEquation::jaynes_cummings(&dims, cfg.omega1, Atom::First, cfg.lambda)?;
    let rho1 = stage1.evolve(&rho0, t1, dt)?;
    let stage2 = MasterEquation::jaynes_cummings(&dims, cfg.omega2, Atom::Second, cfg.lambda)?;
    stage2.evolve(&rho1, t2, dt)
}
