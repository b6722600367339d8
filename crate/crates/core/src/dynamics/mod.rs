//! Consecutive Jaynes–Cummings interactions of one field mode with two atoms.
//!
//! Everything is in the frame rotating at the (common) field and atomic frequency,
//! where `H_k = Ω_k (a† σ_k + a σ_k†)`. Subsystem order is fixed as
//! `(field, atom 1, atom 2)`; qubit basis index 0 is `|g⟩`, 1 is `|e⟩`.

mod lindblad;

pub use lindblad::{lindblad_run, lindblad_time_step_bound, MasterEquation, LOCAL_ERROR_TOL};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{self, strides, DensityMatrix, StateVector};

pub const FIELD: usize = 0;

/// Which atom a stage of the protocol couples to the field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    First,
    Second,
}

impl Atom {
    /// Subsystem index in the `(field, atom 1, atom 2)` layout.
    pub fn subsystem(self) -> usize {
        match self {
            Atom::First => 1,
            Atom::Second => 2,
        }
    }
}

/// Pure state of a two-level atom, `ground |g⟩ + excited |e⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Qubit {
    pub ground: Complex64,
    pub excited: Complex64,
}

impl Qubit {
    pub const GROUND: Qubit = Qubit { ground: Complex64::new(1.0, 0.0), excited: Complex64::new(0.0, 0.0) };
    pub const EXCITED: Qubit = Qubit { ground: Complex64::new(0.0, 0.0), excited: Complex64::new(1.0, 0.0) };

    pub fn to_state(self) -> StateVector {
        StateVector::new(vec![self.ground, self.excited], vec![2]).expect("two amplitudes")
    }
}

/// Physical inputs of the two-stage protocol.
///
/// Interaction times follow from the dimensionless angles as `t_k = γ_k |α| / Ω_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolConfig {
    pub alpha: Complex64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub omega1: f64,
    pub omega2: f64,
    /// Cavity loss rate.
    pub lambda: f64,
    pub atom1_init: Qubit,
    pub atom2_init: Qubit,
    pub n_max: usize,
}

impl ProtocolConfig {
    /// Unit couplings, no loss, both atoms in `|g⟩`, default Fock cutoff.
    pub fn new(alpha: Complex64, gamma1: f64, gamma2: f64) -> Self {
        Self {
            alpha,
            gamma1,
            gamma2,
            omega1: 1.0,
            omega2: 1.0,
            lambda: 0.0,
            atom1_init: Qubit::GROUND,
            atom2_init: Qubit::GROUND,
            n_max: hilbert::default_n_max(alpha.norm()),
        }
    }

    pub fn with_couplings(mut self, omega1: f64, omega2: f64) -> Self {
        self.omega1 = omega1;
        self.omega2 = omega2;
        self
    }

    pub fn with_loss(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_atoms(mut self, atom1: Qubit, atom2: Qubit) -> Self {
        self.atom1_init = atom1;
        self.atom2_init = atom2;
        self
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.gamma1, self.gamma2, self.omega1, self.omega2, self.lambda, self.alpha.re, self.alpha.im]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidConfig("non-finite parameter".into()));
        }
        if self.gamma1 < 0.0 || self.gamma2 < 0.0 {
            return Err(Error::InvalidConfig(format!("negative angle ({}, {})", self.gamma1, self.gamma2)));
        }
        if self.omega1 <= 0.0 || self.omega2 <= 0.0 {
            return Err(Error::InvalidConfig(format!("couplings must be positive ({}, {})", self.omega1, self.omega2)));
        }
        if self.lambda < 0.0 {
            return Err(Error::InvalidConfig(format!("negative loss rate {}", self.lambda)));
        }
        for (name, q) in [("atom 1", self.atom1_init), ("atom 2", self.atom2_init)] {
            let n = q.ground.norm_sqr() + q.excited.norm_sqr();
            if (n - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidConfig(format!("{name} initial state has norm² {n}")));
            }
        }
        Ok(())
    }

    /// `(t₁, t₂)`
    pub fn interaction_times(&self) -> (f64, f64) {
        let a = self.alpha.norm();
        (self.gamma1 * a / self.omega1, self.gamma2 * a / self.omega2)
    }

    pub fn dims(&self) -> Vec<usize> {
        vec![self.n_max + 1, 2, 2]
    }

    /// `|α⟩ ⊗ |atom 1⟩ ⊗ |atom 2⟩`
    pub fn initial_state(&self) -> Result<StateVector> {
        self.validate()?;
        let field = hilbert::coherent_state(self.alpha, self.n_max)?;
        Ok(field.tensor(&self.atom1_init.to_state()).tensor(&self.atom2_init.to_state()))
    }
}

/// Exact rotating-frame JC propagator for coupling `Ω` and duration `t`.
///
/// Block `n` (1 ≤ n ≤ n_max) acts on `{|n−1,e⟩, |n,g⟩}` as
/// `[[cos θ, −i sin θ], [−i sin θ, cos θ]]` with `θ = Ω√n t`. `|0,g⟩` is invariant and
/// `|n_max,e⟩` has no partner inside the truncation, so it is left unchanged.
#[derive(Clone, Debug)]
pub struct PropagatorBlocks {
    blocks: Vec<[[Complex64; 2]; 2]>,
}

impl PropagatorBlocks {
    pub fn new(omega: f64, t: f64, n_max: usize) -> Self {
        let blocks = (1..=n_max)
            .map(|n| {
                let theta = omega * (n as f64).sqrt() * t;
                let (s, c) = theta.sin_cos();
                let c = Complex64::new(c, 0.0);
                let mis = Complex64::new(0.0, -s);
                [[c, mis], [mis, c]]
            })
            .collect();
        Self { blocks }
    }

    pub fn n_max(&self) -> usize {
        self.blocks.len()
    }

    /// The 2×2 block for photon number `n ≥ 1`.
    pub fn block(&self, n: usize) -> [[Complex64; 2]; 2] {
        self.blocks[n - 1]
    }

    /// Apply to a state whose subsystem 0 is the field and `atom` is a qubit; all
    /// other subsystems are spectators.
    pub fn apply(&self, state: &StateVector, atom: Atom) -> Result<StateVector> {
        let dims = state.dims();
        let q = atom.subsystem();
        if dims.len() <= q || dims[q] != 2 {
            return Err(Error::DimensionMismatch(format!("no qubit at subsystem {q} in dims {dims:?}")));
        }
        if dims[FIELD] != self.n_max() + 1 {
            return Err(Error::DimensionMismatch(format!(
                "field dimension {} but propagator built for n_max = {}",
                dims[FIELD],
                self.n_max()
            )));
        }
        let st = strides(dims);
        let (sf, sq) = (st[FIELD], st[q]);
        let mut out = state.clone();
        let amps = out.amplitudes_mut();
        let src = state.amplitudes();
        for idx in 0..src.len() {
            let n = (idx / sf) % dims[FIELD];
            let qubit = (idx / sq) % 2;
            if qubit != 0 || n == 0 {
                continue;
            }
            // idx = |n, g⟩, partner = |n−1, e⟩
            let partner = idx - sf + sq;
            let b = self.blocks[n - 1];
            let (ue, ug) = (src[partner], src[idx]);
            amps[partner] = b[0][0] * ue + b[0][1] * ug;
            amps[idx] = b[1][0] * ue + b[1][1] * ug;
        }
        Ok(out)
    }
}

/// Evolve `state` for time `t` under the JC coupling of `atom` with strength `omega`.
pub fn jc_step(state: &StateVector, omega: f64, t: f64, atom: Atom) -> Result<StateVector> {
    let n_max = state
        .dims()
        .first()
        .copied()
        .ok_or_else(|| Error::DimensionMismatch("empty dims".into()))?
        .checked_sub(1)
        .ok_or_else(|| Error::DimensionMismatch("zero-dimensional field".into()))?;
    PropagatorBlocks::new(omega, t, n_max).apply(state, atom)
}

/// Closed-system protocol: atom 1 for `t₁`, then atom 2 for `t₂`.
pub fn run_protocol(cfg: &ProtocolConfig) -> Result<StateVector> {
    if cfg.lambda != 0.0 {
        return Err(Error::InvalidConfig(format!(
            "unitary protocol requires lambda = 0 (got {}); use lindblad_run",
            cfg.lambda
        )));
    }
    let psi0 = cfg.initial_state()?;
    let (t1, t2) = cfg.interaction_times();
    let psi1 = jc_step(&psi0, cfg.omega1, t1, Atom::First)?;
    jc_step(&psi1, cfg.omega2, t2, Atom::Second)
}

fn check_protocol_layout(dims: &[usize]) -> Result<()> {
    if dims.len() != 3 || dims[1] != 2 || dims[2] != 2 {
        return Err(Error::DimensionMismatch(format!("expected (field, qubit, qubit) layout, got {dims:?}")));
    }
    Ok(())
}

/// Two-atom state `Tr_field |ψ⟩⟨ψ|`.
pub fn reduced_two_atom(state: &StateVector) -> Result<DensityMatrix> {
    check_protocol_layout(state.dims())?;
    // ρ_a = Mᵀ M̄ with M the (field × 4) amplitude matrix; avoids forming |ψ⟩⟨ψ|
    let amps = state.amplitudes();
    let nf = state.dims()[FIELD];
    let m = hilbert::CMatrix::from_fn(4, 4, |i, j| (0..nf).map(|n| amps[4 * n + i] * amps[4 * n + j].conj()).sum());
    DensityMatrix::new(m, vec![2, 2])
}

/// Field state `Tr_atoms |ψ⟩⟨ψ|`.
pub fn reduced_field(state: &StateVector) -> Result<DensityMatrix> {
    check_protocol_layout(state.dims())?;
    let amps = state.amplitudes();
    let nf = state.dims()[FIELD];
    let m = hilbert::CMatrix::from_fn(nf, nf, |n, k| (0..4).map(|a| amps[4 * n + a] * amps[4 * k + a].conj()).sum());
    DensityMatrix::new(m, vec![nf])
}

/// Normalized atomic factor of `(⟨field| ⊗ 1) |ψ⟩`: the two-atom state carried by the
/// component of `state` whose field matches `field`.
pub fn project_field(state: &StateVector, field: &StateVector) -> Result<StateVector> {
    check_protocol_layout(state.dims())?;
    if field.dims() != [state.dims()[FIELD]] {
        return Err(Error::DimensionMismatch(format!(
            "field state dims {:?} vs joint dims {:?}",
            field.dims(),
            state.dims()
        )));
    }
    let amps = state.amplitudes();
    let f = field.amplitudes();
    let atomic: Vec<Complex64> = (0..4).map(|a| f.iter().enumerate().map(|(n, c)| c.conj() * amps[4 * n + a]).sum()).collect();
    let out = StateVector::new(atomic, vec![2, 2])?;
    if out.norm() < 1e-300 {
        return Err(Error::NotNormalized(0.0));
    }
    Ok(out.normalized())
}

/// Atomic state of the center wave packet: the protocol output projected on the initial
/// coherent state `|α⟩` (where the `+−` and `−+` packets recombine for `γ₁ = γ₂`).
pub fn center_packet_state(state: &StateVector, alpha: Complex64) -> Result<StateVector> {
    let n_max = state.dims()[FIELD] - 1;
    project_field(state, &hilbert::coherent_state(alpha, n_max)?)
}

/// Dense truncated rotating-frame Hamiltonian `Ω (a† σ + a σ†)` for `atom` on the
/// `(field, atom 1, atom 2)` layout. Intended for brute-force cross-checks.
pub fn jc_hamiltonian(n_max: usize, omega: f64, atom: Atom) -> hilbert::CMatrix {
    let a = hilbert::annihilation(n_max + 1);
    let id2 = hilbert::CMatrix::identity(2);
    let mut lower = hilbert::CMatrix::zeros(2, 2);
    lower[(0, 1)] = Complex64::new(1.0, 0.0); // |g⟩⟨e|
    let id_field = hilbert::CMatrix::identity(n_max + 1);
    let sigma = match atom {
        Atom::First => id_field.kron(&lower).kron(&id2),
        Atom::Second => id_field.kron(&id2).kron(&lower),
    };
    let a_full = a.kron(&hilbert::CMatrix::identity(4));
    let coupling = a_full.adjoint().matmul(&sigma);
    (&coupling + &coupling.adjoint()).scale_real(omega)
}

/// Sparse form of the JC Hamiltonian for `atom` on a layout with the field at subsystem 0.
pub(crate) fn jc_hamiltonian_sparse(dims: &[usize], omega: f64, atom: Atom) -> Result<lindblad::SparseOp> {
    let q = atom.subsystem();
    if dims.len() <= q || dims[q] != 2 {
        return Err(Error::DimensionMismatch(format!("no qubit at subsystem {q} in dims {dims:?}")));
    }
    let st = strides(dims);
    let (sf, sq) = (st[FIELD], st[q]);
    let total: usize = dims.iter().product();
    let mut entries = Vec::new();
    for idx in 0..total {
        let n = (idx / sf) % dims[FIELD];
        if (idx / sq) % 2 != 0 || n == 0 {
            continue;
        }
        // ⟨n−1, e| H |n, g⟩ = Ω√n
        let partner = idx - sf + sq;
        let v = Complex64::new(omega * (n as f64).sqrt(), 0.0);
        entries.push((partner, idx, v));
        entries.push((idx, partner, v));
    }
    Ok(lindblad::SparseOp::from_triplets(total, entries))
}
