//! Parameter sweeps over the rotation angle `γ = γ₁ = γ₂`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dynamics::{center_packet_state, reduced_two_atom, run_protocol, ProtocolConfig, Qubit};
use crate::entanglement::{entanglement_entropy, entanglement_of_formation, negativity};
use crate::error::Result;
use crate::exec::{try_map_indexed, Execution};
use crate::semiclassics::{asymptotic_center_state, asymptotic_rho_a_with_atom2, dephased_rho_a, equal_coupling_coherence};

/// `steps` uniform points on the open interval `(0, π)`.
pub fn gamma_grid(steps: usize) -> Vec<f64> {
    open_grid(0.0, PI, steps)
}

/// `steps` uniform points strictly inside `(lo, hi)`.
pub fn open_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    let h = (hi - lo) / (steps + 1) as f64;
    (1..=steps).map(|k| lo + h * k as f64).collect()
}

/// `steps` uniform points on the closed interval `[lo, hi]`.
pub fn closed_grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (steps - 1) as f64;
    (0..steps).map(|k| lo + h * k as f64).collect()
}

/// Measures of the two-atom state at one angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRecord {
    pub gamma: f64,
    /// Entanglement entropy of the center packet.
    pub e_c: Option<f64>,
    pub purity: Option<f64>,
    pub e_f: Option<f64>,
    pub negativity: Option<f64>,
}

/// Closed-form model at `γ`.
pub fn asymptotic_record(gamma: f64, gamma0: f64, atom2: Qubit) -> Result<SweepRecord> {
    let rho = asymptotic_rho_a_with_atom2(gamma, gamma0, atom2)?;
    let center = asymptotic_center_state(gamma, gamma0, atom2)?;
    Ok(SweepRecord {
        gamma,
        e_c: Some(entanglement_entropy(&center)?),
        purity: Some(rho.purity()),
        e_f: Some(entanglement_of_formation(&rho)?),
        negativity: Some(negativity(&rho)?),
    })
}

/// Exact unitary protocol for `cfg` with `γ₁ = γ₂ = γ`.
pub fn exact_record(cfg: &ProtocolConfig, gamma: f64) -> Result<SweepRecord> {
    let cfg = ProtocolConfig { gamma1: gamma, gamma2: gamma, ..cfg.clone() };
    let psi = run_protocol(&cfg)?;
    let rho = reduced_two_atom(&psi)?;
    let center = center_packet_state(&psi, cfg.alpha)?;
    Ok(SweepRecord {
        gamma,
        e_c: Some(entanglement_entropy(&center)?),
        purity: Some(rho.purity()),
        e_f: Some(entanglement_of_formation(&rho)?),
        negativity: Some(negativity(&rho)?),
    })
}

pub fn sweep_asymptotic(grid: &[f64], gamma0: f64, atom2: Qubit, exec: Execution) -> Result<Vec<SweepRecord>> {
    try_map_indexed(exec, grid.len(), |i| asymptotic_record(grid[i], gamma0, atom2))
}

/// Exact sweep; `cfg.gamma1` and `cfg.gamma2` are overwritten at every point.
pub fn sweep_exact(cfg: &ProtocolConfig, grid: &[f64], exec: Execution) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    try_map_indexed(exec, grid.len(), |i| exact_record(cfg, grid[i]))
}

/// `E_f` of the dephased model with equal couplings at decoherence strength `y`.
pub fn dephased_eof(y: f64, gamma: f64, gamma0: f64) -> Result<f64> {
    let rho = dephased_rho_a(gamma, gamma0, equal_coupling_coherence(y, gamma))?;
    entanglement_of_formation(&rho)
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
pub fn golden_max(mut f: impl FnMut(f64) -> Result<f64>, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    while hi - lo > tol {
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a)?;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b)?;
        }
    }
    Ok(if fa >= fb { (a, fa) } else { (b, fb) })
}

/// Grid argmax of `f` over `grid`, refined by golden section between the neighbors.
pub fn refined_argmax(grid: &[f64], values: &[f64], f: impl FnMut(f64) -> Result<f64>, tol: f64) -> Result<(f64, f64)> {
    let (k, _) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty grid");
    let lo = grid[k.saturating_sub(1)];
    let hi = grid[(k + 1).min(grid.len() - 1)];
    let (g, v) = golden_max(f, lo, hi, tol)?;
    Ok(if v >= values[k] { (g, v) } else { (grid[k], values[k]) })
}

/// Location and height of the `E_f` maximum of the dephased model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecoherenceMaximum {
    pub y: f64,
    pub gamma_star: f64,
    pub e_f_max: f64,
}

/// Number of coarse points scanned before refinement.
const DECOHERENCE_SCAN: usize = 1500;

/// Maximum over `γ ∈ (0, π)` of the dephased `E_f` at strength `y`.
///
/// For large `y` the maximum sits near `1/y`, so the scan is restricted to
/// `(0, min(π, 6/y))`.
pub fn decoherence_maximum(y: f64, gamma0: f64) -> Result<DecoherenceMaximum> {
    let hi = if y > 6.0 / PI { 6.0 / y } else { PI };
    let grid = open_grid(0.0, hi, DECOHERENCE_SCAN);
    let values = grid.iter().map(|&g| dephased_eof(y, g, gamma0)).collect::<Result<Vec<_>>>()?;
    let (gamma_star, e_f_max) = refined_argmax(&grid, &values, |g| dephased_eof(y, g, gamma0), 1e-10)?;
    Ok(DecoherenceMaximum { y, gamma_star, e_f_max })
}

pub fn decoherence_maxima(ys: &[f64], gamma0: f64, exec: Execution) -> Result<Vec<DecoherenceMaximum>> {
    try_map_indexed(exec, ys.len(), |i| decoherence_maximum(ys[i], gamma0))
}

/// Largest exact-vs-asymptotic deviations over a grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Deviation {
    pub sup_e_f: f64,
    pub gamma_e_f: f64,
    pub sup_negativity: f64,
    pub gamma_negativity: f64,
}

/// Sup-norm distance between exact and asymptotic `E_f` and negativity curves.
pub fn exact_vs_asymptotic(cfg: &ProtocolConfig, grid: &[f64], exec: Execution) -> Result<Deviation> {
    let exact = sweep_exact(cfg, grid, exec)?;
    let gamma0 = cfg.alpha.arg();
    let asym = sweep_asymptotic(grid, gamma0, cfg.atom2_init, exec)?;
    let mut d = Deviation { sup_e_f: 0.0, gamma_e_f: grid[0], sup_negativity: 0.0, gamma_negativity: grid[0] };
    for (e, a) in exact.iter().zip(&asym) {
        let de = (e.e_f.unwrap_or(0.0) - a.e_f.unwrap_or(0.0)).abs();
        if de > d.sup_e_f {
            d.sup_e_f = de;
            d.gamma_e_f = e.gamma;
        }
        let dn = (e.negativity.unwrap_or(0.0) - a.negativity.unwrap_or(0.0)).abs();
        if dn > d.sup_negativity {
            d.sup_negativity = dn;
            d.gamma_negativity = e.gamma;
        }
    }
    Ok(d)
}

/// Convenience: protocol configuration for real `α` with default cutoff.
pub fn real_alpha_config(alpha: f64) -> ProtocolConfig {
    ProtocolConfig::new(Complex64::new(alpha, 0.0), 0.0, 0.0)
}
