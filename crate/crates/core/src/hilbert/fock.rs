//! Single-mode Fock-space states and operators.
//!
//! Conventions: `ħ = 1`, `a = (q + i p)/√2`, so a coherent state `|α⟩` sits at
//! `(q, p) = √2 (Re α, Im α)` and the vacuum has `var(q) = var(p) = 1/2`.

use num_complex::Complex64;

use super::matrix::CMatrix;
use super::StateVector;
use crate::error::{Error, Result};

/// Largest truncated tail mass any state constructor accepts.
pub const TAIL_TOLERANCE: f64 = 1e-10;

/// Default cutoff `⌈|α|² + 10|α| + 20⌉`.
pub fn default_n_max(alpha_abs: f64) -> usize {
    (alpha_abs * alpha_abs + 10.0 * alpha_abs + 20.0).ceil() as usize
}

/// `ln k!` for `k = 0..len`.
pub(crate) fn log_factorials(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len.max(1));
    out.push(0.0);
    for k in 1..len {
        out.push(out[k - 1] + (k as f64).ln());
    }
    out
}

/// Poisson weight `e^{-x} x^n / n!` in log form.
fn ln_poisson(x: f64, n: usize, ln_fact: f64) -> f64 {
    -x + n as f64 * x.ln() - ln_fact
}

/// Probability mass of a coherent state above the cutoff.
pub fn coherent_tail_mass(alpha_abs: f64, n_max: usize) -> f64 {
    if alpha_abs == 0.0 {
        return 0.0;
    }
    let x = alpha_abs * alpha_abs;
    let mut ln_fact: f64 = (1..=n_max + 1).map(|k| (k as f64).ln()).sum();
    let mut tail = 0.0;
    let mut n = n_max + 1;
    loop {
        let term = ln_poisson(x, n, ln_fact).exp();
        tail += term;
        // past the Poisson mode the terms decay monotonically
        if n as f64 > x && term < 1e-30 * tail.max(1e-300) {
            break;
        }
        if n > n_max + 100_000 {
            break;
        }
        n += 1;
        ln_fact += (n as f64).ln();
    }
    tail
}

/// `|α⟩` truncated to `n_max` photons and renormalized.
pub fn coherent_state(alpha: Complex64, n_max: usize) -> Result<StateVector> {
    let tail = coherent_tail_mass(alpha.norm(), n_max);
    if tail >= TAIL_TOLERANCE {
        return Err(Error::CutoffTooSmall { n_max, tail });
    }
    let amps = coherent_amplitudes(alpha, n_max + 1);
    StateVector::new(amps, vec![n_max + 1]).map(StateVector::normalized)
}

/// Raw (untruncated-normalization) amplitudes `e^{-|α|²/2} αⁿ/√n!` for `n < len`.
pub(crate) fn coherent_amplitudes(alpha: Complex64, len: usize) -> Vec<Complex64> {
    let r = alpha.norm();
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    if r == 0.0 {
        out[0] = Complex64::new(1.0, 0.0);
        return out;
    }
    let theta = alpha.arg();
    let lf = log_factorials(len);
    for (n, c) in out.iter_mut().enumerate() {
        let ln_mag = -0.5 * r * r + n as f64 * r.ln() - 0.5 * lf[n];
        *c = Complex64::from_polar(ln_mag.exp(), n as f64 * theta);
    }
    out
}

/// Annihilation operator on `dim` Fock levels.
pub fn annihilation(dim: usize) -> CMatrix {
    let mut a = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Matrix elements `⟨m|D(β)|n⟩` of the untruncated displacement operator for
/// `m < rows`, `n < cols`.
///
/// Uses the associated-Laguerre closed form, evaluated diagonal by diagonal with a
/// rescaled three-term recurrence so large `|β|²` neither overflows nor loses the
/// small entries. The block is exact, not the exponential of a truncated generator.
pub fn displacement_matrix(beta: Complex64, rows: usize, cols: usize) -> CMatrix {
    let mut out = CMatrix::zeros(rows, cols);
    let r = beta.norm();
    if r == 0.0 {
        for i in 0..rows.min(cols) {
            out[(i, i)] = Complex64::new(1.0, 0.0);
        }
        return out;
    }
    let x = r * r;
    let ln_r = r.ln();
    let theta = beta.arg();
    let lf = log_factorials(rows.max(cols) + 1);
    let max_k = rows.max(cols);

    for k in 0..max_k {
        // lower triangle (m = j + k, n = j) and upper triangle (m = j, n = j + k)
        let lower_len = if k < rows { (rows - k).min(cols) } else { 0 };
        let upper_len = if k > 0 && k < cols { (cols - k).min(rows) } else { 0 };
        let len = lower_len.max(upper_len);
        if len == 0 {
            continue;
        }
        let phase_lower = Complex64::from_polar(1.0, k as f64 * theta);
        let phase_upper = Complex64::from_polar(if k % 2 == 0 { 1.0 } else { -1.0 }, -(k as f64) * theta);
        let kf = k as f64;

        let mut prev = 0.0f64;
        let mut cur = 1.0f64; // L_0^k
        let mut ln_scale = 0.0f64;
        for j in 0..len {
            if j > 0 {
                let jf = (j - 1) as f64;
                let next = ((2.0 * jf + 1.0 + kf - x) * cur - (jf + kf) * prev) / (jf + 1.0);
                prev = cur;
                cur = next;
                if cur.abs() > 1e150 {
                    prev *= 1e-150;
                    cur *= 1e-150;
                    ln_scale += 150.0 * std::f64::consts::LN_10;
                }
            }
            let ln_mag = 0.5 * (lf[j] - lf[j + k]) + kf * ln_r - 0.5 * x + ln_scale;
            let val = cur * ln_mag.exp();
            if j < lower_len {
                out[(j + k, j)] = phase_lower * val;
            }
            if j < upper_len {
                out[(j, j + k)] = phase_upper * val;
            }
        }
    }
    out
}

/// Dense squeeze operator `exp(½(ξ* a² − ξ a†²))` on `dim` levels.
pub fn squeeze_matrix(xi: Complex64, dim: usize) -> CMatrix {
    let a = annihilation(dim);
    let a2 = a.matmul(&a);
    let ad2 = a2.adjoint();
    let mut gen = a2.scale(0.5 * xi.conj());
    gen.axpy(-0.5 * xi, &ad2);
    gen.expm()
}

/// Working dimension large enough that `S(ξ)|0⟩` is captured to ~1e-16.
fn squeeze_working_dim(r: f64, n_max: usize) -> usize {
    let needed = if r > 0.0 {
        // squeezed-vacuum weights fall off like tanh(r)^n
        let decay = -r.tanh().ln();
        (37.0 / decay).ceil() as usize
    } else {
        0
    };
    n_max.max(needed) + 40
}

/// `D(α) S(ξ) |0⟩` (squeeze first, then displace) in the truncated basis.
pub fn squeezed_coherent_state(alpha: Complex64, xi: Complex64, n_max: usize) -> Result<StateVector> {
    if xi.norm() == 0.0 {
        return coherent_state(alpha, n_max);
    }
    let work = squeeze_working_dim(xi.norm(), n_max);
    let s = squeeze_matrix(xi, work);
    let vac_squeezed = s.column(0);
    let d = displacement_matrix(alpha, n_max + 1, work);
    let amps = d.matvec(&vac_squeezed);
    let kept: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    let tail = (1.0 - kept).max(0.0);
    if tail >= TAIL_TOLERANCE {
        return Err(Error::CutoffTooSmall { n_max, tail });
    }
    StateVector::new(amps, vec![n_max + 1]).map(StateVector::normalized)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mean_photons(s: &StateVector) -> f64 {
        s.amplitudes().iter().enumerate().map(|(n, z)| n as f64 * z.norm_sqr()).sum()
    }

    #[test]
    fn vacuum_coherent_state() {
        let s = coherent_state(c(0.0, 0.0), 5).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert!(s.amplitudes()[1..].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn coherent_mean_photon_number() {
        let s = coherent_state(c(4.0, 0.0), 80).unwrap();
        assert!((mean_photons(&s) - 16.0).abs() < 1e-8);
    }

    #[test]
    fn coherent_amplitude_ratio() {
        // c2/c0 = α²/√2! = 4/√2 = 2√2 for α = 2
        let s = coherent_state(c(2.0, 0.0), 40).unwrap();
        let ratio = s.amplitudes()[2] / s.amplitudes()[0];
        assert!((ratio - c(2.0 * 2f64.sqrt(), 0.0)).norm() < 1e-13);
    }

    #[test]
    fn cutoff_too_small_is_rejected() {
        let err = coherent_state(c(4.0, 0.0), 20).unwrap_err();
        assert!(matches!(err, Error::CutoffTooSmall { n_max: 20, .. }));
        assert!(coherent_state(c(4.0, 0.0), default_n_max(4.0)).is_ok());
    }

    #[test]
    fn default_cutoff_satisfies_tail_bound() {
        for a in [0.5, 1.0, 2.0, 4.0, 8.0, 16.0] {
            assert!(coherent_tail_mass(a, default_n_max(a)) < TAIL_TOLERANCE);
        }
    }

    #[test]
    fn displacement_first_column_is_coherent_state() {
        let beta = c(1.3, -0.4);
        let d = displacement_matrix(beta, 30, 5);
        let coh = coherent_amplitudes(beta, 30);
        for m in 0..30 {
            assert!((d[(m, 0)] - coh[m]).norm() < 1e-15);
        }
    }

    #[test]
    fn displacement_matches_truncated_exponential_in_the_interior() {
        // exp(β a† − β* a) in a large space agrees with the exact block far from the edge
        let beta = c(0.9, 0.6);
        let big = 90;
        let a = annihilation(big);
        let mut gen = a.adjoint().scale(beta);
        gen.axpy(-beta.conj(), &a);
        let d_num = gen.expm();
        let d = displacement_matrix(beta, 20, 20);
        for m in 0..20 {
            for n in 0..20 {
                assert!((d[(m, n)] - d_num[(m, n)]).norm() < 1e-12, "({m},{n})");
            }
        }
    }

    #[test]
    fn displacement_is_finite_for_large_arguments() {
        let d = displacement_matrix(c(30.0, 12.0), 200, 200);
        assert!(d.as_slice().iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        // high-precision reference: |⟨199|D|199⟩| = 1.1255e-20 is the largest entry
        let corner = d[(199, 199)].norm();
        assert!((corner / 1.1255e-20 - 1.0).abs() < 1e-4, "{corner}");
        assert!(d.max_abs() < 2e-20);
    }

    #[test]
    fn squeeze_zero_is_coherent() {
        let a = coherent_state(c(3.0, 1.0), 80).unwrap();
        let b = squeezed_coherent_state(c(3.0, 1.0), c(0.0, 0.0), 80).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}
