//! Closed-form large-`|α|` model of the two-stage protocol.
//!
//! Each JC stage splits the coherent field into two rotating, slightly squeezed
//! packets. After both stages the field carries four packets labeled by signs
//! `(r, s)` and rotated by `Γ_rs = r γ₁ + s γ₂`; when `γ₁ = γ₂` the `+−` and `−+`
//! packets coincide with the initial coherent state and their atomic factors
//! interfere. Tracing out the (otherwise orthogonal) field gives the two-atom
//! mixture `ρ_a = ¼(|l⟩⟨l| + 2|c⟩⟨c| + |r⟩⟨r|)`.
//!
//! Photon loss leaves the outer packets alone but damps the coherence between the
//! two contributions to the center packet by the factors `x_k`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::dynamics::Qubit;
use crate::error::{Error, Result};
use crate::hilbert::{self, CMatrix, DensityMatrix, StateVector};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// `arccot` with range `(0, π)`, so that `arccot(−x) = π − arccot(x)`.
fn arccot(x: f64) -> f64 {
    FRAC_PI_2 - x.atan()
}

/// Field packet after a rotation by `γ`: action phase, center and squeezing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PacketParams {
    /// `φ(γ) = (γ/2)|α|² − ½ arctan(γ/4)`
    pub phi: f64,
    /// `α(γ) = α e^{−iγ/2}`
    pub center: Complex64,
    /// `ξ(γ) = arcsinh(γ/4) e^{−i(γ + arccot(γ/4))}`, for `S(ξ) = exp(½(ξ* a² − ξ a†²))`
    pub squeeze: Complex64,
}

impl PacketParams {
    /// `D(α(γ)) S(ξ(γ)) |0⟩` in a Fock space of `n_max + 1` levels (without the phase `e^{−iφ}`).
    pub fn field_state(&self, n_max: usize) -> Result<StateVector> {
        hilbert::squeezed_coherent_state(self.center, self.squeeze, n_max)
    }
}

/// Packet parameters for rotation angle `gamma` starting from `|α⟩`.
///
/// The squeezing phase is `−(γ + arccot(γ/4))`; this is the sign under which
/// `D(α(γ))S(ξ(γ))|0⟩` reproduces the exact polariton branch for the rotation
/// direction `α e^{−iγ/2}`.
pub fn packet_params(gamma: f64, alpha: Complex64) -> PacketParams {
    let a2 = alpha.norm_sqr();
    let phi = 0.5 * gamma * a2 - 0.5 * (gamma / 4.0).atan();
    let center = alpha * cis(-0.5 * gamma);
    let squeeze = if gamma == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::from_polar((gamma / 4.0).asinh(), -(gamma + arccot(gamma / 4.0)))
    };
    PacketParams { phi, center, squeeze }
}

/// One of the four field packets after both stages, with its atomic factor.
#[derive(Clone, Debug, PartialEq)]
pub struct WavePacketTerm {
    pub r: i8,
    pub s: i8,
    /// `Γ_rs = r γ₁ + s γ₂`
    pub gamma: f64,
    pub field: PacketParams,
    /// Normalized product state `½(e^{i(γ₀−rγ₁/2)}|e⟩ + r|g⟩) ⊗ (e^{i(γ₀−Γ/2)}|e⟩ + s|g⟩)`.
    pub atomic: StateVector,
    /// Overall phase `e^{−iφ(Γ_rs)}`.
    pub phase: Complex64,
}

fn qubit(ground: Complex64, excited: Complex64) -> StateVector {
    StateVector::new(vec![ground, excited], vec![2]).expect("two amplitudes")
}

fn sign(x: i8) -> Result<f64> {
    match x {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        _ => Err(Error::InvalidConfig(format!("packet sign must be ±1, got {x}"))),
    }
}

/// The `(r, s)` packet for angles `γ₁, γ₂`. The atomic phase reference is
/// `γ₀ = arg α`.
pub fn sub_wavepacket(r: i8, s: i8, gamma1: f64, gamma2: f64, alpha: Complex64) -> Result<WavePacketTerm> {
    let (rf, sf) = (sign(r)?, sign(s)?);
    let g0 = alpha.arg();
    let big = rf * gamma1 + sf * gamma2;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let a1 = qubit(c(rf * h), cis(g0 - 0.5 * rf * gamma1) * h);
    let a2 = qubit(c(sf * h), cis(g0 - 0.5 * big) * h);
    let field = packet_params(big, alpha);
    Ok(WavePacketTerm { r, s, gamma: big, field, atomic: a1.tensor(&a2), phase: cis(-field.phi) })
}

/// Two-qubit state from per-basis amplitudes in the order `gg, ge, eg, ee`.
fn two_qubit(amps: [Complex64; 4]) -> StateVector {
    StateVector::new(amps.to_vec(), vec![2, 2]).expect("four amplitudes")
}

/// `(|l⟩, |c⟩, |r⟩)` for `γ₁ = γ₂ = γ` and field phase `γ₀`.
pub fn lcr_states(gamma: f64, gamma0: f64) -> (StateVector, StateVector, StateVector) {
    let p = cis(gamma0);
    let pair = |a: Complex64, b: Complex64| {
        let q1 = qubit(c(1.0), a);
        let q2 = qubit(c(1.0), b);
        q1.tensor(&q2).scaled(c(0.5))
    };
    let l = pair(-p * cis(0.5 * gamma), -p * cis(gamma));
    let r = pair(p * cis(-0.5 * gamma), p * cis(-gamma));
    let (sh, ch) = (0.5 * gamma).sin_cos();
    let center = two_qubit([c(-1.0), c(0.0), I * p * sh, p * p * ch]).scaled(c(std::f64::consts::FRAC_1_SQRT_2));
    (l, center, r)
}

/// Distance from `γ` to the nearest multiple of `π`, below which the asymptotic model
/// is flagged as outside its validity range.
pub const SINGULAR_ANGLE_TOL: f64 = 1e-9;

/// True when `γ` sits on a multiple of `π`, where the packets are not separated and
/// the closed form only gives the continuous limit.
pub fn near_singular_angle(gamma: f64) -> bool {
    let k = (gamma / PI).round();
    (gamma - k * PI).abs() < SINGULAR_ANGLE_TOL
}

/// `ρ_a = ¼(|l⟩⟨l| + 2|c⟩⟨c| + |r⟩⟨r|)` with both atoms initially in `|g⟩`.
pub fn asymptotic_rho_a(gamma: f64, gamma0: f64) -> DensityMatrix {
    let (l, cc, r) = lcr_states(gamma, gamma0);
    DensityMatrix::mixture(&[(0.25, &l), (0.5, &cc), (0.25, &r)]).expect("4-dim states")
}

/// Atomic factors of the packets for `γ₁ = γ₂ = γ`, atom 1 in `|g⟩` and atom 2 in an
/// arbitrary initial state, grouped by `Γ_rs` and weighted by their amplitudes.
///
/// Packets with equal `Γ_rs` share a field state and add coherently; distinct packets
/// are asymptotically orthogonal. The squared norms sum to one.
pub fn asymptotic_packet_states(gamma: f64, gamma0: f64, atom2: Qubit) -> Result<Vec<(f64, StateVector)>> {
    let alpha = cis(gamma0);
    let mut groups: Vec<(f64, StateVector)> = Vec::new();
    for r in [1i8, -1] {
        for s in [1i8, -1] {
            let term = sub_wavepacket(r, s, gamma, gamma, alpha)?;
            // stage 2 sends |g⟩₂ into Σ_s s(...)/2 and |e⟩₂ into Σ_s (...)/2
            let weight = c(f64::from(r)) * (atom2.ground * f64::from(s) + atom2.excited) * 0.5;
            let v = term.atomic.clone().scaled(weight * term.phase);
            match groups.iter_mut().find(|(g, _)| (g - term.gamma).abs() < 1e-12) {
                Some((_, acc)) => acc.add_scaled(c(1.0), &v)?,
                None => groups.push((term.gamma, v)),
            }
        }
    }
    Ok(groups)
}

/// Normalized atomic state carried by the center (`Γ = 0`) packet.
pub fn asymptotic_center_state(gamma: f64, gamma0: f64, atom2: Qubit) -> Result<StateVector> {
    let groups = asymptotic_packet_states(gamma, gamma0, atom2)?;
    let (_, v) = groups
        .into_iter()
        .find(|(g, _)| g.abs() < 1e-12)
        .ok_or_else(|| Error::InvalidConfig("no center packet".into()))?;
    if v.norm() < 1e-300 {
        return Err(Error::NotNormalized(0.0));
    }
    Ok(v.normalized())
}

/// Asymptotic two-atom state for `γ₁ = γ₂ = γ` with atom 2 starting in `atom2`.
/// With atom 2 in `|g⟩` this reproduces [`asymptotic_rho_a`].
pub fn asymptotic_rho_a_with_atom2(gamma: f64, gamma0: f64, atom2: Qubit) -> Result<DensityMatrix> {
    let mut mat = CMatrix::zeros(4, 4);
    for (_, v) in asymptotic_packet_states(gamma, gamma0, atom2)? {
        mat.axpy(c(1.0), &CMatrix::outer(v.amplitudes(), v.amplitudes()));
    }
    DensityMatrix::new(mat, vec![2, 2])
}

/// `(|c_A⟩, |c_B⟩)`: the two product-state contributions to the center packet, with
/// `|c⟩ ∝ |c_A⟩ + |c_B⟩`.
pub fn center_components(gamma: f64, gamma0: f64) -> (StateVector, StateVector) {
    let p = cis(gamma0);
    let a = qubit(c(1.0), -p * cis(0.5 * gamma)).tensor(&qubit(c(1.0), p)).scaled(c(0.5));
    let b = qubit(c(1.0), p * cis(-0.5 * gamma)).tensor(&qubit(c(1.0), -p)).scaled(c(0.5));
    (a, b)
}

/// Coherence factor of stage `k`:
/// `x_k = exp(−(λ|α|³/Ω_k)(γ − i(e^{−iγ} − 1)))`.
///
/// `|x_k| = exp(−(λ|α|³/Ω_k)(γ − sin γ))`, so `x_k(0) = 1` and `|x_k|` is
/// non-increasing on `[0, π]`.
pub fn dephasing_factor(lambda: f64, omega: f64, alpha: Complex64, gamma: f64) -> Complex64 {
    let strength = lambda * alpha.norm().powi(3) / omega;
    (-(c(gamma) - I * (cis(-gamma) - 1.0)) * strength).exp()
}

/// Largest `λ|α|/Ω` for which the dephasing model is considered reliable.
pub const DEPHASING_VALIDITY: f64 = 0.1;

/// Decoherence inputs for the two-stage protocol with `γ₁ = γ₂ = γ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DephasingInput {
    pub lambda: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub alpha: Complex64,
    pub gamma: f64,
}

impl DephasingInput {
    /// `y = 2λ|α|³ / (Ω₁ + Ω₂)`
    pub fn y(&self) -> f64 {
        2.0 * self.lambda * self.alpha.norm().powi(3) / (self.omega1 + self.omega2)
    }

    /// `x₁ x₂`, computed as the exact product (not through `y`).
    pub fn x12(&self) -> Complex64 {
        dephasing_factor(self.lambda, self.omega1, self.alpha, self.gamma)
            * dephasing_factor(self.lambda, self.omega2, self.alpha, self.gamma)
    }

    /// Whether `λ|α| ≪ Ω₁, Ω₂` holds to within [`DEPHASING_VALIDITY`].
    pub fn within_validity(&self) -> bool {
        let la = self.lambda * self.alpha.norm();
        la <= DEPHASING_VALIDITY * self.omega1.min(self.omega2)
    }
}

/// `x₁x₂` for equal couplings in terms of `y`: `exp(−2y(γ − i(e^{−iγ} − 1)))`.
pub fn equal_coupling_coherence(y: f64, gamma: f64) -> Complex64 {
    (-(c(gamma) - I * (cis(-gamma) - 1.0)) * (2.0 * y)).exp()
}

/// `ρ_a` with the center term replaced by
/// `ρ_c = ¼(|c_A⟩⟨c_A| + x₁₂|c_A⟩⟨c_B| + x₁₂*|c_B⟩⟨c_A| + |c_B⟩⟨c_B|)`.
pub fn dephased_rho_a(gamma: f64, gamma0: f64, x12: Complex64) -> Result<DensityMatrix> {
    if x12.norm().is_nan() || x12.norm() > 1.0 + 1e-12 {
        return Err(Error::UnphysicalCoherence(x12.norm()));
    }
    let (l, _, r) = lcr_states(gamma, gamma0);
    let (a, b) = center_components(gamma, gamma0);
    let (va, vb) = (a.amplitudes(), b.amplitudes());
    let mut mat = CMatrix::zeros(4, 4);
    mat.axpy(c(0.25), &CMatrix::outer(l.amplitudes(), l.amplitudes()));
    mat.axpy(c(0.25), &CMatrix::outer(r.amplitudes(), r.amplitudes()));
    mat.axpy(c(0.25), &CMatrix::outer(va, va));
    mat.axpy(c(0.25), &CMatrix::outer(vb, vb));
    mat.axpy(x12 * 0.25, &CMatrix::outer(va, vb));
    mat.axpy(x12.conj() * 0.25, &CMatrix::outer(vb, va));
    DensityMatrix::new(mat, vec![2, 2])
}

/// Least-squares estimate of the center coherence `x` in a two-atom state, assuming the
/// form of [`dephased_rho_a`] at angle `γ`.
///
/// Used to compare the exact open-system dynamics with [`DephasingInput::x12`].
pub fn center_coherence(rho: &DensityMatrix, gamma: f64, gamma0: f64) -> Result<Complex64> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!("expected a two-qubit state, got {:?}", rho.dims())));
    }
    let base = dephased_rho_a(gamma, gamma0, c(0.0))?;
    let resid = rho.matrix() - base.matrix();
    let (a, b) = center_components(gamma, gamma0);
    let m = CMatrix::outer(a.amplitudes(), b.amplitudes());
    // ¼(xM + x̄M†) = ¼(u P + v Q) with P = M + M†, Q = i(M − M†)
    let p = &m + &m.adjoint();
    let q = (&m - &m.adjoint()).scale(I);
    let dot = |x: &CMatrix, y: &CMatrix| -> f64 {
        x.as_slice().iter().zip(y.as_slice()).map(|(a, b)| (a.conj() * b).re).sum()
    };
    let (pp, pq, qq) = (dot(&p, &p), dot(&p, &q), dot(&q, &q));
    let (pr, qr) = (4.0 * dot(&p, &resid), 4.0 * dot(&q, &resid));
    let det = pp * qq - pq * pq;
    if det.abs() < 1e-14 {
        return Err(Error::InvalidConfig(format!("center components are degenerate at γ = {gamma}")));
    }
    let u = (qq * pr - pq * qr) / det;
    let v = (pp * qr - pq * pr) / det;
    Ok(Complex64::new(u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{jc_step, Atom};

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn packet_params_identity() {
        let p = packet_params(0.0, cx(4.0, 0.0));
        assert_eq!(p.phi, 0.0);
        assert_eq!(p.center, cx(4.0, 0.0));
        assert_eq!(p.squeeze, cx(0.0, 0.0));
    }

    #[test]
    fn packet_params_at_gamma_four() {
        let p = packet_params(4.0, cx(4.0, 0.0));
        assert!((p.phi - (32.0 - PI / 8.0)).abs() < 1e-12);
        assert!((p.squeeze.norm() - 1f64.asinh()).abs() < 1e-12);
        // −(4 + π/4) mod 2π
        let expect = (-(4.0 + PI / 4.0)).rem_euclid(2.0 * PI);
        assert!((p.squeeze.arg().rem_euclid(2.0 * PI) - expect).abs() < 1e-12);
        for g in [-3.0, -0.5, 0.1, 1.0, 2.5, 6.0] {
            assert!((packet_params(g, cx(4.0, 0.0)).center.norm() - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn squeeze_is_odd_under_reflection() {
        for g in [0.2, 1.0, 3.0] {
            let a = packet_params(g, cx(3.0, 0.0)).squeeze;
            let b = packet_params(-g, cx(3.0, 0.0)).squeeze;
            assert!((a.conj() - b).norm() < 1e-14);
        }
    }

    #[test]
    fn first_stage_matches_two_packets() {
        // exact stage-1 output vs Σ_r r e^{−iφ(rγ)} |field(rγ)⟩ ⊗ (e^{i(γ₀−rγ/2)}|e⟩ + r|g⟩)/2
        let alpha = cx(8.0, 0.0);
        let n_max = 160;
        for gamma in [0.25, 0.5, 1.0, 1.5, 2.0] {
            let field = hilbert::coherent_state(alpha, n_max).unwrap();
            let psi0 = field.tensor(&Qubit::GROUND.to_state());
            let exact = jc_step(&psi0, 1.0, gamma * alpha.norm(), Atom::First).unwrap();
            let mut approx = StateVector::new(vec![cx(0.0, 0.0); exact.len()], exact.dims().to_vec()).unwrap();
            for r in [1.0f64, -1.0] {
                let p = packet_params(r * gamma, alpha);
                let f = p.field_state(n_max).unwrap();
                let atom = qubit(c(r * 0.5), cis(-0.5 * r * gamma) * 0.5);
                approx.add_scaled(cis(-p.phi) * r, &f.tensor(&atom)).unwrap();
            }
            let fid = approx.inner(&exact).unwrap().norm() / approx.norm();
            assert!(fid > 0.995, "γ = {gamma}: fidelity {fid}");
        }
    }

    #[test]
    fn sub_wavepacket_basics() {
        let alpha = cx(4.0, 0.0);
        let t = sub_wavepacket(1, -1, 1.3, 1.3, alpha).unwrap();
        assert_eq!(t.gamma, 0.0);
        assert_eq!(t.field.center, alpha);
        let mut gammas = Vec::new();
        for r in [1, -1] {
            for s in [1, -1] {
                let t = sub_wavepacket(r, s, 0.7, 1.9, alpha).unwrap();
                assert!((t.atomic.norm() - 1.0).abs() < 1e-14);
                gammas.push(t.gamma);
            }
        }
        for i in 0..4 {
            for j in i + 1..4 {
                assert!((gammas[i] - gammas[j]).abs() > 1e-6);
            }
        }
        assert!(sub_wavepacket(0, 1, 1.0, 1.0, alpha).is_err());
    }

    #[test]
    fn sub_packets_are_separated_in_phase_space() {
        let alpha = cx(4.0, 0.0);
        let n_max = 120;
        for (g1, g2) in [(0.45 * PI, 0.75 * PI), (0.3 * PI, 0.8 * PI)] {
            let mut fields = Vec::new();
            for r in [1, -1] {
                for s in [1, -1] {
                    let t = sub_wavepacket(r, s, g1, g2, alpha).unwrap();
                    fields.push(t.field.field_state(n_max).unwrap());
                }
            }
            for i in 0..4 {
                for j in i + 1..4 {
                    let ov = fields[i].inner(&fields[j]).unwrap().norm();
                    assert!(ov < (-2f64).exp(), "({g1}, {g2}) pair {i},{j}: {ov}");
                }
            }
        }
    }

    #[test]
    fn lcr_examples() {
        let (_, cc, _) = lcr_states(1e-12, 0.0);
        let bell = [cx(-1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0)];
        for (a, b) in cc.amplitudes().iter().zip(bell) {
            assert!((a - b * std::f64::consts::FRAC_1_SQRT_2).norm() < 1e-12);
        }
        // separable at γ = π: amplitudes factor as (a|g⟩ + b|e⟩) ⊗ |g⟩
        let g0 = 0.4;
        let (_, cc, _) = lcr_states(PI, g0);
        let v = cc.amplitudes();
        assert!(v[1].norm() < 1e-15 && v[3].norm() < 1e-15);
        assert!((v[2] - I * cis(g0) * std::f64::consts::FRAC_1_SQRT_2).norm() < 1e-15);
        for g in [0.1, 1.0, 2.0, 3.0] {
            let (l, cc, r) = lcr_states(g, 0.3);
            for s in [l, cc, r] {
                assert!((s.norm() - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rho_a_is_physical_with_rank_at_most_three() {
        for g in [0.01, 0.7, PI / 2.0, 2.9] {
            let rho = asymptotic_rho_a(g, 0.2);
            rho.check_physical().unwrap();
            let ev = hilbert::hermitian_eigenvalues(rho.matrix()).unwrap();
            assert!(ev[3].abs() < 1e-12);
        }
    }

    #[test]
    fn purity_limit_at_small_gamma() {
        let p = asymptotic_rho_a(1e-9, 0.0).purity();
        assert!((p - 0.375).abs() < 1e-9);
    }

    #[test]
    fn packet_sum_reproduces_rho_a() {
        for g0 in [0.0, 0.4] {
            for g in [0.3, 1.0, 2.2] {
                let a = asymptotic_rho_a(g, g0);
                let b = asymptotic_rho_a_with_atom2(g, g0, Qubit::GROUND).unwrap();
                assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-14, "γ={g} γ₀={g0}");
            }
        }
        let e = asymptotic_rho_a_with_atom2(1.0, 0.0, Qubit::EXCITED).unwrap();
        e.check_physical().unwrap();
        let center = asymptotic_center_state(0.8, 0.4, Qubit::GROUND).unwrap();
        let (_, cc, _) = lcr_states(0.8, 0.4);
        assert!((center.inner(&cc).unwrap().norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dephasing_factor_examples() {
        assert_eq!(dephasing_factor(0.3, 1.0, cx(2.0, 0.0), 0.0), cx(1.0, 0.0));
        let x = dephasing_factor(1.0, 1.0, cx(1.0, 0.0), PI);
        assert!((x.norm() - (-PI).exp()).abs() < 1e-14);
        let mut last = 1.0;
        for k in 0..=200 {
            let g = PI * k as f64 / 200.0;
            let m = dephasing_factor(0.05, 1.0, cx(3.0, 0.0), g).norm();
            assert!(m <= last + 1e-15);
            last = m;
        }
    }

    #[test]
    fn x12_matches_equal_coupling_form() {
        let d = DephasingInput { lambda: 0.01, omega1: 1.0, omega2: 1.0, alpha: cx(5.0, 0.0), gamma: 0.9 };
        assert!((d.x12() - equal_coupling_coherence(d.y(), d.gamma)).norm() < 1e-14);
        assert!(d.within_validity());
        let unequal = DephasingInput { omega2: 3.0, ..d };
        assert!((unequal.x12() - equal_coupling_coherence(unequal.y(), 0.9)).norm() > 1e-4);
    }

    #[test]
    fn dephased_limits() {
        for g0 in [0.0, 0.9] {
            for g in [0.2, 1.3, 2.8] {
                let a = asymptotic_rho_a(g, g0);
                let b = dephased_rho_a(g, g0, cx(1.0, 0.0)).unwrap();
                assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
            }
        }
        let rho = dephased_rho_a(1.0, 0.0, cx(0.3, -0.2)).unwrap();
        rho.check_physical().unwrap();
        assert!(matches!(dephased_rho_a(1.0, 0.0, cx(1.1, 0.0)), Err(Error::UnphysicalCoherence(_))));
    }

    #[test]
    fn center_coherence_recovers_x() {
        let x = cx(0.6, -0.25);
        let rho = dephased_rho_a(1.1, 0.3, x).unwrap();
        let fit = center_coherence(&rho, 1.1, 0.3).unwrap();
        assert!((fit - x).norm() < 1e-12);
    }

    #[test]
    fn singular_angles() {
        assert!(near_singular_angle(0.0));
        assert!(near_singular_angle(PI));
        assert!(!near_singular_angle(0.999 * PI));
    }
}
