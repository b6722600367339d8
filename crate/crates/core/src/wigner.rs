//! Wigner function of a single-mode field state on a rectangular `(q, p)` grid.
//!
//! `W(q, p) = (1/π) Tr[ρ D(β) Π D†(β)] = (1/π) Tr[ρ D(2β) Π]` with `β = (q + ip)/√2`
//! and `Π` the photon-number parity. With this normalization `∫ W dq dp = 1` and the
//! vacuum peaks at `1/π`.

use std::f64::consts::{PI, SQRT_2};
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::hilbert::{displacement_matrix, DensityMatrix};

/// Largest boundary `|W|` before a grid is reported as too small.
pub const BOUNDARY_TOL: f64 = 1e-4;

/// Variance of the Gaussian used by [`count_packets`] to wash out interference fringes.
pub const PACKET_SMOOTHING_VARIANCE: f64 = 0.25;

/// Uniform axes `q ∈ [q_min, q_max]`, `p ∈ [p_min, p_max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nq: usize,
    pub np: usize,
}

impl GridSpec {
    pub fn square(half_width: f64, points: usize) -> Self {
        Self { q_min: -half_width, q_max: half_width, p_min: -half_width, p_max: half_width, nq: points, np: points }
    }

    /// 201×201 over `±(|α|√2 + 6)`.
    pub fn for_alpha(alpha_abs: f64) -> Self {
        Self::square(alpha_abs * SQRT_2 + 6.0, 201)
    }

    fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        if n == 1 {
            return vec![lo];
        }
        let step = (hi - lo) / (n - 1) as f64;
        (0..n).map(|i| lo + step * i as f64).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.nq < 3 || self.np < 3 {
            return Err(Error::InvalidConfig(format!("grid needs at least 3x3 points, got {}x{}", self.nq, self.np)));
        }
        let ok = [self.q_min, self.q_max, self.p_min, self.p_max].iter().all(|x| x.is_finite())
            && self.q_max > self.q_min
            && self.p_max > self.p_min;
        if !ok {
            return Err(Error::InvalidConfig("grid bounds must be finite and increasing".into()));
        }
        Ok(())
    }
}

/// Sampled Wigner function. `values[i * p_axis.len() + j]` is `W(q_i, p_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerGrid {
    pub q_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    pub values: Vec<f64>,
    pub cell_area: f64,
    /// Largest imaginary part discarded while evaluating the trace (times `1/π`).
    pub max_imag_residue: f64,
}

impl WignerGrid {
    pub fn nq(&self) -> usize {
        self.q_axis.len()
    }

    pub fn np(&self) -> usize {
        self.p_axis.len()
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.np() + j]
    }

    /// `Σ W · cell_area`
    pub fn normalization(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_area
    }

    /// Largest `|W|` on the grid edge.
    pub fn boundary_max(&self) -> f64 {
        let (nq, np) = (self.nq(), self.np());
        let mut m = 0.0f64;
        for i in 0..nq {
            for j in 0..np {
                if i == 0 || j == 0 || i == nq - 1 || j == np - 1 {
                    m = m.max(self.at(i, j).abs());
                }
            }
        }
        m
    }

    /// True when the state visibly extends past the grid.
    pub fn grid_too_small(&self) -> bool {
        self.boundary_max() > BOUNDARY_TOL
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `(q, p, w)` of every strict local maximum above `threshold`, in grid order.
    pub fn peaks(&self, threshold: f64) -> Vec<(f64, f64, f64)> {
        let (nq, np) = (self.nq(), self.np());
        let mut out = Vec::new();
        for i in 1..nq.saturating_sub(1) {
            for j in 1..np.saturating_sub(1) {
                let v = self.at(i, j);
                if v <= threshold {
                    continue;
                }
                let is_max = (-1i64..=1)
                    .flat_map(|a| (-1i64..=1).map(move |b| (a, b)))
                    .filter(|&d| d != (0, 0))
                    .all(|(a, b)| v > self.at((i as i64 + a) as usize, (j as i64 + b) as usize));
                if is_max {
                    out.push((self.q_axis[i], self.p_axis[j], v));
                }
            }
        }
        out
    }

    /// Writes `q,p,w` rows in grid order (q outer, p inner), 12 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "q,p,w")?;
        for (i, q) in self.q_axis.iter().enumerate() {
            for (j, p) in self.p_axis.iter().enumerate() {
                writeln!(w, "{:.11e},{:.11e},{:.11e}", q, p, self.at(i, j))?;
            }
        }
        Ok(())
    }
}

/// `W(q, p)` for a single-mode state, evaluated row by row.
pub fn wigner_map(rho: &DensityMatrix, spec: &GridSpec, exec: Execution) -> Result<WignerGrid> {
    spec.validate()?;
    if rho.dims().len() != 1 {
        return Err(Error::DimensionMismatch(format!("expected a single-mode state, got dims {:?}", rho.dims())));
    }
    let dim = rho.dim();
    let m = rho.matrix();
    let q_axis = GridSpec::axis(spec.q_min, spec.q_max, spec.nq);
    let p_axis = GridSpec::axis(spec.p_min, spec.p_max, spec.np);

    let rows = map_indexed(exec, q_axis.len(), |i| {
        let q = q_axis[i];
        let mut vals = Vec::with_capacity(p_axis.len());
        let mut imag = 0.0f64;
        for &p in &p_axis {
            let two_beta = Complex64::new(q, p) * SQRT_2;
            let d = displacement_matrix(two_beta, dim, dim);
            // Σ_n (−1)^n Σ_m ρ_nm D_mn
            let mut acc = Complex64::new(0.0, 0.0);
            for n in 0..dim {
                let mut s = Complex64::new(0.0, 0.0);
                let row = m.row(n);
                for (mm, r) in row.iter().enumerate() {
                    s += r * d[(mm, n)];
                }
                if n % 2 == 0 {
                    acc += s;
                } else {
                    acc -= s;
                }
            }
            vals.push(acc.re / PI);
            imag = imag.max(acc.im.abs() / PI);
        }
        (vals, imag)
    });

    let mut values = Vec::with_capacity(q_axis.len() * p_axis.len());
    let mut max_imag_residue = 0.0f64;
    for (v, im) in rows {
        values.extend(v);
        max_imag_residue = max_imag_residue.max(im);
    }
    let dq = q_axis[1] - q_axis[0];
    let dp = p_axis[1] - p_axis[0];
    Ok(WignerGrid { q_axis, p_axis, values, cell_area: dq * dp, max_imag_residue })
}

/// Number of strict 8-neighbor local maxima of `W` above `threshold` (edges excluded).
///
/// # Panics
/// If `threshold` is not positive.
pub fn count_peaks(grid: &WignerGrid, threshold: f64) -> usize {
    assert!(threshold > 0.0, "peak threshold must be positive");
    grid.peaks(threshold).len()
}

fn gaussian_kernel(step: f64, variance: f64) -> Vec<f64> {
    let sigma = variance.sqrt();
    let radius = (4.0 * sigma / step).ceil() as i64;
    let mut k: Vec<f64> = (-radius..=radius).map(|i| (-(i as f64 * step).powi(2) / (2.0 * variance)).exp()).collect();
    let total: f64 = k.iter().sum();
    k.iter_mut().for_each(|x| *x /= total);
    k
}

fn convolve_same(src: &[f64], kernel: &[f64]) -> Vec<f64> {
    let r = (kernel.len() / 2) as i64;
    let n = src.len() as i64;
    (0..n)
        .map(|i| {
            kernel
                .iter()
                .enumerate()
                .filter_map(|(k, w)| {
                    let j = i + k as i64 - r;
                    (0..n).contains(&j).then(|| w * src[j as usize])
                })
                .sum()
        })
        .collect()
}

/// `W` convolved with a normalized Gaussian of the given variance in `q` and `p`
/// (zero beyond the grid edges).
pub fn gaussian_smoothed(grid: &WignerGrid, variance: f64) -> WignerGrid {
    let (nq, np) = (grid.nq(), grid.np());
    let kq = gaussian_kernel(grid.q_axis[1] - grid.q_axis[0], variance);
    let kp = gaussian_kernel(grid.p_axis[1] - grid.p_axis[0], variance);
    let mut tmp = vec![0.0; nq * np];
    for i in 0..nq {
        let row = convolve_same(&grid.values[i * np..(i + 1) * np], &kp);
        tmp[i * np..(i + 1) * np].copy_from_slice(&row);
    }
    let mut values = vec![0.0; nq * np];
    for j in 0..np {
        let col: Vec<f64> = (0..nq).map(|i| tmp[i * np + j]).collect();
        for (i, v) in convolve_same(&col, &kq).into_iter().enumerate() {
            values[i * np + j] = v;
        }
    }
    WignerGrid { values, ..grid.clone() }
}

/// Number of localized packets: peaks of the map smoothed with
/// [`PACKET_SMOOTHING_VARIANCE`], which suppresses the oscillating interference
/// fringes between packets while keeping each packet's maximum.
pub fn count_packets(grid: &WignerGrid, threshold: f64) -> usize {
    count_peaks(&gaussian_smoothed(grid, PACKET_SMOOTHING_VARIANCE), threshold)
}
