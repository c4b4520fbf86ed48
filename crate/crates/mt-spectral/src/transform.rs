//! Fast coefficient transforms on the tan-mapped grid, the discrete inner
//! product, and slow quadrature oracles used to test everything else.
//!
//! With `x_k = tan(theta_k/2) / 2` on `2N` equispaced angles, the MT
//! coefficient integrals become plain Fourier sums: [`analyze`] computes all
//! `2N` coefficients with a single FFT and is *exact* (to roundoff) for
//! functions in the span of `phi_{-N} .. phi_{N-1}`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::basis::{i_pow, BasisSpec};
use crate::error::{Error, Result};
use crate::gauss_hermite::GaussHermite;
use crate::laguerre::hermite_function;

/// Default midpoint count of the slow quadrature oracle.
pub const DEFAULT_QUAD_POINTS: usize = 4096;

const FRAC_PI_4: f64 = std::f64::consts::FRAC_PI_4;
const PI: f64 = std::f64::consts::PI;

/// The `2N`-point tan-mapped sampling grid.
///
/// Angles sit at midpoints, `theta_k = -pi + (k - 1/2) pi / N` for
/// `k = 1..2N`, so no sample ever lands on `theta = +-pi` (`x = inf`);
/// the quadrature weight at `x_k` is `pi/(4N) (1 + 4 x_k^2)`.
#[derive(Debug, Clone)]
pub struct MappedGrid {
    n_half: usize,
    theta: Vec<f64>,
    x: Vec<f64>,
    weight: Vec<f64>,
}

/// Build the mapped grid with `2N` points.
pub fn make_grid(n: usize) -> Result<MappedGrid> {
    if n < 1 {
        return Err(Error::Parameter("grid needs N >= 1".into()));
    }
    let nf = n as f64;
    let mut theta = Vec::with_capacity(2 * n);
    let mut x = Vec::with_capacity(2 * n);
    let mut weight = Vec::with_capacity(2 * n);
    for k in 1..=2 * n {
        let t = -PI + (k as f64 - 0.5) * PI / nf;
        let xi = 0.5 * (0.5 * t).tan();
        theta.push(t);
        x.push(xi);
        weight.push(FRAC_PI_4 / nf * (1.0 + 4.0 * xi * xi));
    }
    Ok(MappedGrid {
        n_half: n,
        theta,
        x,
        weight,
    })
}

impl MappedGrid {
    /// Half-size `N`; the grid has `2N` points.
    pub fn n_half(&self) -> usize {
        self.n_half
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn weight(&self) -> &[f64] {
        &self.weight
    }

    /// Coefficient window `[-N, N-1]` addressed by transforms on this grid.
    pub fn window(&self) -> (i64, i64) {
        (-(self.n_half as i64), self.n_half as i64 - 1)
    }
}

/// A finite coefficient vector over a contiguous index window, attached to
/// the basis it expands in.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    spec: BasisSpec,
    n_min: i64,
    coeffs: Vec<Complex64>,
}

impl Expansion {
    pub fn new(spec: BasisSpec, n_min: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        spec.validate()?;
        if coeffs.is_empty() {
            return Err(Error::Window(
                "expansion needs at least one coefficient".into(),
            ));
        }
        if !spec.supports_index(n_min) {
            return Err(Error::Window(format!(
                "index {n_min} is outside the basis index range"
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Parameter("non-finite coefficient".into()));
        }
        Ok(Self {
            spec,
            n_min,
            coeffs,
        })
    }

    /// All-zero expansion over `[n_min, n_min + len - 1]`.
    pub fn zero(spec: BasisSpec, n_min: i64, len: usize) -> Result<Self> {
        Self::new(spec, n_min, vec![Complex64::new(0.0, 0.0); len])
    }

    /// The unit coefficient vector `e_n`.
    pub fn unit(spec: BasisSpec, n: i64) -> Result<Self> {
        Self::new(spec, n, vec![Complex64::new(1.0, 0.0)])
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.spec
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    /// Inclusive window `(n_min, n_max)`.
    pub fn window(&self) -> (i64, i64) {
        (self.n_min, self.n_min + self.coeffs.len() as i64 - 1)
    }

    /// Coefficient at index `n`; zero outside the stored window.
    pub fn coeff(&self, n: i64) -> Complex64 {
        let k = n - self.n_min;
        if k >= 0 && (k as usize) < self.coeffs.len() {
            self.coeffs[k as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(k, &c)| (self.n_min + k as i64, c))
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Restriction to the window `[lo, hi]` (indices outside the stored
    /// window come out zero).
    pub fn truncated(&self, lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Window(format!("empty window [{lo}, {hi}]")));
        }
        let coeffs = (lo..=hi).map(|n| self.coeff(n)).collect();
        Self::new(self.spec.clone(), lo, coeffs)
    }
}

/// Compute all `2N` coefficients `<f, phi_n>_N`, `n = -N .. N-1`, with one
/// FFT of the modified samples `f(x_k)(1 - 2i x_k)`:
///
/// ```text
/// <f, phi_n>_N = (-i)^n sqrt(pi/2) (2N)^{-1} sum_k f(x_k)(1 - 2i x_k) e^{-i n theta_k}.
/// ```
///
/// For `f` in the span of `phi_{-N} .. phi_{N-1}` these equal the continuous
/// coefficients `<f, phi_n>` exactly.
pub fn analyze(f: impl Fn(f64) -> Complex64, grid: &MappedGrid) -> Expansion {
    let n = grid.n_half;
    let len = 2 * n;
    let mut buf: Vec<Complex64> = grid
        .x
        .iter()
        .map(|&x| f(x) * Complex64::new(1.0, -2.0 * x))
        .collect();

    FftPlanner::new().plan_fft_forward(len).process(&mut buf);

    // theta_k = phi0 + (k-1) pi/N with phi0 = -pi + pi/(2N), so bin m of the
    // DFT carries e^{-i n phi0} relative to the coefficient sum.
    let scale = (PI / 2.0).sqrt() / len as f64;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
    for (slot, item) in coeffs.iter_mut().enumerate() {
        let idx = slot as i64 - n as i64; // n in [-N, N-1]
        let bin = idx.rem_euclid(len as i64) as usize;
        let phase = -(idx as f64) * PI / (2.0 * n as f64);
        *item = i_pow(idx) * Complex64::from_polar(scale, phase) * buf[bin];
    }
    Expansion {
        spec: BasisSpec::Mt,
        n_min: -(n as i64),
        coeffs,
    }
}

/// Evaluate the partial sum `sum_n c_n phi_n(x)` pointwise.
pub fn synthesize(e: &Expansion, x: f64) -> Complex64 {
    e.iter().map(|(n, c)| c * e.spec.eval(n, x)).sum()
}

/// Evaluate an MT expansion at every grid point with one inverse FFT.
///
/// Requires the window to fit in `[-N, N-1]`; agrees with pointwise
/// [`synthesize`] to roundoff.
pub fn synthesize_on_grid(e: &Expansion, grid: &MappedGrid) -> Result<Vec<Complex64>> {
    if *e.basis() != BasisSpec::Mt {
        return Err(Error::BasisMismatch(
            "batched synthesis is implemented for the MT basis".into(),
        ));
    }
    let n = grid.n_half;
    let len = 2 * n;
    let (lo, hi) = e.window();
    let (glo, ghi) = grid.window();
    if lo < glo || hi > ghi {
        return Err(Error::Window(format!(
            "expansion window [{lo}, {hi}] exceeds grid window [{glo}, {ghi}]"
        )));
    }

    let mut spectrum = vec![Complex64::new(0.0, 0.0); len];
    let phi0 = -PI + PI / (2.0 * n as f64);
    for (idx, c) in e.iter() {
        let bin = idx.rem_euclid(len as i64) as usize;
        spectrum[bin] = c * i_pow(idx) * Complex64::from_polar(1.0, idx as f64 * phi0);
    }
    FftPlanner::new()
        .plan_fft_inverse(len)
        .process(&mut spectrum);

    let amp = (2.0 / PI).sqrt();
    Ok(grid
        .theta
        .iter()
        .zip(spectrum)
        .map(|(&t, s)| s * Complex64::from_polar(amp * (0.5 * t).cos(), 0.5 * t))
        .collect())
}

/// The discrete inner product `<f, g>_N` of the mapped grid,
/// `pi/(4N) sum_k f(x_k) conj(g(x_k)) (1 + 4 x_k^2)`.
pub fn discrete_inner_product(
    f: impl Fn(f64) -> Complex64,
    g: impl Fn(f64) -> Complex64,
    grid: &MappedGrid,
) -> Complex64 {
    grid.x
        .iter()
        .zip(&grid.weight)
        .map(|(&x, &w)| w * f(x) * g(x).conj())
        .sum()
}

/// Nodes and weights of the slow line quadrature: the tangent substitution
/// followed by two sine gradings of the angle,
/// `theta = S(S(u))`, `S(v) = pi sin(v/2)`, sampled at `m` midpoints.
///
/// The grading flattens the integrand at `theta = +-pi`, so weight factors
/// like `cos^alpha(theta/2)` with fractional `alpha` no longer spoil the
/// spectral accuracy of the midpoint rule.
pub(crate) fn line_quadrature(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::with_capacity(m);
    let mut ws = Vec::with_capacity(m);
    let step = 2.0 * PI / m as f64;
    for k in 0..m {
        let u = -PI + (k as f64 + 0.5) * step;
        let s1 = PI * (0.5 * u).sin();
        let theta = PI * (0.5 * s1).sin();
        let dtheta = (0.5 * PI) * (0.5 * s1).cos() * (0.5 * PI) * (0.5 * u).cos();
        let x = 0.5 * (0.5 * theta).tan();
        xs.push(x);
        ws.push(step * dtheta * 0.25 * (1.0 + 4.0 * x * x));
    }
    (xs, ws)
}

/// Slow quadrature oracle for `integral f(x) conj(g(x)) dx` over the real
/// line, spectrally accurate for integrands that decay at least like
/// `x^-2` (true for products of basis functions).
pub fn inner_product_quadrature(
    f: impl Fn(f64) -> Complex64,
    g: impl Fn(f64) -> Complex64,
    m: usize,
) -> Complex64 {
    let (xs, ws) = line_quadrature(m);
    xs.iter()
        .zip(&ws)
        .map(|(&x, &w)| w * f(x) * g(x).conj())
        .sum()
}

/// Largest entrywise deviation of the quadrature Gram matrix
/// `<phi_j, phi_k>` from the identity over the index window.
pub fn orthonormality_residual(spec: &BasisSpec, n_min: i64, n_max: i64, m: usize) -> Result<f64> {
    spec.validate()?;
    if n_min > n_max || !spec.supports_index(n_min) {
        return Err(Error::Window(format!(
            "invalid window [{n_min}, {n_max}] for this basis"
        )));
    }
    let (xs, ws) = line_quadrature(m);
    let count = (n_max - n_min + 1) as usize;
    // Value table: one row per basis index.
    let table: Vec<Vec<Complex64>> = (0..count)
        .map(|j| {
            let n = n_min + j as i64;
            xs.iter().map(|&x| spec.eval(n, x)).collect()
        })
        .collect();

    let mut worst = 0.0f64;
    for j in 0..count {
        for k in j..count {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &w) in ws.iter().enumerate() {
                acc += w * table[j][i] * table[k][i].conj();
            }
            let target = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((acc - target).norm());
        }
    }
    Ok(worst)
}

/// Expansion of `f` in the first `n` twisted Hermite functions with
/// modulation `alpha`, using Gauss-Hermite quadrature with
/// `max(2n + 64, 128)` nodes.
pub fn hermite_analyze(f: impl Fn(f64) -> Complex64, n: usize, alpha: f64) -> Result<Expansion> {
    if n == 0 {
        return Err(Error::Parameter("need at least one coefficient".into()));
    }
    let m = (2 * n + 64).max(128);
    let rule = GaussHermite::new(m)?;

    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let sample = f(x) * w * Complex64::from_polar(1.0, -alpha * x);
        if sample == Complex64::new(0.0, 0.0) {
            continue;
        }
        // conj(phi_k) = (-1)^k e^{-i alpha x} psi_k(x); run the psi
        // recurrence once per node.
        let mut prev = 0.0f64;
        let mut cur = hermite_function(0, x);
        let mut sign = 1.0f64;
        for (k, slot) in coeffs.iter_mut().enumerate() {
            *slot += sample * (sign * cur);
            let kf = k as f64;
            let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
            prev = cur;
            cur = next;
            sign = -sign;
        }
    }
    Expansion::new(BasisSpec::ShiftedHermite { alpha }, 0, coeffs)
}
