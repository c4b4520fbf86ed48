//! Tridiagonal operators acting on expansion coefficients.
//!
//! Every basis family here satisfies the differential-difference relation
//!
//! ```text
//! phi_n' = -conj(b_{n-1}) phi_{n-1} + i c_n phi_n + b_n phi_{n+1}
//! ```
//!
//! with real `c_n`, so differentiation is a skew-Hermitian tridiagonal
//! matrix on coefficient space and `exp(tD)` is unitary. [`TridiagOp`]
//! stores the relation rows; [`TridiagOp::apply`] performs the transposed
//! action on coefficients. Two further MT identities are provided as
//! operators: multiplication by `4i/(1 + 4x^2)` ([`cayley_weight_op`]) and
//! `x d/dx` ([`x_ddx_op`]), together with the coefficient convolution rule
//! for pointwise products ([`mt_product`]).

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::basis::{BasisSpec, PhaseConvention};
use crate::error::{Error, Result};
use crate::transform::Expansion;
use crate::tridiag_eigen::sym_tridiag_eigen;

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Off-diagonal recurrence coefficient `b_n` of a basis family; `b_{-1} = 0`
/// for the half-line families.
pub fn b_coeff(spec: &BasisSpec, n: i64) -> Result<Complex64> {
    match spec {
        BasisSpec::Mt => Ok(Complex64::new(n as f64 + 1.0, 0.0)),
        BasisSpec::GeneralMt(p) => {
            let scale = 1.0 / (2.0 * p.lambda().im);
            let b = scale * (n as f64 + p.delta() + 1.0);
            Ok(match p.phase() {
                PhaseConvention::PowersOfMinusI => Complex64::new(b, 0.0),
                PhaseConvention::Unit => Complex64::new(0.0, -b),
            })
        }
        BasisSpec::FourierLaguerre { alpha } => {
            if n >= 0 {
                let nf = n as f64;
                Ok(Complex64::new(
                    ((nf + 1.0) * (nf + 1.0 + alpha)).sqrt(),
                    0.0,
                ))
            } else if n == -1 {
                Ok(Complex64::new(0.0, 0.0))
            } else {
                Err(Error::Window(format!(
                    "no coefficient b_{n} on the half line"
                )))
            }
        }
        BasisSpec::ShiftedHermite { .. } => {
            if n >= 0 {
                Ok(Complex64::new(((n as f64 + 1.0) / 2.0).sqrt(), 0.0))
            } else if n == -1 {
                Ok(Complex64::new(0.0, 0.0))
            } else {
                Err(Error::Window(format!(
                    "no coefficient b_{n} on the half line"
                )))
            }
        }
    }
}

/// Diagonal recurrence coefficient `c_n` (always real).
pub fn c_coeff(spec: &BasisSpec, n: i64) -> Result<f64> {
    match spec {
        BasisSpec::Mt => Ok(2.0 * n as f64 + 1.0),
        BasisSpec::GeneralMt(p) => {
            let scale = 1.0 / (2.0 * p.lambda().im);
            Ok(scale * (2.0 * (n as f64 + p.delta()) + 1.0) + p.omega())
        }
        BasisSpec::FourierLaguerre { alpha } => {
            if n >= 0 {
                Ok(2.0 * n as f64 + 1.0 + alpha)
            } else {
                Err(Error::Window(format!(
                    "no coefficient c_{n} on the half line"
                )))
            }
        }
        BasisSpec::ShiftedHermite { alpha } => {
            if n >= 0 {
                Ok(*alpha)
            } else {
                Err(Error::Window(format!(
                    "no coefficient c_{n} on the half line"
                )))
            }
        }
    }
}

/// A tridiagonal operator over the index window `[n_min, n_max]`, stored as
/// relation rows: row `n` holds the multipliers of `phi_{n-1}`, `phi_n`,
/// `phi_{n+1}` in the image of `phi_n`.
#[derive(Debug, Clone)]
pub struct TridiagOp {
    basis: BasisSpec,
    n_min: i64,
    sub: Vec<Complex64>,
    diag: Vec<Complex64>,
    sup: Vec<Complex64>,
}

/// Differentiation operator rows for a basis over `[n_min, n_max]`:
/// `(-conj(b_{n-1}), i c_n, b_n)`.
///
/// Half-line families (Fourier-Laguerre, shifted Hermite) require
/// `n_min >= 0`; MT and generalized MT accept any window. For MT the row at
/// `n = -1` has `b_{-1} = 0`, so windows across the origin decompose into
/// two decoupled blocks.
pub fn diff_op(spec: &BasisSpec, n_min: i64, n_max: i64) -> Result<TridiagOp> {
    spec.validate()?;
    if n_min > n_max {
        return Err(Error::Window(format!("empty window [{n_min}, {n_max}]")));
    }
    if !spec.supports_index(n_min) || matches!(spec, BasisSpec::FourierLaguerre { .. }) && n_min < 0
    {
        return Err(Error::Window(format!(
            "window [{n_min}, {n_max}] starts before the first basis index"
        )));
    }
    let len = (n_max - n_min + 1) as usize;
    let mut sub = Vec::with_capacity(len);
    let mut diag = Vec::with_capacity(len);
    let mut sup = Vec::with_capacity(len);
    for n in n_min..=n_max {
        sub.push(-b_coeff(spec, n - 1)?.conj());
        diag.push(Complex64::new(0.0, c_coeff(spec, n)?));
        sup.push(b_coeff(spec, n)?);
    }
    Ok(TridiagOp {
        basis: spec.clone(),
        n_min,
        sub,
        diag,
        sup,
    })
}

/// Multiplication by `4i / (1 + 4x^2)` in the MT basis:
/// `4i/(1+4x^2) phi_n = -phi_{n-1} + 2i phi_n + phi_{n+1}`.
pub fn cayley_weight_op(n_min: i64, n_max: i64) -> TridiagOp {
    let len = (n_max - n_min + 1).max(1) as usize;
    TridiagOp {
        basis: BasisSpec::Mt,
        n_min,
        sub: vec![Complex64::new(-1.0, 0.0); len],
        diag: vec![Complex64::new(0.0, 2.0); len],
        sup: vec![Complex64::new(1.0, 0.0); len],
    }
}

/// The operator `x d/dx` in the MT basis:
/// `x phi_n' = -(n/2) i phi_{n-1} - (1/2) phi_n - ((n+1)/2) i phi_{n+1}`.
pub fn x_ddx_op(n_min: i64, n_max: i64) -> TridiagOp {
    let len = (n_max - n_min + 1).max(1) as usize;
    let mut sub = Vec::with_capacity(len);
    let mut diag = Vec::with_capacity(len);
    let mut sup = Vec::with_capacity(len);
    for n in n_min..=n_max {
        sub.push(Complex64::new(0.0, -0.5 * n as f64));
        diag.push(Complex64::new(-0.5, 0.0));
        sup.push(Complex64::new(0.0, -0.5 * (n as f64 + 1.0)));
    }
    TridiagOp {
        basis: BasisSpec::Mt,
        n_min,
        sub,
        diag,
        sup,
    }
}

/// Result of applying an operator: the new expansion plus which boundary
/// rows are inexact because the window was clipped there.
#[derive(Debug, Clone)]
pub struct Applied {
    pub expansion: Expansion,
    /// Indices of output rows that lost contributions to truncation.
    pub inexact_rows: Vec<i64>,
}

impl TridiagOp {
    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    /// Inclusive index window `(n_min, n_max)`.
    pub fn window(&self) -> (i64, i64) {
        (self.n_min, self.n_min + self.diag.len() as i64 - 1)
    }

    /// Relation row `(sub, diag, sup)` at index `n`.
    pub fn row(&self, n: i64) -> Option<(Complex64, Complex64, Complex64)> {
        let k = n - self.n_min;
        if k < 0 || k as usize >= self.diag.len() {
            return None;
        }
        let k = k as usize;
        Some((self.sub[k], self.diag[k], self.sup[k]))
    }

    /// Whether the rows form a skew-Hermitian matrix. Entries are compared
    /// exactly: operators built by [`diff_op`] construct the symmetry rather
    /// than approximate it.
    pub fn is_skew_hermitian(&self) -> bool {
        let n = self.diag.len();
        self.diag.iter().all(|d| d.re == 0.0)
            && (1..n).all(|k| self.sub[k] == -self.sup[k - 1].conj())
    }

    /// Dense materialization of the relation rows (row `n` of the output is
    /// the expansion of the image of `phi_n`).
    pub fn dense(&self) -> Vec<Vec<Complex64>> {
        let n = self.diag.len();
        let mut a = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for k in 0..n {
            if k > 0 {
                a[k][k - 1] = self.sub[k];
            }
            a[k][k] = self.diag[k];
            if k + 1 < n {
                a[k][k + 1] = self.sup[k];
            }
        }
        a
    }

    /// Transposed action on coefficients: if `f = sum c_n phi_n`, the image
    /// of `f` has coefficients
    ///
    /// ```text
    /// out_m = sup_{m-1} c_{m-1} + diag_m c_m + sub_{m+1} c_{m+1}.
    /// ```
    ///
    /// The input window must lie inside the operator window; the output
    /// window grows by one on each side and is clipped at the operator
    /// bounds, with clipped boundary rows reported in
    /// [`Applied::inexact_rows`].
    pub fn apply(&self, e: &Expansion) -> Result<Applied> {
        if *e.basis() != self.basis {
            return Err(Error::BasisMismatch(
                "operator and expansion use different bases".into(),
            ));
        }
        let (elo, ehi) = e.window();
        let (olo, ohi) = self.window();
        if elo < olo || ehi > ohi {
            return Err(Error::Window(format!(
                "expansion window [{elo}, {ehi}] exceeds operator window [{olo}, {ohi}]"
            )));
        }

        let lo = (elo - 1).max(olo);
        let hi = (ehi + 1).min(ohi);
        let mut out = Vec::with_capacity((hi - lo + 1) as usize);
        for m in lo..=hi {
            let mut acc = Complex64::new(0.0, 0.0);
            let c = e.coeff(m - 1);
            if c != Complex64::new(0.0, 0.0) {
                acc += self.row(m - 1).map_or(Complex64::new(0.0, 0.0), |r| r.2) * c;
            }
            let c = e.coeff(m);
            if c != Complex64::new(0.0, 0.0) {
                acc += self.row(m).map_or(Complex64::new(0.0, 0.0), |r| r.1) * c;
            }
            let c = e.coeff(m + 1);
            if c != Complex64::new(0.0, 0.0) {
                acc += self.row(m + 1).map_or(Complex64::new(0.0, 0.0), |r| r.0) * c;
            }
            out.push(acc);
        }

        let mut inexact = Vec::new();
        if elo - 1 < olo {
            inexact.push(olo);
        }
        if ehi + 1 > ohi {
            inexact.push(ohi);
        }
        Ok(Applied {
            expansion: Expansion::new(self.basis.clone(), lo, out)?,
            inexact_rows: inexact,
        })
    }
}

/// Coefficients of the pointwise product of two MT expansions, from the
/// product rule `phi_m phi_n = (phi_{m+n} - i phi_{m+n+1}) / sqrt(2 pi)`
/// (valid for all integer indices):
///
/// ```text
/// h_n = (2 pi)^{-1/2} sum_m f_m (g_{n-m} - i g_{n-m-1}).
/// ```
///
/// Small windows are convolved directly, larger ones through the FFT.
pub fn mt_product(e1: &Expansion, e2: &Expansion) -> Result<Expansion> {
    if *e1.basis() != BasisSpec::Mt || *e2.basis() != BasisSpec::Mt {
        return Err(Error::BasisMismatch(
            "product rule holds in the MT basis".into(),
        ));
    }
    let a = e1.coeffs();
    let b = e2.coeffs();
    let conv_len = a.len() + b.len() - 1;

    let conv: Vec<Complex64> = if conv_len <= 64 {
        let mut out = vec![Complex64::new(0.0, 0.0); conv_len];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] += ai * bj;
            }
        }
        out
    } else {
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(conv_len);
        let mut fa = a.to_vec();
        fa.resize(conv_len, Complex64::new(0.0, 0.0));
        let mut fb = b.to_vec();
        fb.resize(conv_len, Complex64::new(0.0, 0.0));
        fft.process(&mut fa);
        fft.process(&mut fb);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x *= y;
        }
        planner.plan_fft_inverse(conv_len).process(&mut fa);
        let scale = 1.0 / conv_len as f64;
        fa.iter().map(|c| c * scale).collect()
    };

    // out_n = (conv_n - i conv_{n-1}) / sqrt(2 pi), n_min = e1.n_min + e2.n_min.
    let mut out = Vec::with_capacity(conv_len + 1);
    for k in 0..=conv_len {
        let direct = if k < conv_len {
            conv[k]
        } else {
            Complex64::new(0.0, 0.0)
        };
        let shifted = if k > 0 {
            conv[k - 1]
        } else {
            Complex64::new(0.0, 0.0)
        };
        out.push((direct - Complex64::new(0.0, 1.0) * shifted) / SQRT_2PI);
    }
    Expansion::new(BasisSpec::Mt, e1.n_min() + e2.n_min(), out)
}

/// Propagate coefficients through `exp(t D)` for a skew-Hermitian operator
/// `D`, via the eigendecomposition of the associated Hermitian tridiagonal
/// matrix. The propagator is unitary, so the coefficient norm is conserved
/// to roundoff.
///
/// The expansion is zero-padded to the operator window; windows above 1024
/// are rejected (the decomposition is dense).
pub fn propagate(op: &TridiagOp, e: &Expansion, t: f64) -> Result<Expansion> {
    if !op.is_skew_hermitian() {
        return Err(Error::Parameter(
            "propagation requires a skew-Hermitian operator".into(),
        ));
    }
    let (olo, ohi) = op.window();
    let dim = (ohi - olo + 1) as usize;
    if dim > 1024 {
        return Err(Error::Window(format!(
            "window {dim} exceeds the dense limit 1024"
        )));
    }
    if *e.basis() != *op.basis() {
        return Err(Error::BasisMismatch(
            "operator and expansion use different bases".into(),
        ));
    }
    let (elo, ehi) = e.window();
    if elo < olo || ehi > ohi {
        return Err(Error::Window(format!(
            "expansion window [{elo}, {ehi}] exceeds operator window [{olo}, {ohi}]"
        )));
    }

    // Coefficient-space matrix A: A[m][m-1] = sup[m-1], A[m][m] = diag[m],
    // A[m][m+1] = sub[m+1]. Write A = i H with H Hermitian tridiagonal,
    // then strip the phases of the off-diagonal so H = L T L* with T real
    // symmetric and L diagonal unitary.
    let d: Vec<f64> = op.diag.iter().map(|c| c.im).collect();
    let h_off: Vec<Complex64> = (1..dim)
        .map(|m| Complex64::new(0.0, -1.0) * op.sup[m - 1])
        .collect();

    let mut phases = Vec::with_capacity(dim);
    phases.push(Complex64::new(1.0, 0.0));
    let mut t_off = Vec::with_capacity(dim - 1);
    for (m, h) in h_off.iter().enumerate() {
        let mag = h.norm();
        t_off.push(mag);
        let prev = phases[m];
        phases.push(if mag == 0.0 { prev } else { h * prev / mag });
    }

    let (vals, q) = sym_tridiag_eigen(&d, &t_off, true)?;
    let q = q.expect("eigenvectors requested");

    // exp(tA) v = L Q diag(e^{i t theta}) Q^T L* v
    let v: Vec<Complex64> = (olo..=ohi)
        .map(|n| phases[(n - olo) as usize].conj() * e.coeff(n))
        .collect();
    let mut y = vec![Complex64::new(0.0, 0.0); dim];
    for (k, yk) in y.iter_mut().enumerate() {
        *yk = v
            .iter()
            .zip(&q[k])
            .map(|(vi, &qki)| vi * qki)
            .sum::<Complex64>()
            * Complex64::from_polar(1.0, t * vals[k]);
    }
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for (k, yk) in y.iter().enumerate() {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot += yk * q[k][i];
        }
    }
    for (i, slot) in out.iter_mut().enumerate() {
        *slot *= phases[i];
    }

    Expansion::new(op.basis().clone(), olo, out)
}
