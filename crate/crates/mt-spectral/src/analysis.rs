//! Convergence diagnostics: closed-form reference coefficients, the
//! analyticity region attached to a geometric decay rate, and least-squares
//! fitting of coefficient-decay models.

use num_complex::Complex64;

use crate::basis::i_pow;
use crate::error::{Error, Result};
use crate::transform::{synthesize, Expansion};

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Region of analytic continuation tied to geometric coefficient decay
/// `O(rho^-|n|)`: the Riemann sphere minus the disc `D(center, radius)` and
/// its conjugate, with
///
/// ```text
/// center = (i/2) (rho + 1/rho) / (rho - 1/rho),   radius = 1 / (rho - 1/rho).
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoRegion {
    pub rho: f64,
    pub center: Complex64,
    pub radius: f64,
}

pub fn rho_region(rho: f64) -> Result<RhoRegion> {
    if !rho.is_finite() || rho <= 1.0 {
        return Err(Error::Parameter(format!("rho must exceed 1, got {rho}")));
    }
    let u = rho - 1.0 / rho;
    Ok(RhoRegion {
        rho,
        center: Complex64::new(0.0, 0.5 * (rho + 1.0 / rho) / u),
        radius: 1.0 / u,
    })
}

impl RhoRegion {
    /// Signed distance of a point from the upper disc boundary (negative
    /// inside).
    pub fn boundary_distance(&self, p: Complex64) -> f64 {
        (p - self.center).norm() - self.radius
    }
}

/// Exact expansion coefficients `<f, phi_n>` of `f(x) = 1/(1 + x^2)`:
///
/// ```text
/// n >= 0:   i^n sqrt(2 pi) 3^-(n+1)
/// n <= -1: -i^n sqrt(2 pi) 3^n
/// ```
///
/// so `|c_n| = sqrt(2 pi) 3^(-|n| - [n >= 0])`, the geometric decay of a
/// function whose poles at `+-i` sit on the `rho = 3` region boundary.
pub fn reference_coeffs_runge(n: i64) -> Complex64 {
    if n >= 0 {
        i_pow(n) * SQRT_2PI * 3f64.powi(-(n as i32) - 1)
    } else {
        -i_pow(n) * SQRT_2PI * 3f64.powi(n as i32)
    }
}

/// A decay-model family for coefficient magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayModel {
    /// `|c_n| ~ rho^-n`
    Exponential,
    /// `|c_n| ~ e^(-c n^p)` with `0 < p < 1`
    StretchedExp,
    /// `|c_n| ~ n^-q`
    Algebraic,
}

/// Fitted parameters of one decay model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FittedModel {
    Exponential { rho: f64 },
    StretchedExp { c: f64, p: f64 },
    Algebraic { q: f64 },
}

/// Outcome of a least-squares decay fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub model: FittedModel,
    /// Index window `[lo, hi]` that entered the fit.
    pub window: (usize, usize),
    /// RMS of the log-magnitude residuals.
    pub residual: f64,
}

/// Magnitudes below this are treated as roundoff and excluded from fits.
pub const COEFF_FLOOR: f64 = 1e-14;

/// Least-squares fit of `ln |c_n|` against one decay model.
///
/// `mags[k]` is the magnitude at index `|n| = k` along one tail. The fit
/// window is `[N/4, N]` where `N` is the last index above the roundoff
/// floor; points below the floor inside the window are dropped, and at
/// least 16 usable points are required.
///
/// Coefficient sequences typically oscillate underneath their decay
/// envelope (near-zeros from beating between saddle points), and the
/// asymptotic rates describe the envelope, so the regression runs on
/// blockwise maxima of the magnitudes rather than on every point.
pub fn fit_decay(mags: &[f64], model: DecayModel) -> Result<DecayFit> {
    let n_eff = mags
        .iter()
        .rposition(|&m| m > COEFF_FLOOR)
        .ok_or_else(|| Error::InsufficientData("all magnitudes below the floor".into()))?;
    let lo = (n_eff / 4).max(1);
    let usable: Vec<(usize, f64)> = (lo..=n_eff)
        .filter(|&k| mags[k] > COEFF_FLOOR)
        .map(|k| (k, mags[k]))
        .collect();
    if usable.len() < 16 {
        return Err(Error::InsufficientData(format!(
            "{} usable magnitudes in window [{lo}, {n_eff}], need 16",
            usable.len()
        )));
    }

    // Envelope extraction. Slowly beating sequences (a handful of wide
    // arches across the window) expose the envelope exactly at their local
    // maxima; fast or absent oscillation is handled by blockwise maxima.
    let crests: Vec<(f64, f64)> = usable
        .windows(3)
        .filter(|w| w[1].1 >= w[0].1 && w[1].1 >= w[2].1)
        .map(|w| (w[1].0 as f64, w[1].1.ln()))
        .collect();
    let pts: Vec<(f64, f64)> = if crests.len() >= 5 && crests.len() <= usable.len() / 8 {
        crests
    } else {
        let block = usable.len().div_ceil(24).max(5).min(usable.len());
        usable
            .chunks(block)
            .map(|chunk| {
                let &(k, m) = chunk
                    .iter()
                    .max_by(|a, b| a.1.total_cmp(&b.1))
                    .expect("chunks are non-empty");
                (k as f64, m.ln())
            })
            .collect()
    };

    let fit = match model {
        DecayModel::Exponential => {
            let (slope, residual) = envelope_fit(&pts, |n| n);
            let rho = (-slope).exp();
            if rho <= 1.0 {
                return Err(Error::Parameter(format!(
                    "fitted rate rho = {rho} does not decay"
                )));
            }
            DecayFit {
                model: FittedModel::Exponential { rho },
                window: (lo, n_eff),
                residual,
            }
        }
        DecayModel::Algebraic => {
            let (slope, residual) = envelope_fit(&pts, f64::ln);
            let q = -slope;
            if q <= 0.0 {
                return Err(Error::Parameter(format!(
                    "fitted exponent q = {q} does not decay"
                )));
            }
            DecayFit {
                model: FittedModel::Algebraic { q },
                window: (lo, n_eff),
                residual,
            }
        }
        DecayModel::StretchedExp => {
            // Profile the stretching exponent over a grid; each candidate p
            // reduces to a linear fit in n^p. The grid stops at 0.85: at
            // p -> 1 the family degenerates into the exponential one.
            let mut best = (f64::INFINITY, 0.0, 0.0); // (residual, c, p)
            let mut p = 0.15;
            while p <= 0.85 + 1e-12 {
                let (slope, residual) = envelope_fit(&pts, |n| n.powf(p));
                if residual < best.0 {
                    best = (residual, -slope, p);
                }
                p += 0.005;
            }
            let (residual, c, p) = best;
            if c <= 0.0 {
                return Err(Error::Parameter(format!(
                    "fitted constant c = {c} does not decay"
                )));
            }
            DecayFit {
                model: FittedModel::StretchedExp { c, p },
                window: (lo, n_eff),
                residual,
            }
        }
    };
    Ok(fit)
}

/// Least squares of `y` on `a + slope * predictor(n)`, refitted once with
/// below-trend outliers removed: block maxima that land inside a deep
/// oscillation dip sit far *under* the envelope, never above it, so points
/// more than one RMS below the first fit are discarded.
fn envelope_fit(pts: &[(f64, f64)], predictor: impl Fn(f64) -> f64) -> (f64, f64) {
    let (slope, intercept, rms) = least_squares(pts, &predictor);
    let kept: Vec<(f64, f64)> = pts
        .iter()
        .copied()
        .filter(|&(n, y)| y - intercept - slope * predictor(n) >= -rms)
        .collect();
    if kept.len() < pts.len().div_ceil(2) {
        return (slope, rms);
    }
    let (slope, _, rms) = least_squares(&kept, &predictor);
    (slope, rms)
}

fn least_squares(pts: &[(f64, f64)], predictor: &impl Fn(f64) -> f64) -> (f64, f64, f64) {
    let m = pts.len() as f64;
    let (mut st, mut sy, mut stt, mut sty) = (0.0, 0.0, 0.0, 0.0);
    for &(n, y) in pts {
        let t = predictor(n);
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    let denom = m * stt - st * st;
    let slope = (m * sty - st * sy) / denom;
    let intercept = (sy - slope * st) / m;
    let ss: f64 = pts
        .iter()
        .map(|&(n, y)| {
            let r = y - intercept - slope * predictor(n);
            r * r
        })
        .sum();
    (slope, intercept, (ss / m).sqrt())
}

/// Split an expansion into tail magnitude sequences indexed by `|n|`:
/// `(positive, negative)` with `positive[k] = |c_k|` and
/// `negative[k] = |c_(-k)|` (entry 0 duplicates `|c_0|` so indices align).
pub fn tail_magnitudes(e: &Expansion) -> (Vec<f64>, Vec<f64>) {
    let (lo, hi) = e.window();
    let pos: Vec<f64> = (0..=hi.max(0)).map(|n| e.coeff(n).norm()).collect();
    let neg: Vec<f64> = (0..=(-lo).max(0)).map(|k| e.coeff(-k).norm()).collect();
    (pos, neg)
}

/// The magnitudes of the slower of the two tails: both tails are fitted
/// with the requested model and the one predicting the larger magnitude at
/// a common comparison index wins. Model comparisons should then run on
/// this single sequence.
pub fn slower_tail(e: &Expansion, model: DecayModel) -> Result<Vec<f64>> {
    let (pos, neg) = tail_magnitudes(e);
    let fits: Vec<(Vec<f64>, DecayFit)> = [pos, neg]
        .into_iter()
        .filter_map(|m| fit_decay(&m, model).ok().map(|f| (m, f)))
        .collect();
    let at = fits.iter().map(|(_, f)| f.window.1).min().unwrap_or(1) as f64;
    fits.into_iter()
        .max_by(|(_, a), (_, b)| predicted_log_decay(a, at).total_cmp(&predicted_log_decay(b, at)))
        .map(|(m, _)| m)
        .ok_or_else(|| Error::InsufficientData("neither tail is fittable".into()))
}

/// Fit both tails of an expansion and return the slower one (the tail whose
/// fitted model predicts the larger magnitude at a common comparison index).
pub fn fit_slower_tail(e: &Expansion, model: DecayModel) -> Result<DecayFit> {
    fit_decay(&slower_tail(e, model)?, model)
}

/// Predicted log-decay (without intercept) at index `n`; larger means
/// slower decay.
fn predicted_log_decay(fit: &DecayFit, n: f64) -> f64 {
    match fit.model {
        FittedModel::Exponential { rho } => -n * rho.ln(),
        FittedModel::StretchedExp { c, p } => -c * n.powf(p),
        FittedModel::Algebraic { q } => -q * n.ln(),
    }
}

/// Pointwise absolute error `|f(x) - sum_n c_n phi_n(x)|` over a sample.
pub fn partial_sum_error(f: impl Fn(f64) -> Complex64, e: &Expansion, xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| (f(x) - synthesize(e, x)).norm())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::eval_mt;
    use crate::basis::BasisSpec;
    use crate::transform::{analyze, inner_product_quadrature, make_grid};

    #[test]
    fn rho_region_reference_values() {
        let r = rho_region(3.0).unwrap();
        assert!((r.center - Complex64::new(0.0, 0.625)).norm() < 1e-15);
        assert!((r.radius - 0.375).abs() < 1e-15);
        // The boundary passes through i, the pole of 1/(1+x^2).
        assert!(r.boundary_distance(Complex64::new(0.0, 1.0)).abs() < 1e-15);

        let far = rho_region(1e9).unwrap();
        assert!((far.center - Complex64::new(0.0, 0.5)).norm() < 1e-8);
        assert!(far.radius < 1e-8);

        assert!(rho_region(1.0).is_err());
        assert!(rho_region(0.3).is_err());
    }

    #[test]
    fn rho_region_monotonicity() {
        let mut prev = rho_region(1.01).unwrap();
        for k in 1..200 {
            let r = rho_region(1.01 + 0.05 * k as f64).unwrap();
            assert!(r.radius < prev.radius);
            assert!(r.center.im < prev.center.im);
            assert!(r.center.im > 0.5);
            prev = r;
        }
    }

    #[test]
    fn quartic_poles_sit_on_the_boundary_at_the_predicted_rate() {
        // The poles of 1/(1+x^4) leave the region discs exactly at
        // rho* = sqrt((33 + 20 sqrt 2)/17); that value, not the unit-scale
        // tabulated 1 + sqrt 2, is the geometric rate of this basis.
        let pole = Complex64::new(
            std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
        );
        let (mut lo, mut hi) = (1.5f64, 2.5f64);
        assert!(rho_region(lo).unwrap().boundary_distance(pole) < 0.0);
        assert!(rho_region(hi).unwrap().boundary_distance(pole) > 0.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if rho_region(mid).unwrap().boundary_distance(pole) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let rho_star = 0.5 * (lo + hi);
        let predicted = ((33.0 + 20.0 * 2f64.sqrt()) / 17.0).sqrt();
        assert!(
            (rho_star - predicted).abs() < 1e-9,
            "{rho_star} vs {predicted}"
        );
    }

    #[test]
    fn runge_reference_magnitudes() {
        assert!((reference_coeffs_runge(0).norm() - SQRT_2PI / 3.0).abs() < 1e-14);
        assert!((reference_coeffs_runge(5).norm() - SQRT_2PI / 729.0).abs() < 1e-16);
        assert!((reference_coeffs_runge(-1).norm() - SQRT_2PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn runge_reference_matches_quadrature_oracle() {
        // Phases included, against the slow inner product.
        let f = |x: f64| Complex64::new(1.0 / (1.0 + x * x), 0.0);
        for n in -4i64..=4 {
            let ip = inner_product_quadrature(f, |x| eval_mt(n, x), 2048);
            let want = reference_coeffs_runge(n);
            assert!((ip - want).norm() < 1e-10, "n={n}: {ip} vs {want}");
        }
    }

    #[test]
    fn runge_reference_matches_fft_transform() {
        let grid = make_grid(64).unwrap();
        let e = analyze(|x| Complex64::new(1.0 / (1.0 + x * x), 0.0), &grid);
        for n in -20i64..=20 {
            let got = e.coeff(n);
            let want = reference_coeffs_runge(n);
            assert!((got.norm() - want.norm()).abs() < 1e-10, "n={n}");
            assert!((got - want).norm() < 1e-10, "n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn exponential_fit_recovers_synthetic_rate() {
        let mags: Vec<f64> = (0..80).map(|k| 3f64.powi(-k)).collect();
        let fit = fit_decay(&mags, DecayModel::Exponential).unwrap();
        match fit.model {
            FittedModel::Exponential { rho } => assert!((rho - 3.0).abs() < 1e-6, "{rho}"),
            _ => unreachable!(),
        }
        assert!(fit.residual < 1e-10);
    }

    #[test]
    fn algebraic_fit_recovers_synthetic_exponent() {
        let mags: Vec<f64> = (0..400)
            .map(|k| if k == 0 { 1.0 } else { (k as f64).powf(-2.25) })
            .collect();
        let fit = fit_decay(&mags, DecayModel::Algebraic).unwrap();
        match fit.model {
            FittedModel::Algebraic { q } => assert!((q - 2.25).abs() < 1e-8, "{q}"),
            _ => unreachable!(),
        }
    }

    #[test]
    fn stretched_fit_recovers_synthetic_parameters() {
        let mags: Vec<f64> = (0..300)
            .map(|k| (-1.5 * (k as f64).powf(2.0 / 3.0)).exp())
            .collect();
        let fit = fit_decay(&mags, DecayModel::StretchedExp).unwrap();
        match fit.model {
            FittedModel::StretchedExp { c, p } => {
                assert!((p - 2.0 / 3.0).abs() < 0.01, "p={p}");
                assert!((c - 1.5).abs() < 0.05, "c={c}");
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn fit_rejects_unusable_data() {
        let floor = vec![1e-15; 100];
        assert!(matches!(
            fit_decay(&floor, DecayModel::Exponential),
            Err(Error::InsufficientData(_))
        ));
        let short = vec![1.0, 0.5, 0.25, 0.125];
        assert!(matches!(
            fit_decay(&short, DecayModel::Exponential),
            Err(Error::InsufficientData(_))
        ));
        let growing: Vec<f64> = (0..80).map(|k| 1.5f64.powi(k)).collect();
        assert!(fit_decay(&growing, DecayModel::Exponential).is_err());
    }

    #[test]
    fn partial_sum_error_vanishes_on_the_span() {
        let grid = make_grid(8).unwrap();
        let e = analyze(|x| eval_mt(2, x), &grid);
        let xs: Vec<f64> = (-10..=10).map(|k| 0.3 * k as f64).collect();
        let errs = partial_sum_error(|x| eval_mt(2, x), &e, &xs);
        assert!(errs.iter().all(|&e| e <= 1e-12), "{errs:?}");
    }

    #[test]
    fn runge_partial_sums_collapse_geometrically() {
        let f = |x: f64| Complex64::new(1.0 / (1.0 + x * x), 0.0);
        let xs: Vec<f64> = (-40..=40).map(|k| 0.1 * k as f64).collect();
        let max_err = |n: usize| {
            let grid = make_grid(n).unwrap();
            let e = analyze(f, &grid);
            partial_sum_error(f, &e, &xs)
                .into_iter()
                .fold(0.0, f64::max)
        };
        // Factor >= 50 per step of 10 until the roundoff floor takes over
        // (the N = 40 error saturates near 1e-14).
        let (e10, e20, e30, e40) = (max_err(10), max_err(20), max_err(30), max_err(40));
        assert!(e10 / e20 >= 50.0, "{e10} vs {e20}");
        assert!(e20 / e30 >= 50.0, "{e20} vs {e30}");
        assert!(e40 < 1e-12, "{e40}");
    }

    #[test]
    fn quartic_rate_matches_pole_geometry() {
        let f = |x: f64| Complex64::new(1.0 / (1.0 + x.powi(4)), 0.0);
        let grid = make_grid(256).unwrap();
        let e = analyze(f, &grid);
        let fit = fit_slower_tail(&e, DecayModel::Exponential).unwrap();
        let predicted = ((33.0 + 20.0 * 2f64.sqrt()) / 17.0).sqrt();
        match fit.model {
            FittedModel::Exponential { rho } => {
                assert!(
                    (rho - predicted).abs() < 0.05 * predicted,
                    "fitted {rho}, pole geometry predicts {predicted}"
                );
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn slower_tail_is_reported() {
        // Asymmetric synthetic expansion: positive tail decays at rho = 2,
        // negative at rho = 4; the fit must report the positive one.
        let coeffs: Vec<Complex64> = (-60i64..60)
            .map(|n| {
                let mag = if n >= 0 {
                    2f64.powi(-(n as i32))
                } else {
                    4f64.powi(n as i32)
                };
                Complex64::new(mag, 0.0)
            })
            .collect();
        let e = Expansion::new(BasisSpec::Mt, -60, coeffs).unwrap();
        let fit = fit_slower_tail(&e, DecayModel::Exponential).unwrap();
        match fit.model {
            FittedModel::Exponential { rho } => assert!((rho - 2.0).abs() < 1e-6),
            _ => unreachable!(),
        }
    }
}
