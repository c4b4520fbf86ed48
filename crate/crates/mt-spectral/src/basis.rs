//! The Malmquist-Takenaka (MT) rational basis, its generalized family, and
//! the tangent change of variables connecting the real line to the unit
//! circle.
//!
//! The MT functions
//!
//! ```text
//! phi_n(x) = sqrt(2/pi) i^n (1 + 2ix)^n / (1 - 2ix)^(n+1),   n in Z,
//! ```
//!
//! form an orthonormal basis of L2(R). Under `x = tan(theta/2) / 2` they
//! become `i^n sqrt(2/pi) e^(i(n+1/2)theta) cos(theta/2)`, which is the form
//! used for evaluation here: the oscillatory factor stays unimodular for any
//! `n`, so there is no overflow or accuracy loss at large `|n|`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laguerre;

/// `i^n` computed exactly from `n mod 4`.
pub(crate) fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `(-i)^n` computed exactly from `n mod 4`.
pub(crate) fn minus_i_pow(n: i64) -> Complex64 {
    i_pow(-n)
}

/// Angle of the boundary map: `theta(x) = 2 arctan(2x)`, strictly increasing
/// from `-pi` to `pi`, with `(1 + 2ix)/(1 - 2ix) = e^(i theta)`.
pub fn theta_of_x(x: f64) -> f64 {
    2.0 * (2.0 * x).atan()
}

/// Inverse of [`theta_of_x`]: `x = tan(theta/2) / 2` for `|theta| < pi`.
pub fn x_of_theta(theta: f64) -> Result<f64> {
    if theta.is_nan() || theta.abs() >= std::f64::consts::PI {
        return Err(Error::Domain(format!(
            "theta = {theta} not in the open interval (-pi, pi)"
        )));
    }
    Ok(0.5 * (0.5 * theta).tan())
}

/// Shared modulus of every MT function: `sqrt(2 / (pi (1 + 4x^2)))`.
pub fn envelope(x: f64) -> f64 {
    (2.0 / (std::f64::consts::PI * (1.0 + 4.0 * x * x))).sqrt()
}

/// Evaluate the MT function `phi_n` at `x`.
pub fn eval_mt(n: i64, x: f64) -> Complex64 {
    mt_theta_form(n, theta_of_x(x))
}

/// Evaluate `phi_n` directly in the angle variable, `|theta| < pi`.
pub fn eval_mt_theta(n: i64, theta: f64) -> Result<Complex64> {
    if theta.is_nan() || theta.abs() >= std::f64::consts::PI {
        return Err(Error::Domain(format!(
            "theta = {theta} not in the open interval (-pi, pi)"
        )));
    }
    Ok(mt_theta_form(n, theta))
}

fn mt_theta_form(n: i64, theta: f64) -> Complex64 {
    let amp = (2.0 / std::f64::consts::PI).sqrt() * (0.5 * theta).cos();
    let phase = (n as f64 + 0.5) * theta;
    i_pow(n) * Complex64::from_polar(amp, phase)
}

/// Phase sequence `gamma_n` attached to a generalized MT family.
///
/// Only the two conventions that actually occur in practice are provided:
/// `(-i)^n` (the canonical choice with positive real recurrence
/// coefficients) and the trivial `gamma_n = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseConvention {
    PowersOfMinusI,
    Unit,
}

impl PhaseConvention {
    /// The unimodular factor `gamma_n`.
    pub fn gamma(self, n: i64) -> Complex64 {
        match self {
            PhaseConvention::PowersOfMinusI => minus_i_pow(n),
            PhaseConvention::Unit => Complex64::new(1.0, 0.0),
        }
    }
}

/// Parameters of the generalized MT family
///
/// ```text
/// phi_n(x) = gamma_n sqrt(|Im lambda| / pi) e^(i omega x)
///            (lambda - x)^(n + delta) / (conj(lambda) - x)^(n + delta + 1)
/// ```
///
/// with `lambda` strictly off the real axis, a real modulation frequency
/// `omega` and a real index shift `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralMtParams {
    lambda: Complex64,
    omega: f64,
    delta: f64,
    phase: PhaseConvention,
}

impl GeneralMtParams {
    pub fn new(lambda: Complex64, omega: f64, delta: f64, phase: PhaseConvention) -> Result<Self> {
        if lambda.im == 0.0 || !lambda.is_finite() {
            return Err(Error::Parameter(format!(
                "lambda = {lambda} must be finite with nonzero imaginary part"
            )));
        }
        if !omega.is_finite() || !delta.is_finite() {
            return Err(Error::Parameter("omega and delta must be finite".into()));
        }
        Ok(Self {
            lambda,
            omega,
            delta,
            phase,
        })
    }

    /// The canonical parameters reproducing the MT system up to a global
    /// phase: `lambda = i/2`, `omega = 0`, `delta = 0`, `gamma_n = (-i)^n`.
    pub fn mt_canonical() -> Self {
        Self {
            lambda: Complex64::new(0.0, 0.5),
            omega: 0.0,
            delta: 0.0,
            phase: PhaseConvention::PowersOfMinusI,
        }
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn phase(&self) -> PhaseConvention {
        self.phase
    }

    /// Continuous angle `G(x)` with `(lambda - x)/(conj(lambda) - x) = e^(iG(x))`.
    ///
    /// The ratio is unimodular for real `x`; taking the branch through
    /// `2 arctan` keeps `G` continuous on all of R, which is what makes the
    /// fractional power `e^(i(n + delta) G)` well defined and smooth.
    pub(crate) fn angle(&self, x: f64) -> f64 {
        let nu = self.lambda.im;
        let w = (x - self.lambda.re) / nu.abs();
        nu.signum() * (2.0 * w.atan() - std::f64::consts::PI)
    }
}

/// Evaluate a generalized MT function.
///
/// Non-integer exponents are handled by factoring the ratio
/// `(lambda - x)/(conj(lambda) - x)` into a continuous unimodular phase, so
/// the result is continuous in `x` with `|phi_n(x)| =
/// sqrt(|Im lambda|/pi) / |conj(lambda) - x|`.
pub fn eval_general_mt(p: &GeneralMtParams, n: i64, x: f64) -> Complex64 {
    let nu = p.lambda.im;
    let scale = (nu.abs() / std::f64::consts::PI).sqrt();
    let angle = (n as f64 + p.delta) * p.angle(x) + p.omega * x;
    let denom = p.lambda.conj() - Complex64::new(x, 0.0);
    p.phase.gamma(n) * Complex64::from_polar(scale, angle) / denom
}

/// Which orthonormal family an expansion or operator refers to.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisSpec {
    /// The Malmquist-Takenaka system, indexed over all of Z.
    Mt,
    /// The generalized MT family of [`GeneralMtParams`], indexed over Z.
    GeneralMt(GeneralMtParams),
    /// Fourier-Laguerre functions with parameter `alpha > -1`; nonnegative
    /// indices come from the Laguerre measure on `(0, inf)`, negative ones
    /// from its mirror on `(-inf, 0)`.
    FourierLaguerre { alpha: f64 },
    /// Twisted Hermite functions with modulation `alpha`, indexed over `n >= 0`.
    ShiftedHermite { alpha: f64 },
}

impl BasisSpec {
    /// Fourier-Laguerre spec with the integrability requirement checked.
    pub fn fourier_laguerre(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= -1.0 {
            return Err(Error::Parameter(format!(
                "Fourier-Laguerre needs alpha > -1, got {alpha}"
            )));
        }
        Ok(BasisSpec::FourierLaguerre { alpha })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BasisSpec::Mt => Ok(()),
            BasisSpec::GeneralMt(p) => {
                // Re-run the constructor checks in case the value was built
                // by hand from parts.
                GeneralMtParams::new(p.lambda, p.omega, p.delta, p.phase).map(|_| ())
            }
            BasisSpec::FourierLaguerre { alpha } => Self::fourier_laguerre(*alpha).map(|_| ()),
            BasisSpec::ShiftedHermite { alpha } => {
                if alpha.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Parameter("alpha must be finite".into()))
                }
            }
        }
    }

    /// Whether index `n` addresses a basis function of this family.
    pub fn supports_index(&self, n: i64) -> bool {
        match self {
            BasisSpec::ShiftedHermite { .. } => n >= 0,
            _ => true,
        }
    }

    /// Pointwise evaluation of the `n`-th basis function.
    ///
    /// # Panics
    /// Panics when `n` is outside the index range of the family
    /// (negative `n` for the shifted Hermite basis).
    pub fn eval(&self, n: i64, x: f64) -> Complex64 {
        match self {
            BasisSpec::Mt => eval_mt(n, x),
            BasisSpec::GeneralMt(p) => eval_general_mt(p, n, x),
            BasisSpec::FourierLaguerre { alpha } => {
                if n >= 0 {
                    laguerre::eval_fl_sum(*alpha, n as u32, x)
                } else {
                    laguerre::eval_fl_mirror(*alpha, n, x)
                }
            }
            BasisSpec::ShiftedHermite { alpha } => {
                assert!(n >= 0, "shifted Hermite basis has no index {n}");
                laguerre::eval_twisted_hermite(*alpha, n as u32, x)
            }
        }
    }
}
