//! Gauss-Hermite quadrature for integrals over the whole real line.
//!
//! Nodes are eigenvalues of the Jacobi matrix of the Hermite recurrence;
//! weights are produced directly in the "physicists' integral" form
//! `integral h(x) dx ~= sum w_i h(x_i)` (the `e^(x^2)`-rescaled Christoffel
//! numbers), which sidesteps the under/overflow of the classical weights at
//! large node counts.

use crate::error::{Error, Result};
use crate::tridiag_eigen::sym_tridiag_eigen;

/// Quadrature rule `integral_R h(x) dx ~= sum_i weight[i] * h(node[i])`,
/// exact when `h(x) = p(x) e^(-x^2)` with `deg p < 2M`.
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Parameter(
                "quadrature needs at least one node".into(),
            ));
        }
        let d = vec![0.0; m];
        let e: Vec<f64> = (1..m).map(|k| (k as f64 / 2.0).sqrt()).collect();
        let (nodes, _) = sym_tridiag_eigen(&d, &e, false)?;

        // w_i e^(x_i^2) = 1 / sum_{k<M} psi_k(x_i)^2 with psi_k the
        // orthonormal Hermite functions; every term is well scaled.
        let weights = nodes
            .iter()
            .map(|&x| {
                let s = hermite_function_sum_of_squares(x, m);
                if s > 0.0 {
                    1.0 / s
                } else {
                    0.0
                }
            })
            .collect();
        Ok(Self { nodes, weights })
    }
}

/// `sum_{k=0}^{m-1} psi_k(x)^2` with renormalization against underflow of
/// the Gaussian seed at large `|x|`.
fn hermite_function_sum_of_squares(x: f64, m: usize) -> f64 {
    // Run the recurrence on v_k = psi_k(x) * e^(-log_scale); whenever the
    // pair gets tiny, rescale and remember the exponent.
    let mut log_scale = -0.5 * x * x - 0.25 * std::f64::consts::PI.ln();
    let mut prev = 0.0_f64;
    let mut cur = 1.0_f64;
    let mut sum = 0.0_f64;

    let contribution = |v: f64, log_scale: f64| -> f64 {
        let lg = v.abs().ln() + log_scale;
        if v != 0.0 && lg > -350.0 {
            (2.0 * lg).exp()
        } else {
            0.0
        }
    };

    sum += contribution(cur, log_scale);
    for k in 0..m - 1 {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > 1e100 {
            prev /= 1e100;
            cur /= 1e100;
            log_scale += 230.258_509_299_404_57; // ln 1e100
        }
        sum += contribution(cur, log_scale);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn five_point_rule_matches_tabulated_values() {
        // Classical five-point Gauss-Hermite rule: nodes and weights for the
        // e^(-x^2) weight; our weights carry the extra e^(x_i^2) factor.
        let gh = GaussHermite::new(5).unwrap();
        let nodes = [
            -2.020182870456086,
            -0.9585724646138185,
            0.0,
            0.9585724646138185,
            2.020182870456086,
        ];
        let classical_w = [
            0.019953242059045913,
            0.39361932315224116,
            0.9453087204829419,
            0.39361932315224116,
            0.019953242059045913,
        ];
        for i in 0..5 {
            assert!((gh.nodes[i] - nodes[i]).abs() < 1e-12, "node {i}");
            let want = classical_w[i] * (nodes[i] * nodes[i]).exp();
            assert!(
                (gh.weights[i] - want).abs() < 1e-11 * want,
                "weight {i}: {} vs {want}",
                gh.weights[i]
            );
        }
    }

    #[test]
    fn integrates_gaussian_moments() {
        let gh = GaussHermite::new(40).unwrap();
        // integral x^(2k) e^(-x^2) dx = Gamma(k + 1/2)
        let mut want = PI.sqrt();
        for k in 0..8 {
            let got: f64 = gh
                .nodes
                .iter()
                .zip(&gh.weights)
                .map(|(&x, &w)| w * x.powi(2 * k) * (-x * x).exp())
                .sum();
            assert!((got - want).abs() < 1e-12 * want, "k={k}: {got} vs {want}");
            want *= k as f64 + 0.5;
        }
    }

    #[test]
    fn large_rule_stays_finite() {
        let gh = GaussHermite::new(1100).unwrap();
        assert!(gh.nodes.iter().all(|x| x.is_finite()));
        assert!(gh.weights.iter().all(|w| w.is_finite() && *w >= 0.0));
        // integral e^(-x^2) dx = sqrt(pi) even at extreme node counts.
        let got: f64 = gh
            .nodes
            .iter()
            .zip(&gh.weights)
            .map(|(&x, &w)| w * (-x * x).exp())
            .sum();
        assert!((got - PI.sqrt()).abs() < 1e-10);
    }
}
