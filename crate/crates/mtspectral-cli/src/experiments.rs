//! Experiment implementations and their file outputs.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use mt_spectral::analysis::{
    fit_decay, partial_sum_error, rho_region, slower_tail, DecayModel, FittedModel,
};
use mt_spectral::operators::{cayley_weight_op, diff_op, mt_product, propagate, x_ddx_op};
use mt_spectral::transform::{
    analyze, hermite_analyze, inner_product_quadrature, make_grid, orthonormality_residual,
    synthesize, Expansion,
};
use mt_spectral::{eval_mt, BasisSpec};

use crate::registry;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Orthonormality,
    Coeffs,
    Decay,
    CompareHermite,
    Identities,
    PdeAdvect,
    RhoRegion,
}

impl Experiment {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "orthonormality" => Self::Orthonormality,
            "coeffs" => Self::Coeffs,
            "decay" => Self::Decay,
            "compare-hermite" => Self::CompareHermite,
            "identities" => Self::Identities,
            "pde-advect" => Self::PdeAdvect,
            "rho-region" => Self::RhoRegion,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub basis: BasisSpec,
    pub n: usize,
    pub function: String,
    pub t: f64,
    pub format: OutputFormat,
    pub assert_checks: bool,
    pub seed: u64,
}

/// One output cell; floats are rendered with 17 significant digits so that
/// identical configurations produce byte-identical files.
#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    Int(i64),
    Num(f64),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Num(v) => format!("{v:.16e}"),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::Text(s) => serde_json::Value::String(s.clone()),
            Cell::Int(i) => serde_json::json!(i),
            Cell::Num(v) => serde_json::json!(v),
        }
    }
}

pub struct Report {
    pub experiment: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Human-readable summary lines (fit parameters and the like).
    pub notes: Vec<String>,
    /// Failed numerical checks; non-empty plus `--assert` means exit 3.
    pub failed_checks: Vec<String>,
}

impl Report {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<serde_json::Value>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::to_json).collect())
            .collect();
        let value = serde_json::json!({
            "experiment": self.experiment,
            "columns": self.columns,
            "rows": rows,
            "notes": self.notes,
            "failed_checks": self.failed_checks,
        });
        serde_json::to_string_pretty(&value).expect("report serializes") + "\n"
    }
}

pub fn run(config: &ExperimentConfig) -> Result<Report, String> {
    match config.experiment {
        Experiment::Orthonormality => orthonormality(config),
        Experiment::Coeffs => coeffs(config),
        Experiment::Decay => decay(config),
        Experiment::CompareHermite => compare_hermite(config),
        Experiment::Identities => identities(config),
        Experiment::PdeAdvect => pde_advect(config),
        Experiment::RhoRegion => rho_region_sweep(config),
    }
}

fn function_entry(config: &ExperimentConfig) -> Result<&'static registry::RegistryEntry, String> {
    registry::lookup(&config.function).ok_or_else(|| {
        format!(
            "unknown function '{}' (try `mtspectral list`)",
            config.function
        )
    })
}

fn basis_label(spec: &BasisSpec) -> String {
    match spec {
        BasisSpec::Mt => "mt".into(),
        BasisSpec::GeneralMt(p) => format!(
            "gmt:{},{},{},{}",
            p.lambda().re,
            p.lambda().im,
            p.omega(),
            p.delta()
        ),
        BasisSpec::FourierLaguerre { alpha } => format!("fl:{alpha}"),
        BasisSpec::ShiftedHermite { alpha } => format!("hermite:{alpha}"),
    }
}

fn orthonormality(config: &ExperimentConfig) -> Result<Report, String> {
    let n = config.n as i64;
    let (lo, hi) = match config.basis {
        BasisSpec::Mt | BasisSpec::GeneralMt(_) => (-n, n - 1),
        _ => (0, n),
    };
    let m = 4096;
    let residual = orthonormality_residual(&config.basis, lo, hi, m).map_err(|e| e.to_string())?;
    let mut report = Report {
        experiment: "orthonormality",
        columns: vec!["basis", "n_min", "n_max", "quad_points", "max_residual"],
        rows: vec![vec![
            Cell::Text(basis_label(&config.basis)),
            Cell::Int(lo),
            Cell::Int(hi),
            Cell::Int(m as i64),
            Cell::Num(residual),
        ]],
        notes: vec![format!(
            "max Gram residual {residual:.3e} over [{lo}, {hi}]"
        )],
        failed_checks: Vec::new(),
    };
    if residual > 1e-8 {
        report
            .failed_checks
            .push(format!("Gram residual {residual:.3e} exceeds 1e-8"));
    }
    Ok(report)
}

fn coeffs(config: &ExperimentConfig) -> Result<Report, String> {
    if config.basis != BasisSpec::Mt {
        return Err("the fast transform is defined for the MT basis (`--basis mt`)".into());
    }
    let entry = function_entry(config)?;
    let f = entry.eval;
    let grid = make_grid(config.n).map_err(|e| e.to_string())?;
    let e = analyze(move |x| Complex64::new(f(x), 0.0), &grid);

    let rows = e
        .iter()
        .map(|(n, c)| {
            vec![
                Cell::Int(n),
                Cell::Num(c.norm()),
                Cell::Num(c.re),
                Cell::Num(c.im),
            ]
        })
        .collect();

    let mut failed = Vec::new();
    if config.assert_checks {
        // The transform must reproduce the slow quadrature oracle; for
        // functions with slowly decaying coefficients this fails at small N
        // because of aliasing, which is exactly what the check is for.
        for n in -4i64..=4 {
            let oracle = inner_product_quadrature(
                move |x| Complex64::new(f(x), 0.0),
                move |x| eval_mt(n, x),
                4096,
            );
            let got = e.coeff(n);
            if (got - oracle).norm() > 1e-8 {
                failed.push(format!(
                    "coefficient {n}: transform {got:.6e} vs quadrature {oracle:.6e}"
                ));
            }
        }
    }

    Ok(Report {
        experiment: "coeffs",
        columns: vec!["n", "abs_coeff", "re_coeff", "im_coeff"],
        rows,
        notes: vec![format!("{} coefficients of '{}'", 2 * config.n, entry.key)],
        failed_checks: failed,
    })
}

fn fit_note(
    label: &str,
    fit: &Result<mt_spectral::analysis::DecayFit, mt_spectral::Error>,
) -> String {
    match fit {
        Ok(fit) => {
            let params = match fit.model {
                FittedModel::Exponential { rho } => format!("rho={rho:.6}"),
                FittedModel::StretchedExp { c, p } => format!("c={c:.6} p={p:.6}"),
                FittedModel::Algebraic { q } => format!("q={q:.6}"),
            };
            format!(
                "{label}: {params} residual={:.6} window=[{}, {}]",
                fit.residual, fit.window.0, fit.window.1
            )
        }
        Err(e) => format!("{label}: not fittable ({e})"),
    }
}

fn decay(config: &ExperimentConfig) -> Result<Report, String> {
    let entry = function_entry(config)?;
    let f = entry.eval;
    let n = config.n as i64;
    // Oversampled transform so the emitted window is alias-free even for
    // slowly decaying coefficient sequences.
    let grid = make_grid(8 * config.n).map_err(|e| e.to_string())?;
    let e = analyze(move |x| Complex64::new(f(x), 0.0), &grid)
        .truncated(-n, n)
        .map_err(|e| e.to_string())?;

    let rows = e
        .iter()
        .map(|(idx, c)| {
            vec![
                Cell::Int(idx),
                Cell::Num(c.norm()),
                Cell::Num(c.re),
                Cell::Num(c.im),
            ]
        })
        .collect();

    // An unfittable window (too few coefficients above the noise floor)
    // still yields the coefficient table, just without model notes.
    let mags = match slower_tail(&e, DecayModel::Exponential)
        .or_else(|_| slower_tail(&e, DecayModel::Algebraic))
    {
        Ok(mags) => mags,
        Err(err) => {
            let mut failed = Vec::new();
            if config.assert_checks && entry.expected_decay.is_some() {
                failed.push(format!("no decay model could be fitted: {err}"));
            }
            return Ok(Report {
                experiment: "decay",
                columns: vec!["n", "abs_coeff", "re_coeff", "im_coeff"],
                rows,
                notes: vec![format!("decay models not fittable: {err}")],
                failed_checks: failed,
            });
        }
    };
    let fits = [
        (DecayModel::Exponential, "exponential"),
        (DecayModel::StretchedExp, "stretched-exp"),
        (DecayModel::Algebraic, "algebraic"),
    ]
    .map(|(model, label)| (model, label, fit_decay(&mags, model)));

    let mut notes: Vec<String> = fits
        .iter()
        .map(|(_, label, fit)| fit_note(label, fit))
        .collect();
    let best = fits
        .iter()
        .filter_map(|(model, label, fit)| fit.as_ref().ok().map(|f| (*model, *label, f.residual)))
        .min_by(|a, b| a.2.total_cmp(&b.2));
    if let Some((_, label, _)) = best {
        notes.push(format!("best model: {label}"));
    }

    let mut failed = Vec::new();
    if config.assert_checks {
        match (entry.expected_decay, best) {
            (Some(want), Some((got, label, _))) if want != got => {
                failed.push(format!("expected {want:?} decay, best fit is {label}"));
            }
            (Some(_), None) => failed.push("no model could be fitted".into()),
            _ => {}
        }
    }

    Ok(Report {
        experiment: "decay",
        columns: vec!["n", "abs_coeff", "re_coeff", "im_coeff"],
        rows,
        notes,
        failed_checks: failed,
    })
}

fn compare_hermite(config: &ExperimentConfig) -> Result<Report, String> {
    let entry = function_entry(config)?;
    let f = entry.eval;
    let fc = move |x: f64| Complex64::new(f(x), 0.0);
    let grid = make_grid(config.n).map_err(|e| e.to_string())?;
    let mt = analyze(fc, &grid);
    let hermite = hermite_analyze(fc, config.n.max(1), 0.0).map_err(|e| e.to_string())?;

    let xs: Vec<f64> = (-120..=120).map(|k| 0.05 * k as f64).collect();
    let err_mt = partial_sum_error(fc, &mt, &xs);
    let err_h = partial_sum_error(fc, &hermite, &xs);

    let rows = xs
        .iter()
        .zip(err_mt.iter().zip(&err_h))
        .map(|(&x, (&em, &eh))| vec![Cell::Num(x), Cell::Num(em), Cell::Num(eh)])
        .collect();

    let max_mt = err_mt.into_iter().fold(0.0, f64::max);
    let max_h = err_h.into_iter().fold(0.0, f64::max);
    let mut failed = Vec::new();
    if max_mt >= max_h {
        failed.push(format!(
            "MT max error {max_mt:.3e} does not beat Hermite {max_h:.3e}"
        ));
    }
    Ok(Report {
        experiment: "compare-hermite",
        columns: vec!["x", "error_mt", "error_hermite"],
        rows,
        notes: vec![format!(
            "max errors over [-6, 6]: MT {max_mt:.3e}, Hermite {max_h:.3e} (N = {})",
            config.n
        )],
        failed_checks: failed,
    })
}

fn identities(config: &ExperimentConfig) -> Result<Report, String> {
    let n = config.n.clamp(2, 256) as i64;
    let mut rng = StdRng::seed_from_u64(config.seed);
    let mut random_exp = |lo: i64, hi: i64| {
        let coeffs = (lo..=hi)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        Expansion::new(BasisSpec::Mt, lo, coeffs).expect("valid expansion")
    };
    let a = random_exp(-n, n - 1);
    let b = random_exp(-n, n - 1);

    let prod = mt_product(&a, &b).map_err(|e| e.to_string())?;
    let d = diff_op(&BasisSpec::Mt, -n - 1, n).map_err(|e| e.to_string())?;
    let da = d.apply(&a).map_err(|e| e.to_string())?.expansion;
    let xa = x_ddx_op(-n - 1, n)
        .apply(&a)
        .map_err(|e| e.to_string())?
        .expansion;
    let ca = cayley_weight_op(-n - 1, n)
        .apply(&a)
        .map_err(|e| e.to_string())?
        .expansion;

    let (mut r_prod, mut r_xddx, mut r_cayley) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let x: f64 = rng.random_range(-6.0..6.0);
        let sa = synthesize(&a, x);
        let sb = synthesize(&b, x);
        r_prod = r_prod.max((synthesize(&prod, x) - sa * sb).norm() / (sa * sb).norm().max(1e-6));
        r_xddx =
            r_xddx.max((synthesize(&xa, x) - x * synthesize(&da, x)).norm() / sa.norm().max(1e-6));
        let w = Complex64::new(0.0, 4.0 / (1.0 + 4.0 * x * x));
        r_cayley = r_cayley.max((synthesize(&ca, x) - w * sa).norm() / sa.norm().max(1e-6));
    }

    let entries = [
        ("product", r_prod),
        ("x_ddx", r_xddx),
        ("cayley_weight", r_cayley),
    ];
    let rows = entries
        .iter()
        .map(|(name, r)| vec![Cell::Text((*name).into()), Cell::Num(*r)])
        .collect();
    let failed = entries
        .iter()
        .filter(|(_, r)| *r > 1e-10)
        .map(|(name, r)| format!("{name} residual {r:.3e} exceeds 1e-10"))
        .collect();
    Ok(Report {
        experiment: "identities",
        columns: vec!["identity", "max_residual"],
        rows,
        notes: entries
            .iter()
            .map(|(name, r)| format!("{name}: max residual {r:.3e}"))
            .collect(),
        failed_checks: failed,
    })
}

fn pde_advect(config: &ExperimentConfig) -> Result<Report, String> {
    let entry = function_entry(config)?;
    let f = entry.eval;
    let fc = move |x: f64| Complex64::new(f(x), 0.0);
    let t = config.t;

    let mut sizes = Vec::new();
    let mut n = config.n.max(8);
    while n >= 8 {
        sizes.push(n);
        n /= 2;
    }
    sizes.reverse();
    sizes.truncate(4);

    let mut rows = Vec::new();
    let mut failed = Vec::new();
    let mut prev_err = f64::INFINITY;
    for &n in &sizes {
        let grid = make_grid(n).map_err(|e| e.to_string())?;
        let e = analyze(fc, &grid);
        let d = diff_op(&BasisSpec::Mt, -(n as i64), n as i64 - 1).map_err(|e| e.to_string())?;
        let out = propagate(&d, &e, t).map_err(|e| e.to_string())?;
        let drift = (out.norm() - e.norm()).abs();
        let mut err = 0.0f64;
        for k in 0..=120 {
            let x = -3.0 + 0.05 * k as f64;
            err = err.max((synthesize(&out, x) - fc(x + t)).norm());
        }
        rows.push(vec![Cell::Int(n as i64), Cell::Num(drift), Cell::Num(err)]);
        if drift > 1e-12 {
            failed.push(format!("N={n}: norm drift {drift:.3e} exceeds 1e-12"));
        }
        if err >= prev_err {
            failed.push(format!("N={n}: shift error {err:.3e} did not decrease"));
        }
        prev_err = err;
    }

    Ok(Report {
        experiment: "pde-advect",
        columns: vec!["N", "norm_drift", "shift_error"],
        rows,
        notes: vec![format!("advection of '{}' over t = {t}", entry.key)],
        failed_checks: failed,
    })
}

fn rho_region_sweep(_config: &ExperimentConfig) -> Result<Report, String> {
    let mut rows = Vec::new();
    let mut prev_radius = f64::INFINITY;
    let mut failed = Vec::new();
    for k in 0..=16 {
        let rho = 1.05 * 2f64.powf(k as f64 / 4.0);
        let region = rho_region(rho).map_err(|e| e.to_string())?;
        if region.radius >= prev_radius {
            failed.push(format!("radius not decreasing at rho = {rho}"));
        }
        prev_radius = region.radius;
        rows.push(vec![
            Cell::Num(rho),
            Cell::Num(region.center.im),
            Cell::Num(region.radius),
        ]);
    }
    Ok(Report {
        experiment: "rho-region",
        columns: vec!["rho", "center_im", "radius"],
        rows,
        notes: vec!["analyticity discs for geometric decay rates".into()],
        failed_checks: failed,
    })
}
