//! Convergence experiments for the Lebesgue and Sobolev projectors.

use std::fmt;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::measure::Alpha;
use crate::par::Execution;
use crate::poly::{parse_rational, MPoly};
use crate::quadrature::QuadRule;
use crate::spectral::{expansion_coefficients, sample_function, Dual, Family, FuncSample, SampledBasis};

/// Default slope of `exp_x1`; large enough that the decay is visible well
/// above the floating-point floor at moderate degrees.
pub const DEFAULT_EXP_RATE: f64 = 4.0;

/// Registered test functions.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionId {
    /// `exp(c x1)`.
    ExpX1(f64),
    /// `|x1|`.
    AbsX1,
    /// `(1 - ‖x‖²)^s`, `s ≥ 1`.
    WeightPower(f64),
    /// Polynomial given as text.
    Custom(MPoly),
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionId::ExpX1(c) => write!(f, "exp_x1({c})"),
            FunctionId::AbsX1 => write!(f, "abs_x1"),
            FunctionId::WeightPower(s) => write!(f, "weight_power({s})"),
            FunctionId::Custom(p) => write!(f, "{p}"),
        }
    }
}

fn call_arg(s: &str, name: &str) -> Option<Result<Option<f64>>> {
    let rest = s.strip_prefix(name)?;
    if rest.is_empty() {
        return Some(Ok(None));
    }
    let inner = rest.strip_prefix('(')?.strip_suffix(')')?;
    Some(
        inner
            .trim()
            .parse::<f64>()
            .map(Some)
            .map_err(|_| Error::UnknownFunction(s.to_string())),
    )
}

impl FunctionId {
    /// Parses `exp_x1`, `exp_x1(c)`, `abs_x1`, `weight_power(s)`, or a
    /// polynomial in `x1..xd`.
    pub fn parse(s: &str, dim: usize) -> Result<Self> {
        let s = s.trim();
        if let Some(arg) = call_arg(s, "exp_x1") {
            return Ok(FunctionId::ExpX1(arg?.unwrap_or(DEFAULT_EXP_RATE)));
        }
        if s == "abs_x1" {
            return Ok(FunctionId::AbsX1);
        }
        if let Some(arg) = call_arg(s, "weight_power") {
            let sp = arg?.ok_or_else(|| Error::UnknownFunction(s.to_string()))?;
            if sp.is_nan() || sp < 1.0 {
                return Err(Error::InvalidConfig(format!(
                    "weight_power needs s >= 1 for a bounded gradient, got {sp}"
                )));
            }
            return Ok(FunctionId::WeightPower(sp));
        }
        MPoly::parse(dim, s)
            .map(FunctionId::Custom)
            .map_err(|_| Error::UnknownFunction(s.to_string()))
    }

    /// Declared smoothness order `m`; `None` means arbitrarily smooth.
    ///
    /// `|x1|` has one derivative in `L²_α` and no second. For the weight
    /// power, `∇^k u` behaves like `(1-‖x‖²)^{s-k}` near the sphere, which is
    /// square integrable against `W_α` iff `k < s + (α+1)/2`.
    pub fn smoothness(&self, a: &Alpha) -> Option<u32> {
        match self {
            FunctionId::ExpX1(_) | FunctionId::Custom(_) => None,
            FunctionId::AbsX1 => Some(1),
            FunctionId::WeightPower(s) => {
                let bound = s + (a.to_f64() + 1.0) / 2.0;
                Some((bound.ceil() - 1.0).max(0.0) as u32)
            }
        }
    }

    pub fn sample(&self, dim: usize) -> FuncSample {
        match self.clone() {
            FunctionId::ExpX1(c) => FuncSample::new(dim, move |x| (c * x[0]).exp()).with_gradient(move |x, g| {
                g.fill(0.0);
                g[0] = c * (c * x[0]).exp();
            }),
            FunctionId::AbsX1 => FuncSample::new(dim, |x| x[0].abs()).with_gradient(|x, g| {
                g.fill(0.0);
                g[0] = if x[0] > 0.0 {
                    1.0
                } else if x[0] < 0.0 {
                    -1.0
                } else {
                    0.0
                };
            }),
            FunctionId::WeightPower(s) => {
                let w = |x: &[f64]| (1.0 - x.iter().map(|v| v * v).sum::<f64>()).max(0.0);
                FuncSample::new(dim, move |x| w(x).powf(s)).with_gradient(move |x, g| {
                    let f = -2.0 * s * w(x).powf(s - 1.0);
                    for (gi, xi) in g.iter_mut().zip(x) {
                        *gi = f * xi;
                    }
                })
            }
            FunctionId::Custom(p) => FuncSample::from_poly(&p),
        }
    }
}

/// Projector used by an experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProjectorChoice {
    Lebesgue,
    Sobolev,
}

impl ProjectorChoice {
    pub fn family(self) -> Family {
        match self {
            ProjectorChoice::Lebesgue => Family::Lebesgue,
            ProjectorChoice::Sobolev => Family::Sobolev,
        }
    }
}

impl std::str::FromStr for ProjectorChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lebesgue" => Ok(ProjectorChoice::Lebesgue),
            "sobolev" => Ok(ProjectorChoice::Sobolev),
            _ => Err(Error::InvalidConfig(format!("unknown projector {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub alpha: Alpha,
    pub nmax: usize,
    pub function: FunctionId,
    pub projector: ProjectorChoice,
}

impl ExperimentConfig {
    /// Validates and assembles a configuration from textual fields.
    pub fn new(d: usize, alpha: &str, nmax: usize, function: &str, projector: &str) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(Error::UnsupportedDimension(d));
        }
        let alpha = Alpha::new(d, parse_rational(alpha)?)?;
        if nmax < 2 {
            return Err(Error::InvalidConfig(format!("nmax must be at least 2, got {nmax}")));
        }
        Ok(ExperimentConfig {
            alpha,
            nmax,
            function: FunctionId::parse(function, d)?,
            projector: projector.parse()?,
        })
    }

    pub fn dim(&self) -> usize {
        self.alpha.dim()
    }

    /// Degree of the quadrature rule used for the sweep.
    pub fn quadrature_degree(&self) -> usize {
        2 * self.nmax + 4
    }
}

/// Errors of one projection degree, all normalized by `c_α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRecord {
    pub n: usize,
    /// `‖u - Pu‖_α`.
    pub err_l2: f64,
    /// `‖∇u - ∇Pu‖_α`.
    pub err_grad: f64,
    /// `‖u - Pu‖_{α,1}`.
    pub err_sob: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    L2,
    Grad,
    Sob,
}

impl ConvergenceRecord {
    pub fn get(&self, c: Column) -> f64 {
        match c {
            Column::L2 => self.err_l2,
            Column::Grad => self.err_grad,
            Column::Sob => self.err_sob,
        }
    }
}

pub fn run_convergence(cfg: &ExperimentConfig) -> Result<Vec<ConvergenceRecord>> {
    run_convergence_with(cfg, Execution::default())
}

/// Errors for `N = 2..=nmax`. The expansion coefficients do not depend on
/// `N`, so one sweep accumulates every partial sum.
pub fn run_convergence_with(cfg: &ExperimentConfig, exec: Execution) -> Result<Vec<ConvergenceRecord>> {
    let d = cfg.dim();
    let rule = QuadRule::new(d, cfg.alpha.to_f64(), cfg.quadrature_degree())?;
    let u = cfg.function.sample(d);
    u.check_gradient()?;
    let basis = SampledBasis::new(cfg.projector.family(), &cfg.alpha, cfg.nmax, &rule, exec)?;
    let samples = sample_function(&u, &rule, exec)?;
    let coefs = expansion_coefficients(&basis, &samples, &rule, exec);
    let total = rule.total_weight();

    let mut residual: Vec<Dual> = samples;
    let mut out = Vec::with_capacity(cfg.nmax.saturating_sub(1));
    let mut start = 0;
    for n in 0..=cfg.nmax {
        let end = start + basis.elements[start..].iter().take_while(|e| e.degree == n).count();
        let block = start..end;
        residual = exec.map_range(residual.len(), |k| {
            let mut r = residual[k];
            for e in block.clone() {
                let b = basis.values[e][k];
                r.v -= coefs[e] * b.v;
                for i in 0..3 {
                    r.g[i] -= coefs[e] * b.g[i];
                }
            }
            r
        });
        start = end;
        if n < 2 {
            continue;
        }
        let (mut l2, mut grad, mut mean) = (0.0, 0.0, 0.0);
        for (r, w) in residual.iter().zip(&rule.weights) {
            l2 += w * r.v * r.v;
            grad += w * (r.g[0] * r.g[0] + r.g[1] * r.g[1] + r.g[2] * r.g[2]);
            mean += w * r.v;
        }
        let (l2, grad, mean) = (l2 / total, grad / total, mean / total);
        out.push(ConvergenceRecord {
            n,
            err_l2: l2.max(0.0).sqrt(),
            err_grad: grad.max(0.0).sqrt(),
            err_sob: (grad + mean * mean).max(0.0).sqrt(),
        });
    }
    Ok(out)
}

/// Least-squares slope of `log(err)` against `log(N)`. Non-positive errors
/// are skipped.
pub fn fit_slope(records: &[ConvergenceRecord], column: Column) -> Result<f64> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.get(column) > 0.0 && r.n > 0)
        .map(|r| ((r.n as f64).ln(), r.get(column).ln()))
        .collect();
    if pts.len() < 4 {
        return Err(Error::TooFewPoints { need: 4, got: pts.len() });
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx)
}

pub const CSV_HEADER: &str = "N,err_L2,err_grad,err_sob";

/// CSV text with shortest round-trip floats.
pub fn report_csv(records: &[ConvergenceRecord]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in records {
        s.push_str(&format!("{},{:?},{:?},{:?}\n", r.n, r.err_l2, r.err_grad, r.err_sob));
    }
    s
}

/// Parses text produced by [`report_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<ConvergenceRecord>> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::InvalidConfig("missing CSV header".into()));
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            let bad = || Error::InvalidConfig(format!("bad CSV row {l:?}"));
            if f.len() != 4 {
                return Err(bad());
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
            Ok(ConvergenceRecord {
                n: f[0].parse().map_err(|_| bad())?,
                err_l2: num(f[1])?,
                err_grad: num(f[2])?,
                err_sob: num(f[3])?,
            })
        })
        .collect()
}

pub fn emit_report(records: &[ConvergenceRecord], path: &Path) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(report_csv(records).as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn synth(f: impl Fn(f64) -> f64) -> Vec<ConvergenceRecord> {
        (2..=20)
            .map(|n| {
                let e = f(n as f64);
                ConvergenceRecord { n, err_l2: e, err_grad: e, err_sob: e }
            })
            .collect()
    }

    #[test]
    fn slopes_of_power_laws() {
        let s = fit_slope(&synth(|n| n.powi(-2)), Column::L2).unwrap();
        assert!((s + 2.0).abs() < 1e-10);
        let s = fit_slope(&synth(|n| 7.5 * n.powi(-3)), Column::Grad).unwrap();
        assert!((s + 3.0).abs() < 1e-10);
        let few = &synth(|n| n)[..3];
        assert_eq!(fit_slope(few, Column::Sob), Err(Error::TooFewPoints { need: 4, got: 3 }));
        let zeros = synth(|_| 0.0);
        assert!(fit_slope(&zeros, Column::L2).is_err());
    }

    #[test]
    fn function_parsing() {
        assert_eq!(FunctionId::parse("exp_x1", 2).unwrap(), FunctionId::ExpX1(DEFAULT_EXP_RATE));
        assert_eq!(FunctionId::parse("exp_x1(1.5)", 2).unwrap(), FunctionId::ExpX1(1.5));
        assert_eq!(FunctionId::parse("abs_x1", 3).unwrap(), FunctionId::AbsX1);
        assert_eq!(FunctionId::parse("weight_power(2)", 2).unwrap(), FunctionId::WeightPower(2.0));
        assert!(FunctionId::parse("weight_power(0.5)", 2).is_err());
        assert!(matches!(FunctionId::parse("x1^2 - x2", 2).unwrap(), FunctionId::Custom(_)));
        assert!(matches!(FunctionId::parse("sin_x1", 2), Err(Error::UnknownFunction(_))));
    }

    #[test]
    fn smoothness_orders() {
        let a0 = Alpha::new(2, rat(0, 1)).unwrap();
        assert_eq!(FunctionId::AbsX1.smoothness(&a0), Some(1));
        assert_eq!(FunctionId::ExpX1(1.0).smoothness(&a0), None);
        // s + 1/2 = 2.5 → k ∈ {0, 1, 2}.
        assert_eq!(FunctionId::WeightPower(2.0).smoothness(&a0), Some(2));
        // s + 1/2 = 2 exactly → k < 2.
        assert_eq!(FunctionId::WeightPower(1.5).smoothness(&a0), Some(1));
    }

    #[test]
    fn sampled_functions_have_consistent_gradients() {
        for f in ["exp_x1", "abs_x1", "weight_power(1.5)", "x1^3*x2 - 2"] {
            FunctionId::parse(f, 2).unwrap().sample(2).check_gradient().unwrap();
        }
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::new(2, "0", 1, "abs_x1", "sobolev").is_err());
        assert!(ExperimentConfig::new(4, "0", 8, "abs_x1", "sobolev").is_err());
        assert!(ExperimentConfig::new(2, "-1", 8, "abs_x1", "sobolev").is_err());
        assert!(ExperimentConfig::new(2, "1/2", 8, "abs_x1", "galerkin").is_err());
        assert!(ExperimentConfig::new(2, "1/2", 8, "abs_x1", "lebesgue").is_ok());
    }

    #[test]
    fn polynomial_is_reproduced() {
        let cfg = ExperimentConfig::new(2, "0", 7, "x1^5 - 3*x1*x2^2 + x2", "sobolev").unwrap();
        let recs = run_convergence(&cfg).unwrap();
        assert_eq!(recs.len(), 6);
        for r in recs.iter().filter(|r| r.n >= 5) {
            assert!(r.err_l2 <= 1e-10 && r.err_grad <= 1e-10 && r.err_sob <= 1e-10);
        }
        assert!(recs[0].err_l2 > 1e-3);
    }

    #[test]
    fn csv_format() {
        assert_eq!(report_csv(&[]), "N,err_L2,err_grad,err_sob\n");
        let recs = synth(|n| 1.0 / n)[..3].to_vec();
        let text = report_csv(&recs);
        assert_eq!(text.lines().count(), 4);
        assert_eq!(text.lines().nth(1), Some("2,0.5,0.5,0.5"));
        assert_eq!(parse_csv(&text).unwrap(), recs);
    }

    #[test]
    fn modes_give_identical_records() {
        let cfg = ExperimentConfig::new(2, "1/2", 10, "abs_x1", "lebesgue").unwrap();
        let a = run_convergence_with(&cfg, Execution::Sequential).unwrap();
        let b = run_convergence_with(&cfg, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
