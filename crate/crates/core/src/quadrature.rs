//! Product quadrature on the unit ball for `∫ f(x) (1-‖x‖²)^α dx`.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::par::Execution;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Nodes and weights of a one-dimensional rule.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Orthonormal Jacobi polynomials `p_0..p_n` at `t`, with the derivative of `p_n`.
fn orthonormal_jacobi(n: usize, a: f64, b: f64, t: f64, sq_sum: &mut f64) -> (f64, f64) {
    let ab = a + b;
    let h0 = ((ab + 1.0) * 2f64.ln() + ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(ab + 2.0)).exp();
    let diag = |k: usize| -> f64 {
        let k = k as f64;
        if k == 0.0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * k + ab) * (2.0 * k + ab + 2.0))
        }
    };
    let off = |k: usize| -> f64 {
        // Coupling between degrees k-1 and k, k ≥ 1.
        let kf = k as f64;
        if k == 1 {
            2.0 / (2.0 + ab) * ((1.0 + a) * (1.0 + b) / (3.0 + ab)).sqrt()
        } else {
            let s = 2.0 * kf + ab;
            2.0 / s * (kf * (kf + a) * (kf + b) * (kf + ab) / ((s - 1.0) * (s + 1.0))).sqrt()
        }
    };
    let mut prev = 0.0;
    let mut dprev = 0.0;
    let mut cur = 1.0 / h0.sqrt();
    let mut dcur = 0.0;
    *sq_sum = 0.0;
    for k in 0..n {
        *sq_sum += cur * cur;
        let bk1 = off(k + 1);
        let bk = if k == 0 { 0.0 } else { off(k) };
        let next = ((t - diag(k)) * cur - bk * prev) / bk1;
        let dnext = (cur + (t - diag(k)) * dcur - bk * dprev) / bk1;
        prev = cur;
        dprev = dcur;
        cur = next;
        dcur = dnext;
    }
    (cur, dcur)
}

/// Gauss–Jacobi rule for the weight `(1-t)^a (1+t)^b` on `[-1, 1]`,
/// exact for polynomials of degree `2n - 1`. Nodes ascend.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<Rule1d> {
    if a <= -1.0 || b <= -1.0 {
        return Err(Error::JacobiParameters {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    let mut nodes: Vec<f64> = Vec::with_capacity(n);
    let mut scratch = 0.0;
    for i in 0..n {
        // Asymptotic guess for the i-th largest zero.
        let theta = PI * (i as f64 + 0.75 + 0.5 * a) / (n as f64 + 0.5 * (a + b + 1.0));
        let mut t = theta.cos();
        if i > 0 {
            // Keep the guess strictly left of the previous zero.
            t = t.min(nodes[i - 1] - 1e-12);
        }
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = orthonormal_jacobi(n, a, b, t, &mut scratch);
            let defl: f64 = nodes.iter().map(|z| 1.0 / (t - z)).sum();
            let step = p / (dp - p * defl);
            t -= step;
            if step.abs() <= NEWTON_TOL * t.abs().max(1.0) {
                break;
            }
        }
        nodes.push(t);
    }
    nodes.reverse();
    let weights = nodes
        .iter()
        .map(|&t| {
            let mut s = 0.0;
            orthonormal_jacobi(n, a, b, t, &mut s);
            1.0 / s
        })
        .collect();
    Ok(Rule1d { nodes, weights })
}

/// Radial rule: `Σ w_i f(r_i²) ≈ ∫_0^1 f(r²) (1-r²)^α r^{d-1} dr`, exact
/// for `f` polynomial of degree `2 n_nodes - 1`. Returns radii.
pub fn radial_rule(n_nodes: usize, alpha: f64, d: usize) -> Result<Rule1d> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    let beta = (d as f64 - 2.0) / 2.0;
    let gj = gauss_jacobi(n_nodes, alpha, beta)?;
    let scale = 2f64.powf(-alpha - beta - 2.0);
    Ok(Rule1d {
        nodes: gj.nodes.iter().map(|t| ((1.0 + t) / 2.0).sqrt()).collect(),
        weights: gj.weights.iter().map(|w| w * scale).collect(),
    })
}

/// Points on `𝕊^{d-1}` (flattened, stride `d`) with weights.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereRule {
    pub d: usize,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Smallest multiple of 4 that is at least `k`.
fn next_multiple_of_four(k: usize) -> usize {
    k.div_ceil(4).max(1) * 4
}

/// Rule on the sphere exact for polynomials of total degree `degree`.
/// Angles are offset by half a step so that no node lies on a coordinate plane.
pub fn sphere_rule(d: usize, degree: usize) -> Result<SphereRule> {
    match d {
        1 => Ok(SphereRule {
            d,
            points: vec![-1.0, 1.0],
            weights: vec![1.0, 1.0],
        }),
        2 => {
            let m = next_multiple_of_four(degree + 1);
            let mut points = Vec::with_capacity(2 * m);
            for j in 0..m {
                let th = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                points.extend([th.cos(), th.sin()]);
            }
            Ok(SphereRule {
                d,
                points,
                weights: vec![2.0 * PI / m as f64; m],
            })
        }
        3 => {
            let gl = gauss_jacobi(degree / 2 + 1, 0.0, 0.0)?;
            let m = next_multiple_of_four(degree + 1);
            let mut points = Vec::new();
            let mut weights = Vec::new();
            for (z, wz) in gl.nodes.iter().zip(&gl.weights) {
                let rho = (1.0 - z * z).max(0.0).sqrt();
                for j in 0..m {
                    let ph = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                    points.extend([rho * ph.cos(), rho * ph.sin(), *z]);
                    weights.push(wz * 2.0 * PI / m as f64);
                }
            }
            Ok(SphereRule { d, points, weights })
        }
        _ => Err(Error::UnsupportedDimension(d)),
    }
}

/// Ball rule whose weights absorb `(1-‖x‖²)^α`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadRule {
    pub d: usize,
    pub alpha: f64,
    /// Flattened nodes, stride `d`.
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    pub exact_degree: usize,
}

impl QuadRule {
    /// Rule exact for all polynomials of total degree `exact_degree`.
    pub fn new(d: usize, alpha: f64, exact_degree: usize) -> Result<Self> {
        let radial = radial_rule(exact_degree.div_ceil(2) + 1, alpha, d)?;
        let sphere = sphere_rule(d, exact_degree)?;
        let mut points = Vec::with_capacity(radial.nodes.len() * sphere.points.len());
        let mut weights = Vec::with_capacity(radial.nodes.len() * sphere.weights.len());
        for (r, wr) in radial.nodes.iter().zip(&radial.weights) {
            for (omega, ws) in sphere.points.chunks(d).zip(&sphere.weights) {
                points.extend(omega.iter().map(|c| r * c));
                weights.push(wr * ws);
            }
        }
        Ok(QuadRule {
            d,
            alpha,
            points,
            weights,
            exact_degree,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, k: usize) -> &[f64] {
        &self.points[k * self.d..(k + 1) * self.d]
    }

    /// `Σ w_k`, an approximation of `c_α`.
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn require_degree(&self, need: usize) -> Result<()> {
        if self.exact_degree < need {
            return Err(Error::QuadratureTooCoarse {
                have: self.exact_degree,
                need,
            });
        }
        Ok(())
    }
}

/// `Σ w_k f(x_k)`, summed in node order.
pub fn ball_integrate<F>(f: F, rule: &QuadRule) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    ball_integrate_with(f, rule, Execution::Sequential)
}

pub fn ball_integrate_with<F>(f: F, rule: &QuadRule, exec: Execution) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    let vals = exec.map_range(rule.len(), |k| rule.weights[k] * f(rule.point(k)));
    vals.iter().sum()
}
