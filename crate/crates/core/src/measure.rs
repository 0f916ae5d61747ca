//! Weighted inner products on the unit ball, evaluated exactly.
//!
//! Every quantity here is divided by the total mass `c_α = ∫_{B^d} W_α`, so
//! that polynomial inner products stay rational. The single cross-measure
//! constant `c_{α+1}/c_α = (α+1)/(d/2+α+1)` is applied wherever the
//! `(α+1)`-weighted measure appears.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::diffops::angular_d;
use crate::error::{Error, Result};
use crate::poly::{fmt_rational, int, rational_to_f64, MPoly, MultiIndex, Rational};

/// Dimension `d ≥ 1` together with a weight exponent `α > -1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alpha {
    d: usize,
    alpha: Rational,
}

impl Alpha {
    pub fn new(d: usize, alpha: Rational) -> Result<Self> {
        if d == 0 {
            return Err(Error::ZeroDimension);
        }
        if alpha <= int(-1) {
            return Err(Error::AlphaOutOfRange(fmt_rational(&alpha)));
        }
        Ok(Alpha { d, alpha })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn value(&self) -> &Rational {
        &self.alpha
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.alpha)
    }

    /// `α + 1`; always admissible.
    pub fn raised(&self) -> Alpha {
        Alpha {
            d: self.d,
            alpha: &self.alpha + int(1),
        }
    }

    /// `α - 1`, if it is still an admissible weight exponent.
    pub fn lowered(&self) -> Result<Alpha> {
        Alpha::new(self.d, &self.alpha - int(1))
    }

    /// `c_{α+1} / c_α = (α+1) / (d/2 + α + 1)`.
    pub fn mass_ratio(&self) -> Rational {
        let a1 = &self.alpha + int(1);
        let den = Rational::new(BigInt::from(self.d), BigInt::from(2)) + &a1;
        a1 / den
    }

    /// Absolute total mass `c_α = π^{d/2} Γ(α+1) / Γ(d/2+α+1)`.
    pub fn total_mass(&self) -> f64 {
        use statrs::function::gamma::ln_gamma;
        let a = self.to_f64();
        let h = self.d as f64 / 2.0;
        (h * std::f64::consts::PI.ln() + ln_gamma(a + 1.0) - ln_gamma(h + a + 1.0)).exp()
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} alpha={}", self.d, fmt_rational(&self.alpha))
    }
}

/// Memoized normalized moments `(1/c_α) ∫ x^γ W_α` for one `(d, α)`.
///
/// For `γ = 2β` the moment is `∏ (2β_i-1)!! / ∏_{k<|β|} (d+2α+2+2k)`; it
/// vanishes when any `γ_i` is odd. The table is guarded, so concurrent
/// readers always observe fully computed entries.
#[derive(Debug)]
pub struct MomentCache {
    alpha: Alpha,
    /// `radial[k] = 1 / ∏_{j<k} (d + 2α + 2 + 2j)`.
    radial: RwLock<Vec<Rational>>,
    /// `∏ (2β_i - 1)!!` keyed by the half-index `β`.
    dfact: RwLock<HashMap<MultiIndex, BigInt>>,
}

type Registry = Mutex<HashMap<Alpha, Arc<MomentCache>>>;

fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

impl MomentCache {
    pub fn new(alpha: Alpha) -> Self {
        MomentCache {
            alpha,
            radial: RwLock::new(vec![Rational::one()]),
            dfact: RwLock::new(HashMap::new()),
        }
    }

    /// Process-wide cache for `alpha`, created on first use.
    pub fn shared(alpha: &Alpha) -> Arc<MomentCache> {
        let mut reg = registry().lock().expect("moment registry poisoned");
        reg.entry(alpha.clone())
            .or_insert_with(|| Arc::new(MomentCache::new(alpha.clone())))
            .clone()
    }

    pub fn alpha(&self) -> &Alpha {
        &self.alpha
    }

    fn radial_factor(&self, k: usize) -> Rational {
        if let Some(r) = self.radial.read().expect("poisoned").get(k) {
            return r.clone();
        }
        let mut table = self.radial.write().expect("poisoned");
        let two = int(2);
        let base = int(self.alpha.d as i64) + &two * &self.alpha.alpha + &two;
        while table.len() <= k {
            let j = table.len() - 1;
            let factor = &base + int(2 * j as i64);
            let next = &table[j] / factor;
            table.push(next);
        }
        table[k].clone()
    }

    fn double_factorials(&self, beta: &MultiIndex) -> BigInt {
        if let Some(v) = self.dfact.read().expect("poisoned").get(beta) {
            return v.clone();
        }
        let v = beta.exps().iter().fold(BigInt::one(), |acc, &b| {
            // (2b-1)!! = 1·3·...·(2b-1)
            (1..b).fold(acc, |acc, i| acc * BigInt::from(2 * i + 1))
        });
        self.dfact
            .write()
            .expect("poisoned")
            .insert(beta.clone(), v.clone());
        v
    }

    /// Normalized moment of `x^γ`.
    pub fn moment(&self, gamma: &MultiIndex) -> Rational {
        if !gamma.is_even() {
            return Rational::zero();
        }
        let beta = half(gamma);
        let k = beta.degree() as usize;
        self.radial_factor(k) * Rational::from_integer(self.double_factorials(&beta))
    }

    /// `⟨p, q⟩_α / c_α` for polynomials already brought to integer form.
    fn inner_scaled(&self, p: &ScaledPoly, q: &ScaledPoly) -> Rational {
        if p.terms.is_empty() || q.terms.is_empty() {
            return Rational::zero();
        }
        let mut by_beta: HashMap<MultiIndex, BigInt> = HashMap::new();
        for (a, ca) in &p.terms {
            for (b, cb) in &q.terms {
                // Parity in every coordinate must match for a non-zero moment.
                if a.exps().iter().zip(b.exps()).any(|(x, y)| (x + y) % 2 != 0) {
                    continue;
                }
                let beta = MultiIndex::new(
                    &a.exps()
                        .iter()
                        .zip(b.exps())
                        .map(|(x, y)| (x + y) / 2)
                        .collect::<SmallVec<[u32; 4]>>(),
                );
                let prod = ca * cb;
                by_beta
                    .entry(beta)
                    .and_modify(|acc| *acc += &prod)
                    .or_insert(prod);
            }
        }
        let mut by_degree: Vec<BigInt> = Vec::new();
        for (beta, acc) in by_beta {
            if acc.is_zero() {
                continue;
            }
            let k = beta.degree() as usize;
            if by_degree.len() <= k {
                by_degree.resize(k + 1, BigInt::zero());
            }
            by_degree[k] += acc * self.double_factorials(&beta);
        }
        let mut total = Rational::zero();
        for (k, s) in by_degree.into_iter().enumerate() {
            if !s.is_zero() {
                total += self.radial_factor(k) * Rational::from_integer(s);
            }
        }
        total / Rational::from_integer(&p.den * &q.den)
    }
}

fn half(gamma: &MultiIndex) -> MultiIndex {
    MultiIndex::new(
        &gamma
            .exps()
            .iter()
            .map(|e| e / 2)
            .collect::<SmallVec<[u32; 4]>>(),
    )
}

/// Polynomial with integer coefficients over one common denominator.
struct ScaledPoly {
    terms: Vec<(MultiIndex, BigInt)>,
    den: BigInt,
}

impl ScaledPoly {
    fn from(p: &MPoly) -> Self {
        let den = p.common_denominator();
        let terms = p
            .terms()
            .map(|(m, c)| {
                let n = c.numer() * (&den / c.denom());
                (m.clone(), n)
            })
            .collect();
        ScaledPoly { terms, den }
    }
}

fn check_dims(p: &MPoly, q: &MPoly, a: &Alpha) {
    assert!(
        p.dim() == a.dim() && q.dim() == a.dim(),
        "dimension mismatch: {} and {} under {}",
        p.dim(),
        q.dim(),
        a
    );
}

/// `(1/c_α) ∫_{B^d} x^γ W_α(x) dx`.
pub fn normalized_moment(gamma: &MultiIndex, a: &Alpha) -> Rational {
    MomentCache::shared(a).moment(gamma)
}

/// `⟨p, q⟩_α / c_α`.
pub fn inner_alpha(p: &MPoly, q: &MPoly, a: &Alpha) -> Rational {
    check_dims(p, q, a);
    MomentCache::shared(a).inner_scaled(&ScaledPoly::from(p), &ScaledPoly::from(q))
}

/// `⟨p, q⟩_{α+1} / c_α`: the `(α+1)`-weighted product, still normalized by `c_α`.
pub fn inner_alpha_raised(p: &MPoly, q: &MPoly, a: &Alpha) -> Rational {
    inner_alpha(p, q, &a.raised()) * a.mass_ratio()
}

/// `⟨∇p, ∇q⟩_α / c_α`.
pub fn inner_grad(p: &MPoly, q: &MPoly, a: &Alpha) -> Rational {
    check_dims(p, q, a);
    let cache = MomentCache::shared(a);
    (0..a.dim())
        .map(|i| {
            let dp = p.diff(i).expect("axis in range");
            let dq = q.diff(i).expect("axis in range");
            cache.inner_scaled(&ScaledPoly::from(&dp), &ScaledPoly::from(&dq))
        })
        .fold(Rational::zero(), |acc, v| acc + v)
}

/// Mean value `⟨p, 1⟩_α / c_α`.
pub fn mean(p: &MPoly, a: &Alpha) -> Rational {
    let cache = MomentCache::shared(a);
    p.terms()
        .map(|(m, c)| c * cache.moment(m))
        .fold(Rational::zero(), |acc, v| acc + v)
}

/// `‖∇^k p‖²_α / c_α`, summed over all ordered `k`-tuples of partials.
pub fn seminorm_sq(p: &MPoly, k: usize, a: &Alpha) -> Rational {
    let cache = MomentCache::shared(a);
    let mut layer = vec![p.clone()];
    for _ in 0..k {
        layer = layer
            .iter()
            .flat_map(|q| q.gradient())
            .filter(|q| !q.is_zero())
            .collect();
    }
    layer
        .iter()
        .map(|q| {
            let s = ScaledPoly::from(q);
            cache.inner_scaled(&s, &s)
        })
        .fold(Rational::zero(), |acc, v| acc + v)
}

/// `⟨p, q⟩_{α,1} / c_α = ⟨∇p,∇q⟩_α/c_α + (⟨p,1⟩_α/c_α)(⟨1,q⟩_α/c_α)`.
pub fn inner_sobolev(p: &MPoly, q: &MPoly, a: &Alpha) -> Rational {
    inner_grad(p, q, a) + mean(p, a) * mean(q, a)
}

/// Sobolev product with a balancing constant on the gradient term:
/// `ρ⟨∇p,∇q⟩_α/c_α + (⟨p,1⟩_α/c_α)(⟨1,q⟩_α/c_α)`.
pub fn inner_sobolev_scaled(p: &MPoly, q: &MPoly, a: &Alpha, rho: &Rational) -> Rational {
    rho * inner_grad(p, q, a) + mean(p, a) * mean(q, a)
}

/// `B^α(p, q) / c_α = ⟨∇p,∇q⟩_{α+1}/c_α + Σ_{i<j} ⟨D_{i,j}p, D_{i,j}q⟩_α/c_α`.
pub fn bform_alpha(p: &MPoly, q: &MPoly, a: &Alpha) -> Rational {
    check_dims(p, q, a);
    let d = a.dim();
    let grad = inner_grad(p, q, &a.raised()) * a.mass_ratio();
    let cache = MomentCache::shared(a);
    let mut angular = Rational::zero();
    for i in 0..d {
        for j in (i + 1)..d {
            let dp = angular_d(p, i, j);
            if dp.is_zero() {
                continue;
            }
            let dq = angular_d(q, i, j);
            angular += cache.inner_scaled(&ScaledPoly::from(&dp), &ScaledPoly::from(&dq));
        }
    }
    grad + angular
}

/// `B^{α,1}(p, q) / c_α = Σ_k B^α(∂_k p, ∂_k q) / c_α`.
pub fn bform_sobolev(p: &MPoly, q: &MPoly, a: &Alpha) -> Rational {
    check_dims(p, q, a);
    (0..a.dim())
        .map(|k| {
            bform_alpha(
                &p.diff(k).expect("axis in range"),
                &q.diff(k).expect("axis in range"),
                a,
            )
        })
        .fold(Rational::zero(), |acc, v| acc + v)
}

/// Eigenvalue `λ^(α)_n = n(n + d + 2α)` of the ball Sturm–Liouville operator.
pub fn lambda(n: i64, a: &Alpha) -> Rational {
    int(n) * (int(n) + int(a.dim() as i64) + int(2) * a.value())
}

/// `λ^(α,1)_n`: zero for `n ≤ 1`, otherwise `λ^(α)_{n-1}`.
pub fn lambda_sobolev(n: i64, a: &Alpha) -> Rational {
    if n <= 1 {
        Rational::zero()
    } else {
        lambda(n - 1, a)
    }
}

/// `λ̃^(α,1)_n = n(n + d + 2α - 2)`.
pub fn lambda_tilde(n: i64, a: &Alpha) -> Rational {
    int(n) * (int(n) + int(a.dim() as i64) + int(2) * a.value() - int(2))
}

/// Sign test used by the exact inequality checks.
pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}
