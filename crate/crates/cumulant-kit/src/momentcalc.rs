//! Exact moment/cumulant transforms.
//!
//! The univariate transforms run over the partition lattice in exact rational
//! arithmetic: `κ_n = Σ_{π∈Π_n} m_π μ(π,1̂)` and its inverse
//! `m_n = Σ_{π∈Π_n} κ_π`. Floating point enters only in the integration
//! modules; here the combinatorial identities are testable exactly.

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::partitions::{partition_iter, SetPartition};

/// Order cap for the exact transforms (`Bell(8) = 4140` partition terms).
pub const MAX_TRANSFORM_ORDER: usize = 8;

/// Raw moments `m_1..m_N` as exact rationals (`m_0 ≡ 1` implicit).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSequence {
    values: Vec<BigRational>,
}

/// Cumulants `κ_1..κ_N` as exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CumulantSequence {
    values: Vec<BigRational>,
}

impl MomentSequence {
    pub fn new(values: Vec<BigRational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("moment sequence must be nonempty".into()));
        }
        Ok(Self { values })
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Self {
            values: values
                .iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// `m_k` for `k = 0..=order` (`m_0 = 1`).
    pub fn moment(&self, k: usize) -> BigRational {
        if k == 0 {
            BigRational::one()
        } else {
            self.values[k - 1].clone()
        }
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }
}

impl CumulantSequence {
    pub fn new(values: Vec<BigRational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput(
                "cumulant sequence must be nonempty".into(),
            ));
        }
        Ok(Self { values })
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// `κ_k` for `k = 1..=order`.
    pub fn cumulant(&self, k: usize) -> BigRational {
        self.values[k - 1].clone()
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Cumulants as `f64`, for comparison against the numerical routes.
    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(rational_to_f64).collect()
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    let numer = bigint_to_f64(r.numer());
    let denom = bigint_to_f64(r.denom());
    numer / denom
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    use num::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

fn check_order(n: usize, what: &'static str) -> Result<()> {
    if n > MAX_TRANSFORM_ORDER {
        return Err(Error::OrderLimit {
            what,
            n,
            max: MAX_TRANSFORM_ORDER,
        });
    }
    Ok(())
}

/// Moment-to-cumulant inversion over the partition lattice:
/// `κ_n = Σ_{π∈Π_n} m_π μ(π,1̂_n)`, exactly.
pub fn moments_to_cumulants(m: &MomentSequence) -> Result<CumulantSequence> {
    check_order(m.order(), "moments_to_cumulants")?;
    let mut out = Vec::with_capacity(m.order());
    for n in 1..=m.order() {
        let mut acc = BigRational::zero();
        for pi in partition_iter(n)? {
            acc += block_product(&pi, |size| m.moment(size))
                * BigRational::from_integer(BigInt::from(pi.mobius_to_top()));
        }
        out.push(acc);
    }
    CumulantSequence::new(out)
}

/// Inverse transform `m_n = Σ_{π∈Π_n} κ_π`; round-trips with
/// [`moments_to_cumulants`] exactly.
pub fn cumulants_to_moments(k: &CumulantSequence) -> Result<MomentSequence> {
    check_order(k.order(), "cumulants_to_moments")?;
    let mut out = Vec::with_capacity(k.order());
    for n in 1..=k.order() {
        let mut acc = BigRational::zero();
        for pi in partition_iter(n)? {
            acc += block_product(&pi, |size| k.cumulant(size));
        }
        out.push(acc);
    }
    MomentSequence::new(out)
}

fn block_product(pi: &SetPartition, value: impl Fn(usize) -> BigRational) -> BigRational {
    let mut prod = BigRational::one();
    for b in pi.blocks() {
        prod *= value(b.len());
    }
    prod
}

/// Moments of `X + τ`: `m_n(X+τ) = Σ_k C(n,k) τ^{n−k} m_k`.
pub fn translate_moments(m: &MomentSequence, tau: &BigRational) -> MomentSequence {
    let mut out = Vec::with_capacity(m.order());
    for n in 1..=m.order() {
        let mut acc = BigRational::zero();
        for k in 0..=n {
            let binom = BigRational::from_integer(num::integer::binomial(
                BigInt::from(n),
                BigInt::from(k),
            ));
            acc += binom * pow_rational(tau, n - k) * m.moment(k);
        }
        out.push(acc);
    }
    MomentSequence { values: out }
}

/// Cumulants of `X + τ`: only `κ₁` shifts, by exactly `τ`.
pub fn translate_cumulants(k: &CumulantSequence, tau: &BigRational) -> CumulantSequence {
    let mut values = k.values.clone();
    values[0] += tau;
    CumulantSequence { values }
}

fn pow_rational(x: &BigRational, e: usize) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Mixed moments `E ∏_{i∈I} X_i` for every nonempty subset `I ⊆ {1..n}`,
/// indexed by subset bitmask.
#[derive(Debug, Clone)]
pub struct MultivariateMomentTable {
    n: usize,
    values: Vec<f64>,
}

impl MultivariateMomentTable {
    /// `values[mask - 1]` is the mixed moment of the variables in `mask`
    /// (bit `i` set ⟺ variable `i+1` participates).
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || n > 20 {
            return Err(Error::InvalidInput(format!("unsupported variable count {n}")));
        }
        let expected = (1usize << n) - 1;
        if values.len() != expected {
            return Err(Error::InvalidInput(format!(
                "expected {expected} mixed moments, got {}",
                values.len()
            )));
        }
        Ok(Self { n, values })
    }

    /// Builds the table by querying `f` with each subset of variable ids
    /// (1-based, ascending).
    pub fn from_fn(n: usize, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let expected = (1usize << n) - 1;
        let mut values = Vec::with_capacity(expected);
        for mask in 1..=expected {
            let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
            values.push(f(&subset));
        }
        Self::new(n, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Mixed moment of the variables listed in `vars` (1-based ids).
    pub fn moment(&self, vars: &[usize]) -> f64 {
        let mut mask = 0usize;
        for &v in vars {
            mask |= 1 << (v - 1);
        }
        self.values[mask - 1]
    }
}

/// Multivariate moment-to-cumulant inversion:
/// `κ_n(X₁..X_n) = Σ_{π∈Π_n} m_π μ(π,1̂_n)` with `m_π` the product of the
/// table entries of the blocks. For `n = 2` this is the covariance.
pub fn multivariate_moments_to_cumulant(t: &MultivariateMomentTable) -> Result<f64> {
    if t.n() > 6 {
        return Err(Error::OrderLimit {
            what: "multivariate_moments_to_cumulant",
            n: t.n(),
            max: 6,
        });
    }
    let mut acc = 0.0;
    for pi in partition_iter(t.n())? {
        let mut prod = pi.mobius_to_top() as f64;
        for b in pi.blocks() {
            prod *= t.moment(b);
        }
        acc += prod;
    }
    Ok(acc)
}
