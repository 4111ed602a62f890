//! Shared test support: the exact log/exp series oracle for moment-cumulant
//! values, an independent Bell-number recursion, and seeded samplers for the
//! Monte Carlo checks.
//!
//! The series oracle is the provenance for every frozen expected value in
//! the suites: cumulants are Taylor coefficients of `log Σ m_n zⁿ/n!`,
//! computed in exact rational arithmetic, independently of the partition
//! transforms it is used to check.

#![allow(dead_code)]

use num::{BigInt, BigRational, One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn factorial(n: usize) -> BigRational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    BigRational::from_integer(acc)
}

/// Bell numbers `B_0..B_upto` by the Bell-triangle recursion.
pub fn bell_numbers(upto: usize) -> Vec<u64> {
    let mut bells = vec![1u64];
    let mut row = vec![1u64];
    for _ in 1..=upto {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        bells.push(next[0]);
        row = next;
    }
    bells
}

/// Truncated product of two coefficient vectors (`z⁰..z^order`).
fn series_mul(a: &[BigRational], b: &[BigRational], order: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Cumulants `κ_1..κ_N` as `n! · [zⁿ] log(1 + Σ_{k≥1} m_k zᵏ/k!)`,
/// via the truncated logarithm series.
pub fn log_series_cumulants(moments: &[BigRational]) -> Vec<BigRational> {
    let order = moments.len();
    // u(z) = sum_{k>=1} m_k z^k / k!  (no constant term)
    let mut u = vec![BigRational::zero(); order + 1];
    for (k, m) in moments.iter().enumerate() {
        u[k + 1] = m / factorial(k + 1);
    }
    // log(1+u) = sum_{j>=1} (-1)^{j+1} u^j / j
    let mut log = vec![BigRational::zero(); order + 1];
    let mut power = u.clone();
    for j in 1..=order {
        let sign = if j % 2 == 1 { int(1) } else { int(-1) };
        let coeff = sign / int(j as i64);
        for (idx, value) in power.iter().enumerate() {
            log[idx] += &coeff * value;
        }
        if j < order {
            power = series_mul(&power, &u, order);
        }
    }
    (1..=order).map(|n| &log[n] * factorial(n)).collect()
}

/// Moments `m_1..m_N` as `n! · [zⁿ] exp(Σ_{k≥1} κ_k zᵏ/k!)`.
pub fn exp_series_moments(cumulants: &[BigRational]) -> Vec<BigRational> {
    let order = cumulants.len();
    let mut u = vec![BigRational::zero(); order + 1];
    for (k, c) in cumulants.iter().enumerate() {
        u[k + 1] = c / factorial(k + 1);
    }
    // exp(u) = sum_{j>=0} u^j / j!
    let mut exp = vec![BigRational::zero(); order + 1];
    exp[0] = BigRational::one();
    let mut power = u.clone();
    for j in 1..=order {
        let coeff = BigRational::one() / factorial(j);
        for (idx, value) in power.iter().enumerate() {
            exp[idx] += &coeff * value;
        }
        if j < order {
            power = series_mul(&power, &u, order);
        }
    }
    (1..=order).map(|n| &exp[n] * factorial(n)).collect()
}

pub fn to_f64(values: &[BigRational]) -> Vec<f64> {
    use num::ToPrimitive;
    values
        .iter()
        .map(|r| r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap())
        .collect()
}

/// Exact cumulants of the four builtin models, orders `1..=order`.
pub fn builtin_exact_cumulants(name: &str, order: usize) -> Vec<f64> {
    let moments: Vec<BigRational> = match name {
        "uniform01" => (1..=order).map(|n| rat(1, n as i64 + 1)).collect(),
        "exponential1" => (1..=order).map(factorial).collect(),
        "stdnormal" => (1..=order)
            .map(|n| {
                if n % 2 == 1 {
                    BigRational::zero()
                } else {
                    let mut acc = BigInt::one();
                    let mut k = n as i64 - 1;
                    while k > 1 {
                        acc *= BigInt::from(k);
                        k -= 2;
                    }
                    BigRational::from_integer(acc)
                }
            })
            .collect(),
        "twopoint" => (1..=order).map(|_| rat(1, 2)).collect(),
        other => panic!("unknown builtin {other}"),
    };
    to_f64(&log_series_cumulants(&moments))
}

/// Inverse-CDF samplers for the builtins, driven by a seeded generator.
pub fn sample_builtin(rng: &mut ChaCha8Rng, name: &str) -> f64 {
    match name {
        "uniform01" => rng.gen::<f64>(),
        "exponential1" => -(1.0 - rng.gen::<f64>()).ln(),
        "stdnormal" => {
            // Box-Muller
            let u1: f64 = 1.0 - rng.gen::<f64>();
            let u2: f64 = rng.gen();
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        }
        "twopoint" => {
            if rng.gen::<f64>() < 0.5 {
                1.0
            } else {
                0.0
            }
        }
        other => panic!("unknown builtin {other}"),
    }
}

pub fn assert_close(value: f64, target: f64, abs_tol: f64, rel_tol: f64, label: &str) {
    let tol = abs_tol.max(rel_tol * target.abs().max(value.abs()));
    assert!(
        (value - target).abs() <= tol,
        "{label}: {value} vs {target} (tol {tol:.3e})"
    );
}
