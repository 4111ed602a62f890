//! Distribution models: analytic builtins, empirical step CDFs, and sampled
//! grid CDFs, together with support truncation and mean-residual-life
//! functions.
//!
//! Only the distribution function `F` is ever evaluated or integrated; no
//! density object exists anywhere in the crate. Step CDFs carry their atoms
//! explicitly so the integration grid can align jumps with grid nodes.

use num::{BigInt, BigRational};
use std::path::Path;

use crate::error::{Error, Result};
use crate::momentcalc::MomentSequence;

/// Highest order for which builtins carry exact reference moments.
pub const REFERENCE_MOMENT_ORDER: usize = 8;

/// Guard for the mean-residual-life denominators.
pub const MRL_GUARD: f64 = 1e-12;

/// A function sampled on a uniform grid: `values[i]` is the value at
/// `lo + i·step`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    lo: f64,
    hi: f64,
    step: f64,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(lo: f64, hi: f64, values: Vec<f64>) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::InvalidInput(format!("bad grid range [{lo}, {hi}]")));
        }
        if values.len() < 3 {
            return Err(Error::InvalidInput(
                "grid needs at least 3 sample points".into(),
            ));
        }
        let step = (hi - lo) / (values.len() - 1) as f64;
        Ok(Self {
            lo,
            hi,
            step,
            values,
        })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn node(&self, i: usize) -> f64 {
        self.lo + self.step * i as f64
    }

    /// Value at the last node.
    pub fn end_value(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Linear interpolation; clamps to the end values outside the range.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= self.lo {
            return self.values[0];
        }
        if t >= self.hi {
            return self.end_value();
        }
        let x = (t - self.lo) / self.step;
        let i = (x.floor() as usize).min(self.values.len() - 2);
        let frac = x - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }
}

/// Built-in analytic models with exact reference moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Builtin {
    Uniform01,
    Exponential1,
    StdNormal,
    TwoPoint { p: f64, x0: f64, x1: f64 },
}

#[derive(Debug, Clone)]
enum Kind {
    Analytic(Builtin),
    Grid { ts: Vec<f64>, fs: Vec<f64> },
    Empirical { samples: Vec<f64> },
}

/// A univariate distribution, represented by its CDF.
#[derive(Debug, Clone)]
pub struct DistributionModel {
    kind: Kind,
    support_hint: (f64, f64),
    reference_moments: Option<MomentSequence>,
}

impl DistributionModel {
    /// Constructs a built-in model. Two-point masses require
    /// `0 < p < 1` and `x0 < x1`; the atom at `x1` carries mass `p`.
    pub fn builtin(which: Builtin) -> Result<Self> {
        let (hint, reference) = match which {
            Builtin::Uniform01 => {
                let m = (1..=REFERENCE_MOMENT_ORDER)
                    .map(|n| BigRational::new(BigInt::from(1), BigInt::from(n as i64 + 1)))
                    .collect();
                ((-0.5, 1.5), MomentSequence::new(m)?)
            }
            Builtin::Exponential1 => {
                let m = (1..=REFERENCE_MOMENT_ORDER)
                    .map(|n| BigRational::from_integer(factorial_big(n)))
                    .collect();
                ((-0.5, 60.0), MomentSequence::new(m)?)
            }
            Builtin::StdNormal => {
                let m = (1..=REFERENCE_MOMENT_ORDER)
                    .map(|n| {
                        if n % 2 == 1 {
                            BigRational::from_integer(BigInt::from(0))
                        } else {
                            BigRational::from_integer(double_factorial_big(n - 1))
                        }
                    })
                    .collect();
                ((-12.0, 12.0), MomentSequence::new(m)?)
            }
            Builtin::TwoPoint { p, x0, x1 } => {
                if !(p.is_finite() && x0.is_finite() && x1.is_finite()) {
                    return Err(Error::InvalidParameter("two-point parameters must be finite".into()));
                }
                if !(0.0 < p && p < 1.0) {
                    return Err(Error::InvalidParameter(format!("need 0 < p < 1, got {p}")));
                }
                if x0 >= x1 {
                    return Err(Error::InvalidParameter(format!("need x0 < x1, got {x0} >= {x1}")));
                }
                let rp = BigRational::from_float(p).unwrap();
                let r0 = BigRational::from_float(x0).unwrap();
                let r1 = BigRational::from_float(x1).unwrap();
                let one = BigRational::from_integer(BigInt::from(1));
                let m = (1..=REFERENCE_MOMENT_ORDER)
                    .map(|n| {
                        (one.clone() - rp.clone()) * pow_rat(&r0, n) + rp.clone() * pow_rat(&r1, n)
                    })
                    .collect();
                let d = (x1 - x0).max(1.0) * 0.1 + 1.0;
                ((x0 - d, x1 + d), MomentSequence::new(m)?)
            }
        };
        Ok(Self {
            kind: Kind::Analytic(which),
            support_hint: hint,
            reference_moments: Some(reference),
        })
    }

    /// Right-continuous step CDF of the sample multiset
    /// `F(t) = #{x_i ≤ t}/N`.
    pub fn empirical_from_samples(xs: &[f64]) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::InvalidInput("no samples".into()));
        }
        if xs.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("samples must be finite".into()));
        }
        let mut samples = xs.to_vec();
        samples.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        let (min, max) = (samples[0], *samples.last().unwrap());
        let spread = max - min;
        let delta = if spread > 0.0 {
            spread / samples.len() as f64
        } else {
            1.0
        };
        Ok(Self {
            kind: Kind::Empirical { samples },
            support_hint: (min - delta, max + delta),
            reference_moments: None,
        })
    }

    /// CDF sampled at strictly increasing points, interpolated linearly.
    pub fn from_grid_points(ts: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        if ts.len() != fs.len() || ts.len() < 2 {
            return Err(Error::InvalidInput(
                "grid CDF needs at least two (t, F) pairs of equal length".into(),
            ));
        }
        for w in ts.windows(2) {
            if w[1] <= w[0] || !w[0].is_finite() || !w[1].is_finite() {
                return Err(Error::InvalidInput(format!(
                    "grid abscissae must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        let mut clamped = Vec::with_capacity(fs.len());
        let mut prev = f64::NEG_INFINITY;
        for &f in &fs {
            if !f.is_finite() {
                return Err(Error::InvalidInput("grid CDF values must be finite".into()));
            }
            if f < prev - 1e-12 {
                return Err(Error::InvalidInput("grid CDF values must be nondecreasing".into()));
            }
            let c = f.clamp(0.0, 1.0).max(prev);
            clamped.push(c);
            prev = c;
        }
        let span = ts[ts.len() - 1] - ts[0];
        let hint = (ts[0] - 0.01 * span, ts[ts.len() - 1] + 0.01 * span);
        Ok(Self {
            kind: Kind::Grid { ts, fs: clamped },
            support_hint: hint,
            reference_moments: None,
        })
    }

    /// Loads a grid CDF from a CSV file with header `t,F`.
    pub fn grid_from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                msg: e.to_string(),
            })?;
        let mut ts = Vec::new();
        let mut fs = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                msg: e.to_string(),
            })?;
            if record.len() != 2 {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    msg: format!("expected 2 columns, got {}", record.len()),
                });
            }
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    msg: format!("bad number {s:?}: {e}"),
                })
            };
            ts.push(parse(&record[0])?);
            fs.push(parse(&record[1])?);
        }
        Self::from_grid_points(ts, fs)
    }

    /// `F(t)`, clamped to `[0, 1]`.
    pub fn cdf(&self, t: f64) -> f64 {
        let raw = match &self.kind {
            Kind::Analytic(b) => match *b {
                Builtin::Uniform01 => t,
                Builtin::Exponential1 => {
                    if t <= 0.0 {
                        0.0
                    } else {
                        -(-t).exp_m1()
                    }
                }
                Builtin::StdNormal => {
                    0.5 * statrs::function::erf::erfc(-t / std::f64::consts::SQRT_2)
                }
                Builtin::TwoPoint { p, x0, x1 } => {
                    if t < x0 {
                        0.0
                    } else if t < x1 {
                        1.0 - p
                    } else {
                        1.0
                    }
                }
            },
            Kind::Grid { ts, fs } => grid_interp(ts, fs, t),
            Kind::Empirical { samples } => {
                let idx = samples.partition_point(|&x| x <= t);
                idx as f64 / samples.len() as f64
            }
        };
        raw.clamp(0.0, 1.0)
    }

    pub fn support_hint(&self) -> (f64, f64) {
        self.support_hint
    }

    /// Exact reference moments (builtins only), orders `1..=8`.
    pub fn reference_moments(&self) -> Option<&MomentSequence> {
        self.reference_moments.as_ref()
    }

    /// Atoms `(position, mass)` for purely discrete models, `None` otherwise.
    pub fn atoms(&self) -> Option<Vec<(f64, f64)>> {
        match &self.kind {
            Kind::Analytic(Builtin::TwoPoint { p, x0, x1 }) => {
                Some(vec![(*x0, 1.0 - p), (*x1, *p)])
            }
            Kind::Empirical { samples } => {
                let w = 1.0 / samples.len() as f64;
                Some(samples.iter().map(|&x| (x, w)).collect())
            }
            _ => None,
        }
    }

    /// Sorted samples of an empirical model.
    pub fn samples(&self) -> Option<&[f64]> {
        match &self.kind {
            Kind::Empirical { samples } => Some(samples),
            _ => None,
        }
    }

    /// Finds `(a, b)` with `F(a) ≤ ε` and `F(b) ≥ 1 − ε` by bisection from
    /// the support hint.
    pub fn truncate_support(&self, eps_tail: f64) -> Result<(f64, f64)> {
        if !(eps_tail > 0.0 && eps_tail < 0.25) {
            return Err(Error::InvalidParameter(format!(
                "eps_tail must lie in (0, 1/4), got {eps_tail}"
            )));
        }
        let (mut lo, mut hi) = self.support_hint;
        let mut span = (hi - lo).max(1.0);
        let mut tries = 0;
        while self.cdf(lo) > eps_tail {
            lo -= span;
            span *= 2.0;
            tries += 1;
            if tries > 200 {
                return Err(Error::Model(format!(
                    "cdf never drops to eps_tail = {eps_tail}; non-monotone or truncated input?"
                )));
            }
        }
        let mut span = (hi - lo).max(1.0);
        tries = 0;
        while self.cdf(hi) < 1.0 - eps_tail {
            hi += span;
            span *= 2.0;
            tries += 1;
            if tries > 200 {
                return Err(Error::Model(format!(
                    "cdf never reaches 1 - eps_tail for eps_tail = {eps_tail}"
                )));
            }
        }
        // a = sup { t : F(t) <= eps }, kept on the <= side
        let (mut alo, mut ahi) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (alo + ahi);
            if self.cdf(mid) <= eps_tail {
                alo = mid;
            } else {
                ahi = mid;
            }
        }
        // b = inf { t : F(t) >= 1 - eps }, kept on the >= side
        let (mut blo, mut bhi) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (blo + bhi);
            if self.cdf(mid) >= 1.0 - eps_tail {
                bhi = mid;
            } else {
                blo = mid;
            }
        }
        let (a, b) = (alo, bhi);
        if !a.is_finite() || !b.is_finite() || a >= b || self.cdf(a) > eps_tail || self.cdf(b) < 1.0 - eps_tail {
            return Err(Error::Model(
                "support bisection failed; cdf appears non-monotone or constant".into(),
            ));
        }
        Ok((a, b))
    }

    /// Mean residual life `R(y) = E(X − y | X > y)`
    /// `= ∫_y^∞ (1−F) / (1−F(y))`, integrated over the truncated support at
    /// default resolution.
    pub fn mean_residual_life_r(&self, y: f64) -> Result<f64> {
        let fy = self.cdf(y);
        if fy >= 1.0 - MRL_GUARD {
            return Err(Error::Guard(format!(
                "1 - F({y}) = {:.3e} is below the guard {MRL_GUARD:.0e}",
                1.0 - fy
            )));
        }
        let grid = crate::volterra::CumulativeGrid::build(
            self,
            &crate::volterra::GridSpec::default(),
            1,
        )?;
        let hi = grid.base().hi();
        let tail = (hi - y) - (grid.level(1).end_value() - cumulative_f(&grid, y));
        Ok(tail.max(0.0) / (1.0 - fy))
    }

    /// Reversed mean residual life `P(y) = y − E(X | X < y)`
    /// `= ∫_{−∞}^y F / F(y)`.
    pub fn mean_residual_life_p(&self, y: f64) -> Result<f64> {
        let fy = self.cdf(y);
        if fy <= MRL_GUARD {
            return Err(Error::Guard(format!(
                "F({y}) = {fy:.3e} is below the guard {MRL_GUARD:.0e}"
            )));
        }
        let grid = crate::volterra::CumulativeGrid::build(
            self,
            &crate::volterra::GridSpec::default(),
            1,
        )?;
        Ok(cumulative_f(&grid, y).max(0.0) / fy)
    }
}

/// `∫_{lo}^{y} F dt` read off a level-1 cumulative grid, extended by the
/// constant tails `F ≈ 0` below and `F ≈ 1` above.
fn cumulative_f(grid: &crate::volterra::CumulativeGrid, y: f64) -> f64 {
    let vf = grid.level(1);
    if y < vf.lo() {
        0.0
    } else if y > vf.hi() {
        vf.end_value() + (y - vf.hi())
    } else {
        vf.eval(y)
    }
}

fn grid_interp(ts: &[f64], fs: &[f64], t: f64) -> f64 {
    if t <= ts[0] {
        return fs[0];
    }
    if t >= ts[ts.len() - 1] {
        return fs[fs.len() - 1];
    }
    let i = ts.partition_point(|&x| x <= t) - 1;
    let frac = (t - ts[i]) / (ts[i + 1] - ts[i]);
    fs[i] * (1.0 - frac) + fs[i + 1] * frac
}

/// Reads samples from a plain-text file, one finite decimal number per line.
pub fn load_samples_file(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let x: f64 = line.parse().map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            msg: format!("line {}: {:?}: {e}", i + 1, line),
        })?;
        if !x.is_finite() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                msg: format!("line {}: non-finite sample {x}", i + 1),
            });
        }
        out.push(x);
    }
    if out.is_empty() {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            msg: "no samples found".into(),
        });
    }
    Ok(out)
}

/// Samples a CDF onto `len` uniform nodes spanning `[lo, hi]`.
///
/// Purely discrete models get their atoms snapped to the nearest interior
/// node; the value stored at a jump node is the half-sum of the left and
/// right limits, which makes the running trapezoid rule exact for the
/// snapped measure. Returns the node values and, for discrete models, the
/// snapped atoms actually integrated.
pub(crate) fn sample_cdf_nodes(
    d: &DistributionModel,
    lo: f64,
    hi: f64,
    len: usize,
) -> (Vec<f64>, Option<Vec<(f64, f64)>>) {
    let step = (hi - lo) / (len - 1) as f64;
    if let Some(atoms) = d.atoms() {
        let mut mass = vec![0.0f64; len];
        let mut snapped = Vec::with_capacity(atoms.len());
        for (x, m) in atoms {
            let j = (((x - lo) / step).round() as i64).clamp(1, len as i64 - 2) as usize;
            mass[j] += m;
            snapped.push((lo + step * j as f64, m));
        }
        let mut values = Vec::with_capacity(len);
        let mut cum = 0.0;
        for &mj in &mass {
            cum += mj;
            values.push((cum - 0.5 * mj).clamp(0.0, 1.0));
        }
        (values, Some(snapped))
    } else {
        let values = (0..len)
            .map(|i| d.cdf(lo + step * i as f64).clamp(0.0, 1.0))
            .collect();
        (values, None)
    }
}

fn factorial_big(n: usize) -> BigInt {
    let mut acc = BigInt::from(1);
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

fn double_factorial_big(n: usize) -> BigInt {
    let mut acc = BigInt::from(1);
    let mut k = n as i64;
    while k > 1 {
        acc *= BigInt::from(k);
        k -= 2;
    }
    acc
}

fn pow_rat(x: &BigRational, e: usize) -> BigRational {
    let mut acc = BigRational::from_integer(BigInt::from(1));
    for _ in 0..e {
        acc *= x;
    }
    acc
}
