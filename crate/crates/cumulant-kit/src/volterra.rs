//! Cumulative integration of the distribution function and the cumulant
//! routes built on it.
//!
//! The running-integral operator `V g(x) = ∫_lo^x g` turns the CDF into the
//! ladder `F⁽ᵏ⁾ = Vᵏ F` of truncated moments `F⁽ᵏ⁾(τ) = E(τ−X)₊ᵏ / k!`.
//! Three independent routes to the cumulants live here:
//!
//! * **truncated**: moments of `Y = X − τ` read off the ladder at a point τ
//!   beyond the support, inverted over the partition lattice;
//! * **theorem1**: `κ_n = (−1)ⁿ n! Σ_π μ(π,1̂) ∫_{t₁<⋯<t_n} ∏ F(t_i)^{e_i}`
//!   with `e` the block-minimum indicator of π;
//! * **factorized**: the same sum collapsed over `Π_{n−1}` with a final
//!   `1 − F` factor, plus the further reduction through the mean-residual-life
//!   functions for `n ∈ {3, 4}`.
//!
//! All quadrature is the composite trapezoid rule on one shared uniform grid.
//! Ordered-simplex integrals are never computed on an n-dimensional mesh:
//! the integrand factors across sorted coordinates, so `n` one-dimensional
//! cumulative passes suffice.
//!
//! The grid spans the ε-truncated support plus a 15% margin on both sides;
//! the margin damps the residual tail mass so that reported cumulants of
//! order `n ≥ 2` are insensitive to the exact truncation level.

use rayon::prelude::*;
use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::dists::{sample_cdf_nodes, DistributionModel, GridFunction};
use crate::error::{Error, Result};
use crate::partitions::{enumerate_shuffles, partition_iter, SetPartition};

/// Order cap for the ladder/truncated route.
pub const MAX_TRUNCATED_ORDER: usize = 8;

/// Order cap for the partition-sum integral routes (Bell-number cost).
pub const MAX_SIMPLEX_ORDER: usize = 6;

/// Fraction of the truncated span added as margin on each side of the grid.
const PAD_FRACTION: f64 = 0.15;

/// Quadrature parameters: tail level for support truncation and the number
/// of grid nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    eps_tail: f64,
    points: usize,
}

impl GridSpec {
    pub fn new(eps_tail: f64, points: usize) -> Result<Self> {
        if !(eps_tail > 0.0 && eps_tail < 0.25) {
            return Err(Error::InvalidParameter(format!(
                "eps_tail must lie in (0, 1/4), got {eps_tail}"
            )));
        }
        if points < 9 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 9 points, got {points}"
            )));
        }
        Ok(Self { eps_tail, points })
    }

    pub fn eps_tail(&self) -> f64 {
        self.eps_tail
    }

    pub fn points(&self) -> usize {
        self.points
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            eps_tail: 1e-10,
            points: 20001,
        }
    }
}

/// The sampled CDF together with its cumulative ladder `F⁽ᵏ⁾ = Vᵏ F`.
///
/// Level 0 is the sampled CDF itself; every level shares the grid. For
/// purely discrete models the atoms actually integrated (snapped to grid
/// nodes) are recorded and exposed.
#[derive(Debug, Clone)]
pub struct CumulativeGrid {
    levels: Vec<GridFunction>,
    truncation: (f64, f64),
    effective_atoms: Option<Vec<(f64, f64)>>,
}

impl CumulativeGrid {
    /// Samples the model's CDF and builds levels `0..=max_level`.
    pub fn build(d: &DistributionModel, spec: &GridSpec, max_level: usize) -> Result<Self> {
        Self::build_with_padding(d, spec, max_level, PAD_FRACTION)
    }

    fn build_with_padding(
        d: &DistributionModel,
        spec: &GridSpec,
        max_level: usize,
        pad_fraction: f64,
    ) -> Result<Self> {
        if max_level > MAX_TRUNCATED_ORDER {
            return Err(Error::OrderLimit {
                what: "cumulative ladder",
                n: max_level,
                max: MAX_TRUNCATED_ORDER,
            });
        }
        let (a, b) = d.truncate_support(spec.eps_tail)?;
        let pad = (pad_fraction * (b - a)).max(1e-9 * a.abs().max(b.abs()).max(1.0));
        let (lo, hi) = (a - pad, b + pad);
        let (values, snapped) = sample_cdf_nodes(d, lo, hi, spec.points);
        let base = GridFunction::new(lo, hi, values)?;
        let mut levels = Vec::with_capacity(max_level + 1);
        levels.push(base);
        for k in 1..=max_level {
            let next = volterra_apply(&levels[k - 1]);
            levels.push(next);
        }
        Ok(Self {
            levels,
            truncation: (a, b),
            effective_atoms: snapped,
        })
    }

    pub fn base(&self) -> &GridFunction {
        &self.levels[0]
    }

    /// `F⁽ᵏ⁾` on the shared grid. Panics if the level was not built.
    pub fn level(&self, k: usize) -> &GridFunction {
        &self.levels[k]
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    /// The ε-truncation interval `(a, b)` before the grid margin was added.
    pub fn truncation(&self) -> (f64, f64) {
        self.truncation
    }

    /// Atoms `(position, mass)` actually integrated for discrete models:
    /// the model's atoms snapped to grid nodes.
    pub fn effective_atoms(&self) -> Option<&[(f64, f64)]> {
        self.effective_atoms.as_deref()
    }

    /// Linear interpolation of level `k` at `t`.
    pub fn eval_level(&self, k: usize, t: f64) -> f64 {
        self.levels[k].eval(t)
    }
}

/// Running integral from the left grid end by the composite trapezoid rule;
/// output value 0 at the first node.
pub fn volterra_apply(g: &GridFunction) -> GridFunction {
    let v = g.values();
    let mut out = Vec::with_capacity(v.len());
    out.push(0.0);
    let mut acc = 0.0;
    let half_step = 0.5 * g.step();
    for i in 1..v.len() {
        acc += half_step * (v[i - 1] + v[i]);
        out.push(acc);
    }
    GridFunction::new(g.lo(), g.hi(), out).expect("same grid shape")
}

fn running_trapezoid_in_place(values: &mut [f64], step: f64) {
    let mut acc = 0.0;
    let mut prev = values[0];
    values[0] = 0.0;
    let half_step = 0.5 * step;
    for v in values.iter_mut().skip(1) {
        let cur = *v;
        acc += half_step * (prev + cur);
        prev = cur;
        *v = acc;
    }
}

/// `F⁽ⁿ⁾(τ) = E(τ−X)₊ⁿ / n!`, evaluated by building the cumulative ladder
/// and interpolating level `n` at `τ`.
pub fn iterated_cdf(d: &DistributionModel, n: usize, tau: f64, spec: &GridSpec) -> Result<f64> {
    if n > MAX_TRUNCATED_ORDER {
        return Err(Error::OrderLimit {
            what: "iterated_cdf",
            n,
            max: MAX_TRUNCATED_ORDER,
        });
    }
    let grid = CumulativeGrid::build(d, spec, n)?;
    check_tau(&grid, tau)?;
    Ok(grid.eval_level(n, tau))
}

fn check_tau(grid: &CumulativeGrid, tau: f64) -> Result<()> {
    let (a, _) = grid.truncation();
    let hi = grid.base().hi();
    if !(tau > a && tau <= hi) {
        return Err(Error::OutOfRange {
            value: tau,
            lo: a,
            hi,
        });
    }
    Ok(())
}

/// Moments `y_n = E(X−τ)ⁿ = (−1)ⁿ n! F⁽ⁿ⁾(τ)` of the shifted variable
/// `Y = X − τ`, for `n = 1..=max_order`.
pub fn truncated_y_moments(
    d: &DistributionModel,
    tau: f64,
    max_order: usize,
    spec: &GridSpec,
) -> Result<Vec<f64>> {
    if max_order > MAX_TRUNCATED_ORDER {
        return Err(Error::OrderLimit {
            what: "truncated_y_moments",
            n: max_order,
            max: MAX_TRUNCATED_ORDER,
        });
    }
    let grid = CumulativeGrid::build(d, spec, max_order)?;
    check_tau(&grid, tau)?;
    Ok(y_moments_from_grid(&grid, tau, max_order))
}

fn y_moments_from_grid(grid: &CumulativeGrid, tau: f64, max_order: usize) -> Vec<f64> {
    let mut sign = 1.0;
    let mut fact = 1.0;
    (1..=max_order)
        .map(|n| {
            fact *= n as f64;
            sign = -sign;
            sign * fact * grid.eval_level(n, tau)
        })
        .collect()
}

/// Moment-to-cumulant inversion over the partition lattice in floating
/// point: `κ_n = Σ_{π∈Π_n} (∏_B m_{|B|}) μ(π,1̂)`.
pub fn cumulants_from_raw_moments(moments: &[f64]) -> Result<Vec<f64>> {
    if moments.is_empty() {
        return Err(Error::InvalidInput("no moments given".into()));
    }
    if moments.len() > MAX_TRUNCATED_ORDER {
        return Err(Error::OrderLimit {
            what: "cumulants_from_raw_moments",
            n: moments.len(),
            max: MAX_TRUNCATED_ORDER,
        });
    }
    let mut out = Vec::with_capacity(moments.len());
    for n in 1..=moments.len() {
        let mut acc = 0.0;
        for pi in partition_iter(n)? {
            let mut term = pi.mobius_to_top() as f64;
            for b in pi.blocks() {
                term *= moments[b.len() - 1];
            }
            acc += term;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Cumulants through the shifted-moment route: `κ_n(X) = κ_n(Y)` for
/// `n ≥ 2` and `κ₁(X) = κ₁(Y) + τ`, with `Y = X − τ` and τ an upper bound
/// of the (truncated) support. `tau = None` uses the right grid end.
pub fn cumulants_via_truncated(
    d: &DistributionModel,
    max_order: usize,
    tau: Option<f64>,
    spec: &GridSpec,
) -> Result<Vec<f64>> {
    if max_order == 0 || max_order > MAX_TRUNCATED_ORDER {
        return Err(Error::OrderLimit {
            what: "cumulants_via_truncated",
            n: max_order,
            max: MAX_TRUNCATED_ORDER,
        });
    }
    let grid = CumulativeGrid::build(d, spec, max_order)?;
    let tau = tau.unwrap_or_else(|| grid.base().hi());
    check_tau(&grid, tau)?;
    let y = y_moments_from_grid(&grid, tau, max_order);
    let mut kappas = cumulants_from_raw_moments(&y)?;
    kappas[0] += tau;
    Ok(kappas)
}

/// `∫_{a<t₁<⋯<t_n<b} ∏_i F(t_i)^{e_i} dt` with `e = block_min_mask(π)`,
/// over the ε-truncated support, by `n` cumulative one-dimensional passes.
pub fn simplex_partition_integral(
    d: &DistributionModel,
    pi: &SetPartition,
    spec: &GridSpec,
) -> Result<f64> {
    if pi.n() > MAX_TRUNCATED_ORDER {
        return Err(Error::OrderLimit {
            what: "simplex_partition_integral",
            n: pi.n(),
            max: MAX_TRUNCATED_ORDER,
        });
    }
    // No margin here: the contract is the integral over (a, b) itself.
    let grid = CumulativeGrid::build_with_padding(d, spec, 0, 0.0)?;
    Ok(simplex_integral_on(grid.base(), &pi.block_min_mask(), None))
}

/// Shared inner loop: one cumulative pass per sorted coordinate, with the
/// CDF multiplied in wherever the mask is set, and an optional extra factor
/// on the last coordinate.
fn simplex_integral_on(base: &GridFunction, mask: &[bool], last_factor: Option<&[f64]>) -> f64 {
    let f = base.values();
    let mut cur = vec![1.0; f.len()];
    for (i, &lead) in mask.iter().enumerate() {
        if lead {
            for (c, &fv) in cur.iter_mut().zip(f) {
                *c *= fv;
            }
        }
        if i + 1 == mask.len() {
            if let Some(extra) = last_factor {
                for (c, &ev) in cur.iter_mut().zip(extra) {
                    *c *= ev;
                }
            }
        }
        running_trapezoid_in_place(&mut cur, base.step());
    }
    *cur.last().unwrap()
}

/// `κ₁ = ∫_0^∞ (1−F) − ∫_{−∞}^0 F`, which on the truncated grid collapses
/// to `hi − (VF)(hi)`.
fn kappa1_from_grid(grid: &CumulativeGrid) -> f64 {
    grid.base().hi() - grid.level(1).end_value()
}

/// Cumulants through the ordered-simplex partition sum:
/// `κ_n = (−1)ⁿ n! Σ_{π∈Π_n} μ(π,1̂) ∫_simplex ∏ F(t_i)^{e_i(π)}` for
/// `n ≥ 2`; `κ₁` from the first-moment identity above.
pub fn cumulants_via_theorem1(
    d: &DistributionModel,
    max_order: usize,
    spec: &GridSpec,
) -> Result<Vec<f64>> {
    if max_order == 0 || max_order > MAX_SIMPLEX_ORDER {
        return Err(Error::OrderLimit {
            what: "cumulants_via_theorem1",
            n: max_order,
            max: MAX_SIMPLEX_ORDER,
        });
    }
    ensure_thread_pool();
    let grid = CumulativeGrid::build(d, spec, 1)?;
    let base = grid.base();
    let mut out = vec![kappa1_from_grid(&grid)];
    for n in 2..=max_order {
        // Partitions with the same block-minimum mask share one integral.
        let mut weights: BTreeMap<Vec<bool>, f64> = BTreeMap::new();
        for pi in partition_iter(n)? {
            *weights.entry(pi.block_min_mask()).or_insert(0.0) += pi.mobius_to_top() as f64;
        }
        let masks: Vec<(&Vec<bool>, f64)> = weights.iter().map(|(m, &w)| (m, w)).collect();
        let integrals: Vec<f64> = masks
            .par_iter()
            .map(|(mask, _)| simplex_integral_on(base, mask, None))
            .collect();
        let mut acc = 0.0;
        for ((_, w), integral) in masks.iter().zip(&integrals) {
            debug_assert!(integral >= &-1e-9, "simplex integrals are nonnegative");
            acc += w * integral;
        }
        out.push(sign_factorial(n) * acc);
    }
    Ok(out)
}

/// Cumulants through the factorized sum over `Π_{n−1}` with a trailing
/// `1 − F` factor:
/// `κ_n = (−1)ⁿ n! Σ_{π∈Π_{n−1}} |π| μ(π,1̂) ∫ ∏ F^{e_i(π)} · (1−F(t_n))`.
pub fn cumulants_via_factorized(
    d: &DistributionModel,
    max_order: usize,
    spec: &GridSpec,
) -> Result<Vec<f64>> {
    if max_order == 0 || max_order > MAX_SIMPLEX_ORDER {
        return Err(Error::OrderLimit {
            what: "cumulants_via_factorized",
            n: max_order,
            max: MAX_SIMPLEX_ORDER,
        });
    }
    ensure_thread_pool();
    let grid = CumulativeGrid::build(d, spec, 1)?;
    let base = grid.base();
    let survival: Vec<f64> = base.values().iter().map(|&f| 1.0 - f).collect();
    let mut out = vec![kappa1_from_grid(&grid)];
    for n in 2..=max_order {
        let mut weights: BTreeMap<Vec<bool>, f64> = BTreeMap::new();
        for pi in partition_iter(n - 1)? {
            *weights.entry(pi.block_min_mask()).or_insert(0.0) +=
                (pi.block_count() as f64) * pi.mobius_to_top() as f64;
        }
        let masks: Vec<(&Vec<bool>, f64)> = weights.iter().map(|(m, &w)| (m, w)).collect();
        let integrals: Vec<f64> = masks
            .par_iter()
            .map(|(mask, _)| {
                let mut full_mask = Vec::with_capacity(n);
                full_mask.extend_from_slice(mask);
                full_mask.push(false);
                simplex_integral_on(base, &full_mask, Some(&survival))
            })
            .collect();
        let mut acc = 0.0;
        for ((_, w), integral) in masks.iter().zip(&integrals) {
            debug_assert!(integral >= &-1e-9, "simplex integrals are nonnegative");
            acc += w * integral;
        }
        out.push(sign_factorial(n) * acc);
    }
    Ok(out)
}

/// The doubly-reduced route through the mean-residual-life functions, for
/// `n ∈ {3, 4}`.
///
/// The two outer coordinates are integrated out analytically:
/// `∫_{t₁<t₂} F(t₁) dt₁ = P(t₂)F(t₂) = (VF)(t₂)` replaces the leading
/// factor, and `∫_{t_{n-1}<t_n} (1−F(t_n)) dt_n = (1−F)R(t_{n−1})` closes
/// the last one. Both products are formed without dividing, so the R/P
/// denominator guards cannot trip here.
pub fn cumulants_via_mrl(d: &DistributionModel, n: usize, spec: &GridSpec) -> Result<f64> {
    if !(n == 3 || n == 4) {
        return Err(Error::InvalidParameter(format!(
            "the mean-residual-life route supports orders 3 and 4, got {n}"
        )));
    }
    let grid = CumulativeGrid::build(d, spec, 1)?;
    let base = grid.base();
    let f = base.values();
    let vf = grid.level(1).values();
    let vf_end = grid.level(1).end_value();
    let hi = base.hi();
    // (1 - F(t)) * R(t) = integral_t^hi (1 - F)
    let tail: Vec<f64> = (0..f.len())
        .map(|i| (hi - base.node(i)) - (vf_end - vf[i]))
        .collect();
    let vars = n - 2;
    let mut acc = 0.0;
    for pi in partition_iter(n - 1)? {
        let mask = pi.block_min_mask();
        let mut cur = vec![1.0; f.len()];
        for idx in 0..vars {
            let element = idx + 2; // integration variable t_{idx+2}
            if idx == 0 {
                for (c, &v) in cur.iter_mut().zip(vf) {
                    *c *= v;
                }
            }
            if mask[element - 1] {
                for (c, &fv) in cur.iter_mut().zip(f) {
                    *c *= fv;
                }
            }
            if idx + 1 == vars {
                for (c, &tv) in cur.iter_mut().zip(&tail) {
                    *c *= tv;
                }
            }
            running_trapezoid_in_place(&mut cur, base.step());
        }
        acc += (pi.block_count() as f64) * pi.mobius_to_top() as f64 * cur.last().unwrap();
    }
    Ok(sign_factorial(n) * acc)
}

fn sign_factorial(n: usize) -> f64 {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * (1..=n).map(|k| k as f64).product::<f64>()
}

// ---------------------------------------------------------------------------
// Shuffle-relation verifier.
//
// The identity `VᵐF · VⁿF = Σ_{τ∈Sh(m,n)} ∫_simplex (F at the deck leads)`
// holds exactly for iterated integrals of any integrable function, in
// particular for the piecewise-linear interpolant of the sampled CDF. Node
// arithmetic alone cannot certify it to 1e-6 when the ladder values are
// large, so both sides are evaluated exactly for that interpolant by
// propagating per-cell polynomial coefficients; the residual is then pure
// rounding error.
// ---------------------------------------------------------------------------

/// Piecewise-polynomial function on the grid cells; coefficients are in the
/// local coordinate `u ∈ [0, 1]` of each cell.
struct CellPoly {
    ncells: usize,
    width: usize,
    coeffs: Vec<f64>,
}

impl CellPoly {
    fn constant_one(ncells: usize) -> Self {
        Self {
            ncells,
            width: 1,
            coeffs: vec![1.0; ncells],
        }
    }

    fn from_grid(g: &GridFunction) -> Self {
        let v = g.values();
        let ncells = v.len() - 1;
        let mut coeffs = Vec::with_capacity(ncells * 2);
        for i in 0..ncells {
            coeffs.push(v[i]);
            coeffs.push(v[i + 1] - v[i]);
        }
        Self {
            ncells,
            width: 2,
            coeffs,
        }
    }

    fn mul(&self, other: &CellPoly) -> CellPoly {
        let width = self.width + other.width - 1;
        let mut coeffs = vec![0.0; self.ncells * width];
        for cell in 0..self.ncells {
            let a = &self.coeffs[cell * self.width..(cell + 1) * self.width];
            let b = &other.coeffs[cell * other.width..(cell + 1) * other.width];
            let out = &mut coeffs[cell * width..(cell + 1) * width];
            for (i, &ai) in a.iter().enumerate() {
                for (j, &bj) in b.iter().enumerate() {
                    out[i + j] += ai * bj;
                }
            }
        }
        CellPoly {
            ncells: self.ncells,
            width,
            coeffs,
        }
    }

    /// Exact running integral from the left grid end; `step` is the cell
    /// width in the global coordinate.
    fn integrate(&self, step: f64) -> CellPoly {
        let width = self.width + 1;
        let mut coeffs = vec![0.0; self.ncells * width];
        let mut start = 0.0;
        for cell in 0..self.ncells {
            let a = &self.coeffs[cell * self.width..(cell + 1) * self.width];
            let out = &mut coeffs[cell * width..(cell + 1) * width];
            out[0] = start;
            let mut full = 0.0;
            for (k, &ak) in a.iter().enumerate() {
                let anti = ak / (k + 1) as f64;
                out[k + 1] = step * anti;
                full += anti;
            }
            start += step * full;
        }
        CellPoly {
            ncells: self.ncells,
            width,
            coeffs,
        }
    }

    /// Value at the right end of the grid (last cell at `u = 1`).
    fn end_value(&self) -> f64 {
        self.coeffs[(self.ncells - 1) * self.width..]
            .iter()
            .sum()
    }
}

/// Residual `|VᵐF(b)·VⁿF(b) − Σ_{shuffles} (mixed simplex integral)|` of the
/// Chen shuffle relation, both sides evaluated exactly for the
/// piecewise-linear grid CDF. A deck of size 0 contributes an empty factor 1.
pub fn verify_shuffle_relation(
    d: &DistributionModel,
    m: usize,
    n: usize,
    spec: &GridSpec,
) -> Result<f64> {
    let total = m + n;
    if total > MAX_SIMPLEX_ORDER {
        return Err(Error::OrderLimit {
            what: "verify_shuffle_relation",
            n: total,
            max: MAX_SIMPLEX_ORDER,
        });
    }
    if total == 0 {
        return Ok(0.0);
    }
    let grid = CumulativeGrid::build(d, spec, 0)?;
    let base = CellPoly::from_grid(grid.base());
    let step = grid.base().step();

    let ladder_end = |k: usize| -> f64 {
        if k == 0 {
            return 1.0;
        }
        let mut cur = base.mul(&CellPoly::constant_one(base.ncells));
        for _ in 0..k {
            cur = cur.integrate(step);
        }
        cur.end_value()
    };
    let lhs = ladder_end(m) * ladder_end(n);

    let mask_integral = |mask: &[bool]| -> f64 {
        let mut cur = CellPoly::constant_one(base.ncells);
        for &lead in mask {
            if lead {
                cur = base.mul(&cur);
            }
            cur = cur.integrate(step);
        }
        cur.end_value()
    };

    let mut rhs = 0.0;
    for shuffle in enumerate_shuffles(&[m, n])? {
        let mut mask = vec![false; total];
        for placement in shuffle.placements() {
            if let Some(&first) = placement.first() {
                mask[first - 1] = true;
            }
        }
        rhs += mask_integral(&mask);
    }
    Ok((lhs - rhs).abs())
}

static POOL_INIT: OnceLock<()> = OnceLock::new();

/// Applies `CUMULANT_KIT_THREADS` (0 or unset = automatic) to the global
/// rayon pool, once.
fn ensure_thread_pool() {
    POOL_INIT.get_or_init(|| {
        if let Ok(raw) = std::env::var("CUMULANT_KIT_THREADS") {
            if let Ok(k) = raw.trim().parse::<usize>() {
                if k > 0 {
                    let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
                }
            }
        }
    });
}
