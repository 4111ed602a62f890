//! Joint distribution models and the multivariate cumulant formulas:
//! the coordinatewise cumulative recursion, the covariance identity
//! `κ₂ = ∬ (F(s,t) − F₁(s)F₂(t))`, and its order-n generalization over the
//! partition lattice, evaluated on tensor-product grids at small order.
//!
//! Empirical joints are snapped to the grid before integration: every sample
//! coordinate moves to the nearest node (a documented bias of at most one
//! grid step) and each indicator contributes half its mass at the jump node.
//! With jumps on nodes and the half convention, tensor trapezoid integration
//! is exact for the snapped discrete measure, so the integral and
//! moment-table routes can be compared tightly.

use ndarray::{ArrayD, ArrayViewMut1, Axis, IxDyn};
use std::collections::BTreeMap;
use std::path::Path;

use crate::dists::{sample_cdf_nodes, DistributionModel};
use crate::error::{Error, Result};
use crate::momentcalc::MultivariateMomentTable;
use crate::partitions::partition_iter;
use crate::volterra::{cumulants_via_theorem1, GridSpec};

/// Cap on total tensor nodes (`per_axis^n`).
pub const MAX_TENSOR_NODES: usize = 4_194_304;

#[derive(Debug, Clone)]
enum JointKind {
    Independent(Vec<DistributionModel>),
    Comonotone(DistributionModel),
    Empirical(Vec<Vec<f64>>),
}

/// An n-variate joint distribution: an independent product, a comonotone
/// coupling (all coordinates equal), or an empirical sample cloud.
#[derive(Debug, Clone)]
pub struct JointDistributionModel {
    n: usize,
    kind: JointKind,
}

impl JointDistributionModel {
    pub fn independent(marginals: Vec<DistributionModel>) -> Result<Self> {
        if marginals.is_empty() {
            return Err(Error::InvalidInput("need at least one marginal".into()));
        }
        Ok(Self {
            n: marginals.len(),
            kind: JointKind::Independent(marginals),
        })
    }

    /// All `n` coordinates equal to one draw from `marginal`; the joint CDF
    /// is `F(min_i t_i)`.
    pub fn comonotone(marginal: DistributionModel, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("need at least one coordinate".into()));
        }
        Ok(Self {
            n,
            kind: JointKind::Comonotone(marginal),
        })
    }

    pub fn empirical(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidInput("no sample rows".into()));
        }
        let n = rows[0].len();
        if n == 0 {
            return Err(Error::InvalidInput("rows must have at least one column".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} columns, expected {n}",
                    row.len()
                )));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!("row {i} contains a non-finite value")));
            }
        }
        Ok(Self {
            n,
            kind: JointKind::Empirical(rows),
        })
    }

    /// Loads an empirical joint from CSV, one sample vector per row; a
    /// non-numeric first row is treated as a header.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                msg: e.to_string(),
            })?;
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                msg: e.to_string(),
            })?;
            let parsed: std::result::Result<Vec<f64>, _> =
                record.iter().map(|s| s.parse::<f64>()).collect();
            match parsed {
                Ok(row) => rows.push(row),
                Err(e) if i == 0 => {
                    // header row
                    let _ = e;
                }
                Err(e) => {
                    return Err(Error::Parse {
                        path: path.to_path_buf(),
                        msg: format!("row {}: {e}", i + 1),
                    });
                }
            }
        }
        Self::empirical(rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Option<&[Vec<f64>]> {
        match &self.kind {
            JointKind::Empirical(rows) => Some(rows),
            _ => None,
        }
    }

    /// Joint CDF `F(t₁..t_n) = P(X₁ ≤ t₁, …, X_n ≤ t_n)`.
    pub fn joint_cdf(&self, t: &[f64]) -> f64 {
        assert_eq!(t.len(), self.n, "need one coordinate per variable");
        match &self.kind {
            JointKind::Independent(ms) => ms.iter().zip(t).map(|(m, &ti)| m.cdf(ti)).product(),
            JointKind::Comonotone(m) => {
                let min = t.iter().copied().fold(f64::INFINITY, f64::min);
                m.cdf(min)
            }
            JointKind::Empirical(rows) => {
                let hits = rows
                    .iter()
                    .filter(|row| row.iter().zip(t).all(|(&x, &ti)| x <= ti))
                    .count();
                hits as f64 / rows.len() as f64
            }
        }
    }

    /// The univariate marginal of coordinate `i` (1-based).
    pub fn marginal_model(&self, i: usize) -> Result<DistributionModel> {
        if i == 0 || i > self.n {
            return Err(Error::InvalidInput(format!("coordinate {i} out of 1..={}", self.n)));
        }
        match &self.kind {
            JointKind::Independent(ms) => Ok(ms[i - 1].clone()),
            JointKind::Comonotone(m) => Ok(m.clone()),
            JointKind::Empirical(rows) => {
                let column: Vec<f64> = rows.iter().map(|r| r[i - 1]).collect();
                DistributionModel::empirical_from_samples(&column)
            }
        }
    }

    /// Marginal CDF `F_I` of the variables in `subset` (1-based ids),
    /// realized by sending the complementary coordinates to their upper
    /// truncation bounds.
    pub fn marginal_cdf(&self, subset: &[usize]) -> Result<MarginalCdf<'_>> {
        if subset.is_empty() {
            return Err(Error::InvalidInput("subset must be nonempty".into()));
        }
        let mut seen = vec![false; self.n + 1];
        for &i in subset {
            if i == 0 || i > self.n {
                return Err(Error::InvalidInput(format!("variable {i} out of 1..={}", self.n)));
            }
            if seen[i] {
                return Err(Error::InvalidInput(format!("variable {i} repeated")));
            }
            seen[i] = true;
        }
        let mut template = Vec::with_capacity(self.n);
        for i in 1..=self.n {
            let (_, b) = self.marginal_model(i)?.truncate_support(1e-8)?;
            // one step beyond the bound so step marginals evaluate to 1 there
            template.push(b + 1e-6 * b.abs().max(1.0));
        }
        Ok(MarginalCdf {
            joint: self,
            subset: subset.to_vec(),
            template,
        })
    }
}

/// A marginal `F_I` exposed as a callable on `|I|` coordinates.
pub struct MarginalCdf<'a> {
    joint: &'a JointDistributionModel,
    subset: Vec<usize>,
    template: Vec<f64>,
}

impl MarginalCdf<'_> {
    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn eval(&self, t: &[f64]) -> f64 {
        assert_eq!(t.len(), self.subset.len(), "one coordinate per subset variable");
        let mut full = self.template.clone();
        for (&var, &ti) in self.subset.iter().zip(t) {
            full[var - 1] = ti;
        }
        self.joint.joint_cdf(&full)
    }
}

/// Tensor-grid parameters for the multivariate integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorGridSpec {
    eps_tail: f64,
    per_axis: Option<usize>,
}

impl TensorGridSpec {
    pub fn new(eps_tail: f64, per_axis: Option<usize>) -> Result<Self> {
        if !(eps_tail > 0.0 && eps_tail < 0.25) {
            return Err(Error::InvalidParameter(format!(
                "eps_tail must lie in (0, 1/4), got {eps_tail}"
            )));
        }
        if let Some(p) = per_axis {
            if p < 9 {
                return Err(Error::InvalidParameter(format!("need at least 9 nodes per axis, got {p}")));
            }
        }
        Ok(Self { eps_tail, per_axis })
    }

    /// Default resolution by dimension: 1001 / 201 / 101 nodes per axis.
    fn axis_points(&self, n: usize) -> usize {
        self.per_axis.unwrap_or(match n {
            1 => 1001,
            2 => 201,
            _ => 101,
        })
    }
}

impl Default for TensorGridSpec {
    fn default() -> Self {
        Self {
            eps_tail: 1e-8,
            per_axis: None,
        }
    }
}

struct AxisGrid {
    lo: f64,
    step: f64,
    points: usize,
}

impl AxisGrid {
    fn node(&self, i: usize) -> f64 {
        self.lo + self.step * i as f64
    }

    fn trapezoid_weights(&self) -> Vec<f64> {
        let mut w = vec![self.step; self.points];
        w[0] = 0.5 * self.step;
        w[self.points - 1] = 0.5 * self.step;
        w
    }
}

/// Grid-sampled joint model: per-axis nodes plus whatever the kind needs to
/// produce any subset-marginal CDF tensor.
struct TensorGrid {
    n: usize,
    axes: Vec<AxisGrid>,
    shape: Vec<usize>,
    comonotone: bool,
    /// per-axis marginal CDF node values (independent / comonotone)
    axis_cdfs: Option<Vec<Vec<f64>>>,
    /// snapped sample mass (empirical)
    mass: Option<ArrayD<f64>>,
    snapped_rows: Option<Vec<Vec<f64>>>,
}

impl TensorGrid {
    fn build(j: &JointDistributionModel, spec: &TensorGridSpec) -> Result<Self> {
        let n = j.n();
        if n > 3 {
            return Err(Error::OrderLimit {
                what: "tensor grid",
                n,
                max: 3,
            });
        }
        let points = spec.axis_points(n);
        let total = points.checked_pow(n as u32).ok_or(Error::MemoryBudget {
            points: usize::MAX,
            budget: MAX_TENSOR_NODES,
        })?;
        if total > MAX_TENSOR_NODES {
            return Err(Error::MemoryBudget {
                points: total,
                budget: MAX_TENSOR_NODES,
            });
        }
        let mut axes = Vec::with_capacity(n);
        for i in 1..=n {
            let marginal = j.marginal_model(i)?;
            let (a, b) = marginal.truncate_support(spec.eps_tail)?;
            let pad = (2.0 * (b - a) / (points - 1) as f64).max(1e-9 * a.abs().max(b.abs()).max(1.0));
            let (lo, hi) = (a - pad, b + pad);
            axes.push(AxisGrid {
                lo,
                step: (hi - lo) / (points - 1) as f64,
                points,
            });
        }
        let shape: Vec<usize> = vec![points; n];
        match &j.kind {
            JointKind::Independent(ms) => {
                let axis_cdfs = ms
                    .iter()
                    .zip(&axes)
                    .map(|(m, ax)| {
                        sample_cdf_nodes(m, ax.lo, ax.node(ax.points - 1), ax.points).0
                    })
                    .collect();
                Ok(Self {
                    n,
                    axes,
                    shape,
                    comonotone: false,
                    axis_cdfs: Some(axis_cdfs),
                    mass: None,
                    snapped_rows: None,
                })
            }
            JointKind::Comonotone(m) => {
                let values = sample_cdf_nodes(m, axes[0].lo, axes[0].node(points - 1), points).0;
                let axis_cdfs = vec![values; n];
                Ok(Self {
                    n,
                    axes,
                    shape,
                    comonotone: true,
                    axis_cdfs: Some(axis_cdfs),
                    mass: None,
                    snapped_rows: None,
                })
            }
            JointKind::Empirical(rows) => {
                let mut mass = ArrayD::<f64>::zeros(IxDyn(&shape));
                let mut snapped = Vec::with_capacity(rows.len());
                let corner_weight = 1.0 / (rows.len() as f64 * (1usize << n) as f64);
                for row in rows {
                    let nodes: Vec<usize> = row
                        .iter()
                        .zip(&axes)
                        .map(|(&x, ax)| {
                            (((x - ax.lo) / ax.step).round() as i64)
                                .clamp(1, ax.points as i64 - 2) as usize
                        })
                        .collect();
                    snapped.push(
                        nodes
                            .iter()
                            .zip(&axes)
                            .map(|(&p, ax)| ax.node(p))
                            .collect::<Vec<f64>>(),
                    );
                    // half the indicator mass sits at the jump node: deposit
                    // 2^{-n} at each upper corner {p_i, p_i + 1}
                    for corner in 0..(1usize << n) {
                        let idx: Vec<usize> = nodes
                            .iter()
                            .enumerate()
                            .map(|(ax, &p)| p + (corner >> ax & 1))
                            .collect();
                        mass[IxDyn(&idx)] += corner_weight;
                    }
                }
                Ok(Self {
                    n,
                    axes,
                    shape,
                    comonotone: false,
                    axis_cdfs: None,
                    mass: Some(mass),
                    snapped_rows: Some(snapped),
                })
            }
        }
    }

    /// CDF tensor of the variables in `subset` (0-based axis ids), shaped
    /// with size 1 on the remaining axes so it broadcasts over the full grid.
    fn subset_tensor(&self, subset: &[usize]) -> ArrayD<f64> {
        if let Some(mass) = &self.mass {
            let mut acc = mass.clone();
            for ax in 0..self.n {
                if !subset.contains(&ax) {
                    // collapse: marginalize this coordinate out
                    let summed = acc.sum_axis(Axis(ax));
                    acc = summed.insert_axis(Axis(ax));
                }
            }
            for &ax in subset {
                acc.accumulate_axis_inplace(Axis(ax), |&prev, cur| *cur += prev);
            }
            return acc;
        }
        let cdfs = self.axis_cdfs.as_ref().unwrap();
        match subset.len() {
            1 => {
                let ax = subset[0];
                let mut shape = vec![1; self.n];
                shape[ax] = self.shape[ax];
                ArrayD::from_shape_vec(IxDyn(&shape), cdfs[ax].clone()).unwrap()
            }
            _ => {
                let mut shape = vec![1; self.n];
                for &ax in subset {
                    shape[ax] = self.shape[ax];
                }
                if self.is_comonotone_kind() {
                    // F_I(t) = F(min t_i); all axes share one grid
                    let v = &cdfs[subset[0]];
                    ArrayD::from_shape_fn(IxDyn(&shape), |idx| {
                        let m = subset.iter().map(|&ax| idx[ax]).min().unwrap();
                        v[m]
                    })
                } else {
                    let mut acc = ArrayD::<f64>::ones(IxDyn(&shape));
                    for &ax in subset {
                        let mut s = vec![1; self.n];
                        s[ax] = self.shape[ax];
                        let v = ArrayD::from_shape_vec(IxDyn(&s), cdfs[ax].clone()).unwrap();
                        acc = acc * v;
                    }
                    acc
                }
            }
        }
    }

    fn is_comonotone_kind(&self) -> bool {
        self.comonotone
    }

    fn weights(&self) -> Vec<Vec<f64>> {
        self.axes.iter().map(|ax| ax.trapezoid_weights()).collect()
    }
}

fn weighted_total(a: ArrayD<f64>, weights: &[Vec<f64>]) -> f64 {
    let mut acc = a;
    for (ax, w) in weights.iter().enumerate() {
        let mut shape = vec![1; acc.ndim()];
        shape[ax] = w.len();
        let warr = ArrayD::from_shape_vec(IxDyn(&shape), w.clone()).unwrap();
        acc *= &warr;
    }
    acc.sum()
}

fn running_trapezoid_lane(mut lane: ArrayViewMut1<f64>, step: f64) {
    let mut acc = 0.0;
    let mut prev = lane[0];
    lane[0] = 0.0;
    for i in 1..lane.len() {
        let cur = lane[i];
        acc += 0.5 * step * (prev + cur);
        prev = cur;
        lane[i] = acc;
    }
}

fn apply_cumulative_ladder(
    tensor: &mut ArrayD<f64>,
    axes: &[AxisGrid],
    k: &[usize],
    order: &[usize],
) {
    for &ax in order {
        for _ in 0..k[ax] {
            let step = axes[ax].step;
            for lane in tensor.lanes_mut(Axis(ax)) {
                running_trapezoid_lane(lane, step);
            }
        }
    }
}

/// Levels of the multivariate cumulative ladder held on one tensor grid:
/// level `k` carries `F^{[k₁..k_n]}` at every node. Level `(0,…,0)` is the
/// sampled joint CDF itself, and every level is nondecreasing along each
/// coordinate.
pub struct MultiIndexCumulative {
    bounds: Vec<(f64, f64)>,
    shape: Vec<usize>,
    levels: Vec<(Vec<usize>, ArrayD<f64>)>,
}

impl MultiIndexCumulative {
    /// Builds the base level plus every requested multi-index
    /// (`Σ k_i ≤ 4`, `n ≤ 3`).
    pub fn build(
        j: &JointDistributionModel,
        spec: &TensorGridSpec,
        indices: &[Vec<usize>],
    ) -> Result<Self> {
        let n = j.n();
        for k in indices {
            if k.len() != n {
                return Err(Error::InvalidInput(format!(
                    "multi-index {k:?} has {} entries for {n} variables",
                    k.len()
                )));
            }
            let total: usize = k.iter().sum();
            if total > 4 {
                return Err(Error::OrderLimit {
                    what: "multivariate ladder",
                    n: total,
                    max: 4,
                });
            }
        }
        let grid = TensorGrid::build(j, spec)?;
        let all: Vec<usize> = (0..n).collect();
        let joint = grid.subset_tensor(&all);
        let mut levels = vec![(vec![0; n], joint.clone())];
        for k in indices {
            if k.iter().all(|&ki| ki == 0) {
                continue;
            }
            let mut tensor = joint.clone();
            apply_cumulative_ladder(&mut tensor, &grid.axes, k, &all);
            levels.push((k.clone(), tensor));
        }
        let bounds = grid
            .axes
            .iter()
            .map(|ax| (ax.lo, ax.node(ax.points - 1)))
            .collect();
        Ok(Self {
            bounds,
            shape: grid.shape,
            levels,
        })
    }

    /// Integration box `(a_i, b_i)` per coordinate.
    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    /// The stored tensor for a multi-index, if it was requested.
    pub fn level(&self, k: &[usize]) -> Option<&ArrayD<f64>> {
        self.levels
            .iter()
            .find(|(idx, _)| idx.as_slice() == k)
            .map(|(_, t)| t)
    }

    /// Level value at the upper box corner.
    pub fn corner_value(&self, k: &[usize]) -> Option<f64> {
        let corner: Vec<usize> = self.shape.iter().map(|&s| s - 1).collect();
        self.level(k).map(|t| t[IxDyn(&corner)])
    }
}

/// The multivariate cumulative ladder `F^{[k₁..k_n]}` evaluated at the upper
/// box corner: the one-dimensional cumulative operator is applied `k_i`
/// times along coordinate `i` on the tensor grid.
pub fn multivariate_iterated(
    j: &JointDistributionModel,
    k: &[usize],
    spec: &TensorGridSpec,
) -> Result<f64> {
    multivariate_iterated_ordered(j, k, spec, None)
}

/// Same, with an explicit coordinate application order (used to check that
/// the order does not matter).
pub(crate) fn multivariate_iterated_ordered(
    j: &JointDistributionModel,
    k: &[usize],
    spec: &TensorGridSpec,
    order: Option<&[usize]>,
) -> Result<f64> {
    if k.len() != j.n() {
        return Err(Error::InvalidInput(format!(
            "multi-index has {} entries for {} variables",
            k.len(),
            j.n()
        )));
    }
    let total: usize = k.iter().sum();
    if total > 4 {
        return Err(Error::OrderLimit {
            what: "multivariate_iterated",
            n: total,
            max: 4,
        });
    }
    let grid = TensorGrid::build(j, spec)?;
    let all: Vec<usize> = (0..grid.n).collect();
    let mut tensor = grid.subset_tensor(&all);
    let axes_order: Vec<usize> = match order {
        Some(o) => o.to_vec(),
        None => all.clone(),
    };
    apply_cumulative_ladder(&mut tensor, &grid.axes, k, &axes_order);
    let corner: Vec<usize> = grid.shape.iter().map(|&s| s - 1).collect();
    Ok(tensor[IxDyn(&corner)])
}

/// Covariance as the integral of `F(t₁,t₂) − F₁(t₁)F₂(t₂)` over the
/// truncated box. Identical code path to [`block_fang_cumulant`] at `n = 2`.
pub fn hoeffding_covariance(j: &JointDistributionModel, spec: &TensorGridSpec) -> Result<f64> {
    if j.n() != 2 {
        return Err(Error::InvalidInput(format!(
            "hoeffding_covariance needs a bivariate model, got n = {}",
            j.n()
        )));
    }
    block_fang_cumulant(j, 2, spec)
}

/// The order-n covariance identity over the partition lattice:
/// `κ_n = (−1)ⁿ ∫ Σ_{π∈Π_n} μ(π,1̂) ∏_{B∈π} F_B((t_i)_{i∈B}) dt`, on a
/// tensor grid, for `n ∈ {2, 3}`.
pub fn block_fang_cumulant(
    j: &JointDistributionModel,
    n: usize,
    spec: &TensorGridSpec,
) -> Result<f64> {
    if !(n == 2 || n == 3) {
        return Err(Error::OrderLimit {
            what: "block_fang_cumulant",
            n,
            max: 3,
        });
    }
    if j.n() != n {
        return Err(Error::InvalidInput(format!(
            "model has {} variables, expected {n}",
            j.n()
        )));
    }
    let grid = TensorGrid::build(j, spec)?;
    let mut subset_cache: BTreeMap<Vec<usize>, ArrayD<f64>> = BTreeMap::new();
    let mut integrand = ArrayD::<f64>::zeros(IxDyn(&grid.shape));
    for pi in partition_iter(n)? {
        let mut term = ArrayD::<f64>::ones(IxDyn(&grid.shape));
        for block in pi.blocks() {
            let axes: Vec<usize> = block.iter().map(|&v| v - 1).collect();
            let tensor = subset_cache
                .entry(axes.clone())
                .or_insert_with(|| grid.subset_tensor(&axes));
            term *= &*tensor;
        }
        let mu = pi.mobius_to_top() as f64;
        integrand.zip_mut_with(&term, |acc, &t| *acc += mu * t);
    }
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * weighted_total(integrand, &grid.weights()))
}

/// Residual between the comonotone multivariate cumulant and the univariate
/// ordered-simplex route: the two coincide after symmetrization.
pub fn comonotone_reduction_check(
    d: &DistributionModel,
    n: usize,
    tensor_spec: &TensorGridSpec,
    grid_spec: &GridSpec,
) -> Result<f64> {
    let joint = JointDistributionModel::comonotone(d.clone(), n)?;
    let multivariate = block_fang_cumulant(&joint, n, tensor_spec)?;
    let univariate = cumulants_via_theorem1(d, n, grid_spec)?[n - 1];
    Ok((multivariate - univariate).abs())
}

/// The sample rows actually integrated by the tensor routes: every
/// coordinate snapped to its nearest grid node.
pub fn snapped_empirical_rows(
    j: &JointDistributionModel,
    spec: &TensorGridSpec,
) -> Result<Vec<Vec<f64>>> {
    if j.rows().is_none() {
        return Err(Error::InvalidInput(
            "snapped rows exist only for empirical joint models".into(),
        ));
    }
    let grid = TensorGrid::build(j, spec)?;
    Ok(grid.snapped_rows.expect("empirical grid keeps its rows"))
}

/// Mixed raw moments `E ∏_{i∈I} X_i` of a sample cloud, for every nonempty
/// subset.
pub fn empirical_moment_table(rows: &[Vec<f64>]) -> Result<MultivariateMomentTable> {
    if rows.is_empty() {
        return Err(Error::InvalidInput("no sample rows".into()));
    }
    let n = rows[0].len();
    MultivariateMomentTable::from_fn(n, |vars| {
        rows.iter()
            .map(|row| vars.iter().map(|&v| row[v - 1]).product::<f64>())
            .sum::<f64>()
            / rows.len() as f64
    })
}
