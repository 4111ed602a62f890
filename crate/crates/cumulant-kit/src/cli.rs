//! Report-producing command layer behind the `cumulant-kit` binary:
//! distribution parsing, method dispatch, cross-method comparison, and the
//! verification suites. Reports render to JSON (17 significant digits) or
//! CSV (12), deterministically for a fixed config.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dists::{load_samples_file, Builtin, DistributionModel};
use crate::error::{Error, Result};
use crate::hoeffding::{
    block_fang_cumulant, comonotone_reduction_check, empirical_moment_table, hoeffding_covariance,
    snapped_empirical_rows, JointDistributionModel, TensorGridSpec,
};
use crate::momentcalc::{
    moments_to_cumulants, multivariate_moments_to_cumulant, MomentSequence,
};
use crate::partitions::{enumerate_partitions, enumerate_shuffles, multinomial, partition_types};
use crate::volterra::{
    cumulants_from_raw_moments, cumulants_via_factorized, cumulants_via_mrl,
    cumulants_via_theorem1, cumulants_via_truncated, verify_shuffle_relation, GridSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Moments,
    Truncated,
    Theorem1,
    Factorized,
    Mrl,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Moments => "moments",
            Method::Truncated => "truncated",
            Method::Theorem1 => "theorem1",
            Method::Factorized => "factorized",
            Method::Mrl => "mrl",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "moments" => Ok(Method::Moments),
            "truncated" => Ok(Method::Truncated),
            "theorem1" => Ok(Method::Theorem1),
            "factorized" => Ok(Method::Factorized),
            "mrl" => Ok(Method::Mrl),
            other => Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    fn name(&self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::InvalidParameter(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifySuite {
    Combinatorics,
    Shuffle,
    Hoeffding,
    Mrl,
}

impl VerifySuite {
    pub fn name(&self) -> &'static str {
        match self {
            VerifySuite::Combinatorics => "combinatorics",
            VerifySuite::Shuffle => "shuffle",
            VerifySuite::Hoeffding => "hoeffding",
            VerifySuite::Mrl => "mrl",
        }
    }
}

impl FromStr for VerifySuite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "combinatorics" => Ok(VerifySuite::Combinatorics),
            "shuffle" => Ok(VerifySuite::Shuffle),
            "hoeffding" => Ok(VerifySuite::Hoeffding),
            "mrl" => Ok(VerifySuite::Mrl),
            other => Err(Error::InvalidParameter(format!("unknown suite {other:?}"))),
        }
    }
}

/// One run's worth of settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dist_spec: String,
    pub max_order: usize,
    pub methods: Vec<Method>,
    pub eps_tail: f64,
    pub grid_points: usize,
    pub output_format: OutputFormat,
    pub seed: u64,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dist_spec: "uniform01".into(),
            max_order: 4,
            methods: vec![Method::Truncated, Method::Theorem1],
            eps_tail: 1e-10,
            grid_points: 20001,
            output_format: OutputFormat::Json,
            seed: 0,
            rel_tol: 1e-3,
            abs_tol: 1e-5,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_order < 1 {
            return Err(Error::InvalidParameter("max_order must be at least 1".into()));
        }
        if self.grid_points < 1001 || self.grid_points.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "grid_points must be odd and at least 1001, got {}",
                self.grid_points
            )));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidParameter("select at least one method".into()));
        }
        for m in &self.methods {
            match m {
                Method::Theorem1 | Method::Factorized if self.max_order > 6 => {
                    return Err(Error::InvalidParameter(format!(
                        "method {} supports max_order <= 6, got {}",
                        m.name(),
                        self.max_order
                    )));
                }
                Method::Moments | Method::Truncated if self.max_order > 8 => {
                    return Err(Error::InvalidParameter(format!(
                        "method {} supports max_order <= 8, got {}",
                        m.name(),
                        self.max_order
                    )));
                }
                Method::Mrl if self.max_order < 3 => {
                    return Err(Error::InvalidParameter(
                        "the mrl method reports orders 3 and 4; set max_order >= 3".into(),
                    ));
                }
                _ => {}
            }
        }
        GridSpec::new(self.eps_tail, self.grid_points)?;
        Ok(())
    }

    fn grid_spec(&self) -> GridSpec {
        GridSpec::new(self.eps_tail, self.grid_points).expect("validated")
    }
}

/// Parses a distribution spec: a builtin name (`uniform01`, `exponential1`,
/// `stdnormal`, `twopoint:p,x0,x1`), `samples:<path>`, or `grid:<path>`.
pub fn parse_dist(spec: &str) -> Result<DistributionModel> {
    let spec = spec.trim();
    match spec {
        "uniform01" => return DistributionModel::builtin(Builtin::Uniform01),
        "exponential1" => return DistributionModel::builtin(Builtin::Exponential1),
        "stdnormal" => return DistributionModel::builtin(Builtin::StdNormal),
        _ => {}
    }
    if let Some(rest) = spec.strip_prefix("twopoint:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidParameter(format!(
                "twopoint takes p,x0,x1 (got {rest:?})"
            )));
        }
        let mut vals = [0.0f64; 3];
        for (slot, part) in vals.iter_mut().zip(&parts) {
            *slot = part.trim().parse().map_err(|e| {
                Error::InvalidParameter(format!("bad twopoint parameter {part:?}: {e}"))
            })?;
        }
        return DistributionModel::builtin(Builtin::TwoPoint {
            p: vals[0],
            x0: vals[1],
            x1: vals[2],
        });
    }
    if let Some(path) = spec.strip_prefix("samples:") {
        let xs = load_samples_file(path)?;
        return DistributionModel::empirical_from_samples(&xs);
    }
    if let Some(path) = spec.strip_prefix("grid:") {
        return DistributionModel::grid_from_csv(path);
    }
    Err(Error::InvalidParameter(format!(
        "unknown distribution spec {spec:?}"
    )))
}

#[derive(Debug, Clone)]
pub struct MethodColumn {
    pub name: &'static str,
    pub orders: Vec<usize>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct PairDeviation {
    pub a: &'static str,
    pub b: &'static str,
    pub orders: Vec<usize>,
    pub max_abs: f64,
    pub max_rel: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        let residual = (value - target).abs();
        Self {
            name: name.into(),
            value,
            target,
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }

    fn exact(name: impl Into<String>, mismatches: usize) -> Self {
        Self {
            name: name.into(),
            value: mismatches as f64,
            target: 0.0,
            residual: mismatches as f64,
            tolerance: 0.0,
            pass: mismatches == 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub config: RunConfig,
    pub reference: Option<Vec<f64>>,
    pub methods: Vec<MethodColumn>,
    pub pairs: Vec<PairDeviation>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    pub fn render(&self) -> String {
        match self.config.output_format {
            OutputFormat::Json => self.render_json(),
            OutputFormat::Csv => self.render_csv(),
        }
    }

    fn render_json(&self) -> String {
        let mut s = String::new();
        let cfg = &self.config;
        s.push_str("{\n");
        let _ = writeln!(s, "  \"tool\": \"cumulant-kit\",");
        let _ = writeln!(s, "  \"command\": {},", json_str(self.command));
        s.push_str("  \"config\": {\n");
        let _ = writeln!(s, "    \"dist\": {},", json_str(&cfg.dist_spec));
        let _ = writeln!(s, "    \"max_order\": {},", cfg.max_order);
        let method_names: Vec<String> = cfg.methods.iter().map(|m| json_str(m.name())).collect();
        let _ = writeln!(s, "    \"methods\": [{}],", method_names.join(", "));
        let _ = writeln!(s, "    \"eps_tail\": {},", fmt_json_f64(cfg.eps_tail));
        let _ = writeln!(s, "    \"grid_points\": {},", cfg.grid_points);
        let _ = writeln!(s, "    \"output_format\": {},", json_str(cfg.output_format.name()));
        let _ = writeln!(s, "    \"seed\": {},", cfg.seed);
        let _ = writeln!(s, "    \"rel_tol\": {},", fmt_json_f64(cfg.rel_tol));
        let _ = writeln!(s, "    \"abs_tol\": {}", fmt_json_f64(cfg.abs_tol));
        s.push_str("  },\n");
        match &self.reference {
            Some(values) => {
                s.push_str("  \"reference\": { \"available\": true, \"values\": ");
                push_json_array(&mut s, values);
                s.push_str(" },\n");
            }
            None => s.push_str("  \"reference\": { \"available\": false },\n"),
        }
        s.push_str("  \"methods\": [\n");
        for (i, col) in self.methods.iter().enumerate() {
            let orders: Vec<String> = col.orders.iter().map(|o| o.to_string()).collect();
            let _ = write!(
                s,
                "    {{ \"name\": {}, \"orders\": [{}], \"values\": ",
                json_str(col.name),
                orders.join(", ")
            );
            push_json_array(&mut s, &col.values);
            s.push_str(" }");
            s.push_str(if i + 1 < self.methods.len() { ",\n" } else { "\n" });
        }
        s.push_str("  ],\n");
        if !self.pairs.is_empty() {
            s.push_str("  \"comparison\": {\n    \"pairs\": [\n");
            for (i, p) in self.pairs.iter().enumerate() {
                let orders: Vec<String> = p.orders.iter().map(|o| o.to_string()).collect();
                let _ = write!(
                    s,
                    "      {{ \"a\": {}, \"b\": {}, \"orders\": [{}], \"max_abs_dev\": {}, \"max_rel_dev\": {}, \"pass\": {} }}",
                    json_str(p.a),
                    json_str(p.b),
                    orders.join(", "),
                    fmt_json_f64(p.max_abs),
                    fmt_json_f64(p.max_rel),
                    p.pass
                );
                s.push_str(if i + 1 < self.pairs.len() { ",\n" } else { "\n" });
            }
            s.push_str("    ]\n  },\n");
        }
        if !self.checks.is_empty() {
            s.push_str("  \"checks\": [\n");
            for (i, c) in self.checks.iter().enumerate() {
                let _ = write!(
                    s,
                    "    {{ \"name\": {}, \"value\": {}, \"target\": {}, \"residual\": {}, \"tolerance\": {}, \"pass\": {} }}",
                    json_str(&c.name),
                    fmt_json_f64(c.value),
                    fmt_json_f64(c.target),
                    fmt_json_f64(c.residual),
                    fmt_json_f64(c.tolerance),
                    c.pass
                );
                s.push_str(if i + 1 < self.checks.len() { ",\n" } else { "\n" });
            }
            s.push_str("  ],\n");
        }
        let _ = writeln!(s, "  \"pass\": {}", self.pass);
        s.push_str("}\n");
        s
    }

    fn render_csv(&self) -> String {
        let mut s = String::new();
        if !self.methods.is_empty() || self.reference.is_some() {
            s.push_str("order,method,value\n");
            if let Some(reference) = &self.reference {
                for (i, v) in reference.iter().enumerate() {
                    let _ = writeln!(s, "{},reference,{}", i + 1, fmt_csv_f64(*v));
                }
            }
            for col in &self.methods {
                for (order, v) in col.orders.iter().zip(&col.values) {
                    let _ = writeln!(s, "{order},{},{}", col.name, fmt_csv_f64(*v));
                }
            }
        }
        if !self.pairs.is_empty() {
            s.push('\n');
            s.push_str("pair_a,pair_b,max_abs_dev,max_rel_dev,pass\n");
            for p in &self.pairs {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    p.a,
                    p.b,
                    fmt_csv_f64(p.max_abs),
                    fmt_csv_f64(p.max_rel),
                    p.pass
                );
            }
        }
        if !self.checks.is_empty() {
            if !s.is_empty() {
                s.push('\n');
            }
            s.push_str("check,value,target,residual,tolerance,pass\n");
            for c in &self.checks {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    c.name,
                    fmt_csv_f64(c.value),
                    fmt_csv_f64(c.target),
                    fmt_csv_f64(c.residual),
                    fmt_csv_f64(c.tolerance),
                    c.pass
                );
            }
        }
        s
    }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// 17 significant digits; round-trips any f64 exactly.
fn fmt_json_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

fn fmt_csv_f64(x: f64) -> String {
    format!("{x:.11e}")
}

fn push_json_array(s: &mut String, values: &[f64]) {
    s.push('[');
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&fmt_json_f64(*v));
    }
    s.push(']');
}

fn reference_cumulants(d: &DistributionModel, max_order: usize) -> Result<Option<Vec<f64>>> {
    match d.reference_moments() {
        None => Ok(None),
        Some(m) => {
            let trimmed = MomentSequence::new(m.values()[..max_order].to_vec())?;
            Ok(Some(moments_to_cumulants(&trimmed)?.to_f64()))
        }
    }
}

fn method_column(
    method: Method,
    d: &DistributionModel,
    cfg: &RunConfig,
    reference: Option<&[f64]>,
) -> Result<MethodColumn> {
    let spec = cfg.grid_spec();
    let full_orders: Vec<usize> = (1..=cfg.max_order).collect();
    let (orders, values) = match method {
        Method::Moments => {
            let values = if let Some(reference) = reference {
                reference.to_vec()
            } else if let Some(samples) = d.samples() {
                // cumulants of the empirical measure, from its raw moments
                let raw: Vec<f64> = (1..=cfg.max_order)
                    .map(|k| {
                        samples.iter().map(|&x| x.powi(k as i32)).sum::<f64>()
                            / samples.len() as f64
                    })
                    .collect();
                cumulants_from_raw_moments(&raw)?
            } else {
                return Err(Error::InvalidParameter(
                    "the moments method needs a builtin or samples distribution".into(),
                ));
            };
            (full_orders, values)
        }
        Method::Truncated => (
            full_orders,
            cumulants_via_truncated(d, cfg.max_order, None, &spec)?,
        ),
        Method::Theorem1 => (full_orders, cumulants_via_theorem1(d, cfg.max_order, &spec)?),
        Method::Factorized => (
            full_orders,
            cumulants_via_factorized(d, cfg.max_order, &spec)?,
        ),
        Method::Mrl => {
            let orders: Vec<usize> = (3..=cfg.max_order.min(4)).collect();
            let values: Result<Vec<f64>> = orders
                .iter()
                .map(|&n| cumulants_via_mrl(d, n, &spec))
                .collect();
            (orders, values?)
        }
    };
    Ok(MethodColumn {
        name: method.name(),
        orders,
        values,
    })
}

/// `cumulants`: per order and per method, the value `κ_n`, plus exact
/// reference values when the distribution has them.
pub fn cmd_cumulants(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let d = parse_dist(&cfg.dist_spec)?;
    let reference = reference_cumulants(&d, cfg.max_order)?;
    let mut methods = Vec::with_capacity(cfg.methods.len());
    for &m in &cfg.methods {
        methods.push(method_column(m, &d, cfg, reference.as_deref())?);
    }
    Ok(Report {
        command: "cumulants",
        config: cfg.clone(),
        reference,
        methods,
        pairs: Vec::new(),
        checks: Vec::new(),
        pass: true,
    })
}

/// `compare`: pairwise deviations between the selected methods, judged
/// against the configured tolerances.
pub fn cmd_compare(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    if cfg.methods.len() < 2 {
        return Err(Error::InvalidParameter(
            "compare needs at least two methods".into(),
        ));
    }
    let d = parse_dist(&cfg.dist_spec)?;
    let reference = reference_cumulants(&d, cfg.max_order)?;
    let mut methods = Vec::with_capacity(cfg.methods.len());
    for &m in &cfg.methods {
        methods.push(method_column(m, &d, cfg, reference.as_deref())?);
    }
    let mut pairs = Vec::new();
    for i in 0..methods.len() {
        for jdx in i + 1..methods.len() {
            pairs.push(compare_columns(&methods[i], &methods[jdx], cfg));
        }
    }
    let pass = pairs.iter().all(|p| p.pass);
    Ok(Report {
        command: "compare",
        config: cfg.clone(),
        reference,
        methods,
        pairs,
        checks: Vec::new(),
        pass,
    })
}

fn compare_columns(a: &MethodColumn, b: &MethodColumn, cfg: &RunConfig) -> PairDeviation {
    let mut orders = Vec::new();
    let mut max_abs = 0.0f64;
    let mut max_rel = 0.0f64;
    let mut pass = true;
    for (oa, va) in a.orders.iter().zip(&a.values) {
        if let Some(pos) = b.orders.iter().position(|ob| ob == oa) {
            let vb = b.values[pos];
            let abs = (va - vb).abs();
            let scale = va.abs().max(vb.abs());
            orders.push(*oa);
            max_abs = max_abs.max(abs);
            if scale > cfg.abs_tol {
                max_rel = max_rel.max(abs / scale);
            }
            if abs > cfg.abs_tol.max(cfg.rel_tol * scale) {
                pass = false;
            }
        }
    }
    PairDeviation {
        a: a.name,
        b: b.name,
        orders,
        max_abs,
        max_rel,
        pass,
    }
}

/// `verify`: runs one named suite of internal identities and prints one
/// residual per check.
pub fn cmd_verify(suite: VerifySuite, cfg: &RunConfig) -> Result<Report> {
    GridSpec::new(cfg.eps_tail, cfg.grid_points)?;
    let checks = match suite {
        VerifySuite::Combinatorics => verify_combinatorics()?,
        VerifySuite::Shuffle => verify_shuffle(cfg)?,
        VerifySuite::Hoeffding => verify_hoeffding(cfg)?,
        VerifySuite::Mrl => verify_mrl(cfg)?,
    };
    let pass = checks.iter().all(|c| c.pass);
    Ok(Report {
        command: "verify",
        config: cfg.clone(),
        reference: None,
        methods: Vec::new(),
        pairs: Vec::new(),
        checks,
        pass,
    })
}

fn bell_triangle(upto: usize) -> Vec<u64> {
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

fn verify_combinatorics() -> Result<Vec<Check>> {
    let bells = bell_triangle(8);
    let mut bell_mismatches = 0;
    let mut type_mismatches = 0;
    let mut shuffle_mismatches = 0;
    for (n, &bell) in bells.iter().enumerate().skip(1) {
        let parts = enumerate_partitions(n)?;
        if parts.len() as u64 != bell {
            bell_mismatches += 1;
        }
        let types = partition_types(n)?;
        let total: u64 = types.iter().map(|l| l.faa_di_bruno_count()).sum();
        if total != bell {
            type_mismatches += 1;
        }
        for lam in &types {
            let sizes: Vec<usize> = lam
                .multiplicities()
                .iter()
                .enumerate()
                .flat_map(|(i, &k)| std::iter::repeat_n(i + 1, k))
                .collect();
            let enumerated = enumerate_shuffles(&sizes)?.len() as u64;
            let k_factorial: u64 = lam
                .multiplicities()
                .iter()
                .map(|&k| (1..=k as u64).product::<u64>().max(1))
                .product();
            let expected = multinomial(&sizes);
            if enumerated != expected || expected != k_factorial * lam.faa_di_bruno_count() {
                shuffle_mismatches += 1;
            }
        }
    }
    Ok(vec![
        Check::exact("bell_counts_n1_to_8", bell_mismatches),
        Check::exact("type_counts_sum_to_bell", type_mismatches),
        Check::exact("shuffle_counts_match_multinomials", shuffle_mismatches),
    ])
}

fn builtin_models() -> Result<Vec<(&'static str, DistributionModel)>> {
    Ok(vec![
        ("uniform01", DistributionModel::builtin(Builtin::Uniform01)?),
        ("exponential1", DistributionModel::builtin(Builtin::Exponential1)?),
        ("stdnormal", DistributionModel::builtin(Builtin::StdNormal)?),
        (
            "twopoint",
            DistributionModel::builtin(Builtin::TwoPoint {
                p: 0.5,
                x0: 0.0,
                x1: 1.0,
            })?,
        ),
    ])
}

fn verify_shuffle(cfg: &RunConfig) -> Result<Vec<Check>> {
    let spec = cfg.grid_spec();
    let mut checks = Vec::new();
    for (name, d) in builtin_models()? {
        let mut worst = 0.0f64;
        for m in 0..=5usize {
            for n in 0..=(5 - m) {
                if m + n == 0 {
                    continue;
                }
                worst = worst.max(verify_shuffle_relation(&d, m, n, &spec)?);
            }
        }
        checks.push(Check::new(
            format!("chen_residual_{name}_orders_le_5"),
            worst,
            0.0,
            1e-6,
        ));
    }
    Ok(checks)
}

fn verify_hoeffding(cfg: &RunConfig) -> Result<Vec<Check>> {
    let tspec = TensorGridSpec::default();
    let gspec = cfg.grid_spec();
    let uniform = DistributionModel::builtin(Builtin::Uniform01)?;
    let exponential = DistributionModel::builtin(Builtin::Exponential1)?;
    let mut checks = Vec::new();

    let independent =
        JointDistributionModel::independent(vec![uniform.clone(), exponential.clone()])?;
    checks.push(Check::new(
        "independent_pair_covariance",
        hoeffding_covariance(&independent, &tspec)?,
        0.0,
        1e-10,
    ));

    let comono_uniform = JointDistributionModel::comonotone(uniform.clone(), 2)?;
    checks.push(Check::new(
        "comonotone_uniform_covariance",
        hoeffding_covariance(&comono_uniform, &tspec)?,
        1.0 / 12.0,
        1e-5,
    ));

    let comono_exp3 = JointDistributionModel::comonotone(exponential.clone(), 3)?;
    checks.push(Check::new(
        "comonotone_exponential_triple_k3",
        block_fang_cumulant(&comono_exp3, 3, &tspec)?,
        2.0,
        2e-2,
    ));

    for (name, d) in [("uniform01", &uniform), ("exponential1", &exponential)] {
        for n in [2usize, 3] {
            checks.push(Check::new(
                format!("comonotone_reduction_{name}_n{n}"),
                comonotone_reduction_check(d, n, &tspec, &gspec)?,
                0.0,
                1e-3,
            ));
        }
    }

    // seeded empirical pair: integral covariance vs the moment table of the
    // same grid-snapped cloud
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rows: Vec<Vec<f64>> = (0..1000)
        .map(|_| {
            let u: f64 = rng.gen();
            let w: f64 = rng.gen();
            vec![u, 0.6 * u + 0.4 * w]
        })
        .collect();
    let joint = JointDistributionModel::empirical(rows)?;
    let integral = hoeffding_covariance(&joint, &tspec)?;
    let snapped = snapped_empirical_rows(&joint, &tspec)?;
    let table = empirical_moment_table(&snapped)?;
    let expected = multivariate_moments_to_cumulant(&table)?;
    checks.push(Check::new(
        "empirical_pair_vs_sample_covariance",
        integral,
        expected,
        1e-9,
    ));
    Ok(checks)
}

fn verify_mrl(cfg: &RunConfig) -> Result<Vec<Check>> {
    let spec = cfg.grid_spec();
    let mut checks = Vec::new();
    for (name, d) in builtin_models()? {
        let reference = cumulants_via_theorem1(&d, 4, &spec)?;
        for n in [3usize, 4] {
            let v = cumulants_via_mrl(&d, n, &spec)?;
            let target = reference[n - 1];
            checks.push(Check::new(
                format!("mrl_vs_theorem1_{name}_n{n}"),
                v,
                target,
                (1e-2 * target.abs()).max(1e-5),
            ));
        }
    }
    Ok(checks)
}
