//! Every cumulant route side by side: the exact transform of the reference
//! moments, the truncated-moment ladder, the ordered-simplex partition sum,
//! its factorized form, and the mean-residual-life reduction.
//!
//! Run with `cargo run --example route_comparison`.

use cumulant_kit::dists::{Builtin, DistributionModel};
use cumulant_kit::momentcalc::{moments_to_cumulants, MomentSequence};
use cumulant_kit::volterra::{
    cumulants_via_factorized, cumulants_via_mrl, cumulants_via_theorem1, cumulants_via_truncated,
    GridSpec,
};

fn main() {
    let spec = GridSpec::default();
    let max_order = 5;
    for (name, which) in [
        ("uniform01", Builtin::Uniform01),
        ("exponential1", Builtin::Exponential1),
        ("stdnormal", Builtin::StdNormal),
    ] {
        let d = DistributionModel::builtin(which).unwrap();
        let reference_moments = d.reference_moments().unwrap();
        let trimmed = MomentSequence::new(reference_moments.values()[..max_order].to_vec()).unwrap();
        let exact = moments_to_cumulants(&trimmed).unwrap().to_f64();

        let truncated = cumulants_via_truncated(&d, max_order, None, &spec).unwrap();
        let theorem1 = cumulants_via_theorem1(&d, max_order, &spec).unwrap();
        let factorized = cumulants_via_factorized(&d, max_order, &spec).unwrap();

        println!("== {name}");
        println!(
            "{:>2} {:>16} {:>16} {:>16} {:>16} {:>16}",
            "n", "exact", "truncated", "simplex sum", "factorized", "mrl"
        );
        for n in 1..=max_order {
            let mrl = if n == 3 || n == 4 {
                format!("{:>16.10}", cumulants_via_mrl(&d, n, &spec).unwrap())
            } else {
                format!("{:>16}", "-")
            };
            println!(
                "{n:>2} {:>16.10} {:>16.10} {:>16.10} {:>16.10} {mrl}",
                exact[n - 1],
                truncated[n - 1],
                theorem1[n - 1],
                factorized[n - 1]
            );
        }
        println!();
    }
}
