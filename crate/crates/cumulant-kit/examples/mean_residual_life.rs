//! Mean-residual-life functions and the doubly-reduced cumulant route:
//! `R(y) = E(X − y | X > y)`, `P(y) = y − E(X | X < y)`, and the third and
//! fourth cumulants from an integral with two fewer variables.
//!
//! Run with `cargo run --example mean_residual_life`.

use cumulant_kit::dists::{Builtin, DistributionModel};
use cumulant_kit::volterra::{cumulants_via_mrl, cumulants_via_theorem1, GridSpec};

fn main() {
    let spec = GridSpec::default();

    let exponential = DistributionModel::builtin(Builtin::Exponential1).unwrap();
    println!("exponential(1) is memoryless: R(y) = 1 for every y");
    for y in [0.0, 0.5, 1.0, 2.0] {
        println!("  R({y}) = {:.8}", exponential.mean_residual_life_r(y).unwrap());
    }

    let uniform = DistributionModel::builtin(Builtin::Uniform01).unwrap();
    println!("\nuniform[0,1]: R(y) = (1-y)/2, P(y) = y/2");
    for y in [0.0, 0.25, 0.5] {
        println!("  R({y}) = {:.8}", uniform.mean_residual_life_r(y).unwrap());
    }
    for y in [0.5, 0.75, 1.0] {
        println!("  P({y}) = {:.8}", uniform.mean_residual_life_p(y).unwrap());
    }

    println!("\nreduced-route cumulants vs the ordered-simplex sum:");
    for (name, d) in [("uniform01", &uniform), ("exponential1", &exponential)] {
        let reference = cumulants_via_theorem1(d, 4, &spec).unwrap();
        for n in [3usize, 4] {
            let reduced = cumulants_via_mrl(d, n, &spec).unwrap();
            println!(
                "  {name} kappa_{n}: reduced {reduced:>14.8}  simplex {:>14.8}  diff {:.1e}",
                reference[n - 1],
                (reduced - reference[n - 1]).abs()
            );
        }
    }
}
