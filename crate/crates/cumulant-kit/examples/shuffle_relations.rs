//! Chen's shuffle relations for the cumulative ladder: the product
//! `VᵐF · VⁿF` equals the sum over all (m,n)-shuffles of mixed
//! ordered-simplex integrals. The verifier evaluates both sides exactly for
//! the piecewise-linear grid CDF; residuals are pure rounding error.
//!
//! Run with `cargo run --example shuffle_relations`.

use cumulant_kit::dists::{Builtin, DistributionModel};
use cumulant_kit::volterra::{verify_shuffle_relation, GridSpec};

fn main() {
    let spec = GridSpec::default();
    for (name, which) in [
        ("uniform01", Builtin::Uniform01),
        ("exponential1", Builtin::Exponential1),
        ("stdnormal", Builtin::StdNormal),
    ] {
        let d = DistributionModel::builtin(which).unwrap();
        println!("== {name}: |V^m F · V^n F − shuffle sum|");
        print!("{:>4}", "m\\n");
        for n in 0..=4 {
            print!(" {n:>9}");
        }
        println!();
        for m in 1..=4usize {
            print!("{m:>4}");
            for n in 0..=4usize {
                if m + n > 5 {
                    print!(" {:>9}", "-");
                    continue;
                }
                let r = verify_shuffle_relation(&d, m, n, &spec).unwrap();
                print!(" {r:>9.1e}");
            }
            println!();
        }
        println!();
    }
}
