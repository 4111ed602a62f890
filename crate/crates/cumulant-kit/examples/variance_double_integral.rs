//! The variance as a double integral of the distribution function:
//! `Var X = 2 ∬_{t₁<t₂} F(t₁) (1 − F(t₂)) dt₁ dt₂`, evaluated for the
//! builtin models and compared to closed forms.
//!
//! Run with `cargo run --example variance_double_integral`.

use cumulant_kit::dists::{Builtin, DistributionModel};
use cumulant_kit::volterra::{cumulants_via_theorem1, GridSpec};

fn main() {
    let spec = GridSpec::default();
    let cases = [
        ("uniform01", Builtin::Uniform01, 1.0 / 12.0),
        ("exponential1", Builtin::Exponential1, 1.0),
        ("stdnormal", Builtin::StdNormal, 1.0),
        (
            "twopoint(1/2,0,1)",
            Builtin::TwoPoint {
                p: 0.5,
                x0: 0.0,
                x1: 1.0,
            },
            0.25,
        ),
    ];
    println!("{:<18} {:>16} {:>16} {:>10}", "model", "double integral", "closed form", "error");
    for (name, which, exact) in cases {
        let d = DistributionModel::builtin(which).unwrap();
        let kappas = cumulants_via_theorem1(&d, 2, &spec).unwrap();
        println!(
            "{name:<18} {:>16.10} {:>16.10} {:>10.1e}",
            kappas[1],
            exact,
            (kappas[1] - exact).abs()
        );
    }
}
