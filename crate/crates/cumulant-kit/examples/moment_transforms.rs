//! Exact rational moment/cumulant transforms: the partition-lattice
//! inversion, its round trip, translation, and additivity for independent
//! sums.
//!
//! Run with `cargo run --example moment_transforms`.

use num::{BigInt, BigRational};

use cumulant_kit::momentcalc::{
    cumulants_to_moments, moments_to_cumulants, translate_cumulants, translate_moments,
    MomentSequence,
};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn join(values: &[BigRational]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn main() {
    // moments n! (an exponential law) invert to cumulants (n-1)!
    let m = MomentSequence::from_integers(&[1, 2, 6, 24, 120, 720]);
    let k = moments_to_cumulants(&m).unwrap();
    println!("moments m_n = n!          -> cumulants ({})", join(k.values()));

    // moments 1/(n+1) (uniform on [0,1])
    let m_uniform = MomentSequence::new((1..=6).map(|n| rat(1, n + 1)).collect()).unwrap();
    let k_uniform = moments_to_cumulants(&m_uniform).unwrap();
    println!("moments m_n = 1/(n+1)     -> cumulants ({})", join(k_uniform.values()));

    // the inverse transform round-trips exactly
    let back = cumulants_to_moments(&k).unwrap();
    println!("round trip exact: {}", back == m);

    // translation moves only the first cumulant
    let tau = rat(-3, 2);
    let shifted_k = moments_to_cumulants(&translate_moments(&m, &tau)).unwrap();
    let direct = translate_cumulants(&k, &tau);
    println!(
        "translate by {tau}: via moments ({})",
        join(shifted_k.values())
    );
    println!("            equals the direct shift: {}", shifted_k == direct);

    // cumulants of an independent sum add coordinatewise
    let mx = MomentSequence::from_integers(&[0, 1, 0, 3]); // standard normal
    let my = MomentSequence::from_integers(&[1, 2, 6, 24]); // exponential
    let convolved: Vec<BigRational> = (1..=4)
        .map(|n| {
            (0..=n)
                .map(|j| {
                    let binom = BigRational::from_integer(num::integer::binomial(
                        BigInt::from(n),
                        BigInt::from(j),
                    ));
                    binom * mx.moment(j) * my.moment(n - j)
                })
                .sum()
        })
        .collect();
    let k_sum = moments_to_cumulants(&MomentSequence::new(convolved).unwrap()).unwrap();
    let kx = moments_to_cumulants(&mx).unwrap();
    let ky = moments_to_cumulants(&my).unwrap();
    println!("\ncumulants of X + Y (independent):");
    for n in 1..=4 {
        println!(
            "  n={n}: {} = {} + {}",
            k_sum.cumulant(n),
            kx.cumulant(n),
            ky.cumulant(n)
        );
    }
}
