//! Cross-module invariants: exact transform laws under random rational
//! inputs, the partition-polynomial identity, grid-convergence and
//! determinism checks, and a Monte Carlo check of the multivariate
//! cumulative identity.

mod common;

use common::{int, sample_builtin};
use num::{BigInt, BigRational, One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cumulant_kit::dists::{Builtin, DistributionModel};
use cumulant_kit::hoeffding::{multivariate_iterated, JointDistributionModel, TensorGridSpec};
use cumulant_kit::momentcalc::{
    cumulants_to_moments, moments_to_cumulants, translate_cumulants, translate_moments,
    MomentSequence,
};
use cumulant_kit::partitions::partition_iter;
use cumulant_kit::volterra::{
    cumulants_via_theorem1, cumulants_via_truncated, CumulativeGrid, GridSpec,
};

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=12)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn rational_seq(max_len: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(rational(), 1..=max_len)
}

fn binomial(n: usize, k: usize) -> BigRational {
    BigRational::from_integer(num::integer::binomial(BigInt::from(n), BigInt::from(k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_round_trips(values in rational_seq(6)) {
        let m = MomentSequence::new(values).unwrap();
        let k = moments_to_cumulants(&m).unwrap();
        let back = cumulants_to_moments(&k).unwrap();
        prop_assert_eq!(back.values(), m.values());
    }

    #[test]
    fn translation_is_a_semi_invariance(values in rational_seq(5), tau in rational()) {
        let m = MomentSequence::new(values).unwrap();
        let via_moments = moments_to_cumulants(&translate_moments(&m, &tau)).unwrap();
        let via_cumulants = translate_cumulants(&moments_to_cumulants(&m).unwrap(), &tau);
        prop_assert_eq!(via_moments.values(), via_cumulants.values());
        // only the first entry moves, by exactly tau
        let original = moments_to_cumulants(&m).unwrap();
        prop_assert_eq!(
            via_moments.cumulant(1) - original.cumulant(1),
            tau
        );
        for n in 2..=m.order() {
            prop_assert_eq!(via_moments.cumulant(n), original.cumulant(n));
        }
    }

    #[test]
    fn cumulants_add_for_independent_sums(
        xs in rational_seq(6),
        ys in rational_seq(6),
    ) {
        let order = xs.len().min(ys.len());
        let mx = MomentSequence::new(xs[..order].to_vec()).unwrap();
        let my = MomentSequence::new(ys[..order].to_vec()).unwrap();
        // binomial convolution of the moment sequences
        let convolved: Vec<BigRational> = (1..=order)
            .map(|n| {
                (0..=n)
                    .map(|k| binomial(n, k) * mx.moment(k) * my.moment(n - k))
                    .fold(BigRational::zero(), |acc, term| acc + term)
            })
            .collect();
        let ms = MomentSequence::new(convolved).unwrap();
        let ks = moments_to_cumulants(&ms).unwrap();
        let kx = moments_to_cumulants(&mx).unwrap();
        let ky = moments_to_cumulants(&my).unwrap();
        for n in 1..=order {
            prop_assert_eq!(ks.cumulant(n), kx.cumulant(n) + ky.cumulant(n));
        }
    }

    #[test]
    fn mobius_polynomial_matches_constant_moment_cumulants(x in rational()) {
        // sum over partitions of mu(pi) x^{|pi|} equals kappa_n of the
        // sequence with every moment equal to x
        for n in 1..=6usize {
            let mut lattice_sum = BigRational::zero();
            for pi in partition_iter(n).unwrap() {
                let mut pw = BigRational::one();
                for _ in 0..pi.block_count() {
                    pw *= &x;
                }
                lattice_sum += pw * int(pi.mobius_to_top());
            }
            let m = MomentSequence::new(vec![x.clone(); n]).unwrap();
            let k = moments_to_cumulants(&m).unwrap();
            prop_assert_eq!(lattice_sum, k.cumulant(n));
        }
    }

    #[test]
    fn empirical_cdf_is_monotone_and_normalized(
        mut xs in prop::collection::vec(-50.0f64..50.0, 1..40),
    ) {
        let d = DistributionModel::empirical_from_samples(&xs).unwrap();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        prop_assert_eq!(d.cdf(xs[0] - 1.0), 0.0);
        prop_assert_eq!(d.cdf(xs[xs.len() - 1]), 1.0);
        let mut prev = 0.0;
        for i in 0..=100 {
            let t = xs[0] - 1.0 + (xs[xs.len() - 1] - xs[0] + 2.0) * i as f64 / 100.0;
            let f = d.cdf(t);
            prop_assert!(f >= prev);
            prev = f;
        }
    }
}

#[test]
fn cumulative_levels_are_nondecreasing() {
    for which in [Builtin::Uniform01, Builtin::Exponential1, Builtin::StdNormal] {
        let d = DistributionModel::builtin(which).unwrap();
        let grid = CumulativeGrid::build(&d, &GridSpec::default(), 4).unwrap();
        for level in 0..=4 {
            let values = grid.level(level).values();
            for w in values.windows(2) {
                assert!(w[1] >= w[0] - 1e-15, "level {level} decreases");
            }
        }
    }
}

#[test]
fn halving_the_step_moves_cumulants_within_four_tolerances() {
    let coarse = GridSpec::new(1e-10, 10001).unwrap();
    let fine = GridSpec::new(1e-10, 20001).unwrap();
    for which in [Builtin::Uniform01, Builtin::Exponential1] {
        let d = DistributionModel::builtin(which).unwrap();
        let routes: [(&str, Box<dyn Fn(&GridSpec) -> Vec<f64>>); 2] = [
            (
                "theorem1",
                Box::new(|s: &GridSpec| cumulants_via_theorem1(&d, 4, s).unwrap()),
            ),
            (
                "truncated",
                Box::new(|s: &GridSpec| cumulants_via_truncated(&d, 4, None, s).unwrap()),
            ),
        ];
        for (name, route) in &routes {
            let a = route(&coarse);
            let b = route(&fine);
            for n in 1..=4usize {
                let tol = 4.0 * (1e-3 * b[n - 1].abs()).max(1e-5);
                assert!(
                    (a[n - 1] - b[n - 1]).abs() <= tol,
                    "{name} n={n}: {} vs {}",
                    a[n - 1],
                    b[n - 1]
                );
            }
        }
    }
}

#[test]
fn theorem1_output_is_deterministic_under_parallelism() {
    let d = DistributionModel::builtin(Builtin::StdNormal).unwrap();
    let a = cumulants_via_theorem1(&d, 5, &GridSpec::default()).unwrap();
    let b = cumulants_via_theorem1(&d, 5, &GridSpec::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn default_tau_is_the_grid_end() {
    let d = DistributionModel::builtin(Builtin::Exponential1).unwrap();
    let spec = GridSpec::default();
    let grid = CumulativeGrid::build(&d, &spec, 4).unwrap();
    let implicit = cumulants_via_truncated(&d, 4, None, &spec).unwrap();
    let explicit = cumulants_via_truncated(&d, 4, Some(grid.base().hi()), &spec).unwrap();
    assert_eq!(implicit, explicit);
}

#[test]
fn multivariate_ladder_matches_monte_carlo() {
    // F^[1,1](b1, b2) = E (b1 - X)+ (b2 - Y)+ for a comonotone uniform pair
    let d = DistributionModel::builtin(Builtin::Uniform01).unwrap();
    let joint = JointDistributionModel::comonotone(d, 2).unwrap();
    let spec = TensorGridSpec::default();
    let integral = multivariate_iterated(&joint, &[1, 1], &spec).unwrap();

    // the tensor box ends at the per-axis upper bounds; recover them the
    // same way the grid does
    let marginal = joint.marginal_model(1).unwrap();
    let (a, b) = marginal.truncate_support(1e-8).unwrap();
    let pad = 2.0 * (b - a) / 200.0;
    let corner = b + pad;

    const DRAWS: usize = 200_000;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..DRAWS {
        let x = sample_builtin(&mut rng, "uniform01");
        let v = (corner - x).max(0.0) * (corner - x).max(0.0);
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / DRAWS as f64;
    let se = ((sum_sq / DRAWS as f64 - mean * mean) / DRAWS as f64).sqrt();
    assert!(
        (integral - mean).abs() <= 4.0 * se,
        "{integral} vs {mean} (se {se:.2e})"
    );
}
