use mdb_core::env::{Environment, MatrixEnvironment, UtilityEnvironment, SYNTHETIC_DATASETS};
use mdb_core::policy::{MdbConfig, PolicyConfig, RandomConfig, RmedConfig, RucbConfig};
use mdb_core::sim::{run_replicate, Cadence, RegretModel};
use mdb_core::{binary_kl, closed_form_win_prob, normal_cdf, ArmId, PreferenceMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

#[test]
#[allow(clippy::excessive_precision)]
fn normal_cdf_high_precision_points() {
    // 40-digit mpmath values.
    let reference = [
        (-8.0, 6.2209605742717841235e-16),
        (-5.5, 1.8989562465887719384e-8),
        (-3.66, 0.00012610762413848673876),
        (-1.0, 0.15865525393145705141),
        (-0.25, 0.40129367431707627576),
        (0.0, 0.5),
        (0.5, 0.69146246127401310364),
        (1.96, 0.97500210485177956586),
        (4.0, 0.99996832875816688008),
        (7.5, 0.99999999999996809108),
    ];
    for (x, want) in reference {
        // Rounding x/sqrt(2) is amplified by about x^2 in the tails.
        let got = normal_cdf(x);
        assert!(
            (got - want).abs() <= 4.0 * (1.0 + x * x) * f64::EPSILON * want,
            "x = {x}: {got} vs {want}"
        );
    }
}

#[test]
fn normal_cdf_agrees_with_statrs() {
    // statrs itself is only accurate to about 1e-10 relative in the tails.
    let n = Normal::standard();
    for i in -800..=800 {
        let x = i as f64 / 100.0;
        let (a, b) = (normal_cdf(x), n.cdf(x));
        assert!((a - b).abs() <= 1e-9 * b, "x = {x}: {a} vs {b}");
    }
}

#[test]
fn win_probability_is_a_shifted_normal() {
    let scaled = Normal::new(0.0, std::f64::consts::SQRT_2).unwrap();
    for &(ui, uj) in &[(0.8, 0.2), (0.2, 0.8), (0.5, 0.5), (0.7, 0.45), (3.0, -3.0)] {
        let p = closed_form_win_prob(ui, uj);
        assert!((p - scaled.cdf(ui - uj)).abs() < 1e-12);
        assert!((p + closed_form_win_prob(uj, ui) - 1.0).abs() < 1e-15);
    }
}

#[test]
fn kl_against_half() {
    assert_eq!(binary_kl(0.5, 0.5), 0.0);
    assert!((binary_kl(0.0, 0.5) - std::f64::consts::LN_2).abs() < 1e-15);
    assert!((binary_kl(1.0, 0.5) - std::f64::consts::LN_2).abs() < 1e-15);
    assert!((10.0 * binary_kl(0.1, 0.5) - 3.680642071684).abs() < 1e-9);
}

#[test]
fn synthetic_datasets_have_a_condorcet_winner() {
    for name in SYNTHETIC_DATASETS {
        let env = UtilityEnvironment::from_name(name).unwrap();
        assert_eq!(env.preference_matrix().condorcet_winner(), Some(ArmId(0)), "{name}");
    }
}

fn replay(policy: &PolicyConfig, seed: u64) -> (Vec<Vec<ArmId>>, f64) {
    let p = PreferenceMatrix::from_utilities(&[0.8, 0.6, 0.5, 0.3]);
    let env = MatrixEnvironment::new(p.clone());
    let regret = RegretModel::condorcet(p).unwrap();
    let mut pol = policy.build(env.num_arms()).unwrap();
    let checkpoints = Cadence::default().checkpoints(3000).unwrap();
    let mut sets = Vec::new();
    let out = run_replicate(
        pol.as_mut(),
        &env,
        &regret,
        3000,
        &checkpoints,
        &mut ChaCha8Rng::seed_from_u64(seed),
        &mut ChaCha8Rng::seed_from_u64(seed + 1),
        |_, s| sets.push(s.to_vec()),
    );
    assert!(out.is_valid());
    assert_eq!(out.trace.points().len(), checkpoints.len());
    (sets, out.trace.cumulative())
}

#[test]
fn replaying_a_seed_reproduces_every_selection() {
    for policy in [
        PolicyConfig::Mdb(MdbConfig::default()),
        PolicyConfig::Rucb(RucbConfig::default()),
        PolicyConfig::Rmed1(RmedConfig::default()),
        PolicyConfig::Random(RandomConfig::default()),
    ] {
        let (a, ra) = replay(&policy, 5);
        let (b, rb) = replay(&policy, 5);
        assert_eq!(a, b, "{}", policy.name());
        assert_eq!(ra, rb);
        assert_eq!(a[0], (0..4).map(ArmId).collect::<Vec<_>>());
        assert!(a.iter().all(|s| !s.is_empty() && s.windows(2).all(|w| w[0] < w[1])));
    }
}
