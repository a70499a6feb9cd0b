//! Build a signal-dependent noise channel, evaluate its conditional law,
//! and simulate it.
//!
//! Run with: cargo run --example channel_basics

use asdn::channel::{ChannelSpec, InputDist};
use asdn::quad::QuadratureConfig;
use rand::SeedableRng;

fn main() -> asdn::Result<()> {
    // sigma(x) = sqrt(1 + x) on [0, 5] with standard Gaussian noise,
    // straight from the JSON wire format
    let spec = ChannelSpec::from_json(
        r#"{
            "sigma": {"family": "SqrtAffine", "c0_sq": 1.0, "c1_sq": 1.0},
            "noise": {"family": "StandardGaussian"},
            "support": [0.0, 5.0],
            "constraints": [{"kind": "Mean", "value": 2.5}]
        }"#,
    )?;
    println!("channel fingerprint: {}", spec.fingerprint());

    let cfg = QuadratureConfig::default();

    // conditional density f_{Y|X}(y|x) = (1/sigma(x)) f_Z((y-x)/sigma(x))
    for (x, y) in [(0.0, 0.0), (1.0, 1.0), (4.0, 6.5)] {
        println!("f(y={y} | x={x}) = {:.6}", spec.conditional_density(x, y)?);
    }

    // h(Y|X) = E[log sigma(X)] + h(Z) under a uniform input
    let input = InputDist::uniform(0.0, 5.0);
    println!("h(Y|X) under U(0,5): {:.6} nats", spec.conditional_entropy(&input, &cfg)?);

    // forward simulation; deterministic per seed
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let samples: Vec<f64> = (0..8).map(|_| spec.sample(2.0, &mut rng).unwrap()).collect();
    println!("eight channel uses at x = 2: {samples:.3?}");

    // round-trip through JSON
    let json = spec.to_json()?;
    let again = ChannelSpec::from_json(&json)?;
    assert_eq!(spec.fingerprint(), again.fingerprint());
    println!("JSON round-trip preserves the spec");
    Ok(())
}
