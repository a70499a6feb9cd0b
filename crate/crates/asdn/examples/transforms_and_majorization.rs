//! The phi/psi transforms behind the lower bounds: images, inverses, the
//! entropy-change identity, and the majorization condition that makes the
//! first bound valid.
//!
//! Run with: cargo run --example transforms_and_majorization

use asdn::bounds::{majorization_integral, verify_majorization_condition};
use asdn::catalog;
use asdn::channel::{SigmaFamily, SigmaProfile};
use asdn::quad::QuadratureConfig;
use asdn::transform::{entropy_transform_check, GKind, MonotoneTransform};

fn main() -> asdn::Result<()> {
    let cfg = QuadratureConfig::default();

    // phi(x) = int_c^x dt/sigma(t) for sigma = sqrt(1+x): image length 2 sqrt(6) - 2
    let profile =
        SigmaProfile::new(SigmaFamily::SqrtAffine { c0_sq: 1.0, c1_sq: 1.0 }, (0.0, 5.0), None)?;
    let phi = MonotoneTransform::phi(profile.clone(), 2.5)?;
    println!("phi image: {:?}", phi.image(&cfg)?);
    println!("phi image length: {:.6}", phi.image_length(&cfg)?);
    let v = phi.forward(4.0, &cfg)?;
    println!("phi(4) = {v:.6}, phi^-1(phi(4)) = {:.6}", phi.inverse(v, &cfg)?);

    // psi adds a log-sigma term; for sigma(x) = x the image is unbounded
    let linear = SigmaProfile::new(SigmaFamily::PowerLaw { alpha: 1.0 }, (0.0, 1.0), None)?;
    let psi = MonotoneTransform::psi(linear, 1.0, 0.5)?;
    println!("psi image for sigma(x) = x: {:?} (infinite length)", psi.image(&cfg)?);

    // entropy-change identity h(X) + E[log g(X)] = h(T(X)), both sides
    let pdf = |x: f64| if (0.0..=5.0).contains(&x) { 0.2 } else { 0.0 };
    let (lhs, rhs) = entropy_transform_check(&profile, pdf, (0.0, 5.0), 2.5, GKind::InvSigma, &cfg)?;
    println!("entropy identity: lhs = {lhs:.6}, rhs = {rhs:.6}, |diff| = {:.2e}", (lhs - rhs).abs());

    // the majorization condition int f_{Y|X}(y|x) dx <= 1 over a y-grid
    let spec = catalog::fig3_channel(5.0, 1.0);
    println!("\nmajorization integral at a few outputs:");
    for y in [-2.0, 0.0, 2.5, 5.0, 8.0] {
        println!("    y = {y:+.1}: {:.6}", majorization_integral(&spec, y, &cfg)?);
    }
    let hyp = verify_majorization_condition(&spec, 512, &cfg);
    println!("grid verification: [{:?}] {}", hyp.status, hyp.detail.unwrap_or_default());
    Ok(())
}
