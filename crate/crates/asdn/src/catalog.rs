//! Ready-made channels: the two figure families and a small zoo spanning
//! finite-capacity and infinite-capacity regimes. Used by the examples, the
//! CLI, and the acceptance suite.

use crate::channel::{
    uniform_noise, ChannelSpec, Constraint, NoiseModel, SigmaFamily, SigmaProfile,
};

fn profile(family: SigmaFamily, domain: (f64, f64)) -> SigmaProfile {
    SigmaProfile::new(family, domain, None).expect("catalog profile")
}

fn gauss(family: SigmaFamily, support: (f64, f64), constraints: Vec<Constraint>) -> ChannelSpec {
    ChannelSpec::new(profile(family, support), NoiseModel::StandardGaussian, support, constraints)
        .expect("catalog channel")
}

/// sigma(x) = sqrt(c0^2 + x) on [0, 5] with peak 5 and mean 2.5.
pub fn fig2_channel(c0_sq: f64) -> ChannelSpec {
    gauss(
        SigmaFamily::SqrtAffine { c0_sq, c1_sq: 1.0 },
        (0.0, 5.0),
        vec![Constraint::Mean(2.5)],
    )
}

/// sigma(x) = sqrt(c0^2 + x) on [0, a], support constraint only.
pub fn fig3_channel(a: f64, c0_sq: f64) -> ChannelSpec {
    gauss(SigmaFamily::SqrtAffine { c0_sq, c1_sq: 1.0 }, (0.0, a), vec![])
}

/// Constant-sigma Gaussian channel.
pub fn awgn(sigma0: f64, support: (f64, f64), constraints: Vec<Constraint>) -> ChannelSpec {
    gauss(SigmaFamily::Constant { c: sigma0 }, support, constraints)
}

/// A dozen channels across the finite/infinite capacity divide.
pub fn zoo() -> Vec<(&'static str, ChannelSpec)> {
    let tab_sigma: Vec<f64> = (0..=40).map(|i| i as f64 * 0.05).collect();
    let tab_vals: Vec<f64> = tab_sigma.iter().map(|x| 1.0 + 0.5 * x).collect();

    vec![
        ("fig3_a5", fig3_channel(5.0, 1.0)),
        ("fig2_c0sq_1", fig2_channel(1.0)),
        ("awgn_unit_box", awgn(1.0, (0.0, 1.0), vec![])),
        (
            "awgn_power_100",
            awgn(1.0, (f64::NEG_INFINITY, f64::INFINITY), vec![Constraint::Power(100.0)]),
        ),
        ("linear_sigma", gauss(SigmaFamily::PowerLaw { alpha: 1.0 }, (0.0, 1.0), vec![])),
        ("inverse_sigma", gauss(SigmaFamily::PowerLaw { alpha: -1.0 }, (0.0, 1.0), vec![])),
        ("quadratic_sigma", gauss(SigmaFamily::PowerLaw { alpha: 2.0 }, (0.0, 1.0), vec![])),
        ("molecular_sqrt", gauss(SigmaFamily::SqrtAffine { c0_sq: 0.0, c1_sq: 1.0 }, (0.0, 5.0), vec![])),
        ("fading_no_floor", gauss(SigmaFamily::FadingAffine { c0: 0.0, c1: 1.0 }, (0.0, 1.0), vec![])),
        ("fading_unit_floor", gauss(SigmaFamily::FadingAffine { c0: 1.0, c1: 1.0 }, (0.0, 2.0), vec![])),
        (
            "truncated_noise_box",
            ChannelSpec::new(
                profile(SigmaFamily::Constant { c: 1.0 }, (0.0, 2.0)),
                NoiseModel::truncated_gaussian(-3.0, 3.0).expect("catalog noise"),
                (0.0, 2.0),
                vec![],
            )
            .expect("catalog channel"),
        ),
        (
            "uniform_noise_box",
            ChannelSpec::new(
                profile(SigmaFamily::Constant { c: 1.0 }, (0.0, 2.0)),
                uniform_noise(-1.0, 1.0),
                (0.0, 2.0),
                vec![],
            )
            .expect("catalog channel"),
        ),
        (
            "tabulated_ramp",
            gauss(SigmaFamily::Tabulated { x: tab_sigma, sigma: tab_vals }, (0.0, 2.0), vec![]),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zoo_is_large_enough_and_constructs() {
        let z = zoo();
        assert!(z.len() >= 10);
        for (name, spec) in z {
            assert!(!name.is_empty());
            let (l, u) = spec.support();
            assert!(l < u);
        }
    }

    #[test]
    fn fig_channels_match_families() {
        let f2 = fig2_channel(1.0);
        assert_eq!(f2.constraints().len(), 1);
        let f3 = fig3_channel(5.0, 1.0);
        assert!(f3.constraints().is_empty());
        assert_eq!(f3.support(), (0.0, 5.0));
    }
}
