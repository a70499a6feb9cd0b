//! Compute both lower bounds and the symmetrized-KL upper bound for one
//! channel and print the full reports, including the verified hypotheses.
//!
//! Run with: cargo run --example capacity_bounds

use asdn::bounds::{lower_bound_maj_constrained, lower_bound_psi, upper_bound_closed_form};
use asdn::catalog;
use asdn::quad::QuadratureConfig;

fn main() -> asdn::Result<()> {
    let cfg = QuadratureConfig::default();
    let spec = catalog::fig2_channel(1.0); // sigma = sqrt(1 + x) on [0,5], E[X] <= 2.5

    let maj = lower_bound_maj_constrained(&spec, &cfg)?;
    let psi = lower_bound_psi(&spec, None, &cfg)?;
    let sym = upper_bound_closed_form(&spec, &cfg)?;

    for report in [&maj, &psi, &sym] {
        println!("{:?}: {:.6} nats (valid bound: {})", report.kind, report.value(), report.is_valid_bound());
        for (name, value) in &report.params {
            println!("    {name} = {value:.6}");
        }
        for h in &report.hypotheses {
            match &h.detail {
                Some(d) => println!("    [{:?}] {}: {}", h.status, h.name, d),
                None => println!("    [{:?}] {}", h.status, h.name),
            }
        }
    }

    println!(
        "\nsandwich: {:.4} <= capacity <= {:.4}",
        maj.value().max(psi.value()),
        sym.value()
    );
    Ok(())
}
