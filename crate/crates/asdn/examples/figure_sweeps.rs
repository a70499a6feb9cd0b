//! Reproduce the two figure datasets as CSV: capacity vs the noise floor
//! c0^2 with the symmetrized-KL upper bound, and capacity vs the peak A with
//! both lower bounds.
//!
//! Run with: cargo run --release --example figure_sweeps
//! (the CLI equivalent: `asdn fig2 --out fig2.csv` / `asdn fig3 --out fig3.csv`)

use asdn::figures::{fig2_csv, fig3_csv, run_fig2, run_fig3};
use asdn::quad::QuadratureConfig;

fn main() -> asdn::Result<()> {
    let cfg = QuadratureConfig::default();

    // modest grids keep this example quick; the acceptance suite runs the
    // full 128 x 1024 version
    let (n, m, tol) = (64, 512, 1e-7);

    let rows = run_fig2(&[0.5, 1.0, 2.0, 5.0, 10.0], n, m, tol, &cfg)?;
    println!("capacity and upper bound vs c0^2 (A = 5, mean 2.5):");
    print!("{}", fig2_csv(&rows));

    let rows = run_fig3(&[1.0, 2.0, 5.0, 10.0, 20.0, 50.0], 1.0, n, m, tol, &cfg)?;
    println!("\ncapacity and lower bounds vs A (sigma = sqrt(1 + x)):");
    print!("{}", fig3_csv(&rows));
    Ok(())
}
