//! Strict multiplier for the derivative pair of two cubic sub-systems.
use std::path::Path;

use slemma::cli::Problem;
use slemma::homog::Sampling;
use slemma::lemma::{find_strict_multiplier, multiplier_margin, shs_condition};

fn main() -> slemma::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/problems/thm7.json");
    let problem = Problem::from_path(&path)?;
    let pair = problem.pair(None, None, None)?;
    let (f, g) = (pair.f.generalized(), pair.g.generalized());
    let d = &problem.dilation;
    let s = Sampling::default_for(2);
    println!("f = {f}\ng = {g}");
    let cond = shs_condition(&f, &g, d, &s)?;
    println!(
        "gap condition holds: {} (gap {:.4})",
        cond.holds, cond.symmetrized_gap
    );
    let cert = find_strict_multiplier(&f, &g, d, &s)?;
    println!(
        "xi = {:.6}, margin = {:.6}, admissible xi in ({:.4}, {:.4})",
        cert.xi, cert.margin, cert.xi_interval.0, cert.xi_interval.1
    );
    let (m2, _) = multiplier_margin(&f, &g, d, 2.0, &s)?;
    println!("margin at xi = 2: {m2:.9}");
    Ok(())
}
