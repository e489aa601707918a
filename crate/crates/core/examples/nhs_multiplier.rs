//! Non-strict multiplier for a non-homogeneous sextic pair via homogenization.
use std::path::Path;

use slemma::cli::Problem;
use slemma::homog::Sampling;
use slemma::lemma::find_nhs_multiplier;

fn main() -> slemma::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/problems/exam4.json");
    let problem = Problem::from_path(&path)?;
    let pair = problem.pair(None, None, None)?;
    let (f, g) = (pair.f.coeff_vec()?, pair.g.coeff_vec()?);
    let cert = find_nhs_multiplier(&f, &g, &Sampling::default_for(3))?;
    println!(
        "xi = {:.6}, admissible xi in [{:.4}, {:.4}]",
        cert.xi, cert.xi_interval.0, cert.xi_interval.1
    );
    for c in &cert.checks {
        println!("  {:28} {:5} {:e}", c.name, c.passed, c.value);
    }
    Ok(())
}
