//! Stable convex combinations of two sub-systems: synthesis from a multiplier
//! and a grid scan of all feasible weights.
use std::path::Path;

use slemma::cli::Problem;
use slemma::homog::Sampling;
use slemma::switched::{scan_combinations, synthesize_combination_n2, LfhdCandidate};

fn main() -> slemma::Result<()> {
    for file in ["thm7.json", "thm16.json"] {
        let path = Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("examples/problems")
            .join(file);
        let problem = Problem::from_path(&path)?;
        let sys = &problem.system(None)?.system;
        let v = problem.lyapunov(None)?.v.clone();
        let cand = LfhdCandidate::new(v, sys, &problem.dilation)?;
        let s = Sampling::default_for(2);
        let syn = synthesize_combination_n2(sys, &cand, &s)?;
        let scan = scan_combinations(sys, &cand, 0.005, &s)?;
        println!(
            "{file}: synthesized lambda = {:?}",
            syn.combination.lambdas()
        );
        if let Some((lo, hi)) = scan.interval {
            println!("{file}: feasible lambda_1 in [{lo}, {hi}]");
        }
    }
    Ok(())
}
