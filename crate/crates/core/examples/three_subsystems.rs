//! Three linear sub-systems: every direction is covered by some decreasing
//! sub-system, yet no convex combination is asymptotically stable.
use std::path::Path;

use slemma::cli::Problem;
use slemma::homog::Sampling;
use slemma::switched::{
    check_lfhd, linear_combination_eigencheck, scan_combinations, LfhdCandidate,
};

fn main() -> slemma::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/problems/thm8.json");
    let problem = Problem::from_path(&path)?;
    let def = problem.system(None)?;
    let lyap = problem.lyapunov(None)?;
    let cand = LfhdCandidate::new(lyap.v.clone(), &def.system, &problem.dilation)?;
    let s = Sampling::default_for(2);
    let rep = check_lfhd(&def.system, &cand, &s)?;
    println!("covered: {} (worst {:e})", rep.covered, rep.worst);
    let scan = scan_combinations(&def.system, &cand, 0.01, &s)?;
    println!(
        "feasible combinations: {} of {}",
        scan.feasible.len(),
        scan.grid_points
    );
    let (mats, lambdas) = (
        def.matrices.as_ref().unwrap(),
        def.lambdas.as_ref().unwrap(),
    );
    let p = lyap.matrix.clone().unwrap();
    let eig = linear_combination_eigencheck(mats, lambdas, &p)?;
    println!("largest eigenvalue at {:?}: {eig:e}", lambdas.lambdas());
    Ok(())
}
