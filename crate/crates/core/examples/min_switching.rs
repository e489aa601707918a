//! Min-derivative switching between two sub-systems that are unstable alone.
use std::path::Path;

use slemma::cli::Problem;
use slemma::switched::{simulate_min_switching, LfhdCandidate};

fn main() -> slemma::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/problems/thm7.json");
    let problem = Problem::from_path(&path)?;
    let sys = &problem.system(None)?.system;
    let cand = LfhdCandidate::new(problem.lyapunov(None)?.v.clone(), sys, &problem.dilation)?;
    let tr = simulate_min_switching(sys, &cand, &[1.0, 1.0], 1e-3, 10.0, 1e-2)?;
    for r in tr.rows.iter().step_by(1000) {
        println!(
            "t = {:5.2}  x = ({:+.5}, {:+.5})  sigma = {}  V = {:.6}",
            r.t,
            r.x[0],
            r.x[1],
            r.sigma + 1,
            r.v
        );
    }
    println!("{} switches", tr.switches);
    Ok(())
}
