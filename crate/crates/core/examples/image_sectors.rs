//! Joint images of four even pairs and one odd pair.
use std::path::Path;

use slemma::cli::Problem;
use slemma::homog::Sampling;
use slemma::image::sample_image;

fn main() -> slemma::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/problems/exam1.json");
    let problem = Problem::from_path(&path)?;
    let sampling = Sampling::default_for(2);
    for pair in &problem.pairs {
        let s = sample_image(
            &pair.f.generalized(),
            &pair.g.generalized(),
            &problem.dilation,
            &sampling,
        )?;
        println!(
            "{:6} {:?} {:?}: phi = {:.4} ({:.3} pi)",
            pair.name,
            s.parity,
            s.classification,
            s.phi,
            s.phi / std::f64::consts::PI
        );
    }
    Ok(())
}
