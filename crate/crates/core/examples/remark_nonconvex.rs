//! A cubic pair with a common nonzero zero: copositive, not strictly, no
//! multiplier, and an image whose midpoints leave it.
use std::path::Path;

use slemma::cli::Problem;
use slemma::homog::Sampling;
use slemma::image::{convexity_probe, sample_image};
use slemma::lemma::{find_strict_multiplier, is_copositive};

fn main() -> slemma::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/problems/exam3.json");
    let problem = Problem::from_path(&path)?;
    let pair = problem.pair(None, None, None)?;
    let (f, g) = (pair.f.generalized(), pair.g.generalized());
    let d = &problem.dilation;
    let s = Sampling::default_for(2);
    println!(
        "copositive: {}",
        is_copositive(&f, &g, d, false, &s)?.copositive
    );
    println!(
        "strictly:   {}",
        is_copositive(&f, &g, d, true, &s)?.copositive
    );
    match find_strict_multiplier(&f, &g, d, &s) {
        Ok(c) => println!("unexpected multiplier {}", c.xi),
        Err(e) => println!("{e}"),
    }
    let img = sample_image(&f, &g, d, &s)?;
    println!("classification {:?}", img.classification);
    for (a, b) in &img.boundaries {
        println!("arc from slope {:.4} to slope {:.4}", a.tan(), b.tan());
    }
    let v = convexity_probe(&f, &g, d, 2000, &s)?;
    if let Some(first) = v.first() {
        println!(
            "midpoint {:?} of {:?} and {:?} is outside the image",
            first.midpoint, first.u, first.v
        );
    }
    println!("{} violations found", v.len());
    Ok(())
}
