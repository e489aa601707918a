//! Coefficient vectors over Kronecker powers and homogenization.
use slemma::stp::{homogenize_coeffs, multi_index, stp, CoeffVecPolynomial};

fn main() -> slemma::Result<()> {
    let x = [2.0, -1.0];
    println!("x (x) x = {:?}", stp(&x, &x));
    println!("index 7 of x^6 has digits {:?}", multi_index(2, 6, 7));
    // g = -5 x1^6 - x1^3 x2^3 + x2^6 - x1^4 x2^2 - 1
    let g = CoeffVecPolynomial::from_entries(
        2,
        6,
        &[
            (6, 0, -5.0),
            (6, 7, -1.0),
            (6, 63, 1.0),
            (6, 3, -1.0),
            (0, 0, -1.0),
        ],
    )?;
    println!("g = {}", g.to_generalized());
    println!("top form: {}", g.top_form());
    let h = homogenize_coeffs(&g)?;
    println!("homogenized: {h}");
    let at_t1 = h.eval(&[x[0], x[1], 1.0]);
    println!("g(x) = {}, homogenized at t = 1: {at_t1}", g.evaluate(&x)?);
    Ok(())
}
