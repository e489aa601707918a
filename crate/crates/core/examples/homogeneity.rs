//! Degrees, parity and the generalized sphere for fractional-power functions.
use slemma::homog::{project_to_sphere, Dilation, GeneralizedPolynomial};
use slemma::switched::derivative_along;

fn main() -> slemma::Result<()> {
    let d = Dilation::new(vec![3.0, 1.0], 2.0)?;
    let x1 = |num, den| GeneralizedPolynomial::variable_power(2, 0, num, den);
    let x2 = GeneralizedPolynomial::variable(2, 1);
    // V = 3 x1^(4/3) + x2^2 is not homogeneous for (3, 1) ...
    let v = &x1(4, 3)?.scale(3.0) + &x2.powi(2);
    println!("V = {v}");
    match v.homogeneity_degree(&d) {
        Ok(k) => println!("V has degree {k}"),
        Err(e) => println!("V: {e}"),
    }
    // ... but its derivative along x' = (-4 x1, 4 x1^(2/3) x2 + 4 x2^3) is.
    let field = vec![
        x1(1, 1)?.scale(-4.0),
        &(&x1(2, 3)? * &x2).scale(4.0) + &x2.powi(3).scale(4.0),
    ];
    let dv = derivative_along(&v, &field)?;
    let k = dv.homogeneity_degree(&d)?;
    println!("V' = {dv}");
    println!("degree {k}, parity {:?}", dv.parity());
    println!(
        "residual of V'(e^r x) = e^k V'(x) over 100 trials: {:e}",
        dv.homogeneity_residual(&d, k, 100, 7)
    );
    let doubled = Dilation::new(vec![6.0, 2.0], 2.0)?;
    let k2 = dv.homogeneity_degree(&doubled)?;
    let (unit, r) = doubled.normalized();
    println!(
        "weights (6, 2): degree {k2}; rescaled to {:?}: degree {}",
        unit.weights(),
        k2 / r
    );
    let x = [0.3, -1.7];
    let p = project_to_sphere(&x, &d)?;
    println!(
        "projection of {x:?}: {:?} (on sphere: {})",
        p.coords(),
        p.on_sphere(&d)
    );
    let scaled = d.scale(2.5, &x);
    println!(
        "projection of the dilated point: {:?}",
        project_to_sphere(&scaled, &d)?.coords()
    );
    Ok(())
}
