//! Homogeneous functions under dilations.
//!
//! [`GeneralizedPolynomial`] holds every function the crate analyses: the pair
//! `(f, g)` of an S-Lemma question, Lyapunov candidates and their derivatives
//! along vector fields. [`Dilation`] fixes the weights that define homogeneity
//! and the generalized unit sphere on which all positivity checks run.

mod dilation;
mod poly;
mod sphere;

pub use dilation::{Dilation, DEFAULT_NORM_PARAM};
pub use poly::{
    real_root_power, Exponent, GeneralizedPolynomial, Parity, SignedMonomial, COEFF_EPS, DEGREE_TOL,
};
pub use sphere::{
    project_to_sphere, sphere_samples, theta_point, SampleScheme, SampleSet, Sampling, SpherePoint,
    DEFAULT_SCATTER_SAMPLES, DEFAULT_SEED, DEFAULT_THETA_SAMPLES, SPHERE_TOL,
};

use crate::error::{Error, Result};

/// Common homogeneity degree of a pair, or an error if they differ.
pub fn common_degree(
    f: &GeneralizedPolynomial,
    g: &GeneralizedPolynomial,
    d: &Dilation,
) -> Result<f64> {
    let kf = f.homogeneity_degree(d)?;
    let kg = g.homogeneity_degree(d)?;
    if (kf - kg).abs() > DEGREE_TOL * (1.0 + kf.abs()) {
        return Err(Error::Argument(format!(
            "functions have different degrees {kf} and {kg}"
        )));
    }
    Ok(kf)
}
