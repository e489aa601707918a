use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sphere norm parameter used when none is given.
pub const DEFAULT_NORM_PARAM: f64 = 2.0;

/// Weights `(r_1, ..., r_n)` of the anisotropic scaling
/// `x -> (eps^r_1 x_1, ..., eps^r_n x_n)` together with the exponent `l` of the
/// generalized unit sphere `sum |x_i|^(l / r_i) = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dilation {
    weights: Vec<f64>,
    #[serde(rename = "l")]
    norm_param: f64,
}

impl Dilation {
    pub fn new(weights: Vec<f64>, norm_param: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Argument("dilation needs at least one weight".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 1.0) {
            return Err(Error::Argument(format!(
                "dilation weights must be finite and >= 1, got {w}"
            )));
        }
        if !(norm_param.is_finite() && norm_param > 0.0) {
            return Err(Error::Argument(format!(
                "sphere norm parameter must be positive, got {norm_param}"
            )));
        }
        Ok(Self {
            weights,
            norm_param,
        })
    }

    /// Weights with the default `l = 2`.
    pub fn with_weights(weights: Vec<f64>) -> Result<Self> {
        Self::new(weights, DEFAULT_NORM_PARAM)
    }

    /// The trivial dilation `(1, ..., 1)` with `l = 2`, whose sphere is the
    /// Euclidean unit sphere.
    pub fn trivial(n: usize) -> Self {
        assert!(n >= 1, "dimension must be positive");
        Self {
            weights: vec![1.0; n],
            norm_param: DEFAULT_NORM_PARAM,
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn norm_param(&self) -> f64 {
        self.norm_param
    }

    pub fn is_trivial(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    /// Applies `eps^r o x`.
    pub fn scale(&self, eps: f64, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.weights)
            .map(|(xi, r)| eps.powf(*r) * xi)
            .collect()
    }

    /// `sum |x_i|^(l / r_i)`; equals 1 exactly on the generalized sphere.
    pub fn sphere_sum(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.weights)
            .map(|(xi, r)| xi.abs().powf(self.norm_param / r))
            .sum()
    }

    /// Same dilation divided by its smallest weight, so the smallest weight is 1.
    /// A function homogeneous of degree `k` is homogeneous of degree `k / r`
    /// for the returned dilation; the divisor `r` is returned alongside.
    pub fn normalized(&self) -> (Dilation, f64) {
        let r = self.weights.iter().cloned().fold(f64::INFINITY, f64::min);
        let weights = self.weights.iter().map(|w| w / r).collect();
        (
            Dilation {
                weights,
                norm_param: self.norm_param,
            },
            r,
        )
    }

    /// The same dilation with one extra unit weight appended (homogenizing variable).
    pub fn extended(&self) -> Dilation {
        let mut weights = self.weights.clone();
        weights.push(1.0);
        Dilation {
            weights,
            norm_param: self.norm_param,
        }
    }
}
