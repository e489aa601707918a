//! Points on the generalized unit sphere and deterministic sample sets.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::{Dilation, GeneralizedPolynomial};
use crate::error::{Error, Result};

/// Seed used by every analysis unless the caller overrides it.
pub const DEFAULT_SEED: u64 = 20_130_415;
/// Default θ-grid size for planar problems.
pub const DEFAULT_THETA_SAMPLES: usize = 4096;
/// Default low-discrepancy sample count for `n >= 3`.
pub const DEFAULT_SCATTER_SAMPLES: usize = 65536;
/// Allowed deviation of `sum |x_i|^(l/r_i)` from 1.
pub const SPHERE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// Checks the sphere equation for `d`.
    pub fn on_sphere(&self, d: &Dilation) -> bool {
        (d.sphere_sum(&self.coords) - 1.0).abs() <= SPHERE_TOL
    }
}

/// Moves `x` along its dilation ray onto the generalized unit sphere:
/// returns `eps^r o x` with `eps = (sum |x_i|^(l/r_i))^(-1/l)`.
pub fn project_to_sphere(x: &[f64], d: &Dilation) -> Result<SpherePoint> {
    if x.len() != d.dim() {
        return Err(Error::Dimension {
            expected: d.dim(),
            got: x.len(),
        });
    }
    let s = d.sphere_sum(x);
    if s == 0.0 || !s.is_finite() {
        return Err(Error::Argument(
            "cannot project the origin (or a non-finite point) onto the sphere".into(),
        ));
    }
    let eps = s.powf(-1.0 / d.norm_param());
    let mut coords = d.scale(eps, x);
    // one Newton-free polish step: the residual of a single powf chain can
    // reach a few ulps times n, rescale once more to land within SPHERE_TOL
    let s2 = d.sphere_sum(&coords);
    if (s2 - 1.0).abs() > SPHERE_TOL / 4.0 {
        coords = d.scale(s2.powf(-1.0 / d.norm_param()), &coords);
    }
    Ok(SpherePoint { coords })
}

/// The planar θ-parameterization `(|cos θ|^r1 sgn cos θ, |sin θ|^r2 sgn sin θ)`.
/// It lies on the generalized sphere for `l = 2`.
pub fn theta_point(d: &Dilation, theta: f64) -> [f64; 2] {
    let w = d.weights();
    let (s, c) = theta.sin_cos();
    [
        c.abs().powf(w[0]).copysign(c),
        s.abs().powf(w[1]).copysign(s),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleScheme {
    /// Both points `{1, -1}` of the zero-dimensional sphere (`n = 1`).
    Pair,
    /// Uniform θ-grid along the planar parameterization (`n = 2`).
    ThetaGrid,
    /// Seeded Kronecker sequence pushed through the normal quantile (`n >= 3`).
    LowDiscrepancy,
}

impl SampleScheme {
    pub fn for_dim(n: usize) -> Self {
        match n {
            1 => SampleScheme::Pair,
            2 => SampleScheme::ThetaGrid,
            _ => SampleScheme::LowDiscrepancy,
        }
    }
}

/// Sample-set configuration. `phase` shifts the θ-grid by a fraction of a step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sampling {
    pub count: usize,
    pub seed: u64,
    #[serde(default)]
    pub phase: f64,
}

impl Sampling {
    pub fn new(count: usize, seed: u64) -> Self {
        Self {
            count,
            seed,
            phase: 0.0,
        }
    }

    pub fn default_for(n: usize) -> Self {
        let count = if n <= 2 {
            DEFAULT_THETA_SAMPLES
        } else {
            DEFAULT_SCATTER_SAMPLES
        };
        Self::new(count, DEFAULT_SEED)
    }

    /// An independent, twice as dense configuration for verification passes.
    pub fn fresh(&self) -> Self {
        Self {
            count: self.count * 2,
            seed: self.seed ^ 0x9E37_79B9_7F4A_7C15,
            phase: 0.5,
        }
    }
}

/// A generated set of sphere points plus how it was produced.
#[derive(Debug, Clone)]
pub struct SampleSet {
    dilation: Dilation,
    scheme: SampleScheme,
    sampling: Sampling,
    points: Vec<SpherePoint>,
    thetas: Option<Vec<f64>>,
}

impl SampleSet {
    pub fn generate(d: &Dilation, sampling: &Sampling) -> Result<Self> {
        if sampling.count == 0 {
            return Err(Error::Argument("sample count must be at least 1".into()));
        }
        let n = d.dim();
        let scheme = SampleScheme::for_dim(n);
        let (points, thetas) = match scheme {
            SampleScheme::Pair => {
                let pts = [1.0, -1.0]
                    .iter()
                    .map(|&s| project_to_sphere(&[s], d))
                    .collect::<Result<Vec<_>>>()?;
                (pts, None)
            }
            SampleScheme::ThetaGrid => {
                let m = sampling.count;
                let thetas: Vec<f64> = (0..m)
                    .map(|j| 2.0 * PI * (j as f64 + sampling.phase) / m as f64)
                    .collect();
                let exact = d.norm_param() == 2.0;
                let pts = thetas
                    .iter()
                    .map(|&t| {
                        let p = theta_point(d, t);
                        if exact {
                            Ok(SpherePoint { coords: p.to_vec() })
                        } else {
                            project_to_sphere(&p, d)
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                (pts, Some(thetas))
            }
            SampleScheme::LowDiscrepancy => (low_discrepancy(d, sampling)?, None),
        };
        Ok(Self {
            dilation: d.clone(),
            scheme,
            sampling: sampling.clone(),
            points,
            thetas,
        })
    }

    pub fn dilation(&self) -> &Dilation {
        &self.dilation
    }

    pub fn scheme(&self) -> SampleScheme {
        self.scheme
    }

    pub fn sampling(&self) -> &Sampling {
        &self.sampling
    }

    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    pub fn thetas(&self) -> Option<&[f64]> {
        self.thetas.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Consecutive points trace a closed curve through every dilation ray.
    pub fn is_closed_curve(&self) -> bool {
        self.scheme == SampleScheme::ThetaGrid
    }

    /// Values of `p` at every sample, in sample order.
    pub fn eval(&self, p: &GeneralizedPolynomial) -> Result<Vec<f64>> {
        if p.dim() != self.dilation.dim() {
            return Err(Error::Dimension {
                expected: self.dilation.dim(),
                got: p.dim(),
            });
        }
        Ok(self.points.par_iter().map(|x| p.eval(&x.coords)).collect())
    }

    /// Expected spacing between neighbouring samples, in radians.
    pub fn resolution(&self) -> f64 {
        let m = self.points.len() as f64;
        match self.scheme {
            SampleScheme::Pair => PI,
            SampleScheme::ThetaGrid => 2.0 * PI / m,
            SampleScheme::LowDiscrepancy => {
                let n = self.dilation.dim() as f64;
                2.0 * PI / m.powf(1.0 / (n - 1.0))
            }
        }
    }
}

/// `sphere_samples` in its plain form: the points only.
pub fn sphere_samples(d: &Dilation, count: usize, seed: u64) -> Result<Vec<SpherePoint>> {
    Ok(SampleSet::generate(d, &Sampling::new(count, seed))?.points)
}

fn low_discrepancy(d: &Dilation, sampling: &Sampling) -> Result<Vec<SpherePoint>> {
    let n = d.dim();
    // generalized golden ratio: the positive root of x^(n+1) = x + 1
    let mut phi = 2.0_f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (n as f64 + 1.0));
    }
    let alpha: Vec<f64> = (1..=n)
        .map(|i| (1.0 / phi.powi(i as i32)).fract())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let shift: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    let normal = Normal::standard();
    (0..sampling.count)
        .into_par_iter()
        .map(|j| {
            let z: Vec<f64> = (0..n)
                .map(|i| {
                    let u = (shift[i] + (j as f64 + 1.0) * alpha[i]).fract();
                    let u = u.clamp(1e-12, 1.0 - 1e-12);
                    normal.inverse_cdf(u)
                })
                .collect();
            project_to_sphere(&z, d)
        })
        .collect()
}
