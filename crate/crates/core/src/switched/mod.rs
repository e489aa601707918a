//! Switched systems `x' = f_sigma(x)` with a common Lyapunov candidate whose
//! derivatives along the sub-systems are homogeneous of one degree.

mod simulate;

use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

pub use simulate::{simulate_min_switching, trajectory_csv, Trajectory, TrajectoryRow};

use crate::error::{Error, Result};
use crate::homog::{
    Dilation, GeneralizedPolynomial, Parity, SampleScheme, SampleSet, Sampling, DEGREE_TOL,
};
use crate::image::{planar_point, polish_planar};
use crate::lemma::{find_strict_multiplier, MultiplierCertificate};

/// Relative floor for "strictly negative" derivative values.
pub const NEGATIVITY_REL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchedSystem {
    n: usize,
    fields: Vec<Vec<GeneralizedPolynomial>>,
}

impl SwitchedSystem {
    /// `fields[i][j]` is the `j`-th component of sub-system `i`.
    pub fn new(fields: Vec<Vec<GeneralizedPolynomial>>) -> Result<Self> {
        if fields.len() < 2 {
            return Err(Error::Argument(format!(
                "a switched system needs at least 2 sub-systems, got {}",
                fields.len()
            )));
        }
        let n = fields[0].len();
        if n == 0 {
            return Err(Error::Argument("state dimension must be positive".into()));
        }
        for field in &fields {
            if field.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: field.len(),
                });
            }
            if let Some(c) = field.iter().find(|c| c.dim() != n) {
                return Err(Error::Dimension {
                    expected: n,
                    got: c.dim(),
                });
            }
        }
        Ok(Self { n, fields })
    }

    /// Linear sub-systems `x' = A_i x`.
    pub fn linear(matrices: &[DMatrix<f64>]) -> Result<Self> {
        let fields = matrices
            .iter()
            .map(|a| {
                if !a.is_square() {
                    return Err(Error::Argument("sub-system matrices must be square".into()));
                }
                let n = a.nrows();
                Ok((0..n)
                    .map(|r| {
                        (0..n).fold(GeneralizedPolynomial::zero(n), |acc, c| {
                            &acc + &(GeneralizedPolynomial::variable(n, c) * a[(r, c)])
                        })
                    })
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(fields)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn fields(&self) -> &[Vec<GeneralizedPolynomial>] {
        &self.fields
    }

    /// The vector field `sum_i lambda_i f_i`.
    pub fn combined_field(&self, c: &ConvexCombination) -> Result<Vec<GeneralizedPolynomial>> {
        if c.len() != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                got: c.len(),
            });
        }
        Ok((0..self.n)
            .map(|j| {
                self.fields
                    .iter()
                    .zip(c.lambdas())
                    .fold(GeneralizedPolynomial::zero(self.n), |acc, (f, l)| {
                        &acc + &(&f[j] * *l)
                    })
            })
            .collect())
    }
}

/// `<grad V, field>`.
pub fn derivative_along(
    v: &GeneralizedPolynomial,
    field: &[GeneralizedPolynomial],
) -> Result<GeneralizedPolynomial> {
    if field.len() != v.dim() {
        return Err(Error::Dimension {
            expected: v.dim(),
            got: field.len(),
        });
    }
    let grad = v.gradient()?;
    Ok(grad
        .iter()
        .zip(field)
        .fold(GeneralizedPolynomial::zero(v.dim()), |acc, (dv, fi)| {
            &acc + &(dv * fi)
        }))
}

/// A Lyapunov candidate together with its derivatives along every sub-system.
#[derive(Debug, Clone)]
pub struct LfhdCandidate {
    v: GeneralizedPolynomial,
    grad: Vec<GeneralizedPolynomial>,
    derivatives: Vec<GeneralizedPolynomial>,
    degree: f64,
    dilation: Dilation,
}

impl LfhdCandidate {
    /// Builds the derivatives and checks they are even and homogeneous of
    /// one common degree with respect to `d`.
    pub fn new(v: GeneralizedPolynomial, sys: &SwitchedSystem, d: &Dilation) -> Result<Self> {
        if v.dim() != sys.dim() || d.dim() != sys.dim() {
            return Err(Error::Dimension {
                expected: sys.dim(),
                got: if v.dim() != sys.dim() {
                    v.dim()
                } else {
                    d.dim()
                },
            });
        }
        let grad = v.gradient()?;
        let derivatives = sys
            .fields()
            .iter()
            .map(|f| derivative_along(&v, f))
            .collect::<Result<Vec<_>>>()?;
        let mut degree: Option<f64> = None;
        for (i, dv) in derivatives.iter().enumerate() {
            if dv.is_zero() {
                continue;
            }
            let k = dv.homogeneity_degree(d)?;
            match degree {
                Some(k0) if (k - k0).abs() > DEGREE_TOL * (1.0 + k0.abs()) => {
                    return Err(Error::Argument(format!(
                        "derivative along sub-system {} has degree {k}, expected {k0}",
                        i + 1
                    )));
                }
                None => degree = Some(k),
                _ => {}
            }
            if dv.parity() != Parity::Even {
                return Err(Error::Argument(format!(
                    "derivative along sub-system {} is not even",
                    i + 1
                )));
            }
        }
        let degree = degree
            .ok_or_else(|| Error::Degenerate("every derivative vanishes identically".into()))?;
        Ok(Self {
            v,
            grad,
            derivatives,
            degree,
            dilation: d.clone(),
        })
    }

    pub fn v(&self) -> &GeneralizedPolynomial {
        &self.v
    }

    pub fn gradient(&self) -> &[GeneralizedPolynomial] {
        &self.grad
    }

    pub fn derivatives(&self) -> &[GeneralizedPolynomial] {
        &self.derivatives
    }

    pub fn common_degree(&self) -> f64 {
        self.degree
    }

    pub fn dilation(&self) -> &Dilation {
        &self.dilation
    }

    /// Index of the smallest derivative at `x`, lowest index on ties.
    pub fn argmin_at(&self, x: &[f64]) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (i, dv) in self.derivatives.iter().enumerate() {
            let val = dv.eval(x);
            if val < best.1 {
                best = (i, val);
            }
        }
        best
    }
}

/// Weights on the probability simplex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexCombination {
    lambdas: Vec<f64>,
}

impl ConvexCombination {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::Argument("no weights given".into()));
        }
        if lambdas.iter().any(|l| !l.is_finite() || *l < 0.0) {
            return Err(Error::Argument(format!(
                "weights must be nonnegative, got {lambdas:?}"
            )));
        }
        let sum: f64 = lambdas.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Argument(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self { lambdas })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }
}

/// One row of the stable-region data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionRow {
    pub theta_or_index: f64,
    /// 1-based index of the sub-system with the smallest derivative.
    pub argmin: usize,
    pub min_derivative: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LfhdReport {
    pub covered: bool,
    /// Largest value of `min_i V'_i` over the sphere (negative when covered).
    pub worst: f64,
    pub worst_point: Vec<f64>,
    pub threshold: f64,
    /// Indices of samples where no derivative is negative.
    pub uncovered: Vec<usize>,
    /// Largest value of each `V'_i` over the samples; positive values mark
    /// directions where that sub-system alone increases `V`.
    pub max_per_subsystem: Vec<f64>,
    pub v_min: f64,
    pub sample_count: usize,
    pub seed: u64,
    pub dilation: Dilation,
    #[serde(skip)]
    pub regions: Vec<RegionRow>,
}

fn param(set: &SampleSet, i: usize) -> f64 {
    set.thetas().map_or(i as f64, |t| t[i])
}

/// Values of every derivative at every sample, `values[i][j] = V'_i(x_j)`.
fn derivative_table(cand: &LfhdCandidate, set: &SampleSet) -> Result<Vec<Vec<f64>>> {
    cand.derivatives.iter().map(|dv| set.eval(dv)).collect()
}

fn table_scale(table: &[Vec<f64>]) -> f64 {
    table.iter().flatten().fold(0.0, |m: f64, v| m.max(v.abs()))
}

/// Checks that `V` is positive definite and that some derivative is negative
/// at every sphere sample.
pub fn check_lfhd(
    sys: &SwitchedSystem,
    cand: &LfhdCandidate,
    sampling: &Sampling,
) -> Result<LfhdReport> {
    if cand.derivatives.len() != sys.len() {
        return Err(Error::Dimension {
            expected: sys.len(),
            got: cand.derivatives.len(),
        });
    }
    let d = &cand.dilation;
    let set = SampleSet::generate(d, sampling)?;
    let vvals = set.eval(&cand.v)?;
    let vmax = vvals.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let v_min = vvals.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(v_min > NEGATIVITY_REL * vmax) {
        return Err(Error::Negative(format!(
            "V is not positive definite (min {v_min:e} on the sphere)"
        )));
    }
    let table = derivative_table(cand, &set)?;
    let threshold = NEGATIVITY_REL * table_scale(&table);
    let m = set.len();
    let mut regions = Vec::with_capacity(m);
    let mut uncovered = Vec::new();
    let mut worst = (f64::NEG_INFINITY, 0);
    for j in 0..m {
        let (mut arg, mut val) = (0, f64::INFINITY);
        for (i, row) in table.iter().enumerate() {
            if row[j] < val {
                arg = i;
                val = row[j];
            }
        }
        if val >= -threshold {
            uncovered.push(j);
        }
        if val > worst.0 {
            worst = (val, j);
        }
        regions.push(RegionRow {
            theta_or_index: param(&set, j),
            argmin: arg + 1,
            min_derivative: val,
        });
    }
    let mut worst_value = worst.0;
    let mut worst_point = set.points()[worst.1].coords().to_vec();
    if set.scheme() == SampleScheme::ThetaGrid {
        let h = |x: &[f64]| -cand.argmin_at(x).1;
        let (t, v) = polish_planar(d, param(&set, worst.1), set.resolution(), h);
        if -v > worst_value {
            worst_value = -v;
            worst_point = planar_point(d, t);
        }
    }
    let max_per_subsystem = table
        .iter()
        .map(|row| row.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    Ok(LfhdReport {
        covered: uncovered.is_empty() && worst_value < -threshold,
        worst: worst_value,
        worst_point,
        threshold,
        uncovered,
        max_per_subsystem,
        v_min,
        sample_count: m,
        seed: sampling.seed,
        dilation: d.clone(),
        regions,
    })
}

/// Region CSV with columns `theta_or_index,argmin,min_derivative`.
pub fn region_csv(rows: &[RegionRow]) -> String {
    let mut out = String::from("theta_or_index,argmin,min_derivative\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            r.theta_or_index, r.argmin, r.min_derivative
        );
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct Synthesis {
    pub combination: ConvexCombination,
    pub certificate: MultiplierCertificate,
    /// Largest derivative along the combined field over fresh samples.
    pub verified_max: f64,
    pub threshold: f64,
}

/// Two sub-systems: turns a strict multiplier for `(-V'_1, V'_2)` into the
/// weights `(1/(1+xi), xi/(1+xi))` and re-checks the combined derivative.
pub fn synthesize_combination_n2(
    sys: &SwitchedSystem,
    cand: &LfhdCandidate,
    sampling: &Sampling,
) -> Result<Synthesis> {
    if sys.len() != 2 {
        return Err(Error::Argument(format!(
            "synthesis needs exactly 2 sub-systems, got {}",
            sys.len()
        )));
    }
    let report = check_lfhd(sys, cand, sampling)?;
    if !report.covered {
        return Err(Error::Negative(format!(
            "V is not a Lyapunov function with homogeneous derivative (worst {:e})",
            report.worst
        )));
    }
    let d = &cand.dilation;
    let f = -&cand.derivatives[0];
    let g = cand.derivatives[1].clone();
    let certificate = find_strict_multiplier(&f, &g, d, sampling)?;
    let xi = certificate.xi;
    let combination =
        ConvexCombination::new(vec![1.0 / (1.0 + xi), xi / (1.0 + xi)]).or_else(|_| {
            let l1 = 1.0 / (1.0 + xi);
            ConvexCombination::new(vec![l1, 1.0 - l1])
        })?;
    let field = sys.combined_field(&combination)?;
    let dv = derivative_along(&cand.v, &field)?;
    let fresh = sampling.fresh();
    let set = SampleSet::generate(d, &fresh)?;
    let vals = set.eval(&dv)?;
    let scale = vals.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let threshold = NEGATIVITY_REL * scale;
    let verified_max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(verified_max < -threshold) {
        return Err(Error::Unsound(format!(
            "combined derivative reaches {verified_max:e} at lambda = {:?}",
            combination.lambdas()
        )));
    }
    Ok(Synthesis {
        combination,
        certificate,
        verified_max,
        threshold,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub feasible: Vec<ConvexCombination>,
    /// Outermost feasible values of the first weight (two sub-systems only).
    pub interval: Option<(f64, f64)>,
    pub grid_step: f64,
    pub grid_points: usize,
    pub threshold: f64,
    pub sample_count: usize,
    pub seed: u64,
}

/// All integer compositions of `m` into `parts` parts, in lexicographic order.
fn compositions(m: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![m]];
    }
    let mut out = Vec::new();
    for first in (0..=m).rev() {
        for mut rest in compositions(m - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Grid search over the simplex: a weight vector is feasible when the
/// combined derivative is below `-threshold` at every sphere sample.
pub fn scan_combinations(
    sys: &SwitchedSystem,
    cand: &LfhdCandidate,
    grid_step: f64,
    sampling: &Sampling,
) -> Result<ScanResult> {
    if !(grid_step > 0.0 && grid_step <= 1.0) {
        return Err(Error::Argument(format!(
            "grid step must lie in (0, 1], got {grid_step}"
        )));
    }
    if cand.derivatives.len() != sys.len() {
        return Err(Error::Dimension {
            expected: sys.len(),
            got: cand.derivatives.len(),
        });
    }
    let m = (1.0 / grid_step).round() as usize;
    let set = SampleSet::generate(&cand.dilation, sampling)?;
    let table = derivative_table(cand, &set)?;
    let threshold = NEGATIVITY_REL * table_scale(&table);
    let grid = compositions(m, sys.len());
    let feasible: Vec<Option<ConvexCombination>> = grid
        .par_iter()
        .map(|counts| {
            let lambdas: Vec<f64> = counts.iter().map(|&c| c as f64 / m as f64).collect();
            let ok = (0..set.len()).all(|j| {
                let v: f64 = lambdas.iter().zip(&table).map(|(l, row)| l * row[j]).sum();
                v < -threshold
            });
            ok.then_some(ConvexCombination { lambdas })
        })
        .collect();
    let feasible: Vec<ConvexCombination> = feasible.into_iter().flatten().collect();
    let interval = (sys.len() == 2 && !feasible.is_empty()).then(|| {
        feasible
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
                (lo.min(c.lambdas[0]), hi.max(c.lambdas[0]))
            })
    });
    Ok(ScanResult {
        feasible,
        interval,
        grid_step,
        grid_points: grid.len(),
        threshold,
        sample_count: set.len(),
        seed: sampling.seed,
    })
}

/// Largest eigenvalue of the symmetric part of `P * sum_i lambda_i A_i`.
pub fn linear_combination_eigencheck(
    matrices: &[DMatrix<f64>],
    lambdas: &ConvexCombination,
    p: &DMatrix<f64>,
) -> Result<f64> {
    if matrices.len() != lambdas.len() {
        return Err(Error::Dimension {
            expected: matrices.len(),
            got: lambdas.len(),
        });
    }
    let n = p.nrows();
    if !p.is_square() {
        return Err(Error::Argument("P must be square".into()));
    }
    if let Some(a) = matrices.iter().find(|a| a.nrows() != n || a.ncols() != n) {
        return Err(Error::Dimension {
            expected: n,
            got: a.nrows().max(a.ncols()),
        });
    }
    if (p - p.transpose()).amax() > 1e-12 * (1.0 + p.amax()) {
        return Err(Error::Argument("P must be symmetric".into()));
    }
    if p.clone().cholesky().is_none() {
        return Err(Error::Argument("P must be positive definite".into()));
    }
    let a = matrices
        .iter()
        .zip(lambdas.lambdas())
        .fold(DMatrix::zeros(n, n), |acc, (m, l)| acc + m * *l);
    let pa = p * a;
    let sym = (&pa + pa.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    Ok(eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max))
}
