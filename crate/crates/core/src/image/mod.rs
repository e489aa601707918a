//! The joint image `U = {(f(x), g(x))}` of two homogeneous functions.
//!
//! By homogeneity `U` is a union of rays, so everything here works with the
//! set of directions `atan2(g, f)` hit by sphere samples. On planar problems
//! consecutive θ-grid samples are joined by the short arc between their
//! directions, which makes the measured coverage insensitive to how fast the
//! image curve moves.

mod arcs;

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use arcs::{delta, wrap, Arc, ArcSet};

use crate::error::{Error, Result};
use crate::homog::{
    common_degree, project_to_sphere, theta_point, Dilation, GeneralizedPolynomial, Parity,
    SampleScheme, SampleSet, Sampling,
};
use crate::interval::Interval;

/// Samples with `hypot(f, g)` below this fraction of the largest are treated as zeros.
pub const ZERO_REL_TOL: f64 = 1e-12;
/// A gap is real when it is longer than this many sample spacings.
pub const GAP_FACTOR: f64 = 3.0;
/// Largest direction jump still joined between neighbouring θ samples.
const MAX_JOIN: f64 = PI / 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Singleton,
    LineThroughOrigin,
    FullPlane,
    AngularSector,
    /// Several disjoint arcs that do not form a line; only possible when
    /// `f` and `g` share a nonzero zero.
    Irregular,
}

/// `(f, g)` evaluated at every point of a sample set.
#[derive(Debug, Clone)]
pub struct PairSamples {
    pub set: SampleSet,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

impl PairSamples {
    pub fn new(
        f: &GeneralizedPolynomial,
        g: &GeneralizedPolynomial,
        d: &Dilation,
        sampling: &Sampling,
    ) -> Result<Self> {
        let set = SampleSet::generate(d, sampling)?;
        let fv = set.eval(f)?;
        let gv = set.eval(g)?;
        Ok(Self { set, f: fv, g: gv })
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    /// Largest `hypot(f, g)` over the samples.
    pub fn scale(&self) -> f64 {
        self.f
            .iter()
            .zip(&self.g)
            .map(|(a, b)| a.hypot(*b))
            .fold(0.0, f64::max)
    }

    /// Direction of each sample, `None` where the sample maps (nearly) to 0.
    pub fn directions(&self) -> Vec<Option<f64>> {
        let floor = ZERO_REL_TOL * self.scale();
        self.f
            .iter()
            .zip(&self.g)
            .map(|(a, b)| (a.hypot(*b) > floor).then(|| b.atan2(*a)))
            .collect()
    }

    /// Parameter used as the first CSV column: θ on planar grids, else the index.
    pub fn param(&self, i: usize) -> f64 {
        match self.set.thetas() {
            Some(t) => t[i],
            None => i as f64,
        }
    }

    pub fn coverage(&self) -> Coverage {
        let dirs = self.directions();
        let resolution = self.set.resolution();
        match self.set.scheme() {
            SampleScheme::ThetaGrid => {
                let m = dirs.len();
                let mut pieces = Vec::with_capacity(2 * m);
                for i in 0..m {
                    let Some(a) = dirs[i] else { continue };
                    pieces.push(Arc { start: a, len: 0.0 });
                    if let Some(b) = dirs[(i + 1) % m] {
                        let step = delta(a, b);
                        if step.abs() <= MAX_JOIN {
                            pieces.push(Arc {
                                start: a,
                                len: step,
                            });
                        }
                    }
                }
                Coverage {
                    arcs: ArcSet::from_arcs(pieces, 1e-12),
                    gap_threshold: GAP_FACTOR * resolution,
                    resolution,
                }
            }
            SampleScheme::Pair => Coverage {
                arcs: ArcSet::from_points(dirs.into_iter().flatten(), 1e-12),
                gap_threshold: 0.0,
                resolution,
            },
            SampleScheme::LowDiscrepancy => Coverage {
                arcs: ArcSet::from_points(dirs.into_iter().flatten(), 0.0),
                gap_threshold: GAP_FACTOR * resolution,
                resolution,
            },
        }
    }
}

/// Sampled direction coverage of an image set.
#[derive(Debug, Clone)]
pub struct Coverage {
    pub arcs: ArcSet,
    /// Gaps at most this long are attributed to sampling.
    pub gap_threshold: f64,
    pub resolution: f64,
}

impl Coverage {
    /// Coverage from isolated directions, closing gaps up to `gap_threshold`.
    pub fn from_directions(angles: impl IntoIterator<Item = f64>, gap_threshold: f64) -> Self {
        Self {
            arcs: ArcSet::from_points(angles, 0.0),
            gap_threshold,
            resolution: gap_threshold / GAP_FACTOR,
        }
    }

    /// Connected pieces after closing sampling-sized gaps.
    pub fn components(&self) -> Vec<Arc> {
        self.arcs.components(self.gap_threshold)
    }

    pub fn real_gaps(&self) -> Vec<Arc> {
        self.arcs.real_gaps(self.gap_threshold)
    }

    /// `U ∪ (-U)`.
    pub fn symmetrized(&self) -> Coverage {
        Coverage {
            arcs: self.arcs.union(&self.arcs.rotated(PI), 1e-12),
            gap_threshold: self.gap_threshold,
            resolution: self.resolution,
        }
    }

    /// A direction `a` of `self` whose opposite `a + pi` lies in `other`,
    /// both taken with sampling-sized gaps closed (plus `tol`).
    pub fn antipodal_collision(&self, other: &Coverage, tol: f64) -> Option<f64> {
        let mine = self.components();
        let theirs = other.components();
        for a in &mine {
            let flipped = Arc {
                start: a.start + PI,
                len: a.len,
            };
            for b in &theirs {
                if let Some(hit) = overlap(&flipped, b, tol) {
                    return Some(wrap(hit - PI));
                }
            }
        }
        None
    }

    /// Number of distinct lines through the origin contained in the coverage.
    pub fn line_count(&self, tol: f64) -> usize {
        let comps = self.components();
        if comps.len() == 1 && comps[0].len >= TAU - 1e-12 {
            return usize::MAX;
        }
        let flipped: Vec<Arc> = comps
            .iter()
            .map(|a| Arc {
                start: a.start + PI,
                len: a.len,
            })
            .collect();
        let mut hits = Vec::new();
        for a in &comps {
            for b in &flipped {
                if let Some(i) = intersect(a, b, tol) {
                    hits.push(i);
                }
            }
        }
        // each line shows up as an antipodal pair of pieces; a piece of
        // positive length holds a continuum of lines
        if hits.iter().any(|a| a.len > 2.0 * tol + self.gap_threshold) {
            return usize::MAX;
        }
        hits.len().div_ceil(2)
    }
}

fn contains_tol(a: &Arc, angle: f64, tol: f64) -> bool {
    let off = (angle - a.start).rem_euclid(TAU);
    off <= a.len + tol || off >= TAU - tol
}

fn overlap(a: &Arc, b: &Arc, tol: f64) -> Option<f64> {
    if contains_tol(a, b.start, tol) {
        Some(wrap(b.start))
    } else if contains_tol(b, a.start, tol) {
        Some(wrap(a.start))
    } else {
        None
    }
}

fn intersect(a: &Arc, b: &Arc, tol: f64) -> Option<Arc> {
    let s1 = ArcSet::from_arcs(
        [Arc {
            start: a.start - tol,
            len: a.len + 2.0 * tol,
        }],
        0.0,
    );
    let s2 = ArcSet::from_arcs(
        [Arc {
            start: b.start - tol,
            len: b.len + 2.0 * tol,
        }],
        0.0,
    );
    let i = s1.intersection(&s2);
    if i.is_empty() {
        None
    } else {
        i.arcs().into_iter().next()
    }
}

/// One sampled image point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImagePoint {
    pub theta_or_index: f64,
    pub f: f64,
    pub g: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ImageSummary {
    pub degree: f64,
    pub parity: Parity,
    pub classification: Classification,
    /// Measured sector angle `2pi - largest real gap`.
    pub phi: f64,
    pub largest_gap: f64,
    pub gap_threshold: f64,
    pub resolution: f64,
    /// Covered arcs `(start, len)` after closing sampling-sized gaps.
    pub components: Vec<Arc>,
    /// Boundary directions of each covered arc, in `(-pi, pi]`.
    pub boundaries: Vec<(f64, f64)>,
    pub boundary_note: String,
    pub sample_count: usize,
    pub seed: u64,
    pub scheme: SampleScheme,
    pub dilation: Dilation,
    /// Sorted directions of the nonzero samples.
    pub directions: Vec<f64>,
    #[serde(skip)]
    pub coverage: Option<Coverage>,
    #[serde(skip)]
    pub points: Vec<ImagePoint>,
}

/// Samples `U` on the generalized sphere and classifies it.
pub fn sample_image(
    f: &GeneralizedPolynomial,
    g: &GeneralizedPolynomial,
    d: &Dilation,
    sampling: &Sampling,
) -> Result<ImageSummary> {
    let degree = common_degree(f, g, d)?;
    let parity = combined_parity(f, g);
    let data = PairSamples::new(f, g, d, sampling)?;
    if data.scale() == 0.0 {
        return Err(Error::Degenerate("every sample maps to (0, 0)".into()));
    }
    let points: Vec<ImagePoint> = (0..data.len())
        .map(|i| ImagePoint {
            theta_or_index: data.param(i),
            f: data.f[i],
            g: data.g[i],
        })
        .collect();
    let mut directions: Vec<f64> = data.directions().into_iter().flatten().collect();
    directions.sort_by(f64::total_cmp);
    let cov = data.coverage();
    let comps = cov.components();
    let real = cov.real_gaps();
    let largest_gap = cov.arcs.largest_gap().map_or(0.0, |a| a.len);
    let largest_real = real.iter().map(|a| a.len).fold(0.0, f64::max);
    let phi = if real.is_empty() {
        TAU
    } else {
        TAU - largest_real
    };

    let classification = if degree.abs() <= crate::homog::DEGREE_TOL {
        Classification::Singleton
    } else if real.is_empty() {
        Classification::FullPlane
    } else if comps.len() == 1 {
        Classification::AngularSector
    } else if comps.len() == 2
        && comps.iter().all(|a| a.len <= cov.gap_threshold + 1e-9)
        && (delta(comps[0].mid(), comps[1].mid()).abs() - PI).abs() <= cov.gap_threshold + 1e-6
    {
        Classification::LineThroughOrigin
    } else {
        Classification::Irregular
    };
    let boundaries = comps
        .iter()
        .map(|a| (wrap(a.start), wrap(a.end())))
        .collect();
    Ok(ImageSummary {
        degree,
        parity,
        classification,
        phi,
        largest_gap,
        gap_threshold: cov.gap_threshold,
        resolution: cov.resolution,
        components: comps,
        boundaries,
        boundary_note: "numeric, closure untested".into(),
        sample_count: data.len(),
        seed: sampling.seed,
        scheme: data.set.scheme(),
        dilation: d.clone(),
        directions,
        coverage: Some(cov),
        points,
    })
}

/// Parity shared by both functions, `Neither` if they differ.
pub fn combined_parity(f: &GeneralizedPolynomial, g: &GeneralizedPolynomial) -> Parity {
    if f.is_zero() {
        return g.parity();
    }
    if g.is_zero() {
        return f.parity();
    }
    match (f.parity(), g.parity()) {
        (a, b) if a == b => a,
        _ => Parity::Neither,
    }
}

/// Scatter CSV with columns `theta_or_index,f,g`.
pub fn scatter_csv(points: &[ImagePoint]) -> String {
    let mut out = String::from("theta_or_index,f,g\n");
    for p in points {
        let _ = writeln!(out, "{},{},{}", p.theta_or_index, p.f, p.g);
    }
    out
}

/// Minimum of `max(|f|, |g|)` on the sphere.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroMargin {
    pub margin: f64,
    /// Every subdivision cell got a positive lower bound.
    pub refined: bool,
    pub witness: Vec<f64>,
    pub threshold: f64,
    pub cells: usize,
    pub depth: usize,
    pub sample_count: usize,
    pub seed: u64,
}

/// Point on the closed planar curve `θ -> (|cos θ|^r1 sgn, |sin θ|^r2 sgn)`,
/// moved onto the sphere when `l != 2`.
pub(crate) fn planar_point(d: &Dilation, theta: f64) -> Vec<f64> {
    let p = theta_point(d, theta);
    if d.norm_param() == 2.0 {
        p.to_vec()
    } else {
        project_to_sphere(&p, d)
            .map(|s| s.into_coords())
            .unwrap_or_else(|_| p.to_vec())
    }
}

/// Golden-section minimisation of `h` along the planar sphere curve on
/// `[theta - half, theta + half]`, returning `(theta, h)` no worse than the start.
pub(crate) fn polish_planar(
    d: &Dilation,
    theta: f64,
    half: f64,
    h: impl Fn(&[f64]) -> f64,
) -> (f64, f64) {
    let eval = |t: f64| h(&planar_point(d, t));
    let mut best = (theta, eval(theta));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (theta - half, theta + half);
    let mut c = b - inv_phi * (b - a);
    let mut e = a + inv_phi * (b - a);
    let (mut fc, mut fe) = (eval(c), eval(e));
    for _ in 0..80 {
        if fc < fe {
            b = e;
            e = c;
            fe = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + inv_phi * (b - a);
            fe = eval(e);
        }
    }
    for (t, v) in [(c, fc), (e, fe)] {
        if v < best.1 {
            best = (t, v);
        }
    }
    best
}

/// Index of the smallest value, lowest index on ties.
pub(crate) fn argmin(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        match best {
            Some(b) if values[b] <= *v => {}
            _ => best = Some(i),
        }
    }
    best
}

const MAX_CELLS: usize = 1 << 20;
const MAX_DEPTH: usize = 48;

/// Sampled (and, for planar problems, subdivision-refined) common-zero margin.
pub fn zero_margin(
    f: &GeneralizedPolynomial,
    g: &GeneralizedPolynomial,
    d: &Dilation,
    threshold: f64,
    sampling: &Sampling,
) -> Result<ZeroMargin> {
    common_degree(f, g, d)?;
    let data = PairSamples::new(f, g, d, sampling)?;
    let values: Vec<f64> = data
        .f
        .iter()
        .zip(&data.g)
        .map(|(a, b)| a.abs().max(b.abs()))
        .collect();
    let i = argmin(&values).expect("sample sets are never empty");
    let mut margin = values[i];
    let mut witness = data.set.points()[i].coords().to_vec();
    let mut out = ZeroMargin {
        margin,
        refined: false,
        witness: witness.clone(),
        threshold,
        cells: 0,
        depth: 0,
        sample_count: data.len(),
        seed: sampling.seed,
    };
    match data.set.scheme() {
        SampleScheme::Pair => {
            out.refined = margin > threshold;
        }
        SampleScheme::ThetaGrid => {
            let theta = data.param(i);
            let h = |x: &[f64]| f.eval(x).abs().max(g.eval(x).abs());
            let (t, v) = polish_planar(d, theta, data.set.resolution(), h);
            if v < margin {
                margin = v;
                witness = planar_point(d, t);
            }
            out.margin = margin;
            out.witness = witness;
            if margin > threshold {
                let (ok, cells, depth) = refine_planar(f, g, d);
                out.refined = ok;
                out.cells = cells;
                out.depth = depth;
            }
        }
        SampleScheme::LowDiscrepancy => {}
    }
    Ok(out)
}

/// Bisects θ over quadrant-aligned cells until `max(|f|, |g|)` has a positive
/// lower bound on each one. Returns (success, cells visited, deepest level).
fn refine_planar(
    f: &GeneralizedPolynomial,
    g: &GeneralizedPolynomial,
    d: &Dilation,
) -> (bool, usize, usize) {
    let pad_f = 1e-13 * f.terms().iter().map(|t| t.coeff().abs()).sum::<f64>();
    let pad_g = 1e-13 * g.terms().iter().map(|t| t.coeff().abs()).sum::<f64>();
    let initial = 64usize;
    let mut stack: Vec<(f64, f64, usize)> = (0..initial)
        .map(|j| {
            let a = TAU * j as f64 / initial as f64;
            (a, a + TAU / initial as f64, 0)
        })
        .collect();
    let mut cells = 0;
    let mut deepest = 0;
    while let Some((a, b, depth)) = stack.pop() {
        cells += 1;
        deepest = deepest.max(depth);
        if cells > MAX_CELLS || depth > MAX_DEPTH {
            return (false, cells, deepest);
        }
        let pa = theta_point(d, a);
        let pb = theta_point(d, b);
        let bx = [Interval::new(pa[0], pb[0]), Interval::new(pa[1], pb[1])];
        let fr = f.range_over(&bx).widen(pad_f, 1e-12);
        let gr = g.range_over(&bx).widen(pad_g, 1e-12);
        if fr.mig().max(gr.mig()) > 0.0 {
            continue;
        }
        let m = 0.5 * (a + b);
        stack.push((m, b, depth + 1));
        stack.push((a, m, depth + 1));
    }
    (true, cells, deepest)
}

/// Point of the closed curve used to show path-connectedness of the direction set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub theta: f64,
    pub f: f64,
    pub g: f64,
}

/// `(f, g)` along `x(θ)_i = z1_i |cos θ|^r_i sgn cos θ + z2_i |sin θ|^r_i sgn sin θ`
/// for `steps + 1` values of θ from 0 to 2π.
pub fn mixing_curve(
    f: &GeneralizedPolynomial,
    g: &GeneralizedPolynomial,
    d: &Dilation,
    z1: &[f64],
    z2: &[f64],
    steps: usize,
) -> Result<Vec<CurvePoint>> {
    if steps < 4 {
        return Err(Error::Argument(
            "mixing curve needs at least 4 steps".into(),
        ));
    }
    let n = d.dim();
    for z in [z1, z2] {
        if z.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: z.len(),
            });
        }
    }
    if f.dim() != n || g.dim() != n {
        return Err(Error::Dimension {
            expected: n,
            got: f.dim().max(g.dim()),
        });
    }
    Ok((0..=steps)
        .map(|j| {
            let theta = TAU * j as f64 / steps as f64;
            let (s, c) = theta.sin_cos();
            let x: Vec<f64> = (0..n)
                .map(|i| {
                    let r = d.weights()[i];
                    z1[i] * c.abs().powf(r).copysign(c) + z2[i] * s.abs().powf(r).copysign(s)
                })
                .collect();
            CurvePoint {
                theta,
                f: f.eval(&x),
                g: g.eval(&x),
            }
        })
        .collect())
}

/// A midpoint of two image points whose direction misses the image.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityViolation {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub u: [f64; 2],
    pub v: [f64; 2],
    pub midpoint: [f64; 2],
    pub direction: f64,
    /// Distance of the midpoint direction from the covered set.
    pub clearance: f64,
}

/// Checks the midpoint of `(f, g)(x)` and `(f, g)(y)` against a coverage.
pub fn check_midpoint(
    f: &GeneralizedPolynomial,
    g: &GeneralizedPolynomial,
    gaps: &[Arc],
    min_clearance: f64,
    x: &[f64],
    y: &[f64],
) -> Option<ConvexityViolation> {
    let u = [f.eval(x), g.eval(x)];
    let v = [f.eval(y), g.eval(y)];
    let mid = [(u[0] + v[0]) / 2.0, (u[1] + v[1]) / 2.0];
    let scale = u[0].hypot(u[1]).max(v[0].hypot(v[1]));
    if mid[0].hypot(mid[1]) <= 1e-9 * scale {
        return None;
    }
    let dir = mid[1].atan2(mid[0]);
    let clearance = gaps.iter().map(|a| a.depth(dir)).fold(0.0, f64::max);
    (clearance > min_clearance).then(|| ConvexityViolation {
        x: x.to_vec(),
        y: y.to_vec(),
        u,
        v,
        midpoint: mid,
        direction: dir,
        clearance,
    })
}

/// Looks for image points whose midpoint direction lies well inside a real
/// gap of `U ∪ (-U)`. Pairs of signed unit vectors are tried first, then
/// `trials` random pairs from the cube `[-1, 1]^n`.
pub fn convexity_probe(
    f: &GeneralizedPolynomial,
    g: &GeneralizedPolynomial,
    d: &Dilation,
    trials: usize,
    sampling: &Sampling,
) -> Result<Vec<ConvexityViolation>> {
    let summary = sample_image(f, g, d, sampling)?;
    if summary.classification == Classification::Singleton {
        return Ok(Vec::new());
    }
    let cov = summary.coverage.expect("set by sample_image").symmetrized();
    let gaps = cov.real_gaps();
    if gaps.is_empty() {
        return Ok(Vec::new());
    }
    let min_clearance = cov.gap_threshold.max(1e-6);
    let n = d.dim();
    let mut units = Vec::with_capacity(2 * n);
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[i] = s;
            units.push(e);
        }
    }
    let mut out = Vec::new();
    for i in 0..units.len() {
        for j in i + 1..units.len() {
            out.extend(check_midpoint(
                f,
                g,
                &gaps,
                min_clearance,
                &units[i],
                &units[j],
            ));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed ^ 0xC0_4E_C5);
    for _ in 0..trials {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        out.extend(check_midpoint(f, g, &gaps, min_clearance, &x, &y));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn poly(n: usize, terms: &[(f64, &[u32])]) -> GeneralizedPolynomial {
        GeneralizedPolynomial::from_integer_terms(n, terms).unwrap()
    }

    fn planar() -> Sampling {
        Sampling::default_for(2)
    }

    #[test]
    fn quartic_pair_has_half_plane_image() {
        let f = poly(2, &[(1.0, &[4, 0]), (-1.0, &[0, 4]), (-1.0, &[2, 2])]);
        let g = poly(2, &[(-1.0, &[4, 0]), (1.0, &[0, 4])]);
        let s = sample_image(&f, &g, &Dilation::trivial(2), &planar()).unwrap();
        assert_eq!(s.classification, Classification::AngularSector);
        assert_abs_diff_eq!(s.phi, PI, epsilon = 0.05);
        assert_abs_diff_eq!(s.phi + s.largest_gap, TAU, epsilon = 1e-9);
    }

    #[test]
    fn odd_cubes() {
        let f = poly(2, &[(1.0, &[3, 0])]);
        let g = poly(2, &[(1.0, &[0, 3])]);
        let s = sample_image(&f, &g, &Dilation::trivial(2), &planar()).unwrap();
        assert_eq!(s.classification, Classification::FullPlane);
        let h = poly(1, &[(1.0, &[3])]);
        let s = sample_image(&h, &h, &Dilation::trivial(1), &Sampling::default_for(1)).unwrap();
        assert_eq!(s.classification, Classification::LineThroughOrigin);
    }

    #[test]
    fn constants_are_a_singleton() {
        let c = GeneralizedPolynomial::constant(2, 1.0);
        let s = sample_image(&c, &c, &Dilation::trivial(2), &planar()).unwrap();
        assert_eq!(s.classification, Classification::Singleton);
        let z = GeneralizedPolynomial::zero(2);
        assert!(sample_image(&z, &c, &Dilation::trivial(2), &planar()).is_err());
    }

    #[test]
    fn common_zero_is_found() {
        let f = poly(2, &[(-1.0, &[3, 0]), (1.0, &[0, 3])]);
        let g = poly(2, &[(1.0, &[0, 3]), (-0.5, &[3, 0]), (-0.5, &[1, 2])]);
        let z = zero_margin(&f, &g, &Dilation::trivial(2), 1e-8, &planar()).unwrap();
        assert!(z.margin < 1e-6);
        assert!(!z.refined);
        let w = &z.witness;
        assert_abs_diff_eq!(w[0], w[1], epsilon = 1e-6);
    }

    #[test]
    fn squares_on_the_zero_sphere() {
        let f = poly(1, &[(1.0, &[2])]);
        let z = zero_margin(
            &f,
            &f,
            &Dilation::trivial(1),
            1e-8,
            &Sampling::default_for(1),
        )
        .unwrap();
        assert_eq!(z.margin, 1.0);
        assert!(z.refined);
    }

    #[test]
    fn refinement_certifies_separated_pair() {
        let f = poly(2, &[(1.0, &[2, 0]), (-1.0, &[0, 2])]);
        let g = poly(2, &[(1.0, &[1, 1])]);
        let z = zero_margin(&f, &g, &Dilation::trivial(2), 1e-8, &planar()).unwrap();
        assert!(z.refined);
        assert!(z.margin > 0.3);
    }

    #[test]
    fn odd_curve_is_centrally_symmetric() {
        let f = poly(2, &[(1.0, &[3, 0])]);
        let g = poly(2, &[(1.0, &[0, 3])]);
        let c = mixing_curve(&f, &g, &Dilation::trivial(2), &[1.0, 0.0], &[0.0, 1.0], 64).unwrap();
        assert_eq!(c.len(), 65);
        for j in 0..32 {
            assert_abs_diff_eq!(c[j].f, -c[j + 32].f, epsilon = 1e-9);
            assert_abs_diff_eq!(c[j].g, -c[j + 32].g, epsilon = 1e-9);
        }
        let quadrants: std::collections::BTreeSet<(bool, bool)> = c
            .iter()
            .filter(|p| p.f.abs() > 1e-9 && p.g.abs() > 1e-9)
            .map(|p| (p.f > 0.0, p.g > 0.0))
            .collect();
        assert_eq!(quadrants.len(), 4);
    }

    #[test]
    fn remark_pair_is_not_convex() {
        let f = poly(2, &[(-1.0, &[3, 0]), (1.0, &[0, 3])]);
        let g = poly(2, &[(1.0, &[0, 3]), (-0.5, &[3, 0]), (-0.5, &[1, 2])]);
        let v = convexity_probe(&f, &g, &Dilation::trivial(2), 50, &planar()).unwrap();
        assert!(v
            .iter()
            .any(|w| (w.midpoint[0]).abs() < 1e-12 && (w.midpoint[1] - 0.25).abs() < 1e-12));
        let s = sample_image(&f, &g, &Dilation::trivial(2), &planar()).unwrap();
        assert_eq!(s.classification, Classification::Irregular);
    }
}
