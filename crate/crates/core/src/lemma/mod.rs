//! Copositivity tests and S-Lemma multiplier searches.
//!
//! Every search runs in two phases: ξ is derived from one sample set and then
//! re-verified on an independent, denser one. The returned
//! [`MultiplierCertificate`] records both.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homog::{
    common_degree, Dilation, GeneralizedPolynomial, Parity, SampleScheme, Sampling,
};
use crate::image::{
    argmin, combined_parity, planar_point, polish_planar, zero_margin, Arc, ArcSet, Coverage,
    PairSamples, ZeroMargin,
};
use crate::stp::{homogenize, CoeffVecPolynomial};

/// Relative floor separating strict positivity from rounding noise.
pub const POSITIVITY_REL: f64 = 1e-8;
/// Relative slack allowed in non-strict checks.
pub const NONSTRICT_REL: f64 = 1e-9;
/// Search range for ξ.
pub const XI_MIN: f64 = 1e-6;
pub const XI_MAX: f64 = 1e6;
/// Half-width of the box used to re-verify non-homogeneous certificates.
pub const BOX_RADIUS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ReasonCode {
    NotCopositive,
    SectorGePi,
    CommonZero,
    MultipleLines,
    #[serde(rename = "NHS_ITEM_1")]
    NhsItem1,
    #[serde(rename = "NHS_ITEM_2")]
    NhsItem2,
    #[serde(rename = "NHS_ITEM_3")]
    NhsItem3,
    #[serde(rename = "NHS_ITEM_4")]
    NhsItem4,
    VerificationFailed,
}

impl ReasonCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReasonCode::NotCopositive => "NOT_COPOSITIVE",
            ReasonCode::SectorGePi => "SECTOR_GE_PI",
            ReasonCode::CommonZero => "COMMON_ZERO",
            ReasonCode::MultipleLines => "MULTIPLE_LINES",
            ReasonCode::NhsItem1 => "NHS_ITEM_1",
            ReasonCode::NhsItem2 => "NHS_ITEM_2",
            ReasonCode::NhsItem3 => "NHS_ITEM_3",
            ReasonCode::NhsItem4 => "NHS_ITEM_4",
            ReasonCode::VerificationFailed => "VERIFICATION_FAILED",
        }
    }
}

/// Why no multiplier was produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierFailure {
    pub reason: ReasonCode,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
}

impl MultiplierFailure {
    fn error(reason: ReasonCode, detail: impl Into<String>, witness: Option<Vec<f64>>) -> Error {
        Error::NoMultiplier(Self {
            reason,
            detail: detail.into(),
            witness,
        })
    }
}

impl fmt::Display for MultiplierFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.reason.as_str(), self.detail)?;
        if let Some(w) = &self.witness {
            write!(f, " (witness {w:?})")?;
        }
        Ok(())
    }
}

/// A named check performed while building a certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
}

impl Check {
    fn new(name: &str, passed: bool, value: f64) -> Self {
        Self {
            name: name.into(),
            passed,
            value,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplierCertificate {
    pub xi: f64,
    pub strict: bool,
    /// Minimum of `f - xi g` over the verification samples.
    pub margin: f64,
    /// The same minimum over the samples used for the search.
    pub search_margin: f64,
    pub initial_xi: f64,
    pub initial_margin: f64,
    /// Range of ξ compatible with the search samples.
    pub xi_interval: (f64, f64),
    pub threshold: f64,
    pub sample_count: usize,
    pub seed: u64,
    pub verify_sample_count: usize,
    pub verify_seed: u64,
    pub dilation: Dilation,
    pub checks: Vec<Check>,
}

/// Result of a copositivity test.
#[derive(Debug, Clone, Serialize)]
pub struct CopositivityReport {
    pub copositive: bool,
    pub strict: bool,
    /// No sample had `g >= 0`.
    pub vacuous: bool,
    /// Minimum of `f` over samples with `g >= 0` (the non-strict test uses `g >= tol_g`).
    pub min_f: f64,
    /// Minimum of `max(f, -g)`; positive exactly when strictly copositive.
    pub min_max: f64,
    pub threshold: f64,
    pub witness: Vec<f64>,
    pub sample_count: usize,
    pub seed: u64,
}

/// Tests whether `f >= 0` (or `> 0` when `strict`) wherever `g >= 0`.
pub fn is_copositive(
    f: &GeneralizedPolynomial,
    g: &GeneralizedPolynomial,
    d: &Dilation,
    strict: bool,
    sampling: &Sampling,
) -> Result<CopositivityReport> {
    common_degree(f, g, d)?;
    let data = PairSamples::new(f, g, d, sampling)?;
    Ok(copositivity(f, g, d, &data, strict))
}

fn copositivity(
    f: &GeneralizedPolynomial,
    g: &GeneralizedPolynomial,
    d: &Dilation,
    data: &PairSamples,
    strict: bool,
) -> CopositivityReport {
    let fmax = max_abs(&data.f);
    let gmax = max_abs(&data.g);
    let threshold = POSITIVITY_REL * fmax.max(gmax);
    let tol = NONSTRICT_REL * fmax.max(gmax);
    let tol_g = NONSTRICT_REL * gmax;
    let g_floor = if strict { 0.0 } else { tol_g };
    let feasible: Vec<f64> = data
        .f
        .iter()
        .zip(&data.g)
        .map(|(a, b)| if *b >= g_floor { *a } else { f64::INFINITY })
        .collect();
    let vacuous = data.g.iter().all(|b| *b < 0.0);
    let maxes: Vec<f64> = data.f.iter().zip(&data.g).map(|(a, b)| a.max(-b)).collect();
    let i_max = argmin(&maxes).expect("non-empty");
    let mut min_max = maxes[i_max];
    let mut witness_max = data.set.points()[i_max].coords().to_vec();
    if data.set.scheme() == SampleScheme::ThetaGrid {
        let h = |x: &[f64]| f.eval(x).max(-g.eval(x));
        let (t, v) = polish_planar(d, data.param(i_max), data.set.resolution(), h);
        if v < min_max {
            min_max = v;
            witness_max = planar_point(d, t);
        }
    }
    let i_f = argmin(&feasible).expect("non-empty");
    let min_f = feasible[i_f];
    let witness_f = data.set.points()[i_f].coords().to_vec();
    let (copositive, strict_ok) = if vacuous {
        (true, min_max > threshold)
    } else {
        (min_f >= -tol, min_f > threshold && min_max > threshold)
    };
    let witness = if strict && !strict_ok && min_f > threshold {
        witness_max
    } else {
        witness_f
    };
    CopositivityReport {
        copositive: if strict { strict_ok } else { copositive },
        strict: strict_ok,
        vacuous,
        min_f,
        min_max,
        threshold,
        witness,
        sample_count: data.len(),
        seed: data.set.sampling().seed,
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Outcome of the solvability-gap test on `U ∪ (-U)`.
#[derive(Debug, Clone, Serialize)]
pub struct ShsConditionReport {
    pub holds: bool,
    /// Longest uncovered arc of the symmetrized direction set.
    pub symmetrized_gap: f64,
    /// A unit `(a, b)` such that neither `(f, g) = (a, b)` nor `= (-a, -b)` is solvable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_direction: Option<(f64, f64)>,
    pub gap_threshold: f64,
}

fn gap_report(cov: &Coverage) -> ShsConditionReport {
    let sym = cov.symmetrized();
    let gaps = sym.real_gaps();
    let largest = gaps.iter().copied().max_by(|a, b| a.len.total_cmp(&b.len));
    ShsConditionReport {
        holds: largest.is_some(),
        symmetrized_gap: largest.map_or(0.0, |a| a.len),
        witness_direction: largest.map(|a| {
            let (s, c) = a.mid().sin_cos();
            (c, s)
        }),
        gap_threshold: sym.gap_threshold,
    }
}

/// Tests the SHS solvability condition for an even pair.
pub fn shs_condition(
    f: &GeneralizedPolynomial,
    g: &GeneralizedPolynomial,
    d: &Dilation,
    sampling: &Sampling,
) -> Result<ShsConditionReport> {
    common_degree(f, g, d)?;
    if combined_parity(f, g) != Parity::Even {
        return Err(Error::Argument(
            "the solvability condition needs two even functions".into(),
        ));
    }
    let data = PairSamples::new(f, g, d, sampling)?;
    Ok(gap_report(&data.coverage()))
}

/// Minimum of `f - xi g` over samples, polished along the planar curve when possible.
pub fn multiplier_margin(
    f: &GeneralizedPolynomial,
    g: &GeneralizedPolynomial,
    d: &Dilation,
    xi: f64,
    sampling: &Sampling,
) -> Result<(f64, Vec<f64>)> {
    common_degree(f, g, d)?;
    let data = PairSamples::new(f, g, d, sampling)?;
    Ok(polished_margin(f, g, d, &data, xi))
}

fn sampled_margin(data: &PairSamples, xi: f64) -> (f64, usize) {
    let mut best = (f64::INFINITY, 0);
    for (i, (a, b)) in data.f.iter().zip(&data.g).enumerate() {
        let v = a - xi * b;
        if v < best.0 {
            best = (v, i);
        }
    }
    best
}

fn polished_margin(
    f: &GeneralizedPolynomial,
    g: &GeneralizedPolynomial,
    d: &Dilation,
    data: &PairSamples,
    xi: f64,
) -> (f64, Vec<f64>) {
    let (m, i) = sampled_margin(data, xi);
    let mut witness = data.set.points()[i].coords().to_vec();
    let mut margin = m;
    if data.set.scheme() == SampleScheme::ThetaGrid {
        let h = |x: &[f64]| f.eval(x) - xi * g.eval(x);
        let (t, v) = polish_planar(d, data.param(i), data.set.resolution(), h);
        if v < margin {
            margin = v;
            witness = planar_point(d, t);
        }
    }
    (margin, witness)
}

/// `[max(0, max_{g<0} f/g), min_{g>0} f/g]` over the samples: the ξ for which
/// `f - xi g >= 0` at every sample.
fn xi_interval(data: &PairSamples) -> (f64, f64) {
    let gmax = max_abs(&data.g);
    let floor = NONSTRICT_REL * gmax;
    let mut lo: f64 = 0.0;
    let mut hi = f64::INFINITY;
    for (a, b) in data.f.iter().zip(&data.g) {
        if *b > floor {
            hi = hi.min(a / b);
        } else if *b < -floor {
            lo = lo.max(a / b);
        }
    }
    (lo, hi)
}

/// Maximises the concave function `xi -> min_j (f_j - xi g_j)` on `[a, b]`
/// by golden section in `log xi` when `log_scale`, else in `xi`.
fn golden_max(data: &PairSamples, a: f64, b: f64, log_scale: bool) -> (f64, f64) {
    let to = |x: f64| if log_scale { x.ln() } else { x };
    let from = |u: f64| if log_scale { u.exp() } else { u };
    let eval = |u: f64| sampled_margin(data, from(u)).0;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (to(a), to(b));
    let mut c = hi - inv_phi * (hi - lo);
    let mut e = lo + inv_phi * (hi - lo);
    let (mut fc, mut fe) = (eval(c), eval(e));
    for _ in 0..100 {
        if fc > fe {
            hi = e;
            e = c;
            fe = fc;
            c = hi - inv_phi * (hi - lo);
            fc = eval(c);
        } else {
            lo = c;
            c = e;
            fc = fe;
            e = lo + inv_phi * (hi - lo);
            fe = eval(e);
        }
    }
    if fc > fe {
        (from(c), fc)
    } else {
        (from(e), fe)
    }
}

/// Initial ξ from the sector geometry: the normal `(1, -xi)` must make an
/// acute angle with every direction in the sector `[alpha, alpha + phi]`.
fn geometric_xi(cov: &Coverage) -> Option<f64> {
    let comps = cov.components();
    let [sector] = comps[..] else { return None };
    if sector.len >= PI {
        return None;
    }
    let polar = ArcSet::from_arcs(
        [Arc {
            start: sector.end() - FRAC_PI_2,
            len: PI - sector.len,
        }],
        0.0,
    );
    let lower = ArcSet::from_arcs(
        [Arc {
            start: -FRAC_PI_2,
            len: FRAC_PI_2,
        }],
        0.0,
    );
    let both = polar.intersection(&lower);
    let best = both
        .arcs()
        .into_iter()
        .max_by(|a, b| a.len.total_cmp(&b.len))?;
    let xi = -best.mid().tan();
    (xi.is_finite() && xi > 0.0).then_some(xi)
}

/// Strict multiplier search: ξ > 0 with `f - xi g > 0` off the origin.
pub fn find_strict_multiplier(
    f: &GeneralizedPolynomial,
    g: &GeneralizedPolynomial,
    d: &Dilation,
    sampling: &Sampling,
) -> Result<MultiplierCertificate> {
    common_degree(f, g, d)?;
    if combined_parity(f, g) == Parity::Neither {
        return Err(Error::Argument(
            "f and g must both be even (or both odd)".into(),
        ));
    }
    let data = PairSamples::new(f, g, d, sampling)?;
    let scale = max_abs(&data.f).max(max_abs(&data.g));
    let zero_thr = POSITIVITY_REL * scale;
    let mut checks = Vec::new();

    let zm = zero_margin(f, g, d, zero_thr, sampling)?;
    checks.push(Check::new(
        "no_common_zero",
        zm.margin > zero_thr,
        zm.margin,
    ));
    if zm.margin <= zero_thr {
        return Err(MultiplierFailure::error(
            ReasonCode::CommonZero,
            format!("f and g vanish together (margin {:e})", zm.margin),
            Some(zm.witness),
        ));
    }

    let cop = copositivity(f, g, d, &data, true);
    checks.push(Check::new("strictly_copositive", cop.strict, cop.min_max));
    if !cop.strict {
        return Err(MultiplierFailure::error(
            ReasonCode::NotCopositive,
            format!(
                "f is not strictly copositive with g (min {:e})",
                cop.min_f.min(cop.min_max)
            ),
            Some(cop.witness),
        ));
    }

    let cov = data.coverage();
    let gap = gap_report(&cov);
    checks.push(Check::new(
        "symmetrized_gap",
        gap.holds,
        gap.symmetrized_gap,
    ));
    if !gap.holds {
        return Err(MultiplierFailure::error(
            ReasonCode::SectorGePi,
            "the image covers a sector of angle >= pi",
            None,
        ));
    }

    let (lo, hi) = xi_interval(&data);
    let initial_xi = geometric_xi(&cov).unwrap_or(1.0);
    let initial_margin = sampled_margin(&data, initial_xi).0;
    let mut best = (initial_xi, initial_margin);
    let per_decade = 40;
    let decades = (XI_MAX / XI_MIN).log10().round() as i32;
    let mut grid_best = (XI_MIN, f64::NEG_INFINITY);
    for j in 0..=decades * per_decade {
        let xi = XI_MIN * 10f64.powf(j as f64 / per_decade as f64);
        let m = sampled_margin(&data, xi).0;
        if m > grid_best.1 {
            grid_best = (xi, m);
        }
    }
    if grid_best.1 > best.1 {
        best = grid_best;
    }
    let step = 10f64.powf(1.0 / per_decade as f64);
    let golden = golden_max(
        &data,
        (grid_best.0 / step).max(XI_MIN),
        (grid_best.0 * step).min(XI_MAX),
        true,
    );
    if golden.1 > best.1 {
        best = golden;
    }
    let (xi, search_margin) = best;
    let gmax = max_abs(&data.g);
    let threshold = POSITIVITY_REL * (max_abs(&data.f) + xi * gmax);
    checks.push(Check::new(
        "search_margin",
        search_margin > threshold,
        search_margin,
    ));
    if search_margin <= threshold {
        return Err(MultiplierFailure::error(
            ReasonCode::VerificationFailed,
            format!("no xi in [{XI_MIN:e}, {XI_MAX:e}] gives a positive margin"),
            None,
        ));
    }

    let fresh = sampling.fresh();
    let vdata = PairSamples::new(f, g, d, &fresh)?;
    let (margin, witness) = polished_margin(f, g, d, &vdata, xi);
    let vthreshold = POSITIVITY_REL * (max_abs(&vdata.f) + xi * max_abs(&vdata.g));
    let threshold = threshold.max(vthreshold);
    checks.push(Check::new("fresh_margin", margin > threshold, margin));
    if margin <= threshold {
        return Err(MultiplierFailure::error(
            ReasonCode::VerificationFailed,
            format!("margin {margin:e} at xi = {xi} on fresh samples"),
            Some(witness),
        ));
    }
    Ok(MultiplierCertificate {
        xi,
        strict: true,
        margin,
        search_margin,
        initial_xi,
        initial_margin,
        xi_interval: (lo, hi),
        threshold,
        sample_count: data.len(),
        seed: sampling.seed,
        verify_sample_count: vdata.len(),
        verify_seed: fresh.seed,
        dilation: d.clone(),
        checks,
    })
}

/// Non-strict multiplier search for homogeneous polynomials of equal degree
/// `k >= 1`: ξ >= 0 with `f - xi g >= 0` everywhere.
pub fn find_nonstrict_multiplier(
    f: &GeneralizedPolynomial,
    g: &GeneralizedPolynomial,
    sampling: &Sampling,
) -> Result<MultiplierCertificate> {
    if f.dim() != g.dim() {
        return Err(Error::Dimension {
            expected: f.dim(),
            got: g.dim(),
        });
    }
    if !f.is_ordinary() || !g.is_ordinary() {
        return Err(Error::Argument(
            "the non-strict search needs ordinary polynomials".into(),
        ));
    }
    let d = Dilation::trivial(f.dim());
    let k = common_degree(f, g, &d)?;
    if k < 1.0 - 1e-12 {
        return Err(Error::Argument(format!("degree {k} is below 1")));
    }
    let mut checks = Vec::new();
    let data = PairSamples::new(f, g, &d, sampling)?;
    let scale = max_abs(&data.f).max(max_abs(&data.g));
    let zero_thr = POSITIVITY_REL * scale;

    let zm = zero_margin(f, g, &d, zero_thr, sampling)?;
    let certified = zm.margin > zero_thr && (zm.refined || f.dim() > 2);
    checks.push(Check::new("no_common_zero", certified, zm.margin));
    if !certified {
        return Err(common_zero_failure(&zm, zero_thr));
    }

    let cop = copositivity(f, g, &d, &data, false);
    checks.push(Check::new("copositive", cop.copositive, cop.min_f));
    if !cop.copositive {
        return Err(MultiplierFailure::error(
            ReasonCode::NotCopositive,
            format!("f < 0 where g >= 0 (min {:e})", cop.min_f),
            Some(cop.witness),
        ));
    }

    let cov = data.coverage();
    let lines = cov.line_count(1e-9);
    checks.push(Check::new(
        "at_most_one_line",
        lines <= 1,
        lines.min(1 << 20) as f64,
    ));
    if lines > 1 {
        return Err(MultiplierFailure::error(
            ReasonCode::MultipleLines,
            "the image contains more than one line through the origin",
            None,
        ));
    }

    let (lo, hi) = xi_interval(&data);
    if lo > hi * (1.0 + 1e-9) + 1e-12 {
        return Err(MultiplierFailure::error(
            ReasonCode::VerificationFailed,
            format!("sampled constraints leave no xi: [{lo}, {hi}]"),
            None,
        ));
    }
    let top = hi.min(XI_MAX).max(lo);
    let initial_xi = lo;
    let initial_margin = sampled_margin(&data, lo).0;
    let mut best = (initial_xi, initial_margin);
    if top > lo {
        let golden = golden_max(&data, lo, top, false);
        if golden.1 > best.1 {
            best = golden;
        }
        let end = (top, sampled_margin(&data, top).0);
        if end.1 > best.1 {
            best = end;
        }
    }
    let (xi, search_margin) = best;
    let fresh = sampling.fresh();
    let vdata = PairSamples::new(f, g, &d, &fresh)?;
    let (margin, witness) = polished_margin(f, g, &d, &vdata, xi);
    let tol = NONSTRICT_REL * (max_abs(&vdata.f) + xi * max_abs(&vdata.g));
    checks.push(Check::new("fresh_margin", margin >= -tol, margin));
    if margin < -tol {
        return Err(MultiplierFailure::error(
            ReasonCode::VerificationFailed,
            format!("margin {margin:e} at xi = {xi} on fresh samples"),
            Some(witness),
        ));
    }
    Ok(MultiplierCertificate {
        xi,
        strict: false,
        margin,
        search_margin,
        initial_xi,
        initial_margin,
        xi_interval: (lo, hi),
        threshold: -tol,
        sample_count: data.len(),
        seed: sampling.seed,
        verify_sample_count: vdata.len(),
        verify_seed: fresh.seed,
        dilation: d,
        checks,
    })
}

fn common_zero_failure(zm: &ZeroMargin, thr: f64) -> Error {
    let detail = if zm.margin <= thr {
        format!("f and g vanish together (margin {:e})", zm.margin)
    } else {
        format!(
            "could not certify the absence of common zeros (margin {:e})",
            zm.margin
        )
    };
    MultiplierFailure::error(ReasonCode::CommonZero, detail, Some(zm.witness.clone()))
}

/// Non-homogeneous search: homogenize both polynomials to degree `k`, check
/// the top-form and direction hypotheses, run the non-strict search on the
/// homogenized pair and re-verify `f - xi g >= 0` on a box.
pub fn find_nhs_multiplier(
    f: &CoeffVecPolynomial,
    g: &CoeffVecPolynomial,
    sampling: &Sampling,
) -> Result<MultiplierCertificate> {
    if f.dim() != g.dim() {
        return Err(Error::Dimension {
            expected: f.dim(),
            got: g.dim(),
        });
    }
    let n = f.dim();
    let k = f.degree().max(g.degree());
    if k == 0 {
        return Err(Error::Argument("degree must be at least 1".into()));
    }
    let fp = f.to_generalized();
    let gp = g.to_generalized();
    let ft = homogenize(&fp, k as u32)?;
    let gt = homogenize(&gp, k as u32)?;
    let fk = top_form(f, k);
    let gk = top_form(g, k);
    let mut checks = Vec::new();
    let dn = Dilation::trivial(n);
    let top_sampling = if n <= 2 {
        Sampling::new(sampling.count, sampling.seed)
    } else {
        Sampling::default_for(n)
    };

    if fk.is_zero() && gk.is_zero() {
        return Err(Error::Degenerate("both top forms vanish".into()));
    }
    let top = PairSamples::new(&fk, &gk, &dn, &top_sampling)?;
    let thr = POSITIVITY_REL * max_abs(&top.f).max(max_abs(&top.g));
    let zm = if fk.is_zero() || gk.is_zero() {
        let nonzero = if fk.is_zero() { &top.g } else { &top.f };
        let m = nonzero.iter().fold(f64::INFINITY, |a, b| a.min(b.abs()));
        ZeroMargin {
            margin: m,
            refined: n <= 1,
            witness: top.set.points()[0].coords().to_vec(),
            threshold: thr,
            cells: 0,
            depth: 0,
            sample_count: top.len(),
            seed: top_sampling.seed,
        }
    } else {
        zero_margin(&fk, &gk, &dn, thr, &top_sampling)?
    };
    checks.push(Check::new(
        "top_form_no_common_zero",
        zm.margin > thr,
        zm.margin,
    ));
    if zm.margin <= thr {
        let mut e = common_zero_failure(&zm, thr);
        if let Error::NoMultiplier(m) = &mut e {
            m.detail = format!("top forms: {}", m.detail);
        }
        return Err(e);
    }
    let cop = copositivity(&fk, &gk, &dn, &top, false);
    checks.push(Check::new("top_form_copositive", cop.copositive, cop.min_f));
    if !cop.copositive {
        return Err(MultiplierFailure::error(
            ReasonCode::NotCopositive,
            format!("top forms are not copositive (min {:e})", cop.min_f),
            Some(cop.witness),
        ));
    }

    let dt = Dilation::trivial(n + 1);
    let hom_sampling = Sampling::default_for(n + 1);
    let hom_sampling = Sampling {
        seed: sampling.seed,
        ..hom_sampling
    };
    if k.is_multiple_of(2) {
        let hom = PairSamples::new(&ft, &gt, &dt, &hom_sampling)?;
        let dirs = hom.directions();
        let affine_dirs = hom
            .set
            .points()
            .iter()
            .zip(&dirs)
            .filter(|(p, _)| p.coords()[n] > 0.0)
            .filter_map(|(_, a)| *a);
        let affine = Coverage::from_directions(affine_dirs, hom.coverage().gap_threshold);
        let top_cov = top.coverage();
        let tol = 1e-6;
        let items = [
            (
                ReasonCode::NhsItem1,
                "top-form image contains a line",
                top_cov.antipodal_collision(&top_cov, tol),
            ),
            (
                ReasonCode::NhsItem2,
                "image contains opposite directions",
                affine.antipodal_collision(&affine, tol),
            ),
            (
                ReasonCode::NhsItem3,
                "image opposes a top-form direction",
                affine.antipodal_collision(&top_cov, tol),
            ),
            (
                ReasonCode::NhsItem4,
                "top-form image opposes an image direction",
                top_cov.antipodal_collision(&affine, tol),
            ),
        ];
        for (code, what, hit) in items {
            let name = format!("item_{}", &code.as_str()[9..]);
            checks.push(Check::new(&name, hit.is_none(), hit.unwrap_or(f64::NAN)));
            if let Some(angle) = hit {
                return Err(MultiplierFailure::error(
                    code,
                    format!("{what} at angle {angle:.6}"),
                    Some(vec![angle.cos(), angle.sin()]),
                ));
            }
        }
    }

    let mut cert = find_nonstrict_multiplier(&ft, &gt, &hom_sampling)?;
    let xi = cert.xi;
    let (worst, at) = box_margin(&fp, &gp, xi, n, sampling.seed);
    let scale = box_scale(&fp, &gp, xi, n);
    let ok = worst >= -NONSTRICT_REL * scale;
    checks.append(&mut cert.checks);
    checks.push(Check::new("box_margin", ok, worst));
    if !ok {
        return Err(MultiplierFailure::error(
            ReasonCode::VerificationFailed,
            format!("f - xi g = {worst:e} on the box at xi = {xi}"),
            Some(at),
        ));
    }
    cert.checks = checks;
    Ok(cert)
}

fn top_form(p: &CoeffVecPolynomial, k: usize) -> GeneralizedPolynomial {
    if p.degree() == k {
        p.top_form()
    } else {
        GeneralizedPolynomial::zero(p.dim())
    }
}

fn box_points(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let per_axis = match n {
        1 => 4001usize,
        2 => 201,
        3 => 41,
        _ => 0,
    };
    let mut pts = Vec::new();
    if per_axis > 0 {
        let total = per_axis.pow(n as u32);
        for idx in 0..total {
            let mut rem = idx;
            let x = (0..n)
                .map(|_| {
                    let j = rem % per_axis;
                    rem /= per_axis;
                    -BOX_RADIUS + 2.0 * BOX_RADIUS * j as f64 / (per_axis - 1) as f64
                })
                .collect();
            pts.push(x);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xB0C5);
    for _ in 0..20_000 {
        pts.push(
            (0..n)
                .map(|_| rng.random_range(-BOX_RADIUS..=BOX_RADIUS))
                .collect(),
        );
    }
    pts
}

fn box_margin(
    f: &GeneralizedPolynomial,
    g: &GeneralizedPolynomial,
    xi: f64,
    n: usize,
    seed: u64,
) -> (f64, Vec<f64>) {
    let mut worst = (f64::INFINITY, vec![0.0; n]);
    for x in box_points(n, seed) {
        let v = f.eval(&x) - xi * g.eval(&x);
        if v < worst.0 {
            worst = (v, x);
        }
    }
    worst
}

fn box_scale(f: &GeneralizedPolynomial, g: &GeneralizedPolynomial, xi: f64, n: usize) -> f64 {
    let corner = vec![BOX_RADIUS; n];
    let abs_sum =
        |p: &GeneralizedPolynomial| p.terms().iter().map(|t| t.eval(&corner).abs()).sum::<f64>();
    abs_sum(f) + xi * abs_sum(g)
}
