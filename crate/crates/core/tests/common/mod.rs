//! Property checks shared by the proptest suite and the acceptance runner.
//! Each check draws its inputs from a seeded generator so failures replay.
#![allow(dead_code, clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::TAU;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slemma::cli::Problem;
use slemma::homog::{project_to_sphere, Exponent, Sampling};
use slemma::image::{convexity_probe, zero_margin};
use slemma::lemma::find_strict_multiplier;
use slemma::stp::{homogenize, stp};
use slemma::switched::{simulate_min_switching, LfhdCandidate};
use slemma::{Dilation, GeneralizedPolynomial, Parity, SignedMonomial};

pub type Check = Result<(), String>;

pub fn problem_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples/problems")
        .join(name)
}

pub fn problem(name: &str) -> Problem {
    Problem::from_path(&problem_path(name)).expect("bundled problem file parses")
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coeff(r: &mut ChaCha8Rng) -> f64 {
    let c: f64 = r.random_range(0.2..2.0);
    if r.random_bool(0.5) {
        -c
    } else {
        c
    }
}

/// A homogeneous function for a random dilation: its degree `k`, built from
/// terms whose last power is fractional when the weights require it.
pub fn random_homogeneous(seed: u64) -> (GeneralizedPolynomial, Dilation, f64) {
    let mut r = rng(seed);
    let n = r.random_range(1..=3);
    let mut weights: Vec<i64> = (0..n).map(|_| r.random_range(1..=3)).collect();
    weights[n - 1] = if r.random_bool(0.5) { 1 } else { 3 };
    let l = [1.0, 2.0, 4.0][r.random_range(0..3)];
    let k: i64 = weights.iter().product::<i64>() * r.random_range(1..=2);
    let terms = (0..r.random_range(1..=4))
        .map(|_| {
            let mut budget = k;
            let mut powers = Vec::with_capacity(n);
            for &w in &weights[..n - 1] {
                let p = r.random_range(0..=budget / w);
                budget -= p * w;
                powers.push(Exponent::from_integer(p));
            }
            powers.push(Exponent::new(budget, weights[n - 1]));
            let signs = powers
                .iter()
                .map(|p| *p > Exponent::from_integer(0) && r.random_bool(0.5))
                .collect();
            SignedMonomial::new(coeff(&mut r), powers, signs).unwrap()
        })
        .collect();
    let p = GeneralizedPolynomial::from_terms(n, terms).unwrap();
    let d = Dilation::new(weights.iter().map(|&w| w as f64).collect(), l).unwrap();
    (p, d, k as f64)
}

/// `|f(e^r x) - e^k f(x)| <= 1e-9 (1 + |e^k f(x)|)` for 100 random `(e, x)`.
pub fn homogeneity_identity(seed: u64) -> Check {
    let (p, d, k) = random_homogeneous(seed);
    if p.is_zero() {
        return Ok(());
    }
    let got = p.homogeneity_degree(&d).map_err(|e| e.to_string())?;
    if (got - k).abs() > 1e-12 {
        return Err(format!("degree {got}, expected {k} for {p}"));
    }
    let mut r = rng(seed ^ 0xA5A5);
    for _ in 0..100 {
        let eps: f64 = 10.0 * (1.0 - r.random::<f64>());
        let x: Vec<f64> = (0..p.dim()).map(|_| r.random_range(-1.0..=1.0)).collect();
        let lhs = p.eval(&d.scale(eps, &x));
        let rhs = eps.powf(k) * p.eval(&x);
        if (lhs - rhs).abs() > 1e-9 * (1.0 + rhs.abs()) {
            return Err(format!(
                "{p}: f(e^r x) = {lhs}, e^k f(x) = {rhs} at e = {eps}, x = {x:?}"
            ));
        }
    }
    Ok(())
}

/// Degree `k` for weights `r` becomes `k / min r` for `r / min r`.
pub fn degree_rescaling(seed: u64) -> Check {
    let (p, d, k) = random_homogeneous(seed);
    if p.is_zero() {
        return Ok(());
    }
    let (unit, r) = d.normalized();
    let got = p.homogeneity_degree(&unit).map_err(|e| e.to_string())?;
    if (got - k / r).abs() > 1e-9 {
        return Err(format!(
            "degree {got} for normalized weights, expected {}",
            k / r
        ));
    }
    Ok(())
}

fn random_poly(
    r: &mut ChaCha8Rng,
    n: usize,
    max_deg: u32,
    fractional: bool,
) -> GeneralizedPolynomial {
    let terms = (0..r.random_range(1..=4))
        .map(|_| {
            if fractional && r.random_bool(0.3) {
                let ex: Vec<(i64, i64)> = (0..n)
                    .map(|_| (r.random_range(0..=6), [1, 3, 5][r.random_range(0..3)]))
                    .collect();
                SignedMonomial::rational(coeff(r), &ex).unwrap()
            } else {
                let ex: Vec<u32> = (0..n).map(|_| r.random_range(0..=max_deg)).collect();
                SignedMonomial::integer(coeff(r), &ex)
            }
        })
        .collect();
    GeneralizedPolynomial::from_terms(n, terms).unwrap()
}

/// Structural parity agrees with comparing `f(-x)` and `f(x)` on random points.
pub fn parity_classification(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.random_range(1..=3);
    let p = random_poly(&mut r, n, 4, true);
    let mut even_everywhere = true;
    let mut odd_everywhere = true;
    for _ in 0..20 {
        let x: Vec<f64> = (0..n).map(|_| r.random_range(-1.5..=1.5)).collect();
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let (a, b) = (p.eval(&x), p.eval(&neg));
        let tol = 1e-9 * (1.0 + a.abs() + b.abs());
        even_everywhere &= (a - b).abs() <= tol;
        odd_everywhere &= (a + b).abs() <= tol;
    }
    let ok = match p.parity() {
        Parity::Even => even_everywhere,
        Parity::Odd => odd_everywhere,
        Parity::Neither => !even_everywhere && !odd_everywhere,
    };
    if p.is_zero() || ok {
        Ok(())
    } else {
        Err(format!(
            "{p}: parity {:?}, even {even_everywhere}, odd {odd_everywhere}",
            p.parity()
        ))
    }
}

/// Projection lands on the sphere, is idempotent and constant along dilation rays.
pub fn projection_invariance(seed: u64) -> Check {
    let (_, d, _) = random_homogeneous(seed);
    let mut r = rng(seed ^ 0x5A5A);
    let x: Vec<f64> = (0..d.dim()).map(|_| r.random_range(-3.0..=3.0)).collect();
    if x.iter().all(|v| v.abs() < 1e-3) {
        return Ok(());
    }
    let p = project_to_sphere(&x, &d).map_err(|e| e.to_string())?;
    if !p.on_sphere(&d) {
        return Err(format!("{:?} is off the sphere", p.coords()));
    }
    let again = project_to_sphere(p.coords(), &d).map_err(|e| e.to_string())?;
    let eps: f64 = r.random_range(0.05..20.0);
    let ray = project_to_sphere(&d.scale(eps, &x), &d).map_err(|e| e.to_string())?;
    for i in 0..d.dim() {
        if (again.coords()[i] - p.coords()[i]).abs() > 1e-12
            || (ray.coords()[i] - p.coords()[i]).abs() > 1e-9
        {
            return Err(format!(
                "projection of {x:?} not invariant: {:?} {:?} {:?}",
                p.coords(),
                again.coords(),
                ray.coords()
            ));
        }
    }
    Ok(())
}

/// `(u x v) x w == u x (v x w)`.
pub fn stp_associativity(seed: u64) -> Check {
    let mut r = rng(seed);
    let vec = |r: &mut ChaCha8Rng| -> Vec<f64> {
        (0..r.random_range(1..=4))
            .map(|_| r.random_range(-2.0..=2.0))
            .collect()
    };
    let (u, v, w) = (vec(&mut r), vec(&mut r), vec(&mut r));
    let left = stp(&stp(&u, &v), &w);
    let right = stp(&u, &stp(&v, &w));
    if left.len() != right.len() || left.iter().zip(&right).any(|(a, b)| (a - b).abs() > 1e-12) {
        return Err(format!("stp not associative for {u:?} {v:?} {w:?}"));
    }
    Ok(())
}

/// The homogenized polynomial is homogeneous of degree `k` and agrees with
/// the original at `t = 1`.
pub fn homogenize_round_trip(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.random_range(1..=3);
    let p = random_poly(&mut r, n, 2, false);
    let deg = p.total_degree().to_integer() as u32;
    let k = deg.max(1) + r.random_range(0..=2);
    let h = homogenize(&p, k).map_err(|e| e.to_string())?;
    if !h.is_zero() {
        let got = h
            .homogeneity_degree(&Dilation::trivial(n + 1))
            .map_err(|e| e.to_string())?;
        if (got - k as f64).abs() > 1e-12 {
            return Err(format!("homogenized degree {got}, expected {k}"));
        }
    }
    for _ in 0..20 {
        let x: Vec<f64> = (0..n).map(|_| r.random_range(-2.0..=2.0)).collect();
        let want = p.eval(&x);
        let lifted: Vec<f64> = x.iter().copied().chain([1.0]).collect();
        let got = h.eval(&lifted);
        let scale: f64 = p.terms().iter().map(|t| t.eval(&x).abs()).sum();
        if (got - want).abs() > 1e-12 * (1.0 + scale) {
            return Err(format!("{p} -> {h}: {want} vs {got}"));
        }
    }
    Ok(())
}

fn quadratic_form(c: [f64; 3]) -> GeneralizedPolynomial {
    GeneralizedPolynomial::from_integer_terms(
        2,
        &[(c[0], &[2, 0]), (2.0 * c[1], &[1, 1]), (c[2], &[0, 2])],
    )
    .unwrap()
}

/// Two random binary quadratic forms: `Ok(true)` when the pair has no common
/// zero and no midpoint of the joint image leaves it, `Ok(false)` when the
/// pair was skipped for having a (near) common zero.
pub fn dines_convexity(seed: u64) -> Result<bool, String> {
    let mut r = rng(seed);
    let mut draw = || [0; 3].map(|_| r.random_range(-1.0..=1.0));
    let (f, g) = (quadratic_form(draw()), quadratic_form(draw()));
    let d = Dilation::trivial(2);
    let s = Sampling::default_for(2);
    let zm = zero_margin(&f, &g, &d, 1e-3, &s).map_err(|e| e.to_string())?;
    if zm.margin <= 1e-3 {
        return Ok(false);
    }
    let v = convexity_probe(&f, &g, &d, 200, &s).map_err(|e| e.to_string())?;
    match v.first() {
        None => Ok(true),
        Some(w) => Err(format!(
            "f = {f}, g = {g}: midpoint {:?} outside (clearance {})",
            w.midpoint, w.clearance
        )),
    }
}

fn random_quartic(r: &mut ChaCha8Rng, amp: f64) -> GeneralizedPolynomial {
    let terms: Vec<(f64, &[u32])> = vec![
        (r.random_range(-amp..=amp), &[4, 0]),
        (r.random_range(-amp..=amp), &[3, 1]),
        (r.random_range(-amp..=amp), &[2, 2]),
        (r.random_range(-amp..=amp), &[1, 3]),
        (r.random_range(-amp..=amp), &[0, 4]),
    ];
    GeneralizedPolynomial::from_integer_terms(2, &terms).unwrap()
}

/// For `f = xi0 g + P` with `P > 0` the strict search must succeed, and its ξ
/// must keep `f - xi g > 0` on 5000 fresh random directions.
pub fn certificate_soundness(seed: u64) -> Check {
    let mut r = rng(seed);
    let g = random_quartic(&mut r, 1.0);
    let xi0: f64 = r.random_range(0.2..5.0);
    let norm4 = GeneralizedPolynomial::from_integer_terms(
        2,
        &[(1.0, &[4, 0]), (2.0, &[2, 2]), (1.0, &[0, 4])],
    )
    .unwrap();
    let pos = &norm4 + &random_quartic(&mut r, 0.05);
    let f = &(&g * xi0) + &pos;
    let d = Dilation::trivial(2);
    let cert = find_strict_multiplier(&f, &g, &d, &Sampling::default_for(2))
        .map_err(|e| format!("no certificate for f = {f}, g = {g} (xi0 = {xi0}): {e}"))?;
    let mut fresh = rng(seed.wrapping_mul(0x9E37_79B9).wrapping_add(1));
    for _ in 0..5000 {
        let t: f64 = fresh.random_range(0.0..TAU);
        let x = [t.cos(), t.sin()];
        let v = f.eval(&x) - cert.xi * g.eval(&x);
        if !(v > 0.0) {
            return Err(format!("f - {} g = {v} at {x:?}", cert.xi));
        }
    }
    Ok(())
}

/// Min-switching on the two cubic sub-systems, deciding at every step: no
/// step raises `V` by more than `10 dt^2` times the local derivative scale,
/// and `V` ends below its start.
pub fn simulation_descent(seed: u64) -> Check {
    let p = problem("thm7.json");
    let sys = &p.system(None).unwrap().system;
    let cand = LfhdCandidate::new(p.lyapunov(None).unwrap().v.clone(), sys, &p.dilation).unwrap();
    let mut r = rng(seed);
    let x0 = loop {
        let x: [f64; 2] = [r.random_range(-2.0..=2.0), r.random_range(-2.0..=2.0)];
        if x[0].hypot(x[1]) > 0.1 {
            break x;
        }
    };
    let dt = 1e-3;
    let tr = simulate_min_switching(sys, &cand, &x0, dt, 2.0, dt).map_err(|e| e.to_string())?;
    for w in tr.rows.windows(2) {
        let local: f64 = cand
            .derivatives()
            .iter()
            .map(|dv| dv.eval(&w[0].x).abs())
            .fold(0.0, f64::max);
        if w[1].v > w[0].v + 10.0 * dt * dt * local {
            return Err(format!(
                "x0 = {x0:?}: V grew from {} to {} after t = {}",
                w[0].v, w[1].v, w[0].t
            ));
        }
    }
    if !(tr.last().v < tr.rows[0].v) {
        return Err(format!("x0 = {x0:?}: V did not decrease"));
    }
    Ok(())
}
