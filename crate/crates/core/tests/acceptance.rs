//! Acceptance suite: one pass/fail line per criterion, non-zero exit on failure.
mod common;

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use sha2::{Digest, Sha256};
use slemma::cli::Problem;
use slemma::homog::Sampling;
use slemma::image::{convexity_probe, sample_image, wrap};
use slemma::lemma::{
    find_nonstrict_multiplier, find_strict_multiplier, is_copositive, multiplier_margin, ReasonCode,
};
use slemma::switched::{
    check_lfhd, linear_combination_eigencheck, scan_combinations, synthesize_combination_n2,
    LfhdCandidate,
};
use slemma::{Error, GeneralizedPolynomial};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);
type SeededCheck = (&'static str, fn(u64) -> common::Check, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, secs: f64) -> Result<f64, String> {
    let t = start.elapsed().as_secs_f64();
    ensure(t < secs, || format!("took {t:.2} s, budget {secs} s"))?;
    Ok(t)
}

fn pair(
    p: &Problem,
    name: Option<&str>,
    f: Option<&str>,
    g: Option<&str>,
) -> (GeneralizedPolynomial, GeneralizedPolynomial) {
    let pr = p.pair(name, f, g).expect("pair resolves");
    (pr.f.generalized(), pr.g.generalized())
}

fn candidate(p: &Problem) -> LfhdCandidate {
    LfhdCandidate::new(
        p.lyapunov(None).unwrap().v.clone(),
        &p.system(None).unwrap().system,
        &p.dilation,
    )
    .expect("candidate builds")
}

fn strict_multiplier() -> Outcome {
    let start = Instant::now();
    let p = common::problem("thm7.json");
    let (f, g) = pair(&p, None, None, None);
    let s = Sampling::new(4096, slemma::homog::DEFAULT_SEED);
    let cert = find_strict_multiplier(&f, &g, &p.dilation, &s).map_err(|e| e.to_string())?;
    // f - 2g = 3 (x1^6 + x2^6); brute-force its minimum on the unit circle
    let steps = 1_000_000;
    let min6 = (0..steps)
        .map(|i| {
            let t = i as f64 / steps as f64 * 2.0 * PI;
            t.cos().powi(6) + t.sin().powi(6)
        })
        .fold(f64::INFINITY, f64::min);
    let expected = 3.0 * min6;
    let (m2, _) =
        multiplier_margin(&f, &g, &p.dilation, 2.0, &s.fresh()).map_err(|e| e.to_string())?;
    ensure((m2 - expected).abs() <= 1e-6, || {
        format!("margin at xi=2 is {m2}, expected {expected}")
    })?;
    ensure(cert.margin >= expected - 1e-12, || {
        format!("search margin {} < {expected}", cert.margin)
    })?;
    let t = within_budget(start, 5.0)?;
    Ok(format!(
        "margin(xi=2) = {m2:.9} (brute force {expected:.9}); xi = {:.4} gives {:.4}; {t:.2} s",
        cert.xi, cert.margin
    ))
}

fn interval_check(
    file: &str,
    step: f64,
    need: (f64, f64),
    budget: f64,
    check_lfhd_first: bool,
) -> Outcome {
    let start = Instant::now();
    let p = common::problem(file);
    let sys = &p.system(None).unwrap().system;
    let cand = candidate(&p);
    let s = Sampling::default_for(2);
    if check_lfhd_first {
        let rep = check_lfhd(sys, &cand, &s).map_err(|e| e.to_string())?;
        ensure(rep.covered, || {
            format!("LFHD check failed, worst {}", rep.worst)
        })?;
    }
    let scan = scan_combinations(sys, &cand, step, &s).map_err(|e| e.to_string())?;
    let (lo, hi) = scan.interval.ok_or("no feasible combination")?;
    ensure(lo <= need.0 && hi >= need.1, || {
        format!("feasible [{lo}, {hi}] misses [{}, {}]", need.0, need.1)
    })?;
    let syn = synthesize_combination_n2(sys, &cand, &s).map_err(|e| e.to_string())?;
    let l1 = syn.combination.lambdas()[0];
    ensure(lo <= l1 && l1 <= hi, || {
        format!("synthesized lambda_1 = {l1} outside [{lo}, {hi}]")
    })?;
    let t = within_budget(start, budget)?;
    Ok(format!(
        "feasible lambda_1 in [{lo}, {hi}], synthesized {l1:.4}; {t:.2} s"
    ))
}

fn three_subsystems() -> Outcome {
    let start = Instant::now();
    let p = common::problem("thm8.json");
    let def = p.system(None).unwrap();
    let cand = candidate(&p);
    let s = Sampling::default_for(2);
    let rep = check_lfhd(&def.system, &cand, &s).map_err(|e| e.to_string())?;
    ensure(rep.covered, || "LFHD check failed".into())?;
    let scan = scan_combinations(&def.system, &cand, 0.01, &s).map_err(|e| e.to_string())?;
    ensure(scan.feasible.is_empty(), || {
        format!("{} feasible combinations", scan.feasible.len())
    })?;
    let r3 = 3f64.sqrt();
    let den = 2.0 * r3 + 2.0;
    let star = slemma::switched::ConvexCombination::new(vec![
        2.0 * r3 / den,
        1.0 / den,
        1.0 - (2.0 * r3 + 1.0) / den,
    ])
    .map_err(|e| e.to_string())?;
    let eye = nalgebra::DMatrix::identity(2, 2);
    let eig = linear_combination_eigencheck(def.matrices.as_ref().unwrap(), &star, &eye)
        .map_err(|e| e.to_string())?;
    ensure(eig.abs() <= 1e-9, || format!("max eigenvalue {eig}"))?;
    let t = within_budget(start, 5.0)?;
    Ok(format!(
        "covered; 0 of {} combinations stable; max eig at lambda* = {eig:e}; {t:.2} s",
        scan.grid_points
    ))
}

fn sector_angles() -> Outcome {
    let p = common::problem("exam1.json");
    let s = Sampling::new(4096, slemma::homog::DEFAULT_SEED);
    let phi = |p: &Problem,
               name: Option<&str>,
               f: Option<&str>,
               g: Option<&str>|
     -> Result<f64, String> {
        let (f, g) = pair(p, name, f, g);
        Ok(sample_image(&f, &g, &p.dilation, &s)
            .map_err(|e| e.to_string())?
            .phi)
    };
    let p1 = phi(&p, Some("pair1"), None, None)?;
    let p2 = phi(&p, Some("pair2"), None, None)?;
    let p3 = phi(&p, Some("pair3"), None, None)?;
    let p4 = phi(&p, Some("pair4"), None, None)?;
    let t7 = common::problem("thm7.json");
    let p7 = phi(&t7, None, Some("dv1"), Some("dv2"))?;
    ensure((p1 - PI).abs() <= 0.05, || format!("pair 1: phi = {p1}"))?;
    ensure(PI < p2 && p2 < 1.5 * PI, || format!("pair 2: phi = {p2}"))?;
    ensure(1.5 * PI < p3 && p3 < 2.0 * PI, || {
        format!("pair 3: phi = {p3}")
    })?;
    ensure((p4 - 2.0 * PI).abs() <= 1e-12, || {
        format!("pair 4: phi = {p4}")
    })?;
    ensure(p7 < PI, || format!("derivative pair: phi = {p7}"))?;
    Ok(format!(
        "phi/pi = {:.4}, {:.4}, {:.4}, {:.4}; derivative pair {:.4}",
        p1 / PI,
        p2 / PI,
        p3 / PI,
        p4 / PI,
        p7 / PI
    ))
}

fn negative_case() -> Outcome {
    let p = common::problem("exam3.json");
    let (f, g) = pair(&p, None, None, None);
    let d = &p.dilation;
    let s = Sampling::default_for(2);
    let weak = is_copositive(&f, &g, d, false, &s).map_err(|e| e.to_string())?;
    let strict = is_copositive(&f, &g, d, true, &s).map_err(|e| e.to_string())?;
    ensure(weak.copositive && !strict.copositive, || {
        format!(
            "copositive {}, strictly {}",
            weak.copositive, strict.copositive
        )
    })?;
    let reason =
        |r: slemma::Result<slemma::lemma::MultiplierCertificate>| -> Result<ReasonCode, String> {
            match r {
                Err(Error::NoMultiplier(f))
                    if matches!(f.reason, ReasonCode::CommonZero | ReasonCode::SectorGePi) =>
                {
                    Ok(f.reason)
                }
                Err(e) => Err(format!("unexpected failure {e}")),
                Ok(c) => Err(format!("unexpected multiplier {}", c.xi)),
            }
        };
    let r1 = reason(find_strict_multiplier(&f, &g, d, &s))?;
    let r2 = reason(find_nonstrict_multiplier(&f, &g, &s))?;
    let img = sample_image(&f, &g, d, &s).map_err(|e| e.to_string())?;
    let targets = [0.5f64.atan(), (7.0f64 / 6.0).atan()];
    let mod_pi = |a: f64| wrap(2.0 * a) / 2.0;
    let mut worst: f64 = 0.0;
    ensure(!img.boundaries.is_empty(), || {
        "no boundary directions".into()
    })?;
    for (a, b) in &img.boundaries {
        for (angle, target) in [(*a, targets[0]), (*b, targets[1])] {
            worst = worst.max(mod_pi(angle - target).abs());
        }
    }
    ensure(worst <= 0.02, || {
        format!("boundary directions {:?} off by {worst}", img.boundaries)
    })?;
    let v = convexity_probe(&f, &g, d, 2000, &s).map_err(|e| e.to_string())?;
    let hit = v
        .iter()
        .any(|w| w.midpoint[0].abs() < 1e-9 && (w.midpoint[1] - 0.25).abs() < 1e-9);
    ensure(hit, || {
        format!("no (0, 1/4) midpoint among {} violations", v.len())
    })?;
    Ok(format!(
        "copositive, not strictly; strict {}, non-strict {}; boundary error {worst:.2e} rad; midpoint (0, 0.25) outside",
        r1.as_str(),
        r2.as_str()
    ))
}

fn property_suite() -> Outcome {
    let start = Instant::now();
    let mut counts = Vec::new();
    let simple: [SeededCheck; 8] = [
        ("homogeneity", common::homogeneity_identity, 200),
        ("rescaling", common::degree_rescaling, 200),
        ("parity", common::parity_classification, 200),
        ("projection", common::projection_invariance, 200),
        ("stp", common::stp_associativity, 200),
        ("homogenize", common::homogenize_round_trip, 200),
        ("soundness", common::certificate_soundness, 30),
        ("descent", common::simulation_descent, 20),
    ];
    for (name, check, cases) in simple {
        for seed in 0..cases {
            check(seed).map_err(|e| format!("{name} (seed {seed}): {e}"))?;
        }
        counts.push(format!("{name} {cases}"));
    }
    let (mut tested, mut seed) = (0, 0u64);
    while tested < 50 {
        if common::dines_convexity(seed).map_err(|e| format!("dines (seed {seed}): {e}"))? {
            tested += 1;
        }
        seed += 1;
    }
    counts.push(format!("dines {tested}"));
    Ok(format!(
        "{}; {:.2} s",
        counts.join(", "),
        start.elapsed().as_secs_f64()
    ))
}

fn sha(path: &Path) -> Result<String, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_slemma");
    let file = |n: &str| common::problem_path(n).display().to_string();
    let runs: Vec<Vec<String>> = vec![
        vec![
            "image".into(),
            file("exam1.json"),
            "--pair".into(),
            "pair3".into(),
        ],
        vec!["shs-xi".into(), file("thm7.json")],
        vec!["nhs-xi".into(), file("exam4.json")],
        vec!["lfhd".into(), file("thm16.json")],
        vec![
            "combo-scan".into(),
            file("thm7.json"),
            "--grid-step".into(),
            "0.01".into(),
        ],
        vec![
            "simulate".into(),
            file("thm7.json"),
            "--x0".into(),
            "1,-0.5".into(),
            "--t-end".into(),
            "2".into(),
        ],
    ];
    let mut files = 0;
    for args in &runs {
        let mut hashes: Vec<Vec<(String, String)>> = Vec::new();
        for threads in ["0", "1", "0"] {
            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            let out = Command::new(bin)
                .args(args)
                .args(["--seed", "7", "--out-dir"])
                .arg(dir.path())
                .env("SLEMMA_THREADS", threads)
                .output()
                .map_err(|e| e.to_string())?;
            ensure(out.status.code().is_some_and(|c| c <= 1), || {
                format!("{args:?} exited with {:?}", out.status.code())
            })?;
            let mut names: Vec<_> = std::fs::read_dir(dir.path())
                .map_err(|e| e.to_string())?
                .map(|e| e.unwrap().path())
                .collect();
            names.sort();
            let mut h = names
                .iter()
                .map(|p| {
                    Ok((
                        p.file_name().unwrap().to_string_lossy().into_owned(),
                        sha(p)?,
                    ))
                })
                .collect::<Result<Vec<_>, String>>()?;
            h.push((
                "stdout".into(),
                Sha256::digest(&out.stdout)
                    .iter()
                    .map(|b| format!("{b:02x}"))
                    .collect(),
            ));
            hashes.push(h);
        }
        ensure(hashes.windows(2).all(|w| w[0] == w[1]), || {
            format!("{args:?}: artifacts differ between runs")
        })?;
        files += hashes[0].len();
    }
    Ok(format!(
        "{} commands x 3 runs, {files} artifacts byte-identical (SHA-256)",
        runs.len()
    ))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("strict multiplier margin", Box::new(strict_multiplier)),
        (
            "two cubic sub-systems: lambda interval",
            Box::new(|| interval_check("thm7.json", 0.005, (0.21, 0.39), 10.0, false)),
        ),
        (
            "fractional powers, dilation (3, 1)",
            Box::new(|| interval_check("thm16.json", 0.005, (0.46, 0.53), 10.0, true)),
        ),
        ("three linear sub-systems", Box::new(three_subsystems)),
        ("sector angles", Box::new(sector_angles)),
        ("common-zero negative case", Box::new(negative_case)),
        ("property suite", Box::new(property_suite)),
        ("CLI determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
