//! Fixed-step RK4 simulation under min-derivative switching with a dwell time.

use std::fmt::Write as _;

use serde::Serialize;

use super::{LfhdCandidate, SwitchedSystem};
use crate::error::{Error, Result};
use crate::homog::GeneralizedPolynomial;

/// State norm beyond which a run is declared divergent.
pub const DIVERGENCE_NORM: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub x: Vec<f64>,
    /// 0-based active sub-system.
    pub sigma: usize,
    pub v: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub rows: Vec<TrajectoryRow>,
    /// Number of times the active sub-system changed.
    pub switches: usize,
    pub dt: f64,
    pub dwell: f64,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectoryRow {
        self.rows
            .last()
            .expect("a trajectory has at least its initial row")
    }
}

fn eval_field(field: &[GeneralizedPolynomial], x: &[f64]) -> Vec<f64> {
    field.iter().map(|c| c.eval(x)).collect()
}

fn axpy(x: &[f64], a: f64, k: &[f64]) -> Vec<f64> {
    x.iter().zip(k).map(|(xi, ki)| xi + a * ki).collect()
}

fn rk4_step(field: &[GeneralizedPolynomial], x: &[f64], dt: f64) -> Vec<f64> {
    let k1 = eval_field(field, x);
    let k2 = eval_field(field, &axpy(x, dt / 2.0, &k1));
    let k3 = eval_field(field, &axpy(x, dt / 2.0, &k2));
    let k4 = eval_field(field, &axpy(x, dt, &k3));
    x.iter()
        .enumerate()
        .map(|(i, xi)| xi + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Integrates `x' = f_sigma(x)` from `x0`, re-choosing
/// `sigma = argmin_i V'_i(x)` (lowest index on ties) once every `dwell`.
pub fn simulate_min_switching(
    sys: &SwitchedSystem,
    cand: &LfhdCandidate,
    x0: &[f64],
    dt: f64,
    t_end: f64,
    dwell: f64,
) -> Result<Trajectory> {
    if x0.len() != sys.dim() {
        return Err(Error::Dimension {
            expected: sys.dim(),
            got: x0.len(),
        });
    }
    for (name, v) in [("dt", dt), ("t_end", t_end), ("dwell", dwell)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Argument(format!("{name} must be positive, got {v}")));
        }
    }
    let steps = (t_end / dt).round() as usize;
    let dwell_steps = ((dwell / dt).round() as usize).max(1);
    let mut x = x0.to_vec();
    let mut sigma = cand.argmin_at(&x).0;
    let mut rows = Vec::with_capacity(steps + 1);
    rows.push(TrajectoryRow {
        t: 0.0,
        x: x.clone(),
        sigma,
        v: cand.v().eval(&x),
    });
    let mut switches = 0;
    for step in 1..=steps {
        if (step - 1) % dwell_steps == 0 && step > 1 {
            let next = cand.argmin_at(&x).0;
            if next != sigma {
                switches += 1;
                sigma = next;
            }
        }
        x = rk4_step(&sys.fields()[sigma], &x, dt);
        let t = step as f64 * dt;
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm <= DIVERGENCE_NORM) {
            return Err(Error::Divergence { t, norm });
        }
        rows.push(TrajectoryRow {
            t,
            x: x.clone(),
            sigma,
            v: cand.v().eval(&x),
        });
    }
    Ok(Trajectory {
        rows,
        switches,
        dt,
        dwell: dwell_steps as f64 * dt,
    })
}

/// Trajectory CSV with columns `t,x_1..x_n,sigma,V`; `sigma` is 1-based.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let n = traj.rows.first().map_or(0, |r| r.x.len());
    let mut out = String::from("t");
    for i in 1..=n {
        let _ = write!(out, ",x_{i}");
    }
    out.push_str(",sigma,V\n");
    for r in &traj.rows {
        let _ = write!(out, "{}", r.t);
        for xi in &r.x {
            let _ = write!(out, ",{xi}");
        }
        let _ = writeln!(out, ",{},{}", r.sigma + 1, r.v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homog::Dilation;
    use crate::switched::tests::cubic_system;

    fn poly(n: usize, terms: &[(f64, &[u32])]) -> GeneralizedPolynomial {
        GeneralizedPolynomial::from_integer_terms(n, terms).unwrap()
    }

    #[test]
    fn cubic_system_descends() {
        let (sys, v) = cubic_system();
        let cand = LfhdCandidate::new(v, &sys, &Dilation::trivial(2)).unwrap();
        let tr = simulate_min_switching(&sys, &cand, &[1.0, 1.0], 1e-3, 10.0, 1e-2).unwrap();
        assert_eq!(tr.rows.len(), 10_001);
        assert!(tr.last().v < tr.rows[0].v);
    }

    #[test]
    fn origin_is_an_equilibrium() {
        let (sys, v) = cubic_system();
        let cand = LfhdCandidate::new(v, &sys, &Dilation::trivial(2)).unwrap();
        let tr = simulate_min_switching(&sys, &cand, &[0.0, 0.0], 1e-2, 1.0, 1e-1).unwrap();
        assert!(tr.rows.iter().all(|r| r.x == vec![0.0, 0.0]));
    }

    #[test]
    fn exponential_decay() {
        let decay = vec![poly(1, &[(-1.0, &[1])])];
        let sys = SwitchedSystem::new(vec![decay.clone(), decay]).unwrap();
        let cand =
            LfhdCandidate::new(poly(1, &[(0.5, &[2])]), &sys, &Dilation::trivial(1)).unwrap();
        let tr = simulate_min_switching(&sys, &cand, &[1.0], 1e-3, 2.0, 1e-2).unwrap();
        assert!(tr.rows.iter().all(|r| r.sigma == 0));
        for r in &tr.rows {
            assert!((r.x[0] - (-r.t).exp()).abs() < 1e-6);
        }
        let csv = trajectory_csv(&tr);
        assert!(csv.starts_with("t,x_1,sigma,V\n0,1,1,0.5\n"));
    }

    #[test]
    fn growth_diverges() {
        let grow = vec![poly(1, &[(1.0, &[3])])];
        let sys = SwitchedSystem::new(vec![grow.clone(), grow]).unwrap();
        let cand =
            LfhdCandidate::new(poly(1, &[(0.5, &[2])]), &sys, &Dilation::trivial(1)).unwrap();
        let e = simulate_min_switching(&sys, &cand, &[2.0], 1e-3, 10.0, 1e-2).unwrap_err();
        assert!(matches!(e, Error::Divergence { .. }));
    }
}
