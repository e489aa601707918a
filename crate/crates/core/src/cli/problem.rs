//! Problem files: a versioned JSON description of the functions, pairs,
//! switched systems and Lyapunov candidates to analyse.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::DMatrix;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::homog::{real_root_power, Dilation, GeneralizedPolynomial, SignedMonomial};
use crate::stp::CoeffVecPolynomial;
use crate::switched::{derivative_along, ConvexCombination, SwitchedSystem};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    version: u32,
    #[serde(default)]
    description: Option<String>,
    #[serde(default)]
    dilation: Option<RawDilation>,
    variables: Vec<String>,
    #[serde(default)]
    functions: BTreeMap<String, FunctionLiteral>,
    #[serde(default)]
    pairs: Vec<RawPair>,
    #[serde(default)]
    systems: Vec<RawSystem>,
    #[serde(default)]
    lyapunov: Vec<RawLyapunov>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDilation {
    weights: Vec<f64>,
    #[serde(default = "default_l")]
    l: f64,
}

fn default_l() -> f64 {
    crate::homog::DEFAULT_NORM_PARAM
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum FunctionLiteral {
    Terms(Vec<RawTerm>),
    CoeffVec(serde_json::Map<String, serde_json::Value>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum FunctionRef {
    Name(String),
    Inline(FunctionLiteral),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    coeff: f64,
    powers: Vec<RawPower>,
    #[serde(default)]
    abs: Option<Vec<bool>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum RawPower {
    Int(i64),
    Frac {
        num: i64,
        #[serde(default = "one")]
        den: i64,
    },
}

fn one() -> i64 {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPair {
    name: String,
    f: FunctionRef,
    g: FunctionRef,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    name: String,
    #[serde(default)]
    subsystems: Option<Vec<Vec<FunctionRef>>>,
    #[serde(default)]
    matrices: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default)]
    lambdas: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLyapunov {
    name: String,
    function: FunctionRef,
    #[serde(default)]
    matrix: Option<Vec<Vec<f64>>>,
}

/// A parsed function in either representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Function {
    General(GeneralizedPolynomial),
    CoeffVec(CoeffVecPolynomial),
}

impl Function {
    pub fn generalized(&self) -> GeneralizedPolynomial {
        match self {
            Function::General(p) => p.clone(),
            Function::CoeffVec(c) => c.to_generalized(),
        }
    }

    pub fn coeff_vec(&self) -> Result<CoeffVecPolynomial> {
        match self {
            Function::General(p) => CoeffVecPolynomial::from_generalized(p),
            Function::CoeffVec(c) => Ok(c.clone()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NamedPair {
    pub name: String,
    pub f: Function,
    pub g: Function,
}

#[derive(Debug, Clone)]
pub struct SystemDef {
    pub name: String,
    pub system: SwitchedSystem,
    pub matrices: Option<Vec<DMatrix<f64>>>,
    pub lambdas: Option<ConvexCombination>,
}

#[derive(Debug, Clone)]
pub struct LyapunovDef {
    pub name: String,
    pub v: GeneralizedPolynomial,
    pub matrix: Option<DMatrix<f64>>,
}

/// A validated problem file.
#[derive(Debug, Clone)]
pub struct Problem {
    pub version: u32,
    pub description: Option<String>,
    pub dilation: Dilation,
    pub variables: Vec<String>,
    pub functions: BTreeMap<String, Function>,
    pub pairs: Vec<NamedPair>,
    pub systems: Vec<SystemDef>,
    pub lyapunov: Vec<LyapunovDef>,
}

fn problem_err(msg: impl Into<String>) -> Error {
    Error::Problem(msg.into())
}

fn parse_term(n: usize, t: &RawTerm) -> Result<SignedMonomial> {
    if t.powers.len() != n {
        return Err(problem_err(format!(
            "term has {} powers for {n} variables",
            t.powers.len()
        )));
    }
    if let Some(a) = &t.abs {
        if a.len() != n {
            return Err(problem_err(format!(
                "term has {} abs flags for {n} variables",
                a.len()
            )));
        }
    }
    let mut powers = Vec::with_capacity(n);
    let mut signs = Vec::with_capacity(n);
    for (i, p) in t.powers.iter().enumerate() {
        let (num, den) = match *p {
            RawPower::Int(m) => (m, 1),
            RawPower::Frac { num, den } => (num, den),
        };
        let (power, sign) = real_root_power(num, den)?;
        let forced_abs = t.abs.as_ref().is_some_and(|a| a[i]);
        powers.push(power);
        signs.push(sign && !forced_abs);
    }
    SignedMonomial::new(t.coeff, powers, signs)
}

fn parse_literal(n: usize, lit: &FunctionLiteral) -> Result<Function> {
    match lit {
        FunctionLiteral::Terms(terms) => {
            let monos = terms
                .iter()
                .map(|t| parse_term(n, t))
                .collect::<Result<Vec<_>>>()?;
            Ok(Function::General(GeneralizedPolynomial::from_terms(
                n, monos,
            )?))
        }
        FunctionLiteral::CoeffVec(obj) => Ok(Function::CoeffVec(
            CoeffVecPolynomial::from_json_value(n, &serde_json::Value::Object(obj.clone()))?,
        )),
    }
}

fn parse_matrix(n: usize, rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(problem_err(format!("{what} must be {n}x{n}")));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

impl Problem {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| problem_err(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawProblem = serde_json::from_str(text)?;
        if raw.version != SCHEMA_VERSION {
            return Err(problem_err(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                raw.version
            )));
        }
        let n = raw.variables.len();
        if n == 0 {
            return Err(problem_err("at least one variable is required"));
        }
        let dilation = match &raw.dilation {
            Some(d) => {
                if d.weights.len() != n {
                    return Err(problem_err(format!(
                        "dilation has {} weights for {n} variables",
                        d.weights.len()
                    )));
                }
                Dilation::new(d.weights.clone(), d.l)?
            }
            None => Dilation::trivial(n),
        };
        let mut functions = BTreeMap::new();
        for (name, lit) in &raw.functions {
            let f = parse_literal(n, lit)
                .map_err(|e| problem_err(format!("function {name:?}: {e}")))?;
            functions.insert(name.clone(), f);
        }
        let resolve = |r: &FunctionRef| -> Result<Function> {
            match r {
                FunctionRef::Name(s) => functions
                    .get(s)
                    .cloned()
                    .ok_or_else(|| problem_err(format!("unknown function {s:?}"))),
                FunctionRef::Inline(lit) => parse_literal(n, lit),
            }
        };
        let pairs = raw
            .pairs
            .iter()
            .map(|p| {
                Ok(NamedPair {
                    name: p.name.clone(),
                    f: resolve(&p.f)?,
                    g: resolve(&p.g)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut systems = Vec::new();
        for s in &raw.systems {
            let ctx = |e: Error| problem_err(format!("system {:?}: {e}", s.name));
            let (system, matrices) = match (&s.subsystems, &s.matrices) {
                (Some(subs), None) => {
                    let fields = subs
                        .iter()
                        .map(|field| {
                            field
                                .iter()
                                .map(|c| resolve(c).map(|f| f.generalized()))
                                .collect::<Result<Vec<_>>>()
                        })
                        .collect::<Result<Vec<_>>>()
                        .map_err(ctx)?;
                    (SwitchedSystem::new(fields).map_err(ctx)?, None)
                }
                (None, Some(mats)) => {
                    let mats = mats
                        .iter()
                        .map(|m| parse_matrix(n, m, "sub-system matrix"))
                        .collect::<Result<Vec<_>>>()
                        .map_err(ctx)?;
                    (SwitchedSystem::linear(&mats).map_err(ctx)?, Some(mats))
                }
                _ => {
                    return Err(ctx(problem_err(
                        "give exactly one of \"subsystems\" or \"matrices\"",
                    )))
                }
            };
            let lambdas = s
                .lambdas
                .clone()
                .map(ConvexCombination::new)
                .transpose()
                .map_err(ctx)?;
            if let Some(l) = &lambdas {
                if l.len() != system.len() {
                    return Err(ctx(Error::Dimension {
                        expected: system.len(),
                        got: l.len(),
                    }));
                }
            }
            systems.push(SystemDef {
                name: s.name.clone(),
                system,
                matrices,
                lambdas,
            });
        }
        let lyapunov = raw
            .lyapunov
            .iter()
            .map(|l| {
                let ctx = |e: Error| problem_err(format!("lyapunov {:?}: {e}", l.name));
                Ok(LyapunovDef {
                    name: l.name.clone(),
                    v: resolve(&l.function).map_err(ctx)?.generalized(),
                    matrix: l
                        .matrix
                        .as_ref()
                        .map(|m| parse_matrix(n, m, "matrix"))
                        .transpose()
                        .map_err(ctx)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            version: raw.version,
            description: raw.description,
            dilation,
            variables: raw.variables,
            functions,
            pairs,
            systems,
            lyapunov,
        })
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn function(&self, name: &str) -> Result<&Function> {
        self.functions
            .get(name)
            .ok_or_else(|| problem_err(format!("unknown function {name:?}")))
    }

    pub fn system(&self, name: Option<&str>) -> Result<&SystemDef> {
        pick(&self.systems, name, |s| &s.name, "system")
    }

    pub fn lyapunov(&self, name: Option<&str>) -> Result<&LyapunovDef> {
        pick(&self.lyapunov, name, |l| &l.name, "lyapunov candidate")
    }

    /// The pair to analyse: explicit function names, a named pair, the first
    /// listed pair, or `(-V'_1, V'_2)` built from the first system and candidate.
    pub fn pair(&self, name: Option<&str>, f: Option<&str>, g: Option<&str>) -> Result<NamedPair> {
        match (f, g) {
            (Some(f), Some(g)) => {
                return Ok(NamedPair {
                    name: format!("{f},{g}"),
                    f: self.function(f)?.clone(),
                    g: self.function(g)?.clone(),
                })
            }
            (None, None) => {}
            _ => return Err(Error::Argument("--f and --g must be given together".into())),
        }
        if name.is_some() || !self.pairs.is_empty() {
            return pick(&self.pairs, name, |p| &p.name, "pair").cloned();
        }
        let sys = self.system(None)?;
        let v = &self.lyapunov(None)?.v;
        let fields = sys.system.fields();
        Ok(NamedPair {
            name: format!("{}:-dV1,dV2", sys.name),
            f: Function::General(-&derivative_along(v, &fields[0])?),
            g: Function::General(derivative_along(v, &fields[1])?),
        })
    }
}

fn pick<'a, T>(
    items: &'a [T],
    name: Option<&str>,
    key: impl Fn(&T) -> &String,
    what: &str,
) -> Result<&'a T> {
    match name {
        Some(n) => items
            .iter()
            .find(|t| key(t) == n)
            .ok_or_else(|| problem_err(format!("no {what} named {n:?}"))),
        None => items
            .first()
            .ok_or_else(|| problem_err(format!("the problem file defines no {what}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "version": 1,
        "dilation": {"weights": [3, 1], "l": 2},
        "variables": ["x1", "x2"],
        "functions": {
            "v": [{"coeff": 3, "powers": [{"num": 4, "den": 3}, 0]},
                  {"coeff": 1, "powers": [0, 2]}],
            "a": [{"coeff": 1, "powers": [{"num": 1, "den": 3}, 0]}],
            "b": [{"coeff": 1, "powers": [{"num": 1, "den": 3}, 0], "abs": [true, false]}],
            "c": {"degree": 2, "coeffs": {"2:0": 1.0, "0:0": -1.0}}
        },
        "pairs": [{"name": "p", "f": "a", "g": [{"coeff": 2, "powers": [0, 2]}]}]
    }"#;

    #[test]
    fn parses_fractional_and_abs_terms() {
        let p = Problem::from_json(SAMPLE).unwrap();
        assert_eq!(p.dilation.weights(), &[3.0, 1.0]);
        let v = p.function("v").unwrap().generalized();
        assert!((v.eval(&[-8.0, 1.0]) - 49.0).abs() < 1e-12);
        let a = p.function("a").unwrap().generalized();
        let b = p.function("b").unwrap().generalized();
        assert!((a.eval(&[-8.0, 0.0]) + 2.0).abs() < 1e-12);
        assert!((b.eval(&[-8.0, 0.0]) - 2.0).abs() < 1e-12);
        let c = p.function("c").unwrap().generalized();
        assert!((c.eval(&[3.0, 0.0]) - 8.0).abs() < 1e-12);
        let pair = p.pair(None, None, None).unwrap();
        assert_eq!(pair.name, "p");
    }

    #[test]
    fn rejects_bad_files() {
        assert!(Problem::from_json(&SAMPLE.replace("\"version\": 1", "\"version\": 7")).is_err());
        assert!(
            Problem::from_json(&SAMPLE.replace("\"den\": 3}, 0]}]", "\"den\": 2}, 0]}]")).is_err()
        );
        assert!(Problem::from_json(&SAMPLE.replace("\"f\": \"a\"", "\"f\": \"zz\"")).is_err());
        assert!(Problem::from_json(&SAMPLE.replace("[3, 1]", "[3]")).is_err());
    }
}
