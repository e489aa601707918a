//! Semi-tensor products of column vectors and polynomials stored as
//! coefficient vectors acting on tensor powers `x^m`.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::homog::{Exponent, GeneralizedPolynomial, SignedMonomial};

/// `u ⋉ v = (u_1 v, u_2 v, ..., u_m v)` flattened.
pub fn stp(u: &[f64], v: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(u.len() * v.len());
    for a in u {
        out.extend(v.iter().map(|b| a * b));
    }
    out
}

/// The `m`-fold product `x ⋉ x ⋉ ... ⋉ x`; `x^0 = [1]`.
pub fn stp_power(x: &[f64], m: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for _ in 0..m {
        out = stp(x, &out);
    }
    out
}

/// Row-major digits of `index` in base `n`, most significant first.
pub fn multi_index(n: usize, m: usize, mut index: usize) -> Vec<usize> {
    let mut digits = vec![0; m];
    for slot in digits.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    digits
}

/// Inverse of [`multi_index`].
pub fn flat_index(n: usize, digits: &[usize]) -> usize {
    digits.iter().fold(0, |acc, d| acc * n + d)
}

/// `f(x) = f_0 + f_1 x + f_2 x^2 + ... + f_k x^k` with `f_m` a row vector of
/// length `n^m`, stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVecPolynomial {
    n: usize,
    coeffs: Vec<BTreeMap<usize, f64>>,
}

impl CoeffVecPolynomial {
    pub fn zero(n: usize, k: usize) -> Self {
        Self {
            n,
            coeffs: vec![BTreeMap::new(); k + 1],
        }
    }

    /// Builds from `(degree, flat index, value)` entries.
    pub fn from_entries(n: usize, k: usize, entries: &[(usize, usize, f64)]) -> Result<Self> {
        let mut p = Self::zero(n, k);
        for &(m, idx, v) in entries {
            p.set(m, idx, v)?;
        }
        Ok(p)
    }

    pub fn set(&mut self, m: usize, index: usize, value: f64) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Argument("dimension must be positive".into()));
        }
        if m >= self.coeffs.len() {
            return Err(Error::Argument(format!(
                "coefficient degree {m} exceeds polynomial degree {}",
                self.degree()
            )));
        }
        let len = checked_len(self.n, m)?;
        if index >= len {
            return Err(Error::Argument(format!(
                "index {index} out of range for f_{m} (length {len})"
            )));
        }
        if value == 0.0 {
            self.coeffs[m].remove(&index);
        } else {
            *self.coeffs[m].entry(index).or_insert(0.0) = value;
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// The declared degree `k` (number of coefficient vectors minus one).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> &BTreeMap<usize, f64> {
        &self.coeffs[m]
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .map(|(m, row)| {
                row.iter()
                    .map(|(&idx, &c)| {
                        c * multi_index(self.n, m, idx)
                            .iter()
                            .map(|&j| x[j])
                            .product::<f64>()
                    })
                    .sum::<f64>()
            })
            .sum())
    }

    pub fn to_generalized(&self) -> GeneralizedPolynomial {
        let n = self.n;
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .flat_map(|(m, row)| {
                row.iter().map(move |(&idx, &c)| {
                    let mut exps = vec![0u32; n];
                    for j in multi_index(n, m, idx) {
                        exps[j] += 1;
                    }
                    SignedMonomial::integer(c, &exps)
                })
            })
            .collect();
        GeneralizedPolynomial::from_terms(n, terms).expect("dimensions agree by construction")
    }

    /// Coefficient-vector form of a polynomial with integer powers. Each
    /// monomial goes to the sorted multi-index position of its degree block.
    pub fn from_generalized(p: &GeneralizedPolynomial) -> Result<Self> {
        if !p.is_ordinary() {
            return Err(Error::Argument(
                "only ordinary polynomials have a coefficient-vector form".into(),
            ));
        }
        let n = p.dim();
        let exps: Vec<Vec<usize>> = p.terms().iter().map(integer_exponents).collect();
        let k = exps
            .iter()
            .map(|e| e.iter().sum::<usize>())
            .max()
            .unwrap_or(0);
        let mut out = Self::zero(n, k);
        for (t, e) in p.terms().iter().zip(&exps) {
            let digits: Vec<usize> = e
                .iter()
                .enumerate()
                .flat_map(|(j, &c)| std::iter::repeat_n(j, c))
                .collect();
            let m = digits.len();
            let idx = flat_index(n, &digits);
            let slot = out.coeffs[m].entry(idx).or_insert(0.0);
            *slot += t.coeff();
        }
        Ok(out)
    }

    /// The degree-`k` block `f_k x^k` as a homogeneous polynomial.
    pub fn top_form(&self) -> GeneralizedPolynomial {
        let k = self.degree();
        let mut top = Self::zero(self.n, k);
        top.coeffs[k] = self.coeffs[k].clone();
        top.to_generalized()
    }
}

/// `t^k p(x / t)`: the homogenization of `p` to degree `k` with `t` appended
/// as the last variable.
pub fn homogenize(p: &GeneralizedPolynomial, k: u32) -> Result<GeneralizedPolynomial> {
    if !p.is_ordinary() {
        return Err(Error::Argument(
            "homogenization needs integer powers".into(),
        ));
    }
    let n = p.dim();
    let mut terms = Vec::with_capacity(p.terms().len());
    for t in p.terms() {
        let mut e: Vec<u32> = integer_exponents(t).iter().map(|&c| c as u32).collect();
        let deg: u32 = e.iter().sum();
        if deg > k {
            return Err(Error::Argument(format!(
                "polynomial has degree {deg} above the target degree {k}"
            )));
        }
        e.push(k - deg);
        terms.push(SignedMonomial::integer(t.coeff(), &e));
    }
    GeneralizedPolynomial::from_terms(n + 1, terms)
}

pub fn homogenize_coeffs(p: &CoeffVecPolynomial) -> Result<GeneralizedPolynomial> {
    homogenize(&p.to_generalized(), p.degree() as u32)
}

fn integer_exponents(t: &SignedMonomial) -> Vec<usize> {
    t.powers()
        .iter()
        .map(|p: &Exponent| p.to_integer() as usize)
        .collect()
}

fn checked_len(n: usize, m: usize) -> Result<usize> {
    n.checked_pow(m as u32)
        .ok_or_else(|| Error::Argument(format!("n^{m} overflows for n = {n}")))
}

#[derive(Serialize, Deserialize)]
struct CoeffVecRepr {
    #[serde(default)]
    n: Option<usize>,
    degree: usize,
    coeffs: BTreeMap<String, f64>,
}

impl CoeffVecPolynomial {
    /// Parses the `{"degree": k, "coeffs": {"i:index": value}}` form; `n` comes
    /// from the surrounding problem file.
    pub fn from_json_value(n: usize, v: &serde_json::Value) -> Result<Self> {
        let repr: CoeffVecRepr = serde_json::from_value(v.clone())?;
        Self::from_repr(n, repr)
    }

    fn from_repr(n: usize, repr: CoeffVecRepr) -> Result<Self> {
        if let Some(m) = repr.n {
            if m != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: m,
                });
            }
        }
        let mut p = Self::zero(n, repr.degree);
        for (key, value) in repr.coeffs {
            let (i, idx) = key
                .split_once(':')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .ok_or_else(|| Error::Problem(format!("bad coefficient key {key:?}")))?;
            p.set(i, idx, value)?;
        }
        Ok(p)
    }

    fn to_repr(&self) -> CoeffVecRepr {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .flat_map(|(m, row)| row.iter().map(move |(idx, v)| (format!("{m}:{idx}"), *v)))
            .collect();
        CoeffVecRepr {
            n: Some(self.n),
            degree: self.degree(),
            coeffs,
        }
    }
}

impl Serialize for CoeffVecPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoeffVecPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CoeffVecRepr::deserialize(d)?;
        let n = repr.n.ok_or_else(|| serde::de::Error::missing_field("n"))?;
        Self::from_repr(n, repr).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn stp_examples() {
        assert_eq!(stp(&[1.0, 2.0], &[3.0, 4.0]), vec![3.0, 4.0, 6.0, 8.0]);
        assert_eq!(stp(&[1.0, 0.0], &[1.0, 0.0]), vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(stp_power(&[2.0], 3), vec![8.0]);
        assert_eq!(stp_power(&[5.0, 7.0], 0), vec![1.0]);
        assert_eq!(stp_power(&[2.0, 3.0], 2), vec![4.0, 6.0, 6.0, 9.0]);
    }

    #[test]
    fn single_entry_is_monomial() {
        let p = CoeffVecPolynomial::from_entries(2, 2, &[(2, 1, 1.0)]).unwrap();
        let q = p.to_generalized();
        let want = GeneralizedPolynomial::from_integer_terms(2, &[(1.0, &[1, 1])]).unwrap();
        assert_eq!(q, want);
        assert!(CoeffVecPolynomial::zero(3, 2).to_generalized().is_zero());
    }

    #[test]
    fn homogenize_quadratic() {
        let p = GeneralizedPolynomial::from_integer_terms(1, &[(1.0, &[2]), (-1.0, &[0])]).unwrap();
        let h = homogenize(&p, 2).unwrap();
        let want = GeneralizedPolynomial::from_integer_terms(2, &[(1.0, &[2, 0]), (-1.0, &[0, 2])])
            .unwrap();
        assert_eq!(h, want);
        assert!(homogenize(&p, 1).is_err());
        let c = GeneralizedPolynomial::constant(1, 3.0);
        assert_relative_eq!(homogenize(&c, 0).unwrap().eval(&[0.7, 0.2]), 3.0);
    }

    #[test]
    fn round_trip_through_generalized() {
        let p = GeneralizedPolynomial::from_integer_terms(
            2,
            &[
                (-7.0, &[6, 0]),
                (-2.0, &[3, 3]),
                (5.0, &[0, 6]),
                (-2.0, &[4, 2]),
                (-2.0, &[0, 0]),
            ],
        )
        .unwrap();
        let cv = CoeffVecPolynomial::from_generalized(&p).unwrap();
        assert_eq!(cv.degree(), 6);
        assert_eq!(cv.to_generalized(), p);
        for x in [[0.3, -1.2], [2.0, 0.5], [-1.0, -1.0]] {
            assert_relative_eq!(cv.evaluate(&x).unwrap(), p.eval(&x), max_relative = 1e-12);
        }
    }

    #[test]
    fn json_form() {
        let v = serde_json::json!({"degree": 2, "coeffs": {"0:0": -1.0, "2:0": 1.0, "2:3": 1.0}});
        let p = CoeffVecPolynomial::from_json_value(2, &v).unwrap();
        assert_relative_eq!(p.evaluate(&[1.0, 2.0]).unwrap(), 4.0);
        let s = serde_json::to_string(&p).unwrap();
        let back: CoeffVecPolynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
