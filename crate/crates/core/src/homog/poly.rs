//! Generalized polynomials: finite sums of signed-power monomials
//! `c * prod |x_i|^p_i * sgn(x_i)^s_i` with nonnegative rational powers.
//!
//! An ordinary monomial `x^m` is the term with `p = m` and `s = (m odd)`;
//! `x^(a/b)` with odd `b` is the continuous real root `|x|^(a/b) sgn(x)^(a mod 2)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Dilation;
use crate::error::{Error, Result};
use crate::interval::Interval;

/// Exact nonnegative rational exponent.
pub type Exponent = Ratio<i64>;

/// Coefficients below this magnitude are dropped during canonicalization.
pub const COEFF_EPS: f64 = 1e-15;

/// Tolerance on term degrees when deciding homogeneity.
pub const DEGREE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
    Neither,
}

/// One term `coeff * prod |x_i|^powers[i] * sgn(x_i)^signs[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedMonomial {
    coeff: f64,
    powers: Vec<Exponent>,
    signs: Vec<bool>,
}

impl SignedMonomial {
    pub fn new(coeff: f64, powers: Vec<Exponent>, signs: Vec<bool>) -> Result<Self> {
        if powers.len() != signs.len() {
            return Err(Error::Dimension {
                expected: powers.len(),
                got: signs.len(),
            });
        }
        if !coeff.is_finite() {
            return Err(Error::Argument(format!("non-finite coefficient {coeff}")));
        }
        for (p, s) in powers.iter().zip(&signs) {
            if *p < Exponent::from_integer(0) {
                return Err(Error::Argument(format!("negative power {p}")));
            }
            if *s && *p == Exponent::from_integer(0) {
                return Err(Error::Argument(
                    "a sign factor needs a positive power (sgn(x) alone is discontinuous)".into(),
                ));
            }
        }
        Ok(Self {
            coeff,
            powers,
            signs,
        })
    }

    /// Ordinary monomial `coeff * prod x_i^m_i`.
    pub fn integer(coeff: f64, exponents: &[u32]) -> Self {
        Self {
            coeff,
            powers: exponents
                .iter()
                .map(|&m| Exponent::from_integer(m as i64))
                .collect(),
            signs: exponents.iter().map(|&m| m % 2 == 1).collect(),
        }
    }

    /// Monomial `coeff * prod x_i^(num_i / den_i)` with odd denominators, read
    /// as the continuous real root.
    pub fn rational(coeff: f64, exponents: &[(i64, i64)]) -> Result<Self> {
        let mut powers = Vec::with_capacity(exponents.len());
        let mut signs = Vec::with_capacity(exponents.len());
        for &(num, den) in exponents {
            let (p, s) = real_root_power(num, den)?;
            powers.push(p);
            signs.push(s);
        }
        Self::new(coeff, powers, signs)
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    pub fn powers(&self) -> &[Exponent] {
        &self.powers
    }

    pub fn signs(&self) -> &[bool] {
        &self.signs
    }

    pub fn dim(&self) -> usize {
        self.powers.len()
    }

    /// `sum_i r_i p_i`.
    pub fn weighted_degree(&self, d: &Dilation) -> f64 {
        self.powers
            .iter()
            .zip(d.weights())
            .map(|(p, r)| r * ratio_to_f64(p))
            .sum()
    }

    /// Total degree `sum p_i`, exact.
    pub fn total_degree(&self) -> Exponent {
        self.powers.iter().cloned().sum()
    }

    /// True if the term is an ordinary monomial (integer powers, sign factor
    /// exactly on the odd powers).
    pub fn is_ordinary(&self) -> bool {
        self.powers
            .iter()
            .zip(&self.signs)
            .all(|(p, s)| p.is_integer() && (*p.numer() % 2 == 1) == *s)
    }

    fn odd_under_negation(&self) -> bool {
        self.signs.iter().filter(|s| **s).count() % 2 == 1
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut v = self.coeff;
        for ((p, s), xi) in self.powers.iter().zip(&self.signs).zip(x) {
            v *= factor(*p, *s, *xi);
        }
        v
    }

    /// Enclosure of the term over the box `prod [lo_i, hi_i]`.
    pub fn range_over(&self, bx: &[Interval]) -> Interval {
        let mut acc = Interval::point(self.coeff);
        for ((p, s), iv) in self.powers.iter().zip(&self.signs).zip(bx) {
            if *p.numer() == 0 {
                continue;
            }
            let a = factor(*p, *s, iv.lo);
            let b = factor(*p, *s, iv.hi);
            let r = if *s {
                Interval::new(a, b)
            } else if iv.contains_zero() {
                Interval::new(0.0, a.max(b))
            } else {
                Interval::new(a.min(b), a.max(b))
            };
            acc = acc * r;
        }
        acc
    }

    fn key(&self) -> (Vec<Exponent>, Vec<bool>) {
        (self.powers.clone(), self.signs.clone())
    }
}

/// `|x|^p sgn(x)^s`.
#[inline]
fn factor(p: Exponent, s: bool, x: f64) -> f64 {
    let num = *p.numer();
    if num == 0 {
        return 1.0;
    }
    if *p.denom() == 1 {
        let m = num as i32;
        if s == (m % 2 == 1) {
            return x.powi(m);
        }
        let a = x.abs().powi(m);
        return if s { a.copysign(x) } else { a };
    }
    let a = x.abs().powf(num as f64 / *p.denom() as f64);
    if s {
        a.copysign(x)
    } else {
        a
    }
}

pub(crate) fn ratio_to_f64(p: &Exponent) -> f64 {
    *p.numer() as f64 / *p.denom() as f64
}

/// Maps `x^(num/den)` (odd `den`) to its continuous real extension
/// `|x|^(num/den) sgn(x)^(num mod 2)`.
pub fn real_root_power(num: i64, den: i64) -> Result<(Exponent, bool)> {
    if den <= 0 || den % 2 == 0 {
        return Err(Error::Argument(format!(
            "power {num}/{den}: denominator must be a positive odd integer"
        )));
    }
    if num < 0 {
        return Err(Error::Argument(format!("power {num}/{den} is negative")));
    }
    let p = Exponent::new(num, den);
    Ok((p, *p.numer() % 2 == 1))
}

/// Canonical sum of [`SignedMonomial`]s in `n` variables.
///
/// Terms are kept sorted by `(powers, signs)` with duplicates merged, so two
/// polynomials with the same term map compare equal.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedPolynomial {
    n: usize,
    terms: Vec<SignedMonomial>,
}

impl GeneralizedPolynomial {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: Vec::new(),
        }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self::from_terms_unchecked(
            n,
            vec![SignedMonomial {
                coeff: c,
                powers: vec![Exponent::from_integer(0); n],
                signs: vec![false; n],
            }],
        )
    }

    /// The coordinate function `x_i`.
    pub fn variable(n: usize, i: usize) -> Self {
        let mut e = vec![0u32; n];
        e[i] = 1;
        Self::from_terms_unchecked(n, vec![SignedMonomial::integer(1.0, &e)])
    }

    /// `x_i^(num/den)` as a continuous real root (odd `den`).
    pub fn variable_power(n: usize, i: usize, num: i64, den: i64) -> Result<Self> {
        if i >= n {
            return Err(Error::Dimension {
                expected: n,
                got: i + 1,
            });
        }
        let mut ex = vec![(0, 1); n];
        ex[i] = (num, den);
        Self::from_terms(n, vec![SignedMonomial::rational(1.0, &ex)?])
    }

    /// Ordinary polynomial from `(coeff, exponents)` pairs.
    pub fn from_integer_terms(n: usize, terms: &[(f64, &[u32])]) -> Result<Self> {
        let mut out = Vec::with_capacity(terms.len());
        for (c, e) in terms {
            if e.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: e.len(),
                });
            }
            out.push(SignedMonomial::integer(*c, e));
        }
        Self::from_terms(n, out)
    }

    pub fn from_terms(n: usize, terms: Vec<SignedMonomial>) -> Result<Self> {
        for t in &terms {
            if t.dim() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: t.dim(),
                });
            }
        }
        Ok(Self::from_terms_unchecked(n, terms))
    }

    fn from_terms_unchecked(n: usize, terms: Vec<SignedMonomial>) -> Self {
        let mut map: BTreeMap<(Vec<Exponent>, Vec<bool>), f64> = BTreeMap::new();
        for t in terms {
            *map.entry(t.key()).or_insert(0.0) += t.coeff;
        }
        let terms = map
            .into_iter()
            .filter(|(_, c)| c.abs() >= COEFF_EPS)
            .map(|((powers, signs), coeff)| SignedMonomial {
                coeff,
                powers,
                signs,
            })
            .collect();
        Self { n, terms }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[SignedMonomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at `x`, with a dimension check.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.eval(x))
    }

    /// Value at `x`; `x` must have length `dim()`.
    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n);
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    pub fn range_over(&self, bx: &[Interval]) -> Interval {
        self.terms
            .iter()
            .fold(Interval::point(0.0), |acc, t| acc + t.range_over(bx))
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_terms_unchecked(
            self.n,
            self.terms
                .iter()
                .map(|t| SignedMonomial {
                    coeff: t.coeff * c,
                    ..t.clone()
                })
                .collect(),
        )
    }

    pub fn powi(&self, m: u32) -> Self {
        let mut acc = Self::constant(self.n, 1.0);
        for _ in 0..m {
            acc = &acc * self;
        }
        acc
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).fold(0.0, f64::max)
    }

    /// True if every term is an ordinary monomial.
    pub fn is_ordinary(&self) -> bool {
        self.terms.iter().all(SignedMonomial::is_ordinary)
    }

    /// Largest total degree over the terms (exact).
    pub fn total_degree(&self) -> Exponent {
        self.terms
            .iter()
            .map(SignedMonomial::total_degree)
            .max()
            .unwrap_or_else(|| Exponent::from_integer(0))
    }

    /// Degree `k` with `p(eps^r o x) = eps^k p(x)` for all `eps > 0`.
    ///
    /// Every term must have the same weighted degree; the identity is then
    /// spot-checked at 100 random `(eps, x)` pairs.
    pub fn homogeneity_degree(&self, d: &Dilation) -> Result<f64> {
        if d.dim() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: d.dim(),
            });
        }
        if self.is_zero() {
            return Err(Error::Degenerate(
                "the zero polynomial is homogeneous of every degree".into(),
            ));
        }
        let degrees: Vec<f64> = self.terms.iter().map(|t| t.weighted_degree(d)).collect();
        let k = degrees[0];
        if degrees.iter().any(|g| (g - k).abs() > DEGREE_TOL) {
            return Err(Error::NotHomogeneous { degrees });
        }
        let residual = self.homogeneity_residual(d, k, 100, 0x0D11_A7E5);
        if residual > 1e-9 {
            return Err(Error::Unsound(format!(
                "homogeneity identity fails with residual {residual:e}"
            )));
        }
        Ok(k)
    }

    /// Largest scaled residual `|p(eps^r o x) - eps^k p(x)| / (1 + |eps^k p(x)|)`
    /// over `trials` random pairs with `eps` in `(0, 10]` and `x` in `[-1, 1]^n`.
    pub fn homogeneity_residual(&self, d: &Dilation, k: f64, trials: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst: f64 = 0.0;
        for _ in 0..trials {
            let eps: f64 = 10.0 * (1.0 - rng.random::<f64>());
            let x: Vec<f64> = (0..self.n).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let lhs = self.eval(&d.scale(eps, &x));
            let rhs = eps.powf(k) * self.eval(&x);
            worst = worst.max((lhs - rhs).abs() / (1.0 + rhs.abs()));
        }
        worst
    }

    /// Behaviour under `x -> -x`, read off the canonical terms.
    pub fn parity(&self) -> Parity {
        let odd = self.terms.iter().filter(|t| t.odd_under_negation()).count();
        if odd == 0 {
            Parity::Even
        } else if odd == self.terms.len() {
            Parity::Odd
        } else {
            Parity::Neither
        }
    }

    /// `d/dx_i` by the term-wise power rule. Powers in `(0, 1)` and a bare
    /// `|x_i|` are rejected since the result would not be continuous at 0.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: i + 1,
            });
        }
        let one = Exponent::from_integer(1);
        let mut out = Vec::new();
        for t in &self.terms {
            let p = t.powers[i];
            if *p.numer() == 0 {
                continue;
            }
            if p < one {
                return Err(Error::Differentiation(format!(
                    "power {p} of x_{} lies in (0, 1)",
                    i + 1
                )));
            }
            if p == one && !t.signs[i] {
                return Err(Error::Differentiation(format!(
                    "|x_{}| is not differentiable at 0",
                    i + 1
                )));
            }
            let mut powers = t.powers.clone();
            let mut signs = t.signs.clone();
            powers[i] = p - one;
            signs[i] = !t.signs[i];
            out.push(SignedMonomial {
                coeff: t.coeff * ratio_to_f64(&p),
                powers,
                signs,
            });
        }
        Ok(Self::from_terms_unchecked(self.n, out))
    }

    pub fn gradient(&self) -> Result<Vec<Self>> {
        (0..self.n).map(|i| self.partial(i)).collect()
    }

    /// Same function viewed in `m >= n` variables (the extra ones unused).
    pub fn embed(&self, m: usize) -> Self {
        assert!(m >= self.n);
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut powers = t.powers.clone();
                let mut signs = t.signs.clone();
                powers.resize(m, Exponent::from_integer(0));
                signs.resize(m, false);
                SignedMonomial {
                    coeff: t.coeff,
                    powers,
                    signs,
                }
            })
            .collect();
        Self { n: m, terms }
    }
}

fn mul_terms(a: &SignedMonomial, b: &SignedMonomial) -> SignedMonomial {
    SignedMonomial {
        coeff: a.coeff * b.coeff,
        powers: a.powers.iter().zip(&b.powers).map(|(p, q)| p + q).collect(),
        signs: a.signs.iter().zip(&b.signs).map(|(s, t)| s ^ t).collect(),
    }
}

impl Add for &GeneralizedPolynomial {
    type Output = GeneralizedPolynomial;
    fn add(self, rhs: &GeneralizedPolynomial) -> GeneralizedPolynomial {
        assert_eq!(self.n, rhs.n, "dimension mismatch in polynomial sum");
        let terms = self.terms.iter().chain(&rhs.terms).cloned().collect();
        GeneralizedPolynomial::from_terms_unchecked(self.n, terms)
    }
}

impl Sub for &GeneralizedPolynomial {
    type Output = GeneralizedPolynomial;
    fn sub(self, rhs: &GeneralizedPolynomial) -> GeneralizedPolynomial {
        self + &rhs.scale(-1.0)
    }
}

impl Mul for &GeneralizedPolynomial {
    type Output = GeneralizedPolynomial;
    fn mul(self, rhs: &GeneralizedPolynomial) -> GeneralizedPolynomial {
        assert_eq!(self.n, rhs.n, "dimension mismatch in polynomial product");
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                terms.push(mul_terms(a, b));
            }
        }
        GeneralizedPolynomial::from_terms_unchecked(self.n, terms)
    }
}

impl Neg for &GeneralizedPolynomial {
    type Output = GeneralizedPolynomial;
    fn neg(self) -> GeneralizedPolynomial {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GeneralizedPolynomial {
            type Output = GeneralizedPolynomial;
            fn $m(self, rhs: GeneralizedPolynomial) -> GeneralizedPolynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&GeneralizedPolynomial> for GeneralizedPolynomial {
            type Output = GeneralizedPolynomial;
            fn $m(self, rhs: &GeneralizedPolynomial) -> GeneralizedPolynomial {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for GeneralizedPolynomial {
    type Output = GeneralizedPolynomial;
    fn neg(self) -> GeneralizedPolynomial {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &GeneralizedPolynomial {
    type Output = GeneralizedPolynomial;
    fn mul(self, c: f64) -> GeneralizedPolynomial {
        self.scale(c)
    }
}

impl Mul<f64> for GeneralizedPolynomial {
    type Output = GeneralizedPolynomial;
    fn mul(self, c: f64) -> GeneralizedPolynomial {
        self.scale(c)
    }
}

impl fmt::Display for GeneralizedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let c = t.coeff;
            if k == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0.0 { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            for (i, (p, s)) in t.powers.iter().zip(&t.signs).enumerate() {
                if *p.numer() == 0 {
                    continue;
                }
                let ordinary = p.is_integer() && (*p.numer() % 2 == 1) == *s;
                let base = if ordinary {
                    format!("x{}", i + 1)
                } else {
                    format!("|x{}|", i + 1)
                };
                let pow = if *p == Exponent::from_integer(1) {
                    base
                } else {
                    format!("{base}^{p}")
                };
                factors.push(if !ordinary && *s {
                    format!("{pow}*sgn(x{})", i + 1)
                } else {
                    pow
                });
            }
            if factors.is_empty() || (c.abs() - 1.0).abs() > 0.0 {
                factors.insert(0, format!("{}", c.abs()));
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
