//! Sparse truncated multivariate power series over exact rationals.
//!
//! A series in up to three variables carries one truncation order per
//! variable: a coefficient whose exponent in variable `i` is `≥ orders[i]`
//! is *unknown*, not zero. Reading such a coefficient is an error.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub const MAX_VARS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("variable lists differ: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("at most {MAX_VARS} variables are supported, got {0}")]
    TooManyVariables(usize),
    #[error("expected {expected} exponents, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("geometric series of a constant monomial does not converge formally")]
    Divergent,
    #[error("constant term is not a unit")]
    NonUnitConstant,
    #[error("exponent {exponents:?} is beyond the truncation orders {orders:?}")]
    BeyondTruncation { exponents: Vec<u32>, orders: Vec<u32> },
    #[error("coefficient {0} is not an integer")]
    NotIntegral(String),
}

type SResult<T> = std::result::Result<T, SeriesError>;

/// `c · x^e` for the variables of some series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coeff: BigRational,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial { exponents, coeff: BigRational::one() }
    }

    pub fn with_coeff(exponents: Vec<u32>, coeff: BigRational) -> Self {
        Monomial { exponents, coeff }
    }
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    vars: Vec<String>,
    orders: Vec<u32>,
    #[serde(with = "terms_serde")]
    coeffs: BTreeMap<Vec<u32>, BigRational>,
}

impl TruncatedSeries {
    pub fn zero(vars: &[&str], orders: &[u32]) -> SResult<Self> {
        if vars.len() > MAX_VARS {
            return Err(SeriesError::TooManyVariables(vars.len()));
        }
        if orders.len() != vars.len() {
            return Err(SeriesError::Arity { expected: vars.len(), found: orders.len() });
        }
        Ok(TruncatedSeries {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            orders: orders.to_vec(),
            coeffs: BTreeMap::new(),
        })
    }

    pub fn one(vars: &[&str], orders: &[u32]) -> SResult<Self> {
        let mut s = Self::zero(vars, orders)?;
        s.insert(vec![0; vars.len()], BigRational::one());
        Ok(s)
    }

    /// Builds a series from `(exponents, coefficient)` pairs; terms beyond
    /// the orders are dropped.
    pub fn from_terms<I>(vars: &[&str], orders: &[u32], terms: I) -> SResult<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut s = Self::zero(vars, orders)?;
        for (e, c) in terms {
            s.check_arity(&e)?;
            s.insert(e, c);
        }
        Ok(s)
    }

    pub fn from_int_terms(vars: &[&str], orders: &[u32], terms: &[(&[u32], i64)]) -> SResult<Self> {
        Self::from_terms(
            vars,
            orders,
            terms
                .iter()
                .map(|(e, c)| (e.to_vec(), BigRational::from_integer(BigInt::from(*c)))),
        )
    }

    /// `Σ_{l≥0} m^l`, truncated.
    pub fn geometric(vars: &[&str], orders: &[u32], m: &Monomial) -> SResult<Self> {
        let mut s = Self::zero(vars, orders)?;
        s.check_arity(&m.exponents)?;
        if m.exponents.iter().all(|&e| e == 0) {
            return Err(SeriesError::Divergent);
        }
        let mut exps = vec![0u32; vars.len()];
        let mut coeff = BigRational::one();
        while s.in_range(&exps) {
            s.insert(exps.clone(), coeff.clone());
            for (e, step) in exps.iter_mut().zip(&m.exponents) {
                *e += step;
            }
            coeff = &coeff * &m.coeff;
        }
        Ok(s)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms in exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.coeffs.iter()
    }

    fn check_arity(&self, e: &[u32]) -> SResult<()> {
        if e.len() != self.vars.len() {
            return Err(SeriesError::Arity { expected: self.vars.len(), found: e.len() });
        }
        Ok(())
    }

    fn in_range(&self, e: &[u32]) -> bool {
        e.iter().zip(&self.orders).all(|(x, o)| x < o)
    }

    fn insert(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() || !self.in_range(&e) {
            return;
        }
        self.coeffs.insert(e, c);
    }

    fn accumulate(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn compatible(&self, other: &Self) -> SResult<Vec<u32>> {
        if self.vars != other.vars {
            return Err(SeriesError::VariableMismatch(self.vars.clone(), other.vars.clone()));
        }
        Ok(self.orders.iter().zip(&other.orders).map(|(a, b)| *a.min(b)).collect())
    }

    fn empty_like(&self, orders: Vec<u32>) -> Self {
        TruncatedSeries { vars: self.vars.clone(), orders, coeffs: BTreeMap::new() }
    }

    /// Lowers the truncation orders (never raises them).
    pub fn truncate(&self, orders: &[u32]) -> SResult<Self> {
        self.check_arity(orders)?;
        let orders: Vec<u32> = self.orders.iter().zip(orders).map(|(a, b)| *a.min(b)).collect();
        let mut out = self.empty_like(orders);
        for (e, c) in &self.coeffs {
            out.insert(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> SResult<Self> {
        let orders = self.compatible(other)?;
        let mut out = self.empty_like(orders);
        for (e, c) in self.coeffs.iter().chain(&other.coeffs) {
            if out.in_range(e) {
                out.accumulate(e.clone(), c.clone());
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> SResult<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut out = self.empty_like(self.orders.clone());
        for (e, c) in &self.coeffs {
            out.insert(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> SResult<Self> {
        let orders = self.compatible(other)?;
        let mut out = self.empty_like(orders);
        let mut exps = vec![0u32; self.vars.len()];
        for (ea, ca) in &self.coeffs {
            if !out.in_range(ea) {
                continue;
            }
            for (eb, cb) in &other.coeffs {
                let mut ok = true;
                for i in 0..exps.len() {
                    exps[i] = ea[i] + eb[i];
                    if exps[i] >= out.orders[i] {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    out.accumulate(exps.clone(), ca * cb);
                }
            }
        }
        Ok(out)
    }

    pub fn power(&self, n: u32) -> Self {
        let mut result = self.empty_like(self.orders.clone());
        result.insert(vec![0; self.vars.len()], BigRational::one());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base).expect("same variables");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same variables");
            }
        }
        result
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeffs
            .get(&vec![0u32; self.vars.len()])
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Multiplicative inverse up to truncation.
    pub fn invert(&self) -> SResult<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(SeriesError::NonUnitConstant);
        }
        let c_inv = c.recip();
        // self = c (1 - r) with r free of constant term, so 1/self = c⁻¹ Σ r^k;
        // r is nilpotent once truncated.
        let one = {
            let mut o = self.empty_like(self.orders.clone());
            o.insert(vec![0; self.vars.len()], BigRational::one());
            o
        };
        let r = one.sub(&self.scale(&c_inv))?;
        let mut sum = one.clone();
        let mut term = one;
        loop {
            term = term.mul(&r)?;
            if term.is_empty() {
                break;
            }
            sum = sum.add(&term)?;
        }
        Ok(sum.scale(&c_inv))
    }

    /// Exact coefficient; zero when absent, an error beyond truncation.
    pub fn coefficient(&self, exponents: &[u32]) -> SResult<BigRational> {
        self.check_arity(exponents)?;
        if !self.in_range(exponents) {
            return Err(SeriesError::BeyondTruncation {
                exponents: exponents.to_vec(),
                orders: self.orders.clone(),
            });
        }
        Ok(self.coeffs.get(exponents).cloned().unwrap_or_else(BigRational::zero))
    }

    /// Coefficient known to be a nonnegative integer, as `u64`.
    pub fn count(&self, exponents: &[u32]) -> SResult<u64> {
        let c = self.coefficient(exponents)?;
        if !c.is_integer() || c.is_negative() {
            return Err(SeriesError::NotIntegral(c.to_string()));
        }
        c.to_integer()
            .to_u64()
            .ok_or_else(|| SeriesError::NotIntegral(c.to_string()))
    }

    /// Substitutes every variable by the single variable `name`, mapping
    /// `x^e` to `name^{Σ e}`. Only total degrees below `min(orders)` are exact.
    pub fn specialize_diagonal(&self, name: &str) -> Self {
        let order = self.orders.iter().copied().min().unwrap_or(0);
        let mut out = TruncatedSeries {
            vars: vec![name.to_string()],
            orders: vec![order],
            coeffs: BTreeMap::new(),
        };
        for (e, c) in &self.coeffs {
            let d: u32 = e.iter().sum();
            if d < order {
                out.accumulate(vec![d], c.clone());
            }
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    /// Human-readable polynomial ordered by total degree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(&Vec<u32>, &BigRational)> = self.coeffs.iter().collect();
        terms.sort_by_key(|(e, _)| (e.iter().sum::<u32>(), e.iter().rev().cloned().collect::<Vec<_>>()));
        if terms.is_empty() {
            f.write_str("0")?;
        }
        for (i, (e, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(p, _)| **p > 0)
                .map(|(p, v)| if *p == 1 { v.clone() } else { format!("{v}^{p}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        let bounds: Vec<String> = self
            .vars
            .iter()
            .zip(&self.orders)
            .map(|(v, o)| format!("{v}^{o}"))
            .collect();
        write!(f, " + O({})", bounds.join(", "))
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

mod terms_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Term {
        e: Vec<u32>,
        c: String,
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<Vec<u32>, BigRational>, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<Term> = m.iter().map(|(e, c)| Term { e: e.clone(), c: c.to_string() }).collect();
        terms.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Vec<u32>, BigRational>, D::Error> {
        let terms = Vec::<Term>::deserialize(d)?;
        terms
            .into_iter()
            .map(|t| {
                t.c.parse::<BigRational>()
                    .map(|c| (t.e, c))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}
