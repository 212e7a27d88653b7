//! Sparse multivariate polynomials over ℚ with named indeterminates.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg::rat;

/// A monomial as sorted `(variable, exponent)` pairs; the empty monomial is 1.
pub type Term = Vec<(String, u32)>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Term, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Self::zero();
        p.insert(Vec::new(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    pub fn var(name: &str) -> Self {
        let mut p = Self::zero();
        p.insert(vec![(name.to_string(), 1)], BigRational::one());
        p
    }

    fn insert(&mut self, t: Term, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &BigRational)> {
        self.terms.iter()
    }

    /// The value if the polynomial has no indeterminates.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn variables(&self) -> Vec<String> {
        let mut v: Vec<String> = self.terms.keys().flatten().map(|(n, _)| n.clone()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.insert(t.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(t, c)| (t.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(t, c)| (t.clone(), c * k)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ta, ca) in &self.terms {
            for (tb, cb) in &other.terms {
                out.insert(merge(ta, tb), ca * cb);
            }
        }
        out
    }

    /// Replaces each listed variable by a constant.
    pub fn substitute(&self, values: &BTreeMap<String, BigRational>) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Term::new();
            for (v, e) in t {
                match values.get(v) {
                    Some(x) => coeff *= num_traits::pow(x.clone(), *e as usize),
                    None => rest.push((v.clone(), *e)),
                }
            }
            out.insert(rest, coeff);
        }
        out
    }
}

fn merge(a: &Term, b: &Term) -> Term {
    let mut m: BTreeMap<String, u32> = a.iter().cloned().collect();
    for (v, e) in b {
        *m.entry(v.clone()).or_insert(0) += e;
    }
    m.into_iter().collect()
}

impl From<i64> for Poly {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

/// Determinant by Laplace expansion over column subsets, so no division
/// is needed and indeterminates stay symbolic.
pub fn determinant(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        return Poly::int(1);
    }
    // minors[mask] = det of the top |mask| rows restricted to columns in mask
    let mut minors: Vec<Option<Poly>> = vec![None; 1 << n];
    minors[0] = Some(Poly::int(1));
    for mask in 1usize..(1 << n) {
        let row = mask.count_ones() as usize - 1;
        let mut acc = Poly::zero();
        let mut sign_pos = row % 2 == 0;
        for col in 0..n {
            if mask & (1 << col) == 0 {
                continue;
            }
            let entry = &m[row][col];
            if !entry.is_zero() {
                let sub = minors[mask & !(1 << col)].as_ref().expect("smaller minors first");
                let prod = entry.mul(sub);
                acc = if sign_pos { acc.add(&prod) } else { acc.sub(&prod) };
            }
            sign_pos = !sign_pos;
        }
        minors[mask] = Some(acc);
    }
    minors.pop().flatten().expect("full minor")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by_key(|(t, _)| (t.iter().map(|(_, e)| *e).sum::<u32>(), (*t).clone()));
        for (idx, (t, c)) in ordered.into_iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let mono: Vec<String> = t
                .iter()
                .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Poly {
        Poly::var("x")
    }

    fn y() -> Poly {
        Poly::var("y")
    }

    #[test]
    fn arithmetic_and_display() {
        let p = x().add(&Poly::int(1));
        let q = x().sub(&Poly::int(1));
        assert_eq!(p.mul(&q).to_string(), "-1 + x^2");
        assert!(p.sub(&p).is_zero());
        assert_eq!(x().mul(&y()).scale(&rat(-3)).add(&y()).to_string(), "y - 3*x*y");
        assert_eq!(Poly::int(7).as_constant(), Some(rat(7)));
        assert_eq!(x().as_constant(), None);
    }

    #[test]
    fn substitution() {
        let p = x().mul(&x()).add(&y());
        let vals = BTreeMap::from([("x".to_string(), rat(3))]);
        assert_eq!(p.substitute(&vals), y().add(&Poly::int(9)));
    }

    #[test]
    fn determinant_matches_integer_bareiss() {
        let ints = vec![vec![2, -1, 0, 3], vec![1, 4, 2, 0], vec![0, 5, -2, 1], vec![7, 0, 1, 1]];
        let polys: Vec<Vec<Poly>> = ints.iter().map(|r| r.iter().map(|&v| Poly::int(v)).collect()).collect();
        let expected = crate::linalg::det_i64(&ints);
        assert_eq!(determinant(&polys).as_constant().unwrap(), BigRational::from_integer(expected));
        let odd = vec![vec![0, 2, 1], vec![3, -1, 4], vec![1, 1, 5]];
        let polys: Vec<Vec<Poly>> = odd.iter().map(|r| r.iter().map(|&v| Poly::int(v)).collect()).collect();
        let expected = crate::linalg::det_i64(&odd);
        assert_eq!(determinant(&polys).as_constant().unwrap(), BigRational::from_integer(expected));
    }

    #[test]
    fn symbolic_determinant() {
        // det [[x, y], [y, x]] = x² − y²
        let m = vec![vec![x(), y()], vec![y(), x()]];
        assert_eq!(determinant(&m), x().mul(&x()).sub(&y().mul(&y())));
        assert_eq!(determinant(&[]), Poly::int(1));
    }
}
