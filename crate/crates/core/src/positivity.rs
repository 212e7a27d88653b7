//! Codimension of the non-integral locus in a linear system and the
//! positivity conditions built on it.
//!
//! A non-integral member of `|β|` either splits into two nonzero nef parts
//! `β₁ + β₂` (stratum of dimension `dim|β₁| + dim|β₂| = dim|β| - β₁·β₂`), or
//! contains (−1)-curves, `β = γ + Σ nᵢ Lᵢ` with `γ` nef (stratum of dimension
//! `dim|γ|`, the exceptional part being rigid). Irreducible non-reduced
//! members `n·γ` lie in the closure of the split stratum `γ + (n−1)γ`.
//! The codimension is `dim|β|` minus the largest stratum dimension.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DelPezzoSurface, DivisorClass};
use crate::rational_serde;

/// One stratum of the non-integral locus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Stratum {
    /// `β = β₁ + β₂` with both parts nonzero and nef.
    Split {
        parts: [DivisorClass; 2],
        dimension: i64,
        intersection: i64,
    },
    /// `β = γ + Σ nᵢ Lᵢ` with `γ` nef (possibly zero) and `Lᵢ` (−1)-curves.
    Exceptional {
        nef_part: DivisorClass,
        curves: Vec<(DivisorClass, u32)>,
        dimension: i64,
    },
}

impl Stratum {
    pub fn dimension(&self) -> i64 {
        match self {
            Stratum::Split { dimension, .. } | Stratum::Exceptional { dimension, .. } => *dimension,
        }
    }

    /// Sum of the parts; equals `β` for every witness.
    pub fn recombine(&self) -> DivisorClass {
        match self {
            Stratum::Split { parts, .. } => &parts[0] + &parts[1],
            Stratum::Exceptional { nef_part, curves, .. } => curves
                .iter()
                .fold(nef_part.clone(), |acc, (c, n)| &acc + &(*n as i64 * c)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodimReport {
    pub surface: String,
    pub beta: DivisorClass,
    pub dim_linear_system: i64,
    /// `None` when every member of `|β|` is integral.
    pub exact_codim: Option<i64>,
    pub witness: Option<Stratum>,
    /// `dim|β|` minus the largest split stratum.
    pub codim_split: Option<i64>,
    /// `dim|β|` minus the largest stratum containing (−1)-curves.
    pub codim_exceptional: Option<i64>,
    /// `β(β−K)/4`, present when `β` is a proper multiple of a nef class.
    #[serde(with = "rational_serde::option")]
    pub bound_z1: Option<BigRational>,
    /// `min β₁·β₂` over nef splits.
    #[serde(with = "rational_serde::option")]
    pub bound_z2: Option<BigRational>,
    /// `min (β−K)·L / 2` over (−1)-curves `L`.
    #[serde(with = "rational_serde::option")]
    pub bound_z3: Option<BigRational>,
    pub split_count: usize,
}

impl CodimReport {
    /// Smallest of the three lower bounds that are present.
    pub fn combined_bound(&self) -> Option<BigRational> {
        [&self.bound_z1, &self.bound_z2, &self.bound_z3]
            .into_iter()
            .flatten()
            .min()
            .cloned()
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn codim_nonintegral(s: &DelPezzoSurface, beta: &DivisorClass) -> Result<CodimReport> {
    s.check(beta)?;
    if !s.nef(beta) || s.square(beta) <= 0 {
        return Err(Error::NotCertified(format!(
            "codimension engine needs a nef class of positive square, got {beta}"
        )));
    }
    let dim = s.chi(beta) - 1;
    let degree = s.degree(beta);
    let h_bound = s.dot(beta, &s.h());

    // type (a): unordered nef splits
    let mut best_split: Option<Stratum> = None;
    let mut min_product: Option<i64> = None;
    let mut split_count = 0usize;
    for b1 in s.nef_classes_in(degree, Some(h_bound)) {
        if b1.is_zero() {
            continue;
        }
        let b2 = beta - &b1;
        if b2.is_zero() || b1 > b2 || !s.nef(&b2) {
            continue;
        }
        split_count += 1;
        let d1 = s.chi(&b1) - 1;
        let d2 = s.chi(&b2) - 1;
        let product = s.dot(&b1, &b2);
        if dim - d1 - d2 != product {
            return Err(Error::Invariant(format!(
                "dim|{beta}| - dim|{b1}| - dim|{b2}| != {b1}·{b2}"
            )));
        }
        min_product = Some(min_product.map_or(product, |m| m.min(product)));
        if best_split.as_ref().is_none_or(|b| d1 + d2 > b.dimension()) {
            best_split = Some(Stratum::Split {
                parts: [b1, b2],
                dimension: d1 + d2,
                intersection: product,
            });
        }
    }

    // type (b): nef part plus a nonempty combination of (−1)-curves
    let curves = s.minus_one_curves();
    let mut best_exceptional: Option<Stratum> = None;
    if !curves.is_empty() {
        let mut candidates: Vec<(i64, DivisorClass)> = s
            .nef_classes_in(degree - 1, Some(h_bound))
            .into_iter()
            .map(|g| (s.chi(&g) - 1, g))
            .collect();
        candidates.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        let mut solver = ExceptionalSolver::new(s);
        for (gdim, gamma) in candidates {
            let rest = beta - &gamma;
            let n = degree - s.degree(&gamma);
            if let Some(counts) = solver.decompose(&rest, n) {
                let mut parts: Vec<(DivisorClass, u32)> = counts
                    .into_iter()
                    .map(|(i, k)| (curves[i].clone(), k))
                    .collect();
                parts.sort();
                best_exceptional = Some(Stratum::Exceptional {
                    nef_part: gamma,
                    curves: parts,
                    dimension: gdim,
                });
                break;
            }
        }
    }

    let codim_split = best_split.as_ref().map(|b| dim - b.dimension());
    let codim_exceptional = best_exceptional.as_ref().map(|b| dim - b.dimension());
    let witness = match (best_split, best_exceptional) {
        (Some(a), Some(b)) => Some(if b.dimension() > a.dimension() { b } else { a }),
        (a, b) => a.or(b),
    };
    if let Some(w) = &witness {
        if &w.recombine() != beta {
            return Err(Error::Invariant(format!("witness does not recombine to {beta}")));
        }
    }

    let content = beta.content();
    let bound_z1 = (content >= 2).then(|| ratio(s.square(beta) + degree, 4));
    let bound_z2 = min_product.map(|m| ratio(m, 1));
    let bound_z3 = curves
        .iter()
        .map(|l| s.dot(beta, l) + s.degree(l))
        .min()
        .map(|m| ratio(m, 2));

    Ok(CodimReport {
        surface: s.token(),
        beta: beta.clone(),
        dim_linear_system: dim,
        exact_codim: witness.as_ref().map(|w| dim - w.dimension()),
        witness,
        codim_split,
        codim_exceptional,
        bound_z1,
        bound_z2,
        bound_z3,
        split_count,
    })
}

/// Decides whether a class is a sum of exactly `n` (−1)-curves.
struct ExceptionalSolver<'a> {
    s: &'a DelPezzoSurface,
    curves: &'a [DivisorClass],
    /// Nef classes used to reject non-effective remainders early.
    tests: Vec<DivisorClass>,
    memo: HashMap<Vec<i64>, Option<usize>>,
}

impl<'a> ExceptionalSolver<'a> {
    fn new(s: &'a DelPezzoSurface) -> Self {
        let mut tests = vec![s.h(), s.anticanonical()];
        tests.extend(s.ruling_classes().iter().cloned());
        ExceptionalSolver { s, curves: s.minus_one_curves(), tests, memo: HashMap::new() }
    }

    fn feasible(&mut self, e: &DivisorClass, n: i64) -> bool {
        if n == 0 {
            return e.is_zero();
        }
        if n < 0 {
            return false;
        }
        if let Some(r) = self.memo.get(&e.coords) {
            return r.is_some();
        }
        let s = self.s;
        let mut found = None;
        if self.tests.iter().all(|t| s.dot(e, t) >= 0) {
            for i in 0..self.curves.len() {
                let rest = e - &self.curves[i];
                if self.feasible(&rest, n - 1) {
                    found = Some(i);
                    break;
                }
            }
        }
        self.memo.insert(e.coords.clone(), found);
        found.is_some()
    }

    /// Multiplicities `(curve index, n_i)` summing to `e`, if any.
    fn decompose(&mut self, e: &DivisorClass, n: i64) -> Option<Vec<(usize, u32)>> {
        if n < 1 || !self.feasible(e, n) {
            return None;
        }
        let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
        let mut cur = e.clone();
        while !cur.is_zero() {
            let i = self.memo.get(&cur.coords).copied().flatten()?;
            *counts.entry(i).or_default() += 1;
            cur = &cur - &self.curves[i];
        }
        Some(counts.into_iter().collect())
    }
}

/// Which positivity condition a report is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "i", rename_all = "snake_case")]
pub enum Condition {
    A(u32),
    ARelaxed(u32),
    P,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub name: String,
    pub passed: bool,
    /// The clause is checked through a numerical stand-in, not a proof.
    pub proxy: bool,
    pub evidence: BTreeMap<String, i64>,
}

impl Clause {
    fn new(name: impl Into<String>, passed: bool, proxy: bool, evidence: &[(&str, i64)]) -> Self {
        Clause {
            name: name.into(),
            passed,
            proxy,
            evidence: evidence.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub surface: String,
    pub beta: DivisorClass,
    pub passed: bool,
    pub clauses: Vec<Clause>,
}

impl ConditionReport {
    fn new(condition: Condition, s: &DelPezzoSurface, beta: &DivisorClass, clauses: Vec<Clause>) -> Self {
        ConditionReport {
            condition,
            surface: s.token(),
            beta: beta.clone(),
            passed: clauses.iter().all(|c| c.passed),
            clauses,
        }
    }

    pub fn failing(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VeryAmpleCertificate {
    pub k: u32,
    pub holds: bool,
    pub nef: bool,
    /// Test class with the smallest degree `β·C`.
    pub binding: Option<DivisorClass>,
    pub min_degree: Option<i64>,
}

/// Numerical k-very-ampleness criterion: `β` nef and `β·C ≥ k` for every
/// extremal effective class and every conic (ruling) class.
///
/// This is a criterion, not a decision procedure. On the plane it says
/// `d ≥ k`, on the quadric `min(a₁, a₂) ≥ k`.
pub fn is_k_very_ample(s: &DelPezzoSurface, beta: &DivisorClass, k: u32) -> Result<VeryAmpleCertificate> {
    s.check(beta)?;
    let nef = s.nef(beta);
    let mut binding: Option<(i64, DivisorClass)> = None;
    let gens = s.effective_cone_generators();
    for c in gens.iter().chain(s.ruling_classes()) {
        let d = s.dot(beta, c);
        if binding.as_ref().is_none_or(|(m, _)| d < *m) {
            binding = Some((d, c.clone()));
        }
    }
    let min_degree = binding.as_ref().map(|b| b.0);
    Ok(VeryAmpleCertificate {
        k,
        holds: nef && min_degree.is_none_or(|m| m >= k as i64),
        nef,
        binding: binding.map(|b| b.1),
        min_degree,
    })
}

fn ai_report(s: &DelPezzoSurface, beta: &DivisorClass, i: u32, relaxed: bool) -> Result<ConditionReport> {
    s.check(beta)?;
    let order = if relaxed { i.min(2) } else { i };
    let va = is_k_very_ample(s, beta, order)?;
    let mut clauses = Vec::with_capacity(4);
    let mut ev = vec![("k", order as i64), ("nef", va.nef as i64)];
    if let Some(m) = va.min_degree {
        ev.push(("min_test_degree", m));
    }
    clauses.push(Clause::new("very_ample", va.holds, true, &ev));

    let nef = va.nef;
    let dim = nef.then(|| s.chi(beta) - 1);
    let needed = 3 * i as i64 + 2;
    clauses.push(match dim {
        Some(d) => Clause::new(
            "dimension",
            2 * d >= needed,
            false,
            &[("dim", d), ("twice_dim", 2 * d), ("required", needed)],
        ),
        None => Clause::new("dimension", false, false, &[("required", needed)]),
    });

    let square = s.square(beta);
    clauses.push(Clause::new(
        "smooth_connected",
        nef && square > 0,
        true,
        &[("nef", nef as i64), ("square", square)],
    ));

    let threshold = i as i64 + 1;
    clauses.push(if nef && square > 0 {
        let report = codim_nonintegral(s, beta)?;
        match report.exact_codim {
            Some(c) => Clause::new(
                "non_integral_codim",
                2 * c > threshold,
                false,
                &[("codim", c), ("twice_codim", 2 * c), ("must_exceed", threshold)],
            ),
            None => Clause::new("non_integral_codim", true, false, &[("empty_locus", 1), ("must_exceed", threshold)]),
        }
    } else {
        Clause::new("non_integral_codim", false, false, &[("must_exceed", threshold)])
    });

    let cond = if relaxed { Condition::ARelaxed(i) } else { Condition::A(i) };
    Ok(ConditionReport::new(cond, s, beta, clauses))
}

/// Condition (A_i): i-very ample with `2 dim|β| ≥ 3i+2`, general member
/// smooth and connected, and `2 codim > i+1` for the non-integral locus.
pub fn check_ai(s: &DelPezzoSurface, beta: &DivisorClass, i: u32) -> Result<ConditionReport> {
    ai_report(s, beta, i, false)
}

/// (A_i) with only `min(i, 2)`-very ampleness demanded.
pub fn check_ai_relaxed(s: &DelPezzoSurface, beta: &DivisorClass, i: u32) -> Result<ConditionReport> {
    ai_report(s, beta, i, true)
}

/// The basis `{L_i}` used by condition (P): the standard coordinate basis.
pub fn standard_basis(s: &DelPezzoSurface) -> Vec<DivisorClass> {
    let rho = s.picard_rank();
    (0..rho).map(|i| DivisorClass::basis(rho, i)).collect()
}

/// Condition (P): (A₀), `p_a(β) > 0`, and for each basis class `L`, a
/// smooth connected member of `|β − L|` (proxy: nef with positive square)
/// meeting `L` in `N = L·(β−L) ≥ 2` points.
pub fn check_p(s: &DelPezzoSurface, beta: &DivisorClass) -> Result<ConditionReport> {
    s.check(beta)?;
    let a0 = check_ai(s, beta, 0)?;
    let mut clauses = vec![Clause::new("A0", a0.passed, a0.clauses.iter().any(|c| c.proxy), &[])];
    let genus = s.genus(beta);
    clauses.push(Clause::new("genus_positive", genus > 0, false, &[("p_a", genus)]));
    for (j, l) in standard_basis(s).iter().enumerate() {
        let residual = beta - l;
        let nef = s.nef(&residual);
        let sq = s.square(&residual);
        let meet = s.dot(l, &residual);
        clauses.push(Clause::new(
            format!("residual_{j}_smooth_connected"),
            nef && sq > 0,
            true,
            &[("nef", nef as i64), ("square", sq)],
        ));
        clauses.push(Clause::new(format!("residual_{j}_meets_twice"), meet >= 2, false, &[("points", meet)]));
    }
    Ok(ConditionReport::new(Condition::P, s, beta, clauses))
}

const MIN_N_LIMIT: u32 = 10_000;

/// Least `n ≥ 1` such that `n·β₀` satisfies (A_i).
pub fn min_n_for_ai(s: &DelPezzoSurface, beta0: &DivisorClass, i: u32) -> Result<u32> {
    s.check(beta0)?;
    if !s.ample(beta0) {
        return Err(Error::NotCertified(format!("{beta0} is not ample")));
    }
    for n in 1..=MIN_N_LIMIT {
        let beta = n as i64 * beta0;
        // cheap clauses first; the codimension is only computed when they pass
        if !is_k_very_ample(s, &beta, i)?.holds || 2 * (s.chi(&beta) - 1) < 3 * i as i64 + 2 {
            continue;
        }
        if check_ai(s, &beta, i)?.passed {
            return Ok(n);
        }
    }
    Err(Error::Invariant(format!("no n ≤ {MIN_N_LIMIT} satisfies (A_{i}) for {beta0}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(tok: &str) -> DelPezzoSurface {
        tok.parse().unwrap()
    }

    fn c(coords: &[i64]) -> DivisorClass {
        DivisorClass::new(coords.to_vec())
    }

    fn codim(tok: &str, coords: &[i64]) -> i64 {
        codim_nonintegral(&s(tok), &c(coords)).unwrap().exact_codim.unwrap()
    }

    #[test]
    fn plane_curves() {
        for d in 2..=10 {
            assert_eq!(codim("P2", &[d]), d - 1, "d = {d}");
        }
        assert_eq!(codim_nonintegral(&s("P2"), &c(&[1])).unwrap().exact_codim, None);
    }

    #[test]
    fn quadric_grid() {
        for a1 in 1..=6 {
            for a2 in 1..=6 {
                assert_eq!(codim("P1xP1", &[a1, a2]), a1.min(a2), "({a1},{a2})");
            }
        }
    }

    #[test]
    fn first_blowup_examples() {
        for (a, d) in [(3, 1), (5, 2), (7, 3), (4, 3)] {
            assert_eq!(codim("S1", &[a, -d]), (a - d).min(d + 1), "a={a} d={d}");
        }
    }

    #[test]
    fn refuses_non_nef_or_non_big() {
        assert!(codim_nonintegral(&s("S1"), &c(&[1, -2])).is_err());
        assert!(codim_nonintegral(&s("P1xP1"), &c(&[1, 0])).is_err());
    }

    #[test]
    fn report_bounds() {
        let r = codim_nonintegral(&s("S1"), &c(&[7, -2])).unwrap();
        assert_eq!(r.exact_codim, Some(3));
        assert_eq!(r.codim_split, Some(5));
        assert_eq!(r.codim_exceptional, Some(3));
        assert_eq!(r.bound_z2, Some(ratio(5, 1)));
        // (β − K)·e1 = 2 + 1
        assert_eq!(r.bound_z3, Some(ratio(3, 2)));
        assert_eq!(r.bound_z1, None);
        assert!(matches!(r.witness, Some(Stratum::Exceptional { .. })));

        let r = codim_nonintegral(&s("P2"), &c(&[4])).unwrap();
        assert_eq!(r.bound_z1, Some(ratio(16 + 12, 4)));
        assert_eq!(r.bound_z3, None);
        assert_eq!(r.split_count, 2);
    }

    #[test]
    fn very_ample_criterion() {
        for d in 0..6 {
            for k in 0..7u32 {
                let v = is_k_very_ample(&s("P2"), &c(&[d]), k).unwrap();
                assert_eq!(v.holds, d >= k as i64, "d={d} k={k}");
            }
        }
        for a1 in 0..4 {
            for a2 in 0..4 {
                for k in 0..5u32 {
                    let v = is_k_very_ample(&s("P1xP1"), &c(&[a1, a2]), k).unwrap();
                    assert_eq!(v.holds, a1.min(a2) >= k as i64);
                }
            }
        }
        let v = is_k_very_ample(&s("S3"), &s("S3").anticanonical(), 0).unwrap();
        assert!(v.holds);
    }

    #[test]
    fn condition_a_examples() {
        assert!(check_ai_relaxed(&s("P2"), &c(&[5]), 6).unwrap().passed);
        let r = check_ai(&s("P2"), &c(&[2]), 2).unwrap();
        assert!(!r.passed);
        assert!(r.failing().any(|c| c.name == "non_integral_codim"));
        assert!(check_ai_relaxed(&s("P1xP1"), &c(&[3, 3]), 4).unwrap().passed);
        assert!(!check_ai(&s("P1xP1"), &c(&[3, 3]), 4).unwrap().passed);
    }

    #[test]
    fn condition_p_examples() {
        assert!(check_p(&s("P2"), &c(&[4])).unwrap().passed);
        let r = check_p(&s("P2"), &c(&[2])).unwrap();
        assert!(!r.passed);
        assert!(r.failing().any(|c| c.name == "genus_positive"));
        assert!(check_p(&s("S2"), &c(&[4, -1, -1])).unwrap().passed);
    }

    #[test]
    fn minimal_multiples() {
        assert_eq!(min_n_for_ai(&s("P2"), &c(&[1]), 0).unwrap(), 1);
        assert_eq!(min_n_for_ai(&s("P2"), &c(&[1]), 4).unwrap(), 4);
        assert_eq!(min_n_for_ai(&s("P1xP1"), &c(&[1, 1]), 2).unwrap(), 2);
        assert!(min_n_for_ai(&s("P1xP1"), &c(&[1, 0]), 2).is_err());
    }

    /// All decompositions of `d·h` into components of degree `e_j` with
    /// multiplicity `n_j`, except the single reduced component.
    fn brute_force_plane(d: i64) -> i64 {
        fn dim(e: i64) -> i64 {
            e * (e + 3) / 2
        }
        // multisets of (degree, multiplicity) pairs with Σ n e = d
        fn rec(left: i64, min_pair: (i64, i64), acc: &mut Vec<(i64, i64)>, best: &mut i64) {
            if left == 0 {
                let integral = acc.len() == 1 && acc[0].1 == 1;
                if !integral {
                    *best = (*best).max(acc.iter().map(|(e, _)| dim(*e)).sum());
                }
                return;
            }
            for e in 1..=left {
                for n in 1..=left / e {
                    if (e, n) < min_pair {
                        continue;
                    }
                    acc.push((e, n));
                    rec(left - e * n, (e, n), acc, best);
                    acc.pop();
                }
            }
        }
        let mut best = -1;
        rec(d, (0, 0), &mut Vec::new(), &mut best);
        dim(d) - best
    }

    #[test]
    fn brute_force_agrees_on_plane() {
        for d in 2..=6 {
            assert_eq!(codim("P2", &[d]), brute_force_plane(d), "d = {d}");
        }
    }
}
