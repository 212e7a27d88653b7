//! Betti numbers of Hilbert schemes of points and of moduli of
//! one-dimensional sheaves.
//!
//! Göttsche's formula gives the Poincaré series of all `S^[n]` at once:
//!
//! ```text
//! Σ_n p(S^[n], z) tⁿ = Π_{m≥1} (1+z^{2m−1}tᵐ)^{b₁} (1+z^{2m+1}tᵐ)^{b₁}
//!                      / ((1−z^{2m−2}tᵐ)^{b₀} (1−z^{2m}tᵐ)^{b₂} (1−z^{2m+2}tᵐ)^{b₀})
//! ```
//!
//! Dropping the `m = 1`, `b₀` factor `1/(1−t)` and setting `t = 1` leaves
//! the stable series whose `z^k` coefficient is `lim_n b_k(S^[n])`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DelPezzoSurface, DivisorClass};
use crate::positivity::{self, ConditionReport};
use crate::series::{Monomial, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BettiContext {
    Hilbert { surface: String, m: u32 },
    Stable { surface: String },
    Moduli { surface: String, beta: DivisorClass, chi: i64 },
}

/// Betti numbers indexed by cohomological degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub context: BettiContext,
    #[serde(rename = "betti")]
    pub entries: BTreeMap<u32, u64>,
}

impl BettiTable {
    pub fn get(&self, k: u32) -> Option<u64> {
        self.entries.get(&k).copied()
    }

    /// One `k,value` row per entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,value\n");
        for (k, v) in &self.entries {
            out.push_str(&format!("{k},{v}\n"));
        }
        out
    }
}

type SeriesKey = (u32, u32, u32, u32, u32);

fn memo() -> &'static Mutex<HashMap<SeriesKey, Arc<TruncatedSeries>>> {
    static CACHE: OnceLock<Mutex<HashMap<SeriesKey, Arc<TruncatedSeries>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `Σ_n p(S^[n], z) tⁿ` modulo `z^{z_order}` and `t^{t_order}`.
pub fn goettsche_series(b0: u32, b1: u32, b2: u32, z_order: u32, t_order: u32) -> Result<TruncatedSeries> {
    if z_order == 0 || t_order == 0 {
        return Err(Error::InvalidArgument("series orders must be positive".into()));
    }
    let key = (b0, b1, b2, z_order, t_order);
    if let Some(s) = memo().lock().expect("series cache poisoned").get(&key) {
        return Ok((**s).clone());
    }
    let vars = ["z", "t"];
    let orders = [z_order, t_order];
    let mut acc = TruncatedSeries::one(&vars, &orders)?;
    // factors with m ≥ t_order only touch t-degrees ≥ t_order
    for m in 1..t_order {
        let geo = |zexp: u32| TruncatedSeries::geometric(&vars, &orders, &Monomial::new(vec![zexp, m]));
        acc = acc.mul(&geo(2 * m - 2)?.power(b0))?;
        acc = acc.mul(&geo(2 * m)?.power(b2))?;
        acc = acc.mul(&geo(2 * m + 2)?.power(b0))?;
        if b1 > 0 {
            for zexp in [2 * m - 1, 2 * m + 1] {
                let binom = TruncatedSeries::from_int_terms(&vars, &orders, &[(&[0, 0], 1), (&[zexp, m], 1)])?;
                acc = acc.mul(&binom.power(b1))?;
            }
        }
    }
    memo()
        .lock()
        .expect("series cache poisoned")
        .insert(key, Arc::new(acc.clone()));
    Ok(acc)
}

/// Reads `b_k(S^[m])` off a Göttsche series.
pub fn betti_from_series(series: &TruncatedSeries, m: u32, k: u32) -> Result<u64> {
    Ok(series.count(&[k, m])?)
}

/// `b_k(S^[m])`.
pub fn hilb_betti(s: &DelPezzoSurface, m: u32, k: u32) -> Result<u64> {
    let (b0, b1, b2) = s.betti();
    let series = goettsche_series(b0, b1, b2, k + 1, m + 1)?;
    betti_from_series(&series, m, k)
}

/// All Betti numbers of `S^[m]`, degrees `0..=4m`.
pub fn hilb_betti_table(s: &DelPezzoSurface, m: u32) -> Result<BettiTable> {
    let (b0, b1, b2) = s.betti();
    let top = 4 * m;
    let series = goettsche_series(b0, b1, b2, top + 1, m + 1)?;
    let entries = (0..=top)
        .map(|k| Ok((k, betti_from_series(&series, m, k)?)))
        .collect::<Result<_>>()?;
    Ok(BettiTable { context: BettiContext::Hilbert { surface: s.token(), m }, entries })
}

/// The stable series in `z` modulo `z^{z_order}`, for a surface with
/// `b₁ = 0` and the given `b₂`.
pub fn stable_series(b2: u32, z_order: u32) -> Result<TruncatedSeries> {
    let vars = ["z"];
    let orders = [z_order.max(1)];
    let geo = |zexp: u32| TruncatedSeries::geometric(&vars, &orders, &Monomial::new(vec![zexp]));
    let mut acc = geo(2)?.power(b2).mul(&geo(4)?)?;
    // the m-th factor starts in z-degree 2m−2, so m ≤ z_order/2 + 1 suffices;
    // running to z_order + 1 is harmless
    for m in 2..=z_order + 1 {
        acc = acc.mul(&geo(2 * m - 2)?)?;
        acc = acc.mul(&geo(2 * m)?.power(b2))?;
        acc = acc.mul(&geo(2 * m + 2)?)?;
    }
    Ok(acc)
}

/// `lim_m b_k(S^[m])`.
pub fn stable_betti(s: &DelPezzoSurface, k: u32) -> Result<u64> {
    let (_, _, b2) = s.betti();
    Ok(stable_series(b2, k + 1)?.count(&[k])?)
}

pub fn stable_betti_table(s: &DelPezzoSurface, max_k: u32) -> Result<BettiTable> {
    let (_, _, b2) = s.betti();
    let series = stable_series(b2, max_k + 1)?;
    let entries = (0..=max_k)
        .map(|k| Ok((k, series.count(&[k])?)))
        .collect::<Result<_>>()?;
    Ok(BettiTable { context: BettiContext::Stable { surface: s.token() }, entries })
}

/// Intersection-cohomology Betti number of `M_{β,χ}`: always the stable
/// value, flagged as certified when (A_k) or its relaxed form holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliBetti {
    pub k: u32,
    pub value: u64,
    pub certified: bool,
    pub strict: ConditionReport,
    pub relaxed: ConditionReport,
}

pub fn moduli_ih_betti(s: &DelPezzoSurface, beta: &DivisorClass, chi: i64, k: u32) -> Result<ModuliBetti> {
    s.check(beta)?;
    if !s.is_effective_cone(beta)? {
        return Err(Error::NotEffective);
    }
    let _ = chi; // the answer does not depend on χ
    let value = stable_betti(s, k)?;
    let strict = positivity::check_ai(s, beta, k)?;
    let relaxed = positivity::check_ai_relaxed(s, beta, k)?;
    Ok(ModuliBetti { k, value, certified: strict.passed || relaxed.passed, strict, relaxed })
}

/// Betti table of `M_{β,χ}` for degrees `0..=max_k`, with the certified
/// degrees listed separately.
pub fn moduli_betti_table(
    s: &DelPezzoSurface,
    beta: &DivisorClass,
    chi: i64,
    max_k: u32,
) -> Result<(BettiTable, Vec<u32>)> {
    let mut entries = BTreeMap::new();
    let mut certified = Vec::new();
    for k in 0..=max_k {
        let r = moduli_ih_betti(s, beta, chi, k)?;
        entries.insert(k, r.value);
        if r.certified {
            certified.push(k);
        }
    }
    let table = BettiTable {
        context: BettiContext::Moduli { surface: s.token(), beta: beta.clone(), chi },
        entries,
    };
    Ok((table, certified))
}

/// `dim M_β = β² + χ(O_S) = β² + 1` for nef `β` of positive square.
pub fn moduli_dimension(s: &DelPezzoSurface, beta: &DivisorClass) -> Result<i64> {
    s.check(beta)?;
    if !s.nef(beta) || s.square(beta) <= 0 {
        return Err(Error::NotCertified(format!("{beta} is not nef of positive square")));
    }
    Ok(s.square(beta) + 1)
}

/// Degree of the compactified Jacobian component: `χ + β(β+K)/2`.
pub fn jacobian_degree(s: &DelPezzoSurface, beta: &DivisorClass, chi: i64) -> Result<i64> {
    s.check(beta)?;
    Ok(chi + (s.square(beta) + s.dot(beta, &s.canonical)) / 2)
}

/// Dimension count showing `M_{nK}` is reducible on a surface of general
/// type with `q ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub chi_o: i64,
    pub q: i64,
    pub k2: i64,
    pub n: i64,
    pub dim_canonical_system: i64,
    pub beta_square: i64,
    pub fiber_lower_bound: i64,
    pub smooth_locus_dim: i64,
    pub singular_locus_lower_bound: i64,
    pub gap: i64,
    pub reducibility_certified: bool,
}

pub fn general_type_gap(chi_o: i64, q: i64, k2: i64, n: i64) -> Result<GapReport> {
    if q < 0 || k2 <= 0 || n < 2 {
        return Err(Error::InvalidArgument(format!(
            "need q ≥ 0, K² > 0 and n ≥ 2 (got q={q}, K²={k2}, n={n})"
        )));
    }
    let dim_canonical_system = chi_o + q - 2;
    let beta_square = n * n * k2;
    let fiber_lower_bound = beta_square + 1;
    let smooth_locus_dim = beta_square + chi_o;
    let singular_locus_lower_bound = dim_canonical_system + fiber_lower_bound;
    Ok(GapReport {
        chi_o,
        q,
        k2,
        n,
        dim_canonical_system,
        beta_square,
        fiber_lower_bound,
        smooth_locus_dim,
        singular_locus_lower_bound,
        gap: singular_locus_lower_bound - smooth_locus_dim,
        reducibility_certified: q >= 1,
    })
}
