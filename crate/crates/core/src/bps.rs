//! Refined BPS generating series for local P², low-degree refined BPS
//! numbers of del Pezzo surfaces, and the count of tautological monomials.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::DelPezzoSurface;
use crate::series::{Monomial, TruncatedSeries};

/// Conjectural product for local P²:
/// `Π_{i≥0} 1 / ((1−(qt)ⁱq²)(1−(qt)ⁱq²t²)(1−(qt)ⁱt²))`.
///
/// The result is exact for every `qᵃtᵇ` with `a, b ≤ max_total`; the
/// factors with `2i+2 > max_total` cannot reach total degree `max_total`.
pub fn refined_bps_series(max_total: u32) -> Result<TruncatedSeries> {
    let vars = ["q", "t"];
    let orders = [max_total + 1, max_total + 1];
    let mut acc = TruncatedSeries::one(&vars, &orders)?;
    let mut i = 0u32;
    while 2 * i + 2 <= max_total {
        for exps in [[i + 2, i], [i + 2, i + 2], [i, i + 2]] {
            let geo = TruncatedSeries::geometric(&vars, &orders, &Monomial::new(exps.to_vec()))?;
            acc = acc.mul(&geo)?;
        }
        i += 1;
    }
    Ok(acc)
}

/// Refined BPS numbers `n^{i,j}` for `i + j ≤ max_total`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BpsTable {
    #[serde(with = "entries_serde")]
    pub entries: BTreeMap<(u32, u32), u64>,
    pub max_total: u32,
    /// `2d − 4` when a curve degree `d` is given; entries with larger
    /// `i + j` lie outside the range where the product is conjectured.
    pub valid_total: Option<i64>,
}

impl BpsTable {
    pub fn get(&self, i: u32, j: u32) -> Option<u64> {
        self.entries.get(&(i, j)).copied()
    }

    pub fn in_valid_range(&self, i: u32, j: u32) -> bool {
        self.valid_total.is_none_or(|v| (i + j) as i64 <= v)
    }

    /// `Σ_{i+j=k} n^{i,j}`.
    pub fn total(&self, k: u32) -> u64 {
        self.entries
            .iter()
            .filter(|((i, j), _)| i + j == k)
            .map(|(_, n)| n)
            .sum()
    }

    /// Triangular text table: row `i+j`, columns `i = i+j, …, 0`; a `*`
    /// marks rows outside the valid range.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for k in 0..=self.max_total {
            let row: Vec<String> = (0..=k)
                .rev()
                .map(|i| self.get(i, k - i).unwrap_or(0).to_string())
                .collect();
            let mark = if self.valid_total.is_some_and(|v| k as i64 > v) { "*" } else { " " };
            let _ = writeln!(out, "{k:>3}{mark} {}", row.join(" "));
        }
        out
    }
}

mod entries_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<(u32, u32), u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        m.iter().map(|(&(i, j), &n)| [i as u64, j as u64, n]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<(u32, u32), u64>, D::Error> {
        let rows = Vec::<[u64; 3]>::deserialize(d)?;
        Ok(rows.into_iter().map(|[i, j, n]| ((i as u32, j as u32), n)).collect())
    }
}

/// Refined BPS numbers of local P² up to total degree `max_total`,
/// tagged with the valid range `2d − 4` when `degree` is given.
pub fn refined_bps_table(max_total: u32, degree: Option<i64>) -> Result<BpsTable> {
    let series = refined_bps_series(max_total)?;
    let mut entries = BTreeMap::new();
    for k in 0..=max_total {
        for i in 0..=k {
            entries.insert((i, k - i), series.count(&[i, k - i])?);
        }
    }
    Ok(BpsTable { entries, max_total, valid_total: degree.map(|d| 2 * d - 4) })
}

/// `(n^{0,2}, n^{1,1}, n^{2,0}) = (1, ρ−1, 1)`.
pub fn bps_low_degree(s: &DelPezzoSurface) -> BpsTable {
    let rho = s.picard_rank() as u64;
    let entries = BTreeMap::from([((0, 2), 1), ((1, 1), rho - 1), ((2, 0), 1)]);
    BpsTable { entries, max_total: 2, valid_total: None }
}

/// A tautological generator and its (halved) cohomological degree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TautGenerator {
    pub name: String,
    pub degree: u32,
}

/// Generators of degree `≤ max_degree`: `c₀(2)` and `c₁(1,j)` for
/// `j = 2..b₂` in degree 1, `c₁(2)` in degree 2, and for `m ≥ 2`
/// `c_m(0)`, `c_m(1,j)` (`j = 1..b₂`), `c_m(2)` in degrees `m−1, m, m+1`.
pub fn taut_generator_degrees(s: &DelPezzoSurface, max_degree: u32) -> Vec<TautGenerator> {
    let b2 = s.picard_rank() as u32;
    let mut out = Vec::new();
    let mut push = |name: String, degree: u32| {
        if degree <= max_degree {
            out.push(TautGenerator { name, degree });
        }
    };
    push("c_0(2)".into(), 1);
    for j in 2..=b2 {
        push(format!("c_1(1,{j})"), 1);
    }
    push("c_1(2)".into(), 2);
    for m in 2..=max_degree + 1 {
        push(format!("c_{m}(0)"), m - 1);
        for j in 1..=b2 {
            push(format!("c_{m}(1,{j})"), m);
        }
        push(format!("c_{m}(2)"), m + 1);
    }
    out.sort_by(|a, b| a.degree.cmp(&b.degree).then_with(|| a.name.cmp(&b.name)));
    out
}

/// Number of degree-`k` monomials in the tautological generators: the
/// `x^k` coefficient of `Π_g 1/(1 − x^{deg g})`.
pub fn taut_monomial_count(s: &DelPezzoSurface, k: u32) -> Result<u64> {
    let vars = ["x"];
    let orders = [k + 1];
    let mut acc = TruncatedSeries::one(&vars, &orders)?;
    for g in taut_generator_degrees(s, k) {
        acc = acc.mul(&TruncatedSeries::geometric(&vars, &orders, &Monomial::new(vec![g.degree]))?)?;
    }
    Ok(acc.count(&[k])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert;

    fn s(tok: &str) -> DelPezzoSurface {
        tok.parse().unwrap()
    }

    /// Brute-force expansion: enumerate exponent vectors of the factors
    /// directly and count those landing on `q^a t^b`.
    fn brute_bps(a: u32, b: u32) -> u64 {
        let mut gens = Vec::new();
        let mut i = 0;
        while 2 * i + 2 <= a + b {
            gens.extend([(i + 2, i), (i + 2, i + 2), (i, i + 2)]);
            i += 1;
        }
        fn rec(gens: &[(u32, u32)], a: u32, b: u32) -> u64 {
            match gens.split_first() {
                None => (a == 0 && b == 0) as u64,
                Some((&(x, y), rest)) => {
                    let mut total = 0;
                    let mut l = 0;
                    while l * x <= a && l * y <= b {
                        total += rec(rest, a - l * x, b - l * y);
                        l += 1;
                    }
                    total
                }
            }
        }
        rec(&gens, a, b)
    }

    #[test]
    fn low_degree_p2() {
        let t = refined_bps_table(4, None).unwrap();
        assert_eq!(t.get(0, 0), Some(1));
        assert_eq!((t.get(0, 2), t.get(1, 1), t.get(2, 0)), (Some(1), Some(0), Some(1)));
        let row4: Vec<u64> = (0..=4).rev().map(|i| t.get(i, 4 - i).unwrap()).collect();
        let oracle: Vec<u64> = (0..=4).rev().map(|i| brute_bps(i, 4 - i)).collect();
        assert_eq!(row4, oracle);
        assert_eq!(row4, vec![1, 1, 2, 1, 1]);
        assert_eq!(t.total(4), hilbert::stable_betti(&s("P2"), 4).unwrap());
    }

    #[test]
    fn brute_force_agrees() {
        let t = refined_bps_table(10, None).unwrap();
        for k in 0..=10 {
            for i in 0..=k {
                assert_eq!(t.get(i, k - i).unwrap(), brute_bps(i, k - i), "({i},{})", k - i);
            }
        }
    }

    #[test]
    fn symmetric_and_specializes() {
        let t = refined_bps_table(12, Some(5)).unwrap();
        for (&(i, j), &n) in &t.entries {
            assert_eq!(t.get(j, i), Some(n));
        }
        for k in 0..=12 {
            assert_eq!(t.total(k), hilbert::stable_betti(&s("P2"), k).unwrap(), "k = {k}");
        }
        assert!(t.in_valid_range(3, 3));
        assert!(!t.in_valid_range(4, 3));
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["valid_total"], 6);
        assert_eq!(v["entries"][0], serde_json::json!([0, 0, 1]));
        assert!(t.to_text().lines().nth(7).unwrap().starts_with("  7*"));
    }

    #[test]
    fn low_degree_all_surfaces() {
        for (tok, mid) in [("P2", 0), ("S3", 3), ("P1xP1", 1)] {
            let t = bps_low_degree(&s(tok));
            assert_eq!((t.get(0, 2), t.get(1, 1), t.get(2, 0)), (Some(1), Some(mid), Some(1)));
        }
    }

    #[test]
    fn generator_degrees() {
        let g = taut_generator_degrees(&s("P2"), 1);
        let names: Vec<&str> = g.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, vec!["c_0(2)", "c_2(0)"]);
        let deg1 = taut_generator_degrees(&s("S2"), 1).len();
        assert_eq!(deg1, 4);
        let deg2: Vec<String> = taut_generator_degrees(&s("P2"), 2)
            .into_iter()
            .filter(|g| g.degree == 2)
            .map(|g| g.name)
            .collect();
        assert_eq!(deg2, vec!["c_1(2)", "c_2(1,1)", "c_3(0)"]);
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(taut_monomial_count(&s("P2"), 1).unwrap(), 2);
        assert_eq!(taut_monomial_count(&s("P2"), 2).unwrap(), 6);
        for surf in DelPezzoSurface::all() {
            assert_eq!(taut_monomial_count(&surf, 0).unwrap(), 1);
        }
    }
}
