//! Sampled evaluation-map check of k-very ampleness.
//!
//! Sections of `β` are modelled over `F_p` in an affine chart: monomials
//! of bounded degree, cut down on `S_δ` by vanishing to order `mᵢ` at
//! random points `p₁, …, p_δ`. A sample is `k + 1` distinct points, either
//! generic or on a low-degree rational curve, and it passes when the
//! evaluation matrix has rank `k + 1`.
//!
//! A point of the exceptional curve `eᵢ` is a tangent direction `v` at
//! `pᵢ`; a section restricts there to its degree-`mᵢ` Taylor form at `v`.
//! Only reduced subschemes on a few curve types are sampled, so a failure
//! disproves k-very ampleness but a pass proves nothing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DelPezzoSurface, DivisorClass, SurfaceKind};

const P: u64 = 2_147_483_647;

fn add(a: u64, b: u64) -> u64 {
    (a + b) % P
}

fn sub(a: u64, b: u64) -> u64 {
    (a + P - b) % P
}

fn mul(a: u64, b: u64) -> u64 {
    a * b % P
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

/// `n (n−1) ⋯ (n−s+1)` mod p.
fn falling(n: u32, s: u32) -> u64 {
    (0..s).fold(1, |acc, i| mul(acc, (n - i) as u64))
}

type Point = (u64, u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sample {
    At(Point),
    /// Direction `(1, slope)` at the `i`-th blown-up point.
    Tangent(usize, u64),
}

/// Row-reduces in place and returns the pivot columns.
fn rref(m: &mut [Vec<u64>]) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(r) = (row..m.len()).find(|&r| m[r][col] != 0) else { continue };
        m.swap(row, r);
        let scale = inv(m[row][col]);
        for x in m[row].iter_mut() {
            *x = mul(*x, scale);
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..cols {
                    m[r][c] = sub(m[r][c], mul(f, m[row][c]));
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

/// Basis of `{v : m·v = 0}`.
fn kernel(mut m: Vec<Vec<u64>>, cols: usize) -> Vec<Vec<u64>> {
    if m.is_empty() {
        return (0..cols).map(|i| (0..cols).map(|j| (i == j) as u64).collect()).collect();
    }
    let pivots = rref(&mut m);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = sub(0, m[r][free]);
            }
            v
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    Generic,
    Line,
    LineThroughPoint,
    LineThroughTwoPoints,
    ConicThroughFivePoints,
    Exceptional,
    FirstRuling,
    SecondRuling,
    Diagonal,
}

struct Model {
    monomials: Vec<(u32, u32)>,
    sections: Vec<Vec<u64>>,
    blown_up: Vec<Point>,
    multiplicities: Vec<u32>,
    quadric: bool,
}

impl Model {
    fn new(s: &DelPezzoSurface, beta: &DivisorClass, rng: &mut ChaCha8Rng) -> Result<Self> {
        let c = &beta.coords;
        match s.kind {
            SurfaceKind::QuadricProduct => {
                let (a1, a2) = (c[0] as u32, c[1] as u32);
                let monomials: Vec<_> = (0..=a1).flat_map(|i| (0..=a2).map(move |j| (i, j))).collect();
                let sections = kernel(Vec::new(), monomials.len());
                Ok(Self { monomials, sections, blown_up: Vec::new(), multiplicities: Vec::new(), quadric: true })
            }
            _ => {
                let a = c[0] as u32;
                let monomials: Vec<_> = (0..=a).flat_map(|i| (0..=a - i).map(move |j| (i, j))).collect();
                let blown_up: Vec<Point> = (1..c.len()).map(|_| (rng.gen_range(0..P), rng.gen_range(0..P))).collect();
                let mut conditions = Vec::new();
                for (idx, &(px, py)) in blown_up.iter().enumerate() {
                    let mult = (-c[idx + 1]) as u32;
                    for order in 0..mult {
                        for sx in 0..=order {
                            let sy = order - sx;
                            conditions.push(
                                monomials
                                    .iter()
                                    .map(|&(i, j)| {
                                        if i < sx || j < sy {
                                            0
                                        } else {
                                            let f = mul(falling(i, sx), falling(j, sy));
                                            mul(f, mul(pow(px, (i - sx) as u64), pow(py, (j - sy) as u64)))
                                        }
                                    })
                                    .collect(),
                            );
                        }
                    }
                }
                let sections = kernel(conditions, monomials.len());
                let multiplicities = c[1..].iter().map(|&b| (-b) as u32).collect();
                Ok(Self { monomials, sections, blown_up, multiplicities, quadric: false })
            }
        }
    }

    fn eval(&self, section: &[u64], at: Sample) -> u64 {
        let term = |i: u32, j: u32| match at {
            Sample::At((x, y)) => mul(pow(x, i as u64), pow(y, j as u64)),
            Sample::Tangent(idx, slope) => {
                // Σ_{sx+sy=m} C(i,sx) C(j,sy) px^{i−sx} py^{j−sy} slope^{sy}
                let (px, py) = self.blown_up[idx];
                let m = self.multiplicities[idx];
                (0..=m).fold(0, |acc, sy| {
                    let sx = m - sy;
                    if i < sx || j < sy {
                        return acc;
                    }
                    let binom = mul(mul(falling(i, sx), inv(falling(sx, sx))), mul(falling(j, sy), inv(falling(sy, sy))));
                    let v = mul(binom, mul(pow(px, (i - sx) as u64), pow(py, (j - sy) as u64)));
                    add(acc, mul(v, pow(slope, sy as u64)))
                })
            }
        };
        self.monomials
            .iter()
            .zip(section)
            .filter(|(_, &c)| c != 0)
            .fold(0, |acc, (&(i, j), &c)| add(acc, mul(c, term(i, j))))
    }

    fn supports(&self) -> Vec<Support> {
        if self.quadric {
            return vec![Support::Generic, Support::FirstRuling, Support::SecondRuling, Support::Diagonal];
        }
        let mut out = vec![Support::Generic, Support::Line];
        let n = self.blown_up.len();
        if n >= 1 {
            out.push(Support::LineThroughPoint);
            out.push(Support::Exceptional);
        }
        if n >= 2 {
            out.push(Support::LineThroughTwoPoints);
        }
        if n >= 5 {
            out.push(Support::ConicThroughFivePoints);
        }
        out
    }

    /// Points `base + t·dir` for fresh nonzero `t`.
    fn on_line(&self, base: Point, dir: Point, count: usize, avoid: &[u64], rng: &mut ChaCha8Rng) -> Vec<Point> {
        let mut ts: Vec<u64> = Vec::with_capacity(count);
        while ts.len() < count {
            let t = rng.gen_range(1..P);
            if !ts.contains(&t) && !avoid.contains(&t) {
                ts.push(t);
            }
        }
        ts.into_iter()
            .map(|t| (add(base.0, mul(t, dir.0)), add(base.1, mul(t, dir.1))))
            .collect()
    }

    /// Points on the conic through the first five blown-up points: the
    /// line through `p₁` in direction `v` meets it again at `t = −∇f·v / f₂(v)`.
    fn on_conic(&self, count: usize, rng: &mut ChaCha8Rng) -> Option<Vec<Point>> {
        let monos: [(u32, u32); 6] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
        let rows: Vec<Vec<u64>> = self.blown_up[..5]
            .iter()
            .map(|&(x, y)| monos.iter().map(|&(i, j)| mul(pow(x, i as u64), pow(y, j as u64))).collect())
            .collect();
        let f = kernel(rows, 6).into_iter().next()?;
        let (px, py) = self.blown_up[0];
        let grad = (add(f[1], add(mul(2, mul(f[3], px)), mul(f[4], py))), add(f[2], add(mul(f[4], px), mul(2, mul(f[5], py)))));
        let mut pts = Vec::with_capacity(count);
        let mut guard = 0;
        while pts.len() < count && guard < 100 * count {
            guard += 1;
            let v = (rng.gen_range(0..P), rng.gen_range(0..P));
            let quad = add(mul(f[3], mul(v.0, v.0)), add(mul(f[4], mul(v.0, v.1)), mul(f[5], mul(v.1, v.1))));
            let lin = add(mul(grad.0, v.0), mul(grad.1, v.1));
            if quad == 0 || lin == 0 {
                continue;
            }
            let t = sub(0, mul(lin, inv(quad)));
            let q = (add(px, mul(t, v.0)), add(py, mul(t, v.1)));
            if !pts.contains(&q) && !self.blown_up.contains(&q) {
                pts.push(q);
            }
        }
        (pts.len() == count).then_some(pts)
    }

    fn sample(&self, support: Support, count: usize, rng: &mut ChaCha8Rng) -> Option<Vec<Sample>> {
        if support == Support::Exceptional {
            let idx = rng.gen_range(0..self.blown_up.len());
            let mut slopes: Vec<u64> = Vec::with_capacity(count);
            while slopes.len() < count {
                let t = rng.gen_range(0..P);
                if !slopes.contains(&t) {
                    slopes.push(t);
                }
            }
            return Some(slopes.into_iter().map(|t| Sample::Tangent(idx, t)).collect());
        }
        let mut rand_point = || (rng.gen_range(0..P), rng.gen_range(0..P));
        let pts = match support {
            Support::Generic => (0..count).map(|_| rand_point()).collect(),
            Support::Line => {
                let (base, dir) = (rand_point(), rand_point());
                self.on_line(base, dir, count, &[], rng)
            }
            Support::LineThroughPoint => {
                let p = self.blown_up[rng.gen_range(0..self.blown_up.len())];
                let dir = (rng.gen_range(0..P), rng.gen_range(0..P));
                self.on_line(p, dir, count, &[], rng)
            }
            Support::LineThroughTwoPoints => {
                let n = self.blown_up.len();
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                let (p, q) = (self.blown_up[i], self.blown_up[j]);
                self.on_line(p, (sub(q.0, p.0), sub(q.1, p.1)), count, &[1], rng)
            }
            Support::ConicThroughFivePoints => self.on_conic(count, rng)?,
            Support::Exceptional => unreachable!("handled above"),
            Support::FirstRuling => {
                let x = rng.gen_range(0..P);
                self.on_line((x, 0), (0, 1), count, &[], rng)
            }
            Support::SecondRuling => {
                let y = rng.gen_range(0..P);
                self.on_line((0, y), (1, 0), count, &[], rng)
            }
            Support::Diagonal => {
                let (base, dir) = ((rng.gen_range(0..P), rng.gen_range(0..P)), (1, rng.gen_range(1..P)));
                self.on_line(base, dir, count, &[], rng)
            }
        };
        let distinct = pts.iter().enumerate().all(|(i, p)| !pts[..i].contains(p) && !self.blown_up.contains(p));
        distinct.then(|| pts.into_iter().map(Sample::At).collect())
    }

    fn rank_at(&self, pts: &[Sample]) -> usize {
        let mut m: Vec<Vec<u64>> = pts.iter().map(|&q| self.sections.iter().map(|s| self.eval(s, q)).collect()).collect();
        rref(&mut m).len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledVeryAmple {
    pub k: u32,
    pub trials: u32,
    pub sections: usize,
    /// `false` once a sample fails to impose independent conditions.
    pub consistent: bool,
    pub failure: Option<Support>,
}

/// Samples `trials` subschemes of length `k + 1` and checks that each one
/// imposes independent conditions on `H⁰(β)`. `β` must be nef.
pub fn very_ample_sampled(
    s: &DelPezzoSurface,
    beta: &DivisorClass,
    k: u32,
    trials: u32,
    seed: u64,
) -> Result<SampledVeryAmple> {
    s.check(beta)?;
    if !s.nef(beta) {
        return Err(Error::NotCertified(format!("{beta} is not nef")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let model = Model::new(s, beta, &mut rng)?;
    let expected = s.chi(beta);
    if model.sections.len() as i64 != expected {
        return Err(Error::Invariant(format!(
            "{} sections of {beta} over F_p, Riemann–Roch gives {expected}",
            model.sections.len()
        )));
    }
    let supports = model.supports();
    let count = k as usize + 1;
    let mut report = SampledVeryAmple { k, trials, sections: model.sections.len(), consistent: true, failure: None };
    if count > model.sections.len() {
        report.consistent = false;
        report.failure = Some(Support::Generic);
        return Ok(report);
    }
    for trial in 0..trials {
        let support = supports[trial as usize % supports.len()];
        let Some(pts) = model.sample(support, count, &mut rng) else { continue };
        if model.rank_at(&pts) < count {
            report.consistent = false;
            report.failure = Some(support);
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::positivity::is_k_very_ample;

    fn s(tok: &str) -> DelPezzoSurface {
        tok.parse().unwrap()
    }

    fn c(coords: &[i64]) -> DivisorClass {
        DivisorClass::new(coords.to_vec())
    }

    fn agrees(tok: &str, coords: &[i64], max_k: u32) {
        let surf = s(tok);
        let beta = c(coords);
        for k in 0..=max_k {
            let criterion = is_k_very_ample(&surf, &beta, k).unwrap().holds;
            let sampled = very_ample_sampled(&surf, &beta, k, 40, 7).unwrap();
            assert_eq!(sampled.consistent, criterion, "{tok} {beta} k={k}: {sampled:?}");
        }
    }

    #[test]
    fn field_arithmetic() {
        assert_eq!(mul(inv(12345), 12345), 1);
        assert_eq!(falling(5, 2), 20);
        let ker = kernel(vec![vec![1, 1, 0]], 3);
        assert_eq!(ker.len(), 2);
    }

    #[test]
    fn plane_matches_criterion() {
        for d in 1..=6 {
            agrees("P2", &[d], d as u32 + 2);
        }
    }

    #[test]
    fn quadric_matches_criterion() {
        for a1 in 1..=4 {
            for a2 in 1..=4 {
                agrees("P1xP1", &[a1, a2], 5);
            }
        }
    }

    #[test]
    fn blowups_match_criterion() {
        agrees("S1", &[3, -1], 3);
        agrees("S1", &[5, -2], 4);
        agrees("S2", &[4, -1, -2], 3);
        agrees("S3", &[3, -1, -1, -1], 2);
    }

    #[test]
    fn conic_through_five_points() {
        // degree 0 on the conic, degree 1 on lines through two points
        let s5 = s("S5");
        let beta = c(&[5, -2, -2, -2, -2, -2]);
        let r = very_ample_sampled(&s5, &beta, 1, 40, 3).unwrap();
        assert!(!r.consistent);
        assert_eq!(r.failure, Some(Support::ConicThroughFivePoints));
        assert!(!is_k_very_ample(&s5, &beta, 1).unwrap().holds);
    }

    #[test]
    fn section_count_matches_riemann_roch() {
        for tok in ["S4", "S6", "S8"] {
            let surf = s(tok);
            let r = very_ample_sampled(&surf, &surf.anticanonical(), 0, 5, 1).unwrap();
            assert_eq!(r.sections as i64, surf.chi_line_bundle(&surf.anticanonical()).unwrap());
        }
    }
}
