//! Intersection theory on the Picard lattice of a del Pezzo surface.
//!
//! Classes are integer vectors in the standard basis: `h` for the plane,
//! `h1, h2` for the quadric, and `h, e1, ..., e_δ` for the blowup of the
//! plane in δ general points. The pairing is `diag(1, -1, ..., -1)` on a
//! blowup and the hyperbolic plane on the quadric.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Deformation class of a del Pezzo surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SurfaceKind {
    ProjectivePlane,
    QuadricProduct,
    /// Blowup of the plane in `δ` general points, `1 ≤ δ ≤ 8`.
    BlowupPlane(u8),
}

/// A divisor class in the standard basis of its surface.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass {
    pub coords: Vec<i64>,
}

impl DivisorClass {
    pub fn new(coords: Vec<i64>) -> Self {
        DivisorClass { coords }
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass { coords: vec![0; rank] }
    }

    /// The i-th standard basis vector.
    pub fn basis(rank: usize, i: usize) -> Self {
        let mut coords = vec![0; rank];
        coords[i] = 1;
        DivisorClass { coords }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Largest `n` with `self = n · D` for an integral `D` (0 for the zero class).
    pub fn content(&self) -> i64 {
        self.coords
            .iter()
            .fold(0i64, |g, &c| num_integer::gcd(g, c))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for DivisorClass {
    type Err = Error;

    /// Parses the comma-separated form, e.g. `5,-2`.
    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::MalformedClass(s.to_string()))?;
        if coords.is_empty() {
            return Err(Error::MalformedClass(s.to_string()));
        }
        Ok(DivisorClass { coords })
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.rank(), rhs.rank(), "classes from different lattices");
        DivisorClass::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.rank(), rhs.rank(), "classes from different lattices");
        DivisorClass::new(self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass::new(self.coords.iter().map(|a| -a).collect())
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass::new(rhs.coords.iter().map(|a| self * a).collect())
    }
}

/// One of the ten deformation classes of del Pezzo surfaces together with
/// its lattice data.
#[derive(Debug, Clone, Serialize)]
pub struct DelPezzoSurface {
    pub kind: SurfaceKind,
    pub gram: Vec<Vec<i64>>,
    pub canonical: DivisorClass,
    #[serde(skip)]
    minus_one: OnceLock<Vec<DivisorClass>>,
    #[serde(skip)]
    conics: OnceLock<Vec<DivisorClass>>,
}

impl PartialEq for DelPezzoSurface {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}
impl Eq for DelPezzoSurface {}

impl DelPezzoSurface {
    pub fn new(kind: SurfaceKind) -> Result<Self> {
        let (gram, canonical) = match kind {
            SurfaceKind::ProjectivePlane => (vec![vec![1]], vec![-3]),
            SurfaceKind::QuadricProduct => (vec![vec![0, 1], vec![1, 0]], vec![-2, -2]),
            SurfaceKind::BlowupPlane(d) => {
                if !(1..=8).contains(&d) {
                    return Err(Error::InvalidArgument(format!(
                        "blowup of the plane needs 1..=8 points, got {d}"
                    )));
                }
                let rho = d as usize + 1;
                let mut gram = vec![vec![0; rho]; rho];
                gram[0][0] = 1;
                for (i, row) in gram.iter_mut().enumerate().skip(1) {
                    row[i] = -1;
                }
                let mut k = vec![1; rho];
                k[0] = -3;
                (gram, k)
            }
        };
        Ok(DelPezzoSurface {
            kind,
            gram,
            canonical: DivisorClass::new(canonical),
            minus_one: OnceLock::new(),
            conics: OnceLock::new(),
        })
    }

    pub fn projective_plane() -> Self {
        Self::new(SurfaceKind::ProjectivePlane).expect("static surface")
    }

    pub fn quadric() -> Self {
        Self::new(SurfaceKind::QuadricProduct).expect("static surface")
    }

    pub fn blowup(points: u8) -> Result<Self> {
        Self::new(SurfaceKind::BlowupPlane(points))
    }

    /// All ten surfaces, in the order P², P¹×P¹, S₁, …, S₈.
    pub fn all() -> Vec<Self> {
        let mut v = vec![Self::projective_plane(), Self::quadric()];
        v.extend((1..=8).map(|d| Self::blowup(d).expect("1..=8")));
        v
    }

    pub fn token(&self) -> String {
        match self.kind {
            SurfaceKind::ProjectivePlane => "P2".into(),
            SurfaceKind::QuadricProduct => "P1xP1".into(),
            SurfaceKind::BlowupPlane(d) => format!("S{d}"),
        }
    }

    pub fn picard_rank(&self) -> usize {
        self.gram.len()
    }

    /// `(b0, b1, b2)`.
    pub fn betti(&self) -> (u32, u32, u32) {
        (1, 0, self.picard_rank() as u32)
    }

    /// Names of the standard basis vectors.
    pub fn basis_names(&self) -> Vec<String> {
        match self.kind {
            SurfaceKind::ProjectivePlane => vec!["h".into()],
            SurfaceKind::QuadricProduct => vec!["h1".into(), "h2".into()],
            SurfaceKind::BlowupPlane(d) => std::iter::once("h".to_string())
                .chain((1..=d).map(|i| format!("e{i}")))
                .collect(),
        }
    }

    pub fn parse_class(&self, s: &str) -> Result<DivisorClass> {
        let c: DivisorClass = s.parse()?;
        self.check(&c)?;
        Ok(c)
    }

    pub fn class(&self, coords: &[i64]) -> Result<DivisorClass> {
        let c = DivisorClass::new(coords.to_vec());
        self.check(&c)?;
        Ok(c)
    }

    pub fn check(&self, c: &DivisorClass) -> Result<()> {
        if c.rank() != self.picard_rank() {
            return Err(Error::DimensionMismatch {
                expected: self.picard_rank(),
                found: c.rank(),
            });
        }
        Ok(())
    }

    /// Hyperplane (or first ruling) class.
    pub fn h(&self) -> DivisorClass {
        DivisorClass::basis(self.picard_rank(), 0)
    }

    /// The anticanonical class `-K`.
    pub fn anticanonical(&self) -> DivisorClass {
        -&self.canonical
    }

    /// Pairing without a rank check; callers guarantee both classes live here.
    pub(crate) fn dot(&self, a: &DivisorClass, b: &DivisorClass) -> i64 {
        match self.kind {
            SurfaceKind::ProjectivePlane => a.coords[0] * b.coords[0],
            SurfaceKind::QuadricProduct => a.coords[0] * b.coords[1] + a.coords[1] * b.coords[0],
            SurfaceKind::BlowupPlane(_) => {
                a.coords[0] * b.coords[0]
                    - a.coords[1..]
                        .iter()
                        .zip(&b.coords[1..])
                        .map(|(x, y)| x * y)
                        .sum::<i64>()
            }
        }
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.dot(a, b))
    }

    pub fn canonical_class(&self) -> DivisorClass {
        self.canonical.clone()
    }

    pub(crate) fn square(&self, a: &DivisorClass) -> i64 {
        self.dot(a, a)
    }

    /// Degree against `-K`.
    pub(crate) fn degree(&self, a: &DivisorClass) -> i64 {
        -self.dot(a, &self.canonical)
    }

    /// `β(β+K)/2 + 1`.
    pub fn arithmetic_genus(&self, beta: &DivisorClass) -> Result<i64> {
        self.check(beta)?;
        Ok(self.genus(beta))
    }

    pub(crate) fn genus(&self, beta: &DivisorClass) -> i64 {
        (self.square(beta) + self.dot(beta, &self.canonical)) / 2 + 1
    }

    /// `χ(O(β)) = β(β-K)/2 + 1`.
    pub fn chi_line_bundle(&self, beta: &DivisorClass) -> Result<i64> {
        self.check(beta)?;
        Ok(self.chi(beta))
    }

    pub(crate) fn chi(&self, beta: &DivisorClass) -> i64 {
        (self.square(beta) - self.dot(beta, &self.canonical)) / 2 + 1
    }

    /// `dim |β| = χ(O(β)) - 1`, only for nef classes where higher
    /// cohomology vanishes.
    pub fn dim_linear_system(&self, beta: &DivisorClass) -> Result<i64> {
        self.check(beta)?;
        if !self.nef(beta) {
            return Err(Error::NotCertified(format!(
                "{beta} is not nef, so h^0 is not given by Riemann-Roch"
            )));
        }
        Ok(self.chi(beta) - 1)
    }

    /// All classes `C` with `C² = -1` and `C·K = -1`, sorted.
    pub fn minus_one_curves(&self) -> &[DivisorClass] {
        self.minus_one.get_or_init(|| match self.kind {
            SurfaceKind::BlowupPlane(d) => enumerate_blowup_classes(d as usize, -1, 1, -1),
            _ => Vec::new(),
        })
    }

    /// Nef classes `F` with `F² = 0` and `F·(-K) = 2`: the conic-bundle
    /// (ruling) classes.
    pub fn ruling_classes(&self) -> &[DivisorClass] {
        self.conics.get_or_init(|| match self.kind {
            SurfaceKind::ProjectivePlane => Vec::new(),
            SurfaceKind::QuadricProduct => vec![DivisorClass::new(vec![1, 0]), DivisorClass::new(vec![0, 1])],
            SurfaceKind::BlowupPlane(d) => {
                let candidates = enumerate_blowup_classes(d as usize, 0, 2, 0);
                candidates.into_iter().filter(|f| self.nef(f)).collect()
            }
        })
    }

    /// Extremal rays of the effective cone.
    pub fn effective_cone_generators(&self) -> Vec<DivisorClass> {
        let rho = self.picard_rank();
        match self.kind {
            SurfaceKind::ProjectivePlane => vec![self.h()],
            SurfaceKind::QuadricProduct => vec![DivisorClass::basis(2, 0), DivisorClass::basis(2, 1)],
            SurfaceKind::BlowupPlane(1) => vec![
                DivisorClass::basis(rho, 1),
                DivisorClass::new(vec![1, -1]),
            ],
            SurfaceKind::BlowupPlane(_) => self.minus_one_curves().to_vec(),
        }
    }

    fn for_each_generator(&self, mut f: impl FnMut(&DivisorClass) -> bool) -> bool {
        match self.kind {
            SurfaceKind::BlowupPlane(d) if d >= 2 => self.minus_one_curves().iter().all(&mut f),
            _ => self.effective_cone_generators().iter().all(f),
        }
    }

    pub(crate) fn nef(&self, d: &DivisorClass) -> bool {
        self.for_each_generator(|g| self.dot(d, g) >= 0)
    }

    pub fn is_nef(&self, d: &DivisorClass) -> Result<bool> {
        self.check(d)?;
        Ok(self.nef(d))
    }

    /// Nef, positive square and positive on every extremal effective ray.
    pub(crate) fn ample(&self, d: &DivisorClass) -> bool {
        self.square(d) > 0 && self.for_each_generator(|g| self.dot(d, g) > 0)
    }

    pub fn is_ample(&self, d: &DivisorClass) -> Result<bool> {
        self.check(d)?;
        Ok(self.ample(d))
    }

    /// Membership in the rational cone spanned by the effective generators.
    pub fn is_effective_cone(&self, d: &DivisorClass) -> Result<bool> {
        Ok(self.effective_cone_certificate(d)?.is_some())
    }

    /// Nonnegative rational coefficients expressing `d` over
    /// [`effective_cone_generators`](Self::effective_cone_generators), if any.
    pub fn effective_cone_certificate(&self, d: &DivisorClass) -> Result<Option<Vec<BigRational>>> {
        self.check(d)?;
        let gens: Vec<Vec<i64>> = self
            .effective_cone_generators()
            .into_iter()
            .map(|g| g.coords)
            .collect();
        Ok(linalg::nonnegative_combination(&gens, &d.coords))
    }

    /// Coefficients `d_i` with `β = Σ d_i L_i`.
    pub fn expand_in_basis(&self, beta: &DivisorClass, basis: &[DivisorClass]) -> Result<Vec<BigRational>> {
        self.check(beta)?;
        if basis.len() != self.picard_rank() {
            return Err(Error::SingularBasis);
        }
        for b in basis {
            self.check(b)?;
        }
        let cols: Vec<Vec<i64>> = basis.iter().map(|b| b.coords.clone()).collect();
        linalg::solve(&cols, &beta.coords).ok_or(Error::SingularBasis)
    }

    pub fn gram_of(&self, classes: &[DivisorClass]) -> Vec<Vec<i64>> {
        classes
            .iter()
            .map(|a| classes.iter().map(|b| self.dot(a, b)).collect())
            .collect()
    }

    /// Nef classes `D` with `D·(-K) ≤ max_degree`, sorted.
    ///
    /// On a blowup, nefness forces `m_i = D·e_i ≥ 0` and `D² ≥ 0`, so
    /// Cauchy–Schwarz gives `(3a - deg)² ≤ δ a²`, which bounds `a` because
    /// `√δ < 3`.
    pub fn nef_classes_up_to_degree(&self, max_degree: i64) -> Vec<DivisorClass> {
        self.nef_classes_in(max_degree, None)
    }

    /// As [`nef_classes_up_to_degree`](Self::nef_classes_up_to_degree), but also
    /// requiring `D·h ≤ max_h`.
    pub(crate) fn nef_classes_in(&self, max_degree: i64, max_h: Option<i64>) -> Vec<DivisorClass> {
        let mut out = Vec::new();
        if max_degree < 0 {
            return out;
        }
        match self.kind {
            SurfaceKind::ProjectivePlane => {
                let top = max_h.map_or(max_degree / 3, |m| m.min(max_degree / 3));
                out.extend((0..=top).map(|a| DivisorClass::new(vec![a])));
            }
            SurfaceKind::QuadricProduct => {
                for a1 in 0..=max_degree / 2 {
                    for a2 in 0..=(max_degree / 2 - a1) {
                        out.push(DivisorClass::new(vec![a1, a2]));
                    }
                }
            }
            SurfaceKind::BlowupPlane(d) => {
                let delta = d as i64;
                let mut a = 0i64;
                loop {
                    if max_h.is_some_and(|m| a > m) {
                        break;
                    }
                    let low = 3 * a - max_degree;
                    if low > 0 && low * low > delta * a * a && (9 - delta) * a > 3 * max_degree {
                        break;
                    }
                    let mut ms = Vec::with_capacity(d as usize);
                    nef_box_rec(self, a, d as usize, low, 3 * a, &mut ms, 0, 0, &mut out);
                    a += 1;
                }
            }
        }
        out.sort();
        out
    }
}

#[allow(clippy::too_many_arguments)]
fn nef_box_rec(
    s: &DelPezzoSurface,
    a: i64,
    slots: usize,
    min_sum: i64,
    max_sum: i64,
    ms: &mut Vec<i64>,
    sum: i64,
    sumsq: i64,
    out: &mut Vec<DivisorClass>,
) {
    if ms.len() == slots {
        if sum < min_sum || sum > max_sum {
            return;
        }
        let mut coords = Vec::with_capacity(slots + 1);
        coords.push(a);
        coords.extend(ms.iter().map(|m| -m));
        let c = DivisorClass::new(coords);
        if s.nef(&c) {
            out.push(c);
        }
        return;
    }
    let left = (slots - ms.len()) as i64;
    for m in 0..=a {
        let nsum = sum + m;
        let nsq = sumsq + m * m;
        if nsq > a * a || nsum > max_sum {
            break;
        }
        if nsum + (left - 1) * a < min_sum {
            continue;
        }
        if slots >= 2 && ms.iter().any(|&p| p + m > a) {
            break;
        }
        ms.push(m);
        nef_box_rec(s, a, slots, min_sum, max_sum, ms, nsum, nsq, out);
        ms.pop();
    }
}

/// Classes `a h - Σ m_i e_i` on the blowup in `delta` points with
/// `C² = square` and `C·(-K) = degree`, and every `m_i ≥ min_m`.
///
/// Cauchy–Schwarz on the `m_i` gives `(3a - degree)² ≤ δ (a² - square)`,
/// which bounds `a`; every `m_i` lies in `[min_m, a]` for the cases used here
/// (`m_i ≤ a` holds for irreducible curves other than lines through points).
fn enumerate_blowup_classes(delta: usize, square: i64, degree: i64, min_m: i64) -> Vec<DivisorClass> {
    let mut out = Vec::new();
    let d = delta as i64;
    let mut a = 0i64;
    loop {
        let s = 3 * a - degree;
        let q = a * a - square;
        // (3a - degree)² - δ(a² - square) is convex in a; past its vertex it stays positive
        if s > 0 && s * s > d * q && (9 - d) * a > 3 * degree {
            break;
        }
        if q >= 0 && s * s <= d * q {
            let mut ms = Vec::with_capacity(delta);
            classes_rec(delta, a, min_m, s, q, &mut ms, &mut out);
        }
        a += 1;
    }
    out.sort();
    out
}

fn classes_rec(delta: usize, a: i64, min_m: i64, sum: i64, sumsq: i64, ms: &mut Vec<i64>, out: &mut Vec<DivisorClass>) {
    let left = (delta - ms.len()) as i64;
    if left == 0 {
        if sum == 0 && sumsq == 0 {
            let mut coords = vec![a];
            coords.extend(ms.iter().map(|m| -m));
            out.push(DivisorClass::new(coords));
        }
        return;
    }
    if sumsq < 0 || sum * sum > left * sumsq {
        return;
    }
    let hi = a.max(min_m);
    for m in min_m..=hi {
        if m * m > sumsq {
            if m > 0 {
                break;
            }
            continue;
        }
        ms.push(m);
        classes_rec(delta, a, min_m, sum - m, sumsq - m * m, ms, out);
        ms.pop();
    }
}

impl FromStr for DelPezzoSurface {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "P2" => Ok(Self::projective_plane()),
            "P1xP1" => Ok(Self::quadric()),
            _ => {
                let d = t
                    .strip_prefix('S')
                    .and_then(|n| n.parse::<u8>().ok())
                    .filter(|d| (1..=8).contains(d))
                    .ok_or_else(|| Error::UnknownSurface(s.to_string()))?;
                Self::blowup(d)
            }
        }
    }
}

impl fmt::Display for DelPezzoSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
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

    #[test]
    fn pairing_examples() {
        assert_eq!(s("P2").intersect(&c(&[2]), &c(&[3])).unwrap(), 6);
        assert_eq!(s("S1").intersect(&c(&[0, 1]), &c(&[0, 1])).unwrap(), -1);
        assert_eq!(s("P1xP1").intersect(&c(&[2, 3]), &c(&[1, 1])).unwrap(), 5);
        assert_eq!(
            s("S2").intersect(&c(&[1, 0]), &c(&[1, 0, 0])),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        );
    }

    #[test]
    fn canonical_classes() {
        let p2 = s("P2");
        assert_eq!(p2.canonical_class(), c(&[-3]));
        assert_eq!(p2.square(&p2.canonical), 9);
        assert_eq!(p2.arithmetic_genus(&c(&[1])).unwrap(), 0);

        let s3 = s("S3");
        assert_eq!(s3.canonical_class(), c(&[-3, 1, 1, 1]));
        assert_eq!(s3.square(&s3.canonical), 6);
        for i in 1..4 {
            assert_eq!(s3.dot(&s3.canonical, &DivisorClass::basis(4, i)), -1);
        }

        let q = s("P1xP1");
        assert_eq!(q.canonical_class(), c(&[-2, -2]));
        assert_eq!(q.square(&q.canonical), 8);
        assert_eq!(q.arithmetic_genus(&c(&[1, 1])).unwrap(), 0);

        for surf in DelPezzoSurface::all() {
            let expected = match surf.kind {
                SurfaceKind::ProjectivePlane => 9,
                SurfaceKind::QuadricProduct => 8,
                SurfaceKind::BlowupPlane(d) => 9 - d as i64,
            };
            assert_eq!(surf.square(&surf.canonical), expected, "{surf}");
            let ak = surf.anticanonical();
            assert!(surf.nef(&ak) && surf.ample(&ak), "{surf}");
        }
    }

    #[test]
    fn genus_and_riemann_roch() {
        assert_eq!(s("P2").arithmetic_genus(&c(&[4])).unwrap(), 3);
        assert_eq!(s("S1").arithmetic_genus(&c(&[3, -1])).unwrap(), 1);
        assert_eq!(s("P2").dim_linear_system(&c(&[3])).unwrap(), 9);
        assert_eq!(s("P1xP1").dim_linear_system(&c(&[2, 2])).unwrap(), 8);
        assert_eq!(s("S1").dim_linear_system(&c(&[5, -2])).unwrap(), 17);
        assert!(matches!(
            s("S1").dim_linear_system(&c(&[1, -2])),
            Err(Error::NotCertified(_))
        ));
    }

    #[test]
    fn minus_one_curve_counts() {
        let counts: Vec<usize> = DelPezzoSurface::all()
            .iter()
            .map(|s| s.minus_one_curves().len())
            .collect();
        assert_eq!(counts, vec![0, 0, 1, 3, 6, 10, 16, 27, 56, 240]);
        let s2 = s("S2");
        assert_eq!(
            s2.minus_one_curves(),
            &[c(&[0, 0, 1]), c(&[0, 1, 0]), c(&[1, -1, -1])]
        );
    }

    #[test]
    fn ruling_counts() {
        let counts: Vec<usize> = DelPezzoSurface::all()
            .iter()
            .map(|s| s.ruling_classes().len())
            .collect();
        // conic bundle structures on del Pezzo surfaces
        assert_eq!(counts, vec![0, 2, 1, 2, 3, 5, 10, 27, 126, 2160]);
    }

    #[test]
    fn nef_and_effective() {
        assert!(s("P1xP1").is_nef(&c(&[2, 3])).unwrap());
        assert!(!s("S1").is_nef(&c(&[1, -2])).unwrap());
        let s2 = s("S2");
        assert!(!s2.is_nef(&c(&[0, 1, 0])).unwrap());
        assert!(s2.is_effective_cone(&c(&[0, 1, 0])).unwrap());
        assert!(!s2.is_effective_cone(&c(&[-1, 0, 0])).unwrap());
        assert!(!s("S1").is_effective_cone(&c(&[0, -1])).unwrap());
    }

    #[test]
    fn basis_expansion() {
        let r = |n: i64| linalg::rat(n);
        assert_eq!(s("P2").expand_in_basis(&c(&[5]), &[c(&[1])]).unwrap(), vec![r(5)]);
        assert_eq!(
            s("S1").expand_in_basis(&c(&[5, -2]), &[c(&[1, 0]), c(&[1, -1])]).unwrap(),
            vec![r(3), r(2)]
        );
        assert_eq!(
            s("S1").expand_in_basis(&c(&[5, -2]), &[c(&[1, 0]), c(&[2, 0])]),
            Err(Error::SingularBasis)
        );
    }

    #[test]
    fn tokens_round_trip() {
        for surf in DelPezzoSurface::all() {
            assert_eq!(surf.token().parse::<DelPezzoSurface>().unwrap(), surf);
        }
        assert!("S9".parse::<DelPezzoSurface>().is_err());
        assert!("S0".parse::<DelPezzoSurface>().is_err());
        assert_eq!(s("S1").parse_class("5,-2").unwrap(), c(&[5, -2]));
        assert!(s("S1").parse_class("5").is_err());
        assert!(s("S1").parse_class("5,x").is_err());
    }
}
