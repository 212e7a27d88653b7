//! Testing-curve intersection matrix and the Picard-number lower bound.
//!
//! Rows are indexed by testing curves in `M_β`: a moving family, the
//! family of sheaves on a fixed smooth curve `C₀`, and for `j = 2..ρ` a
//! family on a fixed nodal curve `L_j ∪ (β − L_j)`. Columns pair each
//! curve with `λ₀ = λ([O_x])` and with `λ_k` for the basis `L₁..L_ρ`.
//! The degree of the moving family and its other entries are unknown and
//! kept as indeterminates `deg_tau`, `u_k`; the `n_j` of the nodal rows
//! are indeterminates too, specialized afterwards to `p_a(L_j) + 1`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DelPezzoSurface, DivisorClass};
use crate::linalg::{det_i64, rat};
use crate::poly::{determinant, Poly};
use crate::positivity;

pub const DEG_TAU: &str = "deg_tau";

fn u(k: usize) -> String {
    format!("u_{k}")
}

fn n(j: usize) -> String {
    format!("n_{j}")
}

/// The moving-family row `(deg_tau, u_1, …, u_ρ)`.
pub fn lambda_moving(beta: &DivisorClass) -> Vec<Poly> {
    std::iter::once(Poly::var(DEG_TAU))
        .chain((1..=beta.rank()).map(|k| Poly::var(&u(k))))
        .collect()
}

/// `(λ₀, λ_L)` on the family of sheaves over a fixed smooth curve in `|β|`.
pub fn lambda_fixed_smooth(s: &DelPezzoSurface, beta: &DivisorClass, l: &DivisorClass) -> Result<(i64, i64)> {
    s.check(beta)?;
    s.check(l)?;
    if !nef_big(s, beta) {
        return Err(Error::NotCertified(format!("{beta} is not nef and big")));
    }
    Ok((0, s.genus(beta) * s.dot(beta, l)))
}

fn nef_big(s: &DelPezzoSurface, c: &DivisorClass) -> bool {
    s.nef(c) && s.square(c) > 0
}

/// Classes we accept as carrying a smooth connected member.
fn smooth_capable(s: &DelPezzoSurface, c: &DivisorClass) -> bool {
    nef_big(s, c) || s.minus_one_curves().contains(c) || s.ruling_classes().contains(c)
}

/// First violated precondition for a nodal curve `C₁ ∪ (β − C₁)`.
fn singular_violation(s: &DelPezzoSurface, beta: &DivisorClass, c1: &DivisorClass) -> Option<String> {
    let c2 = beta - c1;
    if !smooth_capable(s, c1) {
        return Some(format!("C1 = {c1} has no smooth connected member"));
    }
    if !smooth_capable(s, &c2) {
        return Some(format!("C2 = {c2} has no smooth connected member"));
    }
    let meet = s.dot(c1, &c2);
    if meet < 2 {
        return Some(format!("C1·C2 = {meet} < 2"));
    }
    let (d1, d2) = (s.degree(c1), s.degree(&c2));
    if d2 < d1 {
        return Some(format!("C2·(-K) = {d2} < C1·(-K) = {d1}"));
    }
    None
}

/// `(λ₀, λ_L)` on the family over a nodal curve `C₁ ∪ (β − C₁)`.
pub fn lambda_fixed_singular(
    s: &DelPezzoSurface,
    beta: &DivisorClass,
    c1: &DivisorClass,
    l: &DivisorClass,
) -> Result<(i64, i64)> {
    for c in [beta, c1, l] {
        s.check(c)?;
    }
    if let Some(why) = singular_violation(s, beta, c1) {
        return Err(Error::NotCertified(why));
    }
    Ok((0, -s.dot(c1, l) + (s.genus(c1) + 1) * s.dot(beta, l)))
}

/// A nodal row after substituting `n_j = p_a(L_j) + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodalRow {
    pub j: usize,
    pub component: DivisorClass,
    pub n_value: i64,
    pub specialized: Vec<i64>,
    /// `None` when the curve exists; otherwise the violated condition.
    pub violation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestMatrixReport {
    pub surface: String,
    pub beta: DivisorClass,
    pub basis: Vec<DivisorClass>,
    #[serde(with = "crate::rational_serde::vec")]
    pub d_coeffs: Vec<BigRational>,
    pub matrix: Vec<Vec<String>>,
    pub det_lhs: String,
    /// `d₁ · deg_tau · p_a(β) · det(L_k·L_l)`.
    pub det_rhs: String,
    /// `det_lhs = sign · det_rhs`; `None` if neither sign works.
    pub sign: Option<i8>,
    pub gram_det: i64,
    pub nodal_rows: Vec<NodalRow>,
    pub check_p: bool,
    pub certified: bool,
}

/// Assembles the matrix for `β` in the given basis (the standard basis
/// when `None`), moving a basis element with nonzero coefficient to the
/// front, and checks the determinant identity symbolically.
pub fn build_test_matrix(
    s: &DelPezzoSurface,
    beta: &DivisorClass,
    basis: Option<&[DivisorClass]>,
) -> Result<TestMatrixReport> {
    s.check(beta)?;
    let rho = s.picard_rank();
    let mut basis: Vec<DivisorClass> = match basis {
        Some(b) => b.to_vec(),
        None => positivity::standard_basis(s),
    };
    if basis.len() != rho {
        return Err(Error::DimensionMismatch { expected: rho, found: basis.len() });
    }
    for l in &basis {
        s.check(l)?;
    }
    let mut d = s.expand_in_basis(beta, &basis)?;
    let lead = d.iter().position(|x| !x.is_zero()).ok_or_else(|| {
        Error::InvalidArgument("β = 0 has no nonzero basis coefficient".into())
    })?;
    basis.swap(0, lead);
    d.swap(0, lead);

    let gram = s.gram_of(&basis);
    let gram_det = i64::try_from(det_i64(&gram)).map_err(|_| Error::Invariant("Gram determinant overflow".into()))?;
    let pa = s.genus(beta);
    let beta_l: Vec<i64> = basis.iter().map(|l| s.dot(beta, l)).collect();

    let mut matrix = vec![lambda_moving(beta)];
    let smooth: Vec<Poly> = std::iter::once(Poly::zero())
        .chain(beta_l.iter().map(|&b| Poly::int(pa * b)))
        .collect();
    matrix.push(smooth);
    let mut nodal_rows = Vec::new();
    for j in 1..rho {
        let nj = Poly::var(&n(j + 1));
        let row: Vec<Poly> = std::iter::once(Poly::zero())
            .chain((0..rho).map(|k| Poly::int(-gram[j][k]).add(&nj.scale(&rat(beta_l[k])))))
            .collect();
        let n_value = s.genus(&basis[j]) + 1;
        let values = BTreeMap::from([(n(j + 1), rat(n_value))]);
        let specialized = row[1..]
            .iter()
            .map(|p| {
                let c = p.substitute(&values).as_constant().expect("only n_j is free");
                i64::try_from(c.to_integer()).map_err(|_| Error::Invariant("entry overflow".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        nodal_rows.push(NodalRow {
            j: j + 1,
            component: basis[j].clone(),
            n_value,
            specialized,
            violation: singular_violation(s, beta, &basis[j]),
        });
        matrix.push(row);
    }

    let lhs = determinant(&matrix);
    let rhs = Poly::var(DEG_TAU).scale(&(&d[0] * rat(pa) * rat(gram_det)));
    let sign = if lhs == rhs {
        Some(1)
    } else if lhs == rhs.neg() {
        Some(-1)
    } else {
        None
    };
    let check_p = positivity::check_p(s, beta)?.passed;
    let certified = check_p && sign.is_some() && !rhs.is_zero();
    Ok(TestMatrixReport {
        surface: s.token(),
        beta: beta.clone(),
        basis,
        d_coeffs: d,
        matrix: matrix.iter().map(|r| r.iter().map(Poly::to_string).collect()).collect(),
        det_lhs: lhs.to_string(),
        det_rhs: rhs.to_string(),
        sign,
        gram_det,
        nodal_rows,
        check_p,
        certified,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicardBound {
    pub surface: String,
    pub beta: DivisorClass,
    /// `ρ(S) + 1`.
    pub bound: usize,
    pub certified: bool,
    pub report: Option<TestMatrixReport>,
}

/// `ρ(M_β) ≥ ρ(S) + 1`, certified when (P) holds and the matrix is
/// nondegenerate.
pub fn picard_lower_bound(s: &DelPezzoSurface, beta: &DivisorClass) -> Result<PicardBound> {
    s.check(beta)?;
    let report = if beta.is_zero() { None } else { Some(build_test_matrix(s, beta, None)?) };
    Ok(PicardBound {
        surface: s.token(),
        beta: beta.clone(),
        bound: s.picard_rank() + 1,
        certified: report.as_ref().is_some_and(|r| r.certified),
        report,
    })
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
    fn fixed_curve_entries() {
        assert_eq!(lambda_fixed_smooth(&s("P2"), &c(&[4]), &c(&[1])).unwrap(), (0, 12));
        assert_eq!(lambda_fixed_smooth(&s("P1xP1"), &c(&[2, 2]), &c(&[1, 0])).unwrap(), (0, 2));
        assert_eq!(lambda_fixed_smooth(&s("S1"), &c(&[3, -1]), &c(&[0, 1])).unwrap(), (0, 1));
        assert!(lambda_fixed_smooth(&s("S1"), &c(&[0, 1]), &c(&[1, 0])).is_err());

        assert_eq!(lambda_fixed_singular(&s("P2"), &c(&[4]), &c(&[1]), &c(&[1])).unwrap(), (0, 3));
        let q = s("P1xP1");
        assert_eq!(lambda_fixed_singular(&q, &c(&[2, 2]), &c(&[1, 0]), &c(&[0, 1])).unwrap(), (0, 1));
        let s2 = s("S2");
        assert_eq!(lambda_fixed_singular(&s2, &c(&[3, -1, -1]), &c(&[1, -1, -1]), &c(&[1, 0, 0])).unwrap(), (0, 2));
        // h ∪ h meets once only
        assert!(lambda_fixed_singular(&s("P2"), &c(&[2]), &c(&[1]), &c(&[1])).is_err());
    }

    #[test]
    fn plane_quartic() {
        let r = build_test_matrix(&s("P2"), &c(&[4]), None).unwrap();
        assert_eq!(r.matrix, vec![vec!["deg_tau", "u_1"], vec!["0", "12"]]);
        assert_eq!(r.det_lhs, "12*deg_tau");
        assert_eq!(r.sign, Some(1));
        assert!(r.certified);
        assert_eq!(picard_lower_bound(&s("P2"), &c(&[4])).unwrap().bound, 2);
    }

    #[test]
    fn quadric_sign() {
        let r = build_test_matrix(&s("P1xP1"), &c(&[2, 2]), None).unwrap();
        assert_eq!(r.det_lhs, "2*deg_tau");
        assert_eq!(r.det_rhs, "-2*deg_tau");
        assert_eq!(r.sign, Some(-1));
        assert_eq!(r.matrix[2], vec!["0", "-1 + 2*n_2", "2*n_2"]);
        assert_eq!(r.nodal_rows[0].specialized, vec![1, 2]);
        assert_eq!(r.nodal_rows[0].violation, None);
    }

    #[test]
    fn degenerate_genus_zero() {
        let r = build_test_matrix(&s("P2"), &c(&[2]), None).unwrap();
        assert_eq!(r.det_rhs, "0");
        assert!(!r.certified);
        let b = picard_lower_bound(&s("P2"), &c(&[2])).unwrap();
        assert_eq!((b.bound, b.certified), (2, false));
    }

    #[test]
    fn first_column_vanishes_below_moving_row() {
        let r = build_test_matrix(&s("S3"), &c(&[6, -2, -2, -2]), None).unwrap();
        assert!(r.matrix[1..].iter().all(|row| row[0] == "0"));
        assert_eq!(r.sign, Some(-1));
    }

    #[test]
    fn basis_swap_flips_both_sides() {
        let q = s("P1xP1");
        let beta = c(&[3, 2]);
        let a = build_test_matrix(&q, &beta, Some(&[c(&[1, 0]), c(&[0, 1])])).unwrap();
        let b = build_test_matrix(&q, &beta, Some(&[c(&[0, 1]), c(&[1, 0])])).unwrap();
        assert_eq!(a.d_coeffs, vec![rat(3), rat(2)]);
        assert_eq!(b.d_coeffs, vec![rat(2), rat(3)]);
        assert_eq!(a.sign, b.sign);
        // d₁ changes 3 → 2 but the Gram determinant is the same, so the
        // two right sides differ by the ratio of leading coefficients
        assert_eq!(a.det_rhs, "-6*deg_tau");
        assert_eq!(b.det_rhs, "-4*deg_tau");
    }

    #[test]
    fn trailing_swap_keeps_both_sides() {
        let s2 = s("S2");
        let beta = c(&[5, -1, -2]);
        let std = build_test_matrix(&s2, &beta, None).unwrap();
        let swapped = build_test_matrix(&s2, &beta, Some(&[c(&[1, 0, 0]), c(&[0, 0, 1]), c(&[0, 1, 0])])).unwrap();
        assert_eq!(swapped.d_coeffs, vec![rat(5), rat(-2), rat(-1)]);
        assert_eq!((std.det_lhs.as_str(), std.sign), (swapped.det_lhs.as_str(), swapped.sign));
        assert_eq!(std.det_rhs, swapped.det_rhs);
    }

    #[test]
    fn leading_coefficient_reordered() {
        let r = build_test_matrix(&s("S1"), &c(&[0, 1]), None).unwrap();
        assert_eq!(r.basis[0], c(&[0, 1]));
        assert!(!r.d_coeffs[0].is_zero());
    }

    #[test]
    fn singular_gram_refused() {
        let q = s("P1xP1");
        let err = build_test_matrix(&q, &c(&[2, 2]), Some(&[c(&[1, 1]), c(&[2, 2])]));
        assert!(err.is_err());
    }
}
