//! Small exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Solves `columns · x = target`, where `columns[j]` is the j-th column.
/// Returns `None` when the square system is singular.
pub fn solve(columns: &[Vec<i64>], target: &[i64]) -> Option<Vec<BigRational>> {
    let n = columns.len();
    if n == 0 || target.len() != n || columns.iter().any(|c| c.len() != n) {
        return None;
    }
    // augmented rows
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = columns.iter().map(|c| rat(c[i])).collect();
            row.push(rat(target[i]));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=n {
                    let delta = &factor * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Determinant of an integer matrix (fraction-free Bareiss elimination).
pub fn det_i64(matrix: &[Vec<i64>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Feasibility of `Σ λ_j g_j = target` with `λ ≥ 0`, by phase-one simplex
/// with Bland's rule. Returns the certificate `λ` when feasible.
pub fn nonnegative_combination(generators: &[Vec<i64>], target: &[i64]) -> Option<Vec<BigRational>> {
    let rows = target.len();
    let n = generators.len();
    if generators.iter().any(|g| g.len() != rows) {
        return None;
    }
    // tableau columns: n structural, rows artificial, then rhs
    let width = n + rows + 1;
    let mut t: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let flip = target[i] < 0;
            let mut row = vec![BigRational::zero(); width];
            for (j, g) in generators.iter().enumerate() {
                row[j] = rat(if flip { -g[i] } else { g[i] });
            }
            row[n + i] = BigRational::one();
            row[width - 1] = rat(target[i].abs());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + rows).collect();

    loop {
        // reduced cost of column j for objective Σ artificials: -Σ_i t[i][j] over artificial-basis rows
        let mut entering = None;
        for j in 0..n + rows {
            if basis.contains(&j) {
                continue;
            }
            let mut cost = if j >= n { BigRational::one() } else { BigRational::zero() };
            for (i, &b) in basis.iter().enumerate() {
                if b >= n {
                    cost -= &t[i][j];
                }
            }
            if cost.is_negative() {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..rows {
            if t[i][j].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else { break };
        let inv = t[r][j].recip();
        for v in t[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !t[i][j].is_zero() {
                let f = t[i][j].clone();
                for c in 0..width {
                    let d = &f * &t[r][c];
                    t[i][c] -= d;
                }
            }
        }
        basis[r] = j;
    }

    let infeasible = basis
        .iter()
        .enumerate()
        .any(|(i, &b)| b >= n && t[i][width - 1].is_positive());
    if infeasible {
        return None;
    }
    let mut lambda = vec![BigRational::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            lambda[b] = t[i][width - 1].clone();
        }
    }
    Some(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_recombines() {
        // 5h-2e1 in basis {h, h-e1}
        let x = solve(&[vec![1, 0], vec![1, -1]], &[5, -2]).unwrap();
        assert_eq!(x, vec![rat(3), rat(2)]);
        assert!(solve(&[vec![1, 1], vec![2, 2]], &[1, 1]).is_none());
    }

    #[test]
    fn bareiss_matches_cofactor() {
        assert_eq!(det_i64(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(
            det_i64(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]),
            BigInt::from(4)
        );
        assert_eq!(det_i64(&[vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]), BigInt::from(-1));
    }

    #[test]
    fn cone_membership() {
        let gens = vec![vec![0, 1], vec![1, -1]];
        let lam = nonnegative_combination(&gens, &[5, -2]).unwrap();
        assert_eq!(lam, vec![rat(3), rat(5)]);
        assert!(nonnegative_combination(&gens, &[0, -1]).is_none());
        assert!(nonnegative_combination(&gens, &[-1, 0]).is_none());
        assert!(nonnegative_combination(&gens, &[0, 0]).is_some());
    }
}
