//! Small exact integer/rational linear algebra used by the fan and polytope code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Q;

/// Determinant of a square integer matrix (Bareiss elimination).
pub fn det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Row echelon form with gcd-normalised integer rows. Returns the pivot columns.
fn echelon(rows: &mut Vec<Vec<i128>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i == r || rows[i][c] == 0 {
                continue;
            }
            let (a, b) = (rows[r][c], rows[i][c]);
            let g = a.gcd(&b);
            let (fa, fb) = (a / g, b / g);
            for j in 0..ncols {
                rows[i][j] = rows[i][j] * fa - rows[r][j] * fb;
            }
            normalize(&mut rows[i]);
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

fn normalize(row: &mut [i128]) {
    let g = row.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        row.iter_mut().for_each(|x| *x /= g);
    }
}

pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    echelon(&mut a).len()
}

/// Integer basis of `{x : rows * x = 0}`.
pub fn kernel(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let pivots = if a.is_empty() {
        vec![]
    } else {
        echelon(&mut a)
    };
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        // Solve pivot variables over Q, then clear denominators.
        let mut x: Vec<Q> = vec![Q::zero(); ncols];
        x[f] = Q::one();
        for (row, &pc) in a.iter().zip(&pivots) {
            let v = Q::from_integer(BigInt::from(-row[f])) / Q::from_integer(BigInt::from(row[pc]));
            x[pc] = v;
        }
        let l = x.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
        let ints: Vec<BigInt> = x
            .iter()
            .map(|v| (v * Q::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
        basis.push(
            ints.iter()
                .map(|v| i64::try_from(v / &g).expect("kernel entry overflow"))
                .collect(),
        );
    }
    basis
}

/// Inverse of a unimodular integer matrix; `None` when `|det| != 1`.
pub fn inverse_unimodular(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = m.len();
    let d = det(m);
    if d.abs() != 1 {
        return None;
    }
    let mut inv = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = m
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != j)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != i)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let cof = if (i + j) % 2 == 0 {
                det(&minor)
            } else {
                -det(&minor)
            };
            inv[i][j] = (cof * d) as i64;
        }
    }
    Some(inv)
}

/// Solves `x * rows = target` (x as row coefficients) over Q; `None` if singular.
pub fn solve_coefficients(rows: &[Vec<i64>], target: &[i64]) -> Option<Vec<Q>> {
    let n = rows.len();
    let dim = target.len();
    // Columns of the system are the generators: A^T x = target.
    let mut a: Vec<Vec<Q>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Q> = (0..n).map(|c| Q::from_integer(rows[c][r].into())).collect();
            row.push(Q::from_integer(target[r].into()));
            row
        })
        .collect();
    let mut piv_row = 0;
    let mut pivot_of = vec![usize::MAX; n];
    for c in 0..n {
        let p = (piv_row..dim).find(|&i| !a[i][c].is_zero())?;
        a.swap(piv_row, p);
        let pv = a[piv_row][c].clone();
        for j in c..=n {
            a[piv_row][j] = &a[piv_row][j] / &pv;
        }
        for i in 0..dim {
            if i != piv_row && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=n {
                    let t = &a[piv_row][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        pivot_of[c] = piv_row;
        piv_row += 1;
    }
    // Remaining rows must be consistent.
    if a[piv_row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    Some((0..n).map(|c| a[pivot_of[c]][n].clone()).collect())
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn is_nonnegative(v: &[Q]) -> bool {
    v.iter().all(|x| !x.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        assert_eq!(det(&[vec![2, 1], vec![1, 1]]), 1);
        assert_eq!(det(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]), 0);
        assert_eq!(det(&[vec![3, 0, 0], vec![0, 3, 0], vec![0, 0, 3]]), 27);
    }

    #[test]
    fn unimodular_inverse() {
        let m = vec![vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]];
        let inv = inverse_unimodular(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let s: i64 = (0..3).map(|k| m[i][k] * inv[k][j]).sum();
                assert_eq!(s, i64::from(i == j));
            }
        }
        assert!(inverse_unimodular(&[vec![2, 0], vec![0, 1]]).is_none());
    }

    #[test]
    fn kernel_and_rank() {
        let rows = vec![vec![1, 1, 1]];
        let k = kernel(&rows, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(dot(&rows[0], v), 0);
        }
        assert_eq!(rank(&[vec![1, 2], vec![2, 4]]), 1);
    }

    #[test]
    fn coefficient_solve() {
        let gens = vec![vec![1, 0], vec![1, 1]];
        let x = solve_coefficients(&gens, &[3, 2]).unwrap();
        assert_eq!(
            x,
            vec![Q::from_integer(1.into()), Q::from_integer(2.into())]
        );
        assert!(solve_coefficients(&[vec![1, 0]], &[0, 1]).is_none());
    }
}
