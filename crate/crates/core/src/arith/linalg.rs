//! Dense exact linear algebra.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::field::Field;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<F: Field>(m: &mut Vec<Vec<F>>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = m[r][j].clone();
                    if !v.is_zero() {
                        m[i][j] = m[i][j].clone() - f.clone() * v;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &[Vec<F>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Basis of `{x : M x = 0}`, one vector per free column.
pub fn nullspace<F: Field>(m: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let mut out = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); cols];
        v[f] = F::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[r][f].clone();
        }
        out.push(v);
    }
    out
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

fn reduce_row(v: &mut [BigInt]) {
    let g = content(v);
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// Nullspace of an integer matrix by fraction-free elimination with row
/// content removal. Each returned vector is primitive, one per free column
/// in increasing order, with a positive entry at its free column.
pub fn integer_nullspace(m: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).filter(|&i| !a[i][c].is_zero()).min_by_key(|&i| a[i][c].abs()) else {
            continue;
        };
        a.swap(r, p);
        reduce_row(&mut a[r]);
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -x.clone();
            }
        }
        let (head, tail) = a.split_at_mut(r);
        let (prow, tail) = tail.split_first_mut().unwrap();
        for row in head.iter_mut().chain(tail.iter_mut()) {
            if row[c].is_zero() {
                continue;
            }
            let g = prow[c].gcd(&row[c]);
            let fp = &row[c] / &g;
            let fr = &prow[c] / &g;
            for j in 0..cols {
                row[j] = &row[j] * &fr - &prow[j] * &fp;
            }
            reduce_row(row);
        }
        pivots.push(c);
        r += 1;
    }
    let mut out = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let l = pivots.iter().enumerate().fold(BigInt::one(), |l, (i, &pc)| l.lcm(&a[i][pc]));
        let mut v = vec![BigInt::zero(); cols];
        v[f] = l.clone();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -(&a[i][f] * (&l / &a[i][pc]));
        }
        reduce_row(&mut v);
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, Rational};

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(6)], vec![int(0), int(1), int(1)]];
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn rational_nullspace_is_annihilated() {
        let m = vec![vec![int(1), int(2), int(3)], vec![int(0), int(1), int(1)]];
        let ns = nullspace::<Rational>(&m, 3);
        assert_eq!(ns.len(), 1);
        for row in &m {
            let dot: Rational = row.iter().zip(&ns[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn integer_nullspace_primitive() {
        let m = vec![bi(&[2, 4, 6, 8]), bi(&[1, 3, 5, 7])];
        let ns = integer_nullspace(&m, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(content(v).is_one());
            for row in &m {
                let dot: BigInt = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
        }
    }
}
