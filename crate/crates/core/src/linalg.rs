//! Small exact linear algebra over Z and Q: row echelon forms, Hermite
//! normal forms, kernels and determinants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Rational;

/// Brings `rows` into echelon form on the first `ncols` columns using
/// unimodular row operations. Returns the number of pivot rows; the pivot
/// rows come first, with positive pivots and entries above each pivot
/// reduced into `[0, pivot)`. Columns beyond `ncols` are carried along.
pub fn echelon_integer(rows: &mut [Vec<BigInt>], ncols: usize) -> usize {
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row >= rows.len() {
            break;
        }
        loop {
            // Row with the smallest nonzero |entry| in this column.
            let best = (pivot_row..rows.len())
                .filter(|&r| !rows[r][col].is_zero())
                .min_by(|&x, &y| rows[x][col].abs().cmp(&rows[y][col].abs()));
            let Some(best) = best else { break };
            rows.swap(pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let quo = rows[r][col].div_floor(&rows[pivot_row][col]);
                let (head, tail) = rows.split_at_mut(r);
                let pivot = &head[pivot_row];
                for (x, y) in tail[0].iter_mut().zip(pivot) {
                    *x -= &quo * y;
                }
                if !rows[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < rows.len() && !rows[pivot_row][col].is_zero() {
            if rows[pivot_row][col].is_negative() {
                for x in rows[pivot_row].iter_mut() {
                    *x = -x.clone();
                }
            }
            for r in 0..pivot_row {
                let quo = rows[r][col].div_floor(&rows[pivot_row][col]);
                if quo.is_zero() {
                    continue;
                }
                let (head, tail) = rows.split_at_mut(pivot_row);
                for (x, y) in head[r].iter_mut().zip(&tail[0]) {
                    *x -= &quo * y;
                }
            }
            pivot_row += 1;
        }
    }
    pivot_row
}

/// Row Hermite normal form of the lattice spanned by `rows`; zero rows
/// are dropped.
pub fn hnf(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let Some(ncols) = rows.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut m = rows.to_vec();
    let rank = echelon_integer(&mut m, ncols);
    m.truncate(rank);
    m
}

/// Z-basis (in HNF) of `{x in Z^n : x * m = 0}` for an `n x k` integer matrix.
pub fn integer_left_kernel(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = m.len();
    if n == 0 {
        return Vec::new();
    }
    let k = m[0].len();
    let mut aug: Vec<Vec<BigInt>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let rank = echelon_integer(&mut aug, k);
    let kernel: Vec<Vec<BigInt>> = aug[rank..].iter().map(|r| r[k..].to_vec()).collect();
    hnf(&kernel)
}

/// Basis of `{x : m x = 0}` over Q for a matrix given by rows.
pub fn rational_kernel(m: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let (src, dst) = if r < row {
                    let (h, t) = a.split_at_mut(row);
                    (&t[0], &mut h[r])
                } else {
                    let (h, t) = a.split_at_mut(r);
                    (&h[row], &mut t[0])
                };
                for (x, y) in dst.iter_mut().zip(src) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// Determinant of a square rational matrix.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= &a[col][col];
        let inv = a[col][col].recip();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            let (h, t) = a.split_at_mut(r);
            for (x, y) in t[0].iter_mut().zip(&h[col]) {
                *x -= &f * y;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qi;

    fn bi(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn hnf_is_canonical() {
        let a = hnf(&bi(&[&[2, 4], &[3, 5]]));
        let b = hnf(&bi(&[&[1, 1], &[0, 2], &[5, 9]]));
        assert_eq!(a, bi(&[&[1, 1], &[0, 2]]));
        assert_eq!(a, b);
    }

    #[test]
    fn left_kernel() {
        let m = bi(&[&[1, 2], &[2, 4], &[3, 6]]);
        let k = integer_left_kernel(&m);
        assert_eq!(k.len(), 2);
        for row in &k {
            for c in 0..2 {
                let s: BigInt = row.iter().zip(&m).map(|(x, r)| x * &r[c]).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn rational_kernel_and_det() {
        let m = vec![vec![qi(1), qi(2), qi(3)], vec![qi(2), qi(4), qi(6)]];
        let k = rational_kernel(&m, 3);
        assert_eq!(k.len(), 2);
        let d = determinant(&[vec![qi(2), qi(1)], vec![qi(1), qi(3)]]);
        assert_eq!(d, qi(5));
    }
}
