//! Integer linear algebra on row vectors: echelon and Hermite forms via
//! unimodular row operations, integer kernels, exact determinants.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntVec = Vec<BigInt>;

pub fn from_i64(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn is_zero(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn axpy(target: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    // target -= q * src
    for (t, s) in target.iter_mut().zip(src) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

/// Hermite-reduces the leading `cols` columns of `rows` in place and returns
/// the rank on those columns together with the pivot columns. Rows past the
/// rank are zero on the leading columns. Pivots are positive and entries
/// above each pivot are reduced into `[0, pivot)`.
pub fn hermite(rows: &mut [IntVec], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        loop {
            let best = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&i, &j| rows[i][c].abs().cmp(&rows[j][c].abs()));
            let Some(best) = best else { break };
            rows.swap(r, best);
            let (head, tail) = rows.split_at_mut(r + 1);
            let pivot_row = &head[r];
            let mut done = true;
            for row in tail.iter_mut() {
                if row[c].is_zero() {
                    continue;
                }
                let q = row[c].div_floor(&pivot_row[c]);
                axpy(row, &q, pivot_row);
                if !row[c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows.len() && !rows[r][c].is_zero() {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -&*x;
                }
            }
            let (head, tail) = rows.split_at_mut(r);
            let pivot_row = &tail[0];
            for row in head.iter_mut() {
                let q = row[c].div_floor(&pivot_row[c]);
                if !q.is_zero() {
                    axpy(row, &q, pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
    }
    pivots
}

/// Hermite normal form basis of the Z-span of `rows` (zero rows dropped).
pub fn hnf_basis(rows: &[IntVec]) -> (Vec<IntVec>, Vec<usize>) {
    let Some(first) = rows.first() else {
        return (Vec::new(), Vec::new());
    };
    let cols = first.len();
    let mut m: Vec<IntVec> = rows.to_vec();
    let pivots = hermite(&mut m, cols);
    m.truncate(pivots.len());
    (m, pivots)
}

/// Z-basis of `{x in Z^n : M x = 0}` for `M` given by its rows, in Hermite form.
pub fn kernel(rows: &[IntVec], n: usize) -> Vec<IntVec> {
    let m = rows.len();
    // row i of the augmented matrix is [column i of M | e_i]
    let mut aug: Vec<IntVec> = (0..n)
        .map(|i| {
            let mut v: IntVec = rows.iter().map(|r| r[i].clone()).collect();
            v.extend((0..n).map(|j| {
                if i == j {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            }));
            v
        })
        .collect();
    let rank = hermite(&mut aug, m).len();
    let ker: Vec<IntVec> = aug[rank..].iter().map(|r| r[m..].to_vec()).collect();
    if ker.is_empty() {
        return ker;
    }
    hnf_basis(&ker).0
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(mat: &[IntVec]) -> BigInt {
    let n = mat.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<IntVec> = mat.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn rank(rows: &[IntVec]) -> usize {
    hnf_basis(rows).0.len()
}

/// Reduces `v` against a Hermite basis; true iff `v` lies in its span.
pub fn in_span(hnf: &[IntVec], pivots: &[usize], v: &[BigInt]) -> bool {
    let mut w: IntVec = v.to_vec();
    for (row, &c) in hnf.iter().zip(pivots) {
        if w[c].is_zero() {
            continue;
        }
        let (q, rem) = w[c].div_mod_floor(&row[c]);
        if !rem.is_zero() {
            return false;
        }
        axpy(&mut w, &q, row);
    }
    is_zero(&w)
}
