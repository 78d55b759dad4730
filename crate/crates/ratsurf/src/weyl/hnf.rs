//! Exact integer linear algebra: kernels, ranks, Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn col_combine(m: &mut [Vec<BigInt>], i: usize, j: usize, coef: [&BigInt; 4]) {
    // (col_i, col_j) ← (s·col_i + t·col_j, u·col_i + v·col_j)
    let [s, t, u, v] = coef;
    for row in m.iter_mut() {
        let a = row[i].clone();
        let b = row[j].clone();
        row[i] = s * &a + t * &b;
        row[j] = u * &a + v * &b;
    }
}

/// Column echelon reduction `A·U = [L | 0]` with U unimodular.
/// Returns (rank, U as rows of U).
fn column_echelon(a: &[Vec<i64>], ncols: usize) -> (usize, Vec<Vec<BigInt>>) {
    let mut m = to_big(a);
    let mut u: Vec<Vec<BigInt>> =
        (0..ncols).map(|i| (0..ncols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut rank = 0;
    for r in 0..m.len() {
        if rank == ncols {
            break;
        }
        for c in rank + 1..ncols {
            if m[r][c].is_zero() {
                continue;
            }
            let a = m[r][rank].clone();
            let b = m[r][c].clone();
            let e = a.extended_gcd(&b);
            let g = e.gcd;
            let (s, t) = (e.x, e.y);
            let u_ = -(&b / &g);
            let v_ = &a / &g;
            col_combine(&mut m, rank, c, [&s, &t, &u_, &v_]);
            col_combine(&mut u, rank, c, [&s, &t, &u_, &v_]);
        }
        if !m[r][rank].is_zero() {
            rank += 1;
        }
    }
    (rank, u)
}

/// Basis of `{x ∈ ℤⁿ : A x = 0}`, in Hermite normal form.
///
/// The basis comes from a unimodular transform, so it spans the full
/// integer kernel (a saturated sublattice).
pub fn integer_kernel(a: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let (rank, u) = column_echelon(a, ncols);
    let basis: Vec<Vec<BigInt>> = (rank..ncols).map(|c| u.iter().map(|row| row[c].clone()).collect()).collect();
    hermite_rows(basis)
        .into_iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("kernel entry overflows i64")).collect())
        .collect()
}

pub fn rank(a: &[Vec<i64>], ncols: usize) -> usize {
    column_echelon(a, ncols).0
}

/// Row-style Hermite normal form of the lattice spanned by `rows`;
/// zero rows dropped.
pub fn hermite_rows(rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let mut m = rows;
    if m.is_empty() {
        return m;
    }
    let ncols = m[0].len();
    let mut pivot_row = 0;
    for c in 0..ncols {
        if pivot_row == m.len() {
            break;
        }
        // gcd-combine everything below into pivot_row
        for r in pivot_row + 1..m.len() {
            if m[r][c].is_zero() {
                continue;
            }
            let a = m[pivot_row][c].clone();
            let b = m[r][c].clone();
            let e = a.extended_gcd(&b);
            let g = e.gcd;
            let (s, t) = (e.x, e.y);
            let u_ = -(&b / &g);
            let v_ = &a / &g;
            let (pr, rr) = (m[pivot_row].clone(), m[r].clone());
            m[pivot_row] = pr.iter().zip(&rr).map(|(x, y)| &s * x + &t * y).collect();
            m[r] = pr.iter().zip(&rr).map(|(x, y)| &u_ * x + &v_ * y).collect();
        }
        if m[pivot_row][c].is_zero() {
            continue;
        }
        if m[pivot_row][c].is_negative() {
            m[pivot_row] = m[pivot_row].iter().map(|x| -x).collect();
        }
        let p = m[pivot_row][c].clone();
        for r in 0..pivot_row {
            let q = m[r][c].div_floor(&p);
            if !q.is_zero() {
                let pr = m[pivot_row].clone();
                m[r] = m[r].iter().zip(&pr).map(|(x, y)| x - &q * y).collect();
            }
        }
        pivot_row += 1;
    }
    m.truncate(pivot_row);
    m
}
