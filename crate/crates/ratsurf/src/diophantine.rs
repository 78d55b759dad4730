//! Integer vectors with prescribed coordinate sum and sum of squares.

/// Every x ∈ ℤⁿ with Σx = `sum` and Σx² = `sumsq`, each exactly once.
pub(crate) fn sum_and_squares(n: usize, sum: i64, sumsq: i64) -> Vec<Vec<i64>> {
    let mut sorted = Vec::new();
    let mut cur = Vec::with_capacity(n);
    descend(n, sum, sumsq, i64::MAX, &mut cur, &mut sorted);
    let mut out = Vec::new();
    for mut v in sorted {
        v.reverse();
        loop {
            out.push(v.clone());
            if !next_permutation(&mut v) {
                break;
            }
        }
    }
    out
}

fn isqrt(x: i64) -> i64 {
    if x <= 0 {
        return 0;
    }
    let mut r = (x as f64).sqrt() as i64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

// nonincreasing sequences; `k` entries left, each ≤ `cap`
fn descend(k: usize, s: i64, q: i64, cap: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if k == 0 {
        if s == 0 && q == 0 {
            out.push(cur.clone());
        }
        return;
    }
    // Cauchy–Schwarz: s² ≤ k·q
    if q < 0 || (s as i128) * (s as i128) > (k as i128) * (q as i128) {
        return;
    }
    let r = isqrt(q);
    let hi = r.min(cap);
    // the largest remaining entry is at least the mean
    let lo = s.div_euclid(k as i64) + i64::from(s.rem_euclid(k as i64) != 0);
    let lo = lo.max(-r);
    let mut x = hi;
    while x >= lo {
        cur.push(x);
        descend(k - 1, s - x, q - x * x, x, cur, out);
        cur.pop();
        x -= 1;
    }
}

/// Lexicographic successor; false once the sequence is nonincreasing.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        // x₁+x₂ = 0, x₁²+x₂² = 2
        let mut v = sum_and_squares(2, 0, 2);
        v.sort();
        assert_eq!(v, vec![vec![-1, 1], vec![1, -1]]);
        assert!(sum_and_squares(3, 1, 2).is_empty());
        assert_eq!(sum_and_squares(4, 0, 0), vec![vec![0; 4]]);
    }

    #[test]
    fn permutations_distinct() {
        let mut v = vec![0, 0, 1, 1];
        let mut n = 1;
        while next_permutation(&mut v) {
            n += 1;
        }
        assert_eq!(n, 6);
    }

    #[test]
    fn matches_naive_box() {
        for n in 1..=4usize {
            for s in -3..=3i64 {
                for q in 0..=6i64 {
                    let mut got = sum_and_squares(n, s, q);
                    got.sort();
                    let mut want = Vec::new();
                    let total = 7usize.pow(n as u32);
                    for code in 0..total {
                        let mut c = code;
                        let v: Vec<i64> = (0..n)
                            .map(|_| {
                                let d = (c % 7) as i64 - 3;
                                c /= 7;
                                d
                            })
                            .collect();
                        if v.iter().sum::<i64>() == s && v.iter().map(|x| x * x).sum::<i64>() == q {
                            want.push(v);
                        }
                    }
                    want.sort();
                    assert_eq!(got, want, "n={n} s={s} q={q}");
                }
            }
        }
    }
}
