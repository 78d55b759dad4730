//! Exceptional classes, Cremona reflections and the reduction procedure.

use std::sync::{Arc, OnceLock};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::diophantine::sum_and_squares;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::lattice::{canonical_class, CohClass, Rational, SymplecticClass};
use crate::weyl::Isometry;

pub const DEFAULT_SYMPLECTIC_ITERS: usize = 10_000;

/// Result of [`enumerate_exceptional`].
#[derive(Clone, Debug, Serialize)]
pub struct ExceptionalSet {
    pub n: usize,
    /// Sorted by degree, then by raw coordinates.
    pub classes: Vec<CohClass>,
    /// False when the degree cap may have cut off solutions.
    pub complete: bool,
    pub max_degree: i64,
}

impl ExceptionalSet {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Classes of positive ω-area.
    pub fn positive_for(&self, w: &SymplecticClass) -> Vec<CohClass> {
        self.classes.iter().filter(|e| w.area(e).is_positive()).cloned().collect()
    }
}

/// Largest degree an exceptional class can have for N ≤ 8.
///
/// With `Σb = 3a−1` and `Σb² = a²+1`, Cauchy–Schwarz gives
/// `(3a−1)² ≤ N(a²+1)`, a quadratic in a with leading term `9−N > 0`.
pub fn degree_bound(n: usize) -> Option<i64> {
    if n > 8 {
        return None;
    }
    let n = n as i64;
    let ok = |a: i64| (3 * a - 1) * (3 * a - 1) <= n * (a * a + 1);
    let mut a = 0;
    while ok(a + 1) {
        a += 1;
    }
    Some(a)
}

fn exceptional_of_degree(n: usize, a: i64) -> Vec<CohClass> {
    // aH − Σ bₛEₛ with Σb = 3a − 1, Σb² = a² + 1
    sum_and_squares(n, 3 * a - 1, a * a + 1).into_iter().map(|b| CohClass::from_multiplicities(a, &b)).collect()
}

fn enumerate_range(exec: Exec, n: usize, top: i64) -> Vec<CohClass> {
    let per_degree = exec::map_range(exec, (top + 1) as usize, |a| exceptional_of_degree(n, a as i64));
    let mut all: Vec<CohClass> = per_degree.into_iter().flatten().collect();
    all.sort_by(|x, y| (x.degree(), &x.coords).cmp(&(y.degree(), &y.coords)));
    all
}

static CACHE: [OnceLock<Arc<Vec<CohClass>>>; 9] = [const { OnceLock::new() }; 9];

/// Complete list for 1 ≤ N ≤ 8, memoized.
pub fn exceptional_classes(n: usize) -> Arc<Vec<CohClass>> {
    assert!((1..=8).contains(&n), "complete enumeration only for 1 <= N <= 8");
    CACHE[n].get_or_init(|| Arc::new(enumerate_range(Exec::default(), n, degree_bound(n).unwrap()))).clone()
}

/// All e with e² = −1, K·e = −1 and degree in `[0, bound]`.
pub fn enumerate_exceptional(n: usize, max_degree: Option<i64>) -> Result<ExceptionalSet> {
    enumerate_exceptional_with(Exec::default(), n, max_degree)
}

pub fn enumerate_exceptional_with(exec: Exec, n: usize, max_degree: Option<i64>) -> Result<ExceptionalSet> {
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    if let Some(d) = max_degree {
        if d < 0 {
            return Err(Error::invalid("max degree must be nonnegative"));
        }
    }
    match (degree_bound(n), max_degree) {
        (Some(bound), cap) => {
            let top = cap.map_or(bound, |d| d.min(bound));
            let classes = if exec == Exec::default() && top == bound {
                exceptional_classes(n).as_ref().clone()
            } else {
                enumerate_range(exec, n, top)
            };
            let complete = cap.is_none_or(|d| d >= bound);
            Ok(ExceptionalSet { n, classes, complete, max_degree: top })
        }
        (None, None) => {
            Err(Error::invalid(format!("N = {n} has infinitely many exceptional classes; give a degree bound")))
        }
        (None, Some(d)) => {
            Ok(ExceptionalSet { n, classes: enumerate_range(exec, n, d), complete: false, max_degree: d })
        }
    }
}

fn check_triple(n: usize, i: usize, j: usize, k: usize) -> Result<()> {
    if !(1 <= i && i < j && j < k && k <= n) {
        return Err(Error::invalid(format!("need 1 <= i < j < k <= {n}, got ({i},{j},{k})")));
    }
    Ok(())
}

/// `R(H_ijk) x = x + (x·H_ijk) H_ijk`.
pub fn cremona_reflect(x: &CohClass, i: usize, j: usize, k: usize) -> Result<CohClass> {
    check_triple(x.n(), i, j, k)?;
    let h = CohClass::h_minus(x.n(), &[i, j, k]);
    let t = x.dot(&h);
    Ok(&(t * &h) + x)
}

pub fn cremona_isometry(n: usize, i: usize, j: usize, k: usize) -> Result<Isometry> {
    check_triple(n, i, j, k)?;
    Ok(Isometry::reflection_unchecked(&CohClass::h_minus(n, &[i, j, k])))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub triple: [usize; 3],
    pub before: CohClass,
    pub after: CohClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub input: CohClass,
    pub steps: Vec<ReductionStep>,
    /// The trace ends at E_l.
    pub final_index: usize,
}

impl ReductionTrace {
    pub fn classes(&self) -> Vec<&CohClass> {
        let mut v = vec![&self.input];
        v.extend(self.steps.iter().map(|s| &s.after));
        v
    }

    /// ω-areas of the input and every intermediate class.
    pub fn areas(&self, w: &SymplecticClass) -> Vec<Rational> {
        self.classes().into_iter().map(|c| w.area(c)).collect()
    }
}

/// Indices (1-based, ascending) of the three largest bₛ, ties to the smaller index.
fn top_three(e: &CohClass) -> [usize; 3] {
    let mut idx: Vec<usize> = (1..=e.n()).collect();
    idx.sort_by_key(|&s| (-e.b(s), s));
    let mut t = [idx[0], idx[1], idx[2]];
    t.sort_unstable();
    t
}

/// Cremona descent of an exceptional class down to some E_l.
pub fn reduce_exceptional(e: &CohClass) -> Result<ReductionTrace> {
    if !e.is_exceptional() {
        return Err(Error::NotExceptional(format!(
            "{e}: square {}, K-pairing {}",
            e.square(),
            canonical_class(e.n()).dot(e)
        )));
    }
    if e.degree() < 0 {
        return Err(Error::invalid(format!("{e} has negative degree")));
    }
    if e.degree() > 0 && e.n() < 3 {
        return Err(Error::invalid("Cremona reduction needs N >= 3"));
    }
    let mut steps = Vec::new();
    let mut cur = e.clone();
    while cur.degree() > 0 {
        let [i, j, k] = top_three(&cur);
        let next = cremona_reflect(&cur, i, j, k)?;
        if next.degree() >= cur.degree() {
            return Err(Error::TheoremViolation(format!(
                "Cremona step on {cur} via H{i}{j}{k} does not lower the degree"
            )));
        }
        steps.push(ReductionStep { triple: [i, j, k], before: cur, after: next.clone() });
        cur = next;
    }
    // degree 0, square −1, K·e = −1 forces a single coordinate equal to 1
    let final_index = match cur.coords[1..].iter().position(|&c| c == 1) {
        Some(p) if cur.coords.iter().filter(|&&c| c != 0).count() == 1 => p + 1,
        _ => return Err(Error::TheoremViolation(format!("descent ended at {cur}, not some E_l"))),
    };
    Ok(ReductionTrace { input: e.clone(), steps, final_index })
}

#[derive(Clone, Debug, Serialize)]
pub struct SymplecticReduction {
    pub class: SymplecticClass,
    /// Maps input coordinates to output coordinates; fixes K.
    pub isometry: Isometry,
    pub cremona_steps: usize,
    /// All λᵢ > 0 in the output. False flags a class that is not symplectic.
    pub positive: bool,
}

fn sort_permutation(w: &SymplecticClass) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..w.n()).collect();
    idx.sort_by(|&a, &b| w.lambda[b].cmp(&w.lambda[a]).then(a.cmp(&b)));
    idx
}

/// Sort λ descending and apply R(H₁₂₃) while ω(H₁₂₃) < 0.
pub fn reduce_symplectic(w: &SymplecticClass, max_iters: usize) -> Result<SymplecticReduction> {
    if !w.square().is_positive() {
        return Err(Error::invalid(format!("{w} has nonpositive square")));
    }
    let n = w.n();
    let dim = n + 1;
    let mut cur = w.clone();
    let mut iso = Isometry::identity(dim);
    let mut cremona_steps = 0;
    let mut iters = 0;
    loop {
        if iters >= max_iters {
            return Err(Error::IterationCap(max_iters));
        }
        iters += 1;
        let p = sort_permutation(&cur);
        if p.iter().enumerate().any(|(i, &j)| i != j) {
            // new λᵢ = old λ_{p(i)}, i.e. E_{p(i)+1} ↦ E_{i+1}
            let mut img = vec![0; n];
            for (i, &j) in p.iter().enumerate() {
                img[j] = i + 1;
            }
            let perm = Isometry::permutation(&img)?;
            cur = SymplecticClass::from_coords(&perm.apply_q(&cur.coords()));
            iso = perm.compose(&iso);
        }
        if n < 3 {
            break;
        }
        let h = CohClass::h_minus(n, &[1, 2, 3]);
        if !cur.area(&h).is_negative() {
            break;
        }
        let r = Isometry::reflection_unchecked(&h);
        cur = SymplecticClass::from_coords(&r.apply_q(&cur.coords()));
        iso = r.compose(&iso);
        cremona_steps += 1;
    }
    debug_assert_eq!(iso.apply_q(&w.coords()), cur.coords());
    let positive = cur.lambda.iter().all(|l| l.is_positive());
    Ok(SymplecticReduction { class: cur, isometry: iso, cremona_steps, positive })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Structure {
    Monotone,
    /// `λ₁ > λ₂ = … = λ_N` and `ν − λ₁ = 2λ₂`; carries the minimal-area
    /// candidates `E_j`, `H − E₁ − E_j` for j > 1.
    SmallFiberShape {
        candidates: Vec<CohClass>,
    },
    Other,
}

/// Classifies a reduced class by the area pattern of the structure lemma.
///
/// With `basis_reduced = false` the class is first brought to reduced form.
pub fn structure_test(w: &SymplecticClass, basis_reduced: bool) -> Result<Structure> {
    let n = w.n();
    if n < 3 {
        return Err(Error::invalid("structure test needs N >= 3"));
    }
    let w = if basis_reduced { w.clone() } else { reduce_symplectic(w, DEFAULT_SYMPLECTIC_ITERS)?.class };
    if !w.is_reduced_class() {
        return Err(Error::invalid(format!("{w} is not reduced")));
    }
    if w.is_monotone() {
        return Ok(Structure::Monotone);
    }
    let l = &w.lambda;
    let tail_equal = l[1..].iter().all(|x| *x == l[1]);
    let shape = l[0] > l[1] && tail_equal && &w.nu - &l[0] == &l[1] * Rational::from_integer(2.into());
    if !shape {
        return Ok(Structure::Other);
    }
    let mut candidates = Vec::new();
    for j in 2..=n {
        candidates.push(CohClass::e(n, j));
        candidates.push(CohClass::h_minus(n, &[1, j]));
    }
    Ok(Structure::SmallFiberShape { candidates })
}

/// Reduced-basis test through minimal areas over the nested sets
/// `ℰᵢ = {e ∈ ℰ_ω : e·E_j = 0 for j > i}`: every Eᵢ must be ω-positive and
/// `ω(Eᵢ) = min over ℰᵢ`. False outside the symplectic cone. Needs N ≤ 8.
pub fn is_reduced_basis_by_min_area(w: &SymplecticClass) -> Result<bool> {
    let n = w.n();
    if !(1..=8).contains(&n) {
        return Err(Error::invalid("minimal-area test needs 1 <= N <= 8"));
    }
    if !w.square().is_positive() {
        return Ok(false);
    }
    if w.lambda.iter().any(|l| !l.is_positive()) {
        return Ok(false);
    }
    let all = exceptional_classes(n);
    let positive: Vec<(&CohClass, Rational)> = all.iter().map(|e| (e, w.area(e))).collect();
    // ℰ_ω is only meaningful for a symplectic class
    if positive.iter().any(|(_, a)| !a.is_positive()) {
        return Ok(false);
    }
    for i in 1..=n {
        let min = positive
            .iter()
            .filter(|(e, _)| e.coords[i + 1..].iter().all(|c| c.is_zero()))
            .map(|(_, a)| a)
            .min()
            .cloned();
        match min {
            Some(m) if m == w.lambda[i - 1] => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Builds `aH − Σ bₛEₛ`, rejecting non-exceptional data.
pub fn exceptional_from_multiplicities(a: i64, b: &[i64]) -> Result<CohClass> {
    let e = CohClass::from_multiplicities(a, b);
    if !e.is_exceptional() {
        return Err(Error::NotExceptional(format!("({a}; {b:?})")));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::q;

    #[test]
    fn small_n_sets() {
        let s = enumerate_exceptional(2, None).unwrap();
        let mut want = vec![CohClass::e(2, 1), CohClass::e(2, 2), CohClass::h_minus(2, &[1, 2])];
        want.sort_by(|x, y| (x.degree(), &x.coords).cmp(&(y.degree(), &y.coords)));
        assert_eq!(s.classes, want);
        assert!(s.complete);
        let s3 = enumerate_exceptional(3, None).unwrap();
        assert_eq!(s3.len(), 6);
        assert!(s3.classes.contains(&CohClass::h_minus(3, &[2, 3])));
    }

    #[test]
    fn counts() {
        let want = [1, 3, 6, 10, 16, 27, 56, 240];
        for (n, w) in (1..=8).zip(want) {
            assert_eq!(enumerate_exceptional(n, None).unwrap().len(), w, "N={n}");
        }
    }

    #[test]
    fn bounds() {
        assert_eq!(degree_bound(8), Some(7));
        assert!(enumerate_exceptional(9, None).is_err());
        let p = enumerate_exceptional(9, Some(3)).unwrap();
        assert!(!p.complete);
        assert!(p.classes.iter().all(|e| e.degree() <= 3 && e.is_exceptional()));
        let t = enumerate_exceptional(8, Some(2)).unwrap();
        assert!(!t.complete);
    }

    #[test]
    fn sequential_matches_parallel() {
        for n in 2..=8 {
            let a = enumerate_exceptional_with(Exec::Sequential, n, None).unwrap();
            let b = enumerate_exceptional_with(Exec::Parallel, n, None).unwrap();
            assert_eq!(a.classes, b.classes);
        }
    }

    #[test]
    fn cremona_examples() {
        let n = 4;
        let e1 = CohClass::e(n, 1);
        assert_eq!(cremona_reflect(&e1, 1, 2, 3).unwrap(), CohClass::h_minus(n, &[2, 3]));
        let k = canonical_class(n);
        assert_eq!(cremona_reflect(&k, 1, 2, 3).unwrap(), k);
        assert!(cremona_reflect(&k, 2, 1, 3).is_err());
        assert!(cremona_reflect(&k, 1, 2, 5).is_err());
    }

    #[test]
    fn reduce_examples() {
        let t = reduce_exceptional(&CohClass::h_minus(4, &[1, 2])).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.steps[0].triple, [1, 2, 3]);
        assert_eq!(t.final_index, 3);
        let t = reduce_exceptional(&CohClass::e(6, 5)).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.final_index, 5);
        let big = CohClass::from_multiplicities(6, &[3, 2, 2, 2, 2, 2, 2, 2]);
        assert!(big.is_exceptional());
        let t = reduce_exceptional(&big).unwrap();
        assert!(t.steps.windows(2).all(|w| w[0].after.degree() > w[1].after.degree()));
        assert!(reduce_exceptional(&CohClass::h(3)).is_err());
    }

    #[test]
    fn symplectic_descent() {
        let w = SymplecticClass::from_ints(3, &[1, 1, 1]);
        let r = reduce_symplectic(&w, 100).unwrap();
        assert_eq!(r.class, w);
        assert!(r.isometry.is_identity());

        let r = reduce_symplectic(&SymplecticClass::from_ints(3, &[2, 1, 1]), 100).unwrap();
        assert_eq!(r.class, SymplecticClass::from_ints(2, &[1, 0, 0]));
        assert_eq!(r.cremona_steps, 1);
        assert!(!r.positive);

        let r = reduce_symplectic(&SymplecticClass::from_ints(4, &[2, 1, 1, 1, 1]), 100).unwrap();
        assert!(r.positive && r.class.is_reduced_class());
        assert!(r.isometry.fixes(&canonical_class(5)));

        // unsorted input with a descent
        let w = SymplecticClass::from_ints(7, &[1, 3, 3, 3, 2]);
        let r = reduce_symplectic(&w, 100).unwrap();
        assert_eq!(r.isometry.apply_q(&w.coords()), r.class.coords());
        assert!(r.class.is_reduced_class());
        assert_eq!(r.class.square(), w.square());

        assert!(reduce_symplectic(&SymplecticClass::from_ints(1, &[1, 1, 1]), 100).is_err());
    }

    #[test]
    fn structure_examples() {
        assert_eq!(structure_test(&SymplecticClass::from_ints(3, &[1, 1, 1]), true).unwrap(), Structure::Monotone);
        let s = structure_test(&SymplecticClass::from_ints(5, &[3, 1, 1, 1]), true).unwrap();
        match s {
            Structure::SmallFiberShape { candidates } => assert_eq!(candidates.len(), 6),
            other => panic!("{other:?}"),
        }
        assert_eq!(structure_test(&SymplecticClass::from_ints(5, &[2, 2, 1, 1, 1]), true).unwrap(), Structure::Other);
        assert!(structure_test(&SymplecticClass::from_ints(1, &[1, 1, 1]), true).is_err());
        let unsorted = SymplecticClass::from_ints(5, &[1, 3, 1, 1]);
        assert!(structure_test(&unsorted, true).is_err());
        assert!(matches!(structure_test(&unsorted, false).unwrap(), Structure::SmallFiberShape { .. }));
        let half =
            SymplecticClass::new(q(3) + crate::lattice::q_frac(1, 2), vec![crate::lattice::q_frac(3, 2), q(1), q(1)]);
        assert!(matches!(structure_test(&half, true).unwrap(), Structure::SmallFiberShape { .. }));
    }

    #[test]
    fn min_area_criterion() {
        let w = SymplecticClass::from_ints(3, &[1, 1, 1]);
        assert!(is_reduced_basis_by_min_area(&w).unwrap());
        // coefficient-reduced, yet H−E₁−E₂ is smaller than E₂ inside ℰ₂
        let w = SymplecticClass::from_ints(5, &[2, 2, 1]);
        assert!(w.is_reduced_class());
        assert!(!is_reduced_basis_by_min_area(&w).unwrap());
    }
}
