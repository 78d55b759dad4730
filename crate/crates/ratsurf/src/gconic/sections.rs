//! Section classes `E₁ + cF + Σ c_t E_t` and the counting arguments built on them.

use std::collections::BTreeSet;

use serde::Serialize;

use super::ConicBundleModel;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::lattice::{canonical_class, CohClass};

/// Normal form of a section class. `pattern[t-2]` is set when c_t ≠ 0;
/// `sign` is the common value of the nonzero c_t (0 if there are none).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionForm {
    pub c: i64,
    pub pattern: Vec<bool>,
    pub sign: i8,
}

impl SectionForm {
    pub fn support(&self) -> usize {
        self.pattern.iter().filter(|&&b| b).count()
    }
}

fn check_standard(model: &ConicBundleModel) -> Result<()> {
    if model.fiber != CohClass::h_minus(model.n, &[1]) {
        return Err(Error::invalid("section normal form is taken with respect to F = H-E1"));
    }
    Ok(())
}

/// Section class with the given pattern; `sign` −1 gives the classes that
/// meet E_t, +1 the literal `c_t ∈ {0,1}` form.
pub fn section_class(n: usize, c: i64, pattern: &[bool], sign: i8) -> CohClass {
    let mut coords = vec![0; n + 1];
    coords[0] = c;
    coords[1] = 1 - c;
    for (i, &b) in pattern.iter().enumerate() {
        if b {
            coords[i + 2] = sign as i64;
        }
    }
    CohClass { coords }
}

pub fn section_form(e: &CohClass, model: &ConicBundleModel) -> Result<SectionForm> {
    check_standard(model)?;
    if e.n() != model.n {
        return Err(Error::DimensionMismatch { expected: model.n + 1, got: e.dim() });
    }
    let c = e.coords[0];
    if e.coords[1] != 1 - c {
        return Err(Error::invalid(format!("{e} is not of the form E1 + cF + sum c_t E_t")));
    }
    let tail = &e.coords[2..];
    let signs: BTreeSet<i64> = tail.iter().copied().filter(|&x| x != 0).collect();
    let sign = match signs.iter().copied().collect::<Vec<_>>().as_slice() {
        [] => 0,
        [1] => 1,
        [-1] => -1,
        _ => return Err(Error::invalid(format!("{e}: coefficients c_t must all lie in {{0,1}} or all in {{0,-1}}"))),
    };
    Ok(SectionForm { c, pattern: tail.iter().map(|&x| x != 0).collect(), sign })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionIdentity {
    pub r: usize,
    pub m: i64,
    pub m_prime: i64,
    pub dot: i64,
    pub holds: bool,
}

/// `N − 1 = r + m + m′ + 2E·E′`.
pub fn section_identity(e: &CohClass, e2: &CohClass, model: &ConicBundleModel) -> Result<SectionIdentity> {
    let (f, f2) = (section_form(e, model)?, section_form(e2, model)?);
    if e == e2 {
        return Err(Error::invalid("the two sections must be distinct"));
    }
    if f.sign * f2.sign < 0 {
        return Err(Error::invalid("both sections must use the same sign convention for c_t"));
    }
    let r = f.pattern.iter().zip(&f2.pattern).filter(|(a, b)| a == b).count();
    let (m, m_prime, dot) = (-e.square(), -e2.square(), e.dot(e2));
    let holds = (model.n as i64 - 1) == r as i64 + m + m_prime + 2 * dot;
    Ok(SectionIdentity { r, m, m_prime, dot, holds })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionSweep {
    pub n: usize,
    pub classes: usize,
    pub pairs: u64,
    pub failures: u64,
}

/// Checks the identity on every ordered pair of distinct sections with
/// `c ∈ [c_min, c_max]`, under both sign conventions.
pub fn section_sweep(exec: Exec, n: usize, c_min: i64, c_max: i64) -> Result<SectionSweep> {
    let model = ConicBundleModel::standard(n)?;
    if n > 20 || c_min > c_max {
        return Err(Error::invalid("sweep needs N <= 20 and c_min <= c_max"));
    }
    let bits = n - 1;
    let mut classes = Vec::new();
    for sign in [-1i8, 1] {
        let mut group = Vec::new();
        for c in c_min..=c_max {
            for mask in 0u32..(1 << bits) {
                let pattern: Vec<bool> = (0..bits).map(|i| mask >> i & 1 == 1).collect();
                group.push(section_class(n, c, &pattern, sign));
            }
        }
        classes.push(group);
    }
    let mut pairs = 0;
    let mut failures = 0;
    for group in &classes {
        let per: Vec<(u64, u64)> = exec::map_range(exec, group.len(), |i| {
            let (mut p, mut f) = (0, 0);
            for (j, other) in group.iter().enumerate() {
                if i == j {
                    continue;
                }
                p += 1;
                match section_identity(&group[i], other, &model) {
                    Ok(s) if s.holds => {}
                    _ => f += 1,
                }
            }
            (p, f)
        });
        for (p, f) in per {
            pairs += p;
            failures += f;
        }
    }
    Ok(SectionSweep { n, classes: classes.iter().map(Vec::len).sum(), pairs, failures })
}

#[derive(Clone, Debug, Serialize)]
pub struct SwapSectionSearch {
    pub n: usize,
    pub max_m: i64,
    pub bound: i64,
    /// Values of m above `max_m` shown infeasible, largest first.
    pub infeasible: Vec<i64>,
    /// A family realizing `max_m`, as geometric sections.
    pub witness: Vec<CohClass>,
    pub pair_checks: usize,
    pub triple_checks: usize,
}

fn family_search(exec: Exec, bits: usize, dmin: u32) -> Option<Vec<u32>> {
    let full: u32 = (1 << bits) - 1;
    let cands: Vec<u32> = (1..=full).filter(|x| x.count_ones() % 2 == 0 && x.count_ones() >= dmin).collect();
    fn dfs(cands: &[u32], chosen: &mut Vec<u32>, covered: u32, full: u32, dmin: u32) -> bool {
        if covered == full {
            return true;
        }
        let bit = (!covered & full).trailing_zeros();
        for &c in cands {
            if c >> bit & 1 == 0 || chosen.iter().any(|&x| (x ^ c).count_ones() < dmin) {
                continue;
            }
            chosen.push(c);
            if dfs(cands, chosen, covered | c, full, dmin) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    // shard on the set that covers bit 0
    let first: Vec<u32> = cands.iter().copied().filter(|c| c & 1 == 1).collect();
    let found = exec::map(exec, &first, |&c| {
        let mut chosen = vec![0, c];
        dfs(&cands, &mut chosen, c, full, dmin).then_some(chosen)
    });
    found.into_iter().flatten().next()
}

/// Largest m such that a family of sections of self-intersection −m
/// exists in which every fiber is exchanged relative to each member, all
/// pairs satisfy the section identity with r ≥ 0 and E·E′ ≥ 0, and every
/// triple obeys `r + r′ = N − 2`.
pub fn max_swap_closed_section(n: usize) -> Result<i64> {
    Ok(max_swap_closed_section_detail(Exec::default(), n)?.max_m)
}

pub fn max_swap_closed_section_detail(exec: Exec, n: usize) -> Result<SwapSectionSearch> {
    if n < 6 || !n.is_multiple_of(2) {
        return Err(Error::invalid(format!("N must be even and at least 6, got {n}")));
    }
    if n > 18 {
        return Err(Error::invalid("search is limited to N <= 18"));
    }
    let model = ConicBundleModel::standard(n)?;
    let bits = n - 1;
    let bound = (n as i64 - 4) / 2;
    let mut infeasible = Vec::new();
    // a single pair already forces 2m <= N-1
    let mut m = (n as i64 - 1) / 2;
    let family = loop {
        let dmin = (2 * m).max(2) as u32;
        if let Some(f) = family_search(exec, bits, dmin) {
            break f;
        }
        infeasible.push(m);
        m -= 1;
    };
    let base: u32 = if m % 2 == 0 { 1 } else { 0 };
    let witness: Vec<CohClass> = family
        .iter()
        .map(|&s| {
            let t = s ^ base;
            let pattern: Vec<bool> = (0..bits).map(|i| t >> i & 1 == 1).collect();
            let c = (1 + t.count_ones() as i64 - m) / 2;
            section_class(n, c, &pattern, -1)
        })
        .collect();
    let mut pair_checks = 0;
    let mut triple_checks = 0;
    for (i, a) in witness.iter().enumerate() {
        if -a.square() != m {
            return Err(Error::TheoremViolation(format!("witness {a} has self-intersection {}", a.square())));
        }
        for b in &witness[i + 1..] {
            let s = section_identity(a, b, &model)?;
            pair_checks += 1;
            if !s.holds || s.dot < 0 {
                return Err(Error::TheoremViolation(format!("witness pair {a}, {b} fails the section identity")));
            }
            if s.r != 1 {
                continue;
            }
            let (fa, fb) = (section_form(a, &model)?, section_form(b, &model)?);
            let f0 = (0..bits).find(|&t| fa.pattern[t] == fb.pattern[t]).expect("r = 1");
            for x in &witness {
                let fx = section_form(x, &model)?;
                if fx.pattern[f0] == fa.pattern[f0] {
                    continue;
                }
                let (r1, r2) = (section_identity(x, a, &model)?.r, section_identity(x, b, &model)?.r);
                triple_checks += 1;
                if r1 + r2 != n - 2 {
                    return Err(Error::TheoremViolation(format!("triple with {x}: r + r' = {} != N-2", r1 + r2)));
                }
            }
        }
    }
    Ok(SwapSectionSearch { n, max_m: m, bound, infeasible, witness, pair_checks, triple_checks })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalConfiguration {
    pub exists: bool,
    /// (m, E·E′, sections) of the first configuration found.
    pub witness: Option<(i64, i64, CohClass, CohClass)>,
}

/// Whether a pair E, E′ = g·E can exist on a minimal bundle: either
/// m ≥ 2 with E·E′ ≥ 0, or E = E₁ (m = 1) with E·E′ ≥ 1.
pub fn minimal_configuration_exists(n: usize) -> Result<MinimalConfiguration> {
    let model = ConicBundleModel::standard(n)?;
    let bits = n - 1;
    for m in 1..=n as i64 {
        for dot in 0..=n as i64 {
            if m == 1 && dot == 0 {
                continue;
            }
            let d = (2 * m + 2 * dot) as usize;
            if d > bits {
                continue;
            }
            let base: Vec<bool> = (0..bits).map(|i| i == 0 && m % 2 == 0).collect();
            let other: Vec<bool> = (0..bits).map(|i| (i < d) != base[i]).collect();
            let size = |p: &[bool]| p.iter().filter(|&&b| b).count() as i64;
            let e = section_class(n, (1 + size(&base) - m) / 2, &base, -1);
            let e2 = section_class(n, (1 + size(&other) - m) / 2, &other, -1);
            let s = section_identity(&e, &e2, &model)?;
            if s.holds && s.m == m && s.m_prime == m && s.dot == dot {
                return Ok(MinimalConfiguration { exists: true, witness: Some((m, dot, e, e2)) });
            }
        }
    }
    Ok(MinimalConfiguration { exists: false, witness: None })
}

/// A multiset of vertical curves, as (class, multiplicity).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct VerticalDecomposition {
    pub parts: Vec<(CohClass, u64)>,
}

/// All ways to write `target` as a nonnegative combination of E_j,
/// H−E₁−E_j and H−E₁.
pub fn vertical_decompositions(target: &CohClass, model: &ConicBundleModel) -> Result<Vec<VerticalDecomposition>> {
    check_standard(model)?;
    let n = model.n;
    if target.n() != n {
        return Err(Error::DimensionMismatch { expected: n + 1, got: target.dim() });
    }
    let t = target.coords[0];
    if target.coords[1] != -t || t < 0 {
        return Ok(Vec::new());
    }
    let tj: Vec<i64> = target.coords[2..].to_vec();
    let lows: Vec<i64> = tj.iter().map(|&x| (-x).max(0)).collect();
    if lows.iter().sum::<i64>() > t {
        return Ok(Vec::new());
    }
    let f = model.fiber.clone();
    let mut out = Vec::new();
    let mut y = lows.clone();
    fn rec(i: usize, y: &mut Vec<i64>, lows: &[i64], budget: i64, emit: &mut dyn FnMut(&[i64])) {
        if i == y.len() {
            emit(y);
            return;
        }
        for extra in 0..=budget {
            y[i] = lows[i] + extra;
            rec(i + 1, y, lows, budget - extra, emit);
        }
        y[i] = lows[i];
    }
    let budget = t - lows.iter().sum::<i64>();
    rec(0, &mut y, &lows, budget, &mut |y| {
        let mut parts = Vec::new();
        let z = t - y.iter().sum::<i64>();
        if z > 0 {
            parts.push((f.clone(), z as u64));
        }
        for (i, (&yj, &tjj)) in y.iter().zip(&tj).enumerate() {
            let x = tjj + yj;
            if x > 0 {
                parts.push((CohClass::e(n, i + 2), x as u64));
            }
            if yj > 0 {
                parts.push((CohClass::h_minus(n, &[1, i + 2]), yj as u64));
            }
        }
        parts.sort();
        out.push(VerticalDecomposition { parts });
    });
    out.sort();
    Ok(out)
}

/// `C = −K − F = 2H − E₂ − … − E₆` on the six-point model.
pub fn invariant_exceptional_n6() -> CohClass {
    let k = canonical_class(6);
    let f = CohClass::h_minus(6, &[1]);
    -&(&k + &f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantSixCheck {
    pub class: CohClass,
    pub square: i64,
    pub k_dot: i64,
    pub in_span: bool,
    pub holds: bool,
}

pub fn invariant_exceptional_n6_check() -> InvariantSixCheck {
    let class = invariant_exceptional_n6();
    let square = class.square();
    let k_dot = canonical_class(6).dot(&class);
    let in_span = class == CohClass::from_multiplicities(2, &[0, 1, 1, 1, 1, 1]);
    InvariantSixCheck { holds: square == -1 && k_dot == -1 && in_span, class, square, k_dot, in_span }
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityOneCase {
    pub section: CohClass,
    pub target: CohClass,
    pub decompositions: usize,
}

/// Vertical remainders `C − E₁ − E′` over sections E′ ≠ E₁ with E′² ≥ −1
/// and positive H-coefficient, `c ≤ c_max`.
pub fn multiplicity_one_targets(c_max: i64) -> Result<Vec<MultiplicityOneCase>> {
    let model = ConicBundleModel::standard(6)?;
    let c_big = invariant_exceptional_n6();
    let mut out = Vec::new();
    for c in 1..=c_max {
        for mask in 0u32..32 {
            let pattern: Vec<bool> = (0..5).map(|i| mask >> i & 1 == 1).collect();
            if mask.count_ones() as i64 > 2 * c {
                continue;
            }
            let section = section_class(6, c, &pattern, -1);
            let target = &(&c_big - &CohClass::e(6, 1)) - &section;
            let decompositions = vertical_decompositions(&target, &model)?.len();
            out.push(MultiplicityOneCase { section, target, decompositions });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoSectionReport {
    pub examined: usize,
    pub solutions: Vec<(CohClass, CohClass)>,
    /// Self-intersections of S₂ = C − S₁ seen when S₁² = −1.
    pub s2_squares: BTreeSet<i64>,
}

/// Splittings C = S₁ + S₂ into sections with S₁² = −1, S₂² = 0, S₁·S₂ = 0, S₁ ≠ E₁.
pub fn two_section_splits(c_range: i64) -> Result<TwoSectionReport> {
    let model = ConicBundleModel::standard(6)?;
    let c_big = invariant_exceptional_n6();
    let e1 = CohClass::e(6, 1);
    let mut examined = 0;
    let mut solutions = Vec::new();
    let mut s2_squares = BTreeSet::new();
    for c in -c_range..=c_range {
        for mask in 0u32..32 {
            let pattern: Vec<bool> = (0..5).map(|i| mask >> i & 1 == 1).collect();
            let s1 = section_class(6, c, &pattern, -1);
            let s2 = &c_big - &s1;
            examined += 1;
            if s1 == e1 || s1.square() != -1 {
                continue;
            }
            let Ok(form) = section_form(&s2, &model) else { continue };
            if form.sign > 0 {
                continue;
            }
            s2_squares.insert(s2.square());
            if s2.square() == 0 && s1.dot(&s2) == 0 {
                solutions.push((s1, s2));
            }
        }
    }
    Ok(TwoSectionReport { examined, solutions, s2_squares })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(n: usize) -> ConicBundleModel {
        ConicBundleModel::standard(n).unwrap()
    }

    #[test]
    fn identity_examples() {
        let m5 = model(5);
        let e1 = CohClass::e(5, 1);
        assert!(section_identity(&e1, &e1, &m5).is_err());
        let all = section_class(5, 1, &[true; 4], 1);
        let s = section_identity(&e1, &all, &m5).unwrap();
        assert!(s.holds);
        assert_eq!((s.r, s.m), (0, 1));
        let geo = section_class(5, 1, &[true; 4], -1);
        let s = section_identity(&e1, &geo, &m5).unwrap();
        assert!(s.holds);
        assert_eq!((s.r, s.m, s.m_prime, s.dot), (0, 1, 3, 0));
        assert!(section_identity(&all, &section_class(5, 0, &[true, false, false, false], -1), &m5).is_err());
        assert!(section_form(&CohClass::h(5), &m5).is_ok());
        assert!(section_form(&CohClass::from_multiplicities(2, &[0, 0, 0, 0, 0]), &m5).is_err());
    }

    #[test]
    fn small_sweep() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            let s = section_sweep(exec, 5, -2, 2).unwrap();
            assert_eq!(s.classes, 2 * 5 * 16);
            assert_eq!(s.failures, 0);
        }
    }

    #[test]
    fn swap_bound() {
        let s = max_swap_closed_section_detail(Exec::Sequential, 6).unwrap();
        assert_eq!(s.max_m, 1);
        assert_eq!(s.infeasible, vec![2]);
        assert!(s.witness.len() >= 2);
        assert_eq!(max_swap_closed_section(8).unwrap(), 2);
        assert!(max_swap_closed_section(7).is_err());
        assert!(max_swap_closed_section(4).is_err());
    }

    #[test]
    fn minimal_configurations() {
        for n in 3..5 {
            assert!(!minimal_configuration_exists(n).unwrap().exists);
        }
        for n in 5..9 {
            assert!(minimal_configuration_exists(n).unwrap().exists);
        }
    }

    #[test]
    fn vertical_examples() {
        let m6 = model(6);
        let target = CohClass::from_multiplicities(2, &[2, 1, 1, 1, 1, 1]);
        assert!(vertical_decompositions(&target, &m6).unwrap().is_empty());
        let f = CohClass::h_minus(6, &[1]);
        let d = vertical_decompositions(&f, &m6).unwrap();
        assert_eq!(d.len(), 6);
        assert!(d.contains(&VerticalDecomposition { parts: vec![(f.clone(), 1)] }));
        let z = vertical_decompositions(&CohClass::zero(6), &m6).unwrap();
        assert_eq!(z, vec![VerticalDecomposition { parts: vec![] }]);
        let two_f = CohClass::from_multiplicities(2, &[2, 0, 0, 0, 0, 0]);
        for d in vertical_decompositions(&two_f, &m6).unwrap() {
            let sum = d.parts.iter().fold(CohClass::zero(6), |acc, (c, k)| &acc + &(*k as i64 * c));
            assert_eq!(sum, two_f);
        }
    }

    #[test]
    fn six_point_lemma() {
        let c = invariant_exceptional_n6_check();
        assert!(c.holds);
        assert_eq!((c.square, c.k_dot), (-1, -1));
        assert!(multiplicity_one_targets(5).unwrap().iter().all(|m| m.decompositions == 0));
        let t = two_section_splits(5).unwrap();
        assert!(t.solutions.is_empty());
        assert_eq!(t.s2_squares, BTreeSet::from([-2]));
    }
}
