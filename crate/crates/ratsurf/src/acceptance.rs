//! End-to-end checks over every module, one report per criterion.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cone::{self, ConeOracle};
use crate::error::Result;
use crate::exceptional::{enumerate_exceptional_with, exceptional_classes, reduce_exceptional};
use crate::exec::{self, Exec};
use crate::gconic::{self, CaseTag, ConicBundleModel, FiberAction};
use crate::hexagon::{self, ImprimitiveKind, RotationPair};
use crate::lattice::{canonical_class, q_frac, CohClass, SymplecticClass};
use crate::weyl::{self, Isometry};

pub const CRITERIA: usize = 13;
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<28} {}  ({} ms) {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed_ms,
            self.detail
        )
    }
}

pub fn name(id: usize) -> &'static str {
    match id {
        1 => "exceptional counts",
        2 => "reduction",
        3 => "weyl orders",
        4 => "trace/rank",
        5 => "section identity",
        6 => "section bound",
        7 => "six-point decompositions",
        8 => "fiber pairs",
        9 => "blowdown obstruction",
        10 => "cone monotonicity",
        11 => "hexagon calculus",
        12 => "imprimitive groups",
        13 => "conic classifier",
        _ => "unknown",
    }
}

/// Runs one criterion; errors inside a check count as failure.
pub fn run(id: usize, exec: Exec, seed: u64) -> CriterionReport {
    let start = Instant::now();
    let out = match id {
        1 => c1(exec),
        2 => c2(),
        3 => c3(exec),
        4 => c4(exec, seed),
        5 => c5(exec),
        6 => c6(exec),
        7 => c7(),
        8 => c8(),
        9 => c9(),
        10 => c10(exec),
        11 => c11(),
        12 => c12(),
        13 => c13(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (passed, detail) = out.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionReport { id, name: name(id), passed, detail, elapsed_ms: start.elapsed().as_millis() }
}

pub fn run_all(exec: Exec, seed: u64) -> Vec<CriterionReport> {
    (1..=CRITERIA).map(|id| run(id, exec, seed)).collect()
}

type Check = Result<(bool, String)>;

fn c1(exec: Exec) -> Check {
    let start = Instant::now();
    let want = [3, 6, 10, 16, 27, 56, 240];
    let mut got = Vec::new();
    let mut sane = true;
    for n in 2..=8 {
        let set = enumerate_exceptional_with(exec, n, None)?;
        let k = canonical_class(n);
        sane &= set.complete && set.classes.iter().all(|e| e.square() == -1 && k.dot(e) == -1);
        got.push(set.len());
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((got == want && sane && secs < 10.0, format!("counts {got:?} in {secs:.2}s")))
}

fn c2() -> Check {
    let start = Instant::now();
    let mut classes = 0;
    let mut stabilized = 0;
    let mut bad = Vec::new();
    for n in 1..=8 {
        let forms: Vec<SymplecticClass> = (0..=2)
            .map(|b| {
                let mut lam = vec![1; n];
                lam[0] = 1 + b;
                SymplecticClass::from_ints(3 + b, &lam)
            })
            .collect();
        for e in exceptional_classes(n).iter() {
            classes += 1;
            // no Cremona triple below N = 3: reduce the class in the N = 3 lattice instead
            let padded;
            let (e, forms) = if n < 3 && e.degree() > 0 {
                stabilized += 1;
                let mut c = e.coords.clone();
                c.resize(4, 0);
                padded = (CohClass { coords: c }, vec![SymplecticClass::from_ints(3, &[1, 1, 1])]);
                (&padded.0, &padded.1)
            } else {
                (e, &forms)
            };
            let trace = match reduce_exceptional(e) {
                Ok(t) => t,
                Err(err) => {
                    bad.push(format!("{e}: {err}"));
                    continue;
                }
            };
            let degs: Vec<i64> = trace.classes().iter().map(|c| c.degree()).collect();
            if degs.windows(2).any(|w| w[1] >= w[0]) {
                bad.push(format!("{e}: degrees {degs:?}"));
            }
            for w in forms {
                let areas = trace.areas(w);
                if areas.windows(2).any(|p| p[1] > p[0]) {
                    bad.push(format!("{e}: areas increase for {w}"));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        bad.is_empty() && secs < 30.0,
        format!(
            "{classes} classes ({stabilized} reduced in the N=3 lattice), {} problems, {secs:.2}s {}",
            bad.len(),
            first(&bad)
        ),
    ))
}

fn first(v: &[String]) -> String {
    v.first().cloned().unwrap_or_default()
}

fn c3(exec: Exec) -> Check {
    let want = [12u128, 120, 1920, 51840, 2903040];
    let mut orders = Vec::new();
    for n in 3..=7 {
        let g = weyl::generate_group_with(exec, &weyl::simple_reflections(n)?, weyl::DEFAULT_CLOSURE_LIMIT)?;
        orders.push(g.order().unwrap_or(0));
    }
    let roots: Vec<usize> = (3..=8).map(|n| weyl::all_roots(n).map(|r| r.len())).collect::<Result<_>>()?;
    let start = Instant::now();
    let e8 = weyl::group_order_via_chain(&weyl::simple_reflections(8)?, &exceptional_classes(8))?;
    let secs = start.elapsed().as_secs_f64();
    let ok = orders == want && roots == [8, 20, 40, 72, 126, 240] && e8 == 696729600 && secs < 60.0;
    Ok((ok, format!("closure {orders:?}, chain {e8} in {secs:.3}s, roots {roots:?}")))
}

/// Random K-fixing subgroups from words in simple reflections.
pub fn random_subgroup(rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<Isometry>> {
    let simple = weyl::simple_reflections(n)?;
    let ngens = rng.gen_range(1..=3);
    let mut gens = Vec::with_capacity(ngens);
    for _ in 0..ngens {
        let len = rng.gen_range(1..=8);
        let mut g = Isometry::identity(n + 1);
        for _ in 0..len {
            g = g.compose(&simple[rng.gen_range(0..simple.len())]);
        }
        gens.push(g);
    }
    Ok(gens)
}

fn c4(exec: Exec, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<(usize, Vec<Isometry>)> = (0..200)
        .map(|_| {
            let n = rng.gen_range(3..=6);
            random_subgroup(&mut rng, n).map(|g| (n, g))
        })
        .collect::<Result<_>>()?;
    let results = exec::map(exec, &cases, |(_, gens)| -> Result<(bool, usize)> {
        let g = weyl::generate_group_with(Exec::Sequential, gens, weyl::DEFAULT_CLOSURE_LIMIT)?;
        let rank = weyl::invariant_lattice(&g).rank;
        let elems = g.elements().expect("closure");
        let burnside = elems.len() as i128 * rank as i128 == elems.trace_sum();
        let ts = weyl::trace_sum_condition(&g)?;
        Ok((burnside && ts.holds == (rank == 1), rank))
    });
    let mut fails = 0;
    let mut rank1 = 0;
    for r in results {
        let (ok, rank) = r?;
        fails += usize::from(!ok);
        rank1 += usize::from(rank == 1);
    }
    Ok((fails == 0, format!("200 subgroups (seed {seed:#x}), {rank1} of rank 1, {fails} failures")))
}

fn c5(exec: Exec) -> Check {
    let mut pairs = 0;
    let mut failures = 0;
    for n in 5..=9 {
        let s = gconic::section_sweep(exec, n, -2, 2)?;
        pairs += s.pairs;
        failures += s.failures;
    }
    Ok((failures == 0 && pairs > 0, format!("{pairs} pairs, {failures} failures")))
}

fn c6(exec: Exec) -> Check {
    let mut got = Vec::new();
    let mut ok = true;
    for n in [6, 8, 10] {
        let s = gconic::max_swap_closed_section_detail(exec, n)?;
        ok &= s.max_m <= s.bound;
        got.push(s.max_m);
    }
    ok &= got[0] == 1;
    Ok((ok, format!("max m for N=6,8,10: {got:?}; bounds [1, 2, 3]")))
}

fn c7() -> Check {
    let model = ConicBundleModel::standard(6)?;
    let target = CohClass::from_multiplicities(2, &[2, 1, 1, 1, 1, 1]);
    let mult2 = gconic::vertical_decompositions(&target, &model)?;
    let mult1 = gconic::multiplicity_one_targets(5)?;
    let mult1_hits = mult1.iter().filter(|m| m.decompositions > 0).count();
    let c = gconic::invariant_exceptional_n6_check();
    let splits = gconic::two_section_splits(5)?;
    let ok = mult2.is_empty() && !mult1.is_empty() && mult1_hits == 0 && c.holds && splits.solutions.is_empty();
    Ok((
        ok,
        format!(
            "multiplicity 2: {} decompositions; multiplicity 1: {} targets, {mult1_hits} decomposable; C={} (C^2={}, K.C={}); section splits {}",
            mult2.len(),
            mult1.len(),
            c.class,
            c.square,
            c.k_dot,
            splits.solutions.len()
        ),
    ))
}

fn c8() -> Check {
    let a = |n| -> Result<Vec<i64>> { Ok(cone::fiber_pairs(n)?.iter().map(|p| p.a).collect()) };
    let main = [a(5)?, a(6)?, a(7)?, a(8)?];
    let mut others = Vec::new();
    for n in [2, 3, 4, 9, 10] {
        others.extend(a(n)?);
    }
    let ok = main == [vec![1], vec![], vec![2], vec![4]] && others.is_empty();
    Ok((ok, format!("N=5..8: {main:?}; N in {{2,3,4,9,10}}: {others:?}")))
}

fn c9() -> Check {
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [5, 6, 7, 8] {
        let hits = cone::blowdown_obstruction(n, -10_000)?;
        ok &= if n == 6 { hits == [(-1, 1)] } else { hits.is_empty() };
        detail.push(format!("N={n}: {hits:?}"));
    }
    Ok((ok, detail.join(", ")))
}

fn c10(exec: Exec) -> Check {
    let grid: Vec<_> = (0..50).map(|k| q_frac(k - 20, 10)).collect();
    let mut negatives = 0;
    let mut brackets = Vec::new();
    for n in 1..=8 {
        let f = CohClass::h_minus(n, &[1]);
        negatives += cone::fiber_negative_classes(n, &f).len();
        let oracle = ConeOracle::new(n, None)?;
        let s = cone::slice_scan_with(exec, &oracle, &f, &canonical_class(n), &grid)?;
        let fmt = |x: &Option<_>| x.as_ref().map_or("-".to_string(), crate::lattice::fmt_rational);
        brackets.push(format!("N={n}:({},{}]", fmt(&s.below), fmt(&s.above)));
    }
    Ok((negatives == 0, format!("{negatives} classes with F.e<0; thresholds {}", brackets.join(" "))))
}

fn c11() -> Check {
    let t1 = hexagon::propagate_rotation(RotationPair::new(1, 0, 2));
    let t2 = hexagon::propagate_rotation(RotationPair::new(1, 1, 2));
    let table = |t: &[(i64, i64)]| t.iter().map(|&(a, b)| RotationPair::new(a, b, 2)).collect::<Vec<_>>();
    let exact = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];
    // the (1,1) table only holds mod 2, the order of the involution
    let tables_ok = hexagon::propagate_rotation_int(1, 0) == exact
        && t1.to_vec() == table(&exact)
        && t2.to_vec() == table(&[(1, 1), (0, -1), (1, 0), (-1, -1), (0, 1), (-1, 0)]);
    let mut g3 = true;
    for n in 1..=12u32 {
        for a in 0..n as i64 {
            for b in 0..n as i64 {
                g3 &= hexagon::g3_conjugation_check(&hexagon::TorusElement::new(a, b, n));
            }
        }
    }
    let inv = hexagon::involution_nontrivial_conjugation().holds;
    let subs = hexagon::transitive_hexagon_subgroups()?;
    let names: Vec<String> =
        subs.iter().map(|s| format!("{} (invariant rank {})", s.structure, s.invariant_rank)).collect();
    let ok = tables_ok && g3 && inv && subs.len() == 2;
    Ok((
        ok,
        format!(
            "tables {}, g3 {}, involutions {}, {} transitive subgroups: {}",
            tables_ok,
            g3,
            inv,
            subs.len(),
            names.join(", ")
        ),
    ))
}

/// Valid (k, s) for G_(n,k,s): k > 1, k | n, s² − s + 1 ≡ 0 mod k, 0 ≤ s < n.
pub fn valid_nks(n: u32) -> Vec<(u32, i64)> {
    let mut out = Vec::new();
    for k in 2..=n {
        if !n.is_multiple_of(k) {
            continue;
        }
        for s in 0..n as i64 {
            if (s * s - s + 1).rem_euclid(k as i64) == 0 {
                out.push((k, s));
            }
        }
    }
    out
}

fn c12() -> Check {
    let start = Instant::now();
    let mut groups = 0;
    let mut bad = Vec::new();
    for n in 1..=9u32 {
        let mut specs = vec![(ImprimitiveKind::Gn, 1, 0), (ImprimitiveKind::GnTilde, 1, 0)];
        specs.extend(valid_nks(n).into_iter().map(|(k, s)| (ImprimitiveKind::Gnks, k, s)));
        if n % 3 == 0 {
            specs.push((ImprimitiveKind::Gn32Tilde, 3, 2));
        }
        for (kind, k, s) in specs {
            let g = hexagon::make_imprimitive(kind, n, k, s)?;
            groups += 1;
            if g.order() != g.expected_order() {
                bad.push(format!("{kind:?}(n={n},k={k},s={s}): {} vs {}", g.order(), g.expected_order()));
            }
        }
    }
    let pres = hexagon::presentation_check(5, 1, 0)?.holds && hexagon::presentation_check(9, 3, 2)?.holds;
    let mut g2 = 0;
    for n in 1..=12u32 {
        for k in (1..=n).filter(|k| n % k == 0) {
            for b in 0..n as i64 {
                if (b * b + b + 1).rem_euclid(k as i64) != 0 {
                    continue;
                }
                g2 += 1;
                if !hexagon::g2_action_check(n, k, b)?.holds {
                    bad.push(format!("g2 action fails at (n={n},k={k},b={b})"));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        bad.is_empty() && pres && secs < 30.0,
        format!(
            "{groups} groups, presentations {pres}, {g2} g2 cases, {} problems, {secs:.2}s {}",
            bad.len(),
            first(&bad)
        ),
    ))
}

/// (description, generators, N, m, expected tag, expected Q).
pub type ClassifierCase = (String, Vec<Isometry>, usize, u64, CaseTag, Option<String>);

pub fn classifier_suite() -> Result<Vec<ClassifierCase>> {
    let mut out = Vec::new();
    let iso = |a: &FiberAction| a.to_isometry();
    for n in [5, 7, 9] {
        let swap = iso(&FiberAction::full_swap(n))?;
        out.push((format!("Z2 full swap N={n}"), vec![swap.clone()], n, 1, CaseTag::Case2, Some("Z2".into())));
        let cyc: Vec<usize> = (2..=n).map(|j| if j == n { 2 } else { j + 1 }).collect();
        let rot = iso(&FiberAction::new(cyc, vec![1; n - 1])?)?;
        out.push((format!("Z2 x C{} N={n}", n - 1), vec![swap.clone(), rot], n, 1, CaseTag::Case2, Some("Z2".into())));
        for m in [2, 3, 4, 5] {
            out.push((
                format!("D{} over G0 N={n}", 2 * m),
                vec![swap.clone()],
                n,
                m,
                CaseTag::Case1,
                Some(format!("D{}", 2 * m)),
            ));
        }
        // Q = G0: pair swaps of the base with every component exchanged
        let pairs: Vec<Isometry> = (0..(n - 1) / 2)
            .map(|p| {
                let mut pi: Vec<usize> = (2..=n).collect();
                pi.swap(2 * p, 2 * p + 1);
                iso(&FiberAction::new(pi, vec![-1; n - 1])?)
            })
            .collect::<Result<_>>()?;
        for m in [2, 4] {
            out.push((format!("Q=G0=Z{m} N={n}"), pairs.clone(), n, m, CaseTag::Case1, Some(format!("Z{m}"))));
        }
        out.push((format!("Q=G0 with m=3 N={n}"), pairs.clone(), n, 3, CaseTag::Violation, None));
        out.push((format!("trivial Q with m=1 N={n}"), pairs, n, 1, CaseTag::Violation, None));
    }
    // N even: Z2 generated through an element of order 4
    let tau = FiberAction::swapping(4, &[3, 4]);
    let g = FiberAction::new(vec![2, 4, 3], vec![-1, -1, 1])?;
    out.push(("Z2 inside C4 N=4".into(), vec![iso(&tau)?, iso(&g)?], 4, 1, CaseTag::Case2, Some("Z2".into())));
    let t6 = iso(&FiberAction::swapping(6, &[2, 3, 4, 5]))?;
    let u6 = iso(&FiberAction::swapping(6, &[3, 4, 5, 6]))?;
    out.push(("m=3 with N even".into(), vec![t6.clone(), u6.clone()], 6, 3, CaseTag::Violation, None));
    out.push(("not minimal".into(), vec![t6], 6, 1, CaseTag::NotMinimal, None));
    Ok(out)
}

/// Klein four groups for every assignment of fibers to Σ₁, Σ₂, Σ₃ with
/// sizes ≡ N−1 mod 2. A set holding every fiber would make τᵢ trivial.
pub fn klein_partitions(n: usize) -> Vec<[Vec<usize>; 3]> {
    let f = n - 1;
    let mut out = Vec::new();
    for code in 0..3usize.pow(f as u32) {
        let mut sets: [Vec<usize>; 3] = Default::default();
        let mut c = code;
        for j in 2..=n {
            sets[c % 3].push(j);
            c /= 3;
        }
        if sets.iter().all(|s| s.len() % 2 == f % 2 && s.len() < f) {
            out.push(sets);
        }
    }
    out
}

fn c13() -> Check {
    let mut cases = 0;
    let mut bad = Vec::new();
    for (desc, gens, n, m, tag, q) in classifier_suite()? {
        cases += 1;
        let d = gconic::decompose(&gens, &ConicBundleModel::standard(n)?, m)?;
        if d.case_tag != tag || (q.is_some() && d.q_structure != q) {
            bad.push(format!("{desc}: got {:?} {:?}", d.case_tag, d.q_structure));
        }
    }
    let mut relabels = 0;
    for n in 4..=9 {
        let model = ConicBundleModel::standard(n)?;
        let mut patterns = BTreeSet::new();
        for sets in klein_partitions(n) {
            cases += 1;
            let swap_off = |s: &Vec<usize>| -> Vec<usize> { (2..=n).filter(|j| !s.contains(j)).collect() };
            let t1 = FiberAction::swapping(n, &swap_off(&sets[0]));
            let t2 = FiberAction::swapping(n, &swap_off(&sets[1]));
            let gens = vec![t1.to_isometry()?, t2.to_isometry()?];
            let d = gconic::decompose(&gens, &model, 1)?;
            let got: BTreeSet<Vec<usize>> =
                d.sigma.as_ref().map(|s| s.sets.iter().cloned().collect()).unwrap_or_default();
            let want: BTreeSet<Vec<usize>> = sets.iter().cloned().collect();
            let parity = d.sigma.as_ref().is_some_and(|s| s.parity_ok && s.sizes.iter().all(|x| x % 2 == (n - 1) % 2));
            if d.case_tag != CaseTag::Case2 || got != want || !parity {
                bad.push(format!("Klein N={n} {sets:?}: {:?}", d.case_tag));
            }
            let mut sizes = [sets[0].len(), sets[1].len(), sets[2].len()];
            sizes.sort();
            if patterns.insert(sizes) {
                for mask in 0u32..(1 << (n - 1)) {
                    let swap: Vec<bool> = (0..n - 1).map(|i| mask >> i & 1 == 1).collect();
                    let perm: Vec<usize> = (2..=n).collect();
                    let other = ConicBundleModel::relabelled(n, &perm, &swap)?;
                    relabels += 1;
                    if !gconic::q_invariance_check(&model, &other, &gens)? {
                        bad.push(format!("Q changes under relabelling {swap:?} (N={n})"));
                    }
                }
            }
        }
    }
    Ok((bad.is_empty(), format!("{cases} groups, {relabels} relabellings, {} problems {}", bad.len(), first(&bad))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_criteria() {
        for id in [7, 8, 9, 13] {
            let r = run(id, Exec::default(), DEFAULT_SEED);
            assert!(r.passed, "{}", r.line());
        }
    }

    #[test]
    fn partitions_respect_parity() {
        assert_eq!(klein_partitions(4).len(), 6);
        assert_eq!(klein_partitions(3).len(), 0);
        for sets in klein_partitions(7) {
            assert!(sets.iter().all(|s| s.len() % 2 == 0));
        }
    }
}
