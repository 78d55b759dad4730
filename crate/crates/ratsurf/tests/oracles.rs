//! Brute-force oracles, written without the library's search code, checked
//! against the library and frozen.

use std::collections::{HashSet, VecDeque};

use ratsurf::exceptional::{enumerate_exceptional, exceptional_classes, reduce_exceptional};
use ratsurf::weyl::{self, Isometry};
use ratsurf::CohClass;

/// All (d; b) with dmin ≤ d ≤ dmax and lo(d) ≤ bᵢ ≤ hi(d) of the given square
/// and K-pairing, in raw coordinates.
fn brute(n: usize, degrees: std::ops::RangeInclusive<i64>, square: i64, kdot: i64, wide: bool) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for d in degrees {
        let (lo, hi) = if wide { (-d.abs() - 1, d.abs() + 1) } else { (-1, d.max(1)) };
        let mut b = vec![lo; n];
        loop {
            let s: i64 = b.iter().sum();
            let s2: i64 = b.iter().map(|x| x * x).sum();
            // E·K with K = -3H + ΣE: -3d + Σbᵢ in multiplicity form
            if d * d - s2 == square && 3 * d - s == kdot {
                let mut c = vec![d];
                c.extend(b.iter().map(|x| -x));
                out.push(c);
            }
            let mut i = 0;
            while i < n && b[i] == hi {
                b[i] = lo;
                i += 1;
            }
            if i == n {
                break;
            }
            b[i] += 1;
        }
    }
    out.sort();
    out.dedup();
    out
}

fn sorted_coords(v: &[CohClass]) -> Vec<Vec<i64>> {
    let mut c: Vec<Vec<i64>> = v.iter().map(|x| x.coords().to_vec()).collect();
    c.sort();
    c
}

#[test]
fn exceptional_counts_match_brute_force() {
    let frozen = [1usize, 3, 6, 10, 16, 27, 56];
    for n in 1..=7 {
        let oracle = brute(n, 0..=4, -1, 1, false);
        assert_eq!(oracle.len(), frozen[n - 1], "oracle N={n}");
        let lib = enumerate_exceptional(n, None).unwrap();
        assert!(lib.complete);
        assert_eq!(sorted_coords(&lib.classes), oracle, "N={n}");
    }
    assert_eq!(exceptional_classes(8).len(), 240);
}

#[test]
fn root_counts_match_brute_force() {
    // A2+A1, A4, D5, E6, E7
    let frozen = [(3usize, 8usize), (4, 20), (5, 40), (6, 72), (7, 126)];
    for (n, count) in frozen {
        let oracle = brute(n, -3..=3, -2, 0, true);
        assert_eq!(oracle.len(), count, "oracle N={n}");
        assert_eq!(sorted_coords(&weyl::all_roots(n).unwrap()), oracle, "N={n}");
    }
    assert_eq!(weyl::all_roots(8).unwrap().len(), 240);
}

/// Plain BFS closure over matrices.
fn bfs_order(gens: &[Isometry]) -> usize {
    let id = Isometry::identity(gens[0].dim());
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = s.compose(&g);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    seen.len()
}

#[test]
fn weyl_orders_match_bfs() {
    let frozen = [(3usize, 12u128), (4, 120), (5, 1920), (6, 51840)];
    for (n, order) in frozen {
        let gens = weyl::simple_reflections(n).unwrap();
        assert_eq!(bfs_order(&gens) as u128, order, "N={n}");
        assert_eq!(weyl::weyl_group(n).unwrap().order(), Some(order));
    }
    let pts = exceptional_classes(8);
    let o8 = weyl::group_order_via_chain(&weyl::simple_reflections(8).unwrap(), &pts).unwrap();
    assert_eq!(o8, 696_729_600);
    let pts = exceptional_classes(7);
    let o7 = weyl::group_order_via_chain(&weyl::simple_reflections(7).unwrap(), &pts).unwrap();
    assert_eq!(o7, 2_903_040);
}

#[test]
fn every_reduction_trace_is_a_chain_of_cremona_moves() {
    for n in 3..=8 {
        for e in exceptional_classes(n).iter() {
            let t = reduce_exceptional(e).unwrap();
            let mut cur = e.clone();
            for s in &t.steps {
                assert_eq!(s.before, cur);
                let [i, j, k] = s.triple;
                assert_eq!(ratsurf::exceptional::cremona_reflect(&cur, i, j, k).unwrap(), s.after);
                assert!(s.after.degree() < cur.degree());
                cur = s.after.clone();
            }
            assert_eq!(cur, CohClass::e(n, t.final_index), "{e}");
        }
    }
}

#[test]
fn reflections_are_pairing_preserving() {
    for n in 3..=8 {
        for g in weyl::simple_reflections(n).unwrap() {
            assert!(g.is_isometry());
            assert!(g.compose(&g).is_identity());
            assert!(g.fixes(&ratsurf::canonical_class(n)));
        }
    }
}
