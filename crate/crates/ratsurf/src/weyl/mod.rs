//! Root systems, Weyl groups and invariant lattices.

mod chain;
mod closure;
pub mod hnf;
mod isometry;

use std::collections::HashMap;

use serde::Serialize;

pub use chain::{Perm, StabilizerChain};
pub use closure::ElementStore;
pub use isometry::Isometry;

use crate::diophantine::sum_and_squares;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::lattice::{canonical_class, gram_diagonal, CohClass};

pub const DEFAULT_CLOSURE_LIMIT: usize = 10_000_000;

#[derive(Clone, Debug, Serialize)]
pub struct RootSystem {
    pub n: usize,
    pub simple_roots: Vec<CohClass>,
    pub type_label: &'static str,
}

impl RootSystem {
    pub fn new(n: usize) -> Result<Self> {
        check_range(n)?;
        let mut simple_roots = vec![CohClass::h_minus(n, &[1, 2, 3])];
        for i in 1..n {
            simple_roots.push(&CohClass::e(n, i) - &CohClass::e(n, i + 1));
        }
        let type_label = match n {
            3 => "A2+A1",
            4 => "A4",
            5 => "D5",
            6 => "E6",
            7 => "E7",
            _ => "E8",
        };
        Ok(RootSystem { n, simple_roots, type_label })
    }

    pub fn simple_reflections(&self) -> Vec<Isometry> {
        self.simple_roots.iter().map(Isometry::reflection_unchecked).collect()
    }
}

fn check_range(n: usize) -> Result<()> {
    if !(3..=8).contains(&n) {
        return Err(Error::invalid(format!("root systems are defined here for 3 <= N <= 8, got {n}")));
    }
    Ok(())
}

pub fn reflection(alpha: &CohClass) -> Result<Isometry> {
    Isometry::reflection(alpha)
}

pub fn simple_reflections(n: usize) -> Result<Vec<Isometry>> {
    Ok(RootSystem::new(n)?.simple_reflections())
}

/// All r with r² = −2 and K·r = 0, sorted.
///
/// For `r = aH − Σ bₛEₛ`: `Σb = 3a`, `Σb² = a² + 2`, and Cauchy–Schwarz
/// bounds `(9−N)a² ≤ 2N`.
pub fn all_roots(n: usize) -> Result<Vec<CohClass>> {
    check_range(n)?;
    let ni = n as i64;
    let mut amax = 0;
    while (9 - ni) * (amax + 1) * (amax + 1) <= 2 * ni {
        amax += 1;
    }
    let mut roots = Vec::new();
    for a in -amax..=amax {
        for b in sum_and_squares(n, 3 * a, a * a + 2) {
            roots.push(CohClass::from_multiplicities(a, &b));
        }
    }
    roots.sort();
    Ok(roots)
}

/// A finite group of lattice isometries given by generators, with
/// optional full element list and chain order.
#[derive(Clone, Debug)]
pub struct FiniteIsometryGroup {
    dim: usize,
    generators: Vec<Isometry>,
    elements: Option<ElementStore>,
    chain_order: Option<u128>,
}

impl FiniteIsometryGroup {
    /// Wraps generators without computing anything.
    pub fn from_generators(dim: usize, generators: Vec<Isometry>) -> Result<Self> {
        for g in &generators {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: g.dim() });
            }
            if let Some((i, j, got, want)) = g.pairing_witness() {
                return Err(Error::NotIsometry(format!("generator pairs basis ({i},{j}) to {got}, expected {want}")));
            }
        }
        Ok(FiniteIsometryGroup { dim, generators, elements: None, chain_order: None })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.dim - 1
    }

    pub fn generators(&self) -> &[Isometry] {
        &self.generators
    }

    pub fn elements(&self) -> Option<&ElementStore> {
        self.elements.as_ref()
    }

    pub fn chain_order(&self) -> Option<u128> {
        self.chain_order
    }

    /// Order from the closure, else from the chain.
    pub fn order(&self) -> Option<u128> {
        self.elements.as_ref().map(|e| e.len() as u128).or(self.chain_order)
    }

    pub fn fixes_canonical(&self) -> bool {
        let k = canonical_class(self.n());
        self.generators.iter().all(|g| g.fixes(&k))
    }

    pub fn with_closure(mut self, exec: Exec, limit: usize) -> Result<Self> {
        if self.elements.is_none() {
            self.elements = Some(closure::close(exec, &self.generators, self.dim, limit)?);
        }
        Ok(self)
    }

    pub fn with_chain(mut self, points: &[CohClass]) -> Result<Self> {
        self.chain_order = Some(chain_for(&self.generators, self.dim, points)?.order());
        if let (Some(e), Some(c)) = (&self.elements, self.chain_order) {
            if e.len() as u128 != c {
                return Err(Error::TheoremViolation(format!("closure order {} but chain order {c}", e.len())));
            }
        }
        Ok(self)
    }
}

/// Full closure of the generated group; fails past `limit` elements.
pub fn generate_group(gens: &[Isometry], limit: usize) -> Result<FiniteIsometryGroup> {
    generate_group_with(Exec::default(), gens, limit)
}

pub fn generate_group_with(exec: Exec, gens: &[Isometry], limit: usize) -> Result<FiniteIsometryGroup> {
    let dim = gens.first().map(|g| g.dim()).ok_or_else(|| Error::invalid("no generators"))?;
    FiniteIsometryGroup::from_generators(dim, gens.to_vec())?.with_closure(exec, limit)
}

pub fn weyl_group(n: usize) -> Result<FiniteIsometryGroup> {
    generate_group(&simple_reflections(n)?, DEFAULT_CLOSURE_LIMIT)
}

/// Permutation of `points` induced by `g`.
pub fn permutation_on(g: &Isometry, points: &[CohClass], index: &HashMap<&[i64], usize>) -> Result<Perm> {
    points
        .iter()
        .map(|p| {
            let img = g.apply(p);
            index
                .get(&img.coords[..])
                .map(|&i| i as u16)
                .ok_or_else(|| Error::invalid(format!("{p} maps to {img}, outside the point set")))
        })
        .collect()
}

fn chain_for(gens: &[Isometry], dim: usize, points: &[CohClass]) -> Result<StabilizerChain> {
    if points.is_empty() || points.len() > u16::MAX as usize {
        return Err(Error::invalid("point set must be nonempty and below 65536 points"));
    }
    if let Some(p) = points.iter().find(|p| p.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
    }
    let index: HashMap<&[i64], usize> = points.iter().enumerate().map(|(i, p)| (&p.coords[..], i)).collect();
    if index.len() != points.len() {
        return Err(Error::invalid("repeated points"));
    }
    let perms = gens.iter().map(|g| permutation_on(g, points, &index)).collect::<Result<Vec<_>>>()?;
    certify_faithful(gens, dim, points, &perms)?;
    Ok(StabilizerChain::new(points.len(), &perms))
}

/// The action on `points` is faithful when every generator that moves
/// something moves a point, and the points together with their orthogonal
/// complement span the lattice with all generators trivial on the complement.
fn certify_faithful(gens: &[Isometry], dim: usize, points: &[CohClass], perms: &[Perm]) -> Result<()> {
    for (g, p) in gens.iter().zip(perms) {
        let trivial = p.iter().enumerate().all(|(i, &x)| i == x as usize);
        if trivial && !g.is_identity() {
            return Err(Error::Unfaithful(format!(
                "generator {g:?} acts trivially on the points but differs from the identity"
            )));
        }
    }
    let rows: Vec<Vec<i64>> = points.iter().map(|p| p.coords.clone()).collect();
    let r = hnf::rank(&rows, dim);
    if r == dim {
        return Ok(());
    }
    let q = gram_diagonal(dim);
    let dual: Vec<Vec<i64>> = rows.iter().map(|p| p.iter().zip(&q).map(|(a, b)| a * b).collect()).collect();
    let perp = hnf::integer_kernel(&dual, dim);
    let mut all = rows;
    all.extend(perp.iter().cloned());
    let spans = hnf::rank(&all, dim) == dim;
    let trivial_on_perp = perp.iter().all(|v| gens.iter().all(|g| g.apply_slice(v) == *v));
    if spans && trivial_on_perp {
        Ok(())
    } else {
        Err(Error::Unfaithful("cannot certify faithfulness: points do not determine the action".into()))
    }
}

/// Group order from a stabilizer chain of the action on `points`.
pub fn group_order_via_chain(gens: &[Isometry], points: &[CohClass]) -> Result<u128> {
    let dim = gens.first().map(|g| g.dim()).ok_or_else(|| Error::invalid("no generators"))?;
    for g in gens {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: g.dim() });
        }
    }
    Ok(chain_for(gens, dim, points)?.order())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantLattice {
    pub rank: usize,
    pub basis: Vec<CohClass>,
}

/// Integer kernel of the stacked `g − I` over the generators.
pub fn invariant_lattice(g: &FiniteIsometryGroup) -> InvariantLattice {
    invariant_lattice_of(g.generators(), g.dim())
}

pub fn invariant_lattice_of(gens: &[Isometry], dim: usize) -> InvariantLattice {
    let mut rows = Vec::new();
    for g in gens {
        for i in 0..dim {
            let mut r: Vec<i64> = (0..dim).map(|j| g.entry(i, j)).collect();
            r[i] -= 1;
            if r.iter().any(|&x| x != 0) {
                rows.push(r);
            }
        }
    }
    let basis: Vec<CohClass> = hnf::integer_kernel(&rows, dim).into_iter().map(|c| CohClass { coords: c }).collect();
    InvariantLattice { rank: basis.len(), basis }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceSum {
    pub order: u128,
    /// Σ_g tr(g | R_N).
    pub sum: i128,
    pub holds: bool,
}

/// Σ_g tr(g | R_N) = Σ_g (tr(g | H²) − 1) over the full element list.
pub fn trace_sum_condition(g: &FiniteIsometryGroup) -> Result<TraceSum> {
    if !g.fixes_canonical() {
        return Err(Error::invalid("some generator moves K"));
    }
    let elems = g.elements().ok_or_else(|| Error::invalid("trace sum needs the full element list"))?;
    let sum = elems.trace_sum() - elems.len() as i128;
    Ok(TraceSum { order: elems.len() as u128, sum, holds: sum == 0 })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Dichotomy {
    Rank1,
    Rank2 { fiber_candidates: Vec<CohClass> },
    Neither { rank: usize },
}

pub fn minimality_rank_dichotomy(g: &FiniteIsometryGroup) -> Result<Dichotomy> {
    if !g.fixes_canonical() {
        return Err(Error::invalid("some generator moves K"));
    }
    let lat = invariant_lattice(g);
    Ok(match lat.rank {
        1 => Dichotomy::Rank1,
        2 => Dichotomy::Rank2 { fiber_candidates: fiber_candidates(&lat.basis[0], &lat.basis[1])? },
        r => Dichotomy::Neither { rank: r },
    })
}

fn isqrt_exact(x: i128) -> Option<i128> {
    if x < 0 {
        return None;
    }
    let mut r = (x as f64).sqrt() as i128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    (r * r == x).then_some(r)
}

/// Primitive F = xu + yv with F² = 0, K·F = −2.
pub fn fiber_candidates(u: &CohClass, v: &CohClass) -> Result<Vec<CohClass>> {
    let k = canonical_class(u.n());
    let (a, b) = (k.dot(u) as i128, k.dot(v) as i128);
    let (uu, uv, vv) = (u.square() as i128, u.dot(v) as i128, v.square() as i128);
    let egcd = |p: i128, q: i128| -> (i128, i128, i128) {
        let (mut r0, mut r1, mut s0, mut s1, mut t0, mut t1) = (p, q, 1i128, 0i128, 0i128, 1i128);
        while r1 != 0 {
            let qq = r0.div_euclid(r1);
            (r0, r1) = (r1, r0 - qq * r1);
            (s0, s1) = (s1, s0 - qq * s1);
            (t0, t1) = (t1, t0 - qq * t1);
        }
        if r0 < 0 {
            (-r0, -s0, -t0)
        } else {
            (r0, s0, t0)
        }
    };
    let (g, s, t) = egcd(a, b);
    if g == 0 || 2 % g != 0 {
        return Ok(Vec::new());
    }
    // x = x0 + τ·(b/g), y = y0 − τ·(a/g)
    let (x0, y0) = (s * (-2 / g), t * (-2 / g));
    let (dx, dy) = (b / g, -a / g);
    // F(τ)² = Aτ² + Bτ + C
    let quad = |x: i128, y: i128, z: i128, w: i128| x * z * uu + (x * w + y * z) * uv + y * w * vv;
    let aa = quad(dx, dy, dx, dy);
    let bb = 2 * quad(x0, y0, dx, dy);
    let cc = quad(x0, y0, x0, y0);
    let mut taus = Vec::new();
    if aa == 0 {
        if bb == 0 {
            if cc == 0 {
                return Err(Error::invalid("degenerate invariant lattice: infinitely many isotropic classes"));
            }
        } else if cc % bb == 0 {
            taus.push(-cc / bb);
        }
    } else if let Some(r) = isqrt_exact(bb * bb - 4 * aa * cc) {
        for num in [-bb + r, -bb - r] {
            if num % (2 * aa) == 0 {
                taus.push(num / (2 * aa));
            }
        }
    }
    taus.sort();
    taus.dedup();
    let mut out: Vec<CohClass> = taus
        .into_iter()
        .map(|tau| {
            let (x, y) = ((x0 + tau * dx) as i64, (y0 + tau * dy) as i64);
            &(x * u) + &(y * v)
        })
        .filter(|f| f.is_primitive())
        .collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        let want = [8, 20, 40, 72, 126, 240];
        for (n, w) in (3..=8).zip(want) {
            let r = all_roots(n).unwrap();
            assert_eq!(r.len(), w, "N={n}");
            let k = canonical_class(n);
            assert!(r.iter().all(|x| x.square() == -2 && k.dot(x) == 0));
        }
        assert!(all_roots(2).is_err());
    }

    #[test]
    fn small_weyl_orders() {
        assert_eq!(weyl_group(3).unwrap().order(), Some(12));
        assert_eq!(weyl_group(4).unwrap().order(), Some(120));
        assert_eq!(weyl_group(5).unwrap().order(), Some(1920));
    }

    #[test]
    fn limit_enforced() {
        let g = simple_reflections(5).unwrap();
        assert!(matches!(generate_group(&g, 100), Err(Error::LimitExceeded(100))));
    }

    #[test]
    fn chain_matches_closure() {
        for n in 3..=6 {
            let gens = simple_reflections(n).unwrap();
            let c = group_order_via_chain(&gens, &all_roots(n).unwrap()).unwrap();
            assert_eq!(Some(c), weyl_group(n).unwrap().order());
        }
    }

    #[test]
    fn unfaithful_rejected() {
        // the A₃ roots Eᵢ − Eⱼ; flipping H fixes all of them
        let n = 4;
        let roots = all_roots(n).unwrap();
        let pts: Vec<CohClass> = roots.iter().filter(|r| r.coords[0] == 0).cloned().collect();
        let gens = vec![Isometry::reflection(&(&CohClass::e(n, 1) - &CohClass::e(n, 2))).unwrap()];
        assert!(group_order_via_chain(&gens, &pts).is_ok());
        let minus = Isometry::from_raw(5, {
            let mut m = Isometry::identity(5).entries().to_vec();
            m[0] = -1;
            m
        });
        assert!(matches!(group_order_via_chain(&[minus], &pts), Err(Error::Unfaithful(_))));
    }

    #[test]
    fn invariant_lattices() {
        let n = 5;
        let triv = FiniteIsometryGroup::from_generators(6, vec![Isometry::identity(6)]).unwrap();
        assert_eq!(invariant_lattice(&triv).rank, 6);
        let w = FiniteIsometryGroup::from_generators(6, simple_reflections(n).unwrap()).unwrap();
        let lat = invariant_lattice(&w);
        assert_eq!(lat.rank, 1);
        let k = canonical_class(n);
        assert!(lat.basis[0] == k || lat.basis[0] == -&k);
    }

    #[test]
    fn trace_examples() {
        let w4 = weyl_group(4).unwrap();
        assert_eq!(trace_sum_condition(&w4).unwrap().sum, 0);
        let triv = generate_group(&[Isometry::identity(5)], 10).unwrap();
        let t = trace_sum_condition(&triv).unwrap();
        assert_eq!((t.sum, t.holds), (4, false));
        let s = Isometry::reflection(&(&CohClass::e(4, 1) - &CohClass::e(4, 2))).unwrap();
        let t = trace_sum_condition(&generate_group(&[s], 10).unwrap()).unwrap();
        assert_eq!((t.order, t.sum, t.holds), (2, 6, false));
        let moves_k = Isometry::reflection(&(&CohClass::e(4, 1) - &CohClass::h(4))).unwrap_err();
        assert!(matches!(moves_k, Error::InvalidInput(_)));
        let r = Isometry::from_raw(5, {
            let mut m = Isometry::identity(5).entries().to_vec();
            m[6] = -1;
            m
        });
        let g = FiniteIsometryGroup::from_generators(5, vec![r]).unwrap();
        assert!(trace_sum_condition(&g).is_err());
    }

    #[test]
    fn dichotomy() {
        assert_eq!(minimality_rank_dichotomy(&weyl_group(4).unwrap()).unwrap(), Dichotomy::Rank1);
        let n = 5;
        let s = Isometry::reflection(&(&CohClass::e(n, 1) - &CohClass::e(n, 2))).unwrap();
        let g = generate_group(&[s], 10).unwrap();
        assert!(matches!(minimality_rank_dichotomy(&g).unwrap(), Dichotomy::Neither { rank: 5 }));
    }
}
