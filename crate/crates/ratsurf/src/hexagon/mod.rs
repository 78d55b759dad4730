//! The N = 3 hexagon of exceptional spheres and its rotation-number calculus.
//!
//! Vertex i is the intersection of edge i−1 and edge i (indices mod 6);
//! vertex 0 is `(H−E₁−E₃) ∩ E₁`. The weight pair at vertex i is
//! (weight along edge i, weight along edge i−1), so at vertex 0 it is
//! (tangent to E₁, normal to E₁).

mod monomial;

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

pub use monomial::MonomialGroupElement;

use crate::error::{Error, Result};
use crate::exceptional::enumerate_exceptional;
use crate::lattice::CohClass;
use crate::weyl::{self, Isometry};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HexagonModel {
    pub edges: Vec<CohClass>,
}

impl HexagonModel {
    /// `[E₁, H−E₁−E₂, E₂, H−E₂−E₃, E₃, H−E₁−E₃]`.
    pub fn standard() -> Self {
        let e = |i| CohClass::e(3, i);
        let h = |a, b| CohClass::h_minus(3, &[a, b]);
        HexagonModel { edges: vec![e(1), h(1, 2), e(2), h(2, 3), e(3), h(1, 3)] }
    }

    /// Rebuilds the cycle from the N = 3 exceptional set and the pairing:
    /// start at E₁, step to the neighbour not yet visited, and orient so that
    /// H−E₁−E₃ comes before E₁.
    pub fn reconstruct() -> Result<Self> {
        let set = enumerate_exceptional(3, None)?.classes;
        let e1 = CohClass::e(3, 1);
        let mut cycle = vec![e1.clone()];
        let after = CohClass::h_minus(3, &[1, 2]);
        if !set.contains(&after) {
            return Err(Error::invalid("H-E1-E2 missing from the exceptional set"));
        }
        cycle.push(after);
        while cycle.len() < set.len() {
            let last = cycle.last().unwrap();
            let prev = &cycle[cycle.len() - 2];
            let next: Vec<&CohClass> = set.iter().filter(|c| *c != prev && last.dot(c) == 1).collect();
            if next.len() != 1 {
                return Err(Error::invalid(format!("{last} has {} unvisited neighbours", next.len())));
            }
            cycle.push(next[0].clone());
        }
        let model = HexagonModel { edges: cycle };
        model.check()?;
        Ok(model)
    }

    /// Consecutive edges pair to 1, others to 0, edges are the exceptional set.
    pub fn check(&self) -> Result<()> {
        if self.edges.len() != 6 {
            return Err(Error::invalid("a hexagon has 6 edges"));
        }
        for i in 0..6 {
            for j in i + 1..6 {
                let want = if j == i + 1 || (i == 0 && j == 5) { 1 } else { 0 };
                let got = self.edges[i].dot(&self.edges[j]);
                if got != want {
                    return Err(Error::invalid(format!(
                        "edges {} and {} pair to {got}, expected {want}",
                        self.edges[i], self.edges[j]
                    )));
                }
            }
        }
        let mut mine = self.edges.clone();
        mine.sort();
        let mut set = enumerate_exceptional(3, None)?.classes;
        set.sort();
        if mine != set {
            return Err(Error::invalid("edges differ from the N=3 exceptional set"));
        }
        Ok(())
    }

    pub fn edge_index(&self, c: &CohClass) -> Option<usize> {
        self.edges.iter().position(|e| e == c)
    }

    /// Permutation of edge indices induced by a lattice isometry.
    pub fn edge_permutation(&self, g: &Isometry) -> Result<[usize; 6]> {
        let mut p = [0; 6];
        for (i, e) in self.edges.iter().enumerate() {
            p[i] =
                self.edge_index(&g.apply(e)).ok_or_else(|| Error::invalid(format!("{e} is not mapped to an edge")))?;
        }
        Ok(p)
    }
}

/// Weights modulo n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RotationPair {
    pub a: u32,
    pub b: u32,
    pub n: u32,
}

impl RotationPair {
    pub fn new(a: i64, b: i64, n: u32) -> Self {
        assert!(n > 0, "modulus must be positive");
        let m = n as i64;
        RotationPair { a: a.rem_euclid(m) as u32, b: b.rem_euclid(m) as u32, n }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        Self::new(self.a as i64 + o.a as i64, self.b as i64 + o.b as i64, self.n)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(self.a as i64 * k, self.b as i64 * k, self.n)
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn swap(&self) -> Self {
        RotationPair { a: self.b, b: self.a, n: self.n }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

/// Integer weights at the six vertices, before reduction.
pub fn propagate_rotation_int(a: i64, b: i64) -> [(i64, i64); 6] {
    [(a, b), (a + b, -a), (b, -a - b), (-a, -b), (-a - b, a), (-b, a + b)]
}

/// `[(a,b), (a+b,−a), (b,−a−b), (−a,−b), (−a−b,a), (−b,a+b)]` mod n.
pub fn propagate_rotation(p: RotationPair) -> [RotationPair; 6] {
    propagate_rotation_int(p.a as i64, p.b as i64).map(|(x, y)| RotationPair::new(x, y, p.n))
}

/// Weights `(−a, a+b)` at the other fixed point of the invariant sphere.
pub fn other_fixed_point(p: RotationPair) -> Result<RotationPair> {
    if p.a == 0 {
        return Err(Error::invalid("tangential weight 0: the sphere is fixed pointwise"));
    }
    Ok(RotationPair::new(-(p.a as i64), p.a as i64 + p.b as i64, p.n))
}

/// An element of the torus part, recorded by its weights at vertex 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TorusElement {
    pub weights: RotationPair,
}

impl TorusElement {
    pub fn new(a: i64, b: i64, n: u32) -> Self {
        TorusElement { weights: RotationPair::new(a, b, n) }
    }

    pub fn identity(n: u32) -> Self {
        Self::new(0, 0, n)
    }

    pub fn compose(&self, o: &Self) -> Self {
        TorusElement { weights: self.weights.add(&o.weights) }
    }

    pub fn pow(&self, k: i64) -> Self {
        TorusElement { weights: self.weights.scale(k) }
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    pub fn vertex_weights(&self) -> [RotationPair; 6] {
        propagate_rotation(self.weights)
    }

    /// `gᵏ h g⁻ᵏ` for g the 60° rotation: vertex i of the result carries the
    /// weights of vertex i−k.
    pub fn conjugate_by_rotation(&self, k: i64) -> Self {
        let idx = (-k).rem_euclid(6) as usize;
        TorusElement { weights: self.vertex_weights()[idx] }
    }

    /// `τ h τ⁻¹` for τ the reflection fixing edge 0 (so E₁ and H−E₂−E₃):
    /// vertex i ↔ vertex 1−i, tangent and normal exchanged.
    pub fn conjugate_by_reflection(&self) -> Self {
        TorusElement { weights: self.vertex_weights()[1].swap() }
    }
}

/// Rotating the six weights by three positions equals negating them.
pub fn g3_conjugation_check(h: &TorusElement) -> bool {
    let w = h.vertex_weights();
    let inv = h.inverse().vertex_weights();
    (0..6).all(|i| w[(i + 3) % 6] == inv[i]) && h.conjugate_by_rotation(3) == h.inverse()
}

#[derive(Clone, Debug, Serialize)]
pub struct Gamma {
    pub n: u32,
    pub k: u32,
    pub b: u32,
    /// Weights (0, k) in the common ℤₙ: order n/k.
    pub h1: TorusElement,
    /// Weights (1, b): order n.
    pub h1_tilde: TorusElement,
    pub elements: Vec<TorusElement>,
}

fn check_gamma_input(n: u32, k: u32, b: i64) -> Result<()> {
    if n == 0 || k == 0 || !n.is_multiple_of(k) {
        return Err(Error::invalid(format!("need k | n with n, k positive; got n={n}, k={k}")));
    }
    if (b * b + b + 1).rem_euclid(k as i64) != 0 {
        return Err(Error::invalid(format!("b^2+b+1 = {} is not divisible by k={k}", b * b + b + 1)));
    }
    Ok(())
}

/// Γ = ⟨h₁, h̃₁⟩ ≅ ℤ_{n/k} × ℤₙ.
pub fn build_gamma(n: u32, k: u32, b: i64) -> Result<Gamma> {
    check_gamma_input(n, k, b)?;
    let h1 = TorusElement::new(0, k as i64, n);
    let h1_tilde = TorusElement::new(1, b, n);
    let mut set = BTreeSet::new();
    for i in 0..(n / k) as i64 {
        for j in 0..n as i64 {
            set.insert(h1.pow(i).compose(&h1_tilde.pow(j)));
        }
    }
    let elements: Vec<TorusElement> = set.into_iter().collect();
    let want = (n as usize) * (n as usize) / k as usize;
    if elements.len() != want {
        return Err(Error::TheoremViolation(format!("|Γ| = {} but n²/k = {want}", elements.len())));
    }
    Ok(Gamma { n, k, b: RotationPair::new(b, 0, n).a, h1, h1_tilde, elements })
}

/// Least v ≥ 0 with `k·v ≡ rhs (mod n)`.
pub fn least_solution(k: u32, rhs: i64, n: u32) -> Option<u32> {
    (0..n).find(|&v| ((k as i64) * (v as i64) - rhs).rem_euclid(n as i64) == 0)
}

#[derive(Clone, Debug, Serialize)]
pub struct G2Check {
    pub v: u32,
    pub conj_h1: TorusElement,
    pub expected_h1: TorusElement,
    pub conj_h1_tilde: TorusElement,
    pub expected_h1_tilde: TorusElement,
    pub holds: bool,
}

/// `g²h₁g⁻² = h̃₁^{−k} h₁^b` and `g²h̃₁g⁻² = h̃₁^{−b−1} h₁^v` with
/// `b² + b + 1 ≡ kv (mod n)`.
///
/// h₁ is written in its own units, so `h₁^b` is the element (0, k·b).
pub fn g2_action_check(n: u32, k: u32, b: i64) -> Result<G2Check> {
    check_gamma_input(n, k, b)?;
    let v = least_solution(k, b * b + b + 1, n).ok_or_else(|| Error::invalid("no v solves b^2+b+1 = kv mod n"))?;
    let h1 = TorusElement::new(0, k as i64, n);
    let ht = TorusElement::new(1, b, n);
    let conj_h1 = h1.conjugate_by_rotation(2);
    let expected_h1 = ht.pow(-(k as i64)).compose(&h1.pow(b));
    let conj_h1_tilde = ht.conjugate_by_rotation(2);
    let expected_h1_tilde = ht.pow(-b - 1).compose(&h1.pow(v as i64));
    let holds = conj_h1 == expected_h1 && conj_h1_tilde == expected_h1_tilde;
    Ok(G2Check { v, conj_h1, expected_h1, conj_h1_tilde, expected_h1_tilde, holds })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ImprimitiveKind {
    Gn,
    GnTilde,
    Gnks,
    Gn32Tilde,
}

impl std::str::FromStr for ImprimitiveKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Gn" => Ok(Self::Gn),
            "GnTilde" | "Gn~" | "Gtn" => Ok(Self::GnTilde),
            "Gnks" => Ok(Self::Gnks),
            "Gn32Tilde" | "Gn32~" | "Gtn32" => Ok(Self::Gn32Tilde),
            _ => Err(Error::Parse(format!("unknown group kind {s:?} (Gn, GnTilde, Gnks, Gn32Tilde)"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ImprimitiveGroup {
    pub kind: ImprimitiveKind,
    pub n: u32,
    pub k: u32,
    pub s: u32,
    pub generators: Vec<MonomialGroupElement>,
    pub elements: Vec<MonomialGroupElement>,
}

impl ImprimitiveGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// 3n², 6n², 3n²/k, 2n².
    pub fn expected_order(&self) -> usize {
        let n2 = (self.n as usize).pow(2);
        match self.kind {
            ImprimitiveKind::Gn => 3 * n2,
            ImprimitiveKind::GnTilde => 6 * n2,
            ImprimitiveKind::Gnks => 3 * n2 / self.k as usize,
            ImprimitiveKind::Gn32Tilde => 2 * n2,
        }
    }
}

fn s_condition(k: u32, s: i64) -> bool {
    (s * s - s + 1).rem_euclid(k as i64) == 0
}

/// The monomial group generated by the listed generators of each family.
pub fn make_imprimitive(kind: ImprimitiveKind, n: u32, k: u32, s: i64) -> Result<ImprimitiveGroup> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let d = |c: [i64; 3]| MonomialGroupElement::diagonal(n, c);
    let p = |s: [u8; 3]| MonomialGroupElement::permutation(n, s);
    let cyc = [2, 0, 1];
    let (generators, k, s) = match kind {
        ImprimitiveKind::Gn => (vec![d([1, 0, 0])?, d([0, 1, 0])?, p(cyc)?], 1, 0),
        ImprimitiveKind::GnTilde => (vec![d([1, 0, 0])?, d([0, 1, 0])?, p([0, 2, 1])?, p(cyc)?], 1, 0),
        ImprimitiveKind::Gnks => {
            if k <= 1 || !n.is_multiple_of(k) || !s_condition(k, s) {
                return Err(Error::invalid(format!(
                    "G_(n,k,s) needs k>1, k|n, s^2-s+1 = 0 mod k; got n={n}, k={k}, s={s}"
                )));
            }
            (vec![d([k as i64, 0, 0])?, d([s, 1, 0])?, p(cyc)?], k, s)
        }
        ImprimitiveKind::Gn32Tilde => {
            if !n.is_multiple_of(3) {
                return Err(Error::invalid(format!("3 must divide n, got n={n}")));
            }
            (vec![d([3, 0, 0])?, d([2, 1, 0])?, p([0, 2, 1])?, p([1, 0, 2])?], 3, 2)
        }
    };
    let elements = monomial::closure(&generators, n, 1 << 24)?;
    Ok(ImprimitiveGroup { kind, n, k, s: s.rem_euclid(n as i64) as u32, generators, elements })
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationCheck {
    pub v: u32,
    pub t1: MonomialGroupElement,
    pub t2: MonomialGroupElement,
    pub g2: MonomialGroupElement,
    pub relation1: bool,
    pub relation2: bool,
    pub holds: bool,
}

/// `g²t₁g⁻² = t₂ᵏ t₁⁻ˢ` and `g²t₂g⁻² = t₂^{s−1} t₁^{−v}`.
pub fn presentation_check(n: u32, k: u32, s: i64) -> Result<PresentationCheck> {
    if n == 0 || k == 0 || !n.is_multiple_of(k) {
        return Err(Error::invalid(format!("need k | n; got n={n}, k={k}")));
    }
    let v = least_solution(k, s * s - s + 1, n)
        .ok_or_else(|| Error::invalid(format!("s^2-s+1 = kv mod n has no solution for n={n}, k={k}, s={s}")))?;
    let t1 = MonomialGroupElement::diagonal(n, [k as i64, 0, 0])?;
    let t2 = MonomialGroupElement::diagonal(n, [s, 1, 0])?;
    let g2 = MonomialGroupElement::permutation(n, [2, 0, 1])?;
    let g2i = g2.inverse();
    let conj = |x: &MonomialGroupElement| g2.compose(x).compose(&g2i);
    let relation1 = conj(&t1) == t2.pow(k as i64).compose(&t1.pow(-s));
    let relation2 = conj(&t2) == t2.pow(s - 1).compose(&t1.pow(-(v as i64)));
    Ok(PresentationCheck { v, t1, t2, g2, relation1, relation2, holds: relation1 && relation2 })
}

#[derive(Clone, Debug, Serialize)]
pub struct HexagonSubgroup {
    pub order: usize,
    pub structure: String,
    pub cyclic: bool,
    /// Edge permutations, sorted.
    pub edge_permutations: Vec<[usize; 6]>,
    /// The same elements as lattice isometries.
    pub generators: Vec<Isometry>,
    pub invariant_rank: usize,
}

fn perm_mul(a: &[usize; 6], b: &[usize; 6]) -> [usize; 6] {
    // apply a, then b
    let mut r = [0; 6];
    for i in 0..6 {
        r[i] = b[a[i]];
    }
    r
}

fn perm_closure(gens: &[[usize; 6]]) -> BTreeSet<[usize; 6]> {
    let id = [0, 1, 2, 3, 4, 5];
    let mut set = BTreeSet::from([id]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = perm_mul(&x, g);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set
}

fn perm_order(p: &[usize; 6]) -> usize {
    let id = [0, 1, 2, 3, 4, 5];
    let mut x = *p;
    let mut k = 1;
    while x != id {
        x = perm_mul(&x, p);
        k += 1;
    }
    k
}

/// All edge-transitive subgroups of the hexagon's symmetry group, taken as
/// the image of W₃ acting on the six edges.
pub fn transitive_hexagon_subgroups() -> Result<Vec<HexagonSubgroup>> {
    let model = HexagonModel::standard();
    let w3 = weyl::weyl_group(3)?;
    let elems = w3.elements().expect("closure computed");
    let mut by_perm: HashMap<[usize; 6], Isometry> = HashMap::new();
    for g in elems.iter() {
        let p = model.edge_permutation(&g)?;
        if by_perm.insert(p, g).is_some() {
            return Err(Error::Unfaithful("two elements of W3 permute the edges identically".into()));
        }
    }
    let all: Vec<[usize; 6]> = by_perm.keys().copied().collect();
    // every subgroup of a dihedral group is generated by at most two elements
    let mut subgroups: BTreeSet<BTreeSet<[usize; 6]>> = BTreeSet::new();
    for a in &all {
        for b in &all {
            subgroups.insert(perm_closure(&[*a, *b]));
        }
    }
    let mut out = Vec::new();
    for sg in subgroups {
        let orbit: BTreeSet<usize> = sg.iter().map(|p| p[0]).collect();
        if orbit.len() != 6 {
            continue;
        }
        let cyclic = sg.iter().any(|p| perm_order(p) == sg.len());
        let structure = match (sg.len(), cyclic) {
            (6, true) => "C6".to_string(),
            (6, false) => "S3".to_string(),
            (12, _) => "D12".to_string(),
            (m, c) => format!("order {m}{}", if c { " cyclic" } else { "" }),
        };
        let generators: Vec<Isometry> = sg.iter().map(|p| by_perm[p].clone()).collect();
        let invariant_rank = weyl::invariant_lattice_of(&generators, 4).rank;
        out.push(HexagonSubgroup {
            order: sg.len(),
            structure,
            cyclic,
            edge_permutations: sg.into_iter().collect(),
            generators,
            invariant_rank,
        });
    }
    out.sort_by(|x, y| (x.order, &x.structure).cmp(&(y.order, &y.structure)));
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct InvolutionCase {
    pub weights: RotationPair,
    pub original: [RotationPair; 6],
    pub conjugated: [RotationPair; 6],
    pub differs: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvolutionCheck {
    pub cases: Vec<InvolutionCase>,
    pub holds: bool,
}

/// Conjugating either involution type by the 60° rotation changes it.
pub fn involution_nontrivial_conjugation() -> InvolutionCheck {
    let cases: Vec<InvolutionCase> = [(1, 0), (1, 1)]
        .into_iter()
        .map(|(a, b)| {
            let tau = TorusElement::new(a, b, 2);
            let original = tau.vertex_weights();
            let conjugated = tau.conjugate_by_rotation(1).vertex_weights();
            InvolutionCase { weights: tau.weights, original, conjugated, differs: original != conjugated }
        })
        .collect();
    let holds = cases.iter().all(|c| c.differs);
    InvolutionCheck { cases, holds }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(n: u32, t: &[(i64, i64)]) -> Vec<RotationPair> {
        t.iter().map(|&(a, b)| RotationPair::new(a, b, n)).collect()
    }

    #[test]
    fn hexagon_reconstruction() {
        assert_eq!(HexagonModel::reconstruct().unwrap(), HexagonModel::standard());
        HexagonModel::standard().check().unwrap();
    }

    #[test]
    fn involution_tables() {
        let t = propagate_rotation(RotationPair::new(1, 0, 2));
        assert_eq!(t.to_vec(), table(2, &[(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)]));
        let t = propagate_rotation(RotationPair::new(1, 1, 2));
        assert_eq!(t.to_vec(), table(2, &[(1, 1), (0, -1), (1, 0), (-1, -1), (0, 1), (-1, 0)]));
        assert_eq!(propagate_rotation_int(1, 0), [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)]);
        let c = involution_nontrivial_conjugation();
        assert!(c.holds);
        assert_eq!(c.cases[0].conjugated.to_vec(), table(2, &[(0, 1), (1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1)]));
        assert_eq!(c.cases[1].conjugated.to_vec(), table(2, &[(-1, 0), (1, 1), (0, -1), (1, 0), (-1, -1), (0, 1)]));
        let id = TorusElement::identity(2);
        assert_eq!(id.conjugate_by_rotation(1), id);
    }

    #[test]
    fn fixed_point_formula() {
        let p = RotationPair::new(1, 0, 5);
        assert_eq!(other_fixed_point(p).unwrap(), RotationPair::new(-1, 1, 5));
        assert_eq!(other_fixed_point(other_fixed_point(p).unwrap()).unwrap(), p);
        assert!(other_fixed_point(RotationPair::new(0, 3, 5)).is_err());
    }

    #[test]
    fn reflection_conjugates() {
        // τ h̃₁ τ has first weights (−1, 1+b)
        let b = 4;
        let h = TorusElement::new(1, b, 9);
        assert_eq!(h.conjugate_by_reflection(), TorusElement::new(-1, 1 + b, 9));
        // h (τ h⁻¹ τ) has weights (2a, −a)
        let a = 3;
        let h = TorusElement::new(a, 5, 11);
        assert_eq!(h.compose(&h.inverse().conjugate_by_reflection()), TorusElement::new(2 * a, -a, 11));
    }

    #[test]
    fn gamma_orders() {
        assert_eq!(build_gamma(5, 1, 0).unwrap().elements.len(), 25);
        assert_eq!(build_gamma(3, 3, 1).unwrap().elements.len(), 3);
        assert_eq!(build_gamma(6, 3, 1).unwrap().elements.len(), 12);
        assert!(build_gamma(6, 3, 2).is_err());
    }

    #[test]
    fn g2_examples() {
        let c = g2_action_check(5, 1, 0).unwrap();
        assert!(c.holds);
        assert_eq!(c.v, 1);
        let c = g2_action_check(9, 3, -2).unwrap();
        assert!(c.holds);
        assert_eq!(c.v, 1);
        assert!(g2_action_check(4, 3, 1).is_err());
    }

    #[test]
    fn imprimitive_orders() {
        assert_eq!(make_imprimitive(ImprimitiveKind::Gn, 2, 1, 0).unwrap().order(), 12);
        assert_eq!(make_imprimitive(ImprimitiveKind::Gnks, 3, 3, 2).unwrap().order(), 9);
        assert_eq!(make_imprimitive(ImprimitiveKind::GnTilde, 2, 1, 0).unwrap().order(), 24);
        assert!(make_imprimitive(ImprimitiveKind::Gnks, 6, 2, 1).is_err());
        assert!(make_imprimitive(ImprimitiveKind::Gn32Tilde, 4, 3, 2).is_err());
    }

    #[test]
    fn presentations() {
        assert!(presentation_check(5, 1, 0).unwrap().holds);
        assert!(presentation_check(9, 3, 2).unwrap().holds);
        for s in 0..6 {
            assert!(presentation_check(6, 2, s).is_err());
        }
    }

    #[test]
    fn transitive_subgroups_listed() {
        let subs = transitive_hexagon_subgroups().unwrap();
        let names: Vec<&str> = subs.iter().map(|s| s.structure.as_str()).collect();
        assert!(names.contains(&"C6") && names.contains(&"D12"));
        for s in &subs {
            assert_eq!(s.order % 6, 0);
        }
    }
}
