//! Conic bundles with fiber class F = H−E₁ and singular fibers
//! {E_j, H−E₁−E_j}, j = 2..N, and the groups acting on them.

mod sections;

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

pub use sections::*;

use crate::error::{Error, Result};
use crate::lattice::{canonical_class, CohClass};
use crate::weyl::Isometry;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConicBundleModel {
    pub n: usize,
    pub fiber: CohClass,
    /// `pairs[j-2] = (A_j, F − A_j)`.
    pub pairs: Vec<(CohClass, CohClass)>,
}

impl ConicBundleModel {
    pub fn standard(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid(format!("a conic bundle model needs N >= 3, got {n}")));
        }
        let pairs = (2..=n).map(|j| (CohClass::e(n, j), CohClass::h_minus(n, &[1, j]))).collect();
        Ok(ConicBundleModel { n, fiber: CohClass::h_minus(n, &[1]), pairs })
    }

    /// A relabelled model: fiber `j` is the standard fiber `perm[j-2]`, with
    /// its two components exchanged when `swap[j-2]` is set.
    pub fn relabelled(n: usize, perm: &[usize], swap: &[bool]) -> Result<Self> {
        let std = Self::standard(n)?;
        if perm.len() != n - 1 || swap.len() != n - 1 {
            return Err(Error::invalid("relabelling needs N-1 entries"));
        }
        let set: BTreeSet<usize> = perm.iter().copied().collect();
        if set.len() != n - 1 || set.iter().any(|&k| k < 2 || k > n) {
            return Err(Error::invalid("relabelling must permute 2..N"));
        }
        let pairs = perm
            .iter()
            .zip(swap)
            .map(|(&k, &s)| {
                let (a, b) = std.pairs[k - 2].clone();
                if s {
                    (b, a)
                } else {
                    (a, b)
                }
            })
            .collect();
        Ok(ConicBundleModel { n, fiber: std.fiber, pairs })
    }

    pub fn singular_fibers(&self) -> usize {
        self.pairs.len()
    }

    pub fn check(&self) -> Result<()> {
        let k = canonical_class(self.n);
        if self.fiber.square() != 0 || k.dot(&self.fiber) != -2 {
            return Err(Error::invalid(format!("{} is not a fiber class", self.fiber)));
        }
        if self.pairs.len() + 1 != self.n {
            return Err(Error::invalid("need N-1 singular fibers"));
        }
        for (a, b) in &self.pairs {
            if (a + b) != self.fiber || !a.is_exceptional() || !b.is_exceptional() {
                return Err(Error::invalid(format!("({a}, {b}) is not a singular fiber of {}", self.fiber)));
            }
        }
        Ok(())
    }

    /// `(label, +1)` if `c` is the first component of fiber `label`, `(label, −1)` if the second.
    fn locate(&self, c: &CohClass) -> Option<(usize, i8)> {
        self.pairs.iter().enumerate().find_map(|(i, (a, b))| {
            if a == c {
                Some((i + 2, 1))
            } else if b == c {
                Some((i + 2, -1))
            } else {
                None
            }
        })
    }
}

/// Action on the singular fibers: fiber j goes to π(j), components
/// exchanged where ε(j) = −1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FiberAction {
    /// `pi[j-2] = π(j)`.
    pub pi: Vec<usize>,
    pub eps: Vec<i8>,
}

impl FiberAction {
    pub fn identity(n: usize) -> Self {
        FiberAction { pi: (2..=n).collect(), eps: vec![1; n - 1] }
    }

    /// ε ≡ −1, π = id.
    pub fn full_swap(n: usize) -> Self {
        FiberAction { pi: (2..=n).collect(), eps: vec![-1; n - 1] }
    }

    /// π = id, ε = −1 exactly on `swapped`.
    pub fn swapping(n: usize, swapped: &[usize]) -> Self {
        let eps = (2..=n).map(|j| if swapped.contains(&j) { -1 } else { 1 }).collect();
        FiberAction { pi: (2..=n).collect(), eps }
    }

    pub fn new(pi: Vec<usize>, eps: Vec<i8>) -> Result<Self> {
        let n = pi.len() + 1;
        let set: BTreeSet<usize> = pi.iter().copied().collect();
        if eps.len() != pi.len() || set.len() != pi.len() || set.iter().any(|&k| k < 2 || k > n) {
            return Err(Error::invalid("pi must permute 2..N and eps needs N-1 signs"));
        }
        if eps.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::invalid("eps entries must be +1 or -1"));
        }
        Ok(FiberAction { pi, eps })
    }

    pub fn n(&self) -> usize {
        self.pi.len() + 1
    }

    pub fn pi_of(&self, j: usize) -> usize {
        self.pi[j - 2]
    }

    pub fn eps_of(&self, j: usize) -> i8 {
        self.eps[j - 2]
    }

    pub fn acts_trivially_on_base(&self) -> bool {
        self.pi.iter().enumerate().all(|(i, &p)| p == i + 2)
    }

    pub fn is_identity(&self) -> bool {
        self.acts_trivially_on_base() && self.eps.iter().all(|&e| e == 1)
    }

    pub fn is_full_swap(&self) -> bool {
        self.acts_trivially_on_base() && self.eps.iter().all(|&e| e == -1)
    }

    pub fn swap_count(&self) -> usize {
        self.eps.iter().filter(|&&e| e == -1).count()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let pi = other.pi.iter().map(|&k| self.pi[k - 2]).collect();
        let eps = other.pi.iter().zip(&other.eps).map(|(&k, &e)| e * self.eps[k - 2]).collect();
        FiberAction { pi, eps }
    }

    pub fn inverse(&self) -> Self {
        let mut pi = vec![0; self.pi.len()];
        let mut eps = vec![0; self.pi.len()];
        for (i, (&k, &e)) in self.pi.iter().zip(&self.eps).enumerate() {
            pi[k - 2] = i + 2;
            eps[k - 2] = e;
        }
        FiberAction { pi, eps }
    }

    /// The isometry of the standard model with this action; it fixes F and K.
    pub fn to_isometry(&self) -> Result<Isometry> {
        let n = self.n();
        let swaps = self.swap_count() as i64;
        if swaps % 2 != 0 {
            return Err(Error::NotIsometry(format!("{swaps} component swaps: no integral isometry fixes F and K")));
        }
        let f = CohClass::h_minus(n, &[1]);
        let mut e1 = CohClass::e(n, 1) + (swaps / 2) * &f;
        let mut images = vec![CohClass::zero(n), CohClass::zero(n)];
        for j in 2..=n {
            let k = self.pi_of(j);
            if self.eps_of(j) == 1 {
                images.push(CohClass::e(n, k));
            } else {
                images.push(&f - &CohClass::e(n, k));
                e1 = e1 - CohClass::e(n, k);
            }
        }
        images[0] = &f + &e1;
        images[1] = e1;
        Isometry::from_images(&images)
    }
}

/// Reads (π, ε) off an isometry that fixes F and permutes the singular fibers.
pub fn fiber_action(g: &Isometry, model: &ConicBundleModel) -> Result<FiberAction> {
    if g.dim() != model.n + 1 {
        return Err(Error::DimensionMismatch { expected: model.n + 1, got: g.dim() });
    }
    if let Some((i, j, got, want)) = g.pairing_witness() {
        return Err(Error::NotIsometry(format!("basis ({i},{j}) pairs to {got}, expected {want}")));
    }
    if !g.fixes(&model.fiber) {
        return Err(Error::invalid(format!("g moves the fiber class {} to {}", model.fiber, g.apply(&model.fiber))));
    }
    let mut pi = Vec::with_capacity(model.pairs.len());
    let mut eps = Vec::with_capacity(model.pairs.len());
    for (a, _) in &model.pairs {
        let img = g.apply(a);
        let (k, e) = model
            .locate(&img)
            .ok_or_else(|| Error::invalid(format!("g sends {a} to {img}, not a singular fiber component")))?;
        pi.push(k);
        eps.push(e);
    }
    FiberAction::new(pi, eps).map_err(|_| Error::invalid("g does not permute the singular fibers"))
}

/// Closure of fiber actions under composition.
pub fn fiber_closure(gens: &[FiberAction], n: usize, limit: usize) -> Result<Vec<FiberAction>> {
    let id = FiberAction::identity(n);
    let mut seen: HashSet<FiberAction> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.compose(&x);
            if !seen.contains(&y) {
                if seen.len() >= limit {
                    return Err(Error::LimitExceeded(limit));
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<FiberAction> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

pub const DEFAULT_FIBER_LIMIT: usize = 1 << 22;

fn actions_of(gens: &[Isometry], model: &ConicBundleModel) -> Result<Vec<FiberAction>> {
    let acts = gens.iter().map(|g| fiber_action(g, model)).collect::<Result<Vec<_>>>()?;
    fiber_closure(&acts, model.n, DEFAULT_FIBER_LIMIT)
}

fn minimal_actions(elements: &[FiberAction], n: usize) -> bool {
    (2..=n).all(|j| elements.iter().any(|a| a.pi_of(j) == j && a.eps_of(j) == -1))
}

/// Every singular fiber has its components exchanged by some element of
/// the group generated by `gens`.
pub fn is_minimal_bundle(gens: &[Isometry], model: &ConicBundleModel) -> Result<bool> {
    Ok(minimal_actions(&actions_of(gens, model)?, model.n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaPartition {
    /// `sets[i]` = fibers on which τᵢ keeps both components.
    pub sets: [Vec<usize>; 3],
    pub sizes: [usize; 3],
    pub involutions: [FiberAction; 3],
    pub parity_ok: bool,
}

/// Σᵢ for a Klein four group acting trivially on the base.
pub fn sigma_partition(q_bar: &[FiberAction], model: &ConicBundleModel) -> Result<SigmaPartition> {
    let n = model.n;
    let mut taus: Vec<FiberAction> = q_bar.iter().filter(|a| !a.is_identity()).cloned().collect();
    taus.sort();
    taus.dedup();
    if taus.len() != 3 || taus.iter().any(|t| !t.acts_trivially_on_base() || t.n() != n) {
        return Err(Error::invalid("expected three involutions acting trivially on the base"));
    }
    if taus[0].compose(&taus[1]) != taus[2] {
        return Err(Error::invalid("the involutions do not form a Klein four group"));
    }
    let sets: [Vec<usize>; 3] = std::array::from_fn(|i| (2..=n).filter(|&j| taus[i].eps_of(j) == 1).collect());
    for j in 2..=n {
        let hits = sets.iter().filter(|s| s.contains(&j)).count();
        if hits != 1 {
            return Err(Error::invalid(format!(
                "fiber {j} lies in {hits} of the sets; they must partition the singular fibers"
            )));
        }
    }
    let sizes = [sets[0].len(), sets[1].len(), sets[2].len()];
    let parity_ok = sizes.iter().all(|s| s % 2 == (n - 1) % 2);
    Ok(SigmaPartition { sets, sizes, involutions: [taus[0].clone(), taus[1].clone(), taus[2].clone()], parity_ok })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseTag {
    /// G₀ nontrivial.
    Case1,
    /// G₀ trivial.
    Case2,
    NotMinimal,
    /// Fewer than three singular fibers.
    OutOfScope,
    Violation,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupDecomposition {
    pub n: usize,
    /// Order of the image in the isometry group.
    pub image_order: usize,
    pub g0_size: u64,
    /// Image of Q: the elements with π = id.
    pub q_elements: Vec<FiberAction>,
    /// Order of Q itself, |Q̄|·m.
    pub q_order: u64,
    pub q_structure: Option<String>,
    /// P as a permutation group on 2..N.
    pub p_elements: Vec<Vec<usize>>,
    pub minimal: bool,
    pub case_tag: CaseTag,
    pub sigma: Option<SigmaPartition>,
    pub violations: Vec<String>,
}

/// Splits the group generated by `gens` as 1 → Q → G → P → 1 and checks the
/// image against the classification of Q. `m` is |G₀|, which the lattice
/// cannot see.
pub fn decompose(gens: &[Isometry], model: &ConicBundleModel, m: u64) -> Result<GroupDecomposition> {
    if m == 0 {
        return Err(Error::invalid("|G0| must be at least 1"));
    }
    model.check()?;
    let elements = actions_of(gens, model)?;
    decompose_actions(&elements, model, m)
}

/// As [`decompose`], from the full list of fiber actions.
pub fn decompose_actions(elements: &[FiberAction], model: &ConicBundleModel, m: u64) -> Result<GroupDecomposition> {
    let n = model.n;
    let q_elements: Vec<FiberAction> = elements.iter().filter(|a| a.acts_trivially_on_base()).cloned().collect();
    let p: BTreeSet<Vec<usize>> = elements.iter().map(|a| a.pi.clone()).collect();
    let minimal = minimal_actions(elements, n);
    let mut violations = Vec::new();
    if q_elements.len() * p.len() != elements.len() {
        violations.push(format!("|Q̄|·|P| = {}·{} differs from |G| = {}", q_elements.len(), p.len(), elements.len()));
    }
    let q_order = q_elements.len() as u64 * m;
    let mut sigma = None;
    let mut q_structure = None;
    let nontrivial: Vec<&FiberAction> = q_elements.iter().filter(|a| !a.is_identity()).collect();

    let case_tag = if n < 4 {
        CaseTag::OutOfScope
    } else if !minimal {
        CaseTag::NotMinimal
    } else if m > 1 {
        if n.is_multiple_of(2) {
            violations.push(format!("|G0| = {m} > 1 but N = {n} is even"));
        }
        if let Some(bad) = nontrivial.iter().find(|a| !a.is_full_swap()) {
            violations.push(format!("element of Q outside G0 with eps = {:?} does not swap every fiber", bad.eps));
        }
        match q_elements.len() {
            2 => q_structure = Some(format!("D{}", 2 * m)),
            1 if m.is_multiple_of(2) => q_structure = Some(format!("Z{m}")),
            1 => violations.push(format!("Q = G0 = Z{m} requires m even")),
            k => violations.push(format!("|Q/G0| = {k}, expected 1 or 2")),
        }
        CaseTag::Case1
    } else {
        match q_elements.len() {
            2 => q_structure = Some("Z2".into()),
            4 => match sigma_partition(&q_elements, model) {
                Ok(s) => {
                    if !s.parity_ok {
                        violations.push(format!("sigma sizes {:?} break the parity rule", s.sizes));
                    }
                    sigma = Some(s);
                    q_structure = Some("Z2xZ2".into());
                }
                Err(e) => violations.push(e.to_string()),
            },
            1 => violations.push("Q is trivial but a minimal bundle forces an involution in Q".into()),
            k => violations.push(format!("|Q| = {k}, expected 2 or 4")),
        }
        CaseTag::Case2
    };
    let case_tag = if violations.is_empty() { case_tag } else { CaseTag::Violation };
    Ok(GroupDecomposition {
        n,
        image_order: elements.len(),
        g0_size: m,
        q_elements,
        q_order,
        q_structure,
        p_elements: p.into_iter().collect(),
        minimal,
        case_tag,
        sigma,
        violations,
    })
}

/// Q does not depend on which adapted basis is used, provided the second
/// model only relabels fibers and exchanges components.
pub fn q_invariance_check(model: &ConicBundleModel, other: &ConicBundleModel, gens: &[Isometry]) -> Result<bool> {
    model.check()?;
    other.check()?;
    if model.fiber != other.fiber {
        return Err(Error::invalid("the models have different fiber classes"));
    }
    for (a, _) in &other.pairs {
        if model.locate(a).is_none() {
            return Err(Error::invalid(format!("{a} is not a component of a singular fiber of the first model")));
        }
    }
    let acts = actions_of(gens, model)?;
    let q1: BTreeSet<Isometry> = acts
        .iter()
        .filter(|a| a.acts_trivially_on_base())
        .map(|a| to_model_isometry(a, model))
        .collect::<Result<_>>()?;
    let acts2 = actions_of(gens, other)?;
    let q2: BTreeSet<Isometry> = acts2
        .iter()
        .filter(|a| a.acts_trivially_on_base())
        .map(|a| to_model_isometry(a, other))
        .collect::<Result<_>>()?;
    Ok(q1 == q2)
}

/// The isometry acting on `model` by `a`.
pub fn to_model_isometry(a: &FiberAction, model: &ConicBundleModel) -> Result<Isometry> {
    // transport through the standard model
    let std = ConicBundleModel::standard(model.n)?;
    let to_std = |j: usize| -> (usize, i8) { std.locate(&model.pairs[j - 2].0).expect("checked model") };
    let mut pi = vec![0; model.n - 1];
    let mut eps = vec![0; model.n - 1];
    for j in 2..=model.n {
        let (sj, sj_e) = to_std(j);
        let (sk, sk_e) = to_std(a.pi_of(j));
        pi[sj - 2] = sk;
        eps[sj - 2] = sj_e * a.eps_of(j) * sk_e;
    }
    FiberAction::new(pi, eps)?.to_isometry()
}
