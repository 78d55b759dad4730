//! Symplectic cone arithmetic on the span of K and a fiber class.
//!
//! Membership uses the characterization "ω² > 0 and ω(e) > 0 for every
//! exceptional e", which is exact when N ≤ 8 and only a necessary condition
//! (checked up to a degree bound) for N ≥ 9.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exceptional::{enumerate_exceptional, exceptional_classes};
use crate::exec::{self, Exec};
use crate::lattice::{canonical_class, fmt_rational, q, CohClass, Rational, SymplecticClass};

/// Degree cap used for N ≥ 9.
pub const DEFAULT_CONE_DEGREE: i64 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeVerdict {
    Full,
    PartialPositive,
    Outside,
}

impl ConeVerdict {
    pub fn is_member(self) -> bool {
        self != ConeVerdict::Outside
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeReport {
    pub verdict: ConeVerdict,
    #[serde(serialize_with = "ser_q")]
    pub square: Rational,
    /// First exceptional class with nonpositive area, if any.
    pub witness: Option<CohClass>,
    pub checked: usize,
    pub max_degree: i64,
}

fn ser_q<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

/// Exceptional classes used by the membership test.
#[derive(Clone, Debug)]
pub struct ConeOracle {
    pub n: usize,
    classes: std::sync::Arc<Vec<CohClass>>,
    complete: bool,
    max_degree: i64,
}

impl ConeOracle {
    /// Complete list for N ≤ 8; degree-capped list (default cap
    /// [`DEFAULT_CONE_DEGREE`]) otherwise.
    pub fn new(n: usize, max_degree: Option<i64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("N must be at least 1"));
        }
        if n <= 8 && max_degree.is_none() {
            let classes = exceptional_classes(n);
            let max_degree = classes.iter().map(|c| c.degree()).max().unwrap_or(0);
            return Ok(ConeOracle { n, classes, complete: true, max_degree });
        }
        let set = enumerate_exceptional(n, Some(max_degree.unwrap_or(DEFAULT_CONE_DEGREE)))?;
        Ok(ConeOracle {
            n,
            complete: set.complete,
            max_degree: set.max_degree,
            classes: std::sync::Arc::new(set.classes),
        })
    }

    pub fn classes(&self) -> &[CohClass] {
        &self.classes
    }

    pub fn check(&self, w: &SymplecticClass) -> Result<ConeReport> {
        if w.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n + 1, got: w.dim() });
        }
        let square = w.square();
        let witness = self.classes.iter().find(|e| !w.area(e).is_positive()).cloned();
        let verdict = if !square.is_positive() || witness.is_some() {
            ConeVerdict::Outside
        } else if self.complete {
            ConeVerdict::Full
        } else {
            ConeVerdict::PartialPositive
        };
        Ok(ConeReport { verdict, square, witness, checked: self.classes.len(), max_degree: self.max_degree })
    }
}

/// Desk-scale cone membership.
pub fn is_in_cone(w: &SymplecticClass, n: usize) -> Result<ConeVerdict> {
    Ok(ConeOracle::new(n, None)?.check(w)?.verdict)
}

/// Coefficients (α, β) with `x = αK₀ + βF`, if x lies in that span.
pub fn span_coefficients(x: &[Rational], k0: &CohClass, f: &CohClass) -> Result<(Rational, Rational)> {
    if x.len() != k0.dim() || f.dim() != k0.dim() {
        return Err(Error::DimensionMismatch { expected: k0.dim(), got: x.len() });
    }
    let kf = k0.dot(f);
    let ff = f.square();
    let kk = k0.square();
    let det = kk * ff - kf * kf;
    if det == 0 {
        return Err(Error::invalid("K0 and F do not span a nondegenerate plane"));
    }
    let gram = crate::lattice::gram_diagonal(k0.dim());
    let pair = |c: &CohClass| -> Rational {
        x.iter().zip(&c.coords).zip(&gram).fold(Rational::zero(), |acc, ((xi, &ci), &g)| acc + xi * q(ci * g))
    };
    let (xk, xf) = (pair(k0), pair(f));
    let det = q(det);
    let alpha = (&xk * q(ff) - &xf * q(kf)) / &det;
    let beta = (&xf * q(kk) - &xk * q(kf)) / &det;
    let ok =
        x.iter().zip(k0.coords.iter().zip(&f.coords)).all(|(xi, (&ki, &fi))| *xi == &alpha * q(ki) + &beta * q(fi));
    if !ok {
        return Err(Error::invalid("class is not in the span of K0 and F"));
    }
    Ok((alpha, beta))
}

#[derive(Clone, Debug, Serialize)]
pub struct CanonicalSign {
    pub sign: i8,
    /// `s·ω ∝ −K₀ + bF`.
    #[serde(serialize_with = "ser_q")]
    pub b: Rational,
    /// `4b > N − 9`, i.e. the normalized class has positive square.
    pub positive_square: bool,
    pub b_at_least_minus_one: bool,
}

/// The sign s with s·ω a positive multiple of −K₀ + bF.
pub fn canonical_sign(w: &SymplecticClass, k0: &CohClass, f: &CohClass) -> Result<CanonicalSign> {
    if !w.square().is_positive() {
        return Err(Error::invalid("canonical sign needs a class of positive square"));
    }
    let (alpha, beta) = span_coefficients(&w.coords(), k0, f)?;
    if alpha.is_zero() {
        return Err(Error::invalid("class is a multiple of F"));
    }
    let sign = if alpha.is_negative() { 1 } else { -1 };
    let b = -(&beta / &alpha);
    let n = k0.n() as i64;
    let positive_square = q(4) * &b > q(n - 9);
    let b_at_least_minus_one = b >= q(-1);
    Ok(CanonicalSign { sign, b, positive_square, b_at_least_minus_one })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberPair {
    pub a: i64,
    pub fiber: CohClass,
    pub partner: CohClass,
    pub dot: i64,
}

/// Second fiber classes F′ = −aK − F for F = H−E₁: K·F′ = −2, F′² = 0,
/// F·F′ = 2a ≥ 0. Only divisors of 4 can occur since aK² = 4.
pub fn fiber_pairs(n: usize) -> Result<Vec<FiberPair>> {
    if n < 2 {
        return Err(Error::invalid("fiber pairs need N >= 2"));
    }
    let k = canonical_class(n);
    let f = CohClass::h_minus(n, &[1]);
    let mut out = Vec::new();
    for a in [-4i64, -2, -1, 1, 2, 4] {
        let partner = -&(&(a * &k) + &f);
        let dot = f.dot(&partner);
        if k.dot(&partner) == -2 && partner.square() == 0 && dot == 2 * a && dot >= 0 {
            out.push(FiberPair { a, fiber: f.clone(), partner, dot });
        }
    }
    Ok(out)
}

/// Pairs (a, m) with `m = −a²K²/(2a−1)` a positive integer, a ∈ [a_min, −1].
pub fn blowdown_obstruction(n: usize, a_min: i64) -> Result<Vec<(i64, i64)>> {
    if a_min > -1 {
        return Err(Error::invalid("a_min must be at most -1"));
    }
    let k2 = 9 - n as i128;
    let mut out = Vec::new();
    for a in a_min..=-1 {
        let a = a as i128;
        let (num, den) = (-a * a * k2, 2 * a - 1);
        if num % den == 0 && num / den > 0 {
            out.push((a as i64, (num / den) as i64));
        }
    }
    Ok(out)
}

/// gcd(a², 2a−1) = 1.
pub fn coprime(a: i64) -> bool {
    (a * a).gcd(&(2 * a - 1)) == 1
}

/// δ with ω rescaled to ω(F) = 2 equal to −K₀ + δF.
pub fn delta(w: &SymplecticClass, f: &CohClass, k0: &CohClass) -> Result<Rational> {
    let wf = w.area(f);
    if !wf.is_positive() {
        return Err(Error::invalid(format!("omega(F) = {} must be positive", fmt_rational(&wf))));
    }
    let t = q(2) / wf;
    let scaled: Vec<Rational> = w.coords().iter().map(|x| x * &t).collect();
    let (alpha, beta) = span_coefficients(&scaled, k0, f)?;
    if alpha != q(-1) {
        return Err(Error::TheoremViolation(format!("rescaled K0-coefficient is {}", fmt_rational(&alpha))));
    }
    Ok(beta)
}

/// `−K₀ + δF`.
pub fn slice_class(k0: &CohClass, f: &CohClass, d: &Rational) -> SymplecticClass {
    let coords: Vec<Rational> = k0.coords.iter().zip(&f.coords).map(|(&k, &fi)| q(-k) + d * q(fi)).collect();
    SymplecticClass::from_coords(&coords)
}

#[derive(Clone, Debug, Serialize)]
pub struct SliceSample {
    #[serde(serialize_with = "ser_q")]
    pub delta: Rational,
    pub member: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeSlice {
    pub k0: CohClass,
    pub fiber: CohClass,
    pub samples: Vec<SliceSample>,
    pub complete: bool,
    /// Largest sampled δ outside the cone.
    #[serde(serialize_with = "ser_opt_q")]
    pub below: Option<Rational>,
    /// Smallest sampled δ inside the cone.
    #[serde(serialize_with = "ser_opt_q")]
    pub above: Option<Rational>,
}

fn ser_opt_q<S: serde::Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&fmt_rational(r)),
        None => s.serialize_none(),
    }
}

/// Membership of −K₀ + δF on a grid; the threshold is only bracketed.
pub fn slice_scan(exec: Exec, n: usize, f: &CohClass, k0: &CohClass, grid: &[Rational]) -> Result<ConeSlice> {
    slice_scan_with(exec, &ConeOracle::new(n, None)?, f, k0, grid)
}

pub fn slice_scan_with(
    exec: Exec,
    oracle: &ConeOracle,
    f: &CohClass,
    k0: &CohClass,
    grid: &[Rational],
) -> Result<ConeSlice> {
    if f.n() != oracle.n || k0.n() != oracle.n {
        return Err(Error::DimensionMismatch { expected: oracle.n + 1, got: f.dim() });
    }
    if f.square() != 0 || k0.dot(f) != -2 {
        return Err(Error::invalid(format!("{f} is not a fiber class for {k0}")));
    }
    let mut grid = grid.to_vec();
    grid.sort();
    grid.dedup();
    let verdicts = exec::map(exec, &grid, |d| oracle.check(&slice_class(k0, f, d)).map(|r| r.verdict.is_member()));
    let mut samples = Vec::with_capacity(grid.len());
    for (d, v) in grid.into_iter().zip(verdicts) {
        samples.push(SliceSample { delta: d, member: v? });
    }
    if let Some(w) = samples.windows(2).find(|w| w[0].member && !w[1].member) {
        return Err(Error::TheoremViolation(format!(
            "membership drops between delta = {} and {}",
            fmt_rational(&w[0].delta),
            fmt_rational(&w[1].delta)
        )));
    }
    let below = samples.iter().rev().find(|s| !s.member).map(|s| s.delta.clone());
    let above = samples.iter().find(|s| s.member).map(|s| s.delta.clone());
    Ok(ConeSlice { k0: k0.clone(), fiber: f.clone(), samples, complete: oracle.complete, below, above })
}

/// Exceptional classes (complete list, N ≤ 8) with F·e < 0.
pub fn fiber_negative_classes(n: usize, f: &CohClass) -> Vec<CohClass> {
    exceptional_classes(n).iter().filter(|e| f.dot(e) < 0).cloned().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberClassConsistency {
    pub candidates: usize,
    pub g0_size: u64,
    pub consistent: bool,
}

/// Candidate count against a declared |G₀|. The lattice alone cannot rule
/// out the partner −aK−F, so with m > 1 the rule only demands that some
/// candidate exists; at most two are ever allowed.
pub fn fiber_class_consistency(candidates: &[CohClass], m: u64) -> FiberClassConsistency {
    let c = candidates.len();
    let consistent = c <= 2 && (m <= 1 || c >= 1);
    FiberClassConsistency { candidates: c, g0_size: m, consistent }
}
