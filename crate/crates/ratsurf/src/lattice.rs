//! The degree-2 lattice of CP²#N(CP̄²) in the basis (H, E₁, …, E_N).
//!
//! Integer classes store raw coordinates `c₀H + Σ cᵢEᵢ`. The surface
//! literature writes the same class as `aH − Σ bₛEₛ`; the accessors
//! [`CohClass::degree`] and [`CohClass::b`] give that form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};

pub type Rational = BigRational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn q_frac(p: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| Error::Parse(format!("bad rational {s:?}")))
}

/// Formats as `p/q`, or `p` for integers.
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

/// The lattice itself; carries only N.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PicardLattice {
    pub n_blowups: usize,
}

impl PicardLattice {
    pub fn new(n_blowups: usize) -> Result<Self> {
        if n_blowups == 0 {
            return Err(Error::invalid("need at least one blow-up"));
        }
        Ok(PicardLattice { n_blowups })
    }

    pub fn rank(&self) -> usize {
        self.n_blowups + 1
    }

    /// Diagonal of the Gram matrix: (+1, −1, …, −1).
    pub fn gram_diagonal(&self) -> Vec<i64> {
        gram_diagonal(self.rank())
    }

    pub fn basis(&self) -> Vec<CohClass> {
        (0..self.rank()).map(|i| CohClass::unit(self.n_blowups, i)).collect()
    }

    pub fn canonical_class(&self) -> CohClass {
        canonical_class(self.n_blowups)
    }
}

pub(crate) fn gram_diagonal(dim: usize) -> Vec<i64> {
    let mut g = vec![-1; dim];
    g[0] = 1;
    g
}

/// `K = −3H + E₁ + … + E_N`.
pub fn canonical_class(n: usize) -> CohClass {
    let mut c = vec![1; n + 1];
    c[0] = -3;
    CohClass { coords: c }
}

/// Integer class `c₀H + Σ cᵢEᵢ`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CohClass {
    pub coords: Vec<i64>,
}

impl CohClass {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::invalid("a class needs at least 2 coordinates"));
        }
        Ok(CohClass { coords })
    }

    pub fn zero(n: usize) -> Self {
        CohClass { coords: vec![0; n + 1] }
    }

    /// Basis vector: index 0 is H, index i is Eᵢ.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut c = Self::zero(n);
        c.coords[i] = 1;
        c
    }

    pub fn h(n: usize) -> Self {
        Self::unit(n, 0)
    }

    /// Eᵢ, 1-based.
    pub fn e(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= n, "E index {i} out of range 1..={n}");
        Self::unit(n, i)
    }

    /// Builds `aH − Σ bₛEₛ`.
    pub fn from_multiplicities(a: i64, b: &[i64]) -> Self {
        let mut coords = Vec::with_capacity(b.len() + 1);
        coords.push(a);
        coords.extend(b.iter().map(|x| -x));
        CohClass { coords }
    }

    /// `H − Eᵢ − Eⱼ − E_k` (1-based); `H − Eᵢ − Eⱼ` when given two indices.
    pub fn h_minus(n: usize, idx: &[usize]) -> Self {
        let mut c = Self::h(n);
        for &i in idx {
            c.coords[i] -= 1;
        }
        c
    }

    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Raw coordinates (c₀, c₁, …, c_N).
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// The coefficient a in `aH − Σ bₛEₛ`.
    pub fn degree(&self) -> i64 {
        self.coords[0]
    }

    /// bₛ (1-based) in `aH − Σ bₛEₛ`.
    pub fn b(&self, s: usize) -> i64 {
        -self.coords[s]
    }

    pub fn bs(&self) -> Vec<i64> {
        self.coords[1..].iter().map(|x| -x).collect()
    }

    /// Unchecked pairing; panics on a dimension mismatch.
    pub fn dot(&self, other: &CohClass) -> i64 {
        assert_eq!(self.dim(), other.dim(), "pairing of classes from different lattices");
        dot(&self.coords, &other.coords)
    }

    pub fn square(&self) -> i64 {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// `e·x ≡ x·x (mod 2)` on every basis vector, i.e. every coordinate odd.
    pub fn is_characteristic(&self) -> bool {
        self.coords.iter().all(|c| c.rem_euclid(2) == 1)
    }

    pub fn is_exceptional(&self) -> bool {
        self.square() == -1 && canonical_class(self.n()).dot(self) == -1
    }

    pub fn is_primitive(&self) -> bool {
        self.coords.iter().fold(0i64, |g, &c| num_integer::gcd(g, c)) == 1
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.coords.iter().map(|&c| q(c)).collect()
    }
}

pub(crate) fn dot(x: &[i64], y: &[i64]) -> i64 {
    x[0] * y[0] - x[1..].iter().zip(&y[1..]).map(|(a, b)| a * b).sum::<i64>()
}

impl fmt::Debug for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prints the class as a combination, e.g. `H-E1-E2`.
impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (i, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = if i == 0 { "H".to_string() } else { format!("E{i}") };
            let sign = if c < 0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if mag == 1 {
                out.push_str(&format!("{sign}{name}"));
            } else {
                out.push_str(&format!("{sign}{mag}{name}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl Add for &CohClass {
    type Output = CohClass;
    fn add(self, rhs: &CohClass) -> CohClass {
        assert_eq!(self.dim(), rhs.dim());
        CohClass { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CohClass {
    type Output = CohClass;
    fn sub(self, rhs: &CohClass) -> CohClass {
        assert_eq!(self.dim(), rhs.dim());
        CohClass { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect() }
    }
}

impl Add for CohClass {
    type Output = CohClass;
    fn add(self, rhs: CohClass) -> CohClass {
        &self + &rhs
    }
}

impl Sub for CohClass {
    type Output = CohClass;
    fn sub(self, rhs: CohClass) -> CohClass {
        &self - &rhs
    }
}

impl Neg for &CohClass {
    type Output = CohClass;
    fn neg(self) -> CohClass {
        CohClass { coords: self.coords.iter().map(|a| -a).collect() }
    }
}

impl Mul<&CohClass> for i64 {
    type Output = CohClass;
    fn mul(self, rhs: &CohClass) -> CohClass {
        CohClass { coords: rhs.coords.iter().map(|a| self * a).collect() }
    }
}

impl FromStr for CohClass {
    type Err = Error;
    /// Accepts a JSON integer array of raw coordinates.
    fn from_str(s: &str) -> Result<Self> {
        let coords: Vec<i64> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        CohClass::new(coords)
    }
}

/// Candidate symplectic class `νH − Σ λᵢEᵢ` with exact rational entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymplecticClass {
    pub nu: Rational,
    pub lambda: Vec<Rational>,
}

impl SymplecticClass {
    pub fn new(nu: Rational, lambda: Vec<Rational>) -> Self {
        SymplecticClass { nu, lambda }
    }

    pub fn from_ints(nu: i64, lambda: &[i64]) -> Self {
        SymplecticClass { nu: q(nu), lambda: lambda.iter().map(|&l| q(l)).collect() }
    }

    /// From raw coordinates `c₀H + Σ cᵢEᵢ`.
    pub fn from_coords(c: &[Rational]) -> Self {
        SymplecticClass { nu: c[0].clone(), lambda: c[1..].iter().map(|x| -x).collect() }
    }

    pub fn from_class(c: &CohClass) -> Self {
        Self::from_coords(&c.to_rational())
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn dim(&self) -> usize {
        self.lambda.len() + 1
    }

    pub fn coords(&self) -> Vec<Rational> {
        let mut c = Vec::with_capacity(self.dim());
        c.push(self.nu.clone());
        c.extend(self.lambda.iter().map(|x| -x));
        c
    }

    /// `ω(e)`; panics on a dimension mismatch.
    pub fn area(&self, e: &CohClass) -> Rational {
        assert_eq!(self.dim(), e.dim(), "area against a class from another lattice");
        let mut s = &self.nu * BigInt::from(e.coords[0]);
        for (l, &c) in self.lambda.iter().zip(&e.coords[1..]) {
            s += l * BigInt::from(c);
        }
        s
    }

    pub fn square(&self) -> Rational {
        let mut s = &self.nu * &self.nu;
        for l in &self.lambda {
            s -= l * l;
        }
        s
    }

    pub fn scale(&self, t: &Rational) -> Self {
        SymplecticClass { nu: &self.nu * t, lambda: self.lambda.iter().map(|l| l * t).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// `λ₁ ≥ … ≥ λ_N > 0` and `ν ≥ λ₁ + λ₂ + λ₃`.
    ///
    /// For N < 3 the missing λ count as 0.
    pub fn is_reduced_class(&self) -> bool {
        let l = &self.lambda;
        if l.iter().any(|x| !x.is_positive()) {
            return false;
        }
        if l.windows(2).any(|w| w[0] < w[1]) {
            return false;
        }
        let top: Rational = l.iter().take(3).cloned().sum();
        self.nu >= top
    }

    /// The scalar t with `ω = t·(−K)` if ω is monotone.
    pub fn monotone_ratio(&self) -> Option<Rational> {
        if !self.nu.is_positive() {
            return None;
        }
        let t = &self.nu / BigInt::from(3);
        self.lambda.iter().all(|l| *l == t).then_some(t)
    }

    /// ω is a negative rational multiple of K.
    pub fn is_monotone(&self) -> bool {
        self.monotone_ratio().is_some()
    }
}

impl fmt::Debug for SymplecticClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prints `(ν; λ₁,…,λ_N)`.
impl fmt::Display for SymplecticClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ls: Vec<String> = self.lambda.iter().map(fmt_rational).collect();
        write!(f, "({}; {})", fmt_rational(&self.nu), ls.join(","))
    }
}

impl Serialize for SymplecticClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coords().iter().map(fmt_rational).collect();
        v.serialize(s)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RatRepr {
    Int(i64),
    Str(String),
}

impl<'de> Deserialize<'de> for SymplecticClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<RatRepr> = Vec::deserialize(d)?;
        if raw.len() < 2 {
            return Err(serde::de::Error::custom("a class needs at least 2 coordinates"));
        }
        let mut c = Vec::with_capacity(raw.len());
        for r in raw {
            c.push(match r {
                RatRepr::Int(i) => q(i),
                RatRepr::Str(s) => parse_rational(&s).map_err(serde::de::Error::custom)?,
            });
        }
        Ok(SymplecticClass::from_coords(&c))
    }
}

/// Anything with rational coordinates in the basis (H, E₁, …, E_N).
pub trait LatticeVector {
    fn rational_coords(&self) -> Vec<Rational>;
}

impl LatticeVector for CohClass {
    fn rational_coords(&self) -> Vec<Rational> {
        self.to_rational()
    }
}

impl LatticeVector for SymplecticClass {
    fn rational_coords(&self) -> Vec<Rational> {
        self.coords()
    }
}

/// `x₀y₀ − Σ xᵢyᵢ`.
pub fn pairing<A: LatticeVector + ?Sized, B: LatticeVector + ?Sized>(x: &A, y: &B) -> Result<Rational> {
    let a = x.rational_coords();
    let b = y.rational_coords();
    check_dim(a.len(), b.len())?;
    let mut s = &a[0] * &b[0];
    for (u, v) in a[1..].iter().zip(&b[1..]) {
        s -= u * v;
    }
    Ok(s)
}

pub fn is_characteristic(e: &CohClass) -> bool {
    e.is_characteristic()
}

pub fn is_reduced_class(w: &SymplecticClass) -> bool {
    w.is_reduced_class()
}

pub fn is_monotone(w: &SymplecticClass) -> bool {
    w.is_monotone()
}

pub(crate) fn rational_is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub(crate) fn rational_to_i64(r: &Rational) -> Option<i64> {
    use num_traits::ToPrimitive;
    if rational_is_integer(r) {
        r.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_pairings() {
        let n = 3;
        let h = CohClass::h(n);
        let e1 = CohClass::e(n, 1);
        let e2 = CohClass::e(n, 2);
        assert_eq!(pairing(&h, &h).unwrap(), q(1));
        assert_eq!(pairing(&e1, &e2).unwrap(), q(0));
        assert_eq!(pairing(&e1, &CohClass::h_minus(n, &[1, 2])).unwrap(), q(1));
        assert!(pairing(&h, &CohClass::h(4)).is_err());
    }

    #[test]
    fn canonical_squares() {
        for n in 1..=12 {
            assert_eq!(canonical_class(n).square(), 9 - n as i64);
        }
    }

    #[test]
    fn characteristic() {
        assert!(CohClass::h_minus(2, &[1, 2]).is_characteristic());
        assert!(!CohClass::e(2, 1).is_characteristic());
        // 3H - E1 - ... - EN is -K: characteristic for every N
        for n in 1..8 {
            let mk = -&canonical_class(n);
            assert!(mk.is_characteristic());
        }
    }

    #[test]
    fn reduced_and_monotone() {
        for b in 0..4 {
            let mut l = vec![1 + b; 5];
            l[1..].iter_mut().for_each(|x| *x = 1);
            assert!(SymplecticClass::from_ints(3 + b, &l).is_reduced_class());
        }
        assert!(SymplecticClass::from_ints(3, &[1, 1, 1]).is_reduced_class());
        assert!(!SymplecticClass::from_ints(1, &[1, 1, 1]).is_reduced_class());
        assert!(SymplecticClass::from_ints(3, &[1, 1, 1, 1]).is_monotone());
        assert!(!SymplecticClass::from_ints(4, &[2, 1, 1, 1]).is_monotone());
        assert_eq!(SymplecticClass::from_ints(6, &[2, 2]).monotone_ratio(), Some(q(2)));
    }

    #[test]
    fn serde_roundtrip() {
        let w = SymplecticClass::new(q_frac(7, 2), vec![q(1), q_frac(1, 3)]);
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"["7/2","-1","-1/3"]"#);
        let back: SymplecticClass = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
        let c: CohClass = "[1,-1,0]".parse().unwrap();
        assert_eq!(c, CohClass::h_minus(2, &[1]));
        assert_eq!(serde_json::to_string(&c).unwrap(), "[1,-1,0]");
        assert_eq!(c.to_string(), "H-E1");
    }

    #[test]
    fn multiplicity_form() {
        let e = CohClass::from_multiplicities(2, &[1, 1, 1, 1, 1]);
        assert_eq!(e.coords, vec![2, -1, -1, -1, -1, -1]);
        assert_eq!(e.degree(), 2);
        assert_eq!(e.b(3), 1);
        assert!(e.is_exceptional());
    }
}
