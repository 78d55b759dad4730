use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{gram_diagonal, CohClass, Rational};

/// Integer matrix acting on raw coordinates, `y = M x`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isometry {
    dim: usize,
    m: Vec<i64>,
}

impl Isometry {
    pub fn identity(dim: usize) -> Self {
        let mut m = vec![0; dim * dim];
        for i in 0..dim {
            m[i * dim + i] = 1;
        }
        Isometry { dim, m }
    }

    /// Unvalidated constructor from row-major entries.
    pub fn from_raw(dim: usize, m: Vec<i64>) -> Self {
        assert_eq!(m.len(), dim * dim);
        Isometry { dim, m }
    }

    /// Validated constructor: square, at least 2×2, preserves the pairing.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.len();
        if dim < 2 {
            return Err(Error::invalid("matrix must be at least 2x2"));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::invalid(format!("row of length {} in a {dim}x{dim} matrix", r.len())));
        }
        let g = Isometry { dim, m: rows.concat() };
        if let Some((i, j, got, want)) = g.pairing_witness() {
            return Err(Error::NotIsometry(format!("(M e{i})·(M e{j}) = {got}, expected e{i}·e{j} = {want}")));
        }
        Ok(g)
    }

    /// Reflection `x ↦ x + (x·α)α` in a (−2)-class.
    pub fn reflection(alpha: &CohClass) -> Result<Self> {
        if alpha.square() != -2 {
            return Err(Error::invalid(format!("{alpha} has square {} (need -2)", alpha.square())));
        }
        Ok(Self::reflection_unchecked(alpha))
    }

    pub(crate) fn reflection_unchecked(alpha: &CohClass) -> Self {
        let dim = alpha.dim();
        let q = gram_diagonal(dim);
        let a = &alpha.coords;
        let mut m = Self::identity(dim).m;
        for i in 0..dim {
            for j in 0..dim {
                m[i * dim + j] += a[i] * q[j] * a[j];
            }
        }
        Isometry { dim, m }
    }

    /// Permutes E₁..E_N: `Eᵢ ↦ E_{p(i)}`, with p given 1-based on 1..=N.
    pub fn permutation(p: &[usize]) -> Result<Self> {
        let dim = p.len() + 1;
        let mut seen = vec![false; dim];
        let mut m = vec![0; dim * dim];
        m[0] = 1;
        for (i, &pi) in p.iter().enumerate() {
            if pi == 0 || pi >= dim || seen[pi] {
                return Err(Error::invalid(format!("not a permutation of 1..={}", dim - 1)));
            }
            seen[pi] = true;
            m[pi * dim + (i + 1)] = 1;
        }
        Ok(Isometry { dim, m })
    }

    /// Columns are the images of H, E₁, …, E_N.
    pub fn from_images(images: &[CohClass]) -> Result<Self> {
        let dim = images.len();
        let mut m = vec![0; dim * dim];
        for (j, img) in images.iter().enumerate() {
            if img.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: img.dim() });
            }
            for i in 0..dim {
                m[i * dim + j] = img.coords[i];
            }
        }
        let g = Isometry { dim, m };
        if let Some((i, j, got, want)) = g.pairing_witness() {
            return Err(Error::NotIsometry(format!("images pair to {got} at ({i},{j}), expected {want}")));
        }
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.dim - 1
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.m[i * self.dim + j]
    }

    pub fn entries(&self) -> &[i64] {
        &self.m
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.m.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> CohClass {
        CohClass { coords: (0..self.dim).map(|i| self.entry(i, j)).collect() }
    }

    pub fn apply(&self, x: &CohClass) -> CohClass {
        assert_eq!(x.dim(), self.dim, "isometry applied to a class of another lattice");
        CohClass { coords: self.apply_slice(&x.coords) }
    }

    pub(crate) fn apply_slice(&self, x: &[i64]) -> Vec<i64> {
        self.m.chunks(self.dim).map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn apply_q(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.dim);
        self.m
            .chunks(self.dim)
            .map(|r| {
                let mut s = Rational::default();
                for (a, b) in r.iter().zip(x) {
                    if *a != 0 {
                        s += b * num_bigint::BigInt::from(*a);
                    }
                }
                s
            })
            .collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut m = vec![0; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.m[i * d + k];
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    m[i * d + j] += a * other.m[k * d + j];
                }
            }
        }
        Isometry { dim: d, m }
    }

    /// `M⁻¹ = Q Mᵀ Q` for a pairing-preserving M.
    pub fn inverse(&self) -> Isometry {
        let d = self.dim;
        let q = gram_diagonal(d);
        let mut m = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                m[i * d + j] = q[i] * self.m[j * d + i] * q[j];
            }
        }
        Isometry { dim: d, m }
    }

    pub fn trace(&self) -> i64 {
        (0..self.dim).map(|i| self.m[i * self.dim + i]).sum()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    pub fn fixes(&self, x: &CohClass) -> bool {
        self.apply(x) == *x
    }

    pub fn is_isometry(&self) -> bool {
        self.pairing_witness().is_none()
    }

    /// First basis pair (i, j) whose images pair wrongly, with (got, expected).
    pub fn pairing_witness(&self) -> Option<(usize, usize, i64, i64)> {
        let q = gram_diagonal(self.dim);
        let cols: Vec<Vec<i64>> = (0..self.dim).map(|j| self.column(j).coords).collect();
        for i in 0..self.dim {
            for j in i..self.dim {
                let got = crate::lattice::dot(&cols[i], &cols[j]);
                let want = if i == j { q[i] } else { 0 };
                if got != want {
                    return Some((i, j, got, want));
                }
            }
        }
        None
    }
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Isometry{:?}", self.rows())
    }
}

impl Serialize for Isometry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Isometry {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<i64>> = Vec::deserialize(d)?;
        Isometry::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::canonical_class;

    #[test]
    fn reflection_basics() {
        let n = 4;
        let a = &CohClass::e(n, 1) - &CohClass::e(n, 2);
        let s = Isometry::reflection(&a).unwrap();
        assert_eq!(s.apply(&CohClass::e(n, 1)), CohClass::e(n, 2));
        assert_eq!(s.apply(&a), -&a);
        assert!(s.compose(&s).is_identity());
        assert!(s.fixes(&canonical_class(n)));
        assert_eq!(s, Isometry::permutation(&[2, 1, 3, 4]).unwrap());
        assert!(Isometry::reflection(&CohClass::e(n, 1)).is_err());
    }

    #[test]
    fn inverse_and_witness() {
        let n = 5;
        let r = Isometry::reflection(&CohClass::h_minus(n, &[1, 2, 3])).unwrap();
        let p = Isometry::permutation(&[2, 3, 4, 5, 1]).unwrap();
        let g = r.compose(&p);
        assert!(g.compose(&g.inverse()).is_identity());
        let mut rows = Isometry::identity(3).rows();
        rows[0][0] = 2;
        assert!(matches!(Isometry::from_rows(&rows), Err(Error::NotIsometry(_))));
    }

    #[test]
    fn permutation_direction() {
        let p = Isometry::permutation(&[3, 1, 2]).unwrap();
        assert_eq!(p.apply(&CohClass::e(3, 1)), CohClass::e(3, 3));
        assert_eq!(p.apply(&CohClass::e(3, 2)), CohClass::e(3, 1));
    }
}
