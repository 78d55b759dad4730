//! Monomial elements of PGL(3) with root-of-unity scalars.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// `[z₀,z₁,z₂] ↦ [μⁿ^{c₀} z_{σ(0)}, μⁿ^{c₁} z_{σ(1)}, μⁿ^{c₂} z_{σ(2)}]`,
/// scalars taken modulo the diagonal (normal form c₀ = 0).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MonomialGroupElement {
    pub n: u32,
    pub sigma: [u8; 3],
    pub scalars: [u32; 3],
}

const ID3: [u8; 3] = [0, 1, 2];

impl MonomialGroupElement {
    pub fn new(n: u32, sigma: [u8; 3], c: [i64; 3]) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("root-of-unity order must be positive"));
        }
        let mut seen = [false; 3];
        for &s in &sigma {
            if s > 2 || seen[s as usize] {
                return Err(Error::invalid(format!("{sigma:?} is not a permutation of 0,1,2")));
            }
            seen[s as usize] = true;
        }
        let m = n as i64;
        let scalars = [0, (c[1] - c[0]).rem_euclid(m) as u32, (c[2] - c[0]).rem_euclid(m) as u32];
        Ok(MonomialGroupElement { n, sigma, scalars })
    }

    pub fn identity(n: u32) -> Self {
        MonomialGroupElement { n, sigma: ID3, scalars: [0; 3] }
    }

    pub fn diagonal(n: u32, c: [i64; 3]) -> Result<Self> {
        Self::new(n, ID3, c)
    }

    pub fn permutation(n: u32, sigma: [u8; 3]) -> Result<Self> {
        Self::new(n, sigma, [0; 3])
    }

    pub fn is_identity(&self) -> bool {
        self.sigma == ID3 && self.scalars == [0; 3]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let t = self;
        let s = other;
        let mut sigma = [0u8; 3];
        let mut c = [0i64; 3];
        for i in 0..3 {
            let ti = t.sigma[i] as usize;
            sigma[i] = s.sigma[ti];
            c[i] = t.scalars[i] as i64 + s.scalars[ti] as i64;
        }
        Self::new(self.n, sigma, c).expect("composition of valid elements")
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { *self };
        let mut r = Self::identity(self.n);
        for _ in 0..e.unsigned_abs() {
            r = r.compose(&base);
        }
        r
    }

    pub fn inverse(&self) -> Self {
        let mut r = *self;
        let mut prev = Self::identity(self.n);
        while !r.is_identity() {
            prev = r;
            r = r.compose(self);
        }
        prev
    }

    pub fn order(&self) -> u64 {
        let mut r = *self;
        let mut k = 1;
        while !r.is_identity() {
            r = r.compose(self);
            k += 1;
        }
        k
    }
}

impl fmt::Debug for MonomialGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Image notation, e.g. `[z2, μ^3 z0, z1] (μ = μ_9)`.
impl fmt::Display for MonomialGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..3)
            .map(|i| match self.scalars[i] {
                0 => format!("z{}", self.sigma[i]),
                1 => format!("μ z{}", self.sigma[i]),
                c => format!("μ^{c} z{}", self.sigma[i]),
            })
            .collect();
        write!(f, "[{}] (μ = μ_{})", parts.join(", "), self.n)
    }
}

pub(crate) fn closure(gens: &[MonomialGroupElement], n: u32, limit: usize) -> Result<Vec<MonomialGroupElement>> {
    let id = MonomialGroupElement::identity(n);
    let mut seen: HashSet<MonomialGroupElement> = HashSet::from([id]);
    let mut order = vec![id];
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                let y = x.compose(g);
                if seen.insert(y) {
                    if seen.len() > limit {
                        return Err(Error::LimitExceeded(limit));
                    }
                    order.push(y);
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    order.sort();
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_and_identity() {
        let x = MonomialGroupElement::diagonal(5, [2, 2, 2]).unwrap();
        assert!(x.is_identity());
        let y = MonomialGroupElement::diagonal(5, [1, 0, 0]).unwrap();
        assert_eq!(y.scalars, [0, 4, 4]);
        assert_eq!(y.order(), 5);
        assert!(MonomialGroupElement::permutation(3, [0, 0, 1]).is_err());
    }

    #[test]
    fn associativity() {
        let n = 7;
        let a = MonomialGroupElement::new(n, [2, 0, 1], [0, 3, 5]).unwrap();
        let b = MonomialGroupElement::new(n, [0, 2, 1], [1, 0, 6]).unwrap();
        let c = MonomialGroupElement::new(n, [1, 0, 2], [4, 4, 0]).unwrap();
        assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        assert!(a.compose(&a.inverse()).is_identity());
        let g2 = MonomialGroupElement::permutation(n, [2, 0, 1]).unwrap();
        assert_eq!(g2.order(), 3);
    }
}
