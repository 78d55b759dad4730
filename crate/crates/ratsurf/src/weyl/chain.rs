//! Schreier–Sims stabilizer chains for permutation groups.
//!
//! Permutations act on the right: `p^g = g[p]`, and `(g*h)[p] = h[g[p]]`.

pub type Perm = Vec<u16>;

fn identity(n: usize) -> Perm {
    (0..n as u16).collect()
}

fn mul(a: &Perm, b: &Perm) -> Perm {
    a.iter().map(|&p| b[p as usize]).collect()
}

fn inv(a: &Perm) -> Perm {
    let mut r = vec![0; a.len()];
    for (i, &p) in a.iter().enumerate() {
        r[p as usize] = i as u16;
    }
    r
}

fn is_identity(a: &Perm) -> bool {
    a.iter().enumerate().all(|(i, &p)| i == p as usize)
}

#[derive(Clone, Debug)]
struct Level {
    base: u16,
    gens: Vec<Perm>,
    orbit: Vec<u16>,
    // transversal[p] maps base to p
    transversal: Vec<Option<Perm>>,
}

#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(degree: usize, gens: &[Perm]) -> Self {
        assert!(degree <= u16::MAX as usize + 1);
        let mut chain = StabilizerChain { degree, levels: Vec::new() };
        for g in gens {
            assert_eq!(g.len(), degree, "generator of wrong degree");
            let r = chain.sift(0, g.clone());
            if !is_identity(&r) {
                chain.add_gen(0, r);
            }
        }
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base as usize).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.len() == self.degree && is_identity(&self.sift(0, g.clone()))
    }

    fn sift(&self, from: usize, mut g: Perm) -> Perm {
        for l in &self.levels[from.min(self.levels.len())..] {
            let p = g[l.base as usize] as usize;
            match &l.transversal[p] {
                Some(u) => g = mul(&g, &inv(u)),
                None => return g,
            }
        }
        g
    }

    fn add_gen(&mut self, lvl: usize, g: Perm) {
        if lvl == self.levels.len() {
            let b = g.iter().enumerate().position(|(i, &p)| i != p as usize).expect("identity added") as u16;
            let mut transversal = vec![None; self.degree];
            transversal[b as usize] = Some(identity(self.degree));
            self.levels.push(Level { base: b, gens: Vec::new(), orbit: vec![b], transversal });
        }
        self.levels[lvl].gens.push(g);
        let gi = self.levels[lvl].gens.len() - 1;
        let mut todo: Vec<(u16, usize)> = self.levels[lvl].orbit.iter().map(|&p| (p, gi)).collect();
        while let Some((p, si)) = todo.pop() {
            let level = &self.levels[lvl];
            let s = &level.gens[si];
            let q = s[p as usize];
            let up = level.transversal[p as usize].as_ref().unwrap();
            let ups = mul(up, s);
            match &level.transversal[q as usize] {
                None => {
                    let ngens = level.gens.len();
                    let level = &mut self.levels[lvl];
                    level.transversal[q as usize] = Some(ups);
                    level.orbit.push(q);
                    todo.extend((0..ngens).map(|k| (q, k)));
                }
                Some(uq) => {
                    let schreier = mul(&ups, &inv(uq));
                    if is_identity(&schreier) {
                        continue;
                    }
                    let r = self.sift(lvl + 1, schreier);
                    if !is_identity(&r) {
                        self.add_gen(lvl + 1, r);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Perm {
        (0..n).map(|i| ((i + 1) % n) as u16).collect()
    }

    fn transposition(n: usize, a: usize, b: usize) -> Perm {
        let mut p = identity(n);
        p.swap(a, b);
        p
    }

    #[test]
    fn symmetric_groups() {
        let mut fact = 1u128;
        for n in 2..=9 {
            fact *= n as u128;
            let c = StabilizerChain::new(n, &[cycle(n), transposition(n, 0, 1)]);
            assert_eq!(c.order(), fact, "S_{n}");
        }
    }

    #[test]
    fn cyclic_and_membership() {
        let c = StabilizerChain::new(7, &[cycle(7)]);
        assert_eq!(c.order(), 7);
        assert!(c.contains(&mul(&cycle(7), &cycle(7))));
        assert!(!c.contains(&transposition(7, 0, 1)));
        assert_eq!(StabilizerChain::new(5, &[]).order(), 1);
    }

    #[test]
    fn alternating() {
        // 3-cycles generate A_n
        let n = 8;
        let gens: Vec<Perm> = (0..n - 2)
            .map(|i| {
                let mut p = identity(n);
                p[i] = (i + 1) as u16;
                p[i + 1] = (i + 2) as u16;
                p[i + 2] = i as u16;
                p
            })
            .collect();
        assert_eq!(StabilizerChain::new(n, &gens).order(), 20160);
    }
}
