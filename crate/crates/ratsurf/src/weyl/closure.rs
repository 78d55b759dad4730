//! Breadth-first group closure with a packed element arena.
//!
//! Elements are stored as flat row-major blocks in one `Vec<T>`; the hash
//! table holds only `u32` indices into it. With `T = i8` the 2.9M elements
//! of W₇ take under 200 MB. If some entry leaves the `i8` range the closure
//! restarts with `i64` storage.

use std::hash::{BuildHasher, Hash};

use hashbrown::{DefaultHashBuilder, HashTable};

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::weyl::Isometry;

const CHUNK: usize = 4096;

pub(crate) trait Entry: Copy + Eq + Hash + Send + Sync + Into<i64> + TryFrom<i64> + 'static {}
impl Entry for i8 {}
impl Entry for i64 {}

#[derive(Clone, Debug)]
pub(crate) enum Store {
    Small(Vec<i8>),
    Wide(Vec<i64>),
}

/// The element list of a finite matrix group, in BFS discovery order.
#[derive(Clone, Debug)]
pub struct ElementStore {
    dim: usize,
    store: Store,
}

impl ElementStore {
    pub fn len(&self) -> usize {
        let block = self.dim * self.dim;
        match &self.store {
            Store::Small(v) => v.len() / block,
            Store::Wide(v) => v.len() / block,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize) -> Isometry {
        let b = self.dim * self.dim;
        let m: Vec<i64> = match &self.store {
            Store::Small(v) => v[i * b..(i + 1) * b].iter().map(|&x| x as i64).collect(),
            Store::Wide(v) => v[i * b..(i + 1) * b].to_vec(),
        };
        Isometry::from_raw(self.dim, m)
    }

    pub fn trace(&self, i: usize) -> i64 {
        let b = self.dim * self.dim;
        (0..self.dim)
            .map(|k| match &self.store {
                Store::Small(v) => v[i * b + k * self.dim + k] as i64,
                Store::Wide(v) => v[i * b + k * self.dim + k],
            })
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = Isometry> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Elements in lexicographic order of their row-major entries.
    pub fn sorted(&self) -> Vec<Isometry> {
        let mut v: Vec<Isometry> = self.iter().collect();
        v.sort();
        v
    }

    pub fn trace_sum(&self) -> i128 {
        (0..self.len()).map(|i| self.trace(i) as i128).sum()
    }
}

// Column j of a generator as (row k, value) pairs.
struct SparseGen {
    cols: Vec<Vec<(usize, i64)>>,
}

impl SparseGen {
    fn new(g: &Isometry) -> Self {
        let d = g.dim();
        let cols =
            (0..d).map(|j| (0..d).filter(|&k| g.entry(k, j) != 0).map(|k| (k, g.entry(k, j))).collect()).collect();
        SparseGen { cols }
    }
}

fn multiply_into<T: Entry>(elem: &[T], g: &SparseGen, d: usize, out: &mut Vec<T>) -> bool {
    for i in 0..d {
        let row = &elem[i * d..(i + 1) * d];
        for col in &g.cols {
            let mut s: i64 = 0;
            for &(k, v) in col {
                s += row[k].into() * v;
            }
            match T::try_from(s) {
                Ok(t) => out.push(t),
                Err(_) => return false,
            }
        }
    }
    true
}

enum Outcome<T> {
    Done(Vec<T>),
    Overflow,
}

fn bfs<T: Entry>(exec: Exec, gens: &[Isometry], dim: usize, limit: usize) -> Result<Outcome<T>> {
    let block = dim * dim;
    let sparse: Vec<SparseGen> = gens.iter().map(SparseGen::new).collect();
    let hasher = DefaultHashBuilder::default();
    let mut arena: Vec<T> = Vec::new();
    let mut table: HashTable<u32> = HashTable::new();

    let mut id = Vec::with_capacity(block);
    for i in 0..dim {
        for j in 0..dim {
            match T::try_from(i64::from(i == j)) {
                Ok(t) => id.push(t),
                Err(_) => return Ok(Outcome::Overflow),
            }
        }
    }
    arena.extend_from_slice(&id);
    table.insert_unique(hasher.hash_one(&id[..]), 0, |_| unreachable!());
    let mut frontier: Vec<u32> = vec![0];

    while !frontier.is_empty() {
        let mut next = Vec::new();
        for chunk in frontier.chunks(CHUNK) {
            let arena_ref = &arena;
            let products: Vec<Option<Vec<T>>> = exec::map(exec, chunk, |&idx| {
                let elem = &arena_ref[idx as usize * block..(idx as usize + 1) * block];
                let mut out = Vec::with_capacity(block * sparse.len());
                for g in &sparse {
                    if !multiply_into(elem, g, dim, &mut out) {
                        return None;
                    }
                }
                Some(out)
            });
            for p in products {
                let Some(p) = p else { return Ok(Outcome::Overflow) };
                for cand in p.chunks(block) {
                    let h = hasher.hash_one(cand);
                    let found =
                        table.find(h, |&i| &arena[i as usize * block..(i as usize + 1) * block] == cand).is_some();
                    if found {
                        continue;
                    }
                    let idx = arena.len() / block;
                    if idx >= limit {
                        return Err(Error::LimitExceeded(limit));
                    }
                    arena.extend_from_slice(cand);
                    let a = &arena;
                    table.insert_unique(h, idx as u32, |&i| {
                        hasher.hash_one(&a[i as usize * block..(i as usize + 1) * block])
                    });
                    next.push(idx as u32);
                }
            }
        }
        frontier = next;
    }
    Ok(Outcome::Done(arena))
}

pub(crate) fn close(exec: Exec, gens: &[Isometry], dim: usize, limit: usize) -> Result<ElementStore> {
    if limit > u32::MAX as usize {
        return Err(Error::invalid("closure limit above 2^32"));
    }
    if let Outcome::Done(v) = bfs::<i8>(exec, gens, dim, limit)? {
        return Ok(ElementStore { dim, store: Store::Small(v) });
    }
    match bfs::<i64>(exec, gens, dim, limit)? {
        Outcome::Done(v) => Ok(ElementStore { dim, store: Store::Wide(v) }),
        Outcome::Overflow => unreachable!("i64 storage cannot overflow the conversion"),
    }
}
