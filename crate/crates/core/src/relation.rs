//! Binary relations on a finite universe and the D-relations `D_{a,b}`.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::subpower::{generate_subpower, GeneratedSet};

/// A dense relation on `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    size: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(size: usize) -> Relation {
        Relation {
            size,
            bits: vec![false; size * size],
        }
    }

    pub fn diagonal(size: usize) -> Relation {
        let mut r = Relation::empty(size);
        for x in 0..size {
            r.insert(x, x);
        }
        r
    }

    pub fn from_pairs(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Relation> {
        let mut r = Relation::empty(size);
        for (x, y) in pairs {
            if x >= size || y >= size {
                return Err(Error::ElementOutOfRange {
                    element: x.max(y),
                    size,
                });
            }
            r.insert(x, y);
        }
        Ok(r)
    }

    pub fn from_partition(p: &Partition) -> Relation {
        let mut r = Relation::empty(p.size());
        for (x, y) in p.pairs() {
            r.insert(x, y);
        }
        r
    }

    /// The pairs of a subpower of `A^2`.
    pub fn from_generated(set: &GeneratedSet) -> Result<Relation> {
        if set.power() != 2 {
            return Err(Error::Invalid(alloc::format!(
                "a binary relation needs a subpower of exponent 2, not {}",
                set.power()
            )));
        }
        let mut r = Relation::empty(set.base());
        for t in set.iter() {
            r.insert(t[0], t[1]);
        }
        Ok(r)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.bits[x * self.size + y]
    }

    #[inline]
    pub fn insert(&mut self, x: usize, y: usize) {
        self.bits[x * self.size + y] = true;
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.size;
        (0..n * n).filter(|&i| self.bits[i]).map(move |i| (i / n, i % n))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.size == other.size && self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size).all(|x| self.contains(x, x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(x, y)| self.contains(y, x))
    }

    pub fn is_transitive(&self) -> bool {
        self.compose(self).map(|c| c.is_subset(self)).unwrap_or(false)
    }

    /// `{(x, z) : (x, y) ∈ self, (y, z) ∈ other for some y}`.
    pub fn compose(&self, other: &Relation) -> Result<Relation> {
        if self.size != other.size {
            return Err(Error::SizeMismatch {
                left: self.size,
                right: other.size,
            });
        }
        let n = self.size;
        let mut out = Relation::empty(n);
        for x in 0..n {
            for y in (0..n).filter(|&y| self.contains(x, y)) {
                for z in 0..n {
                    if other.contains(y, z) {
                        out.insert(x, z);
                    }
                }
            }
        }
        Ok(out)
    }

    /// The relation as a partition, when it is an equivalence.
    pub fn to_partition(&self) -> Option<Partition> {
        if !(self.is_reflexive() && self.is_symmetric() && self.is_transitive()) {
            return None;
        }
        Partition::generated_by(self.size, self.pairs()).ok()
    }

    pub fn equals_partition(&self, p: &Partition) -> bool {
        self.size == p.size() && *self == Relation::from_partition(p)
    }
}

pub fn compose_relations(r: &Relation, s: &Relation) -> Result<Relation> {
    r.compose(s)
}

/// `D_{a,b}`: the subuniverse of `A^2` generated by `(a,b)`, `(b,a)` and the
/// diagonal, in that generator order.
pub fn d_rel(alg: &FiniteAlgebra, a: usize, b: usize) -> Result<GeneratedSet> {
    alg.check_element(a)?;
    alg.check_element(b)?;
    let mut gens = vec![vec![a, b], vec![b, a]];
    gens.extend((0..alg.size()).map(|c| vec![c, c]));
    generate_subpower(alg, 2, &gens)
}
