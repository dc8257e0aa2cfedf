//! Equivalence relations on `{0, .., n-1}` in canonical class-id form.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Union-find with path halving.
#[derive(Debug, Clone)]
pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when two distinct classes were merged.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        // keep the smaller root so representatives are least elements
        if rx < ry {
            self.parent[ry] = rx;
        } else {
            self.parent[rx] = ry;
        }
        true
    }

    pub fn into_partition(mut self) -> Partition {
        let roots: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        Partition::from_labels(&roots)
    }
}

/// Class ids appear in increasing order of first occurrence, so `class_ids[0]
/// == 0` and class `i` is the class whose least element is the i-th smallest
/// least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    class_ids: Vec<usize>,
    num_classes: usize,
}

impl Partition {
    /// Canonicalizes arbitrary labels: `x` and `y` share a class iff
    /// `labels[x] == labels[y]`.
    pub fn from_labels(labels: &[usize]) -> Partition {
        let mut seen: Vec<(usize, usize)> = Vec::new();
        let mut class_ids = Vec::with_capacity(labels.len());
        for &l in labels {
            let id = match seen.iter().find(|(label, _)| *label == l) {
                Some(&(_, id)) => id,
                None => {
                    seen.push((l, seen.len()));
                    seen.len() - 1
                }
            };
            class_ids.push(id);
        }
        Partition {
            class_ids,
            num_classes: seen.len(),
        }
    }

    /// The identity relation `0_A`.
    pub fn discrete(n: usize) -> Partition {
        Partition {
            class_ids: (0..n).collect(),
            num_classes: n,
        }
    }

    /// The total relation `1_A`.
    pub fn total(n: usize) -> Partition {
        Partition {
            class_ids: vec![0; n],
            num_classes: usize::from(n > 0),
        }
    }

    /// Equivalence closure of `pairs`.
    pub fn generated_by(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Partition> {
        let mut dsu = Dsu::new(n);
        for (x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::ElementOutOfRange {
                    element: x.max(y),
                    size: n,
                });
            }
            dsu.union(x, y);
        }
        Ok(dsu.into_partition())
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Partition> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                if x >= n {
                    return Err(Error::ElementOutOfRange { element: x, size: n });
                }
                if labels[x] != usize::MAX {
                    return Err(Error::Invalid(alloc::format!("element {x} listed twice")));
                }
                labels[x] = b;
            }
        }
        if let Some(missing) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::Invalid(alloc::format!("element {missing} is in no class")));
        }
        Ok(Partition::from_labels(&labels))
    }

    pub fn size(&self) -> usize {
        self.class_ids.len()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn class_ids(&self) -> &[usize] {
        &self.class_ids
    }

    #[inline]
    pub fn class_of(&self, x: usize) -> usize {
        self.class_ids[x]
    }

    #[inline]
    pub fn related(&self, x: usize, y: usize) -> bool {
        self.class_ids[x] == self.class_ids[y]
    }

    /// Classes as sorted element lists, ordered by least element.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.num_classes];
        for (x, &c) in self.class_ids.iter().enumerate() {
            classes[c].push(x);
        }
        classes
    }

    /// The least element of each class, in class-id order.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.num_classes];
        for (x, &c) in self.class_ids.iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = x;
            }
        }
        reps
    }

    pub fn is_discrete(&self) -> bool {
        self.num_classes == self.size()
    }

    pub fn is_total(&self) -> bool {
        self.num_classes <= 1
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Partition) -> bool {
        self.size() == other.size() && {
            let reps = self.representatives();
            self.class_ids
                .iter()
                .enumerate()
                .all(|(x, &c)| other.related(x, reps[c]))
        }
    }

    fn same_size(&self, other: &Partition) -> Result<()> {
        if self.size() == other.size() {
            Ok(())
        } else {
            Err(Error::SizeMismatch {
                left: self.size(),
                right: other.size(),
            })
        }
    }

    /// Transitive closure of the union.
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        self.same_size(other)?;
        let mut dsu = Dsu::new(self.size());
        for p in [self, other] {
            let reps = p.representatives();
            for (x, &c) in p.class_ids.iter().enumerate() {
                dsu.union(x, reps[c]);
            }
        }
        Ok(dsu.into_partition())
    }

    /// Common refinement.
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        self.same_size(other)?;
        let labels: Vec<usize> = self
            .class_ids
            .iter()
            .zip(&other.class_ids)
            .map(|(&a, &b)| a * other.num_classes + b)
            .collect();
        Ok(Partition::from_labels(&labels))
    }

    /// All related pairs `(x, y)`, including the diagonal, in lex order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.size();
        (0..n).flat_map(move |x| (0..n).filter(move |&y| self.related(x, y)).map(move |y| (x, y)))
    }
}

impl fmt::Display for Partition {
    /// `0 1 | 2`: classes by least element, elements ascending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, class) in self.classes().iter().enumerate() {
            if c > 0 {
                f.write_str(" | ")?;
            }
            for (i, x) in class.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses the `|`-separated form. The universe size is the number of
    /// listed elements, which must be exactly `0..n`.
    fn from_str(s: &str) -> Result<Partition> {
        let mut blocks = Vec::new();
        let mut total = 0;
        for chunk in s.split('|') {
            let block = chunk
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| Error::Invalid(alloc::format!("bad element `{tok}` in partition")))
                })
                .collect::<Result<Vec<_>>>()?;
            if block.is_empty() {
                return Err(Error::Invalid(String::from("empty class in partition")));
            }
            total += block.len();
            blocks.push(block);
        }
        Partition::from_blocks(total, &blocks)
    }
}
