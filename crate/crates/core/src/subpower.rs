//! Subuniverses of finite powers `A^k`, generated breadth-first with a
//! derivation trace per element.
//!
//! Elements are numbered in discovery order: generators first (in the order
//! given, duplicates dropped), then every element produced while processing
//! element `i`: for each operation in declaration order, all argument tuples
//! whose largest element index is `i`. Each combination of arguments is thus
//! tried exactly once, which keeps the closure at `O(N^r)` applications for
//! an r-ary operation and a result of size `N`.

use alloc::vec;
use alloc::vec::Vec;
use hashbrown::HashMap;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::term::{Node, Term, TermBuilder};

const DENSE_LIMIT: usize = 1 << 20;

/// How an element of a [`GeneratedSet`] was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Derivation {
    /// The generator at this position of the list passed in (first
    /// occurrence when a tuple is listed twice).
    Generator(usize),
    /// Operation number `op` of the algebra applied coordinatewise to the
    /// elements with indices `args`.
    Apply { op: usize, args: Vec<usize> },
}

#[derive(Debug, Clone)]
enum TupleIndex {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

impl TupleIndex {
    fn new(n: usize, k: usize) -> Result<TupleIndex> {
        let space = u32::try_from(k).ok().and_then(|k| (n as u64).checked_pow(k));
        match space {
            Some(s) if s <= DENSE_LIMIT as u64 => Ok(TupleIndex::Dense(vec![u32::MAX; s as usize])),
            Some(_) => Ok(TupleIndex::Sparse(HashMap::new())),
            None => Err(Error::CapExceeded {
                what: "tuple code space",
                value: usize::MAX,
                cap: u64::MAX as usize,
            }),
        }
    }

    fn get(&self, code: u64) -> Option<usize> {
        match self {
            TupleIndex::Dense(v) => match v[code as usize] {
                u32::MAX => None,
                i => Some(i as usize),
            },
            TupleIndex::Sparse(m) => m.get(&code).map(|&i| i as usize),
        }
    }

    fn insert(&mut self, code: u64, index: usize) {
        match self {
            TupleIndex::Dense(v) => v[code as usize] = index as u32,
            TupleIndex::Sparse(m) => {
                m.insert(code, index as u32);
            }
        }
    }
}

/// A subuniverse of `A^k` with derivations.
#[derive(Debug, Clone)]
pub struct GeneratedSet {
    power: usize,
    base: usize,
    data: Vec<usize>,
    trace: Vec<Derivation>,
    index: TupleIndex,
}

impl GeneratedSet {
    pub fn power(&self) -> usize {
        self.power
    }

    /// Size of the underlying algebra.
    pub fn base(&self) -> usize {
        self.base
    }

    pub fn len(&self) -> usize {
        self.trace.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trace.is_empty()
    }

    pub fn tuple(&self, i: usize) -> &[usize] {
        &self.data[i * self.power..(i + 1) * self.power]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.data.chunks_exact(self.power)
    }

    pub fn derivation(&self, i: usize) -> &Derivation {
        &self.trace[i]
    }

    pub fn num_generators(&self) -> usize {
        self.trace
            .iter()
            .filter(|d| matches!(d, Derivation::Generator(_)))
            .count()
    }

    fn code(&self, tuple: &[usize]) -> Option<u64> {
        if tuple.len() != self.power || tuple.iter().any(|&x| x >= self.base) {
            return None;
        }
        Some(tuple.iter().fold(0u64, |acc, &x| acc * self.base as u64 + x as u64))
    }

    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        self.code(tuple).and_then(|c| self.index.get(c))
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.index_of(tuple).is_some()
    }

    /// Indices reachable from `i` through the trace, ascending. Arguments are
    /// always discovered before the element they produce.
    fn support(&self, i: usize) -> Vec<usize> {
        let mut marked = vec![false; i + 1];
        marked[i] = true;
        for j in (0..=i).rev() {
            if marked[j] {
                if let Derivation::Apply { args, .. } = &self.trace[j] {
                    for &a in args {
                        marked[a] = true;
                    }
                }
            }
        }
        (0..=i).filter(|&j| marked[j]).collect()
    }

    /// The term (with shared subterms) whose coordinatewise evaluation yields
    /// element `i`; `leaf` chooses the node standing for each generator.
    pub fn term_for(&self, alg: &FiniteAlgebra, i: usize, mut leaf: impl FnMut(usize) -> Node) -> Term {
        let support = self.support(i);
        let mut builder = TermBuilder::new();
        let mut node_of = vec![usize::MAX; i + 1];
        for &j in &support {
            let node = match &self.trace[j] {
                Derivation::Generator(g) => leaf(*g),
                Derivation::Apply { op, args } => Node::Apply {
                    symbol: alg.operation_at(*op).0.into(),
                    args: args.iter().map(|&a| node_of[a]).collect(),
                },
            };
            node_of[j] = builder.push(node);
        }
        builder.build(node_of[i])
    }

    /// Recomputes element `i` from the generators by replaying its trace.
    pub fn replay(&self, alg: &FiniteAlgebra, i: usize) -> Vec<usize> {
        let k = self.power;
        let support = self.support(i);
        let mut values: Vec<Option<Vec<usize>>> = vec![None; i + 1];
        for &j in &support {
            let v = match &self.trace[j] {
                Derivation::Generator(_) => self.tuple(j).to_vec(),
                Derivation::Apply { op, args } => {
                    let table = alg.operation_at(*op).1;
                    let mut buf = vec![0; args.len()];
                    (0..k)
                        .map(|c| {
                            for (slot, &a) in buf.iter_mut().zip(args) {
                                *slot = values[a].as_ref().expect("support is closed")[c];
                            }
                            table.apply(&buf)
                        })
                        .collect()
                }
            };
            values[j] = Some(v);
        }
        values[i].take().expect("element is in its own support")
    }
}

/// The subuniverse of `alg^k` generated by `generators`.
pub fn generate_subpower(alg: &FiniteAlgebra, k: usize, generators: &[Vec<usize>]) -> Result<GeneratedSet> {
    generate_subpower_capped(alg, k, generators, usize::MAX)
}

/// As [`generate_subpower`], failing once more than `cap` elements appear.
pub fn generate_subpower_capped(
    alg: &FiniteAlgebra,
    k: usize,
    generators: &[Vec<usize>],
    cap: usize,
) -> Result<GeneratedSet> {
    if k == 0 {
        return Err(Error::Invalid("subpower exponent must be at least 1".into()));
    }
    if generators.is_empty() {
        return Err(Error::Invalid("at least one generator is required".into()));
    }
    let n = alg.size();
    let mut set = GeneratedSet {
        power: k,
        base: n,
        data: Vec::new(),
        trace: Vec::new(),
        index: TupleIndex::new(n, k)?,
    };
    for (gen_pos, g) in generators.iter().enumerate() {
        if g.len() != k {
            return Err(Error::Invalid(alloc::format!(
                "generator {g:?} has length {}, expected {k}",
                g.len()
            )));
        }
        for &x in g {
            alg.check_element(x)?;
        }
        let code = set.code(g).expect("validated above");
        if set.index.get(code).is_none() {
            set.index.insert(code, set.trace.len());
            set.data.extend_from_slice(g);
            set.trace.push(Derivation::Generator(gen_pos));
        }
    }
    if set.len() > cap {
        return Err(Error::CapExceeded {
            what: "generated set size",
            value: set.len(),
            cap,
        });
    }

    let ops: Vec<_> = alg.operations().map(|(_, t)| t).collect();
    let mut choice = Vec::new();
    let mut bases = Vec::new();
    let mut args = Vec::new();
    let mut result = vec![0; k];
    let mut i = 0;
    while i < set.len() {
        for (op_index, table) in ops.iter().enumerate() {
            let r = table.arity();
            args.resize(r, 0);
            // position of the first occurrence of element i
            for first in 0..r {
                bases.clear();
                bases.extend((0..r).map(|j| match j.cmp(&first) {
                    core::cmp::Ordering::Less => i,
                    core::cmp::Ordering::Equal => 1,
                    core::cmp::Ordering::Greater => i + 1,
                }));
                if bases.contains(&0) {
                    continue;
                }
                choice.clear();
                choice.resize(r, 0);
                choice[first] = i;
                loop {
                    for c in 0..k {
                        for (slot, &e) in args.iter_mut().zip(&choice) {
                            *slot = set.data[e * k + c];
                        }
                        result[c] = table.apply(&args);
                    }
                    let code = result.iter().fold(0u64, |acc, &x| acc * n as u64 + x as u64);
                    if set.index.get(code).is_none() {
                        let new_index = set.len();
                        if new_index >= cap {
                            return Err(Error::CapExceeded {
                                what: "generated set size",
                                value: new_index + 1,
                                cap,
                            });
                        }
                        set.index.insert(code, new_index);
                        set.data.extend_from_slice(&result);
                        set.trace.push(Derivation::Apply {
                            op: op_index,
                            args: choice.clone(),
                        });
                    }
                    if !advance(&mut choice, &bases, first) {
                        break;
                    }
                }
            }
        }
        i += 1;
    }
    Ok(set)
}

/// Odometer step over every coordinate except `pinned`; false once it wraps.
fn advance(digits: &mut [usize], bases: &[usize], pinned: usize) -> bool {
    for pos in (0..digits.len()).rev() {
        if pos == pinned {
            continue;
        }
        digits[pos] += 1;
        if digits[pos] < bases[pos] {
            return true;
        }
        digits[pos] = 0;
    }
    false
}
