//! Congruences: generation, the congruence lattice and quotients.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::algebra::{FiniteAlgebra, OperationTable, Tuples};
use crate::error::{Error, Result};
use crate::partition::{Dsu, Partition};
use crate::relation::Relation;
use crate::subpower::generate_subpower;

/// Default bound on the universe size for [`congruence_lattice`].
pub const DEFAULT_LATTICE_CAP: usize = 10;

/// The least congruence containing all of `pairs`.
///
/// Works with a union-find over the universe and a queue of merged pairs:
/// each merged pair `(x, y)` is pushed through every basic translation
/// `f(c_1, .., x, .., c_r)`, which is enough because a congruence is an
/// equivalence closed under basic translations.
pub fn congruence_generated_by(
    alg: &FiniteAlgebra,
    pairs: impl IntoIterator<Item = (usize, usize)>,
) -> Result<Partition> {
    let n = alg.size();
    let mut dsu = Dsu::new(n);
    let mut queue = Vec::new();
    for (x, y) in pairs {
        alg.check_element(x)?;
        alg.check_element(y)?;
        if dsu.union(x, y) {
            queue.push((x, y));
        }
    }
    let tables: Vec<&OperationTable> = alg.operations().map(|(_, t)| t).collect();
    let mut head = 0;
    let mut args = Vec::new();
    while head < queue.len() {
        let (x, y) = queue[head];
        head += 1;
        for table in &tables {
            let r = table.arity();
            for pos in 0..r {
                let mut others = Tuples::new(n, r - 1);
                while let Some(rest) = others.next_tuple() {
                    args.clear();
                    args.extend_from_slice(&rest[..pos]);
                    args.push(x);
                    args.extend_from_slice(&rest[pos..]);
                    let u = table.apply(&args);
                    args[pos] = y;
                    let v = table.apply(&args);
                    if dsu.union(u, v) {
                        queue.push((u, v));
                    }
                }
            }
        }
    }
    Ok(dsu.into_partition())
}

/// `Cg(a, b)`.
pub fn principal_congruence(alg: &FiniteAlgebra, a: usize, b: usize) -> Result<Partition> {
    congruence_generated_by(alg, [(a, b)])
}

/// `Cg(a, b)` by alternating two closures until neither changes anything:
/// the subuniverse of `A^2` generated by the current relation, and its
/// equivalence closure. Slower than [`principal_congruence`], kept as an
/// independent second implementation.
pub fn principal_congruence_by_closure(alg: &FiniteAlgebra, a: usize, b: usize) -> Result<Partition> {
    alg.check_element(a)?;
    alg.check_element(b)?;
    let n = alg.size();
    let mut current = Partition::generated_by(n, [(a, b)])?;
    loop {
        let gens: Vec<Vec<usize>> = current.pairs().map(|(x, y)| vec![x, y]).collect();
        let closed = Relation::from_generated(&generate_subpower(alg, 2, &gens)?)?;
        let next = Partition::generated_by(n, closed.pairs())?;
        if next == current {
            return Ok(current);
        }
        current = next;
    }
}

/// Checks that `theta` is compatible with every operation; on failure the
/// error names the operation and two related argument tuples (differing in
/// one coordinate) with unrelated images.
pub fn check_congruence(alg: &FiniteAlgebra, theta: &Partition) -> Result<()> {
    let n = alg.size();
    if theta.size() != n {
        return Err(Error::SizeMismatch {
            left: n,
            right: theta.size(),
        });
    }
    let reps = theta.representatives();
    for (symbol, table) in alg.operations() {
        let r = table.arity();
        let mut tuples = Tuples::new(n, r);
        while let Some(args) = tuples.next_tuple() {
            let value = table.apply(args);
            for pos in 0..r {
                let rep = reps[theta.class_of(args[pos])];
                if rep == args[pos] {
                    continue;
                }
                let mut other = args.to_vec();
                other[pos] = rep;
                if !theta.related(value, table.apply(&other)) {
                    return Err(Error::NotCongruence {
                        symbol: symbol.to_string(),
                        left: other,
                        right: args.to_vec(),
                    });
                }
            }
        }
    }
    Ok(())
}

pub fn is_congruence(alg: &FiniteAlgebra, theta: &Partition) -> bool {
    check_congruence(alg, theta).is_ok()
}

/// `Con A` with its covering relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceLattice {
    elements: Vec<Partition>,
    covers: Vec<(usize, usize)>,
}

impl CongruenceLattice {
    /// Sorted by decreasing number of classes, so `0_A` comes first and
    /// `1_A` last.
    pub fn elements(&self) -> &[Partition] {
        &self.elements
    }

    /// Index pairs `(i, j)` with `elements[i] ≺ elements[j]`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.elements.iter().position(|q| q == p)
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.index_of(p).is_some()
    }

    pub fn is_cover(&self, lower: &Partition, upper: &Partition) -> bool {
        match (self.index_of(lower), self.index_of(upper)) {
            (Some(i), Some(j)) => self.covers.contains(&(i, j)),
            _ => false,
        }
    }

    pub fn is_chain(&self) -> bool {
        self.elements
            .iter()
            .all(|p| self.elements.iter().all(|q| p.refines(q) || q.refines(p)))
    }

    /// Members above `theta`.
    pub fn interval_above(&self, theta: &Partition) -> Vec<&Partition> {
        self.elements.iter().filter(|p| theta.refines(p)).collect()
    }
}

/// All congruences of `alg`: principal ones closed under joins.
pub fn congruence_lattice(alg: &FiniteAlgebra) -> Result<CongruenceLattice> {
    congruence_lattice_capped(alg, DEFAULT_LATTICE_CAP)
}

pub fn congruence_lattice_capped(alg: &FiniteAlgebra, cap: usize) -> Result<CongruenceLattice> {
    let n = alg.size();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "universe size for the congruence lattice",
            value: n,
            cap,
        });
    }
    let mut found: BTreeSet<Partition> = BTreeSet::new();
    found.insert(Partition::discrete(n));
    let mut principals = BTreeSet::new();
    for a in 0..n {
        for b in a + 1..n {
            principals.insert(principal_congruence(alg, a, b)?);
        }
    }
    let principals: Vec<Partition> = principals.into_iter().collect();
    let mut frontier: Vec<Partition> = principals.clone();
    found.extend(frontier.iter().cloned());
    // every congruence is a join of principal ones
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in &frontier {
            for q in &principals {
                let j = p.join(q)?;
                if found.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut elements: Vec<Partition> = found.into_iter().collect();
    elements.sort_by_key(|p| (Reverse(p.num_classes()), p.class_ids().to_vec()));
    let below = |i: usize, j: usize| i != j && elements[i].refines(&elements[j]);
    let m = elements.len();
    let mut covers = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if below(i, j) && !(0..m).any(|k| below(i, k) && below(k, j)) {
                covers.push((i, j));
            }
        }
    }
    Ok(CongruenceLattice { elements, covers })
}

/// `A/θ` with the class map `x ↦ [x]`. Classes are numbered by least element.
pub fn quotient_algebra(alg: &FiniteAlgebra, theta: &Partition) -> Result<(FiniteAlgebra, Vec<usize>)> {
    check_congruence(alg, theta)?;
    let m = theta.num_classes();
    let reps = theta.representatives();
    let mut q = FiniteAlgebra::new(alloc::format!("{}/theta", alg.name()), m)?;
    let mut args = Vec::new();
    for (symbol, table) in alg.operations() {
        let induced = OperationTable::from_fn(table.arity(), m, |classes| {
            args.clear();
            args.extend(classes.iter().map(|&c| reps[c]));
            theta.class_of(table.apply(&args))
        })?;
        q.add_operation(symbol, induced)?;
    }
    Ok((q, theta.class_ids().to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{example_b2, example_e3};

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn e3_principal_congruences() {
        let e3 = example_e3();
        assert_eq!(principal_congruence(&e3, 0, 1).unwrap(), p("0 1 | 2"));
        assert_eq!(principal_congruence(&e3, 0, 2).unwrap(), Partition::total(3));
        assert_eq!(principal_congruence(&e3, 1, 1).unwrap(), Partition::discrete(3));
        for (a, b) in [(0, 1), (0, 2), (2, 1)] {
            assert_eq!(
                principal_congruence_by_closure(&e3, a, b).unwrap(),
                principal_congruence(&e3, a, b).unwrap()
            );
        }
    }

    #[test]
    fn e3_lattice_is_a_three_chain() {
        let con = congruence_lattice(&example_e3()).unwrap();
        assert_eq!(
            con.elements(),
            &[Partition::discrete(3), p("0 1 | 2"), Partition::total(3)]
        );
        assert!(con.is_chain());
        assert!(con.is_cover(&Partition::discrete(3), &p("0 1 | 2")));
        assert_eq!(con.covers(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn small_lattices() {
        let one = FiniteAlgebra::new("one", 1).unwrap();
        assert_eq!(congruence_lattice(&one).unwrap().len(), 1);
        assert_eq!(congruence_lattice(&example_b2()).unwrap().len(), 2);
        let big = FiniteAlgebra::new("big", 11).unwrap();
        assert!(matches!(congruence_lattice(&big), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn quotients() {
        let e3 = example_e3();
        let (q, map) = quotient_algebra(&e3, &p("0 1 | 2")).unwrap();
        assert_eq!(map, vec![0, 0, 1]);
        assert_eq!(q.require("wedge").unwrap().entries(), &[0, 1, 1, 1]);
        assert_eq!(q.require("d").unwrap().entries(), &[0, 1, 1, 1, 1, 1, 1, 1]);
        let (same, _) = quotient_algebra(&e3, &Partition::discrete(3)).unwrap();
        assert_eq!(same.operation("d"), e3.operation("d"));
        assert_eq!(quotient_algebra(&e3, &Partition::total(3)).unwrap().0.size(), 1);
        assert!(matches!(
            quotient_algebra(&e3, &p("0 2 | 1")),
            Err(Error::NotCongruence { .. })
        ));
    }
}
