//! Congruence criteria for regular SMB algebras, each evaluated as a
//! biconditional: both sides are computed separately and a disagreement is
//! reported as [`Error::Falsified`].

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::algebra::{FiniteAlgebra, OperationTable};
use crate::commutator::commutator;
use crate::congruence::{principal_congruence, quotient_algebra};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::regular::check_regular_base;
use crate::smb::WEDGE;

/// Principal congruences of an algebra and of its quotient by `∼`, computed
/// once for sweeps over many tuples.
#[derive(Debug, Clone)]
pub struct RegularContext {
    n: usize,
    sim: Partition,
    wedge: OperationTable,
    class_ids: Vec<usize>,
    cg: Vec<Partition>,
    quotient_cg: Vec<Partition>,
    m: usize,
    commutators: BTreeMap<(usize, usize), Partition>,
    alg: FiniteAlgebra,
}

impl RegularContext {
    /// Requires the regular base; `∼` is recovered from `wedge`.
    pub fn new(alg: &FiniteAlgebra) -> Result<RegularContext> {
        let base = check_regular_base(alg)?;
        let sim = base
            .recovered_sim
            .ok_or_else(|| Error::HypothesesNotEstablished("the regular base fails".into()))?;
        let n = alg.size();
        let (quotient, class_ids) = quotient_algebra(alg, &sim)?;
        let m = quotient.size();
        let cg = (0..n * n)
            .map(|i| principal_congruence(alg, i / n, i % n))
            .collect::<Result<Vec<_>>>()?;
        let quotient_cg = (0..m * m)
            .map(|i| principal_congruence(&quotient, i / m, i % m))
            .collect::<Result<Vec<_>>>()?;
        Ok(RegularContext {
            n,
            wedge: alg.require_arity(WEDGE, 2)?.clone(),
            sim,
            class_ids,
            cg,
            quotient_cg,
            m,
            commutators: BTreeMap::new(),
            alg: alg.clone(),
        })
    }

    pub fn sim(&self) -> &Partition {
        &self.sim
    }

    pub fn cg(&self, a: usize, b: usize) -> &Partition {
        &self.cg[a * self.n + b]
    }

    fn quotient_cg(&self, a: usize, b: usize) -> &Partition {
        let (ca, cb) = (self.class_ids[a], self.class_ids[b]);
        &self.quotient_cg[ca * self.m + cb]
    }

    fn check(&self, xs: &[usize]) -> Result<()> {
        for &x in xs {
            self.alg.check_element(x)?;
        }
        Ok(())
    }

    /// `(c,d) ∈ Cg(a,b) ∨ ∼` iff `(c, d∧c), (d, c∧d) ∈ Cg(a,b)`.
    pub fn cgvsim(&self, a: usize, b: usize, c: usize, d: usize) -> Result<bool> {
        self.check(&[a, b, c, d])?;
        let cg = self.cg(a, b);
        let left = cg.join(&self.sim)?.related(c, d);
        let right = cg.related(c, self.wedge.at2(d, c)) && cg.related(d, self.wedge.at2(c, d));
        agree("join membership", left, right, [a, b, c, d])
    }

    fn quotient_meet_trivial(&self, a: usize, b: usize, c: usize, d: usize) -> Result<bool> {
        Ok(self.quotient_cg(a, b).meet(self.quotient_cg(c, d))?.is_discrete())
    }

    /// `Cg(a,b) ∩ Cg(c,d) ⊆ ∼` iff the quotient principal congruences meet
    /// to the identity.
    pub fn undersim(&self, a: usize, b: usize, c: usize, d: usize) -> Result<bool> {
        self.check(&[a, b, c, d])?;
        let left = self.cg(a, b).meet(self.cg(c, d))?.refines(&self.sim);
        let right = self.quotient_meet_trivial(a, b, c, d)?;
        agree("meet below sim", left, right, [a, b, c, d])
    }

    /// `[Cg(a,b), Cg(c,d)] ⊆ ∼` iff the quotient principal congruences meet
    /// to the identity.
    pub fn commutator_below_sim(&mut self, a: usize, b: usize, c: usize, d: usize) -> Result<bool> {
        self.check(&[a, b, c, d])?;
        let key = (a * self.n + b, c * self.n + d);
        let comm = match self.commutators.get(&key) {
            Some(p) => p.clone(),
            None => {
                let p = commutator(&self.alg, self.cg(a, b), self.cg(c, d))?;
                self.commutators.insert(key, p.clone());
                p
            }
        };
        let left = comm.refines(&self.sim);
        let right = self.quotient_meet_trivial(a, b, c, d)?;
        agree("commutator below sim", left, right, [a, b, c, d])
    }
}

fn agree(what: &str, left: bool, right: bool, at: [usize; 4]) -> Result<bool> {
    if left == right {
        Ok(left)
    } else {
        Err(Error::Falsified(format!(
            "{what} at {at:?}: the algebra side says {left}, the quotient side says {right}"
        )))
    }
}

pub fn check_cgvsim(alg: &FiniteAlgebra, a: usize, b: usize, c: usize, d: usize) -> Result<bool> {
    RegularContext::new(alg)?.cgvsim(a, b, c, d)
}

pub fn check_undersim(alg: &FiniteAlgebra, a: usize, b: usize, c: usize, d: usize) -> Result<bool> {
    RegularContext::new(alg)?.undersim(a, b, c, d)
}

pub fn commutator_below_sim(alg: &FiniteAlgebra, a: usize, b: usize, c: usize, d: usize) -> Result<bool> {
    RegularContext::new(alg)?.commutator_below_sim(a, b, c, d)
}

/// Counts of tuples in `A⁴` on which each criterion holds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SweepCounts {
    pub tuples: usize,
    pub cgvsim: usize,
    pub undersim: usize,
    pub commutator: usize,
}

/// Runs all three criteria over every `(a,b,c,d)`. The first disagreement
/// is returned as an error.
pub fn sweep_criteria(alg: &FiniteAlgebra) -> Result<SweepCounts> {
    let mut ctx = RegularContext::new(alg)?;
    let n = alg.size();
    let mut counts = SweepCounts::default();
    let mut tuples = crate::algebra::Tuples::new(n, 4);
    while let Some(t) = tuples.next_tuple() {
        let [a, b, c, d] = [t[0], t[1], t[2], t[3]];
        counts.tuples += 1;
        counts.cgvsim += ctx.cgvsim(a, b, c, d)? as usize;
        counts.undersim += ctx.undersim(a, b, c, d)? as usize;
        counts.commutator += ctx.commutator_below_sim(a, b, c, d)? as usize;
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{example_b2, example_e3, example_n4};

    #[test]
    fn e3_examples() {
        let e3 = example_e3();
        assert!(check_cgvsim(&e3, 0, 1, 1, 0).unwrap());
        assert!(check_cgvsim(&e3, 0, 1, 2, 2).unwrap());
        assert!(!check_cgvsim(&e3, 0, 0, 0, 2).unwrap());
        assert!(check_undersim(&e3, 0, 1, 0, 1).unwrap());
        assert!(check_undersim(&e3, 0, 0, 1, 2).unwrap());
        assert!(!check_undersim(&e3, 0, 2, 0, 2).unwrap());
        assert!(commutator_below_sim(&e3, 0, 1, 0, 1).unwrap());
        assert!(commutator_below_sim(&e3, 1, 1, 0, 2).unwrap());
        assert!(!commutator_below_sim(&e3, 0, 2, 0, 2).unwrap());
    }

    #[test]
    fn sweeps_agree() {
        let counts = sweep_criteria(&example_e3()).unwrap();
        assert_eq!(counts.tuples, 81);
        let counts = sweep_criteria(&example_b2()).unwrap();
        assert_eq!(counts.undersim, 16);
    }

    #[test]
    fn non_regular_is_rejected() {
        assert!(matches!(
            RegularContext::new(&example_n4()),
            Err(Error::HypothesesNotEstablished(_))
        ));
    }
}
