//! Identities and quasi-identities, checked exhaustively over a finite algebra.

use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{FiniteAlgebra, Tuples};
use crate::error::Result;
use crate::term::{CompiledTerm, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity { lhs, rhs }
    }

    pub fn var_count(&self) -> usize {
        self.lhs.var_count().max(self.rhs.var_count())
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// `premises => conclusion`, universally quantified over all variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quasiidentity {
    pub premises: Vec<Identity>,
    pub conclusion: Identity,
}

impl Quasiidentity {
    pub fn new(premises: Vec<Identity>, conclusion: Identity) -> Self {
        Quasiidentity {
            premises,
            conclusion,
        }
    }

    pub fn var_count(&self) -> usize {
        self.premises
            .iter()
            .map(Identity::var_count)
            .fold(self.conclusion.var_count(), usize::max)
    }
}

impl fmt::Display for Quasiidentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{p}")?;
        }
        if !self.premises.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "-> {}", self.conclusion)
    }
}

/// Outcome of an exhaustive check. A counterexample is always the
/// lexicographically least failing assignment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails(Vec<usize>),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&[usize]> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }
}

struct CompiledIdentity<'a> {
    lhs: CompiledTerm<'a>,
    rhs: CompiledTerm<'a>,
}

impl<'a> CompiledIdentity<'a> {
    fn new(alg: &'a FiniteAlgebra, id: &Identity) -> Result<Self> {
        Ok(CompiledIdentity {
            lhs: id.lhs.compile(alg)?,
            rhs: id.rhs.compile(alg)?,
        })
    }

    fn satisfied(&self, assignment: &[usize], values: &mut Vec<usize>, args: &mut Vec<usize>) -> bool {
        let l = self.lhs.eval_with(assignment, values, args);
        let r = self.rhs.eval_with(assignment, values, args);
        l == r
    }
}

pub fn check_identity(alg: &FiniteAlgebra, id: &Identity) -> Result<Verdict> {
    let compiled = CompiledIdentity::new(alg, id)?;
    let (mut values, mut args) = (Vec::new(), Vec::new());
    let mut tuples = Tuples::new(alg.size(), id.var_count());
    while let Some(assignment) = tuples.next_tuple() {
        if !compiled.satisfied(assignment, &mut values, &mut args) {
            return Ok(Verdict::Fails(assignment.to_vec()));
        }
    }
    Ok(Verdict::Holds)
}

/// All of `ids` at once; a counterexample is the least assignment (over the
/// joint variable count) failing any of them.
pub fn check_identities(alg: &FiniteAlgebra, ids: &[Identity]) -> Result<Verdict> {
    let compiled = ids
        .iter()
        .map(|id| CompiledIdentity::new(alg, id))
        .collect::<Result<Vec<_>>>()?;
    let vars = ids.iter().map(Identity::var_count).max().unwrap_or(0);
    let (mut values, mut args) = (Vec::new(), Vec::new());
    let mut tuples = Tuples::new(alg.size(), vars);
    while let Some(assignment) = tuples.next_tuple() {
        if !compiled
            .iter()
            .all(|c| c.satisfied(assignment, &mut values, &mut args))
        {
            return Ok(Verdict::Fails(assignment.to_vec()));
        }
    }
    Ok(Verdict::Holds)
}

pub fn check_quasiidentity(alg: &FiniteAlgebra, q: &Quasiidentity) -> Result<Verdict> {
    let premises = q
        .premises
        .iter()
        .map(|p| CompiledIdentity::new(alg, p))
        .collect::<Result<Vec<_>>>()?;
    let conclusion = CompiledIdentity::new(alg, &q.conclusion)?;
    let (mut values, mut args) = (Vec::new(), Vec::new());
    let mut tuples = Tuples::new(alg.size(), q.var_count());
    while let Some(assignment) = tuples.next_tuple() {
        if premises
            .iter()
            .all(|p| p.satisfied(assignment, &mut values, &mut args))
            && !conclusion.satisfied(assignment, &mut values, &mut args)
        {
            return Ok(Verdict::Fails(assignment.to_vec()));
        }
    }
    Ok(Verdict::Holds)
}
