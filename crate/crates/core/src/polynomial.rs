//! Unary polynomial operations, as the subuniverse of `A^A` generated by the
//! identity map and the constant maps.

use alloc::vec::Vec;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::subpower::{generate_subpower, GeneratedSet};
use crate::term::{Node, Term};

pub const DEFAULT_POLYNOMIAL_CAP: usize = 8;

/// `Pol_1 A`. Each map is a tuple `(p(0), .., p(n-1))`.
#[derive(Debug, Clone)]
pub struct UnaryPolynomials {
    set: GeneratedSet,
}

impl UnaryPolynomials {
    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn map(&self, i: usize) -> &[usize] {
        self.set.tuple(i)
    }

    pub fn maps(&self) -> impl Iterator<Item = &[usize]> {
        self.set.iter()
    }

    pub fn index_of(&self, map: &[usize]) -> Option<usize> {
        self.set.index_of(map)
    }

    pub fn generated(&self) -> &GeneratedSet {
        &self.set
    }

    /// A term in `x` with element literals realizing map `i`.
    pub fn witness(&self, alg: &FiniteAlgebra, i: usize) -> Term {
        self.set.term_for(alg, i, leaf)
    }
}

fn leaf(generator: usize) -> Node {
    match generator {
        0 => Node::Var(0),
        g => Node::Const(g - 1),
    }
}

pub fn unary_polynomials(alg: &FiniteAlgebra) -> Result<UnaryPolynomials> {
    unary_polynomials_capped(alg, DEFAULT_POLYNOMIAL_CAP)
}

pub fn unary_polynomials_capped(alg: &FiniteAlgebra, cap: usize) -> Result<UnaryPolynomials> {
    let n = alg.size();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "universe size for unary polynomials",
            value: n,
            cap,
        });
    }
    let mut gens: Vec<Vec<usize>> = Vec::with_capacity(n + 1);
    gens.push((0..n).collect());
    gens.extend((0..n).map(|c| alloc::vec![c; n]));
    Ok(UnaryPolynomials {
        set: generate_subpower(alg, n, &gens)?,
    })
}
