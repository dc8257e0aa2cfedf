//! The binary term-condition commutator.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::FiniteAlgebra;
use crate::congruence::{check_congruence, congruence_generated_by};
use crate::error::Result;
use crate::partition::Partition;
use crate::subpower::{generate_subpower, GeneratedSet};

/// `M(α, β) ⊆ A^4`, tuples laid out as `(m11, m12, m21, m22)`. Generated by
/// the matrices with rows `(a, a)`, `(b, b)` for `(a, b) ∈ α` and with both
/// rows `(c, d)` for `(c, d) ∈ β`.
pub fn matrix_set(alg: &FiniteAlgebra, alpha: &Partition, beta: &Partition) -> Result<GeneratedSet> {
    let mut gens: Vec<Vec<usize>> = alpha.pairs().map(|(a, b)| vec![a, a, b, b]).collect();
    gens.extend(beta.pairs().map(|(c, d)| vec![c, d, c, d]));
    generate_subpower(alg, 4, &gens)
}

/// `[α, β]`: the least congruence δ such that every matrix in `M(α, β)`
/// with `m11 δ m12` also has `m21 δ m22`.
pub fn commutator(alg: &FiniteAlgebra, alpha: &Partition, beta: &Partition) -> Result<Partition> {
    check_congruence(alg, alpha)?;
    check_congruence(alg, beta)?;
    let m = matrix_set(alg, alpha, beta)?;
    let mut delta = Partition::discrete(alg.size());
    loop {
        let forced = m
            .iter()
            .filter(|t| delta.related(t[0], t[1]))
            .map(|t| (t[2], t[3]))
            .filter(|&(x, y)| !delta.related(x, y));
        let forced: Vec<(usize, usize)> = forced.collect();
        if forced.is_empty() {
            return Ok(delta);
        }
        delta = congruence_generated_by(alg, delta.pairs().chain(forced))?;
    }
}

/// `[α, α] = 0`.
pub fn is_abelian(alg: &FiniteAlgebra, alpha: &Partition) -> Result<bool> {
    Ok(commutator(alg, alpha, alpha)?.is_discrete())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{example_e3, example_s2};

    #[test]
    fn e3_block_is_abelian() {
        let e3 = example_e3();
        let sim: Partition = "0 1 | 2".parse().unwrap();
        assert_eq!(commutator(&e3, &sim, &sim).unwrap(), Partition::discrete(3));
        assert!(is_abelian(&e3, &sim).unwrap());
        let one = Partition::total(3);
        assert_eq!(commutator(&e3, &Partition::discrete(3), &one).unwrap(), Partition::discrete(3));
    }

    #[test]
    fn semilattice_is_not_abelian() {
        let s2 = example_s2();
        let one = Partition::total(2);
        assert_eq!(commutator(&s2, &one, &one).unwrap(), one);
        assert!(!is_abelian(&s2, &one).unwrap());
    }

    #[test]
    fn rejects_non_congruences() {
        let e3 = example_e3();
        let bad: Partition = "0 2 | 1".parse().unwrap();
        assert!(commutator(&e3, &bad, &Partition::total(3)).is_err());
    }
}
