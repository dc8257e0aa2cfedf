//! Exhaustive classification of single operations.

use alloc::vec;

use crate::algebra::{FiniteAlgebra, OperationTable};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct OpFlags {
    pub idempotent: bool,
    /// Weak near-unanimity: idempotent, arity >= 2, and all one-dissident
    /// patterns `w(y,x,..,x) = w(x,y,..,x) = .. = w(x,..,x,y)` agree.
    pub wnu: bool,
    /// wnu and `x∘(x∘y) = x∘y` for `x∘y = w(x,..,x,y)`.
    pub special_wnu: bool,
    /// Ternary with `d(x,y,y) = x = d(y,y,x)`.
    pub malcev: bool,
    /// Binary with `f(x,y) = y`.
    pub second_projection: bool,
}

pub fn classify_operation(alg: &FiniteAlgebra, symbol: &str) -> Result<OpFlags> {
    Ok(classify_table(alg.require(symbol)?))
}

pub fn classify_table(table: &OperationTable) -> OpFlags {
    let idempotent = table.is_idempotent();
    let wnu = idempotent && is_weak_near_unanimity(table);
    OpFlags {
        idempotent,
        wnu,
        special_wnu: wnu && circ_is_special(table),
        malcev: is_malcev(table),
        second_projection: is_second_projection(table),
    }
}

/// `w(x,..,x, y, x,..,x)` with the dissident `y` at position `pos`.
pub fn one_dissident(table: &OperationTable, x: usize, y: usize, pos: usize) -> usize {
    let mut args = vec![x; table.arity()];
    args[pos] = y;
    table.apply(&args)
}

fn is_weak_near_unanimity(table: &OperationTable) -> bool {
    let n = table.size();
    let k = table.arity();
    if k < 2 {
        return false;
    }
    (0..n).all(|x| {
        (0..n).all(|y| {
            let first = one_dissident(table, x, y, 0);
            (1..k).all(|pos| one_dissident(table, x, y, pos) == first)
        })
    })
}

fn circ_is_special(table: &OperationTable) -> bool {
    let n = table.size();
    let k = table.arity();
    let circ = |x, y| one_dissident(table, x, y, k - 1);
    (0..n).all(|x| (0..n).all(|y| circ(x, circ(x, y)) == circ(x, y)))
}

pub fn is_malcev(table: &OperationTable) -> bool {
    table.arity() == 3 && {
        let n = table.size();
        (0..n).all(|x| (0..n).all(|y| table.at3(x, y, y) == x && table.at3(y, y, x) == x))
    }
}

pub fn is_second_projection(table: &OperationTable) -> bool {
    table.arity() == 2 && {
        let n = table.size();
        (0..n).all(|x| (0..n).all(|y| table.at2(x, y) == y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{example_b2, example_e3, example_n4};
    use crate::error::Error;

    #[test]
    fn e3_d_is_special_wnu_but_not_malcev() {
        let flags = classify_operation(&example_e3(), "d").unwrap();
        assert!(flags.idempotent && flags.wnu && flags.special_wnu);
        assert!(!flags.malcev && !flags.second_projection);
    }

    #[test]
    fn b2_operations() {
        let b2 = example_b2();
        assert!(classify_operation(&b2, "d").unwrap().malcev);
        let wedge = classify_operation(&b2, "wedge").unwrap();
        assert!(wedge.second_projection && !wedge.wnu);
    }

    #[test]
    fn n4_meet_is_not_wnu() {
        let flags = classify_operation(&example_n4(), "wedge").unwrap();
        assert!(flags.idempotent && !flags.wnu);
    }

    #[test]
    fn unknown_symbol() {
        assert_eq!(
            classify_operation(&example_e3(), "q"),
            Err(Error::UnknownSymbol("q".into()))
        );
    }
}
