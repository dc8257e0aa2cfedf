//! Recognition of semilattices of Mal'cev blocks.
//!
//! Throughout, the binary operation is the symbol [`WEDGE`] and the ternary
//! one is [`MALCEV`].

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{FiniteAlgebra, OperationTable};
use crate::congruence::{check_congruence, congruence_lattice};
use crate::error::{Error, Result};
use crate::partition::Partition;

pub const WEDGE: &str = "wedge";
pub const MALCEV: &str = "d";

/// One failed condition with the least witness tuple found for it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Violation {
    pub rule: &'static str,
    pub witness: Vec<usize>,
}

/// A partial order on the classes of a partition. Class `i` is the class
/// with id `i` in the partition, so classes are ordered by least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassOrder {
    classes: Vec<Vec<usize>>,
    leq: Vec<bool>,
}

impl ClassOrder {
    pub fn new(classes: Vec<Vec<usize>>, leq: impl Fn(usize, usize) -> bool) -> ClassOrder {
        let m = classes.len();
        let leq = (0..m * m).map(|i| leq(i / m, i % m)).collect();
        ClassOrder { classes, leq }
    }

    /// The order of a semilattice given by its meet table on class ids.
    pub fn from_meet(classes: Vec<Vec<usize>>, meet: impl Fn(usize, usize) -> usize) -> ClassOrder {
        ClassOrder::new(classes, |i, j| meet(i, j) == i)
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.classes.len() + j]
    }

    pub fn less(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn is_partial_order(&self) -> bool {
        let m = self.num_classes();
        (0..m).all(|i| self.leq(i, i))
            && (0..m).all(|i| (0..m).all(|j| i == j || !(self.leq(i, j) && self.leq(j, i))))
            && (0..m).all(|i| {
                (0..m).all(|j| (0..m).all(|k| !(self.leq(i, j) && self.leq(j, k)) || self.leq(i, k)))
            })
    }

    pub fn least(&self) -> Option<usize> {
        let m = self.num_classes();
        (0..m).find(|&i| (0..m).all(|j| self.leq(i, j)))
    }

    pub fn greatest(&self) -> Option<usize> {
        let m = self.num_classes();
        (0..m).find(|&i| (0..m).all(|j| self.leq(j, i)))
    }

    /// Greatest lower bound of two classes, if it exists.
    pub fn glb(&self, i: usize, j: usize) -> Option<usize> {
        let m = self.num_classes();
        let lower: Vec<usize> = (0..m).filter(|&k| self.leq(k, i) && self.leq(k, j)).collect();
        lower
            .iter()
            .copied()
            .find(|&k| lower.iter().all(|&l| self.leq(l, k)))
    }

    pub fn has_all_glbs(&self) -> bool {
        let m = self.num_classes();
        (0..m).all(|i| (0..m).all(|j| self.glb(i, j).is_some()))
    }

    /// `i ≺ j`: `i < j` with nothing strictly between.
    pub fn covers(&self, i: usize, j: usize) -> bool {
        self.less(i, j) && !(0..self.num_classes()).any(|k| self.less(i, k) && self.less(k, j))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmbReport {
    pub holds: bool,
    pub sim: Partition,
    pub violations: Vec<Violation>,
    /// The quotient semilattice order, present when `holds`.
    pub class_order: Option<ClassOrder>,
}

/// The two designated operations.
pub fn smb_operations(alg: &FiniteAlgebra) -> Result<(&OperationTable, &OperationTable)> {
    Ok((alg.require_arity(WEDGE, 2)?, alg.require_arity(MALCEV, 3)?))
}

fn first_failure(n: usize, arity: usize, mut ok: impl FnMut(&[usize]) -> bool) -> Option<Vec<usize>> {
    let mut tuples = crate::algebra::Tuples::new(n, arity);
    while let Some(t) = tuples.next_tuple() {
        if !ok(t) {
            return Some(t.to_vec());
        }
    }
    None
}

/// Is `alg` a semilattice of Mal'cev blocks over `sim`?
///
/// Rules, in report order: `congruence` (witness: two argument tuples of the
/// first incompatible operation, concatenated), `Idem-mod-sim`,
/// `Comm-mod-sim`, `Assoc-mod-sim` (the quotient by `sim` is a semilattice
/// under `wedge`), `second-projection` (`x∧y = y` for `x ∼ y`) and `malcev`
/// (`d(x,y,y) = x = d(y,y,x)` for `x ∼ y`).
pub fn check_smb_over(alg: &FiniteAlgebra, sim: &Partition) -> Result<SmbReport> {
    let (wedge, d) = smb_operations(alg)?;
    let n = alg.size();
    if sim.size() != n {
        return Err(Error::SizeMismatch {
            left: n,
            right: sim.size(),
        });
    }
    let mut violations = Vec::new();
    let mut push = |rule, witness: Option<Vec<usize>>| {
        if let Some(witness) = witness {
            violations.push(Violation { rule, witness });
        }
    };
    match check_congruence(alg, sim) {
        Ok(()) => {}
        Err(Error::NotCongruence { left, right, .. }) => {
            push("congruence", Some(left.into_iter().chain(right).collect()))
        }
        Err(e) => return Err(e),
    }
    let m = |x, y| wedge.at2(x, y);
    let rel = |x, y| sim.related(x, y);
    push("Idem-mod-sim", first_failure(n, 1, |t| rel(m(t[0], t[0]), t[0])));
    push("Comm-mod-sim", first_failure(n, 2, |t| rel(m(t[0], t[1]), m(t[1], t[0]))));
    push(
        "Assoc-mod-sim",
        first_failure(n, 3, |t| rel(m(m(t[0], t[1]), t[2]), m(t[0], m(t[1], t[2])))),
    );
    push(
        "second-projection",
        first_failure(n, 2, |t| !rel(t[0], t[1]) || m(t[0], t[1]) == t[1]),
    );
    push(
        "malcev",
        first_failure(n, 2, |t| {
            let (x, y) = (t[0], t[1]);
            !rel(x, y) || (d.at3(x, y, y) == x && d.at3(y, y, x) == x)
        }),
    );
    let holds = violations.is_empty();
    let class_order = holds.then(|| {
        let reps = sim.representatives();
        ClassOrder::from_meet(sim.classes(), |i, j| sim.class_of(m(reps[i], reps[j])))
    });
    Ok(SmbReport {
        holds,
        sim: sim.clone(),
        violations,
        class_order,
    })
}

/// Every congruence over which `alg` is SMB, in lattice order.
pub fn find_smb_congruences(alg: &FiniteAlgebra) -> Result<Vec<Partition>> {
    smb_operations(alg)?;
    let con = congruence_lattice(alg)?;
    let mut found = Vec::new();
    for theta in con.elements() {
        if check_smb_over(alg, theta)?.holds {
            found.push(theta.clone());
        }
    }
    Ok(found)
}

/// `x ∼ y` iff `x∧y = y` and `y∧x = x`. Only an equivalence in algebras
/// satisfying the regular base; `None` otherwise.
pub fn sim_from_wedge(alg: &FiniteAlgebra) -> Result<Option<Partition>> {
    let wedge = alg.require_arity(WEDGE, 2)?;
    let n = alg.size();
    let related = |x: usize, y: usize| wedge.at2(x, y) == y && wedge.at2(y, x) == x;
    let mut labels = vec![usize::MAX; n];
    for x in 0..n {
        if labels[x] == usize::MAX {
            labels[x] = x;
        }
        for y in x + 1..n {
            if related(x, y) {
                if labels[y] != usize::MAX && labels[y] != labels[x] {
                    return Ok(None);
                }
                labels[y] = labels[x];
            }
        }
    }
    let p = Partition::from_labels(&labels);
    let consistent = (0..n).all(|x| (0..n).all(|y| related(x, y) == p.related(x, y)));
    Ok(consistent.then_some(p))
}

/// A short human-readable summary of the violations.
pub fn describe_violations(violations: &[Violation]) -> String {
    let mut out = String::new();
    for (i, v) in violations.iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        out.push_str(&alloc::format!("{} at {:?}", v.rule, v.witness));
    }
    out
}
