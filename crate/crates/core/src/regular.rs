//! Regular SMB algebras: the four defining conditions, the twelve-identity
//! base, and the derived Taylor term.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{FiniteAlgebra, Tuples};
use crate::error::{Error, Result};
use crate::identity::{check_identities, check_identity, Identity, Verdict};
use crate::partition::Partition;
use crate::smb::{check_smb_over, describe_violations, sim_from_wedge, smb_operations, MALCEV, WEDGE};
use crate::term::{materialize_term, Term};

fn x() -> Term {
    Term::var(0)
}
fn y() -> Term {
    Term::var(1)
}
fn z() -> Term {
    Term::var(2)
}
fn w(a: Term, b: Term) -> Term {
    Term::apply2(WEDGE, a, b)
}
fn d(a: Term, b: Term, c: Term) -> Term {
    Term::apply3(MALCEV, a, b, c)
}
fn eq(l: Term, r: Term) -> Identity {
    Identity::new(l, r)
}

/// `d(x,y,z) ≈ d((y∧z)∧x, (x∧z)∧y, (x∧y)∧z)`
pub fn regularity_identity_iii() -> Identity {
    eq(
        d(x(), y(), z()),
        d(w(w(y(), z()), x()), w(w(x(), z()), y()), w(w(x(), y()), z())),
    )
}

/// `(x∧y)∧y ≈ x∧y`
pub fn regularity_identity_iv() -> Identity {
    eq(w(w(x(), y()), y()), w(x(), y()))
}

/// Verdicts for the four defining conditions, in order (i)..(iv).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityReport {
    pub conditions: [(&'static str, Verdict); 4],
}

impl RegularityReport {
    pub fn holds(&self) -> bool {
        self.conditions.iter().all(|(_, v)| v.holds())
    }
}

fn scan(n: usize, arity: usize, mut ok: impl FnMut(&[usize]) -> bool) -> Verdict {
    let mut tuples = Tuples::new(n, arity);
    while let Some(t) = tuples.next_tuple() {
        if !ok(t) {
            return Verdict::Fails(t.to_vec());
        }
    }
    Verdict::Holds
}

/// The regularity conditions over `sim`; `alg` must be SMB over `sim`.
pub fn check_regular(alg: &FiniteAlgebra, sim: &Partition) -> Result<RegularityReport> {
    let report = check_smb_over(alg, sim)?;
    if !report.holds {
        return Err(Error::NotSmb(describe_violations(&report.violations)));
    }
    let (wedge, dd) = smb_operations(alg)?;
    let n = alg.size();
    let m = |a, b| wedge.at2(a, b);
    let i = scan(n, 3, |t| sim.related(dd.at3(t[0], t[1], t[2]), m(m(t[0], t[1]), t[2])));
    // [a] ≥ [b] means [a]∧[b] = [b]
    let ii = scan(n, 2, |t| !sim.related(m(t[0], t[1]), t[1]) || m(t[0], t[1]) == t[1]);
    let iii = check_identity(alg, &regularity_identity_iii())?;
    let iv = check_identity(alg, &regularity_identity_iv())?;
    Ok(RegularityReport {
        conditions: [("(i)", i), ("(ii)", ii), ("(iii)", iii), ("(iv)", iv)],
    })
}

/// SMB over some congruence and regular over it. The congruence is unique
/// when it exists, since it is recovered from `wedge` alone.
pub fn is_regular_smb(alg: &FiniteAlgebra) -> Result<bool> {
    for sim in crate::smb::find_smb_congruences(alg)? {
        if check_regular(alg, &sim)?.holds() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The twelve base identities by name. `Mal` is a chain of two equations.
pub fn regular_base() -> Vec<(&'static str, Vec<Identity>)> {
    let xy = || w(x(), y());
    let yx = || w(y(), x());
    vec![
        ("Idem1", vec![eq(w(x(), x()), x())]),
        ("Idem2", vec![eq(d(x(), x(), x()), x())]),
        ("Comm", vec![eq(w(xy(), yx()), yx())]),
        (
            "Assoc1",
            vec![eq(
                w(w(x(), w(y(), z())), w(xy(), z())),
                w(xy(), z()),
            )],
        ),
        (
            "Assoc2",
            vec![eq(
                w(w(xy(), z()), w(x(), w(y(), z()))),
                w(x(), w(y(), z())),
            )],
        ),
        (
            "Mal",
            vec![
                eq(d(xy(), yx(), yx()), xy()),
                eq(d(yx(), yx(), xy()), xy()),
            ],
        ),
        ("Regi1", vec![eq(w(w(xy(), z()), d(x(), y(), z())), d(x(), y(), z()))]),
        ("Regi2", vec![eq(w(d(x(), y(), z()), w(xy(), z())), w(xy(), z()))]),
        ("Regii1", vec![eq(w(x(), xy()), xy())]),
        ("Regii2", vec![eq(w(x(), yx()), yx())]),
        ("Regiii", vec![regularity_identity_iii()]),
        ("Regiv", vec![regularity_identity_iv()]),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseReport {
    pub verdicts: Vec<(&'static str, Verdict)>,
    /// `x ∼ y` iff `x∧y = y` and `y∧x = x`; present iff every identity holds.
    pub recovered_sim: Option<Partition>,
}

impl BaseReport {
    pub fn holds(&self) -> bool {
        self.verdicts.iter().all(|(_, v)| v.holds())
    }

    pub fn failures(&self) -> impl Iterator<Item = &(&'static str, Verdict)> {
        self.verdicts.iter().filter(|(_, v)| !v.holds())
    }
}

/// Checks every base identity. When all hold, the recovered `∼` must make
/// `alg` a regular SMB algebra; anything else is reported as falsification.
pub fn check_regular_base(alg: &FiniteAlgebra) -> Result<BaseReport> {
    smb_operations(alg)?;
    let verdicts = regular_base()
        .into_iter()
        .map(|(name, ids)| Ok((name, check_identities(alg, &ids)?)))
        .collect::<Result<Vec<_>>>()?;
    let all = verdicts.iter().all(|(_, v)| v.holds());
    let recovered_sim = if all {
        let sim = sim_from_wedge(alg)?
            .ok_or_else(|| Error::Falsified("the base holds but x∧y = y ∧ y∧x = x is not an equivalence".into()))?;
        match check_regular(alg, &sim) {
            Ok(r) if r.holds() => {}
            Ok(r) => {
                return Err(Error::Falsified(alloc::format!(
                    "the base holds but regularity fails over {sim}: {:?}",
                    r.conditions
                )))
            }
            Err(Error::NotSmb(msg)) => {
                return Err(Error::Falsified(alloc::format!(
                    "the base holds but the algebra is not SMB over {sim}: {msg}"
                )))
            }
            Err(e) => return Err(e),
        }
        Some(sim)
    } else {
        None
    };
    Ok(BaseReport {
        verdicts,
        recovered_sim,
    })
}

/// `t(x1,..,x6) = d(x1∧x2, x3∧x4, x5∧x6)`.
pub fn taylor_term() -> Term {
    let v = Term::var;
    d(w(v(0), v(1)), w(v(2), v(3)), w(v(4), v(5)))
}

/// The three Taylor identities `t(x,y,x,y,x,y) ≈ t(y,x,y,x,x,y) ≈
/// t(x,y,y,x,y,x) ≈ x∧y`, checked against the materialized `t`.
pub fn taylor_check(alg: &FiniteAlgebra) -> Result<Vec<(&'static str, Verdict)>> {
    smb_operations(alg)?;
    let table = materialize_term(alg, &taylor_term(), 6)?;
    let mut with_t = alg.clone();
    if with_t.operation("taylor").is_some() {
        with_t.set_operation("taylor", table)?;
    } else {
        with_t.add_operation("taylor", table)?;
    }
    let t = |args: [usize; 6]| Term::apply("taylor", args.iter().map(|&i| Term::var(i)).collect());
    let patterns = [
        ("t(x,y,x,y,x,y)", t([0, 1, 0, 1, 0, 1])),
        ("t(y,x,y,x,x,y)", t([1, 0, 1, 0, 0, 1])),
        ("t(x,y,y,x,y,x)", t([0, 1, 1, 0, 1, 0])),
    ];
    patterns
        .into_iter()
        .map(|(name, lhs)| Ok((name, check_identity(&with_t, &eq(lhs, w(x(), y())))?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{example_b2, example_e3, example_n4, example_one};

    #[test]
    fn e3_is_regular() {
        let e3 = example_e3();
        let sim: Partition = "0 1 | 2".parse().unwrap();
        assert!(check_regular(&e3, &sim).unwrap().holds());
        let base = check_regular_base(&e3).unwrap();
        assert!(base.holds());
        assert_eq!(base.recovered_sim, Some(sim));
        assert!(taylor_check(&e3).unwrap().iter().all(|(_, v)| v.holds()));
    }

    #[test]
    fn n4_is_not_regular() {
        let n4 = example_n4();
        let sim: Partition = "0 1 | 2 3".parse().unwrap();
        let report = check_regular(&n4, &sim).unwrap();
        assert_eq!(report.conditions[1].1, Verdict::Fails(vec![0, 2]));
        assert_eq!(report.conditions[3].1, Verdict::Fails(vec![0, 2]));
        let base = check_regular_base(&n4).unwrap();
        assert_eq!(base.verdicts[11], ("Regiv", Verdict::Fails(vec![0, 2])));
        assert!(base.recovered_sim.is_none());
        assert!(taylor_check(&n4).unwrap().iter().all(|(_, v)| v.holds()));
    }

    #[test]
    fn trivial_cases() {
        let base = check_regular_base(&example_one()).unwrap();
        assert_eq!(base.recovered_sim, Some(Partition::total(1)));
        assert!(check_regular(&example_b2(), &Partition::total(2)).unwrap().holds());
        assert!(matches!(
            check_regular(&example_e3(), &Partition::discrete(3)),
            Err(Error::NotSmb(_))
        ));
    }
}
