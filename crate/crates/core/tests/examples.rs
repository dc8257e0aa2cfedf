mod common;

use common::brute_congruences;
use smb_core::classify::classify_operation;
use smb_core::commutator::{commutator, is_abelian};
use smb_core::congruence::{congruence_lattice, principal_congruence, quotient_algebra};
use smb_core::constructions::{
    affine_block, example_b2, example_e3, example_n4, example_one, example_s2, exhaustive_enumerate,
    extend_simple_type5, random_algebra, SMB_SIGNATURE,
};
use smb_core::identity::{check_identity, check_quasiidentity};
use smb_core::polynomial::unary_polynomials;
use smb_core::regular::{check_regular, check_regular_base, regularity_identity_iv};
use smb_core::relation::{d_rel, Relation};
use smb_core::smb::{check_smb_over, find_smb_congruences};
use smb_core::term::{eval_term, materialize_term};
use smb_core::wnu::{circ_table, iterate_wnu, regularize, semilattice_term, special_circ};
use smb_core::{Identity, Partition, Quasiidentity, Term, Verdict, MALCEV, WEDGE};

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

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

#[test]
fn e3_tables() {
    let e3 = example_e3();
    let d = Term::apply3(MALCEV, x(), y(), z());
    assert_eq!(eval_term(&e3, &d, &[0, 1, 0]).unwrap(), 1);
    let dxxy = Term::apply3(MALCEV, x(), x(), y());
    assert_eq!(eval_term(&e3, &dxxy, &[0, 2]).unwrap(), 2);
    let meet = materialize_term(&e3, &dxxy, 2).unwrap();
    assert_eq!(meet.entries(), &[0, 1, 2, 0, 1, 2, 2, 2, 2]);
    assert_eq!(meet, *e3.require(WEDGE).unwrap());
    let nested = materialize_term(&e3, &w(w(x(), y()), y()), 2).unwrap();
    assert_eq!(nested, meet);
    // d(x,y,z) = x+y+z mod 2 off 2, and 2 otherwise
    let dt = e3.require(MALCEV).unwrap();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let expected = if [a, b, c].contains(&2) { 2 } else { (a + b + c) % 2 };
                assert_eq!(dt.at3(a, b, c), expected);
            }
        }
    }
}

#[test]
fn e3_is_regular_smb_over_its_blocks() {
    let e3 = example_e3();
    let sim = p("0 1 | 2");
    assert!(check_smb_over(&e3, &sim).unwrap().holds);
    assert!(check_regular(&e3, &sim).unwrap().holds());
    let base = check_regular_base(&e3).unwrap();
    assert!(base.holds());
    assert_eq!(base.recovered_sim, Some(sim.clone()));
    assert_eq!(find_smb_congruences(&e3).unwrap(), vec![sim]);
}

#[test]
fn e3_congruences_form_a_three_chain() {
    let e3 = example_e3();
    let con = congruence_lattice(&e3).unwrap();
    assert_eq!(con.len(), 3);
    assert!(con.is_chain());
    assert!(con.is_cover(&Partition::discrete(3), &p("0 1 | 2")));
    assert!(con.is_cover(&p("0 1 | 2"), &Partition::total(3)));
    assert_eq!(brute_congruences(&e3).len(), 3);
    assert!(is_abelian(&e3, &p("0 1 | 2")).unwrap());
}

#[test]
fn two_is_in_every_nonconstant_polynomial_image() {
    let e3 = example_e3();
    let polys = unary_polynomials(&e3).unwrap();
    let mut nonconstant = 0;
    for m in polys.maps() {
        if m.iter().any(|&v| v != m[0]) {
            nonconstant += 1;
            assert_eq!(m[2], 2);
        }
    }
    assert!(nonconstant >= 2);
    assert!(polys.index_of(&[1, 0, 2]).is_some());
    let swap = polys.witness(&e3, polys.index_of(&[1, 0, 2]).unwrap());
    for a in 0..3 {
        assert_eq!(eval_term(&e3, &swap, &[a]).unwrap(), [1, 0, 2][a]);
    }
}

#[test]
fn identity_examples() {
    let e3 = example_e3();
    assert_eq!(check_identity(&e3, &regularity_identity_iv()).unwrap(), Verdict::Holds);
    let d = Term::apply3(MALCEV, x(), y(), z());
    let v = check_identity(&e3, &Identity::new(d.clone(), x())).unwrap();
    assert_eq!(v, Verdict::Fails(vec![0, 0, 1]));
    assert_eq!(eval_term(&e3, &d, &[0, 1, 0]).unwrap(), 1);
    let comm = Identity::new(w(w(x(), y()), w(y(), x())), w(y(), x()));
    assert!(check_identity(&example_s2(), &comm).unwrap().holds());
}

fn sim_premises() -> Vec<Identity> {
    vec![Identity::new(w(x(), y()), y()), Identity::new(w(y(), x()), x())]
}

#[test]
fn quasiidentity_examples() {
    let wedge_compat = Quasiidentity::new(sim_premises(), Identity::new(w(x(), z()), w(y(), z())));
    assert!(check_quasiidentity(&example_e3(), &wedge_compat).unwrap().holds());
    // x ∼ y implies d(x,z,u) ∼ d(y,z,u), one direction of the ∼ test
    let dx = || Term::apply3(MALCEV, x(), z(), Term::var(3));
    let dy = || Term::apply3(MALCEV, y(), z(), Term::var(3));
    let d_compat = Quasiidentity::new(sim_premises(), Identity::new(w(dx(), dy()), dy()));
    assert!(check_quasiidentity(&example_n4(), &d_compat).unwrap().holds());
    let vacuous = Quasiidentity::new(
        vec![Identity::new(x(), y()), Identity::new(w(x(), y()), Term::constant(0))],
        Identity::new(x(), y()),
    );
    assert!(check_quasiidentity(&example_b2(), &vacuous).unwrap().holds());
}

#[test]
fn classification_examples() {
    let flags = classify_operation(&example_e3(), MALCEV).unwrap();
    assert!(flags.idempotent && flags.wnu && flags.special_wnu && !flags.malcev);
    assert!(classify_operation(&example_b2(), MALCEV).unwrap().malcev);
    let f = classify_operation(&example_b2(), WEDGE).unwrap();
    assert!(f.second_projection && !f.wnu);
}

#[test]
fn relational_examples() {
    let e3 = example_e3();
    assert_eq!(principal_congruence(&e3, 0, 1).unwrap(), p("0 1 | 2"));
    assert!(principal_congruence(&e3, 0, 2).unwrap().is_total());
    assert!(principal_congruence(&e3, 1, 1).unwrap().is_discrete());
    let d01 = Relation::from_generated(&d_rel(&e3, 0, 1).unwrap()).unwrap();
    assert!(d01.equals_partition(&p("0 1 | 2")));
    let b2 = example_b2();
    let d = Relation::from_generated(&d_rel(&b2, 0, 1).unwrap()).unwrap();
    assert_eq!(d.len(), 4);
    assert_eq!(congruence_lattice(&b2).unwrap().len(), 2);
    assert_eq!(congruence_lattice(&example_one()).unwrap().len(), 1);

    let (q, _) = quotient_algebra(&e3, &p("0 1 | 2")).unwrap();
    assert_eq!(q.size(), 2);
    assert_eq!(q.require(WEDGE).unwrap().entries(), &[0, 1, 1, 1]);
    let s2 = example_s2();
    let full = Partition::total(2);
    assert_eq!(commutator(&s2, &full, &full).unwrap(), full);
    assert!(!is_abelian(&s2, &full).unwrap());
    assert!(commutator(&e3, &p("0 1 | 2"), &p("0 1 | 2")).unwrap().is_discrete());
}

#[test]
fn n4_is_smb_but_not_regular() {
    let n4 = example_n4();
    let sim = p("0 1 | 2 3");
    assert_eq!(n4.require(WEDGE).unwrap().at2(0, 2), 3);
    assert!(check_smb_over(&n4, &sim).unwrap().holds);
    let r = check_regular(&n4, &sim).unwrap();
    assert_eq!(r.conditions[1].1, Verdict::Fails(vec![0, 2]));
    assert_eq!(r.conditions[3].1, Verdict::Fails(vec![0, 2]));
    let base = check_regular_base(&n4).unwrap();
    let failures: Vec<_> = base.failures().map(|(name, _)| *name).collect();
    assert!(failures.contains(&"Regiv"));
}

#[test]
fn pipeline_examples() {
    let e3 = example_e3();
    assert_eq!(circ_table(&e3, MALCEV).unwrap(), *e3.require(WEDGE).unwrap());
    assert_eq!(special_circ(&e3, MALCEV).unwrap(), *e3.require(WEDGE).unwrap());
    let b2 = example_b2();
    assert_eq!(circ_table(&b2, MALCEV).unwrap().entries(), &[0, 1, 0, 1]);
    assert_eq!(iterate_wnu(&b2, MALCEV).unwrap(), *b2.require(MALCEV).unwrap());
    assert!(circ_table(&example_n4(), WEDGE).is_err());

    let st = semilattice_term(&e3, MALCEV, &p("0 1 | 2")).unwrap();
    assert_eq!(st.wedge.at2(0, 1), 1);
    assert_eq!(st.wedge.at2(0, 2), 2);
    assert_eq!(st.order.greatest(), Some(0));
    let st = semilattice_term(&b2, MALCEV, &Partition::total(2)).unwrap();
    assert_eq!(st.wedge.entries(), &[0, 1, 0, 1]);
}

#[test]
fn regularization_examples() {
    let n4 = example_n4();
    let r = regularize(&n4, None).unwrap();
    assert_eq!(r.require(WEDGE).unwrap().at2(0, 2), 2);
    assert!(check_regular_base(&r).unwrap().holds());
    let e3 = example_e3();
    let r = regularize(&e3, None).unwrap();
    assert_eq!(r.require(WEDGE).unwrap(), e3.require(WEDGE).unwrap());
    assert_eq!(r.require(MALCEV).unwrap(), e3.require(MALCEV).unwrap());
    let b2 = example_b2();
    assert_eq!(regularize(&b2, None).unwrap().require(MALCEV).unwrap(), b2.require(MALCEV).unwrap());
}

#[test]
fn simple_extensions() {
    let mut one = smb_core::FiniteAlgebra::new("one", 1).unwrap();
    one.add_table("w", 3, vec![0]).unwrap();
    let b = extend_simple_type5(&one, "w").unwrap();
    assert_eq!(b.size(), 4);
    assert_eq!(brute_congruences(&b).len(), 2);
    let b = extend_simple_type5(&affine_block(2), MALCEV).unwrap();
    assert_eq!(b.size(), 5);
    assert_eq!(brute_congruences(&b).len(), 2);
    let v = b.require("v").unwrap();
    let zero = 2;
    for a in 0..5 {
        for c in 0..5 {
            assert_eq!(v.at3(zero, a, c), zero);
            assert_eq!(v.at3(a, zero, c), zero);
            assert_eq!(v.at3(a, c, zero), zero);
        }
    }
    assert!(classify_operation(&b, "v").unwrap().wnu);
}

#[test]
fn enumeration_and_seeds() {
    assert_eq!(exhaustive_enumerate(2, &SMB_SIGNATURE).unwrap().count(), 4096);
    assert!(exhaustive_enumerate(3, &SMB_SIGNATURE).is_err());
    assert_eq!(
        random_algebra(3, &SMB_SIGNATURE, 9).unwrap(),
        random_algebra(3, &SMB_SIGNATURE, 9).unwrap()
    );
}
