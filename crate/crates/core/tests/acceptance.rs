//! Acceptance suite: one line per criterion, nonzero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{brute_commutator, brute_congruences};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smb_core::chains::verify_cg_d3_unchecked;
use smb_core::classify::classify_table;
use smb_core::commutator::{commutator, is_abelian};
use smb_core::congruence::{congruence_lattice, quotient_algebra};
use smb_core::constructions::{
    affine_block, example_b2, example_e3, example_n4, example_s2, exhaustive_enumerate, extend_simple_type5,
    glued_corpus, nonregular_smb_corpus, random_algebra, regular_corpus, semilattice_chain, semilattice_diamond,
    CorpusSpec, SMB_SIGNATURE,
};
use smb_core::criteria::sweep_criteria;
use smb_core::polynomial::unary_polynomials;
use smb_core::regular::{check_regular_base, is_regular_smb};
use smb_core::relation::Relation;
use smb_core::smb::{check_smb_over, find_smb_congruences};
use smb_core::transform::{factorial, idempotent_power};
use smb_core::wnu::{regularize, semilattice_term, special_circ};
use smb_core::{Error, FiniteAlgebra, OperationTable, Partition, MALCEV};

struct Outcome {
    failures: Vec<String>,
    summary: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            failures: Vec::new(),
            summary: String::new(),
        }
    }

    fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.fail(msg());
        }
    }
}

fn smb_corpus() -> Vec<(FiniteAlgebra, Partition)> {
    let mut algs = regular_corpus();
    algs.extend(nonregular_smb_corpus());
    algs.extend(glued_corpus(17, 6, 7).unwrap());
    algs.extend(CorpusSpec::new(23, 6).generate().unwrap());
    algs.into_iter()
        .filter_map(|a| {
            let sim = find_smb_congruences(&a).ok()?.into_iter().next()?;
            Some((a, sim))
        })
        .collect()
}

/// Every table entry changed to every other value, one at a time.
fn perturbations(alg: &FiniteAlgebra) -> Vec<FiniteAlgebra> {
    let n = alg.size();
    let mut out = Vec::new();
    for (symbol, table) in alg.operations() {
        for i in 0..table.entries().len() {
            for v in (0..n).filter(|&v| v != table.entries()[i]) {
                let mut entries = table.entries().to_vec();
                entries[i] = v;
                let mut b = alg.clone();
                b.set_operation(symbol, OperationTable::new(table.arity(), n, entries).unwrap())
                    .unwrap();
                out.push(b);
            }
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let mut algs: Vec<FiniteAlgebra> = exhaustive_enumerate(2, &SMB_SIGNATURE).unwrap().collect();
    let exhaustive = algs.len();
    algs.extend((0..1000).map(|s| random_algebra(3, &SMB_SIGNATURE, 1_000 + s).unwrap()));
    for base in [example_e3(), semilattice_chain(3), affine_block(3)] {
        algs.extend(perturbations(&base));
    }
    let mut regular = 0;
    for alg in &algs {
        let by_base = match check_regular_base(alg) {
            Ok(r) => r.holds(),
            Err(e) => {
                o.fail(format!("{}: {e}", alg.name()));
                continue;
            }
        };
        let by_definition = is_regular_smb(alg).unwrap();
        regular += by_definition as usize;
        o.check(by_base == by_definition, || {
            format!("{}: base says {by_base}, definition says {by_definition}", alg.name())
        });
    }
    o.summary = format!(
        "{} algebras ({exhaustive} exhaustive at n=2, 1000 random at n=3, {} one-entry perturbations), {regular} regular",
        algs.len(),
        algs.len() - exhaustive - 1000
    );
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let corpus = regular_corpus();
    let mut pairs = 0;
    let mut chains = 0;
    for alg in &corpus {
        if !check_regular_base(alg).map(|r| r.holds()).unwrap_or(false) {
            o.fail(format!("{} fails the regular base", alg.name()));
            continue;
        }
        for a in 0..alg.size() {
            for b in 0..alg.size() {
                pairs += 1;
                let r = match verify_cg_d3_unchecked(alg, a, b) {
                    Ok(r) => r,
                    Err(e) => {
                        o.fail(format!("{} ({a},{b}): {e}", alg.name()));
                        continue;
                    }
                };
                o.check(r.holds(), || format!("{} ({a},{b}): Cg != D³", alg.name()));
                let cg = Relation::from_partition(&r.cg);
                o.check(r.witnesses.len() == cg.len(), || {
                    format!("{} ({a},{b}): {} of {} pairs have chains", alg.name(), r.witnesses.len(), cg.len())
                });
                for (pair, chain) in &r.witnesses {
                    chains += 1;
                    let ok = chain.steps() <= 6 && chain.replays(alg, a, b).unwrap_or(false);
                    o.check(ok, || format!("{} ({a},{b}) pair {pair:?}: bad chain", alg.name()));
                }
            }
        }
    }
    if corpus.len() < 20 {
        o.fail(format!("only {} regular corpus algebras", corpus.len()));
    }
    let max = corpus.iter().map(|a| a.size()).max().unwrap_or(0);
    o.summary = format!("{} algebras (sizes 1..={max}), {pairs} pairs, {chains} six-step chains replayed", corpus.len());
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let corpus = smb_corpus();
    let (mut quotients, mut subs, mut products) = (0, 0, 0);
    for (alg, sim) in &corpus {
        for theta in congruence_lattice(alg).unwrap().elements() {
            quotients += 1;
            let (q, _) = quotient_algebra(alg, theta).unwrap();
            let joined = sim.join(theta).unwrap();
            let labels: Vec<usize> = theta.representatives().iter().map(|&r| joined.class_of(r)).collect();
            let witness = Partition::from_labels(&labels);
            o.check(check_smb_over(&q, &witness).unwrap().holds, || {
                format!("{} / {theta}: (∼∨θ)/θ is not a witness", alg.name())
            });
        }
        let n = alg.size();
        for mask in 1u32..(1 << n) {
            let subset: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            if let Ok(sub) = alg.restrict(&subset) {
                subs += 1;
                o.check(!find_smb_congruences(&sub).unwrap().is_empty(), || {
                    format!("{} on {subset:?} is not SMB", alg.name())
                });
            }
        }
    }
    let small: Vec<&FiniteAlgebra> = corpus.iter().map(|(a, _)| a).filter(|a| a.size() <= 3).collect();
    for a in &small {
        for b in &small {
            products += 1;
            let prod = a.product(b).unwrap();
            o.check(!find_smb_congruences(&prod).unwrap().is_empty(), || {
                format!("{} x {} is not SMB", a.name(), b.name())
            });
        }
    }
    o.summary = format!(
        "{} SMB algebras: {quotients} quotients, {subs} subalgebras, {products} products (factors of size <= 3)",
        corpus.len()
    );
    o
}

fn criterion_4() -> Outcome {
    let mut o = Outcome::new();
    let mut inputs = vec![example_n4()];
    inputs.extend(glued_corpus(29, 12, 7).unwrap());
    for alg in &inputs {
        let sim = find_smb_congruences(alg).unwrap().into_iter().next().unwrap();
        match regularize(alg, Some(&sim)) {
            Ok(r) => {
                let base = check_regular_base(&r).unwrap();
                o.check(base.holds(), || format!("{}: regularized fails the base", alg.name()));
                o.check(base.recovered_sim.as_ref() == Some(&sim), || {
                    format!("{}: recovered ∼ differs", alg.name())
                });
                let (d, d2) = (alg.require(MALCEV).unwrap(), r.require(MALCEV).unwrap());
                let n = alg.size();
                for x in 0..n {
                    for y in (0..n).filter(|&y| sim.related(x, y)) {
                        for z in (0..n).filter(|&z| sim.related(x, z)) {
                            o.check(d.at3(x, y, z) == d2.at3(x, y, z), || {
                                format!("{}: d' != d at ({x},{y},{z})", alg.name())
                            });
                        }
                    }
                }
            }
            Err(e) => o.fail(format!("{}: {e}", alg.name())),
        }
    }
    let glued = inputs.len() - 1;
    if glued < 10 {
        o.fail(format!("only {glued} glued non-regular inputs"));
    }
    o.summary = format!("N4 and {glued} glued non-regular SMB algebras");
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let mut algs = 0;
    let mut tuples = 0;
    for alg in regular_corpus().into_iter().filter(|a| a.size() <= 5) {
        algs += 1;
        match sweep_criteria(&alg) {
            Ok(c) => tuples += c.tuples,
            Err(e) => o.fail(format!("{}: {e}", alg.name())),
        }
    }
    o.summary = format!("{algs} regular algebras of size <= 5, {tuples} tuples x 3 biconditionals");
    o
}

fn criterion_6() -> Outcome {
    let mut o = Outcome::new();
    let e3 = example_e3();
    let sim: Partition = "0 1 | 2".parse().unwrap();
    let base = check_regular_base(&e3).unwrap();
    o.check(base.holds() && base.recovered_sim.as_ref() == Some(&sim), || "E3 is not regular over 0 1 | 2".into());
    let con = congruence_lattice(&e3).unwrap();
    let expected = [Partition::discrete(3), sim.clone(), Partition::total(3)];
    o.check(con.len() == 3 && expected.iter().all(|p| con.contains(p)) && con.is_chain(), || {
        format!("Con E3 has {} elements", con.len())
    });
    o.check(con.is_cover(&expected[0], &sim), || "∼ does not cover 0".into());
    o.check(brute_congruences(&e3).len() == 3, || "brute-force Con E3 differs".into());
    o.check(is_abelian(&e3, &sim).unwrap(), || "[∼,∼] != 0".into());
    let polys = unary_polynomials(&e3).unwrap();
    let mut nonconstant = 0;
    for m in polys.maps() {
        if m.iter().any(|&v| v != m[0]) {
            nonconstant += 1;
            o.check(m.contains(&2), || format!("polynomial {m:?} misses 2"));
        }
    }
    o.summary = format!("Con = 0 < ∼ < 1, [∼,∼] = 0, {nonconstant} nonconstant polynomials all hit 2");
    o
}

fn criterion_7() -> Outcome {
    let mut o = Outcome::new();
    let mut treated = 0;
    let mut skipped = 0;
    for (alg, sim) in smb_corpus() {
        if !classify_table(alg.require(MALCEV).unwrap()).wnu {
            continue;
        }
        treated += 1;
        let special = special_circ(&alg, MALCEV).unwrap();
        let n = alg.size();
        for x in 0..n {
            for y in 0..n {
                let xy = special.at2(x, y);
                o.check(special.at2(x, xy) == xy, || format!("{}: x∘(x∘y) != x∘y at ({x},{y})", alg.name()));
            }
        }
        match semilattice_term(&alg, MALCEV, &sim) {
            Ok(st) => {
                let ok = !st.report.violations.iter().any(|v| v.rule != "malcev" && v.rule != "congruence");
                o.check(ok, || format!("{}: derived ∧ fails", alg.name()));
            }
            Err(Error::HypothesesNotEstablished(_)) => skipped += 1,
            Err(e) => o.fail(format!("{}: {e}", alg.name())),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=7);
        let f: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let literal = common::literal_power(&f, factorial(n));
        o.check(idempotent_power(&f) == literal, || format!("idempotent power differs on {f:?}"));
    }
    o.check(treated > 0, || "no corpus algebra has a wnu d".into());
    o.summary = format!(
        "{treated} SMB algebras with wnu d ({skipped} without established hypotheses), 1000 random self-maps"
    );
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let mut one = FiniteAlgebra::new("one", 1).unwrap();
    one.add_table("w", 3, vec![0]).unwrap();
    let mut meet4 = FiniteAlgebra::new("chain3-meet4", 3).unwrap();
    meet4
        .add_operation("w", OperationTable::from_fn(4, 3, |t| *t.iter().min().unwrap()).unwrap())
        .unwrap();
    let inputs: Vec<(FiniteAlgebra, &str)> = vec![
        (one, "w"),
        (example_b2(), MALCEV),
        (example_e3(), MALCEV),
        (example_s2(), MALCEV),
        (semilattice_chain(3), MALCEV),
        (semilattice_diamond(), MALCEV),
        (meet4, "w"),
    ];
    for (alg, w) in &inputs {
        match extend_simple_type5(alg, w) {
            Ok(b) => {
                let cons = brute_congruences(&b);
                o.check(cons.len() == 2, || format!("{}: {} congruences", alg.name(), cons.len()));
                o.check(classify_table(b.require("v").unwrap()).wnu, || format!("{}: v is not wnu", alg.name()));
            }
            Err(e) => o.fail(format!("{}: {e}", alg.name())),
        }
    }
    o.summary = format!("{} wnu algebras extended (arity 3 and 4)", inputs.len());
    o
}

fn criterion_9() -> Outcome {
    let mut o = Outcome::new();
    let mut algs: Vec<FiniteAlgebra> = regular_corpus();
    algs.extend(nonregular_smb_corpus());
    algs.extend(CorpusSpec::new(37, 4).generate().unwrap());
    let mut pairs = 0;
    let mut count = 0;
    for alg in algs.iter().filter(|a| a.size() <= 4) {
        count += 1;
        let cons = brute_congruences(alg);
        for alpha in &cons {
            for beta in &cons {
                pairs += 1;
                let fast = commutator(alg, alpha, beta).unwrap();
                let slow = brute_commutator(alg, &cons, alpha, beta);
                o.check(fast == slow, || format!("{} [{alpha}, {beta}]: {fast} vs {slow}", alg.name()));
            }
        }
    }
    o.summary = format!("{count} algebras of size <= 4, {pairs} congruence pairs");
    o
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("regular base matches the definition", criterion_1),
        ("Cg = D∘D∘D with six-step chains", criterion_2),
        ("quotients, subalgebras, products stay SMB", criterion_3),
        ("regularization", criterion_4),
        ("join, meet and commutator criteria", criterion_5),
        ("the three-element example", criterion_6),
        ("wnu pipeline and idempotent powers", criterion_7),
        ("simple extensions", criterion_8),
        ("commutator against the term condition", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        if outcome.failures.is_empty() {
            println!("PASS criterion {}: {name} [{}] ({secs:.1}s)", i + 1, outcome.summary);
        } else {
            failed += 1;
            println!(
                "FAIL criterion {}: {name} [{}] {} failure(s), first: {} ({secs:.1}s)",
                i + 1,
                outcome.summary,
                outcome.failures.len(),
                outcome.failures[0]
            );
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
