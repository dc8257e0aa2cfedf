//! Brute-force oracles. Nothing here calls into the closure or lattice code of
//! the library; they only read operation tables.

#![allow(dead_code)]

use std::collections::HashSet;

use smb_core::{FiniteAlgebra, Partition, Tuples};

/// Every partition of `{0..n-1}` via restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i == labels.len() {
            out.push(Partition::from_labels(labels));
            return;
        }
        for l in 0..=max + 1 {
            labels[i] = l;
            rec(i + 1, max.max(l), labels, out);
        }
    }
    if n == 0 {
        return out;
    }
    labels[0] = 0;
    rec(1, 0, &mut labels, &mut out);
    out
}

fn same_class(labels: &[usize], x: usize, y: usize) -> bool {
    labels[x] == labels[y]
}

/// Compatibility checked on all pairs of argument tuples at once.
pub fn is_compatible(alg: &FiniteAlgebra, p: &Partition) -> bool {
    let n = alg.size();
    let labels: Vec<usize> = (0..n).map(|x| p.class_of(x)).collect();
    for (_, table) in alg.operations() {
        let k = table.arity();
        let mut xs = Tuples::new(n, k);
        while let Some(x) = xs.next_tuple() {
            let x = x.to_vec();
            let fx = table.apply(&x);
            let mut ys = Tuples::new(n, k);
            while let Some(y) = ys.next_tuple() {
                if x.iter().zip(y).all(|(&a, &b)| same_class(&labels, a, b))
                    && !same_class(&labels, fx, table.apply(y))
                {
                    return false;
                }
            }
        }
    }
    true
}

/// `Con A` by filtering all partitions.
pub fn brute_congruences(alg: &FiniteAlgebra) -> Vec<Partition> {
    all_partitions(alg.size())
        .into_iter()
        .filter(|p| is_compatible(alg, p))
        .collect()
}

pub fn contains_pairs(p: &Partition, q: &Partition) -> bool {
    (0..p.size()).all(|x| (0..p.size()).all(|y| !q.related(x, y) || p.related(x, y)))
}

/// The least member of `cands` satisfying `keep`; panics if there is none.
pub fn least(cands: &[Partition], keep: impl Fn(&Partition) -> bool) -> Partition {
    let kept: Vec<&Partition> = cands.iter().filter(|p| keep(p)).collect();
    let found = kept
        .iter()
        .find(|p| kept.iter().all(|q| contains_pairs(q, p)))
        .expect("a least element exists");
    (*found).clone()
}

pub fn brute_principal(cons: &[Partition], a: usize, b: usize) -> Partition {
    least(cons, |p| p.related(a, b))
}

/// Subuniverse of `A^k` generated by `gens`, by repeated full application.
pub fn naive_subpower(alg: &FiniteAlgebra, k: usize, gens: &[Vec<usize>]) -> HashSet<Vec<usize>> {
    let mut elems: Vec<Vec<usize>> = Vec::new();
    let mut set = HashSet::new();
    for g in gens {
        if set.insert(g.clone()) {
            elems.push(g.clone());
        }
    }
    let mut old = 0;
    loop {
        let len = elems.len();
        if old == len {
            break;
        }
        for (_, table) in alg.operations() {
            let r = table.arity();
            let mut idx = Tuples::new(len, r);
            while let Some(ix) = idx.next_tuple() {
                if ix.iter().all(|&i| i < old) {
                    continue;
                }
                let t: Vec<usize> = (0..k)
                    .map(|c| {
                        let args: Vec<usize> = ix.iter().map(|&i| elems[i][c]).collect();
                        table.apply(&args)
                    })
                    .collect();
                if set.insert(t.clone()) {
                    elems.push(t);
                }
            }
        }
        old = len;
    }
    set
}

/// `M(α,β)` as 4-tuples `(m11, m12, m21, m22)`.
pub fn naive_matrices(alg: &FiniteAlgebra, alpha: &Partition, beta: &Partition) -> HashSet<Vec<usize>> {
    let n = alg.size();
    let mut gens = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if alpha.related(a, b) {
                gens.push(vec![a, a, b, b]);
            }
            if beta.related(a, b) {
                gens.push(vec![a, b, a, b]);
            }
        }
    }
    naive_subpower(alg, 4, &gens)
}

/// `[α,β]`: the least congruence `δ` with `C(α,β;δ)`.
pub fn brute_commutator(alg: &FiniteAlgebra, cons: &[Partition], alpha: &Partition, beta: &Partition) -> Partition {
    let m = naive_matrices(alg, alpha, beta);
    least(cons, |delta| {
        m.iter().all(|t| !delta.related(t[0], t[1]) || delta.related(t[2], t[3]))
    })
}

/// `A^A` maps reachable as unary polynomials, by naive closure.
pub fn brute_unary_polynomials(alg: &FiniteAlgebra) -> HashSet<Vec<usize>> {
    let n = alg.size();
    let mut gens = vec![(0..n).collect::<Vec<_>>()];
    gens.extend((0..n).map(|c| vec![c; n]));
    naive_subpower(alg, n, &gens)
}

/// `f^k` by repeated composition.
pub fn literal_power(f: &[usize], k: usize) -> Vec<usize> {
    let mut g: Vec<usize> = (0..f.len()).collect();
    for _ in 0..k {
        g = g.iter().map(|&x| f[x]).collect();
    }
    g
}

/// A random term over `ops` in which each of the `vars` variables occurs.
pub fn random_term(rng: &mut impl rand::Rng, ops: &[(String, usize)], vars: usize, depth: usize) -> smb_core::Term {
    fn build(rng: &mut impl rand::Rng, ops: &[(String, usize)], vars: usize, depth: usize) -> smb_core::Term {
        if depth == 0 || rng.gen_bool(0.25) {
            return smb_core::Term::var(rng.gen_range(0..vars));
        }
        let (symbol, arity) = &ops[rng.gen_range(0..ops.len())];
        let args = (0..*arity).map(|_| build(rng, ops, vars, depth - 1)).collect();
        smb_core::Term::apply(symbol.clone(), args)
    }
    loop {
        let t = build(rng, ops, vars, depth);
        if t.variables().len() == vars {
            return t;
        }
    }
}

pub fn signature(alg: &FiniteAlgebra) -> Vec<(String, usize)> {
    alg.operations().map(|(s, t)| (s.to_string(), t.arity())).collect()
}
