//! Witness chains for principal congruences and for joins with `∼`.
//!
//! Every chain returned here comes with explicit unary polynomials recovered
//! from subpower traces, and every constructor re-evaluates its own output
//! before handing it back.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::FiniteAlgebra;
use crate::congruence::{is_congruence, principal_congruence};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::regular::check_regular_base;
use crate::relation::{d_rel, Relation};
use crate::smb::{check_smb_over, smb_operations};
use crate::subpower::{generate_subpower, GeneratedSet};
use crate::term::{eval_term, Node, Term};

/// `e_0, .., e_m` with unary polynomials `p_1, .., p_m` such that
/// `{p_i(a), p_i(b)} = {e_{i-1}, e_i}`. Polynomials use variable 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialChain {
    pub elements: Vec<usize>,
    pub polynomials: Vec<Term>,
}

impl PolynomialChain {
    pub fn steps(&self) -> usize {
        self.polynomials.len()
    }

    /// Re-evaluates every polynomial at `a` and `b`.
    pub fn replays(&self, alg: &FiniteAlgebra, a: usize, b: usize) -> Result<bool> {
        if self.elements.len() != self.polynomials.len() + 1 {
            return Ok(false);
        }
        for (i, p) in self.polynomials.iter().enumerate() {
            let pa = eval_term(alg, p, &[a])?;
            let pb = eval_term(alg, p, &[b])?;
            let (u, v) = (self.elements[i], self.elements[i + 1]);
            if !((pa == u && pb == v) || (pa == v && pb == u)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Paths through a reflexive relation, at most `max_steps` long.
fn shortest_path(rel: &Relation, from: usize, to: usize, max_steps: usize) -> Option<Vec<usize>> {
    let n = rel.size();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    depth[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        if depth[x] == max_steps {
            continue;
        }
        for y in 0..n {
            if depth[y] == usize::MAX && rel.contains(x, y) {
                depth[y] = depth[x] + 1;
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    if depth[to] == usize::MAX {
        return None;
    }
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(parent[*path.last().unwrap()]);
    }
    path.reverse();
    Some(path)
}

/// `D_{a,b}` together with its trace, for extracting polynomial witnesses.
#[derive(Debug, Clone)]
pub struct DRelation {
    a: usize,
    b: usize,
    set: GeneratedSet,
    rel: Relation,
}

impl DRelation {
    pub fn new(alg: &FiniteAlgebra, a: usize, b: usize) -> Result<DRelation> {
        let set = d_rel(alg, a, b)?;
        let rel = Relation::from_generated(&set)?;
        Ok(DRelation { a, b, set, rel })
    }

    pub fn relation(&self) -> &Relation {
        &self.rel
    }

    /// A binary polynomial `q(x,y)` with `q(a,b) = u` and `q(b,a) = v`.
    pub fn binary_witness(&self, alg: &FiniteAlgebra, u: usize, v: usize) -> Option<Term> {
        let i = self.set.index_of(&[u, v])?;
        Some(self.set.term_for(alg, i, |g| match g {
            0 => Node::Var(0),
            1 => Node::Var(1),
            c => Node::Const(c - 2),
        }))
    }

    /// Splits each step of a shortest `D`-path from `c` to `d` (padded to
    /// three steps) into two unary steps through `q_i(a,a)`.
    pub fn six_chain(&self, alg: &FiniteAlgebra, c: usize, d: usize) -> Result<Option<PolynomialChain>> {
        let Some(mut path) = shortest_path(&self.rel, c, d, 3) else {
            return Ok(None);
        };
        while path.len() < 4 {
            path.push(d);
        }
        let a = self.a;
        let mut elements = vec![c];
        let mut polynomials = Vec::with_capacity(6);
        for w in path.windows(2) {
            let q = self
                .binary_witness(alg, w[0], w[1])
                .ok_or_else(|| Error::Invalid(format!("({}, {}) is not in D", w[0], w[1])))?;
            let mid = eval_term(alg, &q, &[a, a])?;
            // q(a,z) sends {a,b} to {mid, u}; q(z,a) sends it to {mid, v}
            polynomials.push(q.substitute_leaves(|v| if v == 0 { Node::Const(a) } else { Node::Var(0) }));
            polynomials.push(q.substitute_leaves(|v| if v == 0 { Node::Var(0) } else { Node::Const(a) }));
            elements.push(mid);
            elements.push(w[1]);
        }
        let chain = PolynomialChain { elements, polynomials };
        if !chain.replays(alg, a, self.b)? {
            return Err(Error::Falsified(format!("six-step chain for ({c}, {d}) does not replay")));
        }
        Ok(Some(chain))
    }
}

/// Outcome of comparing `Cg(a,b)` with `D∘D∘D`.
#[derive(Debug, Clone)]
pub struct CgD3Report {
    pub cg: Partition,
    pub d3: Relation,
    /// Pairs of `Cg(a,b)` missing from `D³`, and pairs of `D³` outside `Cg(a,b)`.
    pub only_in_cg: Vec<(usize, usize)>,
    pub only_in_d3: Vec<(usize, usize)>,
    /// A six-step chain for each pair of `Cg(a,b)` reachable in `D³`.
    pub witnesses: Vec<((usize, usize), PolynomialChain)>,
}

impl CgD3Report {
    pub fn holds(&self) -> bool {
        self.only_in_cg.is_empty() && self.only_in_d3.is_empty()
    }
}

/// `Cg(a,b) = D∘D∘D` for an algebra satisfying the regular base, with
/// six-polynomial witnesses for every pair.
pub fn verify_cg_d3(alg: &FiniteAlgebra, a: usize, b: usize) -> Result<CgD3Report> {
    let base = check_regular_base(alg)?;
    if !base.holds() {
        return Err(Error::HypothesesNotEstablished("the regular base fails".into()));
    }
    verify_cg_d3_unchecked(alg, a, b)
}

/// [`verify_cg_d3`] without the base check, for sweeps that already did it.
pub fn verify_cg_d3_unchecked(alg: &FiniteAlgebra, a: usize, b: usize) -> Result<CgD3Report> {
    let cg = principal_congruence(alg, a, b)?;
    let d = DRelation::new(alg, a, b)?;
    let d3 = d.rel.compose(&d.rel)?.compose(&d.rel)?;
    let cg_rel = Relation::from_partition(&cg);
    let only_in_cg = cg_rel.pairs().filter(|&(x, y)| !d3.contains(x, y)).collect();
    let only_in_d3 = d3.pairs().filter(|&(x, y)| !cg.related(x, y)).collect();
    let mut witnesses = Vec::new();
    for (x, y) in cg_rel.pairs() {
        if let Some(chain) = d.six_chain(alg, x, y)? {
            witnesses.push(((x, y), chain));
        }
    }
    Ok(CgD3Report {
        cg,
        d3,
        only_in_cg,
        only_in_d3,
        witnesses,
    })
}

/// `{(p(a), p(b))}` over unary polynomials `p`, with its trace.
#[derive(Debug, Clone)]
pub struct PolynomialImages {
    set: GeneratedSet,
}

impl PolynomialImages {
    pub fn new(alg: &FiniteAlgebra, a: usize, b: usize) -> Result<PolynomialImages> {
        alg.check_element(a)?;
        alg.check_element(b)?;
        let mut gens = vec![vec![a, b]];
        gens.extend((0..alg.size()).map(|c| vec![c, c]));
        Ok(PolynomialImages {
            set: generate_subpower(alg, 2, &gens)?,
        })
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.set.contains(&[u, v])
    }

    /// A unary polynomial `p` with `p(a) = u` and `p(b) = v`.
    pub fn witness(&self, alg: &FiniteAlgebra, u: usize, v: usize) -> Option<Term> {
        let i = self.set.index_of(&[u, v])?;
        Some(self.set.term_for(alg, i, |g| match g {
            0 => Node::Var(0),
            c => Node::Const(c - 1),
        }))
    }
}

/// `c = c_0, d_0, .., c_k, d_k = d` with `c_i ∼ d_i` and `{d_{i-1}, c_i}`
/// the image of `{a, b}` under `links[i-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinChain {
    pub pairs: Vec<(usize, usize)>,
    pub links: Vec<Term>,
}

impl JoinChain {
    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// The flat sequence `c_0, d_0, c_1, .., d_k`.
    pub fn flat(&self) -> Vec<usize> {
        self.pairs.iter().flat_map(|&(c, d)| [c, d]).collect()
    }

    pub fn replays(&self, alg: &FiniteAlgebra, sim: &Partition, a: usize, b: usize) -> Result<bool> {
        if self.pairs.is_empty() || self.links.len() + 1 != self.pairs.len() {
            return Ok(false);
        }
        if !self.pairs.iter().all(|&(c, d)| sim.related(c, d)) {
            return Ok(false);
        }
        for (i, p) in self.links.iter().enumerate() {
            let (u, v) = (self.pairs[i].1, self.pairs[i + 1].0);
            let (pa, pb) = (eval_term(alg, p, &[a])?, eval_term(alg, p, &[b])?);
            if !((pa == u && pb == v) || (pa == v && pb == u)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinMembership {
    pub member: bool,
    pub chain: Option<JoinChain>,
}

/// Is `(c,d) ∈ Cg(a,b) ∨ sim`? The verdict comes from the partition join;
/// the chain comes from a separate search and must agree with it.
pub fn join_membership_chain(
    alg: &FiniteAlgebra,
    sim: &Partition,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
) -> Result<JoinMembership> {
    alg.check_element(c)?;
    alg.check_element(d)?;
    if !is_congruence(alg, sim) {
        return Err(Error::HypothesesNotEstablished(format!("{sim} is not a congruence")));
    }
    let join = principal_congruence(alg, a, b)?.join(sim)?;
    let member = join.related(c, d);
    let images = PolynomialImages::new(alg, a, b)?;
    let chain = search_join_chain(alg, sim, &images, c, d)?;
    if member != chain.is_some() {
        return Err(Error::Falsified(format!(
            "join membership of ({c}, {d}) is {member} but a chain {} found",
            if chain.is_some() { "was" } else { "was not" }
        )));
    }
    if let Some(chain) = &chain {
        if !chain.replays(alg, sim, a, b)? {
            return Err(Error::Falsified(format!("join chain for ({c}, {d}) does not replay")));
        }
    }
    Ok(JoinMembership { member, chain })
}

fn search_join_chain(
    alg: &FiniteAlgebra,
    sim: &Partition,
    images: &PolynomialImages,
    c: usize,
    d: usize,
) -> Result<Option<JoinChain>> {
    let n = alg.size();
    // BFS over the `c_i`; parent[y] = (previous c, the d before y)
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[c] = true;
    let mut queue = VecDeque::from([c]);
    let mut last = None;
    while let Some(ci) = queue.pop_front() {
        if sim.related(ci, d) {
            last = Some(ci);
            break;
        }
        for di in (0..n).filter(|&x| sim.related(ci, x)) {
            for y in 0..n {
                if !seen[y] && (images.contains(di, y) || images.contains(y, di)) {
                    seen[y] = true;
                    parent[y] = Some((ci, di));
                    queue.push_back(y);
                }
            }
        }
    }
    let Some(mut ci) = last else {
        return Ok(None);
    };
    let mut pairs = vec![(ci, d)];
    let mut links = Vec::new();
    while let Some((prev, dprev)) = parent[ci] {
        let p = images
            .witness(alg, dprev, ci)
            .or_else(|| images.witness(alg, ci, dprev))
            .expect("edge came from the image set");
        links.push(p);
        pairs.push((prev, dprev));
        ci = prev;
    }
    pairs.reverse();
    links.reverse();
    Ok(Some(JoinChain { pairs, links }))
}

fn recovered_regular_sim(alg: &FiniteAlgebra) -> Result<Partition> {
    let base = check_regular_base(alg)?;
    base.recovered_sim
        .ok_or_else(|| Error::HypothesesNotEstablished("the regular base fails".into()))
}

/// Elements `e, f` with `(c,e), (d,f) ∈ Cg(a,b)`, `e ∼ f` and
/// `[e] ≤ [c]∧[d]`, folded along a join chain from `c` to `d`.
pub fn cgvsim_below(alg: &FiniteAlgebra, a: usize, b: usize, c: usize, d: usize) -> Result<(usize, usize)> {
    let sim = recovered_regular_sim(alg)?;
    cgvsim_below_over(alg, &sim, a, b, c, d)
}

/// [`cgvsim_below`] with `sim` already known to make `alg` regular.
pub fn cgvsim_below_over(
    alg: &FiniteAlgebra,
    sim: &Partition,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
) -> Result<(usize, usize)> {
    let membership = join_membership_chain(alg, sim, a, b, c, d)?;
    let Some(chain) = membership.chain else {
        return Err(Error::HypothesesNotEstablished(format!(
            "({c}, {d}) is not in Cg({a}, {b}) ∨ ∼"
        )));
    };
    let (wedge, _) = smb_operations(alg)?;
    let m = |x, y| wedge.at2(x, y);
    let cs: Vec<usize> = chain.pairs.iter().map(|p| p.0).collect();
    let ds: Vec<usize> = chain.pairs.iter().map(|p| p.1).collect();
    let e = cs[1..].iter().fold(cs[0], |acc, &ci| m(ci, acc));
    let f = ds[..ds.len() - 1].iter().rev().fold(ds[ds.len() - 1], |acc, &di| m(di, acc));

    let cg = principal_congruence(alg, a, b)?;
    let meet_class = sim.class_of(m(c, d));
    let below = |x: usize| m(sim.representatives()[meet_class], x);
    let ok = cg.related(c, e) && cg.related(d, f) && sim.related(e, f) && sim.related(below(e), e);
    if !ok {
        return Err(Error::Falsified(format!(
            "fold along {:?} gives e = {e}, f = {f}, which fails a required property",
            chain.flat()
        )));
    }
    Ok((e, f))
}

/// The fold `e = ((c_0∧c_1)∧..)∧c_k` along a `(∼,θ)`-alternating chain and
/// whether both class-system inclusions and `[e] ≤ [c_0∧d_k]` hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldReport {
    pub e: usize,
    pub start_included: bool,
    pub end_included: bool,
    pub below: bool,
}

impl FoldReport {
    pub fn holds(&self) -> bool {
        self.start_included && self.end_included && self.below
    }
}

/// `chain` is `c_0, d_0, .., c_k, d_k` with `c_i ∼ d_i` and `d_i θ c_{i+1}`.
pub fn leminjection_fold(
    alg: &FiniteAlgebra,
    sim: &Partition,
    theta: &Partition,
    chain: &[usize],
) -> Result<FoldReport> {
    let (wedge, _) = smb_operations(alg)?;
    let n = alg.size();
    if chain.is_empty() || chain.len() % 2 != 0 {
        return Err(Error::Invalid("a chain has an even, nonzero number of elements".into()));
    }
    for &x in chain {
        alg.check_element(x)?;
    }
    if theta.size() != n {
        return Err(Error::SizeMismatch {
            left: n,
            right: theta.size(),
        });
    }
    if !check_smb_over(alg, sim)?.holds {
        return Err(Error::NotSmb(format!("over {sim}")));
    }
    if !is_congruence(alg, theta) {
        return Err(Error::HypothesesNotEstablished(format!("{theta} is not a congruence")));
    }
    let pairs: Vec<(usize, usize)> = chain.chunks(2).map(|p| (p[0], p[1])).collect();
    if !pairs.iter().all(|&(c, d)| sim.related(c, d))
        || !pairs.windows(2).all(|w| theta.related(w[0].1, w[1].0))
    {
        return Err(Error::HypothesesNotEstablished("not a (∼,θ)-alternating chain".into()));
    }
    let m = |x, y| wedge.at2(x, y);
    let e = pairs[1..].iter().fold(pairs[0].0, |acc, &(ci, _)| m(acc, ci));
    let theta_classes = |x: usize| -> Vec<bool> {
        let mut hit = vec![false; theta.num_classes()];
        for y in (0..n).filter(|&y| sim.related(x, y)) {
            hit[theta.class_of(y)] = true;
        }
        hit
    };
    let target = theta_classes(e);
    let included = |x| theta_classes(x).iter().zip(&target).all(|(&h, &t)| !h || t);
    let (c0, dk) = (pairs[0].0, pairs[pairs.len() - 1].1);
    let bound = m(c0, dk);
    // [e] ≤ [bound] iff [bound]∧[e] = [e]
    let below = sim.related(m(bound, e), e);
    Ok(FoldReport {
        e,
        start_included: included(c0),
        end_included: included(dk),
        below,
    })
}

/// A `(∼,θ)`-alternating chain from `c` to `d`, when `(c,d) ∈ ∼∨θ`.
pub fn alternating_chain(sim: &Partition, theta: &Partition, c: usize, d: usize) -> Option<Vec<usize>> {
    let n = sim.size();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[c] = true;
    let mut queue = VecDeque::from([c]);
    let mut last = None;
    while let Some(ci) = queue.pop_front() {
        if sim.related(ci, d) {
            last = Some(ci);
            break;
        }
        for di in (0..n).filter(|&x| sim.related(ci, x)) {
            for y in (0..n).filter(|&y| theta.related(di, y)) {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((ci, di));
                    queue.push_back(y);
                }
            }
        }
    }
    let mut ci = last?;
    let mut flat = vec![d, ci];
    while let Some((prev, dprev)) = parent[ci] {
        flat.push(dprev);
        flat.push(prev);
        ci = prev;
    }
    flat.reverse();
    Some(flat)
}
