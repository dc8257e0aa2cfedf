//! Named example algebras, gluing and extension constructions, and seeded
//! corpus generators.
//!
//! Every SMB-style builder declares `d` first and `wedge` second.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{FiniteAlgebra, OperationTable};
use crate::classify::{classify_table, is_malcev};
use crate::congruence::principal_congruence;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::smb::{check_smb_over, describe_violations, MALCEV, WEDGE};
use crate::term::{materialize_term, Term};

/// The signature `{d: 3, wedge: 2}` in declaration order.
pub const SMB_SIGNATURE: [(&str, usize); 2] = [(MALCEV, 3), (WEDGE, 2)];

fn smb_algebra(name: &str, n: usize, d: OperationTable, wedge: OperationTable) -> FiniteAlgebra {
    FiniteAlgebra::new(name, n)
        .and_then(|a| a.with_operation(MALCEV, d))
        .and_then(|a| a.with_operation(WEDGE, wedge))
        .expect("builder tables are valid")
}

fn table(arity: usize, n: usize, f: impl FnMut(&[usize]) -> usize) -> OperationTable {
    OperationTable::from_fn(arity, n, f).expect("builder tables are valid")
}

/// The one-element algebra in the SMB signature.
pub fn example_one() -> FiniteAlgebra {
    smb_algebra("one", 1, table(3, 1, |_| 0), table(2, 1, |_| 0))
}

/// Universe `{0,1,2}`: `d(x,y,z) = x+y+z mod 2` unless 2 occurs, where it is
/// 2; `x∧y = d(x,x,y)`.
pub fn example_e3() -> FiniteAlgebra {
    let d = table(3, 3, |t| {
        if t.contains(&2) {
            2
        } else {
            (t[0] + t[1] + t[2]) % 2
        }
    });
    let mut alg = FiniteAlgebra::new("e3", 3)
        .and_then(|a| a.with_operation(MALCEV, d))
        .expect("valid");
    let wedge = materialize_term(
        &alg,
        &Term::apply3(MALCEV, Term::var(0), Term::var(0), Term::var(1)),
        2,
    )
    .expect("d is declared");
    alg.add_operation(WEDGE, wedge).expect("fresh symbol");
    alg
}

/// `{0,1}` with `d = x⊕y⊕z` and `∧` the second projection.
pub fn example_b2() -> FiniteAlgebra {
    let mut alg = affine_block(2);
    alg.set_name("b2");
    alg
}

/// The two-element chain `0 < 1` with `d = (x∧y)∧z`.
pub fn example_s2() -> FiniteAlgebra {
    let mut alg = semilattice_chain(2);
    alg.set_name("s2");
    alg
}

/// Two `Z_2` blocks `{0,1}` above `{2,3}` glued with every cross-block
/// value equal to 3. SMB over `0 1 | 2 3` but not regular.
pub fn example_n4() -> FiniteAlgebra {
    let classes = semilattice_from_meet("two", table(2, 2, |t| t[0].max(t[1])));
    let mut alg = glue_smb(&classes, &[affine_block(2), affine_block(2)], &[0, 1])
        .expect("affine blocks are Mal'cev");
    alg.set_name("n4");
    alg
}

/// `Z_m` as a single block: `d = x - y + z`, `∧` the second projection.
pub fn affine_block(m: usize) -> FiniteAlgebra {
    smb_algebra(
        &alloc::format!("z{m}"),
        m,
        table(3, m, |t| (t[0] + m - t[1] + t[2]) % m),
        table(2, m, |t| t[1]),
    )
}

/// A meet-semilattice given by its meet table, with `d = (x∧y)∧z`.
pub fn semilattice_from_meet(name: &str, meet: OperationTable) -> FiniteAlgebra {
    let n = meet.size();
    let d = table(3, n, |t| meet.at2(meet.at2(t[0], t[1]), t[2]));
    smb_algebra(name, n, d, meet)
}

/// `0 < 1 < .. < n-1`.
pub fn semilattice_chain(n: usize) -> FiniteAlgebra {
    semilattice_from_meet(&alloc::format!("chain{n}"), table(2, n, |t| t[0].min(t[1])))
}

/// A rooted tree as a meet-semilattice: `parent[0] = 0` is the root (the
/// least element), and `parent[x] < x` otherwise. Meet is the nearest common
/// ancestor.
pub fn semilattice_tree(parent: &[usize]) -> Result<FiniteAlgebra> {
    let n = parent.len();
    if n == 0 {
        return Err(Error::EmptyUniverse);
    }
    if parent[0] != 0 || (1..n).any(|x| parent[x] >= x) {
        return Err(Error::Invalid("tree parents must satisfy parent[x] < x".into()));
    }
    let ancestors = |mut x: usize| {
        let mut path = vec![x];
        while x != 0 {
            x = parent[x];
            path.push(x);
        }
        path
    };
    let meet = table(2, n, |t| {
        let above = ancestors(t[0]);
        let mut y = t[1];
        while !above.contains(&y) {
            y = parent[y];
        }
        y
    });
    Ok(semilattice_from_meet("tree", meet))
}

/// `0 < 1, 2 < 3` with `1 ∧ 2 = 0`.
pub fn semilattice_diamond() -> FiniteAlgebra {
    const MEET: [usize; 16] = [0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 2, 2, 0, 1, 2, 3];
    semilattice_from_meet("diamond", OperationTable::new(2, 4, MEET.to_vec()).expect("valid"))
}

/// Glues Mal'cev blocks along a semilattice of classes.
///
/// `semilattice` has `wedge` as a meet on class indices; `blocks[c]` has a
/// Mal'cev `d` and becomes class `c`, laid out consecutively; `reps[c]` is a
/// local element of `blocks[c]`. Inside a class, `∧` is the second
/// projection and `d` is the block's; across classes both operations return
/// the representative of the meet of the classes involved.
pub fn glue_smb(semilattice: &FiniteAlgebra, blocks: &[FiniteAlgebra], reps: &[usize]) -> Result<FiniteAlgebra> {
    let meet = semilattice.require_arity(WEDGE, 2)?;
    let k = semilattice.size();
    if blocks.len() != k || reps.len() != k {
        return Err(Error::Invalid(alloc::format!(
            "{k} classes need {k} blocks and {k} representatives"
        )));
    }
    let m = |a, b| meet.at2(a, b);
    let is_semilattice = (0..k).all(|a| {
        m(a, a) == a && (0..k).all(|b| m(a, b) == m(b, a) && (0..k).all(|c| m(m(a, b), c) == m(a, m(b, c))))
    });
    if !is_semilattice {
        return Err(Error::Invalid("class operation is not a semilattice".into()));
    }
    let mut offsets = Vec::with_capacity(k + 1);
    offsets.push(0);
    for (c, block) in blocks.iter().enumerate() {
        let d = block.require_arity(MALCEV, 3)?;
        if !is_malcev(d) {
            return Err(Error::Invalid(alloc::format!("block {c} has no Mal'cev d")));
        }
        block.check_element(reps[c])?;
        offsets.push(offsets[c] + block.size());
    }
    let n = offsets[k];
    let mut class = vec![0; n];
    for c in 0..k {
        class[offsets[c]..offsets[c + 1]].fill(c);
    }
    let rep = |c: usize| offsets[c] + reps[c];
    let wedge = table(2, n, |t| {
        let (ca, cb) = (class[t[0]], class[t[1]]);
        if ca == cb {
            t[1]
        } else {
            rep(m(ca, cb))
        }
    });
    let d = table(3, n, |t| {
        let cs = [class[t[0]], class[t[1]], class[t[2]]];
        if cs[0] == cs[1] && cs[1] == cs[2] {
            let o = offsets[cs[0]];
            let local = blocks[cs[0]].require(MALCEV).expect("checked").at3(t[0] - o, t[1] - o, t[2] - o);
            o + local
        } else {
            rep(m(m(cs[0], cs[1]), cs[2]))
        }
    });
    let alg = smb_algebra("glued", n, d, wedge);
    let sim = Partition::from_labels(&class);
    let report = check_smb_over(&alg, &sim)?;
    if !report.holds {
        return Err(Error::Falsified(alloc::format!(
            "glued algebra is not SMB over its blocks: {}",
            describe_violations(&report.violations)
        )));
    }
    Ok(alg)
}

/// Embeds a wnu algebra `⟨A; w⟩` (arity at least 3) into a simple algebra
/// `⟨B; v⟩` with `B = A ∪ {0, s, a_{n+1}}`.
///
/// The original `a_1, .., a_n` are `0..n`; the fresh elements are appended
/// as `zero = n`, `s = n+1`, `a_{n+1} = n+2`. The zero is absorbing and takes
/// precedence; tuples inside `A` use `w`; constant tuples are fixed; tuples
/// with exactly one dissident coordinate use the prescribed `∘` values; every
/// other tuple goes to zero.
pub fn extend_simple_type5(alg: &FiniteAlgebra, w_symbol: &str) -> Result<FiniteAlgebra> {
    let w = alg.require(w_symbol)?;
    if !classify_table(w).wnu {
        return Err(Error::NotWnu(w_symbol.into()));
    }
    let k = w.arity();
    if k < 3 {
        return Err(Error::Invalid(alloc::format!(
            "the extension needs arity at least 3, `{w_symbol}` has {k}"
        )));
    }
    let n = alg.size();
    let (zero, s, top) = (n, n + 1, n + 2);
    let next = |j: usize| if j + 1 < n { j + 1 } else { top };
    // x ∘ y for x != y outside A × A, neither being zero
    let circ = |x: usize, y: usize| -> usize {
        match (x, y) {
            (x, y) if x == s && y < n => next(y),
            (x, y) if y == s && x < n => next(x),
            (x, y) if x == top && y < n => top,
            (x, y) if y == top && x < n => s,
            (x, y) if x == s && y == top => zero,
            (x, y) if x == top && y == s => 0,
            _ => zero,
        }
    };
    let v = table(k, n + 3, |t| {
        if t.contains(&zero) {
            return zero;
        }
        if t.iter().all(|&e| e < n) {
            return w.apply(t);
        }
        let first = t[0];
        if t.iter().all(|&e| e == first) {
            return first;
        }
        // exactly one dissident: the majority value occurs k-1 times
        let majority = if t[1..].iter().all(|&e| e == t[1]) { t[1] } else { first };
        let dissidents: Vec<usize> = t.iter().copied().filter(|&e| e != majority).collect();
        if dissidents.len() == 1 {
            circ(majority, dissidents[0])
        } else {
            zero
        }
    });
    let mut out = FiniteAlgebra::new(alloc::format!("{}+3", alg.name()), n + 3)?;
    out.add_operation("v", v)?;
    let flags = classify_table(out.require("v")?);
    if !flags.wnu {
        return Err(Error::Falsified("the extended operation is not wnu".into()));
    }
    for a in 0..n + 3 {
        for b in a + 1..n + 3 {
            if !principal_congruence(&out, a, b)?.is_total() {
                return Err(Error::Falsified(alloc::format!(
                    "the extension is not simple: Cg({a},{b}) is proper"
                )));
            }
        }
    }
    Ok(out)
}

/// Uniformly random tables, reproducible per seed.
pub fn random_algebra(n: usize, signature: &[(&str, usize)], seed: u64) -> Result<FiniteAlgebra> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_algebra_with(n, signature, &mut rng)
}

fn random_algebra_with(n: usize, signature: &[(&str, usize)], rng: &mut ChaCha8Rng) -> Result<FiniteAlgebra> {
    let mut alg = FiniteAlgebra::new(alloc::format!("random{n}"), n)?;
    for &(symbol, arity) in signature {
        let t = OperationTable::from_fn(arity, n, |_| rng.gen_range(0..n))?;
        alg.add_operation(symbol, t)?;
    }
    Ok(alg)
}

/// Upper bound on the number of algebras [`exhaustive_enumerate`] will list.
pub const ENUMERATION_CAP: usize = 1 << 20;

/// Every algebra of size `n` over `signature`, in lexicographic order of the
/// concatenated tables.
pub fn exhaustive_enumerate(
    n: usize,
    signature: &[(&str, usize)],
) -> Result<impl Iterator<Item = FiniteAlgebra>> {
    if n == 0 {
        return Err(Error::EmptyUniverse);
    }
    let lengths: Vec<usize> = signature
        .iter()
        .map(|&(_, arity)| n.checked_pow(arity as u32))
        .collect::<Option<_>>()
        .ok_or(Error::CapExceeded {
            what: "table length",
            value: usize::MAX,
            cap: ENUMERATION_CAP,
        })?;
    let total: usize = lengths.iter().sum();
    let count = u32::try_from(total)
        .ok()
        .and_then(|t| n.checked_pow(t))
        .filter(|&c| c <= ENUMERATION_CAP)
        .ok_or(Error::CapExceeded {
            what: "number of algebras to enumerate",
            value: usize::MAX,
            cap: ENUMERATION_CAP,
        })?;
    let symbols: Vec<(String, usize)> = signature.iter().map(|&(s, a)| (String::from(s), a)).collect();
    Ok((0..count).map(move |index| {
        let mut digits = vec![0; total];
        let mut rest = index;
        for slot in digits.iter_mut().rev() {
            *slot = rest % n;
            rest /= n;
        }
        let mut alg = FiniteAlgebra::new(alloc::format!("enum{n}-{index}"), n).expect("n > 0");
        let mut start = 0;
        for ((symbol, arity), len) in symbols.iter().zip(&lengths) {
            alg.add_table(symbol.clone(), *arity, digits[start..start + len].to_vec())
                .expect("valid by construction");
            start += len;
        }
        alg
    }))
}

/// Families a corpus can draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// A chain, tree or diamond semilattice with `d = (x∧y)∧z`.
    SemilatticeWithD,
    /// `Z_m` as a single Mal'cev block.
    AffineBlock,
    /// Affine blocks glued along a semilattice with random representatives.
    GluedSmb,
    /// Uniformly random tables in the SMB signature.
    RandomSignature,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSpec {
    pub seed: u64,
    pub min_size: usize,
    pub max_size: usize,
    pub families: Vec<Family>,
    /// Algebras drawn per family.
    pub per_family: usize,
}

impl CorpusSpec {
    pub fn new(seed: u64, max_size: usize) -> CorpusSpec {
        CorpusSpec {
            seed,
            min_size: 1,
            max_size,
            families: vec![
                Family::SemilatticeWithD,
                Family::AffineBlock,
                Family::GluedSmb,
                Family::RandomSignature,
            ],
            per_family: 5,
        }
    }

    /// Deterministic for fixed fields; algebras above `max_size` are skipped.
    pub fn generate(&self) -> Result<Vec<FiniteAlgebra>> {
        if self.min_size == 0 || self.min_size > self.max_size {
            return Err(Error::Invalid("corpus size bounds must satisfy 1 <= min <= max".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::new();
        for &family in &self.families {
            let mut made = 0;
            let mut attempts = 0;
            while made < self.per_family && attempts < 50 * self.per_family {
                attempts += 1;
                let n = rng.gen_range(self.min_size..=self.max_size);
                let alg = match family {
                    Family::SemilatticeWithD => random_semilattice(n, &mut rng),
                    Family::AffineBlock => affine_block(n),
                    Family::GluedSmb => match random_glued(n, &mut rng)? {
                        Some(a) => a,
                        None => continue,
                    },
                    Family::RandomSignature => random_algebra_with(n, &SMB_SIGNATURE, &mut rng)?,
                };
                out.push(alg);
                made += 1;
            }
        }
        Ok(out)
    }
}

/// A random tree semilattice on `n` elements.
fn random_semilattice(n: usize, rng: &mut ChaCha8Rng) -> FiniteAlgebra {
    let parent: Vec<usize> = (0..n).map(|x| if x == 0 { 0 } else { rng.gen_range(0..x) }).collect();
    semilattice_tree(&parent).expect("parents precede children")
}

/// Affine blocks of sizes 1..=3 glued along a random tree semilattice, with
/// total size exactly `n`; `None` if the draw does not fit.
fn random_glued(n: usize, rng: &mut ChaCha8Rng) -> Result<Option<FiniteAlgebra>> {
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = rng.gen_range(1..=left.min(3));
        sizes.push(s);
        left -= s;
    }
    if sizes.len() < 2 {
        return Ok(None);
    }
    let classes = random_semilattice(sizes.len(), rng);
    let blocks: Vec<FiniteAlgebra> = sizes.iter().map(|&s| affine_block(s)).collect();
    let reps: Vec<usize> = sizes.iter().map(|&s| rng.gen_range(0..s)).collect();
    let mut alg = glue_smb(&classes, &blocks, &reps)?;
    alg.set_name(alloc::format!("glued{n}"));
    Ok(Some(alg))
}

/// `count` glued SMB algebras of sizes `3..=max_size` that are not regular,
/// reproducible per seed.
pub fn glued_corpus(seed: u64, count: usize, max_size: usize) -> Result<Vec<FiniteAlgebra>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 100 * count.max(1) {
        attempts += 1;
        let n = rng.gen_range(3..=max_size.max(3));
        if let Some(alg) = random_glued(n, &mut rng)? {
            if !crate::regular::is_regular_smb(&alg)? {
                out.push(alg);
            }
        }
    }
    Ok(out)
}

/// Small SMB algebras that are regular: named examples, semilattices,
/// affine blocks, products and regularized glued algebras, sizes 1 to 8.
pub fn regular_corpus() -> Vec<FiniteAlgebra> {
    let mut out = vec![
        example_one(),
        example_b2(),
        example_s2(),
        example_e3(),
        affine_block(3),
        affine_block(4),
        affine_block(5),
        semilattice_chain(3),
        semilattice_chain(4),
        semilattice_diamond(),
        semilattice_tree(&[0, 0, 0, 1, 1]).expect("valid tree"),
    ];
    let products = [
        (example_e3(), example_b2()),
        (example_e3(), example_s2()),
        (example_b2(), example_b2()),
        (example_s2(), example_b2()),
        (example_s2(), example_s2()),
        (affine_block(3), example_s2()),
        (semilattice_chain(4), example_b2()),
    ];
    for (a, b) in products {
        out.push(a.product(&b).expect("same signature"));
    }
    let b4 = example_b2().product(&example_b2()).expect("same signature");
    out.push(b4.product(&example_b2()).expect("same signature"));
    for alg in nonregular_smb_corpus() {
        out.push(crate::wnu::regularize(&alg, None).expect("glued algebras are SMB"));
    }
    out
}

/// SMB algebras that are not regular: N4 and a few glued ones.
pub fn nonregular_smb_corpus() -> Vec<FiniteAlgebra> {
    let mut out = vec![example_n4()];
    let chain3 = semilattice_from_meet("c3", table(2, 3, |t| t[0].max(t[1])));
    out.push(
        glue_smb(&chain3, &[affine_block(2), affine_block(1), affine_block(2)], &[1, 0, 0])
            .expect("valid glue"),
    );
    out.push(glue_smb(&semilattice_diamond(), &[affine_block(1), affine_block(2), affine_block(2), affine_block(1)], &[0, 1, 0, 0]).expect("valid glue"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::one_dissident;

    #[test]
    fn e3_table_matches_the_listing() {
        let e3 = example_e3();
        assert_eq!(
            e3.require(MALCEV).unwrap().entries(),
            &[0, 1, 2, 1, 0, 2, 2, 2, 2, 1, 0, 2, 0, 1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2]
        );
        assert_eq!(e3.require(WEDGE).unwrap().entries(), &[0, 1, 2, 0, 1, 2, 2, 2, 2]);
    }

    #[test]
    fn n4_tables() {
        let n4 = example_n4();
        let w = n4.require(WEDGE).unwrap();
        assert_eq!(w.at2(0, 2), 3);
        assert_eq!(w.at2(2, 0), 3);
        assert_eq!(w.at2(0, 1), 1);
        assert_eq!(w.at2(3, 2), 2);
    }

    #[test]
    fn singleton_blocks_give_back_the_semilattice() {
        let chain = semilattice_chain(3);
        let blocks = vec![affine_block(1); 3];
        let glued = glue_smb(&chain, &blocks, &[0, 0, 0]).unwrap();
        assert_eq!(glued.operation(WEDGE), chain.operation(WEDGE));
        assert_eq!(glued.operation(MALCEV), chain.operation(MALCEV));
        let one_block = glue_smb(&example_one(), &[affine_block(2)], &[0]).unwrap();
        assert_eq!(one_block.operation(MALCEV), example_b2().operation(MALCEV));
    }

    #[test]
    fn extension_of_small_algebras() {
        let b = extend_simple_type5(&example_b2(), MALCEV).unwrap();
        assert_eq!(b.size(), 5);
        let v = b.require("v").unwrap();
        assert_eq!(v.at3(2, 0, 1), 2);
        assert_eq!(one_dissident(v, 3, 0, 0), 1);
        assert!(extend_simple_type5(&example_one(), MALCEV).is_ok());
        assert!(matches!(extend_simple_type5(&example_n4(), WEDGE), Err(Error::NotWnu(_))));
    }

    #[test]
    fn enumeration_and_randomness() {
        assert_eq!(exhaustive_enumerate(2, &SMB_SIGNATURE).unwrap().count(), 4096);
        assert!(exhaustive_enumerate(3, &SMB_SIGNATURE).is_err());
        let a = random_algebra(3, &SMB_SIGNATURE, 7).unwrap();
        assert_eq!(a, random_algebra(3, &SMB_SIGNATURE, 7).unwrap());
        let spec = CorpusSpec::new(1, 5);
        assert_eq!(spec.generate().unwrap(), spec.generate().unwrap());
    }
}
