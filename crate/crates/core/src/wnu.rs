//! Term constructions around a weak near-unanimity operation `w`: the binary
//! `x∘y = w(x,..,x,y)`, the iterates `w_i`, the special `∘_v`, the induced
//! order on classes, the derived semilattice term, and regularization.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{FiniteAlgebra, OperationTable};
use crate::classify::{classify_table, one_dissident};
use crate::commutator::is_abelian;
use crate::congruence::{check_congruence, congruence_lattice};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::regular::check_regular_base;
use crate::smb::{check_smb_over, describe_violations, find_smb_congruences, ClassOrder, SmbReport, MALCEV, WEDGE};
use crate::transform::idempotent_power;

/// Largest table [`iterate_wnu`] will build.
pub const ITERATION_TABLE_CAP: usize = 1 << 22;

fn require_wnu<'a>(alg: &'a FiniteAlgebra, w_symbol: &str) -> Result<&'a OperationTable> {
    let w = alg.require(w_symbol)?;
    if classify_table(w).wnu {
        Ok(w)
    } else {
        Err(Error::NotWnu(w_symbol.into()))
    }
}

fn circ_of(w: &OperationTable) -> OperationTable {
    let k = w.arity();
    OperationTable::from_fn(2, w.size(), |t| one_dissident(w, t[0], t[1], k - 1)).expect("binary table")
}

/// `x∘y = w(x,..,x,y)`.
pub fn circ_table(alg: &FiniteAlgebra, w_symbol: &str) -> Result<OperationTable> {
    Ok(circ_of(require_wnu(alg, w_symbol)?))
}

/// One step `w_{i+1}(x̄) = w_i(w_i(x̄)∘x_1, .., w_i(x̄)∘x_k)`.
fn iterate_once(w: &OperationTable) -> OperationTable {
    let circ = circ_of(w);
    let mut inner = vec![0; w.arity()];
    OperationTable::from_fn(w.arity(), w.size(), |t| {
        let value = w.apply(t);
        for (slot, &x) in inner.iter_mut().zip(t) {
            *slot = circ.at2(value, x);
        }
        w.apply(&inner)
    })
    .expect("same shape")
}

/// The table of `w_{|A|}`. Every iterate is checked to be wnu again; a loss
/// is reported as falsification.
pub fn iterate_wnu(alg: &FiniteAlgebra, w_symbol: &str) -> Result<OperationTable> {
    let w = require_wnu(alg, w_symbol)?;
    let n = alg.size();
    let len = w.entries().len();
    if len > ITERATION_TABLE_CAP {
        return Err(Error::CapExceeded {
            what: "iterated table length",
            value: len,
            cap: ITERATION_TABLE_CAP,
        });
    }
    let mut current = w.clone();
    for i in 1..n {
        let next = iterate_once(&current);
        if !classify_table(&next).wnu {
            return Err(Error::Falsified(format!("w_{} is not wnu", i + 1)));
        }
        if next == current {
            break;
        }
        current = next;
    }
    Ok(current)
}

/// `x ∘_v y`: for each `x`, the idempotent power of `y ↦ x∘y`.
fn special_of(circ: &OperationTable) -> Result<OperationTable> {
    let n = circ.size();
    let mut entries = Vec::with_capacity(n * n);
    for x in 0..n {
        let f: Vec<usize> = (0..n).map(|y| circ.at2(x, y)).collect();
        entries.extend(idempotent_power(&f));
    }
    let table = OperationTable::new(2, n, entries)?;
    for x in 0..n {
        for y in 0..n {
            if table.at2(x, table.at2(x, y)) != table.at2(x, y) {
                return Err(Error::Falsified(format!("special circ is not absorbing at ({x},{y})")));
            }
        }
    }
    Ok(table)
}

/// The binary `∘_v` of the special wnu built from `w`, without building `v`.
pub fn special_circ(alg: &FiniteAlgebra, w_symbol: &str) -> Result<OperationTable> {
    special_of(&circ_table(alg, w_symbol)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OrderDiagnostics {
    /// Class pairs `(i, j)` for which `(y∘x) ∼ x` depends on the choice of
    /// `x ∈ i`, `y ∈ j`.
    pub inconsistent: Vec<(usize, usize)>,
    pub partial_order: bool,
    pub least: Option<usize>,
    pub greatest: Option<usize>,
    pub glb_closed: bool,
}

impl OrderDiagnostics {
    pub fn consistent(&self) -> bool {
        self.inconsistent.is_empty()
    }
}

/// `[x] ≤ [y]` iff `(y∘x) ∼ x`, required of every choice of representatives.
pub fn class_order_from_circ(
    circ: &OperationTable,
    sim: &Partition,
) -> Result<(ClassOrder, OrderDiagnostics)> {
    let n = circ.size();
    if sim.size() != n {
        return Err(Error::SizeMismatch {
            left: n,
            right: sim.size(),
        });
    }
    let reps = sim.representatives();
    for x in 0..n {
        for y in 0..n {
            let (rx, ry) = (reps[sim.class_of(x)], reps[sim.class_of(y)]);
            for (x2, y2) in [(rx, y), (x, ry)] {
                if !sim.related(circ.at2(x, y), circ.at2(x2, y2)) {
                    return Err(Error::NotCongruence {
                        symbol: "circ".into(),
                        left: vec![x2, y2],
                        right: vec![x, y],
                    });
                }
            }
        }
    }
    let m = sim.num_classes();
    let classes = sim.classes();
    let mut inconsistent = Vec::new();
    let mut leq = vec![false; m * m];
    for i in 0..m {
        for j in 0..m {
            let mut outcomes = classes[i]
                .iter()
                .flat_map(|&x| classes[j].iter().map(move |&y| (x, y)))
                .map(|(x, y)| sim.related(circ.at2(y, x), x));
            let first = outcomes.next().unwrap_or(false);
            let uniform = outcomes.all(|o| o == first);
            if !uniform {
                inconsistent.push((i, j));
            }
            leq[i * m + j] = first && uniform;
        }
    }
    let order = ClassOrder::new(classes, |i, j| leq[i * m + j]);
    let diagnostics = OrderDiagnostics {
        inconsistent,
        partial_order: order.is_partial_order(),
        least: order.least(),
        greatest: order.greatest(),
        glb_closed: order.has_all_glbs(),
    };
    Ok((order, diagnostics))
}

/// Output of [`semilattice_term`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilatticeTerm {
    /// `x∧y = (y∘_v x)∘_v y` for `∘_v` built from `w_{|A|}`.
    pub wedge: OperationTable,
    /// The algebra `⟨A; wedge, d⟩` (with `d` taken from the input when
    /// present, the first projection otherwise) checked over `sim`; only
    /// the `wedge` rules are meaningful without a `d`.
    pub report: SmbReport,
    pub order: ClassOrder,
    pub diagnostics: OrderDiagnostics,
    /// Whether `sim ≺ 1_A`; informational only.
    pub maximal: bool,
}

/// The binary term of the semilattice construction, under checkable
/// surrogate hypotheses: `w` is wnu, `sim` is an Abelian congruence, and the
/// `∘`-order of `w_{|A|}` on the classes is a consistent partial order with a
/// greatest class. When they hold, the result must make the quotient a
/// semilattice with `∧` the second projection on each class; otherwise the
/// error is falsification.
pub fn semilattice_term(alg: &FiniteAlgebra, w_symbol: &str, sim: &Partition) -> Result<SemilatticeTerm> {
    require_wnu(alg, w_symbol)?;
    if let Err(e) = check_congruence(alg, sim) {
        return Err(Error::HypothesesNotEstablished(format!("{sim} is not a congruence: {e}")));
    }
    if !is_abelian(alg, sim)? {
        return Err(Error::HypothesesNotEstablished(format!("{sim} is not Abelian")));
    }
    let iterated = iterate_wnu(alg, w_symbol)?;
    let circ = circ_of(&iterated);
    let (order, diagnostics) = class_order_from_circ(&circ, sim)?;
    if !diagnostics.consistent() || !diagnostics.partial_order {
        return Err(Error::HypothesesNotEstablished(
            "the circ relation on classes is not a well-defined partial order".into(),
        ));
    }
    if diagnostics.greatest.is_none() {
        return Err(Error::HypothesesNotEstablished("no greatest class in the circ order".into()));
    }
    let maximal = congruence_lattice(alg)
        .map(|con| con.is_cover(sim, &Partition::total(alg.size())))
        .unwrap_or(false);
    let special = special_of(&circ)?;
    let wedge = OperationTable::from_fn(2, alg.size(), |t| special.at2(special.at2(t[1], t[0]), t[1]))?;

    let mut probe = FiniteAlgebra::new(alg.name(), alg.size())?;
    let d = match alg.operation(MALCEV) {
        Some(d) if d.arity() == 3 => d.clone(),
        _ => OperationTable::projection(3, alg.size(), 0)?,
    };
    probe.add_operation(MALCEV, d)?;
    probe.add_operation(WEDGE, wedge.clone())?;
    let report = check_smb_over(&probe, sim)?;
    let wedge_rules_fail = report.violations.iter().any(|v| v.rule != "malcev" && v.rule != "congruence");
    if wedge_rules_fail {
        return Err(Error::Falsified(format!(
            "the derived wedge fails over {sim}: {}",
            describe_violations(&report.violations)
        )));
    }
    Ok(SemilatticeTerm {
        wedge,
        report,
        order,
        diagnostics,
        maximal,
    })
}

/// All stages for one wnu symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineResult {
    pub circ: OperationTable,
    pub circ_iterated: OperationTable,
    pub circ_special: OperationTable,
    /// The derived `∧` and the congruence it was built over, when some
    /// congruence satisfies the hypotheses.
    pub wedge_candidate: Option<(Partition, OperationTable)>,
    pub diagnostics: Vec<String>,
}

/// Runs every stage. Without `sim`, congruences are tried from the top of
/// the lattice down and the first one meeting the hypotheses is used.
pub fn run_pipeline(alg: &FiniteAlgebra, w_symbol: &str, sim: Option<&Partition>) -> Result<PipelineResult> {
    let circ = circ_table(alg, w_symbol)?;
    let iterated = iterate_wnu(alg, w_symbol)?;
    let circ_iterated = circ_of(&iterated);
    let circ_special = special_of(&circ_iterated)?;
    let mut diagnostics = Vec::new();
    diagnostics.push(format!(
        "w_{} reached; circ {} by iteration",
        alg.size(),
        if circ_iterated == circ { "unchanged" } else { "changed" }
    ));
    if circ_special == circ_iterated {
        diagnostics.push("circ of w_|A| is already special".into());
    }
    let candidates: Vec<Partition> = match sim {
        Some(s) => vec![s.clone()],
        None => {
            let mut all = congruence_lattice(alg)?.elements().to_vec();
            all.reverse();
            all
        }
    };
    let mut wedge_candidate = None;
    for theta in candidates {
        match semilattice_term(alg, w_symbol, &theta) {
            Ok(found) => {
                diagnostics.push(format!(
                    "semilattice term over {theta}: least class {:?}, greatest {:?}, maximal {}",
                    found.diagnostics.least, found.diagnostics.greatest, found.maximal
                ));
                wedge_candidate = Some((theta, found.wedge));
                break;
            }
            Err(Error::HypothesesNotEstablished(why)) => {
                diagnostics.push(format!("over {theta}: hypotheses not established ({why})"));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(PipelineResult {
        circ,
        circ_iterated,
        circ_special,
        wedge_candidate,
        diagnostics,
    })
}

/// `x∧'y`: the idempotent power of `t ↦ t∧y`, applied to `x`.
pub fn regular_wedge(wedge: &OperationTable) -> OperationTable {
    let n = wedge.size();
    let powers: Vec<Vec<usize>> = (0..n)
        .map(|y| idempotent_power(&(0..n).map(|t| wedge.at2(t, y)).collect::<Vec<_>>()))
        .collect();
    OperationTable::from_fn(2, n, |t| powers[t[1]][t[0]]).expect("binary table")
}

/// Replaces `∧` and `d` by the regular `∧'` and
/// `d'(x,y,z) = d((y∧'z)∧'x, (x∧'z)∧'y, (x∧'y)∧'z)` over the same `∼`
/// (the first SMB congruence when none is given). Checks that the result
/// passes the regular base with the same `∼` and that `d'` agrees with `d`
/// inside every class.
pub fn regularize(alg: &FiniteAlgebra, sim: Option<&Partition>) -> Result<FiniteAlgebra> {
    let sim = match sim {
        Some(s) => {
            let report = check_smb_over(alg, s)?;
            if !report.holds {
                return Err(Error::NotSmb(describe_violations(&report.violations)));
            }
            s.clone()
        }
        None => find_smb_congruences(alg)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::NotSmb("no congruence makes it SMB".into()))?,
    };
    let wedge = alg.require_arity(WEDGE, 2)?;
    let d = alg.require_arity(MALCEV, 3)?;
    let w2 = regular_wedge(wedge);
    let m = |a, b| w2.at2(a, b);
    let d2 = OperationTable::from_fn(3, alg.size(), |t| {
        let (x, y, z) = (t[0], t[1], t[2]);
        d.at3(m(m(y, z), x), m(m(x, z), y), m(m(x, y), z))
    })?;
    let mut out = alg.clone();
    out.set_operation(WEDGE, w2)?;
    out.set_operation(MALCEV, d2)?;
    out.set_name(format!("{}-regular", alg.name()));

    let base = check_regular_base(&out)?;
    if base.recovered_sim.as_ref() != Some(&sim) {
        return Err(Error::Falsified(format!(
            "regularized algebra recovers {:?} instead of {sim}",
            base.recovered_sim.map(|p| alloc::string::ToString::to_string(&p))
        )));
    }
    let d2 = out.require(MALCEV)?;
    for x in 0..alg.size() {
        for y in (0..alg.size()).filter(|&y| sim.related(x, y)) {
            for z in (0..alg.size()).filter(|&z| sim.related(x, z)) {
                if d2.at3(x, y, z) != d.at3(x, y, z) {
                    return Err(Error::Falsified(format!("d' differs from d at ({x},{y},{z})")));
                }
            }
        }
    }
    Ok(out)
}
