//! Terms and polynomials over a signature, with shared subterms.
//!
//! A [`Term`] is stored as an arena of nodes in which every application only
//! refers to earlier nodes and the root is the last node. This keeps the DAGs
//! produced by trace replay linear in size, and evaluation is a single pass.
//! Element literals ([`Node::Const`]) turn terms into polynomials.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{FiniteAlgebra, OperationTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Var(usize),
    Const(usize),
    Apply { symbol: String, args: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    nodes: Vec<Node>,
}

impl Term {
    pub fn var(index: usize) -> Term {
        Term {
            nodes: vec![Node::Var(index)],
        }
    }

    pub fn constant(element: usize) -> Term {
        Term {
            nodes: vec![Node::Const(element)],
        }
    }

    pub fn apply(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        let mut nodes = Vec::new();
        let mut roots = Vec::with_capacity(args.len());
        for arg in args {
            let offset = nodes.len();
            nodes.extend(arg.nodes.into_iter().map(|node| match node {
                Node::Apply { symbol, args } => Node::Apply {
                    symbol,
                    args: args.into_iter().map(|a| a + offset).collect(),
                },
                leaf => leaf,
            }));
            roots.push(nodes.len() - 1);
        }
        nodes.push(Node::Apply {
            symbol: symbol.into(),
            args: roots,
        });
        Term { nodes }
    }

    /// Binary application, the common case for `wedge`.
    pub fn apply2(symbol: &str, x: Term, y: Term) -> Term {
        Term::apply(symbol, vec![x, y])
    }

    pub fn apply3(symbol: &str, x: Term, y: Term, z: Term) -> Term {
        Term::apply(symbol, vec![x, y, z])
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    /// One more than the largest variable index, or 0 for ground terms.
    pub fn var_count(&self) -> usize {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Var(i) => Some(i + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Variables that actually occur, in increasing order.
    pub fn variables(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self
            .nodes
            .iter()
            .filter_map(|n| match n {
                Node::Var(i) => Some(*i),
                _ => None,
            })
            .collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    /// Replaces every variable leaf by the leaf chosen by `leaf` (a variable
    /// or a constant). Structure and sharing are preserved.
    pub fn substitute_leaves(&self, mut leaf: impl FnMut(usize) -> Node) -> Term {
        let nodes = self
            .nodes
            .iter()
            .map(|n| match n {
                Node::Var(i) => {
                    let replacement = leaf(*i);
                    debug_assert!(!matches!(replacement, Node::Apply { .. }));
                    replacement
                }
                other => other.clone(),
            })
            .collect();
        Term { nodes }
    }

    /// Number of nodes in the expanded tree (not the DAG).
    pub fn tree_size(&self) -> usize {
        let mut sizes = vec![0usize; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            sizes[i] = match node {
                Node::Apply { args, .. } => {
                    args.iter().fold(1usize, |acc, &a| acc.saturating_add(sizes[a]))
                }
                _ => 1,
            };
        }
        sizes[self.root()]
    }

    /// Resolves symbols against `alg` once so the term can be evaluated many
    /// times without lookups.
    pub fn compile<'a>(&self, alg: &'a FiniteAlgebra) -> Result<CompiledTerm<'a>> {
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            nodes.push(match node {
                Node::Var(i) => CNode::Var(*i),
                Node::Const(c) => {
                    alg.check_element(*c)?;
                    CNode::Const(*c)
                }
                Node::Apply { symbol, args } => {
                    let table = alg
                        .operation(symbol)
                        .ok_or_else(|| Error::UnknownSymbol(symbol.clone()))?;
                    if table.arity() != args.len() {
                        return Err(Error::ArityMismatch {
                            symbol: symbol.clone(),
                            expected: table.arity(),
                            found: args.len(),
                        });
                    }
                    CNode::Apply {
                        table,
                        args: args.clone(),
                    }
                }
            });
        }
        Ok(CompiledTerm {
            nodes,
            var_count: self.var_count(),
        })
    }
}

/// Builds a term node by node; used when replaying derivation traces.
#[derive(Debug, Default, Clone)]
pub struct TermBuilder {
    nodes: Vec<Node>,
}

impl TermBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, node: Node) -> usize {
        if let Node::Apply { args, .. } = &node {
            debug_assert!(args.iter().all(|&a| a < self.nodes.len()));
        }
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Extracts the term rooted at `root`, dropping unreachable nodes.
    pub fn build(&self, root: usize) -> Term {
        let mut reachable = vec![false; root + 1];
        reachable[root] = true;
        for i in (0..=root).rev() {
            if reachable[i] {
                if let Node::Apply { args, .. } = &self.nodes[i] {
                    for &a in args {
                        reachable[a] = true;
                    }
                }
            }
        }
        let mut renumber = vec![usize::MAX; root + 1];
        let mut nodes = Vec::new();
        for i in 0..=root {
            if !reachable[i] {
                continue;
            }
            renumber[i] = nodes.len();
            nodes.push(match &self.nodes[i] {
                Node::Apply { symbol, args } => Node::Apply {
                    symbol: symbol.clone(),
                    args: args.iter().map(|&a| renumber[a]).collect(),
                },
                leaf => leaf.clone(),
            });
        }
        Term { nodes }
    }
}

#[derive(Debug, Clone)]
enum CNode<'a> {
    Var(usize),
    Const(usize),
    Apply {
        table: &'a OperationTable,
        args: Vec<usize>,
    },
}

/// A term bound to the tables of one algebra.
#[derive(Debug, Clone)]
pub struct CompiledTerm<'a> {
    nodes: Vec<CNode<'a>>,
    var_count: usize,
}

impl CompiledTerm<'_> {
    pub fn var_count(&self) -> usize {
        self.var_count
    }

    /// Evaluates without checking the assignment length; callers must have
    /// checked `assignment.len() >= var_count()`.
    pub fn eval_with(&self, assignment: &[usize], values: &mut Vec<usize>, args: &mut Vec<usize>) -> usize {
        values.clear();
        for node in &self.nodes {
            let v = match node {
                CNode::Var(i) => assignment[*i],
                CNode::Const(c) => *c,
                CNode::Apply { table, args: children } => {
                    args.clear();
                    args.extend(children.iter().map(|&c| values[c]));
                    table.apply(args)
                }
            };
            values.push(v);
        }
        *values.last().expect("terms are non-empty")
    }

    pub fn eval(&self, assignment: &[usize]) -> Result<usize> {
        if assignment.len() < self.var_count {
            return Err(Error::AssignmentTooShort {
                index: self.var_count - 1,
                len: assignment.len(),
            });
        }
        Ok(self.eval_with(assignment, &mut Vec::new(), &mut Vec::new()))
    }
}

/// Value of `t` under `assignment` (variable `i` takes `assignment[i]`).
pub fn eval_term(alg: &FiniteAlgebra, t: &Term, assignment: &[usize]) -> Result<usize> {
    for &a in assignment {
        alg.check_element(a)?;
    }
    t.compile(alg)?.eval(assignment)
}

/// The m-ary table of the term operation of `t`.
pub fn materialize_term(alg: &FiniteAlgebra, t: &Term, arity: usize) -> Result<OperationTable> {
    let compiled = t.compile(alg)?;
    if compiled.var_count() > arity {
        return Err(Error::AssignmentTooShort {
            index: compiled.var_count() - 1,
            len: arity,
        });
    }
    let mut values = Vec::new();
    let mut args = Vec::new();
    OperationTable::from_fn(arity, alg.size(), |tuple| {
        compiled.eval_with(tuple, &mut values, &mut args)
    })
}

/// Conventional display name of variable `i`: x, y, z, u, v, w, then x6, x7, ...
pub fn variable_name(i: usize) -> String {
    const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
    match NAMES.get(i) {
        Some(n) => n.to_string(),
        None => alloc::format!("x{i}"),
    }
}

impl Term {
    fn fmt_node(&self, f: &mut fmt::Formatter<'_>, i: usize) -> fmt::Result {
        match &self.nodes[i] {
            Node::Var(v) => f.write_str(&variable_name(*v)),
            Node::Const(c) => write!(f, "@{c}"),
            Node::Apply { symbol, args } => {
                write!(f, "{symbol}(")?;
                for (k, &a) in args.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    self.fmt_node(f, a)?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_node(f, self.root())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::example_e3;

    fn x() -> Term {
        Term::var(0)
    }
    fn y() -> Term {
        Term::var(1)
    }

    #[test]
    fn eval_examples_on_e3() {
        let e3 = example_e3();
        let d = Term::apply3("d", x(), y(), Term::var(2));
        assert_eq!(eval_term(&e3, &d, &[0, 1, 0]).unwrap(), 1);
        assert_eq!(eval_term(&e3, &x(), &[2]).unwrap(), 2);
        let meet = Term::apply3("d", x(), x(), y());
        assert_eq!(eval_term(&e3, &meet, &[0, 2]).unwrap(), 2);
    }

    #[test]
    fn eval_errors_name_the_offender() {
        let e3 = example_e3();
        let bad = Term::apply2("f", x(), y());
        assert_eq!(eval_term(&e3, &bad, &[0, 0]), Err(Error::UnknownSymbol("f".into())));
        let bad = Term::apply2("d", x(), y());
        assert_eq!(
            eval_term(&e3, &bad, &[0, 0]),
            Err(Error::ArityMismatch {
                symbol: "d".into(),
                expected: 3,
                found: 2
            })
        );
        let t = Term::apply3("d", x(), y(), Term::var(2));
        assert_eq!(
            eval_term(&e3, &t, &[0, 0]),
            Err(Error::AssignmentTooShort { index: 2, len: 2 })
        );
    }

    #[test]
    fn materialize_examples() {
        let e3 = example_e3();
        let meet = materialize_term(&e3, &Term::apply3("d", x(), x(), y()), 2).unwrap();
        assert_eq!(meet.entries(), &[0, 1, 2, 0, 1, 2, 2, 2, 2]);
        let id = materialize_term(&e3, &x(), 1).unwrap();
        assert_eq!(id.entries(), &[0, 1, 2]);
        let w = |a, b| Term::apply2("wedge", a, b);
        let regiv = materialize_term(&e3, &w(w(x(), y()), y()), 2).unwrap();
        assert_eq!(&regiv, e3.require("wedge").unwrap());
    }

    #[test]
    fn builder_shares_subterms_and_drops_garbage() {
        let mut b = TermBuilder::new();
        let v = b.push(Node::Var(0));
        let _unused = b.push(Node::Const(1));
        let m = b.push(Node::Apply {
            symbol: "wedge".into(),
            args: vec![v, v],
        });
        let top = b.push(Node::Apply {
            symbol: "wedge".into(),
            args: vec![m, m],
        });
        let t = b.build(top);
        assert_eq!(t.nodes().len(), 3);
        assert_eq!(t.tree_size(), 7);
        assert_eq!(t.to_string(), "wedge(wedge(x,x),wedge(x,x))");
    }

    #[test]
    fn substitution_pins_constants() {
        let t = Term::apply3("d", x(), x(), y());
        let p = t.substitute_leaves(|i| if i == 0 { Node::Const(1) } else { Node::Var(0) });
        assert_eq!(p.to_string(), "d(@1,@1,x)");
        let e3 = example_e3();
        assert_eq!(eval_term(&e3, &p, &[0]).unwrap(), 0);
    }
}
