//! Finite algebras as named operation tables.
//!
//! The universe of an algebra of size `n` is always `{0, .., n-1}`. A k-ary
//! operation is stored as a flat table of `n^k` entries, row-major with the
//! last argument varying fastest:
//!
//! ```text
//! index(x1, .., xk) = ((x1 * n + x2) * n + ..) * n + xk
//! ```
//!
//! The same convention is used by the `.alg` file format.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One k-ary operation on `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OperationTable {
    arity: usize,
    size: usize,
    entries: Vec<usize>,
}

impl OperationTable {
    pub fn new(arity: usize, size: usize, entries: Vec<usize>) -> Result<Self> {
        Self::validated("<anonymous>", arity, size, entries)
    }

    fn validated(symbol: &str, arity: usize, size: usize, entries: Vec<usize>) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyUniverse);
        }
        if arity == 0 {
            return Err(Error::ZeroArity(symbol.to_string()));
        }
        let expected = table_len(size, arity)?;
        if entries.len() != expected {
            return Err(Error::TableLength {
                symbol: symbol.to_string(),
                expected,
                found: entries.len(),
            });
        }
        if let Some(&element) = entries.iter().find(|&&e| e >= size) {
            return Err(Error::ElementOutOfRange { element, size });
        }
        Ok(OperationTable {
            arity,
            size,
            entries,
        })
    }

    /// Tabulates `f` over all argument tuples in index order.
    pub fn from_fn(arity: usize, size: usize, mut f: impl FnMut(&[usize]) -> usize) -> Result<Self> {
        let len = table_len(size, arity)?;
        let mut entries = Vec::with_capacity(len);
        let mut tuples = Tuples::new(size, arity);
        while let Some(args) = tuples.next_tuple() {
            entries.push(f(args));
        }
        Self::new(arity, size, entries)
    }

    /// The k-ary projection onto coordinate `coord`.
    pub fn projection(arity: usize, size: usize, coord: usize) -> Result<Self> {
        if coord >= arity {
            return Err(Error::Invalid(alloc::format!(
                "projection coordinate {coord} for arity {arity}"
            )));
        }
        Self::from_fn(arity, size, |args| args[coord])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    #[inline]
    pub fn index(&self, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        args.iter().fold(0, |acc, &x| acc * self.size + x)
    }

    #[inline]
    pub fn apply(&self, args: &[usize]) -> usize {
        self.entries[self.index(args)]
    }

    /// Shorthand for binary tables.
    #[inline]
    pub fn at2(&self, x: usize, y: usize) -> usize {
        debug_assert_eq!(self.arity, 2);
        self.entries[x * self.size + y]
    }

    /// Shorthand for ternary tables.
    #[inline]
    pub fn at3(&self, x: usize, y: usize, z: usize) -> usize {
        debug_assert_eq!(self.arity, 3);
        self.entries[(x * self.size + y) * self.size + z]
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.size).all(|x| self.apply(&vec![x; self.arity]) == x)
    }
}

fn table_len(size: usize, arity: usize) -> Result<usize> {
    u32::try_from(arity)
        .ok()
        .and_then(|a| size.checked_pow(a))
        .ok_or(Error::CapExceeded {
            what: "operation table length",
            value: usize::MAX,
            cap: usize::MAX >> 1,
        })
}

/// A finite algebra: a universe `{0, .., size-1}` with named operations kept
/// in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    size: usize,
    operations: Vec<(String, OperationTable)>,
}

impl FiniteAlgebra {
    pub fn new(name: impl Into<String>, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyUniverse);
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            size,
            operations: Vec::new(),
        })
    }

    /// Builder-style variant of [`FiniteAlgebra::add_operation`].
    pub fn with_operation(mut self, symbol: impl Into<String>, table: OperationTable) -> Result<Self> {
        self.add_operation(symbol, table)?;
        Ok(self)
    }

    pub fn add_operation(&mut self, symbol: impl Into<String>, table: OperationTable) -> Result<()> {
        let symbol = symbol.into();
        if self.operations.iter().any(|(s, _)| *s == symbol) {
            return Err(Error::DuplicateSymbol(symbol));
        }
        if table.size != self.size {
            return Err(Error::SizeMismatch {
                left: self.size,
                right: table.size,
            });
        }
        self.operations.push((symbol, table));
        Ok(())
    }

    /// Adds an operation from raw entries, reporting errors against `symbol`.
    pub fn add_table(&mut self, symbol: impl Into<String>, arity: usize, entries: Vec<usize>) -> Result<()> {
        let symbol = symbol.into();
        let table = OperationTable::validated(&symbol, arity, self.size, entries)?;
        self.add_operation(symbol, table)
    }

    /// Replaces an existing operation table, or appends it.
    pub fn set_operation(&mut self, symbol: &str, table: OperationTable) -> Result<()> {
        if table.size != self.size {
            return Err(Error::SizeMismatch {
                left: self.size,
                right: table.size,
            });
        }
        match self.operations.iter_mut().find(|(s, _)| s == symbol) {
            Some(slot) => slot.1 = table,
            None => self.operations.push((symbol.to_string(), table)),
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn operations(&self) -> impl ExactSizeIterator<Item = (&str, &OperationTable)> {
        self.operations.iter().map(|(s, t)| (s.as_str(), t))
    }

    pub fn num_operations(&self) -> usize {
        self.operations.len()
    }

    pub fn operation(&self, symbol: &str) -> Option<&OperationTable> {
        self.operations.iter().find(|(s, _)| s == symbol).map(|(_, t)| t)
    }

    pub fn operation_index(&self, symbol: &str) -> Option<usize> {
        self.operations.iter().position(|(s, _)| s == symbol)
    }

    pub fn operation_at(&self, index: usize) -> (&str, &OperationTable) {
        let (s, t) = &self.operations[index];
        (s, t)
    }

    pub fn require(&self, symbol: &str) -> Result<&OperationTable> {
        self.operation(symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    /// Like [`FiniteAlgebra::require`] but also checks the arity.
    pub fn require_arity(&self, symbol: &str, arity: usize) -> Result<&OperationTable> {
        let table = self.require(symbol)?;
        if table.arity != arity {
            return Err(Error::ArityMismatch {
                symbol: symbol.to_string(),
                expected: table.arity,
                found: arity,
            });
        }
        Ok(table)
    }

    pub fn is_idempotent(&self) -> bool {
        self.operations.iter().all(|(_, t)| t.is_idempotent())
    }

    pub fn check_element(&self, element: usize) -> Result<()> {
        if element < self.size {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                element,
                size: self.size,
            })
        }
    }

    /// The subalgebra on `elements` (must be closed under every operation),
    /// relabelled in increasing order.
    pub fn restrict(&self, elements: &[usize]) -> Result<FiniteAlgebra> {
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        let mut relabel = vec![usize::MAX; self.size];
        for (i, &e) in sorted.iter().enumerate() {
            self.check_element(e)?;
            relabel[e] = i;
        }
        let mut sub = FiniteAlgebra::new(alloc::format!("{}-sub", self.name), sorted.len())?;
        for (symbol, table) in &self.operations {
            let mut buf = vec![0; table.arity];
            let mut err = None;
            let restricted = OperationTable::from_fn(table.arity, sorted.len(), |args| {
                for (slot, &a) in buf.iter_mut().zip(args) {
                    *slot = sorted[a];
                }
                let value = relabel[table.apply(&buf)];
                if value == usize::MAX {
                    err.get_or_insert_with(|| buf.clone());
                    0
                } else {
                    value
                }
            })?;
            if let Some(args) = err {
                return Err(Error::Invalid(alloc::format!(
                    "subset is not closed under `{symbol}` at {args:?}"
                )));
            }
            sub.add_operation(symbol.clone(), restricted)?;
        }
        Ok(sub)
    }

    /// Direct product; both factors must have the same signature. The pair
    /// `(x, y)` is encoded as `x * other.size + y`.
    pub fn product(&self, other: &FiniteAlgebra) -> Result<FiniteAlgebra> {
        let n = self.size;
        let m = other.size;
        let mut prod = FiniteAlgebra::new(alloc::format!("{}x{}", self.name, other.name), n * m)?;
        for (symbol, left) in &self.operations {
            let right = other.require(symbol)?;
            if right.arity != left.arity {
                return Err(Error::ArityMismatch {
                    symbol: symbol.clone(),
                    expected: left.arity,
                    found: right.arity,
                });
            }
            let mut lbuf = vec![0; left.arity];
            let mut rbuf = vec![0; left.arity];
            let table = OperationTable::from_fn(left.arity, n * m, |args| {
                for (i, &a) in args.iter().enumerate() {
                    lbuf[i] = a / m;
                    rbuf[i] = a % m;
                }
                left.apply(&lbuf) * m + right.apply(&rbuf)
            })?;
            prod.add_operation(symbol.clone(), table)?;
        }
        if other.operations.len() != self.operations.len() {
            return Err(Error::Invalid("product factors have different signatures".into()));
        }
        Ok(prod)
    }
}

/// Odometer over `{0..base}^len` in lexicographic order (last coordinate
/// fastest). Yields exactly one empty tuple when `len == 0`.
#[derive(Debug, Clone)]
pub struct Tuples {
    base: usize,
    current: Vec<usize>,
    started: bool,
    done: bool,
}

impl Tuples {
    pub fn new(base: usize, len: usize) -> Self {
        Tuples {
            base,
            current: vec![0; len],
            started: false,
            done: base == 0 && len > 0,
        }
    }

    /// Advances and returns the next tuple, borrowing the internal buffer.
    pub fn next_tuple(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        for i in (0..self.current.len()).rev() {
            self.current[i] += 1;
            if self.current[i] < self.base {
                return Some(&self.current);
            }
            self.current[i] = 0;
        }
        self.done = true;
        None
    }
}
