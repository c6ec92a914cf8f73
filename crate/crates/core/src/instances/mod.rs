//! CSP and holant instances, their text format, and exact partition functions.
//!
//! Text format, one directive per line, `#` starts a comment:
//!
//! ```text
//! fun <name> <arity> <v_0> .. <v_(2^k - 1)>
//! var <name> ..
//! con <name> <var> ..
//! ```
//!
//! Variables are declared on first use; `var` declares variables up front,
//! which is the only way to have a variable that occurs in no constraint.
//! Values are integers or `p/q`; a function with a negative value is kept as
//! a signed table.

mod eval;
mod holant;

pub use eval::{near_assignment_total, z_exact, z_exact_capped, z_product_type};
pub use holant::{hadamard, holographic_transform, to_holant, to_holant_certified, HolantCertificate, HolantInstance};

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::funcs::{bit_flip, parse_table, PBFunction, SignedTable, Q};

/// A registry entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Table {
    Function(PBFunction),
    Signed(SignedTable),
}

impl Table {
    pub fn arity(&self) -> usize {
        match self {
            Table::Function(f) => f.arity(),
            Table::Signed(t) => t.arity(),
        }
    }

    pub fn values(&self) -> &[Q] {
        match self {
            Table::Function(f) => f.table(),
            Table::Signed(t) => t.table(),
        }
    }

    pub fn as_function(&self) -> Option<&PBFunction> {
        match self {
            Table::Function(f) => Some(f),
            Table::Signed(_) => None,
        }
    }

    pub fn to_signed(&self) -> SignedTable {
        match self {
            Table::Function(f) => f.to_signed(),
            Table::Signed(t) => t.clone(),
        }
    }

    /// Nonnegative tables become functions.
    pub fn from_signed(t: SignedTable) -> Table {
        match t.to_pb() {
            Some(f) => Table::Function(f),
            None => Table::Signed(t),
        }
    }

    fn bit_flip(&self) -> Table {
        match self {
            Table::Function(f) => Table::Function(bit_flip(f)),
            Table::Signed(t) => {
                let mut v = t.table().to_vec();
                v.reverse();
                Table::Signed(SignedTable::new(t.arity(), v).expect("same shape"))
            }
        }
    }
}

impl From<PBFunction> for Table {
    fn from(f: PBFunction) -> Self {
        Table::Function(f)
    }
}

impl From<SignedTable> for Table {
    fn from(t: SignedTable) -> Self {
        Table::Signed(t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub function: String,
    /// Variable indices; repeats are allowed.
    pub scope: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CspInstance {
    variables: Vec<String>,
    var_index: BTreeMap<String, usize>,
    functions: Vec<(String, Table)>,
    fn_index: BTreeMap<String, usize>,
    constraints: Vec<Constraint>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.contains('#') && !name.chars().any(char::is_whitespace)
}

impl CspInstance {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `name`; re-registering the same table is a no-op.
    pub fn add_function(&mut self, name: &str, table: impl Into<Table>) -> Result<()> {
        let table = table.into();
        if !valid_name(name) {
            return Err(Error::invalid(format!("bad function name `{name}`")));
        }
        match self.fn_index.get(name) {
            Some(&i) if self.functions[i].1 == table => Ok(()),
            Some(_) => Err(Error::invalid(format!("function `{name}` redefined"))),
            None => {
                self.fn_index.insert(name.to_string(), self.functions.len());
                self.functions.push((name.to_string(), table));
                Ok(())
            }
        }
    }

    /// Index of `name`, declaring it if new.
    pub fn variable(&mut self, name: &str) -> Result<usize> {
        if let Some(&i) = self.var_index.get(name) {
            return Ok(i);
        }
        if !valid_name(name) {
            return Err(Error::invalid(format!("bad variable name `{name}`")));
        }
        self.var_index.insert(name.to_string(), self.variables.len());
        self.variables.push(name.to_string());
        Ok(self.variables.len() - 1)
    }

    pub fn add_constraint(&mut self, function: &str, vars: &[&str]) -> Result<()> {
        self.check_scope(function, vars.len())?;
        let scope = vars.iter().map(|v| self.variable(v)).collect::<Result<Vec<_>>>()?;
        self.constraints.push(Constraint { function: function.to_string(), scope });
        Ok(())
    }

    pub fn add_constraint_idx(&mut self, function: &str, scope: Vec<usize>) -> Result<()> {
        self.check_scope(function, scope.len())?;
        if let Some(&v) = scope.iter().find(|&&v| v >= self.variables.len()) {
            return Err(Error::invalid(format!("variable index {v} out of range")));
        }
        self.constraints.push(Constraint { function: function.to_string(), scope });
        Ok(())
    }

    fn check_scope(&self, function: &str, len: usize) -> Result<()> {
        let t = self.function(function).ok_or_else(|| Error::UnknownFunction(function.to_string()))?;
        if t.arity() != len {
            return Err(Error::ArityMismatch { expected: t.arity(), got: len });
        }
        Ok(())
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.var_index.get(name).copied()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Registry entries in definition order.
    pub fn functions(&self) -> &[(String, Table)] {
        &self.functions
    }

    pub fn function(&self, name: &str) -> Option<&Table> {
        self.fn_index.get(name).map(|&i| &self.functions[i].1)
    }

    /// Registry names of functions used by some constraint, in definition order.
    pub fn used_functions(&self) -> Vec<&str> {
        self.functions
            .iter()
            .map(|(n, _)| n.as_str())
            .filter(|n| self.constraints.iter().any(|c| c.function == *n))
            .collect()
    }

    /// Occurrence count of each variable across all scopes.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n_vars()];
        for c in &self.constraints {
            for &v in &c.scope {
                d[v] += 1;
            }
        }
        d
    }

    /// The same instance with every registry table bit-flipped.
    pub fn bit_flipped(&self) -> CspInstance {
        let mut out = self.clone();
        for (_, t) in &mut out.functions {
            *t = t.bit_flip();
        }
        out
    }

    /// A name not used by any function, starting from `base`.
    pub(crate) fn fresh_function_name(&self, base: &str) -> String {
        fresh(base, |n| self.fn_index.contains_key(n))
    }

    pub(crate) fn fresh_variable_name(&self, base: &str) -> String {
        fresh(base, |n| self.var_index.contains_key(n))
    }

    /// Registers `table` under `base` or a fresh variant of it, reusing an identical entry.
    pub(crate) fn ensure_function(&mut self, base: &str, table: Table) -> String {
        if self.function(base) == Some(&table) {
            return base.to_string();
        }
        let name = self.fresh_function_name(base);
        self.add_function(&name, table).expect("fresh name");
        name
    }

    pub fn parse(text: &str) -> Result<CspInstance> {
        let mut inst = CspInstance::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let err = |e: Error| match e {
                Error::Parse { .. } => e,
                e => Error::Parse { line, msg: e.to_string() },
            };
            let body = raw.split('#').next().unwrap_or("");
            let mut toks = body.split_whitespace();
            match toks.next() {
                None => {}
                Some("fun") => {
                    let name = toks.next().ok_or_else(|| err(Error::invalid("missing function name")))?;
                    let t = parse_table(toks).map_err(err)?;
                    inst.add_function(name, Table::from_signed(t)).map_err(err)?;
                }
                Some("var") => {
                    for v in toks {
                        inst.variable(v).map_err(err)?;
                    }
                }
                Some("con") => {
                    let name = toks.next().ok_or_else(|| err(Error::invalid("missing function name")))?;
                    let vars: Vec<&str> = toks.collect();
                    inst.add_constraint(name, &vars).map_err(err)?;
                }
                Some(d) => return Err(Error::Parse { line, msg: format!("unknown directive `{d}`") }),
            }
        }
        Ok(inst)
    }

    /// Canonical text; `parse(serialize(x)) == x`.
    pub fn serialize(&self) -> String {
        self.to_string()
    }

    /// Variable order implied by first use in constraints.
    fn implied_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n_vars()];
        let mut order = Vec::new();
        for c in &self.constraints {
            for &v in &c.scope {
                if !std::mem::replace(&mut seen[v], true) {
                    order.push(v);
                }
            }
        }
        order
    }
}

fn fresh(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_string();
    }
    (1..).map(|i| format!("{base}.{i}")).find(|n| !taken(n)).expect("unbounded")
}

impl fmt::Display for CspInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, t) in &self.functions {
            let vals: Vec<String> = t.values().iter().map(ToString::to_string).collect();
            writeln!(f, "fun {name} {} {}", t.arity(), vals.join(" "))?;
        }
        if self.implied_order() != (0..self.n_vars()).collect::<Vec<_>>() {
            writeln!(f, "var {}", self.variables.join(" "))?;
        }
        for c in &self.constraints {
            write!(f, "con {}", c.function)?;
            for &v in &c.scope {
                write!(f, " {}", self.variables[v])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for CspInstance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CspInstance::parse(s)
    }
}
