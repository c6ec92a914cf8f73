//! Primitive product summation formulas.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use crate::funcs::{coord, PBFunction, Q};
use crate::error::{Error, Result};

pub type Registry = BTreeMap<String, PBFunction>;

/// Upper bound on `n_free + n_bound` for exhaustive evaluation.
pub const MAX_PPS_VARS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub name: String,
    /// Zero-based variable indices; free variables come first.
    pub scope: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PpsFormula {
    n_free: usize,
    n_bound: usize,
    atoms: Vec<Atom>,
}

impl PpsFormula {
    pub fn new(n_free: usize, n_bound: usize, atoms: Vec<Atom>) -> Result<Self> {
        let n = n_free + n_bound;
        for a in &atoms {
            if let Some(&v) = a.scope.iter().find(|&&v| v >= n) {
                return Err(Error::invalid(format!("atom {} uses variable {} of {n}", a.name, v + 1)));
            }
        }
        Ok(PpsFormula { n_free, n_bound, atoms })
    }

    pub fn n_free(&self) -> usize {
        self.n_free
    }

    pub fn n_bound(&self) -> usize {
        self.n_bound
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Renames atoms; names missing from `map` are kept.
    pub fn rename(&self, map: &BTreeMap<String, String>) -> PpsFormula {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom { name: map.get(&a.name).cloned().unwrap_or_else(|| a.name.clone()), scope: a.scope.clone() })
            .collect();
        PpsFormula { n_free: self.n_free, n_bound: self.n_bound, atoms }
    }

    /// Parses `pps <n_free> <n_bound> ; <name> v<i> .. ; ..` with one-based variables.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::Parse { line: 1, msg };
        let mut parts = text.split(';').map(str::trim);
        let head: Vec<&str> = parts.next().unwrap_or("").split_whitespace().collect();
        let (n_free, n_bound) = match head.as_slice() {
            ["pps", a, b] => (
                a.parse().map_err(|_| bad(format!("bad free count `{a}`")))?,
                b.parse().map_err(|_| bad(format!("bad bound count `{b}`")))?,
            ),
            _ => return Err(bad("expected `pps <n_free> <n_bound>`".into())),
        };
        let mut atoms = Vec::new();
        for part in parts.filter(|p| !p.is_empty()) {
            let mut toks = part.split_whitespace();
            let name = toks.next().expect("nonempty").to_string();
            let scope = toks
                .map(|t| match t.strip_prefix('v').and_then(|s| s.parse::<usize>().ok()) {
                    Some(i) if i >= 1 => Ok(i - 1),
                    _ => Err(bad(format!("bad variable `{t}`"))),
                })
                .collect::<Result<Vec<_>>>()?;
            atoms.push(Atom { name, scope });
        }
        PpsFormula::new(n_free, n_bound, atoms).map_err(|e| bad(e.to_string()))
    }
}

impl fmt::Display for PpsFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pps {} {}", self.n_free, self.n_bound)?;
        for a in &self.atoms {
            write!(f, " ; {}", a.name)?;
            for v in &a.scope {
                write!(f, " v{}", v + 1)?;
            }
        }
        Ok(())
    }
}

/// `f_psi(x) = sum_y prod_j f_j(x, y)`.
pub fn eval_pps(psi: &PpsFormula, registry: &Registry) -> Result<PBFunction> {
    let n = psi.n_free + psi.n_bound;
    if n > MAX_PPS_VARS {
        return Err(Error::capacity("pps variable count", n, MAX_PPS_VARS));
    }
    let mut fs = Vec::with_capacity(psi.atoms.len());
    for a in &psi.atoms {
        let f = registry.get(&a.name).ok_or_else(|| Error::UnknownFunction(a.name.clone()))?;
        if f.arity() != a.scope.len() {
            return Err(Error::ArityMismatch { expected: f.arity(), got: a.scope.len() });
        }
        fs.push(f);
    }
    let nf = psi.n_free;
    let mut table = vec![Q::zero(); 1 << nf];
    let mut val = vec![0u8; n];
    for (x, out) in table.iter_mut().enumerate() {
        for (i, v) in val.iter_mut().enumerate().take(nf) {
            *v = coord(x, i, nf);
        }
        for y in 0..1usize << psi.n_bound {
            for j in 0..psi.n_bound {
                val[nf + j] = ((y >> j) & 1) as u8;
            }
            let mut term: Option<Q> = None;
            for (a, f) in psi.atoms.iter().zip(&fs) {
                let idx = a.scope.iter().fold(0, |acc, &v| (acc << 1) | val[v] as usize);
                let w = f.at(idx);
                if w.is_zero() {
                    term = Some(Q::zero());
                    break;
                }
                term = Some(match term {
                    None => w.clone(),
                    Some(t) => t * w,
                });
            }
            match term {
                None => *out += Q::from_integer(1.into()),
                Some(t) => *out += t,
            }
        }
    }
    Ok(PBFunction::from_vec_unchecked(nf, table))
}

/// Incremental construction of formulas, including inlining of sub-formulas.
#[derive(Debug, Clone)]
pub(crate) struct PpsBuilder {
    n_free: usize,
    n_bound: usize,
    atoms: Vec<Atom>,
    pins: [Option<usize>; 2],
}

pub(crate) const DELTA0: &str = "delta0";
pub(crate) const DELTA1: &str = "delta1";

impl PpsBuilder {
    pub fn new(n_free: usize) -> Self {
        PpsBuilder { n_free, n_bound: 0, atoms: Vec::new(), pins: [None, None] }
    }

    pub fn fresh(&mut self) -> usize {
        self.n_bound += 1;
        self.n_free + self.n_bound - 1
    }

    pub fn atom(&mut self, name: &str, scope: Vec<usize>) {
        self.atoms.push(Atom { name: name.to_string(), scope });
    }

    /// A bound variable constrained to `c` by a pinning atom, shared across calls.
    pub fn pinned(&mut self, c: u8) -> usize {
        if let Some(v) = self.pins[c as usize] {
            return v;
        }
        let v = self.fresh();
        self.atom(if c == 0 { DELTA0 } else { DELTA1 }, vec![v]);
        self.pins[c as usize] = Some(v);
        v
    }

    pub fn inline(&mut self, sub: &PpsFormula, args: &[usize]) {
        assert_eq!(args.len(), sub.n_free, "inline arity");
        let map: Vec<usize> = (0..sub.n_free).map(|i| args[i]).chain((0..sub.n_bound).map(|_| self.fresh())).collect();
        for a in &sub.atoms {
            self.atom(&a.name, a.scope.iter().map(|&v| map[v]).collect());
        }
    }

    pub fn build(self) -> PpsFormula {
        PpsFormula { n_free: self.n_free, n_bound: self.n_bound, atoms: self.atoms }
    }
}
