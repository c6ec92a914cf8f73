//! Weighted and unweighted multigraphs.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use super::exact::{matching_dp, near_perfect_holes};
use crate::error::{Error, Result};
use crate::funcs::{parse_rational, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeLabel {
    WithinTriangle,
    BetweenTriangles,
    Plain,
}

impl EdgeLabel {
    pub fn name(self) -> &'static str {
        match self {
            EdgeLabel::WithinTriangle => "within",
            EdgeLabel::BetweenTriangles => "between",
            EdgeLabel::Plain => "plain",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "within" => Some(EdgeLabel::WithinTriangle),
            "between" => Some(EdgeLabel::BetweenTriangles),
            "plain" => Some(EdgeLabel::Plain),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedEdge {
    pub u: usize,
    pub v: usize,
    pub weight: Q,
    pub label: EdgeLabel,
}

impl WeightedEdge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// Vertices with a multiset of nonnegatively weighted edges; loops allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeightedMultigraph {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    edges: Vec<WeightedEdge>,
}

impl WeightedMultigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Index of `name`, adding the vertex if new.
    pub fn vertex(&mut self, name: &str) -> Result<usize> {
        if let Some(&i) = self.index.get(name) {
            return Ok(i);
        }
        if name.is_empty() || name.contains('#') || name.chars().any(char::is_whitespace) {
            return Err(Error::invalid(format!("bad vertex name `{name}`")));
        }
        self.index.insert(name.to_string(), self.names.len());
        self.names.push(name.to_string());
        Ok(self.names.len() - 1)
    }

    pub fn add_edge(&mut self, u: usize, v: usize, weight: Q, label: EdgeLabel) -> Result<()> {
        if u >= self.names.len() || v >= self.names.len() {
            return Err(Error::invalid("edge endpoint out of range"));
        }
        if weight.is_negative() {
            return Err(Error::invalid(format!("negative edge weight {weight}")));
        }
        self.edges.push(WeightedEdge { u, v, weight, label });
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[WeightedEdge] {
        &self.edges
    }

    /// Parallel non-loop edges summed per unordered pair; zero totals dropped.
    pub(crate) fn merged(&self) -> Vec<(usize, usize, Q)> {
        let mut m: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for e in self.edges.iter().filter(|e| !e.is_loop()) {
            *m.entry((e.u.min(e.v), e.u.max(e.v))).or_insert_with(Q::zero) += &e.weight;
        }
        m.into_iter().filter(|(_, w)| !w.is_zero()).map(|((u, v), w)| (u, v, w)).collect()
    }

    /// Parses `v <name>` and `e <u> <v> <weight> <label>` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut g = WeightedMultigraph::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let err = |e: Error| Error::Parse { line, msg: e.to_string() };
            let toks: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
            match toks.as_slice() {
                [] => {}
                ["v", name] => {
                    g.vertex(name).map_err(err)?;
                }
                ["e", u, v, w, label] => {
                    let w = parse_rational(w).map_err(err)?;
                    let label = EdgeLabel::parse(label)
                        .ok_or_else(|| Error::Parse { line, msg: format!("unknown edge label `{label}`") })?;
                    let (u, v) = (g.vertex(u).map_err(err)?, g.vertex(v).map_err(err)?);
                    g.add_edge(u, v, w, label).map_err(err)?;
                }
                _ => return Err(Error::Parse { line, msg: format!("cannot parse `{}`", raw.trim()) }),
            }
        }
        Ok(g)
    }
}

impl fmt::Display for WeightedMultigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.names {
            writeln!(f, "v {n}")?;
        }
        for e in &self.edges {
            writeln!(f, "e {} {} {} {}", self.names[e.u], self.names[e.v], e.weight, e.label.name())?;
        }
        Ok(())
    }
}

/// Unweighted multigraph stored as edge bundles `(u, v, multiplicity)` with `u < v`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    bundles: Vec<(usize, usize, u64)>,
}

impl Multigraph {
    /// Merges parallel edges; loops and zero multiplicities are dropped since no matching uses them.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, u64)>) -> Result<Self> {
        let mut m: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for (u, v, k) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid("edge endpoint out of range"));
            }
            if u != v && k > 0 {
                let e = m.entry((u.min(v), u.max(v))).or_insert(0);
                *e = e.checked_add(k).ok_or_else(|| Error::capacity("edge multiplicity", usize::MAX, u64::MAX as usize))?;
            }
        }
        Ok(Multigraph { n, bundles: m.into_iter().map(|((u, v), k)| (u, v, k)).collect() })
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn bundles(&self) -> &[(usize, usize, u64)] {
        &self.bundles
    }

    pub fn n_edges(&self) -> u128 {
        self.bundles.iter().map(|&(_, _, k)| k as u128).sum()
    }

    /// Number of perfect matchings, parallel edges counted as distinct.
    pub fn count_pm(&self, cap: usize) -> Result<BigInt> {
        self.count(cap, 0)
    }

    /// Number of near-perfect matchings (see [`super::count_npm_exact`]).
    pub fn count_npm(&self, cap: usize) -> Result<BigInt> {
        self.count(cap, near_perfect_holes(self.n))
    }

    fn count(&self, cap: usize, holes: usize) -> Result<BigInt> {
        if self.n > cap {
            return Err(Error::capacity("vertex count", self.n, cap));
        }
        let edges: Vec<(usize, usize, BigInt)> = self.bundles.iter().map(|&(u, v, k)| (u, v, BigInt::from(k))).collect();
        matching_dp(self.n, &edges, holes)
    }
}

/// `(G', d)`: `d` is the lcm of the denominators of the positive weights, and an
/// edge of weight `w` becomes `d w` parallel unit edges.
pub fn integerize(g: &WeightedMultigraph) -> Result<(Multigraph, BigInt)> {
    let merged = g.merged();
    let d = merged.iter().fold(BigInt::one(), |l, (_, _, w)| l.lcm(w.denom()));
    let mut edges = Vec::with_capacity(merged.len());
    for (u, v, w) in merged {
        let k = (w * Q::from_integer(d.clone())).to_integer();
        let k = k.to_u64().ok_or_else(|| Error::capacity("edge multiplicity", usize::MAX, u64::MAX as usize))?;
        edges.push((u, v, k));
    }
    Ok((Multigraph::new(g.n_vertices(), edges)?, d))
}
