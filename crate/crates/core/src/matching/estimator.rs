//! Randomized perfect matching counts on unweighted multigraphs.
//!
//! Each level first applies exact reductions (isolated and pendant vertices,
//! degree-2 contraction, components, exact counting under the cap). What
//! remains is sampled with the insert/delete/slide chain on perfect and
//! near-perfect matchings. A bundle of `k` parallel edges `uv` is one move
//! with Metropolis weight `k / (s_u s_v)`. Every perfect matching covers each
//! vertex once, so the vertex scales (and a common factor tuned during
//! burn-in) cancel in the distribution over perfect matchings; they keep
//! near-perfect ones reachable when contraction has inflated the
//! multiplicities. The pilot
//! phase picks a set `S` of edges that frequently lie together in sampled
//! perfect matchings; a fresh phase estimates `p = Pr[S in M]`, and
//! `Z(G) = mult(S) Z(G - V(S)) / p` recurses on the smaller graph.

use std::collections::BTreeMap;

use num::{BigInt, One, ToPrimitive, Zero};
use petgraph::algo::maximum_matching;
use petgraph::graph::UnGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::exact::matching_dp;
use super::graph::Multigraph;
use crate::error::{Error, Result};
use crate::funcs::{qr, Q};

#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorConfig {
    pub epsilon: Q,
    /// Failure budget; below 1/4 the median of several runs is returned.
    pub delta: Q,
    pub seed: u64,
    /// `c` in the per-level budget `c n^4 max(1, ln(1/eps)) / eps^2`, `n = |V|/2`.
    pub step_constant: f64,
    pub min_steps: u64,
    pub max_steps: u64,
    /// Least sampled joint frequency of the conditioned edge set.
    pub tau: Q,
    /// Components with at most this many vertices are counted exactly.
    pub exact_cap: usize,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            epsilon: qr(1, 10),
            delta: qr(1, 4),
            seed: 0,
            step_constant: 0.06,
            min_steps: 200_000,
            max_steps: 20_000_000,
            tau: qr(1, 4),
            exact_cap: 30,
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epsilon <= Q::zero() {
            return Err(Error::invalid("epsilon must be positive"));
        }
        if self.delta <= Q::zero() || self.delta >= Q::one() {
            return Err(Error::invalid("delta must lie in (0, 1)"));
        }
        if self.tau <= Q::zero() || self.tau > Q::one() {
            return Err(Error::invalid("tau must lie in (0, 1]"));
        }
        if !(self.step_constant > 0.0) || self.min_steps == 0 || self.max_steps < self.min_steps {
            return Err(Error::invalid("bad step schedule"));
        }
        Ok(())
    }

    /// Chain steps for the main phase of a level on `n_vertices` vertices.
    pub fn steps_for(&self, n_vertices: usize) -> u64 {
        let eps = self.epsilon.to_f64().unwrap_or(0.1);
        let n = n_vertices as f64 / 2.0;
        let raw = self.step_constant * n.powi(4) * (1.0 / eps).ln().max(1.0) / (eps * eps);
        (raw as u64).clamp(self.min_steps, self.max_steps)
    }

    /// Independent runs combined by the median.
    pub fn repetitions(&self) -> usize {
        if self.delta >= qr(1, 4) {
            return 1;
        }
        let d = self.delta.to_f64().unwrap_or(0.25);
        2 * (4.0 * (1.0 / (4.0 * d)).ln()).ceil() as usize + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PmEstimate {
    pub value: Q,
    /// No sampling was needed.
    pub exact: bool,
    /// Sampled levels, summed over repetitions.
    pub levels: usize,
    pub steps: u64,
}

/// Mutable multigraph for reductions, with integer edge weights.
#[derive(Debug, Clone)]
struct Work {
    adj: Vec<BTreeMap<usize, u64>>,
    alive: Vec<bool>,
}

impl Work {
    fn from_multigraph(g: &Multigraph) -> Self {
        let n = g.n_vertices();
        let mut adj = vec![BTreeMap::new(); n];
        for &(u, v, k) in g.bundles() {
            adj[u].insert(v, k);
            adj[v].insert(u, k);
        }
        Work { adj, alive: vec![true; n] }
    }

    fn remove(&mut self, v: usize) {
        for w in std::mem::take(&mut self.adj[v]).into_keys() {
            self.adj[w].remove(&v);
        }
        self.alive[v] = false;
    }

    /// Contracts `a - v - b` into `a`; `None` if a weight would overflow.
    fn contract(&mut self, v: usize) -> Option<()> {
        let mut it = self.adj[v].iter();
        let ((&a, &p), (&b, &q)) = (it.next()?, it.next()?);
        let mut merged: BTreeMap<usize, u64> = BTreeMap::new();
        for (&x, &m) in &self.adj[a] {
            if x != v && x != b {
                merged.insert(x, q.checked_mul(m)?);
            }
        }
        for (&x, &m) in &self.adj[b] {
            if x != v && x != a {
                let e = merged.entry(x).or_insert(0);
                *e = e.checked_add(p.checked_mul(m)?)?;
            }
        }
        self.remove(v);
        self.remove(b);
        for w in std::mem::take(&mut self.adj[a]).into_keys() {
            self.adj[w].remove(&a);
        }
        self.alive[a] = true;
        for (&x, &m) in &merged {
            self.adj[x].insert(a, m);
        }
        self.adj[a] = merged;
        Some(())
    }

    /// Applies exact reductions; returns the factor they contribute, or zero.
    fn reduce(&mut self) -> BigInt {
        let mut factor = BigInt::one();
        loop {
            let mut changed = false;
            for v in 0..self.adj.len() {
                if !self.alive[v] {
                    continue;
                }
                match self.adj[v].len() {
                    0 => return BigInt::zero(),
                    1 => {
                        let (&a, &p) = self.adj[v].iter().next().expect("degree 1");
                        factor *= p;
                        self.remove(v);
                        self.remove(a);
                        changed = true;
                    }
                    2 => changed |= self.contract(v).is_some(),
                    _ => {}
                }
            }
            if !changed {
                return factor;
            }
        }
    }

    fn components(&self) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in (0..n).filter(|&v| self.alive[v]) {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                for &w in self.adj[comp[i]].keys() {
                    if !std::mem::replace(&mut seen[w], true) {
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Compact copy of a component: local bundles `(u, v, k)`.
    fn extract(&self, comp: &[usize]) -> Vec<(usize, usize, u64)> {
        let local: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut out = Vec::new();
        for (i, &v) in comp.iter().enumerate() {
            for (&w, &k) in &self.adj[v] {
                let j = local[&w];
                if i < j {
                    out.push((i, j, k));
                }
            }
        }
        out
    }
}

const NONE: u32 = u32::MAX;

/// The matchings chain on one component.
struct Chain {
    bundles: Vec<(usize, usize, u64)>,
    lambda: Vec<f64>,
    mate: Vec<u32>,
    via: Vec<u32>,
    holes: [u32; 2],
    n_holes: usize,
    in_s: Vec<bool>,
    s_in_m: usize,
}

impl Chain {
    fn new(bundles: Vec<(usize, usize, u64)>, n: usize, pm: &[(usize, usize)]) -> Self {
        let index: BTreeMap<(usize, usize), usize> =
            bundles.iter().enumerate().map(|(i, &(u, v, _))| ((u, v), i)).collect();
        let lambda = balanced_weights(&bundles, n);
        let mut c = Chain {
            in_s: vec![false; bundles.len()],
            bundles,
            lambda,
            mate: vec![NONE; n],
            via: vec![NONE; n],
            holes: [NONE; 2],
            n_holes: 0,
            s_in_m: 0,
        };
        for &(u, v) in pm {
            let b = index[&(u.min(v), u.max(v))];
            c.link(u, v, b);
        }
        c
    }

    fn link(&mut self, u: usize, v: usize, b: usize) {
        self.mate[u] = v as u32;
        self.mate[v] = u as u32;
        self.via[u] = b as u32;
        self.via[v] = b as u32;
        self.s_in_m += self.in_s[b] as usize;
    }

    fn unlink(&mut self, u: usize) -> usize {
        let v = self.mate[u] as usize;
        let b = self.via[u] as usize;
        self.mate[u] = NONE;
        self.mate[v] = NONE;
        self.s_in_m -= self.in_s[b] as usize;
        v
    }

    fn set_s(&mut self, s: &[usize]) {
        self.in_s.iter_mut().for_each(|x| *x = false);
        for &b in s {
            self.in_s[b] = true;
        }
        self.s_in_m = (0..self.mate.len())
            .filter(|&u| self.mate[u] != NONE && (self.mate[u] as usize) > u && self.in_s[self.via[u] as usize])
            .count();
    }

    fn step(&mut self, rng: &mut ChaCha8Rng) {
        let b = rng.gen_range(0..self.bundles.len());
        let (u, v, _) = self.bundles[b];
        let lam = self.lambda[b];
        match self.n_holes {
            0 => {
                if self.via[u] == b as u32 && self.mate[u] == v as u32 && accept(rng, 1.0 / lam) {
                    self.unlink(u);
                    self.holes = [u as u32, v as u32];
                    self.n_holes = 2;
                }
            }
            _ => {
                let hu = self.mate[u] == NONE;
                let hv = self.mate[v] == NONE;
                match (hu, hv) {
                    (true, true) => {
                        if accept(rng, lam) {
                            self.link(u, v, b);
                            self.n_holes = 0;
                        }
                    }
                    (true, false) | (false, true) => {
                        let (h, m) = if hu { (u, v) } else { (v, u) };
                        if accept(rng, lam / self.lambda[self.via[m] as usize]) {
                            let w = self.unlink(m);
                            self.link(h, m, b);
                            let slot = if self.holes[0] == h as u32 { 0 } else { 1 };
                            self.holes[slot] = w as u32;
                        }
                    }
                    (false, false) => {}
                }
            }
        }
    }

    fn perfect(&self) -> bool {
        self.n_holes == 0
    }

    fn matched_bundles(&self) -> Vec<usize> {
        let mut out: Vec<usize> = (0..self.mate.len())
            .filter(|&u| self.mate[u] != NONE && (self.mate[u] as usize) > u)
            .map(|u| self.via[u] as usize)
            .collect();
        out.sort_unstable();
        out
    }
}

/// Bundle weights after a symmetric Sinkhorn scaling: each vertex's scaled
/// incident weights sum to roughly 1.
fn balanced_weights(bundles: &[(usize, usize, u64)], n: usize) -> Vec<f64> {
    let logk: Vec<f64> = bundles.iter().map(|b| (b.2 as f64).ln()).collect();
    let mut ls = vec![0.0f64; n];
    for _ in 0..64 {
        let mut top = vec![f64::NEG_INFINITY; n];
        for (&(u, v, _), &l) in bundles.iter().zip(&logk) {
            top[u] = top[u].max(l - ls[v]);
            top[v] = top[v].max(l - ls[u]);
        }
        let mut sum = vec![0.0f64; n];
        for (&(u, v, _), &l) in bundles.iter().zip(&logk) {
            sum[u] += (l - ls[v] - top[u]).exp();
            sum[v] += (l - ls[u] - top[v]).exp();
        }
        for v in 0..n {
            ls[v] = (ls[v] + top[v] + sum[v].ln()) / 2.0;
        }
    }
    bundles.iter().zip(&logk).map(|(&(u, v, _), &l)| (l - ls[u] - ls[v]).exp()).collect()
}

fn accept(rng: &mut ChaCha8Rng, ratio: f64) -> bool {
    ratio >= 1.0 || rng.gen::<f64>() < ratio
}

/// Perfect matching of a component via Edmonds' algorithm, if one exists.
fn initial_pm(n: usize, bundles: &[(usize, usize, u64)]) -> Option<Vec<(usize, usize)>> {
    let g = UnGraph::<(), ()>::from_edges(bundles.iter().map(|&(u, v, _)| (u as u32, v as u32)));
    if g.node_count() != n {
        return None;
    }
    let m = maximum_matching(&g);
    if !m.is_perfect() {
        return None;
    }
    Some(m.edges().map(|(a, b)| (a.index(), b.index())).collect())
}

struct Run<'a> {
    cfg: &'a EstimatorConfig,
    rep: u64,
    level: u64,
    steps: u64,
}

impl Run<'_> {
    fn rng(&mut self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        r.set_stream((self.rep << 32) | self.level);
        self.level += 1;
        r
    }

    fn solve(&mut self, mut work: Work) -> Result<Q> {
        let factor = work.reduce();
        if factor.is_zero() {
            return Ok(Q::zero());
        }
        let mut z = Q::from_integer(factor);
        for comp in work.components() {
            if comp.len() % 2 == 1 {
                return Ok(Q::zero());
            }
            let bundles = work.extract(&comp);
            let part = if comp.len() <= self.cfg.exact_cap {
                let e: Vec<(usize, usize, BigInt)> = bundles.iter().map(|&(u, v, k)| (u, v, BigInt::from(k))).collect();
                Q::from_integer(matching_dp(comp.len(), &e, 0)?)
            } else {
                self.sample_level(comp.len(), bundles)?
            };
            if part.is_zero() {
                return Ok(Q::zero());
            }
            z *= part;
        }
        Ok(z)
    }

    fn sample_level(&mut self, n: usize, bundles: Vec<(usize, usize, u64)>) -> Result<Q> {
        let Some(pm) = initial_pm(n, &bundles) else {
            return Ok(Q::zero());
        };
        let mut rng = self.rng();
        let mut chain = Chain::new(bundles, n, &pm);
        let main = self.cfg.steps_for(n);
        let pilot = (main / 4).max(1);
        // Burn-in, then a common factor so perfect matchings are about half the visits.
        let mut perfect = 0u64;
        for _ in 0..pilot {
            chain.step(&mut rng);
            perfect += chain.perfect() as u64;
        }
        let frac = (perfect as f64 + 1.0) / (pilot as f64 + 2.0);
        let gamma = ((1.0 - frac) / frac).clamp(1e-3, 1e3);
        chain.lambda.iter_mut().for_each(|l| *l *= gamma);
        // Pilot: thinned perfect-matching snapshots.
        let thin = (n as u64).max(1);
        let mut snaps: Vec<Vec<usize>> = Vec::new();
        let mut since = 0u64;
        for _ in 0..pilot {
            chain.step(&mut rng);
            since += 1;
            if since >= thin && chain.perfect() {
                snaps.push(chain.matched_bundles());
                since = 0;
            }
        }
        if snaps.is_empty() {
            snaps.push(pm_bundles(&chain, &pm));
        }
        let s = choose_set(&snaps, chain.bundles.len(), n, self.cfg);
        chain.set_s(&s);
        let (mut visits, mut hits, mut done) = (0u64, 0u64, 0u64);
        while done < main || (hits == 0 && done < self.cfg.max_steps) {
            chain.step(&mut rng);
            done += 1;
            if chain.perfect() {
                visits += 1;
                hits += (chain.s_in_m == s.len()) as u64;
            }
        }
        self.steps += 2 * pilot + done;
        let p = if hits == 0 { Q::new(1.into(), BigInt::from(visits + 1)) } else { Q::new(hits.into(), visits.into()) };
        // Condition on S and recurse.
        let mut work = Work { adj: vec![BTreeMap::new(); n], alive: vec![true; n] };
        for &(u, v, k) in &chain.bundles {
            work.adj[u].insert(v, k);
            work.adj[v].insert(u, k);
        }
        let mut mult = BigInt::one();
        for &b in &s {
            let (u, v, k) = chain.bundles[b];
            mult *= k;
            work.remove(u);
            work.remove(v);
        }
        let rest = self.solve(work)?;
        Ok(Q::from_integer(mult) * rest / p)
    }
}

fn pm_bundles(chain: &Chain, pm: &[(usize, usize)]) -> Vec<usize> {
    let mut out: Vec<usize> = pm
        .iter()
        .map(|&(u, v)| chain.bundles.iter().position(|&(a, b, _)| (a, b) == (u.min(v), u.max(v))).expect("edge"))
        .collect();
    out.sort_unstable();
    out
}

/// Greedy: most frequent bundles first while the joint frequency stays at least `tau`.
fn choose_set(snaps: &[Vec<usize>], n_bundles: usize, n: usize, cfg: &EstimatorConfig) -> Vec<usize> {
    let mut count = vec![0usize; n_bundles];
    for s in snaps {
        for &b in s {
            count[b] += 1;
        }
    }
    let mut order: Vec<usize> = (0..n_bundles).filter(|&b| count[b] > 0).collect();
    order.sort_by(|&a, &b| count[b].cmp(&count[a]).then(a.cmp(&b)));
    let total = snaps.len();
    let mut alive: Vec<usize> = (0..total).collect();
    let mut chosen = Vec::new();
    for b in order {
        if 2 * chosen.len() + cfg.exact_cap >= n {
            break;
        }
        let next: Vec<usize> = alive.iter().copied().filter(|&i| snaps[i].binary_search(&b).is_ok()).collect();
        if Q::new(next.len().into(), total.into()) >= cfg.tau {
            chosen.push(b);
            alive = next;
        }
    }
    if chosen.is_empty() {
        chosen.push(snaps[0][0]);
    }
    chosen
}

/// Estimates the number of perfect matchings of `g`.
pub fn estimate_pm(g: &Multigraph, cfg: &EstimatorConfig) -> Result<PmEstimate> {
    cfg.validate()?;
    if g.n_vertices() % 2 == 1 {
        return Ok(PmEstimate { value: Q::zero(), exact: true, levels: 0, steps: 0 });
    }
    if g.n_vertices() <= cfg.exact_cap {
        let v = g.count_pm(cfg.exact_cap)?;
        return Ok(PmEstimate { value: Q::from_integer(v), exact: true, levels: 0, steps: 0 });
    }
    let reps = cfg.repetitions();
    let mut values = Vec::with_capacity(reps);
    let (mut levels, mut steps) = (0, 0);
    for rep in 0..reps {
        let mut run = Run { cfg, rep: rep as u64, level: 0, steps: 0 };
        values.push(run.solve(Work::from_multigraph(g))?);
        levels += run.level as usize;
        steps += run.steps;
    }
    values.sort();
    let value = values[reps / 2].clone();
    Ok(PmEstimate { value, exact: levels == 0, levels, steps })
}
