//! Exact perfect and near-perfect matching totals.

use std::collections::{HashMap, VecDeque};
use std::ops::{Add, Mul};

use num::{One, Zero};

use super::graph::WeightedMultigraph;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::funcs::Q;

/// Largest vertex count the bitmask recursion can represent.
pub const MAX_DP_VERTICES: usize = 128;

/// Unmatched vertices in a near-perfect matching: the matchings of size `ceil(n/2) - 1`.
pub(crate) fn near_perfect_holes(n: usize) -> usize {
    if n == 0 {
        // No matching has size -1.
        usize::MAX
    } else {
        n - 2 * (n.div_ceil(2) - 1)
    }
}

/// Breadth-first order, each component started from a vertex of least degree.
fn bfs_order(n: usize, adj: &[Vec<usize>]) -> Vec<usize> {
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&v| adj[v].len());
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            order.push(v);
            for &w in &adj[v] {
                if !std::mem::replace(&mut seen[w], true) {
                    q.push_back(w);
                }
            }
        }
    }
    order
}

struct Dp<T> {
    /// Neighbors with larger index, after relabeling.
    up: Vec<Vec<(usize, T)>>,
    memo: HashMap<(u128, usize), T>,
}

impl<T> Dp<T>
where
    T: Clone + Zero + One + for<'a> Add<&'a T, Output = T> + for<'a> Mul<&'a T, Output = T>,
{
    fn go(&mut self, mask: u128, holes: usize) -> T {
        if mask == 0 {
            return if holes == 0 { T::one() } else { T::zero() };
        }
        let left = mask.count_ones() as usize;
        if left < holes || (left - holes) % 2 == 1 {
            return T::zero();
        }
        if let Some(v) = self.memo.get(&(mask, holes)) {
            return v.clone();
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1u128 << i);
        let mut total = T::zero();
        for k in 0..self.up[i].len() {
            let (j, ref w) = self.up[i][k];
            if rest >> j & 1 == 1 {
                let w = w.clone();
                let sub = self.go(rest & !(1u128 << j), holes);
                if !sub.is_zero() {
                    total = total + &(w * &sub);
                }
            }
        }
        if holes > 0 {
            let sub = self.go(rest, holes - 1);
            total = total + &sub;
        }
        self.memo.insert((mask, holes), total.clone());
        total
    }
}

/// Total weight of matchings leaving exactly `holes` vertices unmatched.
pub(crate) fn matching_dp<T>(n: usize, edges: &[(usize, usize, T)], holes: usize) -> Result<T>
where
    T: Clone + Zero + One + for<'a> Add<&'a T, Output = T> + for<'a> Mul<&'a T, Output = T>,
{
    if n > MAX_DP_VERTICES {
        return Err(Error::capacity("vertex count", n, MAX_DP_VERTICES));
    }
    if holes > n {
        return Ok(T::zero());
    }
    let mut adj = vec![Vec::new(); n];
    for (u, v, _) in edges {
        adj[*u].push(*v);
        adj[*v].push(*u);
    }
    let order = bfs_order(n, &adj);
    let mut pos = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let mut up: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
    for (u, v, w) in edges {
        if u == v || w.is_zero() {
            continue;
        }
        let (a, b) = (pos[*u].min(pos[*v]), pos[*u].max(pos[*v]));
        up[a].push((b, w.clone()));
    }
    let full = if n == MAX_DP_VERTICES { u128::MAX } else { (1u128 << n) - 1 };
    Ok(Dp { up, memo: HashMap::new() }.go(full, holes))
}

fn check_cap(g: &WeightedMultigraph, caps: &Caps) -> Result<()> {
    if g.n_vertices() > caps.matching {
        return Err(Error::capacity("vertex count", g.n_vertices(), caps.matching));
    }
    Ok(())
}

/// `Z_PM(G)`: total weight of perfect matchings; loops never participate.
pub fn count_pm_exact(g: &WeightedMultigraph, caps: &Caps) -> Result<Q> {
    check_cap(g, caps)?;
    matching_dp(g.n_vertices(), &g.merged(), 0)
}

/// `Z_NPM(G)`: total weight of matchings of size `ceil(|V|/2) - 1`, which leave
/// two vertices unmatched when `|V|` is even.
pub fn count_npm_exact(g: &WeightedMultigraph, caps: &Caps) -> Result<Q> {
    check_cap(g, caps)?;
    matching_dp(g.n_vertices(), &g.merged(), near_perfect_holes(g.n_vertices()))
}

#[cfg(test)]
mod tests {
    use super::super::graph::EdgeLabel;
    use super::*;
    use crate::funcs::{q, qr};

    fn graph(n: usize, edges: &[(usize, usize, Q)]) -> WeightedMultigraph {
        let mut g = WeightedMultigraph::new();
        for i in 0..n {
            g.vertex(&format!("v{i}")).unwrap();
        }
        for (u, v, w) in edges {
            g.add_edge(*u, *v, w.clone(), EdgeLabel::Plain).unwrap();
        }
        g
    }

    /// Enumerates all edge subsets.
    fn brute(g: &WeightedMultigraph, size: usize) -> Q {
        let e = g.edges();
        let mut total = Q::zero();
        for s in 0u32..1 << e.len() {
            let chosen: Vec<&super::super::graph::WeightedEdge> =
                (0..e.len()).filter(|&i| s >> i & 1 == 1).map(|i| &e[i]).collect();
            if chosen.len() != size || chosen.iter().any(|e| e.is_loop()) {
                continue;
            }
            let mut used = vec![false; g.n_vertices()];
            let ok = chosen.iter().all(|e| !std::mem::replace(&mut used[e.u], true) && !std::mem::replace(&mut used[e.v], true));
            if ok {
                total += chosen.iter().fold(Q::one(), |a, e| a * &e.weight);
            }
        }
        total
    }

    #[test]
    fn small_examples() {
        let c = Caps::default();
        let w = qr(5, 7);
        let e = graph(2, &[(0, 1, w.clone())]);
        assert_eq!((count_pm_exact(&e, &c).unwrap(), count_npm_exact(&e, &c).unwrap()), (w, q(1)));
        let k3 = graph(3, &[(0, 1, q(1)), (1, 2, q(1)), (0, 2, q(1))]);
        assert_eq!((count_pm_exact(&k3, &c).unwrap(), count_npm_exact(&k3, &c).unwrap()), (q(0), q(3)));
        assert_eq!(count_pm_exact(&graph(0, &[]), &c).unwrap(), q(1));
        let big = graph(31, &[]);
        assert!(count_pm_exact(&big, &c).unwrap_err().is_capacity());
    }

    #[test]
    fn agrees_with_enumeration() {
        // A 6-cycle with chords, a parallel edge and a loop.
        let edges = [
            (0, 1, q(1)),
            (1, 2, qr(1, 2)),
            (2, 3, q(2)),
            (3, 4, q(1)),
            (4, 5, qr(3, 4)),
            (5, 0, q(1)),
            (0, 3, q(5)),
            (1, 4, q(1)),
            (1, 4, qr(1, 3)),
            (2, 2, q(9)),
        ];
        let g = graph(6, &edges);
        let c = Caps::default();
        assert_eq!(count_pm_exact(&g, &c).unwrap(), brute(&g, 3));
        assert_eq!(count_npm_exact(&g, &c).unwrap(), brute(&g, 2));
        let h = graph(5, &edges[..4]);
        assert_eq!(count_npm_exact(&h, &c).unwrap(), brute(&h, 2));
    }
}
