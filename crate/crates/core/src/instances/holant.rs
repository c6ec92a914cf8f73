//! Holant instances: validation, conversion from CSP form, holographic transforms.

use num::{One, Zero};

use super::eval::brute_z;
use super::{CspInstance, Table};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::funcs::{named, SignedTable, Q};

/// A CSP instance in which every variable occurs exactly twice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolantInstance(CspInstance);

impl HolantInstance {
    pub fn new(inst: CspInstance) -> Result<Self> {
        if let Some((v, d)) = inst.degrees().into_iter().enumerate().find(|&(_, d)| d != 2) {
            return Err(Error::pre(format!("variable `{}` occurs {d} times, expected 2", inst.variables[v])));
        }
        Ok(HolantInstance(inst))
    }

    pub fn instance(&self) -> &CspInstance {
        &self.0
    }

    pub fn into_inner(self) -> CspInstance {
        self.0
    }
}

/// Exact partition functions before and after a conversion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolantCertificate {
    pub z_before: Q,
    pub z_after: Q,
}

/// Rewrites every variable of degree other than 2 through EQ3 junctions.
///
/// Degree `d >= 3`: occurrences become `v.eq.1..v.eq.d`, joined by a left chain
/// of `d - 2` junctions over links `v.eq.(d+1)..`. Degree 1: `EQ3(v, a, a)`.
/// Degree 0: `EQ3(v, v, a) EQ3(a, b, b)`.
pub fn to_holant(inst: &CspInstance) -> HolantInstance {
    let degrees = inst.degrees();
    if degrees.iter().all(|&d| d == 2) {
        return HolantInstance(inst.clone());
    }
    let mut out = CspInstance::new();
    for (name, t) in &inst.functions {
        out.add_function(name, t.clone()).expect("copied registry");
    }
    for v in &inst.variables {
        out.variable(v).expect("copied variable");
    }
    let eq3 = out.ensure_function("eq3", Table::Function(named::eq3()));
    // Names must avoid every original variable, so reserve them all first.
    let fresh = |out: &mut CspInstance, base: String| -> usize {
        let n = out.fresh_variable_name(&base);
        out.variable(&n).expect("fresh name")
    };
    let mut occurrence: Vec<Vec<usize>> = vec![Vec::new(); inst.n_vars()];
    for (v, &d) in degrees.iter().enumerate() {
        let name = &inst.variables[v];
        match d {
            0 => {
                let a = fresh(&mut out, format!("{name}.eq.1"));
                let b = fresh(&mut out, format!("{name}.eq.2"));
                out.add_constraint_idx(&eq3, vec![v, v, a]).expect("valid");
                out.add_constraint_idx(&eq3, vec![a, b, b]).expect("valid");
            }
            1 => {
                let a = fresh(&mut out, format!("{name}.eq.1"));
                out.add_constraint_idx(&eq3, vec![v, a, a]).expect("valid");
                occurrence[v].push(v);
            }
            2 => occurrence[v].extend([v, v]),
            _ => {
                let occ: Vec<usize> = (1..=d).map(|i| fresh(&mut out, format!("{name}.eq.{i}"))).collect();
                let links: Vec<usize> = (d + 1..2 * d - 2).map(|i| fresh(&mut out, format!("{name}.eq.{i}"))).collect();
                let mut left = occ[0];
                for j in 0..d - 2 {
                    let right = if j == d - 3 { occ[d - 1] } else { links[j] };
                    out.add_constraint_idx(&eq3, vec![left, occ[j + 1], right]).expect("valid");
                    left = right;
                }
                occurrence[v] = occ;
            }
        }
    }
    let mut next = vec![0usize; inst.n_vars()];
    let junctions = std::mem::take(&mut out.constraints);
    for c in &inst.constraints {
        let scope = c
            .scope
            .iter()
            .map(|&v| {
                next[v] += 1;
                occurrence[v][next[v] - 1]
            })
            .collect();
        out.add_constraint_idx(&c.function, scope).expect("copied constraint");
    }
    out.constraints.extend(junctions);
    // Variables of degree >= 3 no longer occur; drop them.
    let keep: Vec<bool> = out.degrees().iter().map(|&d| d > 0).collect();
    HolantInstance::new(compact(out, &keep)).expect("every variable occurs twice")
}

/// Drops variables with `keep[v] == false`, which must not occur in any constraint.
fn compact(inst: CspInstance, keep: &[bool]) -> CspInstance {
    let mut out = CspInstance::new();
    for (name, t) in inst.functions {
        out.add_function(&name, t).expect("copied registry");
    }
    let mut map = vec![usize::MAX; keep.len()];
    for (v, name) in inst.variables.iter().enumerate() {
        if keep[v] {
            map[v] = out.variable(name).expect("copied variable");
        }
    }
    for c in inst.constraints {
        out.add_constraint_idx(&c.function, c.scope.iter().map(|&v| map[v]).collect()).expect("copied constraint");
    }
    out
}

/// `to_holant` plus a `z_exact` certificate when both sides fit under the brute-force cap.
pub fn to_holant_certified(inst: &CspInstance, caps: &Caps) -> Result<(HolantInstance, Option<HolantCertificate>)> {
    let h = to_holant(inst);
    if inst.n_vars() > caps.brute_force || h.0.n_vars() > caps.brute_force {
        return Ok((h, None));
    }
    let cert = HolantCertificate { z_before: brute_z(inst), z_after: brute_z(&h.0) };
    if cert.z_before != cert.z_after {
        return Err(Error::Verification(format!("holant conversion changed Z: {} vs {}", cert.z_before, cert.z_after)));
    }
    Ok((h, Some(cert)))
}

/// `(M tensor .. tensor M) t` in the fixed index order.
pub(crate) fn apply_matrix(m: &[[Q; 2]; 2], t: &SignedTable) -> SignedTable {
    let k = t.arity();
    let mut v = t.table().to_vec();
    for i in 0..k {
        let bit = 1 << (k - 1 - i);
        for x in 0..v.len() {
            if x & bit == 0 {
                let (a, b) = (v[x].clone(), v[x | bit].clone());
                v[x] = &m[0][0] * &a + &m[0][1] * &b;
                v[x | bit] = &m[1][0] * &a + &m[1][1] * &b;
            }
        }
    }
    SignedTable::new(k, v).expect("same shape")
}

/// Replaces every registry function `f` by `M o f`; requires `M M^T = c I` with `c != 0`.
pub fn holographic_transform(h: &HolantInstance, m: &[[Q; 2]; 2]) -> Result<HolantInstance> {
    let dot = |r: &[Q; 2], s: &[Q; 2]| &r[0] * &s[0] + &r[1] * &s[1];
    let c = dot(&m[0], &m[0]);
    if c.is_zero() || dot(&m[1], &m[1]) != c || !dot(&m[0], &m[1]).is_zero() {
        return Err(Error::pre("M M^T is not a nonzero multiple of the identity"));
    }
    let mut out = h.0.clone();
    for (_, t) in &mut out.functions {
        *t = Table::Signed(apply_matrix(m, &t.to_signed()));
    }
    Ok(HolantInstance(out))
}

/// `[[1, 1], [1, -1]]`.
pub fn hadamard() -> [[Q; 2]; 2] {
    let one = Q::one();
    [[one.clone(), one.clone()], [one.clone(), -one]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::{fourier, named::*, q};
    use crate::instances::tests::PRISM;
    use crate::instances::z_exact;

    fn imp_star(d: usize) -> CspInstance {
        let mut i = CspInstance::new();
        i.add_function("imp", imp()).unwrap();
        for j in 0..d {
            i.add_constraint("imp", &["v", &format!("w{j}")]).unwrap();
        }
        i
    }

    #[test]
    fn holant_conversion() {
        let p = CspInstance::parse(PRISM).unwrap();
        assert_eq!(to_holant(&p).instance(), &p);
        for d in [3, 4, 5] {
            let i = imp_star(d);
            let (h, cert) = to_holant_certified(&i, &Caps::default()).unwrap();
            let cert = cert.unwrap();
            assert_eq!(cert.z_before, cert.z_after);
            let junctions = h.instance().constraints().iter().filter(|c| c.function == "eq3").count();
            // The d leaves have degree 1 and get one junction each.
            assert_eq!(junctions, d - 2 + d);
        }
        let h = to_holant(&imp_star(3));
        assert!(h.instance().variable_index("v.eq.3").is_some());
        assert!(h.instance().variable_index("v").is_none());
        let free = CspInstance::parse("var a\nfun u 1 1 2\ncon u b").unwrap();
        let (_, cert) = to_holant_certified(&free, &Caps::default()).unwrap();
        assert_eq!(cert.unwrap().z_after, q(6));
    }

    #[test]
    fn name_clashes_are_avoided() {
        let i = CspInstance::parse("fun eq3 1 1 1\nfun u 1 1 2\ncon u v\ncon eq3 v.eq.1").unwrap();
        let (h, cert) = to_holant_certified(&i, &Caps::default()).unwrap();
        assert!(cert.is_some());
        assert!(h.instance().function("eq3.1").is_some());
    }

    #[test]
    fn transform_examples() {
        let mut x = CspInstance::new();
        x.add_function("xor3", xor3()).unwrap();
        x.add_constraint("xor3", &["a", "b", "c"]).unwrap();
        x.add_constraint("xor3", &["a", "b", "c"]).unwrap();
        let h = HolantInstance::new(x).unwrap();
        let t = holographic_transform(&h, &hadamard()).unwrap();
        assert_eq!(t.instance().function("xor3").unwrap().to_signed(), eq3().to_signed().scale(&q(4)));
        assert_eq!(z_exact(t.instance()).unwrap(), q(8) * z_exact(h.instance()).unwrap());
        assert_eq!(apply_matrix(&hadamard(), &eq().to_signed()), SignedTable::from_ints(2, &[2, 0, 0, 2]).unwrap());
        assert_eq!(apply_matrix(&hadamard(), &imp().to_signed()).scale(&(q(1) / q(4))), fourier(&imp()));
        let id = [[q(1), q(0)], [q(0), q(1)]];
        assert_eq!(holographic_transform(&h, &id).unwrap().instance().function("xor3").unwrap().values(), xor3().table());
        assert!(holographic_transform(&h, &[[q(1), q(1)], [q(0), q(1)]]).is_err());
    }
}
