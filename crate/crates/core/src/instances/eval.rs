//! Exact partition functions.

use num::{BigInt, Integer, One, ToPrimitive, Zero};

use super::{CspInstance, HolantInstance, Table};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::funcs::{is_product_type, named, ProductForm, Q};

/// `Z` by exhaustive summation, capped by `Caps::from_env().brute_force`.
pub fn z_exact(inst: &CspInstance) -> Result<Q> {
    z_exact_capped(inst, Caps::from_env().brute_force)
}

pub fn z_exact_capped(inst: &CspInstance, cap: usize) -> Result<Q> {
    if inst.n_vars() > cap {
        return Err(Error::capacity("variable count", inst.n_vars(), cap));
    }
    Ok(brute_z(inst))
}

/// Values that the enumerator can accumulate; `None` signals overflow.
trait Acc: Clone {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn add(&self, o: &Self) -> Option<Self>;
}

impl Acc for i128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
}

impl Acc for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
}

/// Depth-first enumeration; constraint `c` is applied once its last variable is set.
struct Enumerator<'a, T> {
    tables: Vec<Vec<T>>,
    /// `(table, scope in enumeration positions)` grouped by trigger depth.
    triggers: Vec<Vec<(usize, &'a [usize])>>,
    assign: Vec<u8>,
}

impl<T: Acc> Enumerator<'_, T> {
    fn run(&mut self, d: usize, acc: &T) -> Option<T> {
        if d == self.assign.len() {
            return Some(acc.clone());
        }
        let mut total = T::zero();
        'branch: for b in 0..2u8 {
            self.assign[d] = b;
            let mut a = acc.clone();
            for &(t, scope) in &self.triggers[d] {
                let idx = scope.iter().fold(0usize, |x, &p| (x << 1) | self.assign[p] as usize);
                let w = &self.tables[t][idx];
                if w.is_zero() {
                    continue 'branch;
                }
                a = a.mul(w)?;
            }
            let sub = self.run(d + 1, &a)?;
            total = total.add(&sub)?;
        }
        Some(total)
    }
}

/// Each table scaled to integers: `(integer table, denominator)`.
fn integer_tables(inst: &CspInstance) -> Vec<(Vec<BigInt>, BigInt)> {
    inst.functions
        .iter()
        .map(|(_, t)| {
            let d = t.values().iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
            let ints = t.values().iter().map(|v| v.numer() * (&d / v.denom())).collect();
            (ints, d)
        })
        .collect()
}

fn enumerate<T: Acc>(inst: &CspInstance, tables: Vec<Vec<T>>, order_pos: &[usize], n_pos: usize, init: T) -> Option<T> {
    let fids: Vec<usize> = inst.constraints.iter().map(|c| inst.fn_index[&c.function]).collect();
    let pos_scopes: Vec<Vec<usize>> =
        inst.constraints.iter().map(|c| c.scope.iter().map(|&v| order_pos[v]).collect()).collect();
    let mut init = init;
    let mut triggers: Vec<Vec<(usize, &[usize])>> = vec![Vec::new(); n_pos];
    for (ci, s) in pos_scopes.iter().enumerate() {
        match s.iter().max() {
            Some(&m) => triggers[m].push((fids[ci], s.as_slice())),
            None => {
                let w = &tables[fids[ci]][0];
                if w.is_zero() {
                    return Some(T::zero());
                }
                init = init.mul(w)?;
            }
        }
    }
    Enumerator { tables, triggers, assign: vec![0; n_pos] }.run(0, &init)
}

pub(crate) fn brute_z(inst: &CspInstance) -> Q {
    let degrees = inst.degrees();
    // Constrained variables in first-use order; free ones contribute a factor 2 each.
    let mut order_pos = vec![usize::MAX; inst.n_vars()];
    let mut n_pos = 0;
    for c in &inst.constraints {
        for &v in &c.scope {
            if order_pos[v] == usize::MAX {
                order_pos[v] = n_pos;
                n_pos += 1;
            }
        }
    }
    let free = degrees.iter().filter(|&&d| d == 0).count();
    let ints = integer_tables(inst);
    let mut denom = BigInt::one();
    for c in &inst.constraints {
        denom *= &ints[inst.fn_index[&c.function]].1;
    }
    let small: Option<Vec<Vec<i128>>> =
        ints.iter().map(|(t, _)| t.iter().map(ToPrimitive::to_i128).collect()).collect();
    let fast = small.and_then(|t| enumerate(inst, t, &order_pos, n_pos, 1i128)).map(BigInt::from);
    let num = fast.unwrap_or_else(|| {
        let t = ints.into_iter().map(|(t, _)| t).collect();
        enumerate(inst, t, &order_pos, n_pos, BigInt::one()).expect("bigint never overflows")
    });
    Q::new(num << free, denom)
}

/// Parity union-find over variables.
struct ParityUf {
    parent: Vec<usize>,
    parity: Vec<u8>,
}

impl ParityUf {
    fn new(n: usize) -> Self {
        ParityUf { parent: (0..n).collect(), parity: vec![0; n] }
    }

    /// Root and parity of `v` relative to it.
    fn find(&mut self, v: usize) -> (usize, u8) {
        let p = self.parent[v];
        if p == v {
            return (v, 0);
        }
        let (r, pp) = self.find(p);
        self.parent[v] = r;
        self.parity[v] ^= pp;
        (r, self.parity[v])
    }

    /// Records `a xor b = d`; false on contradiction.
    fn union(&mut self, a: usize, b: usize, d: u8) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == d;
        }
        self.parent[rb] = ra;
        self.parity[rb] = pa ^ pb ^ d;
        true
    }
}

/// `Z` in polynomial time for instances whose registry is all product type.
pub fn z_product_type(inst: &CspInstance) -> Result<Q> {
    let mut forms = Vec::with_capacity(inst.functions.len());
    for (name, t) in &inst.functions {
        let f = match t {
            Table::Function(f) => f,
            Table::Signed(_) => return Err(Error::pre(format!("`{name}` is a signed table"))),
        };
        let form = is_product_type(f).ok_or_else(|| Error::pre(format!("`{name}` is not product type")))?;
        forms.push(form);
    }
    let n = inst.n_vars();
    let mut uf = ParityUf::new(n);
    let mut weight: Vec<[Q; 2]> = vec![[Q::one(), Q::one()]; n];
    let mut scale = Q::one();
    for c in &inst.constraints {
        let fac = match &forms[inst.fn_index[&c.function]] {
            ProductForm::Zero => return Ok(Q::zero()),
            ProductForm::Factored(fac) => fac,
        };
        scale *= &fac.scale;
        for &(i, b) in &fac.pins {
            weight[c.scope[i]][1 - b as usize] = Q::zero();
        }
        for &(i, r, differ) in &fac.links {
            if !uf.union(c.scope[i], c.scope[r], differ as u8) {
                return Ok(Q::zero());
            }
        }
        for (r, u) in &fac.unaries {
            let w = &mut weight[c.scope[*r]];
            w[0] *= u.at(0);
            w[1] *= u.at(1);
        }
    }
    let mut comp: Vec<[Q; 2]> = vec![[Q::one(), Q::one()]; n];
    for v in 0..n {
        let (r, p) = uf.find(v);
        for b in 0..2 {
            let val = &weight[v][b ^ p as usize];
            comp[r][b] *= val;
        }
    }
    let mut z = scale;
    for v in 0..n {
        if uf.find(v).0 == v {
            z *= &comp[v][0] + &comp[v][1];
        }
    }
    Ok(z)
}

/// `Z'`: the total weight of near-assignments, summed over unordered variable pairs.
pub fn near_assignment_total(h: &HolantInstance, caps: &Caps) -> Result<Q> {
    let inst = h.instance();
    let n = inst.n_vars();
    if n > caps.near_assignment {
        return Err(Error::capacity("variable count", n, caps.near_assignment));
    }
    let mut total = Q::zero();
    for u in 0..n {
        for v in u + 1..n {
            total += brute_z(&split_pair(inst, u, v));
        }
    }
    Ok(total)
}

/// `Omega_{u,v}`: the second occurrences of `u` and `v` get fresh copies joined by NEQ.
pub(crate) fn split_pair(inst: &CspInstance, u: usize, v: usize) -> CspInstance {
    let mut out = inst.clone();
    let neq = out.ensure_function("neq", Table::Function(named::neq()));
    for w in [u, v] {
        let name = out.fresh_variable_name(&format!("{}''", inst.variables[w]));
        let copy = out.variable(&name).expect("fresh name");
        let (ci, si) = out
            .constraints
            .iter()
            .enumerate()
            .flat_map(|(ci, c)| c.scope.iter().enumerate().map(move |(si, &x)| (ci, si, x)))
            .filter(|&(_, _, x)| x == w)
            .map(|(ci, si, _)| (ci, si))
            .nth(1)
            .expect("holant variables occur twice");
        out.constraints[ci].scope[si] = copy;
        out.add_constraint_idx(&neq, vec![w, copy]).expect("registered");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::{named::*, q, PBFunction};
    use crate::instances::tests::PRISM;

    #[test]
    fn z_examples() {
        let i = CspInstance::parse("fun imp 2 1 1 0 1\ncon imp x y").unwrap();
        assert_eq!(z_exact(&i).unwrap(), q(3));
        assert_eq!(z_exact(&CspInstance::parse(PRISM).unwrap()).unwrap(), q(4));
        assert_eq!(z_exact(&CspInstance::new()).unwrap(), q(1));
        let s = CspInstance::parse("fun h 1 1/2 -3\nvar a b\ncon h a").unwrap();
        assert_eq!(z_exact(&s).unwrap(), q(-5));
        let big = CspInstance::parse("var a b c d e").unwrap();
        assert!(z_exact_capped(&big, 4).unwrap_err().is_capacity());
    }

    #[test]
    fn overflow_falls_back() {
        let mut i = CspInstance::new();
        i.add_function("u", PBFunction::ints(1, &[1 << 40, 1 << 41])).unwrap();
        for j in 0..6 {
            i.add_constraint("u", &[&format!("x{j}")]).unwrap();
        }
        let expect = (q(1 << 40) + q(1 << 41)).pow(6);
        assert_eq!(z_exact(&i).unwrap(), expect);
    }

    #[test]
    fn product_type_examples() {
        let mut i = CspInstance::new();
        i.add_function("neq", neq()).unwrap();
        i.add_function("u", unary(1, 2)).unwrap();
        i.add_constraint("neq", &["x", "y"]).unwrap();
        i.add_constraint("u", &["x"]).unwrap();
        assert_eq!(z_product_type(&i).unwrap(), q(3));
        i.add_function("eq", eq()).unwrap();
        i.add_constraint("eq", &["x", "y"]).unwrap();
        assert_eq!(z_product_type(&i).unwrap(), q(0));
        let x = CspInstance::parse(PRISM).unwrap();
        assert!(z_product_type(&x).is_err());
    }

    #[test]
    fn near_assignments() {
        let h = HolantInstance::new(CspInstance::parse(PRISM).unwrap()).unwrap();
        assert_eq!(near_assignment_total(&h, &Caps::default()).unwrap(), q(12));
        let one = CspInstance::parse("fun eq 2 1 0 0 1\ncon eq x x").unwrap();
        let h = HolantInstance::new(one).unwrap();
        assert_eq!(near_assignment_total(&h, &Caps::default()).unwrap(), q(0));
    }
}
