#![allow(dead_code)]

use num::{BigInt, One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use spincount::funcs::{inverse_fourier, is_in_cp, named, reindex, PBFunction, SignedTable, Q};
use spincount::instances::{CspInstance, HolantInstance};
use spincount::matching::{EdgeLabel, WeightedMultigraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonnegative rational with small numerator and denominator; zero with probability `p_zero`.
pub fn rational(r: &mut ChaCha8Rng, p_zero: f64) -> Q {
    if r.gen_bool(p_zero) {
        return Q::zero();
    }
    Q::new(BigInt::from(r.gen_range(1..=9)), BigInt::from(r.gen_range(1..=4)))
}

pub fn function(r: &mut ChaCha8Rng, arity: usize, p_zero: f64) -> PBFunction {
    PBFunction::from_fn(arity, |_| rational(r, p_zero)).unwrap()
}

/// Small integer-valued function, handy when a property needs ties.
pub fn small_function(r: &mut ChaCha8Rng, arity: usize) -> PBFunction {
    PBFunction::from_fn(arity, |_| Q::from_integer(r.gen_range(0..=3).into())).unwrap()
}

pub fn random_binary(r: &mut ChaCha8Rng) -> PBFunction {
    function(r, 2, 0.15)
}

/// Nonnegative spectrum: `F(0)` at least the sum of the other (nonnegative) coefficients.
pub fn cp_function(r: &mut ChaCha8Rng, arity: usize) -> PBFunction {
    let n = 1usize << arity;
    let mut t: Vec<Q> = (0..n).map(|_| rational(r, 0.3)).collect();
    let rest: Q = t[1..].iter().sum();
    t[0] = rest + rational(r, 0.3);
    if t[0].is_zero() {
        t[0] = Q::one();
    }
    let f = inverse_fourier(&SignedTable::new(arity, t).unwrap()).to_pb().expect("nonnegative");
    assert!(is_in_cp(&f));
    f
}

/// Ternary, `g(000) = 1`, zero on odd weight, with nonnegative spectrum.
pub fn w_tilde_cp(r: &mut ChaCha8Rng) -> PBFunction {
    loop {
        let (a, b, c) = (rational(r, 0.2), rational(r, 0.2), rational(r, 0.2));
        let one = Q::one();
        if &one + &a >= &b + &c && &one + &b >= &a + &c && &one + &c >= &a + &b {
            return w_tilde_from(a, b, c);
        }
    }
}

/// Ternary, `g(000) = 1`, zero on odd weight, arbitrary even-weight entries.
pub fn w_tilde(r: &mut ChaCha8Rng) -> PBFunction {
    w_tilde_from(rational(r, 0.2), rational(r, 0.2), rational(r, 0.2))
}

fn w_tilde_from(a: Q, b: Q, c: Q) -> PBFunction {
    let z = Q::zero;
    PBFunction::new(3, vec![Q::one(), z(), z(), a, z(), b, c.clone(), z()]).unwrap()
}

/// Holant instance: constraints with the given arities, slots paired at random.
/// The total arity must be even.
pub fn holant(r: &mut ChaCha8Rng, fs: &[PBFunction]) -> HolantInstance {
    let slots: usize = fs.iter().map(PBFunction::arity).sum();
    assert!(slots % 2 == 0);
    let mut owner: Vec<usize> = (0..slots / 2).flat_map(|v| [v, v]).collect();
    owner.shuffle(r);
    let mut inst = CspInstance::new();
    for v in 0..slots / 2 {
        inst.variable(&format!("x{v}")).unwrap();
    }
    let mut pos = 0;
    for (i, f) in fs.iter().enumerate() {
        let name = format!("g{i}");
        inst.add_function(&name, f.clone()).unwrap();
        inst.add_constraint_idx(&name, owner[pos..pos + f.arity()].to_vec()).unwrap();
        pos += f.arity();
    }
    HolantInstance::new(inst).unwrap()
}

/// Single binary `f` on `m` random pairs of `n` variables (repeats allowed).
pub fn binary_instance(r: &mut ChaCha8Rng, f: &PBFunction, n: usize, m: usize) -> CspInstance {
    let mut inst = CspInstance::new();
    inst.add_function("f", f.clone()).unwrap();
    for v in 0..n {
        inst.variable(&format!("x{v}")).unwrap();
    }
    for _ in 0..m {
        let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
        inst.add_constraint_idx("f", vec![a, b]).unwrap();
    }
    inst
}

pub fn weighted_graph(r: &mut ChaCha8Rng, n: usize, m: usize) -> WeightedMultigraph {
    let mut g = WeightedMultigraph::new();
    for i in 0..n {
        g.vertex(&format!("u{i}")).unwrap();
    }
    for _ in 0..m {
        let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
        g.add_edge(a, b, rational(r, 0.1), EdgeLabel::Plain).unwrap();
    }
    g
}

/// `f(x) g(y)` on disjoint arguments.
pub fn tensor(f: &PBFunction, g: &PBFunction) -> PBFunction {
    let (k, l) = (f.arity(), g.arity());
    let a = reindex(f, &(0..k).collect::<Vec<_>>(), k + l).unwrap();
    let b = reindex(g, &(k..k + l).collect::<Vec<_>>(), k + l).unwrap();
    spincount::funcs::product(&a, &b).unwrap()
}

/// A product of unary, EQ and NEQ factors on random coordinates, times a positive scale.
pub fn product_type(r: &mut ChaCha8Rng, arity: usize) -> PBFunction {
    let mut f = PBFunction::constant(arity, rational(r, 0.0)).unwrap();
    for _ in 0..r.gen_range(0..=arity + 1) {
        let factor = match r.gen_range(0..3) {
            0 => PBFunction::new(1, vec![rational(r, 0.1), rational(r, 0.1)]).unwrap(),
            1 => named::eq(),
            _ => named::neq(),
        };
        let scope: Vec<usize> = (0..factor.arity()).map(|_| r.gen_range(0..arity)).collect();
        let lifted = reindex(&factor, &scope, arity).unwrap();
        f = spincount::funcs::product(&f, &lifted).unwrap();
    }
    f
}

/// Increasing: `f(x) = max_{y <= x} r(y)`.
pub fn monotone(r: &mut ChaCha8Rng, arity: usize) -> PBFunction {
    let base: Vec<Q> = (0..1usize << arity).map(|_| rational(r, 0.3)).collect();
    PBFunction::from_fn(arity, |x| (0..=x).filter(|y| y & x == *y).map(|y| base[y].clone()).max().unwrap()).unwrap()
}

pub fn within(estimate: &Q, exact: &Q, eps: f64) -> bool {
    use num::ToPrimitive;
    if exact.is_zero() {
        return estimate.is_zero();
    }
    let ratio = (estimate / exact).to_f64().unwrap();
    ratio > 0.0 && ratio.ln().abs() <= eps
}
