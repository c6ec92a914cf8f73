//! Predicates over pseudo-Boolean functions.

use num::{Signed, Zero};

use super::{fourier, irredundant, PBFunction, Q};

pub fn is_permissive(f: &PBFunction) -> bool {
    f.table().iter().all(|v| !v.is_zero())
}

fn incomparable(a: usize, b: usize) -> bool {
    a & !b != 0 && b & !a != 0
}

/// Least pair `a < b` (table order) with `f(a) f(b) > f(a & b) f(a | b)`.
pub fn lsm_violation(f: &PBFunction) -> Option<(usize, usize)> {
    let n = f.table().len();
    for a in 0..n {
        if f.at(a).is_zero() {
            continue;
        }
        for b in a + 1..n {
            if !incomparable(a, b) || f.at(b).is_zero() {
                continue;
            }
            if f.at(a) * f.at(b) > f.at(a & b) * f.at(a | b) {
                return Some((a, b));
            }
        }
    }
    None
}

pub fn is_lsm(f: &PBFunction) -> bool {
    lsm_violation(f).is_none()
}

pub fn is_log_modular(f: &PBFunction) -> bool {
    let n = f.table().len();
    (0..n).all(|a| (a + 1..n).all(|b| !incomparable(a, b) || f.at(a) * f.at(b) == f.at(a & b) * f.at(a | b)))
}

pub fn is_monotone(f: &PBFunction) -> bool {
    let n = f.table().len();
    (0..n).all(|a| (0..f.arity()).all(|j| a & (1 << j) != 0 || f.at(a) <= f.at(a | (1 << j))))
}

/// Least `(a, b)` with `a < b` both in the support, `a <= b` coordinatewise and `f(a) > f(b)`.
pub fn monotone_on_support_violation(f: &PBFunction) -> Option<(usize, usize)> {
    support_chain_pair(f, |fa, fb| fa > fb)
}

/// Least `(c, d)` with `c < d` both in the support, `c <= d` coordinatewise and `f(c) < f(d)`;
/// exists exactly when the bit-flip of `f` is not monotone on its support.
pub fn increasing_on_support_pair(f: &PBFunction) -> Option<(usize, usize)> {
    support_chain_pair(f, |fa, fb| fa < fb)
}

fn support_chain_pair(f: &PBFunction, bad: impl Fn(&Q, &Q) -> bool) -> Option<(usize, usize)> {
    let n = f.table().len();
    for a in 0..n {
        if f.at(a).is_zero() {
            continue;
        }
        for b in a + 1..n {
            if a & !b == 0 && !f.at(b).is_zero() && bad(f.at(a), f.at(b)) {
                return Some((a, b));
            }
        }
    }
    None
}

pub fn is_monotone_on_support(f: &PBFunction) -> bool {
    monotone_on_support_violation(f).is_none()
}

/// Least `a < b` in the support with `a | b` outside it.
pub fn join_violation(f: &PBFunction) -> Option<(usize, usize)> {
    let s = f.support();
    let t = s.indices();
    for (i, &a) in t.iter().enumerate() {
        for &b in &t[i + 1..] {
            if !s.contains(a | b) {
                return Some((a, b));
            }
        }
    }
    None
}

pub fn is_support_join_closed(f: &PBFunction) -> bool {
    join_violation(f).is_none()
}

/// `None` when `f` is not pure; `Some(None)` for the all-zero function;
/// `Some(Some(r))` when the range is `{0, r}` or `{r}`.
pub fn pure_value(f: &PBFunction) -> Option<Option<Q>> {
    let mut r: Option<&Q> = None;
    for v in f.table().iter().filter(|v| !v.is_zero()) {
        match r {
            None => r = Some(v),
            Some(r0) if r0 != v => return None,
            _ => {}
        }
    }
    Some(r.cloned())
}

pub fn is_pure(f: &PBFunction) -> bool {
    pure_value(f).is_some()
}

/// Least ordered pair `(a, b)` with `0 < f(a) < f(b)`.
pub fn nonpure_pair(f: &PBFunction) -> Option<(usize, usize)> {
    let n = f.table().len();
    for a in 0..n {
        if f.at(a).is_zero() {
            continue;
        }
        for b in 0..n {
            if f.at(a) < f.at(b) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Dimension of the GF(2) span of `vectors`.
pub(crate) fn gf2_rank(vectors: impl IntoIterator<Item = usize>) -> usize {
    let mut basis: Vec<usize> = Vec::new();
    for mut v in vectors {
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// True when the support is a coset of a linear subspace (the empty set counts).
pub fn is_affine_support(f: &PBFunction) -> bool {
    let s = f.support();
    let t = s.indices();
    match t.first() {
        None => true,
        Some(&a0) => {
            let r = gf2_rank(t.iter().map(|&a| a ^ a0));
            t.len() == 1 << r
        }
    }
}

pub fn is_in_cp(f: &PBFunction) -> bool {
    fourier(f).is_nonnegative()
}

pub fn is_self_dual(f: &PBFunction) -> bool {
    let n = f.table().len();
    (0..n).all(|x| f.at(x) == f.at(n - 1 - x))
}

pub fn is_in_sdp3(f: &PBFunction) -> bool {
    f.arity() == 3 && is_self_dual(f) && is_in_cp(f)
}

/// Log-modular, or of the form `g(x) EQ(x, y)` or `g(x) NEQ(x, y)`.
pub fn is_trivial_binary(f: &PBFunction) -> Option<bool> {
    let (a, b, c, d) = f.binary_entries()?;
    Some(a * d == b * c || (b.is_zero() && c.is_zero()) || (a.is_zero() && d.is_zero()))
}

pub fn is_symmetric_binary(f: &PBFunction) -> Option<bool> {
    let (_, b, c, _) = f.binary_entries()?;
    Some(b == c)
}

pub fn is_ising_binary(f: &PBFunction) -> Option<bool> {
    let (a, b, c, d) = f.binary_entries()?;
    Some(b == c && a == d)
}

/// Strictly increasing and permissive unary.
pub fn is_up(u: &PBFunction) -> bool {
    u.arity() == 1 && u.at(0).is_positive() && u.at(0) < u.at(1)
}

/// Strictly decreasing and permissive unary.
pub fn is_down(u: &PBFunction) -> bool {
    u.arity() == 1 && u.at(1).is_positive() && u.at(1) < u.at(0)
}

/// Counterexample to pin-monotonicity; indices refer to the irredundant form `f†`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinMonotoneViolation {
    pub coordinate: usize,
    /// Neighbors differing in `coordinate` with `f†(a) > f†(b)`.
    pub a: usize,
    pub b: usize,
    /// An input with `c[coordinate] = 1` and `f†(c) != 0`.
    pub c: usize,
}

pub fn pin_monotone_violation(f: &PBFunction) -> Option<PinMonotoneViolation> {
    let (g, _) = irredundant(f);
    let k = g.arity();
    let n = g.table().len();
    for j in 0..k {
        let bit = 1 << (k - 1 - j);
        let Some(c) = (0..n).find(|&c| c & bit != 0 && !g.at(c).is_zero()) else {
            continue;
        };
        if let Some(a) = (0..n).find(|&a| a & bit == 0 && g.at(a) > g.at(a | bit)) {
            return Some(PinMonotoneViolation { coordinate: j, a, b: a | bit, c });
        }
    }
    None
}

pub fn is_pin_monotone(f: &PBFunction) -> bool {
    pin_monotone_violation(f).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub arity: usize,
    pub permissive: bool,
    pub lsm: bool,
    pub log_modular: bool,
    pub monotone: bool,
    pub monotone_on_support: bool,
    pub support_join_closed: bool,
    pub pure: bool,
    /// The nonzero value of a pure function; `None` for the all-zero function.
    pub pure_value: Option<Q>,
    pub affine_support: bool,
    pub in_cp: bool,
    pub in_sdp3: bool,
    pub trivial: Option<bool>,
    pub ferromagnetic: Option<bool>,
    pub ising: Option<bool>,
    pub symmetric: Option<bool>,
}

pub fn property_report(f: &PBFunction) -> PropertyReport {
    let lsm = is_lsm(f);
    let pure = pure_value(f);
    let binary = f.arity() == 2;
    PropertyReport {
        arity: f.arity(),
        permissive: is_permissive(f),
        lsm,
        log_modular: is_log_modular(f),
        monotone: is_monotone(f),
        monotone_on_support: is_monotone_on_support(f),
        support_join_closed: is_support_join_closed(f),
        pure: pure.is_some(),
        pure_value: pure.flatten(),
        affine_support: is_affine_support(f),
        in_cp: is_in_cp(f),
        in_sdp3: is_in_sdp3(f),
        trivial: is_trivial_binary(f),
        ferromagnetic: binary.then_some(lsm),
        ising: is_ising_binary(f),
        symmetric: is_symmetric_binary(f),
    }
}

#[cfg(test)]
mod tests {
    use super::super::named::*;
    use super::super::q;
    use super::*;

    #[test]
    fn report_examples() {
        let r = property_report(&binary([[2, 1], [1, 2]]));
        assert!(r.lsm && r.ising == Some(true) && r.trivial == Some(false));
        let r = property_report(&binary([[1, 2], [2, 1]]));
        assert!(!r.lsm && !r.monotone);
        let r = property_report(&delta0());
        assert!(r.pure && r.pure_value == Some(q(1)) && r.monotone_on_support);
        assert_eq!(r.trivial, None);
        assert!(!is_lsm(&xor3()));
        assert!(!property_report(&xor3()).in_sdp3);
        assert!(property_report(&PBFunction::ints(3, &[1, 1, 0, 0, 0, 0, 1, 1])).in_sdp3);
    }

    #[test]
    fn lsm_witness_is_least() {
        assert_eq!(lsm_violation(&xor3()), Some((0b011, 0b101)));
    }

    #[test]
    fn affine_support_cases() {
        assert!(is_affine_support(&xor3()));
        assert!(is_affine_support(&PBFunction::zero(2).unwrap()));
        assert!(!is_affine_support(&imp()));
        assert!(is_affine_support(&neq()));
    }

    #[test]
    fn pin_monotone_examples() {
        assert!(is_pin_monotone(&delta0()) && is_pin_monotone(&delta1()));
        let v = pin_monotone_violation(&unary(2, 1)).unwrap();
        assert_eq!((v.a, v.b, v.c), (0, 1, 1));
        assert!(is_pin_monotone(&binary([[0, 1], [1, 1]])) && is_pin_monotone(&eq3()));
        assert!(!is_pin_monotone(&imp()));
        assert!(!is_pin_monotone(&binary([[1, 2], [2, 1]])));
    }

    #[test]
    fn zero_binary_is_trivial() {
        assert_eq!(is_trivial_binary(&PBFunction::zero(2).unwrap()), Some(true));
        assert_eq!(pure_value(&PBFunction::zero(2).unwrap()), Some(None));
    }
}
