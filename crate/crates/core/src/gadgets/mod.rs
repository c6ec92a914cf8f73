//! Gadget constructions: symmetrization, up/down unaries, non-lsm binary
//! extraction, approximate pinning and the pinning case analysis.
//!
//! Every construction returns the pps trace it was built from, and the trace
//! is re-evaluated and compared with the directly computed table before return.

mod pinning;
mod pps;

pub use pinning::{pinning_analysis, pinning_registry, verdict_holds, PinningVerdict};
pub use pps::{eval_pps, Atom, PpsFormula, Registry, MAX_PPS_VARS};
pub(crate) use pps::{PpsBuilder, DELTA0, DELTA1};

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::funcs::{
    coord, fourier, is_down, is_ising_binary, is_lsm, is_trivial_binary, is_up,
    lsm_violation, property_report, PBFunction, PropertyReport, Q,
};

/// A constructed function together with the formula realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub function: PBFunction,
    pub trace: PpsFormula,
}

pub(crate) fn verified(trace: PpsFormula, registry: &Registry, direct: PBFunction, what: &str) -> Result<Gadget> {
    let via = eval_pps(&trace, registry)?;
    if via != direct {
        return Err(Error::Verification(format!("{what}: trace `{trace}` evaluates to {via:?}, expected {direct:?}")));
    }
    Ok(Gadget { function: direct, trace })
}

pub(crate) fn registry_of(entries: &[(&str, &PBFunction)]) -> Registry {
    let mut r: Registry = entries.iter().map(|(k, f)| (k.to_string(), (*f).clone())).collect();
    r.insert(DELTA0.into(), crate::funcs::named::delta0());
    r.insert(DELTA1.into(), crate::funcs::named::delta1());
    r
}

fn require_binary(f: &PBFunction) -> Result<()> {
    if f.arity() != 2 {
        return Err(Error::ArityMismatch { expected: 2, got: f.arity() });
    }
    Ok(())
}

fn binary_from(f: impl Fn(usize, usize) -> Q) -> PBFunction {
    PBFunction::from_vec_unchecked(2, vec![f(0, 0), f(0, 1), f(1, 0), f(1, 1)])
}

fn unary_from(f: impl Fn(usize) -> Q) -> PBFunction {
    PBFunction::from_vec_unchecked(1, vec![f(0), f(1)])
}

fn b(f: &PBFunction, x: usize, y: usize) -> &Q {
    f.at(2 * x + y)
}

/// Symmetrization mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymMode {
    /// `f(x,y) f(y,x)` for nontrivial non-lsm `f`.
    Product = 1,
    /// `sum_z f(x,z) f(y,z)` for nontrivial lsm `f`.
    Compose = 2,
    /// `sum_z f(x,z) f(y,z) up(z)` for nontrivial lsm Ising `f`.
    Weighted = 3,
}

impl TryFrom<u8> for SymMode {
    type Error = Error;
    fn try_from(m: u8) -> Result<Self> {
        match m {
            1 => Ok(SymMode::Product),
            2 => Ok(SymMode::Compose),
            3 => Ok(SymMode::Weighted),
            _ => Err(Error::invalid(format!("symmetrize mode must be 1, 2 or 3, got {m}"))),
        }
    }
}

pub fn symmetrize(f: &PBFunction, mode: SymMode, up: Option<&PBFunction>) -> Result<(Gadget, PropertyReport)> {
    require_binary(f)?;
    let trivial = is_trivial_binary(f) == Some(true);
    let lsm = is_lsm(f);
    if trivial {
        return Err(Error::pre("f is trivial"));
    }
    let (direct, trace, reg) = match mode {
        SymMode::Product => {
            if lsm {
                return Err(Error::pre("mode 1 needs a non-lsm f"));
            }
            let d = binary_from(|x, y| b(f, x, y) * b(f, y, x));
            (d, PpsFormula::parse("pps 2 0 ; f v1 v2 ; f v2 v1")?, registry_of(&[("f", f)]))
        }
        SymMode::Compose => {
            if !lsm {
                return Err(Error::pre("mode 2 needs an lsm f"));
            }
            let d = binary_from(|x, y| (0..2).map(|z| b(f, x, z) * b(f, y, z)).sum());
            (d, PpsFormula::parse("pps 2 1 ; f v1 v3 ; f v2 v3")?, registry_of(&[("f", f)]))
        }
        SymMode::Weighted => {
            if !lsm {
                return Err(Error::pre("mode 3 needs an lsm f"));
            }
            if is_ising_binary(f) != Some(true) {
                return Err(Error::pre("mode 3 needs an Ising f"));
            }
            let u = up.ok_or_else(|| Error::pre("mode 3 needs an up unary"))?;
            if !is_up(u) {
                return Err(Error::pre("up is not strictly increasing permissive"));
            }
            let d = binary_from(|x, y| (0..2).map(|z| b(f, x, z) * b(f, y, z) * u.at(z)).sum());
            (d, PpsFormula::parse("pps 2 1 ; f v1 v3 ; f v2 v3 ; up v3")?, registry_of(&[("f", f), ("up", u)]))
        }
    };
    let g = verified(trace, &reg, direct, "symmetrize")?;
    let rep = property_report(&g.function);
    let ok = rep.symmetric == Some(true)
        && rep.trivial == Some(false)
        && match mode {
            SymMode::Product => !rep.lsm,
            SymMode::Compose => rep.lsm,
            SymMode::Weighted => rep.lsm && rep.ising == Some(false),
        };
    if !ok {
        return Err(Error::Verification(format!("symmetrize mode {} produced {:?}", mode as u8, g.function)));
    }
    Ok((g, rep))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpDown {
    pub up: Gadget,
    pub down: Gadget,
    /// Whether the arguments of `f` were swapped first.
    pub swapped: bool,
}

/// Row and column sums of `f`, after swapping arguments so that the
/// `(0,1)` Fourier coefficient is positive.
pub fn make_up_down(f: &PBFunction) -> Result<UpDown> {
    require_binary(f)?;
    let ft = fourier(f);
    let (f01, f10) = (ft.at(1), ft.at(2));
    if (f01 * f10).is_positive() || (f01 * f10).is_zero() {
        return Err(Error::pre(format!("Fourier coefficients f01 = {f01} and f10 = {f10} do not have opposite signs")));
    }
    let swapped = f01.is_negative();
    let g = |x: usize, y: usize| if swapped { b(f, y, x) } else { b(f, x, y) };
    let up = unary_from(|x| g(x, 0) + g(x, 1));
    let down = unary_from(|y| g(0, y) + g(1, y));
    let (tu, td) = if swapped {
        ("pps 1 1 ; f v2 v1", "pps 1 1 ; f v1 v2")
    } else {
        ("pps 1 1 ; f v1 v2", "pps 1 1 ; f v2 v1")
    };
    let reg = registry_of(&[("f", f)]);
    let up = verified(PpsFormula::parse(tu)?, &reg, up, "up")?;
    let down = verified(PpsFormula::parse(td)?, &reg, down, "down")?;
    if !is_up(&up.function) || !is_down(&down.function) {
        return Err(Error::Verification(format!("up {:?} / down {:?} have the wrong shape", up.function, down.function)));
    }
    Ok(UpDown { up, down, swapped })
}

/// Scope for `name` restricted along the pair `(a, b)`: coordinates where they
/// agree are pinned, coordinates where `a` is 0 map to `vars[0]`, the rest to `vars[1]`.
pub(crate) fn restricted_scope(k: usize, a: usize, b: usize, vars: [usize; 2], pb: &mut PpsBuilder) -> Vec<usize> {
    (0..k)
        .map(|i| {
            let (ai, bi) = (coord(a, i, k), coord(b, i, k));
            if ai == bi {
                pb.pinned(ai)
            } else {
                vars[ai as usize]
            }
        })
        .collect()
}

/// Direct table of the restriction along `(a, b)` as a binary function.
pub(crate) fn restrict_binary(f: &PBFunction, a: usize, b: usize) -> PBFunction {
    let k = f.arity();
    binary_from(|x, y| {
        let idx = (0..k).fold(0, |acc, i| {
            let (ai, bi) = (coord(a, i, k), coord(b, i, k));
            let v = if ai == bi { ai as usize } else if ai == 0 { x } else { y };
            (acc << 1) | v
        });
        f.at(idx).clone()
    })
}

/// A binary nontrivial non-lsm function in the pinning clone of `{f, g}`.
pub fn extract_nonlsm_binary(f: &PBFunction, g: &PBFunction) -> Result<Gadget> {
    require_binary(g)?;
    let (a, bb) = lsm_violation(f).ok_or_else(|| Error::pre("f is lsm"))?;
    if is_trivial_binary(g) != Some(false) {
        return Err(Error::pre("g is trivial"));
    }
    let reg = registry_of(&[("f", f), ("g", g)]);
    let mut pb = PpsBuilder::new(2);
    let scope = restricted_scope(f.arity(), a, bb, [0, 1], &mut pb);
    pb.atom("f", scope);
    let fp_trace = pb.build();
    let fp = restrict_binary(f, a, bb);
    let fp_g = verified(fp_trace.clone(), &reg, fp.clone(), "restriction of f")?;

    let result = if !b(&fp, 0, 0).is_zero() || !b(&fp, 1, 1).is_zero() {
        fp_g
    } else if !is_lsm(g) {
        verified(PpsFormula::parse("pps 2 0 ; g v1 v2")?, &reg, g.clone(), "g")?
    } else {
        // g'(x,y) = sum_z g(x,z) f'(z,y)
        let direct = binary_from(|x, y| (0..2).map(|z| b(g, x, z) * b(&fp, z, y)).sum());
        let mut pb = PpsBuilder::new(2);
        let z = pb.fresh();
        pb.atom("g", vec![0, z]);
        pb.inline(&fp_trace, &[z, 1]);
        verified(pb.build(), &reg, direct, "composition g'")?
    };
    let r = &result.function;
    if is_trivial_binary(r) != Some(false) || is_lsm(r) {
        return Err(Error::Verification(format!("extracted {r:?} is not nontrivial non-lsm")));
    }
    Ok(result)
}

/// Normalized strictly monotone unary: `(u(0) < 1 = u(1))` or `(1 = u(0) > u(1))`.
fn off_pin(u: &PBFunction) -> Option<(usize, &Q)> {
    if u.arity() != 1 {
        return None;
    }
    let (u0, u1) = (u.at(0), u.at(1));
    if u1.is_one() && u0.is_positive() && u0 < u1 {
        Some((0, u0))
    } else if u0.is_one() && u1.is_positive() && u1 < u0 {
        Some((1, u1))
    } else {
        None
    }
}

/// `u^k` with the least `k >= 1` making the off-pin entry at most `eps`.
pub fn approx_pin(u: &PBFunction, eps: &Q) -> Result<(PBFunction, u32)> {
    if !eps.is_positive() {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let (_, off) = off_pin(u).ok_or_else(|| Error::pre(format!("{u:?} is not a normalized strictly monotone unary")))?;
    let mut k = 1u32;
    let mut p = off.clone();
    while &p > eps {
        p *= off;
        k += 1;
    }
    Ok((u.pow(k), k))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

/// Divides by `u(1)` (up) or `u(0)` (down); returns the divisor as the scale.
pub fn normalize_unary(u: &PBFunction, dir: Direction) -> Result<(PBFunction, Q)> {
    let ok = match dir {
        Direction::Up => is_up(u),
        Direction::Down => is_down(u),
    };
    if !ok {
        return Err(Error::pre(format!("{u:?} is not strictly {} permissive", if dir == Direction::Up { "increasing" } else { "decreasing" })));
    }
    let s = u.at(if dir == Direction::Up { 1 } else { 0 }).clone();
    Ok((u.scale(&(Q::one() / &s))?, s))
}
