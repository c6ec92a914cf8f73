//! Whether the pinning clone of a finite set contains both a strictly
//! increasing and a strictly decreasing permissive unary.

use std::collections::BTreeMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::funcs::{
    bit_flip, increasing_on_support_pair, is_down, is_monotone_on_support, is_pure, is_support_join_closed, is_up,
    join_violation, monotone_on_support_violation, nonpure_pair, PBFunction, Q,
};

use super::{registry_of, restrict_binary, restricted_scope, verified, Gadget, PpsBuilder, PpsFormula, Registry, DELTA0, DELTA1};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PinningVerdict {
    /// Every function is pure.
    AllPure,
    /// Every function is monotone on a join-closed support; `witness`'s bit-flip is not monotone on its support.
    MonotoneFamily { index: usize, witness: PBFunction },
    /// The same for the bit-flipped family; `witness` itself is not monotone on its support.
    FlippedMonotoneFamily { index: usize, witness: PBFunction },
    /// Both unaries are realized; traces refer to `f1..fn`, `delta0`, `delta1`.
    BothUnaries { case: u8, up: Gadget, down: Gadget },
}

pub fn fname(i: usize) -> String {
    format!("f{}", i + 1)
}

/// Registry naming `F` as `f1..fn` plus the two pinning functions.
pub fn pinning_registry(fs: &[PBFunction]) -> Registry {
    let names: Vec<String> = (0..fs.len()).map(fname).collect();
    let entries: Vec<(&str, &PBFunction)> = names.iter().map(String::as_str).zip(fs.iter()).collect();
    registry_of(&entries)
}

/// Unary along a comparable pair `c <= d`: value at 0 is `f(c)`, at 1 is `f(d)`.
fn chain_unary(fs: &[PBFunction], i: usize, c: usize, d: usize, reg: &Registry, what: &str) -> Result<Gadget> {
    let f = &fs[i];
    let mut pb = PpsBuilder::new(1);
    let scope = restricted_scope(f.arity(), c, d, [0, 0], &mut pb);
    pb.atom(&fname(i), scope);
    let direct = PBFunction::from_vec_unchecked(1, vec![f.at(c).clone(), f.at(d).clone()]);
    verified(pb.build(), reg, direct, what)
}

/// Binary restriction of `fs[i]` along `(a, b)` as a two-free-variable formula.
fn pair_binary(fs: &[PBFunction], i: usize, a: usize, b: usize, reg: &Registry) -> Result<Gadget> {
    let f = &fs[i];
    let mut pb = PpsBuilder::new(2);
    let scope = restricted_scope(f.arity(), a, b, [0, 1], &mut pb);
    pb.atom(&fname(i), scope);
    verified(pb.build(), reg, restrict_binary(f, a, b), "pair restriction")
}

fn hb(h: &PBFunction, x: usize, y: usize) -> &Q {
    h.at(2 * x + y)
}

fn check_pair(up: &Gadget, down: &Gadget) -> Result<()> {
    if !is_up(&up.function) || !is_down(&down.function) {
        return Err(Error::Verification(format!("witnesses up {:?}, down {:?} have the wrong shape", up.function, down.function)));
    }
    Ok(())
}

/// Case 2 on a family that is monotone on supports with some non-monotone flip.
fn case_two(fs: &[PBFunction], reg: &Registry) -> Result<std::result::Result<(Gadget, Gadget), usize>> {
    let (i, (c, d)) = fs
        .iter()
        .enumerate()
        .find_map(|(i, f)| increasing_on_support_pair(f).map(|p| (i, p)))
        .expect("caller checked");
    let Some((j, (a, b))) = fs.iter().enumerate().find_map(|(j, g)| join_violation(g).map(|p| (j, p))) else {
        return Ok(Err(i));
    };
    let up = chain_unary(fs, i, c, d, reg, "case 2 up")?;
    let h = pair_binary(fs, j, a, b, reg)?;
    let (hf, u) = (&h.function, &up.function);
    // down(x) = sum_y h(x,y) h(y,x) up(y)
    let direct = PBFunction::from_vec_unchecked(
        1,
        (0..2).map(|x| (0..2).map(|y| hb(hf, x, y) * hb(hf, y, x) * u.at(y)).sum()).collect(),
    );
    let mut pb = PpsBuilder::new(1);
    let y = pb.fresh();
    pb.inline(&h.trace, &[0, y]);
    pb.inline(&h.trace, &[y, 0]);
    pb.inline(&up.trace, &[y]);
    let down = verified(pb.build(), reg, direct, "case 2 down")?;
    Ok(Ok((up, down)))
}

pub fn pinning_analysis(fs: &[PBFunction]) -> Result<PinningVerdict> {
    if fs.is_empty() {
        return Err(Error::invalid("pinning analysis needs a nonempty set"));
    }
    let reg = pinning_registry(fs);
    let not_mos = fs.iter().position(|f| !is_monotone_on_support(f));
    let flip_not_mos = fs.iter().position(|f| increasing_on_support_pair(f).is_some());

    let verdict = match (not_mos, flip_not_mos) {
        (Some(i), Some(j)) => {
            let (a, b) = monotone_on_support_violation(&fs[i]).expect("found above");
            let down = chain_unary(fs, i, a, b, &reg, "case 1 down")?;
            let (c, d) = increasing_on_support_pair(&fs[j]).expect("found above");
            let up = chain_unary(fs, j, c, d, &reg, "case 1 up")?;
            PinningVerdict::BothUnaries { case: 1, up, down }
        }
        (None, Some(_)) => match case_two(fs, &reg)? {
            Err(index) => PinningVerdict::MonotoneFamily { index, witness: fs[index].clone() },
            Ok((up, down)) => PinningVerdict::BothUnaries { case: 2, up, down },
        },
        (Some(_), None) => {
            let flipped: Vec<PBFunction> = fs.iter().map(bit_flip).collect();
            let freg = pinning_registry(&flipped);
            match case_two(&flipped, &freg)? {
                Err(index) => PinningVerdict::FlippedMonotoneFamily { index, witness: fs[index].clone() },
                Ok((up_f, down_f)) => {
                    let swap: BTreeMap<String, String> =
                        [(DELTA0.to_string(), DELTA1.to_string()), (DELTA1.to_string(), DELTA0.to_string())].into();
                    let up = verified(down_f.trace.rename(&swap), &reg, bit_flip(&down_f.function), "case 3 up")?;
                    let down = verified(up_f.trace.rename(&swap), &reg, bit_flip(&up_f.function), "case 3 down")?;
                    PinningVerdict::BothUnaries { case: 3, up, down }
                }
            }
        }
        (None, None) => match fs.iter().enumerate().find_map(|(j, g)| nonpure_pair(g).map(|p| (j, p))) {
            None => PinningVerdict::AllPure,
            Some((j, (a, b))) => {
                let h = pair_binary(fs, j, a, b, &reg)?;
                let hf = &h.function;
                if !hb(hf, 0, 0).is_zero() || !hb(hf, 1, 1).is_zero() {
                    return Err(Error::Verification(format!("case 4 restriction {hf:?} is not a weighted NEQ")));
                }
                let up_direct = PBFunction::from_vec_unchecked(
                    1,
                    (0..2).map(|x| (0..2).map(|y| hb(hf, x, y) * hb(hf, x, y) * hb(hf, y, x)).sum()).collect(),
                );
                let down_direct = PBFunction::from_vec_unchecked(
                    1,
                    (0..2).map(|x| (0..2).map(|y| hb(hf, x, y) * hb(hf, y, x) * hb(hf, y, x)).sum()).collect(),
                );
                let formula = |squared_forward: bool| -> PpsFormula {
                    let mut pb = PpsBuilder::new(1);
                    let y = pb.fresh();
                    pb.inline(&h.trace, &[0, y]);
                    pb.inline(&h.trace, &[y, 0]);
                    if squared_forward {
                        pb.inline(&h.trace, &[0, y]);
                    } else {
                        pb.inline(&h.trace, &[y, 0]);
                    }
                    pb.build()
                };
                let up = verified(formula(true), &reg, up_direct, "case 4 up")?;
                let down = verified(formula(false), &reg, down_direct, "case 4 down")?;
                PinningVerdict::BothUnaries { case: 4, up, down }
            }
        },
    };
    if let PinningVerdict::BothUnaries { up, down, .. } = &verdict {
        check_pair(up, down)?;
    }
    Ok(verdict)
}

/// Re-checks the defining predicates of a verdict against `fs`.
pub fn verdict_holds(fs: &[PBFunction], v: &PinningVerdict) -> bool {
    match v {
        PinningVerdict::AllPure => fs.iter().all(is_pure),
        PinningVerdict::MonotoneFamily { index, .. } => {
            fs.iter().all(|f| is_monotone_on_support(f) && is_support_join_closed(f))
                && increasing_on_support_pair(&fs[*index]).is_some()
        }
        PinningVerdict::FlippedMonotoneFamily { index, .. } => {
            let fl: Vec<PBFunction> = fs.iter().map(bit_flip).collect();
            fl.iter().all(|f| is_monotone_on_support(f) && is_support_join_closed(f))
                && increasing_on_support_pair(&fl[*index]).is_some()
        }
        PinningVerdict::BothUnaries { up, down, .. } => {
            let reg = pinning_registry(fs);
            is_up(&up.function)
                && is_down(&down.function)
                && super::eval_pps(&up.trace, &reg).ok().as_ref() == Some(&up.function)
                && super::eval_pps(&down.trace, &reg).ok().as_ref() == Some(&down.function)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcs::named::*;

    #[test]
    fn examples() {
        assert_eq!(pinning_analysis(&[delta0(), delta1(), eq()]).unwrap(), PinningVerdict::AllPure);
        assert!(matches!(pinning_analysis(&[unary(1, 2)]).unwrap(), PinningVerdict::MonotoneFamily { index: 0, .. }));
        assert!(matches!(pinning_analysis(&[unary(2, 1)]).unwrap(), PinningVerdict::FlippedMonotoneFamily { index: 0, .. }));
        let h = binary([[0, 1], [2, 0]]);
        match pinning_analysis(&[h]).unwrap() {
            PinningVerdict::BothUnaries { case: 4, up, down } => {
                assert_eq!(up.function, unary(2, 4));
                assert_eq!(down.function, unary(4, 2));
            }
            v => panic!("{v:?}"),
        }
        match pinning_analysis(&[unary(2, 1), unary(1, 2)]).unwrap() {
            PinningVerdict::BothUnaries { case: 1, up, down } => {
                assert_eq!(up.function, unary(1, 2));
                assert_eq!(down.function, unary(2, 1));
            }
            v => panic!("{v:?}"),
        }
        assert!(pinning_analysis(&[]).is_err());
    }

    #[test]
    fn case_two_and_three_build_unaries() {
        // Monotone on supports, support of NAND is not join-closed.
        let fs = [unary(1, 2), nand()];
        let v = pinning_analysis(&fs).unwrap();
        assert!(matches!(v, PinningVerdict::BothUnaries { case: 2, .. }), "{v:?}");
        assert!(verdict_holds(&fs, &v));
        let fl: Vec<PBFunction> = fs.iter().map(bit_flip).collect();
        let v = pinning_analysis(&fl).unwrap();
        assert!(matches!(v, PinningVerdict::BothUnaries { case: 3, .. }), "{v:?}");
        assert!(verdict_holds(&fl, &v));
    }
}
