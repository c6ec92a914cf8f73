//! The self-dual lift, the Fourier holant form, and the triangle gadget graph.

use num::{One, Zero};

use super::graph::{EdgeLabel, WeightedMultigraph};
use crate::error::{Error, Result};
use crate::funcs::{coord, fourier, is_in_cp, named, PBFunction, Q};
use crate::instances::{to_holant, CspInstance, HolantInstance, Table};

/// `f'(x, y, z) = f(x xor z, y xor z)`, with `fourier(f') = fourier(f) * xor3` checked.
pub fn sdp3_lift(f: &PBFunction) -> Result<PBFunction> {
    if f.arity() != 2 {
        return Err(Error::ArityMismatch { expected: 2, got: f.arity() });
    }
    let lifted = PBFunction::from_fn(3, |i| {
        let (x, y, z) = (coord(i, 0, 3), coord(i, 1, 3), coord(i, 2, 3));
        f.at((((x ^ z) << 1) | (y ^ z)) as usize).clone()
    })?;
    let (fl, ff, parity) = (fourier(&lifted), fourier(f), named::xor3());
    if (0..8).any(|i| fl.at(i) != &(ff.at(i >> 1) * parity.at(i))) {
        return Err(Error::Verification(format!("lift of {f:?} breaks the Fourier factorization")));
    }
    Ok(lifted)
}

/// The single binary function used by `inst`, if any.
pub(crate) fn single_binary(inst: &CspInstance) -> Result<Option<(&str, &PBFunction)>> {
    let used = inst.used_functions();
    match used.as_slice() {
        [] => Ok(None),
        [name] => match inst.function(name) {
            Some(Table::Function(f)) if f.arity() == 2 => Ok(Some((name, f))),
            Some(Table::Function(f)) => Err(Error::ArityMismatch { expected: 2, got: f.arity() }),
            _ => Err(Error::pre(format!("`{name}` is a signed table"))),
        },
        _ => Err(Error::pre(format!("instance uses {} functions, expected one", used.len()))),
    }
}

/// Adds a global variable `y` and replaces each `f(x_i, x_j)` by `f'(x_i, x_j, y)`; `Z` doubles.
pub fn lift_instance(inst: &CspInstance) -> Result<CspInstance> {
    let single = single_binary(inst)?;
    let mut out = CspInstance::new();
    for v in inst.variables() {
        out.variable(v)?;
    }
    let y = out.variable(&inst.fresh_variable_name("y"))?;
    if let Some((name, f)) = single {
        let lname = format!("{name}.sdp");
        out.add_function(&lname, sdp3_lift(f)?)?;
        for c in inst.constraints() {
            out.add_constraint_idx(&lname, vec![c.scope[0], c.scope[1], y])?;
        }
    }
    Ok(out)
}

/// A holant instance over normalized Fourier tables with `Z(source) = kappa * Z(holant)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FourierForm {
    /// Some constraint is identically zero.
    Zero,
    Holant { holant: HolantInstance, kappa: Q },
}

/// Converts an instance over ternary functions with nonnegative spectrum to a
/// holant instance over normalized Fourier tables (`g(0,0,0) = 1`). When every
/// function is also self-dual, the results vanish on odd-weight inputs.
///
/// After `to_holant`, every constraint function `g` (junctions included) becomes
/// `8 * fourier(g)` under the Hadamard transform, and `Z` scales by `2^n'`.
/// Each `fourier(g)` is then divided by `c_g = fourier(g)(0,0,0)`.
pub fn holant_fourier_form(inst: &CspInstance) -> Result<FourierForm> {
    for name in inst.used_functions() {
        let f = inst.function(name).and_then(Table::as_function).ok_or_else(|| Error::pre(format!("`{name}` is a signed table")))?;
        if f.arity() != 3 || !is_in_cp(f) {
            return Err(Error::pre(format!("`{name}` is not a ternary function with nonnegative spectrum")));
        }
        if f.is_zero() {
            return Ok(FourierForm::Zero);
        }
    }
    let h = to_holant(inst);
    let hi = h.instance();
    let mut out = CspInstance::new();
    for v in hi.variables() {
        out.variable(v)?;
    }
    let mut scale_of = Vec::new();
    for name in hi.used_functions() {
        let g = hi.function(name).and_then(Table::as_function).expect("checked above or a junction");
        let hat = fourier(g);
        let c = hat.at(0).clone();
        let normalized = hat.scale(&(Q::one() / &c)).to_pb().expect("nonnegative spectrum");
        out.add_function(&format!("{name}.hat"), normalized)?;
        scale_of.push((name.to_string(), c * Q::from_integer(8.into())));
    }
    let mut kappa = Q::one();
    for c in hi.constraints() {
        let (_, s) = scale_of.iter().find(|(n, _)| *n == c.function).expect("used");
        kappa *= s;
        out.add_constraint_idx(&format!("{}.hat", c.function), c.scope.clone())?;
    }
    kappa /= Q::from_integer(num::BigInt::one() << hi.n_vars());
    Ok(FourierForm::Holant { holant: HolantInstance::new(out)?, kappa })
}

/// Whether `g` is ternary with `g(0,0,0) = 1` and zero on odd-weight inputs.
pub fn is_w_tilde(g: &PBFunction) -> bool {
    g.arity() == 3 && g.at(0).is_one() && (0..8usize).filter(|i| i.count_ones() % 2 == 1).all(|i| g.at(i).is_zero())
}

/// Three vertices per constraint, within-triangle edges weighted `g(1,1,0)`,
/// `g(1,0,1)`, `g(0,1,1)`, and a unit edge joining the two slots of each variable.
pub fn build_triangle_graph(h: &HolantInstance) -> Result<WeightedMultigraph> {
    let inst = h.instance();
    let mut g = WeightedMultigraph::new();
    let mut slots: Vec<Vec<usize>> = vec![Vec::new(); inst.n_vars()];
    for (t, c) in inst.constraints().iter().enumerate() {
        let f = inst
            .function(&c.function)
            .and_then(Table::as_function)
            .filter(|f| is_w_tilde(f))
            .ok_or_else(|| Error::pre(format!("constraint {} (`{}`) is not in W~", t + 1, c.function)))?;
        let vs: Vec<usize> = (1..=3).map(|i| g.vertex(&format!("c{}.{i}", t + 1))).collect::<Result<_>>()?;
        for (a, b, idx) in [(0, 1, 0b110), (0, 2, 0b101), (1, 2, 0b011)] {
            g.add_edge(vs[a], vs[b], f.at(idx).clone(), EdgeLabel::WithinTriangle)?;
        }
        for (i, &v) in c.scope.iter().enumerate() {
            slots[v].push(vs[i]);
        }
    }
    for s in slots {
        g.add_edge(s[0], s[1], Q::one(), EdgeLabel::BetweenTriangles)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::funcs::{named::*, q};
    use crate::instances::z_exact;
    use crate::matching::count_pm_exact;

    #[test]
    fn lift_examples() {
        let l = sdp3_lift(&eq()).unwrap();
        assert_eq!(l, PBFunction::ints(3, &[1, 1, 0, 0, 0, 0, 1, 1]));
        let f = binary([[2, 1], [1, 2]]);
        assert_eq!(sdp3_lift(&f).unwrap(), PBFunction::ints(3, &[2, 2, 1, 1, 1, 1, 2, 2]));
        assert!(sdp3_lift(&eq3()).is_err());
        let mut i = CspInstance::new();
        i.add_function("f", f).unwrap();
        i.add_constraint("f", &["x", "y"]).unwrap();
        assert_eq!(z_exact(&lift_instance(&i).unwrap()).unwrap(), q(12));
        assert_eq!(z_exact(&lift_instance(&CspInstance::new()).unwrap()).unwrap(), q(2));
    }

    #[test]
    fn fourier_form_examples() {
        let prism = CspInstance::parse("fun x 3 1 0 0 1 0 1 1 0\ncon x a b c\ncon x a b c").unwrap();
        let FourierForm::Holant { holant, kappa } = holant_fourier_form(&prism).unwrap() else { panic!() };
        assert_eq!(holant.instance().function("x.hat").unwrap().as_function().unwrap(), &eq3());
        assert_eq!(kappa.clone() * z_exact(holant.instance()).unwrap(), q(4));
        let mut i = lift_instance(&CspInstance::parse("fun e 2 1 0 0 1\ncon e x y\ncon e y z\ncon e z x").unwrap()).unwrap();
        let FourierForm::Holant { holant, kappa } = holant_fourier_form(&i).unwrap() else { panic!() };
        assert_eq!(kappa * z_exact(holant.instance()).unwrap(), z_exact(&i).unwrap());
        i.add_function("zero", PBFunction::zero(3).unwrap()).unwrap();
        i.add_constraint("zero", &["x", "y", "z"]).unwrap();
        assert_eq!(holant_fourier_form(&i).unwrap(), FourierForm::Zero);
        let bad = CspInstance::parse("fun imp 2 1 1 0 1\ncon imp x y").unwrap();
        assert!(holant_fourier_form(&bad).is_err());
    }

    #[test]
    fn triangle_graph_examples() {
        let prism = CspInstance::parse("fun x 3 1 0 0 1 0 1 1 0\ncon x a b c\ncon x a b c").unwrap();
        let h = HolantInstance::new(prism.clone()).unwrap();
        let g = build_triangle_graph(&h).unwrap();
        assert_eq!(g.n_vertices(), 6);
        assert!(g.edges().iter().all(|e| e.weight == q(1)));
        assert_eq!(count_pm_exact(&g, &Caps::default()).unwrap(), q(4));
        // A repeated variable joins two slots of the same triangle.
        let r = CspInstance::parse("fun w 3 1 0 0 1/2 0 3 1/5 0\ncon w a b a\ncon w b c c").unwrap();
        let h = HolantInstance::new(r.clone()).unwrap();
        let g = build_triangle_graph(&h).unwrap();
        let parallel = g.edges().iter().filter(|e| (e.u, e.v) == (0, 2)).count();
        assert_eq!(parallel, 2);
        assert_eq!(count_pm_exact(&g, &Caps::default()).unwrap(), z_exact(&r).unwrap());
        let imp = CspInstance::parse("fun i 2 1 1 0 1\ncon i a a").unwrap();
        assert!(build_triangle_graph(&HolantInstance::new(imp).unwrap()).is_err());
    }
}
