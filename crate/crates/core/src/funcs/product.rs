//! Membership in the product-type clone generated by NEQ and the unaries.

use num::{One, Zero};

use super::{coord, PBFunction, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProductForm {
    Zero,
    Factored(ProductFactorization),
}

/// `f(x) = scale * prod_r u_r(x_r)` on the solution set of the pins and links, 0 elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductFactorization {
    pub arity: usize,
    /// Coordinates forced to a constant.
    pub pins: Vec<(usize, u8)>,
    /// `(i, r, differ)`: coordinate `i` equals representative `r`, negated when `differ`.
    pub links: Vec<(usize, usize, bool)>,
    /// One unary per free representative. All but the last satisfy `u(0) = 1`.
    pub unaries: Vec<(usize, PBFunction)>,
    pub scale: Q,
}

impl ProductFactorization {
    pub fn evaluate(&self) -> PBFunction {
        let k = self.arity;
        let table = (0..1usize << k)
            .map(|x| {
                let b = |i| coord(x, i, k);
                if self.pins.iter().any(|&(i, c)| b(i) != c)
                    || self.links.iter().any(|&(i, r, d)| (b(i) != b(r)) != d)
                {
                    return Q::zero();
                }
                self.unaries.iter().fold(self.scale.clone(), |acc, (r, u)| acc * u.at(b(*r) as usize))
            })
            .collect();
        PBFunction::from_vec_unchecked(k, table)
    }
}

pub fn is_product_type(f: &PBFunction) -> Option<ProductForm> {
    let k = f.arity();
    let support: Vec<usize> = (0..f.table().len()).filter(|&x| !f.at(x).is_zero()).collect();
    if support.is_empty() {
        return Some(ProductForm::Zero);
    }
    let all = |p: &dyn Fn(usize) -> bool| support.iter().all(|&x| p(x));

    let mut pins = Vec::new();
    let mut links = Vec::new();
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..k {
        if all(&|x| coord(x, i, k) == 0) {
            pins.push((i, 0));
            continue;
        }
        if all(&|x| coord(x, i, k) == 1) {
            pins.push((i, 1));
            continue;
        }
        let link = reps.iter().find_map(|&r| {
            if all(&|x| coord(x, i, k) == coord(x, r, k)) {
                Some((i, r, false))
            } else if all(&|x| coord(x, i, k) != coord(x, r, k)) {
                Some((i, r, true))
            } else {
                None
            }
        });
        match link {
            Some(l) => links.push(l),
            None => reps.push(i),
        }
    }
    if support.len() != 1 << reps.len() {
        return None;
    }

    // The support is exactly the solution set; index it by the representatives.
    let expand = |y: usize| -> usize {
        let mut bits = vec![0u8; k];
        for &(i, c) in &pins {
            bits[i] = c;
        }
        for (t, &r) in reps.iter().enumerate() {
            bits[r] = ((y >> t) & 1) as u8;
        }
        for &(i, r, d) in &links {
            bits[i] = bits[r] ^ d as u8;
        }
        super::index_of(&bits)
    };
    let g = |y: usize| f.at(expand(y));
    let g0 = g(0).clone();
    for t in 0..reps.len() {
        let gt = g(1 << t);
        for y in (0..1usize << reps.len()).filter(|y| y & (1 << t) == 0) {
            if g(y | 1 << t) * &g0 != g(y) * gt {
                return None;
            }
        }
    }

    let n = reps.len();
    let mut unaries = Vec::with_capacity(n);
    for (t, &r) in reps.iter().enumerate() {
        let ratio = g(1 << t) / &g0;
        let u = if t + 1 == n {
            PBFunction::from_vec_unchecked(1, vec![g0.clone(), &g0 * ratio])
        } else {
            PBFunction::from_vec_unchecked(1, vec![Q::one(), ratio])
        };
        unaries.push((r, u));
    }
    let scale = if n == 0 { g0 } else { Q::one() };
    Some(ProductForm::Factored(ProductFactorization { arity: k, pins, links, unaries, scale }))
}

#[cfg(test)]
mod tests {
    use super::super::named::*;
    use super::*;

    #[test]
    fn product_type_examples() {
        assert!(is_product_type(&neq()).is_some());
        assert!(is_product_type(&xor3()).is_none());
        assert!(is_product_type(&imp()).is_none());
        let f = binary([[3, 1], [6, 2]]);
        let Some(ProductForm::Factored(fac)) = is_product_type(&f) else { panic!() };
        assert_eq!(fac.unaries, vec![(0, unary(1, 2)), (1, unary(3, 1))]);
        assert_eq!(fac.evaluate(), f);
        assert_eq!(is_product_type(&PBFunction::zero(3).unwrap()), Some(ProductForm::Zero));
    }

    #[test]
    fn factorization_reconstructs() {
        let f = PBFunction::ints(3, &[0, 0, 0, 0, 0, 2, 6, 0]);
        let Some(ProductForm::Factored(fac)) = is_product_type(&f) else { panic!() };
        assert_eq!(fac.evaluate(), f);
        let single = PBFunction::ints(2, &[0, 0, 5, 0]);
        let Some(ProductForm::Factored(fac)) = is_product_type(&single) else { panic!() };
        assert_eq!(fac.evaluate(), single);
    }
}
