use num::{BigInt, One};

use super::{PBFunction, SignedTable, Q};

/// Unnormalized Walsh-Hadamard butterfly: `out(x) = sum_p (-1)^(p.x) in(p)`.
fn hadamard(table: &mut [Q]) {
    let n = table.len();
    let mut h = 1;
    while h < n {
        for start in (0..n).step_by(2 * h) {
            for i in start..start + h {
                let a = table[i].clone();
                let b = std::mem::take(&mut table[i + h]);
                table[i + h] = &a - &b;
                table[i] = a + b;
            }
        }
        h *= 2;
    }
}

pub fn fourier(f: &PBFunction) -> SignedTable {
    let mut t = f.table().to_vec();
    hadamard(&mut t);
    let norm = Q::new(BigInt::one(), BigInt::one() << f.arity());
    for v in t.iter_mut() {
        *v *= &norm;
    }
    SignedTable::new(f.arity(), t).expect("same shape")
}

pub fn inverse_fourier(big_f: &SignedTable) -> SignedTable {
    let mut t = big_f.table().to_vec();
    hadamard(&mut t);
    SignedTable::new(big_f.arity(), t).expect("same shape")
}

#[cfg(test)]
mod tests {
    use super::super::named::*;
    use super::super::{qr, SignedTable};
    use super::*;

    fn brute(f: &PBFunction) -> Vec<Q> {
        let k = f.arity();
        (0..1usize << k)
            .map(|x| {
                let s: Q = (0..1usize << k)
                    .map(|p| if (p & x).count_ones() % 2 == 0 { f.at(p).clone() } else { -f.at(p).clone() })
                    .sum();
                s / Q::from_integer(BigInt::from(1u64 << k))
            })
            .collect()
    }

    #[test]
    fn small_transforms() {
        let h = qr(1, 2);
        assert_eq!(fourier(&xor3()).table(), eq3().scale(&h).unwrap().table());
        assert_eq!(fourier(&delta0()).table(), &[h.clone(), h.clone()]);
        assert_eq!(fourier(&eq()).table(), &[h.clone(), qr(0, 1), qr(0, 1), h.clone()]);
        let back = inverse_fourier(&SignedTable::new(1, vec![h.clone(), h.clone()]).unwrap());
        assert_eq!(back.to_pb().unwrap(), delta0());
        assert_eq!(inverse_fourier(&eq3().scale(&h).unwrap().to_signed()).to_pb().unwrap(), xor3());
    }

    #[test]
    fn matches_definition() {
        let f = PBFunction::ints(3, &[3, 0, 7, 1, 2, 2, 5, 9]);
        assert_eq!(fourier(&f).table(), brute(&f).as_slice());
    }
}
