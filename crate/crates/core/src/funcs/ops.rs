//! Closure operations of functional clones.

use num::Zero;

use super::{check_arity, coord, PBFunction};
use crate::error::{Error, Result};

fn check_coord(f: &PBFunction, i: usize) -> Result<()> {
    if i >= f.arity() {
        return Err(Error::invalid(format!("coordinate {i} out of range for arity {}", f.arity())));
    }
    Ok(())
}

/// `g(y) = f(y[map[0]], .., y[map[k-1]])` for a `g` of arity `new_arity`.
pub fn reindex(f: &PBFunction, map: &[usize], new_arity: usize) -> Result<PBFunction> {
    check_arity(new_arity)?;
    let k = f.arity();
    if map.len() != k {
        return Err(Error::ArityMismatch { expected: k, got: map.len() });
    }
    if let Some(&m) = map.iter().find(|&&m| m >= new_arity) {
        return Err(Error::invalid(format!("target coordinate {m} out of range for arity {new_arity}")));
    }
    let table = (0..1usize << new_arity)
        .map(|y| {
            let x = map.iter().fold(0, |acc, &m| (acc << 1) | coord(y, m, new_arity) as usize);
            f.at(x).clone()
        })
        .collect();
    Ok(PBFunction::from_vec_unchecked(new_arity, table))
}

/// `f(x) -> f(1 - x)`.
pub fn bit_flip(f: &PBFunction) -> PBFunction {
    let mut table = f.table().to_vec();
    table.reverse();
    PBFunction::from_vec_unchecked(f.arity(), table)
}

/// `g(x) = f(x[perm[0]], .., x[perm[k-1]])`.
pub fn permute(f: &PBFunction, perm: &[usize]) -> Result<PBFunction> {
    let mut seen = vec![false; f.arity()];
    for &p in perm {
        if p >= f.arity() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::invalid(format!("{perm:?} is not a permutation of 0..{}", f.arity())));
        }
    }
    reindex(f, perm, f.arity())
}

pub fn product(f: &PBFunction, g: &PBFunction) -> Result<PBFunction> {
    if f.arity() != g.arity() {
        return Err(Error::ArityMismatch { expected: f.arity(), got: g.arity() });
    }
    let table = f.table().iter().zip(g.table()).map(|(a, b)| a * b).collect();
    Ok(PBFunction::from_vec_unchecked(f.arity(), table))
}

/// Fixes coordinate `i` to `b`; the arity drops by one.
pub fn pin(f: &PBFunction, i: usize, b: u8) -> Result<PBFunction> {
    check_coord(f, i)?;
    if b > 1 {
        return Err(Error::invalid("pinned value must be 0 or 1"));
    }
    let k = f.arity();
    let low = k - 1 - i;
    let table = (0..1usize << (k - 1))
        .map(|y| {
            let hi = y >> low;
            let lo = y & ((1 << low) - 1);
            f.at((hi << (low + 1)) | ((b as usize) << low) | lo).clone()
        })
        .collect();
    Ok(PBFunction::from_vec_unchecked(k - 1, table))
}

pub fn sum_out(f: &PBFunction, i: usize) -> Result<PBFunction> {
    let a = pin(f, i, 0)?;
    let b = pin(f, i, 1)?;
    entrywise_sum(&a, &b)
}

fn entrywise_sum(a: &PBFunction, b: &PBFunction) -> Result<PBFunction> {
    let table = a.table().iter().zip(b.table()).map(|(x, y)| x + y).collect();
    Ok(PBFunction::from_vec_unchecked(a.arity(), table))
}

/// Appends an ignored last argument.
pub fn add_fictitious(f: &PBFunction) -> Result<PBFunction> {
    let map: Vec<usize> = (0..f.arity()).collect();
    reindex(f, &map, f.arity() + 1)
}

/// Merges each block into one argument; the result's arguments follow the block order.
pub fn identify(f: &PBFunction, partition: &[Vec<usize>]) -> Result<PBFunction> {
    let mut map = vec![usize::MAX; f.arity()];
    for (b, block) in partition.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::invalid("empty block in partition"));
        }
        for &i in block {
            check_coord(f, i)?;
            if map[i] != usize::MAX {
                return Err(Error::invalid(format!("coordinate {i} appears in two blocks")));
            }
            map[i] = b;
        }
    }
    if let Some(i) = map.iter().position(|&m| m == usize::MAX) {
        return Err(Error::invalid(format!("coordinate {i} missing from partition")));
    }
    reindex(f, &map, partition.len())
}

/// The irredundant form `f†` and the partition into classes of coordinates
/// that agree on every support tuple. Classes are ordered by their least member.
pub fn irredundant(f: &PBFunction) -> (PBFunction, Vec<Vec<usize>>) {
    let k = f.arity();
    let singletons: Vec<Vec<usize>> = (0..k).map(|i| vec![i]).collect();
    let support: Vec<usize> = (0..f.table().len()).filter(|&x| !f.at(x).is_zero()).collect();
    if support.is_empty() {
        return (f.clone(), singletons);
    }
    let mut class = vec![usize::MAX; k];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..k {
        if class[i] != usize::MAX {
            continue;
        }
        class[i] = blocks.len();
        let mut block = vec![i];
        for j in i + 1..k {
            if class[j] == usize::MAX && support.iter().all(|&x| coord(x, i, k) == coord(x, j, k)) {
                class[j] = blocks.len();
                block.push(j);
            }
        }
        blocks.push(block);
    }
    let g = identify(f, &blocks).expect("valid partition");
    (g, blocks)
}


#[cfg(test)]
mod tests {
    use super::super::named::*;
    use super::*;

    #[test]
    fn clone_ops_on_examples() {
        assert_eq!(bit_flip(&binary([[3, 4], [1, 2]])), binary([[2, 1], [4, 3]]));
        assert_eq!(sum_out(&xor3(), 2).unwrap(), binary([[1, 1], [1, 1]]));
        assert_eq!(pin(&xor3(), 2, 1).unwrap(), neq());
        assert_eq!(permute(&binary([[3, 4], [1, 2]]), &[1, 0]).unwrap(), binary([[3, 1], [4, 2]]));
        assert_eq!(add_fictitious(&unary(1, 2)).unwrap(), binary([[1, 1], [2, 2]]));
        assert_eq!(identify(&eq3(), &[vec![0, 2], vec![1]]).unwrap(), eq());
        assert!(permute(&eq(), &[0, 0]).is_err());
        assert!(pin(&eq(), 2, 0).is_err());
        assert!(identify(&eq(), &[vec![0]]).is_err());
        assert!(product(&eq(), &delta0()).is_err());
    }

    #[test]
    fn pin_matches_eval() {
        let f = PBFunction::ints(3, &[0, 1, 2, 3, 4, 5, 6, 7]);
        for i in 0..3 {
            for b in 0..2u8 {
                let g = pin(&f, i, b).unwrap();
                for y in 0..4usize {
                    let mut bits = super::super::bits_of(y, 2);
                    bits.insert(i, b);
                    assert_eq!(g.at(y), f.eval(&bits).unwrap());
                }
            }
        }
    }

    #[test]
    fn irredundant_examples() {
        assert_eq!(irredundant(&eq()), (PBFunction::ints(1, &[1, 1]), vec![vec![0, 1]]));
        assert_eq!(irredundant(&delta0()), (delta0(), vec![vec![0]]));
        let f = binary([[1, 0], [0, 2]]);
        assert_eq!(irredundant(&f), (unary(1, 2), vec![vec![0, 1]]));
        let z = PBFunction::zero(2).unwrap();
        assert_eq!(irredundant(&z), (z.clone(), vec![vec![0], vec![1]]));
    }
}
