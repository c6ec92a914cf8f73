//! Pseudo-Boolean functions over exact rationals.
//!
//! Tables are indexed with the first argument as the most significant bit:
//! `index(x_1..x_k) = sum x_i 2^(k-i)`. Argument positions in this API are
//! zero-based, so coordinate `i` lives at bit `k - 1 - i` of the index.

mod fourier;
mod ops;
mod product;
mod props;
mod relation;

pub use fourier::{fourier, inverse_fourier};
pub use ops::{add_fictitious, bit_flip, identify, irredundant, permute, pin, product, reindex, sum_out};
pub use product::{is_product_type, ProductFactorization, ProductForm};
pub use props::*;
pub use relation::{classify_relation, is_and_or_closed, is_xor_closed, RelationClass};

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::caps::MAX_ARITY;
use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Bit of coordinate `i` in table index `idx` for arity `k`.
#[inline]
pub fn coord(idx: usize, i: usize, k: usize) -> u8 {
    ((idx >> (k - 1 - i)) & 1) as u8
}

/// Table index of a bit-string.
pub fn index_of(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | (b as usize & 1))
}

/// Bit-string of a table index.
pub fn bits_of(idx: usize, k: usize) -> Vec<u8> {
    (0..k).map(|i| coord(idx, i, k)).collect()
}

fn check_arity(k: usize) -> Result<()> {
    if k > MAX_ARITY {
        return Err(Error::capacity("arity", k, MAX_ARITY));
    }
    Ok(())
}

fn check_len(k: usize, len: usize) -> Result<()> {
    check_arity(k)?;
    if len != 1usize << k {
        return Err(Error::invalid(format!("table of arity {k} needs {} entries, got {len}", 1usize << k)));
    }
    Ok(())
}

fn parse_bits(k: usize, x: &[u8]) -> Result<usize> {
    if x.len() != k {
        return Err(Error::ArityMismatch { expected: k, got: x.len() });
    }
    if x.iter().any(|&b| b > 1) {
        return Err(Error::invalid("bit-string entries must be 0 or 1"));
    }
    Ok(index_of(x))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PBFunction {
    arity: usize,
    table: Vec<Q>,
}

impl PBFunction {
    pub fn new(arity: usize, table: Vec<Q>) -> Result<Self> {
        check_len(arity, table.len())?;
        if let Some(v) = table.iter().find(|v| v.is_negative()) {
            return Err(Error::invalid(format!("negative value {v} in a pseudo-Boolean function")));
        }
        Ok(PBFunction { arity, table })
    }

    pub fn from_ints(arity: usize, values: &[i64]) -> Result<Self> {
        PBFunction::new(arity, values.iter().map(|&v| q(v)).collect())
    }

    /// Panicking constructor for literals known to be valid.
    pub fn ints(arity: usize, values: &[i64]) -> Self {
        PBFunction::from_ints(arity, values).expect("valid literal")
    }

    pub(crate) fn from_vec_unchecked(arity: usize, table: Vec<Q>) -> Self {
        debug_assert_eq!(table.len(), 1 << arity);
        PBFunction { arity, table }
    }

    pub fn from_fn(arity: usize, mut f: impl FnMut(usize) -> Q) -> Result<Self> {
        check_arity(arity)?;
        PBFunction::new(arity, (0..1usize << arity).map(&mut f).collect())
    }

    pub fn constant(arity: usize, c: Q) -> Result<Self> {
        PBFunction::new(arity, vec![c; 1 << arity.min(MAX_ARITY + 1)])
    }

    pub fn zero(arity: usize) -> Result<Self> {
        PBFunction::constant(arity, Q::zero())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[Q] {
        &self.table
    }

    pub fn at(&self, idx: usize) -> &Q {
        &self.table[idx]
    }

    pub fn eval(&self, x: &[u8]) -> Result<&Q> {
        Ok(&self.table[parse_bits(self.arity, x)?])
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(Zero::is_zero)
    }

    /// Entries of a binary function as `(f00, f01, f10, f11)`.
    pub fn binary_entries(&self) -> Option<(&Q, &Q, &Q, &Q)> {
        (self.arity == 2).then(|| (&self.table[0], &self.table[1], &self.table[2], &self.table[3]))
    }

    pub fn scale(&self, c: &Q) -> Result<Self> {
        PBFunction::new(self.arity, self.table.iter().map(|v| v * c).collect())
    }

    /// Entrywise power.
    pub fn pow(&self, k: u32) -> Self {
        let table = self.table.iter().map(|v| num::pow(v.clone(), k as usize)).collect();
        PBFunction { arity: self.arity, table }
    }

    pub fn to_signed(&self) -> SignedTable {
        SignedTable { arity: self.arity, table: self.table.clone() }
    }

    pub fn support(&self) -> SupportRelation {
        SupportRelation {
            arity: self.arity,
            tuples: (0..self.table.len()).filter(|&i| !self.table[i].is_zero()).collect(),
        }
    }
}

impl fmt::Debug for PBFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PB{}[{}]", self.arity, join(&self.table))
    }
}

impl fmt::Display for PBFunction {
    /// Literal form: arity followed by the table.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.arity, join(&self.table))
    }
}

/// Parses an integer or `p/q`.
pub fn parse_rational(tok: &str) -> Result<Q> {
    tok.parse::<Q>().map_err(|_| Error::invalid(format!("malformed rational `{tok}`")))
}

/// Parses `<arity> <v_0> .. <v_(2^k - 1)>` from tokens.
pub fn parse_table<'a>(mut toks: impl Iterator<Item = &'a str>) -> Result<SignedTable> {
    let a = toks.next().ok_or_else(|| Error::invalid("missing arity"))?;
    let k: usize = a.parse().map_err(|_| Error::invalid(format!("malformed arity `{a}`")))?;
    check_arity(k)?;
    let vals = toks.map(parse_rational).collect::<Result<Vec<_>>>()?;
    SignedTable::new(k, vals)
}

impl std::str::FromStr for SignedTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_table(s.split_whitespace())
    }
}

impl std::str::FromStr for PBFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: SignedTable = s.parse()?;
        PBFunction::new(t.arity, t.table)
    }
}

pub(crate) fn join(vals: &[Q]) -> String {
    vals.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedTable {
    arity: usize,
    table: Vec<Q>,
}

impl SignedTable {
    pub fn new(arity: usize, table: Vec<Q>) -> Result<Self> {
        check_len(arity, table.len())?;
        Ok(SignedTable { arity, table })
    }

    pub fn from_ints(arity: usize, values: &[i64]) -> Result<Self> {
        SignedTable::new(arity, values.iter().map(|&v| q(v)).collect())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[Q] {
        &self.table
    }

    pub fn at(&self, idx: usize) -> &Q {
        &self.table[idx]
    }

    pub fn eval(&self, x: &[u8]) -> Result<&Q> {
        Ok(&self.table[parse_bits(self.arity, x)?])
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.table.iter().any(Signed::is_negative)
    }

    pub fn scale(&self, c: &Q) -> Self {
        SignedTable { arity: self.arity, table: self.table.iter().map(|v| v * c).collect() }
    }

    /// The same table as a `PBFunction`, if no entry is negative.
    pub fn to_pb(&self) -> Option<PBFunction> {
        self.is_nonnegative().then(|| PBFunction { arity: self.arity, table: self.table.clone() })
    }
}

impl fmt::Debug for SignedTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ST{}[{}]", self.arity, join(&self.table))
    }
}

impl fmt::Display for SignedTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.arity, join(&self.table))
    }
}

/// The set of tuples on which a function is nonzero, stored as sorted table indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SupportRelation {
    arity: usize,
    tuples: Vec<usize>,
}

impl SupportRelation {
    pub fn new(arity: usize, tuples: impl IntoIterator<Item = Vec<u8>>) -> Result<Self> {
        check_arity(arity)?;
        let mut idx = Vec::new();
        for t in tuples {
            idx.push(parse_bits(arity, &t)?);
        }
        idx.sort_unstable();
        idx.dedup();
        Ok(SupportRelation { arity, tuples: idx })
    }

    pub fn from_indices(arity: usize, mut tuples: Vec<usize>) -> Result<Self> {
        check_arity(arity)?;
        if tuples.iter().any(|&t| t >> arity != 0) {
            return Err(Error::invalid("tuple index out of range"));
        }
        tuples.sort_unstable();
        tuples.dedup();
        Ok(SupportRelation { arity, tuples })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn indices(&self) -> &[usize] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.tuples.binary_search(&idx).is_ok()
    }

    pub fn tuples(&self) -> Vec<Vec<u8>> {
        self.tuples.iter().map(|&t| bits_of(t, self.arity)).collect()
    }

    /// The 0/1 indicator function of the relation.
    pub fn indicator(&self) -> PBFunction {
        let mut table = vec![Q::zero(); 1 << self.arity];
        for &t in &self.tuples {
            table[t] = Q::one();
        }
        PBFunction { arity: self.arity, table }
    }
}

/// Frequently used functions.
pub mod named {
    use super::PBFunction;

    pub fn eq() -> PBFunction {
        PBFunction::ints(2, &[1, 0, 0, 1])
    }
    pub fn neq() -> PBFunction {
        PBFunction::ints(2, &[0, 1, 1, 0])
    }
    pub fn imp() -> PBFunction {
        PBFunction::ints(2, &[1, 1, 0, 1])
    }
    pub fn nand() -> PBFunction {
        PBFunction::ints(2, &[1, 1, 1, 0])
    }
    pub fn eq3() -> PBFunction {
        PBFunction::ints(3, &[1, 0, 0, 0, 0, 0, 0, 1])
    }
    /// Indicator of even parity.
    pub fn xor3() -> PBFunction {
        PBFunction::ints(3, &[1, 0, 0, 1, 0, 1, 1, 0])
    }
    pub fn delta0() -> PBFunction {
        PBFunction::ints(1, &[1, 0])
    }
    pub fn delta1() -> PBFunction {
        PBFunction::ints(1, &[0, 1])
    }
    pub fn unary(a: i64, b: i64) -> PBFunction {
        PBFunction::ints(1, &[a, b])
    }
    /// Binary function from its matrix `[[f00, f01], [f10, f11]]`.
    pub fn binary(m: [[i64; 2]; 2]) -> PBFunction {
        PBFunction::ints(2, &[m[0][0], m[0][1], m[1][0], m[1][1]])
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    #[test]
    fn eval_follows_index_convention() {
        assert_eq!(eq().eval(&[0, 0]).unwrap(), &q(1));
        assert_eq!(xor3().eval(&[1, 1, 1]).unwrap(), &q(0));
        assert_eq!(binary([[3, 4], [1, 2]]).eval(&[1, 0]).unwrap(), &q(1));
        assert!(matches!(eq().eval(&[0]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(PBFunction::from_ints(2, &[1, 2, 3]).is_err());
        assert!(PBFunction::from_ints(1, &[1, -1]).is_err());
        assert!(matches!(PBFunction::zero(17), Err(Error::Capacity { .. })));
        assert_eq!(PBFunction::from_ints(0, &[5]).unwrap().arity(), 0);
    }

    #[test]
    fn supports() {
        assert_eq!(neq().support().tuples(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(xor3().support().len(), 4);
        assert!(PBFunction::zero(2).unwrap().support().is_empty());
    }
}
