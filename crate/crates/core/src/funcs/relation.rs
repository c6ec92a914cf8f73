//! Polymorphism checks for Boolean relations.

use super::SupportRelation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationClass {
    Affine,
    IM2,
    Neither,
}

/// Closed under coordinatewise `x ^ y ^ z`.
pub fn is_xor_closed(r: &SupportRelation) -> bool {
    let t = r.indices();
    t.iter().all(|&a| t.iter().all(|&b| t.iter().all(|&c| r.contains(a ^ b ^ c))))
}

/// Closed under coordinatewise `&` and `|`.
pub fn is_and_or_closed(r: &SupportRelation) -> bool {
    let t = r.indices();
    t.iter().all(|&a| t.iter().all(|&b| r.contains(a & b) && r.contains(a | b)))
}

/// The empty relation is affine.
pub fn classify_relation(r: &SupportRelation) -> RelationClass {
    if is_xor_closed(r) {
        RelationClass::Affine
    } else if is_and_or_closed(r) {
        RelationClass::IM2
    } else {
        RelationClass::Neither
    }
}
