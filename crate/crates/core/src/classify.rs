//! Verdict engines for two-spin systems, sets with up/down unaries, and
//! Boolean relation families.

use num::Signed;

use crate::error::{Error, Result};
use crate::funcs::{
    bit_flip, fourier, is_and_or_closed, is_in_cp, is_lsm, is_monotone, is_product_type, is_symmetric_binary,
    is_trivial_binary, is_xor_closed, PBFunction, SupportRelation, Q,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwoSpinTag {
    FpTrivial,
    BisEquivalent,
    Fpras,
    NoFprasUnlessNpEqRp,
    Open,
}

impl TwoSpinTag {
    pub fn name(self) -> &'static str {
        match self {
            TwoSpinTag::FpTrivial => "FP_Trivial",
            TwoSpinTag::BisEquivalent => "BIS_Equivalent",
            TwoSpinTag::Fpras => "FPRAS",
            TwoSpinTag::NoFprasUnlessNpEqRp => "NoFPRAS_unless_NP_eq_RP",
            TwoSpinTag::Open => "Open",
        }
    }
}

/// Which sub-case an `Open` verdict falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpenBranch {
    /// Monotone (up to bit-flip), non-symmetric: unresolved.
    MonotoneAntiferromagnetic,
    /// Symmetric: decided by tree uniqueness, outside this crate.
    SymmetricAntiferromagnetic,
}

impl OpenBranch {
    pub fn name(self) -> &'static str {
        match self {
            OpenBranch::MonotoneAntiferromagnetic => "monotone_antiferromagnetic",
            OpenBranch::SymmetricAntiferromagnetic => "symmetric_antiferromagnetic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSpinEvidence {
    pub trivial: bool,
    pub lsm: bool,
    pub fourier_01: Q,
    pub fourier_10: Q,
    pub monotone: bool,
    pub flip_monotone: bool,
    pub symmetric: bool,
    /// On the FPRAS branch: whether the bit-flip (rather than `f`) has the nonnegative spectrum.
    pub fpras_via_flip: Option<bool>,
    pub open_branch: Option<OpenBranch>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSpinVerdict {
    pub tag: TwoSpinTag,
    pub evidence: TwoSpinEvidence,
}

pub fn classify_two_spin(f: &PBFunction) -> Result<TwoSpinVerdict> {
    if f.arity() != 2 {
        return Err(Error::ArityMismatch { expected: 2, got: f.arity() });
    }
    let ft = fourier(f);
    let flip = bit_flip(f);
    let mut ev = TwoSpinEvidence {
        trivial: is_trivial_binary(f) == Some(true),
        lsm: is_lsm(f),
        fourier_01: ft.at(1).clone(),
        fourier_10: ft.at(2).clone(),
        monotone: is_monotone(f),
        flip_monotone: is_monotone(&flip),
        symmetric: is_symmetric_binary(f) == Some(true),
        fpras_via_flip: None,
        open_branch: None,
    };
    let tag = if ev.trivial {
        TwoSpinTag::FpTrivial
    } else if ev.lsm {
        let prod = &ev.fourier_01 * &ev.fourier_10;
        if prod.is_negative() {
            TwoSpinTag::BisEquivalent
        } else {
            let via_flip = ev.fourier_01.is_negative() || ev.fourier_10.is_negative();
            let target = if via_flip { &flip } else { f };
            assert!(is_in_cp(target), "nontrivial lsm binary with same-sign middle coefficients must have a nonnegative spectrum up to bit-flip");
            ev.fpras_via_flip = Some(via_flip);
            TwoSpinTag::Fpras
        }
    } else if !ev.monotone && !ev.flip_monotone {
        TwoSpinTag::NoFprasUnlessNpEqRp
    } else {
        ev.open_branch = Some(if ev.symmetric {
            OpenBranch::SymmetricAntiferromagnetic
        } else {
            OpenBranch::MonotoneAntiferromagnetic
        });
        TwoSpinTag::Open
    };
    Ok(TwoSpinVerdict { tag, evidence: ev })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpDownTag {
    Fp,
    BisHard,
    NoFprasUnlessNpEqRp,
}

impl UpDownTag {
    pub fn name(self) -> &'static str {
        match self {
            UpDownTag::Fp => "FP",
            UpDownTag::BisHard => "BIS_hard",
            UpDownTag::NoFprasUnlessNpEqRp => "NoFPRAS_unless_NP_eq_RP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpDownVerdict {
    pub tag: UpDownTag,
    /// All arities are at most 2, so the problem is also #BIS-easy.
    pub bis_easy_flag: bool,
    /// First function that is not product type, if any.
    pub non_product: Option<usize>,
    /// First function that is not lsm, if any.
    pub non_lsm: Option<usize>,
}

pub fn classify_with_updown(fs: &[PBFunction]) -> UpDownVerdict {
    let non_product = fs.iter().position(|f| is_product_type(f).is_none());
    let non_lsm = fs.iter().position(|f| !is_lsm(f));
    let max_arity = fs.iter().map(PBFunction::arity).max().unwrap_or(0);
    let tag = if non_product.is_none() {
        UpDownTag::Fp
    } else if non_lsm.is_none() {
        UpDownTag::BisHard
    } else {
        UpDownTag::NoFprasUnlessNpEqRp
    };
    UpDownVerdict { tag, bis_easy_flag: tag == UpDownTag::BisHard && max_arity <= 2, non_product, non_lsm }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelTrichotomy {
    AffineFp,
    Im2Bis,
    SatEquivalent,
}

impl RelTrichotomy {
    pub fn name(self) -> &'static str {
        match self {
            RelTrichotomy::AffineFp => "Affine_FP",
            RelTrichotomy::Im2Bis => "IM2_BIS",
            RelTrichotomy::SatEquivalent => "SAT_equivalent",
        }
    }
}

pub fn classify_relations(gamma: &[SupportRelation]) -> RelTrichotomy {
    if gamma.iter().all(is_xor_closed) {
        RelTrichotomy::AffineFp
    } else if gamma.iter().all(is_and_or_closed) {
        RelTrichotomy::Im2Bis
    } else {
        RelTrichotomy::SatEquivalent
    }
}
