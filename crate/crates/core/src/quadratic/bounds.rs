//! Strong u-invariant bounds from the value group rank and the residue
//! field.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldProfile {
    /// Rational rank of the divisible hull of the value group.
    pub n: u32,
    /// The value group is a free abelian group of rank `n`.
    pub free: bool,
    /// Strong u-invariant of the residue field.
    pub residue_us: u64,
}

impl FieldProfile {
    /// `Q_p` and its finite extensions: rank one, free, residue field finite.
    pub fn padic() -> Self {
        FieldProfile { n: 1, free: true, residue_us: 2 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UBound {
    pub field_bound: u64,
    pub function_field_bound: u64,
    /// The field bound is attained.
    pub equality: bool,
}

pub fn u_bound(profile: &FieldProfile) -> Result<UBound> {
    if profile.residue_us < 1 {
        return Err(Error::InvalidProfile("residue strong u-invariant must be at least 1".into()));
    }
    let exp = if profile.free { profile.n } else { profile.n + 1 };
    let field_bound = 1u64
        .checked_shl(exp)
        .and_then(|f| f.checked_mul(profile.residue_us))
        .ok_or_else(|| Error::InvalidProfile("bound overflows".into()))?;
    let function_field_bound =
        field_bound.checked_mul(2).ok_or_else(|| Error::InvalidProfile("bound overflows".into()))?;
    Ok(UBound { field_bound, function_field_bound, equality: profile.n == 1 && profile.free })
}
