use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;

use crate::error::Result;
use crate::exponent::Exponent;
use crate::padic::{check_prime, padic_valuation};

/// `-log_p` of an absolute value; `Zero` stands for the absolute value 0 and
/// `Infinite` for the value of `T - c` at the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogNorm {
    Infinite,
    Finite(Exponent),
    Zero,
}

impl LogNorm {
    fn rank(&self) -> u8 {
        match self {
            LogNorm::Infinite => 0,
            LogNorm::Finite(_) => 1,
            LogNorm::Zero => 2,
        }
    }

    pub fn min(self, other: LogNorm) -> LogNorm {
        if self <= other {
            self
        } else {
            other
        }
    }
}

/// Ordered by `-log`, so larger means a smaller absolute value.
impl Ord for LogNorm {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (LogNorm::Finite(a), LogNorm::Finite(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for LogNorm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `v_p(a - b)`, infinite when `a = b`.
pub fn distance(a: &BigRational, b: &BigRational, p: u64) -> LogNorm {
    let d = a - b;
    match padic_valuation(&d, p) {
        Ok(v) => LogNorm::Finite(Exponent::integer(v)),
        Err(_) => LogNorm::Zero,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PointType {
    One,
    Two,
    Three,
}

impl fmt::Display for PointType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            PointType::One => 1,
            PointType::Two => 2,
            PointType::Three => 3,
        };
        write!(f, "type {}", n)
    }
}

/// A point of the Berkovich line over `Q_p` of type 1, 2 or 3: the point at
/// infinity, or `eta_{c, r}` with `r = p^(-log_radius)` (`None` for `r = 0`).
#[derive(Clone, Debug)]
pub enum BerkPoint {
    Infinity,
    Finite { center: BigRational, log_radius: Option<Exponent> },
}

impl BerkPoint {
    pub fn rigid(center: BigRational) -> Self {
        BerkPoint::Finite { center, log_radius: None }
    }

    pub fn eta(center: BigRational, log_radius: Exponent) -> Self {
        BerkPoint::Finite { center, log_radius: Some(log_radius) }
    }

    pub fn kind(&self) -> PointType {
        match self {
            BerkPoint::Infinity | BerkPoint::Finite { log_radius: None, .. } => PointType::One,
            BerkPoint::Finite { log_radius: Some(e), .. } if e.is_rational() => PointType::Two,
            _ => PointType::Three,
        }
    }

    /// `-log_p |T - c|` at this point.
    pub fn log_norm_at(&self, c: &BigRational, p: u64) -> LogNorm {
        match self {
            BerkPoint::Infinity => LogNorm::Infinite,
            BerkPoint::Finite { center, log_radius } => {
                let r = (*log_radius).map_or(LogNorm::Zero, LogNorm::Finite);
                distance(center, c, p).min(r)
            }
        }
    }

    pub fn same_point(&self, other: &BerkPoint, p: u64) -> bool {
        match (self, other) {
            (BerkPoint::Infinity, BerkPoint::Infinity) => true,
            (BerkPoint::Finite { center: c1, log_radius: r1 }, BerkPoint::Finite { center: c2, log_radius: r2 }) => {
                r1 == r2 && (*r1).map_or(LogNorm::Zero, LogNorm::Finite) <= distance(c1, c2, p)
            }
            _ => false,
        }
    }
}

pub fn classify_point(pt: &BerkPoint, p: u64) -> Result<PointType> {
    check_prime(p)?;
    Ok(pt.kind())
}

impl fmt::Display for BerkPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BerkPoint::Infinity => f.write_str("inf"),
            BerkPoint::Finite { center, log_radius: None } => write!(f, "{}", center),
            BerkPoint::Finite { center, log_radius: Some(e) } => write!(f, "eta({}, p^-({}))", center, e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::q;
    use crate::padic::ratio;
    use proptest::prelude::*;

    #[test]
    fn classification() {
        let z = ratio(0, 1);
        assert_eq!(classify_point(&BerkPoint::eta(z.clone(), Exponent::integer(1)), 3).unwrap(), PointType::Two);
        assert_eq!(classify_point(&BerkPoint::eta(z.clone(), Exponent::new(q(0, 1), q(1, 1))), 3).unwrap(), PointType::Three);
        assert_eq!(classify_point(&BerkPoint::rigid(z), 3).unwrap(), PointType::One);
        assert_eq!(classify_point(&BerkPoint::Infinity, 3).unwrap(), PointType::One);
        assert_eq!(BerkPoint::eta(ratio(1, 1), Exponent::rational(q(-1, 3))).kind(), PointType::Two);
    }

    #[test]
    fn recentering() {
        let e = Exponent::integer(1);
        let a = BerkPoint::eta(ratio(0, 1), e);
        assert!(a.same_point(&BerkPoint::eta(ratio(3, 1), e), 3));
        assert!(!a.same_point(&BerkPoint::eta(ratio(1, 1), e), 3));
    }

    proptest! {
        #[test]
        fn recentering_preserves_type(c in -50i64..50, k in 0i64..4, m in -20i64..20,
                                      rat in -6i64..6, irr in -3i64..3) {
            let e = Exponent::new(q(rat, 2), q(irr, 1));
            let shift = m * 5i64.pow(k as u32);
            let a = BerkPoint::eta(ratio(c, 1), e);
            let b = BerkPoint::eta(ratio(c + shift, 1), e);
            let same = a.same_point(&b, 5);
            // |shift|_5 <= 5^(-e) exactly when v_5(shift) >= e.
            let close = shift == 0 || Exponent::integer(crate::padic::padic_valuation(&ratio(shift, 1), 5).unwrap()) >= e;
            prop_assert_eq!(same, close);
            prop_assert_eq!(a.kind(), b.kind());
        }
    }
}
