//! The ordered exponent group `Q + Q*sqrt(2)` and value vectors over a
//! value-group basis, with the square-class reductions used by the block
//! decompositions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

/// `rat + irr * sqrt(2)`. Used as a logarithm of radii and norms: a radius
/// `r` is stored as the exponent `e` with `r = p^(-e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Exponent {
    pub rat: Q,
    pub irr: Q,
}

fn sign_of_quadratic(a: Q, b: Q) -> Ordering {
    let sa = a.numer().signum();
    let sb = b.numer().signum();
    if sb == 0 {
        return sa.cmp(&0);
    }
    if sa == 0 {
        return sb.cmp(&0);
    }
    if sa == sb {
        return sa.cmp(&0);
    }
    // Opposite signs: compare a^2 with 2 b^2 over a common denominator.
    let (an, ad) = (*a.numer() as i128, *a.denom() as i128);
    let (bn, bd) = (*b.numer() as i128, *b.denom() as i128);
    let lhs = an * an * bd * bd;
    let rhs = 2 * bn * bn * ad * ad;
    let a_dominates = lhs > rhs;
    match (sa > 0, a_dominates) {
        (true, true) | (false, false) => Ordering::Greater,
        _ => Ordering::Less,
    }
}

impl Exponent {
    pub fn new(rat: Q, irr: Q) -> Self {
        Exponent { rat, irr }
    }

    pub fn rational(rat: Q) -> Self {
        Exponent { rat, irr: Q::zero() }
    }

    pub fn integer(n: i64) -> Self {
        Exponent::rational(Q::from_integer(n))
    }

    pub fn zero() -> Self {
        Exponent::default()
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        sign_of_quadratic(self.rat, self.irr)
    }

    pub fn scale(&self, k: Q) -> Self {
        Exponent { rat: self.rat * k, irr: self.irr * k }
    }

    pub fn to_f64(&self) -> f64 {
        let r = *self.rat.numer() as f64 / *self.rat.denom() as f64;
        let i = *self.irr.numer() as f64 / *self.irr.denom() as f64;
        r + i * std::f64::consts::SQRT_2
    }

    /// Largest integer `n` with `n <= self`.
    pub fn floor(&self) -> i64 {
        let mut n = self.to_f64().floor() as i64;
        while Exponent::integer(n) > *self {
            n -= 1;
        }
        while Exponent::integer(n + 1) <= *self {
            n += 1;
        }
        n
    }

    /// Smallest integer `n` with `n >= self`.
    pub fn ceil(&self) -> i64 {
        -(-*self).floor()
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum()
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, o: Exponent) -> Exponent {
        Exponent { rat: self.rat + o.rat, irr: self.irr + o.irr }
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, o: Exponent) -> Exponent {
        Exponent { rat: self.rat - o.rat, irr: self.irr - o.irr }
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent { rat: -self.rat, irr: -self.irr }
    }
}

impl Mul<i64> for Exponent {
    type Output = Exponent;
    fn mul(self, k: i64) -> Exponent {
        self.scale(Q::from_integer(k))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irr.is_zero() {
            write!(f, "{}", self.rat)
        } else if self.rat.is_zero() {
            write!(f, "{}*sqrt2", self.irr)
        } else {
            write!(f, "{}{:+}*sqrt2", self.rat, self.irr)
        }
    }
}

/// Exponents of a norm over a fixed basis `|pi_1|, ..., |pi_n|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValueVector(pub Vec<Q>);

/// Order of a value vector, with the smallest index whose reduced numerator
/// is 1 when the order exceeds 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderBaseData {
    pub order: u64,
    pub base_index: Option<usize>,
}

/// Records `reduced = power * original + basis_shift` where `power` is odd and
/// every entry of `basis_shift` is an even integer, so the two vectors are
/// norms of elements differing by a square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareCertificate {
    pub power: i64,
    pub basis_shift: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub vector: ValueVector,
    pub base_index: Option<usize>,
    pub certificate: SquareCertificate,
}

impl ValueVector {
    pub fn new(coords: Vec<Q>) -> Self {
        ValueVector(coords)
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        ValueVector(coords.iter().map(|&c| Q::from_integer(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        ValueVector(vec![Q::zero(); n])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, k: i64) -> ValueVector {
        ValueVector(self.0.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &ValueVector) -> ValueVector {
        ValueVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ValueVector) -> ValueVector {
        ValueVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add_integers(&self, shift: &[i64]) -> ValueVector {
        ValueVector(self.0.iter().zip(shift).map(|(a, &m)| a + m).collect())
    }

    pub fn order_base(&self) -> OrderBaseData {
        let order = order_of(self);
        let base_index = if order == 1 {
            None
        } else {
            let target = Q::new(1, order as i64);
            self.0.iter().position(|c| *c == target)
        };
        OrderBaseData { order, base_index }
    }
}

impl SquareCertificate {
    /// Checks `reduced = power * original + basis_shift` with `power` odd and
    /// an even integral shift.
    pub fn verify(&self, original: &ValueVector, reduced: &ValueVector) -> bool {
        if self.power % 2 == 0 || self.basis_shift.iter().any(|m| m % 2 != 0) {
            return false;
        }
        if original.rank() != reduced.rank() || self.basis_shift.len() != original.rank() {
            return false;
        }
        original.scale(self.power).add_integers(&self.basis_shift) == *reduced
    }
}

/// Lcm of the reduced denominators.
pub fn order_of(v: &ValueVector) -> u64 {
    v.0.iter().fold(1u64, |acc, c| acc.lcm(&(*c.denom() as u64)))
}

fn shift_between(original: &ValueVector, power: i64, reduced: &ValueVector) -> Vec<i64> {
    reduced
        .sub(&original.scale(power))
        .0
        .iter()
        .map(|c| {
            debug_assert!(c.is_integer());
            c.to_integer()
        })
        .collect()
}

/// For odd order `alpha`, returns the parity vector of `alpha * v`.
pub fn reduce_odd_order(v: &ValueVector) -> Result<Reduction> {
    let alpha = order_of(v);
    if alpha.is_multiple_of(2) {
        return Err(Error::EvenOrder(alpha));
    }
    let scaled = v.scale(alpha as i64);
    let delta: Vec<Q> = scaled
        .0
        .iter()
        .map(|c| Q::from_integer(c.to_integer().rem_euclid(2)))
        .collect();
    let vector = ValueVector(delta);
    let basis_shift = shift_between(v, alpha as i64, &vector);
    Ok(Reduction {
        vector,
        base_index: None,
        certificate: SquareCertificate { power: alpha as i64, basis_shift },
    })
}

/// Modular inverse of an odd `e` modulo `2^y`, taken in `[1, 2^y)`.
fn odd_inverse_mod_pow2(e: i64, y: u32) -> i64 {
    let m = 1i64 << y;
    if m == 1 {
        return 1;
    }
    let ext = e.rem_euclid(m).extended_gcd(&m);
    ext.x.rem_euclid(m)
}

/// Core of the even-order reduction: `w` has order `2^y` and the scaled
/// numerator at `i0` is odd. Returns `(vector, power)` with the result equal
/// to `power * w` modulo even integer vectors and coordinate `i0` equal to
/// `1 / 2^y`.
fn base_at(w: &ValueVector, y: u32, i0: usize) -> (ValueVector, i64) {
    let two_y = 1i64 << y;
    let e = (w.0[i0] * two_y).to_integer();
    let a = odd_inverse_mod_pow2(e, y);
    let b = (1 - a * e) / two_y;
    let mut coords = w.scale(a).0;
    if b % 2 == 0 {
        coords[i0] += Q::from_integer(b);
        (ValueVector(coords), a)
    } else {
        coords[i0] += Q::from_integer(b + 1);
        // Coordinate i0 is now 1/2^y + 1; raising to the odd power 1 + 2^y and
        // removing the even integer 2 + 2^y restores 1/2^y.
        let k = 1 + two_y;
        let mut adjusted: Vec<Q> = coords.iter().map(|c| c * k).collect();
        adjusted[i0] -= Q::from_integer(2 + two_y);
        (ValueVector(adjusted), a * k)
    }
}

fn split_order(order: u64) -> (u32, u64) {
    let y = order.trailing_zeros();
    (y, order >> y)
}

/// For even order `2^y * z` (z odd), returns an equivalent vector of order
/// `2^y` with a base. The base index prefers a coordinate already equal to
/// `1/2^y`, then the smallest index with odd scaled numerator.
pub fn reduce_even_order(v: &ValueVector) -> Result<Reduction> {
    let alpha = order_of(v);
    if alpha % 2 == 1 {
        return Err(Error::OddOrder(alpha));
    }
    let (y, z) = split_order(alpha);
    let w = v.scale(z as i64);
    let two_y = 1i64 << y;
    let numerators: Vec<i64> = w.0.iter().map(|c| (c * two_y).to_integer()).collect();
    let i0 = numerators
        .iter()
        .position(|&e| e == 1)
        .or_else(|| numerators.iter().position(|e| e % 2 != 0))
        .ok_or(Error::OddOrder(alpha))?;
    let (vector, power) = base_at(&w, y, i0);
    let power = power * z as i64;
    let basis_shift = shift_between(v, power, &vector);
    Ok(Reduction {
        vector,
        base_index: Some(i0),
        certificate: SquareCertificate { power, basis_shift },
    })
}

/// Moves the base of a vector of order `2^nu` to coordinate `target`, whose
/// scaled numerator must be odd.
pub fn rebase(v: &ValueVector, target: usize) -> Result<Reduction> {
    if target >= v.rank() {
        return Err(Error::IndexOutOfRange { index: target, rank: v.rank() });
    }
    let alpha = order_of(v);
    if !alpha.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(alpha));
    }
    let y = alpha.trailing_zeros();
    let e = (v.0[target] * (alpha as i64)).to_integer();
    if e % 2 == 0 {
        return Err(Error::EvenNumerator { index: target });
    }
    if e == 1 {
        return Ok(Reduction {
            vector: v.clone(),
            base_index: Some(target),
            certificate: SquareCertificate { power: 1, basis_shift: vec![0; v.rank()] },
        });
    }
    let (vector, power) = base_at(v, y, target);
    let basis_shift = shift_between(v, power, &vector);
    Ok(Reduction {
        vector,
        base_index: Some(target),
        certificate: SquareCertificate { power, basis_shift },
    })
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(r: (i64, i64), i: (i64, i64)) -> Exponent {
        Exponent::new(q(r.0, r.1), q(i.0, i.1))
    }

    fn vv(c: &[(i64, i64)]) -> ValueVector {
        ValueVector(c.iter().map(|&(n, d)| q(n, d)).collect())
    }

    // Independent comparison oracle: sign of a + b*sqrt2 by cases on
    // squared magnitudes in exact rational arithmetic.
    fn oracle_sign(a: Q, b: Q) -> Ordering {
        let zero = Q::zero();
        if a.is_zero() || b.is_zero() || (a > zero) == (b > zero) {
            let s = if a.is_zero() { b } else { a };
            return s.cmp(&zero);
        }
        // Opposite signs: the positive term wins iff its square is larger.
        let (pos_sq, neg_sq) = if a > zero { (a * a, b * b * 2) } else { (b * b * 2, a * a) };
        pos_sq.cmp(&neg_sq)
    }

    #[test]
    fn compare_examples() {
        assert_eq!(e((0, 1), (0, 1)).cmp(&e((0, 1), (0, 1))), Ordering::Equal);
        assert_eq!(e((1, 1), (0, 1)).cmp(&e((0, 1), (1, 1))), Ordering::Less);
        assert_eq!(e((3, 1), (-2, 1)).cmp(&Exponent::zero()), Ordering::Greater);
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(e((0, 1), (1, 1)).floor(), 1);
        assert_eq!(e((0, 1), (1, 1)).ceil(), 2);
        assert_eq!(e((-1, 2), (0, 1)).floor(), -1);
        assert_eq!(Exponent::integer(3).ceil(), 3);
        assert_eq!(e((0, 1), (-1, 1)).floor(), -2);
    }

    #[test]
    fn order_examples() {
        assert_eq!(order_of(&vv(&[(1, 1), (0, 1)])), 1);
        assert_eq!(order_of(&vv(&[(3, 2), (1, 3)])), 6);
        assert_eq!(order_of(&vv(&[(5, 3)])), 3);
    }

    #[test]
    fn odd_examples() {
        assert_eq!(reduce_odd_order(&vv(&[(0, 1), (0, 1)])).unwrap().vector, vv(&[(0, 1), (0, 1)]));
        let r = reduce_odd_order(&vv(&[(5, 3)])).unwrap();
        assert_eq!(r.vector, vv(&[(1, 1)]));
        assert!(r.certificate.verify(&vv(&[(5, 3)]), &r.vector));
        assert_eq!(reduce_odd_order(&vv(&[(2, 1), (3, 1)])).unwrap().vector, vv(&[(0, 1), (1, 1)]));
        assert_eq!(reduce_odd_order(&vv(&[(1, 2)])), Err(Error::EvenOrder(2)));
    }

    #[test]
    fn even_examples() {
        let r = reduce_even_order(&vv(&[(3, 4)])).unwrap();
        assert_eq!(r.vector, vv(&[(1, 4)]));
        assert_eq!(r.base_index, Some(0));
        assert_eq!(r.certificate.power, 3);
        assert!(r.certificate.verify(&vv(&[(3, 4)]), &r.vector));
        let r = reduce_even_order(&vv(&[(1, 2)])).unwrap();
        assert_eq!((r.vector, r.base_index), (vv(&[(1, 2)]), Some(0)));
        let r = reduce_even_order(&vv(&[(3, 2), (1, 2)])).unwrap();
        assert_eq!((r.vector, r.base_index), (vv(&[(3, 2), (1, 2)]), Some(1)));
        assert_eq!(reduce_even_order(&vv(&[(1, 3)])), Err(Error::OddOrder(3)));
    }

    #[test]
    fn odd_bezout_correction() {
        // e = 5 mod 8: A = 5, B = (1 - 25)/8 = -3 is odd.
        let v = vv(&[(5, 8), (1, 4)]);
        let r = reduce_even_order(&v).unwrap();
        assert_eq!(r.vector.0[0], q(1, 8));
        assert!(r.certificate.verify(&v, &r.vector));
    }

    #[test]
    fn rebase_examples() {
        let r = rebase(&vv(&[(1, 1), (1, 2)]), 1).unwrap();
        assert_eq!((r.vector, r.base_index), (vv(&[(1, 1), (1, 2)]), Some(1)));
        let v = vv(&[(3, 4), (1, 2)]);
        let r = rebase(&v, 0).unwrap();
        assert_eq!(r.vector.0[0], q(1, 4));
        assert!(r.certificate.verify(&v, &r.vector));
        assert_eq!(rebase(&vv(&[(1, 2), (1, 1)]), 1), Err(Error::EvenNumerator { index: 1 }));
    }

    fn small_q() -> impl Strategy<Value = Q> {
        (-40i64..40, 1i64..17).prop_map(|(n, d)| Q::new(n, d))
    }

    // Oracle for square-class equivalence: v' - k v must be an even integer
    // vector for some odd k, recomputed without trusting the certificate's
    // shift.
    fn equivalent(v: &ValueVector, w: &ValueVector, k: i64) -> bool {
        k % 2 != 0
            && w.sub(&v.scale(k)).0.iter().all(|c| c.is_integer() && c.to_integer() % 2 == 0)
    }

    proptest! {
        #[test]
        fn compare_matches_oracle(a in small_q(), b in small_q(), c in small_q(), d in small_q()) {
            let x = Exponent::new(a, b);
            let y = Exponent::new(c, d);
            prop_assert_eq!(x.cmp(&y), oracle_sign(a - c, b - d));
            prop_assert_eq!(x.cmp(&y), y.cmp(&x).reverse());
        }

        #[test]
        fn compare_transitive(xs in proptest::collection::vec((small_q(), small_q()), 3)) {
            let mut es: Vec<Exponent> = xs.iter().map(|&(a, b)| Exponent::new(a, b)).collect();
            es.sort();
            prop_assert!(es[0] <= es[1] && es[1] <= es[2] && es[0] <= es[2]);
        }

        #[test]
        fn odd_reduction_in_01(v in proptest::collection::vec((-30i64..30, prop_oneof![Just(1i64), Just(3), Just(5), Just(15)]), 1..4)) {
            let v = ValueVector(v.into_iter().map(|(n, d)| Q::new(n, d)).collect());
            let r = reduce_odd_order(&v).unwrap();
            prop_assert!(r.vector.0.iter().all(|c| c.is_zero() || *c == Q::from_integer(1)));
            prop_assert!(equivalent(&v, &r.vector, r.certificate.power));
        }

        #[test]
        fn even_reduction_certified(v in proptest::collection::vec((-30i64..30, prop_oneof![Just(1i64), Just(2), Just(4), Just(6), Just(8), Just(12)]), 1..4)) {
            let v = ValueVector(v.into_iter().map(|(n, d)| Q::new(n, d)).collect());
            prop_assume!(order_of(&v).is_multiple_of(2));
            let r = reduce_even_order(&v).unwrap();
            prop_assert!(equivalent(&v, &r.vector, r.certificate.power));
            prop_assert_eq!(order_of(&v) % order_of(&r.vector), 0);
            let ord = order_of(&r.vector) as i64;
            let i0 = r.base_index.unwrap();
            prop_assert_eq!(r.vector.0[i0], Q::new(1, ord));
        }

        #[test]
        fn rebase_certified(v in proptest::collection::vec(-30i64..30, 1..4), y in 0u32..4, t in 0usize..3) {
            let den = 1i64 << y;
            let v = ValueVector(v.into_iter().map(|n| Q::new(n, den)).collect());
            prop_assume!(t < v.rank());
            let alpha = order_of(&v);
            prop_assume!((v.0[t] * alpha as i64).to_integer() % 2 != 0);
            let r = rebase(&v, t).unwrap();
            prop_assert!(equivalent(&v, &r.vector, r.certificate.power));
            prop_assert_eq!(r.vector.0[t], Q::new(1, alpha as i64));
        }
    }
}
