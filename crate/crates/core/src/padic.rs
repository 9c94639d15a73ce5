//! Exact p-adic arithmetic on rationals: valuations, square classes and
//! Hensel lifting of square roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_odd_prime(p) {
        Ok(())
    } else {
        Err(Error::BadPrime(p))
    }
}

/// Splits a nonzero integer as `p^v * m` with `p` not dividing `m`.
pub fn split_int(n: &BigInt, p: u64) -> (i64, BigInt) {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    (v, m)
}

pub fn padic_valuation(x: &BigRational, p: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(split_int(x.numer(), p).0 - split_int(x.denom(), p).0)
}

/// `x = p^v * u` with `u` a p-adic unit.
pub fn unit_part(x: &BigRational, p: u64) -> Result<(i64, BigRational)> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let (vn, n) = split_int(x.numer(), p);
    let (vd, d) = split_int(x.denom(), p);
    Ok((vn - vd, BigRational::new(n, d)))
}

pub fn pow_p(p: u64, k: i64) -> BigRational {
    let base = BigInt::from(p);
    if k >= 0 {
        BigRational::from_integer(num_traits::pow(base, k as usize))
    } else {
        BigRational::new(BigInt::one(), num_traits::pow(base, (-k) as usize))
    }
}

pub fn pow_p_int(p: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// Reduction of a p-integral rational modulo `m` (a power of `p`), in `[0, m)`.
pub fn residue_mod(x: &BigRational, m: &BigInt) -> Result<BigInt> {
    let d = x.denom().mod_floor(m);
    let inv = mod_inverse(&d, m).ok_or(Error::NonUnit(1))?;
    Ok((x.numer() * inv).mod_floor(m))
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Legendre symbol of an integer modulo an odd prime: 0, 1 or -1.
pub fn legendre(a: &BigInt, p: u64) -> i8 {
    let pb = BigInt::from(p);
    let r = a.mod_floor(&pb);
    if r.is_zero() {
        return 0;
    }
    let e = BigInt::from((p - 1) / 2);
    if r.modpow(&e, &pb).is_one() {
        1
    } else {
        -1
    }
}

pub fn legendre_u64(a: u64, p: u64) -> i8 {
    legendre(&BigInt::from(a), p)
}

/// Square root modulo an odd prime by Tonelli-Shanks, in `[0, p)`.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre_u64(a, p) != 1 {
        return None;
    }
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let powm = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = mulm(r, b);
            }
            b = mulm(b, b);
            e >>= 1;
        }
        r
    };
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre_u64(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powm(z, q);
    let mut t = powm(a, q);
    let mut r = powm(a, q.div_ceil(2));
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulm(t2, t2);
            i += 1;
        }
        let b = powm(c, 1 << (m - i - 1));
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r)
}

/// `(v_p(x) mod 2, unit part is a non-square mod p)`. Multiplication of
/// classes is componentwise xor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SquareClass {
    pub val_parity: u8,
    pub unit_class: u8,
}

impl std::ops::Mul for SquareClass {
    type Output = SquareClass;

    fn mul(self, other: SquareClass) -> SquareClass {
        SquareClass {
            val_parity: self.val_parity ^ other.val_parity,
            unit_class: self.unit_class ^ other.unit_class,
        }
    }
}

pub fn square_class(x: &BigRational, p: u64) -> Result<SquareClass> {
    let (v, u) = unit_part(x, p)?;
    let r = residue_mod(&u, &BigInt::from(p))?;
    Ok(SquareClass {
        val_parity: v.rem_euclid(2) as u8,
        unit_class: if legendre(&r, p) == 1 { 0 } else { 1 },
    })
}

/// A rational tagged with its prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicScalar {
    pub value: BigRational,
    pub prime: u64,
}

impl PadicScalar {
    pub fn new(value: BigRational, prime: u64) -> Result<Self> {
        check_prime(prime)?;
        Ok(PadicScalar { value, prime })
    }

    pub fn valuation(&self) -> Result<i64> {
        padic_valuation(&self.value, self.prime)
    }

    pub fn square_class(&self) -> Result<SquareClass> {
        square_class(&self.value, self.prime)
    }
}

/// Square root of a unit modulo `p^n` by Newton iteration, doubling the
/// precision each step. The first digit is normalised into `[1, (p-1)/2]`.
pub fn hensel_sqrt(u: &BigRational, p: u64, n: u32) -> Result<Option<BigInt>> {
    check_prime(p)?;
    let v = padic_valuation(u, p)?;
    if v != 0 {
        return Err(Error::NonUnit(v));
    }
    let pb = BigInt::from(p);
    let r0 = residue_mod(u, &pb)?.to_u64().unwrap_or(0);
    let Some(mut s0) = sqrt_mod_prime(r0, p) else {
        return Ok(None);
    };
    if s0 > (p - 1) / 2 {
        s0 = p - s0;
    }
    let modulus = pow_p_int(p, n);
    let target = residue_mod(u, &modulus)?;
    let mut s = BigInt::from(s0);
    let mut prec = 1u32;
    while prec < n {
        prec = (2 * prec).min(n);
        let m = pow_p_int(p, prec);
        let f = (&s * &s - &target).mod_floor(&m);
        let inv = mod_inverse(&(BigInt::from(2) * &s), &m).ok_or(Error::NonUnit(0))?;
        s = (&s - f * inv).mod_floor(&m);
    }
    Ok(Some(s.mod_floor(&modulus)))
}

/// Exact square root of a rational, if it is a square in `Q`.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(padic_valuation(&ratio(9, 2), 3), Ok(2));
        assert_eq!(padic_valuation(&big(50), 5), Ok(2));
        assert_eq!(padic_valuation(&big(3), 7), Ok(0));
        assert_eq!(padic_valuation(&big(0), 7), Err(Error::ZeroInput));
        assert_eq!(padic_valuation(&ratio(1, 27), 3), Ok(-3));
    }

    #[test]
    fn square_class_examples() {
        assert_eq!(square_class(&big(1), 3), Ok(SquareClass { val_parity: 0, unit_class: 0 }));
        assert_eq!(square_class(&big(18), 3), Ok(SquareClass { val_parity: 0, unit_class: 1 }));
        assert_eq!(square_class(&big(3), 3), Ok(SquareClass { val_parity: 1, unit_class: 0 }));
    }

    #[test]
    fn hensel_examples() {
        let s = hensel_sqrt(&big(4), 3, 5).unwrap().unwrap();
        let m = pow_p_int(3, 5);
        assert!(s == BigInt::from(2) || s == &m - 2);
        assert_eq!(s.mod_floor(&BigInt::from(3)), BigInt::from(1));
        let s = hensel_sqrt(&big(7), 3, 4).unwrap().unwrap();
        let diff: BigInt = &s * &s - 7;
        assert!(diff.mod_floor(&pow_p_int(3, 4)).is_zero());
        assert_eq!(hensel_sqrt(&big(2), 3, 4), Ok(None));
        assert_eq!(hensel_sqrt(&big(3), 3, 4), Err(Error::NonUnit(1)));
    }

    #[test]
    fn tonelli_matches_brute_force() {
        for p in [3u64, 5, 7, 11, 13, 17, 97, 257] {
            for a in 0..p {
                let brute = (0..p).any(|x| x * x % p == a);
                match sqrt_mod_prime(a, p) {
                    Some(r) => assert_eq!(r * r % p, a),
                    None => assert!(!brute),
                }
            }
        }
    }

    fn nonzero_rational() -> impl Strategy<Value = BigRational> {
        ((1i64..2000).prop_flat_map(|n| (Just(n), prop_oneof![Just(1i64), Just(-1)])), 1i64..500)
            .prop_map(|((n, s), d)| ratio(n * s, d))
    }

    proptest! {
        #[test]
        fn square_class_homomorphism(x in nonzero_rational(), y in nonzero_rational(), pi in 0usize..3) {
            let p = [3u64, 5, 7][pi];
            let cx = square_class(&x, p).unwrap();
            let cy = square_class(&y, p).unwrap();
            prop_assert_eq!(square_class(&(&x * &y), p).unwrap(), cx * cy);
        }

        #[test]
        fn hensel_reproduces_input(x in nonzero_rational(), n in 1u32..40, pi in 0usize..3) {
            let p = [3u64, 5, 7][pi];
            let (_, u) = unit_part(&x, p).unwrap();
            let m = pow_p_int(p, n);
            match hensel_sqrt(&u, p, n).unwrap() {
                Some(s) => {
                    let target: BigInt = residue_mod(&u, &m).unwrap();
                    let diff: BigInt = &s * &s - target;
                    prop_assert!(diff.mod_floor(&m).is_zero());
                }
                None => prop_assert_eq!(square_class(&u, p).unwrap().unit_class, 1),
            }
        }
    }
}
