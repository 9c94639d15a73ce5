//! Exact comparison of a p-adic norm `p^(-e)` with a real bound `r^h` for
//! rational `r > 0` and `h`. Rational `e` reduces to integer powers; for
//! irrational `e` the two logarithms are separated by interval arithmetic
//! with increasing precision (they can never be equal).

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exponent::{Exponent, Q};

const MAX_BITS: u64 = 1 << 14;

#[derive(Clone, Debug)]
struct Interval {
    lo: BigRational,
    hi: BigRational,
}

fn dyadic_floor(x: &BigRational, bits: u64) -> BigRational {
    let scale = BigInt::one() << bits;
    let n = (x * BigRational::from_integer(scale.clone())).floor().to_integer();
    BigRational::new(n, scale)
}

fn dyadic_ceil(x: &BigRational, bits: u64) -> BigRational {
    let scale = BigInt::one() << bits;
    let n = (x * BigRational::from_integer(scale.clone())).ceil().to_integer();
    BigRational::new(n, scale)
}

impl Interval {
    fn exact(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    fn round(self, bits: u64) -> Self {
        Interval { lo: dyadic_floor(&self.lo, bits), hi: dyadic_ceil(&self.hi, bits) }
    }

    fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().cloned().unwrap_or_default();
        let hi = c.iter().max().cloned().unwrap_or_default();
        Interval { lo, hi }
    }

    fn scale(&self, k: &BigRational) -> Interval {
        self.mul(&Interval::exact(k.clone()))
    }
}

fn q_to_big(x: Q) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

/// `2 * atanh(z)` for rational `0 <= z <= 1/3`.
fn two_atanh(z: &BigRational, bits: u64) -> Interval {
    let z2 = z * z;
    let mut power = z.clone();
    let mut sum = BigRational::zero();
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (bits + 4));
    let mut k = 0u64;
    while power > eps || k == 0 {
        sum = dyadic_floor(&(&sum + &power / BigRational::from_integer(BigInt::from(2 * k + 1))), bits + 8);
        power = dyadic_ceil(&(&power * &z2), bits + 8);
        k += 1;
        if power.is_zero() {
            break;
        }
    }
    // Powers are rounded up and partial sums down, each by at most
    // 2^-(bits+8); the tail is at most power / (1 - z^2) <= 9/8 * power.
    let slack = BigRational::new(BigInt::from(k + 2), BigInt::one() << (bits + 8));
    let tail = &power * BigRational::new(BigInt::from(9), BigInt::from(8));
    let two = BigRational::from_integer(BigInt::from(2));
    Interval { lo: (&sum - &slack) * &two, hi: (&sum + &slack + &tail) * &two }
}

fn ln2(bits: u64) -> Interval {
    two_atanh(&BigRational::new(BigInt::one(), BigInt::from(3)), bits)
}

thread_local! {
    static LN_CACHE: RefCell<HashMap<(BigRational, u64), Interval>> = RefCell::new(HashMap::new());
}

/// Natural logarithm of a positive rational, memoised per thread.
fn ln(x: &BigRational, bits: u64) -> Interval {
    let key = (x.clone(), bits);
    if let Some(hit) = LN_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let value = ln_uncached(x, bits);
    LN_CACHE.with(|c| c.borrow_mut().insert(key, value.clone()));
    value
}

fn ln_uncached(x: &BigRational, bits: u64) -> Interval {
    if x.is_one() {
        return Interval::exact(BigRational::zero());
    }
    let mut m: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let two = BigRational::from_integer(BigInt::from(2));
    let pow2 = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(BigInt::one() << k as u64)
        } else {
            BigRational::new(BigInt::one(), BigInt::one() << (-k) as u64)
        }
    };
    let mut y = x / pow2(m);
    while y >= two {
        y /= &two;
        m += 1;
    }
    while y < BigRational::one() {
        y *= &two;
        m -= 1;
    }
    let z = (&y - BigRational::one()) / (&y + BigRational::one());
    let ln_y = if z.is_zero() { Interval::exact(BigRational::zero()) } else { two_atanh(&z, bits) };
    ln2(bits).scale(&BigRational::from_integer(BigInt::from(m))).add(&ln_y)
}

fn sqrt2(bits: u64) -> Interval {
    let s = (BigInt::from(2) << (2 * bits)).sqrt();
    let den = BigInt::one() << bits;
    Interval {
        lo: BigRational::new(s.clone(), den.clone()),
        hi: BigRational::new(s + 1, den),
    }
}

fn rational_pow(r: &BigRational, k: i64) -> BigRational {
    let base = if k < 0 { r.recip() } else { r.clone() };
    num_traits::pow(base, k.unsigned_abs() as usize)
}

/// Orders `p^(-e)` against the product of `r_i^(h_i)`.
pub fn compare_norm_product(p: u64, e: Exponent, factors: &[(BigRational, Q)]) -> Result<Ordering> {
    if factors.iter().any(|(r, _)| !r.is_positive()) {
        return Err(Error::ZeroInput);
    }
    let x = -e;
    if x.is_rational() {
        // Raise both sides to the common denominator of all exponents.
        let l = factors.iter().fold(*x.rat.denom(), |acc, (_, h)| num_integer::lcm(acc, *h.denom()));
        let lhs = rational_pow(&BigRational::from_integer(BigInt::from(p)), (x.rat * l).to_integer());
        let rhs = factors
            .iter()
            .fold(BigRational::one(), |acc, (r, h)| acc * rational_pow(r, (*h * l).to_integer()));
        return Ok(lhs.cmp(&rhs));
    }
    let pr = BigRational::from_integer(BigInt::from(p));
    let mut bits = 64;
    while bits <= MAX_BITS {
        let exponent = Interval::exact(q_to_big(x.rat)).add(&sqrt2(bits).scale(&q_to_big(x.irr)));
        let lhs = exponent.mul(&ln(&pr, bits)).round(bits);
        let rhs = factors
            .iter()
            .fold(Interval::exact(BigRational::zero()), |acc, (r, h)| acc.add(&ln(r, bits).scale(&q_to_big(*h))))
            .round(bits);
        if lhs.hi < rhs.lo {
            return Ok(Ordering::Less);
        }
        if lhs.lo > rhs.hi {
            return Ok(Ordering::Greater);
        }
        bits *= 2;
    }
    Err(Error::NoConvergence(MAX_BITS as usize))
}

/// Orders `p^(-e)` against `r^h`.
pub fn compare_norm(p: u64, e: Exponent, r: &BigRational, h: Q) -> Result<Ordering> {
    compare_norm_product(p, e, &[(r.clone(), h)])
}

/// `p^(-e) <= r^h`.
pub fn norm_at_most(p: u64, e: Exponent, r: &BigRational, h: Q) -> Result<bool> {
    Ok(compare_norm(p, e, r, h)? != Ordering::Greater)
}
