//! Truncated two-sided Laurent series `sum c_d t^d` with p-adic coefficients,
//! normed on the circle `|t| = p^(-rho_log)`.
//!
//! A term is dropped once its valuation on every circle of the truncation
//! band reaches the precision cap, and the surviving coefficients are only
//! kept modulo the matching power of `p`. Terms of degree beyond the window
//! that are not negligible are dropped too, and mark the series saturated.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::padic::{check_prime, mod_inverse, pow_p, pow_p_int, split_int, unit_part};

pub const DEFAULT_WINDOW: i64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesContext {
    pub prime: u64,
    /// Norm circle, as a log-radius.
    pub rho_log: Exponent,
    /// Log-radii `lo <= hi` of the circles on which dropped terms must be
    /// negligible.
    pub band: (Exponent, Exponent),
    pub window: i64,
    pub precision: i64,
}

impl SeriesContext {
    pub fn new(prime: u64, rho_log: Exponent, window: i64) -> Result<Self> {
        check_prime(prime)?;
        Ok(SeriesContext { prime, rho_log, band: (rho_log, rho_log), window, precision: window })
    }

    pub fn with_band(&self, a: Exponent, b: Exponent) -> Self {
        SeriesContext { band: (a.min(b), a.max(b)), ..self.clone() }
    }

    pub fn at_circle(&self, rho_log: Exponent) -> Self {
        SeriesContext { rho_log, band: (rho_log, rho_log), ..self.clone() }
    }

    fn worst_log_radius(&self, d: i64) -> Exponent {
        if d >= 0 {
            self.band.0
        } else {
            self.band.1
        }
    }

    /// Number of p-adic digits of the unit that are significant for a term
    /// `unit * p^val * t^d`, or `None` when the term is negligible.
    fn digits(&self, d: i64, val: i64) -> Option<u32> {
        let edge = Exponent::integer(self.precision) - self.worst_log_radius(d) * d;
        if Exponent::integer(val) >= edge {
            return None;
        }
        Some((edge.ceil() - val) as u32)
    }
}

/// `unit * p^val` with `unit` prime to `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coeff {
    pub unit: BigInt,
    pub val: i64,
}

/// Representative of `n` modulo `m` in `(-m/2, m/2]`.
fn sym_mod(n: &BigInt, m: &BigInt) -> BigInt {
    let r = n.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

impl Coeff {
    pub fn to_rational(&self, p: u64) -> BigRational {
        BigRational::from_integer(self.unit.clone()) * pow_p(p, self.val)
    }
}

/// The fraction `a/b` with `a = u * b mod m` and `|a|, b <= sqrt(m/2)`, if
/// one exists; it is unique when it does.
fn reconstruct(u: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        (r0, r1, s0, s1) = (r1, r2, s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !s1.gcd(m).is_one() {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnulusSeries {
    ctx: SeriesContext,
    terms: BTreeMap<i64, Coeff>,
    saturated: bool,
}

/// Log-norm of a series together with a flag telling whether the maximum
/// is attained at the edge of the degree window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormReport {
    pub log_norm: Exponent,
    pub at_window_edge: bool,
}

struct Accumulator {
    val: i64,
    n: BigInt,
}

impl Accumulator {
    fn add(&mut self, p: u64, val: i64, n: BigInt) {
        if val >= self.val {
            self.n += n * pow_p_int(p, (val - self.val) as u32);
        } else {
            self.n = &self.n * pow_p_int(p, (self.val - val) as u32) + n;
            self.val = val;
        }
    }
}

impl AnnulusSeries {
    pub fn zero(ctx: &SeriesContext) -> Self {
        AnnulusSeries { ctx: ctx.clone(), terms: BTreeMap::new(), saturated: false }
    }

    pub fn constant(ctx: &SeriesContext, c: &BigRational) -> Self {
        AnnulusSeries::from_terms(ctx, &[(0, c.clone())])
    }

    pub fn one(ctx: &SeriesContext) -> Self {
        AnnulusSeries::constant(ctx, &BigRational::one())
    }

    pub fn monomial(ctx: &SeriesContext, d: i64, c: &BigRational) -> Self {
        AnnulusSeries::from_terms(ctx, &[(d, c.clone())])
    }

    pub fn from_terms(ctx: &SeriesContext, terms: &[(i64, BigRational)]) -> Self {
        let mut s = AnnulusSeries::zero(ctx);
        let mut acc: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (d, c) in terms {
            *acc.entry(*d).or_insert_with(BigRational::zero) += c;
        }
        for (d, c) in acc {
            s.insert_rational(d, &c);
        }
        s
    }

    pub fn context(&self) -> &SeriesContext {
        &self.ctx
    }

    pub fn prime(&self) -> u64 {
        self.ctx.prime
    }

    pub fn terms(&self) -> &BTreeMap<i64, Coeff> {
        &self.terms
    }

    pub fn saturated(&self) -> bool {
        self.saturated
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, d: i64) -> BigRational {
        self.terms
            .get(&d)
            .map(|c| c.to_rational(self.ctx.prime))
            .unwrap_or_else(BigRational::zero)
    }

    /// The simplest rational agreeing with the degree `d` coefficient to its
    /// stored precision; the stored representative when none is short.
    pub fn simplest_coefficient(&self, d: i64) -> BigRational {
        let Some(c) = self.terms.get(&d) else { return BigRational::zero() };
        let p = self.ctx.prime;
        let short = self.ctx.digits(d, c.val).and_then(|k| reconstruct(&c.unit, &pow_p_int(p, k)));
        match short {
            Some(u) => u * pow_p(p, c.val),
            None => c.to_rational(p),
        }
    }

    fn insert_rational(&mut self, d: i64, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let p = self.ctx.prime;
        let Ok((val, u)) = unit_part(c, p) else { return };
        let Some(k) = self.ctx.digits(d, val) else { return };
        if d.abs() > self.ctx.window {
            self.saturated = true;
            return;
        }
        let m = pow_p_int(p, k);
        let inv = mod_inverse(u.denom(), &m).unwrap_or_default();
        let unit = sym_mod(&(u.numer() * inv), &m);
        self.terms.insert(d, Coeff { unit, val });
    }

    /// Inserts `n * p^val t^d` for an arbitrary integer `n`.
    fn insert_scaled(&mut self, d: i64, val: i64, n: BigInt) {
        if n.is_zero() {
            return;
        }
        let p = self.ctx.prime;
        let (extra, unit) = split_int(&n, p);
        let val = val + extra;
        let Some(k) = self.ctx.digits(d, val) else { return };
        if d.abs() > self.ctx.window {
            self.saturated = true;
            return;
        }
        let unit = sym_mod(&unit, &pow_p_int(p, k));
        self.terms.insert(d, Coeff { unit, val });
    }

    fn from_accumulators(ctx: &SeriesContext, acc: BTreeMap<i64, Accumulator>, saturated: bool) -> Self {
        let mut s = AnnulusSeries::zero(ctx);
        s.saturated = saturated;
        for (d, a) in acc {
            s.insert_scaled(d, a.val, a.n);
        }
        s
    }

    pub fn add(&self, o: &AnnulusSeries) -> AnnulusSeries {
        let p = self.ctx.prime;
        let mut acc: BTreeMap<i64, Accumulator> = BTreeMap::new();
        for (d, c) in self.terms.iter().chain(o.terms.iter()) {
            match acc.get_mut(d) {
                Some(a) => a.add(p, c.val, c.unit.clone()),
                None => {
                    acc.insert(*d, Accumulator { val: c.val, n: c.unit.clone() });
                }
            }
        }
        AnnulusSeries::from_accumulators(&self.ctx, acc, self.saturated || o.saturated)
    }

    pub fn neg(&self) -> AnnulusSeries {
        let p = self.ctx.prime;
        let mut s = AnnulusSeries::zero(&self.ctx);
        s.saturated = self.saturated;
        for (d, c) in &self.terms {
            let m = pow_p_int(p, self.ctx.digits(*d, c.val).unwrap_or(1));
            s.terms.insert(*d, Coeff { unit: sym_mod(&-&c.unit, &m), val: c.val });
        }
        s
    }

    pub fn sub(&self, o: &AnnulusSeries) -> AnnulusSeries {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &AnnulusSeries) -> AnnulusSeries {
        let p = self.ctx.prime;
        let mut acc: BTreeMap<i64, Accumulator> = BTreeMap::new();
        let mut saturated = self.saturated || o.saturated;
        for (d1, c1) in &self.terms {
            for (d2, c2) in &o.terms {
                let d = d1 + d2;
                let val = c1.val + c2.val;
                if self.ctx.digits(d, val).is_none() {
                    continue;
                }
                if d.abs() > self.ctx.window {
                    saturated = true;
                    continue;
                }
                let n = &c1.unit * &c2.unit;
                match acc.get_mut(&d) {
                    Some(a) => a.add(p, val, n),
                    None => {
                        acc.insert(d, Accumulator { val, n });
                    }
                }
            }
        }
        AnnulusSeries::from_accumulators(&self.ctx, acc, saturated)
    }

    pub fn scale(&self, k: &BigRational) -> AnnulusSeries {
        let terms: Vec<(i64, BigRational)> = self
            .terms
            .iter()
            .map(|(d, c)| (*d, c.to_rational(self.ctx.prime) * k))
            .collect();
        let mut s = AnnulusSeries::from_terms(&self.ctx, &terms);
        s.saturated |= self.saturated;
        s
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> AnnulusSeries {
        let terms: Vec<(i64, BigRational)> = self
            .terms
            .iter()
            .map(|(d, c)| (d + k, c.to_rational(self.ctx.prime)))
            .collect();
        let mut s = AnnulusSeries::from_terms(&self.ctx, &terms);
        s.saturated |= self.saturated;
        s
    }

    fn term_valuation(&self, d: i64, c: &Coeff) -> Exponent {
        Exponent::integer(c.val) + self.ctx.rho_log * d
    }

    /// Valuation of the norm on the circle, `None` for the zero series.
    pub fn valuation(&self) -> Option<Exponent> {
        self.terms.iter().map(|(d, c)| self.term_valuation(*d, c)).min()
    }

    pub fn norm(&self) -> Result<NormReport> {
        let log_norm = self.valuation().ok_or(Error::ZeroInput)?;
        let at_window_edge = self
            .terms
            .iter()
            .any(|(d, c)| d.abs() == self.ctx.window && self.term_valuation(*d, c) == log_norm);
        Ok(NormReport { log_norm, at_window_edge })
    }

    /// Degree-wise split into the parts of degree `>= 0` and `< 0`.
    pub fn split(&self) -> (AnnulusSeries, AnnulusSeries) {
        let mut plus = AnnulusSeries::zero(&self.ctx);
        let mut minus = AnnulusSeries::zero(&self.ctx);
        plus.saturated = self.saturated;
        minus.saturated = self.saturated;
        for (d, c) in &self.terms {
            let target = if *d >= 0 { &mut plus } else { &mut minus };
            target.terms.insert(*d, c.clone());
        }
        (plus, minus)
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Re-expresses the series in another context, dropping whatever became
    /// negligible.
    pub fn recontext(&self, ctx: &SeriesContext) -> AnnulusSeries {
        let mut s = AnnulusSeries::zero(ctx);
        s.saturated = self.saturated;
        for (d, c) in &self.terms {
            s.insert_scaled(*d, c.val, c.unit.clone());
        }
        s
    }

    /// Inverse of a series with a strictly dominant term on every circle of
    /// the band, by Newton iteration.
    pub fn inverse(&self) -> Result<AnnulusSeries> {
        let (lead_deg, lead) = self.dominant_term()?;
        let p = self.ctx.prime;
        let lead_inv = BigRational::one() / lead.to_rational(p);
        let z = self.shift(-lead_deg).scale(&lead_inv);
        let one = AnnulusSeries::one(&self.ctx);
        let two = AnnulusSeries::constant(&self.ctx, &BigRational::from_integer(BigInt::from(2)));
        let mut y = one.clone();
        for _ in 0..64 {
            let err = z.mul(&y).sub(&one);
            if err.is_zero() {
                return Ok(y.scale(&lead_inv).shift(-lead_deg));
            }
            y = y.mul(&two.sub(&z.mul(&y)));
        }
        Err(Error::NotInvertible("Newton iteration did not settle".into()))
    }

    fn dominant_term(&self) -> Result<(i64, Coeff)> {
        let check = |e: Exponent| -> Option<i64> {
            let mut best: Option<(Exponent, i64)> = None;
            let mut tie = false;
            for (d, c) in &self.terms {
                let v = Exponent::integer(c.val) + e * *d;
                match best {
                    None => best = Some((v, *d)),
                    Some((bv, _)) if v < bv => {
                        best = Some((v, *d));
                        tie = false;
                    }
                    Some((bv, _)) if v == bv => tie = true,
                    _ => {}
                }
            }
            if tie {
                None
            } else {
                best.map(|b| b.1)
            }
        };
        let lo = check(self.ctx.band.0);
        let hi = check(self.ctx.band.1);
        let mid = check(self.ctx.rho_log);
        match (lo, hi, mid) {
            (Some(a), Some(b), Some(c)) if a == b && b == c => Ok((a, self.terms[&a].clone())),
            _ => Err(Error::NotInvertible("no strictly dominant term".into())),
        }
    }

    /// Parses sums of terms `c`, `c*t`, `c*t^k`, `t^k` with rational `c`.
    pub fn parse(ctx: &SeriesContext, s: &str) -> Result<AnnulusSeries> {
        let mut terms = Vec::new();
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() || cleaned == "0" {
            return Ok(AnnulusSeries::zero(ctx));
        }
        let mut pieces = Vec::new();
        let mut cur = String::new();
        for (i, ch) in cleaned.chars().enumerate() {
            let after_caret = cur.ends_with('^');
            if (ch == '+' || ch == '-') && i > 0 && !after_caret {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        pieces.push(cur);
        for piece in pieces {
            terms.push(parse_term(&piece)?);
        }
        Ok(AnnulusSeries::from_terms(ctx, &terms))
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad coefficient {:?}", s));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn parse_term(piece: &str) -> Result<(i64, BigRational)> {
    let (sign, body) = match piece.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, piece.strip_prefix('+').unwrap_or(piece)),
    };
    let bad = || Error::Parse(format!("bad series term {:?}", piece));
    let sign = BigRational::from_integer(BigInt::from(sign));
    match body.find('t') {
        None => Ok((0, sign * parse_rational(body)?)),
        Some(pos) => {
            let coeff = body[..pos].trim_end_matches('*');
            let c = if coeff.is_empty() { BigRational::one() } else { parse_rational(coeff)? };
            let rest = &body[pos + 1..];
            let d = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^').ok_or_else(bad)?.parse::<i64>().map_err(|_| bad())?
            };
            Ok((d, sign * c))
        }
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for AnnulusSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, d) in self.terms.keys().enumerate() {
            let value = self.simplest_coefficient(*d);
            let mag = value.abs();
            if i == 0 {
                if value.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if value.is_negative() { "-" } else { "+" })?;
            }
            let var = match d {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{}", d),
            };
            if var.is_empty() {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", var)?;
            } else {
                write!(f, "{}*{}", fmt_rational(&mag), var)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::q;
    use crate::padic::{big, padic_valuation};
    use proptest::prelude::*;

    fn ctx(rho: Exponent) -> SeriesContext {
        SeriesContext::new(3, rho, DEFAULT_WINDOW).unwrap()
    }

    fn half() -> Exponent {
        Exponent::rational(q(1, 2))
    }

    #[test]
    fn norm_examples() {
        let c = ctx(half());
        let t = AnnulusSeries::parse(&c, "t").unwrap();
        assert_eq!(t.norm().unwrap().log_norm, half());
        let s = AnnulusSeries::parse(&c, "3 + t^2").unwrap();
        assert_eq!(s.norm().unwrap().log_norm, Exponent::integer(1));
        let s = AnnulusSeries::parse(&c, "t^-1").unwrap();
        assert_eq!(s.norm().unwrap().log_norm, -half());
        assert_eq!(AnnulusSeries::zero(&c).norm(), Err(Error::ZeroInput));
    }

    #[test]
    fn parse_print_split() {
        let c = ctx(half());
        let s = AnnulusSeries::parse(&c, "t^-1 + 5 + t").unwrap();
        assert_eq!(s.to_string(), "t^-1 + 5 + t");
        let (plus, minus) = s.split();
        assert_eq!(plus.to_string(), "5 + t");
        assert_eq!(minus.to_string(), "t^-1");
        let s = AnnulusSeries::parse(&c, "-2/3*t^-2 - t^3").unwrap();
        assert_eq!(s.to_string(), "-2/3*t^-2 - t^3");
    }

    #[test]
    fn truncation_drops_negligible_terms() {
        let c = ctx(Exponent::integer(1));
        let s = AnnulusSeries::from_terms(&c, &[(70, big(1)), (1, big(1))]);
        assert_eq!(s.to_string(), "t");
        assert!(!s.saturated());
        let c = ctx(Exponent::zero());
        let s = AnnulusSeries::from_terms(&c, &[(70, big(1)), (1, big(1))]);
        assert!(s.saturated());
    }

    #[test]
    fn inverse_of_one_plus_small() {
        let c = ctx(Exponent::new(q(0, 1), q(1, 4)));
        let x = AnnulusSeries::parse(&c, "1 + 3*t + 1/3*t^-1").unwrap();
        let y = x.inverse().unwrap();
        let prod = x.mul(&y).sub(&AnnulusSeries::one(&c));
        // Absolute precision is capped, so the product is exact to the cap
        // shifted by the size of x.
        let floor = Exponent::integer(c.precision) + x.valuation().unwrap() - Exponent::integer(1);
        assert!(prod.is_zero() || prod.valuation().unwrap() >= floor);
        assert!(!y.saturated());
    }

    fn coeff() -> impl Strategy<Value = BigRational> {
        (-50i64..50, prop_oneof![Just(1i64), Just(2), Just(3), Just(9), Just(5)])
            .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn series_terms() -> impl Strategy<Value = Vec<(i64, BigRational)>> {
        proptest::collection::vec((-6i64..7, coeff()), 1..6)
    }

    fn radius() -> impl Strategy<Value = Exponent> {
        prop_oneof![
            Just(Exponent::rational(q(1, 2))),
            Just(Exponent::new(q(0, 1), q(1, 3))),
            Just(Exponent::new(q(1, 1), q(-1, 2))),
            Just(Exponent::integer(-1)),
        ]
    }

    // Oracle: the norm of a finite series from its exact rational
    // coefficients, without the truncated representation.
    fn oracle_valuation(terms: &[(i64, BigRational)], rho: Exponent) -> Option<Exponent> {
        let mut acc: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (d, c) in terms {
            *acc.entry(*d).or_insert_with(BigRational::zero) += c;
        }
        acc.iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| Exponent::integer(padic_valuation(c, 3).unwrap()) + rho * *d)
            .min()
    }

    proptest! {
        #[test]
        fn norm_matches_oracle(a in series_terms(), rho in radius()) {
            let c = ctx(rho);
            let s = AnnulusSeries::from_terms(&c, &a);
            prop_assert_eq!(s.valuation(), oracle_valuation(&a, rho));
        }

        #[test]
        fn multiplicative(a in series_terms(), b in series_terms(), rho in radius()) {
            let c = ctx(rho);
            let x = AnnulusSeries::from_terms(&c, &a);
            let y = AnnulusSeries::from_terms(&c, &b);
            prop_assume!(!x.is_zero() && !y.is_zero());
            let xy = x.mul(&y);
            prop_assert!(!xy.saturated());
            prop_assert_eq!(xy.valuation().unwrap(), x.valuation().unwrap() + y.valuation().unwrap());
        }

        #[test]
        fn ultrametric(a in series_terms(), b in series_terms(), rho in radius()) {
            let c = ctx(rho);
            let x = AnnulusSeries::from_terms(&c, &a);
            let y = AnnulusSeries::from_terms(&c, &b);
            let s = x.add(&y);
            let (vx, vy) = (x.valuation(), y.valuation());
            if let (Some(vx), Some(vy)) = (vx, vy) {
                if let Some(vs) = s.valuation() {
                    prop_assert!(vs >= vx.min(vy));
                }
                if vx != vy {
                    prop_assert_eq!(s.valuation(), Some(vx.min(vy)));
                }
            }
        }

        #[test]
        fn split_reassembles(a in series_terms(), rho in radius()) {
            let c = ctx(rho);
            let x = AnnulusSeries::from_terms(&c, &a);
            let (plus, minus) = x.split();
            prop_assert_eq!(plus.add(&minus), x.clone());
            prop_assert!(plus.terms().keys().all(|d| *d >= 0));
            prop_assert!(minus.terms().keys().all(|d| *d < 0));
            if let Some(v) = x.valuation() {
                let vp = plus.valuation();
                let vm = minus.valuation();
                let best = [vp, vm].into_iter().flatten().min().unwrap();
                prop_assert_eq!(best, v);
            }
        }
    }

    #[test]
    fn simplest_coefficients() {
        let c = ctx(half());
        let s = AnnulusSeries::parse(&c, "1/2 + 3*t^-2 - 5/7*t").unwrap();
        assert_eq!(s.simplest_coefficient(0), BigRational::new(big(1).to_integer(), big(2).to_integer()));
        assert_eq!(s.simplest_coefficient(1), BigRational::new((-5).into(), 7.into()));
        assert_eq!(s.to_string(), "3*t^-2 + 1/2 - 5/7*t");
        assert_eq!(AnnulusSeries::parse(&c, &s.to_string()).unwrap(), s);
    }
}
