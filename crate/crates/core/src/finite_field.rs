//! Small finite fields of odd order and polynomials over prime fields.

use crate::error::{Error, Result};
use crate::padic::is_odd_prime;

/// `GF(q)` for odd `q = p^k <= 1000`. Elements are integers in `[0, q)`
/// whose base-`p` digits are the coefficients of a polynomial in a root of
/// a fixed irreducible polynomial.
#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

fn digits(mut a: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, d| acc * p + d)
}

/// Product of two residues modulo a monic polynomial of degree `k`
/// (given by its lower coefficients).
fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len();
    let mut prod = vec![0u32; 2 * k];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for top in (k..2 * k).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (j, m) in modulus.iter().enumerate() {
            prod[top - k + j] = (prod[top - k + j] + (p - c) * m % p) % p;
        }
    }
    prod.truncate(k);
    prod
}

/// Remainder of `f` modulo a monic `g`, both ascending with leading
/// coefficients included.
fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let top = r.len() - 1;
        let c = r[top];
        if c != 0 {
            for (j, gj) in g.iter().enumerate() {
                r[top - dg + j] = (r[top - dg + j] + (p - c) * gj % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// The monic polynomial with lower coefficients `modulus` is irreducible
/// iff no monic polynomial of degree at most half its degree divides it.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let k = modulus.len() as u32;
    let mut f = modulus.to_vec();
    f.push(1);
    (1..=k / 2).all(|d| {
        (0..p.pow(d)).all(|lower| {
            let mut g = digits(lower, p, d);
            g.push(1);
            poly_rem(&f, &g, p).iter().any(|c| *c != 0)
        })
    })
}

impl FiniteField {
    pub fn new(q: u64) -> Result<FiniteField> {
        if !(3..=1000).contains(&q) || q.is_multiple_of(2) {
            return Err(Error::BadFieldOrder(q));
        }
        let q32 = q as u32;
        let p = (3..=q32).find(|d| q32.is_multiple_of(*d)).ok_or(Error::BadFieldOrder(q))?;
        if !is_odd_prime(p as u64) {
            return Err(Error::BadFieldOrder(q));
        }
        let mut k = 0;
        let mut rest = q32;
        while rest.is_multiple_of(p) {
            rest /= p;
            k += 1;
        }
        if rest != 1 {
            return Err(Error::BadFieldOrder(q));
        }
        let modulus = (0..p.pow(k))
            .map(|m| digits(m, p, k))
            .find(|m| is_irreducible(m, p))
            .ok_or(Error::BadFieldOrder(q))?;
        // Find a generator of the multiplicative group and tabulate powers.
        for g in 2..q32 {
            let dg = digits(g, p, k);
            let mut exp = Vec::with_capacity(q32 as usize - 1);
            let mut cur = digits(1, p, k);
            let mut log = vec![u32::MAX; q32 as usize];
            let mut ok = true;
            for i in 0..q32 - 1 {
                let c = undigits(&cur, p);
                if log[c as usize] != u32::MAX {
                    ok = false;
                    break;
                }
                log[c as usize] = i;
                exp.push(c);
                cur = poly_mulmod(&cur, &dg, &modulus, p);
            }
            if ok {
                return Ok(FiniteField { p, k, q: q32, exp, log });
            }
        }
        Err(Error::BadFieldOrder(q))
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn contains(&self, a: u32) -> bool {
        a < self.q
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (digits(a, self.p, self.k), digits(b, self.p, self.k));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        undigits(&s, self.p)
    }

    pub fn neg(&self, a: u32) -> u32 {
        let s: Vec<u32> = digits(a, self.p, self.k).iter().map(|x| (self.p - x) % self.p).collect();
        undigits(&s, self.p)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[((self.log[a as usize] + self.log[b as usize]) % n) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn is_square(&self, a: u32) -> bool {
        a == 0 || self.log[a as usize].is_multiple_of(2)
    }

    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        let l = self.log[a as usize];
        l.is_multiple_of(2).then(|| self.exp[(l / 2) as usize])
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
}

/// Outcome of an isotropy decision over a finite field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteIsotropy {
    pub isotropic: bool,
    pub witness: Option<Vec<u32>>,
}

/// Decides isotropy of a diagonal form over `GF(q)`; dimension at least 3
/// always yields a witness.
pub fn isotropic_finite_field(field: &FiniteField, coeffs: &[u32]) -> Result<FiniteIsotropy> {
    if let Some(bad) = coeffs.iter().find(|a| !field.contains(**a)) {
        return Err(Error::Parse(format!("element {} outside GF({})", bad, field.order())));
    }
    let n = coeffs.len();
    let unit = |i: usize| -> Vec<u32> { (0..n).map(|j| u32::from(i == j)).collect() };
    if let Some(i) = coeffs.iter().position(|a| *a == 0) {
        return Ok(FiniteIsotropy { isotropic: true, witness: Some(unit(i)) });
    }
    match n {
        0 | 1 => Ok(FiniteIsotropy { isotropic: false, witness: None }),
        2 => {
            let ratio = field.mul(field.neg(coeffs[1]), field.inv(coeffs[0]).unwrap_or(0));
            Ok(match field.sqrt(ratio) {
                Some(x) => FiniteIsotropy { isotropic: true, witness: Some(vec![x, 1]) },
                None => FiniteIsotropy { isotropic: false, witness: None },
            })
        }
        _ => {
            let inv3 = field.inv(coeffs[2]).unwrap_or(0);
            for x1 in 0..field.order() {
                for x2 in 0..field.order() {
                    if x1 == 0 && x2 == 0 {
                        continue;
                    }
                    let s = field.add(
                        field.mul(coeffs[0], field.mul(x1, x1)),
                        field.mul(coeffs[1], field.mul(x2, x2)),
                    );
                    if let Some(x3) = field.sqrt(field.mul(field.neg(s), inv3)) {
                        let mut w = vec![0; n];
                        w[0] = x1;
                        w[1] = x2;
                        w[2] = x3;
                        return Ok(FiniteIsotropy { isotropic: true, witness: Some(w) });
                    }
                }
            }
            Ok(FiniteIsotropy { isotropic: false, witness: None })
        }
    }
}

pub fn evaluate_form(field: &FiniteField, coeffs: &[u32], x: &[u32]) -> u32 {
    coeffs
        .iter()
        .zip(x)
        .fold(0, |acc, (a, xi)| field.add(acc, field.mul(*a, field.mul(*xi, *xi))))
}

/// Polynomial over `F_p`, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    pub p: u64,
    pub coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> FpPoly {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn zero(p: u64) -> FpPoly {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn constant(p: u64, c: u64) -> FpPoly {
        FpPoly::new(p, vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, o: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&0) + o.coeffs.get(i).unwrap_or(&0))
            .collect();
        FpPoly::new(self.p, c)
    }

    pub fn scale(&self, k: u64) -> FpPoly {
        FpPoly::new(self.p, self.coeffs.iter().map(|c| c * (k % self.p) % self.p).collect())
    }

    pub fn neg(&self) -> FpPoly {
        self.scale(self.p - 1)
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut c = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % self.p;
            }
        }
        FpPoly::new(self.p, c)
    }

    /// Square root in `F_p[t]` when the polynomial is a square.
    pub fn sqrt(&self) -> Option<FpPoly> {
        let p = self.p;
        let Some(deg) = self.degree() else { return Some(self.clone()) };
        if deg % 2 == 1 {
            return None;
        }
        let lead = self.coeffs[deg];
        let root_lead = crate::padic::sqrt_mod_prime(lead, p)?;
        let m = deg / 2;
        let inv = |x: u64| -> u64 { modpow(x, p - 2, p) };
        // Solve g with g^2 = f from the top coefficient down.
        let mut g = vec![0u64; m + 1];
        g[m] = root_lead;
        let two_lead_inv = inv(2 * root_lead % p);
        for k in (0..m).rev() {
            let mut s = 0u64;
            for i in (k + 1)..=m {
                let j = m + k - i;
                if j > k && j <= m {
                    s = (s + g[i] * g[j]) % p;
                }
            }
            let target = (self.coeffs[m + k] + p - s) % p;
            g[k] = target * two_lead_inv % p;
        }
        let g = FpPoly::new(p, g);
        (g.mul(&g) == *self).then_some(g)
    }
}

pub fn modpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let f3 = FiniteField::new(3).unwrap();
        let r = isotropic_finite_field(&f3, &[1, 1, 1]).unwrap();
        assert_eq!(r.witness, Some(vec![1, 1, 1]));
        assert!(!isotropic_finite_field(&f3, &[1, 1]).unwrap().isotropic);
        let f5 = FiniteField::new(5).unwrap();
        let r = isotropic_finite_field(&f5, &[1, f5.from_int(-1)]).unwrap();
        assert_eq!(r.witness, Some(vec![1, 1]));
        assert_eq!(FiniteField::new(8).unwrap_err(), Error::BadFieldOrder(8));
        assert_eq!(FiniteField::new(15).unwrap_err(), Error::BadFieldOrder(15));
    }

    #[test]
    fn field_axioms_small_orders() {
        for q in [3u64, 5, 9, 25, 27, 49, 81, 125, 243, 343, 729] {
            let f = FiniteField::new(q).unwrap();
            for a in 1..f.order() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q={} a={}", q, a);
            }
            let squares = (1..f.order()).filter(|a| f.is_square(*a)).count() as u32;
            assert_eq!(squares, (f.order() - 1) / 2);
        }
    }

    fn brute_isotropic(f: &FiniteField, coeffs: &[u32]) -> bool {
        let n = coeffs.len();
        let total = (f.order() as u64).pow(n as u32);
        (1..total).any(|mut idx| {
            let x: Vec<u32> = (0..n)
                .map(|_| {
                    let d = (idx % f.order() as u64) as u32;
                    idx /= f.order() as u64;
                    d
                })
                .collect();
            evaluate_form(f, coeffs, &x) == 0
        })
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(qi in 0usize..4, cs in proptest::collection::vec(0u32..1000, 1..4)) {
            let q = [3u64, 5, 7, 9][qi];
            let f = FiniteField::new(q).unwrap();
            let coeffs: Vec<u32> = cs.iter().map(|c| c % f.order()).collect();
            let r = isotropic_finite_field(&f, &coeffs).unwrap();
            prop_assert_eq!(r.isotropic, brute_isotropic(&f, &coeffs));
            if let Some(w) = r.witness {
                prop_assert!(w.iter().any(|x| *x != 0));
                prop_assert_eq!(evaluate_form(&f, &coeffs, &w), 0);
            }
        }

        #[test]
        fn poly_sqrt_roundtrip(cs in proptest::collection::vec(0u64..7, 0..5), pi in 0usize..3) {
            let p = [3u64, 5, 7][pi];
            let g = FpPoly::new(p, cs);
            let sq = g.mul(&g);
            let r = sq.sqrt().unwrap();
            prop_assert!(r == g || r == g.neg());
        }
    }
}
