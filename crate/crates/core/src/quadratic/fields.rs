//! Valued fields on which diagonal forms are rewritten: `Q_p`, the
//! completed residue fields at type 2 and type 3 points of the line over
//! `Q_p` (elements modelled by rational functions), and a synthetic field
//! whose elements carry an explicit value vector.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exponent::{Exponent, ValueVector, Q};
use crate::finite_field::FpPoly;
use crate::padic::{check_prime, padic_valuation};
use crate::poly::{point_norm, Polynomial, RationalFunction};

pub trait FormField {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn rank(&self) -> usize;
    /// Coordinates of `|a|` over the basis norms `|pi_i|`.
    fn value_vector(&self, a: &Self::Elem) -> Result<ValueVector>;
    fn basis(&self, i: usize) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn pow(&self, a: &Self::Elem, k: i64) -> Result<Self::Elem> {
        let base = if k < 0 { self.inv(a)? } else { a.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        Ok(acc)
    }
}

/// `Q_p` with uniformizer `p`; elements are exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicField {
    pub prime: u64,
}

impl PadicField {
    pub fn new(prime: u64) -> Result<Self> {
        check_prime(prime)?;
        Ok(PadicField { prime })
    }
}

impl FormField for PadicField {
    type Elem = BigRational;

    fn rank(&self) -> usize {
        1
    }

    fn value_vector(&self, a: &BigRational) -> Result<ValueVector> {
        Ok(ValueVector::from_integers(&[padic_valuation(a, self.prime)?]))
    }

    fn basis(&self, _i: usize) -> BigRational {
        BigRational::from_integer(BigInt::from(self.prime))
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(BigRational::one() / a)
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    Type2 { num: i64, den: i64 },
    Type3,
}

/// The completed residue field at `eta_{c, p^(-e)}` for `e` nonzero radius
/// exponent. Type 2 points have a rank-1 value group generated by
/// `p^y (T-c)^x` of valuation `1/den`; type 3 points have basis
/// `(p, T - c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointField {
    pub prime: u64,
    pub center: BigRational,
    pub log_radius: Exponent,
    pub kind: PointKind,
    /// For type 2: `(y, x)` with `y*den + x*num = 1`.
    uniformizer: (i64, i64),
}

impl PointField {
    pub fn new(prime: u64, center: BigRational, log_radius: Exponent) -> Result<Self> {
        check_prime(prime)?;
        if log_radius.is_rational() {
            let r: Q = log_radius.rat;
            let (num, den) = (*r.numer(), *r.denom());
            let g = num.extended_gcd(&den);
            // g.x * num + g.y * den = gcd = 1.
            let uniformizer = (g.y * g.gcd.signum(), g.x * g.gcd.signum());
            Ok(PointField { prime, center, log_radius, kind: PointKind::Type2 { num, den }, uniformizer })
        } else {
            Ok(PointField { prime, center, log_radius, kind: PointKind::Type3, uniformizer: (0, 0) })
        }
    }

    pub fn local_coordinate(&self) -> RationalFunction {
        RationalFunction::from_poly(Polynomial::linear(&self.center))
    }

    pub fn prime_element(&self) -> RationalFunction {
        RationalFunction::constant(BigRational::from_integer(BigInt::from(self.prime)))
    }

    /// Log-norm of `f` at the point.
    pub fn log_norm(&self, f: &RationalFunction) -> Result<Exponent> {
        point_norm(f, self.prime, &self.center, self.log_radius)
    }

    /// For type 2 points, `(T - c)^den / p^num`, a norm-one element whose
    /// reduction generates the residue field over `F_p`.
    pub fn residue_generator(&self) -> Option<RationalFunction> {
        match self.kind {
            PointKind::Type2 { num, den } => {
                let t = self.local_coordinate().pow(den).ok()?;
                let pn = self.prime_element().pow(num).ok()?;
                t.div(&pn).ok()
            }
            PointKind::Type3 => None,
        }
    }
}

fn residue_int(x: &BigRational, p: u64) -> Result<u64> {
    let r = crate::padic::residue_mod(x, &BigInt::from(p))?;
    Ok(r.to_u64().unwrap_or(0))
}

/// Residue of a unit rational function at a type 2 point, as
/// `num / den` in `F_p(t)` where `t` reduces `(T - c)^den / p^num`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueFraction {
    pub num: FpPoly,
    pub den: FpPoly,
}

/// Taylor index attaining the norm, the dominant `(index, coefficient)`
/// pairs, and the norm's valuation.
type Dominant = (usize, Vec<(usize, BigRational)>, Exponent);

impl PointField {
    /// Leading part of a polynomial at the point: the smallest degree `j0`
    /// attaining the norm together with the dominant coefficients.
    fn dominant(&self, poly: &Polynomial) -> Result<Dominant> {
        let taylor = poly.taylor_at(&self.center);
        let v = poly.valuation_at(self.prime, &self.center, self.log_radius)?;
        let mut dom = Vec::new();
        for (j, b) in taylor.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let tv = Exponent::integer(padic_valuation(b, self.prime)?) + self.log_radius * j as i64;
            if tv == v {
                dom.push((j, b.clone()));
            }
        }
        let j0 = dom.first().map(|d| d.0).ok_or(Error::ZeroInput)?;
        Ok((j0, dom, v))
    }

    /// Reduction of a norm-one element at a type 3 point, in `F_p`.
    pub fn residue_type3(&self, u: &RationalFunction) -> Result<u64> {
        if self.log_norm(u)? != Exponent::zero() {
            return Err(Error::NonUnit(0));
        }
        let (_, n, _) = self.dominant(u.numer())?;
        let (_, d, _) = self.dominant(u.denom())?;
        // Distinct degrees have distinct norms on a type 3 circle.
        residue_int(&(&n[0].1 / &d[0].1), self.prime)
    }

    fn residue_poly(&self, poly: &Polynomial, num: i64, den: i64) -> Result<(FpPoly, usize)> {
        let (j0, dom, _) = self.dominant(poly)?;
        let v0 = padic_valuation(&dom[0].1, self.prime)?;
        let mut coeffs = Vec::new();
        for (j, b) in dom {
            let k = (j - j0) / den as usize;
            let scaled = b * crate::padic::pow_p(self.prime, k as i64 * num - v0);
            if coeffs.len() <= k {
                coeffs.resize(k + 1, 0);
            }
            coeffs[k] = residue_int(&scaled, self.prime)?;
        }
        Ok((FpPoly::new(self.prime, coeffs), j0))
    }

    /// Reduction of a norm-one element at a type 2 point.
    pub fn residue_type2(&self, u: &RationalFunction) -> Result<ResidueFraction> {
        let PointKind::Type2 { num, den } = self.kind else {
            return Err(Error::BadPoint("not a type 2 point".into()));
        };
        if self.log_norm(u)? != Exponent::zero() {
            return Err(Error::NonUnit(0));
        }
        let (rn, jn) = self.residue_poly(u.numer(), num, den)?;
        let (rd, jd) = self.residue_poly(u.denom(), num, den)?;
        let shift = (jn as i64 - jd as i64) / den;
        let mono = |k: i64| {
            let mut c = vec![0u64; k as usize + 1];
            c[k as usize] = 1;
            FpPoly::new(self.prime, c)
        };
        Ok(if shift >= 0 {
            ResidueFraction { num: rn.mul(&mono(shift)), den: rd }
        } else {
            ResidueFraction { num: rn, den: rd.mul(&mono(-shift)) }
        })
    }

    /// Lift of a polynomial in the residue generator to `Q(T)`.
    pub fn lift_residue_poly(&self, f: &FpPoly) -> Result<RationalFunction> {
        let g = self.residue_generator().ok_or_else(|| Error::BadPoint("not a type 2 point".into()))?;
        let mut acc = RationalFunction::zero();
        for c in f.coeffs.iter().rev() {
            acc = acc.mul(&g).add(&RationalFunction::constant(BigRational::from_integer(BigInt::from(*c))));
        }
        Ok(acc)
    }
}

impl FormField for PointField {
    type Elem = RationalFunction;

    fn rank(&self) -> usize {
        match self.kind {
            PointKind::Type2 { .. } => 1,
            PointKind::Type3 => 2,
        }
    }

    fn value_vector(&self, a: &RationalFunction) -> Result<ValueVector> {
        let v = self.log_norm(a)?;
        match self.kind {
            PointKind::Type2 { den, .. } => {
                let c = v.rat * den;
                if !c.is_integer() {
                    return Err(Error::OutsideSpan(v.to_string()));
                }
                Ok(ValueVector::new(vec![c]))
            }
            PointKind::Type3 => {
                let j = v.irr / self.log_radius.irr;
                let i = v.rat - j * self.log_radius.rat;
                if !j.is_integer() || !i.is_integer() {
                    return Err(Error::OutsideSpan(v.to_string()));
                }
                Ok(ValueVector::new(vec![i, j]))
            }
        }
    }

    fn basis(&self, i: usize) -> RationalFunction {
        match (self.kind, i) {
            (PointKind::Type2 { .. }, _) => {
                let (y, x) = self.uniformizer;
                let a = self.prime_element().pow(y).unwrap_or_else(|_| RationalFunction::one());
                let b = self.local_coordinate().pow(x).unwrap_or_else(|_| RationalFunction::one());
                a.mul(&b)
            }
            (PointKind::Type3, 0) => self.prime_element(),
            (PointKind::Type3, _) => self.local_coordinate(),
        }
    }

    fn one(&self) -> RationalFunction {
        RationalFunction::one()
    }

    fn mul(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.mul(b)
    }

    fn inv(&self, a: &RationalFunction) -> Result<RationalFunction> {
        a.inv()
    }

    fn is_zero(&self, a: &RationalFunction) -> bool {
        a.is_zero()
    }
}

/// An element `unit * prod pi_i^(value_i)` of a synthetic valued field of
/// rational rank `n`; the unit is a nonzero rational standing for a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialElement {
    pub unit: BigRational,
    pub value: ValueVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractField {
    pub n: usize,
}

impl FormField for AbstractField {
    type Elem = MonomialElement;

    fn rank(&self) -> usize {
        self.n
    }

    fn value_vector(&self, a: &MonomialElement) -> Result<ValueVector> {
        if a.value.rank() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: a.value.rank() });
        }
        if a.unit.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(a.value.clone())
    }

    fn basis(&self, i: usize) -> MonomialElement {
        let mut v = ValueVector::zero(self.n);
        v.0[i] = Q::from_integer(1);
        MonomialElement { unit: BigRational::one(), value: v }
    }

    fn one(&self) -> MonomialElement {
        MonomialElement { unit: BigRational::one(), value: ValueVector::zero(self.n) }
    }

    fn mul(&self, a: &MonomialElement, b: &MonomialElement) -> MonomialElement {
        MonomialElement { unit: &a.unit * &b.unit, value: a.value.add(&b.value) }
    }

    fn inv(&self, a: &MonomialElement) -> Result<MonomialElement> {
        if a.unit.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(MonomialElement { unit: BigRational::one() / &a.unit, value: a.value.scale(-1) })
    }

    fn is_zero(&self, a: &MonomialElement) -> bool {
        a.unit.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::q;
    use crate::padic::{big, ratio};

    #[test]
    fn type2_uniformizer_has_norm_one_over_den() {
        let f = PointField::new(3, big(0), Exponent::rational(q(2, 3))).unwrap();
        let pi = f.basis(0);
        assert_eq!(f.log_norm(&pi).unwrap(), Exponent::rational(q(1, 3)));
        assert_eq!(f.value_vector(&pi).unwrap(), ValueVector::from_integers(&[1]));
        let g = f.residue_generator().unwrap();
        assert_eq!(f.log_norm(&g).unwrap(), Exponent::zero());
    }

    #[test]
    fn type2_residues() {
        // At eta_{0, 3^-1}: t reduces T/3.
        let f = PointField::new(3, big(0), Exponent::integer(1)).unwrap();
        let u = RationalFunction::parse("(T^2 + 9)/(9 + 3*T)").unwrap();
        let r = f.residue_type2(&u).unwrap();
        assert_eq!(r.num, FpPoly::new(3, vec![1, 0, 1]));
        assert_eq!(r.den, FpPoly::new(3, vec![1, 1]));
        let u = RationalFunction::parse("T/3 + 2").unwrap();
        let r = f.residue_type2(&u).unwrap();
        assert_eq!(r.num, FpPoly::new(3, vec![2, 1]));
        let lifted = f.lift_residue_poly(&r.num).unwrap();
        assert_eq!(lifted, u);
    }

    #[test]
    fn type3_residue() {
        let e = Exponent::new(q(0, 1), q(1, 2));
        let f = PointField::new(5, big(0), e).unwrap();
        let u = RationalFunction::parse("(3 + 5*T)/(7 + T^4)").unwrap();
        assert_eq!(f.residue_type3(&u).unwrap(), 3 * 3 % 5);
    }

    #[test]
    fn type3_coordinates() {
        let e = Exponent::new(q(1, 2), q(1, 3));
        let f = PointField::new(5, ratio(1, 2), e).unwrap();
        let a = RationalFunction::parse("25*(T - 1/2)^3 + 7").unwrap();
        // min(2 + 3e, 0) = 0.
        assert_eq!(f.value_vector(&a).unwrap(), ValueVector::from_integers(&[0, 0]));
        let b = RationalFunction::parse("(2*T - 1)^2/5").unwrap();
        assert_eq!(f.value_vector(&b).unwrap(), ValueVector::from_integers(&[-1, 2]));
    }
}
