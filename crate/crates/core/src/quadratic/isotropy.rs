//! Isotropy decisions over finite fields, `Q_p`, and the completed residue
//! fields at points of the line over `Q_p`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::finite_field::{isotropic_finite_field, FiniteField, FpPoly};
use crate::padic::{check_prime, hensel_sqrt, padic_valuation, pow_p, rational_sqrt, residue_mod, unit_part};
use crate::poly::RationalFunction;
use crate::quadratic::bounds::{u_bound, FieldProfile};
use crate::quadratic::decomposition::{unit_block_decomposition, BlockDecomposition, DecompositionMode};
use crate::quadratic::fields::{PointField, PointKind, ResidueFraction};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Isotropic,
    Anisotropic,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Isotropic => "isotropic",
            Verdict::Anisotropic => "anisotropic",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// The form vanishes exactly at the witness.
    Exact,
    /// The form has valuation at least `residual_valuation` at the witness
    /// and a coordinate with a unit partial derivative, so a true zero
    /// exists nearby.
    Approximate { residual_valuation: Exponent },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness<E> {
    pub coords: Vec<E>,
    pub kind: WitnessKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub stage: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsotropyCertificate<E> {
    pub verdict: Verdict,
    pub witness: Option<Witness<E>>,
    /// Isotropy asserted by a dimension argument without an explicit zero.
    pub guaranteed_without_witness: bool,
    pub trace: Vec<TraceStep>,
}

impl<E> IsotropyCertificate<E> {
    fn new(verdict: Verdict, witness: Option<Witness<E>>, trace: Vec<TraceStep>) -> Self {
        IsotropyCertificate { verdict, witness, guaranteed_without_witness: false, trace }
    }
}

fn step(stage: &'static str, detail: impl Into<String>) -> TraceStep {
    TraceStep { stage, detail: detail.into() }
}

/// Indices of zero coefficients (a totally isotropic part) and of the
/// regular part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittSplit {
    pub isotropic: Vec<usize>,
    pub regular: Vec<usize>,
}

pub fn witt_split_trivial<E>(coeffs: &[E], is_zero: impl Fn(&E) -> bool) -> WittSplit {
    let (isotropic, regular) = (0..coeffs.len()).partition(|i| is_zero(&coeffs[*i]));
    WittSplit { isotropic, regular }
}

/// `a = p^parity * unit * square^2` for a coefficient of a form over `Q_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpringerMember {
    pub index: usize,
    pub unit: BigRational,
    pub square: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpringerSplit {
    /// Coefficients of even valuation.
    pub q1: Vec<SpringerMember>,
    /// Coefficients of odd valuation, after removing one factor `p`.
    pub q2: Vec<SpringerMember>,
}

pub fn springer_split(coeffs: &[BigRational], p: u64) -> Result<SpringerSplit> {
    check_prime(p)?;
    let mut split = SpringerSplit { q1: vec![], q2: vec![] };
    for (index, a) in coeffs.iter().enumerate() {
        let (v, unit) = unit_part(a, p)?;
        let half = v.div_euclid(2);
        let member = SpringerMember { index, unit, square: pow_p(p, half) };
        if v.rem_euclid(2) == 0 {
            split.q1.push(member);
        } else {
            split.q2.push(member);
        }
    }
    Ok(split)
}

pub fn evaluate_rational_form(coeffs: &[BigRational], x: &[BigRational]) -> BigRational {
    coeffs.iter().zip(x).fold(BigRational::zero(), |acc, (a, xi)| acc + a * xi * xi)
}

fn unit_vector<E: Clone>(n: usize, i: usize, zero: E, one: E) -> Vec<E> {
    (0..n).map(|j| if i == j { one.clone() } else { zero.clone() }).collect()
}

/// Lifts a residue zero of a unit form `<u_1, ..., u_k>` over `Q_p` to a
/// zero modulo `p^(2 * lift_precision)`, exactly when the needed square root
/// is rational.
fn lift_padic(units: &[BigRational], residue: &[u32], p: u64, lift_precision: u32) -> Result<(Vec<BigRational>, bool)> {
    let pivot = residue.iter().position(|x| *x != 0).ok_or(Error::ZeroInput)?;
    let mut x: Vec<BigRational> = residue.iter().map(|r| BigRational::from_integer(BigInt::from(*r))).collect();
    let mut rest = BigRational::zero();
    for (j, u) in units.iter().enumerate() {
        if j != pivot {
            rest += u * &x[j] * &x[j];
        }
    }
    let target = -rest / &units[pivot];
    if target.is_zero() {
        // Only possible when every other coordinate vanishes, contradicting
        // a nonzero residue at the pivot.
        return Err(Error::ZeroInput);
    }
    if let Some(r) = rational_sqrt(&target) {
        x[pivot] = r;
        return Ok((x, true));
    }
    let s = hensel_sqrt(&target, p, 2 * lift_precision)?.ok_or(Error::NonUnit(0))?;
    x[pivot] = BigRational::from_integer(s);
    Ok((x, false))
}

/// Decides isotropy over `Q_p` by splitting into two unit forms and
/// deciding their residue forms over `F_p`; residue zeros are lifted.
pub fn isotropic_padic(coeffs: &[BigRational], p: u64, lift_precision: u32) -> Result<IsotropyCertificate<BigRational>> {
    check_prime(p)?;
    let n = coeffs.len();
    let mut trace = Vec::new();
    let witt = witt_split_trivial(coeffs, |a| a.is_zero());
    if let Some(&i) = witt.isotropic.first() {
        trace.push(step("witt_split", format!("zero coefficients at {:?}", witt.isotropic)));
        let w = unit_vector(n, i, BigRational::zero(), BigRational::one());
        return Ok(IsotropyCertificate::new(
            Verdict::Isotropic,
            Some(Witness { coords: w, kind: WitnessKind::Exact }),
            trace,
        ));
    }
    let split = springer_split(coeffs, p)?;
    trace.push(step(
        "springer_split",
        format!("even valuations {:?}, odd valuations {:?}",
            split.q1.iter().map(|m| m.index).collect::<Vec<_>>(),
            split.q2.iter().map(|m| m.index).collect::<Vec<_>>()),
    ));
    let field = FiniteField::new(p)?;
    let pb = BigInt::from(p);
    for (label, block) in [("q1", &split.q1), ("q2", &split.q2)] {
        if block.is_empty() {
            continue;
        }
        let residues: Vec<u32> = block
            .iter()
            .map(|m| residue_mod(&m.unit, &pb).map(|r| r.to_u32().unwrap_or(0)))
            .collect::<Result<_>>()?;
        trace.push(step("residue_form", format!("{}: {:?} over F_{}", label, residues, p)));
        let res = isotropic_finite_field(&field, &residues)?;
        let Some(rw) = res.witness else { continue };
        trace.push(step("residue_witness", format!("{}: {:?}", label, rw)));
        let units: Vec<BigRational> = block.iter().map(|m| m.unit.clone()).collect();
        let (lifted, exact) = lift_padic(&units, &rw, p, lift_precision)?;
        let mut x = vec![BigRational::zero(); n];
        for (m, xi) in block.iter().zip(lifted) {
            x[m.index] = xi / &m.square;
        }
        let value = evaluate_rational_form(coeffs, &x);
        let kind = if value.is_zero() {
            WitnessKind::Exact
        } else {
            let v = padic_valuation(&value, p)?;
            trace.push(step("hensel_lift", format!("lifted modulo p^{}, residual valuation {}", 2 * lift_precision, v)));
            WitnessKind::Approximate { residual_valuation: Exponent::integer(v) }
        };
        if exact {
            trace.push(step("hensel_lift", "square root is rational"));
        }
        return Ok(IsotropyCertificate::new(Verdict::Isotropic, Some(Witness { coords: x, kind }), trace));
    }
    trace.push(step("springer_split", "both residue forms anisotropic"));
    Ok(IsotropyCertificate::new(Verdict::Anisotropic, None, trace))
}

/// Bounds for the residue-field search over `F_p(t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_degree: usize,
    pub budget: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_degree: 8, budget: 20_000 }
    }
}

/// Searches a zero of `sum c_j Y_j^2` over `F_p[t]` with polynomial
/// coefficients. Returns the polynomial witness.
fn search_function_field(c: &[FpPoly], p: u64, limits: SearchLimits) -> Option<Vec<FpPoly>> {
    let k = c.len();
    if k < 2 {
        return None;
    }
    let last = &c[k - 1];
    let try_candidate = |ys: &[FpPoly]| -> Option<Vec<FpPoly>> {
        let mut s = FpPoly::zero(p);
        for (cj, y) in c.iter().zip(ys) {
            s = s.add(&cj.mul(&y.mul(y)));
        }
        let rhs = s.neg().mul(last);
        if ys.iter().all(|y| y.is_zero()) {
            return None;
        }
        let g = rhs.sqrt()?;
        let mut out: Vec<FpPoly> = ys.iter().map(|y| y.mul(last)).collect();
        out.push(g);
        Some(out)
    };
    if k == 2 {
        return try_candidate(&[FpPoly::constant(p, 1)]);
    }
    let free = k - 1;
    let mut spent = 0u64;
    for deg in 0..=limits.max_degree {
        let digits = free * (deg + 1);
        let total = (p as u128).checked_pow(digits as u32).unwrap_or(u128::MAX);
        let mut idx: u128 = 1;
        while idx < total {
            if spent >= limits.budget {
                return None;
            }
            spent += 1;
            let mut rem = idx;
            let ys: Vec<FpPoly> = (0..free)
                .map(|_| {
                    let cs: Vec<u64> = (0..=deg)
                        .map(|_| {
                            let d = (rem % p as u128) as u64;
                            rem /= p as u128;
                            d
                        })
                        .collect();
                    FpPoly::new(p, cs)
                })
                .collect();
            idx += 1;
            if ys.iter().all(|y| y.degree().is_none_or(|d| d < deg)) && deg > 0 {
                continue;
            }
            if let Some(w) = try_candidate(&ys) {
                return Some(w);
            }
        }
    }
    None
}

/// Local isotropy at the point `eta_{c, p^(-e)}` (type 1 when `log_radius`
/// is `None`) of the line over `Q_p`.
pub fn local_isotropy_at_point(
    coeffs: &[RationalFunction],
    p: u64,
    center: &BigRational,
    log_radius: Option<Exponent>,
    profile: &FieldProfile,
    limits: SearchLimits,
) -> Result<IsotropyCertificate<RationalFunction>> {
    check_prime(p)?;
    let n = coeffs.len();
    let mut trace = Vec::new();
    let witt = witt_split_trivial(coeffs, |a| a.is_zero());
    if let Some(&i) = witt.isotropic.first() {
        trace.push(step("witt_split", format!("zero coefficients at {:?}", witt.isotropic)));
        let w = unit_vector(n, i, RationalFunction::zero(), RationalFunction::one());
        return Ok(IsotropyCertificate::new(
            Verdict::Isotropic,
            Some(Witness { coords: w, kind: WitnessKind::Exact }),
            trace,
        ));
    }
    let Some(e) = log_radius else {
        let values = coeffs
            .iter()
            .map(|f| f.eval(center).ok_or_else(|| Error::BadPoint(format!("pole of {} at {}", f, center))))
            .collect::<Result<Vec<_>>>()?;
        trace.push(step("specialize", format!("rigid point {}", center)));
        let cert = isotropic_padic(&values, p, 16)?;
        trace.extend(cert.trace);
        let witness = cert.witness.map(|w| Witness {
            coords: w.coords.into_iter().map(RationalFunction::constant).collect(),
            kind: w.kind,
        });
        return Ok(IsotropyCertificate::new(cert.verdict, witness, trace));
    };
    let field = PointField::new(p, center.clone(), e)?;
    let dec = unit_block_decomposition(&field, coeffs, DecompositionMode::Free)?;
    let threshold = u_bound(profile)?.function_field_bound;
    trace.push(step(
        "blocks",
        format!("{} blocks of dimensions {:?}; bound {}", dec.blocks.len(),
            dec.blocks.iter().map(|b| b.members.len()).collect::<Vec<_>>(), threshold),
    ));
    let mut guaranteed = n as u64 > threshold;
    let mut found = None;
    for (bi, block) in dec.blocks.iter().enumerate() {
        let units = block.unit_form();
        let attempt = match field.kind {
            PointKind::Type3 => residue_zero_type3(&field, &units, &mut trace)?,
            PointKind::Type2 { .. } => {
                if units.len() >= 5 {
                    guaranteed = true;
                }
                residue_zero_type2(&field, &units, limits, &mut trace)?
            }
        };
        if let Some(xs) = attempt {
            trace.push(step("block_chosen", format!("block {}", bi)));
            found = Some(map_back(&field, coeffs, &dec, bi, xs)?);
            break;
        }
    }
    if let Some(w) = found {
        return Ok(IsotropyCertificate::new(Verdict::Isotropic, Some(w), trace));
    }
    if n <= 2 {
        // A binary form is isotropic iff -a_1 a_2 is a square, which over a
        // complete field is decided by the value class and the residue.
        trace.push(step("square_class", "-det is not a square"));
        return Ok(IsotropyCertificate::new(Verdict::Anisotropic, None, trace));
    }
    if guaranteed {
        trace.push(step("dimension_bound", format!("dimension {} or a residue block of dimension at least 5 forces isotropy", n)));
        let mut cert = IsotropyCertificate::new(Verdict::Isotropic, None, trace);
        cert.guaranteed_without_witness = true;
        return Ok(cert);
    }
    trace.push(step("oracle", "no residue witness found below the dimension bound"));
    Ok(IsotropyCertificate::new(Verdict::Inconclusive, None, trace))
}

fn residue_zero_type3(
    field: &PointField,
    units: &[RationalFunction],
    trace: &mut Vec<TraceStep>,
) -> Result<Option<Vec<RationalFunction>>> {
    let p = field.prime;
    let ff = FiniteField::new(p)?;
    let residues: Vec<u32> = units.iter().map(|u| field.residue_type3(u).map(|r| r as u32)).collect::<Result<_>>()?;
    trace.push(step("residue_form", format!("{:?} over F_{}", residues, p)));
    let res = isotropic_finite_field(&ff, &residues)?;
    Ok(res.witness.map(|w| {
        trace.push(step("residue_witness", format!("{:?}", w)));
        w.into_iter()
            .map(|x| RationalFunction::constant(BigRational::from_integer(BigInt::from(x))))
            .collect()
    }))
}

fn residue_zero_type2(
    field: &PointField,
    units: &[RationalFunction],
    limits: SearchLimits,
    trace: &mut Vec<TraceStep>,
) -> Result<Option<Vec<RationalFunction>>> {
    let p = field.prime;
    let residues: Vec<ResidueFraction> = units.iter().map(|u| field.residue_type2(u)).collect::<Result<_>>()?;
    // u = N/D is N*D times the square 1/D^2: search with coefficients N*D
    // and recover X = Y * D.
    let polys: Vec<FpPoly> = residues.iter().map(|r| r.num.mul(&r.den)).collect();
    trace.push(step(
        "residue_form",
        format!("{:?} over F_{}(t)", polys.iter().map(|c| c.coeffs.clone()).collect::<Vec<_>>(), p),
    ));
    let Some(ys) = search_function_field(&polys, p, limits) else {
        return Ok(None);
    };
    trace.push(step("residue_witness", format!("{:?}", ys.iter().map(|y| y.coeffs.clone()).collect::<Vec<_>>())));
    let xs = ys
        .iter()
        .zip(&residues)
        .map(|(y, r)| field.lift_residue_poly(&y.mul(&r.den)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(xs))
}

/// Turns a residue-level zero `X` of block `bi` into a vector for the
/// original form via `x_j = X_j / s_j`, and records its residual.
fn map_back(
    field: &PointField,
    coeffs: &[RationalFunction],
    dec: &BlockDecomposition<RationalFunction>,
    bi: usize,
    xs: Vec<RationalFunction>,
) -> Result<Witness<RationalFunction>> {
    let block = &dec.blocks[bi];
    let mut x = vec![RationalFunction::zero(); coeffs.len()];
    for (m, xi) in block.members.iter().zip(xs) {
        x[m.index] = xi.div(&m.square)?;
    }
    let value = coeffs
        .iter()
        .zip(&x)
        .fold(RationalFunction::zero(), |acc, (a, xi)| acc.add(&a.mul(&xi.mul(xi))));
    if value.is_zero() {
        return Ok(Witness { coords: x, kind: WitnessKind::Exact });
    }
    let relative = field.log_norm(&value)? - field.log_norm(&block.scale)?;
    if relative <= Exponent::zero() {
        return Err(Error::BadPoint("lifted residue witness does not reduce to zero".into()));
    }
    Ok(Witness { coords: x, kind: WitnessKind::Approximate { residual_valuation: relative } })
}

/// Checks a witness over `Q_p` against the stated kind without searching.
pub fn verify_padic_witness(coeffs: &[BigRational], p: u64, w: &Witness<BigRational>, min_valuation: i64) -> Result<bool> {
    if w.coords.len() != coeffs.len() || w.coords.iter().all(|x| x.is_zero()) {
        return Ok(false);
    }
    let value = evaluate_rational_form(coeffs, &w.coords);
    Ok(match w.kind {
        WitnessKind::Exact => value.is_zero(),
        WitnessKind::Approximate { .. } => value.is_zero() || padic_valuation(&value, p)? >= min_valuation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::ratio;
    use proptest::prelude::*;

    fn qs(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|a| ratio(*a, 1)).collect()
    }

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse(s).unwrap()
    }

    /// Isotropy over `Q_p` by counting: after scaling coefficients to
    /// valuation 0 or 1, the form is isotropic iff it has a primitive zero
    /// modulo `p^2`.
    fn brute_isotropic(coeffs: &[i64], p: i64) -> bool {
        if coeffs.contains(&0) {
            return true;
        }
        let m = p * p;
        let norm: Vec<i64> = coeffs
            .iter()
            .map(|a| {
                let mut a = *a;
                while a % (p * p) == 0 {
                    a /= p * p;
                }
                a.rem_euclid(m)
            })
            .collect();
        let k = norm.len();
        let mut x = vec![0i64; k];
        loop {
            let mut i = 0;
            while i < k {
                x[i] += 1;
                if x[i] < m {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
            if i == k {
                return false;
            }
            if x.iter().all(|v| v % p == 0) {
                continue;
            }
            let s: i64 = norm.iter().zip(&x).map(|(a, v)| a * v % m * v).sum();
            if s.rem_euclid(m) == 0 {
                return true;
            }
        }
    }

    #[test]
    fn witt_split_examples() {
        let z = |v: &[i64]| witt_split_trivial(v, |a| *a == 0);
        assert_eq!(z(&[1, 0, 2]), WittSplit { isotropic: vec![1], regular: vec![0, 2] });
        assert_eq!(z(&[1, 2]), WittSplit { isotropic: vec![], regular: vec![0, 1] });
        assert_eq!(z(&[0, 0, 5]), WittSplit { isotropic: vec![0, 1], regular: vec![2] });
    }

    #[test]
    fn springer_examples() {
        let s = springer_split(&qs(&[2, 3]), 5).unwrap();
        assert_eq!((s.q1.len(), s.q2.len()), (2, 0));
        let s = springer_split(&qs(&[5]), 5).unwrap();
        assert_eq!(s.q2, vec![SpringerMember { index: 0, unit: ratio(1, 1), square: ratio(1, 1) }]);
        let s = springer_split(&qs(&[1, 3, -1]), 3).unwrap();
        assert_eq!(s.q1.iter().map(|m| m.index).collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(s.q2.iter().map(|m| m.index).collect::<Vec<_>>(), vec![1]);
        // Re-multiply: a = p^parity * u * s^2.
        for (parity, block) in [(0, &s.q1), (1, &s.q2)] {
            for m in block.iter() {
                let a = ratio([1, 3, -1][m.index], 1);
                assert_eq!(a, pow_p(3, parity) * &m.unit * &m.square * &m.square);
            }
        }
    }

    #[test]
    fn padic_examples() {
        let c = isotropic_padic(&qs(&[1, -1]), 5, 8).unwrap();
        assert_eq!(c.verdict, Verdict::Isotropic);
        assert_eq!(c.witness.unwrap().kind, WitnessKind::Exact);
        let c = isotropic_padic(&qs(&[1, -2, 5, -10]), 5, 8).unwrap();
        assert_eq!(c.verdict, Verdict::Anisotropic);
        assert!(c.witness.is_none());
        let c = isotropic_padic(&qs(&[1, 1, 3, 3, 9]), 3, 8).unwrap();
        assert_eq!(c.verdict, Verdict::Isotropic);
        assert!(verify_padic_witness(&qs(&[1, 1, 3, 3, 9]), 3, c.witness.as_ref().unwrap(), 16).unwrap());
        let stages: Vec<_> = c.trace.iter().map(|t| t.stage).collect();
        assert!(stages.contains(&"springer_split") && stages.contains(&"residue_witness"));
    }

    #[test]
    fn padic_approximate_witness() {
        // -2 is not a rational square, so the zero of <1, 2> over Q_3 is
        // only approximate.
        let c = isotropic_padic(&qs(&[1, 2]), 3, 10).unwrap();
        let w = c.witness.unwrap();
        match &w.kind {
            WitnessKind::Approximate { residual_valuation } => assert!(*residual_valuation >= Exponent::integer(20)),
            k => panic!("{:?}", k),
        }
        assert!(verify_padic_witness(&qs(&[1, 2]), 3, &w, 20).unwrap());
    }

    #[test]
    fn padic_matches_brute_force_exhaustive_small() {
        let vals = [1, 2, 3, 6, -1, 9, 18];
        for a in vals {
            for b in vals {
                for c in vals {
                    let q = [a, b, c];
                    let got = isotropic_padic(&qs(&q), 3, 6).unwrap().verdict == Verdict::Isotropic;
                    assert_eq!(got, brute_isotropic(&q, 3), "{:?}", q);
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn padic_matches_brute_force(p in prop::sample::select(vec![3i64, 5]),
                                     q in prop::collection::vec(-30i64..30, 1..=4)) {
            prop_assume!(p == 3 || q.len() <= 3);
            let cert = isotropic_padic(&qs(&q), p as u64, 6).unwrap();
            prop_assert_eq!(cert.verdict == Verdict::Isotropic, brute_isotropic(&q, p));
            if let Some(w) = &cert.witness {
                prop_assert!(verify_padic_witness(&qs(&q), p as u64, w, 12).unwrap());
            }
        }

        #[test]
        fn padic_monotone(q in prop::collection::vec(-50i64..50, 1..=4), c in -50i64..50) {
            let base = isotropic_padic(&qs(&q), 5, 6).unwrap();
            let mut q2 = q.clone();
            q2.push(c);
            let ext = isotropic_padic(&qs(&q2), 5, 6).unwrap();
            if base.verdict == Verdict::Isotropic {
                prop_assert_eq!(ext.verdict, Verdict::Isotropic);
            }
        }

        #[test]
        fn padic_dimension_five(q in prop::collection::vec((1i64..40, 0u32..3), 5)) {
            let coeffs: Vec<i64> = q.iter().map(|(a, k)| a * 3i64.pow(*k)).collect();
            prop_assert_eq!(isotropic_padic(&qs(&coeffs), 3, 6).unwrap().verdict, Verdict::Isotropic);
        }
    }

    #[test]
    fn type2_dimension_nine() {
        let q: Vec<RationalFunction> =
            ["1", "T", "3", "3*T", "1+T", "T^2+3", "2", "7*T", "1/(T-1)"].iter().map(|s| rf(s)).collect();
        let c = local_isotropy_at_point(&q, 3, &ratio(0, 1), Some(Exponent::integer(1)), &FieldProfile::padic(), SearchLimits::default())
            .unwrap();
        assert_eq!(c.verdict, Verdict::Isotropic);
    }

    #[test]
    fn hyperbolic_plane_everywhere() {
        let q = vec![rf("1"), rf("-1")];
        for r in [None, Some(Exponent::integer(0)), Some(Exponent::integer(2)), Some(Exponent::new(q_(0), q_(1)))] {
            let c = local_isotropy_at_point(&q, 5, &ratio(1, 2), r, &FieldProfile::padic(), SearchLimits::default())
                .unwrap();
            assert_eq!(c.verdict, Verdict::Isotropic);
            assert!(c.witness.is_some());
        }
    }

    fn q_(n: i64) -> crate::exponent::Q {
        crate::exponent::Q::from_integer(n)
    }

    #[test]
    fn type3_four_classes_inconclusive() {
        let q = vec![rf("1"), rf("3"), rf("T"), rf("3*T")];
        let r = Exponent::new(q_(0), q_(1));
        let c = local_isotropy_at_point(&q, 3, &ratio(0, 1), Some(r), &FieldProfile::padic(), SearchLimits::default())
            .unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert!(c.trace.iter().any(|t| t.stage == "blocks" && t.detail.contains("[1, 1, 1, 1]")));
    }

    #[test]
    fn type3_residue_witness() {
        // Blocks (1)<1, 2> and (T)<1>; the first has residue form <1, 2>
        // over F_3.
        let q = vec![rf("T+1"), rf("2*T+2"), rf("T")];
        let r = Exponent::new(q_(0), q_(1));
        let c = local_isotropy_at_point(&q, 3, &ratio(0, 1), Some(r), &FieldProfile::padic(), SearchLimits::default())
            .unwrap();
        assert_eq!(c.verdict, Verdict::Isotropic);
        assert!(c.witness.is_some());
    }

    #[test]
    fn type2_residue_witness_lifts() {
        // At |T| = 1 the residue form of <1, T, -(1+T)> is <1, t, -(1+t)>
        // over F_5(t), with the zero (1, 1, 1).
        let q = vec![rf("1"), rf("T"), rf("-(1+T)")];
        let c = local_isotropy_at_point(&q, 5, &ratio(0, 1), Some(Exponent::integer(0)), &FieldProfile::padic(), SearchLimits::default())
            .unwrap();
        assert_eq!(c.verdict, Verdict::Isotropic);
        let w = c.witness.unwrap();
        assert!(matches!(w.kind, WitnessKind::Exact | WitnessKind::Approximate { .. }));
    }

    #[test]
    fn type2_binary_anisotropic() {
        // t is not a square in F_3(t).
        let q = vec![rf("1"), rf("-T")];
        let c = local_isotropy_at_point(&q, 3, &ratio(0, 1), Some(Exponent::integer(0)), &FieldProfile::padic(), SearchLimits::default())
            .unwrap();
        assert_eq!(c.verdict, Verdict::Anisotropic);
        let q = vec![rf("1"), rf("-T^2")];
        let c = local_isotropy_at_point(&q, 3, &ratio(0, 1), Some(Exponent::integer(0)), &FieldProfile::padic(), SearchLimits::default())
            .unwrap();
        assert_eq!(c.verdict, Verdict::Isotropic);
    }

    #[test]
    fn rigid_point_specializes() {
        let q = vec![rf("T"), rf("1")];
        // At T = -1 the form is <-1, 1>.
        let c = local_isotropy_at_point(&q, 7, &ratio(-1, 1), None, &FieldProfile::padic(), SearchLimits::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Isotropic);
        // At T = 1 over Q_7, -1 is a non-residue.
        let c = local_isotropy_at_point(&q, 7, &ratio(1, 1), None, &FieldProfile::padic(), SearchLimits::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Anisotropic);
    }
}
