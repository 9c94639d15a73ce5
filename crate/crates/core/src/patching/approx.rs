use std::cmp::Ordering;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exponent::{q, Exponent};
use crate::magnitude::compare_norm_product;
use crate::series::AnnulusSeries;

use super::chart::{Chart, Constants};

/// `c = plus + minus` with `plus` in degrees `>= 0` (functions on the closed
/// disc) and `minus` in degrees `< 0` (functions on the outer piece,
/// vanishing at infinity).
#[derive(Clone, Debug)]
pub struct AnnulusSplit {
    pub plus: AnnulusSeries,
    pub minus: AnnulusSeries,
}

pub fn laurent_split(c: &AnnulusSeries) -> AnnulusSplit {
    let (plus, minus) = c.split();
    AnnulusSplit { plus, minus }
}

/// Valuation of the max norm of a vector, `None` when it vanishes.
pub fn vector_valuation(x: &[AnnulusSeries]) -> Option<Exponent> {
    x.iter().filter_map(|s| s.valuation()).min()
}

#[derive(Clone, Debug)]
pub struct PatchingProblem {
    pub chart: Chart,
    pub target: Vec<AnnulusSeries>,
    pub constants: Constants,
    /// Stop once the residual has at least this valuation.
    pub stop_valuation: Exponent,
    pub max_steps: usize,
}

impl PatchingProblem {
    /// A problem with the chart's constants, stopping at half the precision
    /// of the target's context.
    pub fn new(chart: Chart, target: Vec<AnnulusSeries>) -> Result<Self> {
        if target.len() != chart.dim() {
            return Err(Error::DimensionMismatch { expected: chart.dim(), found: target.len() });
        }
        let precision = target[0].context().precision;
        Ok(PatchingProblem {
            chart,
            target,
            constants: chart.constants(),
            stop_valuation: Exponent::rational(q(precision, 2)),
            max_steps: 256,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationStep {
    pub step: usize,
    pub u_valuation: Option<Exponent>,
    pub v_valuation: Option<Exponent>,
    /// Valuation of `max(|u_s - u_{s-1}|, |v_s - v_{s-1}|)`.
    pub increment_valuation: Option<Exponent>,
    pub residual_valuation: Option<Exponent>,
}

#[derive(Clone, Debug)]
pub struct ApproximationResult {
    pub u: Vec<AnnulusSeries>,
    pub v: Vec<AnnulusSeries>,
    pub trace: Vec<IterationStep>,
}

/// `p^(-val) <= prod r_i^(h_i)`; the zero norm always passes.
fn within(p: u64, val: &Option<Exponent>, factors: &[(BigRational, crate::exponent::Q)]) -> Result<bool> {
    match val {
        None => Ok(true),
        Some(e) => Ok(compare_norm_product(p, *e, factors)? != Ordering::Greater),
    }
}

fn show(v: &Option<Exponent>) -> String {
    v.map_or("zero".to_string(), |e| format!("p^-({})", e))
}

/// Solves `f(u, v) = a` with `u` on the disc side and `v` on the outer side
/// by splitting the residual degree-wise at every step, asserting the
/// three bounds of the iteration at every step.
pub fn successive_approximation(prob: &PatchingProblem) -> Result<ApproximationResult> {
    let chart = prob.chart;
    let ctx = prob.target[0].context().clone();
    let p = ctx.prime;
    let Constants { d, eps_prime, .. } = &prob.constants;
    let a_val = vector_valuation(&prob.target);
    if !within(p, &a_val, &[(d.clone(), q(1, 1)), (eps_prime.clone(), q(1, 1))])? {
        return Err(Error::OutsideRadius(format!("|a| = {} exceeds d * eps'", show(&a_val))));
    }
    let mut u = chart.zero(&ctx);
    let mut v = chart.zero(&ctx);
    let mut trace = Vec::new();
    let mut increment: Option<Exponent> = None;
    for step in 0..=prob.max_steps {
        let fx = chart.eval(&u, &v)?;
        let residual: Vec<AnnulusSeries> = prob.target.iter().zip(&fx).map(|(a, f)| a.sub(f)).collect();
        if u.iter().chain(&v).chain(&residual).any(|s| s.saturated()) {
            return Err(Error::WindowSaturated);
        }
        let rec = IterationStep {
            step,
            u_valuation: vector_valuation(&u),
            v_valuation: vector_valuation(&v),
            increment_valuation: increment,
            residual_valuation: vector_valuation(&residual),
        };
        let s = step as i64;
        let eps1 = [(eps_prime.clone(), q(1, 1))];
        if !within(p, &rec.u_valuation, &eps1)? || !within(p, &rec.v_valuation, &eps1)? {
            return Err(Error::BoundViolation {
                step,
                detail: format!("|u| = {}, |v| = {} exceed eps'", show(&rec.u_valuation), show(&rec.v_valuation)),
            });
        }
        if step > 0 && !within(p, &rec.increment_valuation, &[(eps_prime.clone(), q(s + 1, 2))])? {
            return Err(Error::BoundViolation {
                step,
                detail: format!("increment {} exceeds eps'^({}/2)", show(&rec.increment_valuation), s + 1),
            });
        }
        if !within(p, &rec.residual_valuation, &[(d.clone(), q(1, 1)), (eps_prime.clone(), q(s + 2, 2))])? {
            return Err(Error::BoundViolation {
                step,
                detail: format!("residual {} exceeds d * eps'^({}/2)", show(&rec.residual_valuation), s + 2),
            });
        }
        let done = rec.residual_valuation.is_none_or(|r| r >= prob.stop_valuation);
        trace.push(rec);
        if done {
            return Ok(ApproximationResult { u, v, trace });
        }
        let mut du = Vec::with_capacity(u.len());
        let mut dv = Vec::with_capacity(v.len());
        for r in &residual {
            let sp = laurent_split(r);
            du.push(sp.plus);
            dv.push(sp.minus);
        }
        increment = vector_valuation(&du).into_iter().chain(vector_valuation(&dv)).min();
        u = u.iter().zip(&du).map(|(x, y)| x.add(y)).collect();
        v = v.iter().zip(&dv).map(|(x, y)| x.add(y)).collect();
    }
    Err(Error::NoConvergence(prob.max_steps))
}

/// Whether the product of the split parts reproduces the target: the
/// valuation of `f(u, v) - a`.
pub fn residual_valuation(prob: &PatchingProblem, res: &ApproximationResult) -> Result<Option<Exponent>> {
    let fx = prob.chart.eval(&res.u, &res.v)?;
    let r: Vec<AnnulusSeries> = prob.target.iter().zip(&fx).map(|(a, f)| a.sub(f)).collect();
    Ok(vector_valuation(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::ratio;
    use crate::series::SeriesContext;

    fn ctx() -> crate::series::SeriesContext {
        SeriesContext::new(3, Exponent::new(q(0, 1), q(1, 4)), 64).unwrap()
    }

    #[test]
    fn split_examples() {
        let c = ctx();
        let s = laurent_split(&AnnulusSeries::parse(&c, "t^-1 + 5 + t").unwrap());
        assert_eq!(s.plus.to_string(), "5 + t");
        assert_eq!(s.minus.to_string(), "t^-1");
        let z = laurent_split(&AnnulusSeries::zero(&c));
        assert!(z.plus.is_zero() && z.minus.is_zero());
    }

    #[test]
    fn zero_target() {
        let c = ctx();
        let prob = PatchingProblem::new(Chart::Gl1, vec![AnnulusSeries::zero(&c)]).unwrap();
        let r = successive_approximation(&prob).unwrap();
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.trace[0].residual_valuation, None);
        assert!(r.u[0].is_zero() && r.v[0].is_zero());
    }

    #[test]
    fn additive_one_step() {
        let c = ctx();
        let a = AnnulusSeries::parse(&c, "27*t^-2 + 9 + 81*t^3").unwrap();
        let prob = PatchingProblem::new(Chart::Additive, vec![a.clone()]).unwrap();
        let r = successive_approximation(&prob).unwrap();
        assert_eq!(r.trace.len(), 2);
        let (plus, minus) = a.split();
        assert_eq!(r.u[0], plus);
        assert_eq!(r.v[0], minus);
    }

    #[test]
    fn multiplicative_chart() {
        let c = ctx();
        let a = AnnulusSeries::parse(&c, "27*t^-1 + 9*t + 18 - 81*t^-3").unwrap();
        let prob = PatchingProblem::new(Chart::Gl1, vec![a.clone()]).unwrap();
        let r = successive_approximation(&prob).unwrap();
        assert!(r.trace.len() > 2);
        let one = AnnulusSeries::one(&c);
        let lhs = one.add(&r.u[0]).mul(&one.add(&r.v[0]));
        let diff = lhs.sub(&one.add(&a));
        assert!(diff.valuation().is_none_or(|v| v >= Exponent::integer(32)));
        assert!(r.u[0].min_degree().is_none_or(|d| d >= 0));
        assert!(r.v[0].max_degree().is_none_or(|d| d < 0));
    }

    #[test]
    fn rejects_large_target() {
        let c = ctx();
        let a = AnnulusSeries::constant(&c, &ratio(3, 1));
        let prob = PatchingProblem::new(Chart::Gl1, vec![a]).unwrap();
        assert!(matches!(successive_approximation(&prob), Err(Error::OutsideRadius(_))));
    }

    #[test]
    fn constants_are_the_minimum() {
        let k = Chart::Sl2.constants();
        assert_eq!(k.eps_prime, ratio(1, 4));
        let k = Constants::new(ratio(2, 1), ratio(1, 2), ratio(1, 1)).unwrap();
        // min(1/4, (1/4)/16, 1/2)
        assert_eq!(k.eps_prime, ratio(1, 64));
        assert!(Constants::new(ratio(1, 2), ratio(1, 2), ratio(1, 1)).is_err());
    }
}
