use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exponent::{q, Exponent};

use super::approx::{successive_approximation, ApproximationResult, PatchingProblem};
use super::chart::Chart;
use super::matrix::Mat2;

/// Which side of the circle a factor lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Degrees `>= 0`: functions on the closed disc.
    Inner,
    /// Degrees `<= 0`: functions on the outer piece.
    Outer,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Inner => Side::Outer,
            Side::Outer => Side::Inner,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub g1: Mat2,
    pub g2: Mat2,
    /// Valuation of `g1 g2 - g`.
    pub residual_valuation: Option<Exponent>,
    pub solve: ApproximationResult,
}

fn check_det(g: &Mat2) -> Result<()> {
    let ctx = g.context();
    let one = crate::series::AnnulusSeries::one(ctx);
    let half = Exponent::rational(q(ctx.precision, 2));
    match g.det().sub(&one).valuation() {
        Some(v) if v < half => Err(Error::NonUnitDeterminant),
        _ => Ok(()),
    }
}

/// `g = g1 g2` with `g1` on the disc side and `g2 = I + (negative degrees)`
/// on the outer side, for `g` in `SL_2` near the identity.
pub fn factor_matrix(g: &Mat2) -> Result<Factorization> {
    check_det(g)?;
    let chart = Chart::Sl2;
    let prob = PatchingProblem::new(chart, chart.from_matrix(g))?;
    let solve = successive_approximation(&prob)?;
    let g1 = chart.to_matrix(&solve.u)?;
    let g2 = chart.to_matrix(&solve.v)?;
    let residual_valuation = g1.mul(&g2).sub(g).valuation();
    Ok(Factorization { g1, g2, residual_valuation, solve })
}

/// `g = f1 f2` with `f1` on `first` and `f2` on the other side.
pub fn factor_oriented(g: &Mat2, first: Side) -> Result<(Mat2, Mat2)> {
    match first {
        Side::Inner => {
            let f = factor_matrix(g)?;
            Ok((f.g1, f.g2))
        }
        Side::Outer => {
            // g^-1 = g1 g2 gives g = g2^-1 g1^-1.
            let f = factor_matrix(&g.adjugate())?;
            Ok((f.g2.adjugate(), f.g1.adjugate()))
        }
    }
}

/// Checks that `m` has support on `side` only, with an invertible constant
/// term matrix on the outer side.
pub fn supported_on(m: &Mat2, side: Side) -> bool {
    match side {
        Side::Inner => m.min_degree().is_none_or(|d| d >= 0),
        Side::Outer => {
            let c = m.constant_terms();
            let det = &c[0][0] * &c[1][1] - &c[0][1] * &c[1][0];
            m.max_degree().is_none_or(|d| d <= 0) && !det.is_zero() && {
                let p = m.context().prime;
                crate::padic::padic_valuation(&det, p).is_ok_and(|v| v == 0)
            }
        }
    }
}
