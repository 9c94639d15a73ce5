use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::series::{AnnulusSeries, SeriesContext};

use super::matrix::Mat2;

/// The constants of the successive approximation: coefficient growth `M`,
/// splitting constant `d`, domain radius `delta`, and the iteration scale
/// `eps_prime = min(1/(2M), d^2/M^4, delta/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constants {
    pub m: BigRational,
    pub d: BigRational,
    pub delta: BigRational,
    pub eps_prime: BigRational,
}

impl Constants {
    pub fn new(m: BigRational, d: BigRational, delta: BigRational) -> Result<Self> {
        let zero = BigRational::from_integer(BigInt::from(0));
        if m < BigRational::one() || d <= zero || d >= BigRational::one() || delta <= zero {
            return Err(Error::BadDomain("need M >= 1, 0 < d < 1 and delta > 0".into()));
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let a = BigRational::one() / (&two * &m);
        let b = &d * &d / num_traits::pow(m.clone(), 4);
        let c = &delta / &two;
        let eps_prime = a.min(b).min(c);
        Ok(Constants { m, d, delta, eps_prime })
    }
}

/// A group law near the identity in coordinates with `f(x, 0) = f(0, x) = x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    /// The additive group through `[[1, x], [0, 1]]`: `f(x, y) = x + y`.
    Additive,
    /// `GL_1` through `g = 1 + x`: `f(x, y) = x + y + xy`.
    Gl1,
    /// `SL_2` through `g = [[1 + x1, x2], [x3, (1 + x2 x3)/(1 + x1)]]`.
    Sl2,
}

impl Chart {
    pub fn dim(self) -> usize {
        match self {
            Chart::Additive | Chart::Gl1 => 1,
            Chart::Sl2 => 3,
        }
    }

    /// Every coefficient of these laws (including the expansion of
    /// `1/(1 + x1)`) is `0` or `+-1`, so `M = 1`; the laws converge on the
    /// open unit polydisc, so `delta = 1`; the degree split has `d` as close
    /// to 1 as wanted and `1/2` is used.
    pub fn constants(self) -> Constants {
        let one = BigRational::one();
        Constants::new(one.clone(), BigRational::new(1.into(), 2.into()), one).expect("valid chart constants")
    }

    pub fn to_matrix(self, x: &[AnnulusSeries]) -> Result<Mat2> {
        self.check(x)?;
        let ctx = x[0].context();
        let one = AnnulusSeries::one(ctx);
        Ok(match self {
            Chart::Additive => Mat2::new(one.clone(), x[0].clone(), AnnulusSeries::zero(ctx), one),
            Chart::Gl1 => {
                let zero = AnnulusSeries::zero(ctx);
                Mat2::new(one.add(&x[0]), zero.clone(), zero, one)
            }
            Chart::Sl2 => {
                let a = one.add(&x[0]);
                let d = one.add(&x[1].mul(&x[2])).mul(&a.inverse()?);
                Mat2::new(a, x[1].clone(), x[2].clone(), d)
            }
        })
    }

    pub fn from_matrix(self, g: &Mat2) -> Vec<AnnulusSeries> {
        let one = AnnulusSeries::one(g.context());
        match self {
            Chart::Additive => vec![g.e[0][1].clone()],
            Chart::Gl1 => vec![g.e[0][0].sub(&one)],
            Chart::Sl2 => vec![g.e[0][0].sub(&one), g.e[0][1].clone(), g.e[1][0].clone()],
        }
    }

    /// `f(x, y)`: coordinates of the product of the two group elements.
    pub fn eval(self, x: &[AnnulusSeries], y: &[AnnulusSeries]) -> Result<Vec<AnnulusSeries>> {
        match self {
            Chart::Additive => {
                self.check(x)?;
                self.check(y)?;
                Ok(vec![x[0].add(&y[0])])
            }
            Chart::Gl1 => {
                self.check(x)?;
                self.check(y)?;
                Ok(vec![x[0].add(&y[0]).add(&x[0].mul(&y[0]))])
            }
            Chart::Sl2 => Ok(self.from_matrix(&self.to_matrix(x)?.mul(&self.to_matrix(y)?))),
        }
    }

    pub fn zero(self, ctx: &SeriesContext) -> Vec<AnnulusSeries> {
        vec![AnnulusSeries::zero(ctx); self.dim()]
    }

    fn check(self, x: &[AnnulusSeries]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        Ok(())
    }
}
