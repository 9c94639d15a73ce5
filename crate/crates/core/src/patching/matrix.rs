use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exponent::Exponent;
use crate::series::{AnnulusSeries, SeriesContext};

/// A 2x2 matrix of annulus series over one context.
#[derive(Clone, Debug)]
pub struct Mat2 {
    pub e: [[AnnulusSeries; 2]; 2],
}

impl Mat2 {
    pub fn new(a: AnnulusSeries, b: AnnulusSeries, c: AnnulusSeries, d: AnnulusSeries) -> Self {
        Mat2 { e: [[a, b], [c, d]] }
    }

    pub fn identity(ctx: &SeriesContext) -> Self {
        let one = AnnulusSeries::one(ctx);
        let zero = AnnulusSeries::zero(ctx);
        Mat2::new(one.clone(), zero.clone(), zero, one)
    }

    pub fn context(&self) -> &SeriesContext {
        self.e[0][0].context()
    }

    pub fn entries(&self) -> impl Iterator<Item = &AnnulusSeries> {
        self.e.iter().flatten()
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let m = |i: usize, j: usize| self.e[i][0].mul(&o.e[0][j]).add(&self.e[i][1].mul(&o.e[1][j]));
        Mat2::new(m(0, 0), m(0, 1), m(1, 0), m(1, 1))
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        let m = |i: usize, j: usize| self.e[i][j].sub(&o.e[i][j]);
        Mat2::new(m(0, 0), m(0, 1), m(1, 0), m(1, 1))
    }

    pub fn det(&self) -> AnnulusSeries {
        self.e[0][0].mul(&self.e[1][1]).sub(&self.e[0][1].mul(&self.e[1][0]))
    }

    /// The adjugate, which is the inverse when the determinant is 1.
    pub fn adjugate(&self) -> Mat2 {
        let [[a, b], [c, d]] = &self.e;
        Mat2::new(d.clone(), b.neg(), c.neg(), a.clone())
    }

    pub fn recontext(&self, ctx: &SeriesContext) -> Mat2 {
        let m = |i: usize, j: usize| self.e[i][j].recontext(ctx);
        Mat2::new(m(0, 0), m(0, 1), m(1, 0), m(1, 1))
    }

    pub fn saturated(&self) -> bool {
        self.entries().any(|s| s.saturated())
    }

    /// Valuation of `max |m_ij|`, `None` for the zero matrix.
    pub fn valuation(&self) -> Option<Exponent> {
        self.entries().filter_map(|s| s.valuation()).min()
    }

    /// Valuation of `self - I`.
    pub fn distance_to_identity(&self) -> Option<Exponent> {
        self.sub(&Mat2::identity(self.context())).valuation()
    }

    /// Valuation of `self - other`, after moving `other` to this context.
    pub fn distance(&self, other: &Mat2) -> Option<Exponent> {
        self.sub(&other.recontext(self.context())).valuation()
    }

    /// Matrix of constant terms.
    pub fn constant_terms(&self) -> [[BigRational; 2]; 2] {
        let c = |i: usize, j: usize| self.e[i][j].coefficient(0);
        [[c(0, 0), c(0, 1)], [c(1, 0), c(1, 1)]]
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.entries().filter_map(|s| s.min_degree()).min()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.entries().filter_map(|s| s.max_degree()).max()
    }

    pub fn is_identity(&self) -> bool {
        let c = self.constant_terms();
        self.entries().all(|s| s.terms().keys().all(|d| *d == 0))
            && c[0][0].is_one()
            && c[1][1].is_one()
            && c[0][1].is_zero()
            && c[1][0].is_zero()
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.e;
        write!(f, "[[{}, {}], [{}, {}]]", a, b, c, d)
    }
}
