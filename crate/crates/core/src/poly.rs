//! Polynomials and rational functions over `Q` in the variable `T`, with
//! generalized Gauss norms at points of the Berkovich line.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::padic::padic_valuation;

/// Dense polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    pub fn constant(c: BigRational) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn one() -> Self {
        Polynomial::constant(BigRational::one())
    }

    /// The variable `T`.
    pub fn t() -> Self {
        Polynomial::new(vec![BigRational::zero(), BigRational::one()])
    }

    /// `T - c`.
    pub fn linear(c: &BigRational) -> Self {
        Polynomial::new(vec![-c.clone(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = BigRational::zero();
        Polynomial::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &BigRational) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut r = Polynomial::one();
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn div_rem(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = &rem[top] / &lead;
            if !c.is_zero() {
                for (j, b) in d.coeffs.iter().enumerate() {
                    rem[top - dd + j] -= &c * b;
                }
                quot[top - dd] = c;
            }
            rem.pop();
        }
        Ok((Polynomial::new(quot), Polynomial::new(rem)))
    }

    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        self.scale(&(BigRational::one() / self.leading()))
    }

    pub fn gcd(&self, o: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).map(|(_, r)| r).unwrap_or_default();
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Coefficients `b_j` with `P(T) = sum b_j (T - c)^j`.
    pub fn taylor_at(&self, c: &BigRational) -> Vec<BigRational> {
        let shift = Polynomial::new(vec![c.clone(), BigRational::one()]);
        let mut acc = Polynomial::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc.mul(&shift).add(&Polynomial::constant(a.clone()));
        }
        acc.coeffs
    }

    /// `min_j v_p(b_j) + j*e` over the expansion at `c`: the valuation of the
    /// Gauss norm on the disc of radius `p^(-e)` about `c`.
    pub fn valuation_at(&self, p: u64, c: &BigRational, e: Exponent) -> Result<Exponent> {
        let mut best: Option<Exponent> = None;
        for (j, b) in self.taylor_at(c).iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let v = Exponent::integer(padic_valuation(b, p)?) + e * j as i64;
            best = Some(best.map_or(v, |x| x.min(v)));
        }
        best.ok_or(Error::ZeroInput)
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            let var = match i {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{}", i),
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

/// Reduced quotient of polynomials with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunction::zero());
        }
        let g = num.gcd(&den);
        let (n, _) = num.div_rem(&g)?;
        let (d, _) = den.div_rem(&g)?;
        let lead = d.leading();
        Ok(RationalFunction { num: n.scale(&(BigRational::one() / &lead)), den: d.monic() })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn constant(c: BigRational) -> Self {
        RationalFunction::from_poly(Polynomial::constant(c))
    }

    pub fn zero() -> Self {
        RationalFunction::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        RationalFunction::constant(BigRational::one())
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RationalFunction) -> RationalFunction {
        let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        RationalFunction::new(n, self.den.mul(&o.den)).unwrap_or_else(|_| RationalFunction::zero())
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RationalFunction) -> RationalFunction {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::new(self.num.mul(&o.num), self.den.mul(&o.den))
            .unwrap_or_else(|_| RationalFunction::zero())
    }

    pub fn inv(&self) -> Result<RationalFunction> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RationalFunction) -> Result<RationalFunction> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<RationalFunction> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let e = k.unsigned_abs() as u32;
        Ok(RationalFunction { num: base.num.pow(e), den: base.den.pow(e) })
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn parse(s: &str) -> Result<RationalFunction> {
        let tokens = tokenize(s)?;
        let mut parser = Parser { tokens, pos: 0 };
        let r = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(Error::Parse(format!("unexpected trailing input in {:?}", s)));
        }
        Ok(r)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Polynomial::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Log-norm of `f` at `eta_{c, p^(-e)}`: `|f| = p^(-result)`.
pub fn point_norm(f: &RationalFunction, p: u64, c: &BigRational, e: Exponent) -> Result<Exponent> {
    if f.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(f.num.valuation_at(p, c, e)? - f.den.valuation_at(p, c, e)?)
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    Var,
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            out.push(Token::Num(lit.parse().map_err(|_| Error::Parse(lit.clone()))?));
        } else if c == 'T' || c == 't' {
            out.push(Token::Var);
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {:?}", c)));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                acc = acc.div(&self.unary()?)?;
            } else if matches!(self.peek(), Some(Token::Var) | Some(Token::Op('('))) {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        if self.eat('-') {
            Ok(self.unary()?.neg())
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.primary()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let k = match self.peek().cloned() {
                Some(Token::Num(n)) => {
                    self.pos += 1;
                    i64::try_from(n).map_err(|_| Error::Parse("exponent too large".into()))?
                }
                _ => return Err(Error::Parse("expected integer exponent".into())),
            };
            base.pow(if neg { -k } else { k })
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<RationalFunction> {
        match self.peek().cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(RationalFunction::constant(BigRational::from_integer(n)))
            }
            Some(Token::Var) => {
                self.pos += 1;
                Ok(RationalFunction::from_poly(Polynomial::t()))
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let r = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing closing parenthesis".into()));
                }
                Ok(r)
            }
            other => Err(Error::Parse(format!("unexpected token {:?}", other))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::q;
    use crate::padic::{big, ratio};
    use proptest::prelude::*;

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse(s).unwrap()
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(rf("T^2 - 1").to_string(), "T^2 - 1");
        assert_eq!(rf("(T^2 - 1)/(T - 1)").to_string(), "T + 1");
        assert_eq!(rf("1/(2*T)").to_string(), "(1/2)/(T)");
        assert_eq!(rf("3/4").to_string(), "3/4");
        assert_eq!(rf("-T^-1 + 3T").to_string(), "(3*T^2 - 1)/(T)");
        assert!(RationalFunction::parse("T +").is_err());
        assert!(RationalFunction::parse("1/(T-T)").is_err());
    }

    #[test]
    fn point_norm_examples() {
        let r = Exponent::new(q(0, 1), q(1, 1));
        assert_eq!(point_norm(&rf("T"), 3, &big(0), r), Ok(r));
        assert_eq!(point_norm(&rf("T - 5/2"), 3, &ratio(5, 2), r), Ok(r));
        assert_eq!(point_norm(&rf("1/(T-1)"), 3, &big(0), Exponent::integer(1)), Ok(Exponent::zero()));
        assert_eq!(point_norm(&rf("0"), 3, &big(0), r), Err(Error::ZeroInput));
        // |9 + T^2| at radius 3^(-1/2) about 0 is max(3^-2, 3^-1).
        assert_eq!(point_norm(&rf("9 + T^2"), 3, &big(0), Exponent::rational(q(1, 2))), Ok(Exponent::integer(1)));
    }

    // Oracle: the Gauss norm of (T - a) at eta_{c,r} is max(|c - a|, r).
    fn linear_oracle(p: u64, a: &BigRational, c: &BigRational, e: Exponent) -> Exponent {
        let d = c - a;
        if d.is_zero() {
            return e;
        }
        Exponent::integer(padic_valuation(&d, p).unwrap()).min(e)
    }

    proptest! {
        #[test]
        fn norm_of_products_of_linears(roots in proptest::collection::vec((-30i64..30, 1i64..10), 1..5),
                                        c in (-30i64..30, 1i64..10),
                                        er in -3i64..4, ei in -2i64..3) {
            let p = 3;
            let e = Exponent::new(q(er, 2), q(ei, 1));
            prop_assume!(e.signum() != std::cmp::Ordering::Equal || ei == 0);
            let c = ratio(c.0, c.1);
            let mut f = RationalFunction::one();
            let mut expected = Exponent::zero();
            for (i, (n, d)) in roots.iter().enumerate() {
                let a = ratio(*n, *d);
                let lin = RationalFunction::from_poly(Polynomial::linear(&a));
                let v = linear_oracle(p, &a, &c, e);
                if i % 2 == 0 {
                    f = f.mul(&lin);
                    expected = expected + v;
                } else {
                    f = f.div(&lin).unwrap();
                    expected = expected - v;
                }
            }
            prop_assert_eq!(point_norm(&f, p, &c, e).unwrap(), expected);
        }

        #[test]
        fn parse_roundtrip(cs in proptest::collection::vec((-20i64..20, 1i64..6), 1..5)) {
            let p = Polynomial::new(cs.iter().map(|&(n, d)| ratio(n, d)).collect());
            let f = RationalFunction::from_poly(p);
            prop_assert_eq!(rf(&f.to_string()), f);
        }
    }
}
