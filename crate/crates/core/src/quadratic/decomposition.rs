//! Splitting a diagonal form into blocks `C * sigma` with unit forms `sigma`.
//!
//! The combinatorics run on value vectors and words in the coefficients and
//! basis elements; the concrete field only evaluates the resulting words.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exponent::{order_of, rebase, reduce_even_order, reduce_odd_order, ValueVector, Q};
use crate::quadratic::fields::FormField;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionMode {
    /// The value group is a free lattice on the basis.
    Free,
    /// Values lie in the rational span of the basis.
    General,
}

/// `prod a_j^{coeff_exps[j]} * prod pi_i^{basis_exps[i]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    pub coeff_exps: Vec<i64>,
    pub basis_exps: Vec<i64>,
}

impl Word {
    pub fn one(m: usize, n: usize) -> Word {
        Word { coeff_exps: vec![0; m], basis_exps: vec![0; n] }
    }

    pub fn coeff(m: usize, n: usize, j: usize) -> Word {
        let mut w = Word::one(m, n);
        w.coeff_exps[j] = 1;
        w
    }

    pub fn basis(m: usize, n: usize, i: usize, k: i64) -> Word {
        let mut w = Word::one(m, n);
        w.basis_exps[i] = k;
        w
    }

    pub fn from_basis(m: usize, exps: &[i64]) -> Word {
        Word { coeff_exps: vec![0; m], basis_exps: exps.to_vec() }
    }

    pub fn mul(&self, o: &Word) -> Word {
        Word {
            coeff_exps: self.coeff_exps.iter().zip(&o.coeff_exps).map(|(a, b)| a + b).collect(),
            basis_exps: self.basis_exps.iter().zip(&o.basis_exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Word {
        Word {
            coeff_exps: self.coeff_exps.iter().map(|a| a * k).collect(),
            basis_exps: self.basis_exps.iter().map(|a| a * k).collect(),
        }
    }

    pub fn inv(&self) -> Word {
        self.pow(-1)
    }

    pub fn is_one(&self) -> bool {
        self.coeff_exps.iter().chain(&self.basis_exps).all(|e| *e == 0)
    }

    pub fn value(&self, values: &[ValueVector]) -> ValueVector {
        let n = self.basis_exps.len();
        let mut acc = ValueVector::from_integers(&self.basis_exps);
        for (j, k) in self.coeff_exps.iter().enumerate() {
            if *k != 0 {
                acc = acc.add(&values[j].scale(*k));
            }
        }
        debug_assert_eq!(acc.rank(), n);
        acc
    }

    pub fn evaluate<F: FormField>(&self, field: &F, coeffs: &[F::Elem]) -> Result<F::Elem> {
        let mut acc = field.one();
        for (j, k) in self.coeff_exps.iter().enumerate() {
            if *k != 0 {
                acc = field.mul(&acc, &field.pow(&coeffs[j], *k)?);
            }
        }
        for (i, k) in self.basis_exps.iter().enumerate() {
            if *k != 0 {
                acc = field.mul(&acc, &field.pow(&field.basis(i), *k)?);
            }
        }
        Ok(acc)
    }
}

/// Member of a block: original coefficient `index` equals
/// `scale * unit * square^2`, with `unit` of norm one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordMember {
    pub index: usize,
    pub unit: Word,
    pub square: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordBlock {
    pub scale: Word,
    pub members: Vec<WordMember>,
}

/// Element under rewriting: `a_index = scale * cur * square^2` where the
/// scale is carried by the recursion and `cur` is derived from the rest.
#[derive(Clone, Debug)]
struct Working {
    index: usize,
    square: Word,
}

struct Decomposer<'a> {
    values: &'a [ValueVector],
    orders: Vec<i64>,
    m: usize,
    n: usize,
}

impl Decomposer<'_> {
    fn value(&self, w: &Word) -> ValueVector {
        w.value(self.values)
    }

    /// Multiplies by value-zero words `a_j^{ord_j} pi^{-ord_j v_j}` to bring
    /// every coefficient exponent into `[0, ord_j)`. The value is unchanged.
    fn reduce(&self, w: &Word) -> Word {
        let mut out = w.clone();
        for j in 0..self.m {
            let ord = self.orders[j];
            let t = out.coeff_exps[j].div_euclid(ord);
            if t == 0 {
                continue;
            }
            out.coeff_exps[j] -= t * ord;
            for (i, c) in self.values[j].0.iter().enumerate() {
                out.basis_exps[i] += (*c * (t * ord)).to_integer();
            }
        }
        out
    }

    fn cur(&self, e: &Working, scale: &Word) -> Word {
        Word::coeff(self.m, self.n, e.index).mul(&scale.inv()).mul(&e.square.pow(-2))
    }

    /// `cur <- cur * x^2`.
    fn absorb_square(&self, e: &mut Working, x: &Word) {
        e.square = self.reduce(&e.square.mul(&x.inv()));
    }

    /// Replaces `cur` by `cur^k * pi^m` for odd `k` and even `m`.
    fn absorb_certificate(&self, e: &mut Working, scale: &Word, power: i64, shift: &[i64]) {
        let half_shift: Vec<i64> = shift.iter().map(|s| s / 2).collect();
        let x = self.cur(e, scale).pow((power - 1) / 2).mul(&Word::from_basis(self.m, &half_shift));
        self.absorb_square(e, &x);
    }

    fn leaf(&self, elems: Vec<Working>, scale: Word, out: &mut Vec<WordBlock>) {
        if elems.is_empty() {
            return;
        }
        let members = elems
            .into_iter()
            .map(|e| WordMember { index: e.index, unit: self.cur(&e, &scale), square: e.square })
            .collect();
        out.push(WordBlock { scale, members });
    }

    fn odd_part(&self, elems: Vec<Working>, out: &mut Vec<WordBlock>) -> Result<()> {
        let one = Word::one(self.m, self.n);
        let mut groups: BTreeMap<Vec<i64>, Vec<Working>> = BTreeMap::new();
        for mut e in elems {
            let r = reduce_odd_order(&self.value(&self.cur(&e, &one)))?;
            self.absorb_certificate(&mut e, &one, r.certificate.power, &r.certificate.basis_shift);
            let delta: Vec<i64> = r.vector.0.iter().map(|c| c.to_integer()).collect();
            groups.entry(delta).or_default().push(e);
        }
        for (delta, g) in groups {
            self.leaf(g, Word::from_basis(self.m, &delta), out);
        }
        Ok(())
    }

    /// Recursive elimination of the parameters in `params` for elements whose
    /// values have power-of-two (or unit) order and vanish outside `params`.
    fn even_part(&self, mut elems: Vec<Working>, params: &[usize], scale: Word, out: &mut Vec<WordBlock>) -> Result<()> {
        if elems.is_empty() {
            return Ok(());
        }
        let values: Vec<ValueVector> = elems.iter().map(|e| self.value(&self.cur(e, &scale))).collect();
        if params.is_empty() || values.iter().all(|v| v.is_zero()) {
            self.leaf(elems, scale, out);
            return Ok(());
        }
        let mut tau1 = Vec::new();
        let mut tau2 = Vec::new();
        let pivot;
        let tau2_scale;
        if values.iter().all(|v| v.is_integral()) {
            pivot = params
                .iter()
                .copied()
                .find(|&i| values.iter().any(|v| !v.0[i].is_zero()))
                .unwrap_or(params[0]);
            for (mut e, v) in elems.into_iter().zip(&values) {
                let s = v.0[pivot].to_integer();
                self.absorb_square(&mut e, &Word::basis(self.m, self.n, pivot, -s.div_euclid(2)));
                if s.rem_euclid(2) == 1 {
                    tau1.push(e);
                } else {
                    tau2.push(e);
                }
            }
            tau2_scale = scale.clone();
        } else {
            // Give every element of even order a base, then pick the first
            // element of largest order as the lead element.
            let mut bases = vec![None; elems.len()];
            for (k, e) in elems.iter_mut().enumerate() {
                if order_of(&values[k]).is_multiple_of(2) {
                    let r = reduce_even_order(&values[k])?;
                    self.absorb_certificate(e, &scale, r.certificate.power, &r.certificate.basis_shift);
                    bases[k] = r.base_index;
                }
            }
            let orders: Vec<u64> = elems.iter().map(|e| order_of(&self.value(&self.cur(e, &scale)))).collect();
            let top = *orders.iter().max().unwrap_or(&1);
            let lead = orders.iter().position(|o| *o == top).unwrap_or(0);
            pivot = bases[lead].ok_or(Error::OddOrder(top))?;
            let lead_word = self.reduce(&self.cur(&elems[lead], &scale));
            let alpha = top as i64;
            for (k, mut e) in elems.into_iter().enumerate() {
                if k == lead {
                    tau2.push(e);
                    continue;
                }
                let c: Q = self.value(&self.cur(&e, &scale)).0[pivot];
                if *c.denom() < alpha {
                    // The even power lead^(alpha (1 - c)) moves the pivot
                    // coordinate to 1.
                    let k_exp = ((Q::from_integer(1) - c) * alpha).to_integer();
                    self.absorb_square(&mut e, &lead_word.pow(k_exp / 2));
                    tau1.push(e);
                } else {
                    // Same order with odd numerator: make the pivot a base of
                    // this element as well; it then shares the lead's scale.
                    let v = self.value(&self.cur(&e, &scale));
                    let r = rebase(&v, pivot)?;
                    self.absorb_certificate(&mut e, &scale, r.certificate.power, &r.certificate.basis_shift);
                    tau2.push(e);
                }
            }
            tau2_scale = self.reduce(&scale.mul(&lead_word));
        }
        let rest: Vec<usize> = params.iter().copied().filter(|i| *i != pivot).collect();
        let tau1_scale = scale.mul(&Word::basis(self.m, self.n, pivot, 1));
        self.even_part(tau1, &rest, tau1_scale, out)?;
        self.even_part(tau2, &rest, tau2_scale, out)
    }
}

/// Block decomposition at the level of value vectors.
pub fn decompose_values(values: &[ValueVector], n: usize, mode: DecompositionMode) -> Result<Vec<WordBlock>> {
    let m = values.len();
    for v in values {
        if v.rank() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.rank() });
        }
    }
    let orders = values.iter().map(|v| order_of(v) as i64).collect();
    let dec = Decomposer { values, orders, m, n };
    let elems: Vec<Working> = (0..m).map(|j| Working { index: j, square: Word::one(m, n) }).collect();
    let mut out = Vec::new();
    match mode {
        DecompositionMode::Free => {
            if let Some(v) = values.iter().find(|v| !v.is_integral()) {
                return Err(Error::OutsideSpan(format!("{:?} is not in the lattice", v.0)));
            }
            dec.odd_part(elems, &mut out)?;
        }
        DecompositionMode::General => {
            let (odd, even): (Vec<Working>, Vec<Working>) =
                elems.into_iter().partition(|e| order_of(&values[e.index]) % 2 == 1);
            dec.odd_part(odd, &mut out)?;
            let params: Vec<usize> = (0..n).collect();
            dec.even_part(even, &params, Word::one(m, n), &mut out)?;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockMember<E> {
    pub index: usize,
    pub unit: E,
    pub square: E,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block<E> {
    pub scale: E,
    pub members: Vec<BlockMember<E>>,
}

impl<E: Clone> Block<E> {
    pub fn unit_form(&self) -> Vec<E> {
        self.members.iter().map(|m| m.unit.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockDecomposition<E> {
    pub blocks: Vec<Block<E>>,
    pub words: Vec<WordBlock>,
}

/// Decomposes `q = <a_1, ..., a_m>` (nonzero coefficients) into blocks
/// `C * <u, ...>` with certificates `a = C * u * s^2`.
pub fn unit_block_decomposition<F: FormField>(
    field: &F,
    coeffs: &[F::Elem],
    mode: DecompositionMode,
) -> Result<BlockDecomposition<F::Elem>> {
    let values = coeffs.iter().map(|a| field.value_vector(a)).collect::<Result<Vec<_>>>()?;
    let words = decompose_values(&values, field.rank(), mode)?;
    let mut blocks = Vec::new();
    for wb in &words {
        let scale = wb.scale.evaluate(field, coeffs)?;
        let mut members = Vec::new();
        for m in &wb.members {
            members.push(BlockMember {
                index: m.index,
                unit: m.unit.evaluate(field, coeffs)?,
                square: m.square.evaluate(field, coeffs)?,
            });
        }
        blocks.push(Block { scale, members });
    }
    Ok(BlockDecomposition { blocks, words })
}

/// Checks every certificate identity exactly and that each coefficient is
/// used once.
pub fn verify_decomposition<F: FormField>(
    field: &F,
    coeffs: &[F::Elem],
    dec: &BlockDecomposition<F::Elem>,
) -> Result<bool> {
    let mut seen = vec![false; coeffs.len()];
    for b in &dec.blocks {
        for m in &b.members {
            if m.index >= coeffs.len() || seen[m.index] {
                return Ok(false);
            }
            seen[m.index] = true;
            let rebuilt = field.mul(&field.mul(&b.scale, &m.unit), &field.mul(&m.square, &m.square));
            if rebuilt != coeffs[m.index] || !field.value_vector(&m.unit)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(seen.into_iter().all(|s| s))
}
