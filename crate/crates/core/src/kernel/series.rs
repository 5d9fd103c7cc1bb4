//! Truncated power series K[t]/(t^m).

use std::fmt;

use super::field::{format_terms_in_order, CoeffField, FieldElem};
use crate::error::{Error, Result};

/// An element of K[t]/(t^m), m ≥ 1, stored as exactly m coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    field: CoeffField,
    coeffs: Vec<FieldElem>,
}

/// `x = c·exp(u)` with `c = x(0)` and `u(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitDecomposition {
    pub constant: FieldElem,
    pub exponent: TruncSeries,
}

impl UnitDecomposition {
    pub fn reconstruct(&self) -> Result<TruncSeries> {
        Ok(self.exponent.exp_nil()?.scale(&self.constant))
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} mod t^{}", self.modulus())
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(FieldElem, usize)> = self.coeffs.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        write!(f, "{}", format_terms_in_order(&terms, "t"))
    }
}

fn check_char(field: &CoeffField, m: usize) -> Result<()> {
    let p = field.characteristic();
    if p > 0 && m as u64 > p {
        return Err(Error::CharPrecision { p, modulus: m });
    }
    Ok(())
}

impl TruncSeries {
    /// Pads with zeros or truncates to exactly `m` coefficients.
    pub fn new(field: &CoeffField, mut coeffs: Vec<FieldElem>, m: usize) -> TruncSeries {
        assert!(m >= 1, "modulus must be at least 1");
        coeffs.truncate(m);
        coeffs.resize(m, field.zero());
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        TruncSeries { field: field.clone(), coeffs }
    }

    pub fn from_ints(field: &CoeffField, v: &[i64], m: usize) -> TruncSeries {
        TruncSeries::new(field, v.iter().map(|&c| field.from_int(c)).collect(), m)
    }

    pub fn constant(c: FieldElem, m: usize) -> TruncSeries {
        let f = c.field().clone();
        TruncSeries::new(&f, vec![c], m)
    }

    pub fn zero(field: &CoeffField, m: usize) -> TruncSeries {
        TruncSeries::new(field, Vec::new(), m)
    }

    pub fn one(field: &CoeffField, m: usize) -> TruncSeries {
        TruncSeries::constant(field.one(), m)
    }

    /// The class of t.
    pub fn t(field: &CoeffField, m: usize) -> TruncSeries {
        TruncSeries::new(field, vec![field.zero(), field.one()], m)
    }

    /// `c + a·t`.
    pub fn linear(c: FieldElem, a: FieldElem, m: usize) -> TruncSeries {
        let f = c.field().clone();
        TruncSeries::new(&f, vec![c, a], m)
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn modulus(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Coefficient of t^i (zero beyond the modulus).
    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> &FieldElem {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    /// Both `x` and `1 − x` are units.
    pub fn is_flat(&self) -> bool {
        self.coeffs[0].is_flat()
    }

    fn same_modulus(&self, o: &TruncSeries) -> Result<()> {
        if self.modulus() != o.modulus() {
            return Err(Error::ModulusMismatch(self.modulus(), o.modulus()));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &TruncSeries) -> Result<TruncSeries> {
        self.same_modulus(o)?;
        Ok(TruncSeries {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn checked_sub(&self, o: &TruncSeries) -> Result<TruncSeries> {
        self.checked_add(&o.neg())
    }

    pub fn checked_mul(&self, o: &TruncSeries) -> Result<TruncSeries> {
        self.same_modulus(o)?;
        let m = self.modulus();
        let mut out = vec![self.field.zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs[..m - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Ok(TruncSeries { field: self.field.clone(), coeffs: out })
    }

    pub fn checked_div(&self, o: &TruncSeries) -> Result<TruncSeries> {
        self.same_modulus(o)?;
        self.checked_mul(&o.inv()?)
    }

    pub fn add(&self, o: &TruncSeries) -> TruncSeries {
        self.checked_add(o).expect("series moduli differ")
    }

    pub fn sub(&self, o: &TruncSeries) -> TruncSeries {
        self.checked_sub(o).expect("series moduli differ")
    }

    pub fn mul(&self, o: &TruncSeries) -> TruncSeries {
        self.checked_mul(o).expect("series moduli differ")
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn scale(&self, c: &FieldElem) -> TruncSeries {
        TruncSeries { field: self.field.clone(), coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn add_scalar(&self, c: &FieldElem) -> TruncSeries {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].add(c);
        out
    }

    /// `1 − x`.
    pub fn one_minus(&self) -> TruncSeries {
        self.neg().add_scalar(&self.field.one())
    }

    pub fn inv(&self) -> Result<TruncSeries> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NonUnit(self.to_string()));
        }
        let ci = c0.inv()?;
        let m = self.modulus();
        let mut out: Vec<FieldElem> = Vec::with_capacity(m);
        out.push(ci.clone());
        for n in 1..m {
            let mut acc = self.field.zero();
            for k in 1..=n {
                acc = acc.add(&self.coeffs[k].mul(&out[n - k]));
            }
            out.push(acc.mul(&ci).neg());
        }
        Ok(TruncSeries { field: self.field.clone(), coeffs: out })
    }

    pub fn div(&self, o: &TruncSeries) -> Result<TruncSeries> {
        self.checked_div(o)
    }

    pub fn pow(&self, e: i64) -> Result<TruncSeries> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = TruncSeries::one(&self.field, self.modulus());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Reduction to K[t]/(t^m'), m' ≤ m.
    pub fn truncate(&self, m: usize) -> TruncSeries {
        assert!(m >= 1 && m <= self.modulus(), "cannot truncate modulus {} to {m}", self.modulus());
        TruncSeries::new(&self.field, self.coeffs[..m].to_vec(), m)
    }

    /// The naive lift to K[t]/(t^m'), m' ≥ m, padding with zeros.
    pub fn extend(&self, m: usize) -> TruncSeries {
        TruncSeries::new(&self.field, self.coeffs.clone(), m)
    }

    /// d/dt, landing in K[t]/(t^{m-1}) (the zero ring is represented with modulus 1 as 0).
    pub fn derivative(&self) -> TruncSeries {
        let m = self.modulus();
        let coeffs: Vec<FieldElem> = (1..m).map(|i| self.coeffs[i].mul_int(i as i64)).collect();
        TruncSeries::new(&self.field, coeffs, (m - 1).max(1))
    }

    /// Formal derivative kept at the same modulus (the top coefficient becomes 0).
    pub fn derivative_same(&self) -> TruncSeries {
        let m = self.modulus();
        let coeffs: Vec<FieldElem> = (1..m).map(|i| self.coeffs[i].mul_int(i as i64)).collect();
        TruncSeries::new(&self.field, coeffs, m)
    }

    /// log°(x) = log(x/x(0)).
    pub fn log_circ(&self) -> Result<TruncSeries> {
        if self.coeffs[0].is_zero() {
            return Err(Error::NonUnit(self.to_string()));
        }
        let m = self.modulus();
        check_char(&self.field, m)?;
        let q = self.derivative_same().mul(&self.inv()?);
        let mut out = vec![self.field.zero()];
        for i in 1..m {
            out.push(q.coeffs[i - 1].mul(&self.field.from_int(i as i64).inv()?));
        }
        Ok(TruncSeries { field: self.field.clone(), coeffs: out })
    }

    /// exp(u) for u(0) = 0.
    pub fn exp_nil(&self) -> Result<TruncSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonNilpotent(self.to_string()));
        }
        let m = self.modulus();
        check_char(&self.field, m)?;
        let mut y = vec![self.field.one()];
        for n in 1..m {
            let mut acc = self.field.zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc = acc.add(&self.coeffs[k].mul_int(k as i64).mul(&y[n - k]));
                }
            }
            y.push(acc.mul(&self.field.from_int(n as i64).inv()?));
        }
        Ok(TruncSeries { field: self.field.clone(), coeffs: y })
    }

    /// The ⋆-action t ↦ λt.
    pub fn star_scale(&self, lambda: &FieldElem) -> Result<TruncSeries> {
        if lambda.is_zero() {
            return Err(Error::ZeroScalar);
        }
        let mut pw = self.field.one();
        let mut out = Vec::with_capacity(self.modulus());
        for c in &self.coeffs {
            out.push(c.mul(&pw));
            pw = pw.mul(lambda);
        }
        Ok(TruncSeries { field: self.field.clone(), coeffs: out })
    }

    pub fn unit_decomposition(&self) -> Result<UnitDecomposition> {
        Ok(UnitDecomposition { constant: self.coeffs[0].clone(), exponent: self.log_circ()? })
    }

    /// Applies a coefficientwise map into another field.
    pub fn map_coeffs(&self, target: &CoeffField, f: impl Fn(&FieldElem) -> Result<FieldElem>) -> Result<TruncSeries> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(TruncSeries { field: target.clone(), coeffs })
    }

    /// Embeds the coefficients into an extension field.
    pub fn embed(&self, target: &CoeffField) -> Result<TruncSeries> {
        self.map_coeffs(target, |c| target.embed(c))
    }

    /// t-adic valuation (`None` for zero).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// `self(g(t))` for g with g(0) = 0.
    pub fn compose(&self, g: &TruncSeries) -> Result<TruncSeries> {
        self.same_modulus(g)?;
        if !g.coeffs[0].is_zero() {
            return Err(Error::NonNilpotent(g.to_string()));
        }
        let mut acc = TruncSeries::zero(&self.field, self.modulus());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add_scalar(c);
        }
        Ok(acc)
    }
}

super::field::forward_ops!(TruncSeries);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::qpoly::{q, qf};

    fn qq() -> CoeffField {
        CoeffField::rationals()
    }

    fn s(v: &[(i64, i64)], m: usize) -> TruncSeries {
        let k = qq();
        TruncSeries::new(&k, v.iter().map(|&(a, b)| k.from_q(&qf(a, b)).unwrap()).collect(), m)
    }

    #[test]
    fn log_examples() {
        let x = s(&[(1, 1), (2, 1)], 3);
        assert_eq!(x.log_circ().unwrap(), s(&[(0, 1), (2, 1), (-2, 1)], 3));
        let c = s(&[(7, 3)], 3);
        assert!(c.log_circ().unwrap().is_zero());
        let u = s(&[(0, 1), (5, 1), (7, 1)], 3);
        assert_eq!(u.exp_nil().unwrap().log_circ().unwrap(), u);
    }

    #[test]
    fn exp_examples() {
        assert!(TruncSeries::zero(&qq(), 3).exp_nil().unwrap().is_one_series());
        let t = TruncSeries::t(&qq(), 3);
        assert_eq!(t.exp_nil().unwrap(), s(&[(1, 1), (1, 1), (1, 2)], 3));
        assert!(matches!(s(&[(1, 1)], 3).exp_nil(), Err(Error::NonNilpotent(_))));
    }

    #[test]
    fn errors() {
        assert!(matches!(s(&[(0, 1), (1, 1)], 3).log_circ(), Err(Error::NonUnit(_))));
        let f5 = CoeffField::finite(5, 1, "θ").unwrap();
        let x = TruncSeries::from_ints(&f5, &[1, 1], 6);
        assert!(matches!(x.log_circ(), Err(Error::CharPrecision { p: 5, modulus: 6 })));
        let x = TruncSeries::from_ints(&f5, &[1, 1], 5);
        assert!(x.log_circ().is_ok());
        assert!(matches!(x.star_scale(&f5.zero()), Err(Error::ZeroScalar)));
        assert!(matches!(s(&[(1, 1)], 3).checked_add(&s(&[(1, 1)], 2)), Err(Error::ModulusMismatch(3, 2))));
    }

    #[test]
    fn star_action() {
        let k = qq();
        let x = s(&[(1, 2), (3, 1)], 2);
        let l = k.from_int(5);
        assert_eq!(x.star_scale(&l).unwrap(), s(&[(1, 2), (15, 1)], 2));
        assert_eq!(x.star_scale(&k.one()).unwrap(), x);
    }

    #[test]
    fn unit_decomposition_roundtrip() {
        let x = s(&[(3, 1), (1, 2), (-4, 1), (2, 7)], 4);
        let d = x.unit_decomposition().unwrap();
        assert_eq!(d.constant.as_q(), Some(q(3)));
        assert_eq!(d.reconstruct().unwrap(), x);
    }

    #[test]
    fn display_ascending() {
        assert_eq!(s(&[(1, 2), (1, 1)], 2).to_string(), "1/2 + t");
        assert_eq!(s(&[(0, 1), (-2, 1), (3, 1)], 3).to_string(), "-2*t + 3*t^2");
    }

    impl TruncSeries {
        fn is_one_series(&self) -> bool {
            *self == TruncSeries::one(&self.field, self.modulus())
        }
    }
}
