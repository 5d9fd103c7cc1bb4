//! Univariate polynomials with coefficients in a [`CoeffField`].

use std::fmt;

use super::field::{forward_ops, format_terms, CoeffField, FieldElem};
use super::qpoly::{self, Q};
use crate::error::Result;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: CoeffField,
    coeffs: Vec<FieldElem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("z"))
    }
}

impl Poly {
    /// Coefficients ascending; trailing zeros are dropped.
    pub fn new(field: &CoeffField, mut coeffs: Vec<FieldElem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &CoeffField) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &CoeffField) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: FieldElem) -> Poly {
        let f = c.field().clone();
        Poly::new(&f, vec![c])
    }

    /// The variable itself.
    pub fn x(field: &CoeffField) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    pub fn monomial(c: FieldElem, k: usize) -> Poly {
        let f = c.field().clone();
        let mut v = vec![f.zero(); k];
        v.push(c);
        Poly::new(&f, v)
    }

    pub fn from_ints(field: &CoeffField, v: &[i64]) -> Poly {
        Poly::new(field, v.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Leading coefficient; panics on zero.
    pub fn lc(&self) -> &FieldElem {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(&self.field, (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        if self.field.is_rationals() {
            return self.with_qvec(qpoly::mul(&self.to_qvec(), &o.to_qvec()));
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(&self.field, out)
    }

    fn to_qvec(&self) -> Vec<Q> {
        self.coeffs.iter().map(|c| c.as_q().expect("rational coefficient")).collect()
    }

    fn with_qvec(&self, v: Vec<Q>) -> Poly {
        let coeffs = v.iter().map(|c| self.field.from_q(c).expect("rational field")).collect();
        Poly::new(&self.field, coeffs)
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, b: &Poly) -> (Poly, Poly) {
        let db = b.degree().expect("division by zero polynomial");
        if self.field.is_rationals() && self.coeffs.len() > db {
            let (q, r) = qpoly::divrem(&self.to_qvec(), &b.to_qvec());
            return (self.with_qvec(q), self.with_qvec(r));
        }
        let li = b.lc().inv().expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return (Poly::zero(&self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - db];
        while r.len() > db {
            let dr = r.len() - 1;
            let c = r[dr].mul(&li);
            let shift = dr - db;
            for (i, y) in b.coeffs.iter().enumerate() {
                r[shift + i] = r[shift + i].sub(&c.mul(y));
            }
            q[shift] = c;
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        (Poly::new(&self.field, q), Poly::new(&self.field, r))
    }

    pub fn rem(&self, b: &Poly) -> Poly {
        self.divrem(b).1
    }

    /// Division known to be exact.
    pub fn exact_div(&self, b: &Poly) -> Poly {
        let (q, r) = self.divrem(b);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().inv().unwrap())
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        if self.degree() == Some(0) || o.degree() == Some(0) {
            return Poly::one(&self.field);
        }
        if self.field.is_rationals() {
            let q = |p: &Poly| p.coeffs.iter().map(|c| c.as_q().expect("rational coefficient")).collect::<Vec<_>>();
            let g = super::qpoly::gcd_primitive(&q(self), &q(o));
            return Poly::new(&self.field, g.iter().map(|c| self.field.from_q(c).unwrap()).collect());
        }
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·o = g`, `g` monic.
    pub fn xgcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let li = r0.lc().inv().unwrap();
        (r0.scale(&li), s0.scale(&li), t0.scale(&li))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            &self.field,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.mul_int(i as i64)).collect(),
        )
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let mut acc = x.field().zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Evaluates at a point of a field the coefficients embed into.
    pub fn eval_embedded(&self, x: &FieldElem) -> Result<FieldElem> {
        let target = x.field();
        let mut acc = target.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&target.embed(c)?);
        }
        Ok(acc)
    }

    /// `self(o(z))`.
    pub fn compose(&self, o: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(o).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Reverses the coefficient list relative to degree `d` (z^d·p(1/z)).
    pub fn reversed(&self, d: usize) -> Poly {
        let mut v: Vec<FieldElem> = (0..=d).map(|i| self.coeff(i)).collect();
        v.reverse();
        Poly::new(&self.field, v)
    }

    /// Maps each coefficient into another field.
    pub fn map_coeffs(&self, target: &CoeffField, f: impl Fn(&FieldElem) -> Result<FieldElem>) -> Result<Poly> {
        Ok(Poly::new(target, self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?))
    }

    pub fn display_in(&self, var: &str) -> String {
        let terms: Vec<(FieldElem, usize)> = self.coeffs.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        format_terms(&terms, var)
    }
}

forward_ops!(Poly);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_and_gcd() {
        let k = CoeffField::rationals();
        let a = Poly::from_ints(&k, &[-1, 0, 1]);
        let b = Poly::from_ints(&k, &[-1, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q, Poly::from_ints(&k, &[1, 1]));
        assert!(r.is_zero());
        let c = Poly::from_ints(&k, &[2, 3, 1]);
        assert_eq!(a.gcd(&c), Poly::from_ints(&k, &[1, 1]));
        let (g, s, t) = a.xgcd(&Poly::from_ints(&k, &[0, 1]));
        assert_eq!(&(&s * &a) + &(&t * &Poly::from_ints(&k, &[0, 1])), g);
    }

    #[test]
    fn display() {
        let k = CoeffField::rationals();
        assert_eq!(Poly::from_ints(&k, &[-1, 0, 2]).display_in("z"), "2*z^2 - 1");
        assert_eq!(Poly::from_ints(&k, &[0, -1]).display_in("z"), "-z");
    }
}
