//! Hermite reduction for rational functions in one variable.

use super::field::{CoeffField, FieldElem};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Result of reducing ∫ f: `f = g' + h` with `h` having a squarefree denominator
/// and proper numerator (the logarithmic part).
#[derive(Clone, Debug)]
pub struct HermiteResult {
    pub rational_part: FieldElem,
    pub polynomial_part: Poly,
    pub log_numerator: Poly,
    pub log_denominator: Poly,
}

/// Solves `s·a + t·b = c` with `deg s < deg b`, assuming gcd(a, b) = 1.
fn diophantine(a: &Poly, b: &Poly, c: &Poly) -> (Poly, Poly) {
    let (_, s0, _) = a.xgcd(b);
    let s = s0.mul(c).rem(b);
    let t = c.sub(&s.mul(a)).exact_div(b);
    (s, t)
}

/// Hermite reduction of `f dx` for `f` in a rational function field.
pub fn hermite_reduce(f: &FieldElem) -> Result<HermiteResult> {
    let field = f.field();
    let base = field
        .base()
        .ok_or_else(|| Error::UnsupportedRing(format!("Hermite reduction needs a function field, got {field}")))?
        .clone();
    let (num, den) = f.num_den();
    let (poly_part, mut a) = num.divrem(den);
    let d = den.clone();
    let mut g = field.zero();
    let dminus0 = d.gcd(&d.derivative());
    let dstar = d.exact_div(&dminus0);
    let mut dminus = dminus0;
    while dminus.degree().unwrap_or(0) > 0 {
        let dminus2 = dminus.gcd(&dminus.derivative());
        let dminus_star = dminus.exact_div(&dminus2);
        let lhs = dstar.mul(&dminus.derivative()).exact_div(&dminus).neg();
        let (b, c) = diophantine(&lhs, &dminus_star, &a);
        a = c.sub(&b.derivative().mul(&dstar).exact_div(&dminus_star));
        g = g.add(&field.fraction(b, dminus.clone())?);
        dminus = dminus2;
    }
    let (log_num, log_den) = if a.is_zero() { (a, Poly::one(&base)) } else { (a, dstar) };
    Ok(HermiteResult { rational_part: g, polynomial_part: poly_part, log_numerator: log_num, log_denominator: log_den })
}

/// Whether `f dx` is d of a rational function.
pub fn has_rational_antiderivative(f: &FieldElem) -> Result<bool> {
    Ok(hermite_reduce(f)?.log_numerator.is_zero())
}

/// An antiderivative of a polynomial (characteristic 0).
pub fn integrate_poly(p: &Poly) -> Poly {
    let field: &CoeffField = p.field();
    let mut coeffs = vec![field.zero()];
    for (i, c) in p.coeffs().iter().enumerate() {
        coeffs.push(c.mul(&field.from_int(i as i64 + 1).inv().expect("characteristic 0")));
    }
    Poly::new(field, coeffs)
}
