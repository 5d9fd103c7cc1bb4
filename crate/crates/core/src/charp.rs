//! Finite polylogarithms in characteristic p ≥ 5.

use crate::bloch::Wedge2;
use crate::error::{Error, Result};
use crate::kernel::{CoeffField, FieldElem, TruncSeries, Q};

/// 𝔽_{p^e} together with the truncated rings 𝔽[t]/(t²) and 𝔽[t]/(t^p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPContext {
    field: CoeffField,
}

impl CharPContext {
    pub fn new(p: u64, e: u32) -> Result<CharPContext> {
        Ok(CharPContext { field: CoeffField::finite(p, e, "θ")? })
    }

    pub fn from_field(field: &CoeffField) -> Result<CharPContext> {
        if !field.is_finite() {
            return Err(Error::UnsupportedField(field.to_string()));
        }
        Ok(CharPContext { field: field.clone() })
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.characteristic()
    }

    /// s + αt in 𝔽[t]/(t^m), m ∈ {2, p}.
    pub fn element(&self, coeffs: Vec<FieldElem>, m: usize) -> Result<TruncSeries> {
        if m != 2 && m as u64 != self.p() {
            return Err(Error::InvalidArgument(format!("modulus {m} is neither 2 nor {}", self.p())));
        }
        Ok(TruncSeries::new(&self.field, coeffs, m))
    }
}

fn require_finite(f: &CoeffField) -> Result<()> {
    if f.is_finite() {
        Ok(())
    } else {
        Err(Error::UnsupportedField(f.to_string()))
    }
}

/// £₁(s) = Σ_{1≤k≤p−1} s^k/k.
pub fn finite_log(s: &FieldElem) -> Result<FieldElem> {
    let f = s.field();
    require_finite(f)?;
    let p = f.characteristic();
    let mut acc = f.zero();
    let mut pw = f.one();
    for k in 1..p {
        pw = pw.mul(s);
        acc = acc.add(&pw.mul(&f.from_q(&Q::new(1.into(), (k as i64).into()))?));
    }
    Ok(acc)
}

/// 𝔏i₂(s + αt) = α/(s(1−s)) · £₁(s^{1/p}).
pub fn finite_dilog(x: &TruncSeries) -> Result<FieldElem> {
    require_finite(x.field())?;
    if x.modulus() != 2 {
        return Err(Error::ModulusMismatch(x.modulus(), 2));
    }
    if !x.is_flat() {
        return Err(Error::NotFlat(x.to_string()));
    }
    let s = x.constant_term();
    let alpha = x.coeff(1);
    let den = s.mul(&s.one_like().sub(s));
    Ok(alpha.div(&den)?.mul(&finite_log(&s.frobenius_root())?))
}

/// −½·(Σ_{1≤a≤p−1} a·(ℓ_a∧ℓ_{p−a})((1−x̃)∧x̃))^{1/p} for x̃ ∈ 𝔽[t]/(t^p).
pub fn diagram_functional(x: &TruncSeries) -> Result<FieldElem> {
    let f = x.field();
    require_finite(f)?;
    let p = f.characteristic() as usize;
    if x.modulus() != p {
        return Err(Error::ModulusMismatch(x.modulus(), p));
    }
    if !x.is_flat() {
        return Err(Error::NotFlat(x.to_string()));
    }
    let w = Wedge2::pair(&x.one_minus(), x)?;
    let mut acc = f.zero();
    for a in 1..p {
        acc = acc.add(&w.wedge_eval(a, p - a)?.mul_int(a as i64));
    }
    let half = f.from_q(&Q::new(1.into(), 2.into()))?;
    Ok(acc.frobenius_root().mul(&half).neg())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_log_values() {
        let f5 = CoeffField::finite(5, 1, "θ").unwrap();
        assert!(finite_log(&f5.zero()).unwrap().is_zero());
        assert!(finite_log(&f5.one()).unwrap().is_zero());
        assert_eq!(finite_log(&f5.from_int(2)).unwrap(), f5.from_int(4));
        assert_eq!(finite_log(&f5.from_int(4)).unwrap(), f5.from_int(4));
    }

    #[test]
    fn identities_exhaustive_f7() {
        let f = CoeffField::finite(7, 1, "θ").unwrap();
        let one = f.one();
        for x in f.elements() {
            assert_eq!(finite_log(&x).unwrap(), finite_log(&one.sub(&x)).unwrap());
            if !x.is_zero() {
                let r = x.pow_u(7).mul(&finite_log(&x.inv().unwrap()).unwrap()).neg();
                assert_eq!(finite_log(&x).unwrap(), r);
            }
        }
    }

    #[test]
    fn diagram_matches_dilog_f25() {
        let ctx = CharPContext::new(5, 2).unwrap();
        let f = ctx.field();
        let th = f.gen().unwrap();
        let s = th.add(&f.from_int(2));
        let alpha = th.square();
        let x2 = ctx.element(vec![s.clone(), alpha.clone()], 2).unwrap();
        let want = finite_dilog(&x2).unwrap();
        assert!(!want.is_zero());
        for tail in [vec![], vec![f.one(), th.clone(), f.from_int(3)], vec![th.clone(), f.zero(), f.one()]] {
            let mut c = vec![s.clone(), alpha.clone()];
            c.extend(tail);
            let x = ctx.element(c, 5).unwrap();
            assert_eq!(diagram_functional(&x).unwrap(), want);
        }
        assert!(diagram_functional(&ctx.element(vec![s], 5).unwrap()).unwrap().is_zero());
    }
}
