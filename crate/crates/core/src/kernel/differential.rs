//! Kähler differentials relative to the prime field.
//!
//! The ring is K[t]/(t^m) (m = 1 means K itself). When K = F(x) is a function
//! field the module is free on dx over the ring; dt contributes a summand
//! killed by m·t^{m-1}, so its coefficient lives in K[t]/(t^{m-1}). For K a
//! number field or finite field Ω¹_K vanishes and only dt survives.

use std::fmt;

use super::field::{CoeffField, FieldElem};
use super::series::TruncSeries;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Differential {
    field: CoeffField,
    modulus: usize,
    /// Coefficient of dx, length `modulus`; all zero when K has no variable.
    dx: Vec<FieldElem>,
    /// Coefficient of dt, length `modulus - 1`.
    dt: Vec<FieldElem>,
}

impl Differential {
    pub fn zero(field: &CoeffField, modulus: usize) -> Differential {
        assert!(modulus >= 1);
        Differential {
            field: field.clone(),
            modulus,
            dx: vec![field.zero(); modulus],
            dt: vec![field.zero(); modulus - 1],
        }
    }

    /// Builds `a·dx + b·dt`, normalizing away whatever the relations kill.
    pub fn from_parts(field: &CoeffField, modulus: usize, dx: Vec<FieldElem>, dt: Vec<FieldElem>) -> Differential {
        let mut out = Differential::zero(field, modulus);
        if field.is_function_field() {
            for (i, c) in dx.into_iter().take(modulus).enumerate() {
                out.dx[i] = c;
            }
        }
        for (i, c) in dt.into_iter().take(modulus - 1).enumerate() {
            out.dt[i] = c;
        }
        out
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn dx_coeffs(&self) -> &[FieldElem] {
        &self.dx
    }

    pub fn dt_coeffs(&self) -> &[FieldElem] {
        &self.dt
    }

    /// Coefficient of dx as a field element (m = 1 case).
    pub fn dx_coeff(&self) -> FieldElem {
        self.dx[0].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.dx.iter().chain(&self.dt).all(|c| c.is_zero())
    }

    fn check(&self, o: &Differential) -> Result<()> {
        if self.modulus != o.modulus {
            return Err(Error::ModulusMismatch(self.modulus, o.modulus));
        }
        if self.field != o.field {
            return Err(Error::FieldMismatch(self.field.to_string(), o.field.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Differential) -> Differential {
        self.check(o).expect("incompatible differentials");
        Differential {
            field: self.field.clone(),
            modulus: self.modulus,
            dx: self.dx.iter().zip(&o.dx).map(|(a, b)| a.add(b)).collect(),
            dt: self.dt.iter().zip(&o.dt).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn neg(&self) -> Differential {
        Differential {
            field: self.field.clone(),
            modulus: self.modulus,
            dx: self.dx.iter().map(|c| c.neg()).collect(),
            dt: self.dt.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, o: &Differential) -> Differential {
        self.add(&o.neg())
    }

    /// Multiplication by a ring element.
    pub fn scale(&self, a: &TruncSeries) -> Differential {
        assert_eq!(a.modulus(), self.modulus, "series modulus differs from ring modulus");
        let dx = TruncSeries::new(&self.field, self.dx.clone(), self.modulus).mul(a);
        let dt = if self.modulus > 1 {
            let tm = self.modulus - 1;
            TruncSeries::new(&self.field, self.dt.clone(), tm).mul(&a.truncate(tm)).coeffs().to_vec()
        } else {
            Vec::new()
        };
        Differential { field: self.field.clone(), modulus: self.modulus, dx: dx.coeffs().to_vec(), dt }
    }

    pub fn scale_elem(&self, c: &FieldElem) -> Differential {
        Differential {
            field: self.field.clone(),
            modulus: self.modulus,
            dx: self.dx.iter().map(|x| x.mul(c)).collect(),
            dt: self.dt.iter().map(|x| x.mul(c)).collect(),
        }
    }

    /// d of a ring element.
    pub fn d(a: &TruncSeries) -> Differential {
        let field = a.field().clone();
        let m = a.modulus();
        let dx = if field.is_function_field() {
            a.coeffs().iter().map(|c| c.derivative()).collect()
        } else {
            Vec::new()
        };
        let dt = (1..m).map(|i| a.coeff(i).mul_int(i as i64)).collect();
        Differential::from_parts(&field, m, dx, dt)
    }

    /// d of a field element, as a form over K itself.
    pub fn d_elem(a: &FieldElem) -> Differential {
        Differential::d(&TruncSeries::constant(a.clone(), 1))
    }

    /// da/a for a unit.
    pub fn dlog(a: &TruncSeries) -> Result<Differential> {
        Ok(Differential::d(a).scale(&a.inv()?))
    }

    pub fn dlog_elem(a: &FieldElem) -> Result<Differential> {
        if a.is_zero() {
            return Err(Error::ZeroUnit);
        }
        Differential::dlog(&TruncSeries::constant(a.clone(), 1))
    }

    fn var_name(&self) -> String {
        self.field.gen_name().unwrap_or("x").to_string()
    }
}

impl fmt::Display for Differential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let dx = TruncSeries::new(&self.field, self.dx.clone(), self.modulus);
        if !dx.is_zero() {
            parts.push(format!("({dx})*d{}", self.var_name()));
        }
        if self.modulus > 1 {
            let dt = TruncSeries::new(&self.field, self.dt.clone(), self.modulus - 1);
            if !dt.is_zero() {
                parts.push(format!("({dt})*dt"));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for Differential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_are_closed() {
        let q = CoeffField::rationals();
        assert!(Differential::d_elem(&q.from_int(7)).is_zero());
        let f5 = CoeffField::finite(5, 2, "θ").unwrap();
        assert!(Differential::d_elem(&f5.gen().unwrap()).is_zero());
        assert!(Differential::dlog_elem(&q.from_int(3)).unwrap().is_zero());
    }

    #[test]
    fn t_dt_vanishes_mod_t2() {
        let k = CoeffField::function_field(&CoeffField::rationals(), "x").unwrap();
        let t = TruncSeries::t(&k, 2);
        let tt = t.mul(&t);
        assert!(Differential::d(&tt).is_zero());
        let w = Differential::d(&t).scale(&t);
        assert!(w.is_zero());
    }

    #[test]
    fn leibniz() {
        let k = CoeffField::function_field(&CoeffField::rationals(), "x").unwrap();
        let x = k.gen().unwrap();
        let a = TruncSeries::new(&k, vec![x.clone(), x.square()], 3);
        let b = TruncSeries::new(&k, vec![x.add(&k.one()), k.from_int(3), x.clone()], 3);
        let lhs = Differential::d(&a.mul(&b));
        let rhs = Differential::d(&a).scale(&b).add(&Differential::d(&b).scale(&a));
        assert_eq!(lhs, rhs);
    }
}
