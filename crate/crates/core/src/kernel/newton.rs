//! Polynomials in z over K[t]/(t^N) and t-adic Newton lifting of simple roots.

use std::fmt;

use super::field::{CoeffField, FieldElem};
use super::poly::Poly;
use super::series::TruncSeries;
use crate::error::{Error, Result};

/// A polynomial in z whose coefficients are series in K[t]/(t^N).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SeriesPoly {
    field: CoeffField,
    modulus: usize,
    coeffs: Vec<TruncSeries>,
}

impl fmt::Debug for SeriesPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("z"))
    }
}

impl SeriesPoly {
    pub fn new(field: &CoeffField, modulus: usize, mut coeffs: Vec<TruncSeries>) -> SeriesPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.modulus() == modulus && c.field() == field));
        SeriesPoly { field: field.clone(), modulus, coeffs }
    }

    pub fn zero(field: &CoeffField, modulus: usize) -> SeriesPoly {
        SeriesPoly::new(field, modulus, Vec::new())
    }

    pub fn one(field: &CoeffField, modulus: usize) -> SeriesPoly {
        SeriesPoly::constant(TruncSeries::one(field, modulus))
    }

    pub fn constant(c: TruncSeries) -> SeriesPoly {
        let (f, m) = (c.field().clone(), c.modulus());
        SeriesPoly::new(&f, m, vec![c])
    }

    /// The variable z.
    pub fn z(field: &CoeffField, modulus: usize) -> SeriesPoly {
        SeriesPoly::new(field, modulus, vec![TruncSeries::zero(field, modulus), TruncSeries::one(field, modulus)])
    }

    /// A t-constant polynomial.
    pub fn from_poly(p: &Poly, modulus: usize) -> SeriesPoly {
        let f = p.field().clone();
        SeriesPoly::new(&f, modulus, p.coeffs().iter().map(|c| TruncSeries::constant(c.clone(), modulus)).collect())
    }

    /// Assembles Σ_j P_j(z)·t^j from the t-coefficient polynomials.
    pub fn from_t_coeffs(field: &CoeffField, polys: &[Poly], modulus: usize) -> SeriesPoly {
        let deg = polys.iter().filter_map(|p| p.degree()).max();
        let Some(deg) = deg else { return SeriesPoly::zero(field, modulus) };
        let coeffs = (0..=deg)
            .map(|i| TruncSeries::new(field, polys.iter().map(|p| p.coeff(i)).collect(), modulus))
            .collect();
        SeriesPoly::new(field, modulus, coeffs)
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn coeffs(&self) -> &[TruncSeries] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> TruncSeries {
        self.coeffs.get(i).cloned().unwrap_or_else(|| TruncSeries::zero(&self.field, self.modulus))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of t^j, as a polynomial in z over K.
    pub fn t_coeff(&self, j: usize) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|c| c.coeff(j)).collect())
    }

    /// Reduction modulo t.
    pub fn reduce(&self) -> Poly {
        self.t_coeff(0)
    }

    pub fn add(&self, o: &SeriesPoly) -> SeriesPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        SeriesPoly::new(&self.field, self.modulus, (0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn neg(&self) -> SeriesPoly {
        SeriesPoly::new(&self.field, self.modulus, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn sub(&self, o: &SeriesPoly) -> SeriesPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &SeriesPoly) -> SeriesPoly {
        if self.is_zero() || o.is_zero() {
            return SeriesPoly::zero(&self.field, self.modulus);
        }
        let mut out = vec![TruncSeries::zero(&self.field, self.modulus); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        SeriesPoly::new(&self.field, self.modulus, out)
    }

    pub fn scale(&self, c: &TruncSeries) -> SeriesPoly {
        SeriesPoly::new(&self.field, self.modulus, self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn pow(&self, e: usize) -> SeriesPoly {
        let mut acc = SeriesPoly::one(&self.field, self.modulus);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative_z(&self) -> SeriesPoly {
        SeriesPoly::new(
            &self.field,
            self.modulus,
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale(&self.field.from_int(i as i64))).collect(),
        )
    }

    /// Evaluates at a series r whose field contains K.
    pub fn eval(&self, r: &TruncSeries) -> Result<TruncSeries> {
        if r.modulus() != self.modulus {
            return Err(Error::ModulusMismatch(r.modulus(), self.modulus));
        }
        let target = r.field();
        let mut acc = TruncSeries::zero(target, self.modulus);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(r).add(&c.embed(target)?);
        }
        Ok(acc)
    }

    /// Truncates every coefficient to modulus m.
    pub fn truncate(&self, m: usize) -> SeriesPoly {
        SeriesPoly::new(&self.field, m, self.coeffs.iter().map(|c| c.truncate(m)).collect())
    }

    /// Coefficients mapped into an extension field.
    pub fn embed(&self, target: &CoeffField) -> Result<SeriesPoly> {
        let coeffs = self.coeffs.iter().map(|c| c.embed(target)).collect::<Result<Vec<_>>>()?;
        Ok(SeriesPoly::new(target, self.modulus, coeffs))
    }

    pub fn display_in(&self, var: &str) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let compound = cs.contains(' ');
            let term = if k == 0 {
                if compound && !out.is_empty() { format!("({cs})") } else { cs }
            } else {
                let mono = if k == 1 { var.to_string() } else { format!("{var}^{k}") };
                match cs.as_str() {
                    "1" => mono,
                    "-1" => format!("-{mono}"),
                    _ if compound => format!("({cs})*{mono}"),
                    _ => format!("{cs}*{mono}"),
                }
            };
            if out.is_empty() {
                out = term;
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

/// Lifts a simple root `r0` of `f mod t` to a root of `f` in K'[t]/(t^N), K' = field of `r0`.
pub fn newton_lift_root(f: &SeriesPoly, r0: &FieldElem) -> Result<TruncSeries> {
    let n = f.modulus();
    let kp = r0.field().clone();
    let fe = f.embed(&kp)?;
    let df = fe.derivative_z();
    let r0s = TruncSeries::constant(r0.clone(), n);
    if !fe.eval(&r0s)?.constant_term().is_zero() {
        return Err(Error::InvalidArgument(format!("{r0} is not a root of {} mod t", f.display_in("z"))));
    }
    if df.eval(&r0s)?.constant_term().is_zero() {
        return Err(Error::MultipleRoot(r0.to_string()));
    }
    let mut r = r0s;
    let mut prec = 1;
    loop {
        let v = fe.eval(&r)?;
        if v.is_zero() {
            return Ok(r);
        }
        assert!(prec < 2 * n, "Newton iteration failed to converge");
        let d = df.eval(&r)?;
        r = r.sub(&v.div(&d)?);
        prec *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::qpoly::{q, qf};

    #[test]
    fn linear_root() {
        let k = CoeffField::rationals();
        let f = SeriesPoly::z(&k, 3).sub(&SeriesPoly::constant(TruncSeries::from_ints(&k, &[1, 1], 3)));
        let r = newton_lift_root(&f, &k.one()).unwrap();
        assert_eq!(r, TruncSeries::from_ints(&k, &[1, 1], 3));
    }

    #[test]
    fn square_root_binomial() {
        let k = CoeffField::rationals();
        let z = SeriesPoly::z(&k, 3);
        let f = z.mul(&z).sub(&SeriesPoly::constant(TruncSeries::from_ints(&k, &[1, 1], 3)));
        let r = newton_lift_root(&f, &k.one()).unwrap();
        let want = TruncSeries::new(&k, vec![k.one(), k.from_q(&qf(1, 2)).unwrap(), k.from_q(&qf(-1, 8)).unwrap()], 3);
        assert_eq!(r, want);
    }

    #[test]
    fn constant_root_in_number_field() {
        let k = CoeffField::rationals();
        let i = CoeffField::number_field(&[q(1), q(0), q(1)], "θ").unwrap();
        let f = SeriesPoly::from_poly(&Poly::from_ints(&k, &[1, 0, 1]), 4);
        let th = i.gen().unwrap();
        let r = newton_lift_root(&f, &th).unwrap();
        assert_eq!(r, TruncSeries::constant(th, 4));
    }

    #[test]
    fn double_root_rejected() {
        let k = CoeffField::rationals();
        let f = SeriesPoly::from_poly(&Poly::from_ints(&k, &[0, 0, 1]), 3);
        assert!(matches!(newton_lift_root(&f, &k.zero()), Err(Error::MultipleRoot(_))));
    }
}
