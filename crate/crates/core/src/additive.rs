//! Additive dilogarithms on truncated rings, higher additive polylogarithms,
//! and Cathelineau's maps β₂(k) → k ⊗ k^× → Ω¹_k.

use std::collections::BTreeMap;
use std::fmt;

use crate::bloch::{unit_coordinates, FormalSum, WedgeBasis};
use crate::error::{Error, Result};
use crate::kernel::{CoeffField, Differential, FieldElem, TruncSeries, Q};

fn check_flat(x: &TruncSeries) -> Result<()> {
    if x.is_flat() {
        Ok(())
    } else {
        Err(Error::NotFlat(x.to_string()))
    }
}

fn check_flat_elem(a: &FieldElem) -> Result<()> {
    if a.is_zero() || a.is_one() {
        Err(Error::NotFlat(a.to_string()))
    } else {
        Ok(())
    }
}

/// ℓi_{m,w}(x) for x ∈ k_m^♭, m < w < 2m.
pub fn li_mw(m: usize, w: usize, x: &TruncSeries) -> Result<FieldElem> {
    if !(m < w && w < 2 * m) {
        return Err(Error::BadWeight(format!("need m < w < 2m, got m = {m}, w = {w}")));
    }
    if x.modulus() != m {
        return Err(Error::ModulusMismatch(x.modulus(), m));
    }
    check_flat(x)?;
    let s = x.constant_term();
    let u = x.log_circ()?;
    let g = u.extend(w).exp_nil()?.scale(s).one_minus();
    let du = u.derivative().truncate(w - m).extend(w);
    Ok(g.log_circ()?.mul(&du).coeff(w - 1))
}

/// ℓi_{2,3}(s + at) = −a³/(2s²(1−s)²).
pub fn li_23(x: &TruncSeries) -> Result<FieldElem> {
    check_flat(x)?;
    let s = x.constant_term();
    let a = if x.modulus() > 1 { x.coeff(1) } else { s.zero_like() };
    let oms = s.one_like().sub(s);
    let den = s.square().mul(&oms.square()).mul_int(2);
    a.pow_u(3).neg().div(&den)
}

/// li_n(s + at) = ((−1)ⁿ/n!)·(a/s)^{2n−1}·(dⁿ/duⁿ) log((1−se^u)/(1−s)) at u = 0.
pub fn li_higher(n: usize, s: &FieldElem, a: &FieldElem) -> Result<FieldElem> {
    if n < 2 {
        return Err(Error::BadWeight(format!("li_n needs n ≥ 2, got {n}")));
    }
    check_flat_elem(s)?;
    if a.field() != s.field() {
        return Err(Error::FieldMismatch(s.field().to_string(), a.field().to_string()));
    }
    // c_n = uⁿ-coefficient of log°(1 − s·e^u), which is the n-th derivative divided by n!
    let field = s.field();
    let u = TruncSeries::t(field, n + 1);
    let c = u.exp_nil()?.scale(s).one_minus().log_circ()?.coeff(n);
    let r = a.div(s)?.pow_u(2 * n as u128 - 1).mul(&c);
    Ok(if n.is_multiple_of(2) { r } else { r.neg() })
}

/// An element of k ⊗ k^×, stored as raw (scalar, unit) pairs.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorKUnits {
    field: CoeffField,
    terms: Vec<(FieldElem, FieldElem)>,
}

impl fmt::Debug for TensorKUnits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TensorKUnits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(a, b)| format!("({a})⊗({b})")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl TensorKUnits {
    pub fn zero(field: &CoeffField) -> TensorKUnits {
        TensorKUnits { field: field.clone(), terms: Vec::new() }
    }

    /// a ⊗ b.
    pub fn pure(a: &FieldElem, b: &FieldElem) -> Result<TensorKUnits> {
        let mut t = TensorKUnits::zero(a.field());
        t.push(a, b)?;
        Ok(t)
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn terms(&self) -> &[(FieldElem, FieldElem)] {
        &self.terms
    }

    pub fn push(&mut self, a: &FieldElem, b: &FieldElem) -> Result<()> {
        if b.is_zero() {
            return Err(Error::ZeroUnit);
        }
        if !a.is_zero() {
            self.terms.push((a.clone(), b.clone()));
        }
        Ok(())
    }

    pub fn add(&self, o: &TensorKUnits) -> TensorKUnits {
        let mut t = self.terms.clone();
        t.extend(o.terms.iter().cloned());
        TensorKUnits { field: self.field.clone(), terms: t }
    }

    /// Canonical form over the factor basis of the unit slot (K ∈ {ℚ, ℚ(z)}).
    /// Signs are dropped since k is a ℚ-vector space.
    pub fn canonical(&self) -> Result<BTreeMap<WedgeBasis, FieldElem>> {
        let mut out: BTreeMap<WedgeBasis, FieldElem> = BTreeMap::new();
        for (a, b) in &self.terms {
            let coords = unit_coordinates(&TruncSeries::constant(b.clone(), 1))?;
            for (basis, e) in coords {
                let v = a.mul(&self.field.from_q(&e)?);
                let entry = out.entry(basis).or_insert_with(|| self.field.zero());
                *entry = entry.add(&v);
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.canonical()?.is_empty())
    }
}

/// A K-linear combination Σ c·⟨a⟩ of symbols with a ∈ K^♭.
#[derive(Clone, PartialEq, Eq)]
pub struct Beta2Symbol {
    field: CoeffField,
    terms: Vec<(FieldElem, FieldElem)>,
}

impl fmt::Debug for Beta2Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(c, a)| format!("({c})⟨{a}⟩")).collect();
        write!(f, "{}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

impl Beta2Symbol {
    pub fn zero(field: &CoeffField) -> Beta2Symbol {
        Beta2Symbol { field: field.clone(), terms: Vec::new() }
    }

    /// The generator ⟨a⟩.
    pub fn symbol(a: &FieldElem) -> Result<Beta2Symbol> {
        let mut s = Beta2Symbol::zero(a.field());
        s.add_term(&a.one_like(), a)?;
        Ok(s)
    }

    pub fn terms(&self) -> &[(FieldElem, FieldElem)] {
        &self.terms
    }

    pub fn add_term(&mut self, c: &FieldElem, a: &FieldElem) -> Result<()> {
        check_flat_elem(a)?;
        if c.is_zero() {
            return Ok(());
        }
        if let Some(pos) = self.terms.iter().position(|(_, b)| b == a) {
            let sum = self.terms[pos].0.add(c);
            if sum.is_zero() {
                self.terms.remove(pos);
            } else {
                self.terms[pos].0 = sum;
            }
        } else {
            self.terms.push((c.clone(), a.clone()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Beta2Symbol) -> Beta2Symbol {
        let mut out = self.clone();
        for (c, a) in &o.terms {
            out.add_term(c, a).expect("generators already flat");
        }
        out
    }

    /// Scalar multiplication on the coefficient side.
    pub fn scale(&self, c: &FieldElem) -> Beta2Symbol {
        let mut out = Beta2Symbol::zero(&self.field);
        for (d, a) in &self.terms {
            out.add_term(&d.mul(c), a).expect("generators already flat");
        }
        out
    }
}

/// ⟨p⟩ − ⟨q⟩ + p·⟨q/p⟩ + (1−p)·⟨(1−q)/(1−p)⟩.
pub fn four_term(p: &FieldElem, q: &FieldElem) -> Result<Beta2Symbol> {
    check_flat_elem(p)?;
    check_flat_elem(q)?;
    if p == q {
        return Err(Error::NotInGeneralPosition(format!("p = q = {p}")));
    }
    let one = p.one_like();
    let omp = one.sub(p);
    let mut s = Beta2Symbol::zero(p.field());
    s.add_term(&one, p)?;
    s.add_term(&one.neg(), q)?;
    s.add_term(p, &q.div(p)?)?;
    s.add_term(&omp, &one.sub(q).div(&omp)?)?;
    Ok(s)
}

/// D(⟨a⟩) = a ⊗ a + (1−a) ⊗ (1−a), extended K-linearly.
pub fn cathelineau_d(xi: &Beta2Symbol) -> Result<TensorKUnits> {
    let mut out = TensorKUnits::zero(&xi.field);
    for (c, a) in &xi.terms {
        check_flat_elem(a)?;
        let oma = a.one_like().sub(a);
        out.push(&c.mul(a), a)?;
        out.push(&c.mul(&oma), &oma)?;
    }
    Ok(out)
}

/// L(a ⊗ b) = a·db/b.
pub fn cathelineau_l(tau: &TensorKUnits) -> Result<Differential> {
    let mut out = Differential::zero(&tau.field, 1);
    for (a, b) in &tau.terms {
        out = out.add(&Differential::dlog_elem(b)?.scale_elem(a));
    }
    Ok(out)
}

/// ⟨a⟩ = a + a(1−a)t in k₂.
pub fn beta_embed(a: &FieldElem) -> Result<TruncSeries> {
    check_flat_elem(a)?;
    let x = TruncSeries::new(a.field(), vec![a.clone(), a.mul(&a.one_like().sub(a))], 2);
    check_flat(&x)?;
    Ok(x)
}

/// [⟨a⟩] − [⟨b⟩] + [a⋆⟨b/a⟩] + [(b−1)⋆⟨(1−a)/(1−b)⟩] in ℚ[k₂^♭].
pub fn embedded_four_term(a: &FieldElem, b: &FieldElem) -> Result<FormalSum> {
    check_flat_elem(a)?;
    check_flat_elem(b)?;
    if a == b {
        return Err(Error::NotInGeneralPosition(format!("a = b = {a}")));
    }
    let one = a.one_like();
    let g3 = beta_embed(&b.div(a)?)?.star_scale(a)?;
    let g4 = beta_embed(&one.sub(a).div(&one.sub(b))?)?.star_scale(&b.sub(&one))?;
    let mut s = FormalSum::generator(crate::bloch::CoeffRing::Rationals, &beta_embed(a)?)?;
    s.add_term(Q::from_integer((-1).into()), &beta_embed(b)?)?;
    s.add_term(Q::from_integer(1.into()), &g3)?;
    s.add_term(Q::from_integer(1.into()), &g4)?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{delta_in, five_term, CoeffRing, Wedge2};
    use crate::kernel::qpoly::{q, qf};

    fn k() -> CoeffField {
        CoeffField::rationals()
    }

    fn e(n: i64, d: i64) -> FieldElem {
        k().from_q(&qf(n, d)).unwrap()
    }

    fn ser(v: &[(i64, i64)], m: usize) -> TruncSeries {
        TruncSeries::new(&k(), v.iter().map(|&(n, d)| e(n, d)).collect(), m)
    }

    #[test]
    fn li23_pinned() {
        assert_eq!(li_mw(2, 3, &ser(&[(1, 2), (1, 1)], 2)).unwrap(), e(-8, 1));
        assert_eq!(li_mw(2, 3, &ser(&[(2, 1), (3, 1)], 2)).unwrap(), e(-27, 8));
        assert_eq!(li_23(&ser(&[(2, 1), (3, 1)], 2)).unwrap(), e(-27, 8));
        assert!(li_mw(3, 4, &ser(&[(5, 1)], 3)).unwrap().is_zero());
        assert!(li_23(&ser(&[(5, 1)], 1)).unwrap().is_zero());
        assert!(matches!(li_mw(2, 4, &ser(&[(2, 1)], 2)), Err(Error::BadWeight(_))));
        assert!(matches!(li_mw(2, 3, &ser(&[(1, 1), (1, 1)], 2)), Err(Error::NotFlat(_))));
    }

    #[test]
    fn li_higher_values() {
        let (s, a) = (e(3, 1), e(2, 1));
        assert_eq!(li_higher(2, &s, &a).unwrap(), li_23(&TruncSeries::new(&k(), vec![s.clone(), a.clone()], 2)).unwrap());
        // a⁵(1+s)/(6s⁴(1−s)³) at s = 3, a = 2: 32·4/(6·81·(−8))
        assert_eq!(li_higher(3, &s, &a).unwrap(), k().from_q(&(qf(32 * 4, 6 * 81) / q(-8))).unwrap());
        assert!(li_higher(4, &s, &k().zero()).unwrap().is_zero());
        assert!(matches!(li_higher(1, &s, &a), Err(Error::BadWeight(_))));
    }

    #[test]
    fn five_term_killed() {
        let x = ser(&[(2, 1), (1, 3), (-1, 1)], 3);
        let y = ser(&[(5, 1), (2, 1), (1, 7)], 3);
        let ft = five_term(&x, &y).unwrap();
        for w in [4, 5] {
            let v = ft.evaluate(&k(), |g| li_mw(3, w, g)).unwrap();
            assert!(v.is_zero(), "w = {w}: {v}");
        }
    }

    #[test]
    fn cathelineau() {
        let (p, qq) = (e(3, 1), e(-2, 5));
        let ft = four_term(&p, &qq).unwrap();
        let d = cathelineau_d(&ft).unwrap();
        assert!(d.is_zero().unwrap(), "{d}");
        assert!(cathelineau_l(&d).unwrap().is_zero());
        assert!(cathelineau_l(&TensorKUnits::pure(&k().one(), &e(7, 1)).unwrap()).unwrap().is_zero());
        let qz = CoeffField::function_field(&k(), "z").unwrap();
        let z = qz.gen().unwrap();
        let d = cathelineau_d(&Beta2Symbol::symbol(&z).unwrap().scale(&z)).unwrap();
        assert!(!d.is_zero().unwrap());
        assert!(cathelineau_l(&d).unwrap().is_zero());
    }

    #[test]
    fn beta_identities() {
        let (a, b) = (e(3, 1), e(-1, 4));
        assert_eq!(beta_embed(&e(1, 2)).unwrap(), ser(&[(1, 2), (1, 4)], 2));
        let lhs = beta_embed(&b).unwrap().div(&beta_embed(&a).unwrap()).unwrap();
        assert_eq!(lhs, beta_embed(&b.div(&a).unwrap()).unwrap().star_scale(&a).unwrap());
        let one = k().one();
        let lhs = beta_embed(&a).unwrap().inv().unwrap().one_minus();
        let rhs = TruncSeries::new(&k(), vec![one.sub(&a.inv().unwrap()), k().zero()], 2).mul(&ser(&[(1, 1), (-1, 1)], 2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn embedded_four_term_infinitesimal() {
        let (a, b) = (e(3, 1), e(-1, 4));
        let s = embedded_four_term(&a, &b).unwrap();
        assert!(s.evaluate(&k(), li_23).unwrap().is_zero());
        let w = delta_in(&k(), 2, &s).unwrap().canonical().unwrap();
        assert!(w.infinitesimal_part().is_zero());
        let one = k().one();
        let c = one.sub(&a.inv().unwrap()).div(&one.sub(&b.inv().unwrap())).unwrap();
        let cs = FormalSum::generator(CoeffRing::Rationals, &TruncSeries::constant(c, 2)).unwrap();
        let wc = delta_in(&k(), 2, &cs).unwrap().canonical().unwrap();
        assert_eq!(w, wc);
        assert!(!Wedge2::pair(&beta_embed(&a).unwrap(), &beta_embed(&b).unwrap()).unwrap().is_zero());
    }
}
