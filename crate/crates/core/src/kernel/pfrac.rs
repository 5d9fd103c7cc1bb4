//! Full partial-fraction decomposition over ℚ, in the ℚ-basis
//! {z^j} ∪ {z^j / q^k : q monic irreducible, j < deg q, k ≥ 1}.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::factor;
use super::qpoly::{self, Q};

/// A basis element of ℚ(z) as a ℚ-vector space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PfBasis {
    /// z^j
    Monomial(usize),
    /// z^j / q^k with q monic irreducible (ascending coefficients), j < deg q.
    Polar { q: Vec<Q>, k: usize, j: usize },
}

/// Coordinates of `num/den` in the partial-fraction basis. `den` must be nonzero.
pub fn decompose(num: &[Q], den: &[Q]) -> BTreeMap<PfBasis, Q> {
    let mut out = BTreeMap::new();
    let num = qpoly::trim(num.to_vec());
    if num.is_empty() {
        return out;
    }
    let (poly, r) = qpoly::divrem(&num, den);
    for (j, c) in poly.iter().enumerate() {
        if !c.is_zero() {
            out.insert(PfBasis::Monomial(j), c.clone());
        }
    }
    if r.is_empty() {
        return out;
    }
    let (lc, factors) = factor::factor_qpoly(den);
    let r = qpoly::scale(&r, &lc.recip());
    let full: Vec<(Vec<Q>, usize, Vec<Q>)> = factors
        .iter()
        .map(|(q, e)| {
            let mut qe = vec![Q::from_integer(1.into())];
            for _ in 0..*e {
                qe = qpoly::mul(&qe, q);
            }
            (q.clone(), *e, qe)
        })
        .collect();
    for (i, (q, e, qe)) in full.iter().enumerate() {
        let mut cof = vec![Q::from_integer(1.into())];
        for (l, (_, _, other)) in full.iter().enumerate() {
            if l != i {
                cof = qpoly::mul(&cof, other);
            }
        }
        // r/den = Σ A_i / q_i^{e_i} with A_i = r · cof^{-1} mod q_i^{e_i}
        let (_, s, _) = qpoly::xgcd(&cof, qe);
        let mut a = qpoly::rem(&qpoly::mul(&r, &s), qe);
        // q-adic digits: A = Σ_k c_k q^k, so A/q^e = Σ_k c_k / q^{e-k}
        for k in 0..*e {
            let (quo, digit) = qpoly::divrem(&a, q);
            for (j, c) in digit.iter().enumerate() {
                if !c.is_zero() {
                    out.insert(PfBasis::Polar { q: q.clone(), k: e - k, j }, c.clone());
                }
            }
            a = quo;
        }
    }
    out
}

/// Rebuilds `(num, den)` from coordinates (used by tests and round-trips).
pub fn recompose(coords: &BTreeMap<PfBasis, Q>) -> (Vec<Q>, Vec<Q>) {
    let one = vec![Q::from_integer(1.into())];
    let (mut num, mut den) = (Vec::new(), one);
    for (b, c) in coords {
        let (n, d) = match b {
            PfBasis::Monomial(j) => {
                let mut v = vec![Q::from_integer(0.into()); *j];
                v.push(c.clone());
                (v, vec![Q::from_integer(1.into())])
            }
            PfBasis::Polar { q, k, j } => {
                let mut v = vec![Q::from_integer(0.into()); *j];
                v.push(c.clone());
                let mut d = vec![Q::from_integer(1.into())];
                for _ in 0..*k {
                    d = qpoly::mul(&d, q);
                }
                (v, d)
            }
        };
        num = qpoly::add(&qpoly::mul(&num, &d), &qpoly::mul(&n, &den));
        den = qpoly::mul(&den, &d);
    }
    let g = qpoly::gcd(&num, &den);
    if num.is_empty() {
        return (num, vec![Q::from_integer(1.into())]);
    }
    let (n, d) = (qpoly::divrem(&num, &g).0, qpoly::divrem(&den, &g).0);
    let l = d.last().unwrap().recip();
    (qpoly::scale(&n, &l), qpoly::scale(&d, &l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::qpoly::{q, trim};

    fn p(v: &[i64]) -> Vec<Q> {
        trim(v.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn simple_poles() {
        // 1/(z^2 - 1) = (1/2)/(z-1) - (1/2)/(z+1)
        let c = decompose(&p(&[1]), &p(&[-1, 0, 1]));
        assert_eq!(c.len(), 2);
        assert_eq!(c[&PfBasis::Polar { q: p(&[-1, 1]), k: 1, j: 0 }], crate::kernel::qpoly::qf(1, 2));
        assert_eq!(c[&PfBasis::Polar { q: p(&[1, 1]), k: 1, j: 0 }], crate::kernel::qpoly::qf(-1, 2));
    }

    #[test]
    fn roundtrip_with_multiplicity() {
        let num = p(&[3, -1, 0, 2, 5, 1]);
        let den = qpoly::mul(&qpoly::mul(&p(&[-2, 0, 1]), &p(&[-2, 0, 1])), &p(&[1, 3]));
        let c = decompose(&num, &den);
        let (n, d) = recompose(&c);
        let g = qpoly::gcd(&num, &den);
        let (n0, d0) = (qpoly::divrem(&num, &g).0, qpoly::divrem(&den, &g).0);
        let l = d0.last().unwrap().recip();
        assert_eq!((n, d), (qpoly::scale(&n0, &l), qpoly::scale(&d0, &l)));
    }
}
