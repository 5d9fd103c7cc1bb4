//! Dense univariate polynomials over ℚ as plain coefficient vectors.
//!
//! These helpers back number-field arithmetic and factorization; the
//! field-generic [`Poly`](super::poly::Poly) type sits on top of them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn trim(mut a: Vec<Q>) -> Vec<Q> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub fn degree(a: &[Q]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(Q::zero);
        let y = b.get(i).cloned().unwrap_or_else(Q::zero);
        out.push(x + y);
    }
    trim(out)
}

pub fn neg(a: &[Q]) -> Vec<Q> {
    a.iter().map(|c| -c).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    add(a, &neg(b))
}

pub fn scale(a: &[Q], c: &Q) -> Vec<Q> {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

/// Integer numerators over a common denominator.
fn clear_denominators(a: &[Q]) -> (Vec<BigInt>, BigInt) {
    let mut d = BigInt::one();
    for c in a {
        if !c.denom().is_one() {
            d = d.lcm(c.denom());
        }
    }
    let nums = a.iter().map(|c| c.numer() * (&d / c.denom())).collect();
    (nums, d)
}

pub fn mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (x, dx) = clear_denominators(a);
    let (y, dy) = clear_denominators(b);
    let mut out = vec![BigInt::zero(); x.len() + y.len() - 1];
    for (i, u) in x.iter().enumerate() {
        if u.is_zero() {
            continue;
        }
        for (j, v) in y.iter().enumerate() {
            out[i + j] += u * v;
        }
    }
    let d = dx * dy;
    trim(out.into_iter().map(|n| Q::new(n, d.clone())).collect())
}

/// Quotient and remainder; panics on a zero divisor.
pub fn divrem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let b = trim(b.to_vec());
    let db = degree(&b).expect("division by zero polynomial");
    let a = trim(a.to_vec());
    if a.len() < b.len() {
        return (Vec::new(), a);
    }
    let (mut r, da) = clear_denominators(&a);
    let (y, dy) = clear_denominators(&b);
    let lc = y[db].clone();
    let unit = lc.is_one();
    let steps = r.len() - db;
    let mut quo = vec![BigInt::zero(); steps];
    for k in (0..steps).rev() {
        let c = r[k + db].clone();
        if !unit {
            for x in quo.iter_mut().skip(k + 1) {
                *x *= &lc;
            }
            for x in r.iter_mut().take(k + db) {
                *x *= &lc;
            }
        }
        if !c.is_zero() {
            for (i, v) in y.iter().enumerate().take(db) {
                r[k + i] -= &c * v;
            }
        }
        r[k + db] = BigInt::zero();
        quo[k] = c;
    }
    // lc^steps * A = Q * B + R
    let scale = num_traits::pow(lc, steps);
    let qd = &scale * &da;
    let quo = quo.into_iter().map(|n| Q::new(n * &dy, qd.clone())).collect();
    r.truncate(db);
    let rem = r.into_iter().map(|n| Q::new(n, qd.clone())).collect();
    (trim(quo), trim(rem))
}

pub fn rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    divrem(a, b).1
}

pub fn monic(a: &[Q]) -> Vec<Q> {
    match a.last() {
        None => Vec::new(),
        Some(l) => {
            let inv = l.recip();
            a.iter().map(|c| c * &inv).collect()
        }
    }
}

pub fn gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

fn int_trim(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn int_primitive(a: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for c in &a {
        g = g.gcd(c);
    }
    if g.is_zero() || g.is_one() {
        return a;
    }
    a.into_iter().map(|c| c / &g).collect()
}

/// Monic gcd through the primitive remainder sequence over ℤ.
pub fn gcd_primitive(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut x = primitive_part(a);
    let mut y = primitive_part(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        if y.len() == 1 {
            return vec![Q::one()];
        }
        let lc = y.last().unwrap().clone();
        let mut r = x;
        while r.len() >= y.len() {
            let shift = r.len() - y.len();
            let c = r.last().unwrap().clone();
            r = r.into_iter().map(|v| v * &lc).collect();
            for (i, yi) in y.iter().enumerate() {
                r[i + shift] -= &c * yi;
            }
            r = int_trim(r);
        }
        x = y;
        y = int_primitive(r);
    }
    monic(&from_ints(&x))
}

/// Returns `(g, s, t)` with `s·a + t·b = g`, `g` monic (or zero).
pub fn xgcd(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>, Vec<Q>) {
    let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
    let (mut s0, mut s1) = (vec![Q::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![Q::one()]);
    while !r1.is_empty() {
        let (qq, r) = divrem(&r0, &r1);
        let s2 = sub(&s0, &mul(&qq, &s1));
        let t2 = sub(&t0, &mul(&qq, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    match r0.last().cloned() {
        None => (r0, s0, t0),
        Some(l) => {
            let inv = l.recip();
            (scale(&r0, &inv), scale(&s0, &inv), scale(&t0, &inv))
        }
    }
}

pub fn derivative(a: &[Q]) -> Vec<Q> {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Q::from_integer(BigInt::from(i)))
            .collect(),
    )
}

pub fn eval(a: &[Q], x: &Q) -> Q {
    let mut acc = Q::zero();
    for c in a.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Clears denominators and content: returns the primitive integer polynomial
/// with positive leading coefficient proportional to `a`.
pub fn primitive_part(a: &[Q]) -> Vec<BigInt> {
    let a = trim(a.to_vec());
    if a.is_empty() {
        return Vec::new();
    }
    let mut l = BigInt::one();
    for c in &a {
        l = l.lcm(c.denom());
    }
    let ints: Vec<BigInt> = a.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    ints.into_iter().map(|c| &c / &g * &sign).collect()
}

pub fn from_ints(a: &[BigInt]) -> Vec<Q> {
    trim(a.iter().map(|c| Q::from_integer(c.clone())).collect())
}

/// Squarefree decomposition (Yun): returns `(f_i, i)` with `a = lc·∏ f_iⁱ`, each `f_i` monic.
pub fn squarefree(a: &[Q]) -> Vec<(Vec<Q>, usize)> {
    let a = monic(&trim(a.to_vec()));
    let mut out = Vec::new();
    if degree(&a).unwrap_or(0) == 0 {
        return out;
    }
    let da = derivative(&a);
    let b = gcd(&a, &da);
    let mut c = divrem(&a, &b).0;
    let mut d = sub(&divrem(&da, &b).0, &derivative(&c));
    let mut i = 1;
    loop {
        let g = gcd(&c, &d);
        let c_next = divrem(&c, &g).0;
        if degree(&g).unwrap_or(0) > 0 {
            out.push((g.clone(), i));
        }
        if degree(&c_next).unwrap_or(0) == 0 {
            break;
        }
        d = sub(&divrem(&d, &g).0, &derivative(&c_next));
        c = c_next;
        i += 1;
    }
    out
}

/// Composition `a(b(z))`.
pub fn compose(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut acc: Vec<Q> = Vec::new();
    for c in a.iter().rev() {
        acc = add(&mul(&acc, b), std::slice::from_ref(c));
    }
    acc
}

/// Determinant over ℚ by Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut det = Q::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for k in col..n {
                let v = &f * &m[col][k];
                m[r][k] -= v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> Vec<Q> {
        trim(v.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn divrem_reconstructs() {
        let a = p(&[1, 2, 3, 4]);
        let b = p(&[-1, 0, 2]);
        let (qq, r) = divrem(&a, &b);
        assert_eq!(add(&mul(&qq, &b), &r), a);
        assert!(r.len() < b.len());
    }

    #[test]
    fn xgcd_bezout() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        let (g, s, t) = xgcd(&a, &b);
        assert_eq!(g, p(&[1, 1]));
        assert_eq!(add(&mul(&s, &a), &mul(&t, &b)), g);
    }

    #[test]
    fn yun_splits_multiplicities() {
        // (z-1)^2 (z+2)^3 z
        let f = mul(&mul(&mul(&p(&[-1, 1]), &p(&[-1, 1])), &mul(&p(&[2, 1]), &mul(&p(&[2, 1]), &p(&[2, 1])))), &p(&[0, 1]));
        let sq = squarefree(&f);
        assert_eq!(sq, vec![(p(&[0, 1]), 1), (p(&[-1, 1]), 2), (p(&[2, 1]), 3)]);
    }

    #[test]
    fn primitive_clears() {
        let a = vec![qf(1, 2), qf(-3, 4)];
        assert_eq!(primitive_part(&a), vec![BigInt::from(-2), BigInt::from(3)]);
    }

    #[test]
    fn det_small() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        assert_eq!(determinant(m), q(5));
    }
}
