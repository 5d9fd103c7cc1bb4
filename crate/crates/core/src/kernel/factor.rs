//! Exact factorization of integers and of univariate polynomials over ℚ.
//!
//! Polynomials go through Yun's squarefree decomposition, then a Zassenhaus
//! scheme: factor modulo a good prime, Hensel-lift, recombine.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::fpoly;
use super::qpoly::{self, Q};

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn is_probable_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let bp = BigInt::from(p);
        if *n == bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &SMALL_PRIMES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2), n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2);
    }
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut x = BigInt::from(2);
        let mut y = x.clone();
        let mut d = BigInt::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_into(n: BigInt, out: &mut Vec<BigInt>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(&n);
    let rest = &n / &d;
    factor_into(d, out);
    factor_into(rest, out);
}

/// Prime factorization of `|n|`, sorted by prime. Panics on zero.
pub fn factor_integer(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(!n.is_zero(), "factor_integer(0)");
    let mut n = n.abs();
    let mut primes = Vec::new();
    let mut d = 2u64;
    while d < 10_000 {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        while (&n % &bd).is_zero() {
            primes.push(bd.clone());
            n /= &bd;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    factor_into(n, &mut primes);
    primes.sort();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// `x = sign · ∏ p^e` with signed exponents; panics on zero.
pub fn factor_rational(x: &Q) -> (Sign, Vec<(BigInt, i64)>) {
    assert!(!x.is_zero(), "factor_rational(0)");
    let mut out: Vec<(BigInt, i64)> = factor_integer(x.numer())
        .into_iter()
        .map(|(p, e)| (p, e as i64))
        .collect();
    out.extend(factor_integer(x.denom()).into_iter().map(|(p, e)| (p, -(e as i64))));
    out.sort();
    let sign = if x.is_negative() { Sign::Minus } else { Sign::Plus };
    (sign, out)
}

fn int_to_mod(a: &[BigInt], p: u64) -> Vec<u64> {
    let bp = BigInt::from(p);
    fpoly::trim(a.iter().map(|c| c.mod_floor(&bp).to_u64().unwrap()).collect())
}

fn sym_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn int_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn int_reduce(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn mod_to_int(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts `f ≡ g·h (mod p)` with `g` monic to a factorization modulo `p^k`.
fn hensel_two(f: &[BigInt], g: &[u64], h: &[u64], p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let (one, s, t) = fpoly::xgcd(g, h, p);
    debug_assert_eq!(one, vec![1]);
    let bp = BigInt::from(p);
    let mut g_int = mod_to_int(g);
    let mut h_int = mod_to_int(h);
    // pin the leading coefficient of h to that of f exactly
    let lc = f.last().unwrap().clone();
    *h_int.last_mut().unwrap() = lc;
    let mut pj = bp.clone();
    for _ in 1..k {
        let pj1 = &pj * &bp;
        let prod = int_mul(&g_int, &h_int);
        let n = f.len().max(prod.len());
        let diff: Vec<BigInt> = (0..n)
            .map(|i| {
                let a = f.get(i).cloned().unwrap_or_default();
                let b = prod.get(i).cloned().unwrap_or_default();
                (a - b).mod_floor(&pj1)
            })
            .collect();
        let e: Vec<BigInt> = diff.iter().map(|c| c / &pj).collect();
        let e = int_to_mod(&e, p);
        let te = fpoly::mul(&t, &e, p);
        let (q, dg) = fpoly::divrem(&te, g, p);
        let dh = fpoly::add(&fpoly::mul(&s, &e, p), &fpoly::mul(&q, h, p), p);
        let add_scaled = |x: &mut Vec<BigInt>, d: &[u64]| {
            if x.len() < d.len() {
                x.resize(d.len(), BigInt::zero());
            }
            for (i, &c) in d.iter().enumerate() {
                x[i] += &pj * BigInt::from(c);
            }
        };
        add_scaled(&mut g_int, &dg);
        add_scaled(&mut h_int, &dh);
        g_int = int_reduce(&g_int, &pj1);
        h_int = int_reduce(&h_int, &pj1);
        pj = pj1;
    }
    (g_int, h_int)
}

fn coeff_bound(f: &[BigInt]) -> BigInt {
    let n = f.len() as u32 - 1;
    let norm_sq: BigInt = f.iter().map(|c| c * c).sum();
    let norm = norm_sq.sqrt() + 1;
    let lc = f.last().unwrap().abs();
    (BigInt::one() << n) * norm * &lc * 2 * lc
}

/// Exact division of integer polynomials, `None` if not exact.
fn int_divide(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let (q, r) = qpoly::divrem(&qpoly::from_ints(a), &qpoly::from_ints(b));
    if !r.is_empty() || q.iter().any(|c| !c.is_integer()) {
        return None;
    }
    Some(q.iter().map(|c| c.to_integer()).collect())
}

/// Irreducible factors of a primitive squarefree integer polynomial of positive degree.
fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n == 1 {
        return vec![f.to_vec()];
    }
    let lc = f.last().unwrap().clone();
    let mut p = 3u64;
    let fbar = loop {
        if (&lc % BigInt::from(p)).is_zero() {
            p = next_prime(p);
            continue;
        }
        let fb = int_to_mod(f, p);
        let d = fpoly::derivative(&fb, p);
        if fb.len() == f.len() && fpoly::gcd(&fb, &d, p) == vec![1] {
            break fb;
        }
        p = next_prime(p);
    };
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let mods = fpoly::factor_squarefree(&fbar, p, &mut rng);
    if mods.len() == 1 {
        return vec![f.to_vec()];
    }
    let bound = coeff_bound(f);
    let bp = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = bp.clone();
    while pk <= bound {
        pk *= &bp;
        k += 1;
    }
    // lift one factor at a time off the cofactor
    let mut lifted = Vec::new();
    let mut rest = f.to_vec();
    let mut rest_mod = fbar.clone();
    for g in &mods[..mods.len() - 1] {
        let h = fpoly::divrem(&rest_mod, g, p).0;
        let (gl, hl) = hensel_two(&rest, g, &h, p, k);
        lifted.push(gl);
        rest = hl;
        rest_mod = h;
    }
    let lc_inv_last = {
        // last factor: monic normalization of the cofactor modulo p^k
        let l = rest.last().unwrap().clone();
        let li = l.modinv(&pk).expect("leading coefficient invertible mod p^k");
        int_reduce(&rest.iter().map(|c| c * &li).collect::<Vec<_>>(), &pk)
    };
    lifted.push(lc_inv_last);

    let mut factors = Vec::new();
    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut cur = f.to_vec();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut found = false;
        for combo in combinations(remaining.len(), size) {
            let lc_cur = cur.last().unwrap().clone();
            let mut g = vec![lc_cur.clone()];
            for &i in &combo {
                g = int_reduce(&int_mul(&g, &lifted[remaining[i]]), &pk);
            }
            let g: Vec<BigInt> = g.iter().map(|c| sym_mod(c, &pk)).collect();
            let g = qpoly::primitive_part(&qpoly::from_ints(&g));
            if let Some(q) = int_divide(&cur, &g) {
                factors.push(g);
                cur = q;
                let chosen: Vec<usize> = combo.iter().map(|&i| remaining[i]).collect();
                remaining.retain(|i| !chosen.contains(i));
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    factors.push(qpoly::primitive_part(&qpoly::from_ints(&cur)));
    factors
}

fn next_prime(mut p: u64) -> u64 {
    loop {
        p += 2;
        if (3..).step_by(2).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
            return p;
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Factorization `f = c · ∏ f_iᵉⁱ` with `f_i` monic irreducible over ℚ, sorted by
/// degree then coefficient list. Panics on the zero polynomial.
pub fn factor_qpoly(f: &[Q]) -> (Q, Vec<(Vec<Q>, usize)>) {
    let f = qpoly::trim(f.to_vec());
    assert!(!f.is_empty(), "factor_qpoly(0)");
    let c = f.last().unwrap().clone();
    let mut out = Vec::new();
    for (g, e) in qpoly::squarefree(&f) {
        let prim = qpoly::primitive_part(&g);
        for h in zassenhaus(&prim) {
            out.push((qpoly::monic(&qpoly::from_ints(&h)), e));
        }
    }
    out.sort_by(|a, b| poly_order(&a.0, &b.0));
    (c, out)
}

/// Ordering on monic factors: by degree, then coefficients from the constant term up.
pub fn poly_order(a: &[Q], b: &[Q]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

pub fn is_irreducible_q(f: &[Q]) -> bool {
    let f = qpoly::trim(f.to_vec());
    if f.len() < 2 {
        return false;
    }
    let (_, fs) = factor_qpoly(&f);
    fs.len() == 1 && fs[0].1 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::qpoly::q;

    fn p(v: &[i64]) -> Vec<Q> {
        qpoly::trim(v.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn integers() {
        let f = factor_integer(&BigInt::from(-12));
        assert_eq!(f, vec![(BigInt::from(2), 2), (BigInt::from(3), 1)]);
        let big = BigInt::from(1_000_003u64) * BigInt::from(998_244_353u64);
        assert_eq!(factor_integer(&big), vec![(BigInt::from(1_000_003u64), 1), (BigInt::from(998_244_353u64), 1)]);
    }

    #[test]
    fn swinnerton_dyer_like() {
        // x^4 - 10x^2 + 1 is irreducible but splits mod every prime
        assert!(is_irreducible_q(&p(&[1, 0, -10, 0, 1])));
    }

    #[test]
    fn product_of_irreducibles() {
        let a = p(&[-2, 0, 1]);
        let b = p(&[1, 1, 1]);
        let c = p(&[3, 0, 0, 2]);
        let f = qpoly::mul(&qpoly::mul(&a, &b), &qpoly::mul(&c, &a));
        let (lc, fs) = factor_qpoly(&f);
        assert_eq!(lc, q(2));
        let mut prod = vec![lc];
        for (g, e) in &fs {
            for _ in 0..*e {
                prod = qpoly::mul(&prod, g);
            }
        }
        assert_eq!(prod, f);
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().any(|(g, e)| *g == a && *e == 2));
    }

    #[test]
    fn combos() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
    }
}
