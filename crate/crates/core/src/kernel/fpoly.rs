//! Dense polynomials over the prime field 𝔽_p, coefficients in `0..p`.

use rand::Rng;

pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u128, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

pub fn inv(a: u64, p: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverse of zero mod {p}");
    powmod(a, (p - 2) as u128, p)
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

pub fn neg(a: &[u64], p: u64) -> Vec<u64> {
    a.iter().map(|&c| (p - c) % p).collect()
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    add(a, &neg(b, p), p)
}

pub fn scale(a: &[u64], c: u64, p: u64) -> Vec<u64> {
    trim(a.iter().map(|&x| mulmod(x, c, p)).collect())
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    let pp = p as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % pp;
        }
    }
    trim(out.into_iter().map(|c| c as u64).collect())
}

pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let db = b.len() - 1;
    let li = inv(b[db], p);
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut quo = vec![0u64; r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = mulmod(r[dr], li, p);
        let shift = dr - db;
        for (i, &y) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mulmod(c, y, p)) % p;
        }
        quo[shift] = c;
        r = trim(r);
    }
    (trim(quo), r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&l) => scale(a, inv(l, p), p),
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

/// Returns `(g, s, t)` with `s·a + t·b = g` and `g` monic.
pub fn xgcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    match r0.last().copied() {
        None => (r0, s0, t0),
        Some(l) => {
            let li = inv(l, p);
            (scale(&r0, li, p), scale(&s0, li, p), scale(&t0, li, p))
        }
    }
}

pub fn mulrem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

pub fn powrem(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulrem(&acc, &b, m, p);
        }
        b = mulrem(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

/// `x^(p^k) mod m` by repeated p-th powers.
pub fn frobenius_x(k: u32, m: &[u64], p: u64) -> Vec<u64> {
    let mut x = rem(&[0, 1], m, p);
    for _ in 0..k {
        x = powrem(&x, p as u128, m, p);
    }
    x
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    if f.len() < 2 {
        return false;
    }
    let n = (f.len() - 1) as u64;
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    if sub(&frobenius_x(n as u32, &f, p), &rem(&x, &f, p), p) != Vec::<u64>::new() {
        return false;
    }
    for r in prime_divisors(n) {
        let h = sub(&frobenius_x((n / r) as u32, &f, p), &rem(&x, &f, p), p);
        if gcd(&h, &f, p).len() != 1 {
            return false;
        }
    }
    true
}

/// Lexicographically first monic irreducible of degree `e`.
pub fn first_irreducible(e: u32, p: u64) -> Vec<u64> {
    let e = e as usize;
    let mut coeffs = vec![0u64; e];
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        let mut i = 0;
        loop {
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
            i += 1;
            assert!(i < e, "no irreducible polynomial found");
        }
    }
}

pub fn derivative(a: &[u64], p: u64) -> Vec<u64> {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, i as u64 % p, p))
            .collect(),
    )
}

/// Distinct-degree factorization of a squarefree monic `f`.
fn distinct_degree(f: &[u64], p: u64) -> Vec<(Vec<u64>, usize)> {
    let mut out = Vec::new();
    let mut f = f.to_vec();
    let mut xq = rem(&[0, 1], &f, p);
    let mut d = 0;
    while f.len() > 1 {
        d += 1;
        if 2 * d > f.len() - 1 {
            let deg = f.len() - 1;
            out.push((f.clone(), deg));
            break;
        }
        xq = powrem(&xq, p as u128, &f, p);
        let g = gcd(&sub(&xq, &[0, 1], p), &f, p);
        if g.len() > 1 {
            out.push((g.clone(), d));
            f = divrem(&f, &g, p).0;
            xq = rem(&xq, &f, p);
        }
    }
    out
}

/// Equal-degree splitting (Cantor–Zassenhaus, odd p).
fn equal_degree<R: Rng>(f: &[u64], d: usize, p: u64, rng: &mut R) -> Vec<Vec<u64>> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.to_vec()];
    }
    let e: u128 = ((p as u128).pow(d as u32) - 1) / 2;
    loop {
        let a: Vec<u64> = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let g = gcd(&a, f, p);
        let g = if g.len() > 1 && g.len() < f.len() {
            g
        } else {
            let b = sub(&powrem(&a, e, f, p), &[1], p);
            gcd(&b, f, p)
        };
        if g.len() > 1 && g.len() < f.len() {
            let h = divrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&h, d, p, rng));
            return out;
        }
    }
}

/// Monic irreducible factors of a squarefree monic polynomial over 𝔽_p (p odd).
pub fn factor_squarefree<R: Rng>(f: &[u64], p: u64, rng: &mut R) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(&monic(f, p), p) {
        out.extend(equal_degree(&g, d, p, rng));
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&[1, 1, 1], 5));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        assert!(is_irreducible(&[2, 0, 1], 5));
        assert_eq!(first_irreducible(2, 5), vec![2, 0, 1]);
    }

    #[test]
    fn cz_recovers_factors() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let p = 7;
        let f1 = vec![1, 0, 1];
        let f2 = vec![3, 1];
        let f3 = vec![1, 1, 0, 1];
        assert!(is_irreducible(&f1, p) && is_irreducible(&f3, p));
        let f = mul(&mul(&f1, &f2, p), &f3, p);
        let mut want = vec![f1, f2, f3];
        want.sort();
        assert_eq!(factor_squarefree(&f, p, &mut rng), want);
    }
}
