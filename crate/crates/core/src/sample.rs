//! Seeded random inputs for the identity suites.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use crate::chow::{qz, RatFunc};
use crate::cycle::ParamCycle;
use crate::error::Result;
use crate::sqzero::{AlgebraMap, SqElem, Splitting, SquareZeroAlgebra};
use crate::kernel::{CoeffField, FieldElem, FieldKind, Poly, TruncSeries, Q};

/// A small rational n/d with |n| ≤ h, 1 ≤ d ≤ h.
pub fn small_q<R: Rng>(rng: &mut R, h: i64) -> Q {
    Q::new(BigInt::from(rng.gen_range(-h..=h)), BigInt::from(rng.gen_range(1..=h)))
}

pub fn small_q_nonzero<R: Rng>(rng: &mut R, h: i64) -> Q {
    loop {
        let x = small_q(rng, h);
        if !x.is_zero() {
            return x;
        }
    }
}

/// A random element of K: small rationals, small algebraic coordinates,
/// uniform finite-field elements, or degree ≤ 1 fractions in ℚ(z).
pub fn elem<R: Rng>(field: &CoeffField, rng: &mut R) -> FieldElem {
    match field.kind() {
        FieldKind::Rationals => field.from_q(&small_q(rng, 9)).unwrap(),
        FieldKind::NumberField { modulus, .. } => {
            let c: Vec<Q> = (0..modulus.len() - 1).map(|_| small_q(rng, 5)).collect();
            field.from_alg_coords(&c)
        }
        FieldKind::Finite { p, e, .. } => {
            let c: Vec<u64> = (0..*e).map(|_| rng.gen_range(0..*p)).collect();
            field.from_fin_coords(&c)
        }
        FieldKind::FunctionField { base, .. } => {
            let num = Poly::new(base, vec![elem(base, rng), elem(base, rng)]);
            let den = Poly::new(base, vec![elem(base, rng), base.one()]);
            field.fraction(num, den).unwrap_or_else(|_| field.one())
        }
    }
}

pub fn nonzero_elem<R: Rng>(field: &CoeffField, rng: &mut R) -> FieldElem {
    loop {
        let x = elem(field, rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// An element of K^♭.
pub fn flat_elem<R: Rng>(field: &CoeffField, rng: &mut R) -> FieldElem {
    loop {
        let x = elem(field, rng);
        if x.is_flat() {
            return x;
        }
    }
}

/// A random element of K[t]/(t^m).
pub fn series<R: Rng>(field: &CoeffField, m: usize, rng: &mut R) -> TruncSeries {
    TruncSeries::new(field, (0..m).map(|_| elem(field, rng)).collect(), m)
}

/// A random element of (K[t]/(t^m))^♭.
pub fn flat_series<R: Rng>(field: &CoeffField, m: usize, rng: &mut R) -> TruncSeries {
    let mut c = vec![flat_elem(field, rng)];
    c.extend((1..m).map(|_| elem(field, rng)));
    TruncSeries::new(field, c, m)
}

fn q_series(c: &[Q], n: usize) -> TruncSeries {
    let k = qz();
    TruncSeries::new(&k, c.iter().map(|x| k.from_q(x).unwrap()).collect(), n)
}

/// z − a(t).
pub fn z_minus(a: &[Q], n: usize) -> RatFunc {
    let z = RatFunc::z(n);
    RatFunc::new(z.series().sub(&q_series(a, n))).expect("nonzero reduction")
}

/// y = κ(t)·Π(z − a_j(t)) / Π(z − b_j(t)), all data series over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFactored {
    pub kappa: Vec<Q>,
    pub zeros: Vec<Vec<Q>>,
    pub poles: Vec<Vec<Q>>,
}

impl LinearFactored {
    pub fn to_ratfunc(&self, n: usize) -> Result<RatFunc> {
        let mut y = RatFunc::new(q_series(&self.kappa, n))?;
        for a in &self.zeros {
            y = y.mul(&z_minus(a, n));
        }
        for b in &self.poles {
            y = y.div(&z_minus(b, n));
        }
        Ok(y)
    }

    /// Moves every zero and pole by t²·β and rescales κ by (1 + t²·γ).
    pub fn perturb_m2<R: Rng>(&self, rng: &mut R) -> LinearFactored {
        let bump = |v: &[Q], rng: &mut R| {
            let mut v = v.to_vec();
            if v.len() < 3 {
                v.resize(3, Q::zero());
            }
            v[2] += small_q(rng, 5);
            v
        };
        let gamma = small_q(rng, 5);
        let mut kappa = self.kappa.clone();
        kappa.resize(kappa.len().max(3), Q::zero());
        let scaled: Vec<Q> = (0..kappa.len()).map(|i| &kappa[i] + if i >= 2 { &gamma * &kappa[i - 2] } else { Q::zero() }).collect();
        LinearFactored {
            kappa: scaled,
            zeros: self.zeros.iter().map(|a| bump(a, rng)).collect(),
            poles: self.poles.iter().map(|b| bump(b, rng)).collect(),
        }
    }
}

fn random_series_q<R: Rng>(rng: &mut R, len: usize, h: i64) -> Vec<Q> {
    (0..len).map(|_| small_q(rng, h)).collect()
}

/// Random factored coordinate data for a cycle: one zero and one pole per coordinate.
pub fn linear_factored<R: Rng>(rng: &mut R, n: usize, with_divisor: bool) -> LinearFactored {
    let mut kappa = random_series_q(rng, n.min(3), 4);
    kappa[0] = small_q_nonzero(rng, 6);
    if !with_divisor {
        return LinearFactored { kappa, zeros: vec![], poles: vec![] };
    }
    LinearFactored { kappa, zeros: vec![random_series_q(rng, 3, 6)], poles: vec![random_series_q(rng, 3, 6)] }
}

/// An admissible cycle together with its factored description; `constant_third`
/// makes y₃ depend on t only.
pub fn admissible_cycle<R: Rng>(rng: &mut R, n: usize, constant_third: bool) -> (ParamCycle, [LinearFactored; 3]) {
    loop {
        let data = [linear_factored(rng, n, true), linear_factored(rng, n, true), linear_factored(rng, n, !constant_third)];
        let Ok(ys) = data.iter().map(|d| d.to_ratfunc(n)).collect::<Result<Vec<_>>>() else { continue };
        let Ok(z) = ParamCycle::new(ys[0].clone(), ys[1].clone(), ys[2].clone()) else { continue };
        if crate::cycle::boundary(&z).is_ok() {
            return (z, data);
        }
    }
}

/// Builds the cycle described by `data`, if admissible.
pub fn cycle_from(data: &[LinearFactored; 3], n: usize) -> Result<ParamCycle> {
    let ys = data.iter().map(|d| d.to_ratfunc(n)).collect::<Result<Vec<_>>>()?;
    let z = ParamCycle::new(ys[0].clone(), ys[1].clone(), ys[2].clone())?;
    crate::cycle::boundary(&z)?;
    Ok(z)
}

/// Random data (f, τ₁, τ₂, ξ) for the homotopy identity over ℚ(x), drawn from ℚ[x], with
/// ideals of ranks `r1`, `r2`; ξ ∈ B₂°(A₁) is a difference of lifts.
pub fn homotopy_instance<R: Rng>(
    rng: &mut R,
    r1: usize,
    r2: usize,
) -> Result<(AlgebraMap, Splitting, Splitting, Vec<(Q, SqElem)>)> {
    let k = CoeffField::function_field(&CoeffField::rationals(), "x")?;
    let a1 = SquareZeroAlgebra::with_rank(&k, r1)?;
    let a2 = SquareZeroAlgebra::with_rank(&k, r2)?;
    let x = k.gen().expect("generator");
    let lin = |rng: &mut R| x.mul_q(&small_q(rng, 4)).add(&k.from_q(&small_q(rng, 4)).unwrap());
    let vec = |rng: &mut R, r: usize| (0..r).map(|_| lin(rng)).collect::<Vec<_>>();
    let g = loop {
        let c = k.from_q(&small_q(rng, 4))?;
        let g = if rng.gen_bool(0.5) { x.square().add(&c) } else { x.mul_q(&small_q_nonzero(rng, 4)).add(&c) };
        if !g.derivative().is_zero() {
            break g;
        }
    };
    let matrix = (0..r2).map(|_| (0..r1).map(|_| k.from_q(&small_q(rng, 4)).unwrap()).collect()).collect();
    let f = AlgebraMap::new(&a1, &a2, Some(g), vec(rng, r2), matrix)?;
    let tau1 = Splitting::new(&a1, vec(rng, r1))?;
    let tau2 = Splitting::new(&a2, vec(rng, r2))?;
    let mut xi = Vec::new();
    for _ in 0..2 {
        let s = loop {
            let s = lin(rng);
            if s.is_flat() {
                break s;
            }
        };
        let n = Q::from_integer(rng.gen_range(1..=3).into());
        xi.push((n.clone(), a1.element(s.clone(), vec(rng, r1))?));
        xi.push((-n, a1.element(s, vec(rng, r1))?));
    }
    Ok((f, tau1, tau2, xi))
}
