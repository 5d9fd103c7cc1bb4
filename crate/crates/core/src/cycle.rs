//! The invariant ρ_f = l∘∂ of rationally parametrized cycles in □³ over k[[t]]/(t^N).

use std::fmt;

use num_traits::Zero;

use crate::chow::{chart_point, elem_valuation, in_chart, ord_unit, support, to_q, ClosedPoint, RatFunc, UniformizerSystem};
use crate::kernel::factor::factor_qpoly;
use crate::error::{Error, Result};
use crate::kernel::{newton_lift_root, SeriesPoly, TruncSeries, Q};

pub const DEFAULT_PRECISION: usize = 6;

/// z ↦ (y₁(z), y₂(z), y₃(z)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamCycle {
    coords: [RatFunc; 3],
}

impl ParamCycle {
    pub fn new(y1: RatFunc, y2: RatFunc, y3: RatFunc) -> Result<ParamCycle> {
        let n = y1.precision();
        for y in [&y1, &y2, &y3] {
            if y.precision() != n {
                return Err(Error::ModulusMismatch(y.precision(), n));
            }
            if *y.series() == TruncSeries::one(y.series().field(), n) {
                return Err(Error::NotAdmissible(format!("coordinate {y} is identically 1")));
            }
        }
        if n < 6 {
            return Err(Error::PrecisionTooLow { got: n, need: 6 });
        }
        for y in [&y1, &y2, &y3] {
            check_good(y)?;
        }
        Ok(ParamCycle { coords: [y1, y2, y3] })
    }

    pub fn coords(&self) -> &[RatFunc; 3] {
        &self.coords
    }

    pub fn precision(&self) -> usize {
        self.coords[0].precision()
    }
}

/// Every zero and pole of y must specialize to a distinct zero or pole of its
/// reduction: y = π^a·u with u a unit at each closed point.
fn check_good(y: &RatFunc) -> Result<()> {
    let mut points = support(&[y]);
    points.insert(ClosedPoint::Infinity);
    let (_, l) = y.common_denominator();
    for (g, _) in factor_qpoly(&to_q(&l)).1 {
        if g.len() > 1 {
            points.insert(ClosedPoint::finite(&g)?);
        }
    }
    let system = UniformizerSystem::default();
    for c in points {
        let bad = |e: Error| Error::NotAdmissible(format!("coordinate {y} has colliding zeros or poles at {c}: {e}"));
        let pi = system.choose(&c, &[y]).map_err(bad)?;
        ord_unit(y, &c, &pi).map_err(bad)?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FaceValue {
    Zero,
    Infinity,
}

impl fmt::Display for FaceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FaceValue::Zero => write!(f, "0"),
            FaceValue::Infinity => write!(f, "∞"),
        }
    }
}

/// A point of ∂Z: where y_face hits `value`, with the other two coordinates there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryPoint {
    pub face: usize,
    pub value: FaceValue,
    pub sign: i64,
    /// Closed point of the parameter line whose lift is `root`.
    pub point: ClosedPoint,
    /// The lifted parameter value (in the 1/z chart when `point` is ∞).
    pub root: TruncSeries,
    pub coords: [TruncSeries; 2],
}

fn evaluate_at_root(y: &RatFunc, c: &ClosedPoint, r: &TruncSeries) -> Result<TruncSeries> {
    let (p, l) = in_chart(y, c).common_denominator();
    let n = y.precision();
    let num = p.eval(r)?;
    let den = SeriesPoly::from_poly(&l, n).eval(r)?;
    if !num.is_unit() || !den.is_unit() {
        return Err(Error::NotAdmissible(format!("coordinate {y} meets 0 or ∞ at {c}")));
    }
    let v = num.div(&den)?;
    if !v.is_flat() {
        return Err(Error::NotAdmissible(format!("coordinate {y} meets 1 at {c}")));
    }
    Ok(v)
}

/// The points of Z on the face y_i = value (i ∈ {1,2,3}).
pub fn face_intersection(z: &ParamCycle, i: usize, value: FaceValue) -> Result<Vec<BoundaryPoint>> {
    if !(1..=3).contains(&i) {
        return Err(Error::InvalidArgument(format!("face index {i} outside 1..3")));
    }
    let y = &z.coords[i - 1];
    let g = match value {
        FaceValue::Zero => y.clone(),
        FaceValue::Infinity => y.inv(),
    };
    let sign = if i % 2 == 1 { 1 } else { -1 } * if value == FaceValue::Zero { 1 } else { -1 };
    let mut out = Vec::new();
    for c in support(&[&g]) {
        let cc = chart_point(&c);
        let gc = in_chart(&g, &c);
        let v = elem_valuation(&gc.reduction(), &cc);
        if v <= 0 {
            continue;
        }
        if v > 1 {
            return Err(Error::NotTransverse(format!("y{i} = {value} has a multiple root at {c}")));
        }
        let (p, _) = gc.common_denominator();
        let (_, theta) = cc.residue_field();
        let r = newton_lift_root(&p, &theta).map_err(|e| match e {
            Error::MultipleRoot(_) => Error::NotTransverse(format!("y{i} = {value} is not transverse at {c}")),
            e => e,
        })?;
        let others: Vec<TruncSeries> =
            (0..3).filter(|&j| j != i - 1).map(|j| evaluate_at_root(&z.coords[j], &c, &r)).collect::<Result<_>>()?;
        out.push(BoundaryPoint { face: i, value, sign, point: c, root: r, coords: [others[0].clone(), others[1].clone()] });
    }
    Ok(out)
}

/// ∂Z = Σ_i (−1)^{i−1}(∂_i^0 − ∂_i^∞).
pub fn boundary(z: &ParamCycle) -> Result<Vec<BoundaryPoint>> {
    let mut out = Vec::new();
    for i in 1..=3 {
        for v in [FaceValue::Zero, FaceValue::Infinity] {
            out.extend(face_intersection(z, i, v)?);
        }
    }
    Ok(out)
}

/// t²-coefficient of log°(w₁)·dlog(w₂) − log°(w₂)·dlog(w₁), traced to ℚ.
pub fn point_invariant(w1: &TruncSeries, w2: &TruncSeries) -> Result<Q> {
    let n = w1.modulus();
    if n < 6 {
        return Err(Error::PrecisionTooLow { got: n, need: 6 });
    }
    let dlog = |w: &TruncSeries| -> Result<TruncSeries> { w.derivative().div(&w.truncate(n - 1)) };
    let a = w1.log_circ()?.truncate(n - 1).mul(&dlog(w2)?);
    let b = w2.log_circ()?.truncate(n - 1).mul(&dlog(w1)?);
    Ok(a.sub(&b).coeff(2).trace()?.as_q().expect("trace lands in ℚ"))
}

/// l = Σ sign·Tr(point invariant).
pub fn l_invariant(points: &[BoundaryPoint]) -> Result<Q> {
    let mut acc = Q::zero();
    for p in points {
        acc += point_invariant(&p.coords[0], &p.coords[1])? * Q::from_integer(p.sign.into());
    }
    Ok(acc)
}

pub fn rho_f(z: &ParamCycle) -> Result<Q> {
    l_invariant(&boundary(z)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::qz;
    use crate::kernel::qpoly::{q, qf};
    use crate::kernel::{CoeffField, FieldElem};
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lin(c: &[(i64, i64)], n: usize) -> RatFunc {
        let k = qz();
        let mut v: Vec<FieldElem> = c.iter().map(|&(a, b)| k.from_q(&qf(-a, b)).unwrap()).collect();
        v[0] = v[0].add(&k.gen().unwrap());
        RatFunc::new(TruncSeries::new(&k, v, n)).unwrap()
    }

    #[test]
    fn simple_face() {
        let n = 6;
        let z = ParamCycle::new(lin(&[(0, 1)], n), lin(&[(-2, 1)], n), lin(&[(-3, 1)], n)).unwrap();
        let pts = face_intersection(&z, 1, FaceValue::Zero).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].sign, 1);
        let k = CoeffField::rationals();
        assert_eq!(pts[0].coords[0], TruncSeries::constant(k.from_int(2), n));
        assert_eq!(pts[0].coords[1], TruncSeries::constant(k.from_int(3), n));
        let z = ParamCycle::new(lin(&[(1, 1), (1, 1)], n), lin(&[(-2, 1)], n), lin(&[(-3, 1)], n)).unwrap();
        let pts = face_intersection(&z, 1, FaceValue::Zero).unwrap();
        assert_eq!(pts[0].root, TruncSeries::from_ints(&k, &[1, 1], n));
        assert_eq!(pts[0].coords[0], TruncSeries::from_ints(&k, &[3, 1], n));
    }

    #[test]
    fn pinned_point_value() {
        let k = CoeffField::rationals();
        let t = TruncSeries::t(&k, 6);
        let w1 = t.exp_nil().unwrap();
        let w2 = t.mul(&t).exp_nil().unwrap();
        assert_eq!(point_invariant(&w1, &w2).unwrap(), q(1));
        assert_eq!(point_invariant(&w2, &w1).unwrap(), q(-1));
    }

    #[test]
    fn double_root_rejected() {
        let n = 6;
        let y1 = lin(&[(1, 1)], n).pow(2);
        let z = ParamCycle::new(y1, lin(&[(-2, 1)], n), lin(&[(-3, 1)], n)).unwrap();
        assert!(matches!(boundary(&z), Err(Error::NotTransverse(_))));
    }

    #[test]
    fn collision_rejected() {
        let n = 6;
        // 2(z − 1 − t)/(z − 1 + t): zero and pole meet at z = 1 when t = 0
        let y = lin(&[(1, 1), (1, 1)], n).div(&lin(&[(1, 1), (-1, 1)], n));
        let y = y.mul(&RatFunc::new(TruncSeries::constant(qz().from_int(2), n)).unwrap());
        assert!(matches!(
            ParamCycle::new(lin(&[(0, 1)], n), y, lin(&[(-3, 1)], n)),
            Err(Error::NotAdmissible(_))
        ));
    }

    #[test]
    fn product_and_m2() {
        let n = 6;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..3 {
            let (z, _) = sample::admissible_cycle(&mut rng, n, true);
            assert!(rho_f(&z).unwrap().is_zero());
        }
        let mut nonzero = 0;
        for _ in 0..3 {
            let (z, data) = sample::admissible_cycle(&mut rng, n, false);
            let base = rho_f(&z).unwrap();
            nonzero += usize::from(!base.is_zero());
            let moved = loop {
                let d = [data[0].perturb_m2(&mut rng), data[1].perturb_m2(&mut rng), data[2].perturb_m2(&mut rng)];
                if let Ok(c) = sample::cycle_from(&d, n) {
                    break c;
                }
            };
            assert_eq!(rho_f(&moved).unwrap(), base);
        }
        assert!(nonzero > 0);
    }
}
