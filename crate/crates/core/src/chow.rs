//! The infinitesimal Chow dilogarithm on ℙ¹ over ℚ: triple residues at closed
//! points, the ℓ₂∧ℓ₁ functional, lifting-defect forms and 1-form residues.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::bloch::{CoeffRing, FormalSum, Wedge2};
use crate::error::{Error, Result};
use crate::kernel::factor;
use crate::kernel::{CoeffField, Differential, FieldElem, Poly, SeriesPoly, TruncSeries, Q};

/// Overall sign relating the residue sum to ℓi_{2,3}, fixed by the ℙ¹ specialization.
pub const GLOBAL_SIGN: i64 = 1;

pub const DEFAULT_PRECISION: usize = 4;

/// ℚ(z), the function field of ℙ¹.
pub fn qz() -> CoeffField {
    CoeffField::function_field(&CoeffField::rationals(), "z").expect("ℚ(z)")
}

pub(crate) fn to_q(p: &Poly) -> Vec<Q> {
    p.coeffs().iter().map(|c| c.as_q().expect("rational coefficient")).collect()
}

fn from_q(v: &[Q]) -> Poly {
    let k = CoeffField::rationals();
    Poly::new(&k, v.iter().map(|c| k.from_q(c).unwrap()).collect())
}

/// A unit of ℚ(z)[t]/(t^N), i.e. a rational function on ℙ¹ over k_N with nonzero reduction.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    s: TruncSeries,
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.s)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.s)
    }
}

impl RatFunc {
    pub fn new(s: TruncSeries) -> Result<RatFunc> {
        match s.field().kind() {
            crate::kernel::FieldKind::FunctionField { base, .. } if base.is_rationals() => {}
            _ => return Err(Error::UnsupportedField(s.field().to_string())),
        }
        if s.constant_term().is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(RatFunc { s })
    }

    /// num/den for polynomials in z with coefficients in ℚ[t]/(t^N).
    pub fn from_num_den(num: &SeriesPoly, den: &SeriesPoly) -> Result<RatFunc> {
        let n = num.modulus();
        let k = qz();
        let lift = |p: &SeriesPoly| -> Result<TruncSeries> {
            let c = (0..n).map(|j| k.fraction(p.t_coeff(j), Poly::one(&CoeffField::rationals()))).collect::<Result<Vec<_>>>()?;
            Ok(TruncSeries::new(&k, c, n))
        };
        RatFunc::new(lift(num)?.div(&lift(den)?)?)
    }

    pub fn constant(c: &Q, n: usize) -> Result<RatFunc> {
        RatFunc::new(TruncSeries::constant(qz().from_q(c)?, n))
    }

    pub fn z(n: usize) -> RatFunc {
        RatFunc { s: TruncSeries::constant(qz().gen().unwrap(), n) }
    }

    pub fn series(&self) -> &TruncSeries {
        &self.s
    }

    pub fn precision(&self) -> usize {
        self.s.modulus()
    }

    pub fn reduction(&self) -> FieldElem {
        self.s.constant_term().clone()
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc { s: self.s.mul(&o.s) }
    }

    pub fn div(&self, o: &RatFunc) -> RatFunc {
        RatFunc { s: self.s.div(&o.s).expect("units") }
    }

    pub fn inv(&self) -> RatFunc {
        RatFunc { s: self.s.inv().expect("unit") }
    }

    pub fn pow(&self, e: i64) -> RatFunc {
        RatFunc { s: self.s.pow(e).expect("unit") }
    }

    pub fn add(&self, o: &RatFunc) -> Result<RatFunc> {
        RatFunc::new(self.s.add(&o.s))
    }

    pub fn sub(&self, o: &RatFunc) -> Result<RatFunc> {
        RatFunc::new(self.s.sub(&o.s))
    }

    pub fn one_minus(&self) -> Result<RatFunc> {
        RatFunc::new(self.s.one_minus())
    }

    pub fn truncate(&self, n: usize) -> RatFunc {
        RatFunc { s: self.s.truncate(n) }
    }

    /// Re-expresses in the coordinate w = 1/z.
    pub(crate) fn to_infinity_chart(&self) -> RatFunc {
        let k = self.s.field().clone();
        let winv = k.gen().unwrap().inv().unwrap();
        RatFunc { s: self.s.map_coeffs(&k, |c| c.eval_at(&winv)).expect("substitution") }
    }

    /// (P, L) with self = P / L, L ∈ ℚ[z] monic and P a polynomial in z over ℚ[t]/(t^N).
    pub(crate) fn common_denominator(&self) -> (SeriesPoly, Poly) {
        let k = CoeffField::rationals();
        let mut l = Poly::one(&k);
        for c in self.s.coeffs() {
            let d = c.num_den().1;
            l = l.mul(d).exact_div(&l.gcd(d));
        }
        let n = self.precision();
        let polys: Vec<Poly> = self
            .s
            .coeffs()
            .iter()
            .map(|c| {
                let (a, b) = c.num_den();
                a.mul(&l.exact_div(b))
            })
            .collect();
        (SeriesPoly::from_t_coeffs(&k, &polys, n), l)
    }
}

/// A closed point of ℙ¹ over ℚ.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClosedPoint {
    /// Zero locus of a monic irreducible polynomial (ascending coefficients).
    Finite(Vec<Q>),
    Infinity,
}

impl fmt::Display for ClosedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedPoint::Finite(m) => write!(f, "{}", from_q(m).display_in("z")),
            ClosedPoint::Infinity => write!(f, "∞"),
        }
    }
}

impl ClosedPoint {
    pub fn finite(m: &[Q]) -> Result<ClosedPoint> {
        let m = crate::kernel::qpoly::trim(m.to_vec());
        if m.len() < 2 || !factor::is_irreducible_q(&m) {
            return Err(Error::InvalidArgument(format!("{} is not irreducible", from_q(&m).display_in("z"))));
        }
        Ok(ClosedPoint::Finite(crate::kernel::qpoly::monic(&m)))
    }

    /// The rational point z = a.
    pub fn rational(a: &Q) -> ClosedPoint {
        ClosedPoint::Finite(vec![-a.clone(), Q::one()])
    }

    /// k′ and the class θ of z (of 1/z at ∞, which is 0).
    pub fn residue_field(&self) -> (CoeffField, FieldElem) {
        match self {
            ClosedPoint::Infinity => {
                let k = CoeffField::rationals();
                let z = k.zero();
                (k, z)
            }
            ClosedPoint::Finite(m) if m.len() == 2 => {
                let k = CoeffField::rationals();
                let r = k.from_q(&-m[0].clone()).unwrap();
                (k, r)
            }
            ClosedPoint::Finite(m) => {
                let k = CoeffField::number_field(m, "θ").expect("irreducible");
                let g = k.gen().unwrap();
                (k, g)
            }
        }
    }

    /// The defining polynomial in the local chart (w = 1/z at ∞).
    pub(crate) fn chart_poly(&self) -> Poly {
        match self {
            ClosedPoint::Finite(m) => from_q(m),
            ClosedPoint::Infinity => Poly::x(&CoeffField::rationals()),
        }
    }
}

pub(crate) fn poly_valuation(p: &Poly, m: &Poly) -> i64 {
    if p.is_zero() {
        return i64::MAX;
    }
    let mut p = p.clone();
    let mut v = 0;
    loop {
        let (q, r) = p.divrem(m);
        if !r.is_zero() {
            return v;
        }
        p = q;
        v += 1;
    }
}

/// Order of a ℚ(z) element at c.
pub(crate) fn elem_valuation(x: &FieldElem, c: &ClosedPoint) -> i64 {
    match c {
        ClosedPoint::Finite(_) => {
            let m = c.chart_poly();
            let (n, d) = x.num_den();
            poly_valuation(n, &m) - poly_valuation(d, &m)
        }
        ClosedPoint::Infinity => {
            let (n, d) = x.num_den();
            d.degree().unwrap_or(0) as i64 - n.degree().unwrap_or(0) as i64
        }
    }
}

/// Zeros and poles of the reductions.
pub fn support(funcs: &[&RatFunc]) -> BTreeSet<ClosedPoint> {
    let mut out = BTreeSet::new();
    for f in funcs {
        let r = f.reduction();
        let (n, d) = r.num_den();
        for p in [n, d] {
            for (g, _) in factor::factor_qpoly(&to_q(p)).1 {
                if g.len() > 1 {
                    out.insert(ClosedPoint::Finite(g));
                }
            }
        }
        if elem_valuation(&r, &ClosedPoint::Infinity) != 0 {
            out.insert(ClosedPoint::Infinity);
        }
    }
    out
}

/// Chart-local data: functions rewritten near c, with c at the zero of `chart_poly`.
pub(crate) fn in_chart(f: &RatFunc, c: &ClosedPoint) -> RatFunc {
    match c {
        ClosedPoint::Infinity => f.to_infinity_chart(),
        ClosedPoint::Finite(_) => f.clone(),
    }
}

pub(crate) fn chart_point(c: &ClosedPoint) -> ClosedPoint {
    match c {
        ClosedPoint::Infinity => ClosedPoint::Finite(vec![Q::zero(), Q::one()]),
        p => p.clone(),
    }
}

/// Goodness check in a chart: every t-coefficient of u regular at c, reduction a unit there.
fn check_unit_chart(u: &RatFunc, cc: &ClosedPoint, orig: &ClosedPoint) -> Result<()> {
    for (j, c) in u.s.coeffs().iter().enumerate() {
        let v = elem_valuation(c, cc);
        if v < 0 || (j == 0 && v != 0) {
            return Err(Error::NotGood {
                point: orig.to_string(),
                reason: if j == 0 { "reduction of the unit part vanishes".into() } else { format!("t^{j} coefficient of the unit part has a pole") },
            });
        }
    }
    Ok(())
}

/// a = ord_c(f mod t) and u = f·π^{−a}, provided u is a good unit at c.
pub fn ord_unit(f: &RatFunc, c: &ClosedPoint, pi: &RatFunc) -> Result<(i64, RatFunc)> {
    let cc = chart_point(c);
    let pc = in_chart(pi, c);
    if elem_valuation(&pc.reduction(), &cc) != 1 {
        return Err(Error::InvalidArgument(format!("{pi} does not reduce to a uniformizer at {c}")));
    }
    let a = elem_valuation(&in_chart(f, c).reduction(), &cc);
    let u = f.mul(&pi.pow(-a));
    check_unit_chart(&in_chart(&u, c), &cc, c)?;
    Ok((a, u))
}

/// The root of π in k′_N lifting θ, in the chart at c.
fn lifted_root(pi_chart: &RatFunc, c: &ClosedPoint) -> Result<TruncSeries> {
    let cc = chart_point(c);
    let (p, l) = pi_chart.common_denominator();
    if poly_valuation(&l, &cc.chart_poly()) > 0 {
        return Err(Error::NotGood { point: c.to_string(), reason: "uniformizer has a pole".into() });
    }
    let (_, theta) = cc.residue_field_for(c);
    crate::kernel::newton_lift_root(&p, &theta)
}

impl ClosedPoint {
    fn residue_field_for(&self, orig: &ClosedPoint) -> (CoeffField, FieldElem) {
        match orig {
            ClosedPoint::Infinity => ClosedPoint::Infinity.residue_field(),
            _ => self.residue_field(),
        }
    }
}

/// ū ∈ k′_N for a unit u good at c (chart coordinates), with z ↦ r.
fn specialize(u: &RatFunc, r: &TruncSeries, c: &ClosedPoint) -> Result<TruncSeries> {
    let n = u.precision();
    let kp = r.field().clone();
    let t = TruncSeries::t(&kp, n);
    let mut acc = TruncSeries::zero(&kp, n);
    let mut tj = TruncSeries::one(&kp, n);
    for coeff in u.s.coeffs() {
        let (a, b) = coeff.num_den();
        let num = SeriesPoly::from_poly(a, n).eval(r)?;
        let den = SeriesPoly::from_poly(b, n).eval(r)?;
        if !den.is_unit() {
            return Err(Error::NotGood { point: c.to_string(), reason: "pole at the lifted point".into() });
        }
        acc = acc.add(&num.div(&den)?.mul(&tj));
        tj = tj.mul(&t);
    }
    Ok(acc)
}

/// Evaluation of a good unit at c through the residue map A → A/(π) ≅ k′_N.
pub fn evaluate_unit(u: &RatFunc, c: &ClosedPoint, pi: &RatFunc) -> Result<TruncSeries> {
    let r = lifted_root(&in_chart(pi, c), c)?;
    let v = specialize(&in_chart(u, c), &r, c)?;
    if !v.is_unit() {
        return Err(Error::NotGood { point: c.to_string(), reason: "unit part vanishes".into() });
    }
    Ok(v)
}

/// Uniformizers at closed points: explicit entries, otherwise the default
/// (m_c(z) at finite points, 1/z at ∞), optionally falling back to factors
/// Hensel-lifted from the functions themselves.
#[derive(Clone, Debug)]
pub struct UniformizerSystem {
    entries: BTreeMap<ClosedPoint, RatFunc>,
    auto: bool,
}

impl Default for UniformizerSystem {
    fn default() -> Self {
        UniformizerSystem { entries: BTreeMap::new(), auto: true }
    }
}

impl UniformizerSystem {
    /// Defaults only, with no fallback.
    pub fn fixed() -> Self {
        UniformizerSystem { entries: BTreeMap::new(), auto: false }
    }

    pub fn with(mut self, c: ClosedPoint, pi: RatFunc) -> Self {
        self.entries.insert(c, pi);
        self
    }

    pub fn default_uniformizer(c: &ClosedPoint, n: usize) -> RatFunc {
        let k = qz();
        let x = match c {
            ClosedPoint::Finite(m) => k.fraction(from_q(m), Poly::one(&CoeffField::rationals())).unwrap(),
            ClosedPoint::Infinity => k.gen().unwrap().inv().unwrap(),
        };
        RatFunc { s: TruncSeries::constant(x, n) }
    }

    /// The uniformizer at c used for `funcs`: the first candidate for which all are good.
    pub fn choose(&self, c: &ClosedPoint, funcs: &[&RatFunc]) -> Result<RatFunc> {
        let n = funcs.first().map(|f| f.precision()).unwrap_or(DEFAULT_PRECISION);
        if let Some(pi) = self.entries.get(c) {
            return Ok(pi.clone());
        }
        let default = Self::default_uniformizer(c, n);
        let good = |pi: &RatFunc| funcs.iter().all(|f| ord_unit(f, c, pi).and_then(|(_, u)| evaluate_unit(&u, c, pi)).is_ok());
        if good(&default) || !self.auto {
            return Ok(default);
        }
        for f in funcs {
            if let Some(pi) = hensel_candidate(f, c) {
                if good(&pi) {
                    return Ok(pi);
                }
            }
        }
        Err(Error::NotGood { point: c.to_string(), reason: "no uniformizer makes all functions good".into() })
    }
}

/// Lifts the factor m of P mod t to a monic factor of P over ℚ[t]/(t^N).
fn hensel_factor(p: &SeriesPoly, m: &Poly) -> Option<SeriesPoly> {
    let n = p.modulus();
    let p0 = p.reduce();
    let (q0, r) = p0.divrem(m);
    if !r.is_zero() {
        return None;
    }
    let (g, _, tt) = m.xgcd(&q0);
    if g.degree() != Some(0) {
        return None;
    }
    let tt = tt.scale(&g.lc().inv().ok()?);
    let k = p.field().clone();
    let mut ms = vec![m.clone()];
    let mut qs = vec![q0.clone()];
    for j in 1..n {
        let mut e = p.t_coeff(j);
        for i in 0..=j {
            if i < ms.len() && j - i < qs.len() {
                e = e.sub(&ms[i].mul(&qs[j - i]));
            }
        }
        let a = tt.mul(&e).rem(m);
        let b = e.sub(&a.mul(&q0)).exact_div(m);
        ms.push(a);
        qs.push(b);
    }
    Some(SeriesPoly::from_t_coeffs(&k, &ms, n))
}

/// A uniformizer at c read off from f: the lifted simple factor of f (or 1/f) at c.
fn hensel_candidate(f: &RatFunc, c: &ClosedPoint) -> Option<RatFunc> {
    let fc = in_chart(f, c);
    let cc = chart_point(c);
    let a = elem_valuation(&fc.reduction(), &cc);
    let g = match a {
        1 => fc,
        -1 => fc.inv(),
        _ => return None,
    };
    let (p, _) = g.common_denominator();
    let m = hensel_factor(&p, &cc.chart_poly())?;
    let k = qz();
    let n = f.precision();
    let coeffs = (0..n).map(|j| k.fraction(m.t_coeff(j), Poly::one(&CoeffField::rationals())).unwrap()).collect();
    let pi_chart = RatFunc { s: TruncSeries::new(&k, coeffs, n) };
    Some(match c {
        ClosedPoint::Infinity => pi_chart.to_infinity_chart(),
        _ => pi_chart,
    })
}

/// a·(v̄∧w̄) − b·(ū∧w̄) + c·(ū∧v̄) for f = π^a u, g = π^b v, h = π^c w.
pub fn triple_residue(f: &RatFunc, g: &RatFunc, h: &RatFunc, c: &ClosedPoint, pi: &RatFunc) -> Result<Wedge2> {
    let (a, u) = ord_unit(f, c, pi)?;
    let (b, v) = ord_unit(g, c, pi)?;
    let (cc, w) = ord_unit(h, c, pi)?;
    let (ub, vb, wb) = (evaluate_unit(&u, c, pi)?, evaluate_unit(&v, c, pi)?, evaluate_unit(&w, c, pi)?);
    let mut out = Wedge2::zero(ub.field(), ub.modulus());
    let q = |x: i64| Q::from_integer(x.into());
    if a != 0 {
        out.push(q(a), &vb, &wb)?;
    }
    if b != 0 {
        out.push(q(-b), &ub, &wb)?;
    }
    if cc != 0 {
        out.push(q(cc), &ub, &vb)?;
    }
    Ok(out)
}

/// Tr_{k′/ℚ} ℓ(res_c(f∧g∧h)) with ℓ = ℓ₂∧ℓ₁.
pub fn local_rho(f: &RatFunc, g: &RatFunc, h: &RatFunc, c: &ClosedPoint, system: &UniformizerSystem) -> Result<Q> {
    let pi = system.choose(c, &[f, g, h])?;
    let w = triple_residue(f, g, h, c, &pi)?;
    Ok(w.wedge_eval(2, 1)?.trace()?.as_q().unwrap())
}

fn check_precision(fs: &[&RatFunc]) -> Result<usize> {
    let n = fs[0].precision();
    for f in fs {
        if f.precision() != n {
            return Err(Error::ModulusMismatch(f.precision(), n));
        }
    }
    if n < 3 {
        return Err(Error::PrecisionTooLow { got: n, need: 3 });
    }
    Ok(n)
}

/// ρ(f, g, h) = Σ_c Tr ℓ(res_c(f∧g∧h)).
pub fn chow_rho(f: &RatFunc, g: &RatFunc, h: &RatFunc, system: &UniformizerSystem) -> Result<Q> {
    check_precision(&[f, g, h])?;
    let mut acc = Q::zero();
    for c in support(&[f, g, h]) {
        acc += local_rho(f, g, h, &c, system)?;
    }
    Ok(acc * Q::from_integer(GLOBAL_SIGN.into()))
}

fn check_triple(q: &[TruncSeries; 3]) -> Result<usize> {
    let n = q[0].modulus();
    for x in q {
        if x.modulus() != n {
            return Err(Error::ModulusMismatch(x.modulus(), n));
        }
        if !x.is_unit() {
            return Err(Error::NonUnit(x.to_string()));
        }
    }
    if n < 3 {
        return Err(Error::PrecisionTooLow { got: n, need: 3 });
    }
    Ok(n)
}

const S3: [([usize; 3], i64); 6] =
    [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([1, 0, 2], -1), ([0, 2, 1], -1), ([2, 1, 0], -1)];

/// Ω(q̃, q̂) = Σ_σ sgn σ · α_{1σ(1)}(α̃_{2σ(3)} − α̂_{2σ(3)})·dlog α_{0σ(2)}.
pub fn omega_defect(qt: &[TruncSeries; 3], qh: &[TruncSeries; 3]) -> Result<Differential> {
    let n = check_triple(qt)?;
    if check_triple(qh)? != n {
        return Err(Error::ModulusMismatch(qh[0].modulus(), n));
    }
    for i in 0..3 {
        let d = qh[i].sub(&qt[i]);
        if !d.coeff(0).is_zero() || !d.coeff(1).is_zero() {
            return Err(Error::ModTwoMismatch(i + 1));
        }
    }
    let field = qt[0].field().clone();
    let lt: Vec<TruncSeries> = qt.iter().map(|x| x.log_circ()).collect::<Result<_>>()?;
    let lh: Vec<TruncSeries> = qh.iter().map(|x| x.log_circ()).collect::<Result<_>>()?;
    let mut out = Differential::zero(&field, 1);
    for (s, sign) in S3 {
        let a1 = lt[s[0]].coeff(1);
        let d2 = lt[s[2]].coeff(2).sub(&lh[s[2]].coeff(2));
        let dl = Differential::dlog_elem(qt[s[1]].constant_term())?;
        out = out.add(&dl.scale_elem(&a1.mul(&d2).mul_int(sign)));
    }
    Ok(out)
}

/// Residue at c of a rational 1-form f dz over ℚ(z), as an element of k′.
pub fn residue_1form(omega: &Differential, c: &ClosedPoint) -> Result<FieldElem> {
    if omega.modulus() != 1 || !omega.field().is_function_field() || !omega.field().base().is_some_and(|b| b.is_rationals()) {
        return Err(Error::UnsupportedRing(format!("1-form over {}", omega.field())));
    }
    let mut f = omega.dx_coeff();
    if *c == ClosedPoint::Infinity {
        let k = f.field().clone();
        let w = k.gen().unwrap();
        f = f.eval_at(&w.inv()?)?.mul(&w.square().inv()?).neg();
    }
    let (kp, theta) = chart_point(c).residue_field();
    let (n, d) = f.num_den();
    let shift = Poly::new(&kp, vec![theta.clone(), kp.one()]);
    let emb = |p: &Poly| -> Result<Poly> { Ok(p.map_coeffs(&kp, |x| kp.embed(x))?.compose(&shift)) };
    let (ns, ds) = (emb(n)?, emb(d)?);
    let v = ds.coeffs().iter().take_while(|x| x.is_zero()).count();
    if v == 0 {
        return Ok(kp.zero());
    }
    let num = TruncSeries::new(&kp, ns.coeffs().to_vec(), v);
    let g = TruncSeries::new(&kp, ds.coeffs()[v..].to_vec(), v);
    Ok(num.div(&g)?.coeff(v - 1))
}

/// Closed points where a rational 1-form may have a pole (∞ always included).
pub fn pole_points(omega: &Differential) -> BTreeSet<ClosedPoint> {
    let mut out = BTreeSet::new();
    let f = omega.dx_coeff();
    for (g, _) in factor::factor_qpoly(&to_q(f.num_den().1)).1 {
        if g.len() > 1 {
            out.insert(ClosedPoint::Finite(g));
        }
    }
    out.insert(ClosedPoint::Infinity);
    out
}

/// A triple of good functions.
pub type Triple = [RatFunc; 3];

fn series3(p: &Triple) -> [TruncSeries; 3] {
    [p[0].s.clone(), p[1].s.clone(), p[2].s.clone()]
}

/// Σ_c Tr(ℓ(res_c q̃_c) + res_c Ω(p̃, q̃_c)); points without a local lift use p̃.
pub fn corrected_rho(p: &Triple, locals: &BTreeMap<ClosedPoint, Triple>, system: &UniformizerSystem) -> Result<Q> {
    check_precision(&[&p[0], &p[1], &p[2]])?;
    let mut points = support(&[&p[0], &p[1], &p[2]]);
    points.extend(locals.keys().cloned());
    let mut acc = Q::zero();
    for c in points {
        let q = locals.get(&c).unwrap_or(p);
        acc += local_rho(&q[0], &q[1], &q[2], &c, system)? * Q::from_integer(GLOBAL_SIGN.into());
        if !std::ptr::eq(q, p) {
            let om = omega_defect(&series3(p), &series3(q))?;
            acc += residue_1form(&om, &c)?.trace()?.as_q().unwrap();
        }
    }
    Ok(acc)
}

/// ord_c(g)·[f(c)] in ℚ[(k′₂)^♭].
pub fn b2_residue(f: &RatFunc, g: &RatFunc, c: &ClosedPoint, system: &UniformizerSystem) -> Result<FormalSum> {
    let b = elem_valuation(&in_chart(g, c).reduction(), &chart_point(c));
    if b == 0 {
        return Ok(FormalSum::zero(CoeffRing::Rationals));
    }
    let one_minus = f.one_minus().map_err(|_| Error::NotGeneric(format!("1 − f vanishes identically at {c}")))?;
    let pi = system.choose(c, &[&one_minus, f, g]).map_err(|e| Error::NotGeneric(e.to_string()))?;
    let (a, u) = ord_unit(f, c, &pi).map_err(|e| Error::NotGeneric(e.to_string()))?;
    if a != 0 {
        return Err(Error::NotGeneric(format!("f is not a unit at {c}")));
    }
    let v = evaluate_unit(&u, c, &pi).map_err(|e| Error::NotGeneric(e.to_string()))?.truncate(2);
    if !v.is_flat() {
        return Err(Error::NotGeneric(format!("f({c}) = {v} is not in (k′₂)^♭")));
    }
    let mut s = FormalSum::zero(CoeffRing::Rationals);
    s.add_term(Q::from_integer(b.into()), &v)?;
    Ok(s)
}

/// Σ_c Tr ℓi_{2,3}(b2_residue([f]⊗g, c)) over the support of g.
pub fn reciprocity_lhs(f: &RatFunc, g: &RatFunc, system: &UniformizerSystem) -> Result<Q> {
    let mut acc = Q::zero();
    for c in support(&[g]) {
        for (m, x) in b2_residue(f, g, &c, system)?.terms() {
            acc += m * crate::additive::li_23(x)?.trace()?.as_q().unwrap();
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::qpoly::{q, qf};

    fn rf(num: &[&[(i64, i64)]], den: &[&[(i64, i64)]], n: usize) -> RatFunc {
        // polys in z given by their t-coefficient lists, one list per z-power
        let k = CoeffField::rationals();
        let mk = |v: &[&[(i64, i64)]]| {
            SeriesPoly::new(
                &k,
                n,
                v.iter().map(|c| TruncSeries::new(&k, c.iter().map(|&(a, b)| k.from_q(&qf(a, b)).unwrap()).collect(), n)).collect(),
            )
        };
        RatFunc::from_num_den(&mk(num), &mk(den)).unwrap()
    }

    #[test]
    fn ord_unit_examples() {
        let zero = ClosedPoint::rational(&q(0));
        let pi = RatFunc::z(4);
        let (a, u) = ord_unit(&RatFunc::z(4).pow(2), &zero, &pi).unwrap();
        assert_eq!((a, *u.series() == TruncSeries::one(&qz(), 4)), (2, true));
        let f = rf(&[&[(0, 1), (1, 1)], &[(1, 1)]], &[&[(1, 1)]], 4);
        assert!(matches!(ord_unit(&f, &zero, &pi), Err(Error::NotGood { .. })));
        let g = rf(&[&[], &[(1, 1)], &[(0, 1), (1, 1)]], &[&[(1, 1)]], 4);
        let (a, u) = ord_unit(&g, &zero, &pi).unwrap();
        assert_eq!(a, 1);
        assert_eq!(u, rf(&[&[(1, 1)], &[(0, 1), (1, 1)]], &[&[(1, 1)]], 4));
    }

    #[test]
    fn specialization_to_li23() {
        let n = 4;
        let z = RatFunc::z(n);
        let a = rf(&[&[(1, 2), (1, 1)]], &[&[(1, 1)]], n);
        let f = z.one_minus().unwrap();
        let h = a.div(&z).one_minus().unwrap();
        let v = chow_rho(&f, &z, &h, &UniformizerSystem::default()).unwrap();
        assert_eq!(v, q(-8));
        assert!(chow_rho(&f, &f, &h, &UniformizerSystem::default()).unwrap().is_zero());
        let c = rf(&[&[(3, 1)], &[(1, 1)]], &[&[(1, 1)]], n);
        assert!(chow_rho(&f, &z, &c.div(&z).one_minus().unwrap(), &UniformizerSystem::default()).unwrap().is_zero());
    }

    #[test]
    fn residues() {
        let k = qz();
        let z = k.gen().unwrap();
        let w = Differential::dlog_elem(&z).unwrap();
        assert_eq!(residue_1form(&w, &ClosedPoint::rational(&q(0))).unwrap().as_q(), Some(q(1)));
        assert_eq!(residue_1form(&w, &ClosedPoint::Infinity).unwrap().as_q(), Some(q(-1)));
        let f = z.square().sub(&k.from_int(2)).inv().unwrap();
        let om = Differential::from_parts(&k, 1, vec![f], vec![]);
        let c = ClosedPoint::finite(&[q(-2), q(0), q(1)]).unwrap();
        let r = residue_1form(&om, &c).unwrap();
        let th = r.field().gen().unwrap();
        assert_eq!(r, th.mul_int(2).inv().unwrap());
        let total: Q = pole_points(&om).iter().map(|c| residue_1form(&om, c).unwrap().trace().unwrap().as_q().unwrap()).sum();
        assert!(total.is_zero());
    }
}

#[cfg(test)]
mod lifts {
    use super::*;
    use crate::kernel::qpoly::{q, qf};

    fn lin(c: &[(i64, i64)], n: usize) -> RatFunc {
        // z − c(t)
        let k = qz();
        let z = k.gen().unwrap();
        let mut v: Vec<FieldElem> = c.iter().map(|&(a, b)| k.from_q(&qf(-a, b)).unwrap()).collect();
        v[0] = v[0].add(&z);
        RatFunc::new(TruncSeries::new(&k, v, n)).unwrap()
    }

    #[test]
    fn moving_zero_lift_pointwise() {
        let n = 4;
        let sys = UniformizerSystem::default();
        let z = RatFunc::z(n);
        let one = RatFunc::constant(&q(1), n).unwrap();
        // p̃ = (1 − z, z, (z − a)/z), a = 1/2 + t
        let pt: Triple = [one.sub(&z).unwrap(), z.clone(), lin(&[(1, 2), (1, 1)], n).div(&z)];
        // p̂ moves the zero of h by t²·3 and rescales f by (1 + 2t²)
        let sc = RatFunc::new(TruncSeries::from_ints(&qz(), &[1, 0, 2], n)).unwrap();
        let ph: Triple = [pt[0].mul(&sc), z.clone(), lin(&[(1, 2), (1, 1), (3, 1)], n).div(&z)];
        let r1 = chow_rho(&pt[0], &pt[1], &pt[2], &sys).unwrap();
        let r2 = chow_rho(&ph[0], &ph[1], &ph[2], &sys).unwrap();
        let om = omega_defect(&series3(&pt), &series3(&ph)).unwrap();
        let mut pts = support(&[&pt[0], &pt[1], &pt[2]]);
        pts.extend(pole_points(&om));
        for c in &pts {
            let a = local_rho(&pt[0], &pt[1], &pt[2], c, &sys).unwrap();
            let b = local_rho(&ph[0], &ph[1], &ph[2], c, &sys).unwrap();
            let r = residue_1form(&om, c).unwrap().trace().unwrap().as_q().unwrap();
            assert_eq!(a, b + r, "at {c}");
        }
        assert_eq!((r1.clone(), r2), (q(-8), q(-8)));
        let all: BTreeMap<ClosedPoint, Triple> = pts.iter().map(|c| (c.clone(), ph.clone())).collect();
        assert_eq!(corrected_rho(&pt, &all, &sys).unwrap(), r1);
        let mixed: BTreeMap<ClosedPoint, Triple> = pts.iter().take(2).map(|c| (c.clone(), ph.clone())).collect();
        assert_eq!(corrected_rho(&pt, &mixed, &sys).unwrap(), r1);
        assert_eq!(corrected_rho(&pt, &BTreeMap::new(), &sys).unwrap(), r1);
    }

    #[test]
    fn reciprocity_small() {
        let n = 4;
        let sys = UniformizerSystem::default();
        let c = RatFunc::new(TruncSeries::new(&qz(), vec![qz().from_int(3), qz().from_int(-1)], n)).unwrap();
        let f = c.mul(&lin(&[(2, 1), (1, 1)], n)).div(&lin(&[(-1, 1), (0, 1), (1, 1)], n));
        let g = lin(&[(5, 1), (2, 1), (0, 1), (1, 3)], n).mul(&lin(&[(-3, 1), (1, 1)], n));
        let lhs = reciprocity_lhs(&f, &g, &sys).unwrap();
        let rhs = chow_rho(&f.one_minus().unwrap(), &f, &g, &sys).unwrap();
        assert!(!lhs.is_zero());
        assert_eq!(lhs, rhs);
    }
}
