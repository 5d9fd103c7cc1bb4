//! Formal Bloch-group presentations, the boundary δ, and exterior squares of
//! unit groups of truncated rings with their coefficient functionals ℓ_i.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernel::factor;
use crate::kernel::pfrac::{self, PfBasis};
use crate::kernel::qpoly;
use crate::kernel::{CoeffField, FieldElem, FieldKind, TruncSeries, Q};

/// Coefficient ring of a formal sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    Rationals,
    /// Used in characteristic p, where nothing is tensored with ℚ.
    Integers,
}

/// A finite combination Σ c_i [x_i] with every x_i in A^♭.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalSum {
    ring: CoeffRing,
    terms: Vec<(Q, TruncSeries)>,
}

impl fmt::Debug for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, x)) in self.terms.iter().enumerate() {
            let neg = c < &Q::zero();
            let a = if neg { -c } else { c.clone() };
            let sep = match (i, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            if a.is_one() {
                write!(f, "{sep}[{x}]")?;
            } else {
                write!(f, "{sep}{a}*[{x}]")?;
            }
        }
        Ok(())
    }
}

impl FormalSum {
    pub fn zero(ring: CoeffRing) -> FormalSum {
        FormalSum { ring, terms: Vec::new() }
    }

    /// The single generator [x].
    pub fn generator(ring: CoeffRing, x: &TruncSeries) -> Result<FormalSum> {
        let mut s = FormalSum::zero(ring);
        s.add_term(Q::one(), x)?;
        Ok(s)
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn terms(&self) -> &[(Q, TruncSeries)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds c·[x], merging with an existing generator.
    pub fn add_term(&mut self, c: Q, x: &TruncSeries) -> Result<()> {
        if !x.is_flat() {
            return Err(Error::NotFlat(x.to_string()));
        }
        if self.ring == CoeffRing::Integers && !c.is_integer() {
            return Err(Error::InvalidArgument(format!("coefficient {c} is not an integer")));
        }
        if c.is_zero() {
            return Ok(());
        }
        if let Some(pos) = self.terms.iter().position(|(_, y)| y == x) {
            let sum = &self.terms[pos].0 + &c;
            if sum.is_zero() {
                self.terms.remove(pos);
            } else {
                self.terms[pos].0 = sum;
            }
        } else {
            self.terms.push((c, x.clone()));
        }
        Ok(())
    }

    pub fn add(&self, o: &FormalSum) -> FormalSum {
        let mut out = self.clone();
        for (c, x) in &o.terms {
            out.add_term(c.clone(), x).expect("generators already flat");
        }
        out
    }

    pub fn scale(&self, c: &Q) -> FormalSum {
        let mut out = FormalSum::zero(self.ring);
        for (d, x) in &self.terms {
            out.add_term(d * c, x).expect("generators already flat");
        }
        out
    }

    pub fn neg(&self) -> FormalSum {
        self.scale(&-Q::one())
    }

    pub fn sub(&self, o: &FormalSum) -> FormalSum {
        self.add(&o.neg())
    }

    /// Applies a map to every generator, keeping coefficients.
    pub fn map(&self, f: impl Fn(&TruncSeries) -> Result<TruncSeries>) -> Result<FormalSum> {
        let mut out = FormalSum::zero(self.ring);
        for (c, x) in &self.terms {
            out.add_term(c.clone(), &f(x)?)?;
        }
        Ok(out)
    }

    /// Σ c_i·F(x_i) for a functional F valued in the coefficient field.
    pub fn evaluate(&self, field: &CoeffField, f: impl Fn(&TruncSeries) -> Result<FieldElem>) -> Result<FieldElem> {
        let mut acc = field.zero();
        for (c, x) in &self.terms {
            acc = acc.add(&f(x)?.mul(&field.from_q(c)?));
        }
        Ok(acc)
    }
}

fn flat_or_general(x: TruncSeries) -> Result<TruncSeries> {
    if x.is_flat() {
        Ok(x)
    } else {
        Err(Error::NotInGeneralPosition(format!("generator {x} is not in A^♭")))
    }
}

fn unit_or_general(x: &TruncSeries) -> Result<()> {
    if x.is_unit() {
        Ok(())
    } else {
        Err(Error::NotInGeneralPosition(format!("{x} is not a unit")))
    }
}

/// The five generators of the five-term relation, in order
/// `x, y, y/x, (1−x⁻¹)/(1−y⁻¹), (1−x)/(1−y)` with signs `+ − + − +`.
pub fn five_term_generators(x: &TruncSeries, y: &TruncSeries) -> Result<[(i64, TruncSeries); 5]> {
    unit_or_general(x)?;
    unit_or_general(y)?;
    let omx = x.one_minus();
    let omy = y.one_minus();
    unit_or_general(&omx)?;
    unit_or_general(&omy)?;
    let xi = x.inv()?;
    let yi = y.inv()?;
    let g3 = y.div(x)?;
    let g4 = xi.one_minus().div(&yi.one_minus())?;
    let g5 = omx.div(&omy)?;
    Ok([
        (1, flat_or_general(x.clone())?),
        (-1, flat_or_general(y.clone())?),
        (1, flat_or_general(g3)?),
        (-1, flat_or_general(g4)?),
        (1, flat_or_general(g5)?),
    ])
}

/// [x] − [y] + [y/x] − [(1−x⁻¹)/(1−y⁻¹)] + [(1−x)/(1−y)].
pub fn five_term(x: &TruncSeries, y: &TruncSeries) -> Result<FormalSum> {
    five_term_in(CoeffRing::Rationals, x, y)
}

pub fn five_term_in(ring: CoeffRing, x: &TruncSeries, y: &TruncSeries) -> Result<FormalSum> {
    let mut s = FormalSum::zero(ring);
    for (c, g) in five_term_generators(x, y)? {
        s.add_term(Q::from_integer(BigInt::from(c)), &g)?;
    }
    Ok(s)
}

/// ℓ_i(x) = t^i-coefficient of log°(x), for 1 ≤ i < modulus.
pub fn ell(i: usize, x: &TruncSeries) -> Result<FieldElem> {
    if i == 0 || i >= x.modulus() {
        return Err(Error::IndexOutOfRange { index: i, modulus: x.modulus() });
    }
    Ok(x.log_circ()?.coeff(i))
}

/// Basis element for canonical coordinates of units of K[t]/(t^m), K ∈ {ℚ, ℚ(z)}.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WedgeBasis {
    Prime(BigInt),
    /// Monic irreducible in z, ascending coefficients.
    Irreducible(Vec<Q>),
    /// ℚ-coordinate of ℓ_index along a ℚ-basis vector of K.
    Log { index: usize, mono: LogMono },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogMono {
    One,
    Pf(PfBasis),
}

impl WedgeBasis {
    pub fn is_multiplicative(&self) -> bool {
        !matches!(self, WedgeBasis::Log { .. })
    }

    /// ℓ_i of this basis vector, as an element of K.
    fn ell(&self, i: usize, field: &CoeffField) -> FieldElem {
        match self {
            WedgeBasis::Log { index, mono } if *index == i => match mono {
                LogMono::One => field.one(),
                LogMono::Pf(b) => pf_basis_elem(b, field),
            },
            _ => field.zero(),
        }
    }
}

fn pf_basis_elem(b: &PfBasis, field: &CoeffField) -> FieldElem {
    let base = field.base().expect("function field");
    let qp = |v: &[Q]| crate::kernel::Poly::new(base, v.iter().map(|c| base.from_q(c).unwrap()).collect());
    let mut mono = Vec::<Q>::new();
    match b {
        PfBasis::Monomial(j) => {
            mono.resize(*j, Q::zero());
            mono.push(Q::one());
            field.fraction(qp(&mono), qp(&[Q::one()])).unwrap()
        }
        PfBasis::Polar { q, k, j } => {
            mono.resize(*j, Q::zero());
            mono.push(Q::one());
            let mut d = vec![Q::one()];
            for _ in 0..*k {
                d = qpoly::mul(&d, q);
            }
            field.fraction(qp(&mono), qp(&d)).unwrap()
        }
    }
}

fn canonical_supported(field: &CoeffField) -> bool {
    match field.kind() {
        FieldKind::Rationals => true,
        FieldKind::FunctionField { base, .. } => base.is_rationals(),
        _ => false,
    }
}

fn add_rational_primes(out: &mut BTreeMap<WedgeBasis, Q>, x: &Q, mult: i64) {
    for (p, e) in factor::factor_rational(x).1 {
        *out.entry(WedgeBasis::Prime(p)).or_insert_with(Q::zero) += Q::from_integer(BigInt::from(e * mult));
    }
}

fn q_coeffs(p: &crate::kernel::Poly) -> Vec<Q> {
    p.coeffs().iter().map(|c| c.as_q().expect("rational coefficient")).collect()
}

/// Canonical ℚ-coordinates of a unit of K[t]/(t^m), K ∈ {ℚ, ℚ(z)}.
pub fn unit_coordinates(x: &TruncSeries) -> Result<BTreeMap<WedgeBasis, Q>> {
    let field = x.field();
    if !canonical_supported(field) {
        return Err(Error::UnsupportedField(field.to_string()));
    }
    let x0 = x.constant_term();
    if x0.is_zero() {
        return Err(Error::NonUnit(x.to_string()));
    }
    let mut out = BTreeMap::new();
    if field.is_rationals() {
        add_rational_primes(&mut out, &x0.as_q().unwrap(), 1);
    } else {
        let (n, d) = x0.num_den();
        let (nq, dq) = (q_coeffs(n), q_coeffs(d));
        let (lc, nf) = factor::factor_qpoly(&nq);
        add_rational_primes(&mut out, &lc, 1);
        for (g, e) in nf {
            if g.len() > 1 {
                *out.entry(WedgeBasis::Irreducible(g)).or_insert_with(Q::zero) += Q::from_integer(BigInt::from(e));
            }
        }
        let (_, df) = factor::factor_qpoly(&dq);
        for (g, e) in df {
            if g.len() > 1 {
                *out.entry(WedgeBasis::Irreducible(g)).or_insert_with(Q::zero) -= Q::from_integer(BigInt::from(e));
            }
        }
    }
    let lg = x.log_circ()?;
    for i in 1..x.modulus() {
        let c = lg.coeff(i);
        if c.is_zero() {
            continue;
        }
        if field.is_rationals() {
            out.insert(WedgeBasis::Log { index: i, mono: LogMono::One }, c.as_q().unwrap());
        } else {
            let (n, d) = c.num_den();
            for (b, v) in pfrac::decompose(&q_coeffs(n), &q_coeffs(d)) {
                out.insert(WedgeBasis::Log { index: i, mono: LogMono::Pf(b) }, v);
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// A sparse antisymmetric matrix over [`WedgeBasis`], storing entries with a < b.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CanonicalWedge {
    entries: BTreeMap<(WedgeBasis, WedgeBasis), Q>,
}

impl CanonicalWedge {
    pub fn entries(&self) -> &BTreeMap<(WedgeBasis, WedgeBasis), Q> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn add_entry(&mut self, a: &WedgeBasis, b: &WedgeBasis, c: Q) {
        use std::cmp::Ordering::*;
        let (key, c) = match a.cmp(b) {
            Equal => return,
            Less => ((a.clone(), b.clone()), c),
            Greater => ((b.clone(), a.clone()), -c),
        };
        let e = self.entries.entry(key.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.entries.remove(&key);
        }
    }

    pub fn add(&self, o: &CanonicalWedge) -> CanonicalWedge {
        let mut out = self.clone();
        for ((a, b), c) in &o.entries {
            out.add_entry(a, b, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &CanonicalWedge) -> CanonicalWedge {
        let mut out = self.clone();
        for ((a, b), c) in &o.entries {
            out.add_entry(a, b, -c.clone());
        }
        out
    }

    /// Drops the Λ² of the multiplicative part (entries between two factor-basis vectors).
    pub fn infinitesimal_part(&self) -> CanonicalWedge {
        CanonicalWedge {
            entries: self
                .entries
                .iter()
                .filter(|((a, b), _)| !(a.is_multiplicative() && b.is_multiplicative()))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum WedgeRepr {
    Eval(Vec<(Q, TruncSeries, TruncSeries)>),
    Canonical(CanonicalWedge),
}

/// An element of Λ²(A^×) ⊗ ℚ (or Λ² with ℤ coefficients in characteristic p)
/// for A = K[t]/(t^m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wedge2 {
    field: CoeffField,
    modulus: usize,
    repr: WedgeRepr,
}

/// How [`Wedge2::zero_test`] reached its verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroMode {
    Exact,
    /// One-sided: `false` is certain, `true` holds at every sampled projection.
    Probabilistic { points: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroTest {
    pub zero: bool,
    pub mode: ZeroMode,
}

impl Wedge2 {
    pub fn zero(field: &CoeffField, modulus: usize) -> Wedge2 {
        Wedge2 { field: field.clone(), modulus, repr: WedgeRepr::Eval(Vec::new()) }
    }

    /// x∧y.
    pub fn pair(x: &TruncSeries, y: &TruncSeries) -> Result<Wedge2> {
        let mut w = Wedge2::zero(x.field(), x.modulus());
        w.push(Q::one(), x, y)?;
        Ok(w)
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self.repr, WedgeRepr::Canonical(_))
    }

    /// Formal terms (evaluation mode only).
    pub fn terms(&self) -> Option<&[(Q, TruncSeries, TruncSeries)]> {
        match &self.repr {
            WedgeRepr::Eval(t) => Some(t),
            WedgeRepr::Canonical(_) => None,
        }
    }

    /// Appends c·(x∧y) in evaluation mode.
    pub fn push(&mut self, c: Q, x: &TruncSeries, y: &TruncSeries) -> Result<()> {
        if x.modulus() != self.modulus || y.modulus() != self.modulus {
            return Err(Error::ModulusMismatch(x.modulus(), self.modulus));
        }
        if !x.is_unit() {
            return Err(Error::NonUnit(x.to_string()));
        }
        if !y.is_unit() {
            return Err(Error::NonUnit(y.to_string()));
        }
        match &mut self.repr {
            WedgeRepr::Eval(t) => t.push((c, x.clone(), y.clone())),
            WedgeRepr::Canonical(_) => return Err(Error::InvalidArgument("push on canonical wedge".into())),
        }
        Ok(())
    }

    pub fn add(&self, o: &Wedge2) -> Result<Wedge2> {
        if self.modulus != o.modulus {
            return Err(Error::ModulusMismatch(self.modulus, o.modulus));
        }
        match (&self.repr, &o.repr) {
            (WedgeRepr::Eval(a), WedgeRepr::Eval(b)) => {
                let mut t = a.clone();
                t.extend(b.iter().cloned());
                Ok(Wedge2 { field: self.field.clone(), modulus: self.modulus, repr: WedgeRepr::Eval(t) })
            }
            _ => {
                let c = self.canonical()?.add(&o.canonical()?);
                Ok(Wedge2 { field: self.field.clone(), modulus: self.modulus, repr: WedgeRepr::Canonical(c) })
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Wedge2 {
        let repr = match &self.repr {
            WedgeRepr::Eval(t) => WedgeRepr::Eval(t.iter().map(|(d, x, y)| (d * c, x.clone(), y.clone())).collect()),
            WedgeRepr::Canonical(w) => WedgeRepr::Canonical(CanonicalWedge {
                entries: if c.is_zero() {
                    BTreeMap::new()
                } else {
                    w.entries.iter().map(|(k, v)| (k.clone(), v * c)).collect()
                },
            }),
        };
        Wedge2 { field: self.field.clone(), modulus: self.modulus, repr }
    }

    pub fn sub(&self, o: &Wedge2) -> Result<Wedge2> {
        self.add(&o.scale(&-Q::one()))
    }

    /// Canonical coordinates (K ∈ {ℚ, ℚ(z)} only).
    pub fn canonical(&self) -> Result<CanonicalWedge> {
        match &self.repr {
            WedgeRepr::Canonical(c) => Ok(c.clone()),
            WedgeRepr::Eval(terms) => {
                let mut out = CanonicalWedge::default();
                for (c, x, y) in terms {
                    let vx = unit_coordinates(x)?;
                    let vy = unit_coordinates(y)?;
                    for (a, ca) in &vx {
                        for (b, cb) in &vy {
                            out.add_entry(a, b, c * ca * cb);
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// The same class in canonical mode.
    pub fn to_canonical(&self) -> Result<Wedge2> {
        Ok(Wedge2 { field: self.field.clone(), modulus: self.modulus, repr: WedgeRepr::Canonical(self.canonical()?) })
    }

    /// (ℓ_i∧ℓ_j)(w) = Σ c·(ℓ_i(x)ℓ_j(y) − ℓ_i(y)ℓ_j(x)).
    pub fn wedge_eval(&self, i: usize, j: usize) -> Result<FieldElem> {
        for k in [i, j] {
            if k == 0 || k >= self.modulus {
                return Err(Error::IndexOutOfRange { index: k, modulus: self.modulus });
            }
        }
        let f = &self.field;
        let mut acc = f.zero();
        match &self.repr {
            WedgeRepr::Eval(terms) => {
                for (c, x, y) in terms {
                    let lx = x.log_circ()?;
                    let ly = y.log_circ()?;
                    let v = lx.coeff(i).mul(&ly.coeff(j)).sub(&ly.coeff(i).mul(&lx.coeff(j)));
                    acc = acc.add(&v.mul(&f.from_q(c)?));
                }
            }
            WedgeRepr::Canonical(w) => {
                for ((a, b), c) in &w.entries {
                    let v = a.ell(i, f).mul(&b.ell(j, f)).sub(&b.ell(i, f).mul(&a.ell(j, f)));
                    acc = acc.add(&v.mul(&f.from_q(c)?));
                }
            }
        }
        Ok(acc)
    }

    /// Exact over ℚ and ℚ(z); otherwise a one-sided test with the default number of points.
    pub fn is_zero(&self) -> bool {
        self.zero_test(5, 0).zero
    }

    pub fn zero_test(&self, points: usize, seed: u64) -> ZeroTest {
        if canonical_supported(&self.field) {
            let zero = self.canonical().map(|c| c.is_zero()).unwrap_or(false);
            return ZeroTest { zero, mode: ZeroMode::Exact };
        }
        if self.field.is_finite() {
            // every unit of a finite ring is torsion, so Λ² ⊗ ℚ vanishes
            return ZeroTest { zero: true, mode: ZeroMode::Exact };
        }
        let points = points.max(5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let zero = (0..points).all(|_| projected_is_zero(self, &mut rng));
        ZeroTest { zero, mode: ZeroMode::Probabilistic { points } }
    }
}

/// ℚ-valued projection of a unit of k[t]/(t^m), k a number field: prime valuations of
/// the norm of x(0) and traces of ω·ℓ_i(x) for the power basis ω.
fn projected_coordinates(x: &TruncSeries) -> Result<BTreeMap<(u8, BigInt, usize), Q>> {
    let field = x.field();
    let mut out = BTreeMap::new();
    let n = x.constant_term().norm()?;
    for (p, e) in factor::factor_rational(&n).1 {
        out.insert((0, p, 0), Q::from_integer(BigInt::from(e)));
    }
    let lg = x.log_circ()?;
    let d = field.degree().unwrap_or(1);
    let basis: Vec<FieldElem> = match field.gen() {
        Some(g) => (0..d).map(|k| g.pow_u(k as u128)).collect(),
        None => vec![field.one()],
    };
    for i in 1..x.modulus() {
        for (k, w) in basis.iter().enumerate() {
            let v = lg.coeff(i).mul(w).trace()?.as_q().unwrap();
            if !v.is_zero() {
                out.insert((1, BigInt::from(i), k), v);
            }
        }
    }
    Ok(out)
}

fn projected_is_zero<R: Rng>(w: &Wedge2, rng: &mut R) -> bool {
    let terms = match &w.repr {
        WedgeRepr::Eval(t) => t.clone(),
        WedgeRepr::Canonical(c) => return c.is_zero(),
    };
    // specialize the function-field variable, if any, at a random rational avoiding bad points
    let specialized: Vec<(Q, TruncSeries, TruncSeries)> = if let Some(base) = w.field.base().cloned() {
        'retry: loop {
            let r = base.from_q(&Q::new(BigInt::from(rng.gen_range(-60i64..=60)), BigInt::from(rng.gen_range(1i64..=7)))).unwrap();
            let spec = |s: &TruncSeries| -> Option<TruncSeries> {
                let v = s.map_coeffs(&base, |c| c.eval_at(&r)).ok()?;
                v.is_unit().then_some(v)
            };
            let mut out = Vec::new();
            for (c, x, y) in &terms {
                match (spec(x), spec(y)) {
                    (Some(a), Some(b)) => out.push((c.clone(), a, b)),
                    _ => continue 'retry,
                }
            }
            break out;
        }
    } else {
        terms
    };
    let mut acc: BTreeMap<((u8, BigInt, usize), (u8, BigInt, usize)), Q> = BTreeMap::new();
    for (c, x, y) in &specialized {
        let (Ok(vx), Ok(vy)) = (projected_coordinates(x), projected_coordinates(y)) else {
            return false;
        };
        for (a, ca) in &vx {
            for (b, cb) in &vy {
                let v = c * ca * cb;
                match a.cmp(b) {
                    std::cmp::Ordering::Less => *acc.entry((a.clone(), b.clone())).or_insert_with(Q::zero) += v,
                    std::cmp::Ordering::Greater => *acc.entry((b.clone(), a.clone())).or_insert_with(Q::zero) -= v,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
    }
    acc.values().all(|v| v.is_zero())
}

/// δ(Σ c[x]) = Σ c·(1−x)∧x, in evaluation mode.
pub fn delta(xi: &FormalSum) -> Result<Option<Wedge2>> {
    let Some((_, first)) = xi.terms().first() else {
        return Ok(None);
    };
    let mut w = Wedge2::zero(first.field(), first.modulus());
    for (c, x) in xi.terms() {
        w.push(c.clone(), &x.one_minus(), x)?;
    }
    Ok(Some(w))
}

/// δ with an explicit ambient ring, so that the empty sum maps to the zero wedge.
pub fn delta_in(field: &CoeffField, modulus: usize, xi: &FormalSum) -> Result<Wedge2> {
    Ok(delta(xi)?.unwrap_or_else(|| Wedge2::zero(field, modulus)))
}

/// A formal element of Λ³ with integer multiplicities; multilinearity is applied by consumers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wedge3<T> {
    pub terms: Vec<(i64, [T; 3])>,
}

impl<T: Clone> Wedge3<T> {
    pub fn single(a: T, b: T, c: T) -> Self {
        Wedge3 { terms: vec![(1, [a, b, c])] }
    }

    pub fn add(&self, o: &Wedge3<T>) -> Self {
        let mut t = self.terms.clone();
        t.extend(o.terms.iter().cloned());
        Wedge3 { terms: t }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::qpoly::{q, qf};

    fn qs(v: &[(i64, i64)], m: usize) -> TruncSeries {
        let k = CoeffField::rationals();
        TruncSeries::new(&k, v.iter().map(|&(a, b)| k.from_q(&qf(a, b)).unwrap()).collect(), m)
    }

    #[test]
    fn five_term_over_q() {
        let s = five_term(&qs(&[(2, 1)], 1), &qs(&[(3, 1)], 1)).unwrap();
        assert_eq!(s.to_string(), "[2] - [3] + [3/2] - [3/4] + [1/2]");
        let w = delta_in(&CoeffField::rationals(), 1, &s).unwrap();
        assert!(w.is_zero());
    }

    #[test]
    fn delta_examples() {
        let x = qs(&[(3, 1)], 1);
        let w = delta_in(&CoeffField::rationals(), 1, &FormalSum::generator(CoeffRing::Rationals, &x).unwrap()).unwrap();
        let c = w.canonical().unwrap();
        assert_eq!(c.entries().len(), 1);
        assert_eq!(c.entries()[&(WedgeBasis::Prime(2.into()), WedgeBasis::Prime(3.into()))], q(1));
        assert!(!w.is_zero());
        let y = qs(&[(1, 2), (1, 1)], 3);
        let mut s = FormalSum::generator(CoeffRing::Rationals, &y).unwrap();
        s.add_term(Q::one(), &y.one_minus()).unwrap();
        assert!(delta(&s).unwrap().unwrap().is_zero());
        assert!(delta(&FormalSum::zero(CoeffRing::Rationals)).unwrap().is_none());
    }

    #[test]
    fn ell_and_wedge_eval_pinned() {
        let x = qs(&[(1, 1), (2, 1)], 3);
        assert_eq!(ell(1, &x).unwrap().as_q(), Some(q(2)));
        assert!(matches!(ell(3, &x), Err(Error::IndexOutOfRange { .. })));
        let y = qs(&[(1, 2), (1, 1)], 3);
        let w = Wedge2::pair(&y.one_minus(), &y).unwrap();
        assert_eq!(w.wedge_eval(2, 1).unwrap().as_q(), Some(q(-8)));
        assert_eq!(w.to_canonical().unwrap().wedge_eval(2, 1).unwrap().as_q(), Some(q(-8)));
        assert!(w.wedge_eval(1, 1).unwrap().is_zero());
    }

    #[test]
    fn not_flat_rejected() {
        assert!(matches!(FormalSum::generator(CoeffRing::Rationals, &qs(&[(1, 1), (1, 1)], 2)), Err(Error::NotFlat(_))));
        assert!(matches!(five_term(&qs(&[(2, 1)], 1), &qs(&[(2, 1)], 1)), Err(Error::NotInGeneralPosition(_))));
    }

    #[test]
    fn function_field_canonical() {
        let k = CoeffField::function_field(&CoeffField::rationals(), "z").unwrap();
        let z = k.gen().unwrap();
        let x = TruncSeries::new(&k, vec![z.clone(), k.one()], 3);
        let y = TruncSeries::new(&k, vec![z.add(&k.from_int(2)), z.clone()], 3);
        let s = five_term(&x, &y).unwrap();
        assert!(delta(&s).unwrap().unwrap().is_zero());
        let w = Wedge2::pair(&x, &y).unwrap();
        assert!(!w.is_zero());
    }

    #[test]
    fn number_field_probabilistic() {
        let k = CoeffField::number_field(&[q(-2), q(0), q(1)], "θ").unwrap();
        let th = k.gen().unwrap();
        let x = TruncSeries::new(&k, vec![th.clone(), k.one()], 3);
        let y = TruncSeries::new(&k, vec![th.add(&k.from_int(3)), th.clone()], 3);
        let s = five_term(&x, &y).unwrap();
        let z = delta(&s).unwrap().unwrap().zero_test(5, 1);
        assert!(z.zero);
        assert_eq!(z.mode, ZeroMode::Probabilistic { points: 5 });
        assert!(!Wedge2::pair(&x, &y).unwrap().is_zero());
    }
}
