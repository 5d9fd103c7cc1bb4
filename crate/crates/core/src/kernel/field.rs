//! The coefficient-field tower: ℚ, number fields ℚ[θ]/(m), rational function
//! fields K(z) over ℚ or a number field, and finite fields 𝔽_{p^e}.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::factor;
use super::fpoly;
use super::poly::Poly;
use super::qpoly::{self, Q};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    /// `modulus` is monic, ascending, irreducible of degree ≥ 2.
    NumberField { modulus: Vec<Q>, gen: String },
    FunctionField { base: CoeffField, var: String },
    /// `modulus` is monic, ascending, irreducible of degree `e` over 𝔽_p.
    Finite { p: u64, e: u32, modulus: Vec<u64>, gen: String },
}

#[derive(Debug)]
struct FieldData {
    kind: FieldKind,
    power_sums: Vec<Q>,
}

/// A coefficient field. Cheap to clone; equality is structural.
#[derive(Clone)]
pub struct CoeffField(Arc<FieldData>);

impl PartialEq for CoeffField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}
impl Eq for CoeffField {}

impl Hash for CoeffField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.kind.hash(state)
    }
}

impl fmt::Debug for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

static RATIONALS: OnceLock<CoeffField> = OnceLock::new();

fn newton_power_sums(modulus: &[Q]) -> Vec<Q> {
    // modulus = z^d + c_{d-1} z^{d-1} + ... + c_0; p_k = Σ r^k for k < d
    let d = modulus.len() - 1;
    let c = |i: usize| modulus[i].clone();
    let mut ps = vec![Q::from_integer(BigInt::from(d))];
    for k in 1..d {
        let mut acc = Q::from_integer(BigInt::from(k)) * c(d - k);
        for i in 1..k {
            acc += c(d - i) * &ps[k - i];
        }
        ps.push(-acc);
    }
    ps
}

impl CoeffField {
    fn from_kind(kind: FieldKind) -> Self {
        let power_sums = match &kind {
            FieldKind::NumberField { modulus, .. } => newton_power_sums(modulus),
            _ => Vec::new(),
        };
        CoeffField(Arc::new(FieldData { kind, power_sums }))
    }

    pub fn rationals() -> Self {
        RATIONALS.get_or_init(|| CoeffField::from_kind(FieldKind::Rationals)).clone()
    }

    /// ℚ[gen]/(modulus), modulus given ascending; it is made monic.
    pub fn number_field(modulus: &[Q], gen: &str) -> Result<Self> {
        let m = qpoly::trim(modulus.to_vec());
        if m.len() < 3 {
            return Err(Error::InvalidField(format!("number field modulus must have degree ≥ 2, got {}", m.len().saturating_sub(1))));
        }
        if !factor::is_irreducible_q(&m) {
            return Err(Error::InvalidField("number field modulus is reducible".into()));
        }
        Ok(Self::from_kind(FieldKind::NumberField { modulus: qpoly::monic(&m), gen: gen.to_string() }))
    }

    pub fn function_field(base: &CoeffField, var: &str) -> Result<Self> {
        match base.kind() {
            FieldKind::Rationals | FieldKind::NumberField { .. } => {
                Ok(Self::from_kind(FieldKind::FunctionField { base: base.clone(), var: var.to_string() }))
            }
            _ => Err(Error::InvalidField(format!("function field over {base} is not supported"))),
        }
    }

    /// 𝔽_{p^e} with the lexicographically first monic irreducible modulus.
    pub fn finite(p: u64, e: u32, gen: &str) -> Result<Self> {
        check_prime(p)?;
        if e == 0 {
            return Err(Error::InvalidField("extension degree must be ≥ 1".into()));
        }
        Ok(Self::from_kind(FieldKind::Finite { p, e, modulus: fpoly::first_irreducible(e, p), gen: gen.to_string() }))
    }

    pub fn finite_with_modulus(p: u64, modulus: &[u64], gen: &str) -> Result<Self> {
        check_prime(p)?;
        let m = fpoly::trim(modulus.iter().map(|c| c % p).collect());
        if m.len() < 2 || !fpoly::is_irreducible(&m, p) {
            return Err(Error::InvalidField(format!("modulus is not irreducible over F{p}")));
        }
        let m = fpoly::monic(&m, p);
        let e = (m.len() - 1) as u32;
        Ok(Self::from_kind(FieldKind::Finite { p, e, modulus: m, gen: gen.to_string() }))
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0.kind
    }

    pub fn characteristic(&self) -> u64 {
        match self.kind() {
            FieldKind::Finite { p, .. } => *p,
            _ => 0,
        }
    }

    pub fn is_rationals(&self) -> bool {
        matches!(self.kind(), FieldKind::Rationals)
    }

    pub fn is_function_field(&self) -> bool {
        matches!(self.kind(), FieldKind::FunctionField { .. })
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind(), FieldKind::Finite { .. })
    }

    /// Base field of a function field.
    pub fn base(&self) -> Option<&CoeffField> {
        match self.kind() {
            FieldKind::FunctionField { base, .. } => Some(base),
            _ => None,
        }
    }

    /// Degree over the prime field (`None` for function fields).
    pub fn degree(&self) -> Option<usize> {
        match self.kind() {
            FieldKind::Rationals => Some(1),
            FieldKind::NumberField { modulus, .. } => Some(modulus.len() - 1),
            FieldKind::FunctionField { .. } => None,
            FieldKind::Finite { e, .. } => Some(*e as usize),
        }
    }

    /// Number of elements of a finite field.
    pub fn order(&self) -> Option<u128> {
        match self.kind() {
            FieldKind::Finite { p, e, .. } => Some((*p as u128).pow(*e)),
            _ => None,
        }
    }

    pub fn zero(&self) -> FieldElem {
        let repr = match self.kind() {
            FieldKind::Rationals => Repr::Rat(Q::zero()),
            FieldKind::NumberField { .. } => Repr::Alg(Vec::new()),
            FieldKind::FunctionField { base, .. } => Repr::Fun(Poly::zero(base), Poly::one(base)),
            FieldKind::Finite { .. } => Repr::Fin(Vec::new()),
        };
        FieldElem { field: self.clone(), repr }
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElem {
        self.from_q(&Q::from_integer(n.clone())).expect("integers embed in every field")
    }

    /// Image of a rational; fails in characteristic p when p divides the denominator.
    pub fn from_q(&self, x: &Q) -> Result<FieldElem> {
        let repr = match self.kind() {
            FieldKind::Rationals => Repr::Rat(x.clone()),
            FieldKind::NumberField { .. } => Repr::Alg(qpoly::trim(vec![x.clone()])),
            FieldKind::FunctionField { base, .. } => {
                let c = base.from_q(x)?;
                Repr::Fun(Poly::constant(c), Poly::one(base))
            }
            FieldKind::Finite { p, .. } => {
                let bp = BigInt::from(*p);
                let d = x.denom().mod_floor(&bp).to_u64().unwrap();
                if d == 0 {
                    return Err(Error::DivisionByZero);
                }
                let n = x.numer().mod_floor(&bp).to_u64().unwrap();
                Repr::Fin(fpoly::trim(vec![fpoly::mulmod(n, fpoly::inv(d, *p), *p)]))
            }
        };
        Ok(FieldElem { field: self.clone(), repr })
    }

    /// The generator θ of a number or finite field, or the variable of a function field.
    pub fn gen(&self) -> Option<FieldElem> {
        let repr = match self.kind() {
            FieldKind::Rationals => return None,
            FieldKind::NumberField { modulus, .. } => {
                Repr::Alg(qpoly::rem(&[Q::zero(), Q::one()], modulus))
            }
            FieldKind::FunctionField { base, .. } => Repr::Fun(Poly::x(base), Poly::one(base)),
            FieldKind::Finite { p, modulus, .. } => Repr::Fin(fpoly::rem(&[0, 1], modulus, *p)),
        };
        Some(FieldElem { field: self.clone(), repr })
    }

    pub fn gen_name(&self) -> Option<&str> {
        match self.kind() {
            FieldKind::NumberField { gen, .. } | FieldKind::Finite { gen, .. } => Some(gen),
            FieldKind::FunctionField { var, .. } => Some(var),
            FieldKind::Rationals => None,
        }
    }

    /// Number-field element from coordinates in the power basis.
    pub fn from_alg_coords(&self, coords: &[Q]) -> FieldElem {
        match self.kind() {
            FieldKind::NumberField { modulus, .. } => FieldElem {
                field: self.clone(),
                repr: Repr::Alg(qpoly::rem(coords, modulus)),
            },
            FieldKind::Rationals => FieldElem {
                field: self.clone(),
                repr: Repr::Rat(coords.first().cloned().unwrap_or_else(Q::zero)),
            },
            _ => panic!("from_alg_coords on {self}"),
        }
    }

    /// Finite-field element from coordinates in the power basis.
    pub fn from_fin_coords(&self, coords: &[u64]) -> FieldElem {
        match self.kind() {
            FieldKind::Finite { p, modulus, .. } => {
                let v: Vec<u64> = coords.iter().map(|c| c % p).collect();
                FieldElem { field: self.clone(), repr: Repr::Fin(fpoly::rem(&v, modulus, *p)) }
            }
            _ => panic!("from_fin_coords on {self}"),
        }
    }

    /// Function-field element `num/den`, both over the base field.
    pub fn fraction(&self, num: Poly, den: Poly) -> Result<FieldElem> {
        match self.kind() {
            FieldKind::FunctionField { base, .. } => {
                if num.field() != base || den.field() != base {
                    return Err(Error::FieldMismatch(num.field().to_string(), base.to_string()));
                }
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                let (n, d) = normalize_fraction(num, den);
                Ok(FieldElem { field: self.clone(), repr: Repr::Fun(n, d) })
            }
            _ => Err(Error::UnsupportedField(self.to_string())),
        }
    }

    /// Maps an element of a subfield (ℚ, the prime field, or a function field's base) into this field.
    pub fn embed(&self, x: &FieldElem) -> Result<FieldElem> {
        if x.field() == self {
            return Ok(x.clone());
        }
        if let Repr::Rat(q) = &x.repr {
            if self.characteristic() == 0 {
                return self.from_q(q);
            }
        }
        match self.kind() {
            FieldKind::FunctionField { base, .. } => {
                let c = base.embed(x)?;
                Ok(FieldElem { field: self.clone(), repr: Repr::Fun(Poly::constant(c), Poly::one(base)) })
            }
            FieldKind::Finite { p, .. } => match (&x.repr, x.field().kind()) {
                (Repr::Fin(v), FieldKind::Finite { p: q, e: 1, .. }) if q == p => Ok(self.from_fin_coords(v)),
                _ => Err(Error::NotAnExtension(format!("{x} does not embed in {self}"))),
            },
            _ => Err(Error::NotAnExtension(format!("{x} does not embed in {self}"))),
        }
    }

    /// 𝔽_p inside a finite field.
    pub fn prime_subfield(&self) -> CoeffField {
        match self.kind() {
            FieldKind::Finite { e: 1, .. } => self.clone(),
            FieldKind::Finite { p, gen, .. } => CoeffField::finite(*p, 1, gen).expect("prime field"),
            _ => CoeffField::rationals(),
        }
    }

    /// All elements of a finite field, in coordinate order.
    pub fn elements(&self) -> Vec<FieldElem> {
        let FieldKind::Finite { p, e, .. } = self.kind() else {
            panic!("elements() on infinite field {self}");
        };
        let q = self.order().unwrap() as u64;
        (0..q)
            .map(|mut n| {
                let mut c = Vec::with_capacity(*e as usize);
                for _ in 0..*e {
                    c.push(n % p);
                    n /= p;
                }
                self.from_fin_coords(&c)
            })
            .collect()
    }
}

fn check_prime(p: u64) -> Result<()> {
    let prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
    if !prime {
        return Err(Error::InvalidField(format!("{p} is not prime")));
    }
    if p < 5 {
        return Err(Error::InvalidField(format!("finite fields need p ≥ 5, got {p}")));
    }
    if p > u32::MAX as u64 {
        return Err(Error::InvalidField(format!("prime {p} too large")));
    }
    Ok(())
}

/// Makes the denominator of a reduced fraction monic.
fn scale_fraction(num: Poly, den: Poly) -> (Poly, Poly) {
    if num.is_zero() {
        return (Poly::zero(num.field()), Poly::one(num.field()));
    }
    let lc = den.lc().clone();
    if lc.is_one() {
        return (num, den);
    }
    let li = lc.inv().expect("nonzero leading coefficient");
    (num.scale(&li), den.scale(&li))
}

fn normalize_fraction(num: Poly, den: Poly) -> (Poly, Poly) {
    let base = num.field().clone();
    if num.is_zero() {
        return (Poly::zero(&base), Poly::one(&base));
    }
    let g = num.gcd(&den);
    let (mut n, mut d) = if g.degree() == Some(0) { (num, den) } else { (num.exact_div(&g), den.exact_div(&g)) };
    let lc = d.lc().clone();
    if !lc.is_one() {
        let li = lc.inv().expect("nonzero leading coefficient");
        n = n.scale(&li);
        d = d.scale(&li);
    }
    (n, d)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) enum Repr {
    Rat(Q),
    Alg(Vec<Q>),
    Fun(Poly, Poly),
    Fin(Vec<u64>),
}

/// An element of a [`CoeffField`], stored in canonical coordinates.
#[derive(Clone)]
pub struct FieldElem {
    field: CoeffField,
    pub(crate) repr: Repr,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr && self.field == other.field
    }
}
impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FieldElem {
    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    fn with(&self, repr: Repr) -> FieldElem {
        FieldElem { field: self.field.clone(), repr }
    }

    fn check(&self, other: &FieldElem) {
        assert!(
            self.field == other.field,
            "field mismatch: {} vs {}",
            self.field,
            other.field
        );
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rat(q) => q.is_zero(),
            Repr::Alg(v) => v.is_empty(),
            Repr::Fun(n, _) => n.is_zero(),
            Repr::Fin(v) => v.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    /// The rational value if this element lies in the prime field ℚ.
    pub fn as_q(&self) -> Option<Q> {
        match &self.repr {
            Repr::Rat(q) => Some(q.clone()),
            Repr::Alg(v) if v.len() <= 1 => Some(v.first().cloned().unwrap_or_else(Q::zero)),
            Repr::Fun(n, d) if n.degree().unwrap_or(0) == 0 && d.degree() == Some(0) => {
                n.coeff(0).as_q()
            }
            _ => None,
        }
    }

    /// The value in 0..p if this element lies in the prime field 𝔽_p.
    pub fn as_fp(&self) -> Option<u64> {
        match &self.repr {
            Repr::Fin(v) if v.len() <= 1 => Some(v.first().copied().unwrap_or(0)),
            _ => None,
        }
    }

    /// Power-basis coordinates of a number-field element (length = degree).
    pub fn alg_coords(&self) -> Vec<Q> {
        match (&self.repr, self.field.kind()) {
            (Repr::Alg(v), FieldKind::NumberField { modulus, .. }) => {
                let mut c = v.clone();
                c.resize(modulus.len() - 1, Q::zero());
                c
            }
            (Repr::Rat(q), _) => vec![q.clone()],
            _ => panic!("alg_coords on {}", self.field),
        }
    }

    /// Power-basis coordinates of a finite-field element (length = e).
    pub fn fin_coords(&self) -> Vec<u64> {
        match (&self.repr, self.field.kind()) {
            (Repr::Fin(v), FieldKind::Finite { e, .. }) => {
                let mut c = v.clone();
                c.resize(*e as usize, 0);
                c
            }
            _ => panic!("fin_coords on {}", self.field),
        }
    }

    /// Numerator and denominator of a function-field element (denominator monic).
    pub fn num_den(&self) -> (&Poly, &Poly) {
        match &self.repr {
            Repr::Fun(n, d) => (n, d),
            _ => panic!("num_den on {}", self.field),
        }
    }

    pub fn neg(&self) -> FieldElem {
        match &self.repr {
            Repr::Rat(q) => self.with(Repr::Rat(-q)),
            Repr::Alg(v) => self.with(Repr::Alg(qpoly::neg(v))),
            Repr::Fun(n, d) => self.with(Repr::Fun(n.neg(), d.clone())),
            Repr::Fin(v) => {
                let p = self.field.characteristic();
                self.with(Repr::Fin(fpoly::neg(v, p)))
            }
        }
    }

    pub fn add(&self, o: &FieldElem) -> FieldElem {
        self.check(o);
        match (&self.repr, &o.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => self.with(Repr::Rat(a + b)),
            (Repr::Alg(a), Repr::Alg(b)) => self.with(Repr::Alg(qpoly::add(a, b))),
            (Repr::Fin(a), Repr::Fin(b)) => {
                self.with(Repr::Fin(fpoly::add(a, b, self.field.characteristic())))
            }
            (Repr::Fun(a, b), Repr::Fun(c, d)) => {
                let (n, dd) = if b == d {
                    normalize_fraction(a.add(c), b.clone())
                } else {
                    let g = b.gcd(d);
                    if g.degree() == Some(0) {
                        scale_fraction(a.mul(d).add(&c.mul(b)), b.mul(d))
                    } else {
                        let (b1, d1) = (b.exact_div(&g), d.exact_div(&g));
                        let n = a.mul(&d1).add(&c.mul(&b1));
                        let h = n.gcd(&g);
                        if h.degree() == Some(0) {
                            scale_fraction(n, b1.mul(d))
                        } else {
                            scale_fraction(n.exact_div(&h), b1.mul(&d.exact_div(&h)))
                        }
                    }
                };
                self.with(Repr::Fun(n, dd))
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, o: &FieldElem) -> FieldElem {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &FieldElem) -> FieldElem {
        self.check(o);
        match (&self.repr, &o.repr, self.field.kind()) {
            (Repr::Rat(a), Repr::Rat(b), _) => self.with(Repr::Rat(a * b)),
            (Repr::Alg(a), Repr::Alg(b), FieldKind::NumberField { modulus, .. }) => {
                self.with(Repr::Alg(qpoly::rem(&qpoly::mul(a, b), modulus)))
            }
            (Repr::Fin(a), Repr::Fin(b), FieldKind::Finite { p, modulus, .. }) => {
                self.with(Repr::Fin(fpoly::mulrem(a, b, modulus, *p)))
            }
            (Repr::Fun(a, b), Repr::Fun(c, d), _) => {
                if self.is_zero() || o.is_zero() {
                    return self.field.zero();
                }
                let g1 = a.gcd(d);
                let g2 = c.gcd(b);
                let (n, dd) = scale_fraction(
                    a.exact_div(&g1).mul(&c.exact_div(&g2)),
                    b.exact_div(&g2).mul(&d.exact_div(&g1)),
                );
                self.with(Repr::Fun(n, dd))
            }
            _ => unreachable!(),
        }
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match (&self.repr, self.field.kind()) {
            (Repr::Rat(a), _) => self.with(Repr::Rat(a.recip())),
            (Repr::Alg(a), FieldKind::NumberField { modulus, .. }) => {
                let (_, s, _) = qpoly::xgcd(a, modulus);
                self.with(Repr::Alg(qpoly::rem(&s, modulus)))
            }
            (Repr::Fin(a), FieldKind::Finite { p, modulus, .. }) => {
                let (_, s, _) = fpoly::xgcd(a, modulus, *p);
                self.with(Repr::Fin(fpoly::rem(&s, modulus, *p)))
            }
            (Repr::Fun(n, d), _) => {
                let (a, b) = scale_fraction(d.clone(), n.clone());
                self.with(Repr::Fun(a, b))
            }
            _ => unreachable!(),
        })
    }

    pub fn div(&self, o: &FieldElem) -> Result<FieldElem> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn square(&self) -> FieldElem {
        self.mul(self)
    }

    pub fn pow(&self, e: i64) -> Result<FieldElem> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Ok(base.pow_u(e.unsigned_abs() as u128))
    }

    pub fn pow_u(&self, mut e: u128) -> FieldElem {
        let mut acc = self.field.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.square();
            }
        }
        acc
    }

    /// Multiplication by an integer.
    pub fn mul_int(&self, n: i64) -> FieldElem {
        self.mul(&self.field.from_int(n))
    }

    /// Multiplication by a rational (panics if the rational is not defined in this field).
    pub fn mul_q(&self, q: &Q) -> FieldElem {
        self.mul(&self.field.from_q(q).expect("rational not defined in this characteristic"))
    }

    /// Frobenius inverse x^{1/p} = x^{p^{e-1}} in 𝔽_{p^e}.
    pub fn frobenius_root(&self) -> FieldElem {
        let FieldKind::Finite { p, e, .. } = self.field.kind() else {
            panic!("frobenius_root on {}", self.field);
        };
        let mut x = self.clone();
        for _ in 1..*e {
            x = x.pow_u(*p as u128);
        }
        x
    }

    /// Derivative in the function-field variable; zero on constant fields.
    pub fn derivative(&self) -> FieldElem {
        match &self.repr {
            Repr::Fun(n, d) => {
                let num = n.derivative().mul(d).sub(&n.mul(&d.derivative()));
                let den = d.mul(d);
                let (a, b) = normalize_fraction(num, den);
                self.with(Repr::Fun(a, b))
            }
            _ => self.field.zero(),
        }
    }

    /// Substitutes `var := x` in a function-field element. `x` lives in any field the base embeds into.
    pub fn eval_at(&self, x: &FieldElem) -> Result<FieldElem> {
        let (n, d) = self.num_den();
        let dv = d.eval_embedded(x)?;
        if dv.is_zero() {
            return Err(Error::DivisionByZero);
        }
        n.eval_embedded(x)?.div(&dv)
    }

    /// Absolute trace to the prime field (ℚ or 𝔽_p).
    pub fn trace(&self) -> Result<FieldElem> {
        match (&self.repr, self.field.kind()) {
            (Repr::Rat(_), _) => Ok(self.clone()),
            (Repr::Alg(v), FieldKind::NumberField { .. }) => {
                let mut acc = Q::zero();
                for (c, s) in v.iter().zip(&self.field.0.power_sums) {
                    acc += c * s;
                }
                Ok(FieldElem { field: CoeffField::rationals(), repr: Repr::Rat(acc) })
            }
            (Repr::Fin(_), FieldKind::Finite { p, e, .. }) => {
                let mut acc = self.field.zero();
                let mut x = self.clone();
                for _ in 0..*e {
                    acc = acc.add(&x);
                    x = x.pow_u(*p as u128);
                }
                let c = acc.as_fp().expect("trace lands in the prime field");
                Ok(self.field.prime_subfield().from_fin_coords(&[c]))
            }
            _ => Err(Error::NotAnExtension(format!("trace of {self} in {}", self.field))),
        }
    }

    /// Relative trace of a finite-field element down to a subfield `base` = 𝔽_{p^{e'}}, e' | e.
    pub fn trace_to(&self, base: &CoeffField) -> Result<FieldElem> {
        match (self.field.kind(), base.kind()) {
            (_, _) if base == &self.field => Ok(self.clone()),
            (FieldKind::NumberField { .. }, FieldKind::Rationals) => self.trace(),
            (FieldKind::Finite { p, e, .. }, FieldKind::Finite { p: q, e: e2, .. }) if p == q && e % e2 == 0 => {
                let step = (*p as u128).pow(*e2);
                let mut acc = self.field.zero();
                let mut x = self.clone();
                for _ in 0..(e / e2) {
                    acc = acc.add(&x);
                    x = x.pow_u(step);
                }
                descend_finite(&acc, base)
            }
            _ => Err(Error::NotAnExtension(format!("{} over {base}", self.field))),
        }
    }

    /// Field norm of a number-field element to ℚ.
    pub fn norm(&self) -> Result<Q> {
        match (&self.repr, self.field.kind()) {
            (Repr::Rat(q), _) => Ok(q.clone()),
            (Repr::Alg(_), FieldKind::NumberField { modulus, .. }) => {
                let d = modulus.len() - 1;
                let theta = self.field.gen().unwrap();
                let mut cols = Vec::with_capacity(d);
                let mut b = self.clone();
                for _ in 0..d {
                    cols.push(b.alg_coords());
                    b = b.mul(&theta);
                }
                // rows/cols transposition does not affect the determinant
                Ok(qpoly::determinant(cols))
            }
            _ => Err(Error::NotAnExtension(format!("norm in {}", self.field))),
        }
    }
}

/// Expresses an element of 𝔽_{p^e} fixed by Frob^{e'} in the coordinates of `base` = 𝔽_{p^{e'}}.
fn descend_finite(x: &FieldElem, base: &CoeffField) -> Result<FieldElem> {
    let FieldKind::Finite { p, e: e2, modulus: bm, .. } = base.kind() else { unreachable!() };
    let p = *p;
    let e2 = *e2 as usize;
    if e2 == 1 {
        let c = x.as_fp().ok_or_else(|| Error::NotAnExtension(format!("{x} not in the prime field")))?;
        return Ok(base.from_fin_coords(&[c]));
    }
    let big = x.field();
    // root β of the base modulus inside the big field, by search
    let beta = big
        .elements()
        .into_iter()
        .find(|b| {
            let mut acc = big.zero();
            for c in bm.iter().rev() {
                acc = acc.mul(b).add(&big.from_fin_coords(&[*c]));
            }
            acc.is_zero()
        })
        .ok_or_else(|| Error::NotAnExtension(format!("{base} does not embed in {big}")))?;
    // solve x = Σ c_j β^j over 𝔽_p
    let e = big.degree().unwrap();
    let mut cols = Vec::with_capacity(e2);
    let mut b = big.one();
    for _ in 0..e2 {
        cols.push(b.fin_coords());
        b = b.mul(&beta);
    }
    let rhs = x.fin_coords();
    let mut rows: Vec<Vec<u64>> = (0..e).map(|i| {
        let mut r: Vec<u64> = cols.iter().map(|c| c[i]).collect();
        r.push(rhs[i]);
        r
    }).collect();
    let mut sol = vec![0u64; e2];
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..e2 {
        let Some(pr) = (row..e).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(row, pr);
        let inv = fpoly::inv(rows[row][col], p);
        for k in 0..=e2 {
            rows[row][k] = fpoly::mulmod(rows[row][k], inv, p);
        }
        for r in 0..e {
            if r != row && rows[r][col] != 0 {
                let f = rows[r][col];
                for k in 0..=e2 {
                    rows[r][k] = (rows[r][k] + p - fpoly::mulmod(f, rows[row][k], p)) % p;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    if rows[row..].iter().any(|r| r[e2] != 0) {
        return Err(Error::NotAnExtension(format!("{x} is not in {base}")));
    }
    for (r, c) in pivots {
        sol[c] = rows[r][e2];
    }
    Ok(base.from_fin_coords(&sol))
}

/// Renders a polynomial from ascending `(coefficient, exponent)` terms, highest power first.
pub(crate) fn format_terms(terms: &[(FieldElem, usize)], var: &str) -> String {
    let rev: Vec<_> = terms.iter().rev().cloned().collect();
    format_terms_in_order(&rev, var)
}

pub(crate) fn format_terms_in_order(terms: &[(FieldElem, usize)], var: &str) -> String {
    let mut out = String::new();
    for (c, k) in terms.iter() {
        if c.is_zero() {
            continue;
        }
        let cs = c.to_string();
        let compound = cs.contains(' ');
        let term = if *k == 0 {
            if compound && !out.is_empty() { format!("({cs})") } else { cs }
        } else {
            let mono = if *k == 1 { var.to_string() } else { format!("{var}^{k}") };
            if cs == "1" {
                mono
            } else if cs == "-1" {
                format!("-{mono}")
            } else if compound {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
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

fn q_terms(v: &[Q]) -> Vec<(FieldElem, usize)> {
    let qf = CoeffField::rationals();
    v.iter().enumerate().map(|(i, c)| (qf.from_q(c).unwrap(), i)).collect()
}

impl fmt::Display for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::NumberField { modulus, gen } => {
                write!(f, "Q[{gen}]/({})", format_terms(&q_terms(modulus), gen))
            }
            FieldKind::FunctionField { base, var } => write!(f, "{base}({var})"),
            FieldKind::Finite { p, e: 1, .. } => write!(f, "F{p}"),
            FieldKind::Finite { p, e, modulus, gen } => {
                let fp = CoeffField::finite(*p, 1, gen).map_err(|_| fmt::Error)?;
                let terms: Vec<_> = modulus.iter().enumerate().map(|(i, c)| (fp.from_fin_coords(&[*c]), i)).collect();
                write!(f, "F{}:{}", (*p as u128).pow(*e), format_terms(&terms, gen))
            }
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.repr, self.field.kind()) {
            (Repr::Rat(q), _) => write!(f, "{q}"),
            (Repr::Alg(v), FieldKind::NumberField { gen, .. }) => write!(f, "{}", format_terms(&q_terms(v), gen)),
            (Repr::Fin(v), FieldKind::Finite { p, gen, .. }) => {
                if v.len() <= 1 {
                    return write!(f, "{}", v.first().copied().unwrap_or(0));
                }
                let fp = CoeffField::finite(*p, 1, gen).map_err(|_| fmt::Error)?;
                let terms: Vec<_> = v.iter().enumerate().map(|(i, c)| (fp.from_fin_coords(&[*c]), i)).collect();
                write!(f, "{}", format_terms(&terms, gen))
            }
            (Repr::Fun(n, d), FieldKind::FunctionField { var, .. }) => {
                let ns = n.display_in(var);
                if d.degree() == Some(0) {
                    return write!(f, "{ns}");
                }
                let ds = d.display_in(var);
                let wrap = |s: String| if s.contains(' ') || s.contains('*') || s.contains('^') { format!("({s})") } else { s };
                write!(f, "{}/{}", wrap(ns), wrap(ds))
            }
            _ => unreachable!(),
        }
    }
}

macro_rules! forward_ops {
    ($T:ty) => {
        impl std::ops::Add<&$T> for &$T {
            type Output = $T;
            fn add(self, o: &$T) -> $T {
                <$T>::add(self, o)
            }
        }
        impl std::ops::Add<$T> for $T {
            type Output = $T;
            fn add(self, o: $T) -> $T {
                <$T>::add(&self, &o)
            }
        }
        impl std::ops::Add<&$T> for $T {
            type Output = $T;
            fn add(self, o: &$T) -> $T {
                <$T>::add(&self, o)
            }
        }
        impl std::ops::Sub<&$T> for &$T {
            type Output = $T;
            fn sub(self, o: &$T) -> $T {
                <$T>::sub(self, o)
            }
        }
        impl std::ops::Sub<$T> for $T {
            type Output = $T;
            fn sub(self, o: $T) -> $T {
                <$T>::sub(&self, &o)
            }
        }
        impl std::ops::Sub<&$T> for $T {
            type Output = $T;
            fn sub(self, o: &$T) -> $T {
                <$T>::sub(&self, o)
            }
        }
        impl std::ops::Mul<&$T> for &$T {
            type Output = $T;
            fn mul(self, o: &$T) -> $T {
                <$T>::mul(self, o)
            }
        }
        impl std::ops::Mul<$T> for $T {
            type Output = $T;
            fn mul(self, o: $T) -> $T {
                <$T>::mul(&self, &o)
            }
        }
        impl std::ops::Mul<&$T> for $T {
            type Output = $T;
            fn mul(self, o: &$T) -> $T {
                <$T>::mul(&self, o)
            }
        }
        impl std::ops::Neg for &$T {
            type Output = $T;
            fn neg(self) -> $T {
                <$T>::neg(self)
            }
        }
        impl std::ops::Neg for $T {
            type Output = $T;
            fn neg(self) -> $T {
                <$T>::neg(&self)
            }
        }
    };
}
pub(crate) use forward_ops;

forward_ops!(FieldElem);

impl std::ops::Div<&FieldElem> for &FieldElem {
    type Output = FieldElem;
    fn div(self, o: &FieldElem) -> FieldElem {
        FieldElem::div(self, o).expect("division by zero")
    }
}

impl std::ops::Div<FieldElem> for FieldElem {
    type Output = FieldElem;
    fn div(self, o: FieldElem) -> FieldElem {
        FieldElem::div(&self, &o).expect("division by zero")
    }
}

impl FieldElem {
    pub fn one_like(&self) -> FieldElem {
        self.field.one()
    }

    pub fn zero_like(&self) -> FieldElem {
        self.field.zero()
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero()
    }

    /// `true` iff both `x` and `1 − x` are nonzero.
    pub fn is_flat(&self) -> bool {
        !self.is_zero() && !(self.one_like().sub(self)).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::qpoly::{q, qf};

    fn sqrt2() -> CoeffField {
        CoeffField::number_field(&[q(-2), q(0), q(1)], "θ").unwrap()
    }

    #[test]
    fn rational_basics() {
        let k = CoeffField::rationals();
        let a = k.from_q(&qf(1, 2)).unwrap();
        let b = k.from_int(3);
        assert_eq!((&a + &b).to_string(), "7/2");
        assert_eq!((&a * &b).to_string(), "3/2");
        assert_eq!(a.inv().unwrap(), k.from_int(2));
    }

    #[test]
    fn number_field_arith_and_trace() {
        let k = sqrt2();
        let t = k.gen().unwrap();
        assert_eq!(t.square(), k.from_int(2));
        assert_eq!(t.trace().unwrap().as_q(), Some(q(0)));
        assert_eq!(t.square().trace().unwrap().as_q(), Some(q(4)));
        assert_eq!(k.from_int(5).trace().unwrap().as_q(), Some(q(10)));
        let x = &t + &k.one();
        assert_eq!(&x * &x.inv().unwrap(), k.one());
        assert_eq!(x.norm().unwrap(), q(-1));
        assert_eq!(x.to_string(), "θ + 1");
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(CoeffField::number_field(&[q(-1), q(0), q(1)], "θ").is_err());
    }

    #[test]
    fn finite_field_arith() {
        let f = CoeffField::finite_with_modulus(5, &[1, 1, 1], "θ").unwrap();
        assert_eq!(f.order(), Some(25));
        let t = f.gen().unwrap();
        // θ² = −θ − 1
        assert_eq!(t.square(), (&t + &f.one()).neg());
        for x in f.elements().into_iter().filter(|x| !x.is_zero()) {
            assert!((&x * &x.inv().unwrap()).is_one());
            assert_eq!(x.frobenius_root().pow_u(5), x);
        }
        assert!(CoeffField::finite(3, 1, "θ").is_err());
        assert!(CoeffField::finite(9, 1, "θ").is_err());
    }

    #[test]
    fn finite_trace_transitive() {
        let big = CoeffField::finite(5, 4, "θ").unwrap();
        let mid = CoeffField::finite(5, 2, "η").unwrap();
        let small = CoeffField::finite(5, 1, "θ").unwrap();
        let t = big.gen().unwrap();
        for x in [t.clone(), t.square().add(&big.from_int(3)), t.pow_u(7)] {
            let direct = x.trace_to(&small).unwrap();
            let via = x.trace_to(&mid).unwrap().trace_to(&small).unwrap();
            assert_eq!(direct, via);
            assert_eq!(direct, x.trace().unwrap());
        }
    }

    #[test]
    fn function_field_normalizes() {
        let qf_ = CoeffField::rationals();
        let k = CoeffField::function_field(&qf_, "z").unwrap();
        let z = k.gen().unwrap();
        let one = k.one();
        let a = (&(&z * &z) - &one).div(&(&z - &one)).unwrap();
        assert_eq!(a, &z + &one);
        let b = one.div(&z).unwrap();
        assert_eq!(b.to_string(), "1/z");
        assert_eq!(b.derivative(), z.square().inv().unwrap().neg());
        let v = b.eval_at(&qf_.from_int(4)).unwrap();
        assert_eq!(v.as_q(), Some(qf(1, 4)));
    }

    #[test]
    fn char_p_rationals() {
        let f = CoeffField::finite(7, 1, "θ").unwrap();
        assert_eq!(f.from_q(&qf(1, 2)).unwrap().as_fp(), Some(4));
        assert!(f.from_q(&qf(1, 7)).is_err());
    }
}
