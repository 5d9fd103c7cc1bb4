//! Square-zero extensions A = Ā ⊕ I: the splitting-dependent dilogarithm,
//! the homotopy between splittings, and the weight-two map log∘dlog.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::bloch::Wedge2;
use crate::error::{Error, Result};
use crate::kernel::integrate::has_rational_antiderivative;
use crate::kernel::{CoeffField, Differential, FieldElem, TruncSeries, Q};

/// Ā ⊕ I with I free on named generators ε₁..ε_r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareZeroAlgebra {
    base: CoeffField,
    names: Arc<[String]>,
}

impl SquareZeroAlgebra {
    pub fn new(base: &CoeffField, names: &[&str]) -> Result<SquareZeroAlgebra> {
        if names.is_empty() {
            return Err(Error::InvalidArgument("ideal must have positive rank".into()));
        }
        let ok = match base.base() {
            Some(b) => b.characteristic() == 0 && b.base().is_none(),
            None => base.characteristic() == 0,
        };
        if !ok {
            return Err(Error::UnsupportedRing(base.to_string()));
        }
        Ok(SquareZeroAlgebra { base: base.clone(), names: names.iter().map(|s| s.to_string()).collect() })
    }

    /// Rank r with generators ε1..εr.
    pub fn with_rank(base: &CoeffField, r: usize) -> Result<SquareZeroAlgebra> {
        let names: Vec<String> = (1..=r).map(|i| format!("ε{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        SquareZeroAlgebra::new(base, &refs)
    }

    pub fn base(&self) -> &CoeffField {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, a: FieldElem, eps: Vec<FieldElem>) -> Result<SqElem> {
        if eps.len() != self.rank() {
            return Err(Error::InvalidArgument(format!("expected {} ideal coordinates, got {}", self.rank(), eps.len())));
        }
        for c in std::iter::once(&a).chain(&eps) {
            if c.field() != &self.base {
                return Err(Error::FieldMismatch(c.field().to_string(), self.base.to_string()));
            }
        }
        Ok(SqElem { alg: self.clone(), a, eps })
    }

    pub fn scalar(&self, a: FieldElem) -> SqElem {
        SqElem { alg: self.clone(), eps: vec![self.base.zero(); self.rank()], a }
    }

    pub fn zero(&self) -> SqElem {
        self.scalar(self.base.zero())
    }

    pub fn one(&self) -> SqElem {
        self.scalar(self.base.one())
    }

    pub fn epsilon(&self, i: usize) -> Result<SqElem> {
        if i >= self.rank() {
            return Err(Error::IndexOutOfRange { index: i, modulus: self.rank() });
        }
        let mut eps = vec![self.base.zero(); self.rank()];
        eps[i] = self.base.one();
        Ok(SqElem { alg: self.clone(), a: self.base.zero(), eps })
    }

    fn check(&self, o: &SquareZeroAlgebra) -> Result<()> {
        if self == o {
            Ok(())
        } else {
            Err(Error::InvalidArgument("elements of different square-zero algebras".into()))
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SqElem {
    alg: SquareZeroAlgebra,
    a: FieldElem,
    eps: Vec<FieldElem>,
}

impl SqElem {
    pub fn algebra(&self) -> &SquareZeroAlgebra {
        &self.alg
    }

    /// Reduction ā.
    pub fn reduction(&self) -> &FieldElem {
        &self.a
    }

    pub fn ideal_part(&self) -> &[FieldElem] {
        &self.eps
    }

    pub fn add(&self, o: &SqElem) -> SqElem {
        self.alg.check(&o.alg).expect("same algebra");
        SqElem { alg: self.alg.clone(), a: self.a.add(&o.a), eps: add_vec(&self.eps, &o.eps) }
    }

    pub fn neg(&self) -> SqElem {
        SqElem { alg: self.alg.clone(), a: self.a.neg(), eps: self.eps.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, o: &SqElem) -> SqElem {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &SqElem) -> SqElem {
        self.alg.check(&o.alg).expect("same algebra");
        let eps = self.eps.iter().zip(&o.eps).map(|(x, y)| self.a.mul(y).add(&o.a.mul(x))).collect();
        SqElem { alg: self.alg.clone(), a: self.a.mul(&o.a), eps }
    }

    pub fn is_unit(&self) -> bool {
        !self.a.is_zero()
    }

    pub fn is_flat(&self) -> bool {
        self.a.is_flat()
    }

    pub fn inv(&self) -> Result<SqElem> {
        let ai = self.a.inv().map_err(|_| Error::NonUnit(self.to_string()))?;
        let f = ai.square().neg();
        Ok(SqElem { alg: self.alg.clone(), a: ai, eps: self.eps.iter().map(|c| c.mul(&f)).collect() })
    }

    pub fn div(&self, o: &SqElem) -> Result<SqElem> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn one_minus(&self) -> SqElem {
        self.alg.one().sub(self)
    }

    /// The rank-one case as ā + c·t in Ā[t]/(t²).
    pub fn to_series(&self) -> Result<TruncSeries> {
        if self.alg.rank() != 1 {
            return Err(Error::UnsupportedRing(format!("rank {} ideal", self.alg.rank())));
        }
        Ok(TruncSeries::linear(self.a.clone(), self.eps[0].clone(), 2))
    }
}

impl fmt::Display for SqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.a)?;
        for (c, n) in self.eps.iter().zip(self.alg.names.iter()) {
            if !c.is_zero() {
                write!(f, " + ({c})*{n}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn add_vec(a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn scale_vec(a: &[FieldElem], c: &FieldElem) -> Vec<FieldElem> {
    a.iter().map(|x| x.mul(c)).collect()
}

/// A homogeneous element of S^d I in ordered-monomial coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct SymPower {
    field: CoeffField,
    names: Arc<[String]>,
    degree: usize,
    terms: BTreeMap<Vec<usize>, FieldElem>,
}

/// S³I, the target of the splitting-dependent dilogarithm.
pub type SymCubeValue = SymPower;

impl SymPower {
    pub fn zero(alg: &SquareZeroAlgebra, degree: usize) -> SymPower {
        SymPower { field: alg.base.clone(), names: alg.names.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn linear(alg: &SquareZeroAlgebra, v: &[FieldElem]) -> SymPower {
        let mut out = SymPower::zero(alg, 1);
        for (i, c) in v.iter().enumerate() {
            out.add_mono(vec![i], c.clone());
        }
        out
    }

    fn add_mono(&mut self, mut key: Vec<usize>, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        key.sort_unstable();
        match self.terms.get(&key) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    self.terms.insert(key, s);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &FieldElem)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Coefficient of the monomial ε_{i₁}⋯ε_{i_d} (indices in any order).
    pub fn coeff(&self, idx: &[usize]) -> FieldElem {
        let mut k = idx.to_vec();
        k.sort_unstable();
        self.terms.get(&k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &SymPower) -> SymPower {
        assert_eq!(self.degree, o.degree, "degrees differ");
        let mut out = self.clone();
        for (k, v) in &o.terms {
            out.add_mono(k.clone(), v.clone());
        }
        out
    }

    pub fn neg(&self) -> SymPower {
        self.scale(&self.field.from_int(-1))
    }

    pub fn sub(&self, o: &SymPower) -> SymPower {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &FieldElem) -> SymPower {
        let mut out = SymPower { terms: BTreeMap::new(), ..self.clone() };
        for (k, v) in &self.terms {
            out.add_mono(k.clone(), v.mul(c));
        }
        out
    }

    pub fn mul(&self, o: &SymPower) -> SymPower {
        let mut out = SymPower { terms: BTreeMap::new(), degree: self.degree + o.degree, ..self.clone() };
        for (k1, v1) in &self.terms {
            for (k2, v2) in &o.terms {
                let mut k = k1.clone();
                k.extend(k2);
                out.add_mono(k, v1.mul(v2));
            }
        }
        out
    }
}

impl fmt::Display for SymPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, v)| {
                let mut mono = Vec::new();
                let mut i = 0;
                while i < k.len() {
                    let j = k[i..].iter().take_while(|&&x| x == k[i]).count();
                    let n = &self.names[k[i]];
                    mono.push(if j == 1 { n.clone() } else { format!("{n}^{j}") });
                    i += j;
                }
                format!("({v})*{}", mono.join("*"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for SymPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A ring section τ(ā) = (ā, θ_τ(ā)), θ_τ a derivation Ā → I fixed by θ_τ(x).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    alg: SquareZeroAlgebra,
    image: Vec<FieldElem>,
}

impl Splitting {
    pub fn canonical(alg: &SquareZeroAlgebra) -> Splitting {
        Splitting { alg: alg.clone(), image: vec![alg.base.zero(); alg.rank()] }
    }

    /// θ_τ(x) = `image`; only a function-field base admits a nonzero derivation.
    pub fn new(alg: &SquareZeroAlgebra, image: Vec<FieldElem>) -> Result<Splitting> {
        let v = alg.element(alg.base.zero(), image)?.eps;
        if !alg.base.is_function_field() && v.iter().any(|c| !c.is_zero()) {
            return Err(Error::InvalidArgument(format!("{} has no nonzero derivations", alg.base)));
        }
        Ok(Splitting { alg: alg.clone(), image: v })
    }

    pub fn algebra(&self) -> &SquareZeroAlgebra {
        &self.alg
    }

    pub fn theta(&self, a: &FieldElem) -> Vec<FieldElem> {
        if !self.alg.base.is_function_field() {
            return vec![self.alg.base.zero(); self.alg.rank()];
        }
        scale_vec(&self.image, &a.derivative())
    }

    pub fn apply(&self, a: &FieldElem) -> SqElem {
        SqElem { alg: self.alg.clone(), a: a.clone(), eps: self.theta(a) }
    }

    /// α_τ(a) = a − τ(ā).
    pub fn relative_part(&self, a: &SqElem) -> Vec<FieldElem> {
        a.eps.iter().zip(self.theta(&a.a)).map(|(x, y)| x.sub(&y)).collect()
    }
}

/// ℓi_{2,τ}(a) = −½·α_τ³/(ā²(ā−1)²) in S³I.
pub fn li2_tau(a: &SqElem, tau: &Splitting) -> Result<SymCubeValue> {
    a.alg.check(&tau.alg)?;
    if !a.is_flat() {
        return Err(Error::NotFlat(a.to_string()));
    }
    let s = &a.a;
    let lin = SymPower::linear(&a.alg, &tau.relative_part(a));
    let den = s.square().mul(&s.sub(&s.one_like()).square());
    let c = den.inv()?.mul_q(&Q::new((-1).into(), 2.into()));
    Ok(lin.mul(&lin).mul(&lin).scale(&c))
}

/// Σ n·ℓi_{2,τ}(a).
pub fn li2_tau_sum(xi: &[(Q, SqElem)], tau: &Splitting) -> Result<SymCubeValue> {
    let mut acc = SymPower::zero(&tau.alg, 3);
    for (n, a) in xi {
        acc = acc.add(&li2_tau(a, tau)?.scale(&tau.alg.base.from_q(n)?));
    }
    Ok(acc)
}

/// [x] − [y] + [y/x] − [(1−x⁻¹)/(1−y⁻¹)] + [(1−x)/(1−y)].
pub fn five_term(x: &SqElem, y: &SqElem) -> Result<Vec<(Q, SqElem)>> {
    let gp = |e: Error| Error::NotInGeneralPosition(e.to_string());
    let g = [
        x.clone(),
        y.clone(),
        y.div(x).map_err(gp)?,
        x.inv().map_err(gp)?.one_minus().div(&y.inv().map_err(gp)?.one_minus()).map_err(gp)?,
        x.one_minus().div(&y.one_minus()).map_err(gp)?,
    ];
    let mut out = Vec::new();
    for (i, e) in g.into_iter().enumerate() {
        if !e.is_flat() {
            return Err(Error::NotInGeneralPosition(format!("generator {} = {e} is not flat", i + 1)));
        }
        out.push((Q::from_integer(if i % 2 == 0 { 1.into() } else { (-1).into() }), e));
    }
    Ok(out)
}

/// A ring map A₁ → A₂ lying over f̄: Ā₁ → Ā₂.
///
/// In coordinates f(ā, α) = (f̄(ā), f̄(ā′)·ψ + M·f̄(α)), where f̄ sends the
/// generator x to `base_image`, ψ ∈ I₂ is the derivation part and M is the
/// r₂ × r₁ matrix of f on I.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMap {
    source: SquareZeroAlgebra,
    target: SquareZeroAlgebra,
    base_image: Option<FieldElem>,
    psi: Vec<FieldElem>,
    matrix: Vec<Vec<FieldElem>>,
}

impl AlgebraMap {
    pub fn new(
        source: &SquareZeroAlgebra,
        target: &SquareZeroAlgebra,
        base_image: Option<FieldElem>,
        psi: Vec<FieldElem>,
        matrix: Vec<Vec<FieldElem>>,
    ) -> Result<AlgebraMap> {
        let psi = target.element(target.base.zero(), psi)?.eps;
        if matrix.len() != target.rank() || matrix.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::InvalidArgument(format!("matrix must be {} x {}", target.rank(), source.rank())));
        }
        if matrix.iter().flatten().any(|c| c.field() != &target.base) {
            return Err(Error::FieldMismatch(source.base.to_string(), target.base.to_string()));
        }
        if source.base.is_function_field() {
            let g = base_image.as_ref().ok_or_else(|| Error::InvalidArgument("image of the generator is required".into()))?;
            if g.field() != &target.base || !target.base.is_function_field() || g.derivative().is_zero() {
                return Err(Error::InvalidArgument(format!("generator image {g} does not define a field map")));
            }
            if source.base.base() != target.base.base() {
                return Err(Error::FieldMismatch(source.base.to_string(), target.base.to_string()));
            }
        } else {
            if base_image.is_some() || source.base != target.base {
                return Err(Error::InvalidArgument("only the identity base map is supported here".into()));
            }
            if psi.iter().any(|c| !c.is_zero()) {
                return Err(Error::InvalidArgument(format!("{} has no nonzero derivations", source.base)));
            }
        }
        Ok(AlgebraMap { source: source.clone(), target: target.clone(), base_image, psi, matrix })
    }

    pub fn identity(alg: &SquareZeroAlgebra) -> AlgebraMap {
        let r = alg.rank();
        let matrix = (0..r).map(|i| (0..r).map(|j| if i == j { alg.base.one() } else { alg.base.zero() }).collect()).collect();
        AlgebraMap {
            source: alg.clone(),
            target: alg.clone(),
            base_image: if alg.base.is_function_field() { alg.base.gen() } else { None },
            psi: vec![alg.base.zero(); r],
            matrix,
        }
    }

    pub fn source(&self) -> &SquareZeroAlgebra {
        &self.source
    }

    pub fn target(&self) -> &SquareZeroAlgebra {
        &self.target
    }

    /// f̄.
    pub fn map_base(&self, c: &FieldElem) -> Result<FieldElem> {
        match &self.base_image {
            None => Ok(c.clone()),
            Some(g) if self.source.base.is_function_field() => {
                let (n, d) = c.num_den();
                n.eval_embedded(g)?.div(&d.eval_embedded(g)?)
            }
            Some(_) => Ok(c.clone()),
        }
    }

    /// f restricted to I₁.
    pub fn map_ideal(&self, alpha: &[FieldElem]) -> Result<Vec<FieldElem>> {
        let fa: Vec<FieldElem> = alpha.iter().map(|c| self.map_base(c)).collect::<Result<_>>()?;
        Ok(self
            .matrix
            .iter()
            .map(|row| row.iter().zip(&fa).fold(self.target.base.zero(), |acc, (m, c)| acc.add(&m.mul(c))))
            .collect())
    }

    fn column(&self, j: usize) -> Vec<FieldElem> {
        self.matrix.iter().map(|r| r[j].clone()).collect()
    }

    /// ψ(ā) = f̄(ā′)·ψ(x).
    fn psi_of(&self, a: &FieldElem) -> Result<Vec<FieldElem>> {
        if !self.source.base.is_function_field() {
            return Ok(vec![self.target.base.zero(); self.target.rank()]);
        }
        Ok(scale_vec(&self.psi, &self.map_base(&a.derivative())?))
    }

    pub fn apply(&self, a: &SqElem) -> Result<SqElem> {
        self.source.check(&a.alg)?;
        let eps = add_vec(&self.psi_of(&a.a)?, &self.map_ideal(&a.eps)?);
        Ok(SqElem { alg: self.target.clone(), a: self.map_base(&a.a)?, eps })
    }

    /// f_*: S^d I₁ → S^d I₂.
    pub fn push(&self, v: &SymPower) -> Result<SymPower> {
        let mut out = SymPower::zero(&self.target, v.degree);
        let images: Vec<SymPower> = (0..self.source.rank()).map(|j| SymPower::linear(&self.target, &self.column(j))).collect();
        for (k, c) in &v.terms {
            let mut term = SymPower::zero(&self.target, 0);
            term.add_mono(vec![], self.map_base(c)?);
            for &j in k {
                term = term.mul(&images[j]);
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Θ = θ(x) for θ(ā) := f(τ₁(ā)) − τ₂(f̄(ā)).
    fn theta_generator(&self, tau1: &Splitting, tau2: &Splitting) -> Result<Vec<FieldElem>> {
        let (Some(x), Some(g)) = (self.source.base.gen(), self.base_image.as_ref()) else {
            return Ok(vec![self.target.base.zero(); self.target.rank()]);
        };
        let lhs = self.apply(&tau1.apply(&x))?.eps;
        let rhs = tau2.theta(g);
        Ok(lhs.iter().zip(rhs).map(|(a, b)| a.sub(&b)).collect())
    }
}

/// Σ n·a∧b in Λ²A^× for a square-zero algebra A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqWedge {
    alg: SquareZeroAlgebra,
    terms: Vec<(Q, SqElem, SqElem)>,
}

impl SqWedge {
    pub fn zero(alg: &SquareZeroAlgebra) -> SqWedge {
        SqWedge { alg: alg.clone(), terms: Vec::new() }
    }

    pub fn push(&mut self, n: Q, a: &SqElem, b: &SqElem) -> Result<()> {
        self.alg.check(&a.alg)?;
        self.alg.check(&b.alg)?;
        for x in [a, b] {
            if !x.is_unit() {
                return Err(Error::NonUnit(x.to_string()));
            }
        }
        if !n.is_zero() {
            self.terms.push((n, a.clone(), b.clone()));
        }
        Ok(())
    }

    pub fn terms(&self) -> &[(Q, SqElem, SqElem)] {
        &self.terms
    }

    /// δ(Σ n[a]) = Σ n·(1−a)∧a.
    pub fn delta(alg: &SquareZeroAlgebra, xi: &[(Q, SqElem)]) -> Result<SqWedge> {
        let mut w = SqWedge::zero(alg);
        for (n, a) in xi {
            if !a.is_flat() {
                return Err(Error::NotFlat(a.to_string()));
            }
            w.push(n.clone(), &a.one_minus(), a)?;
        }
        Ok(w)
    }
}

struct Homotopy<'a> {
    f: &'a AlgebraMap,
    tau1: &'a Splitting,
    theta_gen: Vec<FieldElem>,
    phi_basis: &'a [SymPower],
}

impl Homotopy<'_> {
    fn target(&self) -> &SquareZeroAlgebra {
        &self.f.target
    }

    fn theta(&self, a: &FieldElem) -> Result<SymPower> {
        if !self.f.source.base.is_function_field() {
            return Ok(SymPower::zero(self.target(), 1));
        }
        Ok(SymPower::linear(self.target(), &scale_vec(&self.theta_gen, &self.f.map_base(&a.derivative())?)))
    }

    /// φ(Σ c_j ε_j) = Σ θ(c_j)·f(ε_j) + f̄(c_j)·φ(ε_j).
    fn phi(&self, alpha: &[FieldElem]) -> Result<SymPower> {
        let mut out = SymPower::zero(self.target(), 2);
        for (j, c) in alpha.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let fe = SymPower::linear(self.target(), &self.f.column(j));
            out = out.add(&self.theta(c)?.mul(&fe));
            out = out.add(&self.phi_basis[j].scale(&self.f.map_base(c)?));
        }
        Ok(out)
    }

    fn f_lin(&self, alpha: &[FieldElem]) -> Result<SymPower> {
        Ok(SymPower::linear(self.target(), &self.f.map_ideal(alpha)?))
    }

    /// (1+α)∧τ₁(c) ↦ −φ(α)·θ(c)/f̄(c).
    fn mixed(&self, alpha: &[FieldElem], c: &FieldElem) -> Result<SymPower> {
        let fc = self.f.map_base(c)?.inv()?;
        Ok(self.phi(alpha)?.mul(&self.theta(c)?).scale(&fc.neg()))
    }

    /// (1+α)∧(1+β) ↦ f(α)·φ(β) − φ(α)·f(β).
    fn pure(&self, alpha: &[FieldElem], beta: &[FieldElem]) -> Result<SymPower> {
        Ok(self.f_lin(alpha)?.mul(&self.phi(beta)?).sub(&self.phi(alpha)?.mul(&self.f_lin(beta)?)))
    }

    /// a = τ₁(ā)·(1 + u).
    fn unit_part(&self, a: &SqElem) -> Result<Vec<FieldElem>> {
        Ok(scale_vec(&self.tau1.relative_part(a), &a.a.inv()?))
    }
}

/// h_f(τ₁, τ₂)(w) = −(3/2)·H_φ(w) with φ vanishing on the basis of I₁.
pub fn homotopy_h(f: &AlgebraMap, tau1: &Splitting, tau2: &Splitting, w: &SqWedge) -> Result<SymCubeValue> {
    let zero: Vec<SymPower> = (0..f.source.rank()).map(|_| SymPower::zero(&f.target, 2)).collect();
    homotopy_h_with(f, tau1, tau2, w, &zero)
}

/// As [`homotopy_h`] with φ(ε_j) = `phi_basis[j]` ∈ S²I₂.
pub fn homotopy_h_with(
    f: &AlgebraMap,
    tau1: &Splitting,
    tau2: &Splitting,
    w: &SqWedge,
    phi_basis: &[SymPower],
) -> Result<SymCubeValue> {
    f.source.check(&tau1.alg)?;
    f.target.check(&tau2.alg)?;
    f.source.check(&w.alg)?;
    if phi_basis.len() != f.source.rank() || phi_basis.iter().any(|p| p.degree != 2) {
        return Err(Error::InvalidArgument("φ needs one quadratic image per generator of I₁".into()));
    }
    let h = Homotopy { f, tau1, theta_gen: f.theta_generator(tau1, tau2)?, phi_basis };
    let mut reduced = Wedge2::zero(&f.source.base, 1);
    let mut acc = SymPower::zero(&f.target, 3);
    for (n, a, b) in &w.terms {
        let (ua, ub) = (h.unit_part(a)?, h.unit_part(b)?);
        reduced.push(n.clone(), &TruncSeries::constant(a.a.clone(), 1), &TruncSeries::constant(b.a.clone(), 1))?;
        let term = h.mixed(&ua, &b.a)?.sub(&h.mixed(&ub, &a.a)?).add(&h.pure(&ua, &ub)?);
        acc = acc.add(&term.scale(&f.target.base.from_q(n)?));
    }
    if !reduced.is_zero() {
        return Err(Error::NotInFiltration("reduction of the wedge is nonzero".into()));
    }
    Ok(acc.scale(&f.target.base.from_q(&Q::new((-3).into(), 2.into()))?))
}

/// Σ n·log(a)·dlog(b) after moving the 1 + tA factor of each slot to the front.
pub fn rho1_logdlog(w: &Wedge2) -> Result<Differential> {
    let terms = w
        .terms()
        .ok_or_else(|| Error::InvalidArgument("wedge must be given by explicit terms".into()))?;
    let m = w.modulus();
    let mut reduced = Wedge2::zero(w.field(), 1);
    let mut out = Differential::zero(w.field(), m);
    for (n, a, b) in terms {
        let (a0, b0) = (a.constant_term().clone(), b.constant_term().clone());
        reduced.push(n.clone(), &TruncSeries::constant(a0.clone(), 1), &TruncSeries::constant(b0, 1))?;
        let term = Differential::dlog(b)?.scale(&a.log_circ()?);
        let back = Differential::dlog(&TruncSeries::constant(a0, m))?.scale(&b.log_circ()?);
        out = out.add(&term.sub(&back).scale_elem(&w.field().from_q(n)?));
    }
    if !reduced.is_zero() {
        return Err(Error::NotInfinitesimal("reduction of the wedge is nonzero".into()));
    }
    Ok(out)
}

/// Whether ω = Σ f_i tⁱ dx + Σ h_i tⁱ dt over F(x)[t]/(t^m) is d of a ring element.
pub fn is_exact(omega: &Differential) -> Result<bool> {
    let field = omega.field();
    let ok = field.is_function_field() && field.characteristic() == 0 && field.base().is_some_and(|b| b.base().is_none());
    if !ok {
        return Err(Error::UnsupportedRing(format!("need a univariate rational function field, got {field}")));
    }
    let (f, h) = (omega.dx_coeffs(), omega.dt_coeffs());
    for (i, hi) in h.iter().enumerate() {
        let u = hi.mul_q(&Q::new(1.into(), (i as i64 + 1).into()));
        if u.derivative() != f[i + 1] {
            return Ok(false);
        }
    }
    has_rational_antiderivative(&f[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::additive::li_23;
    use crate::bloch::{delta, FormalSum};
    use crate::kernel::qpoly::{q, qf};
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qx() -> CoeffField {
        CoeffField::function_field(&CoeffField::rationals(), "x").unwrap()
    }

    #[test]
    fn rank_one_value() {
        let k = CoeffField::rationals();
        let alg = SquareZeroAlgebra::with_rank(&k, 1).unwrap();
        let a = alg.element(k.from_q(&qf(1, 2)).unwrap(), vec![k.one()]).unwrap();
        let tau = Splitting::canonical(&alg);
        let v = li2_tau(&a, &tau).unwrap();
        assert_eq!(v.coeff(&[0, 0, 0]), k.from_int(-8));
        assert_eq!(li_23(&a.to_series().unwrap()).unwrap(), k.from_int(-8));
        assert!(li2_tau(&tau.apply(&k.from_int(3)), &tau).unwrap().is_zero());
    }

    #[test]
    fn rank_two_expansion() {
        let k = CoeffField::rationals();
        let alg = SquareZeroAlgebra::with_rank(&k, 2).unwrap();
        let s = k.from_int(3);
        let a = alg.element(s, vec![k.one(), k.one()]).unwrap();
        let v = li2_tau(&a, &Splitting::canonical(&alg)).unwrap();
        let c = q(-1) / q(72);
        assert_eq!(v.coeff(&[0, 0, 0]), k.from_q(&c).unwrap());
        assert_eq!(v.coeff(&[0, 0, 1]), k.from_q(&(c.clone() * q(3))).unwrap());
        assert_eq!(v.coeff(&[1, 0, 1]), k.from_q(&(c.clone() * q(3))).unwrap());
        assert_eq!(v.coeff(&[1, 1, 1]), k.from_q(&c).unwrap());
    }

    #[test]
    fn homotopy_by_hand() {
        let k = qx();
        let x = k.gen().unwrap();
        let alg = SquareZeroAlgebra::with_rank(&k, 1).unwrap();
        let t1 = Splitting::canonical(&alg);
        let t2 = Splitting::new(&alg, vec![k.one()]).unwrap();
        let f = AlgebraMap::identity(&alg);
        let s = x.add(&k.from_int(2));
        let xi = vec![(q(1), alg.element(s.clone(), vec![x.clone()]).unwrap()), (q(-1), alg.scalar(s))];
        let w = SqWedge::delta(&alg, &xi).unwrap();
        let lhs = li2_tau_sum(&xi.iter().map(|(n, a)| (n.clone(), f.apply(a).unwrap())).collect::<Vec<_>>(), &t2)
            .unwrap()
            .sub(&f.push(&li2_tau_sum(&xi, &t1).unwrap()).unwrap());
        assert!(!lhs.is_zero());
        assert_eq!(homotopy_h(&f, &t1, &t2, &w).unwrap(), lhs);
        assert!(homotopy_h(&f, &t1, &t1, &w).unwrap().is_zero());
        let mut bad = SqWedge::zero(&alg);
        bad.push(q(1), &alg.scalar(x.clone()), &alg.scalar(x.add(&k.one()))).unwrap();
        assert!(matches!(homotopy_h(&f, &t1, &t2, &bad), Err(Error::NotInFiltration(_))));
    }

    fn homotopy_defect(f: &AlgebraMap, t1: &Splitting, t2: &Splitting, xi: &[(Q, SqElem)]) -> SymCubeValue {
        let pushed: Vec<(Q, SqElem)> = xi.iter().map(|(n, a)| (n.clone(), f.apply(a).unwrap())).collect();
        li2_tau_sum(&pushed, t2).unwrap().sub(&f.push(&li2_tau_sum(xi, t1).unwrap()).unwrap())
    }

    #[test]
    fn homotopy_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (r1, r2) in [(1, 1), (2, 1), (1, 2), (2, 2)] {
            let (f, t1, t2, xi) = sample::homotopy_instance(&mut rng, r1, r2).unwrap();
            let w = SqWedge::delta(f.source(), &xi).unwrap();
            let h = homotopy_h(&f, &t1, &t2, &w).unwrap();
            assert_eq!(h, homotopy_defect(&f, &t1, &t2, &xi));
            let phi: Vec<SymPower> = (0..r1)
                .map(|_| {
                    let a = SymPower::linear(f.target(), &(0..r2).map(|_| sample::elem(f.target().base(), &mut rng)).collect::<Vec<_>>());
                    a.mul(&a)
                })
                .collect();
            assert_eq!(homotopy_h_with(&f, &t1, &t2, &w, &phi).unwrap(), h);
        }
    }

    #[test]
    fn five_term_killed() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let k = qx();
        let alg = SquareZeroAlgebra::with_rank(&k, 2).unwrap();
        let tau = Splitting::new(&alg, vec![k.one(), k.gen().unwrap()]).unwrap();
        let mut done = 0;
        while done < 3 {
            let mk = |rng: &mut ChaCha8Rng| {
                let e = vec![sample::elem(&k, rng), sample::elem(&k, rng)];
                alg.element(sample::flat_elem(&k, rng), e).unwrap()
            };
            let (x, y) = (mk(&mut rng), mk(&mut rng));
            let Ok(rel) = five_term(&x, &y) else { continue };
            assert!(li2_tau_sum(&rel, &tau).unwrap().is_zero());
            done += 1;
        }
    }

    #[test]
    fn rho1_examples() {
        let k = qx();
        let x = k.gen().unwrap();
        let a = TruncSeries::linear(x.clone(), k.one(), 2);
        let mut xi = FormalSum::generator(crate::bloch::CoeffRing::Rationals, &a).unwrap();
        xi.add_term(q(-1), &TruncSeries::constant(x.clone(), 2)).unwrap();
        let om = rho1_logdlog(&delta(&xi).unwrap().unwrap()).unwrap();
        assert!(om.is_zero());
        assert!(is_exact(&om).unwrap());
        let t = TruncSeries::t(&k, 2);
        let w = Wedge2::pair(&t.add_scalar(&k.one()), &TruncSeries::one(&k, 2).add(&t.scale(&x))).unwrap();
        assert!(rho1_logdlog(&w).unwrap().is_zero());
        assert!(rho1_logdlog(&Wedge2::zero(&k, 2)).unwrap().is_zero());
        let w = Wedge2::pair(&TruncSeries::constant(x.clone(), 2), &TruncSeries::constant(x.add(&k.one()), 2)).unwrap();
        assert!(matches!(rho1_logdlog(&w), Err(Error::NotInfinitesimal(_))));
    }

    #[test]
    fn exactness_examples() {
        let k = qx();
        let x = k.gen().unwrap();
        assert!(!is_exact(&Differential::dlog_elem(&x).unwrap()).unwrap());
        let tx = TruncSeries::linear(k.zero(), x.clone(), 2);
        let d = Differential::d(&tx);
        assert_eq!(d, Differential::from_parts(&k, 2, vec![k.zero(), k.one()], vec![x.clone()]));
        assert!(is_exact(&d).unwrap());
        let u = TruncSeries::linear(x.square().inv().unwrap(), x.add(&k.from_int(5)).inv().unwrap(), 2);
        assert!(is_exact(&Differential::d(&u)).unwrap());
        assert!(matches!(is_exact(&Differential::zero(&CoeffField::rationals(), 2)), Err(Error::UnsupportedRing(_))));
    }
}
