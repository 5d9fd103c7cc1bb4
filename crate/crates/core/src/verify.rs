//! Named randomized identity suites with deterministic seeding.
//!
//! Trial `i` of a run with seed `s` draws from ChaCha8 seeded with `s` on
//! stream `i`, so trials run in parallel and merge in index order.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::additive::{
    beta_embed, cathelineau_d, cathelineau_l, embedded_four_term, four_term, li_23, li_higher, li_mw, Beta2Symbol,
};
use crate::bloch::{delta_in, five_term, FormalSum, CoeffRing};
use crate::charp::{diagram_functional, finite_dilog, finite_log};
use crate::chow::{
    chow_rho, corrected_rho, pole_points, qz, reciprocity_lhs, residue_1form, support, ClosedPoint, RatFunc, Triple,
    UniformizerSystem,
};
use crate::cycle::rho_f;
use crate::error::{Error, Result};
use crate::kernel::{CoeffField, Differential, FieldElem, Poly, TruncSeries, Q};
use crate::sample;
use crate::sqzero::{
    homotopy_h, homotopy_h_with, is_exact, li2_tau, li2_tau_sum, rho1_logdlog, AlgebraMap, SqElem, SqWedge, Splitting,
    SquareZeroAlgebra, SymPower,
};

/// Draws per trial before a rejection-sampled input is given up on.
pub const MAX_DRAWS: usize = 200;

pub const SUITES: [&str; 16] = [
    "five-term",
    "diagram-square",
    "star-weight",
    "li-higher",
    "cathelineau",
    "beta-embed",
    "charp-identities",
    "charp-diagram",
    "chow-specialization",
    "chow-lift-independence",
    "reciprocity",
    "residue-theorem",
    "cycle-m2",
    "cycle-product",
    "homotopy-identity",
    "rho1-exactness",
];

#[derive(Clone, Debug, Default)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    /// Overrides the suite's default coefficient field where the suite allows it.
    pub field: Option<CoeffField>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub input: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    pub field: String,
    /// Rejected random draws across all trials.
    pub rejected: u64,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Trial {
    index: usize,
    rng: ChaCha8Rng,
    field: Option<CoeffField>,
    rejected: u64,
}

type Check = Option<(String, String, String)>;

fn mismatch(input: impl ToString, expected: impl ToString, actual: impl ToString) -> Check {
    Some((input.to_string(), expected.to_string(), actual.to_string()))
}

fn expect_eq<T: PartialEq + ToString>(input: impl ToString, expected: &T, actual: &T) -> Check {
    if expected == actual {
        None
    } else {
        mismatch(input, expected.to_string(), actual.to_string())
    }
}

impl Trial {
    /// Retries `f` until it yields an input, counting rejections.
    fn draw<T>(&mut self, mut f: impl FnMut(&mut ChaCha8Rng) -> Result<T>) -> Result<T> {
        let mut last = None;
        for _ in 0..MAX_DRAWS {
            match f(&mut self.rng) {
                Ok(v) => return Ok(v),
                Err(e) => {
                    self.rejected += 1;
                    last = Some(e);
                }
            }
        }
        Err(last.unwrap_or_else(|| Error::InvalidArgument("no admissible input found".into())))
    }

    fn field_or(&self, default: CoeffField) -> CoeffField {
        self.field.clone().unwrap_or(default)
    }
}

fn fixed_field(name: &str, field: &Option<CoeffField>) -> Result<()> {
    match field {
        Some(f) if *f != default_field(name) => Err(Error::UnsupportedField(f.to_string())),
        _ => Ok(()),
    }
}

fn char_zero(field: &Option<CoeffField>) -> Result<()> {
    match field {
        Some(f) if f.characteristic() != 0 => Err(Error::UnsupportedField(f.to_string())),
        _ => Ok(()),
    }
}

fn canonical_field(field: &Option<CoeffField>) -> Result<()> {
    match field {
        Some(f) if !(f.is_rationals() || f.base().is_some_and(|b| b.is_rationals())) => {
            Err(Error::UnsupportedField(f.to_string()))
        }
        _ => Ok(()),
    }
}

fn finite_only(field: &Option<CoeffField>) -> Result<()> {
    match field {
        Some(f) if !f.is_finite() || f.characteristic() < 5 => Err(Error::UnsupportedField(f.to_string())),
        _ => Ok(()),
    }
}

fn default_field(name: &str) -> CoeffField {
    match name {
        "cathelineau" | "rho1-exactness" | "homotopy-identity" => CoeffField::function_field(&CoeffField::rationals(), "x").unwrap(),
        _ => CoeffField::rationals(),
    }
}

/// Runs `name` with the given configuration.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let check: fn(&mut Trial) -> Result<Check> = match name {
        "five-term" => five_term_trial,
        "diagram-square" => diagram_square_trial,
        "star-weight" => star_weight_trial,
        "li-higher" => li_higher_trial,
        "cathelineau" => cathelineau_trial,
        "beta-embed" => beta_embed_trial,
        "charp-identities" => charp_identities_trial,
        "charp-diagram" => charp_diagram_trial,
        "chow-specialization" => chow_specialization_trial,
        "chow-lift-independence" => lift_independence_trial,
        "reciprocity" => reciprocity_trial,
        "residue-theorem" => residue_theorem_trial,
        "cycle-m2" => cycle_m2_trial,
        "cycle-product" => cycle_product_trial,
        "homotopy-identity" => homotopy_trial,
        "rho1-exactness" => rho1_trial,
        _ => return Err(Error::InvalidArgument(format!("unknown suite {name}"))),
    };
    match name {
        "five-term" | "diagram-square" | "star-weight" | "li-higher" => char_zero(&cfg.field)?,
        "cathelineau" | "beta-embed" => canonical_field(&cfg.field)?,
        "charp-identities" | "charp-diagram" => finite_only(&cfg.field)?,
        _ => fixed_field(name, &cfg.field)?,
    }
    let field_label = match (&cfg.field, name) {
        (Some(f), _) => f.to_string(),
        (None, "charp-identities" | "charp-diagram") => "F_{p^e}, p in {5,7,11,13}, e in {1,2}".to_string(),
        (None, _) => default_field(name).to_string(),
    };
    let start = Instant::now();
    let results: Vec<(usize, u64, Check)> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            let mut t = Trial { index: i, rng, field: cfg.field.clone(), rejected: 0 };
            let out = match check(&mut t) {
                Ok(c) => c,
                Err(e) => mismatch(format!("trial {i}"), "a checkable input", format!("error: {e}")),
            };
            (i, t.rejected, out)
        })
        .collect();
    let mut failures = Vec::new();
    let mut rejected = 0;
    for (i, r, c) in results {
        rejected += r;
        if let Some((input, expected, actual)) = c {
            failures.push(Failure { trial: i, input, expected, actual });
        }
    }
    Ok(SuiteReport {
        suite: name.to_string(),
        trials: cfg.trials,
        seed: cfg.seed,
        field: field_label,
        rejected,
        failures,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// All (m, w) with 2 ≤ m ≤ 5 and m < w < 2m; trial i uses entry i mod 10.
pub const WEIGHT_PAIRS: [(usize, usize); 10] = [(2, 3), (3, 4), (3, 5), (4, 5), (4, 6), (4, 7), (5, 6), (5, 7), (5, 8), (5, 9)];

fn weights(t: &Trial) -> (usize, usize) {
    WEIGHT_PAIRS[t.index % WEIGHT_PAIRS.len()]
}

fn five_term_trial(t: &mut Trial) -> Result<Check> {
    let k = t.field_or(CoeffField::rationals());
    let (m, w) = weights(t);
    let (x, y, rel) = t.draw(|r| {
        let (x, y) = (sample::flat_series(&k, m, r), sample::flat_series(&k, m, r));
        let rel = five_term(&x, &y)?;
        Ok((x, y, rel))
    })?;
    let v = rel.evaluate(&k, |g| li_mw(m, w, g))?;
    if !v.is_zero() {
        return Ok(mismatch(format!("li_mw({m},{w}) on five_term({x}, {y})"), 0, v));
    }
    let s = sample::flat_elem(&k, &mut t.rng);
    let c = li_mw(m, w, &TruncSeries::constant(s.clone(), m))?;
    Ok(if c.is_zero() { None } else { mismatch(format!("li_mw({m},{w}) on constant [{s}]"), 0, c) })
}

fn diagram_square_trial(t: &mut Trial) -> Result<Check> {
    let k = t.field_or(CoeffField::rationals());
    let (m, w) = weights(t);
    let x = sample::flat_series(&k, w, &mut t.rng);
    let lhs = li_mw(m, w, &x.truncate(m))?;
    let d = delta_in(&k, w, &FormalSum::generator(CoeffRing::Rationals, &x)?)?;
    let mut rhs = k.zero();
    for i in 1..=w - m {
        rhs = rhs.add(&d.wedge_eval(w - i, i)?.mul_int(i as i64));
    }
    Ok(expect_eq(format!("x = {x}, (m,w) = ({m},{w})"), &rhs, &lhs))
}

fn star_weight_trial(t: &mut Trial) -> Result<Check> {
    let k = t.field_or(CoeffField::rationals());
    let (m, w) = weights(t);
    let x = sample::flat_series(&k, m, &mut t.rng);
    let lam = sample::nonzero_elem(&k, &mut t.rng);
    let lhs = li_mw(m, w, &x.star_scale(&lam)?)?;
    let rhs = lam.pow_u(w as u128).mul(&li_mw(m, w, &x)?);
    if lhs != rhs {
        return Ok(mismatch(format!("li_mw({m},{w}) at λ = {lam}, x = {x}"), rhs, lhs));
    }
    let n = t.rng.gen_range(2..=5);
    let s = sample::flat_elem(&k, &mut t.rng);
    let a = sample::elem(&k, &mut t.rng);
    let lhs = li_higher(n, &s, &lam.mul(&a))?;
    let rhs = lam.pow_u(2 * n as u128 - 1).mul(&li_higher(n, &s, &a)?);
    Ok(expect_eq(format!("li_higher({n}, {s}, λ·{a}) at λ = {lam}"), &rhs, &lhs))
}

/// a⁵(1+s)/(6s⁴(1−s)³).
pub fn li_higher_3_closed_form(s: &FieldElem, a: &FieldElem) -> Result<FieldElem> {
    let one = s.one_like();
    let num = a.pow_u(5).mul(&one.add(s));
    let den = s.pow_u(4).mul(&one.sub(s).pow_u(3)).mul_int(6);
    num.div(&den)
}

fn li_higher_trial(t: &mut Trial) -> Result<Check> {
    let k = t.field_or(CoeffField::rationals());
    let s = sample::flat_elem(&k, &mut t.rng);
    let a = sample::elem(&k, &mut t.rng);
    let two = li_higher(2, &s, &a)?;
    let want = li_23(&TruncSeries::new(&k, vec![s.clone(), a.clone()], 2))?;
    if two != want {
        return Ok(mismatch(format!("li_higher(2, {s}, {a})"), want, two));
    }
    Ok(expect_eq(format!("li_higher(3, {s}, {a})"), &li_higher_3_closed_form(&s, &a)?, &li_higher(3, &s, &a)?))
}

fn cathelineau_trial(t: &mut Trial) -> Result<Check> {
    let k = t.field_or(default_field("cathelineau"));
    let (p, q, rel) = t.draw(|r| {
        let (p, q) = (sample::flat_elem(&k, r), sample::flat_elem(&k, r));
        let rel = four_term(&p, &q)?;
        Ok((p, q, rel))
    })?;
    let d = cathelineau_d(&rel)?;
    if !d.is_zero()? {
        return Ok(mismatch(format!("D(four_term({p}, {q}))"), 0, d));
    }
    let mut xi = Beta2Symbol::zero(&k);
    for _ in 0..t.rng.gen_range(1..=3) {
        let c = sample::nonzero_elem(&k, &mut t.rng);
        let a = sample::flat_elem(&k, &mut t.rng);
        xi.add_term(&c, &a)?;
    }
    let l = cathelineau_l(&cathelineau_d(&xi)?)?;
    Ok(if l.is_zero() { None } else { mismatch(format!("L(D({xi:?}))"), 0, l) })
}

fn beta_embed_trial(t: &mut Trial) -> Result<Check> {
    let k = t.field_or(CoeffField::rationals());
    let (a, b) = t.draw(|r| {
        let (a, b) = (sample::flat_elem(&k, r), sample::flat_elem(&k, r));
        if a == b || !b.div(&a)?.is_flat() || !k.one().sub(&a).div(&k.one().sub(&b))?.is_flat() {
            return Err(Error::NotInGeneralPosition(format!("{a}, {b}")));
        }
        Ok((a, b))
    })?;
    let one = k.one();
    let (ea, eb) = (beta_embed(&a)?, beta_embed(&b)?);
    let input = format!("a = {a}, b = {b}");
    let lhs = eb.div(&ea)?;
    let rhs = beta_embed(&b.div(&a)?)?.star_scale(&a)?;
    if lhs != rhs {
        return Ok(mismatch(format!("<b>/<a> at {input}"), rhs, lhs));
    }
    let lhs = ea.one_minus().div(&eb.one_minus())?;
    let rhs = beta_embed(&one.sub(&a).div(&one.sub(&b))?)?.star_scale(&b.sub(&one))?;
    if lhs != rhs {
        return Ok(mismatch(format!("(1-<a>)/(1-<b>) at {input}"), rhs, lhs));
    }
    let lhs = ea.inv()?.one_minus();
    let rhs = TruncSeries::constant(one.sub(&a.inv()?), 2).mul(&TruncSeries::one(&k, 2).sub(&TruncSeries::t(&k, 2)));
    if lhs != rhs {
        return Ok(mismatch(format!("1-<a>^-1 at {input}"), rhs, lhs));
    }
    let s = embedded_four_term(&a, &b)?;
    let v = s.evaluate(&k, li_23)?;
    if !v.is_zero() {
        return Ok(mismatch(format!("li_23 on {s}"), 0, v));
    }
    let w = delta_in(&k, 2, &s)?.canonical()?.infinitesimal_part();
    Ok(if w.is_zero() { None } else { mismatch(format!("infinitesimal part of delta({s})"), 0, format!("{w:?}")) })
}

const CHARP: [(u64, u32); 8] = [(5, 1), (5, 2), (7, 1), (7, 2), (11, 1), (11, 2), (13, 1), (13, 2)];

fn charp_field(t: &Trial) -> Result<CoeffField> {
    match &t.field {
        Some(f) => Ok(f.clone()),
        None => {
            let (p, e) = CHARP[t.index % CHARP.len()];
            CoeffField::finite(p, e, "θ")
        }
    }
}

/// £₁'s reflection, inversion and four-term identities at (x, y), plus the
/// additive four-term equation for its Frobenius root.
pub fn finite_log_identities(x: &FieldElem, y: &FieldElem) -> Result<Check> {
    let f = x.field();
    let p = f.characteristic() as u128;
    let one = f.one();
    let input = format!("x = {x}, y = {y} in {f}");
    let (lx, l1x) = (finite_log(x)?, finite_log(&one.sub(x))?);
    if lx != l1x {
        return Ok(mismatch(format!("£1(x) = £1(1-x), {input}"), l1x, lx));
    }
    if x.is_zero() {
        return Ok(None);
    }
    let r = x.pow_u(p).mul(&finite_log(&x.inv()?)?).neg();
    if lx != r {
        return Ok(mismatch(format!("£1(x) = -x^p £1(1/x), {input}"), r, lx));
    }
    if x.is_one() {
        return Ok(None);
    }
    let (yx, zz) = (y.div(x)?, one.sub(y).div(&one.sub(x))?);
    let four = lx
        .sub(&finite_log(y)?)
        .add(&x.pow_u(p).mul(&finite_log(&yx)?))
        .add(&one.sub(x).pow_u(p).mul(&finite_log(&zz)?));
    if !four.is_zero() {
        return Ok(mismatch(format!("£1 four-term, {input}"), 0, four));
    }
    let root = |v: &FieldElem| finite_log(v).map(|l| l.frobenius_root());
    let add = root(x)?.sub(&root(y)?).add(&x.mul(&root(&yx)?)).add(&one.sub(x).mul(&root(&zz)?));
    Ok(if add.is_zero() { None } else { mismatch(format!("£1^(1/p) additive four-term, {input}"), 0, add) })
}

fn charp_identities_trial(t: &mut Trial) -> Result<Check> {
    let k = charp_field(t)?;
    let (x, y) = (sample::elem(&k, &mut t.rng), sample::elem(&k, &mut t.rng));
    if let Some(c) = finite_log_identities(&x, &y)? {
        return Ok(Some(c));
    }
    let (x, y, rel) = t.draw(|r| {
        let (x, y) = (sample::flat_series(&k, 2, r), sample::flat_series(&k, 2, r));
        let rel = five_term(&x, &y)?;
        Ok((x, y, rel))
    })?;
    let v = rel.evaluate(&k, finite_dilog)?;
    Ok(if v.is_zero() { None } else { mismatch(format!("finite_dilog on five_term({x}, {y})"), 0, v) })
}

fn charp_diagram_trial(t: &mut Trial) -> Result<Check> {
    let k = charp_field(t)?;
    let p = k.characteristic() as usize;
    let s = sample::flat_elem(&k, &mut t.rng);
    let alpha = sample::elem(&k, &mut t.rng);
    let want = finite_dilog(&TruncSeries::new(&k, vec![s.clone(), alpha.clone()], 2))?;
    for _ in 0..3 {
        let mut c = vec![s.clone(), alpha.clone()];
        c.extend((2..p).map(|_| sample::elem(&k, &mut t.rng)));
        let x = TruncSeries::new(&k, c, p);
        let got = diagram_functional(&x)?;
        if got != want {
            return Ok(mismatch(format!("lift {x} of {s} + ({alpha})t"), want, got));
        }
    }
    Ok(None)
}

fn q_of(x: &FieldElem) -> Result<Q> {
    x.trace()?.as_q().ok_or_else(|| Error::InvalidArgument(format!("{x} has no rational trace")))
}

fn q_ratfunc(c: &[Q], n: usize) -> Result<RatFunc> {
    let k = qz();
    RatFunc::new(TruncSeries::new(&k, c.iter().map(|x| k.from_q(x).unwrap()).collect(), n))
}

/// The triple (1 − z, z, 1 − a/z) over ℚ[t]/(t^n).
pub fn specialization_triple(a: &[Q], n: usize) -> Result<Triple> {
    let z = RatFunc::z(n);
    let a = q_ratfunc(a, n)?;
    Ok([z.one_minus()?, z.clone(), a.div(&z).one_minus()?])
}

fn chow_specialization_trial(t: &mut Trial) -> Result<Check> {
    let n = crate::chow::DEFAULT_PRECISION;
    let a = t.draw(|r| {
        let a = vec![sample::small_q(r, 9), sample::small_q(r, 9)];
        if a[0].is_zero() || a[0].is_one() {
            return Err(Error::NotFlat(format!("{}", a[0])));
        }
        Ok(a)
    })?;
    let p = specialization_triple(&a, n)?;
    let got = chow_rho(&p[0], &p[1], &p[2], &UniformizerSystem::default())?;
    let k = CoeffField::rationals();
    let x = TruncSeries::new(&k, a.iter().map(|c| k.from_q(c).unwrap()).collect(), 2);
    let want = q_of(&li_23(&x)?)?;
    Ok(expect_eq(format!("a = {x}"), &want, &got))
}

fn random_triple(r: &mut ChaCha8Rng, n: usize) -> Result<([sample::LinearFactored; 3], Triple)> {
    let data = [sample::linear_factored(r, n, true), sample::linear_factored(r, n, true), sample::linear_factored(r, n, true)];
    let p = [data[0].to_ratfunc(n)?, data[1].to_ratfunc(n)?, data[2].to_ratfunc(n)?];
    Ok((data, p))
}

fn lift_independence_trial(t: &mut Trial) -> Result<Check> {
    let n = crate::chow::DEFAULT_PRECISION;
    let sys = UniformizerSystem::default();
    let (p, lift, base) = t.draw(|r| {
        let (data, p) = random_triple(r, n)?;
        let moved = [data[0].perturb_m2(r), data[1].perturb_m2(r), data[2].perturb_m2(r)];
        let lift = [moved[0].to_ratfunc(n)?, moved[1].to_ratfunc(n)?, moved[2].to_ratfunc(n)?];
        let base = corrected_rho(&p, &BTreeMap::new(), &sys)?;
        Ok((p, lift, base))
    })?;
    let mut pts: Vec<ClosedPoint> = support(&[&p[0], &p[1], &p[2]]).into_iter().collect();
    pts.extend(support(&[&lift[0], &lift[1], &lift[2]]));
    pts.sort();
    pts.dedup();
    let input = format!("p = ({}, {}, {}), lift = ({}, {}, {})", p[0], p[1], p[2], lift[0], lift[1], lift[2]);
    let all: BTreeMap<ClosedPoint, Triple> = pts.iter().map(|c| (c.clone(), lift.clone())).collect();
    let half: BTreeMap<ClosedPoint, Triple> = pts.iter().step_by(2).map(|c| (c.clone(), lift.clone())).collect();
    for (label, locals) in [("all points", all), ("alternate points", half)] {
        let v = corrected_rho(&p, &locals, &sys)?;
        if v != base {
            return Ok(mismatch(format!("{input}; local lifts at {label}"), &base, v));
        }
    }
    Ok(None)
}

fn reciprocity_trial(t: &mut Trial) -> Result<Check> {
    let n = crate::chow::DEFAULT_PRECISION;
    let sys = UniformizerSystem::default();
    let (f, g, lhs, rhs) = t.draw(|r| {
        let f = sample::linear_factored(r, n, true).to_ratfunc(n)?;
        let mut gd = sample::linear_factored(r, n, true);
        gd.zeros.push((0..3).map(|_| sample::small_q(r, 6)).collect());
        let g = gd.to_ratfunc(n)?;
        let lhs = reciprocity_lhs(&f, &g, &sys)?;
        let rhs = chow_rho(&f.one_minus()?, &f, &g, &sys)?;
        Ok((f, g, lhs, rhs))
    })?;
    Ok(expect_eq(format!("f = {f}, g = {g}"), &rhs, &lhs))
}

/// A random rational function in ℚ(z) with a few poles, some of them non-rational.
fn random_rational_function(r: &mut ChaCha8Rng) -> Result<FieldElem> {
    let k = qz();
    let base = k.base().unwrap().clone();
    let q = |r: &mut ChaCha8Rng| base.from_q(&sample::small_q(r, 5)).unwrap();
    let num = Poly::new(&base, (0..r.gen_range(1..=4)).map(|_| q(r)).collect());
    let mut den = Poly::one(&base);
    for _ in 0..r.gen_range(1..=3) {
        let deg = r.gen_range(1..=2);
        let mut c: Vec<FieldElem> = (0..deg).map(|_| q(r)).collect();
        c.push(base.one());
        den = den.mul(&Poly::new(&base, c).pow(r.gen_range(1..=2)));
    }
    if num.is_zero() {
        return Err(Error::ZeroElement);
    }
    k.fraction(num, den)
}

fn residue_theorem_trial(t: &mut Trial) -> Result<Check> {
    let f = t.draw(random_rational_function)?;
    let om = Differential::from_parts(&qz(), 1, vec![f.clone()], vec![]);
    let mut total = Q::zero();
    for c in pole_points(&om) {
        total += q_of(&residue_1form(&om, &c)?)?;
    }
    Ok(if total.is_zero() { None } else { mismatch(format!("({f}) dz"), 0, total) })
}

fn cycle_m2_trial(t: &mut Trial) -> Result<Check> {
    let n = crate::cycle::DEFAULT_PRECISION;
    let (z, data) = sample::admissible_cycle(&mut t.rng, n, false);
    let base = rho_f(&z)?;
    let moved = t.draw(|r| {
        let d = [data[0].perturb_m2(r), data[1].perturb_m2(r), data[2].perturb_m2(r)];
        sample::cycle_from(&d, n).map(|c| (d, c))
    })?;
    let got = rho_f(&moved.1)?;
    Ok(expect_eq(format!("{data:?} moved to {:?}", moved.0), &base, &got))
}

fn cycle_product_trial(t: &mut Trial) -> Result<Check> {
    let n = crate::cycle::DEFAULT_PRECISION;
    let (z, data) = sample::admissible_cycle(&mut t.rng, n, true);
    let v = rho_f(&z)?;
    Ok(if v.is_zero() { None } else { mismatch(format!("{data:?}"), 0, v) })
}

fn homotopy_defect(f: &AlgebraMap, t1: &Splitting, t2: &Splitting, xi: &[(Q, SqElem)]) -> Result<SymPower> {
    let pushed = xi.iter().map(|(n, a)| Ok((n.clone(), f.apply(a)?))).collect::<Result<Vec<_>>>()?;
    Ok(li2_tau_sum(&pushed, t2)?.sub(&f.push(&li2_tau_sum(xi, t1)?)?))
}

fn homotopy_trial(t: &mut Trial) -> Result<Check> {
    let (r1, r2) = [(1, 1), (2, 2), (1, 2), (2, 1)][t.index % 4];
    let (f, t1, t2, xi) = sample::homotopy_instance(&mut t.rng, r1, r2)?;
    let w = SqWedge::delta(f.source(), &xi)?;
    let h = homotopy_h(&f, &t1, &t2, &w)?;
    let want = homotopy_defect(&f, &t1, &t2, &xi)?;
    let input = format!("f = {f:?}, τ1 = {t1:?}, τ2 = {t2:?}, ξ = {xi:?}");
    if h != want {
        return Ok(mismatch(input, want, h));
    }
    let phi: Vec<SymPower> = (0..r1)
        .map(|_| {
            let v: Vec<FieldElem> = (0..r2).map(|_| sample::elem(f.target().base(), &mut t.rng)).collect();
            let u: Vec<FieldElem> = (0..r2).map(|_| sample::elem(f.target().base(), &mut t.rng)).collect();
            SymPower::linear(f.target(), &v).mul(&SymPower::linear(f.target(), &u))
        })
        .collect();
    let h2 = homotopy_h_with(&f, &t1, &t2, &w, &phi)?;
    if h2 != h {
        return Ok(mismatch(format!("{input}, φ basis {phi:?}"), h, h2));
    }
    let k = CoeffField::rationals();
    let alg = SquareZeroAlgebra::with_rank(&k, 1)?;
    let s = sample::flat_elem(&k, &mut t.rng);
    let a = sample::elem(&k, &mut t.rng);
    let v = li2_tau(&alg.element(s.clone(), vec![a.clone()])?, &Splitting::canonical(&alg))?.coeff(&[0, 0, 0]);
    let want = li_23(&TruncSeries::new(&k, vec![s.clone(), a.clone()], 2))?;
    Ok(expect_eq(format!("rank-1 li2_tau at {s} + ({a})ε"), &want, &v))
}

fn rho1_trial(t: &mut Trial) -> Result<Check> {
    let k = default_field("rho1-exactness");
    let mut xi = FormalSum::zero(CoeffRing::Rationals);
    for _ in 0..t.rng.gen_range(1..=3) {
        let s = sample::flat_elem(&k, &mut t.rng);
        let n = Q::from_integer(t.rng.gen_range(1..=3).into());
        for sign in [1, -1] {
            let u = sample::elem(&k, &mut t.rng);
            xi.add_term(n.clone() * Q::from_integer(sign.into()), &TruncSeries::new(&k, vec![s.clone(), u], 2))?;
        }
    }
    let om = rho1_logdlog(&delta_in(&k, 2, &xi)?)?;
    Ok(if is_exact(&om)? { None } else { mismatch(format!("ξ = {xi}"), "exact", om) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_runs() {
        for name in SUITES {
            let r = run_suite(name, &SuiteConfig { trials: 2, seed: 1, field: None }).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.failures);
        }
    }

    #[test]
    fn deterministic() {
        let cfg = SuiteConfig { trials: 6, seed: 9, field: None };
        let a = run_suite("five-term", &cfg).unwrap();
        let b = run_suite("five-term", &cfg).unwrap();
        assert_eq!((a.failures, a.rejected), (b.failures, b.rejected));
    }

    #[test]
    fn rejects_bad_field() {
        let f = CoeffField::finite(5, 1, "θ").unwrap();
        let cfg = SuiteConfig { trials: 1, seed: 0, field: Some(f) };
        assert!(matches!(run_suite("five-term", &cfg), Err(Error::UnsupportedField(_))));
        assert!(run_suite("nope", &cfg).is_err());
    }
}
