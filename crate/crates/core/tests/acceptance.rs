use std::process::ExitCode;
use std::time::Instant;

use addilog::additive::{li_23, li_higher, li_mw};
use addilog::bloch::{delta_in, CoeffRing, FormalSum};
use addilog::kernel::qpoly::qf;
use addilog::sample;
use addilog::verify::{finite_log_identities, li_higher_3_closed_form, run_suite, SuiteConfig};
use addilog::{CoeffField, FieldElem, Result, TruncSeries, Q};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

type Outcome = Result<Vec<String>>;

fn suite(name: &str, trials: usize, field: Option<CoeffField>) -> Outcome {
    let r = run_suite(name, &SuiteConfig { trials, seed: SEED, field })?;
    Ok(r.failures
        .iter()
        .take(3)
        .map(|f| format!("{name} trial {}: {} expected {} got {}", f.trial, f.input, f.expected, f.actual))
        .collect())
}

fn li23_closed_form() -> Outcome {
    let k = CoeffField::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = Vec::new();
    for _ in 0..200 {
        let s = sample::flat_elem(&k, &mut rng);
        let a = sample::elem(&k, &mut rng);
        let got = li_mw(2, 3, &TruncSeries::new(&k, vec![s.clone(), a.clone()], 2))?;
        let one = k.one();
        let want = a.pow_u(3).neg().div(&s.square().mul(&one.sub(&s).square()).mul_int(2))?;
        if got != want {
            bad.push(format!("s = {s}, a = {a}: expected {want} got {got}"));
        }
    }
    Ok(bad)
}

fn commuting_square() -> Outcome {
    let mut bad = suite("diagram-square", 500, None)?;
    let k = CoeffField::rationals();
    let x = TruncSeries::new(&k, vec![k.from_q(&qf(1, 2))?, k.one()], 3);
    let lhs = li_mw(2, 3, &x.truncate(2))?;
    let rhs = delta_in(&k, 3, &FormalSum::generator(CoeffRing::Rationals, &x)?)?.wedge_eval(2, 1)?;
    let eight = k.from_int(-8);
    if lhs != eight || rhs != eight {
        bad.push(format!("x = 1/2 + t: li_mw = {lhs}, wedge side = {rhs}"));
    }
    Ok(bad)
}

/// Taylor coefficients of g with g' = 1 − h, h = 1/(1 − s·e^u), at u = 0.
fn derivative_oracle(n: usize, s: &Q, a: &Q) -> Q {
    // h^{(k)} = P_k(h) with P_0 = h and P_{k+1} = P_k'(h)·(h² − h).
    let mut p: Vec<Q> = vec![Q::zero(), Q::one()];
    for _ in 0..n - 1 {
        let dp: Vec<Q> = (1..p.len()).map(|i| &p[i] * Q::from_integer(i.into())).collect();
        let mut next = vec![Q::zero(); dp.len() + 2];
        for (i, c) in dp.iter().enumerate() {
            next[i + 2] += c;
            next[i + 1] -= c;
        }
        p = next;
    }
    let h0 = (Q::one() - s).recip();
    let val = p.iter().rev().fold(Q::zero(), |acc, c| acc * &h0 + c);
    let fact: Q = (1..=n).fold(Q::one(), |f, i| f * Q::from_integer(i.into()));
    let c_n = -val / fact;
    let sign = if n.is_multiple_of(2) { Q::one() } else { -Q::one() };
    let mut ratio = Q::one();
    for _ in 0..2 * n - 1 {
        ratio *= a / s;
    }
    sign * ratio * c_n
}

fn higher_weight() -> Outcome {
    let k = CoeffField::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = Vec::new();
    for _ in 0..200 {
        let s = sample::flat_elem(&k, &mut rng);
        let a = sample::nonzero_elem(&k, &mut rng);
        let (sq, aq) = (s.as_q().unwrap(), a.as_q().unwrap());
        for n in 2..=5 {
            let got = li_higher(n, &s, &a)?;
            let want = derivative_oracle(n, &sq, &aq);
            if got.as_q() != Some(want.clone()) {
                bad.push(format!("li_higher({n}, {s}, {a}): oracle {want} got {got}"));
            }
        }
        let closed = li_higher_3_closed_form(&s, &a)?;
        if closed.as_q() != Some(derivative_oracle(3, &sq, &aq)) {
            bad.push(format!("n = 3 closed form at ({s}, {a}) disagrees with the oracle"));
        }
        let two = li_23(&TruncSeries::new(&k, vec![s.clone(), a.clone()], 2))?;
        if two != li_higher(2, &s, &a)? {
            bad.push(format!("li_higher(2, {s}, {a}) differs from li_23"));
        }
    }
    bad.extend(suite("li-higher", 200, None)?);
    Ok(bad)
}

fn exhaustive_log_identities(p: u64) -> Outcome {
    let k = CoeffField::finite(p, 1, "θ")?;
    let els: Vec<FieldElem> = k.elements();
    let mut bad = Vec::new();
    for x in &els {
        for y in &els {
            if let Some((i, e, a)) = finite_log_identities(x, y)? {
                bad.push(format!("{i}: expected {e} got {a}"));
            }
        }
    }
    Ok(bad)
}

fn characteristic_p() -> Outcome {
    let mut bad = Vec::new();
    for p in [5, 7] {
        bad.extend(exhaustive_log_identities(p)?);
    }
    for (p, e) in [(5, 1), (5, 2), (7, 1), (7, 2), (11, 1), (11, 2), (13, 1), (13, 2)] {
        let k = CoeffField::finite(p, e, "θ")?;
        bad.extend(suite("charp-identities", 200, Some(k.clone()))?);
        bad.extend(suite("charp-diagram", 25, Some(k))?);
    }
    Ok(bad)
}

fn m2_invariance() -> Outcome {
    let n = addilog::cycle::DEFAULT_PRECISION;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = Vec::new();
    for _ in 0..10 {
        let (z, data) = sample::admissible_cycle(&mut rng, n, false);
        let base = addilog::cycle::rho_f(&z)?;
        let mut moved = 0;
        while moved < 10 {
            let d = [data[0].perturb_m2(&mut rng), data[1].perturb_m2(&mut rng), data[2].perturb_m2(&mut rng)];
            let Ok(c) = sample::cycle_from(&d, n) else { continue };
            moved += 1;
            let v = addilog::cycle::rho_f(&c)?;
            if v != base {
                bad.push(format!("{data:?} moved to {d:?}: {base} became {v}"));
            }
        }
    }
    Ok(bad)
}

fn both(a: Outcome, b: Outcome) -> Outcome {
    let mut v = a?;
    v.extend(b?);
    Ok(v)
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("li_mw(2,3) closed form on 200 inputs", li23_closed_form),
        ("five-term relation, 50 pairs per (m,w)", || suite("five-term", 500, None)),
        ("commuting square with the pinned value -8", commuting_square),
        ("star weight, 100 instances", || suite("star-weight", 100, None)),
        ("higher weight oracle and li_higher(2) = li_23", higher_weight),
        ("Cathelineau L∘D and D on the four-term equation", || suite("cathelineau", 100, None)),
        ("beta embedding identities and embedded four-term", || suite("beta-embed", 100, None)),
        ("characteristic p identities and diagram", characteristic_p),
        ("Chow specialization to li_23", || suite("chow-specialization", 25, None)),
        ("lift independence and residue theorem", || {
            both(suite("chow-lift-independence", 10, None), suite("residue-theorem", 50, None))
        }),
        ("reciprocity", || suite("reciprocity", 20, None)),
        ("cycle invariant: product cycles and M2 invariance", || {
            both(suite("cycle-product", 20, None), m2_invariance())
        }),
        ("square-zero homotopy identity", || suite("homotopy-identity", 50, None)),
        ("rho1 exactness on boundaries", || suite("rho1-exactness", 50, None)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let problems = match outcome {
            Ok(v) => v,
            Err(e) => vec![format!("error: {e}")],
        };
        let slow = secs >= 60.0;
        if problems.is_empty() && !slow {
            println!("PASS {:2} {name} ({secs:.1}s)", i + 1);
        } else {
            failed += 1;
            println!("FAIL {:2} {name} ({secs:.1}s)", i + 1);
            if slow {
                println!("     exceeded 60s");
            }
            for p in problems.iter().take(3) {
                println!("     {p}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
