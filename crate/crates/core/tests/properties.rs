use addilog::additive::li_mw;
use addilog::bloch::{delta_in, five_term, CoeffRing, FormalSum, Wedge2};
use addilog::chow::{chow_rho, UniformizerSystem};
use addilog::cycle::{boundary, l_invariant};
use addilog::kernel::qpoly::qf;
use addilog::kernel::{newton_lift_root, SeriesPoly};
use addilog::sample;
use addilog::sqzero::{five_term as sq_five_term, li2_tau, li2_tau_sum, Splitting, SquareZeroAlgebra};
use addilog::{CoeffField, FieldElem, Q, TruncSeries};
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rat() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| qf(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = Q> {
    rat().prop_filter("nonzero", |q| !q.is_zero())
}

fn q_elem(q: &Q) -> FieldElem {
    CoeffField::rationals().from_q(q).unwrap()
}

fn series_from(c0: &Q, rest: &[Q], m: usize) -> TruncSeries {
    let mut c = vec![q_elem(c0)];
    c.extend(rest.iter().map(q_elem));
    TruncSeries::new(&CoeffField::rationals(), c, m)
}

fn unit(m: usize) -> impl Strategy<Value = TruncSeries> {
    (nonzero_rat(), prop::collection::vec(rat(), m - 1)).prop_map(move |(c, r)| series_from(&c, &r, m))
}

fn nilpotent(m: usize) -> impl Strategy<Value = TruncSeries> {
    prop::collection::vec(rat(), m - 1).prop_map(move |r| series_from(&Q::zero(), &r, m))
}

fn flat(m: usize) -> impl Strategy<Value = TruncSeries> {
    unit(m).prop_filter("flat", |x| x.is_flat())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn log_circ_additive(x in unit(5), y in unit(5)) {
        let lhs = x.mul(&y).log_circ().unwrap();
        prop_assert_eq!(lhs, x.log_circ().unwrap().add(&y.log_circ().unwrap()));
    }

    #[test]
    fn exp_log_inverse(x in unit(6), u in nilpotent(6)) {
        let normalized = x.scale(&x.constant_term().inv().unwrap());
        prop_assert_eq!(x.log_circ().unwrap().exp_nil().unwrap(), normalized);
        prop_assert_eq!(u.exp_nil().unwrap().log_circ().unwrap(), u);
    }

    #[test]
    fn star_scale_composes(x in unit(5), l in nonzero_rat(), mu in nonzero_rat()) {
        let (l, mu) = (q_elem(&l), q_elem(&mu));
        let both = x.star_scale(&l.mul(&mu)).unwrap();
        prop_assert_eq!(&both, &x.star_scale(&mu).unwrap().star_scale(&l).unwrap());
        let lhs = x.star_scale(&l).unwrap().log_circ().unwrap();
        prop_assert_eq!(lhs, x.log_circ().unwrap().star_scale(&l).unwrap());
    }

    #[test]
    fn newton_lift_exact(r0 in rat(), c in nonzero_rat(), h in prop::collection::vec(rat(), 3), n in 2usize..7) {
        let k = CoeffField::rationals();
        let lin = SeriesPoly::new(&k, n, vec![TruncSeries::constant(q_elem(&(-r0.clone())), n), TruncSeries::one(&k, n)]);
        let other = SeriesPoly::new(&k, n, vec![TruncSeries::constant(q_elem(&(c.clone() - &r0)), n), TruncSeries::one(&k, n)]);
        let t = TruncSeries::t(&k, n);
        let pert = SeriesPoly::new(&k, n, h.iter().map(|q| t.scale(&q_elem(q))).collect());
        let f = lin.mul(&other).add(&pert);
        let r = newton_lift_root(&f, &q_elem(&r0)).unwrap();
        prop_assert!(f.eval(&r).unwrap().is_zero());
    }

    #[test]
    fn trace_through_tower(c in prop::collection::vec(0u64..5, 4)) {
        let big = CoeffField::finite(5, 4, "θ").unwrap();
        let mid = CoeffField::finite(5, 2, "η").unwrap();
        let small = CoeffField::finite(5, 1, "θ").unwrap();
        let x = big.from_fin_coords(&c);
        let via = x.trace_to(&mid).unwrap().trace_to(&small).unwrap();
        prop_assert_eq!(x.trace_to(&small).unwrap(), via);
    }

    #[test]
    fn delta_kills_five_term(x in flat(4), y in flat(4)) {
        let k = CoeffField::rationals();
        if let Ok(rel) = five_term(&x, &y) {
            prop_assert!(rel.terms().iter().all(|(_, g)| g.is_flat()));
            prop_assert!(delta_in(&k, 4, &rel).unwrap().canonical().unwrap().is_zero());
        }
    }

    #[test]
    fn delta_linear(x in flat(3), y in flat(3), a in rat(), b in rat()) {
        let k = CoeffField::rationals();
        let gx = FormalSum::generator(CoeffRing::Rationals, &x).unwrap();
        let gy = FormalSum::generator(CoeffRing::Rationals, &y).unwrap();
        let combo = gx.scale(&a).add(&gy.scale(&b));
        let lhs = delta_in(&k, 3, &combo).unwrap().canonical().unwrap();
        let dx = delta_in(&k, 3, &gx).unwrap().scale(&a);
        let dy = delta_in(&k, 3, &gy).unwrap().scale(&b);
        prop_assert_eq!(lhs, dx.add(&dy).unwrap().canonical().unwrap());
    }

    #[test]
    fn wedge_eval_antisymmetric(x in unit(5), y in unit(5), i in 1usize..5, j in 1usize..5) {
        let w = Wedge2::pair(&x, &y).unwrap();
        let a = w.wedge_eval(i, j).unwrap();
        prop_assert_eq!(&a, &w.wedge_eval(j, i).unwrap().neg());
        prop_assert_eq!(&a, &w.to_canonical().unwrap().wedge_eval(i, j).unwrap());
    }

    #[test]
    fn canonical_equality_test(x in unit(4), y in unit(4), z in unit(4)) {
        let mut w1 = Wedge2::pair(&x.mul(&y), &z).unwrap();
        w1.push(qf(1, 1), &z, &x).unwrap();
        let w2 = Wedge2::pair(&y, &z).unwrap();
        prop_assert!(w1.sub(&w2).unwrap().canonical().unwrap().is_zero());
        let w3 = Wedge2::pair(&x, &z).unwrap();
        let nonzero = !w3.canonical().unwrap().is_zero();
        prop_assert_eq!(nonzero, w1.canonical().unwrap() != w3.add(&w2).unwrap().canonical().unwrap());
    }

    #[test]
    fn flat_condition_enforced(c in rat(), r in prop::collection::vec(rat(), 2)) {
        let x = series_from(&c, &r, 3);
        let mut s = FormalSum::zero(CoeffRing::Rationals);
        prop_assert_eq!(s.add_term(qf(1, 1), &x).is_ok(), x.is_flat());
    }

    #[test]
    fn li_mw_vanishes_on_constants(s in rat(), m in 2usize..6) {
        let s = q_elem(&s);
        prop_assume!(s.is_flat());
        for w in m + 1..2 * m {
            prop_assert!(li_mw(m, w, &TruncSeries::constant(s.clone(), m)).unwrap().is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn chow_rho_alternating(seed in any::<u64>()) {
        let n = addilog::chow::DEFAULT_PRECISION;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p: Vec<_> = (0..3).map(|_| sample::linear_factored(&mut rng, n, true).to_ratfunc(n).unwrap()).collect();
        let sys = UniformizerSystem::default();
        let Ok(v) = chow_rho(&p[0], &p[1], &p[2], &sys) else { return Ok(()) };
        prop_assert_eq!(chow_rho(&p[1], &p[0], &p[2], &sys).unwrap(), -v.clone());
        prop_assert_eq!(chow_rho(&p[0], &p[2], &p[1], &sys).unwrap(), -v);
    }

    #[test]
    fn l_invariant_additive(seed in any::<u64>(), cut in 0usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (z, _) = sample::admissible_cycle(&mut rng, addilog::cycle::DEFAULT_PRECISION, false);
        let pts = boundary(&z).unwrap();
        let cut = cut.min(pts.len());
        let whole = l_invariant(&pts).unwrap();
        prop_assert_eq!(whole, l_invariant(&pts[..cut]).unwrap() + l_invariant(&pts[cut..]).unwrap());
    }

    #[test]
    fn li2_tau_relations(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = CoeffField::rationals();
        let alg = SquareZeroAlgebra::with_rank(&k, 2).unwrap();
        let tau = Splitting::canonical(&alg);
        let mut draw = || {
            let a = sample::flat_elem(&k, &mut rng);
            let e = vec![sample::elem(&k, &mut rng), sample::elem(&k, &mut rng)];
            alg.element(a, e).unwrap()
        };
        let (x, y) = (draw(), draw());
        if let Ok(rel) = sq_five_term(&x, &y) {
            prop_assert!(li2_tau_sum(&rel, &tau).unwrap().is_zero());
        }
        let s = sample::flat_elem(&k, &mut rng);
        prop_assert!(li2_tau(&tau.apply(&s), &tau).unwrap().is_zero());
    }
}
