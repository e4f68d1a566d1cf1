use gw_blowup::enumerative::{curve_count, CountQuery, EnumerativeError};
use gw_blowup::invariant::{canonicalize, lift_small_n};
use gw_blowup::{BasisIndex, CurveClass, Engine, EvalResult, Geometry, Integer, Rational, Scalar};
use proptest::prelude::*;

fn geometry() -> impl Strategy<Value = Geometry> {
    (2u32..=5, any::<bool>()).prop_map(|(n, b)| if b { Geometry::blowup(n).unwrap() } else { Geometry::plain(n).unwrap() })
}

/// A geometry, an effective class and an arbitrary list of basis classes.
fn raw_key() -> impl Strategy<Value = (Geometry, CurveClass, Vec<BasisIndex>)> {
    geometry().prop_flat_map(|g| {
        let basis = g.basis();
        let beta =
            if g.is_blowup() { (0i64..4, -3i64..4).prop_map(|(d, e)| CurveClass::new(d, e)).boxed() } else { (0i64..4).prop_map(CurveClass::degree).boxed() };
        (Just(g), beta, prop::collection::vec(prop::sample::select(basis), 0..8))
    })
}

fn value_of(r: &EvalResult<Rational>) -> Option<Rational> {
    match r {
        EvalResult::Value(v) => Some(v.clone()),
        EvalResult::Canonical { .. } => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonical_form_ignores_order((g, beta, classes) in raw_key(), seed in any::<u64>()) {
        let mut shuffled = classes.clone();
        // deterministic rotation and reversal driven by the seed
        if !shuffled.is_empty() {
            let k = (seed as usize) % shuffled.len();
            shuffled.rotate_left(k);
            if seed % 2 == 1 { shuffled.reverse(); }
        }
        let a: EvalResult<Rational> = canonicalize(g, beta, &classes);
        let b: EvalResult<Rational> = canonicalize(g, beta, &shuffled);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn off_grade_keys_vanish((g, beta, classes) in raw_key()) {
        let codim: i64 = classes.iter().map(|c| i64::from(c.codim())).sum();
        if codim != g.vdim(beta, classes.len()) {
            let r: EvalResult<Rational> = canonicalize(g, beta, &classes);
            prop_assert!(r.is_zero_value());
        }
    }

    #[test]
    fn canonical_keys_are_canonical((g, beta, classes) in raw_key()) {
        if let EvalResult::Canonical { key, multiplier } = canonicalize::<Rational>(g, beta, &classes) {
            prop_assert!(key.is_canonical());
            prop_assert!(key.num_points() >= 3);
            prop_assert!(key.classes().iter().all(|c| c.codim() >= 2));
            prop_assert!(!multiplier.is_negligible());
        }
    }

    /// Adding a divisor scales the canonical form by its pairing with β.
    #[test]
    fn divisor_scaling((g, beta, classes) in raw_key(), pick in any::<bool>()) {
        prop_assume!(!beta.is_zero() && g.is_effective(beta) && classes.len() >= 3);
        let d = if pick && g.is_blowup() { BasisIndex::e(1) } else { BasisIndex::h(1) };
        let mut with = classes.clone();
        with.push(d);
        let lhs: EvalResult<Rational> = canonicalize(g, beta, &with);
        let rhs: EvalResult<Rational> = canonicalize(g, beta, &classes);
        let f = Rational::from_int(g.curve_pairing(d, beta));
        match (lhs, rhs) {
            (EvalResult::Value(a), EvalResult::Value(b)) => prop_assert_eq!(a, f * b),
            (EvalResult::Canonical { key: k1, multiplier: m1 }, EvalResult::Canonical { key: k2, multiplier: m2 }) => {
                prop_assert_eq!(k1, k2);
                prop_assert_eq!(m1, f * m2);
            }
            (EvalResult::Value(a), _) => prop_assert!(a.is_negligible() && f.is_negligible()),
            (l, r) => prop_assert!(false, "shapes differ: {:?} vs {:?}", l, r),
        }
    }

    #[test]
    fn initial_data_is_symmetric(n in 2u32..=5, a in 0usize..9, b in 0usize..9, c in 0usize..9, d in 0i64..2, e in -1i64..2) {
        let g = Geometry::blowup(n).unwrap();
        let basis = g.basis();
        let (a, b, c) = (basis[a % basis.len()], basis[b % basis.len()], basis[c % basis.len()]);
        let beta = CurveClass::new(d, e);
        let v = gw_blowup::invariant::initial_three_point(g, a, b, c, beta);
        for (x, y, z) in [(b, a, c), (c, b, a), (a, c, b), (b, c, a), (c, a, b)] {
            prop_assert_eq!(gw_blowup::invariant::initial_three_point(g, x, y, z, beta), v);
        }
    }
}

#[test]
fn lift_examples() {
    let g3 = Geometry::blowup(3).unwrap();
    let pt = g3.point();
    let lifted: EvalResult<Rational> = lift_small_n(g3, CurveClass::new(1, 0), &[pt, pt]);
    assert_eq!(value_of(&lifted), Some(Rational::from_int(1)));
    let e2 = BasisIndex::e(2);
    let lifted: EvalResult<Rational> = lift_small_n(g3, CurveClass::new(1, 1), &[e2, e2]);
    assert_eq!(value_of(&lifted), Some(Rational::from_int(1)));
    let lifted: EvalResult<Rational> = lift_small_n(g3, CurveClass::new(1, 2), &[]);
    assert_eq!(value_of(&lifted), Some(Rational::from_int(0)));
    // lifting through H, or through two divisors and then stripping, agree
    let h = BasisIndex::h(1);
    let via_two: EvalResult<Rational> = canonicalize(g3, CurveClass::new(1, 0), &[pt, pt, h, h]);
    assert_eq!(value_of(&via_two), Some(Rational::from_int(1)));
}

#[test]
fn curve_counts_from_published_tables() {
    let mut e2 = Engine::new(Geometry::blowup(2).unwrap());
    let q = |n, d, e, k: usize, c| CountQuery { n, d, e, codims: vec![c; k] };
    assert_eq!(curve_count(&mut e2, &q(2, 4, 2, 9, 2)).unwrap(), Integer::from(96));
    assert_eq!(curve_count(&mut e2, &q(2, 5, 3, 11, 2)).unwrap(), Integer::from(640));
    let mut e3 = Engine::new(Geometry::blowup(3).unwrap());
    assert_eq!(curve_count(&mut e3, &q(3, 7, 3, 11, 3)).unwrap(), Integer::from(620));
    assert!(matches!(curve_count(&mut e3, &q(3, 7, 3, 10, 3)), Err(EnumerativeError::DimensionMismatch { .. })));
    // mixed linear conditions: lines in P³ meeting four general lines
    let lines = CountQuery { n: 3, d: 1, e: 0, codims: vec![2; 4] };
    assert_eq!(curve_count(&mut e3, &lines).unwrap(), Integer::from(2));
}

#[test]
fn engine_examples() {
    let g = Geometry::blowup(3).unwrap();
    let mut e = Engine::new(g);
    let e2 = BasisIndex::e(2);
    assert_eq!(e.evaluate(CurveClass::new(2, 1), &[e2; 6]).unwrap(), Rational::from_int(-3));
    // every relation the solver used has zero residual afterwards
    e.keep_relations(true);
    e.evaluate(CurveClass::new(2, -1), &[e2; 10]).unwrap();
    let kept: Vec<_> = e.kept_relations().to_vec();
    assert!(!kept.is_empty());
    for (_, rel) in kept {
        assert!(e.relation_residual(&rel).unwrap().is_negligible());
    }
}

#[test]
fn float_engine_tracks_exact_values() {
    let g = Geometry::blowup(2).unwrap();
    let mut approx = gw_blowup::reconstruction::Engine::<f64>::new(g);
    let mut exact = Engine::new(g);
    for (d, e) in [(3, 0), (4, 2), (5, 3)] {
        let pts = vec![g.point(); (3 * d - 1 - e) as usize];
        let x = exact.evaluate(CurveClass::new(d, e), &pts).unwrap();
        let y = approx.evaluate(CurveClass::new(d, e), &pts).unwrap();
        let x: f64 = x.to_ratio_string().split('/').next().unwrap().parse().unwrap();
        assert!((x - y).abs() <= 1e-6 * x.abs().max(1.0), "d={d}, e={e}: {x} vs {y}");
    }
}
