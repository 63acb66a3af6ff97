use hexcut::num::{pow, q, qf, rising, Q};
use hexcut::selfcheck::{contour_split, vandermonde_identity, prop_h_residue_grid, symmetric_removed, EG_EXAMPLES};
use hexcut::symfunc::mpoly::MPoly;
use hexcut::symfunc::sympoly::elementary;
use hexcut::symfunc::{
    cal_p, cal_p_pow, complementary_transform, compute_eg, h_ones, h_q, pochhammer, skew_schur_ones, SymPoly,
};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Coefficients of `(1 - z)^{-n}` up to `z^deg`, by repeated series multiplication.
fn series_ones(n: i64, deg: usize) -> Vec<Q> {
    let mut s = vec![Q::zero(); deg + 1];
    s[0] = Q::one();
    for _ in 0..n {
        // multiply by 1 + z + z^2 + ...
        for i in 1..=deg {
            let prev = s[i - 1].clone();
            s[i] += prev;
        }
    }
    s
}

/// `h_r` of the given points by summing all monomials of degree `r`.
fn h_brute(r: usize, xs: &[Q]) -> Q {
    fn go(r: usize, xs: &[Q], acc: Q) -> Q {
        if r == 0 {
            return acc;
        }
        match xs.split_first() {
            None => Q::zero(),
            Some((x, rest)) => go(r - 1, xs, &acc * x) + go(r, rest, acc),
        }
    }
    go(r, xs, Q::one())
}

#[test]
fn pochhammer_examples() {
    assert_eq!(pochhammer(3, 2), q(12));
    for k in -3..5 {
        assert_eq!(pochhammer(k, 0), q(1));
    }
    assert_eq!(pochhammer(-2, 5), q(0));
}

#[test]
fn h_ones_examples() {
    assert_eq!(h_ones(2, 3), series_ones(3, 2)[2]);
    assert_eq!(h_ones(2, 3), q(6));
    for n in 0..5 {
        assert_eq!(h_ones(-1, n), q(0));
        assert_eq!(h_ones(0, n), q(1));
    }
}

#[test]
fn h_q_examples() {
    let half = qf(1, 2);
    for n in 0..4 {
        assert_eq!(h_q(-1, 2, n, &half), q(0));
        assert_eq!(h_q(0, 2, n, &half), q(1));
        for r in 0..5 {
            assert_eq!(h_q(r, 3, n, &q(1)), h_ones(r, n + 1));
        }
    }
}

#[test]
fn cal_p_examples() {
    for qq in [qf(1, 2), qf(2, 3), qf(3, 2)] {
        for n in 0..5 {
            // exponent form: z = q^0 cancels every factor
            assert_eq!(cal_p_pow(n, 0, &qq), q(1));
            assert_eq!(cal_p(n, &q(1), &qq), q(1));
            for k in 1..=n {
                assert_eq!(cal_p(n, &pow(&qq, -k), &qq), q(0));
            }
        }
    }
}

#[test]
fn cal_p_limit_at_one() {
    // distance to (x+1)_n/n! shrinks as q approaches 1
    for n in 1..4 {
        for x in -2..4 {
            let lim = rising(&q(x + 1), n) / hexcut::num::factorial(n);
            assert_eq!(cal_p_pow(n, x, &q(1)), lim);
            let errs: Vec<Q> = [qf(99, 100), qf(999, 1000), qf(9999, 10000)]
                .iter()
                .map(|qq| hexcut::num::abs(&(cal_p_pow(n, x, qq) - &lim)))
                .collect();
            assert!(errs[0] >= errs[1] && errs[1] >= errs[2]);
            assert!(errs[2] < qf(1, 100));
        }
    }
}

#[test]
fn skew_schur_trivial_shape() {
    assert_eq!(skew_schur_ones(&[3, 2, 2], &[3, 2, 2], 4).unwrap(), q(1));
}

#[test]
fn gap_polynomial_examples() {
    for (y, text) in EG_EXAMPLES {
        assert_eq!(compute_eg(y, 8).unwrap(), SymPoly::parse(text, y.len()).unwrap(), "y = {y:?}");
    }
    for d in 1..5 {
        let y: Vec<i64> = (1..=d).rev().collect();
        assert_eq!(compute_eg(&y, 6).unwrap(), SymPoly::one(d as usize));
    }
}

#[test]
fn h_residue_identity_grid() {
    let (checked, bad) = prop_h_residue_grid(6);
    assert!(checked > 0);
    assert_eq!(bad, 0);
}

#[test]
fn complementary_transform_examples() {
    let l: Vec<Q> = [7, 4, 3, 1, -2].iter().map(|&v| q(v)).collect();
    let xp = [q(4), q(-2)];
    // S = t_1 = s_1
    let t1 = SymPoly::sigma(3, 1);
    let tr = complementary_transform(&t1, &l, 2, false);
    let want = l.iter().fold(Q::zero(), |a, b| a + b) - xp.iter().fold(Q::zero(), |a, b| a + b);
    assert_eq!(tr.eval(None, &xp), want);
    let one = complementary_transform(&SymPoly::one(3), &l, 2, false);
    assert_eq!(one.eval(None, &xp), q(1));
}

fn sympoly(nvars: usize) -> impl Strategy<Value = SymPoly> {
    prop::collection::vec((prop::collection::vec(0u32..3, nvars), -5i64..6), 1..5).prop_map(move |terms| {
        let mut p = MPoly::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, q(c));
        }
        SymPoly { nvars, poly: p }
    })
}

fn with_points(lo: usize, hi: usize) -> impl Strategy<Value = (SymPoly, Vec<Q>)> {
    (lo..hi).prop_flat_map(|n| (sympoly(n), prop::collection::vec((-6i64..7, 1i64..4).prop_map(|(a, b)| qf(a, b)), n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn h_ones_matches_series(r in 0i64..9, n in 0i64..6) {
        prop_assert_eq!(h_ones(r, n), series_ones(n, 8)[r as usize].clone());
    }

    #[test]
    fn h_q_matches_monomial_sum(r in 0usize..6, d in -2i64..3, n in 0i64..4, num in 1i64..5) {
        let qq = qf(num, 5);
        let xs: Vec<Q> = (0..=n).map(|i| pow(&qq, d + i)).collect();
        prop_assert_eq!(h_q(r as i64, d, n, &qq), h_brute(r, &xs));
    }

    #[test]
    fn h_q_is_shifted_cal_p(r in -2i64..6, d in -2i64..3, n in 0i64..5) {
        let qq = qf(2, 3);
        let want = if r >= 0 { pow(&qq, r * d) * cal_p(n, &pow(&qq, r), &qq) } else { Q::zero() };
        prop_assert_eq!(h_q(r, d, n, &qq), want);
    }

    #[test]
    fn monomial_roundtrip((s, _) in with_points(1, 4)) {
        prop_assert_eq!(SymPoly::from_monomials(&s.to_monomials()).unwrap(), s);
    }

    #[test]
    fn power_sum_roundtrip((s, _) in with_points(1, 4)) {
        prop_assert_eq!(s.to_power_sums().to_sym(s.nvars), s);
    }

    #[test]
    fn text_roundtrip((s, _) in with_points(1, 4)) {
        prop_assert_eq!(SymPoly::parse(&s.to_string(), s.nvars).unwrap(), s);
    }

    #[test]
    fn eval_agrees_with_monomials((s, xs) in with_points(1, 4)) {
        prop_assert_eq!(s.eval(&xs), s.to_monomials().eval(&xs));
        let mut rev = xs.clone();
        rev.reverse();
        prop_assert_eq!(s.eval(&rev), s.eval(&xs));
        prop_assert_eq!(elementary(&xs)[0].clone(), Q::one());
    }

    #[test]
    fn complementary_transform_random_split(
        s in (1usize..5).prop_flat_map(|k| (Just(k), sympoly(k))),
        pts in prop::collection::btree_set(-9i64..10, 5),
        with_z in any::<bool>(),
        z in -4i64..5,
        shuffle in any::<u64>(),
    ) {
        let (k, s) = s;
        let l: Vec<Q> = pts.iter().map(|&v| q(v)).collect();
        // x has k points: k - 1 from L when z is present, otherwise k
        let from_l = if with_z { k - 1 } else { k };
        let ell = 5 - from_l;
        let mut idx: Vec<usize> = (0..5).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(shuffle);
        rand::seq::SliceRandom::shuffle(&mut idx[..], &mut rng);
        let x: Vec<Q> = idx[..from_l].iter().map(|&i| l[i].clone()).collect();
        let xp: Vec<Q> = idx[from_l..].iter().map(|&i| l[i].clone()).collect();
        let zq = q(z);
        let tr = complementary_transform(&s, &l, ell, with_z);
        let (lhs, rhs) = if with_z {
            let mut full = x.clone();
            full.push(zq.clone());
            (s.eval(&full), tr.eval(Some(&zq), &xp))
        } else {
            (s.eval(&x), tr.eval(None, &xp))
        };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn vandermonde_with_removed_power(seed in any::<u64>()) {
        prop_assert!(vandermonde_identity(&mut ChaCha8Rng::seed_from_u64(seed)));
    }

    #[test]
    fn removed_variable_elementary(seed in any::<u64>()) {
        prop_assert!(symmetric_removed(&mut ChaCha8Rng::seed_from_u64(seed)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn contour_split_identity(seed in any::<u64>(), ell in 1usize..4) {
        prop_assert!(contour_split(&mut ChaCha8Rng::seed_from_u64(seed), ell));
    }
}
