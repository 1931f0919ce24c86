mod common;

use common::{bits, h2_m7, h2_m8};
use e2rc::encode::{
    encode_back_substitution, encode_by_erasure, encode_sliding_window, encode_sliding_window_with,
    syndrome_target, window_coefficients, ShiftRegister,
};
use e2rc::{build_h2, compute_profile, BitMatrix, E2rcCode, EncodePlan, Error};
use proptest::prelude::*;

fn full(m: usize) -> e2rc::E2rcProfile {
    compute_profile(m, m - 1, 0).unwrap()
}

/// Checks every applicable encoder on `count` random messages.
fn cross_check(code: &E2rcCode, count: usize, seed: u64) {
    let mut rng = common::rng(seed);
    let plan = EncodePlan::build(&code.h2()).unwrap();
    for _ in 0..count {
        let m = common::random_bits(&mut rng, code.k());
        let s = code.syndrome_target(&m).unwrap();
        let back = encode_back_substitution(&code.h2(), &s).unwrap();
        let window = encode_sliding_window(code.profile(), &s).unwrap();
        let (erasure, iterations) = encode_by_erasure(code.h(), code.profile(), &m).unwrap();
        assert_eq!(window, back);
        assert_eq!(erasure, back);
        assert_eq!(plan.encode(&s).unwrap(), back);
        assert!(iterations <= code.profile().depth() + 1);
        let c: Vec<bool> = m.iter().copied().chain(back).collect();
        assert!(code.h().is_codeword(&c));
    }
}

#[test]
fn syndrome_target_examples() {
    let code = common::full_code(7, 3, 1);
    let h1 = code.h1();
    assert_eq!(syndrome_target(&h1, &[false; 3]).unwrap(), vec![false; 7]);
    for j in 0..3 {
        let mut e = vec![false; 3];
        e[j] = true;
        let s = syndrome_target(&h1, &e).unwrap();
        assert_eq!((0..7).filter(|&i| s[i]).collect::<Vec<_>>(), h1.col(j));
    }
    let code = common::rate_half_code();
    let mut rng = common::rng(3);
    for _ in 0..20 {
        let m = common::random_bits(&mut rng, 600);
        let s = syndrome_target(&code.h1(), &m).unwrap();
        assert_eq!(s, common::dense_mul(&code.h1(), &m));
        assert_eq!(s, code.syndrome_target(&m).unwrap());
    }
    assert!(syndrome_target(&h1, &[false; 2]).is_err());
}

#[test]
fn back_substitution_examples() {
    let p = encode_back_substitution(&h2_m7(), &bits("1011001")).unwrap();
    assert_eq!(p, bits("1010010"));
    assert_eq!(
        encode_back_substitution(&h2_m8(), &[false; 8]).unwrap(),
        vec![false; 8]
    );
    let mut e8 = vec![false; 8];
    e8[7] = true;
    assert_eq!(encode_back_substitution(&h2_m8(), &e8).unwrap(), e8);
}

#[test]
fn back_substitution_rejects_non_triangular() {
    let upper = BitMatrix::from_dense(&[[1u8, 1], [0, 1]]).unwrap();
    assert!(matches!(
        encode_back_substitution(&upper, &[true, false]),
        Err(Error::NotTriangular(_))
    ));
}

#[test]
fn window_coefficients_for_m7() {
    let p = full(7);
    let g = |t| window_coefficients(&p, t).unwrap().g;
    assert_eq!(g(4), [true, false, false]);
    assert_eq!(g(6), [false, true, true]);
    assert_eq!(g(0), [false, false, false]);
    // g0 = u(t−3) − u(t−6), g1 = u(t−5), g2 = u(t−6).
    for t in 0..7usize {
        let expected = [(3..6).contains(&t), t >= 5, t >= 6];
        assert_eq!(g(t), expected, "t={t}");
    }
}

#[test]
fn window_coefficients_need_full_regime() {
    let low = compute_profile(1200, 1061, 800).unwrap();
    assert!(matches!(
        window_coefficients(&low, 0),
        Err(Error::RegimeMismatch)
    ));
    assert!(encode_sliding_window(&low, &[false; 1200]).is_err());
}

#[test]
fn window_taps_reproduce_rows() {
    for m in [2, 3, 7, 8, 13, 64, 100, 600, 1000] {
        let p = full(m);
        let h2 = build_h2(&p);
        let w = p.window_size();
        for t in 0..m {
            let taps = window_coefficients(&p, t).unwrap();
            let mut support: Vec<usize> = taps
                .g
                .iter()
                .enumerate()
                .filter(|(_, &g)| g)
                .map(|(i, _)| t + i - w)
                .collect();
            support.push(t);
            support.sort_unstable();
            assert_eq!(support, h2.row(t), "M={m} t={t}");
            let allowed: Vec<usize> = (1..=p.depth()).map(|k| w - p.gamma(k)).collect();
            assert!(taps
                .g
                .iter()
                .enumerate()
                .all(|(i, &g)| !g || allowed.contains(&i)));
        }
    }
}

#[test]
fn sliding_window_examples() {
    assert_eq!(
        encode_sliding_window(&full(7), &bits("1011001")).unwrap(),
        bits("1010010")
    );
    assert_eq!(
        encode_sliding_window(&full(8), &[false; 8]).unwrap(),
        vec![false; 8]
    );
}

#[test]
fn sliding_window_uses_exactly_gamma1_cells() {
    let p = full(600);
    assert!(encode_sliding_window_with(&p, &[false; 600], &mut ShiftRegister::new(301)).is_err());
    let mut register = ShiftRegister::new(300);
    assert_eq!(register.len(), p.gamma(1));
    let mut rng = common::rng(4);
    let s = common::random_bits(&mut rng, 600);
    let p_bits = encode_sliding_window_with(&p, &s, &mut register).unwrap();
    // After the last row the register holds the final γ(1) parities.
    for i in 0..300 {
        assert_eq!(register.cell(i), p_bits[300 + i]);
    }
}

#[test]
fn erasure_encoding_on_m7() {
    let code = common::full_code(7, 3, 1);
    for bits in 0..8u8 {
        let m: Vec<bool> = (0..3).map(|i| bits >> i & 1 == 1).collect();
        let (p, iterations) = encode_by_erasure(code.h(), code.profile(), &m).unwrap();
        assert_eq!(iterations, 4);
        let s = code.syndrome_target(&m).unwrap();
        assert_eq!(p, encode_back_substitution(&code.h2(), &s).unwrap());
        if bits == 0 {
            assert_eq!(p, vec![false; 7]);
        }
    }
}

#[test]
fn encoders_agree_on_small_fixtures() {
    cross_check(&common::full_code(7, 3, 1), 200, 1);
    cross_check(&common::full_code(8, 4, 1), 200, 2);
    cross_check(&common::full_code(64, 64, 3), 200, 3);
}

#[test]
fn encoders_agree_on_rate_half_code() {
    cross_check(&common::rate_half_code(), 100, 4);
}

#[test]
fn full_regime_plan_is_pure_substitution() {
    let plan = EncodePlan::build(&h2_m8()).unwrap();
    assert_eq!(plan.inactive_count(), 0);
    let mut rng = common::rng(5);
    for _ in 0..50 {
        let s = common::random_bits(&mut rng, 8);
        assert_eq!(
            plan.encode(&s).unwrap(),
            encode_back_substitution(&h2_m8(), &s).unwrap()
        );
    }
}

#[test]
fn low_rate_plan_encodes_codewords() {
    let code = common::rate_0_4_code();
    let plan = EncodePlan::build(&code.h2()).unwrap();
    assert!(plan.inactive_count() <= code.profile().l());
    let mut rng = common::rng(6);
    for _ in 0..50 {
        let m = common::random_bits(&mut rng, 800);
        let p = plan.encode(&code.syndrome_target(&m).unwrap()).unwrap();
        let c: Vec<bool> = m.iter().copied().chain(p).collect();
        assert!(code.h().is_codeword(&c));
        assert_eq!(code.encode(&m).unwrap(), c);
    }
}

#[test]
fn rank_deficient_plan_reports_witness() {
    let h =
        BitMatrix::from_dense(&[[1u8, 1, 0, 0], [0, 1, 1, 0], [1, 0, 1, 0], [0, 0, 1, 1]]).unwrap();
    let Err(Error::Singular { witness }) = EncodePlan::build(&h) else {
        panic!("singular matrix accepted");
    };
    let mut sum = vec![false; 4];
    for &r in &witness {
        for &c in h.row(r) {
            sum[c] ^= true;
        }
    }
    assert!(!witness.is_empty());
    assert_eq!(sum, vec![false; 4]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn structured_encoders_agree(m in 2usize..400, seed in any::<u64>()) {
        let p = full(m);
        let h2 = build_h2(&p);
        let mut rng = common::rng(seed);
        let s = common::random_bits(&mut rng, m);
        let back = encode_back_substitution(&h2, &s).unwrap();
        prop_assert_eq!(h2.mod2_syndrome(&back).unwrap(), s.clone());
        prop_assert_eq!(encode_sliding_window(&p, &s).unwrap(), back.clone());
        prop_assert_eq!(EncodePlan::build(&h2).unwrap().encode(&s).unwrap(), back);
    }

    #[test]
    fn plan_solves_random_invertible_systems(n in 2usize..24, seed in any::<u64>()) {
        // Unit lower-triangular times a random permutation of columns is invertible.
        let mut rng = common::rng(seed);
        let mut cols: Vec<Vec<usize>> = (0..n)
            .map(|c| {
                let mut rows = vec![c];
                rows.extend((c + 1..n).filter(|_| rand::Rng::random_bool(&mut rng, 0.3)));
                rows
            })
            .collect();
        rand::seq::SliceRandom::shuffle(cols.as_mut_slice(), &mut rng);
        let h = BitMatrix::from_columns(n, cols).unwrap();
        let plan = EncodePlan::build(&h).unwrap();
        let s = common::random_bits(&mut rng, n);
        prop_assert_eq!(h.mod2_syndrome(&plan.encode(&s).unwrap()).unwrap(), s);
    }
}
