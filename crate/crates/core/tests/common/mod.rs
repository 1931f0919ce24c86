#![allow(dead_code)]

use e2rc::{BitMatrix, ConstructParams, E2rcCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The 8×8 structured parity part for M = 8.
pub const H2_M8: [[u8; 8]; 8] = [
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0],
    [1, 0, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 1, 0, 1, 0],
    [0, 0, 0, 1, 0, 1, 1, 1],
];

/// The 7×7 structured parity part for M = 7.
pub const H2_M7: [[u8; 7]; 7] = [
    [1, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0],
    [1, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 1, 0, 0],
    [0, 0, 1, 1, 0, 1, 0],
    [0, 0, 0, 0, 1, 1, 1],
];

pub fn h2_m8() -> BitMatrix {
    BitMatrix::from_dense(&H2_M8).unwrap()
}

pub fn h2_m7() -> BitMatrix {
    BitMatrix::from_dense(&H2_M7).unwrap()
}

pub fn bits(s: &str) -> Vec<bool> {
    s.chars().map(|c| c == '1').collect()
}

pub fn random_bits(rng: &mut impl Rng, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.random()).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Full-regime code with degree-3 systematic columns.
pub fn full_code(m: usize, k: usize, seed: u64) -> E2rcCode {
    E2rcCode::construct(&ConstructParams::new(m, k, seed).with_nv2(m - 1)).unwrap()
}

pub fn rate_half_code() -> E2rcCode {
    E2rcCode::construct(
        &ConstructParams::new(600, 600, 1).with_distribution(e2rc::dist::fixtures::rate_half()),
    )
    .unwrap()
}

pub fn rate_0_4_code() -> E2rcCode {
    E2rcCode::construct(
        &ConstructParams::new(1200, 800, 1).with_distribution(e2rc::dist::fixtures::rate_0_4()),
    )
    .unwrap()
}

/// Dense GF(2) product `M v`.
pub fn dense_mul(m: &BitMatrix, v: &[bool]) -> Vec<bool> {
    m.to_dense()
        .iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(false, |acc, (&a, &b)| acc ^ (a == 1 && b))
        })
        .collect()
}
