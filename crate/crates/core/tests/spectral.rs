mod common;

use filtropt::anf::{parse_anf, random_filter};
use filtropt::complexity::{linear_complexity_periodic, min_period};
use filtropt::field::FieldContext;
use filtropt::lfsr::LfsrGenerator;
use filtropt::spectral::{
    dft, lc_from_spectrum, period_from_spectrum, reconstruct, reconstruct_period, verify_subfield,
};
use filtropt::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `Σ z_n α^(-E n)` straight from the definition.
fn naive_coefficient(ctx: &FieldContext, z: &[u8], e: u64) -> u64 {
    let mut acc = ctx.zero();
    for (n, &bit) in z.iter().enumerate() {
        if bit == 1 {
            let t = ctx.pow(&ctx.alpha(), -((e * n as u64) as i128)).unwrap();
            acc = ctx.add(&acc, &t).unwrap();
        }
    }
    acc.bits()
}

#[test]
fn dft_matches_definition_l5() {
    let ctx = common::ctx(5);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let z: Vec<u8> = (0..31).map(|_| rng.gen_range(0..2)).collect();
        let s = dft(&z, &ctx).unwrap();
        for e in 0..31u64 {
            let naive = naive_coefficient(&ctx, &z, e);
            // leaders are reported with 0 written as 2^L - 1
            let leader = if e == 0 { 31 } else { filtropt::cosets::coset_of(e, 5).unwrap().leader() };
            if leader == e || e == 0 {
                let got = s.get(leader).map_or(0, |l| l.coefficient.bits());
                assert_eq!(got, naive, "E={e}");
            }
        }
    }
}

#[test]
fn arbitrary_sequences_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for l in [3u32, 4, 6, 8] {
        let ctx = common::ctx(l);
        let n = (1usize << l) - 1;
        for _ in 0..10 {
            let z: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let s = dft(&z, &ctx).unwrap();
            assert!(verify_subfield(&s));
            assert_eq!(reconstruct_period(&s).unwrap(), z);
            for i in [0u64, 1, n as u64 - 1, n as u64 + 2] {
                assert_eq!(reconstruct(&s, i).unwrap(), z[i as usize % n]);
            }
        }
    }
}

#[test]
fn filters_are_triangular_and_blahut_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for l in [4u32, 6, 7, 9] {
        let ctx = common::ctx(l);
        let w = LfsrGenerator::new(&ctx).unwrap().period_windows();
        for _ in 0..25 {
            let k = rng.gen_range(1..=l);
            let z = random_filter(l, k, &mut rng).unwrap().apply_windows(&w);
            let s = dft(&z, &ctx).unwrap();
            assert!(s.max_weight() <= k);
            assert_eq!(lc_from_spectrum(&s), linear_complexity_periodic(&z).unwrap() as u64);
            if !s.is_empty() {
                assert_eq!(period_from_spectrum(&s).unwrap(), min_period(&z) as u64);
            }
        }
    }
}

#[test]
fn identity_filter_has_one_line() {
    let ctx = common::ctx(3);
    let w = LfsrGenerator::new(&ctx).unwrap().period_windows();
    let z = parse_anf("x0", 3).unwrap().apply_windows(&w);
    let s = dft(&z, &ctx).unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(lc_from_spectrum(&s), 3);
    assert_eq!(period_from_spectrum(&s).unwrap(), 7);
}

#[test]
fn spectrum_is_linear() {
    let ctx = common::ctx(6);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let a: Vec<u8> = (0..63).map(|_| rng.gen_range(0..2)).collect();
    let b: Vec<u8> = (0..63).map(|_| rng.gen_range(0..2)).collect();
    let ab: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
    let (sa, sb, sab) = (dft(&a, &ctx).unwrap(), dft(&b, &ctx).unwrap(), dft(&ab, &ctx).unwrap());
    for c in filtropt::cosets::all_cosets(6).unwrap() {
        let get = |s: &filtropt::spectral::Spectrum| s.get(c.leader()).map_or(0, |l| l.coefficient.bits());
        assert_eq!(get(&sab), get(&sa) ^ get(&sb));
    }
}

#[test]
fn wrong_length_and_empty() {
    let ctx = common::ctx(4);
    assert!(matches!(dft(&[1, 0, 1], &ctx), Err(Error::LengthMismatch { .. })));
    let s = dft(&[0; 15], &ctx).unwrap();
    assert!(s.is_empty());
    assert!(matches!(period_from_spectrum(&s), Err(Error::EmptySpectrum)));
}
