mod common;

use std::collections::HashSet;

use filtropt::complexity::{berlekamp_massey, min_period};
use filtropt::lfsr::{trace_representation, BitWindow, LfsrGenerator};

#[test]
fn m_sequence_properties() {
    for l in 2..=14u32 {
        let ctx = common::ctx(l);
        let g = LfsrGenerator::new(&ctx).unwrap();
        let seq = g.period_bits();
        let n = (1usize << l) - 1;
        assert_eq!(seq.len(), n);
        assert_eq!(min_period(&seq), n);
        assert_eq!(seq.iter().filter(|&&b| b == 1).count(), 1 << (l - 1), "balance L={l}");

        let bm = berlekamp_massey(&g.output(2 * l as usize));
        assert_eq!(bm.lc, l as usize);
        // connection polynomial is the reciprocal of the modulus
        let m = ctx.modulus_bits();
        let reciprocal: u128 = (0..=l).filter(|&i| m >> i & 1 == 1).map(|i| 1u128 << (l - i)).sum();
        assert_eq!(bm.connection_poly.to_u128(), Some(reciprocal));
        assert!(g.trace_consistency());
    }
}

#[test]
fn windows_enumerate_nonzero_states() {
    for l in 2..=12u32 {
        let g = LfsrGenerator::new(&common::ctx(l)).unwrap();
        let w = g.period_windows();
        let distinct: HashSet<u64> = w.iter().copied().collect();
        assert_eq!(distinct.len(), (1 << l) - 1);
        assert!(!distinct.contains(&0));
        for n in [0u64, 1, 5, (1 << l) - 2, 1 << l, 3 << l] {
            assert_eq!(g.window(n).bits(), w[(n % ((1 << l) - 1)) as usize]);
        }
    }
}

#[test]
fn seeds_give_rotations() {
    let ctx = common::ctx(7);
    let base = LfsrGenerator::new(&ctx).unwrap().period_bits();
    let mut doubled = base.clone();
    doubled.extend_from_slice(&base);
    for seed in [1u64, 2, 0x55, 0x7f] {
        let g = LfsrGenerator::with_seed(&ctx, seed).unwrap();
        let s = g.period_bits();
        assert!(doubled.windows(s.len()).any(|w| w == s.as_slice()), "seed {seed:#x}");
        assert_eq!(BitWindow::from_bits(&s[..7]).bits(), seed);
        let c = trace_representation(&ctx, &s).unwrap();
        assert_eq!(c, g.phase());
    }
    assert!(LfsrGenerator::with_seed(&ctx, 0).is_err());
    assert!(LfsrGenerator::with_seed(&ctx, 1 << 7).is_err());
}

#[test]
fn stepping_matches_output() {
    let ctx = common::ctx(9);
    let mut g = LfsrGenerator::with_seed(&ctx, 0x123).unwrap();
    let out = g.output(1000);
    assert_eq!(g.take_bits(600), out[..600]);
    assert_eq!(g.take_bits(400), out[600..]);
    g.reset();
    assert_eq!(g.next_bit(), out[0]);
}

#[test]
fn non_trace_sequence_is_rejected() {
    let ctx = common::ctx(5);
    let mut s = LfsrGenerator::new(&ctx).unwrap().period_bits();
    s[10] ^= 1;
    assert!(trace_representation(&ctx, &s).is_none());
}
