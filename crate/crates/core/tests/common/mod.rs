#![allow(dead_code)]

use filtropt::field::{table::PolyTable, FieldContext};

pub fn ctx(l: u32) -> FieldContext {
    FieldContext::from_table(&PolyTable::embedded(), l).expect("table entry")
}

/// Does some LFSR of length `l` (connection taps c_1..c_l, c_l may be 0)
/// generate `s`? Decided by trying every tap vector.
pub fn generated_by_enumeration(s: &[u8], l: usize) -> bool {
    (0u64..1 << l).any(|c| {
        (l..s.len()).all(|i| {
            let fb = (1..=l).filter(|j| c >> (j - 1) & 1 == 1).fold(0, |acc, j| acc ^ s[i - j]);
            fb == s[i]
        })
    })
}

/// Same question as a linear system over GF(2) in the taps, solved by
/// Gaussian elimination. `l <= 62`.
pub fn generated_by_linear_system(s: &[u8], l: usize) -> bool {
    let rhs = 1u64 << l;
    let mut rows: Vec<u64> = (l..s.len())
        .map(|i| {
            let mut row = if s[i] == 1 { rhs } else { 0 };
            for j in 1..=l {
                if s[i - j] == 1 {
                    row |= 1 << (j - 1);
                }
            }
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..l {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r] >> col & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && *row >> col & 1 == 1 {
                *row ^= pivot;
            }
        }
        rank += 1;
    }
    rows.iter().all(|&r| r != rhs)
}

/// Length of the shortest LFSR generating `s`, without Berlekamp-Massey.
pub fn shortest_lfsr(s: &[u8]) -> usize {
    (0..=s.len())
        .find(|&l| {
            if l <= 12 {
                generated_by_enumeration(s, l)
            } else {
                generated_by_linear_system(s, l)
            }
        })
        .expect("length n always works")
}
