//! Exact rank over a prime field.

use super::sparse::CsrMatrix;

/// The Mersenne prime 2³¹ − 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn to_field(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

/// Rank of an integer matrix over GF(p) by sparse row elimination.
///
/// Rows are reduced one at a time against pivot rows normalized to a leading
/// one; a row that survives becomes a new pivot. `p` must be below 2³².
pub fn gf_rank(a: &CsrMatrix<i64>, p: u64) -> usize {
    assert!(p > 2 && p < (1 << 32), "prime must fit in 32 bits");
    let mut pivots: Vec<Option<Vec<(usize, u64)>>> = vec![None; a.ncols()];
    let mut rank = 0;
    let mut scratch: Vec<(usize, u64)> = Vec::new();

    // short rows first keeps fill low
    let mut order: Vec<usize> = (0..a.nrows()).collect();
    order.sort_by_key(|&r| a.row_len(r));

    for r in order {
        let mut row: Vec<(usize, u64)> = a
            .row(r)
            .map(|(c, v)| (c, to_field(v, p)))
            .filter(|&(_, v)| v != 0)
            .collect();
        while let Some(&(lead, lv)) = row.first() {
            let Some(piv) = &pivots[lead] else {
                let inv = inv_mod(lv, p);
                for e in &mut row {
                    e.1 = e.1 * inv % p;
                }
                pivots[lead] = Some(row);
                rank += 1;
                break;
            };
            // row ← row − lv·piv, both sorted by column
            scratch.clear();
            let (mut i, mut j) = (0, 0);
            while i < row.len() || j < piv.len() {
                let take_row = j >= piv.len() || (i < row.len() && row[i].0 < piv[j].0);
                let take_piv = i >= row.len() || (j < piv.len() && piv[j].0 < row[i].0);
                if take_row {
                    scratch.push(row[i]);
                    i += 1;
                } else if take_piv {
                    scratch.push((piv[j].0, (p - lv * piv[j].1 % p) % p));
                    j += 1;
                } else {
                    let v = (row[i].1 + p - lv * piv[j].1 % p) % p;
                    if v != 0 {
                        scratch.push((row[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            std::mem::swap(&mut row, &mut scratch);
        }
    }
    rank
}
