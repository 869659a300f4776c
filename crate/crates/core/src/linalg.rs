//! Dense linear algebra over `F_p` for the tiny systems the derivation solver
//! produces. Matrices are row-major `Vec<Vec<u32>>` with entries in `0..p`.

use crate::subgroup::mod_inverse;

/// Reduces `rows` in place to reduced row echelon form and drops zero rows.
/// Returns the pivot column of each remaining row.
pub(crate) fn rref(rows: &mut Vec<Vec<u32>>, p: u32) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let p64 = p as u64;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else { continue };
        rows.swap(r, k);
        let inv = mod_inverse(rows[r][c], p) as u64;
        for e in rows[r].iter_mut() {
            *e = (*e as u64 * inv % p64) as u32;
        }
        let pivot = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || row[c] == 0 {
                continue;
            }
            let f = row[c] as u64;
            for (e, &q) in row.iter_mut().zip(&pivot) {
                *e = ((*e as u64 + (p64 - f) * q as u64) % p64) as u32;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : A x = 0}` for an `m × ncols` matrix `A`.
pub(crate) fn nullspace(a: &[Vec<u32>], ncols: usize, p: u32) -> Vec<Vec<u32>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m, p);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u32; ncols];
            v[f] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// Some solution of `A x = b`, or `None` when the system is inconsistent.
pub(crate) fn solve(a: &[Vec<u32>], b: &[u32], ncols: usize, p: u32) -> Option<Vec<u32>> {
    let mut m: Vec<Vec<u32>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs % p);
            r
        })
        .collect();
    let pivots = rref(&mut m, p);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![0u32; ncols];
    for (row, &pc) in m.iter().zip(&pivots) {
        x[pc] = row[ncols];
    }
    Some(x)
}

/// `Σ c_t · v_t` mod `p`.
pub(crate) fn combine(vectors: &[Vec<u32>], coeffs: &[u32], len: usize, p: u32) -> Vec<u32> {
    let mut out = vec![0u64; len];
    for (v, &c) in vectors.iter().zip(coeffs) {
        for (o, &e) in out.iter_mut().zip(v) {
            *o = (*o + c as u64 * e as u64) % p as u64;
        }
    }
    out.into_iter().map(|e| e as u32).collect()
}
