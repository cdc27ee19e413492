use super::mat::{self, Mat3};
use super::{reduce, vectors_of_norm, TernaryForm};
use crate::error::Result;

/// Candidate images per basis vector before the search gives up.
pub const VECTOR_CAP: usize = 10_000;

/// Integer matrices `T` with `Tᵗ M_f T = target`, at most `limit` of them,
/// sorted lexicographically by rows.
///
/// Column `j` of `T` ranges over the vectors of norm `target[j][j]`; pairs are
/// filtered by the off-diagonal entries. Complete because `f` is definite.
pub fn solve_gram(f: &TernaryForm, target: &Mat3, limit: usize) -> Result<Vec<Mat3>> {
    let mut cands = Vec::with_capacity(3);
    for j in 0..3 {
        let vs = vectors_of_norm(f, target[j][j], VECTOR_CAP)?;
        if vs.is_empty() {
            return Ok(Vec::new());
        }
        cands.push(vs);
    }
    let mut out = Vec::new();
    'outer: for u0 in &cands[0] {
        for u1 in &cands[1] {
            if f.bilinear(u0, u1) != target[0][1] {
                continue;
            }
            for u2 in &cands[2] {
                if f.bilinear(u0, u2) != target[0][2] || f.bilinear(u1, u2) != target[1][2] {
                    continue;
                }
                out.push(mat::from_columns(&[*u0, *u1, *u2]));
                if out.len() >= limit {
                    break 'outer;
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// A unimodular `U` with `Uᵗ M_f U = M_g`, if one exists.
pub fn find_isometry(f: &TernaryForm, g: &TernaryForm) -> Result<Option<Mat3>> {
    if f.det() != g.det() {
        return Ok(None);
    }
    let rf = reduce(f);
    let rg = reduce(g);
    // reduced diagonals are the successive minima
    if rf.form.diag() != rg.form.diag() {
        return Ok(None);
    }
    let found = solve_gram(f, rg.form.gram(), 1)?;
    Ok(found
        .into_iter()
        .next()
        .map(|t| mat::mul(&t, &mat::unimodular_inverse(&rg.transform))))
}

pub fn is_isometric(f: &TernaryForm, g: &TernaryForm) -> Result<bool> {
    Ok(find_isometry(f, g)?.is_some())
}
