use super::mat::{self, Mat3, IDENTITY};
use super::TernaryForm;

/// A reduced form together with the transform that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub form: TernaryForm,
    /// `Uᵗ M_f U = M_g`, `det U = ±1`.
    pub transform: Mat3,
}

/// Minkowski reduction conditions for a ternary Gram matrix.
pub fn is_reduced(g: &Mat3) -> bool {
    let (a, b, c) = (g[0][0], g[1][1], g[2][2]);
    let (r, s, t) = (g[0][1], g[0][2], g[1][2]);
    if !(a <= b && b <= c) {
        return false;
    }
    if 2 * r.abs() > a || 2 * s.abs() > a || 2 * t.abs() > b {
        return false;
    }
    for e1 in [-1i64, 1] {
        for e2 in [-1i64, 1] {
            if a + b + 2 * (e1 * e2 * r + e1 * s + e2 * t) < 0 {
                return false;
            }
        }
    }
    true
}

/// Reduces `f` by size reduction, sorting and the three-term neighbour step.
/// Returns `f` itself with the identity transform when it is already reduced.
pub fn reduce(f: &TernaryForm) -> Reduction {
    let m = f.gram();
    let mut u = IDENTITY;
    if is_reduced(m) {
        return Reduction {
            form: *f,
            transform: u,
        };
    }
    loop {
        let g = mat::congruent(m, &u);

        // sort basis by norm
        let mut idx = [0usize, 1, 2];
        idx.sort_by_key(|&i| g[i][i]);
        if idx != [0, 1, 2] {
            let cols = [
                mat::column(&u, idx[0]),
                mat::column(&u, idx[1]),
                mat::column(&u, idx[2]),
            ];
            u = mat::from_columns(&cols);
            continue;
        }

        // pairwise size reduction
        let mut changed = false;
        'pairs: for j in 1..3 {
            for i in 0..j {
                let (gii, gij) = (g[i][i], g[i][j]);
                if 2 * gij.abs() > gii {
                    let q = (2 * gij + gii).div_euclid(2 * gii);
                    for row in u.iter_mut() {
                        row[j] -= q * row[i];
                    }
                    changed = true;
                    break 'pairs;
                }
            }
        }
        if changed {
            continue;
        }

        // b3 ± b1 ± b2 shorter than b3
        let (a, b) = (g[0][0], g[1][1]);
        let (r, s, t) = (g[0][1], g[0][2], g[1][2]);
        let mut best: Option<(i64, i64, i64)> = None;
        for e1 in [-1i64, 1] {
            for e2 in [-1i64, 1] {
                let delta = a + b + 2 * (e1 * e2 * r + e1 * s + e2 * t);
                if delta < 0 && best.is_none_or(|(d, _, _)| delta < d) {
                    best = Some((delta, e1, e2));
                }
            }
        }
        if let Some((_, e1, e2)) = best {
            for row in u.iter_mut() {
                row[2] += e1 * row[0] + e2 * row[1];
            }
            continue;
        }
        break;
    }
    let form = f.transform(&u);
    debug_assert!(is_reduced(form.gram()));
    Reduction { form, transform: u }
}
