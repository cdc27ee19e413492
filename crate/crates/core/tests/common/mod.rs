//! Naive oracles and property bodies shared by the integration targets.
#![allow(dead_code)]

use proptest::prelude::*;

use triquad::escalation::{criterion_check, Exception};
use triquad::goodvec::{b_set, r_set};
use triquad::qforms::{self, Mat3, TernaryForm};
use triquad::trisums::{odd_square_sieve, sieve, TriangularSum};

/// Values `Σ α_i T(x_i) ≤ bound` by direct enumeration.
pub fn brute_tri(coeffs: &[u64], bound: u64) -> Vec<bool> {
    fn go(coeffs: &[u64], acc: u64, bound: u64, out: &mut Vec<bool>) {
        let Some((&a, rest)) = coeffs.split_first() else {
            out[acc as usize] = true;
            return;
        };
        let mut x = 0u64;
        while acc + a * (x * (x + 1) / 2) <= bound {
            go(rest, acc + a * (x * (x + 1) / 2), bound, out);
            x += 1;
        }
    }
    let mut out = vec![false; bound as usize + 1];
    go(coeffs, 0, bound, &mut out);
    out
}

/// `n ≤ bound` with `8n + Σα = Σ α_i y_i²` for odd positive `y_i`.
pub fn brute_odd(coeffs: &[u64], bound: u64) -> Vec<bool> {
    let shift: u64 = coeffs.iter().sum();
    let top = 8 * bound + shift;
    fn go(coeffs: &[u64], acc: u64, top: u64, hits: &mut Vec<bool>) {
        let Some((&a, rest)) = coeffs.split_first() else {
            hits[acc as usize] = true;
            return;
        };
        let mut y = 1u64;
        while acc + a * y * y <= top {
            go(rest, acc + a * y * y, top, hits);
            y += 2;
        }
    }
    let mut hits = vec![false; top as usize + 1];
    go(coeffs, 0, top, &mut hits);
    (0..=bound)
        .map(|n| hits[(8 * n + shift) as usize])
        .collect()
}

pub fn unrepresented(table: &[bool]) -> Vec<u64> {
    table
        .iter()
        .enumerate()
        .filter(|(_, &b)| !b)
        .map(|(i, _)| i as u64)
        .collect()
}

/// Nondecreasing coefficient lists with `1 ≤ k ≤ k_max` and entries `≤ a_max`.
pub fn multisets(k_max: usize, a_max: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u64>> = (1..=a_max).map(|a| vec![a]).collect();
    while let Some(v) = stack.pop() {
        if v.len() < k_max {
            for a in *v.last().unwrap()..=a_max {
                let mut w = v.clone();
                w.push(a);
                stack.push(w);
            }
        }
        out.push(v);
    }
    out.sort();
    out
}

fn quad(g: &Mat3, v: &[i64; 3]) -> i64 {
    (0..3)
        .map(|i| (0..3).map(|j| g[i][j] * v[i] * v[j]).sum::<i64>())
        .sum()
}

fn det(g: &Mat3) -> i64 {
    g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
        - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
}

/// Every `v` with `vᵗ G v = norm`: a box search over `x, y` sized from the
/// cofactors, then the quadratic in `z` solved exactly.
pub fn vectors_of_norm(g: &Mat3, norm: i64) -> Vec<[i64; 3]> {
    let d = det(g) as f64;
    let cof = [
        g[1][1] * g[2][2] - g[1][2] * g[2][1],
        g[0][0] * g[2][2] - g[0][2] * g[2][0],
    ];
    let r: Vec<i64> = cof
        .iter()
        .map(|&c| ((norm as f64) * c as f64 / d).sqrt().floor() as i64 + 1)
        .collect();
    let c = g[2][2] as i128;
    let mut out = Vec::new();
    for x in -r[0]..=r[0] {
        for y in -r[1]..=r[1] {
            let (x, y) = (x as i128, y as i128);
            let b = g[0][2] as i128 * x + g[1][2] as i128 * y;
            let rest =
                g[0][0] as i128 * x * x + g[1][1] as i128 * y * y + 2 * g[0][1] as i128 * x * y
                    - norm as i128;
            let disc = b * b - c * rest;
            if disc < 0 {
                continue;
            }
            let s = (disc as f64).sqrt() as i128;
            let Some(s) = (s - 2..=s + 2).find(|&t| t >= 0 && t * t == disc) else {
                continue;
            };
            let mut zs = vec![-b + s, -b - s];
            zs.dedup();
            for num in zs {
                if num % c == 0 {
                    out.push([x as i64, y as i64, (num / c) as i64]);
                }
            }
        }
    }
    out.sort();
    out
}

/// Representation counts `r(n)` for `n ≤ bound`.
pub fn theta(g: &Mat3, bound: i64) -> Vec<usize> {
    (0..=bound).map(|n| vectors_of_norm(g, n).len()).collect()
}

fn bil(g: &Mat3, u: &[i64; 3], v: &[i64; 3]) -> i64 {
    (0..3)
        .map(|i| (0..3).map(|j| g[i][j] * u[i] * v[j]).sum::<i64>())
        .sum()
}

/// Every `T` with `Tᵗ M_f T = d² M_g`, column by column.
pub fn brute_scaling_isometries(f: &Mat3, g: &Mat3, d: i64) -> Vec<Mat3> {
    let cols: Vec<Vec<[i64; 3]>> = (0..3)
        .map(|j| vectors_of_norm(f, d * d * g[j][j]))
        .collect();
    let mut out = Vec::new();
    for c0 in &cols[0] {
        for c1 in &cols[1] {
            if bil(f, c0, c1) != d * d * g[0][1] {
                continue;
            }
            for c2 in &cols[2] {
                if bil(f, c0, c2) == d * d * g[0][2] && bil(f, c1, c2) == d * d * g[1][2] {
                    out.push([
                        [c0[0], c1[0], c2[0]],
                        [c0[1], c1[1], c2[1]],
                        [c0[2], c1[2], c2[2]],
                    ]);
                }
            }
        }
    }
    out
}

/// `B_f(g, d, a)` straight from the definition.
pub fn brute_b_set(f: &Mat3, g: &Mat3, d: i64, a: i64) -> Vec<[i64; 3]> {
    brute_b_set_with(&brute_scaling_isometries(f, g, d), g, d, a)
}

pub fn brute_b_set_with(isos: &[Mat3], g: &Mat3, d: i64, a: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                let v = [x, y, z];
                if quad(g, &v).rem_euclid(d) != a {
                    continue;
                }
                let good = isos.iter().any(|t| {
                    (0..3).all(|i| (0..3).map(|j| t[i][j] * v[j]).sum::<i64>().rem_euclid(d) == 0)
                });
                if !good {
                    out.push(v);
                }
            }
        }
    }
    out
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> [[i128; 3]; 3] {
    let mut c = [[0i128; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] as i128 * b[k][j] as i128).sum();
        }
    }
    c
}

fn transpose(a: &Mat3) -> Mat3 {
    let mut t = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = a[j][i];
        }
    }
    t
}

/// `Uᵗ G U` computed without the library.
pub fn congruent(g: &Mat3, u: &Mat3) -> Mat3 {
    let gu = mat_mul(g, u);
    let ut = transpose(u);
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| ut[i][k] as i128 * gu[k][j]).sum::<i128>() as i64;
        }
    }
    out
}

pub fn mat_det(a: &Mat3) -> i64 {
    det(a)
}

// ---------------------------------------------------------------------------
// strategies

/// Coefficient lists of length `1..=k_max` with entries in `1..=a_max`, sorted.
pub fn sum_strategy(k_max: usize, a_max: u64) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1..=a_max, 1..=k_max).prop_map(|mut v| {
        v.sort_unstable();
        v
    })
}

/// Positive definite Gram matrices with small entries.
pub fn form_strategy() -> impl Strategy<Value = TernaryForm> {
    (
        1i64..=6,
        1i64..=8,
        1i64..=12,
        -3i64..=3,
        -3i64..=3,
        -3i64..=3,
    )
        .prop_filter_map("positive definite", |(a, b, c, x, y, z)| {
            TernaryForm::new([[a, x, y], [x, b, z], [y, z, c]]).ok()
        })
}

/// Products of a few elementary unimodular moves.
pub fn unimodular_strategy() -> impl Strategy<Value = Mat3> {
    prop::collection::vec((0usize..3, 0usize..3, -2i64..=2, any::<bool>()), 0..6).prop_map(
        |moves| {
            let mut u: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
            for (i, j, k, neg) in moves {
                let mut e: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
                if i != j {
                    e[i][j] = k;
                }
                if neg {
                    e[j][j] = -1;
                }
                let p = mat_mul(&u, &e);
                u = p.map(|r| r.map(|x| x as i64));
            }
            u
        },
    )
}

// ---------------------------------------------------------------------------
// property bodies

pub type Check = Result<(), String>;

/// The library sieve, the triangular enumeration and the odd-square
/// enumeration agree on `[0, bound]`.
pub fn prop_equivalence(coeffs: &[u64], bound: u64) -> Check {
    let sum = TriangularSum::new(coeffs.to_vec()).map_err(|e| e.to_string())?;
    let sv = sieve(&sum, bound).map_err(|e| e.to_string())?;
    let tri = brute_tri(coeffs, bound);
    let odd = brute_odd(coeffs, bound);
    let shift: u64 = coeffs.iter().sum();
    let lib_odd = odd_square_sieve(coeffs, 8 * bound + shift).map_err(|e| e.to_string())?;
    for n in 0..=bound {
        let a = sv.contains(n);
        let b = tri[n as usize];
        let c = odd[n as usize];
        let d = lib_odd.get((8 * n + shift) as usize);
        if !(a == b && b == c && c == d) {
            return Err(format!(
                "{coeffs:?} n={n}: sieve={a} brute={b} odd={c} lib_odd={d}"
            ));
        }
    }
    Ok(())
}

pub fn prop_reduction(f: &TernaryForm, u: &Mat3) -> Check {
    let g = TernaryForm::new(congruent(f.gram(), u)).map_err(|e| e.to_string())?;
    let rf = qforms::reduce(f);
    if !qforms::is_reduced(rf.form.gram()) {
        return Err(format!("{f}: reduction {} is not reduced", rf.form));
    }
    if congruent(f.gram(), &rf.transform) != *rf.form.gram() || mat_det(&rf.transform).abs() != 1 {
        return Err(format!("{f}: bad reduction transform {:?}", rf.transform));
    }
    let rg = qforms::reduce(&g);
    if rf.form.diag() != rg.form.diag() {
        return Err(format!(
            "{f} ~ {g}: reduced diagonals {:?} vs {:?}",
            rf.form.diag(),
            rg.form.diag()
        ));
    }
    match qforms::find_isometry(f, &g).map_err(|e| e.to_string())? {
        Some(w) if congruent(f.gram(), &w) == *g.gram() && mat_det(&w).abs() == 1 => Ok(()),
        Some(w) => Err(format!("{f} ~ {g}: returned {w:?} is not an isometry")),
        None => Err(format!("{f} ~ {g}: isometry not found")),
    }
}

/// Classes of a genus are pairwise non-isometric, share the genus, and
/// every class regenerates the same partition.
pub fn prop_genus_partition(f: &TernaryForm) -> Check {
    let gs = qforms::genus_classes(f).map_err(|e| e.to_string())?;
    let cs = &gs.classes;
    if !qforms::is_isometric(&cs[0], f).map_err(|e| e.to_string())? {
        return Err(format!("{f}: first class is not f"));
    }
    for i in 0..cs.len() {
        if !qforms::same_genus(f, &cs[i]) {
            return Err(format!("{f}: {} not in genus", cs[i]));
        }
        for j in i + 1..cs.len() {
            if qforms::is_isometric(&cs[i], &cs[j]).map_err(|e| e.to_string())? {
                return Err(format!("{f}: classes {} and {} isometric", cs[i], cs[j]));
            }
        }
    }
    for c in cs.iter().skip(1) {
        let other = qforms::genus_classes(c).map_err(|e| e.to_string())?;
        if other.class_count() != cs.len() {
            return Err(format!(
                "{f}: genus of {c} has {} classes, not {}",
                other.class_count(),
                cs.len()
            ));
        }
    }
    Ok(())
}

/// The criterion agrees with a sieve to `bound`. The sieve itself is held
/// to the enumerations by [`prop_equivalence`].
pub fn prop_criterion(coeffs: &[u64], m: u64, bound: u64) -> Check {
    let sum = TriangularSum::new(coeffs.to_vec()).map_err(|e| e.to_string())?;
    let m = Exception::new(m).map_err(|e| e.to_string())?;
    let crit = criterion_check(&sum, m).map_err(|e| e.to_string())?;
    let missing: Vec<u64> = sieve(&sum, bound)
        .map_err(|e| e.to_string())?
        .unrepresented()
        .take(5)
        .collect();
    if crit != (missing == [m.get()]) {
        return Err(format!(
            "{coeffs:?} m={m}: criterion={crit} but misses {:?}",
            &missing[..missing.len().min(5)]
        ));
    }
    Ok(())
}

/// `R(g, d, a)` and `B_f(g, d, a)` are closed under `v ↦ −v`.
pub fn prop_negation(f: &TernaryForm, g: &TernaryForm, d: u64, a: u64) -> Check {
    let r = r_set(g, d, a).map_err(|e| e.to_string())?;
    let b = b_set(f, g, d, a).map_err(|e| e.to_string())?;
    if !r.is_negation_closed() || !b.is_negation_closed() {
        return Err(format!("{f}, {g}, d={d}, a={a}: not closed under negation"));
    }
    Ok(())
}
