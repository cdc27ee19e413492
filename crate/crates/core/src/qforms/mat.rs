//! Exact 3×3 integer matrix arithmetic. Products go through `i128`.

pub type Mat3 = [[i64; 3]; 3];

pub const IDENTITY: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

pub fn det(m: &Mat3) -> i128 {
    let m = |i: usize, j: usize| m[i][j] as i128;
    m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
        - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
}

pub fn mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let s: i128 = (0..3).map(|k| a[i][k] as i128 * b[k][j] as i128).sum();
            out[i][j] = i64::try_from(s).expect("matrix entry overflow");
        }
    }
    out
}

pub fn transpose(a: &Mat3) -> Mat3 {
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

/// `Uᵗ M U`.
pub fn congruent(m: &Mat3, u: &Mat3) -> Mat3 {
    mul(&transpose(u), &mul(m, u))
}

/// Adjugate, so that `m · adj(m) = det(m) · I`.
pub fn adjugate(m: &Mat3) -> Mat3 {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| {
        m[r0][c0] as i128 * m[r1][c1] as i128 - m[r0][c1] as i128 * m[r1][c0] as i128
    };
    let cof = [
        [c(1, 2, 1, 2), -c(1, 2, 0, 2), c(1, 2, 0, 1)],
        [-c(0, 2, 1, 2), c(0, 2, 0, 2), -c(0, 2, 0, 1)],
        [c(0, 1, 1, 2), -c(0, 1, 0, 2), c(0, 1, 0, 1)],
    ];
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = cof[j][i] as i64;
        }
    }
    out
}

/// Inverse of a unimodular matrix. Panics if `det ≠ ±1`.
pub fn unimodular_inverse(u: &Mat3) -> Mat3 {
    let d = det(u);
    assert!(d == 1 || d == -1, "matrix is not unimodular");
    let mut adj = adjugate(u);
    if d == -1 {
        for row in adj.iter_mut() {
            for x in row.iter_mut() {
                *x = -*x;
            }
        }
    }
    adj
}

pub fn apply(m: &Mat3, v: &[i64; 3]) -> [i64; 3] {
    let mut out = [0i64; 3];
    for i in 0..3 {
        out[i] = (0..3).map(|k| m[i][k] as i128 * v[k] as i128).sum::<i128>() as i64;
    }
    out
}

pub fn bilinear(m: &Mat3, u: &[i64; 3], v: &[i64; 3]) -> i128 {
    let mut s = 0i128;
    for i in 0..3 {
        for j in 0..3 {
            s += u[i] as i128 * m[i][j] as i128 * v[j] as i128;
        }
    }
    s
}

pub fn quad(m: &Mat3, v: &[i64; 3]) -> i128 {
    bilinear(m, v, v)
}

pub fn column(m: &Mat3, j: usize) -> [i64; 3] {
    [m[0][j], m[1][j], m[2][j]]
}

pub fn from_columns(c: &[[i64; 3]; 3]) -> Mat3 {
    transpose(c)
}

pub fn scale(m: &Mat3, k: i64) -> Mat3 {
    let mut out = *m;
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x *= k;
        }
    }
    out
}
