//! Residue sets, scaling isometries and good vectors.
//!
//! For forms `f`, `g` and a modulus `d`, a scaling isometry is an integer `T`
//! with `Tᵗ M_f T = d² M_g`. A residue vector `v` is good when `T v ≡ 0 (mod d)`
//! for some such `T`; then `(1/d) T v` is an integral vector with
//! `Q_f((1/d) T v) = Q_g(v)`. `B` is the set of vectors in `R(g, d, a)` that
//! are not good.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qforms::{form_sieve, mat, solve_gram, Mat3, TernaryForm};

/// A subset of `(ℤ/dℤ)³`, members sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueSet {
    pub modulus: u64,
    pub members: Vec<[u64; 3]>,
}

impl ResidueSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: &[u64; 3]) -> bool {
        self.members.binary_search(v).is_ok()
    }

    pub fn negate(&self, v: &[u64; 3]) -> [u64; 3] {
        let d = self.modulus;
        [(d - v[0] % d) % d, (d - v[1] % d) % d, (d - v[2] % d) % d]
    }

    pub fn is_negation_closed(&self) -> bool {
        self.members.iter().all(|v| self.contains(&self.negate(v)))
    }

    /// Reduces an integer vector into `[0, d)³`.
    pub fn residue(&self, v: &[i64; 3]) -> [u64; 3] {
        let d = self.modulus as i64;
        [
            v[0].rem_euclid(d) as u64,
            v[1].rem_euclid(d) as u64,
            v[2].rem_euclid(d) as u64,
        ]
    }
}

/// `R(g, d, a) = {v mod d : Q_g(v) ≡ a}` by a full scan of `(ℤ/dℤ)³`.
pub fn r_set(g: &TernaryForm, d: u64, a: u64) -> Result<ResidueSet> {
    if d == 0 || a >= d {
        return Err(Error::Precondition(format!(
            "need d ≥ 1 and 0 ≤ a < d, got d={d}, a={a}"
        )));
    }
    let di = d as i64;
    let members: Vec<[u64; 3]> = (0..di)
        .into_par_iter()
        .flat_map_iter(|x| {
            let mut out = Vec::new();
            for y in 0..di {
                for z in 0..di {
                    if g.eval(&[x, y, z]).rem_euclid(di) as u64 == a {
                        out.push([x as u64, y as u64, z as u64]);
                    }
                }
            }
            out
        })
        .collect();
    Ok(ResidueSet {
        modulus: d,
        members,
    })
}

/// Every `T` with `Tᵗ M_f T = d² M_g`, sorted.
pub fn scaling_isometries(f: &TernaryForm, g: &TernaryForm, d: u64) -> Result<Vec<Mat3>> {
    if d == 0 {
        return Err(Error::Precondition("scale must be at least 1".into()));
    }
    let d2 = (d * d) as i64;
    // det T² · det f = d⁶ det g is necessary
    let lhs = (d as i128).pow(6) * g.det() as i128;
    if lhs % f.det() as i128 != 0 {
        return Ok(Vec::new());
    }
    solve_gram(f, &mat::scale(g.gram(), d2), usize::MAX)
}

fn is_good(isos: &[Mat3], d: i64, v: &[u64; 3]) -> bool {
    let v = [v[0] as i64, v[1] as i64, v[2] as i64];
    isos.iter()
        .any(|t| mat::apply(t, &v).iter().all(|c| c.rem_euclid(d) == 0))
}

/// `B` computed against a precomputed list of scaling isometries.
pub fn b_set_with(isos: &[Mat3], g: &TernaryForm, d: u64, a: u64) -> Result<ResidueSet> {
    let r = r_set(g, d, a)?;
    let members = r
        .members
        .into_par_iter()
        .filter(|v| !is_good(isos, d as i64, v))
        .collect();
    Ok(ResidueSet {
        modulus: d,
        members,
    })
}

/// `B_f(g, d, a)`: vectors of `R(g, d, a)` that no scaling isometry makes good.
pub fn b_set(f: &TernaryForm, g: &TernaryForm, d: u64, a: u64) -> Result<ResidueSet> {
    b_set_with(&scaling_isometries(f, g, d)?, g, d, a)
}

/// Whether `g ≺_{d,a} f`, i.e. `B_f(g, d, a)` is empty.
pub fn precedes(g: &TernaryForm, f: &TernaryForm, d: u64, a: u64) -> Result<bool> {
    Ok(b_set(f, g, d, a)?.is_empty())
}

/// Outcome of an empirical transfer check on `[0, bound]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub d: u64,
    pub a: u64,
    pub bound: u64,
    /// Values in the residue class represented by `g` and tested against `f`.
    pub checked: u64,
    /// Values skipped as `Q(z)·s²`.
    pub skipped: u64,
    pub counterexamples: Vec<u64>,
}

impl TransferReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn transfer(
    f: &TernaryForm,
    g: &TernaryForm,
    d: u64,
    a: u64,
    bound: u64,
    skip: impl Fn(u64) -> bool,
) -> Result<TransferReport> {
    let sf = form_sieve(f, bound)?;
    let sg = form_sieve(g, bound)?;
    let mut report = TransferReport {
        d,
        a,
        bound,
        checked: 0,
        skipped: 0,
        counterexamples: Vec::new(),
    };
    let mut m = a;
    while m <= bound {
        if sg.contains(m) {
            if skip(m) {
                report.skipped += 1;
            } else {
                report.checked += 1;
                if !sf.contains(m) {
                    report.counterexamples.push(m);
                }
            }
        }
        m += d;
    }
    Ok(report)
}

/// Checks `S_{d,a} ∩ Q(g) ⊆ Q(f)` on `[0, bound]`. Requires `g ≺_{d,a} f`.
pub fn verify_good(
    f: &TernaryForm,
    g: &TernaryForm,
    d: u64,
    a: u64,
    bound: u64,
) -> Result<TransferReport> {
    if !precedes(g, f, d, a)? {
        return Err(Error::Precondition(format!("B_f(g,{d},{a}) is not empty")));
    }
    transfer(f, g, d, a, bound, |_| false)
}

/// A rational eigenvalue `λ` of `T` with a primitive integral eigenvector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eigen {
    pub lambda: i64,
    /// Primitive, first nonzero entry positive; `-z` is the other one.
    pub z: [i64; 3],
    pub qz: i64,
}

/// Checked data for the infinite-order transfer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PmeCertificate {
    pub t: Mat3,
    pub d: u64,
    pub eigen: Vec<Eigen>,
    /// `|B_f(g, d, a)|`, every member of which `T` makes good.
    pub b_size: usize,
}

impl PmeCertificate {
    /// Whether `m = Q(z)·s²` for some listed eigenvector `z` and integer `s`.
    pub fn is_excluded(&self, m: u64) -> bool {
        self.eigen.iter().any(|e| {
            let q = e.qz as u64;
            if q == 0 || m % q != 0 {
                return m == 0;
            }
            let s = num_integer::Roots::sqrt(&(m / q));
            s * s == m / q
        })
    }
}

fn big_pow(t: &Mat3, e: u32) -> [[BigInt; 3]; 3] {
    let mut acc: [[BigInt; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    });
    let base: [[BigInt; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| BigInt::from(t[i][j])));
    for _ in 0..e {
        acc = std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).map(|k| &acc[i][k] * &base[k][j]).sum())
        });
    }
    acc
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::Integer::gcd(&a, &b)
}

fn primitive(v: [i64; 3]) -> Option<[i64; 3]> {
    let g = gcd(gcd(v[0], v[1]), v[2]);
    if g == 0 {
        return None;
    }
    let mut z = [v[0] / g, v[1] / g, v[2] / g];
    if z.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
        z = [-z[0], -z[1], -z[2]];
    }
    Some(z)
}

fn cross(u: &[i64; 3], v: &[i64; 3]) -> [i64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

/// Integer eigenvalues of `T` and their primitive eigenvectors.
fn eigenvectors(t: &Mat3, g: &TernaryForm) -> Result<Vec<Eigen>> {
    let tr = (t[0][0] + t[1][1] + t[2][2]) as i128;
    let c2 = {
        let m = |i: usize, j: usize| t[i][j] as i128;
        m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)
            + m(1, 1) * m(2, 2)
            - m(1, 2) * m(2, 1)
    };
    let det = mat::det(t);
    let charpoly = |x: i128| x * x * x - tr * x * x + c2 * x - det;
    let mut out = Vec::new();
    if det == 0 {
        return Err(Error::Certificate {
            condition: "(ii)",
            detail: "T is singular".into(),
        });
    }
    let n = det.unsigned_abs();
    let mut divisors = Vec::new();
    let mut k = 1u128;
    while k * k <= n {
        if n % k == 0 {
            divisors.push(k);
            divisors.push(n / k);
        }
        k += 1;
    }
    divisors.sort_unstable();
    divisors.dedup();
    for &dv in &divisors {
        for lambda in [-(dv as i128), dv as i128] {
            if charpoly(lambda) != 0 {
                continue;
            }
            let l = lambda as i64;
            let a: Mat3 = std::array::from_fn(|i| {
                std::array::from_fn(|j| t[i][j] - if i == j { l } else { 0 })
            });
            let rows = [a[0], a[1], a[2]];
            let mut kernel = None;
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                if let Some(z) = primitive(cross(&rows[i], &rows[j])) {
                    kernel = Some(z);
                    break;
                }
            }
            let Some(z) = kernel else {
                return Err(Error::Certificate {
                    condition: "eigenvectors",
                    detail: format!("eigenvalue {l} has an eigenspace of dimension ≥ 2"),
                });
            };
            debug_assert_eq!(mat::apply(t, &z), [l * z[0], l * z[1], l * z[2]]);
            out.push(Eigen {
                lambda: l,
                z,
                qz: g.eval(&z),
            });
        }
    }
    out.sort_by_key(|e| e.lambda);
    Ok(out)
}

/// Validates `T` for the infinite-order transfer on `(g, d, a)` with source `f`.
///
/// (i) `(T/d)` has infinite order: a rational 3×3 matrix of finite order has
/// order dividing 12, so it suffices that `T¹² ≠ d¹² I`.
/// (ii) `Tᵗ M_g T = d² M_g`.
/// (iii) `T v ≡ 0 (mod d)` for every `v ∈ B_f(g, d, a)`.
pub fn pme_certificate(
    t: &Mat3,
    f: &TernaryForm,
    g: &TernaryForm,
    d: u64,
    a: u64,
) -> Result<PmeCertificate> {
    let d_big = BigInt::from(d);
    let t12 = big_pow(t, 12);
    let d12 = d_big.pow(12u32);
    let finite = (0..3)
        .all(|i| (0..3).all(|j| t12[i][j] == if i == j { d12.clone() } else { BigInt::zero() }));
    if finite {
        return Err(Error::Certificate {
            condition: "(i)",
            detail: "(T/d)^12 is the identity".into(),
        });
    }
    let lhs = mat::congruent(g.gram(), t);
    let rhs = mat::scale(g.gram(), (d * d) as i64);
    if lhs != rhs {
        return Err(Error::Certificate {
            condition: "(ii)",
            detail: format!("T^t M_g T = {lhs:?}, expected {rhs:?}"),
        });
    }
    let b = b_set(f, g, d, a)?;
    for v in &b.members {
        let w = mat::apply(t, &[v[0] as i64, v[1] as i64, v[2] as i64]);
        if w.iter().any(|c| c.rem_euclid(d as i64) != 0) {
            return Err(Error::Certificate {
                condition: "(iii)",
                detail: format!("T·{v:?} = {w:?} is not divisible by {d}"),
            });
        }
    }
    Ok(PmeCertificate {
        t: *t,
        d,
        eigen: eigenvectors(t, g)?,
        b_size: b.len(),
    })
}

/// Checks `S_{d,a} ∩ Q(g) \ {Q(z)·s²} ⊆ Q(f)` on `[0, bound]`.
pub fn verify_pme(
    cert: &PmeCertificate,
    f: &TernaryForm,
    g: &TernaryForm,
    d: u64,
    a: u64,
    bound: u64,
) -> Result<TransferReport> {
    if cert.d != d {
        return Err(Error::Precondition(format!(
            "certificate is for d={}, not {d}",
            cert.d
        )));
    }
    transfer(f, g, d, a, bound, |m| cert.is_excluded(m))
}
