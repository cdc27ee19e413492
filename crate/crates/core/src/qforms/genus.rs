//! Genus membership by local invariants.
//!
//! At an odd prime `p` the Jordan splitting (scale, dimension and the
//! quadratic character of each component's unit determinant) classifies the
//! form over `ℤ_p`. At `p = 2` the Jordan scales, dimensions and parity types
//! are compared together with the full table of congruence counts
//! `#{v mod 2^k : Q(v) ≡ t}` at `k = v_2(4·det) + 3`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::mat::Mat3;
use super::{enumerate_reduced, is_isometric, reduce, valuation, TernaryForm};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LocalSymbol {
    /// `(scale exponent, dimension, Legendre symbol of the unit determinant)`.
    Odd(Vec<(u32, u32, i8)>),
    /// `(scale exponent, dimension, odd type)` per Jordan constituent.
    Two(Vec<(u32, u32, bool)>),
}

/// A genus together with one form per isometry class in it.
#[derive(Clone, Debug)]
pub struct GenusSet {
    pub representative: TernaryForm,
    /// Reduced representatives, the class of `representative` first.
    pub classes: Vec<TernaryForm>,
}

impl GenusSet {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

#[derive(Clone, Copy, Debug)]
enum Component {
    One { s: u32, u: i128 },
    Two { s: u32, det_unit: i128 },
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn modpow(mut b: i128, mut e: u64, m: i128) -> i128 {
    let mut r = 1i128;
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn modinv(a: i128, m: i128) -> i128 {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "{a} not invertible mod {m}");
    old_s.rem_euclid(m)
}

fn val_mod(x: i128, p: i128, k: u32) -> u32 {
    if x == 0 {
        return k;
    }
    let mut v = 0;
    let mut x = x;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Jordan splitting of `g` over `ℤ/p^k`. Assumes `k > v_p(det)`.
fn jordan(g: &Mat3, p: u64, k: u32) -> Vec<Component> {
    let pp = p as i128;
    let modulus = pp.pow(k);
    let mut m = [[0i128; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = (g[i][j] as i128).rem_euclid(modulus);
        }
    }
    // col_dst += c·col_src, row_dst += c·row_src
    let add = |m: &mut [[i128; 3]; 3], dst: usize, src: usize, c: i128| {
        for row in m.iter_mut() {
            row[dst] = (row[dst] + c * row[src]).rem_euclid(modulus);
        }
        for j in 0..3 {
            m[dst][j] = (m[dst][j] + c * m[src][j]).rem_euclid(modulus);
        }
    };
    let mut active: Vec<usize> = vec![0, 1, 2];
    let mut out = Vec::new();
    while !active.is_empty() {
        let mut best = (u32::MAX, 0, 0);
        for &i in &active {
            for &j in &active {
                let v = val_mod(m[i][j], pp, k);
                // prefer diagonal pivots on ties
                if v < best.0 || (v == best.0 && i == j && best.1 != best.2) {
                    best = (v, i, j);
                }
            }
        }
        let (s, i, j) = best;
        let ps = pp.pow(s);
        if i == j {
            let u = m[i][i] / ps;
            let uinv = modinv(u, modulus);
            for &l in &active {
                if l != i {
                    let c = (m[i][l] / ps * uinv).rem_euclid(modulus);
                    add(&mut m, l, i, -c);
                }
            }
            out.push(Component::One {
                s,
                u: u % pp.pow(k - s),
            });
            active.retain(|&l| l != i);
        } else if p != 2 {
            add(&mut m, i, j, 1);
        } else {
            let (a, b, c) = (m[i][i] / ps, m[i][j] / ps, m[j][j] / ps);
            let d = (a * c - b * b).rem_euclid(modulus);
            let dinv = modinv(d, modulus);
            for &l in &active {
                if l != i && l != j {
                    let (x, y) = (m[i][l] / ps, m[j][l] / ps);
                    let ci = ((c * x - b * y) % modulus * dinv).rem_euclid(modulus);
                    let cj = ((a * y - b * x) % modulus * dinv).rem_euclid(modulus);
                    add(&mut m, l, i, -ci);
                    add(&mut m, l, j, -cj);
                }
            }
            out.push(Component::Two { s, det_unit: d });
            active.retain(|&l| l != i && l != j);
        }
    }
    out
}

fn local_symbol(f: &TernaryForm, p: u64) -> LocalSymbol {
    let v = valuation(f.det() as u64, p).unwrap_or(0);
    let comps = jordan(f.gram(), p, if p == 2 { 2 * v + 7 } else { v + 2 });
    let mut scales: Vec<u32> = comps
        .iter()
        .map(|c| match *c {
            Component::One { s, .. } | Component::Two { s, .. } => s,
        })
        .collect();
    scales.sort_unstable();
    scales.dedup();
    if p == 2 {
        LocalSymbol::Two(
            scales
                .into_iter()
                .map(|sc| {
                    let mut dim = 0;
                    let mut odd = false;
                    for c in &comps {
                        match *c {
                            Component::One { s, .. } if s == sc => {
                                dim += 1;
                                odd = true;
                            }
                            Component::Two { s, .. } if s == sc => dim += 2,
                            _ => {}
                        }
                    }
                    (sc, dim, odd)
                })
                .collect(),
        )
    } else {
        let pp = p as i128;
        LocalSymbol::Odd(
            scales
                .into_iter()
                .map(|sc| {
                    let mut dim = 0;
                    let mut prod = 1i128;
                    for c in &comps {
                        if let Component::One { s, u } = *c {
                            if s == sc {
                                dim += 1;
                                prod = prod * (u % pp) % pp;
                            }
                        }
                    }
                    let leg = if modpow(prod, (p - 1) / 2, pp) == 1 {
                        1
                    } else {
                        -1
                    };
                    (sc, dim, leg)
                })
                .collect(),
        )
    }
}

type Dist = Arc<Vec<u64>>;

fn dist_cache() -> &'static Mutex<HashMap<(u8, u32, u32, u32), Dist>> {
    static CACHE: OnceLock<Mutex<HashMap<(u8, u32, u32, u32), Dist>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Value distribution mod `2^k` of one 2-adic Jordan component.
/// `kind`: 0..8 is `2^s·u·x²` with `u ≡ kind (mod 8)`; 8 is `2^{s+1}xy`;
/// 9 is `2^{s+1}(x²+xy+y²)`.
fn component_dist(kind: u8, s: u32, k: u32) -> Dist {
    let key = (kind, s, k, 0);
    if let Some(d) = dist_cache().lock().unwrap().get(&key) {
        return d.clone();
    }
    let size = 1usize << k;
    let mask = (size - 1) as u64;
    let mut dist = vec![0u64; size];
    if kind < 8 {
        for x in 0..size as u64 {
            let t = ((kind as u64).wrapping_mul(x * x) << s) & mask;
            dist[t as usize] += 1;
        }
    } else if s + 1 >= k {
        dist[0] = (size * size) as u64;
    } else {
        let j = k - s - 1;
        let inner = 1u64 << j;
        let lifts = (1u64 << (k - j)).pow(2);
        for x in 0..inner {
            for y in 0..inner {
                let q = if kind == 8 {
                    x * y
                } else {
                    x * x + x * y + y * y
                };
                dist[((q << (s + 1)) & mask) as usize] += lifts;
            }
        }
    }
    let d = Arc::new(dist);
    dist_cache().lock().unwrap().insert(key, d.clone());
    d
}

/// `#{v mod 2^k : Q(v) ≡ t}` for every `t`, at `k = v_2(4·det) + 3`.
pub fn two_adic_counts(f: &TernaryForm) -> Vec<u64> {
    let v = valuation(f.det() as u64, 2).unwrap_or(0);
    let k = v + 5;
    let comps = jordan(f.gram(), 2, 2 * v + 7);
    let size = 1usize << k;
    let mut acc = vec![0u64; size];
    acc[0] = 1;
    for c in comps {
        let d = match c {
            Component::One { s, u } => component_dist((u.rem_euclid(8)) as u8, s, k),
            Component::Two { s, det_unit } => {
                // even unimodular binary: hyperbolic iff det ≡ -1 mod 8
                let kind = if det_unit.rem_euclid(8) == 7 { 8 } else { 9 };
                component_dist(kind, s, k)
            }
        };
        let mut next = vec![0u64; size];
        for (a, &ca) in acc.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (b, &cb) in d.iter().enumerate() {
                if cb != 0 {
                    next[(a + b) & (size - 1)] += ca * cb;
                }
            }
        }
        acc = next;
    }
    acc
}

/// Cheap local data: determinant and Jordan symbols at every `p | 2·det`.
fn local_key(f: &TernaryForm) -> (i64, Vec<(u64, LocalSymbol)>) {
    let det = f.det();
    let mut primes = prime_factors(det as u64);
    if !primes.contains(&2) {
        primes.insert(0, 2);
    }
    (
        det,
        primes
            .into_iter()
            .map(|p| (p, local_symbol(f, p)))
            .collect(),
    )
}

pub fn same_genus(f: &TernaryForm, g: &TernaryForm) -> bool {
    f.det() == g.det() && local_key(f) == local_key(g) && two_adic_counts(f) == two_adic_counts(g)
}

/// All isometry classes in the genus of `f`.
pub fn genus_classes(f: &TernaryForm) -> Result<GenusSet> {
    let key = local_key(f);
    let counts = two_adic_counts(f);
    let own = reduce(f).form;
    let mut classes = vec![own];
    for g in enumerate_reduced(f.det())? {
        if local_key(&g) != key || two_adic_counts(&g) != counts {
            continue;
        }
        let mut known = false;
        for c in &classes {
            if is_isometric(c, &g)? {
                known = true;
                break;
            }
        }
        if !known {
            classes.push(g);
        }
    }
    classes[1..].sort_unstable();
    Ok(GenusSet {
        representative: *f,
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_counts(f: &TernaryForm, p: u64, k: u32) -> Vec<u64> {
        let m = p.pow(k) as i64;
        let mut out = vec![0u64; m as usize];
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    out[f.eval(&[x, y, z]).rem_euclid(m) as usize] += 1;
                }
            }
        }
        out
    }

    #[test]
    fn two_adic_counts_match_brute_force() {
        let forms = [
            TernaryForm::diagonal(1, 1, 1).unwrap(),
            TernaryForm::diagonal(1, 2, 3).unwrap(),
            TernaryForm::block(2, 1, 2, 1).unwrap(),
            TernaryForm::new([[2, 0, 1], [0, 2, 1], [1, 1, 3]]).unwrap(),
            TernaryForm::block(2, 1, 4, 3).unwrap(),
        ];
        for f in forms {
            let k = valuation(f.det() as u64, 2).unwrap() + 5;
            if k > 6 {
                continue;
            }
            assert_eq!(two_adic_counts(&f), brute_counts(&f, 2, k), "{f}");
        }
    }

    #[test]
    fn odd_symbol_distinguishes_square_class() {
        // unit parts 1·1 and 1·2 differ by a non-square mod 3
        let f = TernaryForm::diagonal(1, 1, 3).unwrap();
        let g = TernaryForm::diagonal(1, 2, 6).unwrap();
        assert_ne!(local_symbol(&f, 3), local_symbol(&g, 3));
        assert_eq!(
            local_symbol(&f, 3),
            LocalSymbol::Odd(vec![(0, 2, 1), (1, 1, 1)])
        );
    }

    #[test]
    fn named_genera() {
        let f = TernaryForm::diagonal(3, 4, 16).unwrap();
        let m2 = TernaryForm::new([[4, 0, 0], [0, 7, 1], [0, 1, 7]]).unwrap();
        assert!(same_genus(&f, &m2));
        let f = TernaryForm::diagonal(2, 3, 4).unwrap();
        assert!(!same_genus(&f, &TernaryForm::diagonal(1, 1, 24).unwrap()));
        assert!(same_genus(&f, &TernaryForm::diagonal(1, 2, 12).unwrap()));
        let f = TernaryForm::diagonal(2, 3, 3).unwrap();
        assert_eq!(genus_classes(&f).unwrap().class_count(), 1);
    }

    #[test]
    fn class_numbers_of_small_diagonals() {
        // ⟨1,1,1⟩ … ⟨1,1,4⟩ all have class number one
        for c in 1..=4 {
            let f = TernaryForm::diagonal(1, 1, c).unwrap();
            assert_eq!(genus_classes(&f).unwrap().class_count(), 1, "<1,1,{c}>");
        }
    }
}
