use num_integer::Roots;

use super::mat::{self, Mat3};
use super::{reduce, TernaryForm};
use crate::error::{Error, Result};
use crate::trisums::{BitTable, RepSieve, SieveOwner};

/// Visits every `(y, z)` whose fibre `{x : Q(x, y, z) ≤ bound}` is nonempty,
/// passing the fibre's exact `x` range. With `half`, only one of `v`, `-v`.
fn for_each_fibre(g: &Mat3, bound: i64, half: bool, mut visit: impl FnMut(i64, i64, i64, i64)) {
    let (a, b, c) = (g[0][0] as i128, g[1][1] as i128, g[2][2] as i128);
    let (r, s, t) = (g[0][1] as i128, g[0][2] as i128, g[1][2] as i128);
    let n = bound as i128;
    if n < 0 {
        return;
    }
    let big_a = a * b - r * r;
    let det = mat::det(g);
    let zmax = (n * big_a / det).sqrt();
    let zmin = if half { 0 } else { -zmax };
    for z in zmin..=zmax {
        let by = (a * t - r * s) * z;
        let cy = (a * c - s * s) * z * z - a * n;
        let disc = by * by - big_a * cy;
        if disc < 0 {
            continue;
        }
        let sq = disc.sqrt();
        let mut ylo = (-by - sq).div_euclid(big_a) - 1;
        let yhi = (-by + sq).div_euclid(big_a) + 1;
        if half && z == 0 {
            ylo = ylo.max(0);
        }
        for y in ylo..=yhi {
            if big_a * y * y + 2 * by * y + cy > 0 {
                continue;
            }
            let l = r * y + s * z;
            let k = b * y * y + 2 * t * y * z + c * z * z;
            let dx = l * l - a * (k - n);
            if dx < 0 {
                continue;
            }
            let sx = dx.sqrt();
            let mut xlo = (-l - sx).div_euclid(a) - 1;
            let mut xhi = (-l + sx).div_euclid(a) + 1;
            while xlo <= xhi && a * xlo * xlo + 2 * l * xlo + k > n {
                xlo += 1;
            }
            while xhi >= xlo && a * xhi * xhi + 2 * l * xhi + k > n {
                xhi -= 1;
            }
            if half && z == 0 && y == 0 {
                xlo = xlo.max(0);
            }
            if xlo <= xhi {
                visit(xlo as i64, xhi as i64, y as i64, z as i64);
            }
        }
    }
}

/// All `v` with `Q_f(v) = n`, sorted lexicographically.
/// Fails once more than `cap` vectors have been found.
pub fn vectors_of_norm(f: &TernaryForm, n: i64, cap: usize) -> Result<Vec<[i64; 3]>> {
    if n < 0 {
        return Ok(Vec::new());
    }
    let red = reduce(f);
    let g = red.form.gram();
    let a = g[0][0] as i128;
    let mut out = Vec::new();
    let mut over = false;
    for_each_fibre(g, n, false, |_, _, y, z| {
        if over {
            return;
        }
        let (y, z) = (y as i128, z as i128);
        let l = g[0][1] as i128 * y + g[0][2] as i128 * z;
        let k = g[1][1] as i128 * y * y + 2 * g[1][2] as i128 * y * z + g[2][2] as i128 * z * z;
        // a x² + 2 l x + k = n
        let disc = l * l - a * (k - n as i128);
        if disc < 0 {
            return;
        }
        let sq = disc.sqrt();
        if sq * sq != disc {
            return;
        }
        let mut roots = vec![-l - sq, -l + sq];
        roots.dedup();
        for num in roots {
            if num % a == 0 {
                let x = (num / a) as i64;
                out.push(mat::apply(&red.transform, &[x, y as i64, z as i64]));
                if out.len() > cap {
                    over = true;
                    return;
                }
            }
        }
    });
    if over {
        return Err(Error::SearchCap { norm: n, cap });
    }
    out.sort_unstable();
    Ok(out)
}

pub fn representation_witness(f: &TernaryForm, m: u64) -> Option<[i64; 3]> {
    if m == 0 {
        return Some([0, 0, 0]);
    }
    let red = reduce(f);
    let g = red.form.gram();
    let a = g[0][0] as i128;
    let mut found = None;
    for_each_fibre(g, m as i64, true, |_, _, y, z| {
        if found.is_some() {
            return;
        }
        let (yy, zz) = (y as i128, z as i128);
        let l = g[0][1] as i128 * yy + g[0][2] as i128 * zz;
        let k =
            g[1][1] as i128 * yy * yy + 2 * g[1][2] as i128 * yy * zz + g[2][2] as i128 * zz * zz;
        let disc = l * l - a * (k - m as i128);
        if disc < 0 {
            return;
        }
        let sq = disc.sqrt();
        if sq * sq != disc {
            return;
        }
        for num in [-l + sq, -l - sq] {
            if num % a == 0 {
                let v = [(num / a) as i64, y, z];
                found = Some(mat::apply(&red.transform, &v));
                return;
            }
        }
    });
    found
}

/// Exact test of `m → f`.
pub fn represents_form(f: &TernaryForm, m: u64) -> bool {
    representation_witness(f, m).is_some()
}

/// Every value of `Q_f` in `[0, bound]`.
pub fn form_sieve(f: &TernaryForm, bound: u64) -> Result<RepSieve> {
    let len = usize::try_from(bound)
        .ok()
        .and_then(|b| b.checked_add(1))
        .ok_or_else(|| Error::Overflow(format!("sieve bound {bound} too large")))?;
    let bound_i = i64::try_from(bound).map_err(|_| Error::Overflow(format!("bound {bound}")))?;
    let red = reduce(f);
    let g = red.form.gram();
    let (a, b, c) = (g[0][0], g[1][1], g[2][2]);
    let (r, s, t) = (g[0][1], g[0][2], g[1][2]);
    let mut bits = BitTable::new(len);
    for_each_fibre(g, bound_i, true, |xlo, xhi, y, z| {
        let l = r * y + s * z;
        let k = b * y * y + 2 * t * y * z + c * z * z;
        for x in xlo..=xhi {
            bits.set((a * x * x + 2 * l * x + k) as usize);
        }
    });
    Ok(RepSieve::from_bits(SieveOwner::Form(*f), bound, bits))
}
