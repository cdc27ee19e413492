use rayon::prelude::*;

use super::{is_reduced, TernaryForm};
use crate::error::{Error, Result};

pub const DET_CEILING: i64 = 100_000;

/// Every Minkowski-reduced form of determinant `det`, sorted by Gram matrix.
/// Isometric forms on the boundary of the reduced cell may all appear.
pub fn enumerate_reduced(det: i64) -> Result<Vec<TernaryForm>> {
    if det > DET_CEILING {
        return Err(Error::CeilingExceeded {
            det,
            ceiling: DET_CEILING,
        });
    }
    if det < 1 {
        return Ok(Vec::new());
    }
    let d = det as i128;
    let amax = (1..)
        .take_while(|&a: &i64| (a as i128).pow(3) <= 2 * d)
        .last()
        .unwrap_or(0);
    let mut out: Vec<TernaryForm> = (1..=amax)
        .into_par_iter()
        .flat_map_iter(move |a| {
            let mut found = Vec::new();
            let mut b = a;
            while (a as i128) * (b as i128) * (b as i128) <= 2 * d {
                for r in -(a / 2)..=(a / 2) {
                    let m2 = (a * b - r * r) as i128;
                    for s in -(a / 2)..=(a / 2) {
                        for t in -(b / 2)..=(b / 2) {
                            let (ai, bi, ri, si, ti) =
                                (a as i128, b as i128, r as i128, s as i128, t as i128);
                            let num = d + ai * ti * ti - 2 * ri * si * ti + bi * si * si;
                            if num % m2 != 0 {
                                continue;
                            }
                            let c = num / m2;
                            if c < bi || ai * bi * c > 2 * d {
                                continue;
                            }
                            let g = [[a, r, s], [r, b, t], [s, t, c as i64]];
                            if is_reduced(&g) {
                                if let Ok(f) = TernaryForm::new(g) {
                                    found.push(f);
                                }
                            }
                        }
                    }
                }
                b += 1;
            }
            found
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}
