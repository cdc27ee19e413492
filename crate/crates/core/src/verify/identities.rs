//! Polynomial identities `Σ α_i (c_i·3^{ℓ+s_i})² = t·3^{2ℓ}` valid for every
//! `ℓ ≥ 1`, used where an offset scheme strips powers of 9.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::report::{CheckRecord, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdentityFamily {
    pub id: &'static str,
    pub coeffs: &'static [u64],
    /// `(c_i, s_i)`: the `i`-th argument is `c_i · 3^{ℓ + s_i}`.
    pub args: &'static [(u64, i32)],
    /// Right-hand side is `target · 3^{2ℓ}`.
    pub target: u64,
}

pub const FAMILIES: &[IdentityFamily] = &[
    IdentityFamily {
        id: "2,3,3,4:4",
        coeffs: &[2, 3, 3, 4],
        args: &[(1, -1), (1, -1), (1, 0), (1, -1)],
        target: 4,
    },
    IdentityFamily {
        id: "2,3,3,4:20",
        coeffs: &[2, 3, 3, 4],
        args: &[(7, -1), (5, -1), (1, -1), (1, -1)],
        target: 20,
    },
    IdentityFamily {
        id: "2,2,3,3,3:5",
        coeffs: &[2, 2, 3, 3, 3],
        args: &[(1, 0), (1, 0), (1, -1), (1, -1), (1, -1)],
        target: 5,
    },
    IdentityFamily {
        id: "2,2,3,3,3:21",
        coeffs: &[2, 2, 3, 3, 3],
        args: &[(1, 1), (1, 0), (1, -1), (1, -1), (1, -1)],
        target: 21,
    },
];

pub fn family(id: &str) -> Option<&'static IdentityFamily> {
    FAMILIES.iter().find(|f| f.id == id)
}

fn pow3(e: u32) -> BigUint {
    BigUint::from(3u32).pow(e)
}

impl IdentityFamily {
    /// Arguments at `ℓ`, or `None` if some exponent is negative.
    pub fn arguments(&self, l: u32) -> Option<Vec<BigUint>> {
        self.args
            .iter()
            .map(|&(c, s)| {
                let e = l as i64 + s as i64;
                (e >= 0).then(|| BigUint::from(c) * pow3(e as u32))
            })
            .collect()
    }

    /// `(lhs, rhs)` at `ℓ`.
    pub fn evaluate(&self, l: u32) -> Option<(BigUint, BigUint)> {
        let xs = self.arguments(l)?;
        let lhs = self
            .coeffs
            .iter()
            .zip(&xs)
            .fold(BigUint::zero(), |acc, (&a, x)| {
                acc + BigUint::from(a) * x * x
            });
        Some((lhs, BigUint::from(self.target) * pow3(2 * l)))
    }
}

/// Checks the identity and the oddness of every argument for `ℓ = 1..=l_max`.
pub fn verify_identity_family(fam: &IdentityFamily, l_max: u32) -> Report {
    let mut rep = Report::new();
    let mut bad = Vec::new();
    let mut even = Vec::new();
    for l in 1..=l_max {
        match fam.evaluate(l) {
            Some((lhs, rhs)) if lhs == rhs => {}
            _ => bad.push(l),
        }
        if let Some(xs) = fam.arguments(l) {
            if xs.iter().any(|x| (x % 2u32) != BigUint::one()) {
                even.push(l);
            }
        }
    }
    rep.push(CheckRecord::verdict(
        fam.id,
        format!("identity for l=1..{l_max}"),
        "[]",
        format!("{bad:?}"),
        bad.is_empty(),
    ));
    rep.push(CheckRecord::verdict(
        fam.id,
        "odd arguments",
        "[]",
        format!("{even:?}"),
        even.is_empty(),
    ));
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        let (l, r) = family("2,3,3,4:4").unwrap().evaluate(1).unwrap();
        assert_eq!((l, r), (BigUint::from(36u32), BigUint::from(36u32)));
        let (l, _) = family("2,2,3,3,3:5").unwrap().evaluate(1).unwrap();
        assert_eq!(l, BigUint::from(45u32));
        let (l, r) = family("2,3,3,4:20").unwrap().evaluate(2).unwrap();
        assert_eq!((l, r), (BigUint::from(1620u32), BigUint::from(1620u32)));
    }

    #[test]
    fn all_families_hold() {
        for f in FAMILIES {
            assert!(verify_identity_family(f, 40).passed(), "{}", f.id);
        }
    }

    #[test]
    fn broken_family_fails() {
        let f = IdentityFamily {
            id: "x",
            coeffs: &[2, 3],
            args: &[(1, 0), (2, 0)],
            target: 14,
        };
        let rep = verify_identity_family(&f, 3);
        assert!(!rep.passed());
        assert_eq!(rep.failures().count(), 1);
    }
}
