use serde::{Deserialize, Serialize};

/// `v_p(m)`; `None` for `m = 0`.
pub fn valuation(mut m: u64, p: u64) -> Option<u32> {
    if m == 0 {
        return None;
    }
    let mut v = 0;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    Some(v)
}

/// Which `p`-adic valuations a power pattern admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValuationClass {
    Odd,
    Even,
    AtMost(u32),
}

impl ValuationClass {
    pub fn admits(self, v: u32) -> bool {
        match self {
            ValuationClass::Odd => v % 2 == 1,
            ValuationClass::Even => v % 2 == 0,
            ValuationClass::AtMost(k) => v <= k,
        }
    }
}

/// Whether `m = p^e (p·w + r)` with `e` in `class` and `r ∈ residues`.
/// Zero never matches.
pub fn power_pattern(m: u64, p: u64, class: ValuationClass, residues: &[u64]) -> bool {
    let Some(v) = valuation(m, p) else {
        return false;
    };
    if !class.admits(v) {
        return false;
    }
    let cofactor = m / p.pow(v);
    residues.contains(&(cofactor % p))
}

/// Whether `m = p^{2u+1} (p·v + r)` for some `u, v ≥ 0` and `r ∈ residues`.
pub fn excluded_power_pattern(m: u64, p: u64, residues: &[u64]) -> bool {
    power_pattern(m, p, ValuationClass::Odd, residues)
}
