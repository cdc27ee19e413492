//! Declarative conditions on a nonnegative integer `m`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::qforms::{power_pattern, valuation, ValuationClass};

/// Boolean combination of congruence, power-pattern and threshold atoms.
///
/// Serialized externally tagged, e.g.
/// `{"all": [{"cong": {"modulus": 8, "residues": [1]}}, {"gt": 1}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    All(Vec<Predicate>),
    Any(Vec<Predicate>),
    Not(Box<Predicate>),
    /// `m mod modulus ∈ residues`.
    Cong {
        modulus: u64,
        residues: Vec<u64>,
    },
    /// `m = p^e (p·w + r)` with `e` admitted by `valuation` and `r ∈ residues`.
    Pattern {
        prime: u64,
        valuation: ValuationClass,
        residues: Vec<u64>,
    },
    /// `m > t`.
    Gt(u64),
    /// `m = c·s²` for some integer `s`.
    ScaledSquare(u64),
    /// `m = b^e` for some `e ≥ 0`.
    PowerOf(u64),
}

impl Predicate {
    pub fn cong(modulus: u64, residues: &[u64]) -> Self {
        Predicate::Cong {
            modulus,
            residues: residues.to_vec(),
        }
    }

    pub fn not_cong(modulus: u64, residues: &[u64]) -> Self {
        Predicate::Not(Box::new(Predicate::cong(modulus, residues)))
    }

    pub fn pattern(prime: u64, valuation: ValuationClass, residues: &[u64]) -> Self {
        Predicate::Pattern {
            prime,
            valuation,
            residues: residues.to_vec(),
        }
    }

    pub fn negate(self) -> Self {
        Predicate::Not(Box::new(self))
    }

    pub fn eval(&self, m: u64) -> bool {
        match self {
            Predicate::All(ps) => ps.iter().all(|p| p.eval(m)),
            Predicate::Any(ps) => ps.iter().any(|p| p.eval(m)),
            Predicate::Not(p) => !p.eval(m),
            Predicate::Cong { modulus, residues } => residues.contains(&(m % modulus)),
            Predicate::Pattern {
                prime,
                valuation,
                residues,
            } => power_pattern(m, *prime, *valuation, residues),
            Predicate::Gt(t) => m > *t,
            Predicate::ScaledSquare(c) => {
                if *c == 0 {
                    return m == 0;
                }
                if m % c != 0 {
                    return false;
                }
                let q = m / c;
                let s = num_integer::Roots::sqrt(&q);
                s * s == q
            }
            Predicate::PowerOf(b) => {
                let mut x = 1u64;
                while x < m {
                    match x.checked_mul(*b) {
                        Some(y) if *b > 1 => x = y,
                        _ => return false,
                    }
                }
                x == m
            }
        }
    }

    /// Decides the predicate for every `m ≡ r (mod modulus)` with `m ≥ lower`,
    /// or returns `None` when the class does not determine it.
    pub fn decide(&self, r: u64, modulus: u64, lower: u64) -> Option<bool> {
        match self {
            Predicate::All(ps) => {
                let mut out = Some(true);
                for p in ps {
                    match p.decide(r, modulus, lower) {
                        Some(false) => return Some(false),
                        None => out = None,
                        Some(true) => {}
                    }
                }
                out
            }
            Predicate::Any(ps) => {
                let mut out = Some(false);
                for p in ps {
                    match p.decide(r, modulus, lower) {
                        Some(true) => return Some(true),
                        None => out = None,
                        Some(false) => {}
                    }
                }
                out
            }
            Predicate::Not(p) => p.decide(r, modulus, lower).map(|b| !b),
            Predicate::Cong {
                modulus: q,
                residues,
            } => {
                if modulus % q == 0 {
                    Some(residues.contains(&(r % q)))
                } else {
                    None
                }
            }
            Predicate::Pattern {
                prime,
                valuation: class,
                residues,
            } => {
                let p = *prime;
                let e = valuation(modulus, p).unwrap_or(0);
                let pe = p.pow(e);
                let rr = r % pe;
                if rr == 0 {
                    return None;
                }
                let v = valuation(rr, p).expect("nonzero");
                if v + 1 > e {
                    return None;
                }
                Some(class.admits(v) && residues.contains(&((rr / p.pow(v)) % p)))
            }
            Predicate::Gt(t) => {
                if lower > *t {
                    Some(true)
                } else {
                    None
                }
            }
            Predicate::ScaledSquare(_) | Predicate::PowerOf(_) => None,
        }
    }

    /// Least common multiple of every modulus and prime power the predicate
    /// needs to be decided on a residue class, with `p²` for pattern atoms.
    pub fn period(&self) -> u64 {
        match self {
            Predicate::All(ps) | Predicate::Any(ps) => {
                ps.iter().fold(1, |acc, p| acc.lcm(&p.period()))
            }
            Predicate::Not(p) => p.period(),
            Predicate::Cong { modulus, .. } => *modulus,
            Predicate::Pattern { prime, .. } => prime * prime,
            Predicate::Gt(_) | Predicate::ScaledSquare(_) | Predicate::PowerOf(_) => 1,
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(f: &mut fmt::Formatter<'_>, ps: &[Predicate], sep: &str) -> fmt::Result {
            write!(f, "(")?;
            for (i, p) in ps.iter().enumerate() {
                if i > 0 {
                    write!(f, "{sep}")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")
        }
        let list = |rs: &[u64]| rs.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match self {
            Predicate::All(ps) => join(f, ps, " and "),
            Predicate::Any(ps) => join(f, ps, " or "),
            Predicate::Not(p) => write!(f, "not {p}"),
            Predicate::Cong { modulus, residues } => {
                write!(f, "m≡{} mod {modulus}", list(residues))
            }
            Predicate::Pattern {
                prime,
                valuation,
                residues,
            } => {
                let e = match valuation {
                    ValuationClass::Odd => "odd".to_string(),
                    ValuationClass::Even => "even".to_string(),
                    ValuationClass::AtMost(k) => format!("≤{k}"),
                };
                write!(f, "m={prime}^e({prime}v+{{{}}}), e {e}", list(residues))
            }
            Predicate::Gt(t) => write!(f, "m>{t}"),
            Predicate::ScaledSquare(c) => write!(f, "m={c}s²"),
            Predicate::PowerOf(b) => write!(f, "m={b}^e"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_atoms() {
        let p = Predicate::All(vec![
            Predicate::cong(8, &[0]),
            Predicate::pattern(5, ValuationClass::Odd, &[2, 3]).negate(),
        ]);
        assert!(p.eval(0) && p.eval(8) && p.eval(16));
        // 40 = 5·8, cofactor 8 ≡ 3 mod 5
        assert!(!p.eval(40));
        assert!(p.eval(200));
        assert!(Predicate::ScaledSquare(2).eval(18));
        assert!(!Predicate::ScaledSquare(2).eval(10));
        assert!(Predicate::Gt(1).eval(2) && !Predicate::Gt(1).eval(1));
        let p9 = Predicate::PowerOf(9);
        assert!(p9.eval(1) && p9.eval(81) && p9.eval(6561));
        assert!(!p9.eval(0) && !p9.eval(27) && !p9.eval(82));
    }

    #[test]
    fn decide_matches_eval_on_classes() {
        let p = Predicate::All(vec![
            Predicate::cong(8, &[7]),
            Predicate::pattern(3, ValuationClass::Odd, &[2]).negate(),
        ]);
        let modulus = 72;
        for r in 0..modulus {
            if let Some(b) = p.decide(r, modulus, 0) {
                for k in 0..50 {
                    assert_eq!(p.eval(r + k * modulus), b, "r={r}");
                }
            }
        }
        // 7 mod 72 has zero 3-valuation, so it is decided
        assert_eq!(p.decide(7, 72, 0), Some(true));
        // 63 ≡ 0 mod 9 leaves the valuation open
        assert_eq!(p.decide(63, 72, 0), None);
    }

    #[test]
    fn serde_shape() {
        let p = Predicate::All(vec![Predicate::Gt(1), Predicate::cong(8, &[1])]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"all":[{"gt":1},{"cong":{"modulus":8,"residues":[1]}}]}"#
        );
        let back: Predicate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let q: Predicate = serde_json::from_str(
            r#"{"pattern":{"prime":3,"valuation":{"at_most":1},"residues":[1]}}"#,
        )
        .unwrap();
        assert!(q.eval(3 * 4) && q.eval(7) && !q.eval(9 * 7));
    }
}
