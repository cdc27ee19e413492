//! Positive definite integral ternary quadratic forms.
//!
//! A form is stored as its Gram matrix `M_f`, so `Q(v) = v M_f vᵗ` and the
//! off-diagonal entries are half the cross coefficients.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod enumerate;
mod genus;
mod isometry;
pub mod mat;
mod pattern;
mod reduce;
mod represent;

pub use enumerate::{enumerate_reduced, DET_CEILING};
pub use genus::{genus_classes, same_genus, GenusSet, LocalSymbol};
pub use isometry::{find_isometry, is_isometric, solve_gram, VECTOR_CAP};
pub use mat::Mat3;
pub use pattern::{excluded_power_pattern, power_pattern, valuation, ValuationClass};
pub use reduce::{is_reduced, reduce, Reduction};
pub use represent::{form_sieve, representation_witness, represents_form, vectors_of_norm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Mat3", into = "Mat3")]
pub struct TernaryForm {
    gram: Mat3,
}

impl TernaryForm {
    pub fn new(gram: Mat3) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric(gram));
                }
            }
        }
        let m1 = gram[0][0] as i128;
        let m2 = m1 * gram[1][1] as i128 - (gram[0][1] as i128).pow(2);
        if m1 <= 0 || m2 <= 0 || mat::det(&gram) <= 0 {
            return Err(Error::NotPositiveDefinite(gram));
        }
        Ok(Self { gram })
    }

    pub fn diagonal(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new([[a, 0, 0], [0, b, 0], [0, 0, c]])
    }

    /// A binary block `[[a, b], [b, c]]` orthogonally summed with `⟨d⟩`.
    pub fn block(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new([[a, b, 0], [b, c, 0], [0, 0, d]])
    }

    pub fn gram(&self) -> &Mat3 {
        &self.gram
    }

    pub fn det(&self) -> i64 {
        mat::det(&self.gram) as i64
    }

    pub fn eval(&self, v: &[i64; 3]) -> i64 {
        mat::quad(&self.gram, v) as i64
    }

    /// `u M_f vᵗ`.
    pub fn bilinear(&self, u: &[i64; 3], v: &[i64; 3]) -> i64 {
        mat::bilinear(&self.gram, u, v) as i64
    }

    pub fn diag(&self) -> [i64; 3] {
        [self.gram[0][0], self.gram[1][1], self.gram[2][2]]
    }

    /// The form `Uᵗ M_f U`.
    pub fn transform(&self, u: &Mat3) -> Self {
        Self {
            gram: mat::congruent(&self.gram, u),
        }
    }
}

impl TryFrom<Mat3> for TernaryForm {
    type Error = Error;
    fn try_from(m: Mat3) -> Result<Self> {
        Self::new(m)
    }
}

impl From<TernaryForm> for Mat3 {
    fn from(f: TernaryForm) -> Mat3 {
        f.gram
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = &self.gram;
        if g[0][1] == 0 && g[0][2] == 0 && g[1][2] == 0 {
            write!(f, "<{},{},{}>", g[0][0], g[1][1], g[2][2])
        } else {
            write!(
                f,
                "[[{},{},{}],[{},{},{}],[{},{},{}]]",
                g[0][0], g[0][1], g[0][2], g[1][0], g[1][1], g[1][2], g[2][0], g[2][1], g[2][2]
            )
        }
    }
}

/// Accepts `<a,b,c>`, `⟨a,b,c⟩`, `a,b,c` (diagonal) or a JSON 3×3 array.
impl FromStr for TernaryForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with("[[") {
            let m: Mat3 = serde_json::from_str(s)
                .map_err(|e| Error::Data(format!("bad Gram matrix {s:?}: {e}")))?;
            return Self::new(m);
        }
        let inner = s
            .trim_start_matches(['<', '⟨'])
            .trim_end_matches(['>', '⟩']);
        let parts: Vec<i64> = inner
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Data(format!("bad diagonal form {s:?}")))?;
        match parts.as_slice() {
            &[a, b, c] => Self::diagonal(a, b, c),
            _ => Err(Error::Data(format!(
                "diagonal form needs three entries: {s:?}"
            ))),
        }
    }
}
