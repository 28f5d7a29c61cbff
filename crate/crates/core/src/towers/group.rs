//! Concrete finite quotients. Elements are canonical residue vectors.

use serde::{Deserialize, Serialize};

use super::TowerError;
use crate::cycles::is_prime;

/// Canonical form of a quotient element; equal elements have equal vectors.
pub type Element = Vec<i64>;

/// The family of finite groups `n -> Γ/Γ_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QuotientFamily {
    /// `Z^dim -> (Z/n)^dim`; images are integer vectors of length `dim`.
    Residues { dim: usize },
    /// Images in `SL(2, p)` for prime `p`; images are `[a, b, c, d]` for `[[a, b], [c, d]]`.
    Sl2,
    /// Unitriangular 3x3 matrices mod `n`; `[x, y, z]` stands for `[[1, x, z], [0, 1, y], [0, 0, 1]]`.
    Heisenberg,
}

impl QuotientFamily {
    fn width(&self) -> usize {
        match self {
            QuotientFamily::Residues { dim } => *dim,
            QuotientFamily::Sl2 => 4,
            QuotientFamily::Heisenberg => 3,
        }
    }

    pub fn check_parameter(&self, n: u64) -> Result<(), TowerError> {
        let ok = match self {
            QuotientFamily::Sl2 => is_prime(n),
            _ => n >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(TowerError::BadParameter { n, reason: format!("{self:?} needs {}", self.parameter_rule()) })
        }
    }

    fn parameter_rule(&self) -> &'static str {
        match self {
            QuotientFamily::Sl2 => "a prime modulus",
            _ => "a positive modulus",
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            QuotientFamily::Sl2 => vec![1, 0, 0, 1],
            _ => vec![0; self.width()],
        }
    }

    /// Reduces an integer image into the level-`n` quotient.
    pub fn reduce(&self, image: &[i64], n: u64) -> Result<Element, TowerError> {
        if image.len() != self.width() {
            return Err(TowerError::BadImage(format!("expected {} entries, got {:?}", self.width(), image)));
        }
        let m = n as i64;
        let e: Element = image.iter().map(|x| x.rem_euclid(m)).collect();
        if let QuotientFamily::Sl2 = self {
            let det = (e[0] * e[3] - e[1] * e[2]).rem_euclid(m);
            if det == 0 {
                return Err(TowerError::NotInvertible { n, image: image.to_vec() });
            }
            if det != 1 % m {
                return Err(TowerError::BadImage(format!("{image:?} has determinant {det} mod {n}, not 1")));
            }
        }
        Ok(e)
    }

    pub fn multiply(&self, a: &[i64], b: &[i64], n: u64) -> Element {
        let m = n as i64;
        match self {
            QuotientFamily::Residues { .. } => a.iter().zip(b).map(|(x, y)| (x + y) % m).collect(),
            QuotientFamily::Sl2 => vec![
                (a[0] * b[0] + a[1] * b[2]) % m,
                (a[0] * b[1] + a[1] * b[3]) % m,
                (a[2] * b[0] + a[3] * b[2]) % m,
                (a[2] * b[1] + a[3] * b[3]) % m,
            ],
            QuotientFamily::Heisenberg => vec![(a[0] + b[0]) % m, (a[1] + b[1]) % m, (a[2] + b[2] + a[0] * b[1]) % m],
        }
    }

    pub fn inverse(&self, a: &[i64], n: u64) -> Element {
        let m = n as i64;
        let neg = |x: i64| (m - x % m) % m;
        match self {
            QuotientFamily::Residues { .. } => a.iter().map(|&x| neg(x)).collect(),
            QuotientFamily::Sl2 => vec![a[3], neg(a[1]), neg(a[2]), a[0]],
            QuotientFamily::Heisenberg => vec![neg(a[0]), neg(a[1]), (neg(a[2]) + a[0] * a[1]) % m],
        }
    }

    /// Order of the full concrete group at level `n`.
    pub fn group_order(&self, n: u64) -> u64 {
        match self {
            QuotientFamily::Residues { dim } => n.pow(*dim as u32),
            QuotientFamily::Sl2 => n * (n * n - 1),
            QuotientFamily::Heisenberg => n.pow(3),
        }
    }

    /// Natural map from level `n` to level `k` when the levels are nested
    /// (`k` divides `n`); `None` for families without such maps.
    pub fn project(&self, a: &[i64], k: u64) -> Option<Element> {
        match self {
            QuotientFamily::Sl2 => None,
            _ => Some(a.iter().map(|x| x.rem_euclid(k as i64)).collect()),
        }
    }

    pub fn is_nested(&self, k: u64, n: u64) -> bool {
        !matches!(self, QuotientFamily::Sl2) && k >= 1 && n % k == 0
    }
}

/// A word over the generators: `(generator index, +1 | -1)` letters.
pub type Word = Vec<(usize, i8)>;

/// Parses whitespace-separated tokens `x` or `x^k` (`k` a nonzero integer)
/// over the given generator labels.
pub fn parse_word(text: &str, labels: &[String]) -> Result<Word, TowerError> {
    let mut word = Vec::new();
    for token in text.split_whitespace() {
        let (label, exponent) = match token.split_once('^') {
            Some((l, e)) => {
                let e: i64 = e.parse().map_err(|_| TowerError::BadWord(format!("bad exponent in {token:?}")))?;
                (l, e)
            }
            None => (token, 1),
        };
        if exponent == 0 {
            return Err(TowerError::BadWord(format!("zero exponent in {token:?}")));
        }
        let index = labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| TowerError::BadWord(format!("unknown generator {label:?} in {text:?}")))?;
        let sign = if exponent > 0 { 1 } else { -1 };
        word.extend(std::iter::repeat_n((index, sign), exponent.unsigned_abs() as usize));
    }
    Ok(word)
}
