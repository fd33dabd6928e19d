use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::pauli::{PauliAction, PauliString};

/// Below this dimension `apply` runs single-threaded.
const PAR_THRESHOLD: usize = 1 << 14;

/// A real linear combination of Pauli strings, i.e. a Hermitian operator.
///
/// Terms are kept normalized: sorted by string (`I < X < Y < Z`, leftmost
/// letter first), duplicates merged, zero coefficients dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliSum {
    pub fn new(n_qubits: usize, terms: impl IntoIterator<Item = (f64, PauliString)>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Domain("a Pauli sum needs at least one qubit".into()));
        }
        let mut merged: BTreeMap<PauliString, f64> = BTreeMap::new();
        for (c, p) in terms {
            if !c.is_finite() {
                return Err(Error::NonFinite("Pauli sum coefficient"));
            }
            if p.n_qubits() != n_qubits {
                return Err(Error::Dimension {
                    expected: n_qubits,
                    found: p.n_qubits(),
                });
            }
            *merged.entry(p).or_insert(0.0) += c;
        }
        let terms = merged.into_iter().filter(|(_, c)| *c != 0.0).map(|(p, c)| (c, p)).collect();
        Ok(Self { n_qubits, terms })
    }

    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, std::iter::empty())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ|c_k|`, an upper bound on the operator norm.
    pub fn one_norm(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }

    /// `out = H·input` on raw amplitude slices of length `2^n`.
    pub(crate) fn apply_into(&self, input: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(input.len(), 1 << self.n_qubits);
        debug_assert_eq!(out.len(), input.len());
        let actions: Vec<(f64, PauliAction)> = self.terms.iter().map(|(c, p)| (*c, p.action())).collect();
        let row = |j: usize| -> Complex64 {
            actions
                .iter()
                .map(|(c, act)| {
                    let b = j ^ act.flip;
                    act.phase_of(b) * input[b] * *c
                })
                .sum()
        };
        if input.len() >= PAR_THRESHOLD {
            out.par_iter_mut().enumerate().for_each(|(j, o)| *o = row(j));
        } else {
            out.iter_mut().enumerate().for_each(|(j, o)| *o = row(j));
        }
    }

    /// Sum of two operators on the same register.
    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Dimension {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        PauliSum::new(self.n_qubits, self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn scale(&self, factor: f64) -> Result<PauliSum> {
        PauliSum::new(self.n_qubits, self.terms.iter().map(|(c, p)| (c * factor, p.clone())))
    }
}

/// Prints `"1*IXY − 1*YXZ"` with U+2212 as the minus sign.
impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0*{}", PauliString::identity(self.n_qubits));
        }
        for (k, (c, p)) in self.terms.iter().enumerate() {
            match (k, c.is_sign_negative()) {
                (0, false) => {}
                (0, true) => write!(f, "\u{2212}")?,
                (_, false) => write!(f, " + ")?,
                (_, true) => write!(f, " \u{2212} ")?,
            }
            write!(f, "{}*{}", c.abs(), p)?;
        }
        Ok(())
    }
}

fn parse_term(raw: &str, sign: f64) -> Result<(f64, PauliString)> {
    let (coef, string) = match raw.split_once('*') {
        Some((c, s)) => {
            let c = c.trim();
            if c.ends_with('i') || c.ends_with('j') {
                return Err(Error::NotHermitian(format!("imaginary coefficient {c:?}")));
            }
            let v: f64 = c
                .parse()
                .map_err(|_| Error::Parse(format!("invalid coefficient {c:?}")))?;
            (v, s.trim())
        }
        None => (1.0, raw),
    };
    Ok((sign * coef, string.parse()?))
}

impl FromStr for PauliSum {
    type Err = Error;

    /// Parses `"1.0*XY + 1.0*XZ"`, `"-YXXX"`, `"0.5*ZZ − 2*XI"`. Both ASCII
    /// `-` and U+2212 are accepted as minus signs.
    fn from_str(s: &str) -> Result<Self> {
        let text = s.replace('\u{2212}', "-");
        let chars: Vec<char> = text.chars().collect();
        let mut terms = Vec::new();
        let mut i = 0;
        loop {
            while i < chars.len() && chars[i].is_whitespace() {
                i += 1;
            }
            if i == chars.len() {
                break;
            }
            let mut sign = 1.0;
            let mut saw_sign = false;
            while i < chars.len() && (chars[i] == '+' || chars[i] == '-' || chars[i].is_whitespace()) {
                if chars[i] == '-' {
                    sign = -sign;
                }
                saw_sign |= !chars[i].is_whitespace();
                i += 1;
            }
            if !terms.is_empty() && !saw_sign {
                return Err(Error::Parse(format!("missing operator between terms in {s:?}")));
            }
            let start = i;
            while i < chars.len() {
                let c = chars[i];
                let exponent_sign = (c == '+' || c == '-') && i > start && matches!(chars[i - 1], 'e' | 'E');
                if c.is_whitespace() || ((c == '+' || c == '-') && !exponent_sign) {
                    break;
                }
                i += 1;
            }
            let raw: String = chars[start..i].iter().collect();
            if raw.is_empty() {
                return Err(Error::Parse(format!("dangling sign in {s:?}")));
            }
            terms.push(parse_term(&raw, sign)?);
        }
        let n = terms
            .first()
            .map(|(_, p)| p.n_qubits())
            .ok_or_else(|| Error::Parse("empty Pauli sum".into()))?;
        PauliSum::new(n, terms)
    }
}

impl Serialize for PauliSum {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliSum {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
