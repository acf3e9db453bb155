//! Facing dynamics. A dancer's facing flips at every twist bar, so the net
//! change over any stretch of the curve is the parity of the bars on it.
//! Facings are bits (Forward = 0) and the forward and matching rules reduce
//! to linear conditions over GF(2) on per-path bar parities.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{paths_of, Diagram, Gap, PlacementError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Facing {
    Forward,
    Backward,
}

impl Facing {
    pub fn flip(self) -> Self {
        match self {
            Facing::Forward => Facing::Backward,
            Facing::Backward => Facing::Forward,
        }
    }

    pub fn bit(self) -> bool {
        self == Facing::Backward
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Facing::Backward
        } else {
            Facing::Forward
        }
    }

    /// Flips when `parity` is odd.
    pub fn after(self, parity: bool) -> Self {
        Facing::from_bit(self.bit() ^ parity)
    }

    pub fn letter(self) -> char {
        match self {
            Facing::Forward => 'F',
            Facing::Backward => 'B',
        }
    }
}

impl fmt::Display for Facing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Facing::Forward => "forward",
            Facing::Backward => "backward",
        })
    }
}

/// Per-path twist-bar parities; entry `i` is odd iff path `i` holds an odd
/// number of twist bars.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParityVector(Vec<bool>);

impl ParityVector {
    pub fn new(bits: Vec<bool>) -> Self {
        ParityVector(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> bool {
        self.0.iter().fold(false, |acc, &b| acc ^ b)
    }
}

impl From<&[u8]> for ParityVector {
    fn from(bits: &[u8]) -> Self {
        ParityVector(bits.iter().map(|&b| b & 1 == 1).collect())
    }
}

/// Facing designated to each initial point, in point order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FacingAssignment(pub Vec<Facing>);

impl FacingAssignment {
    pub fn uniform(n: usize, facing: Facing) -> Self {
        FacingAssignment(vec![facing; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn facings(&self) -> &[Facing] {
        &self.0
    }

    /// All 2^n assignments, in lexicographic order (Forward first).
    pub fn enumerate(n: usize) -> impl Iterator<Item = FacingAssignment> {
        assert!(n < usize::BITS as usize);
        (0..1usize << n).map(move |mask| {
            FacingAssignment(
                (0..n)
                    .map(|i| Facing::from_bit(mask >> (n - 1 - i) & 1 == 1))
                    .collect(),
            )
        })
    }
}

/// Comma separated `F`/`B` letters.
impl fmt::Display for FacingAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, facing) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", facing.letter())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("facing list must be comma separated F/B letters, got {0:?}")]
pub struct FacingParseError(pub String);

impl FromStr for FacingAssignment {
    type Err = FacingParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|tok| match tok.trim() {
                "F" | "f" => Ok(Facing::Forward),
                "B" | "b" => Ok(Facing::Backward),
                _ => Err(FacingParseError(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(FacingAssignment)
    }
}

pub fn parity_vector(diagram: &Diagram, points: &[Gap]) -> Result<ParityVector, PlacementError> {
    let paths = paths_of(diagram, points)?;
    Ok(ParityVector(
        paths
            .iter()
            .map(|p| p.events(diagram).filter(|e| e.is_twist_bar()).count() % 2 == 1)
            .collect(),
    ))
}

/// Net facing change of a dancer that starts at point `start` and walks `k`
/// paths, wrapping around the parity vector as often as needed.
pub fn window_parity(t: &ParityVector, start: usize, k: usize) -> bool {
    let n = t.len();
    assert!(n >= 1, "window over an empty parity vector");
    let full_cycles_odd = (k / n) % 2 == 1 && t.total();
    (0..k % n).fold(full_cycles_odd, |acc, j| acc ^ t.0[(start + j) % n])
}

/// Every dancer ends forward-facing after starting forward-facing.
pub fn forward_rule_ok(t: &ParityVector, k: usize) -> bool {
    (0..t.len()).all(|i| !window_parity(t, i, k))
}

/// Dancer `i` starts with facing `f[i]` and must arrive at point `i + k`
/// facing `f[i + k]`. Points passed mid-route impose nothing.
pub fn matching_check(t: &ParityVector, f: &FacingAssignment, k: usize) -> bool {
    let n = t.len();
    assert_eq!(f.len(), n, "facing assignment length");
    (0..n).all(|i| f.0[i].after(window_parity(t, i, k)) == f.0[(i + k) % n])
}

/// Lexicographically least assignment satisfying [`matching_check`], or
/// `None` when some orbit of `i -> i + k (mod n)` has odd window parity.
pub fn matching_solve(t: &ParityVector, k: usize) -> Option<FacingAssignment> {
    let n = t.len();
    let mut assigned: Vec<Option<Facing>> = vec![None; n];
    for seed in 0..n {
        if assigned[seed].is_some() {
            continue;
        }
        // The orbit minimum takes Forward; the rest of the orbit is forced.
        let mut i = seed;
        let mut facing = Facing::Forward;
        assigned[i] = Some(facing);
        loop {
            facing = facing.after(window_parity(t, i, k));
            i = (i + k) % n;
            match assigned[i] {
                None => assigned[i] = Some(facing),
                Some(existing) if existing == facing => break,
                Some(_) => return None,
            }
        }
    }
    Some(FacingAssignment(
        assigned
            .into_iter()
            .map(|f| f.expect("every orbit seeded"))
            .collect(),
    ))
}
