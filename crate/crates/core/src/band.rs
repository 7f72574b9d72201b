//! Band surgeries from the trefoil `T(2,3)` to torus links `T(2,n)`.
//!
//! The branched double cover of `T(2,n)` is `L(n,1)` and that of `T(2,3)` is
//! `L(3,1)`; a banding lifts to a distance one surgery between them. So a
//! banding exists exactly when the surgery does, subject to a component
//! count: a coherent band changes the number of components by one, a
//! non-coherent band keeps it.

use std::fmt;

use serde::Serialize;

use crate::classify::{classify, Verdict};
use crate::exactnum::is_square_mod;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TorusLink {
    pub n: i64,
    pub components: u8,
    pub determinant: u64,
}

impl TorusLink {
    pub fn new(n: i64) -> Self {
        TorusLink { n, components: if n % 2 == 0 { 2 } else { 1 }, determinant: n.unsigned_abs() }
    }
}

impl fmt::Display for TorusLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T(2,{})", self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coherence {
    Coherent,
    NonCoherent,
}

impl fmt::Display for Coherence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coherence::Coherent => "coherent",
            Coherence::NonCoherent => "non-coherent",
        })
    }
}

/// A known banding from the catalog of explicit pictures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WitnessEntry {
    pub n: i64,
    pub coherence: Coherence,
    pub figure: u8,
    pub description: &'static str,
}

impl WitnessEntry {
    pub fn label(&self) -> String {
        format!("Figure {} {} banding", self.figure, self.coherence)
    }
}

const CATALOG: [WitnessEntry; 8] = [
    WitnessEntry { n: 1, coherence: Coherence::NonCoherent, figure: 2, description: "T(2,3) to the unknot" },
    WitnessEntry {
        n: -1,
        coherence: Coherence::NonCoherent,
        figure: 2,
        description: "T(2,3) to T(2,-1), which is again the unknot",
    },
    WitnessEntry { n: 3, coherence: Coherence::NonCoherent, figure: 2, description: "T(2,n) to itself" },
    WitnessEntry {
        n: 7,
        coherence: Coherence::NonCoherent,
        figure: 2,
        description: "T(2,n-2) to T(2,n+2) with n = 5",
    },
    WitnessEntry { n: 2, coherence: Coherence::Coherent, figure: 3, description: "T(2,3) to T(2,2)" },
    WitnessEntry {
        n: -2,
        coherence: Coherence::Coherent,
        figure: 3,
        description: "T(2,3) to the Hopf link T(2,-2)",
    },
    WitnessEntry { n: 4, coherence: Coherence::Coherent, figure: 3, description: "T(2,3) to T(2,4)" },
    WitnessEntry { n: -6, coherence: Coherence::Coherent, figure: 3, description: "T(2,-6) to T(2,3)" },
];

pub fn witness_catalog() -> &'static [WitnessEntry] {
    &CATALOG
}

pub fn witness_for(n: i64) -> Option<WitnessEntry> {
    CATALOG.iter().copied().find(|w| w.n == n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BandReason {
    SurgeryObstruction,
    ParityMismatch,
    Realized,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BandVerdict {
    pub possible: bool,
    pub reason: BandReason,
    pub witness: Option<WitnessEntry>,
}

/// Whether `T(2,3)` and `T(2,n)` are related by a band surgery of the given
/// kind.
pub fn banding_possible(n: i64, coherence: Coherence) -> BandVerdict {
    // T(2,3) is a knot; a coherent band must produce a two-component link.
    let parity_ok = match coherence {
        Coherence::Coherent => n % 2 == 0,
        Coherence::NonCoherent => n % 2 != 0,
    };
    if !parity_ok {
        return BandVerdict { possible: false, reason: BandReason::ParityMismatch, witness: None };
    }
    let report = classify(n);
    match report.verdict {
        Verdict::Obstructed => {
            BandVerdict { possible: false, reason: BandReason::SurgeryObstruction, witness: None }
        }
        Verdict::NotObstructed => BandVerdict {
            possible: true,
            reason: BandReason::Realized,
            witness: report.witness.filter(|w| w.coherence == coherence),
        },
    }
}

/// Determinant condition for a band move from an unknotting number one
/// knot `K` to a link `L`: `2 det(L)` or `-2 det(L)` must be a square mod
/// `det(K)`. `true` means this test does not obstruct.
pub fn kanenobu_check(det_k: u64, det_l: u64) -> bool {
    if det_k <= 1 {
        return true;
    }
    let m = det_k as i64;
    let d = ((2 * det_l as u128) % det_k as u128) as i64;
    [d, -d].into_iter().any(|v| is_square_mod(v, m).expect("modulus >= 2"))
}
