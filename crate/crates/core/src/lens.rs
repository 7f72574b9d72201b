//! Oriented lens spaces `L(p,q)`, their Spin^c structures indexed by `Z/p`,
//! and exact correction terms.
//!
//! Correction terms come from the Ozsváth–Szabó recursion
//!
//! ```text
//! d(L(p,q), i) = -1/4 + (2i + 1 - p - q)^2 / (4pq) - d(L(q, p mod q), i mod q)
//! ```
//!
//! which follows the Euclidean algorithm on `(p, q)` down to `S^3`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LensError {
    #[error("lens space order must be nonzero")]
    ZeroOrder,
    #[error("gcd({p}, {q}) = {gcd} is not 1")]
    NotCoprime { p: i64, q: i64, gcd: i64 },
    #[error("L({p},{q}) is not in canonical form (need 0 <= q < p, q = 0 only for p = 1)")]
    NotCanonical { p: u64, q: u64 },
    #[error("Spin^c index {i} out of range for order {p}")]
    IndexOutOfRange { i: u64, p: u64 },
}

/// A positively oriented lens space `L(p,q)` with `0 <= q < p`.
/// `L(1,0)` is the three-sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LensSpace {
    p: u64,
    q: u64,
}

/// Spin^c structure on a lens space, as its representative in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinC(pub u64);

impl fmt::Display for SpinC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Result of [`normalize`]: the canonical lens space plus whether the input
/// described the reversed orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Normalized {
    pub lens: LensSpace,
    pub reversed: bool,
}

impl Normalized {
    /// Carries a Spin^c index on the requested space `±L(|p|, q mod |p|)`
    /// to the canonical representative.
    ///
    /// Under `-L(p,q) ≅ L(p,p-q)` the index moves by `p - q`, and
    /// `d(L(p,p-q), i + p - q) = -d(L(p,q), i)`.
    pub fn map_spin(&self, i: u64) -> SpinC {
        let p = self.lens.p;
        if self.reversed {
            SpinC((i % p + self.lens.q) % p)
        } else {
            SpinC(i % p)
        }
    }
}

impl LensSpace {
    pub fn new(p: u64, q: u64) -> Result<Self, LensError> {
        if p == 0 {
            return Err(LensError::ZeroOrder);
        }
        if q >= p || (p > 1 && q == 0) {
            return Err(LensError::NotCanonical { p, q });
        }
        let g = p.gcd(&q);
        if g != 1 {
            return Err(LensError::NotCoprime { p: p as i64, q: q as i64, gcd: g as i64 });
        }
        Ok(LensSpace { p, q })
    }

    pub fn sphere() -> Self {
        LensSpace { p: 1, q: 0 }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_sphere(&self) -> bool {
        self.p == 1
    }

    /// Reduces an arbitrary integer to a Spin^c index.
    pub fn spin(&self, i: i64) -> SpinC {
        SpinC(i.rem_euclid(self.p as i64) as u64)
    }

    pub fn d_invariant(&self, i: SpinC) -> Result<Rational, LensError> {
        d_invariant(self, i)
    }

    /// All correction terms, indexed by Spin^c structure.
    pub fn d_invariants(&self) -> Vec<Rational> {
        (0..self.p).map(|i| d_recursive(self.p, self.q, i)).collect()
    }

    pub fn self_conjugate_spins(&self) -> BTreeSet<SpinC> {
        self_conjugate_spins(self)
    }

    pub fn conjugate_spin(&self, i: SpinC) -> SpinC {
        conjugate_spin(self, i)
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{})", self.p, self.q)
    }
}

/// Canonical form of `L(p_raw, q_raw)`; a negative `p_raw` stands for the
/// orientation-reversed space `-L(|p_raw|, q_raw)`.
pub fn normalize(p_raw: i64, q_raw: i64) -> Result<Normalized, LensError> {
    if p_raw == 0 {
        return Err(LensError::ZeroOrder);
    }
    let p = p_raw.unsigned_abs();
    let q = q_raw.rem_euclid(p as i64) as u64;
    let g = p.gcd(&q);
    if p > 1 && g != 1 {
        return Err(LensError::NotCoprime { p: p_raw, q: q_raw, gcd: g as i64 });
    }
    let reversed = p_raw < 0;
    let q = if reversed { (p - q) % p } else { q };
    Ok(Normalized { lens: LensSpace { p, q }, reversed })
}

/// Memo entries before the table is flushed.
const MEMO_LIMIT: usize = 1 << 18;

type Memo = RwLock<HashMap<(u64, u64, u64), Rational>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

fn d_recursive(p: u64, q: u64, i: u64) -> Rational {
    if p == 1 {
        return Rational::zero();
    }
    let key = (p, q, i);
    if let Some(v) = memo().read().expect("memo poisoned").get(&key) {
        return v.clone();
    }
    let (pi, qi, ii) = (p as i64, q as i64, i as i64);
    let square = (2 * ii + 1 - pi - qi) * (2 * ii + 1 - pi - qi);
    let head = Rational::new(-1, 4).unwrap()
        + Rational::new(square, 4 * pi * qi).expect("p, q > 0");
    let value = head - d_recursive(q, p % q, i % q);

    let mut table = memo().write().expect("memo poisoned");
    if table.len() >= MEMO_LIMIT {
        table.clear();
    }
    table.insert(key, value.clone());
    value
}

/// Correction term `d(L(p,q), i)` for `0 <= i < p`.
pub fn d_invariant(lens: &LensSpace, i: SpinC) -> Result<Rational, LensError> {
    if i.0 >= lens.p {
        return Err(LensError::IndexOutOfRange { i: i.0, p: lens.p });
    }
    Ok(d_recursive(lens.p, lens.q, i.0))
}

/// `d(L(n,1), i) = -1/4 + (2i - n)^2 / (4n)` for `n > 0`, negated at `|n|`
/// for `n < 0`.
pub fn d_l_n1(n: i64, i: u64) -> Result<Rational, LensError> {
    if n == 0 {
        return Err(LensError::ZeroOrder);
    }
    let m = n.unsigned_abs();
    if i >= m {
        return Err(LensError::IndexOutOfRange { i, p: m });
    }
    let (m, i) = (m as i64, i as i64);
    let value = Rational::new(-1, 4).unwrap()
        + Rational::new((2 * i - m) * (2 * i - m), 4 * m).unwrap();
    Ok(if n > 0 { value } else { -value })
}

/// The integers among `(p+q-1)/2` and `(q-1)/2`, reduced mod `p`.
pub fn self_conjugate_spins(lens: &LensSpace) -> BTreeSet<SpinC> {
    let (p, q) = (lens.p as i64, lens.q as i64);
    [p + q - 1, q - 1]
        .into_iter()
        .filter(|twice| twice.rem_euclid(2) == 0)
        .map(|twice| lens.spin(twice.div_euclid(2)))
        .collect()
}

/// Conjugation `i ↦ q - 1 - i (mod p)`: the affine involution fixing exactly
/// the self-conjugate structures.
pub fn conjugate_spin(lens: &LensSpace, i: SpinC) -> SpinC {
    lens.spin(lens.q as i64 - 1 - i.0 as i64)
}
