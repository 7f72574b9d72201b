//! Linking forms on cyclic first homology, written `q/p` in `Q/Z`.
//!
//! Convention: `L(p,q)` (that is, `p/q` surgery on the unknot) carries the
//! form `q/p`. Two forms `a/p` and `b/p` are equivalent when `a ≡ b·u²`
//! for a unit `u` mod `p`. Negative orientation is encoded in the residue
//! (`-1/p` is stored as `(p-1)/p`), so no sign flag is carried.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::square_equivalent;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkFormError {
    #[error("order must be positive, got {0}")]
    NonPositiveOrder(i64),
    #[error("{q}/{p} is not a nondegenerate form")]
    NotCoprime { q: i64, p: i64 },
    #[error("|n| = {0} is divisible by 3; the knot would be null-homologous")]
    NullHomologous(i64),
    #[error("n must be nonzero")]
    ZeroOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct LinkingForm {
    p: i64,
    q: i64,
}

impl LinkingForm {
    pub fn new(q: i64, p: i64) -> Result<Self, LinkFormError> {
        if p < 1 {
            return Err(LinkFormError::NonPositiveOrder(p));
        }
        let q = q.rem_euclid(p);
        if p > 1 && q.gcd(&p) != 1 {
            return Err(LinkFormError::NotCoprime { q, p });
        }
        Ok(LinkingForm { p, q })
    }

    pub fn order(&self) -> i64 {
        self.p
    }

    pub fn residue(&self) -> i64 {
        self.q
    }

    pub fn is_trivial(&self) -> bool {
        self.p == 1
    }
}

impl fmt::Display for LinkingForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.q, self.p)
    }
}

/// Form of the filling `(3k±1)m + kℓ` on the exterior of a homologically
/// essential knot in `L(3,1)`: `k/|n|`.
pub fn filling_linking_form(n: i64) -> Result<LinkingForm, LinkFormError> {
    if n == 0 {
        return Err(LinkFormError::ZeroOrder);
    }
    let m = n.abs();
    let k = match m % 3 {
        1 => (m - 1) / 3,
        2 => (m + 1) / 3,
        _ => return Err(LinkFormError::NullHomologous(m)),
    };
    LinkingForm::new(k, m)
}

/// Form of `L(n,1)` with orientation: `sign(n)/|n|`.
pub fn target_linking_form(n: i64) -> Result<LinkingForm, LinkFormError> {
    if n == 0 {
        return Err(LinkFormError::ZeroOrder);
    }
    LinkingForm::new(n.signum(), n.abs())
}

pub fn linking_forms_equivalent(f: &LinkingForm, g: &LinkingForm) -> bool {
    f.p == g.p && square_equivalent(f.q, g.q, f.p).expect("forms are validated")
}
