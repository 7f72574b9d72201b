//! The obstruction kernel: slopes, local h-invariants and the Ni–Wu formula,
//! the spin analysis for even targets, the N₀ identities for each surgery
//! branch, and the six quadratics whose integral roots decide the second
//! Spin^c structure.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::exactnum::{integral_roots_monic, Rational, RootList};
use crate::lens::{self, d_l_n1, normalize, LensError, SpinC};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("local h sequence violates V_i >= V_(i+1) >= V_i - 1 at index {0}")]
    NotMonotone(usize),
    #[error("local h sequence has {len} entries, need at least {needed}")]
    SequenceTooShort { len: usize, needed: usize },
    #[error("n must be nonzero")]
    ZeroOrder,
    #[error("n = {0} is odd")]
    OddOrder(i64),
    #[error("branch {branch} does not apply to n = {n}")]
    BranchMismatch { branch: Branch, n: i64 },
    #[error("no self-conjugate structure on L({n},1) satisfies the pairing condition")]
    NoSpinSelection { n: i64 },
    #[error("k must be at least 1, got {0}")]
    InvalidK(u64),
    #[error("unknown quadratic tag {0:?}")]
    UnknownQuadratic(String),
    #[error(transparent)]
    Lens(#[from] LensError),
}

/// The peripheral class `a·m + b·ℓ` on the boundary torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Slope {
    pub a: i64,
    pub b: i64,
}

impl Slope {
    pub fn new(a: i64, b: i64) -> Self {
        Slope { a, b }
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b) == 1
    }
}

/// Minimal geometric intersection number `|a1·b2 - b1·a2|`.
pub fn slope_distance(s1: Slope, s2: Slope) -> u64 {
    (s1.a as i128 * s2.b as i128 - s1.b as i128 * s2.a as i128).unsigned_abs() as u64
}

/// Rasmussen's local h-invariants `V_0, V_1, ...`, non-negative with
/// `V_i >= V_(i+1) >= V_i - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalHSequence(Vec<u64>);

impl LocalHSequence {
    pub fn new(values: Vec<u64>) -> Result<Self, SurgeryError> {
        for (i, w) in values.windows(2).enumerate() {
            if !(w[0] >= w[1] && w[1] + 1 >= w[0]) {
                return Err(SurgeryError::NotMonotone(i));
            }
        }
        Ok(LocalHSequence(values))
    }

    /// `V ≡ 0` on indices `0..=p`.
    pub fn zeros(p: u64) -> Self {
        LocalHSequence(vec![0; p as usize + 1])
    }

    pub fn get(&self, i: usize) -> Option<u64> {
        self.0.get(i).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `d(Y_p(K), t_i) = d(Y, t) + d(L(p,1), i) - 2·max(V_i, V_(p-i))`.
pub fn ni_wu_d(
    d_base: &Rational,
    p: u64,
    i: SpinC,
    v: &LocalHSequence,
) -> Result<Rational, SurgeryError> {
    if p == 0 {
        return Err(SurgeryError::ZeroOrder);
    }
    if i.0 >= p {
        return Err(LensError::IndexOutOfRange { i: i.0, p }.into());
    }
    let needed = p as usize + 1;
    if v.len() < needed {
        return Err(SurgeryError::SequenceTooShort { len: v.len(), needed });
    }
    let n = v.0[i.0 as usize].max(v.0[(p - i.0) as usize]);
    let lens_term = d_l_n1(p as i64, i.0)?;
    Ok(d_base + &lens_term - Rational::from_integer(2 * n as i64))
}

/// `(V_s, H_s)` for the unknot: `V_s = max(0, -s)`, `H_s = max(0, s)`.
pub fn unknot_local_h(s: i64) -> (i64, i64) {
    ((-s).max(0), s.max(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Definiteness {
    Positive,
    Negative,
}

impl fmt::Display for Definiteness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Definiteness::Positive => "positive",
            Definiteness::Negative => "negative",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EvenSpinSolution {
    pub spin: SpinC,
    pub definiteness: Definiteness,
}

/// Spin structures on `L(n,1)`, `n` even, that can bound the spin two-handle
/// cobordism from `L(3,1)`.
///
/// Positive-definite needs `d(L(n,1), i) = d(L(3,1), 0) - 1/4 = 1/4`,
/// negative-definite needs `d(L(n,1), i) = 3/4`, with `i` one of the two
/// self-conjugate structures `0` and `|n|/2`.
pub fn even_spin_solutions(n: i64) -> Result<BTreeSet<EvenSpinSolution>, SurgeryError> {
    if n == 0 {
        return Err(SurgeryError::ZeroOrder);
    }
    if n % 2 != 0 {
        return Err(SurgeryError::OddOrder(n));
    }
    let quarter = Rational::new(1, 4).unwrap();
    let three_quarters = Rational::new(3, 4).unwrap();
    let mut out = BTreeSet::new();
    for i in [0, n.unsigned_abs() / 2] {
        let d = d_l_n1(n, i)?;
        if d == quarter {
            out.insert(EvenSpinSolution { spin: SpinC(i), definiteness: Definiteness::Positive });
        }
        if d == three_quarters {
            out.insert(EvenSpinSolution { spin: SpinC(i), definiteness: Definiteness::Negative });
        }
    }
    Ok(out)
}

/// Sign of the surgery coefficient `±k` on a null-homologous knot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurgerySign {
    Plus,
    Minus,
}

impl SurgerySign {
    pub fn as_i64(self) -> i64 {
        match self {
            SurgerySign::Plus => 1,
            SurgerySign::Minus => -1,
        }
    }

    /// The cobordism of `±k` surgery on a null-homologous knot has
    /// intersection form `(±k)`.
    pub fn definiteness(self) -> Definiteness {
        match self {
            SurgerySign::Plus => Definiteness::Positive,
            SurgerySign::Minus => Definiteness::Negative,
        }
    }
}

impl fmt::Display for SurgerySign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurgerySign::Plus => "+k",
            SurgerySign::Minus => "-k",
        })
    }
}

/// Which family of distance one surgery produces `L(n,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `|n| = 3k`: `±k` surgery on a null-homologous knot.
    NullHomologous(SurgerySign),
    /// `|n| = 3k + 1`: homologically essential knot, slope `(3k+1)m + kℓ`.
    ThreeKPlusOne,
    /// `|n| = 3k - 1`: homologically essential knot, slope `(3k-1)m + kℓ`.
    ThreeKMinusOne,
}

impl Branch {
    /// The essential branch for `n`, or `None` when `3 | n`.
    pub fn essential_for(n: i64) -> Option<Branch> {
        match n.abs() % 3 {
            0 => None,
            1 => Some(Branch::ThreeKPlusOne),
            _ => Some(Branch::ThreeKMinusOne),
        }
    }

    pub fn accepts(&self, n: i64) -> bool {
        let residue = n.abs() % 3;
        match self {
            Branch::NullHomologous(_) => residue == 0,
            Branch::ThreeKPlusOne => residue == 1,
            Branch::ThreeKMinusOne => residue == 2,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::NullHomologous(sign) => write!(f, "3k ({sign} surgery)"),
            Branch::ThreeKPlusOne => f.write_str("3k+1"),
            Branch::ThreeKMinusOne => f.write_str("3k-1"),
        }
    }
}

/// The `k` of `|n| = 3k`, `3k + 1` or `3k - 1`.
pub fn branch_k(n: i64) -> u64 {
    let m = n.unsigned_abs();
    match m % 3 {
        0 => m / 3,
        1 => (m - 1) / 3,
        _ => (m + 1) / 3,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct N0Result {
    pub value: Rational,
    pub spin: SpinC,
    pub branch: Branch,
}

impl N0Result {
    /// N₀ is a local h-invariant, so anything but a non-negative integer
    /// obstructs.
    pub fn is_admissible(&self) -> bool {
        self.value.is_nonnegative_integer()
    }
}

/// `d(L(|n|,3), 1)` and `d(L(|n|,3), 4)` as they appear in the essential
/// surgery identities, with the index read mod `|n|`.
pub fn essential_reference_d(n: i64, index: u64) -> Result<Rational, SurgeryError> {
    let norm = normalize(n.abs(), 3)?;
    let spin = norm.lens.spin(index as i64);
    Ok(lens::d_invariant(&norm.lens, spin)?)
}

/// N₀ for the branch producing `L(n,1)`, computed at the self-conjugate
/// structure the corresponding surgery identity uses.
///
/// - `|n| = 3k`, sign `σ`: after mirroring by `σ`, `L(σn,1)` is `+k` surgery
///   on `σL(3,1)`, so `2N₀ = σ/2 + d(L(k,1),0) - d(L(σn,1),0)`.
/// - `|n| = 3k+1`: `2N₀ = d(Y',t) + d(L(3k+1,3),1)`.
/// - `|n| = 3k-1`: `2N₀ = d(L(3k-1,3),1) - d(Y',t)`.
///
/// When `Y'` has two self-conjugate structures, `t` is the one whose partner
/// has `d = 3/4` (for `3k+1`) or `d = 1/4` (for `3k-1`).
pub fn self_conjugate_n0(n: i64, branch: Branch) -> Result<N0Result, SurgeryError> {
    if n == 0 {
        return Err(SurgeryError::ZeroOrder);
    }
    if !branch.accepts(n) {
        return Err(SurgeryError::BranchMismatch { branch, n });
    }
    let k = branch_k(n);
    match branch {
        Branch::NullHomologous(sign) => {
            let s = sign.as_i64();
            let twice = Rational::new(s, 2).unwrap() + d_l_n1(k as i64, 0)? - d_l_n1(s * n, 0)?;
            Ok(N0Result { value: twice.half(), spin: SpinC(0), branch })
        }
        Branch::ThreeKPlusOne | Branch::ThreeKMinusOne => {
            let (partner_d, plus) = match branch {
                Branch::ThreeKPlusOne => (Rational::new(3, 4).unwrap(), true),
                _ => (Rational::new(1, 4).unwrap(), false),
            };
            let target = normalize(n.abs(), 1)?.lens;
            let candidates: Vec<SpinC> = target.self_conjugate_spins().into_iter().collect();
            let mut chosen = None;
            for &t in &candidates {
                let partners_ok = candidates
                    .iter()
                    .filter(|&&u| u != t)
                    .map(|u| d_l_n1(n, u.0))
                    .collect::<Result<Vec<_>, _>>()?
                    .into_iter()
                    .all(|d| d == partner_d);
                if partners_ok {
                    chosen = Some(t);
                    break;
                }
            }
            let t = chosen.ok_or(SurgeryError::NoSpinSelection { n })?;
            let d_target = d_l_n1(n, t.0)?;
            let d_ref = essential_reference_d(n, 1)?;
            let twice = if plus { d_target + d_ref } else { d_ref - d_target };
            Ok(N0Result { value: twice.half(), spin: t, branch })
        }
    }
}

/// The six quadratics in the root variable `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Quadratic {
    /// `j² - 3kj - (3k-3)`, from `N₁ = N₀` on `|n| = 3k`.
    B1,
    /// `j² - 3kj + (3k+3)`, from `N₁ = N₀ - 1` on `|n| = 3k`.
    B2,
    /// `j² - (1+3k)j + (2-3k)`, from `N₁ = N₀` on `|n| = 3k+1`.
    B3,
    /// `j² - (1+3k)j + (3k+4)`, from `N₁ = N₀ - 1` on `|n| = 3k+1`.
    B4,
    /// `j² + (1-3k)j + (4-3k)`, from `N₁ = N₀` on `|n| = 3k-1`.
    B5,
    /// `j² + (1-3k)j + (3k+2)`, from `N₁ = N₀ - 1` on `|n| = 3k-1`.
    B6,
}

impl Quadratic {
    pub const ALL: [Quadratic; 6] =
        [Quadratic::B1, Quadratic::B2, Quadratic::B3, Quadratic::B4, Quadratic::B5, Quadratic::B6];

    /// `(b, c)` of the monic quadratic `j² + bj + c`.
    pub fn coefficients(self, k: i64) -> (i64, i64) {
        match self {
            Quadratic::B1 => (-3 * k, -(3 * k - 3)),
            Quadratic::B2 => (-3 * k, 3 * k + 3),
            Quadratic::B3 => (-(1 + 3 * k), 2 - 3 * k),
            Quadratic::B4 => (-(1 + 3 * k), 3 * k + 4),
            Quadratic::B5 => (1 - 3 * k, 4 - 3 * k),
            Quadratic::B6 => (1 - 3 * k, 3 * k + 2),
        }
    }

    /// `|n|`, the exclusive upper end of the root window `(0, |n|)`.
    pub fn order(self, k: i64) -> i64 {
        match self {
            Quadratic::B1 | Quadratic::B2 => 3 * k,
            Quadratic::B3 | Quadratic::B4 => 3 * k + 1,
            Quadratic::B5 | Quadratic::B6 => 3 * k - 1,
        }
    }

    /// How far `N₁` sits below `N₀` for this quadratic.
    pub fn n1_drop(self) -> i64 {
        match self {
            Quadratic::B1 | Quadratic::B3 | Quadratic::B5 => 0,
            Quadratic::B2 | Quadratic::B4 | Quadratic::B6 => 1,
        }
    }

    /// The pair tried for each branch family.
    pub fn pair_for(branch: Branch) -> [Quadratic; 2] {
        match branch {
            Branch::NullHomologous(_) => [Quadratic::B1, Quadratic::B2],
            Branch::ThreeKPlusOne => [Quadratic::B3, Quadratic::B4],
            Branch::ThreeKMinusOne => [Quadratic::B5, Quadratic::B6],
        }
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Quadratic {
    type Err = SurgeryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Quadratic::ALL
            .into_iter()
            .find(|q| q.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| SurgeryError::UnknownQuadratic(s.to_string()))
    }
}

/// Integral roots of the named quadratic in `(0, |n|)`.
pub fn quadratic_obstruction_roots(branch: Quadratic, k: u64) -> Result<RootList, SurgeryError> {
    if k < 1 {
        return Err(SurgeryError::InvalidK(k));
    }
    let k = k as i64;
    let (b, c) = branch.coefficients(k);
    Ok(integral_roots_monic(b, c, 0, branch.order(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lens::LensSpace;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn sol(i: u64, definiteness: Definiteness) -> EvenSpinSolution {
        EvenSpinSolution { spin: SpinC(i), definiteness }
    }

    #[test]
    fn slope_distance_examples() {
        assert_eq!(slope_distance(Slope::new(3, 1), Slope::new(7, 2)), 1);
        assert_eq!(slope_distance(Slope::new(1, 0), Slope::new(1, 0)), 0);
        assert_eq!(slope_distance(Slope::new(3, 1), Slope::new(6, 1)), 3);
    }

    #[test]
    fn essential_fillings_are_distance_one() {
        let meridian = Slope::new(3, 1);
        for k in 1..200 {
            for order in [3 * k + 1, 3 * k - 1] {
                let filling = Slope::new(order, k);
                assert!(filling.is_primitive());
                assert_eq!(slope_distance(meridian, filling), 1);
            }
            // any 3k m + s ℓ meets the meridian a multiple of 3 times
            for s in -20..20 {
                assert_eq!(slope_distance(meridian, Slope::new(3 * k, s)) % 3, 0);
            }
        }
    }

    #[test]
    fn local_h_validation() {
        assert!(LocalHSequence::new(vec![3, 2, 2, 1, 0, 0]).is_ok());
        assert_eq!(LocalHSequence::new(vec![3, 1]), Err(SurgeryError::NotMonotone(0)));
        assert_eq!(LocalHSequence::new(vec![0, 1]), Err(SurgeryError::NotMonotone(0)));
    }

    #[test]
    fn ni_wu_examples() {
        let zeros = LocalHSequence::zeros(5);
        assert_eq!(ni_wu_d(&Rational::zero(), 5, SpinC(1), &zeros).unwrap(), r(1, 5));
        let x = r(7, 3);
        assert_eq!(
            ni_wu_d(&x, 5, SpinC(3), &zeros).unwrap(),
            &x + &d_l_n1(5, 3).unwrap()
        );
        let v = LocalHSequence::new(vec![1, 0, 0, 0]).unwrap();
        assert_eq!(ni_wu_d(&Rational::zero(), 3, SpinC(1), &v).unwrap(), d_l_n1(3, 1).unwrap());
        // i = 0 sees max(V_0, V_3) = 1
        assert_eq!(
            ni_wu_d(&Rational::zero(), 3, SpinC(0), &v).unwrap(),
            d_l_n1(3, 0).unwrap() - Rational::from_integer(2)
        );
        assert!(ni_wu_d(&Rational::zero(), 3, SpinC(3), &v).is_err());
        assert!(matches!(
            ni_wu_d(&Rational::zero(), 9, SpinC(0), &v),
            Err(SurgeryError::SequenceTooShort { .. })
        ));
    }

    #[test]
    fn unknot_examples() {
        assert_eq!(unknot_local_h(0), (0, 0));
        assert_eq!(unknot_local_h(-3), (3, 0));
        assert_eq!(unknot_local_h(2), (0, 2));
    }

    #[test]
    fn even_spin_examples() {
        let set = |n| even_spin_solutions(n).unwrap().into_iter().collect::<Vec<_>>();
        assert_eq!(set(2), vec![sol(0, Definiteness::Positive)]);
        assert_eq!(set(4), vec![sol(0, Definiteness::Negative)]);
        assert_eq!(set(-10), vec![sol(5, Definiteness::Positive)]);
        assert!(set(6).is_empty());
        assert_eq!(even_spin_solutions(3), Err(SurgeryError::OddOrder(3)));
    }

    #[test]
    fn n0_examples() {
        let n0 = self_conjugate_n0(7, Branch::ThreeKPlusOne).unwrap();
        assert_eq!(n0.value, Rational::from_integer(1));
        let n0 = self_conjugate_n0(-14, Branch::ThreeKMinusOne).unwrap();
        assert_eq!(n0.value, Rational::from_integer(2));
        assert_eq!(n0.spin, SpinC(0));
        let n0 = self_conjugate_n0(-13, Branch::ThreeKPlusOne).unwrap();
        assert_eq!(n0.value, Rational::from_integer(-1));
        assert!(!n0.is_admissible());
        // d(Y',t) = -d(L(13,1),0) = -3 and d(L(13,3),1) = 1
        assert_eq!(d_l_n1(-13, 0).unwrap(), Rational::from_integer(-3));
        assert_eq!(essential_reference_d(-13, 1).unwrap(), Rational::from_integer(1));
    }

    #[test]
    fn n0_branch_mismatch() {
        assert!(matches!(
            self_conjugate_n0(7, Branch::ThreeKMinusOne),
            Err(SurgeryError::BranchMismatch { .. })
        ));
        assert!(matches!(
            self_conjugate_n0(6, Branch::ThreeKPlusOne),
            Err(SurgeryError::BranchMismatch { .. })
        ));
        assert_eq!(self_conjugate_n0(0, Branch::ThreeKPlusOne), Err(SurgeryError::ZeroOrder));
    }

    #[test]
    fn n0_null_homologous_closed_forms() {
        use SurgerySign::*;
        for k in 1..200i64 {
            let n0 = |n, s| self_conjugate_n0(n, Branch::NullHomologous(s)).unwrap().value;
            assert_eq!(n0(3 * k, Plus), r(1 - k, 4));
            assert_eq!(n0(-3 * k, Minus), r(-1 - k, 4));
            assert_eq!(n0(3 * k, Minus), r(k - 1, 2));
            assert_eq!(n0(-3 * k, Plus), r(k, 2));
        }
    }

    #[test]
    fn n0_essential_closed_forms() {
        for k in 1..200i64 {
            // 3k+1, odd target: N0 = k/2 for n > 0, -k/4 for n < 0
            if (3 * k + 1) % 2 == 1 {
                assert_eq!(self_conjugate_n0(3 * k + 1, Branch::ThreeKPlusOne).unwrap().value, r(k, 2));
                assert_eq!(self_conjugate_n0(-3 * k - 1, Branch::ThreeKPlusOne).unwrap().value, r(-k, 4));
            }
            let m = 3 * k - 1;
            if m % 2 == 1 {
                assert_eq!(self_conjugate_n0(m, Branch::ThreeKMinusOne).unwrap().value, r(-k, 4));
            }
            // negative 3k-1: N0 = (k-1)/2 whether or not the target is even
            assert_eq!(self_conjugate_n0(-m, Branch::ThreeKMinusOne).unwrap().value, r(k - 1, 2));
        }
        assert_eq!(self_conjugate_n0(4, Branch::ThreeKPlusOne).unwrap().value, Rational::zero());
        assert_eq!(self_conjugate_n0(2, Branch::ThreeKMinusOne).unwrap().value, Rational::zero());
        assert_eq!(self_conjugate_n0(-8, Branch::ThreeKMinusOne).unwrap().value, Rational::from_integer(1));
        assert_eq!(
            self_conjugate_n0(8, Branch::ThreeKMinusOne),
            Err(SurgeryError::NoSpinSelection { n: 8 })
        );
    }

    #[test]
    fn quadratic_examples() {
        assert_eq!(quadratic_obstruction_roots(Quadratic::B2, 2).unwrap().roots(), &[3]);
        assert!(quadratic_obstruction_roots(Quadratic::B4, 4).unwrap().is_empty());
        assert!(quadratic_obstruction_roots(Quadratic::B5, 5).unwrap().is_empty());
        let (b, c) = Quadratic::B5.coefficients(5);
        assert_eq!(b * b - 4 * c, 240);
        assert_eq!(quadratic_obstruction_roots(Quadratic::B1, 0), Err(SurgeryError::InvalidK(0)));
        assert_eq!("b4".parse::<Quadratic>().unwrap(), Quadratic::B4);
        assert!(matches!("B7".parse::<Quadratic>(), Err(SurgeryError::UnknownQuadratic(_))));
    }

    // The quadratics are the Spin^c-shifted surgery identities cleared of
    // denominators. Scan j directly against the rational identities.
    #[test]
    fn quadratics_match_surgery_identities() {
        for k in 2..150i64 {
            let km = k as u64;
            // |n| = 3k, mixed signs: 2N1 = σ/2 + d(L(k,1),1) - d(L(σn,1), j)
            for (n, sign, n0) in [(3 * k, -1, r(k - 1, 2)), (-3 * k, 1, r(k, 2))] {
                for (quad, n1) in [(Quadratic::B1, n0.clone()), (Quadratic::B2, &n0 - &Rational::from_integer(1))] {
                    let roots = quadratic_obstruction_roots(quad, km).unwrap();
                    for j in 1..3 * k {
                        let rhs = r(sign, 2) + d_l_n1(k, 1).unwrap() - d_l_n1(sign * n, j as u64).unwrap();
                        let holds = rhs == Rational::from_integer(2) * n1.clone();
                        assert_eq!(holds, roots.roots().contains(&j), "{quad} k={k} j={j} n={n}");
                    }
                }
            }
            // |n| = 3k+1 > 0: d(L(n,1), j) + d(L(n,3), 4) = 2N1, N0 = k/2
            let n = 3 * k + 1;
            let d4 = essential_reference_d(n, 4).unwrap();
            for (quad, n1) in [(Quadratic::B3, r(k, 2)), (Quadratic::B4, r(k - 2, 2))] {
                let roots = quadratic_obstruction_roots(quad, km).unwrap();
                for j in 1..n {
                    let holds = d_l_n1(n, j as u64).unwrap() + &d4 == Rational::from_integer(2) * n1.clone();
                    assert_eq!(holds, roots.roots().contains(&j), "{quad} k={k} j={j}");
                }
            }
            // |n| = 3k-1, n < 0: -d(L(|n|,1), j) = d(L(|n|,3), 4) - 2N1, N0 = (k-1)/2
            let m = 3 * k - 1;
            let d4 = essential_reference_d(m, 4).unwrap();
            for (quad, n1) in [(Quadratic::B5, r(k - 1, 2)), (Quadratic::B6, r(k - 3, 2))] {
                let roots = quadratic_obstruction_roots(quad, km).unwrap();
                for j in 1..m {
                    let holds = d_l_n1(-m, j as u64).unwrap() == &d4 - &(Rational::from_integer(2) * n1.clone());
                    assert_eq!(holds, roots.roots().contains(&j), "{quad} k={k} j={j}");
                }
            }
        }
    }

    #[test]
    fn reference_d_values_use_recursion() {
        let l = LensSpace::new(13, 3).unwrap();
        assert_eq!(essential_reference_d(13, 1).unwrap(), l.d_invariant(SpinC(1)).unwrap());
        assert_eq!(essential_reference_d(2, 1).unwrap(), r(-1, 4));
    }

    #[test]
    fn branch_helpers() {
        assert_eq!(Branch::essential_for(7), Some(Branch::ThreeKPlusOne));
        assert_eq!(Branch::essential_for(-7), Some(Branch::ThreeKPlusOne));
        assert_eq!(Branch::essential_for(-8), Some(Branch::ThreeKMinusOne));
        assert_eq!(Branch::essential_for(9), None);
        assert_eq!(branch_k(7), 2);
        assert_eq!(branch_k(-8), 3);
        assert_eq!(branch_k(-6), 2);
    }
}
