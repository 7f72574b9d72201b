//! Decision tree over `n`: every applicable obstruction to a distance one
//! surgery from `L(3,1)` to `L(n,1)`, run in a fixed order and recorded.
//!
//! The branch is chosen by `|n| mod 3`:
//!
//! - `|n| = 1`: `S^3`, realized.
//! - `|n| = 3k`: the knot is null-homologous and the coefficient is `±k`.
//!   Both signs are evaluated; `n` is obstructed only if both are excluded.
//! - `|n| = 3k ± 1`: the knot is homologically essential.
//!
//! Checks never claim more than their hypotheses allow: outside a guard a
//! check reports [`Outcome::Inconclusive`].

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::band::{witness_for, WitnessEntry};
use crate::exactnum::Rational;
use crate::linkform::{filling_linking_form, linking_forms_equivalent, target_linking_form};
use crate::surgery::{
    branch_k, even_spin_solutions, quadratic_obstruction_roots, self_conjugate_n0, Branch,
    Definiteness, N0Result, Quadratic, SurgeryError, SurgerySign,
};

/// The values of `n` for which `L(n,1)` is realized.
pub const REALIZABLE: [i64; 8] = [-6, -2, -1, 1, 2, 3, 4, 7];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    TorsionFreeHomology,
    UnitOrder,
    CoprimeCoefficient,
    EvenSpin,
    LinkingForm,
    N0,
    Quadratic,
    SignExhaustion,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::TorsionFreeHomology => "torsion-free-homology",
            CheckKind::UnitOrder => "unit-order",
            CheckKind::CoprimeCoefficient => "coprime-coefficient",
            CheckKind::EvenSpin => "even-spin",
            CheckKind::LinkingForm => "linking-form",
            CheckKind::N0 => "n0",
            CheckKind::Quadratic => "quadratic",
            CheckKind::SignExhaustion => "sign-exhaustion",
        }
    }

    fn citation(self) -> &'static str {
        match self {
            CheckKind::TorsionFreeHomology => {
                "surgery on a null-homologous knot in L(3,1) never has torsion-free homology"
            }
            CheckKind::UnitOrder => "S^3 is reached by the banding from T(2,3) to the unknot",
            CheckKind::CoprimeCoefficient => {
                "null-homologous +-k surgery has H_1 = Z/3 + Z/k, cyclic only when gcd(k,3) = 1"
            }
            CheckKind::EvenSpin => {
                "a spin two-handle cobordism between L-spaces with b2 = 1 shifts d by exactly -1/4"
            }
            CheckKind::LinkingForm => "linking forms q/p and m/p agree iff q = m a^2 mod p for a unit a",
            CheckKind::N0 => "d-invariant surgery formula at the self-conjugate structure (Ni-Wu type)",
            CheckKind::Quadratic => {
                "Rasmussen monotonicity V_1 in {V_0, V_0 - 1} applied to the next Spin^c structure"
            }
            CheckKind::SignExhaustion => "the surgery coefficient is +k or -k; both must be excluded",
        }
    }
}

/// A check together with the surgery sign it is scoped to, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CheckId {
    pub kind: CheckKind,
    pub sign: Option<SurgerySign>,
}

impl CheckId {
    pub fn new(kind: CheckKind) -> Self {
        CheckId { kind, sign: None }
    }

    pub fn signed(kind: CheckKind, sign: SurgerySign) -> Self {
        CheckId { kind, sign: Some(sign) }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Some(sign) => write!(f, "{}[{sign}]", self.kind.name()),
            None => f.write_str(self.kind.name()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    /// Rules out `n` outright.
    Obstructs,
    /// Rules out one surgery sign of a `|n| = 3k` case.
    Excludes,
    Passes,
    Inconclusive,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Obstructs => "obstructs",
            Outcome::Excludes => "excludes",
            Outcome::Passes => "passes",
            Outcome::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub check: CheckId,
    pub inputs: BTreeMap<String, String>,
    pub outcome: Outcome,
    pub detail: String,
    pub citation: String,
}

impl CheckRecord {
    fn new(check: CheckId, outcome: Outcome, detail: impl Into<String>) -> Self {
        CheckRecord {
            check,
            inputs: BTreeMap::new(),
            outcome,
            detail: detail.into(),
            citation: check.kind.citation().to_string(),
        }
    }

    fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    fn rules_out(&self) -> bool {
        matches!(self.outcome, Outcome::Obstructs | Outcome::Excludes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Obstructed,
    NotObstructed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Obstructed => "Obstructed",
            Verdict::NotObstructed => "NotObstructed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub n: i64,
    pub verdict: Verdict,
    pub firing_check: Option<CheckId>,
    pub trace: Vec<CheckRecord>,
    pub witness: Option<WitnessEntry>,
}

impl ObstructionReport {
    fn from_trace(n: i64, trace: Vec<CheckRecord>) -> Self {
        let firing_check = trace.iter().find(|r| r.outcome == Outcome::Obstructs).map(|r| r.check);
        let verdict = if firing_check.is_some() { Verdict::Obstructed } else { Verdict::NotObstructed };
        let witness = match verdict {
            Verdict::NotObstructed => witness_for(n),
            Verdict::Obstructed => None,
        };
        ObstructionReport { n, verdict, firing_check, trace, witness }
    }

    pub fn is_obstructed(&self) -> bool {
        self.verdict == Verdict::Obstructed
    }

    /// The N₀ that decides the report: the surviving sign's value when
    /// there is one, otherwise the first computed.
    pub fn n0(&self) -> Option<&str> {
        let n0_records = || self.trace.iter().filter(|r| r.check.kind == CheckKind::N0);
        n0_records()
            .find(|r| r.outcome == Outcome::Passes)
            .or_else(|| n0_records().next())
            .and_then(|r| r.inputs.get("N0"))
            .map(String::as_str)
    }
}

/// Relative order of the two independent essential-branch checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckOrder {
    #[default]
    LinkingFormFirst,
    N0First,
}

pub fn classify(n: i64) -> ObstructionReport {
    classify_with_order(n, CheckOrder::default())
}

pub fn classify_with_order(n: i64, order: CheckOrder) -> ObstructionReport {
    let m = n.unsigned_abs();
    let mut trace = Vec::new();
    if n == 0 {
        trace.push(torsion_free_check());
    } else if m == 1 {
        trace.push(unit_order_check(n));
    } else if m.is_multiple_of(3) {
        let coprime = coprime_coefficient_check(n);
        let blocked = coprime.rules_out();
        trace.push(coprime);
        if !blocked {
            for sign in [SurgerySign::Plus, SurgerySign::Minus] {
                trace.extend(sign_case_checks(n, sign));
            }
            trace.push(sign_exhaustion_check(n));
        }
    } else {
        let branch = Branch::essential_for(n).expect("3 does not divide n");
        if n % 2 == 0 {
            trace.push(even_spin_check(n, branch));
        }
        let linking = linking_form_check(n);
        let n0 = n0_check(n, branch);
        match order {
            CheckOrder::LinkingFormFirst => trace.extend([linking, n0]),
            CheckOrder::N0First => trace.extend([n0, linking]),
        }
        trace.push(quadratic_check(n, branch));
    }
    ObstructionReport::from_trace(n, trace)
}

/// Re-runs a single check in isolation. `None` when the check does not
/// apply to `n`.
pub fn run_check(n: i64, check: CheckId) -> Option<CheckRecord> {
    let m = n.unsigned_abs();
    let null_homologous = m.is_multiple_of(3) && n != 0;
    let essential = Branch::essential_for(n).filter(|_| m > 1);
    let sign_ok = |kind| {
        null_homologous && check.sign.is_some() || essential.is_some() && check.sign.is_none() && kind
    };
    match check.kind {
        CheckKind::TorsionFreeHomology => (n == 0).then(torsion_free_check),
        CheckKind::UnitOrder => (m == 1).then(|| unit_order_check(n)),
        CheckKind::CoprimeCoefficient => null_homologous.then(|| coprime_coefficient_check(n)),
        CheckKind::SignExhaustion => {
            (null_homologous && check.sign.is_none()).then(|| sign_exhaustion_check(n))
        }
        CheckKind::LinkingForm => essential.filter(|_| check.sign.is_none()).map(|_| linking_form_check(n)),
        CheckKind::EvenSpin | CheckKind::N0 | CheckKind::Quadratic => {
            if !sign_ok(true) || (check.kind == CheckKind::EvenSpin && n % 2 != 0) {
                return None;
            }
            match (check.sign, essential) {
                (Some(sign), _) => {
                    sign_case_checks(n, sign).into_iter().find(|r| r.check == check)
                }
                (None, Some(branch)) => Some(match check.kind {
                    CheckKind::EvenSpin => even_spin_check(n, branch),
                    CheckKind::N0 => n0_check(n, branch),
                    _ => quadratic_check(n, branch),
                }),
                (None, None) => None,
            }
        }
    }
}

fn torsion_free_check() -> CheckRecord {
    CheckRecord::new(
        CheckId::new(CheckKind::TorsionFreeHomology),
        Outcome::Obstructs,
        "n = 0 is S^2 x S^1, whose homology is torsion-free",
    )
    .input("n", 0)
}

fn unit_order_check(n: i64) -> CheckRecord {
    CheckRecord::new(CheckId::new(CheckKind::UnitOrder), Outcome::Passes, "L(±1,1) is S^3")
        .input("n", n)
}

fn coprime_coefficient_check(n: i64) -> CheckRecord {
    let k = branch_k(n);
    let g = k.gcd(&3);
    let outcome = if g == 1 { Outcome::Passes } else { Outcome::Obstructs };
    let detail = if g == 1 {
        format!("|n| = 3k with k = {k} prime to 3")
    } else {
        format!("|n| = 3k with k = {k} divisible by 3: Z/3 + Z/k is not cyclic")
    };
    CheckRecord::new(CheckId::new(CheckKind::CoprimeCoefficient), outcome, detail)
        .input("k", k)
        .input("gcd(k,3)", g)
}

/// The mixed-sign cases (`n = 3k` by `-k`, `n = -3k` by `+k`) are the ones
/// whose N₀ can be non-negative beyond `k = 1`; only they carry a quadratic
/// step. Returns the `k` range over which "no root" is a proven exclusion.
fn mixed_sign_range(n: i64, sign: SurgerySign) -> Option<fn(u64) -> bool> {
    match (n > 0, sign) {
        (true, SurgerySign::Minus) => Some(|k| k >= 2),
        (false, SurgerySign::Plus) => Some(|k| k == 1 || k > 2),
        _ => None,
    }
}

fn sign_case_checks(n: i64, sign: SurgerySign) -> Vec<CheckRecord> {
    let k = branch_k(n);
    let mut out = Vec::new();
    if n % 2 == 0 {
        let required = sign.definiteness();
        let id = CheckId::signed(CheckKind::EvenSpin, sign);
        out.push(even_spin_record(id, n, required, Outcome::Excludes));
    }

    let n0_id = CheckId::signed(CheckKind::N0, sign);
    let n0 = self_conjugate_n0(n, Branch::NullHomologous(sign)).expect("3 divides n");
    out.push(n0_record(n0_id, &n0, Outcome::Excludes));

    let quad_id = CheckId::signed(CheckKind::Quadratic, sign);
    let record = match mixed_sign_range(n, sign) {
        None => CheckRecord::new(
            quad_id,
            Outcome::Inconclusive,
            "same-sign case is decided by N0 alone",
        ),
        Some(_) if !n0.is_admissible() => {
            CheckRecord::new(quad_id, Outcome::Inconclusive, "N0 is not admissible")
        }
        Some(_) if k < 2 => CheckRecord::new(
            quad_id,
            Outcome::Inconclusive,
            "k = 1: the second Spin^c structure is not available",
        ),
        Some(in_range) => {
            let expected = match sign {
                SurgerySign::Minus => Rational::new(k as i64 - 1, 2).unwrap(),
                SurgerySign::Plus => Rational::new(k as i64, 2).unwrap(),
            };
            quadratic_record(quad_id, k, &n0, &expected, in_range(k), Outcome::Excludes)
        }
    };
    out.push(record.input("k", k));
    out
}

fn sign_exhaustion_check(n: i64) -> CheckRecord {
    let excluded: Vec<SurgerySign> = [SurgerySign::Plus, SurgerySign::Minus]
        .into_iter()
        .filter(|&sign| sign_case_checks(n, sign).iter().any(CheckRecord::rules_out))
        .collect();
    let both = excluded.len() == 2;
    let surviving: Vec<String> = [SurgerySign::Plus, SurgerySign::Minus]
        .into_iter()
        .filter(|s| !excluded.contains(s))
        .map(|s| s.to_string())
        .collect();
    let detail = if both {
        "both +k and -k surgery are excluded".to_string()
    } else {
        format!("surviving sign(s): {}", surviving.join(", "))
    };
    let outcome = if both { Outcome::Obstructs } else { Outcome::Passes };
    CheckRecord::new(CheckId::new(CheckKind::SignExhaustion), outcome, detail)
        .input("excluded", excluded.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","))
}

fn even_spin_record(id: CheckId, n: i64, required: Definiteness, failure: Outcome) -> CheckRecord {
    let solutions = even_spin_solutions(n).expect("n is even and nonzero");
    let rendered = solutions
        .iter()
        .map(|s| format!("(i={}, {})", s.spin, s.definiteness))
        .collect::<Vec<_>>()
        .join(" ");
    let ok = solutions.iter().any(|s| s.definiteness == required);
    let detail = if ok {
        format!("{required}-definite cobordism admits an extending spin structure")
    } else {
        format!("no spin structure on L({n},1) fits a {required}-definite spin cobordism")
    };
    CheckRecord::new(id, if ok { Outcome::Passes } else { failure }, detail)
        .input("required", required)
        .input("solutions", if rendered.is_empty() { "none".into() } else { rendered })
}

fn even_spin_check(n: i64, branch: Branch) -> CheckRecord {
    // Definiteness of the two-handle cobordism: positive for |n| = 3k-1,
    // negative for |n| = 3k+1.
    let required = match branch {
        Branch::ThreeKMinusOne => Definiteness::Positive,
        _ => Definiteness::Negative,
    };
    even_spin_record(CheckId::new(CheckKind::EvenSpin), n, required, Outcome::Obstructs)
}

fn linking_form_check(n: i64) -> CheckRecord {
    let filling = filling_linking_form(n).expect("essential branch");
    let target = target_linking_form(n).expect("n is nonzero");
    let ok = linking_forms_equivalent(&filling, &target);
    // the target residue is ±1, so it is its own inverse
    let p = filling.order();
    let ratio = (filling.residue() * target.residue()).rem_euclid(p);
    let detail = if ok {
        format!("{filling} ~ {target}: {ratio} is a square mod {p}")
    } else {
        format!("{filling} is not equivalent to {target}: {ratio} is not a square mod {p}")
    };
    CheckRecord::new(
        CheckId::new(CheckKind::LinkingForm),
        if ok { Outcome::Passes } else { Outcome::Obstructs },
        detail,
    )
    .input("filling", filling)
    .input("target", target)
}

fn n0_record(id: CheckId, n0: &N0Result, failure: Outcome) -> CheckRecord {
    let ok = n0.is_admissible();
    let detail = if ok {
        format!("N0 = {} is a non-negative integer", n0.value)
    } else if n0.value.is_negative() {
        format!("N0 = {} is negative", n0.value)
    } else {
        format!("N0 = {} is not an integer", n0.value)
    };
    CheckRecord::new(id, if ok { Outcome::Passes } else { failure }, detail)
        .input("N0", &n0.value)
        .input("spin", n0.spin)
}

fn n0_check(n: i64, branch: Branch) -> CheckRecord {
    let id = CheckId::new(CheckKind::N0);
    if branch == Branch::ThreeKPlusOne && n % 2 == 0 {
        return CheckRecord::new(id, Outcome::Inconclusive, "identity needs odd order");
    }
    match self_conjugate_n0(n, branch) {
        Ok(n0) => n0_record(id, &n0, Outcome::Obstructs),
        Err(SurgeryError::NoSpinSelection { .. }) => CheckRecord::new(
            id,
            Outcome::Obstructs,
            "neither self-conjugate structure has its partner at d = 1/4",
        ),
        Err(e) => unreachable!("branch chosen from n: {e}"),
    }
}

/// N₀ value for which the branch's quadratic pair was derived.
fn quadratic_expected_n0(n: i64, branch: Branch) -> Option<Rational> {
    let k = branch_k(n) as i64;
    match branch {
        Branch::ThreeKPlusOne if n > 0 => Some(Rational::new(k, 2).unwrap()),
        Branch::ThreeKMinusOne if n < 0 => Some(Rational::new(k - 1, 2).unwrap()),
        _ => None,
    }
}

fn quadratic_check(n: i64, branch: Branch) -> CheckRecord {
    let id = CheckId::new(CheckKind::Quadratic);
    let k = branch_k(n);
    let n0 = match self_conjugate_n0(n, branch) {
        Ok(n0) if n % 2 != 0 || branch == Branch::ThreeKMinusOne => n0,
        _ => return CheckRecord::new(id, Outcome::Inconclusive, "no N0 available").input("k", k),
    };
    if !n0.is_admissible() || n0.value < 2 {
        return CheckRecord::new(id, Outcome::Inconclusive, format!("guard N0 >= 2 fails (N0 = {})", n0.value))
            .input("k", k);
    }
    let Some(expected) = quadratic_expected_n0(n, branch) else {
        return CheckRecord::new(id, Outcome::Inconclusive, "quadratic pair does not apply").input("k", k);
    };
    let proven_from = match branch {
        Branch::ThreeKPlusOne => 4,
        _ => 5,
    };
    quadratic_record(id, k, &n0, &expected, k >= proven_from, Outcome::Obstructs).input("k", k)
}

fn quadratic_record(
    id: CheckId,
    k: u64,
    n0: &N0Result,
    expected_n0: &Rational,
    in_range: bool,
    failure: Outcome,
) -> CheckRecord {
    if &n0.value != expected_n0 {
        return CheckRecord::new(id, Outcome::Inconclusive, "quadratic pair does not apply");
    }
    let mut found = Vec::new();
    let mut tried = Vec::new();
    for quad in Quadratic::pair_for(n0.branch) {
        let n1 = &n0.value - &Rational::from_integer(quad.n1_drop());
        if n1.is_negative() {
            tried.push(format!("{quad}: N1 = {n1} < 0"));
            continue;
        }
        let roots = quadratic_obstruction_roots(quad, k).expect("k >= 1");
        tried.push(format!("{quad}: roots {:?}", roots.roots()));
        found.extend(roots.iter().map(|j| format!("{quad} root j={j} (N1 = {n1})")));
    }
    let record = if !found.is_empty() {
        CheckRecord::new(id, Outcome::Passes, found.join("; "))
    } else if in_range {
        CheckRecord::new(id, failure, "no admissible integral root")
    } else {
        CheckRecord::new(id, Outcome::Inconclusive, "no root, but k is outside the proven range")
    };
    record.input("N0", &n0.value).input("tried", tried.join("; "))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub lo: i64,
    pub hi: i64,
    pub expected: Vec<i64>,
    pub not_obstructed: Vec<i64>,
    pub matches_theorem: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanResult {
    pub reports: Vec<ObstructionReport>,
    pub summary: ScanSummary,
}

/// Classifies every nonzero `n` in `[lo, hi]` and compares the survivors
/// with [`REALIZABLE`].
pub fn scan(lo: i64, hi: i64) -> ScanResult {
    let reports: Vec<ObstructionReport> =
        (lo..=hi).filter(|&n| n != 0).map(classify).collect();
    let not_obstructed: Vec<i64> =
        reports.iter().filter(|r| !r.is_obstructed()).map(|r| r.n).collect();
    let expected: Vec<i64> = REALIZABLE.iter().copied().filter(|n| (lo..=hi).contains(n)).collect();
    let matches_theorem = expected == not_obstructed;
    ScanResult { reports, summary: ScanSummary { lo, hi, expected, not_obstructed, matches_theorem } }
}
