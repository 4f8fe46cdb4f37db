//! The witness-function bound for difference-avoiding sets.
//!
//! Given a symmetric forbidden set `A` with `0 ∈ A`, a witness is a real
//! function `h` with `h(x) <= 0` on `A^c` and nonnegative Fourier
//! coefficients. Any set `B` whose pairwise differences avoid `A` then
//! satisfies
//!
//! ```text
//! |B| <= h(0) / ĥ(1)
//! ```
//!
//! which follows from squeezing the spectral sum
//! `S = Σ_γ |B̂(γ)|² ĥ(γ)` between `|B|² ĥ(1)` and `h(0)|B|`. The module
//! verifies witnesses, evaluates the bound, finds an LP-optimal witness,
//! audits the squeeze for a concrete `B`, and provides an exhaustive
//! oracle for small groups.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::group::{
    format_elements, validate_forbidden_set, FiniteAbelianGroup, ForbiddenSet, GroupFunction,
};
use crate::lp::{self, LinearProgram, LpStatus};
use crate::DEFAULT_TOL;

/// A verified witness: the function, its cached dual values, the set of
/// characters where the dual vanishes, and the forbidden set it was
/// verified against.
#[derive(Clone, Debug)]
pub struct DelsarteWitness {
    pub h: GroupFunction,
    /// Real parts of `ĥ`, canonical character order (imaginary parts are
    /// below tolerance by construction).
    pub hhat: Vec<f64>,
    /// Character indices where `ĥ` vanishes at tolerance.
    pub null_set: BTreeSet<usize>,
    pub forbidden: ForbiddenSet,
    pub tol: f64,
}

impl DelsarteWitness {
    pub fn hhat_one(&self) -> f64 {
        self.hhat[0]
    }

    pub fn h_zero(&self) -> f64 {
        self.h.value_at_index(0).re
    }

    /// `ĥ(1)` above tolerance, so the bound `h(0)/ĥ(1)` is defined.
    pub fn bound_defined(&self) -> bool {
        self.hhat_one() > self.tol
    }
}

/// Why a candidate function is not a witness, itemized.
#[derive(Clone, Debug, Default)]
pub struct WitnessRejection {
    /// Largest imaginary part of `h` if it exceeded tolerance.
    pub not_real: Option<f64>,
    /// Elements of `A^c` where `h > tol`, with the values.
    pub positive_on_complement: Vec<(usize, f64)>,
    /// Characters where `ĥ` has imaginary part above tolerance.
    pub hat_not_real: Vec<(usize, f64)>,
    /// Characters where `Re ĥ < -tol`.
    pub negative_hat: Vec<(usize, f64)>,
}

impl WitnessRejection {
    pub fn is_empty(&self) -> bool {
        self.not_real.is_none()
            && self.positive_on_complement.is_empty()
            && self.hat_not_real.is_empty()
            && self.negative_hat.is_empty()
    }
}

impl fmt::Display for WitnessRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(im) = self.not_real {
            write!(f, "h not real (max imaginary part {im:.3e}); ")?;
        }
        if !self.positive_on_complement.is_empty() {
            write!(
                f,
                "h positive on {} forbidden-complement elements; ",
                self.positive_on_complement.len()
            )?;
        }
        if !self.hat_not_real.is_empty() {
            write!(f, "ĥ not real at {} characters; ", self.hat_not_real.len())?;
        }
        if !self.negative_hat.is_empty() {
            write!(f, "ĥ negative at {} characters", self.negative_hat.len())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum DelsarteError {
    InvalidForbiddenSet(String),
    GroupMismatch,
    Rejected(WitnessRejection),
    /// `ĥ(1)` is zero at tolerance: the bound is undefined (division by
    /// zero).
    UndefinedBound,
    /// The brute-force oracle refuses groups above its size guard.
    GroupTooLarge {
        order: usize,
        limit: usize,
    },
    /// The witness LP failed; cannot happen for a valid forbidden set,
    /// reported rather than trusted.
    Lp(String),
}

impl fmt::Display for DelsarteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DelsarteError::InvalidForbiddenSet(report) => {
                write!(f, "invalid forbidden set: {report}")
            }
            DelsarteError::GroupMismatch => write!(f, "function and set use different groups"),
            DelsarteError::Rejected(r) => write!(f, "witness rejected: {r}"),
            DelsarteError::UndefinedBound => {
                write!(f, "bound undefined (division by zero): ĥ(1) = 0 at tolerance")
            }
            DelsarteError::GroupTooLarge { order, limit } => {
                write!(f, "exhaustive search refused: group order {order} exceeds {limit}")
            }
            DelsarteError::Lp(msg) => write!(f, "witness LP failed: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DelsarteError {}

/// Checks the witness conditions for `h` against `a` and caches the dual
/// data, or itemizes every violation.
pub fn verify_witness(
    a: &ForbiddenSet,
    h: &GroupFunction,
    tol: f64,
) -> Result<DelsarteWitness, DelsarteError> {
    let report = validate_forbidden_set(a);
    if !report.is_valid() {
        return Err(DelsarteError::InvalidForbiddenSet(alloc::format!("{report}")));
    }
    if h.group() != a.group() {
        return Err(DelsarteError::GroupMismatch);
    }

    let mut rejection = WitnessRejection::default();
    let max_imag = h.max_imag();
    if max_imag > tol {
        rejection.not_real = Some(max_imag);
    }
    for x in a.complement_indices() {
        let value = h.value_at_index(x).re;
        if value > tol {
            rejection.positive_on_complement.push((x, value));
        }
    }
    let hhat_fn = h.fourier_transform();
    let mut hhat = Vec::with_capacity(h.group().order());
    for (gamma, value) in hhat_fn.values().iter().enumerate() {
        if value.im.abs() > tol {
            rejection.hat_not_real.push((gamma, value.im));
        }
        if value.re < -tol {
            rejection.negative_hat.push((gamma, value.re));
        }
        hhat.push(value.re);
    }
    if !rejection.is_empty() {
        return Err(DelsarteError::Rejected(rejection));
    }
    let null_set =
        hhat.iter().enumerate().filter(|(_, &v)| v.abs() <= tol).map(|(gamma, _)| gamma).collect();
    Ok(DelsarteWitness { h: h.clone(), hhat, null_set, forbidden: a.clone(), tol })
}

/// `h(0)/ĥ(1)` for a verified witness.
pub fn delsarte_bound(witness: &DelsarteWitness) -> Result<f64, DelsarteError> {
    if !witness.bound_defined() {
        return Err(DelsarteError::UndefinedBound);
    }
    Ok(witness.h_zero() / witness.hhat_one())
}

/// Orbits of characters under `γ -> -γ`, each listed once; the witness
/// LP identifies the dual values inside an orbit, making `h` real and
/// even by construction.
fn character_classes(group: &FiniteAbelianGroup) -> Vec<Vec<usize>> {
    let mut classes = Vec::new();
    let mut seen = vec![false; group.order()];
    for gamma in 0..group.order() {
        if seen[gamma] {
            continue;
        }
        let neg = group.negate_index(gamma);
        seen[gamma] = true;
        if neg == gamma {
            classes.push(vec![gamma]);
        } else {
            seen[neg] = true;
            classes.push(vec![gamma, neg]);
        }
    }
    classes
}

/// Finds the witness maximizing `ĥ(1)` under the normalization
/// `h(0) = 1`, solving in the Fourier domain; returns it with the bound
/// `1/ĥ(1)`.
pub fn optimal_witness(
    group: &FiniteAbelianGroup,
    a: &ForbiddenSet,
    tol: f64,
) -> Result<(DelsarteWitness, f64), DelsarteError> {
    let report = validate_forbidden_set(a);
    if !report.is_valid() {
        return Err(DelsarteError::InvalidForbiddenSet(alloc::format!("{report}")));
    }
    if a.group() != group {
        return Err(DelsarteError::GroupMismatch);
    }
    let classes = character_classes(group);

    // Class sums t_c(x) = Σ_{γ in c} γ(x) are real; h(x) = Σ_c v_c t_c(x).
    let class_sum = |class: &[usize], x: usize| -> f64 {
        class
            .iter()
            .map(|&gamma| {
                crate::group::character_value(
                    group,
                    &group.character_at(gamma),
                    &group.element_at(x),
                )
                .expect("indices in range")
                .re
            })
            .sum()
    };

    let mut objective = vec![0.0; classes.len()];
    objective[0] = 1.0; // class of the trivial character is first
    debug_assert_eq!(classes[0], vec![0]);
    let mut lp = LinearProgram::maximize(objective);
    // Constraints h(x) <= 0 coincide for x and -x; emit one row per orbit.
    let mut seen = vec![false; group.order()];
    for x in a.complement_indices() {
        if seen[x] {
            continue;
        }
        seen[x] = true;
        seen[group.negate_index(x)] = true;
        let row: Vec<f64> = classes.iter().map(|c| class_sum(c, x)).collect();
        lp = lp.with_leq(row, 0.0);
    }
    // Normalization h(0) = Σ_γ ĥ(γ) = 1 keeps the feasible region bounded.
    let norm_row: Vec<f64> = classes.iter().map(|c| c.len() as f64).collect();
    lp = lp.with_eq(norm_row, 1.0);

    let solution = lp::solve(&lp).map_err(|e| DelsarteError::Lp(alloc::format!("{e}")))?;
    match solution.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(DelsarteError::Lp(String::from("infeasible"))),
        LpStatus::Unbounded => return Err(DelsarteError::Lp(String::from("unbounded"))),
    }

    let mut hhat = vec![Complex64::new(0.0, 0.0); group.order()];
    for (class, &value) in classes.iter().zip(&solution.x) {
        for &gamma in class {
            hhat[gamma] = Complex64::new(value.max(0.0), 0.0);
        }
    }
    let h = GroupFunction::new(group.clone(), hhat)
        .expect("one dual value per character")
        .inverse_transform();
    let witness = verify_witness(a, &h, tol)?;
    let bound = delsarte_bound(&witness)?;
    Ok((witness, bound))
}

/// Result of the exhaustive search: the maximum cardinality and the
/// lexicographically least set attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxSetResult {
    pub cardinality: usize,
    pub example: Vec<usize>,
}

impl MaxSetResult {
    pub fn example_elements(&self, group: &FiniteAbelianGroup) -> Vec<crate::group::GroupElement> {
        self.example.iter().map(|&i| group.element_at(i)).collect()
    }
}

pub const BRUTE_FORCE_ORDER_LIMIT: usize = 24;

/// Exhaustively finds a maximum set `B` with `B - B ⊆ A^c ∪ {0}`.
/// Depth-first in canonical order, so the reported maximizer is the
/// lexicographically least one.
pub fn brute_force_max(
    group: &FiniteAbelianGroup,
    a: &ForbiddenSet,
) -> Result<MaxSetResult, DelsarteError> {
    if group.order() > BRUTE_FORCE_ORDER_LIMIT {
        return Err(DelsarteError::GroupTooLarge {
            order: group.order(),
            limit: BRUTE_FORCE_ORDER_LIMIT,
        });
    }
    if a.group() != group {
        return Err(DelsarteError::GroupMismatch);
    }
    let order = group.order();
    let diff_forbidden: Vec<Vec<bool>> = (0..order)
        .map(|x| (0..order).map(|y| x != y && a.contains_index(group.sub_indices(x, y))).collect())
        .collect();

    let mut best = MaxSetResult { cardinality: 0, example: Vec::new() };
    let mut current: Vec<usize> = Vec::new();
    search(&diff_forbidden, 0, &mut current, &mut best);
    Ok(best)
}

fn search(
    diff_forbidden: &[Vec<bool>],
    next: usize,
    current: &mut Vec<usize>,
    best: &mut MaxSetResult,
) {
    let order = diff_forbidden.len();
    if current.len() > best.cardinality {
        best.cardinality = current.len();
        best.example = current.clone();
    }
    if current.len() + (order - next) <= best.cardinality {
        return; // cannot strictly beat the incumbent
    }
    for candidate in next..order {
        if current.iter().all(|&b| !diff_forbidden[candidate][b]) {
            current.push(candidate);
            search(diff_forbidden, candidate + 1, current, best);
            current.pop();
        }
    }
}

/// Exhaustive maximum over sets constrained to contain `pinned` (the
/// oracle behind the exclusion test).
pub fn brute_force_max_containing(
    group: &FiniteAbelianGroup,
    a: &ForbiddenSet,
    pinned: &[usize],
) -> Result<MaxSetResult, DelsarteError> {
    if group.order() > BRUTE_FORCE_ORDER_LIMIT {
        return Err(DelsarteError::GroupTooLarge {
            order: group.order(),
            limit: BRUTE_FORCE_ORDER_LIMIT,
        });
    }
    let order = group.order();
    let ok = |x: usize, y: usize| x == y || !a.contains_index(group.sub_indices(x, y));
    for (i, &p) in pinned.iter().enumerate() {
        for &q in &pinned[..i] {
            if !ok(p, q) {
                return Ok(MaxSetResult { cardinality: 0, example: Vec::new() });
            }
        }
    }
    let candidates: Vec<usize> =
        (0..order).filter(|&x| !pinned.contains(&x) && pinned.iter().all(|&p| ok(x, p))).collect();
    let diff_forbidden: Vec<Vec<bool>> = (0..order)
        .map(|x| (0..order).map(|y| x != y && a.contains_index(group.sub_indices(x, y))).collect())
        .collect();

    let mut best_extra: Vec<usize> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    fn extend(
        candidates: &[usize],
        diff_forbidden: &[Vec<bool>],
        from: usize,
        current: &mut Vec<usize>,
        best: &mut Vec<usize>,
    ) {
        if current.len() > best.len() {
            *best = current.clone();
        }
        if current.len() + (candidates.len() - from) <= best.len() {
            return;
        }
        for idx in from..candidates.len() {
            let c = candidates[idx];
            if current.iter().all(|&b| !diff_forbidden[c][b]) {
                current.push(c);
                extend(candidates, diff_forbidden, idx + 1, current, best);
                current.pop();
            }
        }
    }
    extend(&candidates, &diff_forbidden, 0, &mut current, &mut best_extra);

    let mut example: Vec<usize> = pinned.to_vec();
    example.extend(best_extra);
    example.sort_unstable();
    Ok(MaxSetResult { cardinality: example.len(), example })
}

/// The squeeze audit for a concrete candidate set.
#[derive(Clone, Debug)]
pub struct ProofAudit {
    /// `S` computed spectrally, `Σ_γ |B̂(γ)|² ĥ(γ)`.
    pub s_spectral: f64,
    /// `S` computed directly, `Σ_{j,k} h(b_j - b_k)`.
    pub s_direct: f64,
    /// `|B|² ĥ(1)`.
    pub lower: f64,
    /// `h(0) |B|`.
    pub upper: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
    /// Pairs of `B` whose difference lands in the forbidden set; when
    /// nonempty the upper inequality may legitimately fail.
    pub difference_violations: Vec<(usize, usize)>,
}

/// Bound value together with the audit of its proof quantities.
#[derive(Clone, Debug)]
pub struct BoundReport {
    /// `h(0)/ĥ(1)`, or `None` when `ĥ(1)` vanishes.
    pub bound: Option<f64>,
    pub audit: ProofAudit,
}

/// Recomputes `S` both spectrally and directly for the given `B` and
/// reports whether the squeeze `|B|²ĥ(1) <= S <= h(0)|B|` holds. Runs
/// regardless of whether `B` satisfies the difference condition, but
/// flags the offending pairs.
pub fn audit_proof(witness: &DelsarteWitness, b_set: &[usize]) -> BoundReport {
    let group = witness.h.group();
    let order = group.order();

    // B̂(γ) = Σ_j conj(γ(b_j)); |B̂|² is the same under either
    // conjugation convention and the pairing matches the conjugated
    // transform used throughout.
    let mut s_spectral = 0.0;
    for gamma in 0..order {
        let chr = group.character_at(gamma);
        let mut bhat = Complex64::new(0.0, 0.0);
        for &b in b_set {
            bhat += crate::group::character_value(group, &chr, &group.element_at(b))
                .expect("valid index")
                .conj();
        }
        s_spectral += bhat.norm_sqr() * witness.hhat[gamma];
    }

    let mut s_direct = 0.0;
    let mut difference_violations = Vec::new();
    for (j, &bj) in b_set.iter().enumerate() {
        for (k, &bk) in b_set.iter().enumerate() {
            let diff = group.sub_indices(bj, bk);
            s_direct += witness.h.value_at_index(diff).re;
            if j < k && witness.forbidden.contains_index(diff) {
                difference_violations.push((j, k));
            }
        }
    }

    let count = b_set.len() as f64;
    let lower = count * count * witness.hhat_one();
    let upper = witness.h_zero() * count;
    let slack = witness.tol * (1.0 + upper.abs() + lower.abs());
    let audit = ProofAudit {
        s_spectral,
        s_direct,
        lower,
        upper,
        lower_holds: lower <= s_spectral + slack,
        upper_holds: s_spectral <= upper + slack,
        difference_violations,
    };
    let bound =
        if witness.bound_defined() { Some(witness.h_zero() / witness.hhat_one()) } else { None };
    BoundReport { bound, audit }
}

/// Canonical description of a forbidden set for report messages.
pub fn describe_forbidden(a: &ForbiddenSet) -> String {
    let members: Vec<_> = a.members().collect();
    format_elements(&members)
}

/// Default-tolerance convenience wrapper around [`optimal_witness`].
pub fn optimal_witness_default(
    group: &FiniteAbelianGroup,
    a: &ForbiddenSet,
) -> Result<(DelsarteWitness, f64), DelsarteError> {
    optimal_witness(group, a, DEFAULT_TOL)
}
