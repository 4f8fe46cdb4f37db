//! The non-extendability certificate for the 6x6 Fourier family.
//!
//! On a vector unbiased to all six family columns, the second witness
//! collapses to `K = (s0² + s1² + s2² - 54)/486` on the simplex
//! `s0 + s1 + s2 = 9` (see [`crate::mub`]). Each `s_j = |⟨z↑,f_j⟩|²` is
//! pinched away from the simplex corners: minimizing `g0 = |⟨f0,u⟩|²`
//! over `u = (1, e^{iα}, e^{iβ})` subject to `g1 <= 6`, `g2 <= 6` yields
//!
//! ```text
//! c = 3/2 - (3/2)·sqrt(16·sqrt(6) - 39) = 0.84301...,
//! ```
//!
//! so `c <= s_j <= 6 - c`, hence `Σ s_j² <= c² + (6-c)² + 9 < 37` and
//! `K < (37 - 54)/486 = -17/486 < -1/30` — strictly below the exclusion
//! threshold `-1/(m-k) = -1/(36-6)`, for every unit `(a, b)`: the
//! optimization never references the parameters. No member of the family
//! extends to a full system of mutually unbiased Hadamard matrices.
//!
//! The closed form is cross-validated here rather than trusted: a dense
//! phase grid plus Newton refinement on the active-constraint manifold
//! reproduces `c` to twelve digits, and the residuals of the first-order
//! (Lagrange) system at the optimum are reported in the certificate.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::mub::{
    find_unbiased_vector, fourier_basis_3, inner, witness_k_fab, FourierFamilyParams, MubError,
};

/// A point of the two-phase search space, `u = (1, e^{iα}, e^{iβ})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhasePoint {
    pub alpha: f64,
    pub beta: f64,
}

impl PhasePoint {
    pub fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    /// `(x1, y1, x2, y2) = (cos α, sin α, cos β, sin β)`.
    pub fn circle_coords(&self) -> (f64, f64, f64, f64) {
        (self.alpha.cos(), self.alpha.sin(), self.beta.cos(), self.beta.sin())
    }

    pub fn unit_vector(&self) -> [Complex64; 3] {
        [
            Complex64::new(1.0, 0.0),
            Complex64::new(self.alpha.cos(), self.alpha.sin()),
            Complex64::new(self.beta.cos(), self.beta.sin()),
        ]
    }
}

/// `g_j = |⟨f_j, u⟩|²`; always sums to 9.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GTriple {
    pub g0: f64,
    pub g1: f64,
    pub g2: f64,
}

impl GTriple {
    pub fn sum(&self) -> f64 {
        self.g0 + self.g1 + self.g2
    }
}

/// Squared inner products of `u` against the Fourier basis, by
/// definition (the optimizer uses the equivalent trigonometric forms).
pub fn evaluate_g(point: &PhasePoint) -> GTriple {
    let f = fourier_basis_3();
    let u = point.unit_vector();
    GTriple {
        g0: inner(&f[0], &u).norm_sqr(),
        g1: inner(&f[1], &u).norm_sqr(),
        g2: inner(&f[2], &u).norm_sqr(),
    }
}

/// Which inequality is active in the constrained minimization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActiveConstraint {
    G1,
    G2,
}

/// The four polynomial equations of the first-order system for the
/// active case, evaluated at the circle coordinates: the active
/// constraint at level 6, the multiplier condition
/// `(∂α g0)(∂β g) = (∂β g0)(∂α g)`, and the two circle identities.
/// The `G2` case is the mirror `(α, β) -> (-α, -β)` of the `G1` case,
/// i.e. the same polynomials with `y1, y2` negated.
pub fn lagrange_residual(point: &PhasePoint, active: ActiveConstraint) -> [f64; 4] {
    let (x1, y1, x2, y2) = point.circle_coords();
    let (y1, y2) = match active {
        ActiveConstraint::G1 => (y1, y2),
        ActiveConstraint::G2 => (-y1, -y2),
    };
    let r3 = 3.0f64.sqrt();
    let constraint =
        -x1 - x2 - x1 * x2 + r3 * y1 - r3 * x2 * y1 - r3 * y2 + r3 * x1 * y2 - y1 * y2 - 3.0;
    let multiplier = 2.0 * r3 * x2 * y1 - 4.0 * r3 * x1 * x2 * y1
        + 2.0 * r3 * x2 * x2 * y1
        + 2.0 * r3 * x1 * y2
        + 2.0 * r3 * x1 * x1 * y2
        - 4.0 * r3 * x1 * x2 * y2
        - 2.0 * r3 * y1 * y1 * y2
        - 2.0 * r3 * y1 * y2 * y2;
    let circle1 = x1 * x1 + y1 * y1 - 1.0;
    let circle2 = x2 * x2 + y2 * y2 - 1.0;
    [constraint, multiplier, circle1, circle2]
}

// Trigonometric forms g(α,β) = 3 + 2cos(α+δ1) + 2cos(β+δ2) + 2cos(α-β+δ3)
// with phase offsets (δ1,δ2,δ3) per basis column, plus their partials.

const THIRD: f64 = 2.0 * PI / 3.0;
const DELTA_G0: (f64, f64, f64) = (0.0, 0.0, 0.0);
const DELTA_G1: (f64, f64, f64) = (-THIRD, THIRD, THIRD);
const DELTA_G2: (f64, f64, f64) = (THIRD, -THIRD, -THIRD);

#[derive(Clone, Copy)]
struct GDerivatives {
    value: f64,
    da: f64,
    db: f64,
    daa: f64,
    dbb: f64,
    dab: f64,
}

fn g_derivatives(alpha: f64, beta: f64, delta: (f64, f64, f64)) -> GDerivatives {
    let (d1, d2, d3) = delta;
    let (s1, c1) = (alpha + d1).sin_cos();
    let (s2, c2) = (beta + d2).sin_cos();
    let (s3, c3) = (alpha - beta + d3).sin_cos();
    GDerivatives {
        value: 3.0 + 2.0 * (c1 + c2 + c3),
        da: -2.0 * (s1 + s3),
        db: -2.0 * s2 + 2.0 * s3,
        daa: -2.0 * (c1 + c3),
        dbb: -2.0 * (c2 + c3),
        dab: 2.0 * c3,
    }
}

/// How the minimizer touched the constraints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActiveCase {
    /// Stationary point of `g0` with both constraints slack.
    Interior,
    /// Exactly one constraint at level 6 (the observed case).
    OneActive(ActiveConstraint),
    /// Both constraints at 6 simultaneously; impossible since
    /// `g1 + g2 <= 9`, reported if it ever shows up.
    BothActive,
}

/// Result of the constrained minimization of `g0`.
#[derive(Clone, Debug)]
pub struct GMinimum {
    pub value: f64,
    pub point: PhasePoint,
    pub case: ActiveCase,
    /// The four first-order residuals at the reported point.
    pub residuals: [f64; 4],
    /// False when Newton refinement failed and the best grid point is
    /// reported instead, with correspondingly wide uncertainty.
    pub refined: bool,
}

pub const MINIMIZE_GRID: usize = 720;
const ACTIVE_SLACK: f64 = 0.15;
const NEWTON_ITERS: usize = 60;
const NEWTON_TARGET: f64 = 1e-13;

/// Globally minimizes `g0` subject to `g1 <= 6` and `g2 <= 6`: a dense
/// phase grid locates the basin, Newton on the active-constraint system
/// (or on the plain gradient, were the minimum interior) polishes it.
/// Deterministic; contains no reference to the family parameters.
pub fn minimize_g0() -> GMinimum {
    minimize_g0_on_grid(MINIMIZE_GRID)
}

pub fn minimize_g0_on_grid(grid: usize) -> GMinimum {
    // Grid scan with a feasibility cushion of one lattice step, so basins
    // whose minimizer sits exactly on the boundary are not skipped.
    let cushion = 12.0 / grid as f64;
    let mut best = (f64::INFINITY, 0.0f64, 0.0f64);
    for i in 0..grid {
        let alpha = 2.0 * PI * i as f64 / grid as f64;
        for j in 0..grid {
            let beta = 2.0 * PI * j as f64 / grid as f64;
            let g1 = g_derivatives(alpha, beta, DELTA_G1).value;
            let g2 = g_derivatives(alpha, beta, DELTA_G2).value;
            if g1 > 6.0 + cushion || g2 > 6.0 + cushion {
                continue;
            }
            let g0 = g_derivatives(alpha, beta, DELTA_G0).value;
            if g0 < best.0 {
                best = (g0, alpha, beta);
            }
        }
    }
    let (_, alpha, beta) = best;
    let g1 = g_derivatives(alpha, beta, DELTA_G1).value;
    let g2 = g_derivatives(alpha, beta, DELTA_G2).value;

    let (case, refined_point) =
        if (6.0 - g1).abs() < ACTIVE_SLACK && (6.0 - g2).abs() < ACTIVE_SLACK {
            (ActiveCase::BothActive, None)
        } else if 6.0 - g1 < ACTIVE_SLACK {
            (ActiveCase::OneActive(ActiveConstraint::G1), newton_active(alpha, beta, DELTA_G1))
        } else if 6.0 - g2 < ACTIVE_SLACK {
            (ActiveCase::OneActive(ActiveConstraint::G2), newton_active(alpha, beta, DELTA_G2))
        } else {
            (ActiveCase::Interior, newton_interior(alpha, beta))
        };

    let (point, refined) = match refined_point {
        Some(p) => (p, true),
        None => (PhasePoint::new(alpha, beta), false),
    };
    let active = match case {
        ActiveCase::OneActive(a) => a,
        _ => ActiveConstraint::G1,
    };
    GMinimum {
        value: g_derivatives(point.alpha, point.beta, DELTA_G0).value,
        point,
        case,
        residuals: lagrange_residual(&point, active),
        refined,
    }
}

/// Newton's method on `(g_active - 6, (∂α g0)(∂β g) - (∂β g0)(∂α g)) = 0`.
fn newton_active(mut alpha: f64, mut beta: f64, delta: (f64, f64, f64)) -> Option<PhasePoint> {
    for _ in 0..NEWTON_ITERS {
        let g0 = g_derivatives(alpha, beta, DELTA_G0);
        let ga = g_derivatives(alpha, beta, delta);
        let f1 = ga.value - 6.0;
        let f2 = g0.da * ga.db - g0.db * ga.da;
        if f1.abs().max(f2.abs()) < NEWTON_TARGET {
            return Some(PhasePoint::new(alpha, beta));
        }
        let j11 = ga.da;
        let j12 = ga.db;
        let j21 = g0.daa * ga.db + g0.da * ga.dab - g0.dab * ga.da - g0.db * ga.daa;
        let j22 = g0.dab * ga.db + g0.da * ga.dbb - g0.dbb * ga.da - g0.db * ga.dab;
        let det = j11 * j22 - j12 * j21;
        if det.abs() < 1e-14 {
            return None;
        }
        alpha -= (f1 * j22 - f2 * j12) / det;
        beta -= (f2 * j11 - f1 * j21) / det;
    }
    None
}

/// Newton's method on `∇g0 = 0` (only reachable if the constrained
/// minimum were interior).
fn newton_interior(mut alpha: f64, mut beta: f64) -> Option<PhasePoint> {
    for _ in 0..NEWTON_ITERS {
        let g0 = g_derivatives(alpha, beta, DELTA_G0);
        if g0.da.abs().max(g0.db.abs()) < NEWTON_TARGET {
            return Some(PhasePoint::new(alpha, beta));
        }
        let det = g0.daa * g0.dbb - g0.dab * g0.dab;
        if det.abs() < 1e-14 {
            return None;
        }
        alpha -= (g0.da * g0.dbb - g0.db * g0.dab) / det;
        beta -= (g0.db * g0.daa - g0.da * g0.dab) / det;
    }
    None
}

/// Independent oracle for the minimum: the best `g0` over an `n x n`
/// phase grid filtered by strict feasibility.
pub fn grid_min_g0(grid: usize) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..grid {
        let alpha = 2.0 * PI * i as f64 / grid as f64;
        for j in 0..grid {
            let beta = 2.0 * PI * j as f64 / grid as f64;
            if g_derivatives(alpha, beta, DELTA_G1).value > 6.0 {
                continue;
            }
            if g_derivatives(alpha, beta, DELTA_G2).value > 6.0 {
                continue;
            }
            best = best.min(g_derivatives(alpha, beta, DELTA_G0).value);
        }
    }
    best
}

/// `c = 3/2 - (3/2)·sqrt(16·sqrt(6) - 39)`, the exact value of the
/// constrained minimum.
pub fn closed_form_c() -> f64 {
    1.5 - 1.5 * (16.0 * 6.0f64.sqrt() - 39.0).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub enum CertificateError {
    /// `s_square_cap` needs `0 < c <= 3`.
    COutOfRange { c: f64 },
}

impl fmt::Display for CertificateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateError::COutOfRange { c } => {
                write!(f, "s_square_cap needs 0 < c <= 3, got {c}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CertificateError {}

/// Maximum of `s0² + s1² + s2²` over the box `[c, 6-c]³` intersected
/// with the plane `s0 + s1 + s2 = 9`: a convex function maximized at an
/// extreme point, giving `c² + (6-c)² + 3²`.
pub fn s_square_cap(c: f64) -> Result<f64, CertificateError> {
    if !(c > 0.0 && c <= 3.0) {
        return Err(CertificateError::COutOfRange { c });
    }
    Ok(c * c + (6.0 - c) * (6.0 - c) + 9.0)
}

/// One spot check: a numerically found unbiased vector and how its `K`
/// value sits against the caps. Corroboration only — the verdict rests
/// on the parameter-free inequality chain.
#[derive(Clone, Debug)]
pub struct SampleCheck {
    pub seed: u64,
    /// Phases of the found vector, first entry pinned to 0; empty when
    /// the search was inconclusive.
    pub phases: Vec<f64>,
    pub found: bool,
    pub search_residual: f64,
    pub k_re: f64,
    pub k_im: f64,
    pub k_real_ok: bool,
    pub below_k_cap: bool,
    pub below_threshold: bool,
}

/// Slacks of every inequality in the chain, each of which must be
/// strictly positive.
#[derive(Clone, Copy, Debug)]
pub struct InequalityChain {
    /// `c - 0.843`.
    pub c_above_0843: f64,
    /// `37 - (c² + (6-c)² + 9)`.
    pub cap_below_37: f64,
    /// `-17/486 - k_cap`.
    pub k_cap_below_17_over_486: f64,
    /// `17/486 - 1/30`, the fixed gap between the last two constants.
    pub seventeen_486_vs_one_30: f64,
}

/// Machine-checkable record of the non-extendability argument for one
/// `(a, b)`; every constant, residual, and margin is explicit.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub a_phase: f64,
    pub b_phase: f64,
    pub c_closed_form: f64,
    pub c_numeric: f64,
    /// `|c_closed_form - c_numeric|`.
    pub c_agreement: f64,
    pub active_case: ActiveCase,
    pub lagrange_residual_at_optimum: f64,
    /// `c² + (6-c)² + 9` at the closed-form `c`.
    pub s_square_cap: f64,
    /// `(s_square_cap - 54)/486`: the ceiling for `K` on unbiased
    /// vectors.
    pub k_cap: f64,
    /// `-1/(m-k) = -1/30` for `m = 36` columns and `k = 6` pinned.
    pub threshold: f64,
    /// `threshold - k_cap`, the distance by which `K` clears it.
    pub margin: f64,
    pub chain: InequalityChain,
    /// The whole chain contains no reference to `a` or `b`; recorded so
    /// the certificate is self-describing.
    pub ab_independent: bool,
    pub samples: Vec<SampleCheck>,
    /// True when every requested spot check converged.
    pub samples_complete: bool,
    pub verdict: bool,
}

/// The exclusion threshold `-1/(m-k)` with `m = 36`, `k = 6`.
pub const K_THRESHOLD: f64 = -1.0 / 30.0;
/// Margin below which strict inequalities are not trusted.
pub const MARGIN_FLOOR: f64 = 1e-9;
const C_AGREEMENT_TOL: f64 = 1e-6;
const RESIDUAL_TOL: f64 = 1e-8;

/// Assembles the full certificate for one parameter pair: the constant
/// `c` by both routes, the inequality chain with explicit slacks, and
/// `n_samples` spot checks on numerically found unbiased vectors.
/// Inconclusive searches leave the sample section incomplete without
/// affecting the verdict.
pub fn build_certificate(p: &FourierFamilyParams, n_samples: usize, seed: u64) -> Certificate {
    build_certificate_with(&minimize_g0(), p, n_samples, seed)
}

/// Same, reusing an already-computed minimization; the optimization is
/// parameter-free, so parameter sweeps hoist it out of the loop.
pub fn build_certificate_with(
    minimum: &GMinimum,
    p: &FourierFamilyParams,
    n_samples: usize,
    seed: u64,
) -> Certificate {
    let c_closed = closed_form_c();
    let c_agreement = (c_closed - minimum.value).abs();
    let lagrange_residual_at_optimum =
        minimum.residuals.iter().fold(0.0f64, |acc, r| acc.max(r.abs()));

    let cap = s_square_cap(c_closed).expect("closed-form c is in range");
    let k_cap = (cap - 54.0) / 486.0;
    let margin = K_THRESHOLD - k_cap;
    let chain = InequalityChain {
        c_above_0843: c_closed - 0.843,
        cap_below_37: 37.0 - cap,
        k_cap_below_17_over_486: -17.0 / 486.0 - k_cap,
        seventeen_486_vs_one_30: 17.0 / 486.0 - 1.0 / 30.0,
    };

    let mut samples = Vec::with_capacity(n_samples);
    let mut samples_complete = true;
    let mut samples_consistent = true;
    for i in 0..n_samples {
        let sample_seed = seed.wrapping_add(i as u64);
        match find_unbiased_vector(p, sample_seed) {
            Ok(found) => {
                let k = witness_k_fab(&found.vector, p).expect("length 6");
                let k_real_ok = k.im.abs() <= MARGIN_FLOOR;
                let below_k_cap = k.re <= k_cap + MARGIN_FLOOR;
                let below_threshold = k.re < K_THRESHOLD;
                samples_consistent &= k_real_ok && below_k_cap && below_threshold;
                samples.push(SampleCheck {
                    seed: sample_seed,
                    phases: found.vector.phases(),
                    found: true,
                    search_residual: found.max_residual,
                    k_re: k.re,
                    k_im: k.im,
                    k_real_ok,
                    below_k_cap,
                    below_threshold,
                });
            }
            Err(MubError::SearchFailed { best_residual }) => {
                samples_complete = false;
                samples.push(SampleCheck {
                    seed: sample_seed,
                    phases: Vec::new(),
                    found: false,
                    search_residual: best_residual,
                    k_re: f64::NAN,
                    k_im: f64::NAN,
                    k_real_ok: false,
                    below_k_cap: false,
                    below_threshold: false,
                });
            }
            Err(other) => unreachable!("search only fails as inconclusive: {other}"),
        }
    }

    let verdict = margin > MARGIN_FLOOR
        && chain.c_above_0843 > 0.0
        && chain.cap_below_37 > 0.0
        && chain.k_cap_below_17_over_486 > 0.0
        && c_agreement < C_AGREEMENT_TOL
        && lagrange_residual_at_optimum < RESIDUAL_TOL
        && minimum.case != ActiveCase::BothActive
        && samples_consistent;

    Certificate {
        a_phase: p.a().arg(),
        b_phase: p.b().arg(),
        c_closed_form: c_closed,
        c_numeric: minimum.value,
        c_agreement,
        active_case: minimum.case,
        lagrange_residual_at_optimum,
        s_square_cap: cap,
        k_cap,
        threshold: K_THRESHOLD,
        margin,
        chain,
        ab_independent: true,
        samples,
        samples_complete,
        verdict,
    }
}

/// Worst (largest) sampled `K` value, if any sample converged.
pub fn worst_sample_k(certificate: &Certificate) -> Option<f64> {
    certificate
        .samples
        .iter()
        .filter(|s| s.found)
        .map(|s| s.k_re)
        .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
}
