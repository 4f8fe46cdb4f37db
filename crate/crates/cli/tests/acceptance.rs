//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible under `--nocapture`). Tolerances are pinned in the
//! assertions, not configurable.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use delsarte_core::certificate::{
    closed_form_c, grid_min_g0, minimize_g0, s_square_cap, ActiveCase,
};
use delsarte_core::delsarte::{
    audit_proof, brute_force_max, brute_force_max_containing, optimal_witness,
};
use delsarte_core::group::{FiniteAbelianGroup, ForbiddenSet, GroupElement, GroupFunction};
use delsarte_core::improved::{corollary_check, improved_bound, synthesize_second_witness};
use delsarte_core::mub::{
    find_unbiased_vector, fourier_family, k_from_s, spectral_s, torus_witness_ratio,
    witness_h_torus, witness_k_fab, FourierFamilyParams, MubError, TorusVector,
};
use delsarte_core::Complex64;
use delsarte_core::DEFAULT_TOL;

const TAU: f64 = std::f64::consts::TAU;

fn criterion(number: usize, name: &str, failures: &[String], details: String) {
    if failures.is_empty() {
        println!("ACCEPTANCE {number} ({name}): PASS — {details}");
    } else {
        println!("ACCEPTANCE {number} ({name}): FAIL — {}", failures.join("; "));
    }
    assert!(failures.is_empty(), "criterion {number} failed: {}", failures.join("; "));
}

fn group(orders: &[u32]) -> FiniteAbelianGroup {
    FiniteAbelianGroup::new(orders.to_vec()).unwrap()
}

fn forbidden_from_indices(g: &FiniteAbelianGroup, indices: &[usize]) -> ForbiddenSet {
    let members: Vec<GroupElement> = indices.iter().map(|&i| g.element_at(i)).collect();
    ForbiddenSet::from_members(g.clone(), &members).unwrap()
}

/// Negation orbits {x, -x} of the nonzero elements, by canonical index.
fn negation_classes(g: &FiniteAbelianGroup) -> Vec<Vec<usize>> {
    let mut classes = Vec::new();
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    for x in 1..g.order() {
        if seen[x] {
            continue;
        }
        let neg = g.negate_index(x);
        seen[x] = true;
        let mut class = vec![x];
        if neg != x {
            seen[neg] = true;
            class.push(neg);
        }
        classes.push(class);
    }
    classes
}

/// Criterion 1: torus witness ratio is exactly n² for n = 2..8, with the
/// constant spectral coefficient cross-checked by Monte-Carlo
/// integration over the torus to 1%.
#[test]
fn c1_torus_witness_ratio() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut rng = StdRng::seed_from_u64(101);
    for n in 2..=8usize {
        let ratio = torus_witness_ratio(n);
        let n_i = n as i64;
        if ratio.ratio != n_i * n_i {
            failures.push(format!("ratio({n}) = {}, want {}", ratio.ratio, n_i * n_i));
        }
        if ratio.hat_zero != n_i * n_i - n_i {
            failures.push(format!("hat_zero({n}) = {}", ratio.hat_zero));
        }
        // Monte-Carlo mean of h over the torus estimates the constant
        // coefficient n² - n.
        let samples = 1_000_000usize;
        let mut acc = 0.0f64;
        for _ in 0..samples {
            let phases: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * TAU).collect();
            acc += witness_h_torus(&TorusVector::from_phases(&phases));
        }
        let estimate = acc / samples as f64;
        let expected = (n_i * n_i - n_i) as f64;
        let relative = (estimate - expected).abs() / expected;
        if relative > 0.01 {
            failures.push(format!(
                "monte-carlo hat_zero({n}) = {estimate:.4}, want {expected} (rel {relative:.4})"
            ));
        }
    }
    let elapsed = started.elapsed();
    if elapsed.as_secs_f64() > 5.0 {
        failures.push(format!("runtime {elapsed:?} exceeds 5 s"));
    }
    criterion(
        1,
        "torus witness ratio",
        &failures,
        format!("n = 2..8 exact, monte-carlo within 1%, {elapsed:?}"),
    );
}

/// Criterion 2: the K normalization sums to 1 over the six columns for
/// 1000 random unit parameter pairs, within 1e-12.
#[test]
fn c2_k_normalization() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut rng = StdRng::seed_from_u64(202);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = FourierFamilyParams::from_phases(rng.gen::<f64>() * TAU, rng.gen::<f64>() * TAU);
        let m = fourier_family(&p);
        let total: Complex64 = (0..6)
            .map(|j| {
                let col = TorusVector::new(m.column(j).to_vec()).unwrap();
                witness_k_fab(&col, &p).unwrap()
            })
            .sum();
        let deviation = (total - Complex64::new(1.0, 0.0)).norm();
        worst = worst.max(deviation);
        if deviation > 1e-12 {
            failures.push(format!("sum deviates by {deviation:.3e} at {p:?}"));
            break;
        }
    }
    let elapsed = started.elapsed();
    if elapsed.as_secs_f64() > 1.0 {
        failures.push(format!("runtime {elapsed:?} exceeds 1 s"));
    }
    criterion(
        2,
        "K normalization",
        &failures,
        format!("1000 parameter pairs, worst deviation {worst:.3e}, {elapsed:?}"),
    );
}

/// Criterion 3: the optimizer and the closed form agree on c within
/// 1e-6, both exceed 0.843, the first-order residuals are below 1e-8,
/// the both-active case never occurs, and a 2000x2000 feasibility-
/// filtered grid never beats c by more than 1e-3.
#[test]
fn c3_constant_c() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let closed = closed_form_c();
    let minimum = minimize_g0();
    if (closed - minimum.value).abs() > 1e-6 {
        failures.push(format!("|closed - numeric| = {:.3e}", (closed - minimum.value).abs()));
    }
    if closed <= 0.843 || minimum.value <= 0.843 {
        failures.push(format!("c not above 0.843: closed {closed}, numeric {}", minimum.value));
    }
    let residual = minimum.residuals.iter().fold(0.0f64, |a, r| a.max(r.abs()));
    if residual >= 1e-8 {
        failures.push(format!("first-order residual {residual:.3e}"));
    }
    match minimum.case {
        ActiveCase::OneActive(_) => {}
        other => failures.push(format!("unexpected active case {other:?}")),
    }
    if !minimum.refined {
        failures.push("refinement did not converge".to_string());
    }
    let oracle = grid_min_g0(2000);
    if oracle < closed - 1e-3 {
        failures.push(format!("grid oracle {oracle} beats c - 1e-3"));
    }
    let elapsed = started.elapsed();
    if elapsed.as_secs_f64() > 30.0 {
        failures.push(format!("runtime {elapsed:?} exceeds 30 s"));
    }
    criterion(
        3,
        "constant c",
        &failures,
        format!(
            "c = {closed:.9}, agreement {:.2e}, residuals {residual:.2e}, grid floor {oracle:.6}, {elapsed:?}",
            (closed - minimum.value).abs()
        ),
    );
}

/// Criterion 4: the inequality chain with explicit margins:
/// c² + (6-c)² + 9 < 37, k_cap < -17/486 < -1/30, and the fixed gap
/// 17/486 - 1/30 reproduced to 1e-9.
#[test]
fn c4_inequality_chain() {
    let mut failures = Vec::new();
    let c = closed_form_c();
    let cap = s_square_cap(c).unwrap();
    let k_cap = (cap - 54.0) / 486.0;
    if cap >= 37.0 {
        failures.push(format!("cap {cap} not below 37"));
    }
    if k_cap >= -17.0 / 486.0 {
        failures.push(format!("k_cap {k_cap} not below -17/486"));
    }
    if -17.0 / 486.0 >= -1.0 / 30.0 {
        failures.push("-17/486 not below -1/30".to_string());
    }
    let gap: f64 = 17.0 / 486.0 - 1.0 / 30.0;
    if (gap - 24.0 / 14580.0).abs() > 1e-9 {
        failures.push(format!("chain gap {gap} differs from 24/14580"));
    }
    if (gap - 1.65e-3).abs() > 1e-5 {
        failures.push(format!("chain gap {gap} not ~1.65e-3"));
    }
    criterion(
        4,
        "inequality chain",
        &failures,
        format!("cap = {cap:.6} < 37, k_cap = {k_cap:.6} < -17/486, gap = {gap:.9}"),
    );
}

/// Criterion 5: over a 24x24 parameter grid the unbiased-vector search
/// succeeds on at least 90% of the points, and every found vector has
/// real K within 1e-9, K below the cap, and the spectral identity
/// K = (s0²+s1²+s2²-54)/486 within 1e-9.
#[test]
fn c5_empirical_corroboration() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let k_cap = (s_square_cap(closed_form_c()).unwrap() - 54.0) / 486.0;
    let grid = 24usize;
    let mut successes = 0usize;
    for i in 0..grid {
        for j in 0..grid {
            let p = FourierFamilyParams::from_phases(
                TAU * i as f64 / grid as f64,
                TAU * j as f64 / grid as f64,
            );
            let seed = 9000 + (i * grid + j) as u64;
            match find_unbiased_vector(&p, seed) {
                Ok(found) => {
                    successes += 1;
                    let k = witness_k_fab(&found.vector, &p).unwrap();
                    if k.im.abs() > 1e-9 {
                        failures.push(format!("K not real at grid ({i},{j}): im {:.2e}", k.im));
                    }
                    if k.re > k_cap + 1e-9 {
                        failures.push(format!("K above cap at grid ({i},{j}): {}", k.re));
                    }
                    let s = spectral_s(&found.vector.entries()[..3]).unwrap();
                    let from_s = k_from_s(&s, 1e-6).unwrap();
                    if (from_s - k.re).abs() > 1e-9 {
                        failures.push(format!(
                            "spectral identity off at grid ({i},{j}): {:.2e}",
                            (from_s - k.re).abs()
                        ));
                    }
                }
                Err(MubError::SearchFailed { .. }) => {}
                Err(other) => failures.push(format!("unexpected search error: {other}")),
            }
        }
    }
    let rate = successes as f64 / (grid * grid) as f64;
    if rate < 0.9 {
        failures.push(format!("success rate {rate:.3} below 0.9"));
    }
    let elapsed = started.elapsed();
    if elapsed.as_secs_f64() > 300.0 {
        failures.push(format!("runtime {elapsed:?} exceeds 5 min"));
    }
    criterion(
        5,
        "empirical corroboration",
        &failures,
        format!("success rate {rate:.3} on {grid}x{grid}, {elapsed:?}"),
    );
}

/// Criterion 6: the pentagon bound is sqrt(5) with brute-force maximum
/// 2, and the LP bound dominates the exhaustive maximum for every
/// symmetric forbidden set on every abelian group of order <= 10.
#[test]
fn c6_desk_scale_lp() {
    let started = Instant::now();
    let mut failures = Vec::new();

    let g5 = group(&[5]);
    let a5 = forbidden_from_indices(&g5, &[0, 1, 4]);
    let (_, bound5) = optimal_witness(&g5, &a5, DEFAULT_TOL).unwrap();
    if (bound5 - 5.0f64.sqrt()).abs() > 1e-6 {
        failures.push(format!("pentagon bound {bound5}"));
    }
    let brute5 = brute_force_max(&g5, &a5).unwrap();
    if brute5.cardinality != 2 {
        failures.push(format!("pentagon brute force {}", brute5.cardinality));
    }

    let group_shapes: [&[u32]; 14] = [
        &[1],
        &[2],
        &[3],
        &[4],
        &[2, 2],
        &[5],
        &[6],
        &[7],
        &[8],
        &[2, 4],
        &[2, 2, 2],
        &[9],
        &[3, 3],
        &[10],
    ];
    let mut checked = 0usize;
    for shape in group_shapes {
        let g = group(shape);
        let classes = negation_classes(&g);
        for mask in 0..(1u32 << classes.len()) {
            let mut indices = vec![0usize];
            for (bit, class) in classes.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    indices.extend_from_slice(class);
                }
            }
            let a = forbidden_from_indices(&g, &indices);
            let (_, bound) = optimal_witness(&g, &a, DEFAULT_TOL).unwrap();
            let brute = brute_force_max(&g, &a).unwrap();
            checked += 1;
            if bound + 1e-9 < brute.cardinality as f64 {
                failures.push(format!(
                    "unsound bound {bound} < {} on {shape:?} mask {mask}",
                    brute.cardinality
                ));
            }
        }
    }
    let elapsed = started.elapsed();
    if elapsed.as_secs_f64() > 120.0 {
        failures.push(format!("runtime {elapsed:?} exceeds 2 min"));
    }
    criterion(
        6,
        "desk-scale LP bounds",
        &failures,
        format!("pentagon = sqrt(5), {checked} exhaustive instances dominated, {elapsed:?}"),
    );
}

/// Criterion 7: on 500 randomized instances the improved bound never
/// exceeds the classical one, and exclusion verdicts never contradict
/// exhaustive enumeration over sets containing the pinned points.
#[test]
fn c7_improved_soundness() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut rng = StdRng::seed_from_u64(707);
    let shapes: [&[u32]; 16] = [
        &[2],
        &[3],
        &[4],
        &[5],
        &[6],
        &[7],
        &[8],
        &[9],
        &[10],
        &[11],
        &[12],
        &[2, 2],
        &[2, 4],
        &[2, 2, 2],
        &[3, 3],
        &[2, 6],
    ];
    let mut dominance_checked = 0usize;
    let mut corollary_ran = 0usize;
    let mut exclusions_cross_checked = 0usize;
    let mut attempts = 0usize;
    while dominance_checked < 500 && attempts < 20_000 {
        attempts += 1;
        let shape = shapes[rng.gen_range(0..shapes.len())];
        let g = group(shape);
        let classes = negation_classes(&g);
        let mut indices = vec![0usize];
        for class in &classes {
            if rng.gen_bool(0.4) {
                indices.extend_from_slice(class);
            }
        }
        let a = forbidden_from_indices(&g, &indices);
        let Ok((witness, bound)) = optimal_witness(&g, &a, DEFAULT_TOL) else {
            continue;
        };

        // random nonempty prescribed set
        let c_size = rng.gen_range(1..=3.min(g.order()));
        let mut c_set = BTreeSet::new();
        while c_set.len() < c_size {
            c_set.insert(rng.gen_range(0..g.order()));
        }
        let Ok(second) = synthesize_second_witness(&witness, &c_set, DEFAULT_TOL) else {
            continue;
        };
        let improved = improved_bound(&witness, &second, DEFAULT_TOL).unwrap();
        dominance_checked += 1;
        if improved.value > bound + 1e-12 {
            failures.push(format!(
                "improved {} exceeds classical {bound} on {shape:?}",
                improved.value
            ));
        }

        // exclusion test when the bound is a tight integer and pins fit
        let m = bound.round();
        if (bound - m).abs() > 1e-9 || m < 2.0 {
            continue;
        }
        let m = m as usize;
        let compatible = |pinned: &[usize], x: usize| {
            !pinned.contains(&x) && pinned.iter().all(|&b| !a.contains_index(g.sub_indices(x, b)))
        };
        let mut pinned = vec![rng.gen_range(0..g.order())];
        let target = (m - 1).min(2);
        for _ in 0..10 {
            if pinned.len() >= target {
                break;
            }
            let candidate = rng.gen_range(0..g.order());
            if compatible(&pinned, candidate) {
                pinned.push(candidate);
            }
        }
        let pin_set: BTreeSet<usize> = pinned.iter().copied().collect();
        let Ok(pin_witness) = synthesize_second_witness(&witness, &pin_set, DEFAULT_TOL) else {
            continue;
        };
        let scale = pinned.len() as f64;
        let k_scaled = GroupFunction::new(
            g.clone(),
            pin_witness.k.values().iter().map(|v| v / scale).collect(),
        )
        .unwrap();
        match corollary_check(&witness, &pinned, &k_scaled, m, DEFAULT_TOL) {
            Ok(verdict) => {
                corollary_ran += 1;
                if verdict.excluded() {
                    exclusions_cross_checked += 1;
                    let oracle = brute_force_max_containing(&g, &a, &pinned).unwrap();
                    if oracle.cardinality >= m {
                        failures.push(format!(
                            "exclusion contradicted: oracle reaches {} >= {m} on {shape:?} A = {:?} pinned {pinned:?}",
                            oracle.cardinality,
                            indices,
                        ));
                    }
                }
            }
            Err(e) => failures.push(format!("corollary_check error on {shape:?}: {e}")),
        }
    }
    if dominance_checked < 500 {
        failures.push(format!("only {dominance_checked} instances generated"));
    }
    let elapsed = started.elapsed();
    if elapsed.as_secs_f64() > 300.0 {
        failures.push(format!("runtime {elapsed:?} exceeds 5 min"));
    }
    criterion(
        7,
        "improved-bound soundness",
        &failures,
        format!(
            "{dominance_checked} dominance checks, {corollary_ran} exclusion tests ({exclusions_cross_checked} excluded, all cross-checked), {elapsed:?}"
        ),
    );
}

/// Criterion 8: the two computations of the proof quantity S agree to
/// 1e-9, and Fourier round-trip and the Parseval identity hold to 1e-12
/// on random inputs.
#[test]
fn c8_proof_audit_identities() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut rng = StdRng::seed_from_u64(808);

    for shape in [&[12u32][..], &[2, 3, 4][..], &[5, 5][..]] {
        let g = group(shape);
        // random functions: round trip and Parseval
        for _ in 0..20 {
            let values: Vec<Complex64> = (0..g.order())
                .map(|_| Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)))
                .collect();
            let f = GroupFunction::new(g.clone(), values).unwrap();
            let fhat = f.fourier_transform();
            let back = fhat.inverse_transform();
            let scale = 1.0 + f.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
            for (a, b) in f.values().iter().zip(back.values()) {
                if (a - b).norm() > 1e-12 * scale {
                    failures.push(format!("round trip off by {:.2e} on {shape:?}", (a - b).norm()));
                    break;
                }
            }
            let lhs: f64 = f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / g.order() as f64;
            let rhs: f64 = fhat.values().iter().map(|v| v.norm_sqr()).sum();
            if (lhs - rhs).abs() > 1e-12 * (1.0 + lhs) {
                failures.push(format!("parseval off by {:.2e} on {shape:?}", (lhs - rhs).abs()));
            }
        }
    }

    // spectral vs direct S on random witnesses and random B
    for _ in 0..50 {
        let shape: &[u32] = [&[6u32][..], &[8][..], &[2, 5][..], &[12][..]][rng.gen_range(0..4)];
        let g = group(shape);
        let classes = negation_classes(&g);
        let mut indices = vec![0usize];
        for class in &classes {
            if rng.gen_bool(0.35) {
                indices.extend_from_slice(class);
            }
        }
        let a = forbidden_from_indices(&g, &indices);
        let Ok((witness, _)) = optimal_witness(&g, &a, DEFAULT_TOL) else {
            continue;
        };
        let size = rng.gen_range(1..=g.order().min(5));
        let mut b_set = BTreeSet::new();
        while b_set.len() < size {
            b_set.insert(rng.gen_range(0..g.order()));
        }
        let b_vec: Vec<usize> = b_set.into_iter().collect();
        let report = audit_proof(&witness, &b_vec);
        let diff = (report.audit.s_spectral - report.audit.s_direct).abs();
        if diff > 1e-9 * (1.0 + report.audit.s_direct.abs()) {
            failures.push(format!("S mismatch {diff:.2e} on {shape:?} B = {b_vec:?}"));
        }
    }
    let elapsed = started.elapsed();
    if elapsed.as_secs_f64() > 10.0 {
        failures.push(format!("runtime {elapsed:?} exceeds 10 s"));
    }
    criterion(
        8,
        "proof-audit identities",
        &failures,
        format!("S spectral = direct, round trip and Parseval at 1e-12, {elapsed:?}"),
    );
}

/// Criterion 9: the CLI certificate returns verdict true for every
/// tested parameter pair, with parameter-independent constants
/// byte-identical across runs, and a single certificate under 1 s.
#[test]
fn c9_headline_certificate() {
    let mut failures = Vec::new();
    let pairs = [(0.0, 0.0), (1.234, 4.5), (3.31, 2.68), (5.9, 0.77)];
    let mut constant_blocks: Vec<String> = Vec::new();
    let mut single_runtime = None;

    for &(a, b) in &pairs {
        let args = [
            "mub",
            "certify-fab",
            "--a-phase",
            &a.to_string(),
            "--b-phase",
            &b.to_string(),
            "--samples",
            "3",
            "--seed",
            "13",
        ];
        let started = Instant::now();
        let first =
            Command::new(env!("CARGO_BIN_EXE_delsarte")).args(args).output().expect("binary runs");
        let elapsed = started.elapsed();
        single_runtime.get_or_insert(elapsed);
        if first.status.code() != Some(0) {
            failures.push(format!("verdict not true at ({a}, {b})"));
            continue;
        }
        let second =
            Command::new(env!("CARGO_BIN_EXE_delsarte")).args(args).output().expect("binary runs");
        if first.stdout != second.stdout {
            failures.push(format!("non-deterministic output at ({a}, {b})"));
        }
        let json: serde_json::Value =
            serde_json::from_slice(&first.stdout).expect("valid JSON certificate");
        if json["verdict"] != true {
            failures.push(format!("verdict field false at ({a}, {b})"));
        }
        let constants = format!(
            "{}|{}|{}|{}|{}",
            json["c_closed_form"],
            json["c_numeric"],
            json["s_square_cap"],
            json["k_cap"],
            json["margin"]
        );
        constant_blocks.push(constants);
        if elapsed.as_secs_f64() > 1.0 {
            failures.push(format!("single certificate took {elapsed:?} at ({a}, {b})"));
        }
    }
    if !constant_blocks.windows(2).all(|w| w[0] == w[1]) {
        failures.push(format!("constants differ across parameters: {constant_blocks:?}"));
    }
    criterion(
        9,
        "headline certificate",
        &failures,
        format!(
            "{} parameter pairs, constants byte-identical, first run {:?}",
            pairs.len(),
            single_runtime.unwrap()
        ),
    );
}
