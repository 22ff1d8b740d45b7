//! Acceptance checks: one line per criterion, tolerances fixed.
//!
//! Runs without the libtest harness so every line is printed in order. A
//! check listed as a known failure prints `FAIL (known)` with the reason and
//! does not fail the run; any other failing check exits nonzero.

use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;

use aimsolve::aim::find_roots;
use aimsolve::potentials::{closed_form_energy, reduce, PotentialKind, PotentialSpec};
use aimsolve::specfun::{hyp1f1_terminating, hyp2f1_terminating};
use aimsolve::verify::{jet_law_bounds, laguerre_oracle_gap, oscillator_triangle, x0_deviation};
use aimsolve::wavefunctions::{build_state, count_nodes, ode_residual, overlap, residual_points, suggested_r_max};

struct Outcome {
    id: &'static str,
    label: String,
    passed: bool,
    detail: String,
    known_failure: Option<&'static str>,
}

#[derive(Default)]
struct Board {
    lines: Vec<Outcome>,
}

impl Board {
    fn check(&mut self, id: &'static str, label: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.record(id, label, passed, detail, None);
    }

    fn record(
        &mut self,
        id: &'static str,
        label: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
        known_failure: Option<&'static str>,
    ) {
        let o = Outcome { id, label: label.into(), passed, detail: detail.into(), known_failure };
        let tag = match (o.passed, o.known_failure) {
            (true, None) => "PASS",
            (true, Some(_)) => "PASS (listed as known failure)",
            (false, None) => "FAIL",
            (false, Some(_)) => "FAIL (known)",
        };
        println!("[{tag}] {} {}: {}", o.id, o.label, o.detail);
        if let (false, Some(why)) = (o.passed, o.known_failure) {
            println!("       reason: {why}");
        }
        self.lines.push(o);
    }
}

fn natural(kind: PotentialKind, dim: u32, ell: u32) -> PotentialSpec {
    PotentialSpec::natural(kind, dim, ell).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

const DIMS: [u32; 4] = [2, 3, 4, 6];

/// Worst relative AIM/closed-form gap over the `(D, ℓ, n)` grid.
fn sweep(kinds: &[PotentialKind]) -> (f64, usize, usize) {
    let mut cases = Vec::new();
    for &kind in kinds {
        for dim in DIMS {
            for ell in 0..=3 {
                for n in 0..=5 {
                    cases.push((natural(kind, dim, ell), n));
                }
            }
        }
    }
    let results: Vec<Option<f64>> = cases
        .par_iter()
        .map(|(spec, n)| {
            let sol = reduce(spec).solve(*n, None).ok()?;
            Some(rel(sol.energy, closed_form_energy(spec, *n)))
        })
        .collect();
    let failures = results.iter().filter(|r| r.is_none()).count();
    let worst = results.iter().flatten().fold(0.0_f64, |m, &v| m.max(v));
    (worst, cases.len(), failures)
}

fn criterion_1(board: &mut Board) {
    let mut kinds = Vec::new();
    for a in [1.0, 2.0] {
        for b in [0.0, 0.5, 1.0] {
            kinds.push(PotentialKind::KratzerFues { a, b });
        }
    }
    let (worst, count, failures) = sweep(&kinds);
    board.check(
        "1",
        "Kratzer AIM vs closed form",
        failures == 0 && worst <= 1e-8,
        format!("{count} states, {failures} unsolved, max relative gap {worst:.3e} (tol 1e-8)"),
    );
    let e = reduce(&natural(PotentialKind::KratzerFues { a: 1.0, b: 0.0 }, 3, 0)).solve(0, None).unwrap().energy;
    board.check("1", "Kratzer A=1 B=0 D=3 l=0 n=0", rel(e, -0.5) <= 1e-8, format!("E = {e:.12} (want -0.5)"));
}

fn criterion_2(board: &mut Board) {
    let mut kinds = Vec::new();
    for kappa in [1.0, 4.0] {
        for r_e in [0.5, 1.0, 2.0] {
            kinds.push(PotentialKind::Pseudoharmonic { kappa, r_e });
        }
    }
    let (worst, count, failures) = sweep(&kinds);
    board.check(
        "2",
        "pseudoharmonic AIM vs closed form",
        failures == 0 && worst <= 1e-8,
        format!("{count} states, {failures} unsolved, max relative gap {worst:.3e} (tol 1e-8)"),
    );
}

fn criterion_3(board: &mut Board) {
    match oscillator_triangle(&[1, 2, 3, 5], 2, 3) {
        Ok(t) => {
            for (name, gap) in [
                ("AIM vs closed form", t.aim_closed),
                ("AIM vs grid oracle", t.aim_grid),
                ("grid oracle vs closed form", t.grid_closed),
            ] {
                board.check("3", format!("oscillator {name}"), gap <= 1e-6, format!("max |dE| {gap:.3e} (tol 1e-6)"));
            }
            // 4 dimensions × 3 values of ℓ × 3 levels with n >= 1
            let expected = 4 * 3 * 3;
            board.check(
                "3",
                "single-step ladder hbar*w(n+l+D/2) departs from the spectrum for n >= 1",
                t.single_step_mismatches == expected && t.single_step_mismatches_n0 == 0,
                format!(
                    "{} of {expected} levels with n >= 1 differ, {} at n = 0",
                    t.single_step_mismatches, t.single_step_mismatches_n0
                ),
            );
        }
        Err(e) => board.check("3", "oscillator triangle", false, e),
    }
}

fn criterion_4(board: &mut Board) {
    let mut worst = 0.0_f64;
    for kappa in [1.0, 4.0] {
        for mu in [1.0, 2.5] {
            for dim in DIMS {
                for ell in 0..=3 {
                    let pseudo = PotentialSpec::new(PotentialKind::Pseudoharmonic { kappa, r_e: 0.0 }, mu, 1.0, dim, ell)
                        .unwrap();
                    let omega = 0.5 * (kappa / mu).sqrt();
                    let osc = PotentialSpec::new(PotentialKind::HarmonicOscillator { omega }, mu, 1.0, dim, ell).unwrap();
                    for n in 0..=5 {
                        worst = worst.max(rel(closed_form_energy(&pseudo, n), closed_form_energy(&osc, n)));
                    }
                }
            }
        }
    }
    board.check("4", "pseudoharmonic r_e = 0 equals oscillator", worst <= 1e-12, format!("max relative gap {worst:.3e} (tol 1e-12)"));

    let mut worst = 0.0_f64;
    for a in [1.0, 2.0] {
        for (mu, hbar) in [(1.0, 1.0), (2.5, 0.7)] {
            for ell in 0..=3 {
                let spec = PotentialSpec::new(PotentialKind::KratzerFues { a, b: 0.0 }, mu, hbar, 3, ell).unwrap();
                for n in 0..=5 {
                    let k = (n + ell as usize + 1) as f64;
                    let want = -mu * a * a / (2.0 * hbar * hbar * k * k);
                    worst = worst.max(rel(closed_form_energy(&spec, n), want));
                }
            }
        }
    }
    board.check("4", "Kratzer B = 0, D = 3 equals hydrogenic ladder", worst <= 1e-12, format!("max relative gap {worst:.3e} (tol 1e-12)"));
}

/// Whether `δ_k` has a root within `1e-9` relative of `target`.
fn ladder_hit(spec: &PotentialSpec, k: usize, target: f64) -> (bool, f64) {
    let red = reduce(spec);
    let problem = red.aim_problem(k + 1, None);
    let roots = find_roots(&problem, k, 4000).unwrap_or_default();
    let nearest = roots.iter().map(|r| rel(*r, target)).fold(f64::INFINITY, f64::min);
    (nearest <= 1e-9, nearest)
}

fn first_k_with_root(spec: &PotentialSpec, target: f64) -> Option<usize> {
    (1..=12).find(|&k| ladder_hit(spec, k, target).0)
}

fn criterion_5(board: &mut Board) {
    // oscillator: λ_0 = γ(2ℓ + D) at k = 1
    let mut worst = 0.0_f64;
    let mut ok = true;
    for (omega, dim, ell) in [(1.0, 3, 0), (1.0, 2, 1), (2.0, 5, 2)] {
        let spec = natural(PotentialKind::HarmonicOscillator { omega }, dim, ell);
        let target = omega * (2 * ell + dim) as f64;
        let (hit, gap) = ladder_hit(&spec, 1, target);
        ok &= hit;
        worst = worst.max(gap);
    }
    board.check("5", "oscillator k=1 root at gamma(2l+D)", ok, format!("nearest relative gap {worst:.3e} (tol 1e-9)"));

    // pseudoharmonic: λ = ½(4(k-1) + 2ν + D) S - μκr_e²/(2ħ²)
    let cases = [(4.0, 1.0, 3, 0), (1.0, 2.0, 2, 1), (4.0, 0.5, 4, 2)];
    for k in 1..=3 {
        let mut worst = 0.0_f64;
        let mut ok = true;
        let mut first_seen = Vec::new();
        for (kappa, r_e, dim, ell) in cases {
            let spec = natural(PotentialKind::Pseudoharmonic { kappa, r_e }, dim, ell);
            let red = reduce(&spec);
            let s = kappa.sqrt();
            let target = 0.5 * (4.0 * (k - 1) as f64 + 2.0 * red.exponent + dim as f64) * s - 0.5 * kappa * r_e * r_e;
            let (hit, gap) = ladder_hit(&spec, k, target);
            ok &= hit;
            worst = worst.max(gap);
            first_seen.push(first_k_with_root(&spec, target));
        }
        let detail = format!(
            "nearest relative gap {worst:.3e} (tol 1e-9); level first appears at k = {:?}",
            first_seen.iter().map(|k| k.map_or(-1, |k| k as i64)).collect::<Vec<_>>()
        );
        let known = (k == 3).then_some(
            "level 2 is a degree-4 polynomial in r, so delta_k first vanishes on it at k = 4; \
             delta_3 only carries x0-dependent roots near it",
        );
        board.record("5", format!("pseudoharmonic k={k} root at level {}", k - 1), ok, detail, known);
    }

    // Kratzer: ε_{k-1} = α/(2ν + D - 1 + 2(k-1)) at k
    for k in 1..=3 {
        let mut worst = 0.0_f64;
        let mut ok = true;
        for (a, b, dim, ell) in [(1.0, 0.0, 3, 0), (2.0, 0.5, 4, 1), (1.0, 1.0, 2, 3)] {
            let spec = natural(PotentialKind::KratzerFues { a, b }, dim, ell);
            let red = reduce(&spec);
            let target = 2.0 * a / (2.0 * red.exponent + dim as f64 - 1.0 + 2.0 * (k - 1) as f64);
            let (hit, gap) = ladder_hit(&spec, k, target);
            ok &= hit;
            worst = worst.max(gap);
        }
        board.check("5", format!("Kratzer k={k} root at level {}", k - 1), ok, format!("nearest relative gap {worst:.3e} (tol 1e-9)"));
    }
}

fn criterion_6(board: &mut Board) {
    let kinds = [
        PotentialKind::HarmonicOscillator { omega: 1.0 },
        PotentialKind::Pseudoharmonic { kappa: 4.0, r_e: 1.0 },
        PotentialKind::KratzerFues { a: 1.0, b: 0.5 },
    ];
    for kind in kinds {
        let cases: Vec<(PotentialSpec, usize)> = [(2, 0), (3, 1), (4, 2), (6, 3)]
            .into_iter()
            .flat_map(|(dim, ell)| (0..=5).map(move |n| (natural(kind, dim, ell), n)))
            .collect();
        let gaps: Vec<Option<f64>> = cases.par_iter().map(|(s, n)| x0_deviation(s, *n).ok()).collect();
        let failures = gaps.iter().filter(|g| g.is_none()).count();
        let worst = gaps.iter().flatten().fold(0.0_f64, |m, &v| m.max(v));
        board.check(
            "6",
            format!("{} eigenvalues at x0 and 1.5 x0", kind.name()),
            failures == 0 && worst <= 1e-7,
            format!("{} states, {failures} unsolved, max relative gap {worst:.3e} (tol 1e-7)", cases.len()),
        );
    }
}

#[derive(Default)]
struct WaveStats {
    norm: f64,
    orth: f64,
    node_errors: usize,
    residual: f64,
    perturbed: f64,
    states: usize,
}

fn wave_stats(spec: &PotentialSpec) -> WaveStats {
    let states: Vec<_> = (0..=6).map(|n| build_state(spec, n).unwrap()).collect();
    let mut out = WaveStats { perturbed: f64::INFINITY, states: states.len(), ..Default::default() };
    for (i, a) in states.iter().enumerate() {
        out.norm = out.norm.max((overlap(a, a).unwrap() - 1.0).abs());
        for b in &states[i + 1..] {
            out.orth = out.orth.max(overlap(a, b).unwrap().abs());
        }
        if count_nodes(a, suggested_r_max(a), 2000).unwrap() != a.n {
            out.node_errors += 1;
        }
        let pts = residual_points(a, 50);
        out.residual = out.residual.max(ode_residual(a, &pts).unwrap());
        let mut shifted = a.clone();
        shifted.energy *= 1.01;
        out.perturbed = out.perturbed.min(ode_residual(&shifted, &pts).unwrap());
    }
    out
}

fn criterion_7(board: &mut Board) {
    let kinds = [
        PotentialKind::HarmonicOscillator { omega: 1.0 },
        PotentialKind::Pseudoharmonic { kappa: 4.0, r_e: 1.0 },
        PotentialKind::KratzerFues { a: 1.0, b: 0.5 },
    ];
    let specs: Vec<PotentialSpec> = kinds
        .iter()
        .flat_map(|&k| [2, 3, 5].into_iter().flat_map(move |d| (0..=2).map(move |l| natural(k, d, l))))
        .collect();
    let stats: Vec<WaveStats> = specs.par_iter().map(wave_stats).collect();
    let total: usize = stats.iter().map(|s| s.states).sum();
    let max = |f: fn(&WaveStats) -> f64| stats.iter().map(f).fold(0.0_f64, f64::max);
    let norm = max(|s| s.norm);
    let orth = max(|s| s.orth);
    let residual = max(|s| s.residual);
    let perturbed = stats.iter().map(|s| s.perturbed).fold(f64::INFINITY, f64::min);
    let nodes: usize = stats.iter().map(|s| s.node_errors).sum();
    board.check("7", "normalization", norm <= 1e-8, format!("{total} states, max |<n|n> - 1| {norm:.3e} (tol 1e-8)"));
    board.check("7", "orthogonality", orth <= 1e-8, format!("max |<n|m>| {orth:.3e} (tol 1e-8)"));
    board.check("7", "node count equals n", nodes == 0, format!("{nodes} mismatches over n <= 6"));
    board.check("7", "radial equation residual", residual <= 1e-6, format!("max {residual:.3e} (tol 1e-6)"));
    board.check(
        "7",
        "residual after 1% energy perturbation",
        perturbed >= 1e-3,
        format!("min {perturbed:.3e} (must be >= 1e-3)"),
    );
}

fn criterion_8(board: &mut Board) {
    let zs: Vec<f64> = (0..=80).map(|i| 0.25 * i as f64).collect();
    let gap = laguerre_oracle_gap(10, &[0.5, 1.0, 1.5, 2.5, 4.0, 7.5, 10.0], &zs);
    board.check("8", "1F1 vs Laguerre recurrence", gap <= 1e-10, format!("n <= 10, z in [0, 20]: max relative gap {gap:.3e} (tol 1e-10)"));

    // oscillator template with γ = 1: ρ = 1/b + a', a' = (2ℓ+D-2)/2, c = (2ℓ+D)/2
    let limit_gap = |b: f64| {
        let mut worst = 0.0_f64;
        let mut worst_at = (0, 0.0, 0.0);
        for (dim, ell) in [(2, 0), (3, 0), (3, 1)] {
            let a1 = (2 * ell + dim - 2) as f64 / 2.0;
            let c = (2 * ell + dim) as f64 / 2.0;
            for n in 0..=5 {
                // clear of the polynomial zeros, where a relative gap means nothing
                for z in [0.3, 0.7, 1.7, 3.3] {
                    let lim = hyp2f1_terminating(n, 1.0 / b + a1, c, z * b).unwrap();
                    let want = hyp1f1_terminating(n, c, z).unwrap();
                    let g = rel(lim, want);
                    if g > worst {
                        worst = g;
                        worst_at = (n, c, z);
                    }
                }
            }
        }
        (worst, worst_at)
    };
    let (worst, at) = limit_gap(1e-6);
    board.record(
        "8",
        "2F1 -> 1F1 limit at b = 1e-6",
        worst <= 1e-5,
        format!("n <= 5: max relative gap {worst:.3e} at (n, c, z) = {at:?} (tol 1e-5)"),
        Some(
            "(1/b + a' + n)_j b^j = (1 + b(a' + n + (j-1)/2))^j to first order, so the gap at b = 1e-6 \
             is about 1e-6 * n(a' + n) before cancellation; it exceeds 1e-5 once n >= 2",
        ),
    );
    let (small, _) = limit_gap(1e-9);
    board.check("8", "2F1 -> 1F1 limit at b = 1e-9", small <= 1e-5, format!("max relative gap {small:.3e} (tol 1e-5)"));
}

fn criterion_9(board: &mut Board) {
    let b = jet_law_bounds(1000, 20_240_917);
    board.check("9", "mul commutativity", b.commutativity <= 1e-12, format!("1000 jets, max {:.3e} (tol 1e-12)", b.commutativity));
    board.check("9", "mul associativity", b.associativity <= 1e-12, format!("max {:.3e} (tol 1e-12)", b.associativity));
    board.check("9", "Leibniz rule", b.leibniz <= 1e-12, format!("max {:.3e} (tol 1e-12)", b.leibniz));
    board.check("9", "reciprocal identity", b.reciprocal <= 1e-10, format!("max {:.3e} (tol 1e-10)", b.reciprocal));
}

fn main() -> ExitCode {
    let mut board = Board::default();
    let criteria: [(&str, fn(&mut Board)); 9] = [
        ("1", criterion_1),
        ("2", criterion_2),
        ("3", criterion_3),
        ("4", criterion_4),
        ("5", criterion_5),
        ("6", criterion_6),
        ("7", criterion_7),
        ("8", criterion_8),
        ("9", criterion_9),
    ];
    for (id, run) in criteria {
        let start = Instant::now();
        run(&mut board);
        println!("       criterion {id} took {:.1?}", start.elapsed());
    }
    let unexpected: Vec<&Outcome> = board.lines.iter().filter(|o| !o.passed && o.known_failure.is_none()).collect();
    let known = board.lines.iter().filter(|o| !o.passed && o.known_failure.is_some()).count();
    let passed = board.lines.iter().filter(|o| o.passed).count();
    println!("acceptance: {passed} passed, {known} known failures, {} unexpected failures", unexpected.len());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
