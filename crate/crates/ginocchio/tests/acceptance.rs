//! Acceptance gate: every top-level requirement of the library, run
//! end-to-end at its stated tolerance, one printed verdict line per
//! criterion. Failures are collected and reported together at the end so a
//! single run shows the complete picture.
//!
//! Criteria 1 and 3 are expected to fail honestly on a handful of catalog
//! rows whose printed values are inconsistent with the closed form (the
//! discrepancies are reproduced by two independent implementations); the
//! verdict lines carry the measured deviations.

use std::fmt::Write as _;
use std::time::Instant;

use ginocchio::analysis::{
    certify, find_minima, log_grid, refine_ss, scan_ss_candidates, Certification,
    FreeParameter, SpectralSingularity,
};
use ginocchio::catalog::{absorptive_family_spec, singular_row, spec_for, v0_delta, SINGULAR_ROWS};
use ginocchio::oracle::{integrate_rt, OracleConfig};
use ginocchio::potential::{default_profile_grid, potential_value, PotentialSpec, Sign};
use ginocchio::scattering::{
    amplitudes, amplitudes_with, diagnostics_with, EnergyPoint, MuBranch, SignBinding,
};
use ginocchio::wavefield::{default_fit_window, jost_fit, ode_residual};
use ginocchio::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Best certified singularity for a spec near a target energy: refine every
/// scan candidate with each of the three free parameters, keep the certified
/// result closest to the target. Also returns how many distinct certified
/// singularities the winning free parameter produced.
fn best_reproduction(
    spec: &PotentialSpec,
    target_e: f64,
) -> Option<(SpectralSingularity, Certification, FreeParameter, usize)> {
    let cands = scan_ss_candidates(spec, (0.2 * target_e, 3.0 * target_e), 2000).ok()?;
    let mut best: Option<(SpectralSingularity, Certification, FreeParameter)> = None;
    let mut distinct_per_free = [0usize; 3];
    for (fi, free) in [FreeParameter::Lambda, FreeParameter::ReNu, FreeParameter::ImNu]
        .into_iter()
        .enumerate()
    {
        let mut distinct: Vec<(i64, f64)> = Vec::new();
        for cand in cands.iter().filter(|c| c.f_distance < 0.5) {
            let Ok(ss) = refine_ss(spec, free, cand) else { continue };
            let cert = certify(&ss);
            if !cert.is_certified() {
                continue;
            }
            if !distinct
                .iter()
                .any(|&(n, e)| n == ss.n && (e - ss.e_star).abs() < 1e-6 * ss.e_star)
            {
                distinct.push((ss.n, ss.e_star));
            }
            let better = match &best {
                None => true,
                Some((prev, _, _)) => {
                    (ss.e_star - target_e).abs() < (prev.e_star - target_e).abs()
                }
            };
            if better {
                best = Some((ss, cert, free));
            }
        }
        distinct_per_free[fi] = distinct.len();
    }
    best.map(|(ss, cert, free)| {
        let fi = match free {
            FreeParameter::Lambda => 0,
            FreeParameter::ReNu => 1,
            FreeParameter::ImNu => 2,
        };
        (ss, cert, free, distinct_per_free[fi])
    })
}

/// Highest point of the real potential profile.
fn barrier_top(spec: &PotentialSpec) -> f64 {
    default_profile_grid(spec.lambda)
        .iter()
        .map(|&x| potential_value(x, spec).re)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn criterion_1() -> Result<String, String> {
    let mut failures = String::new();
    let mut worst_rel = 0.0f64;
    let mut worst_time = 0.0f64;
    let mut passed = 0;
    for row in &SINGULAR_ROWS {
        let started = Instant::now();
        let spec = spec_for(row);
        let found = best_reproduction(&spec, row.e_star);
        let elapsed = started.elapsed().as_secs_f64();
        worst_time = worst_time.max(elapsed);
        let mut row_fail = |msg: String| {
            let _ = write!(failures, "; row {}: {}", row.index, msg);
        };
        match found {
            None => row_fail("no certified singularity".into()),
            Some((ss, _cert, _free, distinct)) => {
                let rel = (ss.e_star - row.e_star).abs() / row.e_star;
                worst_rel = worst_rel.max(rel);
                let mut ok = true;
                if distinct != 1 {
                    row_fail(format!("{distinct} distinct certified singularities"));
                    ok = false;
                }
                if ss.n != row.n {
                    row_fail(format!("order {} printed {}", ss.n, row.n));
                    ok = false;
                }
                if rel > 0.01 {
                    row_fail(format!(
                        "E* = {:.6} off printed {} by {:.4}% (> 1%)",
                        ss.e_star,
                        row.e_star,
                        100.0 * rel
                    ));
                    ok = false;
                }
                if elapsed >= 10.0 {
                    row_fail(format!("took {elapsed:.1} s (>= 10 s)"));
                    ok = false;
                }
                if ok {
                    passed += 1;
                }
            }
        }
    }
    let summary = format!(
        "{passed}/18 rows, worst E* rel error {:.4}%, slowest row {:.2} s",
        100.0 * worst_rel,
        worst_time
    );
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}{failures}"))
    }
}

fn criterion_2() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xab5035);
    let mut total_certified = 0usize;
    let mut draws = 0usize;
    for index in [19usize, 20] {
        for _ in 0..3 {
            let a: f64 = rng.gen_range(0.5..8.0);
            let b: f64 = rng.gen_range(0.5..8.0);
            let spec = absorptive_family_spec(index, a, b);
            let cands = match scan_ss_candidates(&spec, (1e-3, 1000.0), 2000) {
                Ok(c) => c,
                Err(e) => return Err(format!("family {index} (a={a:.3}, b={b:.3}): {e}")),
            };
            for cand in cands.iter().filter(|c| c.f_distance < 0.5) {
                for free in [FreeParameter::Lambda, FreeParameter::ReNu, FreeParameter::ImNu] {
                    if let Ok(ss) = refine_ss(&spec, free, cand) {
                        if certify(&ss).is_certified() {
                            total_certified += 1;
                        }
                    }
                }
            }
            draws += 1;
        }
    }
    if total_certified == 0 {
        Ok(format!("{draws} random absorbing parameter draws, 0 certified singularities"))
    } else {
        Err(format!("{total_certified} certified singularities in absorbing families"))
    }
}

fn criterion_3() -> Result<String, String> {
    let mut failures = String::new();
    let mut passed = 0;
    for row in &SINGULAR_ROWS {
        let d = v0_delta(row);
        let ok = if row.v0_flagged {
            // The flagged row's printed real part is off by exactly 5; the
            // imaginary part must still agree.
            (d.re - 5.0).abs() <= 0.01 && d.im.abs() <= 0.01
        } else {
            d.re.abs() <= 0.01 && d.im.abs() <= 0.01
        };
        if ok {
            passed += 1;
        } else {
            let _ = write!(
                failures,
                "; row {}: delta = {:+.4}{:+.4}i beyond +/-0.01",
                row.index, d.re, d.im
            );
        }
    }
    if failures.is_empty() {
        Ok(format!("{passed}/18 origin values within +/-0.01 (one flagged offset of 5.0)"))
    } else {
        Err(format!("{passed}/18 within tolerance{failures}"))
    }
}

fn criterion_4() -> Result<String, String> {
    let row = singular_row(11);
    let spec = spec_for(row);
    let (ss, _, _, _) =
        best_reproduction(&spec, row.e_star).ok_or("no certified singularity for row 11")?;
    let tuned = ss.refined_spec;
    let e_star = ss.e_star;
    let n = 10_000usize;
    let lo = 0.99 * e_star;
    let hi = 1.01 * e_star;
    let grid: Vec<f64> =
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();

    let mut nearest = 0usize;
    for (i, &e) in grid.iter().enumerate() {
        if (e - e_star).abs() < (grid[nearest] - e_star).abs() {
            nearest = i;
        }
    }
    let ep = EnergyPoint::new(grid[nearest]).unwrap();
    let (r_peak, t_peak) = match amplitudes(&ep, &tuned, false) {
        Ok(a) => (a.big_r, a.big_t),
        // Landing inside the pole sentinel means the peak is unbounded.
        Err(_) => (f64::INFINITY, f64::INFINITY),
    };

    let mut min_h = f64::INFINITY;
    let mut g_before = None;
    let mut g_crosses = false;
    for &e in &grid {
        let ep = EnergyPoint::new(e).unwrap();
        let d = diagnostics_with(&ep, &tuned, false, SignBinding::default(), MuBranch::default());
        min_h = min_h.min(d.h());
        let g = d.g();
        if let Some(prev) = g_before {
            if prev * g < 0.0 && (e - e_star).abs() < 2.0 * (hi - lo) / n as f64 {
                g_crosses = true;
            }
        }
        g_before = Some(g);
    }

    let mut problems = Vec::new();
    if !(r_peak > 1e6) {
        problems.push(format!("R at nearest grid point {r_peak:.3e} <= 1e6"));
    }
    if !(t_peak > 1e6) {
        problems.push(format!("T at nearest grid point {t_peak:.3e} <= 1e6"));
    }
    if !g_crosses {
        problems.push("G does not change sign at E*".into());
    }
    if !(min_h > 0.0) {
        problems.push(format!("H dips to {min_h:.3e}"));
    }
    if problems.is_empty() {
        Ok(format!(
            "peak R = {r_peak:.3e}, T = {t_peak:.3e} on 10^4-point window, G crosses, min H = {min_h:.3}"
        ))
    } else {
        Err(problems.join("; "))
    }
}

fn criterion_5() -> Result<String, String> {
    let spec = PotentialSpec::new(Complex64::new(-0.6, 2.0), 6.0, Sign::Minus).unwrap();
    let printed = 152.723;
    let (ss, _, free, _) =
        best_reproduction(&spec, printed).ok_or("no certified singularity")?;
    let rel = (ss.e_star - printed).abs() / printed;
    if rel > 0.01 {
        return Err(format!("E* = {} off {printed} by {:.3}%", ss.e_star, 100.0 * rel));
    }
    let top = barrier_top(&spec);
    let report = find_minima(&spec, (top, 5.0 * top), 2000)
        .map_err(|e| format!("minima scan: {e}"))?;
    let above = report.minima.len();
    if above < 3 {
        return Err(format!(
            "only {above} reflectivity minima in ({top:.1}, {:.1})",
            5.0 * top
        ));
    }
    Ok(format!(
        "certified E* = {:.3} ({:+.4}% vs {printed}, free = {free:?}), {above} minima above the barrier top {top:.1}",
        ss.e_star,
        100.0 * (ss.e_star - printed) / printed
    ))
}

fn criterion_6() -> Result<String, String> {
    let nus = [
        Complex64::new(-0.5, 2.0),
        Complex64::new(-0.5, -2.0),
        Complex64::new(2.3, 0.0),
    ];
    let mut worst = 0.0f64;
    let mut combos = 0;
    for nu in nus {
        for sign in [Sign::Plus, Sign::Minus] {
            for lambda in [1.0, 6.0, 7.0] {
                let spec = PotentialSpec::new(nu, lambda, sign).unwrap();
                assert!(spec.is_hermitian());
                combos += 1;
                for &e in &log_grid((0.5, 900.0), 100) {
                    let ep = EnergyPoint::new(e).unwrap();
                    let a = amplitudes(&ep, &spec, false).map_err(|err| {
                        format!("nu={nu} lambda={lambda} {sign:?} E={e:.3}: {err}")
                    })?;
                    let dev = (a.u - 1.0).abs();
                    worst = worst.max(dev);
                    if dev >= 1e-9 {
                        return Err(format!(
                            "|R+T-1| = {dev:.3e} at nu={nu} lambda={lambda} {sign:?} E={e:.3}"
                        ));
                    }
                }
            }
        }
    }
    Ok(format!("{combos} Hermitian parameter sets x 100 energies, worst |R+T-1| = {worst:.2e}"))
}

fn criterion_7() -> Result<String, String> {
    let spec = PotentialSpec::new(Complex64::new(-0.5, 2.0), 6.0, Sign::Minus).unwrap();
    let top = barrier_top(&spec);
    let report = find_minima(&spec, (top, 5.0 * top), 2000)
        .map_err(|e| format!("minima scan: {e}"))?;
    let zeros: Vec<&_> = report.minima.iter().filter(|m| m.is_reflectionless).collect();
    if zeros.len() < 3 {
        return Err(format!(
            "only {} reflectionless energies (R < 1e-9) in ({top:.1}, {:.1})",
            zeros.len(),
            5.0 * top
        ));
    }
    let list: Vec<String> = zeros.iter().map(|m| format!("{:.2}", m.e)).collect();
    Ok(format!(
        "{} reflectionless energies above the barrier top {top:.1}: {}",
        zeros.len(),
        list.join(", ")
    ))
}

fn criterion_8() -> Result<String, String> {
    let started = Instant::now();
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for row_index in [1usize, 11, 17] {
        let row = singular_row(row_index);
        let spec = spec_for(row);
        let e_star = row.e_star;
        for &raw in &log_grid((0.2 * e_star, 3.0 * e_star), 20) {
            // Keep clear of the singular flank where both sides blow up.
            let e = if (raw - e_star).abs() <= 0.05 * e_star {
                if raw <= e_star { 0.9499 * e_star } else { 1.0501 * e_star }
            } else {
                raw
            };
            let ep = EnergyPoint::new(e).unwrap();
            let exact = amplitudes(&ep, &spec, false)
                .map_err(|err| format!("row {row_index} E={e:.4}: {err}"))?;
            let config = OracleConfig::for_spec(&spec, &ep);
            let got = integrate_rt(&ep, &spec, &config)
                .map_err(|err| format!("row {row_index} E={e:.4}: {err}"))?;
            for (label, a, b) in
                [("R", exact.big_r, got.big_r), ("T", exact.big_t, got.big_t)]
            {
                let dev = (a - b).abs() / a.abs().max(b.abs()).max(1e-6);
                worst = worst.max(dev);
                if dev > 1e-3 {
                    return Err(format!(
                        "row {row_index} E={e:.4}: {label} closed form {a:.6e} vs integrator {b:.6e} (rel {dev:.2e})"
                    ));
                }
            }
            checked += 1;
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    if elapsed >= 60.0 {
        return Err(format!("agreement held but took {elapsed:.1} s (>= 60 s)"));
    }
    Ok(format!(
        "{checked} energies across 3 catalog rows, worst rel deviation {worst:.2e}, {elapsed:.1} s"
    ))
}

fn criterion_9() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0acce97);
    let mut checked = 0usize;
    let mut worst = 0.0f64;
    while checked < 50 {
        let nu = Complex64::new(rng.gen_range(-8.0..8.0), rng.gen_range(-10.0..10.0));
        let lambda: f64 = rng.gen_range(0.5..9.0);
        let sign = if rng.gen() { Sign::Plus } else { Sign::Minus };
        let e: f64 = rng.gen_range(0.5..800.0);
        let spec = PotentialSpec::new(nu, lambda, sign).unwrap();
        let ep = EnergyPoint::new(e).unwrap();
        let p = amplitudes_with(&ep, &spec, false, SignBinding::default(), MuBranch::Principal);
        let f = amplitudes_with(&ep, &spec, false, SignBinding::default(), MuBranch::Flipped);
        let (p, f) = match (p, f) {
            (Ok(p), Ok(f)) => (p, f),
            (Err(a), Err(b)) if a == b => continue,
            (a, b) => return Err(format!("branch-dependent outcome at {nu}, {lambda}, {e}: {a:?} vs {b:?}")),
        };
        let dr = (p.big_r - f.big_r).abs() / p.big_r.abs().max(1.0);
        let dt = (p.big_t - f.big_t).abs() / p.big_t.abs().max(1.0);
        worst = worst.max(dr).max(dt);
        if dr > 1e-10 || dt > 1e-10 {
            return Err(format!(
                "R/T differ across the index flip by ({dr:.2e}, {dt:.2e}) at nu={nu} lambda={lambda} {sign:?} E={e:.3}"
            ));
        }
        checked += 1;
    }
    Ok(format!("50 random draws, worst branch deviation {worst:.2e}"))
}

fn criterion_10() -> Result<String, String> {
    let mut worst = 0.0f64;
    for (row_index, energies) in [(11usize, [100.0, 300.0]), (17, [14.406, 40.0])] {
        let spec = spec_for(singular_row(row_index));
        for e in energies {
            let ep = EnergyPoint::new(e).unwrap();
            let r = ode_residual(&ep, &spec)
                .map_err(|err| format!("row {row_index} E={e}: {err}"))?;
            worst = worst.max(r);
            if r >= 1e-5 {
                return Err(format!("row {row_index} E={e}: residual {r:.2e} >= 1e-5"));
            }
        }
    }
    Ok(format!("4 cases x 20 sample points, worst relative residual {worst:.2e}"))
}

fn criterion_11() -> Result<String, String> {
    let mut details = Vec::new();
    for (row_index, e) in [(11usize, 100.0), (17, 40.0)] {
        let spec = spec_for(singular_row(row_index));
        let ep = EnergyPoint::new(e).unwrap();
        let fit = jost_fit(&ep, &spec, default_fit_window(&spec))
            .map_err(|err| format!("row {row_index} E={e}: {err}"))?;
        let exact = amplitudes(&ep, &spec, false).unwrap();
        let r_fit = (fit.b / fit.a).norm_sqr();
        let t_fit = (fit.c / fit.a).norm_sqr();
        let dr = (r_fit - exact.big_r).abs() / exact.big_r.max(1e-12);
        let dt = (t_fit - exact.big_t).abs() / exact.big_t.max(1e-12);
        if dr > 1e-4 || dt > 1e-4 {
            return Err(format!(
                "row {row_index} E={e}: |B/A|^2, |C/A|^2 deviate by ({dr:.2e}, {dt:.2e})"
            ));
        }
        details.push(format!("row {row_index} rel ({dr:.1e}, {dt:.1e})"));
    }
    let spec = spec_for(singular_row(17));
    let ep = EnergyPoint::new(24.01).unwrap();
    let fit = jost_fit(&ep, &spec, default_fit_window(&spec))
        .map_err(|err| format!("at the pole: {err}"))?;
    let ratio = fit.a.norm() / fit.c.norm();
    if ratio >= 1e-4 {
        return Err(format!("|A|/|C| = {ratio:.2e} at the row-17 pole (>= 1e-4)"));
    }
    details.push(format!("pole |A|/|C| = {ratio:.1e}"));
    Ok(details.join(", "))
}

fn criterion_12() -> Result<String, String> {
    let bin = env!("CARGO_BIN_EXE_ginocchio");
    let capture = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = std::process::Command::new(bin)
            .args(args)
            .output()
            .map_err(|e| format!("cannot run binary: {e}"))?;
        if out.stdout.is_empty() {
            return Err(format!("no output from {args:?}"));
        }
        Ok(out.stdout)
    };
    for cmd in [&["table1"][..], &["figure", "fig1"][..]] {
        let serial_a = capture(&[cmd, &["--parallel", "1"]].concat())?;
        let serial_b = capture(&[cmd, &["--parallel", "1"]].concat())?;
        let wide = capture(&[cmd, &["--parallel", "4"]].concat())?;
        if serial_a != serial_b {
            return Err(format!("{cmd:?} differs between two identical runs"));
        }
        if serial_a != wide {
            return Err(format!("{cmd:?} differs between --parallel 1 and --parallel 4"));
        }
    }
    Ok("table1 and figure fig1 byte-identical across repeated runs and thread counts".into())
}

#[test]
fn acceptance() {
    let criteria: Vec<(u32, &str, fn() -> Result<String, String>)> = vec![
        (1, "catalog singularity reproduction", criterion_1),
        (2, "absorbing families admit no singularity", criterion_2),
        (3, "origin-value column agreement", criterion_3),
        (4, "amplified peak structure", criterion_4),
        (5, "singularity/minima coexistence", criterion_5),
        (6, "Hermitian unitarity", criterion_6),
        (7, "Hermitian reflectionless energies", criterion_7),
        (8, "closed form vs direct integration", criterion_8),
        (9, "index-branch invariance", criterion_9),
        (10, "wavefunction equation residual", criterion_10),
        (11, "asymptotic-coefficient consistency", criterion_11),
        (12, "byte determinism of the binary", criterion_12),
    ];
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        match run() {
            Ok(detail) => println!("criterion {id} ({name}): PASS — {detail}"),
            Err(detail) => {
                println!("criterion {id} ({name}): FAIL — {detail}");
                failed.push(id);
            }
        }
    }
    assert!(
        failed.is_empty(),
        "criteria {failed:?} failed; see the verdict lines above (known upstream-value \
         discrepancies: criterion 1 row 18, criterion 3 rows 3/6/14/15)"
    );
}
