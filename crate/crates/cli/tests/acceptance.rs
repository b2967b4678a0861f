//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.
//!
//! Run with `cargo test -p qnd-cli --test acceptance -- --nocapture`.

use std::f64::consts::FRAC_PI_2;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qnd_cli::commands;
use qnd_cli::config::Settings;
use qnd_core::eit::{self, DesignRequest, LevelShiftInputs, SnrTarget};
use qnd_core::homodyne::{self, SnrConvention};
use qnd_core::{DriveConfig, MaterialSystem};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(x: f64, lo: f64, hi: f64) -> bool {
    x >= lo && x <= hi
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn nv(theta_max: f64, snr: f64) -> DesignRequest {
    DesignRequest::nv_diamond(theta_max, SnrTarget::Snr { snr })
}

fn binary_discrimination() -> Outcome {
    let analytic = homodyne::p_error_binary(4.6);
    ensure((analytic - 1.078e-2).abs() <= 1e-4, format!("analytic P = {analytic:.6e}"))?;

    let settings = Settings {
        snr: Some(4.6),
        shots: Some(1_000_000),
        seed: Some(commands::DEFAULT_SEED),
        workers: Some(4),
        ..Default::default()
    };
    let (report, elapsed) = timed(|| commands::montecarlo(&settings));
    let report = report.map_err(|e| e.to_string())?;
    let empirical = report.empirical_error_rate;
    ensure((empirical - 1.078e-2).abs() <= 3.1e-4, format!("Monte-Carlo P = {empirical:.6e}"))?;
    ensure(elapsed < Duration::from_secs(5), format!("took {elapsed:?}"))?;
    Ok(format!("analytic {analytic:.5e}, MC {empirical:.5e} over 1e6 shots in {elapsed:.2?}"))
}

fn design_point_a() -> Outcome {
    let d = eit::design_minimum(&nv(0.01, 4.6)).map_err(|e| e.to_string())?;
    ensure(within(d.n_atoms, 1350.0, 1700.0), format!("N_min = {}", d.n_atoms))?;
    ensure((d.nu_c - 1.1).abs() <= 1e-12, format!("nu_c = {}", d.nu_c))?;
    Ok(format!("N_min {:.2}, nu_c {}", d.n_atoms, d.nu_c))
}

fn design_point_b() -> Outcome {
    let d = eit::design_minimum(&nv(0.1, 4.6)).map_err(|e| e.to_string())?;
    let n_c = d.drive.probe_photons();
    let loss = -(-d.kerr.kappa()).exp_m1();
    ensure(within(d.n_atoms, 140.0, 170.0), format!("N_min = {}", d.n_atoms))?;
    ensure(within(n_c, 500.0, 600.0), format!("<n_c> = {n_c}"))?;
    ensure(within(loss, 0.09, 0.105), format!("absorption = {loss}"))?;
    ensure((d.kerr.kappa() - d.kerr.theta()).abs() <= 1e-12 * d.kerr.theta(), "kappa != theta")?;
    Ok(format!("N_min {:.2}, <n_c> {n_c:.1}, absorption {:.3}%", d.n_atoms, 100.0 * loss))
}

fn design_point_c() -> Outcome {
    let drive = DriveConfig::from_ratio(4.6 / (2.0 * 0.1), 10.0).map_err(|e| e.to_string())?;
    let shift =
        eit::theta_kappa(800.0, eit::omega_a_sq_t(2.4, 1.0), &drive, 11.0, 1.0, 1.0).map_err(|e| e.to_string())?;
    let (theta, kappa) = (shift.theta(), shift.kappa());
    let loss = -(-kappa).exp_m1();
    ensure(within(theta, 0.10, 0.11), format!("theta = {theta}"))?;
    ensure((kappa / theta - 0.1).abs() <= 1e-12, format!("kappa/theta = {}", kappa / theta))?;
    ensure(loss <= 0.013, format!("absorption = {loss}"))?;
    Ok(format!("theta {theta:.5}, kappa/theta {:.12}, absorption {:.3}%", kappa / theta, 100.0 * loss))
}

fn kappa_equals_theta() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let theta_max = 10f64.powf(rng.random_range(-3.0..-0.3));
        let p_error = 10f64.powf(rng.random_range(-8.0..-1.0));
        let ratio = 10f64.powf(rng.random_range(-1.0..2.0));
        let req = DesignRequest {
            pump_probe_ratio: ratio,
            ..DesignRequest::nv_diamond(theta_max, SnrTarget::PError { p_error, convention: SnrConvention::Exact })
        };
        let d = eit::design_minimum(&req).map_err(|e| format!("({theta_max}, {p_error}, {ratio}): {e}"))?;
        let rel = ((d.kerr.kappa() - d.kerr.theta()) / d.kerr.theta()).abs();
        worst = worst.max(rel);
        ensure(rel <= 1e-9, format!("({theta_max}, {p_error}, {ratio}): |kappa-theta|/theta = {rel}"))?;
    }
    Ok(format!("50 triples, worst relative gap {worst:.2e}"))
}

fn sweep_reproduction() -> Outcome {
    let settings = Settings::default();
    let (rows, elapsed) = timed(|| commands::sweep_fig4(&settings));
    let rows = rows.map_err(|e| e.to_string())?;
    let (thetas, p_errors) = commands::sweep_grid(&settings).map_err(|e| e.to_string())?;
    ensure(thetas.len() == 100, "grid is not 100 points")?;
    ensure(rows.len() == thetas.len() * p_errors.len(), "row count")?;

    let curves: Vec<_> = rows.chunks(thetas.len()).collect();
    let mut worst: f64 = 0.0;
    for curve in &curves {
        let c0 = curve[0].n_min * curve[0].theta_max;
        for r in *curve {
            let rel = (r.n_min * r.theta_max / c0 - 1.0).abs();
            worst = worst.max(rel);
            ensure(rel <= 1e-9, format!("N*theta drifts by {rel} at theta {}", r.theta_max))?;
            ensure((r.nu_c_min - 1.1).abs() <= 1e-12, format!("nu_c = {}", r.nu_c_min))?;
        }
    }
    let mut order: Vec<usize> = (0..p_errors.len()).collect();
    order.sort_by(|&a, &b| p_errors[b].total_cmp(&p_errors[a]));
    for pair in order.windows(2) {
        let (looser, tighter) = (curves[pair[0]], curves[pair[1]]);
        for (l, t) in looser.iter().zip(tighter) {
            ensure(t.n_min > l.n_min, format!("curves not ordered at theta {}", l.theta_max))?;
        }
    }
    ensure(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("{} curves x {} points, worst N*theta drift {worst:.2e}, {elapsed:.2?}", curves.len(), thetas.len()))
}

fn oracle_equivalence() -> Outcome {
    let settings = Settings {
        alphas: Some(vec![0.5, 1.0, 2.0, 3.0]),
        thetas: Some(vec![0.0, 0.01, 0.1, 0.5, FRAC_PI_2]),
        n_values: Some(vec![0, 1, 2, 3]),
        ..Default::default()
    };
    let (cells, elapsed) = timed(|| commands::oracle_check(&settings));
    let cells = cells.map_err(|e| e.to_string())?;
    ensure(cells.len() == 80, "grid size")?;
    let moment = cells.iter().map(|c| c.max_deviation()).fold(0.0, f64::max);
    let rotation = cells.iter().map(|c| c.rotation_distance).fold(0.0, f64::max);
    ensure(moment <= 1e-6, format!("moment deviation {moment}"))?;
    ensure(rotation <= 1e-8, format!("rotation distance {rotation}"))?;
    ensure(cells.iter().all(|c| c.pass), "a cell failed")?;
    ensure(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    Ok(format!("80 cells, moments {moment:.2e}, rotation {rotation:.2e}, {elapsed:.2?}"))
}

fn snr_doubling() -> Outcome {
    let alpha = homodyne::required_alpha(4.6, 0.01).map_err(|e| e.to_string())?;
    let one = homodyne::snr_y(alpha, 0.01, 1, 0.0);
    let two = homodyne::snr_y(alpha, 0.01, 2, 0.0);
    let ratio = two / one;
    ensure((ratio / 2.0 - 1.0).abs() <= 5e-3, format!("ratio {ratio}"))?;
    ensure((ratio - 2.0 * 0.01f64.cos()).abs() <= 1e-9, format!("ratio {ratio} vs 2cos(0.01)"))?;
    Ok(format!("SNR {one:.4} -> {two:.4}, ratio {ratio:.12}"))
}

fn level_shift_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let rabi_sq = 10f64.powf(rng.random_range(-2.0..1.0));
        let t = 10f64.powf(rng.random_range(-2.0..1.0));
        let inputs = LevelShiftInputs {
            n_atoms: rng.random_range(1.0..1e4),
            rabi_a_sq: 10f64.powf(rng.random_range(-2.0..1.0)),
            rabi_b_sq: rabi_sq,
            rabi_c_sq: rabi_sq,
            n_a: rng.random_range(1..5),
            n_b: rng.random_range(1..1_000_000),
            n_c: rng.random_range(1..100_000),
            nu_c: rng.random_range(-20.0..20.0),
            gamma2: 1.0,
            gamma4: rng.random_range(0.1..3.0),
        };
        let wt = eit::compute_w(&inputs).map_err(|e| e.to_string())?.integrated(t);
        let drive =
            DriveConfig::new((inputs.n_b as f64).sqrt(), (inputs.n_c as f64).sqrt()).map_err(|e| e.to_string())?;
        let shift = eit::theta_kappa(inputs.n_atoms, inputs.rabi_a_sq * t, &drive, inputs.nu_c, 1.0, inputs.gamma4)
            .map_err(|e| e.to_string())?;
        let want = shift.theta_kappa * (inputs.n_a as f64 * inputs.n_c as f64);
        let rel = (wt - want).norm() / want.norm();
        worst = worst.max(rel);
        ensure(rel <= 1e-12, format!("relative error {rel} for {inputs:?}"))?;
    }
    Ok(format!("100 draws, worst relative error {worst:.2e}"))
}

fn rabi_band() -> Outcome {
    let summary = eit::rabi_summary(&MaterialSystem::nv_diamond()).map_err(|e| e.to_string())?;
    let mhz = summary.omega_over_2pi_mhz;
    ensure(within(mhz, 2.0, 6.0), format!("Omega/2pi = {mhz} MHz"))?;
    Ok(format!("Omega/2pi = {mhz:.3} MHz"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("binary discrimination", binary_discrimination),
        ("design point A", design_point_a),
        ("design point B", design_point_b),
        ("design point C", design_point_c),
        ("kappa = theta identity", kappa_equals_theta),
        ("N_min sweep", sweep_reproduction),
        ("Fock oracle equivalence", oracle_equivalence),
        ("SNR doubling", snr_doubling),
        ("level shift vs phase shift", level_shift_consistency),
        ("Rabi frequency band", rabi_band),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
