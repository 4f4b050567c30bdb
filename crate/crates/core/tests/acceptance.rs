//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its runtime (visible under `cargo test --test acceptance -- --nocapture`).

use std::time::Instant;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use infocomp::function_values::{
    project_to_two_point_constraint, std_vs_all, two_point_exact, GridModel, Polynomial,
};
use infocomp::information::{radius_nonadaptive, truncation_information, InformationMap};
use infocomp::l1_ball::{
    estimator_variance_exact, gelfand_width_bounds, kernel_boundary_sample,
    kernel_polytope_max_l2, rmse_sweep, sample_variance, separation_report, L1Vector,
};
use infocomp::randomized::{
    avg_case_error_closed_form, avg_case_error_mc_profile, sandwich_report, SphereSampler,
};
use infocomp::sequence_model::{
    classify_continuity, transform_information, truncated_radius_ladder, Continuity, ModelSpace,
    SymbolicFunctional,
};
use infocomp::spectral::{
    brute_force_worst_error, worst_case_error, LinearProblem, SingularSpectrum,
};

fn pass(id: usize, name: &str, started: Instant, budget_s: f64) {
    let elapsed = started.elapsed().as_secs_f64();
    println!("acceptance {id} ({name}): PASS ({elapsed:.2}s)");
    assert!(
        elapsed < budget_s,
        "criterion {id} exceeded its runtime budget: {elapsed:.2}s > {budget_s}s"
    );
}

fn random_problem(idx: usize) -> LinearProblem {
    let m = 4 + idx % 13; // 4..=16
    let p = [0.5, 1.0, 2.0][idx % 3];
    let spectrum = SingularSpectrum::power_law(p, m).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9000 + idx as u64);
    let weights = DVector::from_fn(m, |_, _| 0.5 + 1.5 * rng.random::<f64>());
    LinearProblem::synthetic(spectrum, weights, 500 + idx as u64).unwrap()
}

#[test]
fn criterion_01_worst_case_optimality() {
    let started = Instant::now();
    for idx in 0..20 {
        let problem = random_problem(idx);
        let m = problem.spectrum().len();
        let sigma1 = problem.spectrum().largest();
        for n in 0..m {
            let sigma_next = worst_case_error(problem.spectrum(), n);
            let brute = brute_force_worst_error(&problem, n, 77 + n as u64, 400).unwrap();
            assert!(
                brute >= (1.0 - 1e-6) * sigma_next,
                "problem {idx} n={n}: brute {brute} below (1-1e-6) sigma {sigma_next}"
            );
            assert!(
                brute <= sigma_next,
                "problem {idx} n={n}: brute {brute} above sigma {sigma_next}"
            );

            let info = truncation_information(&problem, n).unwrap();
            let radius = radius_nonadaptive(&problem, &info).unwrap().radius;
            assert!(
                (radius - sigma_next).abs() <= 1e-9 * sigma1,
                "problem {idx} n={n}: truncation radius {radius} vs sigma {sigma_next}"
            );
        }
    }
    pass(1, "worst-case optimality", started, 10.0);
}

#[test]
fn criterion_02_sphere_formula() {
    let started = Instant::now();
    let mut config_seed = 40_000;
    for p in [0.5, 1.0, 2.0] {
        for m in [8usize, 32] {
            config_seed += 1;
            let spectrum = SingularSpectrum::power_law(p, m).unwrap();
            let problem = LinearProblem::diagonal(spectrum.clone());
            let mut sampler = SphereSampler::new(m, config_seed).unwrap();
            let profile = avg_case_error_mc_profile(&problem, &mut sampler, 100_000).unwrap();
            for (n, est) in profile.iter().enumerate() {
                let closed = avg_case_error_closed_form(&spectrum, n, m).unwrap();
                assert!(
                    (est.value - closed).abs() <= 4.0 * est.standard_error,
                    "p={p} m={m} n={n}: mc {} vs closed {closed}, se {}",
                    est.value,
                    est.standard_error
                );
            }
        }
    }
    pass(2, "sphere formula", started, 30.0);
}

#[test]
fn criterion_03_sandwich() {
    let started = Instant::now();
    let mut fixtures: Vec<SingularSpectrum> = vec![
        SingularSpectrum::explicit(vec![1.0; 32]).unwrap(),
        SingularSpectrum::explicit((1..=32).map(|i| (2.0_f64).powi(-i)).collect()).unwrap(),
    ];
    for p in [0.5, 1.0, 2.0] {
        fixtures.push(SingularSpectrum::power_law(p, 64).unwrap());
    }
    for spectrum in &fixtures {
        let m = spectrum.len();
        for n in 1..=(m / 4) {
            let bounds = sandwich_report(spectrum, n).unwrap();
            assert!(
                bounds.lower <= bounds.upper,
                "sandwich inverted at n={n}: {} > {}",
                bounds.lower,
                bounds.upper
            );
        }
        for n in 0..=m {
            let avg = avg_case_error_closed_form(spectrum, n, m).unwrap();
            assert!(
                avg <= worst_case_error(spectrum, n) + 1e-15,
                "average above worst case at n={n}"
            );
        }
    }
    pass(3, "randomized sandwich", started, 1.0);
}

#[derive(Deserialize)]
struct TransformFixtureFile {
    q: f64,
    dims: Vec<usize>,
    #[allow(dead_code)]
    calibration_note: String,
    fixtures: Vec<TransformFixture>,
}

#[derive(Deserialize)]
struct TransformFixture {
    name: String,
    functionals: Vec<SymbolicFunctional>,
    expect_zero: Vec<bool>,
    #[serde(default)]
    equivalent_continuous: Option<Vec<SymbolicFunctional>>,
    max_gap_at_largest_dim: f64,
}

fn load_transform_fixtures() -> TransformFixtureFile {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/fixtures/transform_fixtures.json"
    );
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn criterion_04_transform() {
    let started = Instant::now();
    let file = load_transform_fixtures();
    assert!(file.fixtures.len() >= 6, "fixture suite too small");
    let space = ModelSpace::new(file.q).unwrap();
    let sigma1 = space.singular_value(1);

    for fixture in &file.fixtures {
        let trace = transform_information(&fixture.functionals, &space);
        assert_eq!(trace.output.len(), fixture.functionals.len());
        assert_eq!(trace.steps.len(), fixture.functionals.len());

        for (k, out) in trace.output.iter().enumerate() {
            assert_eq!(
                classify_continuity(out, &space),
                Continuity::Continuous,
                "{}: output {k} not continuous",
                fixture.name
            );
            assert_eq!(
                out.is_zero(),
                fixture.expect_zero[k],
                "{}: zero pattern mismatch at step {k}",
                fixture.name
            );
        }

        let ladder = truncated_radius_ladder(&fixture.functionals, &space, &file.dims).unwrap();
        for row in &ladder {
            assert!(
                row.radius_input <= row.radius_transformed + 1e-12,
                "{}: input radius above transformed at d={}",
                fixture.name,
                row.dim
            );
        }
        for w in ladder.windows(2) {
            assert!(
                w[1].gap() <= w[0].gap() + 1e-12,
                "{}: gap grew from d={} to d={}",
                fixture.name,
                w[0].dim,
                w[1].dim
            );
        }
        let last = ladder.last().unwrap();
        assert!(
            last.gap() <= fixture.max_gap_at_largest_dim,
            "{}: gap {:.3e} at d={} above frozen threshold {:.3e}",
            fixture.name,
            last.gap(),
            last.dim,
            fixture.max_gap_at_largest_dim
        );

        // The emitted information carries exactly the information of the
        // continuous reference list: identical radii at every truncation.
        if let Some(reference) = &fixture.equivalent_continuous {
            for &dim in &file.dims {
                let problem = space.truncated_problem(dim).unwrap();
                let emitted = InformationMap::new(
                    dim,
                    trace.output.iter().map(|f| f.truncated(dim)).collect(),
                )
                .unwrap();
                let expected = InformationMap::new(
                    dim,
                    reference.iter().map(|f| f.truncated(dim)).collect(),
                )
                .unwrap();
                let r_emitted = radius_nonadaptive(&problem, &emitted).unwrap().radius;
                let r_expected = radius_nonadaptive(&problem, &expected).unwrap().radius;
                assert!(
                    (r_emitted - r_expected).abs() <= 1e-9 * sigma1,
                    "{}: emitted info differs from reference at d={dim}: {} vs {}",
                    fixture.name,
                    r_emitted,
                    r_expected
                );
            }
        }
    }
    pass(4, "discontinuous-information transform", started, 60.0);
}

fn enumerate_estimator_outcomes(coords: &[f64], n: usize) -> Vec<f64> {
    let m = coords.len();
    let single: Vec<f64> = (0..1usize << m)
        .map(|mask| {
            coords
                .iter()
                .enumerate()
                .map(|(k, xi)| if mask >> k & 1 == 1 { *xi } else { -*xi })
                .sum()
        })
        .collect();
    let mut outcomes = Vec::with_capacity(single.len().pow(n as u32));
    for idx in 0..single.len().pow(n as u32) {
        let mut draws = Vec::with_capacity(n);
        let mut rest = idx;
        for _ in 0..n {
            draws.push(single[rest % single.len()]);
            rest /= single.len();
        }
        outcomes.push(sample_variance(&draws));
    }
    outcomes
}

#[test]
fn criterion_05_estimator_exactness() {
    let started = Instant::now();

    // The two-draw coin case: outcomes {0, 0.5}, mean 1/4, variance 1/16.
    let outcomes = enumerate_estimator_outcomes(&[0.5], 2);
    let mut sorted = outcomes.clone();
    sorted.sort_by(f64::total_cmp);
    assert_eq!(sorted, vec![0.0, 0.0, 0.5, 0.5]);

    for (coords, n) in [
        (vec![0.5_f64], 2usize),
        (vec![0.5], 3),
        (vec![0.25, -0.5], 2),
        (vec![0.25, -0.5], 3),
        (vec![0.25, 0.125, -0.5], 2),
        (vec![0.25, 0.125, -0.5], 3),
    ] {
        let x = L1Vector::from_slice(&coords).unwrap();
        let outcomes = enumerate_estimator_outcomes(&coords, n);
        let k = outcomes.len() as f64;
        let mean = outcomes.iter().sum::<f64>() / k;
        let var = outcomes.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / k;
        assert!(
            (mean - x.l2_norm_squared()).abs() <= 1e-12,
            "m={} n={n}: mean {mean} vs {}",
            coords.len(),
            x.l2_norm_squared()
        );
        let want = estimator_variance_exact(&x, n);
        assert!(
            (var - want).abs() <= 1e-12,
            "m={} n={n}: var {var} vs formula {want}",
            coords.len()
        );
    }
    pass(5, "estimator exactness", started, 1.0);
}

#[test]
fn criterion_06_randomized_rate() {
    let started = Instant::now();
    let x = L1Vector::spread(0.9, 16).unwrap();
    let grid = [4usize, 16, 64, 256];
    let rows = rmse_sweep(&x, &grid, 10_000, 606).unwrap();
    for row in &rows {
        let cap = (2.0 / (row.n as f64 - 1.0)).sqrt();
        assert!(
            row.rmse <= cap,
            "n={}: rmse {} above sqrt(2/(n-1)) = {cap}",
            row.n,
            row.rmse
        );
        assert!(
            row.rmse <= row.envelope,
            "n={}: rmse {} above envelope {}",
            row.n,
            row.rmse,
            row.envelope
        );
    }
    for w in rows.windows(2) {
        let ratio = w[0].rmse / w[1].rmse;
        assert!(
            (1.5..=2.5).contains(&ratio),
            "rmse ratio {} out of [1.5, 2.5] between n={} and n={}",
            ratio,
            w[0].n,
            w[1].n
        );
    }
    pass(6, "randomized rate", started, 60.0);
}

#[test]
fn criterion_07_widths() {
    let started = Instant::now();

    // Exact optimum at m = 2, n = 1.
    let est = gelfand_width_bounds(2, 1, 20, 7).unwrap();
    let half_sqrt2 = (0.5_f64).sqrt();
    assert!(
        (est.upper_bound - half_sqrt2).abs() <= 1e-9,
        "width(2,1) upper {} vs 1/sqrt(2)",
        est.upper_bound
    );
    assert!((est.lower_bound - half_sqrt2).abs() <= 1e-15);

    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    for m in 2..=8usize {
        let mut previous = f64::INFINITY;
        for n in 0..=m {
            let est = gelfand_width_bounds(m, n, 3, 3_000 + (m * 31 + n) as u64).unwrap();
            assert!(
                est.lower_bound <= est.upper_bound + 1e-12,
                "m={m} n={n}: lower {} above upper {}",
                est.lower_bound,
                est.upper_bound
            );
            if n == 0 {
                assert_eq!(est.upper_bound, 1.0, "m={m}: width at n=0 must be 1");
            }
            if n == m {
                assert_eq!(est.upper_bound, 0.0, "m={m}: width at n=m must be 0");
            }
            assert!(
                est.upper_bound <= previous + 1e-9,
                "m={m} n={n}: width grew: {} > {previous}",
                est.upper_bound
            );
            previous = est.upper_bound;

            // The claimed maximum dominates sampled feasible points.
            let constraints = est.best_information.as_matrix();
            let mut sampled = 0usize;
            for _ in 0..100_000 {
                match kernel_boundary_sample(&constraints, &mut rng) {
                    Some(x) => {
                        let v = x.norm();
                        assert!(
                            v <= est.upper_bound + 1e-9,
                            "m={m} n={n}: feasible sample {v} beats claimed max {}",
                            est.upper_bound
                        );
                        sampled += 1;
                    }
                    None => break, // trivial kernel: nothing to sample
                }
            }
            assert!(
                n == m || sampled == 100_000,
                "m={m} n={n}: sampler starved ({sampled})"
            );
        }
    }
    pass(7, "Gelfand widths", started, 120.0);
}

#[test]
fn criterion_08_separation() {
    let started = Instant::now();
    let rows = separation_report(8, &[1, 4, 16, 64, 256], 10_000, 808).unwrap();
    let floor_n1 = rows[0].wc_floor;
    assert!((floor_n1 - 0.25).abs() <= 1e-15, "floor at n=1 should be 1/4");
    let rmse_256 = rows.last().unwrap().ran_rmse.unwrap();
    assert!(
        rmse_256 < floor_n1,
        "randomized rmse {rmse_256} did not beat the worst-case floor {floor_n1}"
    );
    assert!(rmse_256 <= 0.12, "rmse at n=256 unexpectedly large: {rmse_256}");
    pass(8, "worst-case vs randomized separation", started, 60.0);
}

#[test]
fn criterion_09_std_vs_all() {
    let started = Instant::now();
    for idx in 0..10usize {
        let m = 5 + idx % 6; // 5..=10
        let model = GridModel::random(m, 7_000 + idx as u64).unwrap();
        for n in 0..=m {
            let cmp = std_vs_all(&model, n).unwrap();
            assert!(
                cmp.e_std >= cmp.e_all - 1e-9,
                "model {idx} n={n}: e_std {} below e_all {}",
                cmp.e_std,
                cmp.e_all
            );
        }
    }

    let fixtures = [
        Polynomial::new(vec![1.0]),
        Polynomial::new(vec![0.0, 1.0]),
        Polynomial::new(vec![0.25, -0.5]),
        project_to_two_point_constraint(&Polynomial::new(vec![0.0, 0.0, 1.0])),
        project_to_two_point_constraint(&Polynomial::new(vec![0.0, 0.0, 0.0, 1.0])),
        project_to_two_point_constraint(&Polynomial::new(vec![0.5, -1.0, 2.0, 0.0, 3.0])),
    ];
    for (i, poly) in fixtures.iter().enumerate() {
        let value = two_point_exact(poly).unwrap();
        assert!(
            (value - poly.integral_unit()).abs() <= 1e-10,
            "fixture {i}: two-point value {value} vs integral {}",
            poly.integral_unit()
        );
    }
    pass(9, "function values vs arbitrary functionals", started, 30.0);
}

#[test]
fn criterion_10_cli_determinism() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_infocomp");

    let problem_path = dir.path().join("problem.json");
    std::fs::write(
        &problem_path,
        r#"{"kind": "matrix", "matrix": [[3.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]]}"#,
    )
    .unwrap();
    let info_path = dir.path().join("info.json");
    std::fs::write(&info_path, "[[1.0, 0.0, 0.0]]").unwrap();
    let fns_path = dir.path().join("functionals.json");
    std::fs::write(
        &fns_path,
        r#"[{"terms": [{"p": 1.0, "alpha": 1.0}], "finite": {}},
            {"terms": [{"p": 1.0, "alpha": 1.0}], "finite": {"2": 1.0}}]"#,
    )
    .unwrap();
    let batch_path = dir.path().join("batch.json");
    std::fs::write(
        &batch_path,
        r#"{"experiments": [
            {"command": "sandwich", "spectrum": "power-law:p=1:m=64", "n": [1, 2, 4]},
            {"command": "width", "m": 2, "n": 1, "restarts": 5, "seed": 7}
        ]}"#,
    )
    .unwrap();

    let problem = problem_path.to_str().unwrap();
    let info = info_path.to_str().unwrap();
    let fns = fns_path.to_str().unwrap();
    let batch = batch_path.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["spectrum", "--spectrum", "power-law:p=1:m=8"],
        vec!["radius", "--problem", problem, "--info", info, "--format", "json"],
        vec![
            "avgcase",
            "--spectrum",
            "power-law:p=1:m=8",
            "--n",
            "0,2,8",
            "--samples",
            "2000",
            "--seed",
            "5",
        ],
        vec!["sandwich", "--spectrum", "power-law:p=1:m=64", "--n", "1,2,4"],
        vec![
            "transform",
            "--functionals",
            fns,
            "--dims",
            "8,16",
            "--format",
            "json",
        ],
        vec![
            "mcnorm", "--l1", "0.9", "--m", "8", "--n", "2,8", "--reps", "200", "--seed", "3",
        ],
        vec![
            "width", "--m", "3", "--n", "1", "--restarts", "3", "--seed", "11",
        ],
        vec![
            "separation",
            "--m",
            "4",
            "--n",
            "1,4,16",
            "--reps",
            "150",
            "--seed",
            "9",
        ],
        vec![
            "stdinfo",
            "--random-m",
            "5",
            "--seed",
            "21",
            "--n",
            "0,2,5",
        ],
        vec!["batch", batch],
    ];

    for args in &commands {
        let run = |tag: &str| {
            let out_file = dir.path().join(format!("{}-{tag}.out", args[0]));
            let output = std::process::Command::new(bin)
                .args(args.iter())
                .arg("--output")
                .arg(&out_file)
                .output()
                .unwrap();
            assert!(
                output.status.success(),
                "{:?} failed: {}",
                args,
                String::from_utf8_lossy(&output.stderr)
            );
            (std::fs::read(&out_file).unwrap_or_default(), output.stdout)
        };
        let (file_a, stdout_a) = run("a");
        let (file_b, stdout_b) = run("b");
        assert_eq!(file_a, file_b, "file bytes differ for {:?}", args);
        assert_eq!(stdout_a, stdout_b, "stdout differs for {:?}", args);
        assert!(
            !file_a.is_empty() || args[0] == "batch",
            "no output written for {:?}",
            args
        );
    }
    pass(10, "CLI determinism", started, 120.0);
}

// Prints fresh gap numbers for every fixture; run when the frozen
// thresholds in the fixture file need recalibrating.
#[test]
#[ignore]
fn print_transform_calibration() {
    let file = load_transform_fixtures();
    let space = ModelSpace::new(file.q).unwrap();
    for fixture in &file.fixtures {
        let ladder = truncated_radius_ladder(&fixture.functionals, &space, &file.dims).unwrap();
        for row in &ladder {
            println!(
                "{}: d={} r={:.12} r*={:.12} gap={:.6e}",
                fixture.name,
                row.dim,
                row.radius_input,
                row.radius_transformed,
                row.gap()
            );
        }
    }
    // Exact polytope reference value used by the width criterion.
    let pm = kernel_polytope_max_l2(&nalgebra::DMatrix::from_row_slice(1, 2, &[1.0, -1.0]))
        .unwrap();
    println!("polytope([1,-1]) = {:.15}", pm.value);
}
