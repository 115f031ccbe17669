use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qdc::config::SweepConfig;
use qdc::io::counts_csv::write_counts;
use qdc::surface::compute_surface;
use qdc_core::counts::{BinTable, CountRecord};
use qdc_core::fitkit::HomDipModel;
use qdc_core::grid::SurfaceGrid;
use qdc_core::optics::{run_pipeline, NoiseModel};
use qdc_core::qcore::Polarization;
use serde_json::Value;

fn qdc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdc"))
        .args(args)
        .env_remove("QDC_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let body = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, body)
}

fn num(cell: &str) -> f64 {
    cell.parse().unwrap()
}

#[test]
fn ideal_surface_has_wave_maximum() {
    let out = qdc(&["surface", "--noise", "1,1,1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(!text.contains('\r'));
    let (header, body) = rows(&text);
    assert_eq!(
        header,
        ["phi", "alpha", "delta", "p_c_h", "p_c_v", "p_q_h", "p_q_v"]
    );
    assert_eq!(body.len(), 108);
    let row = body
        .iter()
        .find(|r| {
            (num(&r[0]) - PI).abs() < 1e-8
                && (num(&r[1]) - FRAC_PI_2).abs() < 1e-8
                && num(&r[2]).abs() < 1e-8
        })
        .expect("grid contains (pi, pi/2, 0)");
    assert_eq!(row[5], "1.000000000");
    for cell in body.iter().flatten().filter(|c| !c.is_empty()) {
        assert_eq!(cell.split('.').nth(1).map(str::len), Some(9), "{cell}");
    }
}

#[test]
fn degree_input_is_rejected() {
    let out = qdc(&["surface", "--phi", "90deg"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(code(&qdc(&["surface", "--bogus"])), 1);
    assert_eq!(code(&qdc(&["--help"])), 0);
}

#[test]
fn noisy_surface_matches_matrix_evolution() {
    let config = SweepConfig {
        grid: SurfaceGrid::full(),
        noise: NoiseModel::MEASURED,
        ..SweepConfig::default()
    };
    let surface = compute_surface(&config, 0).unwrap();
    let mut worst: f64 = 0.0;
    for row in &surface.rows {
        let table = run_pipeline(&row.setting, &NoiseModel::MEASURED);
        let oracle = [
            table.classical(Polarization::H).ok(),
            table.classical(Polarization::V).ok(),
            table.quantum(Polarization::H).ok(),
            table.quantum(Polarization::V).ok(),
        ];
        for (a, b) in row.analytic.iter().zip(oracle) {
            worst = worst.max((a.unwrap() - b.unwrap()).abs());
        }
    }
    assert!(worst <= 1e-10, "{worst}");

    // Same grid through the binary; nine decimals bound the agreement.
    let out = qdc(&["surface", "--preset", "full", "--paper-defaults"]);
    assert_eq!(code(&out), 0);
    let (_, body) = rows(&stdout(&out));
    assert_eq!(body.len(), surface.rows.len());
    for (cells, row) in body.iter().zip(&surface.rows) {
        for k in 0..4 {
            assert!((num(&cells[3 + k]) - row.analytic[k].unwrap()).abs() <= 5.1e-10);
        }
    }
}

#[test]
fn sampled_surface_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = |name: &str, jobs: &str| {
        let path = dir.path().join(name);
        let out = qdc(&[
            "surface",
            "--paper-defaults",
            "--trials",
            "100000",
            "--seed",
            "17",
            "--jobs",
            jobs,
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        fs::read(path).unwrap()
    };
    let a = args("a.csv", "1");
    let b = args("b.csv", "3");
    assert_eq!(a, b);
    let (header, body) = rows(std::str::from_utf8(&a).unwrap());
    assert_eq!(header.len(), 15);
    assert_eq!(header[7], "p_c_h_hat");
    assert_eq!(header[14], "p_q_v_err");
    assert_eq!(body.len(), 108);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qdc"))
        .args(["surface", "--phi", "0,pi", "--alpha", "pi/4"])
        .env("QDC_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(dir.path().join("surface.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn config_file_is_used_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.json");
    fs::write(
        &cfg,
        r#"{"phi_grid": [0.0, 1.0, 2.0], "alpha_grid": {"start": 0, "stop": 1.5, "count": 4},
            "delta_grid": [0.0], "noise": [0.98, 0.9, 0.61]}"#,
    )
    .unwrap();
    let out = qdc(&["surface", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(rows(&stdout(&out)).1.len(), 12);
    let out = qdc(&["surface", "--config", cfg.to_str().unwrap(), "--phi", "0"]);
    assert_eq!(rows(&stdout(&out)).1.len(), 4);

    fs::write(&cfg, r#"{"phi_grid": []}"#).unwrap();
    assert_eq!(
        code(&qdc(&["surface", "--config", cfg.to_str().unwrap()])),
        1
    );
}

fn write_exact_counts(path: &Path, noise: &NoiseModel) {
    let records: Vec<CountRecord> = SurfaceGrid::alpha_sweep()
        .points()
        .into_iter()
        .map(|(_, setting)| {
            let bins = BinTable::expected(&setting, noise, 1e12);
            let counts = bins.bins.map(|b| b.round() as u64);
            CountRecord::new(setting, counts, counts.iter().sum()).unwrap()
        })
        .collect();
    write_counts(fs::File::create(path).unwrap(), &records).unwrap();
}

fn fit_json(args: &[&str]) -> (i32, Value) {
    let out = qdc(args);
    let c = code(&out);
    let v = if c == 1 {
        Value::Null
    } else {
        serde_json::from_slice(&out.stdout).unwrap()
    };
    (c, v)
}

#[test]
fn fit_recovers_exact_counts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("counts.csv");
    write_exact_counts(&path, &NoiseModel::MEASURED);
    let (c, v) = fit_json(&["fit", path.to_str().unwrap()]);
    assert_eq!(c, 0);
    for (name, want) in [("f1", 0.98), ("f2", 0.90), ("f3", 0.61)] {
        let got = v["parameters"][name].as_f64().unwrap();
        assert!((got - want).abs() < 1e-6, "{name}: {got}");
    }
    assert_eq!(v["converged"], Value::Bool(true));
    for key in ["std_errors", "residual_norm", "iterations", "start_index"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn frozen_fit_only_moves_free_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("counts.csv");
    let noise = NoiseModel::new(1.0, 1.0, 0.61).unwrap();
    write_exact_counts(&path, &noise);
    let (c, v) = fit_json(&["fit", path.to_str().unwrap(), "--mode", "frozen:f1=1,f2=1"]);
    assert_eq!(c, 0);
    assert_eq!(v["parameters"]["f1"].as_f64(), Some(1.0));
    assert_eq!(v["parameters"]["f2"].as_f64(), Some(1.0));
    assert_eq!(v["std_errors"]["f1"].as_f64(), Some(0.0));
    assert!((v["parameters"]["f3"].as_f64().unwrap() - 0.61).abs() < 1e-6);
}

#[test]
fn fit_input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    assert_eq!(code(&qdc(&["fit", empty.to_str().unwrap()])), 1);

    let bad = dir.path().join("bad.csv");
    fs::write(
        &bad,
        "phi,alpha,delta,s,c,a,bit,count\n0,0,0,H,P,A,0,5\n0,0,0,X,P,A,0,5\n",
    )
    .unwrap();
    let out = qdc(&["fit", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");

    let missing = dir.path().join("nope.csv");
    assert_eq!(code(&qdc(&["fit", missing.to_str().unwrap()])), 1);
}

#[test]
fn locality_default_layout_passes() {
    let out = qdc(&["locality", "--paper-defaults"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("locality: PASS"), "{text}");
    assert!(text.contains("space_like"));
}

#[test]
fn locality_close_labs_fail() {
    let out = qdc(&["locality", "--paper-defaults", "--lab2-distance", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("locality: FAIL"));
}

#[test]
fn locality_errors_exit_one() {
    let out = qdc(&["locality", "--paper-defaults", "--group-b", "F,Q"]);
    assert_eq!(code(&out), 1);
    assert_eq!(code(&qdc(&["locality"])), 1);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("ledger.json");
    fs::write(&bad, "[{\"label\": \"I\"").unwrap();
    assert_eq!(
        code(&qdc(&["locality", "--ledger", bad.to_str().unwrap()])),
        1
    );
}

#[test]
fn locality_ledger_file_and_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let ledger = dir.path().join("ledger.json");
    fs::write(
        &ledger,
        r#"[{"label": "I", "x_m": 0, "y_m": 0, "z_m": 0, "t_ns": 959},
            {"label": "F", "x_m": 141, "y_m": 0, "z_m": 0, "t_ns": 907},
            {"label": "R", "x_m": 141, "y_m": 0, "z_m": 0, "t_ns": 987},
            {"label": "D", "x_m": 141, "y_m": 0, "z_m": 0, "t_ns": 1075}]"#,
    )
    .unwrap();
    let report = dir.path().join("report.json");
    let out = qdc(&[
        "locality",
        "--ledger",
        ledger.to_str().unwrap(),
        "--output",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["pairs"].as_array().unwrap().len(), 3);
    assert!(v["min_margin_m"].as_f64().unwrap() > 100.0);
}

fn dip_csv(model: &HomDipModel, phi: Option<f64>, out: &mut String) {
    for i in 0..41 {
        let x = model.center - 0.2 + 0.01 * i as f64;
        match phi {
            Some(p) => out.push_str(&format!("{p},{x},{}\n", model.value(x))),
            None => out.push_str(&format!("{x},{}\n", model.value(x))),
        }
    }
}

#[test]
fn hom_recovers_visibility() {
    let dir = tempfile::tempdir().unwrap();
    let model = HomDipModel {
        baseline: 2000.0,
        visibility: 0.8,
        center: 1.0,
        width: 0.03,
    };
    let mut text = String::from("position_mm,counts\n");
    dip_csv(&model, None, &mut text);
    let input = dir.path().join("dip.csv");
    fs::write(&input, text).unwrap();
    let curve = dir.path().join("curve.csv");
    let out = qdc(&[
        "hom",
        input.to_str().unwrap(),
        "--curve",
        curve.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["parameters"]["visibility"].as_f64().unwrap() - 0.8).abs() < 1e-6);
    let (header, body) = rows(&fs::read_to_string(curve).unwrap());
    assert_eq!(header, ["phi", "position_mm", "counts_model"]);
    assert!(body.len() > 100);
}

#[test]
fn hom_dip_series_gives_slope() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("phi,position_mm,counts\n");
    for k in 0..9 {
        let phi = -PI + 2.0 * PI * k as f64 / 8.0;
        let model = HomDipModel {
            baseline: 1500.0,
            visibility: 0.8,
            center: 1.0 + 0.01 * phi,
            width: 0.03,
        };
        dip_csv(&model, Some(phi), &mut text);
    }
    let input = dir.path().join("series.csv");
    fs::write(&input, text).unwrap();
    let out = qdc(&["hom", input.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dips"].as_array().unwrap().len(), 9);
    let line = &v["center_vs_phi"]["parameters"];
    assert!((line["slope"].as_f64().unwrap() - 0.01).abs() < 1e-6);
    assert!((line["intercept"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn hom_needs_five_points() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("short.csv");
    fs::write(&input, "position_mm,counts\n0,10\n1,5\n2,3\n3,5\n").unwrap();
    assert_eq!(code(&qdc(&["hom", input.to_str().unwrap()])), 1);
}
