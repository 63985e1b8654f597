use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loctemp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(i).unwrap().to_string())
        .collect()
}

const SHORT_GRID: [&str; 6] = ["--tmin", "0.05", "--tmax", "20", "--points", "4"];

#[test]
fn curve_output_is_byte_identical_across_runs() {
    let args: Vec<&str> = ["nmin-curve"].into_iter().chain(SHORT_GRID).collect();
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 5);
}

#[test]
fn kelvin_grid_matches_reduced_grid() {
    let reduced = run(&[
        "nmin-curve",
        "--tmin",
        "0.01",
        "--tmax",
        "1",
        "--points",
        "3",
    ]);
    let kelvin = run(&[
        "nmin-curve",
        "--theta",
        "645",
        "--tmin",
        "6.45",
        "--tmax",
        "645",
        "--points",
        "3",
    ]);
    let (r, k) = (stdout(&reduced), stdout(&kelvin));
    assert_eq!(column(&r, "nmin"), column(&k, "nmin"));
    for (x, y) in column(&r, "T_over_scale")
        .iter()
        .zip(column(&k, "T_over_scale"))
    {
        let (x, y): (f64, f64) = (x.parse().unwrap(), y.parse().unwrap());
        assert!((x - y).abs() <= 1e-12 * x);
    }
}

#[test]
fn lengths_are_group_sizes_times_spacing() {
    let o = run(&["material", "--t", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let spacing = column(&text, "lattice_spacing_angstrom");
    let n = column(&text, "nmin");
    let l = column(&text, "lmin_m");
    for ((a0, n), l) in spacing.iter().zip(&n).zip(&l) {
        let expect = n.parse::<f64>().unwrap() * a0.parse::<f64>().unwrap() * 1e-10;
        let got: f64 = l.parse().unwrap();
        assert!((got - expect).abs() <= 1e-8 * expect, "{got} vs {expect}");
    }
    let json = run(&["material", "--t", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    for row in v["rows"].as_array().unwrap() {
        let n = row["nmin"].as_f64().unwrap();
        let a0 = row["lattice_spacing_angstrom"].as_f64().unwrap();
        let l = row["lmin_m"].as_f64().unwrap();
        assert!((l - n * a0 * 1e-10).abs() <= 1e-12 * l);
    }
}

#[test]
fn bad_material_rows_are_reported_and_skipped() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "name,debye_temperature_K,lattice_spacing_angstrom").unwrap();
    writeln!(f, "silicon,645,2.4").unwrap();
    writeln!(f, "flat,300,0").unwrap();
    let o = run(&[
        "material",
        "--materials",
        f.path().to_str().unwrap(),
        "--t",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
    assert_eq!(column(&stdout(&o), "name"), ["silicon"]);
}

#[test]
fn oversize_verification_is_a_capability_error() {
    let o = run(&["verify", "--groups", "5", "--size", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(
        run(&["nmin-curve", "--tmin", "2", "--tmax", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["asymptotic", "--t", "-1"]).status.code(), Some(2));
    assert_eq!(
        run(&["--model", "ising", "--theta", "300", "nmin-curve"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn hot_spins_are_local_down_to_one_site() {
    let o = run(&[
        "--model",
        "ising",
        "--j",
        "0.1",
        "nmin-curve",
        "--tmin",
        "100",
        "--tmax",
        "1000",
        "--points",
        "2",
    ]);
    assert_eq!(column(&stdout(&o), "nmin")[0], "1");
}

#[test]
fn config_file_is_read_and_flags_win() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "alpha = 5.0\ndelta = 0.02").unwrap();
    let path = f.path().to_str().unwrap();
    let from_file = stdout(&run(&["--config", path, "asymptotic", "--t", "2"]));
    assert_eq!(column(&from_file, "nmin_asymptotic"), ["5.00000000e2"]);
    let overridden = stdout(&run(&[
        "--config",
        path,
        "--alpha",
        "10",
        "asymptotic",
        "--t",
        "2",
    ]));
    assert_eq!(column(&overridden, "nmin_asymptotic"), ["1.00000000e3"]);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "alpah = 5.0").unwrap();
    let o = run(&[
        "--config",
        bad.path().to_str().unwrap(),
        "asymptotic",
        "--t",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_file_receives_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("curve.csv");
    let o = run(&["asymptotic", "--t", "2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    assert!(std::fs::read_to_string(out)
        .unwrap()
        .starts_with("T_over_theta,"));
}
