use std::fs;
use std::path::{Path, PathBuf};

use nhse::cli::{main_with_args, sha256_hex, RunManifest};
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    dir: TempDir,
}

impl Run {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn config(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }

    fn out(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn exec(&self, command: &str, config: &Path, out: &Path, jobs: usize) -> i32 {
        main_with_args([
            "nhse".to_string(),
            command.to_string(),
            "--config".into(),
            config.display().to_string(),
            "--out".into(),
            out.display().to_string(),
            "--jobs".into(),
            jobs.to_string(),
        ])
    }
}

fn rows(path: &Path) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|x| x.unwrap()).collect()
}

fn column(path: &Path, name: &str) -> Vec<String> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let j = r.headers().unwrap().iter().position(|h| h == name).unwrap();
    r.records().map(|x| x.unwrap()[j].to_string()).collect()
}

fn json(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

const FIG2: &str = r#""t_a": 0.75, "t_b": -1.0, "alpha_a": 0.5, "alpha_b": 0.2, "mu": 0.5"#;

#[test]
fn decoupled_spectrum_is_real() {
    let run = Run::new();
    let cfg = run.config("s.json", &format!(r#"{{ {FIG2}, "t_perp": 0.0, "L": 50, "profiles": true }}"#));
    let out = run.out("s");
    assert_eq!(run.exec("spectrum", &cfg, &out, 2), 0);
    let im = column(&out.join("obc_spectrum.csv"), "e_im");
    assert_eq!(im.len(), 100);
    assert!(im.iter().all(|v| v.parse::<f64>().unwrap().abs() < 1e-8));
    assert_eq!(rows(&out.join("profiles.csv")).len(), 100 * 50);
}

#[test]
fn strong_coupling_bands_split_by_twice_t_perp() {
    let run = Run::new();
    let cfg = run.config("s.json", &format!(r#"{{ {FIG2}, "t_perp": 15.0, "L": 50 }}"#));
    let out = run.out("s");
    assert_eq!(run.exec("spectrum", &cfg, &out, 1), 0);
    let summary = json(&out.join("summary.json"));
    let c: Vec<f64> = summary["bands"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["centroid_re"].as_f64().unwrap())
        .collect();
    assert!(((c[0] - c[1]).abs() - 30.0).abs() < 0.5, "{c:?}");
    assert!(summary["diagnostics"]["dipr_avg"].as_f64().unwrap() > 0.0);
}

#[test]
fn sweep_output_independent_of_jobs_and_repeat() {
    let run = Run::new();
    let body = format!(
        r#"{{
  "base": {{ {FIG2}, "t_perp": 0.0, "L": 20 }},
  "axes": [
    {{ "field": "t_perp", "start": 0.0, "stop": 12.0, "num": 7 }},
    {{ "field": "mu", "values": [0.0, 0.5] }}
  ],
  "observables": ["ipr_avg", "dipr_avg", "t_perp_c"],
  "transition_bracket": [0.0, 20.0]
}}"#
    );
    let cfg = run.config("p.json", &body);
    let (a, b, c) = (run.out("a"), run.out("b"), run.out("c"));
    assert_eq!(run.exec("phase-diagram", &cfg, &a, 1), 0);
    assert_eq!(run.exec("phase-diagram", &cfg, &b, 4), 0);
    assert_eq!(run.exec("phase-diagram", &cfg, &c, 4), 0);
    for f in ["grid.csv", "boundary.csv"] {
        let x = fs::read(a.join(f)).unwrap();
        assert_eq!(x, fs::read(b.join(f)).unwrap(), "{f}");
        assert_eq!(x, fs::read(c.join(f)).unwrap(), "{f}");
        assert!(!x.contains(&b'\r'));
    }
    assert_eq!(rows(&a.join("grid.csv")).len(), 14);
}

#[test]
fn manifest_digests_match_files() {
    let run = Run::new();
    let cfg = run.config("g.json", &format!(r#"{{ {FIG2}, "t_perp": 30.0, "L": 60 }}"#));
    let out = run.out("g");
    assert_eq!(run.exec("gbz", &cfg, &out, 1), 0);
    let m: RunManifest = serde_json::from_slice(&fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m.command, "gbz");
    assert_eq!(m.config_sha256, sha256_hex(&fs::read(&cfg).unwrap()));
    assert_eq!(m.parameters["t_perp"], 30.0);
    assert_eq!(m.files.len(), 3);
    for f in &m.files {
        let bytes = fs::read(out.join(&f.path)).unwrap();
        assert_eq!(f.sha256, sha256_hex(&bytes), "{}", f.path);
        assert_eq!(f.bytes, bytes.len() as u64);
    }
}

#[test]
fn gbz_reference_and_empty_interval() {
    let run = Run::new();
    let cfg = run.config("g.json", &format!(r#"{{ {FIG2}, "t_perp": 30.0, "L": 60 }}"#));
    let out = run.out("g");
    assert_eq!(run.exec("gbz", &cfg, &out, 1), 0);
    let g = json(&out.join("gbz.json"));
    assert!((g["kappa"].as_f64().unwrap() + 1.590).abs() < 2e-3);
    assert_eq!(g["reversal_interval_empty"], false);

    let cfg = run.config(
        "eq.json",
        r#"{ "t_a": 0.75, "t_b": -1.0, "alpha_a": 0.3, "alpha_b": 0.3, "t_perp": 30.0, "L": 60 }"#,
    );
    let out = run.out("eq");
    assert_eq!(run.exec("gbz", &cfg, &out, 1), 0);
    assert_eq!(json(&out.join("gbz.json"))["reversal_interval_empty"], true);
}

#[test]
fn walk_point_reverses_and_round_trips() {
    let run = Run::new();
    let cfg = run.config(
        "w.json",
        r#"{ "mode": "point", "theta1": "0.2pi", "theta2": "0.4pi", "theta3": 1.2566370614359172,
             "N": 10, "steps": 40, "variants": ["U0", "U"] }"#,
    );
    let out = run.out("w");
    assert_eq!(run.exec("walk", &cfg, &out, 2), 0);
    let summary = json(&out.join("summary.json"));
    let runs = summary.as_array().unwrap();
    let xbar: Vec<f64> = runs.iter().map(|r| r["xbar"].as_f64().unwrap()).collect();
    assert!(xbar[0] * xbar[1] < 0.0 && xbar.iter().all(|x| x.abs() >= 2.0), "{xbar:?}");
    for (r, expect) in runs.iter().zip(&xbar) {
        let name = r["variant"].as_str().unwrap();
        let path = out.join(format!("rho_{name}.csv"));
        let back: f64 = rows(&path)
            .iter()
            .map(|row| row[0].parse::<f64>().unwrap() * row[1].parse::<f64>().unwrap())
            .sum();
        assert_eq!(back.to_bits(), expect.to_bits(), "{name}");
    }
}

#[test]
fn walk_two_cell_table() {
    let run = Run::new();
    let cfg = run.config("w.json", r#"{ "mode": "two_cell", "steps": 20, "variants": ["U0", "U", "U0Bar", "UBar"] }"#);
    let out = run.out("w");
    assert_eq!(run.exec("walk", &cfg, &out, 1), 0);
    let t = rows(&out.join("two_cell.csv"));
    assert_eq!(t.len(), 16);
    for row in &t {
        let (r1, r2): (f64, f64) = (row[3].parse().unwrap(), row[4].parse().unwrap());
        assert!((r1 + r2 - 1.0).abs() < 1e-12);
    }
}

#[test]
fn config_errors_exit_two() {
    let run = Run::new();
    let empty = run.config(
        "e.json",
        &format!(
            r#"{{ "base": {{ {FIG2}, "t_perp": 0.0, "L": 20 }},
  "axes": [{{ "field": "t_perp", "values": [] }}],
  "observables": ["dipr_avg"] }}"#
        ),
    );
    assert_eq!(run.exec("phase-diagram", &empty, &run.out("e"), 1), 2);

    let unknown = run.config("u.json", &format!(r#"{{ {FIG2}, "t_perp": 0.0, "L": 20, "t3": 1.0 }}"#));
    assert_eq!(run.exec("spectrum", &unknown, &run.out("u"), 1), 2);

    let short = run.config("l.json", &format!(r#"{{ {FIG2}, "t_perp": 0.0, "L": 1 }}"#));
    assert_eq!(run.exec("spectrum", &short, &run.out("l"), 1), 2);

    let bands = run.config("b.json", r#"{ "mode": "bands", "bc": "obc" }"#);
    assert_eq!(run.exec("walk", &bands, &run.out("b"), 1), 2);

    let ok = run.config("ok.json", &format!(r#"{{ {FIG2}, "t_perp": 0.0, "L": 20 }}"#));
    assert_eq!(run.exec("spectrum", &ok, &run.out("ok"), 0), 2);
}

#[test]
fn unreadable_config_and_unwritable_output() {
    let run = Run::new();
    assert_eq!(run.exec("gbz", &run.out("absent.json"), &run.out("x"), 1), 2);
    let cfg = run.config("g.json", &format!(r#"{{ {FIG2}, "t_perp": 30.0, "L": 60 }}"#));
    // the output path is an existing file
    assert_eq!(run.exec("gbz", &cfg, &cfg, 1), 1);
}
