use std::path::Path;
use std::process::{Command, Output};

use magtrap_cli::presets::{BUNDLED, GOLDENS, PRESET_DIR_VAR};
use serde_json::Value;

fn magtrap(args: &[&str], env: Option<(&str, &Path)>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_magtrap"));
    cmd.args(args).env_remove(PRESET_DIR_VAR);
    if let Some((k, v)) = env {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn magtrap")
}

fn run_preset(name: &str, sub: &str, out: &Path) -> Output {
    magtrap(&[sub, "--preset", name, "--out", out.to_str().unwrap(), "--jobs", "1"], None)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn goldens() -> serde_json::Map<String, Value> {
    serde_json::from_str::<Value>(GOLDENS).unwrap().as_object().unwrap().clone()
}

fn check_golden(name: &str, spec: &Value, dir: &Path) {
    for c in spec["checks"].as_array().unwrap() {
        let doc = read_json(&dir.join(c["file"].as_str().unwrap()));
        let ptr = c["pointer"].as_str().unwrap();
        let got = doc.pointer(ptr).unwrap_or_else(|| panic!("{name}: missing {ptr}"));
        if let Some(expect) = c.get("equals") {
            assert_eq!(got, expect, "{name}{ptr}");
            continue;
        }
        let (g, e) = (got.as_f64().unwrap(), c["value"].as_f64().unwrap());
        let tol = match (c.get("rel_tol"), c.get("abs_tol")) {
            (Some(r), _) => r.as_f64().unwrap() * e.abs(),
            (_, Some(a)) => a.as_f64().unwrap(),
            _ => 0.0,
        };
        assert!((g - e).abs() <= tol, "{name}{ptr}: {g} vs {e}");
    }
}

#[test]
fn every_preset_has_a_golden() {
    let g = goldens();
    for (name, _) in BUNDLED {
        assert!(g.contains_key(*name), "{name}");
    }
    assert_eq!(g.len(), BUNDLED.len());
}

#[test]
fn presets_match_goldens() {
    for (name, spec) in goldens() {
        let dir = tempfile::tempdir().unwrap();
        let out = run_preset(&name, spec["subcommand"].as_str().unwrap(), dir.path());
        let code = spec["exit_code"].as_i64().unwrap() as i32;
        assert_eq!(out.status.code(), Some(code), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        check_golden(&name, &spec, dir.path());
        let manifest = read_json(&dir.path().join("manifest.json"));
        assert_eq!(manifest["exit_code"].as_i64(), Some(code as i64));
        assert_eq!(manifest["subcommand"].as_str(), spec["subcommand"].as_str());
    }
}

#[test]
fn manifest_hashes_match_outputs() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_preset("chip_main", "chip-design", dir.path()).status.code(), Some(0));
    let manifest = read_json(&dir.path().join("manifest.json"));
    let outputs = manifest["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 2);
    for o in outputs {
        let bytes = std::fs::read(dir.path().join(o["file"].as_str().unwrap())).unwrap();
        assert_eq!(o["bytes"].as_u64(), Some(bytes.len() as u64));
        assert_eq!(o["sha256"].as_str().unwrap(), magtrap_cli::manifest::sha256_hex(&bytes));
    }
    let text = BUNDLED.iter().find(|(n, _)| *n == "chip_main").unwrap().1;
    assert_eq!(manifest["config"]["sha256"].as_str().unwrap(), magtrap_cli::manifest::sha256_hex(text.as_bytes()));
}

#[test]
fn reruns_are_byte_identical() {
    for (name, sub) in [("fig4b", "simulate"), ("stability_grid", "stability-scan"), ("fig3c", "radial-scan")] {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        run_preset(name, sub, a.path());
        run_preset(name, sub, b.path());
        let ma = read_json(&a.path().join("manifest.json"));
        let mb = read_json(&b.path().join("manifest.json"));
        assert_eq!(ma["outputs"], mb["outputs"], "{name}");
        for o in ma["outputs"].as_array().unwrap() {
            let f = o["file"].as_str().unwrap();
            assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{name}/{f}");
        }
    }
}

#[test]
fn job_count_does_not_change_results() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let p = |d: &Path, j: &str| {
        magtrap(&["stability-scan", "--preset", "stability_grid", "--out", d.to_str().unwrap(), "--jobs", j], None)
    };
    assert_eq!(p(a.path(), "1").status.code(), Some(0));
    assert_eq!(p(b.path(), "3").status.code(), Some(0));
    let f = "stability_scan.csv";
    assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap());
}

#[test]
fn malformed_config_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, "{ \"omega_r\": ").unwrap();
    let out = magtrap(&["stability-scan", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    std::fs::write(&cfg, r#"{"bar": {"l": 1e-3, "h": 4e-3}}"#).unwrap();
    let out = magtrap(&["pseudo-potential", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_geometry_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let text = BUNDLED.iter().find(|(n, _)| *n == "chip_nominal").unwrap().1;
    let mut v: Value = serde_json::from_str(text).unwrap();
    v["r2"] = Value::from(50e-6);
    let cfg = dir.path().join("chip.json");
    std::fs::write(&cfg, v.to_string()).unwrap();
    let out = magtrap(&["chip-design", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn unknown_preset_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_preset("no_such_preset", "simulate", dir.path());
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn preset_directory_overrides_bundled_set() {
    let presets = tempfile::tempdir().unwrap();
    let text = BUNDLED.iter().find(|(n, _)| *n == "stability_grid").unwrap().1;
    let mut v: Value = serde_json::from_str(text).unwrap();
    v["omega_r"]["n"] = Value::from(3);
    v["omega"]["n"] = Value::from(2);
    std::fs::write(presets.path().join("stability_grid.json"), v.to_string()).unwrap();
    let out = tempfile::tempdir().unwrap();
    let r = magtrap(
        &["stability-scan", "--preset", "stability_grid", "--out", out.path().to_str().unwrap()],
        Some((PRESET_DIR_VAR, presets.path())),
    );
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let csv = std::fs::read_to_string(out.path().join("stability_scan.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 6);
    let manifest = read_json(&out.path().join("manifest.json"));
    assert!(manifest["config"]["path"].as_str().unwrap().ends_with("stability_grid.json"));
    let missing = magtrap(
        &["simulate", "--preset", "fig4b", "--out", out.path().to_str().unwrap()],
        Some((PRESET_DIR_VAR, presets.path())),
    );
    assert_ne!(missing.status.code(), Some(0));
}

#[test]
fn config_and_preset_are_exclusive() {
    let out = magtrap(&["simulate", "--preset", "fig4b", "--config", "x.json"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = magtrap(&["simulate"], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_outputs_have_expected_headers() {
    let cases = [
        ("fig1b", "field-map", "field_map.csv", "x,y,z,t,Bx,By,Bz"),
        ("stability_grid", "stability-scan", "stability_scan.csv", "omega_r,Omega,max_real_eig,analytic_stable,max_multiplier,floquet_stable,stable"),
        ("sm_fig_pseudo", "pseudo-potential", "pseudo_potential.csv", "z,psi_z,gravity_term,total"),
        ("fig3d", "height-scan", "height_scan.csv", "Omega,z_eq,trapped"),
        ("fig3c", "radial-scan", "radial_scan.csv", "x_offset,z_eq,regime"),
    ];
    for (name, sub, file, header) in cases {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(run_preset(name, sub, dir.path()).status.code(), Some(0));
        let text = std::fs::read_to_string(dir.path().join(file)).unwrap();
        assert_eq!(text.lines().next().unwrap(), header, "{name}");
    }
    let dir = tempfile::tempdir().unwrap();
    run_preset("fig4b", "simulate", dir.path());
    let text = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(text.lines().next().unwrap().starts_with("t,"));
}
