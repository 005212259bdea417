use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn congr(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_congr"));
    cmd.args(args).env_remove("CONGR_DIGITS").env_remove("CONGR_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("congr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn preset_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("presets/sec9.toml")
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&congr(&["--help"], &[])), 0);
    assert_eq!(code(&congr(&[], &[])), 2);
    assert_eq!(code(&congr(&["bogus"], &[])), 2);
    assert_eq!(code(&congr(&["qexp", "--terms", "x"], &[])), 2);
    assert_eq!(code(&congr(&["lalg", "--which", "sym3", "--j", "2"], &[])), 2);
}

#[test]
fn qexp_text_and_json() {
    let o = congr(&["qexp", "--form", "s26", "--terms", "6"], &[]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("a(5) = -741989850 = -2 * 3 * 5^2 * 7^2 * 157 * 643"), "{out}");
    assert!(out.contains("a(6) = 9398592"));

    let o = congr(&["qexp", "--form", "level1:12", "--terms", "4", "--json"], &[]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coefficients"], serde_json::json!(["1", "-24", "252", "-1472"]));
    assert_eq!(v["weight"], 12);

    assert_eq!(code(&congr(&["qexp", "--form", "nope"], &[])), 2);
    assert_eq!(code(&congr(&["qexp", "--form", "level1:24"], &[])), 1);
}

#[test]
fn cmform_paths() {
    let o = congr(&["cmform", "--disc", "-3", "--u", "-6"], &[]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("weight 7, level 3"));
    assert!(out.contains("a(19) = -10582"));
    let o = congr(&["cmform", "--disc", "-3", "--u", "-6", "--terms", "4", "--json"], &[]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coefficients"], serde_json::json!(["1", "0", "-27", "64"]));
    assert_eq!(code(&congr(&["cmform", "--disc", "-5", "--u", "-6"], &[])), 2);
    assert_eq!(code(&congr(&["cmform", "--disc", "-3", "--u", "-5"], &[])), 1);
}

#[test]
fn lvalue_paths() {
    assert_eq!(code(&congr(&["lvalue", "--spec", "missing.txt", "--s", "2"], &[])), 2);

    let zeta = scratch("zeta.toml", "coefficients = \"zeta\"\n");
    let z = zeta.to_str().unwrap();
    let o = congr(&["--digits", "60", "lvalue", "--spec", z, "--s", "2"], &[]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("1.64493406684822643647241516664602518921894990120679843773"));
    assert!(stdout(&o).contains("+/-"));
    assert_eq!(code(&congr(&["--digits", "60", "lvalue", "--spec", z, "--s", "1"], &[])), 1);
    assert_eq!(code(&congr(&["--digits", "60", "lvalue", "--spec", z, "--s", "two"], &[])), 2);

    let chi4 = scratch("chi4.toml", "coefficients = \"dirichlet\"\ncharacter = -4\n");
    let o = congr(&["lvalue", "--spec", chi4.to_str().unwrap(), "--s", "1", "--json"], &[("CONGR_DIGITS", "60")]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["root_number_solved"], true);
    assert!(v["value"].as_str().unwrap().starts_with("7.8539816339744830961566084581987572104929234984377645524"));

    let bad = scratch("bad.toml", "coefficients = \"zeta\"\ncolour = 1\n");
    assert_eq!(code(&congr(&["lvalue", "--spec", bad.to_str().unwrap(), "--s", "2"], &[])), 2);
    let bad = scratch("bad2.toml", "coefficients = \"zeta\"\ngamma_shifts = [\"Q:0\"]\n");
    assert_eq!(code(&congr(&["lvalue", "--spec", bad.to_str().unwrap(), "--s", "2"], &[])), 2);
}

#[test]
fn precision_flags_and_environment() {
    let zeta = scratch("zeta-env.toml", "coefficients = \"zeta\"\n");
    let z = zeta.to_str().unwrap();
    assert_eq!(code(&congr(&["--digits", "59", "qexp"], &[])), 2);
    assert_eq!(code(&congr(&["qexp"], &[("CONGR_DIGITS", "30")])), 2);
    assert_eq!(code(&congr(&["qexp"], &[("CONGR_DIGITS", "sixty")])), 2);
    assert_eq!(code(&congr(&["--threads", "0", "qexp"], &[])), 2);
    let o = congr(&["--digits", "60", "lvalue", "--spec", z, "--s", "4", "--json"], &[("CONGR_DIGITS", "30")]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["precision_digits"], 60);
    let o = congr(&["lvalue", "--spec", z, "--s", "4", "--json"], &[("CONGR_DIGITS", "70"), ("CONGR_THREADS", "2")]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["precision_digits"], 70);
}

#[test]
fn lalg_paths() {
    let o = congr(&["lalg", "--which", "sym2", "--j", "2"], &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("L_alg(27, Sym^2 f x chi) = 2^37 * 523 / (3^33 * 5^5 * 7^2 * 11 * 13 * 23)"));

    let o = congr(&["lalg", "--which", "conv", "--j", "11", "--json"], &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], "-2^31 * 47 * 2069 / (3^12 * 5 * 7 * 23)");

    let o = congr(&["--digits", "60", "lalg", "--which", "sym2", "--j", "1"], &[]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("not a critical point"));
    assert_eq!(code(&congr(&["lalg", "--which", "sym2", "--j", "2", "--form", "cm:-3:-6"], &[])), 1);
}

#[test]
fn ikeda_paths() {
    let o = congr(&["ikeda", "coeff", "--gamma", "-5"], &[]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("A(gamma = -5) = -741989850"));
    let o = congr(&["ikeda", "coeff", "--gamma", "-55", "--json"], &[]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // a(5) a(11)
    assert_eq!(v["coefficient"], (-741989850i128 * 8419515299052).to_string());
    assert_eq!(code(&congr(&["ikeda", "coeff", "--gamma", "0"], &[])), 1);
    assert_eq!(code(&congr(&["ikeda", "coeff", "--gamma", "-7"], &[])), 1);
    assert_eq!(code(&congr(&["ikeda", "coeff", "--gamma", "x"], &[])), 2);
    assert_eq!(code(&congr(&["ikeda", "--n", "4", "coeff", "--gamma", "-5"], &[])), 1);
    assert_eq!(code(&congr(&["ikeda", "--disc", "-5", "coeff", "--gamma", "-5"], &[])), 2);

    let o = congr(&["ikeda", "sweep", "--ell", "523"], &[]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("witness p = 5"));
    let o = congr(&["ikeda", "sweep", "--ell", "6761", "--json"], &[]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["witness"], 5);
    assert_eq!(code(&congr(&["ikeda", "sweep", "--ell", "3"], &[])), 1);
}

#[test]
fn certify_config_errors() {
    assert_eq!(code(&congr(&["certify"], &[])), 2);
    assert_eq!(code(&congr(&["certify", "--preset", "sec10"], &[])), 2);
    assert_eq!(code(&congr(&["certify", "--config", "missing.toml"], &[])), 2);
    let p = preset_path();
    assert_eq!(code(&congr(&["certify", "--config", p.to_str().unwrap(), "--preset", "sec9"], &[])), 2);

    let t31 = scratch("t31.toml", "disc = -3\nn = 5\nk = 13\nm = 2\nt = -31\nprecision_digits = 40\n");
    let o = congr(&["certify", "--config", t31.to_str().unwrap()], &[]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    assert!(err.contains("t = -31 outside -30 <= t < -20"), "{err}");
    assert!(err.contains("precision_digits = 40 below 60"), "{err}");

    let unknown = scratch("unknown.toml", "disc = -3\nn = 5\nk = 13\nm = 2\nt = -24\nxi = 1\n");
    assert_eq!(code(&congr(&["certify", "--config", unknown.to_str().unwrap()], &[])), 2);
    let field = scratch("field.toml", "disc = -5\nn = 5\nk = 13\nm = 2\nt = -24\n");
    let o = congr(&["certify", "--config", field.to_str().unwrap()], &[]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("unsupported field"));
    assert_eq!(code(&congr(&["--digits", "61", "certify", "--preset", "sec9"], &[])), 1);
    let even = scratch("even.toml", "disc = -3\nn = 4\nk = 13\nm = 2\nt = -30\n");
    assert_eq!(code(&congr(&["certify", "--config", even.to_str().unwrap()], &[])), 1);
}

/// The sec9 report is byte-identical across thread counts and matches the golden file.
#[test]
fn certify_sec9_golden() {
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/sec9.json")).unwrap();
    let preset = preset_path();
    let runs = [
        (vec!["certify", "--preset", "sec9"], vec![("CONGR_THREADS", "1")]),
        (vec!["--threads", "3", "certify", "--config", preset.to_str().unwrap()], vec![]),
    ];
    for (i, (args, env)) in runs.iter().enumerate() {
        let out = scratch(&format!("sec9-{i}.json"), "");
        let mut args: Vec<&str> = args.clone();
        args.extend(["--json", out.to_str().unwrap()]);
        let o = congr(&args, env);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        assert!(stdout(&o).contains("certified: [31, 67, 137, 139, 523, 1609, 3463, 6761]"));
        let json = std::fs::read_to_string(&out).unwrap();
        assert_eq!(json, golden, "run {i} differs from the golden report");
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let r523 = v["reports"].as_array().unwrap().iter().find(|r| r["ell"] == 523).unwrap();
        assert_eq!(r523["depth"], 1);
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", json);
    }
}
