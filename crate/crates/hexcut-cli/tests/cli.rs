use std::io::Write;
use std::process::{Command, Output, Stdio};

const MEDIUM: &str = r#"{"two_cut":{"d":2,"n1":5,"n2":5,"m1":4,"m2":6,"b":3,"c":7}}"#;
const SMALL: &str = r#"{"two_cut":{"d":1,"n1":2,"n2":2,"m1":2,"m2":2,"b":2,"c":2}}"#;
const HEX111: &str = r#"{"hexagon":{"a":1,"b":1,"c":1}}"#;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hexcut"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_medium() {
    let o = run(&["validate"], MEDIUM);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for line in ["N=10", "r=1", "rho=2", "sigma=4", "d=2"] {
        assert!(s.lines().any(|l| l == line), "missing {line} in\n{s}");
    }
}

#[test]
fn full_spec_from_file() {
    let dir = std::env::temp_dir().join(format!("hexcut-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spec.json");
    let spec = r#"{"lower_cuts":[2],"lower_gaps":[4,6],"upper_cuts":[2],"upper_gaps":[5,5],"b0":3,"bu":7,"d0":7}"#;
    std::fs::write(&path, spec).unwrap();
    let a = run(&["validate", path.to_str().unwrap()], "");
    let b = run(&["validate"], MEDIUM);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_specs_exit_2() {
    let o = run(&["validate"], r#"{"two_cut":{"d":2,"n1":5,"m1":4,"m2":6,"b":3,"c":7}}"#);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n2"));
    let o = run(&["validate"], r#"{"hexagon":{"a":1,"b":1,"c":1,"z":4}}"#);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains('z'));
    let o = run(&["validate"], "{not json");
    assert_eq!(o.status.code(), Some(2));
    // parses but violates the gap balance
    let o = run(&["validate"], r#"{"two_cut":{"d":2,"n1":5,"n2":5,"m1":4,"m2":7,"b":3,"c":7}}"#);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lower_gaps"));
}

#[test]
fn kernel_csv_sample() {
    let o = run(&["kernel", "--form", "d2", "--points", "0:0,1:0"], HEX111);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "m,x,n,y,value_num,value_den\n0,0,0,0,0,1\n0,0,1,0,-1,2\n1,0,0,0,0,1\n1,0,1,0,1,2\n");
}

#[test]
fn kernel_forms_print_identical_tables() {
    let base = run(&["kernel", "--form", "R"], SMALL);
    assert_eq!(base.status.code(), Some(0));
    for f in ["d2", "L", "r3"] {
        assert_eq!(run(&["kernel", "--form", f], SMALL).stdout, base.stdout, "form {f}");
    }
    let o = run(&["kernel", "--form", "x"], SMALL);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn qkernel_routes_agree() {
    let a = run(&["qkernel", "--q", "1/2", "--points", "0:0,1:1,2:0"], SMALL);
    let b = run(&["qkernel", "--q", "1/2", "--route", "integral", "--points", "0:0,1:1,2:0"], SMALL);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).starts_with("m,x,n,y,value_num,value_den\n"));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(run(&["qkernel", "--q", "3/2"], SMALL).status.code(), Some(2));
}

#[test]
fn correlate_prints_fractions() {
    let o = run(&["correlate", "--points", "1:0,2:1"], SMALL);
    assert_eq!(stdout(&o), "points,probability\n1:0 2:1,9/91\n");
}

#[test]
fn lkernel_verification() {
    let o = run(&["lkernel", "--verify-thm2"], SMALL);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("mismatches=0") && s.contains("max_discrepancy=0"), "{s}");
    let o = run(&["lkernel"], SMALL);
    assert!(stdout(&o).starts_with("eta,xi,eta2,xi2,value\n"));
}

#[test]
fn enumerate_count() {
    assert_eq!(stdout(&run(&["enumerate", "--count-only"], MEDIUM)), "49365250325820\n");
    let o = run(&["enumerate", "--cap", "10"], MEDIUM);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sample_and_render() {
    let a = run(&["sample", "--seed", "7", "--steps", "5000"], MEDIUM);
    let b = run(&["--threads", "1", "sample", "--seed", "7", "--steps", "5000"], MEDIUM);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let svg = run(&["render", "--seed", "7", "--steps", "5000", "--red-dots", "--strip"], MEDIUM);
    let s = stdout(&svg);
    assert!(s.starts_with("<svg ") && s.ends_with("</svg>\n"));
    // rendering the dumped tiling gives the same picture
    let dir = std::env::temp_dir().join(format!("hexcut-render-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("t.csv");
    std::fs::write(&csv, &a.stdout).unwrap();
    let out = dir.join("t.svg");
    let o = run(
        &["render", "--tiling", csv.to_str().unwrap(), "--red-dots", "--strip", "-o", out.to_str().unwrap()],
        MEDIUM,
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), s);
}

#[test]
fn tacnode_table() {
    let o = run(&["tacnode", "--r", "1", "--rho", "2", "--beta", "0", "--grid", "0:0,1:0.5"], "");
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "tau1,theta1,tau2,theta2,value,residual");
    assert_eq!(lines.len(), 5);
    for l in &lines[1..] {
        let residual: f64 = l.rsplit(',').next().unwrap().parse().unwrap();
        assert!(residual < 1e-8);
    }
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"], "");
    let s = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{s}");
    assert_eq!(s.lines().filter(|l| l.starts_with("PASS")).count(), 10);
    assert!(s.contains("rng: ChaCha8Rng"));
}
