use crossprod_cli::run;

const CYCLE3: &str = "kind = finite; sigma = [1, 2, 0]";

fn cli(args: &[&str]) -> (i32, String, String) {
    let o = run(std::iter::once("crossprod").chain(args.iter().copied()));
    (o.code, o.stdout, o.stderr)
}

#[test]
fn member_of_pxl_on_a_three_cycle() {
    let (code, out, _) = cli(&["member", "--system", CYCLE3, "--ideal", "Pxl(x0, 1)", "--elem", "1 - d^3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "member: true\n");
    let (_, out, _) = cli(&["member", "--system", CYCLE3, "--ideal", "Pxl(x0, -1)", "--elem", "1 - d^3"]);
    assert_eq!(out, "member: false\n");
}

#[test]
fn zeros_of_qx_is_orbit_times_circle() {
    let (code, out, _) = cli(&["zeros", "--system", CYCLE3, "--ideal", "Qx(x1)", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["operation"], "zeros");
    assert_eq!(v["outcome"], "orbit(x1) x T");
    assert_eq!(v["witnesses"][0]["nonempty"], true);
}

#[test]
fn galois_suite_passes() {
    let (code, out, _) = cli(&["check", "--suite", "galois.HK"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("passed=true"));
}

#[test]
fn conjugation_and_adjoint() {
    let (_, out, _) = cli(&["eval", "--system", CYCLE3, "--elem", "d * f{0:1,1:0,2:0} * d^-1"]);
    assert_eq!(out, "eval: f{1:1}\n");
    let (_, adj, _) = cli(&["adj", "--system", CYCLE3, "--elem", "d"]);
    let (_, inv, _) = cli(&["eval", "--system", CYCLE3, "--elem", "d^-1"]);
    assert_eq!(adj.strip_prefix("adj: "), inv.strip_prefix("eval: "));
    assert_eq!(adj, "adj: f{0:1,1:1,2:1}*d^-1\n");
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["frobnicate"]).0, 2);
    assert_eq!(cli(&["eval", "--elem", "d"]).0, 2);
    let (code, _, err) = cli(&["eval", "--system", CYCLE3, "--elem", "d +* d"]);
    assert_eq!(code, 3);
    assert!(err.contains("1:4"), "{err}");
    assert_eq!(cli(&["eval", "--system", "kind = finite; sigma = [0, 0]", "--elem", "d"]).0, 3);
    assert_eq!(cli(&["member", "--system", CYCLE3, "--ideal", "gen(1 - d)", "--elem", "1"]).0, 4);
    let exact_rotation = "mode = exact; kind = rotation; theta = surd[1, 0, 1, 3]; irrational = false";
    // rejected while evaluating the expression, so reported as a parse error
    assert_eq!(cli(&["eval", "--system", exact_rotation, "--elem", "d"]).0, 3);
    assert_eq!(cli(&["check", "--suite", "no.such.suite"]).0, 4);
    assert_eq!(cli(&["--help"]).0, 0);
}

#[test]
fn tolerance_from_environment_is_overridden_by_flag() {
    // Both settings make the small coefficient vanish, the flag wins over the environment.
    let sys = "kind = rotation; theta = golden";
    let elem = "tp{0:0.000001}";
    let (_, out, _) = cli(&["member", "--system", sys, "--ideal", "Px(r0.5)", "--elem", elem, "--tol", "1e-3"]);
    assert_eq!(out, "member: true\n");
    let (_, out, _) = cli(&["member", "--system", sys, "--ideal", "Px(r0.5)", "--elem", elem, "--tol", "1e-9"]);
    assert_eq!(out, "member: false\n");
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("crossprod-out-{}", std::process::id()));
    let (code, out, _) = cli(&["norm", "--system", CYCLE3, "--elem", "2 - 3*d", "--out", dir.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    assert_eq!(std::fs::read_to_string(&dir).unwrap(), "norm: 5.0\n");
    let _ = std::fs::remove_file(dir);
}

#[test]
fn reports_are_deterministic() {
    let args = ["report", "--system", "kind = rotation; theta = golden", "--format", "json", "--seed", "7"];
    assert_eq!(cli(&args), cli(&args));
    let other = ["report", "--system", "kind = rotation; theta = golden", "--format", "json", "--seed", "8"];
    assert_ne!(cli(&args).1, cli(&other).1);
}
