//! Shared by the golden, fuzz and acceptance targets.
#![allow(dead_code)]

use std::sync::Arc;

use crossprod::{Exact, Float, System};
use crossprod_cli::config::parse_config;
use crossprod_cli::expr::{parse_elem, parse_ideal, parse_lambda, parse_point, parse_set, parse_torus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use std::path::PathBuf;

use crossprod_cli::run;

pub fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// (golden file, config, arguments after the config)
pub const MATRIX: &[(&str, &str, &[&str])] = &[
    ("eval_conjugate", "cycle3", &["eval", "--elem", "d * f{0:1,1:0,2:0} * d^-1"]),
    ("eval_union", "shift_cycle", &["eval", "--elem", "u{sh{inf:1, 2:1/2-3i}; f{x1:2}} * d^2 - 1"]),
    ("mul_trig", "golden", &["mul", "--elem", "tp{1:1} + tp{-1:1}", "--elem", "tp{1:1} + tp{-1:1}"]),
    ("adj_shift", "shift", &["adj", "--elem", "sh{inf:1, 0:2i} * d^2"]),
    ("norm_rotation", "golden", &["norm", "--elem", "(tp{1:0.5} + d)^3"]),
    ("e0_shift", "shift", &["e0", "--elem", "(1 + sh{inf:0, 0:1}*d) * adj(1 + sh{inf:0, 0:1}*d)"]),
    ("transform_poly", "two_three", &["transform", "--elem", "1 - d^2 + f{x2:3}*d", "--point", "x0"]),
    ("transform_value", "two_three", &["transform", "--elem", "1 - d^2", "--point", "x0", "--lambda", "i"]),
    ("rep_periodic", "two_three", &["rep", "--elem", "f{2:1} + d", "--point", "x2", "--lambda", "-1"]),
    ("rep_window", "shift", &["rep", "--elem", "sh{inf:2} + d", "--point", "s0", "--window", "2"]),
    ("member_pxl", "cycle3", &["member", "--ideal", "Pxl(x0, 1)", "--elem", "1 - d^3"]),
    ("member_kernel", "shift", &["member", "--ideal", "K({inf})", "--elem", "sh{inf:0, 3:1} * d"]),
    ("inclusion_px_qx", "shift", &["inclusion", "--ideal", "Px(s0)", "--other", "Qx(inf)"]),
    ("inclusion_pxl", "two_three", &["inclusion", "--ideal", "Pxl(x0, 1)", "--other", "Pxl(x1, -1)"]),
    ("behaviour_badly", "cycle3", &["behaviour", "--ideal", "Pxl(x0, 1)"]),
    ("behaviour_plain", "shift_cycle", &["behaviour", "--ideal", "meet(Px(c0.s0), Pxl(c1.x0, 1))"]),
    ("hull_meet", "shift", &["hull", "--ideal", "meet(Px(s0), Qx(inf))"]),
    ("kernel_finite", "two_three", &["kernel", "--set", "{x0, x1}"]),
    ("decompose_union", "shift_cycle", &["decompose", "--set", "u[{inf}; {x0, x1, x2}]"]),
    ("zeros_qx", "cycle3", &["zeros", "--ideal", "Qx(x0)"]),
    ("zeros_generated", "two_three", &["zeros", "--ideal", "gen(1 - d^2, 1 + d^3)"]),
    ("isynth", "two_three", &["isynth", "--torus", "orbit(x0) x {1, -1} u orbit(x2) x T"]),
    ("zi", "two_three", &["zi", "--ideal", "gen(1 - d^6)"]),
    ("avg_golden", "golden", &["avg", "--elem", "tp{0:1} + tp{1:1}*d + tp{-2:1/2}*d^-3"]),
    ("avg_third", "third", &["avg", "--elem", "tp{0:1} + d^3 + d", "--max-rounds", "6"]),
    ("minimality_cycle", "cycle3", &["minimality"]),
    ("minimality_two_three", "two_three", &["minimality"]),
    ("report_cycle", "cycle3", &["report"]),
    ("report_golden", "golden", &["report", "--seed", "3"]),
    ("galois_hk", "", &["galois", "--instantiation", "hk", "--samples", "6"]),
    ("check_plain", "", &["check", "--suite", "reps.plain", "--cases", "2"]),
];

pub fn produce(config: &str, args: &[&str], json: bool) -> String {
    let mut argv: Vec<String> = vec!["crossprod".into()];
    argv.extend(args.iter().map(|s| s.to_string()));
    if !config.is_empty() {
        argv.push("--config".into());
        argv.push(dir().join("configs").join(format!("{config}.cfg")).display().to_string());
    }
    if json {
        argv.push("--format".into());
        argv.push("json".into());
    }
    let out = run(argv);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    out.stdout
}

/// Mismatches against the golden files, or rewrites them when `update` is set.
pub fn golden_mismatches(update: bool) -> Vec<String> {
    let mut mismatched = Vec::new();
    for (name, config, args) in MATRIX {
        let got = format!("{}{}", produce(config, args, false), produce(config, args, true));
        let path = dir().join(format!("{name}.out"));
        if update {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(want) if want == got => {}
            Ok(want) => mismatched.push(format!("{name}:\n--- want\n{want}--- got\n{got}")),
            Err(e) => mismatched.push(format!("{}: {e}", path.display())),
        }
    }
    mismatched
}

pub const FUZZ_INPUTS: usize = 10_000;

pub const TOKENS: &[&str] = &[
    "d", "d^-1", "^", "^2", "^-3", "*", "+", "-", "(", ")", "adj(", "E(", "f{", "sh{", "tp{", "u{", "}", ",", ":", ";", "0",
    "1", "2", "-1", "1/2", "0.25", "3i", "i", "1e3", "x0", "x2", "s-1", "inf", "r0.5", "c1.", "c0.", "Px(", "Pxl(", "Qx(",
    "K(", "meet(", "gen(", "root(1/3)", "branch(i,2,1)", "{", "[", "]", "all", "all\\{", "u[", "orbit(", " x ", "T", " u ",
    " ", "\n", "kind", "=", "finite", "shift", "rotation", "union", "system", "sigma", "[1, 0]", "theta", "golden",
    "surd[1,0,1,3]", "irrational", "true", "mode", "exact", "float", "tolerance", "#", "9999999999999999999999",
];

pub fn random_text(rng: &mut ChaCha8Rng) -> String {
    let mut s = String::new();
    for _ in 0..rng.gen_range(0..14) {
        if rng.gen_bool(0.85) {
            s.push_str(TOKENS[rng.gen_range(0..TOKENS.len())]);
        } else {
            // any char, including multi-byte ones
            s.push(char::from_u32(rng.gen_range(0..0x3000)).unwrap_or('?'));
        }
    }
    s
}

pub fn systems() -> Vec<Arc<System>> {
    vec![
        Arc::new(System::finite(vec![1, 0, 2]).unwrap()),
        Arc::new(System::Shift),
        Arc::new(System::golden_rotation()),
        Arc::new(System::union(vec![System::Shift, System::cycle(3)]).unwrap()),
    ]
}

/// Feeds `inputs` random strings to every parser; panics on a crash or a failed round trip.
/// Returns how many were accepted as element expressions.
pub fn fuzz_parsers(inputs: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let systems = systems();
    let mut accepted = 0;
    for i in 0..inputs {
        let text = random_text(&mut rng);
        let sys = &systems[i % systems.len()];
        if let Ok(a) = parse_elem::<Exact>(&text, sys) {
            accepted += 1;
            assert_eq!(parse_elem::<Exact>(&a.render(), sys).as_ref(), Ok(&a), "{text:?}");
        }
        if let Ok(a) = parse_elem::<Float>(&text, sys) {
            let back = parse_elem::<Float>(&a.render(), sys).unwrap_or_else(|e| panic!("{text:?} -> {}: {e}", a.render()));
            assert!(back.approx_eq(&a, 1e-9 * (1.0 + a.norm())), "{text:?}");
        }
        if let Ok(h) = parse_ideal::<Exact>(&text, sys) {
            assert_eq!(parse_ideal::<Exact>(&h.render(), sys).as_ref(), Ok(&h), "{text:?}");
        }
        if let Ok(t) = parse_torus::<Exact>(&text, sys) {
            assert_eq!(parse_torus::<Exact>(&t.render(), sys).as_ref(), Ok(&t), "{text:?}");
        }
        if let Ok(s) = parse_set(&text, sys) {
            assert_eq!(parse_set(&s.to_string(), sys).as_ref(), Ok(&s), "{text:?}");
        }
        if let Ok(p) = parse_point(&text, sys) {
            assert_eq!(parse_point(&p.to_string(), sys).as_ref(), Ok(&p), "{text:?}");
        }
        let _ = parse_lambda::<Float>(&text, sys);
        if let Ok(c) = parse_config(&text) {
            assert_eq!(parse_config(&c.render()).as_ref(), Ok(&c), "{text:?}");
        }
    }
    // the token soup should exercise the accepting paths too
    accepted
}
