//! Random inputs never crash the parsers, and anything accepted renders to text that parses back.

mod common;

use std::sync::Arc;

use common::{fuzz_parsers, random_text, systems, FUZZ_INPUTS};
use crossprod::{Exact, Float, System};
use crossprod_cli::expr::parse_elem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn parsers_are_total_and_round_trip() {
    let accepted = fuzz_parsers(FUZZ_INPUTS, 1);
    // the token soup should exercise the accepting paths too
    assert!(accepted > 50, "only {accepted} inputs parsed");
}

fn scalar(rng: &mut ChaCha8Rng) -> String {
    match rng.gen_range(0..5) {
        0 => format!("{}", rng.gen_range(-5..6)),
        1 => format!("{}/{}", rng.gen_range(-5..6), rng.gen_range(1..7)),
        2 => format!("{}i", rng.gen_range(0..4)),
        3 => format!("{}-{}i", rng.gen_range(0..4), rng.gen_range(0..4)),
        _ => format!("0.{}", rng.gen_range(0..100)),
    }
}

fn func_lit(rng: &mut ChaCha8Rng, sys: &System) -> String {
    match sys {
        System::Finite { sigma } => format!("f{{{}:{}}}", rng.gen_range(0..sigma.len()), scalar(rng)),
        System::Shift => format!("sh{{inf:{}, {}:{}}}", scalar(rng), rng.gen_range(-3..4), scalar(rng)),
        System::Rotation { .. } => format!("tp{{{}:{}}}", rng.gen_range(-2..3), scalar(rng)),
        System::Union(parts) => {
            let ps: Vec<String> = parts.iter().map(|p| if rng.gen_bool(0.5) { func_lit(rng, p) } else { scalar(rng) }).collect();
            format!("u{{{}}}", ps.join("; "))
        }
    }
}

fn expr(rng: &mut ChaCha8Rng, sys: &System, depth: u32) -> String {
    if depth == 0 {
        return match rng.gen_range(0..3) {
            0 => scalar(rng),
            1 => "d".into(),
            _ => func_lit(rng, sys),
        };
    }
    let a = expr(rng, sys, depth - 1);
    match rng.gen_range(0..7) {
        0 => format!("{a} + {}", expr(rng, sys, depth - 1)),
        1 => format!("{a} - {}", expr(rng, sys, depth - 1)),
        2 => format!("({a}) * ({})", expr(rng, sys, depth - 1)),
        3 => format!("adj({a})"),
        4 => format!("E({a})"),
        5 => format!("({a})^{}", rng.gen_range(0..3)),
        _ => format!("-({a})"),
    }
}

#[test]
fn generated_expressions_parse_and_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for sys in systems() {
        for _ in 0..150 {
            let depth = rng.gen_range(0..4);
            let text = expr(&mut rng, &sys, depth);
            if matches!(*sys, System::Rotation { .. }) {
                let a = parse_elem::<Float>(&text, &sys).unwrap_or_else(|e| panic!("{text:?}: {e}"));
                let back = parse_elem::<Float>(&a.render(), &sys).unwrap();
                assert!(back.approx_eq(&a, 1e-9 * (1.0 + a.norm())), "{text:?}");
            } else {
                let a = parse_elem::<Exact>(&text, &sys).unwrap_or_else(|e| panic!("{text:?}: {e}"));
                assert_eq!(parse_elem::<Exact>(&a.render(), &sys), Ok(a), "{text:?}");
            }
        }
    }
}

#[test]
fn diagnostics_always_carry_a_position() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let sys = Arc::new(System::cycle(3));
    for _ in 0..1000 {
        let text = random_text(&mut rng);
        if let Err(e) = parse_elem::<Exact>(&text, &sys) {
            assert!(e.line >= 1 && e.col >= 1, "{text:?}: {e}");
            let lines: Vec<&str> = text.split('\n').collect();
            assert!(e.line <= lines.len(), "{text:?}: {e}");
            assert!(e.col <= lines[e.line - 1].chars().count() + 1, "{text:?}: {e}");
        }
    }
}

#[test]
fn random_command_lines_never_crash() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cmds = ["eval", "member", "zeros", "hull", "behaviour", "norm", "rep", "transform", "isynth", "kernel"];
    let flags = ["--elem", "--ideal", "--set", "--torus", "--point", "--lambda", "--system", "--tol", "--format"];
    for _ in 0..300 {
        let mut argv = vec!["crossprod".to_string(), cmds[rng.gen_range(0..cmds.len())].to_string()];
        argv.push("--system".into());
        argv.push(["kind = finite; sigma = [1, 0, 2]", "kind = shift", "kind = rotation; theta = golden"][rng.gen_range(0..3)].into());
        for _ in 0..rng.gen_range(0..4) {
            argv.push(flags[rng.gen_range(0..flags.len())].into());
            argv.push(random_text(&mut rng));
        }
        let out = crossprod_cli::run(argv);
        assert!((0..=4).contains(&out.code));
    }
}
