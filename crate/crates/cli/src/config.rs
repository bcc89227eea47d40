//! System configuration files.
//!
//! One `key = value` per line (or separated by `;`), `#` comments, and nested
//! `system { ... }` blocks for the parts of a union. See the README for the grammar.

use std::fmt::Write as _;

use crossprod::{NumericMode, System, Theta};

use crate::cursor::{Cursor, PResult, ParseError};

#[derive(Clone, Debug, PartialEq)]
pub struct SystemConfig {
    pub system: System,
    pub mode: NumericMode,
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
enum Value {
    Word(String),
    Num(String),
    List(Vec<(Value, usize)>),
    Surd(Vec<i64>),
}

#[derive(Debug, Default)]
struct Block {
    entries: Vec<(String, Value, usize)>,
    blocks: Vec<(Block, usize)>,
}

fn number(cur: &mut Cursor) -> Option<String> {
    cur.ws();
    let start = cur.pos;
    let mut s = String::new();
    if let Some(c @ ('-' | '+')) = cur.peek() {
        s.push(c);
        cur.bump();
    }
    match cur.digits() {
        Some(d) => s.push_str(&d),
        None => {
            cur.pos = start;
            cur.expect_note("number");
            return None;
        }
    }
    if cur.peek() == Some('.') && cur.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
        cur.bump();
        s.push('.');
        s.push_str(&cur.digits().unwrap_or_default());
    }
    if matches!(cur.peek(), Some('e' | 'E')) {
        let save = cur.pos;
        cur.bump();
        let mut e = String::from("e");
        if let Some(c @ ('-' | '+')) = cur.peek() {
            e.push(c);
            cur.bump();
        }
        match cur.digits() {
            Some(d) => {
                s.push_str(&e);
                s.push_str(&d);
            }
            None => cur.pos = save,
        }
    }
    Some(s)
}

fn value(cur: &mut Cursor) -> PResult<Value> {
    if cur.eat('[') {
        let mut items = Vec::new();
        if !cur.eat(']') {
            loop {
                cur.ws();
                let pos = cur.pos;
                items.push((value(cur)?, pos));
                if cur.eat(']') {
                    break;
                }
                cur.expect(',')?;
            }
        }
        return Ok(Value::List(items));
    }
    if let Some(n) = number(cur) {
        return Ok(Value::Num(n));
    }
    let w = cur.ident("value")?;
    if w == "surd" {
        cur.expect('[')?;
        let mut parts = Vec::new();
        loop {
            cur.ws();
            let pos = cur.pos;
            let n = number(cur).ok_or_else(|| cur.syntax_error())?;
            parts.push(n.parse::<i64>().map_err(|_| cur.error_at(pos, "surd entries are integers"))?);
            if cur.eat(']') {
                break;
            }
            cur.expect(',')?;
        }
        return Ok(Value::Surd(parts));
    }
    Ok(Value::Word(w))
}

fn block(cur: &mut Cursor, nested: bool) -> PResult<Block> {
    let mut b = Block::default();
    loop {
        cur.ws();
        while matches!(cur.peek(), Some('\n' | ';')) {
            cur.bump();
            cur.ws();
        }
        match cur.peek() {
            None if !nested => return Ok(b),
            Some('}') if nested => return Ok(b),
            _ => {}
        }
        let pos = cur.pos;
        let key = cur.ident(if nested { "key or '}'" } else { "key" })?;
        if key == "system" {
            cur.expect('{')?;
            let inner = block(cur, true)?;
            cur.expect('}')?;
            b.blocks.push((inner, pos));
        } else {
            cur.expect('=')?;
            let v = value(cur)?;
            b.entries.push((key, v, pos));
        }
        cur.ws();
        match cur.peek() {
            Some('\n' | ';') | None => {}
            Some('}') if nested => {}
            _ => {
                cur.expect_note("newline");
                cur.expect_note("';'");
                return Err(cur.syntax_error());
            }
        }
    }
}

fn as_int(cur: &Cursor, v: &Value, pos: usize, what: &str) -> PResult<i64> {
    match v {
        Value::Num(n) => n.parse().map_err(|_| cur.error_at(pos, format!("{what} must be an integer"))),
        _ => Err(cur.error_at(pos, format!("{what} must be an integer"))),
    }
}

fn as_bool(cur: &Cursor, v: &Value, pos: usize, what: &str) -> PResult<bool> {
    match v {
        Value::Word(w) if w == "true" => Ok(true),
        Value::Word(w) if w == "false" => Ok(false),
        _ => Err(cur.error_at(pos, format!("{what} must be true or false"))),
    }
}

fn build_system(cur: &Cursor, b: &Block, pos: usize, allow_top: bool) -> PResult<System> {
    let mut kind = None;
    let (mut points, mut sigma, mut theta, mut irrational) = (None, None, None, None);
    let mut seen: Vec<&str> = Vec::new();
    for (k, v, p) in &b.entries {
        if seen.contains(&k.as_str()) {
            return Err(cur.error_at(*p, format!("duplicate key '{k}'")));
        }
        seen.push(k);
        match k.as_str() {
            "mode" | "tolerance" if allow_top => {}
            "kind" => match v {
                Value::Word(w) if ["finite", "shift", "rotation", "union"].contains(&w.as_str()) => {
                    kind = Some((w.clone(), *p))
                }
                _ => return Err(cur.error_at(*p, "kind must be one of finite, shift, rotation, union")),
            },
            "points" => {
                let n = as_int(cur, v, *p, "points")?;
                if n <= 0 {
                    return Err(cur.error_at(*p, "points must be positive"));
                }
                points = Some((n as usize, *p));
            }
            "sigma" => {
                let Value::List(items) = v else {
                    return Err(cur.error_at(*p, "sigma must be a list of point indices"));
                };
                let mut out = Vec::with_capacity(items.len());
                for (it, ip) in items {
                    let n = as_int(cur, it, *ip, "sigma entry")?;
                    if n < 0 {
                        return Err(cur.error_at(*ip, "sigma entries are nonnegative"));
                    }
                    out.push(n as usize);
                }
                sigma = Some((out, *p));
            }
            "theta" => {
                theta = Some((
                    match v {
                        Value::Surd(parts) => match parts.as_slice() {
                            [p_, q, r] => Theta::Surd { p: *p_, q: *q, r: *r, d: 1 },
                            [p_, q, r, d] => Theta::Surd { p: *p_, q: *q, r: *r, d: *d },
                            _ => return Err(cur.error_at(*p, "surd takes [p, q, r] or [p, q, r, d]")),
                        },
                        Value::Word(w) if w == "golden" => Theta::GOLDEN,
                        Value::Num(n) => Theta::Decimal(
                            n.parse().map_err(|_| cur.error_at(*p, "theta must be a number"))?,
                        ),
                        _ => return Err(cur.error_at(*p, "theta must be surd[p, q, r, d], golden or a decimal")),
                    },
                    *p,
                ))
            }
            "irrational" => irrational = Some(as_bool(cur, v, *p, "irrational")?),
            _ => return Err(cur.error_at(*p, format!("unknown key '{k}'"))),
        }
    }
    let Some((kind, kpos)) = kind else {
        return Err(cur.error_at(pos, "missing key 'kind'"));
    };
    let stray = |name: &str, present: bool, p: usize| -> PResult<()> {
        if present {
            Err(cur.error_at(p, format!("key '{name}' does not apply to a {kind} system")))
        } else {
            Ok(())
        }
    };
    if kind != "finite" {
        stray("points", points.is_some(), points.map_or(0, |p| p.1))?;
        stray("sigma", sigma.is_some(), sigma.as_ref().map_or(0, |s| s.1))?;
    }
    if kind != "rotation" {
        stray("theta", theta.is_some(), theta.map_or(0, |t| t.1))?;
        stray("irrational", irrational.is_some(), kpos)?;
    }
    if kind != "union" && !b.blocks.is_empty() {
        return Err(cur.error_at(b.blocks[0].1, format!("a {kind} system has no nested systems")));
    }
    let invalid = |e: crossprod::Error| cur.error_at(kpos, e.to_string());
    match kind.as_str() {
        "finite" => {
            let Some((sigma, spos)) = sigma else {
                return Err(cur.error_at(kpos, "a finite system needs sigma"));
            };
            if let Some((n, p)) = points {
                if n != sigma.len() {
                    return Err(cur.error_at(p, format!("points = {n} but sigma has {} entries", sigma.len())));
                }
            }
            System::finite(sigma).map_err(|e| cur.error_at(spos, e.to_string()))
        }
        "shift" => Ok(System::Shift),
        "rotation" => {
            let Some((theta, _)) = theta else {
                return Err(cur.error_at(kpos, "a rotation needs theta"));
            };
            let irr = irrational.unwrap_or(theta.rational().is_none());
            System::rotation(theta, irr).map_err(invalid)
        }
        _ => {
            if b.blocks.is_empty() {
                return Err(cur.error_at(kpos, "a union needs at least one nested system block"));
            }
            let parts = b
                .blocks
                .iter()
                .map(|(inner, p)| build_system(cur, inner, *p, false))
                .collect::<PResult<Vec<_>>>()?;
            System::union(parts).map_err(invalid)
        }
    }
}

fn has_decimal_theta(sys: &System) -> bool {
    match sys {
        System::Rotation { theta: Theta::Decimal(_), .. } => true,
        System::Union(parts) => parts.iter().any(has_decimal_theta),
        _ => false,
    }
}

fn has_rotation(sys: &System) -> bool {
    match sys {
        System::Rotation { .. } => true,
        System::Union(parts) => parts.iter().any(has_rotation),
        _ => false,
    }
}

pub fn parse_config(text: &str) -> PResult<SystemConfig> {
    let mut cur = Cursor::new(text).line_mode();
    let b = block(&mut cur, false)?;
    let system = build_system(&cur, &b, 0, true)?;
    let mut mode = None;
    let mut tolerance = None;
    for (k, v, p) in &b.entries {
        match (k.as_str(), v) {
            ("mode", Value::Word(w)) if w == "exact" => mode = Some((NumericMode::Exact, *p)),
            ("mode", Value::Word(w)) if w == "float" => mode = Some((NumericMode::Float, *p)),
            ("mode", _) => return Err(cur.error_at(*p, "mode must be exact or float")),
            ("tolerance", Value::Num(n)) => {
                let t: f64 = n.parse().map_err(|_| cur.error_at(*p, "tolerance must be a number"))?;
                if !(t >= 0.0 && t.is_finite()) {
                    return Err(cur.error_at(*p, "tolerance must be nonnegative"));
                }
                tolerance = Some(t);
            }
            ("tolerance", _) => return Err(cur.error_at(*p, "tolerance must be a number")),
            _ => {}
        }
    }
    let mode = match mode {
        Some((NumericMode::Exact, p)) if has_decimal_theta(&system) => {
            return Err(cur.error_at(p, "exact mode is not available with a decimal theta"))
        }
        Some((m, _)) => m,
        None if has_rotation(&system) => NumericMode::Float,
        None => NumericMode::Exact,
    };
    Ok(SystemConfig { system, mode, tolerance })
}

fn render_system(out: &mut String, sys: &System, indent: usize) {
    let pad = " ".repeat(indent);
    match sys {
        System::Finite { sigma } => {
            let list = sigma.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ");
            let _ = writeln!(out, "{pad}kind = finite\n{pad}points = {}\n{pad}sigma = [{list}]", sigma.len());
        }
        System::Shift => {
            let _ = writeln!(out, "{pad}kind = shift");
        }
        System::Rotation { theta, irrational } => {
            let t = match theta {
                Theta::Surd { p, q, r, d } => format!("surd[{p}, {q}, {r}, {d}]"),
                Theta::Decimal(t) => format!("{t:?}"),
            };
            let _ = writeln!(out, "{pad}kind = rotation\n{pad}theta = {t}\n{pad}irrational = {irrational}");
        }
        System::Union(parts) => {
            let _ = writeln!(out, "{pad}kind = union");
            for p in parts {
                let _ = writeln!(out, "{pad}system {{");
                render_system(out, p, indent + 2);
                let _ = writeln!(out, "{pad}}}");
            }
        }
    }
}

impl SystemConfig {
    /// Canonical text; parses back to an equal config.
    pub fn render(&self) -> String {
        let mut out = format!("mode = {}\n", self.mode.name());
        if let Some(t) = self.tolerance {
            let _ = writeln!(out, "tolerance = {t:e}");
        }
        render_system(&mut out, &self.system, 0);
        out
    }
}

impl From<ParseError> for crate::CliError {
    fn from(e: ParseError) -> Self {
        crate::CliError::Parse(e.to_string())
    }
}
