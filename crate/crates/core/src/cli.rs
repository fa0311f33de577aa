//! Curve parsing, pipeline orchestration and report rendering.

use crate::cartier::{cartier_manin_matrix, invariants};
use crate::conductor::conductor;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::forms::{differential_basis_with, validate_input, CurveInput, Transform};
use crate::normalize::{normalize, DEFAULT_LOOP_CAP};
use crate::poly::{Polynomial, Ring};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::sync::Arc;

/// Exponents above this are rejected by the parser.
pub const MAX_EXPONENT: u32 = 1000;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: Arc<Ring>,
}

impl Parser<'_> {
    fn err(&self, pos: usize, msg: impl Into<String>) -> Error {
        Error::Parse { pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = {
            self.skip_ws();
            self.pos
        };
        let e = self.exponent()?;
        if e > MAX_EXPONENT {
            return Err(self.err(at, format!("exponent {e} exceeds {MAX_EXPONENT}")));
        }
        Ok(base.pow(e as u64))
    }

    fn exponent(&mut self) -> Result<u32> {
        let start = self.pos;
        let mut e: u64 = 0;
        while let Some(d) = self.src.get(self.pos).filter(|c| c.is_ascii_digit()) {
            e = (e * 10 + (d - b'0') as u64).min(u32::MAX as u64);
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err(start, "expected a non-negative integer exponent"));
        }
        Ok(e as u32)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let k = self.ring.field;
        let at = self.pos;
        match self.peek() {
            None => Err(self.err(self.src.len(), "unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err(self.pos, "expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'x' | b'X') => {
                self.pos += 1;
                Ok(Polynomial::var(&self.ring, 0))
            }
            Some(b'y' | b'Y') => {
                self.pos += 1;
                Ok(Polynomial::var(&self.ring, 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let p = k.p() as u64;
                let mut v: u64 = 0;
                while let Some(d) = self.src.get(self.pos).filter(|c| c.is_ascii_digit()) {
                    v = (v * 10 + (d - b'0') as u64) % p;
                    self.pos += 1;
                }
                Ok(Polynomial::constant(&self.ring, v as i64))
            }
            Some(_) => {
                let pos = self.pos.max(at);
                let ch = String::from_utf8_lossy(&self.src[pos..]).chars().next().unwrap_or('?');
                Err(self.err(pos, format!("unexpected character '{ch}'")))
            }
        }
    }
}

/// Parses a curve equation over F_p in the variables x, y (or X, Y).
///
/// Positions in errors are byte offsets into `text`.
pub fn parse_curve(text: &str, p: u64) -> Result<Polynomial> {
    let k = PrimeField::new(p)?;
    let mut parser = Parser { src: text.as_bytes(), pos: 0, ring: Ring::plane(k) };
    let f = parser.expr()?;
    if let Some(c) = parser.peek() {
        let msg = if c == b')' { "unbalanced ')'".to_string() } else { format!("unexpected '{}'", c as char) };
        return Err(parser.err(parser.pos, msg));
    }
    if f.is_zero() {
        return Err(Error::Validation("curve is the zero polynomial".into()));
    }
    Ok(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Normalize,
    Conductor,
    Forms,
    Cartier,
    Invariants,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Normalize => "normalize",
            Command::Conductor => "conductor",
            Command::Forms => "forms",
            Command::Cartier => "cartier",
            Command::Invariants => "invariants",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSpec {
    pub p: u64,
    pub equation: String,
    pub loop_cap: usize,
    pub show_transform: bool,
}

impl CurveSpec {
    pub fn new(p: u64, equation: impl Into<String>) -> Self {
        CurveSpec { p, equation: equation.into(), loop_cap: DEFAULT_LOOP_CAP, show_transform: false }
    }
}

/// Contents of an `--input` file.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub p: u64,
    pub curve: String,
    #[serde(default)]
    pub loop_cap: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransformReport {
    #[serde(flatten)]
    pub transform: Transform,
    /// The curve in the new coordinates.
    pub model: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionReport {
    pub test_ideal: Vec<String>,
    pub nonzerodivisor: String,
    pub colon_generators: Vec<String>,
    pub new_variables: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub variables: Vec<String>,
    pub generators: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionReport>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Body {
    Normalize {
        loops: usize,
        levels: Vec<LevelReport>,
    },
    Conductor {
        closure_basis: Vec<String>,
        trace_matrix: Vec<Vec<String>>,
        conductor: Vec<String>,
    },
    Forms {
        genus: usize,
        numerators: Vec<String>,
        denominator: String,
        used_infinity_chart: bool,
    },
    Cartier {
        genus: usize,
        numerators: Vec<String>,
        denominator: String,
        matrix: Vec<Vec<u32>>,
    },
    Invariants {
        genus: usize,
        a_number: usize,
        p_rank: usize,
        superspecial: bool,
        matrix: Vec<Vec<u32>>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: &'static str,
    pub p: u64,
    pub curve: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transform: Option<TransformReport>,
    #[serde(flatten)]
    pub body: Body,
}

fn render_all(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.render()).collect()
}

fn normalize_body(input: &CurveInput, loop_cap: usize) -> Result<Body> {
    let tower = normalize(&input.f, loop_cap)?;
    let levels = tower
        .levels
        .iter()
        .map(|lv| LevelReport {
            variables: lv.ring.vars.clone(),
            generators: render_all(&lv.gens),
            extension: lv.extension.as_ref().map(|e| ExtensionReport {
                test_ideal: render_all(&e.test_ideal),
                nonzerodivisor: e.a.render(),
                colon_generators: render_all(&e.u),
                new_variables: e.new_vars.clone(),
            }),
        })
        .collect();
    Ok(Body::Normalize { loops: tower.loops(), levels })
}

fn conductor_body(input: &CurveInput, loop_cap: usize) -> Result<Body> {
    let tower = normalize(&input.f, loop_cap)?;
    let (basis, cond) = conductor(&tower, input.n as usize)?;
    Ok(Body::Conductor {
        closure_basis: render_all(&basis.w),
        trace_matrix: cond
            .dual
            .trace_matrix
            .iter()
            .map(|row| row.iter().map(|u| u.render("x")).collect())
            .collect(),
        conductor: render_all(&cond.generators),
    })
}

/// Runs the pipeline up to `command`.
pub fn run(spec: &CurveSpec, command: Command) -> Result<Report> {
    let f0 = parse_curve(&spec.equation, spec.p)?;
    let input = validate_input(&f0)?;
    let body = match command {
        Command::Normalize => normalize_body(&input, spec.loop_cap)?,
        Command::Conductor => conductor_body(&input, spec.loop_cap)?,
        Command::Forms | Command::Cartier | Command::Invariants => {
            let b = differential_basis_with(&f0, spec.loop_cap)?;
            match command {
                Command::Forms => Body::Forms {
                    genus: b.genus,
                    numerators: render_all(&b.numerators),
                    denominator: b.denominator.render(),
                    used_infinity_chart: b.used_infinity_chart,
                },
                Command::Cartier => Body::Cartier {
                    genus: b.genus,
                    numerators: render_all(&b.numerators),
                    denominator: b.denominator.render(),
                    matrix: cartier_manin_matrix(&b)?.entries,
                },
                _ => {
                    let m = cartier_manin_matrix(&b)?;
                    let inv = invariants(&m)?;
                    Body::Invariants {
                        genus: inv.genus,
                        a_number: inv.a_number,
                        p_rank: inv.p_rank,
                        superspecial: inv.superspecial,
                        matrix: m.entries,
                    }
                }
            }
        }
    };
    Ok(Report {
        schema: 1,
        command: command.name(),
        p: spec.p,
        curve: f0.render(),
        transform: spec.show_transform.then(|| TransformReport {
            transform: input.transform,
            model: input.f.render(),
        }),
        body,
    })
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned `key  value` lines; lists continue on indented lines.
    pub fn to_text(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        write_text(&v, 0, &mut out);
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Null => Some("-".into()),
        _ => None,
    }
}

fn lines_of(v: &Value) -> Vec<String> {
    match v {
        Value::Array(items) if items.is_empty() => vec!["(none)".into()],
        Value::Array(items) => items
            .iter()
            .map(|it| match it {
                Value::Array(row) => {
                    let cells: Vec<String> = row.iter().filter_map(scalar).collect();
                    format!("[{}]", cells.join(" "))
                }
                other => scalar(other).unwrap_or_default(),
            })
            .collect(),
        other => vec![scalar(other).unwrap_or_default()],
    }
}

fn write_text(v: &Value, indent: usize, out: &mut String) {
    let Value::Object(map) = v else {
        return;
    };
    let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
    let pad = " ".repeat(indent);
    for (key, val) in map {
        let nested = match val {
            Value::Object(_) => true,
            Value::Array(items) => items.iter().any(|i| i.is_object()),
            _ => false,
        };
        if nested {
            out.push_str(&format!("{pad}{key}:\n"));
            match val {
                Value::Array(items) => {
                    for (i, it) in items.iter().enumerate() {
                        out.push_str(&format!("{pad}  [{i}]\n"));
                        write_text(it, indent + 4, out);
                    }
                }
                _ => write_text(val, indent + 2, out),
            }
            continue;
        }
        let lines = lines_of(val);
        out.push_str(&format!("{pad}{key:<width$}  {}\n", lines[0]));
        for l in &lines[1..] {
            out.push_str(&format!("{pad}{:width$}  {l}\n", ""));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::plane_poly;
    use proptest::prelude::*;

    fn k(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn parses_the_documented_inputs() {
        let f = parse_curve("x^5+y^5+x*y", 11).unwrap();
        assert_eq!(f, plane_poly(k(11), &[(&[5, 0], 1), (&[0, 5], 1), (&[1, 1], 1)]));
        let f = parse_curve("y^7-x^2*(x-1)^2", 2).unwrap();
        assert_eq!(f, plane_poly(k(2), &[(&[0, 7], 1), (&[4, 0], 1), (&[2, 0], 1)]));
        assert_eq!(parse_curve("(x+y)^2", 2).unwrap(), plane_poly(k(2), &[(&[2, 0], 1), (&[0, 2], 1)]));
        assert_eq!(parse_curve(" X ^ 2 -  3 * Y ", 5).unwrap(), parse_curve("x^2+2*y", 5).unwrap());
        assert_eq!(parse_curve("-x + 25*y", 7).unwrap(), plane_poly(k(7), &[(&[1, 0], 6), (&[0, 1], 4)]));
    }

    #[test]
    fn reports_error_positions() {
        let e = parse_curve("x^2 + * y", 5).unwrap_err();
        assert_eq!(e, Error::Parse { pos: 6, msg: "unexpected character '*'".into() });
        assert!(matches!(parse_curve("(x+y", 5), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_curve("x+y)", 5), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_curve("x^y", 5), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_curve("z", 5), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_curve("", 5), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_curve("x", 9), Err(Error::Parse { .. })));
        assert!(matches!(parse_curve("x - x", 5), Err(Error::Validation(_))));
        assert_eq!(parse_curve("x^2+(", 5).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn forms_report_for_the_quintic() {
        let r = run(&CurveSpec::new(11, "x^5+y^5+x*y"), Command::Forms).unwrap();
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["genus"], 5);
        assert_eq!(v["numerators"], serde_json::json!(["x^2", "x*y", "y^2", "x", "y"]));
        assert!(v.get("transform").is_none());
        let text = r.to_text();
        assert!(text.contains("genus"));
        assert!(text.lines().any(|l| l.trim() == "x*y"));
    }

    #[test]
    fn normalize_report_lists_the_first_extension() {
        let r = run(&CurveSpec::new(11, "x^5+y^5+x*y"), Command::Normalize).unwrap();
        let Body::Normalize { loops, levels } = &r.body else { panic!() };
        assert_eq!(*loops, 2);
        assert_eq!(levels[1].generators.len(), 4);
        let e = levels[1].extension.as_ref().unwrap();
        assert_eq!(e.colon_generators, vec!["y", "x^4"]);
    }

    #[test]
    fn invariants_and_transform() {
        let mut spec = CurveSpec::new(2, "x^5+y^5+(x+y)^3+x*y");
        spec.show_transform = true;
        let r = run(&spec, Command::Invariants).unwrap();
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["a_number"], 1);
        assert_eq!(v["matrix"], serde_json::json!([[0, 0, 1], [0, 0, 0], [1, 0, 0]]));
        assert_eq!(v["transform"]["swap"], false);
        assert_eq!(r.to_json(), run(&spec, Command::Invariants).unwrap().to_json());
    }

    #[test]
    fn pipeline_errors_keep_their_class() {
        let e = run(&CurveSpec::new(5, "x^2"), Command::Forms).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run(&CurveSpec::new(3, "x^3 + y^3"), Command::Forms).unwrap_err();
        assert_eq!((e.exit_code(), e.module()), (3, "forms"));
    }

    fn arb_poly() -> impl Strategy<Value = (u64, Vec<(u32, u32, i64)>)> {
        prop::sample::select(vec![2u64, 3, 5, 11])
            .prop_flat_map(|p| (Just(p), proptest::collection::vec((0..6u32, 0..6u32, 0..p as i64), 1..8)))
    }

    proptest! {
        #[test]
        fn render_round_trips((p, terms) in arb_poly()) {
            let ring = Ring::plane(k(p));
            let mut f = Polynomial::zero(&ring);
            for (i, j, c) in terms {
                f = &f + &Polynomial::from_exponents(&ring, &[(&[i, j], c)]);
            }
            prop_assume!(!f.is_zero());
            prop_assert_eq!(parse_curve(&f.render(), p).unwrap(), f);
        }
    }
}
