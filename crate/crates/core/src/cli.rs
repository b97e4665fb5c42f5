//! Command-line front end: argument parsing, dispatch and output.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::complex::Complex64;
use num::{BigInt, BigRational, Zero};
use serde_json::{json, Map, Value};

use crate::bernoulli::Coeff;
use crate::error::{Error, Result};
use crate::mpoly::{check_mahler, parse_poly, rat_to_f64, MultiPoly, DEFAULT_MAHLER_DENSITY};
use crate::series::{self, Kind};
use crate::values::{self, Params, ProductRuleReport, Settings, SpecialValue};

#[derive(Parser, Debug)]
#[command(name = "zetaspec", version, about = "Special values of polynomial zeta series and zeta integrals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Gauss–Legendre nodes per axis.
    #[arg(long, global = true, default_value_t = crate::cubical::DEFAULT_ORDER, value_parser = clap::value_parser!(usize))]
    pub order: usize,
    /// Accept polynomials whose positivity is sampled but not proven.
    #[arg(long, global = true)]
    pub assume_mahler: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct PolyArgs {
    /// Number of variables.
    #[arg(short = 'p', value_parser = clap::value_parser!(u32).range(1..=9))]
    pub vars: u32,
    /// The polynomial f.
    #[arg(short = 'f', allow_hyphen_values = true)]
    pub f: String,
    /// The weight polynomial g.
    #[arg(short = 'g', default_value = "1", allow_hyphen_values = true)]
    pub g: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// ζ(-N; f, g) by Bernoulli substitution.
    Zeta {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(short = 'N')]
        n: u32,
    },
    /// Z(-N; f, g); at N = 0 cross-checked against the logarithmic form.
    Zint {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(short = 'N')]
        n: u32,
    },
    /// Z(s; f, g) for general complex s (e.g. `3`, `1/2`, `0.3+1.7i`).
    Zgen {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(short = 's', allow_hyphen_values = true)]
        s: String,
    },
    /// Coefficients of the shift polynomial a ↦ Z(-N; f_a, g_a).
    Shiftpoly {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(short = 'N')]
        n: u32,
        #[arg(long, value_enum, default_value_t = KindArg::Integral)]
        kind: KindArg,
    },
    /// Pole candidates s0 = (q + p - ℓ)/m for ℓ ≤ ell-max.
    Poles {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        ell_max: usize,
    },
    /// Residue of Z(s; f, g) at a rational pole candidate.
    Residue {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(short = 's', allow_hyphen_values = true)]
        s: String,
    },
    /// Numerical identity checks.
    #[command(subcommand)]
    Verify(Verify),
    /// Checks positivity of f and its top part on the octant.
    CheckMahler {
        #[arg(short = 'p', value_parser = clap::value_parser!(u32).range(1..=9))]
        vars: u32,
        #[arg(short = 'f', allow_hyphen_values = true)]
        f: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// deg(Π f_j)·V(Π f_j) = Σ deg(f_j)·V(f_j) at s = 0.
    ProductRule {
        #[arg(short = 'p', value_parser = clap::value_parser!(u32).range(1..=9))]
        vars: u32,
        /// A factor; repeat for each factor.
        #[arg(short = 'f', required = true, allow_hyphen_values = true)]
        factors: Vec<String>,
        #[arg(short = 'g', default_value = "1", allow_hyphen_values = true)]
        g: String,
    },
    /// Z(s; f, g) against the average of shifted direct sums.
    Raabe {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(short = 's', allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Integral,
    Series,
}

/// A parsed argument that is not a polynomial.
#[derive(Debug)]
struct UsageError(String);

enum Failure {
    Usage(UsageError),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

/// Parses `a`, `a/b`, decimals, and `x+yi` / `yi` complex forms.
pub fn parse_complex(text: &str) -> std::result::Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty value".into());
    }
    if let Some(body) = t.strip_suffix('i') {
        // split at the last sign that is not an exponent sign or leading
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(i) => (parse_real(&body[..i])?, &body[i..]),
            None => (0.0, body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => parse_real(other)?,
        };
        return Ok(Complex64::new(re, im));
    }
    Ok(Complex64::new(parse_real(&t)?, 0.0))
}

fn parse_real(t: &str) -> std::result::Result<f64, String> {
    if let Some(r) = parse_rational_opt(t) {
        return Ok(rat_to_f64(&r));
    }
    t.parse::<f64>().map_err(|_| format!("cannot parse number '{t}'"))
}

fn parse_rational_opt(t: &str) -> Option<BigRational> {
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n, d),
        None => (t, "1"),
    };
    let n: BigInt = n.trim_start_matches('+').parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Exact rational from an integer, fraction or finite decimal.
pub fn parse_rational(text: &str) -> std::result::Result<BigRational, String> {
    let t = text.trim();
    if let Some(r) = parse_rational_opt(t) {
        return Ok(r);
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t.trim_start_matches('+')),
    };
    if let Some((int_part, frac)) = body.split_once('.') {
        if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) || body.len() == 1 {
            return Err(format!("cannot parse rational '{text}'"));
        }
        let digits: BigInt = format!("{int_part}{frac}").parse().map_err(|_| format!("cannot parse rational '{text}'"))?;
        let r = BigRational::new(digits, num::pow(BigInt::from(10), frac.len()));
        return Ok(if neg { -r } else { r });
    }
    Err(format!("cannot parse rational '{text}'"))
}

/// Smallest-denominator `a/b` with `b ≤ 1000` within `1e-9` of `x`.
pub fn rational_suggestion(x: f64) -> Option<String> {
    if !x.is_finite() {
        return None;
    }
    (1..=1000i64).find_map(|d| {
        let n = (x * d as f64).round();
        ((x - n / d as f64).abs() < 1e-9).then(|| {
            let n = n as i64;
            if d == 1 {
                format!("{n}")
            } else {
                format!("{n}/{d}")
            }
        })
    })
}

struct Output {
    command: String,
    value: Option<Complex64>,
    error_estimate: Option<f64>,
    method: Option<&'static str>,
    params: Map<String, Value>,
    warnings: Vec<String>,
    /// Command-specific structured result.
    result: Option<Value>,
    /// Human-readable lines for text output.
    lines: Vec<String>,
}

impl Output {
    fn new(command: &str, params: Map<String, Value>) -> Self {
        Output {
            command: command.to_string(),
            value: None,
            error_estimate: None,
            method: None,
            params,
            warnings: Vec::new(),
            result: None,
            lines: Vec::new(),
        }
    }

    fn with_value(mut self, v: &SpecialValue) -> Self {
        self.value = Some(v.value);
        self.error_estimate = Some(v.error_estimate);
        self.method = Some(v.method.tag());
        merge_params(&mut self.params, &v.params);
        self
    }

    fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("command".into(), json!(self.command));
        obj.insert(
            "value".into(),
            match self.value {
                Some(z) => json!({"re": z.re, "im": z.im}),
                None => Value::Null,
            },
        );
        obj.insert("error_estimate".into(), json!(self.error_estimate));
        obj.insert("method".into(), json!(self.method));
        obj.insert("params".into(), Value::Object(self.params.clone()));
        obj.insert("warnings".into(), json!(self.warnings));
        if let Some(z) = self.value {
            if z.im == 0.0 {
                if let Some(s) = rational_suggestion(z.re) {
                    obj.insert("suggested_rational".into(), json!(s));
                }
            }
        }
        if let Some(r) = &self.result {
            obj.insert("result".into(), r.clone());
        }
        Value::Object(obj)
    }

    fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(z) = self.value {
            let err = self.error_estimate.unwrap_or(0.0);
            if z.im == 0.0 {
                out.push_str(&format!("value: {} (± {:.1e})\n", z.re, err));
                if let Some(s) = rational_suggestion(z.re) {
                    out.push_str(&format!("suggested rational: {s} (nearby, not proven)\n"));
                }
            } else {
                out.push_str(&format!("value: {} {} {}i (± {:.1e})\n", z.re, if z.im < 0.0 { "-" } else { "+" }, z.im.abs(), err));
            }
        }
        if let Some(m) = self.method {
            out.push_str(&format!("method: {m}\n"));
        }
        for line in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        if !self.params.is_empty() {
            let parts: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!("params: {}\n", parts.join(" ")));
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

fn merge_params(map: &mut Map<String, Value>, params: &Params) {
    if let Value::Object(extra) = serde_json::to_value(params).expect("params serialize") {
        for (k, v) in extra {
            map.entry(k).or_insert(v);
        }
    }
}

fn poly_params(poly: &PolyArgs, order: usize) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("p".into(), json!(poly.vars));
    m.insert("f".into(), json!(poly.f));
    m.insert("g".into(), json!(poly.g));
    m.insert("order".into(), json!(order));
    m
}

fn parse_pair(poly: &PolyArgs) -> Result<(MultiPoly, MultiPoly)> {
    let p = poly.vars as usize;
    Ok((parse_poly(&poly.f, p)?, parse_poly(&poly.g, p)?))
}

fn estimate_json(e: &crate::cubical::Estimate) -> Value {
    json!({"value": e.value, "error": e.error})
}

fn product_rule_json(r: &ProductRuleReport) -> Value {
    json!({
        "lhs": estimate_json(&r.lhs),
        "rhs": estimate_json(&r.rhs),
        "product_value": estimate_json(&r.product_value),
        "factor_values": r.factor_values.iter().map(estimate_json).collect::<Vec<_>>(),
        "discrepancy": r.discrepancy,
        "combined_error": r.combined_error,
        "consistent": r.consistent,
    })
}

fn coeff_json(c: &Coeff) -> Value {
    match c {
        Coeff::Exact(r) => json!({"value": rat_to_f64(r), "error": 0.0, "exact": r.to_string()}),
        Coeff::Approx { value, error } => json!({"value": value, "error": error}),
    }
}

fn dispatch(cli: &Cli) -> std::result::Result<Output, Failure> {
    let mut settings = Settings::new(cli.order);
    settings.assume_mahler = cli.assume_mahler;
    match &cli.command {
        Command::Zeta { poly, n } => {
            let (f, g) = parse_pair(poly)?;
            let (v, shift) = series::zeta_special_report(&f, &g, *n, &settings)?;
            let mut out = Output::new("zeta", poly_params(poly, cli.order)).with_value(&v);
            out.params.insert("shift_residual".into(), json!(shift.residual));
            out.params.insert("dropped_mass".into(), json!(shift.dropped_mass));
            if shift.flagged {
                out.warnings.push(format!("coefficients beyond the degree bound reach {:e}", shift.dropped_mass));
            }
            Ok(out)
        }
        Command::Zint { poly, n } => {
            let (f, g) = parse_pair(poly)?;
            let v = values::z_special(&f, &g, *n, &settings)?;
            let mut out = Output::new("zint", poly_params(poly, cli.order)).with_value(&v);
            if *n == 0 {
                let log = values::z_zero_log(&f, &g, &settings)?;
                let gap = (log.value - v.value).norm();
                out.lines.push(format!("log-form cross-check: {} (difference {:.1e})", log.value.re, gap));
                out.params.insert("log_form_value".into(), json!(log.value.re));
                if gap > 10.0 * (log.error_estimate + v.error_estimate) + 1e-12 {
                    out.warnings.push(format!("log-form value differs by {gap:e}"));
                }
            }
            Ok(out)
        }
        Command::Zgen { poly, s } => {
            let (f, g) = parse_pair(poly)?;
            let s = parse_complex(s).map_err(|e| Failure::Usage(UsageError(e)))?;
            let (v, b) = values::z_general(&f, &g, s, &settings)?;
            let mut out = Output::new("zgen", poly_params(poly, cli.order)).with_value(&v);
            out.result = Some(json!({
                "z1": {"re": b.z1.re, "im": b.z1.im},
                "nk": {"re": b.nk.re, "im": b.nk.im},
                "m_terms": b.m_terms.iter().map(|t| json!({
                    "lambda": t.lambda,
                    "m": t.m_value.map(|z| json!({"re": z.re, "im": z.im})),
                    "weighted": {"re": t.weighted.re, "im": t.weighted.im},
                })).collect::<Vec<_>>(),
                "w": b.w,
                "k": b.k,
                "n": b.n,
            }));
            Ok(out)
        }
        Command::Shiftpoly { poly, n, kind } => {
            let (f, g) = parse_pair(poly)?;
            let kind = match kind {
                KindArg::Integral => Kind::Integral,
                KindArg::Series => Kind::Series,
            };
            let r = series::shift_value_poly(&f, &g, *n, kind, &settings)?;
            let mut out = Output::new("shiftpoly", poly_params(poly, cli.order));
            out.params.insert("n".into(), json!(n));
            out.params.insert("kind".into(), json!(kind));
            out.params.insert("degree_bound".into(), json!(r.table.degree_bound()));
            let entries: Vec<Value> = r
                .table
                .iter()
                .map(|(e, c)| {
                    let mut v = coeff_json(c);
                    v["index"] = json!(e.as_slice());
                    v
                })
                .collect();
            for (e, c) in r.table.iter() {
                out.lines.push(format!("a^{:?}: {} (± {:.1e})", e.as_slice(), c.value_f64(), c.error()));
            }
            out.lines.push(format!("held-out residual: {:e}", r.residual));
            out.lines.push(format!("dropped mass: {:e}", r.dropped_mass));
            if r.flagged {
                out.warnings.push(format!("coefficients beyond the degree bound reach {:e}", r.dropped_mass));
            }
            out.result = Some(json!({
                "table": entries,
                "residual": r.residual,
                "dropped_mass": r.dropped_mass,
                "flagged": r.flagged,
            }));
            Ok(out)
        }
        Command::Poles { poly, ell_max } => {
            let (f, g) = parse_pair(poly)?;
            if f.num_vars() != g.num_vars() {
                return Err(Error::DimensionMismatch {
                    expected: f.num_vars(),
                    found: g.num_vars(),
                }
                .into());
            }
            if f.degree().unwrap_or(0) == 0 {
                return Err(Error::ConstantPolynomial.into());
            }
            let cands = values::pole_candidates(&f, &g, *ell_max);
            let mut out = Output::new("poles", poly_params(poly, cli.order));
            out.params.insert("ell_max".into(), json!(ell_max));
            for c in &cands {
                out.lines.push(format!(
                    "ell={} s0={}{}",
                    c.ell,
                    c.s0,
                    if c.excluded { " (excluded: non-positive integer)" } else { "" }
                ));
            }
            out.result = Some(json!(cands
                .iter()
                .map(|c| json!({"ell": c.ell, "s0": c.s0.to_string(), "s0_value": rat_to_f64(&c.s0), "excluded": c.excluded}))
                .collect::<Vec<_>>()));
            Ok(out)
        }
        Command::Residue { poly, s } => {
            let (f, g) = parse_pair(poly)?;
            let s0 = parse_rational(s).map_err(|e| Failure::Usage(UsageError(e)))?;
            let est = values::residue(&f, &g, &s0, &settings)?;
            let mut out = Output::new("residue", poly_params(poly, cli.order));
            out.value = Some(Complex64::new(est.value, 0.0));
            out.error_estimate = Some(est.error);
            out.method = Some(values::Method::ValorZ.tag());
            out.params.insert("s0".into(), json!(s0.to_string()));
            Ok(out)
        }
        Command::Verify(Verify::ProductRule { vars, factors, g }) => {
            let p = *vars as usize;
            let fs = factors.iter().map(|t| parse_poly(t, p)).collect::<Result<Vec<_>>>()?;
            let g = parse_poly(g, p)?;
            let zeta = series::product_rule_zeta(&fs, &g, &settings)?;
            let z = values::product_rule_z(&fs, &g, &settings)?;
            let mut params = Map::new();
            params.insert("p".into(), json!(vars));
            params.insert("f".into(), json!(factors));
            params.insert("order".into(), json!(cli.order));
            let mut out = Output::new("verify product-rule", params);
            for (name, r) in [("zeta", &zeta), ("integral", &z)] {
                out.lines.push(format!(
                    "{name}: lhs {} rhs {} discrepancy {:.1e} combined error {:.1e} -> {}",
                    r.lhs.value,
                    r.rhs.value,
                    r.discrepancy,
                    r.combined_error,
                    if r.consistent { "consistent" } else { "INCONSISTENT" }
                ));
                if !r.consistent {
                    out.warnings.push(format!("{name} side exceeds its combined error estimate"));
                }
            }
            out.result = Some(json!({"zeta": product_rule_json(&zeta), "integral": product_rule_json(&z)}));
            Ok(out)
        }
        Command::Verify(Verify::Raabe { poly, s, tol }) => {
            let (f, g) = parse_pair(poly)?;
            let s = parse_complex(s).map_err(|e| Failure::Usage(UsageError(e)))?;
            let r = series::raabe_check(&f, &g, s, &settings, *tol)?;
            let mut out = Output::new("verify raabe", poly_params(poly, cli.order)).with_value(&r.integral);
            out.params.insert("tol".into(), json!(tol));
            out.lines.push(format!(
                "average of shifted series: {} (± {:.1e}); discrepancy {:.1e} -> {}",
                r.average,
                r.average_error,
                r.discrepancy,
                if r.consistent { "consistent" } else { "INCONSISTENT" }
            ));
            if !r.consistent {
                out.warnings.push(format!("discrepancy {:e} exceeds tolerance {:e}", r.discrepancy, tol));
            }
            out.result = Some(json!({
                "average": {"re": r.average.re, "im": r.average.im},
                "average_error": r.average_error,
                "discrepancy": r.discrepancy,
                "consistent": r.consistent,
            }));
            Ok(out)
        }
        Command::CheckMahler { vars, f } => {
            let f_poly = parse_poly(f, *vars as usize)?;
            let report = check_mahler(&f_poly, DEFAULT_MAHLER_DENSITY)?;
            let mut params = Map::new();
            params.insert("p".into(), json!(vars));
            params.insert("f".into(), json!(f));
            let mut out = Output::new("check-mahler", params);
            let verdict = serde_json::to_value(report.verdict).expect("verdict serializes");
            out.lines.push(format!("verdict: {}", verdict.as_str().unwrap_or_default()));
            let witness = report
                .witness
                .as_ref()
                .map(|w| w.iter().map(|x| x.to_string()).collect::<Vec<_>>());
            if let Some(w) = &witness {
                out.lines.push(format!("witness: ({})", w.join(", ")));
            }
            out.result = Some(json!({
                "verdict": verdict,
                "witness": witness,
                "min_abs_f": report.min_abs_f,
                "min_abs_top": report.min_abs_top,
            }));
            Ok(out)
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Zeta { .. } => "zeta",
        Command::Zint { .. } => "zint",
        Command::Zgen { .. } => "zgen",
        Command::Shiftpoly { .. } => "shiftpoly",
        Command::Poles { .. } => "poles",
        Command::Residue { .. } => "residue",
        Command::Verify(Verify::ProductRule { .. }) => "verify product-rule",
        Command::Verify(Verify::Raabe { .. }) => "verify raabe",
        Command::CheckMahler { .. } => "check-mahler",
    }
}

/// Runs the command line `args` (program name first); returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let name = command_name(&cli.command);
    match dispatch(&cli) {
        Ok(o) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string(&o.to_json()).expect("json") + "\n",
                Format::Text => o.to_text(),
            };
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(Failure::Usage(UsageError(msg))) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Compute(e)) => {
            if cli.format == Format::Json {
                let v = json!({"command": name, "error": {"name": e.name(), "message": e.to_string()}});
                let _ = writeln!(out, "{v}");
            }
            let _ = writeln!(err, "error: {}: {}", e.name(), e);
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("zetaspec").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("3").unwrap(), Complex64::new(3.0, 0.0));
        assert_eq!(parse_complex("-1/2").unwrap(), Complex64::new(-0.5, 0.0));
        assert_eq!(parse_complex("0.3+1.7i").unwrap(), Complex64::new(0.3, 1.7));
        assert_eq!(parse_complex("2-i").unwrap(), Complex64::new(2.0, -1.0));
        assert_eq!(parse_complex("1e-3+2i").unwrap(), Complex64::new(1e-3, 2.0));
        assert_eq!(parse_complex("-2i").unwrap(), Complex64::new(0.0, -2.0));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("1/2").unwrap(), crate::mpoly::rat(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), crate::mpoly::rat(-1, 4));
        assert_eq!(parse_rational("2").unwrap(), crate::mpoly::int(2));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn suggestions() {
        assert_eq!(rational_suggestion(-1.0 / 12.0).as_deref(), Some("-1/12"));
        assert_eq!(rational_suggestion(0.5).as_deref(), Some("1/2"));
        assert_eq!(rational_suggestion(std::f64::consts::PI), None);
    }

    #[test]
    fn zeta_text_and_exit_codes() {
        let (code, out, _) = run_capture(&["zeta", "-p", "1", "-f", "x1+1", "-g", "1", "-N", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("-1/12"), "{out}");
        let (code, _, err) = run_capture(&["zeta", "-p", "2", "-f", "x1*x2+1", "-N", "0"]);
        assert_eq!(code, 1);
        assert!(err.contains("MahlerViolation"), "{err}");
        let (code, _, _) = run_capture(&["zeta", "-p", "1"]);
        assert_eq!(code, 2);
        let (code, _, _) = run_capture(&["bogus"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn poles_json() {
        let (code, out, _) = run_capture(&["poles", "-p", "1", "-f", "x1+1", "-g", "1", "--ell-max", "3", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["command"], "poles");
        assert!(v["value"].is_null());
        let list = v["result"].as_array().unwrap();
        assert_eq!(list.len(), 4);
        assert_eq!(list[0]["s0"], "1");
        assert_eq!(list[0]["excluded"], false);
        assert_eq!(list[1]["excluded"], true);
    }
}
