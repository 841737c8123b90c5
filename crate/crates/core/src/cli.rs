//! The `klein-lame` command line.
//!
//! Every subcommand prints one JSON document (or a flat text rendering of
//! it) carrying a `schemaVersion` field. Exit codes: 0 success, 1 negative
//! verdict, 2 usage or parse error, 3 invalid mathematical input.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::exactalg::field::fmt_rational;
use crate::exactalg::{parse_ratfunc, parse_rational, BigRational};
use crate::lame::{classify_algebraic, classify_weierstrass, known_instances, LameParameters};
use crate::monodromy::{even_subgroup, monodromy_group, GroupVerdict, MonodromyConfig, MonodromyReport};
use crate::pullback::{certificate_degree_relation, exponent_transport, is_weak_pullback, named_map, named_maps};
use crate::schwarz::{normalize_triple, schwarz_case, GroupTag, SchwarzTriple};
use crate::solutions::{evaluate, solution_basis, PointEvaluation};

pub const SCHEMA_VERSION: u32 = 1;
/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "KLEIN_LAME_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Text,
}

/// Settings shared by all subcommands. Loaded from the config file, then
/// overridden by flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct RunConfig {
    pub integration_tol: f64,
    pub match_tol: f64,
    pub closure_cap: usize,
    pub root_tol: f64,
    pub format: OutputFormat,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let m = MonodromyConfig::default();
        RunConfig {
            integration_tol: m.integration_tol,
            match_tol: m.match_tol,
            closure_cap: m.closure_cap,
            root_tol: m.root_tol,
            format: OutputFormat::Json,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&PathBuf>) -> Result<Self, Failure> {
        let from_env = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
        let Some(path) = path.cloned().or(from_env) else {
            return Ok(RunConfig::default());
        };
        let text = fs::read_to_string(&path)
            .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("bad config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), Failure> {
        let tols = [self.integration_tol, self.match_tol, self.root_tol];
        if tols.iter().any(|t| !(*t > 0.0)) || self.closure_cap == 0 {
            return Err(Failure::usage("tolerances and the closure cap must be positive"));
        }
        Ok(())
    }

    pub fn monodromy(&self) -> MonodromyConfig {
        MonodromyConfig {
            integration_tol: self.integration_tol,
            match_tol: self.match_tol,
            closure_cap: self.closure_cap,
            root_tol: self.root_tol,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "klein-lame", version, about = "Algebraic Lamé operators and their monodromy")]
pub struct Cli {
    /// JSON config file (default: $KLEIN_LAME_CONFIG)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Admissible projective monodromy groups for a degree ℓ.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        ell: String,
        #[arg(long = "B", allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        g2: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        g3: Option<String>,
        /// Weierstrass form on the elliptic curve.
        #[arg(long)]
        curve: bool,
    },
    /// Exact check that a Lamé operator is a weak pullback of a
    /// hypergeometric one.
    VerifyPullback {
        /// ℓ,B,g2,g3
        #[arg(long, allow_hyphen_values = true)]
        lame: Option<String>,
        /// a,b,c
        #[arg(long, allow_hyphen_values = true)]
        triple: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        /// One of the built-in maps.
        #[arg(long)]
        named: Option<String>,
    },
    /// Numerical projective monodromy of a Lamé operator.
    Monodromy {
        #[arg(long, allow_hyphen_values = true)]
        ell: String,
        #[arg(long = "B", allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        g2: String,
        #[arg(long, allow_hyphen_values = true)]
        g3: String,
        /// Report the monodromy of the Weierstrass form on the curve.
        #[arg(long)]
        curve: bool,
        /// Integration tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Evaluate an explicit solution basis.
    Solve {
        /// 1, 2a, 2b, 2c or 3
        #[arg(long = "case")]
        case: String,
        /// Complex point, e.g. "3+0.5i".
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        #[arg(long, default_value_t = 0)]
        branch: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Residual CSV over an n×n grid of [-2,2]², all branches.
        #[arg(long)]
        grid: Option<usize>,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Look up a triple of exponent differences on the Schwarz list.
    Schwarz {
        #[arg(long, allow_hyphen_values = true)]
        triple: String,
    },
    /// The five explicit algebraic instances.
    Instances,
}

/// A failed run: exit code and message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(m: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: m.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => 2,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Output of a successful run. `code` is 0, or 1 for a negative verdict.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub body: String,
}

/// 15 significant digits, so reruns are byte-identical.
pub fn fnum(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(format!("{x}"));
    }
    let r: f64 = format!("{x:.14e}").parse().expect("formatted float");
    serde_json::Number::from_f64(r).map(Value::Number).unwrap_or(Value::Null)
}

pub fn fcomplex(z: Complex64) -> Value {
    json!([fnum(z.re), fnum(z.im)])
}

/// Parse `a`, `bi`, `a+bi`, `a-bi`.
pub fn parse_complex(s: &str) -> Result<Complex64, Error> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("cannot read \"{s}\" as a complex number"));
    let num = |p: &str| p.parse::<f64>().map_err(|_| bad());
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(num(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (num(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => num(other)?,
    };
    Ok(Complex64::new(re, im))
}

fn rat(s: &str) -> Result<BigRational, Failure> {
    Ok(parse_rational(s)?)
}

fn lame_from(ell: &str, b: &str, g2: &str, g3: &str) -> Result<LameParameters, Failure> {
    Ok(LameParameters::new(rat(ell)?, rat(b)?, rat(g2)?, rat(g3)?)?)
}

fn lame_from_list(s: &str) -> Result<LameParameters, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Failure::usage(format!("--lame expects ℓ,B,g2,g3, got \"{s}\"")));
    }
    lame_from(parts[0], parts[1], parts[2], parts[3])
}

fn with_schema(mut v: Map<String, Value>) -> Value {
    v.insert("schemaVersion".into(), json!(SCHEMA_VERSION));
    Value::Object(v)
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("object literal"),
    }
}

fn group_name(v: &GroupVerdict) -> Value {
    match v.tag() {
        Some(t) => json!(t.short_name()),
        None => Value::Null,
    }
}

fn group_list(g: &[GroupTag]) -> Value {
    Value::Array(g.iter().map(|t| json!(t.short_name())).collect())
}

/// Entry point used by the binary.
pub fn run(cli: Cli) -> Result<Outcome, Failure> {
    let mut cfg = RunConfig::load(cli.config.as_ref())?;
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    let (code, value) = match cli.command {
        Command::Classify { ell, b, g2, g3, curve } => cmd_classify(&cfg, &ell, b, g2, g3, curve)?,
        Command::VerifyPullback { lame, triple, xi, named } => cmd_verify_pullback(lame, triple, xi, named)?,
        Command::Monodromy {
            ell,
            b,
            g2,
            g3,
            curve,
            tol,
        } => {
            if let Some(t) = tol {
                cfg.integration_tol = t;
            }
            cfg.validate()?;
            cmd_monodromy(&cfg, &lame_from(&ell, &b, &g2, &g3)?, curve)?
        }
        Command::Solve {
            case,
            x0,
            branch,
            tol,
            grid,
            output,
        } => return cmd_solve(&cfg, &case, x0, branch, tol, grid, output),
        Command::Schwarz { triple } => cmd_schwarz(&triple)?,
        Command::Instances => cmd_instances(),
    };
    Ok(Outcome {
        code,
        body: render(&value, cfg.format),
    })
}

fn render(v: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(v).expect("serializable"),
        OutputFormat::Text => {
            let mut out = String::new();
            if let Value::Object(m) = v {
                for (k, val) in m {
                    let s = match val {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    out.push_str(&format!("{k}: {s}\n"));
                }
            }
            out.trim_end().to_string()
        }
    }
}

fn cmd_classify(
    cfg: &RunConfig,
    ell: &str,
    b: Option<String>,
    g2: Option<String>,
    g3: Option<String>,
    curve: bool,
) -> Result<(i32, Value), Failure> {
    let ell = rat(ell)?;
    let verdict = if curve {
        classify_weierstrass(&ell)
    } else {
        classify_algebraic(&ell)
    };
    let alternatives: Vec<Value> = verdict
        .admissible
        .iter()
        .map(|a| {
            json!({
                "residue": fmt_rational(&a.residue),
                "base": a.base_group.short_name(),
                "curve": a.curve_group.map(|c| c.short_name()),
            })
        })
        .collect();
    let mut m = obj(json!({
        "ell": fmt_rational(&ell),
        "scope": if curve { "weierstrass" } else { "algebraic" },
        "classical": verdict.classical,
        "admissible": group_list(&verdict.base_groups()),
        "alternatives": alternatives,
    }));
    if curve {
        let pairs: Vec<Value> = verdict
            .pairs()
            .iter()
            .map(|(c, b)| json!([c.short_name(), b.short_name()]))
            .collect();
        m.insert("pairs".into(), Value::Array(pairs));
    }
    match (b, g2, g3) {
        (Some(b), Some(g2), Some(g3)) => {
            let p = LameParameters::new(ell.clone(), rat(&b)?, rat(&g2)?, rat(&g3)?)?;
            let rep = monodromy_group(&p.operator(), &cfg.monodromy())?;
            let realized = if curve { even_subgroup(&rep)? } else { rep };
            m.insert("J".into(), json!(fmt_rational(&p.j_invariant())));
            m.insert("realized".into(), group_name(&realized.group));
            m.insert("closureSize".into(), json!(realized.closure_size));
        }
        (None, None, None) => {}
        _ => return Err(Failure::usage("--B, --g2 and --g3 go together")),
    }
    let code = if verdict.admissible.is_empty() { 1 } else { 0 };
    Ok((code, with_schema(m)))
}

fn cmd_verify_pullback(
    lame: Option<String>,
    triple: Option<String>,
    xi: Option<String>,
    named: Option<String>,
) -> Result<(i32, Value), Failure> {
    let base = match &named {
        Some(n) => Some(named_map(n).ok_or_else(|| {
            let names: Vec<&str> = named_maps().iter().map(|m| m.name).collect();
            Failure::usage(format!("unknown map \"{n}\"; known: {}", names.join(", ")))
        })?),
        None => None,
    };
    let target = match (&lame, &base) {
        (Some(s), _) => lame_from_list(s)?.operator(),
        (None, Some(m)) => m.target.operator(),
        (None, None) => return Err(Failure::usage("give --named or --lame, --triple and --xi")),
    };
    let t = match (&triple, &base) {
        (Some(s), _) => SchwarzTriple::parse(s)?,
        (None, Some(m)) => m.source.clone(),
        (None, None) => return Err(Failure::usage("--triple is required without --named")),
    };
    let map = match (&xi, &base) {
        (Some(s), _) => parse_ratfunc(s)?,
        (None, Some(m)) => m.xi.clone(),
        (None, None) => return Err(Failure::usage("--xi is required without --named")),
    };
    let cert = is_weak_pullback(&target, &t, &map)?;
    let mut m = obj(json!({
        "named": named,
        "xi": map.to_string(),
        "sourceTriple": t.to_string(),
        "target": target.to_json_value(),
        "verified": cert.verified,
        "witness": cert.residual_witness.as_ref().map(|w| w.to_string()),
    }));
    if cert.verified {
        let transport: Vec<Value> = exponent_transport(&cert)?
            .iter()
            .map(|r| {
                json!({
                    "location": r.location.to_string(),
                    "multiplicity": r.image.multiplicity,
                    "targetDifference": r.target_difference.to_string(),
                    "sourceDifference": fmt_rational(&r.source_difference),
                    "holds": r.holds,
                })
            })
            .collect();
        m.insert("transport".into(), Value::Array(transport));
        if let Ok(rel) = certificate_degree_relation(&cert) {
            m.insert(
                "degreeRelation".into(),
                json!({
                    "lhs": fmt_rational(&rel.lhs),
                    "rhsPerDegree": fmt_rational(&rel.rhs_per_degree),
                    "degree": map.degree(),
                    "holds": rel.admits(map.degree()),
                }),
            );
        }
    }
    Ok((if cert.verified { 0 } else { 1 }, with_schema(m)))
}

pub fn report_json(rep: &MonodromyReport) -> Map<String, Value> {
    let generators: Vec<Value> = rep
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let point = rep.points.get(i).map(|p| {
                if p.is_finite() {
                    fcomplex(*p)
                } else {
                    json!("infinity")
                }
            });
            json!({
                "label": rep.labels[i],
                "point": point,
                "matrix": g.0.iter().map(|row| row.iter().map(|c| fcomplex(*c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "projectiveOrder": rep.projective_orders[i],
            })
        })
        .collect();
    obj(json!({
        "basepoint": fcomplex(rep.basepoint),
        "generators": generators,
        "productOrder": rep.product_order,
        "productDefect": fnum(rep.product_defect),
        "maxResidual": fnum(rep.max_residual),
        "group": group_name(&rep.group),
        "verdict": rep.group.to_string(),
        "closureSize": rep.closure_size,
        "config": {
            "integrationTol": fnum(rep.config.integration_tol),
            "matchTol": fnum(rep.config.match_tol),
            "closureCap": rep.config.closure_cap,
            "rootTol": fnum(rep.config.root_tol),
        },
    }))
}

fn cmd_monodromy(cfg: &RunConfig, p: &LameParameters, curve: bool) -> Result<(i32, Value), Failure> {
    let rep = monodromy_group(&p.operator(), &cfg.monodromy())?;
    let mut m = if curve {
        let even = even_subgroup(&rep)?;
        let mut m = report_json(&even);
        m.insert("baseGroup".into(), group_name(&rep.group));
        m.insert("baseClosureSize".into(), json!(rep.closure_size));
        m
    } else {
        report_json(&rep)
    };
    m.insert("operator".into(), json!(p.to_string()));
    m.insert("curve".into(), json!(curve));
    let finite = m.get("group").is_some_and(|g| !g.is_null());
    Ok((if finite { 0 } else { 1 }, with_schema(m)))
}

pub fn evaluation_json(case: &str, ev: &PointEvaluation) -> Map<String, Value> {
    let jet = |u: &crate::solutions::Jet| json!([fcomplex(u.value), fcomplex(u.d1), fcomplex(u.d2)]);
    obj(json!({
        "case": case,
        "x0": fcomplex(ev.x0),
        "branch": ev.branch_index,
        "tau": fcomplex(ev.tau),
        "dtau": fcomplex(ev.dtau),
        "u1": jet(&ev.u1),
        "u2": jet(&ev.u2),
        "residuals": [fnum(ev.residuals.0), fnum(ev.residuals.1)],
        "definingDefect": fnum(ev.defining_defect),
    }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    cfg: &RunConfig,
    case: &str,
    x0: Option<String>,
    branch: usize,
    tol: f64,
    grid: Option<usize>,
    output: Option<PathBuf>,
) -> Result<Outcome, Failure> {
    let basis = solution_basis(case).map_err(|e| Failure::usage(e.to_string()))?;
    if let Some(n) = grid {
        if n < 2 {
            return Err(Failure::usage("--grid needs at least 2 points per side"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let write_err = |e: csv::Error| Failure::usage(format!("csv: {e}"));
        w.write_record(["re", "im", "branch", "residual1", "residual2", "status"])
            .map_err(write_err)?;
        for i in 0..n {
            for j in 0..n {
                let x = Complex64::new(-2.0 + 4.0 * i as f64 / (n - 1) as f64, -2.0 + 4.0 * j as f64 / (n - 1) as f64);
                for k in 0..basis.degree() {
                    let (r1, r2, status) = match evaluate(&basis, x, k, tol) {
                        Ok(ev) => (format!("{:.6e}", ev.residuals.0), format!("{:.6e}", ev.residuals.1), "ok".to_string()),
                        Err(e) => (String::new(), String::new(), short_error(&e)),
                    };
                    w.write_record([
                        format!("{:.6}", x.re),
                        format!("{:.6}", x.im),
                        k.to_string(),
                        r1,
                        r2,
                        status,
                    ])
                    .map_err(write_err)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Failure::usage(format!("csv: {e}")))?;
        let body = String::from_utf8(bytes).expect("csv is utf-8");
        if let Some(path) = output {
            fs::write(&path, &body).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
            return Ok(Outcome {
                code: 0,
                body: format!("wrote {}", path.display()),
            });
        }
        return Ok(Outcome {
            code: 0,
            body: body.trim_end().to_string(),
        });
    }
    let x0 = x0.ok_or_else(|| Failure::usage("--x0 or --grid is required"))?;
    let x0 = parse_complex(&x0)?;
    let ev = evaluate(&basis, x0, branch, tol)?;
    let mut m = evaluation_json(case, &ev);
    m.insert("branches".into(), json!(basis.degree()));
    Ok(Outcome {
        code: 0,
        body: render(&with_schema(m), cfg.format),
    })
}

fn short_error(e: &Error) -> String {
    match e {
        Error::SingularPoint(_) => "singular",
        Error::BranchCollision(_) => "collision",
        _ => "error",
    }
    .to_string()
}

fn cmd_schwarz(triple: &str) -> Result<(i32, Value), Failure> {
    let t = SchwarzTriple::parse(triple)?;
    let normalized = normalize_triple(&t).ok().map(|n| n.to_string());
    let case = schwarz_case(&t)?;
    let m = obj(json!({
        "triple": t.to_string(),
        "normalized": case.as_ref().map(|c| c.normalized.to_string()).or(normalized),
        "case": case.as_ref().map(|c| c.label.clone()),
        "group": case.as_ref().map(|c| c.group.short_name()),
        "degree": case.as_ref().map(|c| c.group.order()),
    }));
    Ok((if case.is_some() { 0 } else { 1 }, with_schema(m)))
}

fn cmd_instances() -> (i32, Value) {
    let maps = ["harmonic-quadratic", "equianharmonic-cubic", "equianharmonic-cubic", "equianharmonic-cubic", "prop32-quintic"];
    let rows: Vec<Value> = known_instances()
        .iter()
        .zip(maps)
        .map(|(i, map)| {
            let p = &i.params;
            json!({
                "case": i.label,
                "ell": fmt_rational(&p.ell),
                "B": fmt_rational(&p.b),
                "g2": fmt_rational(&p.g2),
                "g3": fmt_rational(&p.g3),
                "J": fmt_rational(&p.j_invariant()),
                "baseGroup": i.base_group.short_name(),
                "curveGroup": i.curve_group.short_name(),
                "map": map,
            })
        })
        .collect();
    (0, with_schema(obj(json!({ "instances": rows }))))
}
