//! Command-line surface. Every command is deterministic; exit codes are
//! 0 on success, 1 on a mathematical failure or empty result, 2 on a usage
//! or parse error.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use weyl_forge_exact::{parse_ratfun, RationalFunction, Var};

use crate::airyring::{build_darboux_operator, check_lagrangian, DarbouxFactor, SubspaceSpec};
use crate::bispectral::{
    dress, filtration_dim, fourier_dressed, fourier_dressed_inverse, AnsatzBounds, DressedWave, Method,
};
use crate::commute::{
    bc_relation, build_kernel, certify, find_commuting, verify_master_symmetry, CommutingOperator, KernelExpr, Level,
    OperatorCurve, SolveOptions,
};
use crate::concomitant::{concomitant_matrix, WronskianSign};
use crate::error::Error;
use crate::weylops::{parse_operator, substitute_airy, DiffOperator, DividedForm};

#[derive(Parser, Debug)]
#[command(name = "weyl-forge", version, about = "Exact differential operators commuting with Airy-type integral operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output mode.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Column-parallel elimination in the exact solvers (same results).
    #[arg(long, global = true)]
    pub parallel: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Airy,
    One,
    Two,
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Level {
        match l {
            LevelArg::Airy => Level::Airy,
            LevelArg::One => Level::One,
            LevelArg::Two => Level::Two,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Division,
    Ansatz,
}

/// Selects a wave: a named level or a subspace spec file.
#[derive(Args, Debug, Clone)]
pub struct WaveArgs {
    #[arg(long, value_enum, conflicts_with = "spec")]
    pub level: Option<LevelArg>,
    /// Spec file with `root <a> <d>` and `pair <root-index> <alphas>` lines.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Root of `q` for a named level.
    #[arg(long)]
    pub s1: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct Endpoints {
    /// Lower limit of the outer integral (rational or a symbol).
    #[arg(long)]
    pub t1: Option<String>,
    /// Lower limit of the inner integral (rational or a symbol).
    #[arg(long)]
    pub t2: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lagrangian check, the Darboux factor P and the identity P*(1/p²)P = q(L)².
    VerifyFactorization { spec: PathBuf },
    /// Ψ = (1/(p q)) P·Ai(x+z) as a·Ai + b·Ai′.
    BuildPsi {
        #[command(flatten)]
        wave: WaveArgs,
    },
    /// The generalized Fourier map b_Ψ (x → z) or its inverse.
    FourierMap {
        operator: String,
        #[command(flatten)]
        wave: WaveArgs,
        #[arg(long)]
        inverse: bool,
        /// key=value list: slack, den, degree, cord, weight.
        #[arg(long)]
        bounds: Option<String>,
    },
    /// Dimension and basis of a filtered Fourier-algebra piece.
    FiltrationDim {
        #[command(flatten)]
        wave: WaveArgs,
        #[arg(long)]
        ord: usize,
        #[arg(long)]
        cord: usize,
        #[arg(long)]
        symmetric: bool,
        #[arg(long, value_enum, default_value_t = MethodArg::Division)]
        method: MethodArg,
        #[arg(long)]
        bounds: Option<String>,
    },
    /// Operators commuting with the integral operator, modulo constants.
    FindCommuting {
        #[arg(long, value_enum)]
        level: LevelArg,
        #[arg(long)]
        order: usize,
        #[command(flatten)]
        ends: Endpoints,
    },
    /// Full certificate chain for the solver's operators of the given orders.
    Certify {
        #[arg(long, value_enum)]
        level: LevelArg,
        /// Orders to certify (defaults to the reference pair).
        #[arg(long, value_delimiter = ',')]
        order: Vec<usize>,
        #[command(flatten)]
        ends: Endpoints,
        #[arg(long)]
        bounds: Option<String>,
    },
    /// Burchnall–Chaundy relation of two commuting operators in z.
    BcRelation {
        x: Option<String>,
        y: Option<String>,
        /// Use the reference pair of a level instead.
        #[arg(long, value_enum)]
        level: Option<LevelArg>,
        #[arg(long)]
        bounds: Option<String>,
    },
    /// Kernel assembly, symmetry, the t2-derivative identity and optional
    /// master symmetry of an operator in z.
    KernelCheck {
        operator: Option<String>,
        #[command(flatten)]
        wave: WaveArgs,
        #[arg(long)]
        t2: Option<String>,
    },
    /// Concomitant matrix of an operator at a point.
    Concomitant {
        operator: String,
        #[arg(long)]
        at: String,
        #[arg(long, default_value = "x")]
        var: String,
    },
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Math(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Math(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Exact(weyl_forge_exact::ExactError::Parse(m)) => CliError::Usage(m),
            Error::Invalid(m) | Error::Index(m) => CliError::Usage(m),
            other => CliError::Math(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Command output: text and structured forms plus the exit code.
#[derive(Debug)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

/// Structured operator record; coefficients re-parse with the exact grammar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorRecord {
    pub variable: String,
    pub order: usize,
    /// Coefficient of `D^k` at index `k`.
    pub coefficients: Vec<String>,
    pub divided_form: Option<DividedRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DividedRecord {
    pub s: u32,
    pub factor: String,
    pub a: Vec<String>,
}

impl OperatorRecord {
    pub fn new(op: &DiffOperator, divided: Option<&DividedForm>) -> Self {
        OperatorRecord {
            variable: op.var().name(),
            order: op.order(),
            coefficients: op.coeffs().iter().map(|c| c.to_string()).collect(),
            divided_form: divided.map(|d| DividedRecord {
                s: d.s,
                factor: d.factor.to_string(),
                a: d.a.iter().map(|c| c.to_string()).collect(),
            }),
        }
    }

    pub fn to_operator(&self) -> crate::Result<DiffOperator> {
        let var = Var::new(&self.variable);
        let cs = self
            .coefficients
            .iter()
            .map(|c| parse_ratfun(c).map_err(Error::from))
            .collect::<crate::Result<Vec<_>>>()?;
        Ok(DiffOperator::new(var, cs))
    }
}

fn op_json(op: &DiffOperator, divided: Option<&DividedForm>) -> Value {
    serde_json::to_value(OperatorRecord::new(op, divided)).expect("records serialize")
}

fn rf_arg(s: &str) -> CliResult<RationalFunction> {
    parse_ratfun(s).map_err(|e| CliError::Usage(format!("{s}: {e}")))
}

fn op_arg(s: &str, var: Var) -> CliResult<DiffOperator> {
    parse_operator(s, var).map_err(|e| CliError::Usage(format!("{s}: {e}")))
}

/// `root <a> <d>` and `pair <root-index> <alpha_0> … <alpha_{2d−1}>` lines;
/// `#` starts a comment.
pub fn parse_spec_file(text: &str) -> std::result::Result<SubspaceSpec, String> {
    let mut roots = Vec::new();
    let mut pairs = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let kw = it.next().unwrap_or("");
        let rest: Vec<&str> = it.collect();
        let val = |s: &str| parse_ratfun(s).map_err(|e| format!("line {}: {s}: {e}", n + 1));
        match kw {
            "root" => {
                let [a, d] = rest[..] else {
                    return Err(format!("line {}: expected `root <a> <d>`", n + 1));
                };
                let d: u32 = d.parse().map_err(|_| format!("line {}: bad multiplicity {d}", n + 1))?;
                roots.push((val(a)?, d));
            }
            "pair" => {
                let Some((idx, alphas)) = rest.split_first() else {
                    return Err(format!("line {}: expected `pair <root-index> <alphas>`", n + 1));
                };
                let idx: usize = idx.parse().map_err(|_| format!("line {}: bad root index {idx}", n + 1))?;
                let alphas = alphas.iter().map(|s| val(s)).collect::<std::result::Result<Vec<_>, _>>()?;
                pairs.push((idx, alphas));
            }
            other => return Err(format!("line {}: unknown keyword `{other}`", n + 1)),
        }
    }
    let spec = SubspaceSpec { roots, pairs };
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

fn read_spec(path: &PathBuf) -> CliResult<SubspaceSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_spec_file(&text).map_err(CliError::Usage)
}

fn resolve_wave(args: &WaveArgs) -> CliResult<(DressedWave, Option<DarbouxFactor>)> {
    if let Some(path) = &args.spec {
        let f = build_darboux_operator(&read_spec(path)?, WronskianSign::default())?;
        return Ok((dress(&f)?, Some(f)));
    }
    let level: Level = args.level.map_or(Level::Airy, Level::from);
    let s1 = args.s1.as_deref().map(rf_arg).transpose()?.unwrap_or_else(RationalFunction::zero);
    let w = level.wave_at(&s1)?;
    let f = w.dressing.clone();
    Ok((w, f))
}

#[derive(Clone, Debug)]
struct BoundsArg {
    ansatz: AnsatzBounds,
    weight: Option<usize>,
}

fn parse_bounds(s: Option<&str>) -> CliResult<BoundsArg> {
    let mut b = BoundsArg { ansatz: AnsatzBounds::from_env(), weight: None };
    let Some(s) = s else {
        return Ok(b);
    };
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("bounds item `{item}` is not key=value")))?;
        let n: usize = v.parse().map_err(|_| CliError::Usage(format!("bounds value `{v}` is not a number")))?;
        match k {
            "slack" => b.ansatz.slack = n,
            "den" => b.ansatz.max_den_power = n as u32,
            "degree" => b.ansatz.max_degree = Some(n),
            "cord" => b.ansatz.cord = Some(n),
            "weight" => b.weight = Some(n),
            _ => return Err(CliError::Usage(format!("unknown bounds key `{k}`"))),
        }
    }
    Ok(b)
}

fn endpoints(level: Level, ends: &Endpoints) -> CliResult<(RationalFunction, RationalFunction)> {
    let (d1, d2) = level.default_endpoints();
    let t1 = ends.t1.as_deref().map(rf_arg).transpose()?.unwrap_or(d1);
    let t2 = ends.t2.as_deref().map(rf_arg).transpose()?.unwrap_or(d2);
    Ok((t1, t2))
}

fn pass(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn wave_text(w: &DressedWave) -> String {
    format!("Psi = ({})*Ai(x+z) + ({})*Ai'(x+z)", w.a, w.b)
}

fn solve(level: Level, order: usize, ends: &Endpoints, parallel: bool) -> CliResult<(Vec<CommutingOperator>, RationalFunction, RationalFunction)> {
    if order == 0 || order % 2 == 1 {
        return Err(CliError::Usage(format!("order must be even and positive, got {order}")));
    }
    let (t1, t2) = endpoints(level, ends)?;
    let w = level.wave()?;
    let opts = SolveOptions { factor: Some(level.factor(&t1)), parallel };
    let sols = find_commuting(&w, order, &t1, &t2, &opts)?;
    Ok((sols, t1, t2))
}

fn curve_json(c: &OperatorCurve) -> Value {
    json!({
        "weight": c.weight,
        "relation": c.to_string(),
        "terms": c.terms.iter().map(|((i, j), v)| json!({"x_power": i, "y_power": j, "coefficient": v.to_string()})).collect::<Vec<_>>(),
    })
}

fn curve_text(c: &OperatorCurve, out: &mut String) -> CliResult<()> {
    writeln!(out, "relation (weight {}): {c}", c.weight).ok();
    if let Some(wf) = c.weierstrass()? {
        writeln!(
            out,
            "Weierstrass form with X' = X + ({}), Y' = Y + ({})*X + ({}):\n  {}",
            wf.x_shift, wf.y_shift_x, wf.y_shift, wf.curve
        )
        .ok();
    }
    Ok(())
}

/// Executes a parsed command.
pub fn execute(cli: &Cli) -> CliResult<Report> {
    let mut text = String::new();
    let json;
    let mut code = 0;
    match &cli.command {
        Command::VerifyFactorization { spec } => {
            let spec = read_spec(spec)?;
            let sign = WronskianSign::default();
            let report = check_lagrangian(&spec, sign)?;
            if !report.ok {
                let v: Vec<Value> = report
                    .violations
                    .iter()
                    .map(|(i, j, r, val)| json!({"pair_i": i, "pair_j": j, "root": r, "value": val.to_string()}))
                    .collect();
                for (i, j, r, val) in &report.violations {
                    writeln!(text, "lagrangian violation: pairs ({i},{j}) at root {r}: {val}").ok();
                }
                writeln!(text, "factorization: FAIL").ok();
                json = json!({"status": "FAIL", "violations": v});
                code = 1;
            } else {
                let f = build_darboux_operator(&spec, sign)?;
                let ql = substitute_airy(&f.q, &RationalFunction::zero());
                let lhs = &(&f.p_op.adjoint() * &DiffOperator::function(Var::x(), f.p.pow(2).recip().map_err(Error::from)?)) * &f.p_op;
                let ok = lhs == &ql * &ql;
                writeln!(text, "P = {}\np = {}\nq = {}\nP*(1/p^2)P = q(L)^2: {}", f.p_op, f.p, f.q, pass(ok)).ok();
                json = json!({
                    "status": pass(ok),
                    "P": op_json(&f.p_op, None),
                    "p": f.p.to_string(),
                    "q": f.q.to_string(),
                });
                code = if ok { 0 } else { 1 };
            }
        }
        Command::BuildPsi { wave } => {
            let (w, f) = resolve_wave(wave)?;
            writeln!(text, "{}", wave_text(&w)).ok();
            if let Some(f) = &f {
                writeln!(text, "P = {}\np = {}\nq = {}", f.p_op, f.p, f.q).ok();
            }
            json = json!({
                "a": w.a.to_string(),
                "b": w.b.to_string(),
                "P": f.as_ref().map(|f| op_json(&f.p_op, None)),
            });
        }
        Command::FourierMap { operator, wave, inverse, bounds } => {
            let (w, _) = resolve_wave(wave)?;
            let b = parse_bounds(bounds.as_deref())?;
            let (src, img) = if *inverse {
                let s = op_arg(operator, Var::z())?;
                let a = fourier_dressed_inverse(&s, &w)?;
                (s, a)
            } else {
                let r = op_arg(operator, Var::x())?;
                let s = fourier_dressed(&r, &w, &b.ansatz)?;
                (r, s)
            };
            writeln!(text, "{src}\n  |-> {img}").ok();
            json = json!({"input": op_json(&src, None), "image": op_json(&img, None), "inverse": inverse});
        }
        Command::FiltrationDim { wave, ord, cord, symmetric, method, bounds } => {
            let (w, _) = resolve_wave(wave)?;
            let b = parse_bounds(bounds.as_deref())?;
            let m = match method {
                MethodArg::Division => Method::Conjugation,
                MethodArg::Ansatz => Method::Ansatz,
            };
            let piece = filtration_dim(&w, *ord, *cord, *symmetric, m, &b.ansatz)?;
            let qualifier = if piece.certified {
                "certified".to_string()
            } else {
                format!(
                    "lower bound (slack {}, den {}, degree cap {})",
                    b.ansatz.slack,
                    b.ansatz.max_den_power,
                    b.ansatz.degree_cap(*ord, *cord)
                )
            };
            writeln!(text, "dim = {} ({qualifier})", piece.dim()).ok();
            for (r, s) in piece.basis.iter().zip(&piece.images) {
                writeln!(text, "  {r}\n    |-> {s}").ok();
            }
            json = json!({
                "dim": piece.dim(),
                "certified": piece.certified,
                "ord": ord, "cord": cord, "symmetric": symmetric,
                "basis": piece.basis.iter().map(|r| op_json(r, None)).collect::<Vec<_>>(),
                "images": piece.images.iter().map(|s| op_json(s, None)).collect::<Vec<_>>(),
            });
        }
        Command::FindCommuting { level, order, ends } => {
            let level = Level::from(*level);
            let (sols, t1, t2) = solve(level, *order, ends, cli.parallel)?;
            writeln!(text, "level {}, t1 = {t1}, t2 = {t2}: {} operator(s) modulo constants", level.name(), sols.len()).ok();
            for s in &sols {
                writeln!(text, "order {}:", s.op.order()).ok();
                if let Some(d) = &s.divided {
                    writeln!(text, "{d}").ok();
                }
                writeln!(text, "normal form: {}", s.op).ok();
            }
            if sols.is_empty() {
                writeln!(
                    text,
                    "no commuting operator up to order {order}; existence is guaranteed once the order reaches 2*d1*d2 for the Fourier bidegree"
                )
                .ok();
                code = 1;
            }
            json = json!({
                "level": level.name(),
                "t1": t1.to_string(),
                "t2": t2.to_string(),
                "operators": sols.iter().map(|s| json!({
                    "operator": op_json(&s.op, s.divided.as_ref()),
                    "preimage": op_json(&s.preimage, None),
                })).collect::<Vec<_>>(),
            });
        }
        Command::Certify { level, order, ends, bounds } => {
            let level = Level::from(*level);
            let orders: Vec<usize> = if order.is_empty() { level.reference_orders().to_vec() } else { order.clone() };
            let top = *orders.iter().max().expect("nonempty");
            let (sols, t1, t2) = solve(level, top, ends, cli.parallel)?;
            let mut picked = Vec::new();
            for o in &orders {
                match sols.iter().find(|s| s.op.order() == *o) {
                    Some(s) => picked.push(s.clone()),
                    None => return Err(CliError::Math(format!("no commuting operator of order {o}"))),
                }
            }
            let b = parse_bounds(bounds.as_deref())?;
            let weight = b.weight.unwrap_or_else(|| orders.iter().product::<usize>() / 2);
            let cert = certify(&level.wave()?, &picked, &t1, &t2, weight)?;
            for s in &cert.stages {
                writeln!(text, "{}: {}", pass(s.passed), s.name).ok();
            }
            if let Some(c) = &cert.relation {
                curve_text(c, &mut text)?;
            }
            writeln!(text, "certificate: {}", pass(cert.passed())).ok();
            if let Some(f) = cert.first_failure() {
                writeln!(text, "first failing stage: {}", f.name).ok();
                code = 1;
            }
            json = json!({
                "status": pass(cert.passed()),
                "stages": cert.stages.iter().map(|s| json!({"name": s.name, "passed": s.passed})).collect::<Vec<_>>(),
                "relation": cert.relation.as_ref().map(curve_json),
                "operators": picked.iter().map(|s| op_json(&s.op, s.divided.as_ref())).collect::<Vec<_>>(),
            });
        }
        Command::BcRelation { x, y, level, bounds } => {
            let b = parse_bounds(bounds.as_deref())?;
            let (xo, yo) = match (x, y, level) {
                (Some(x), Some(y), None) => (op_arg(x, Var::z())?, op_arg(y, Var::z())?),
                (None, None, Some(l)) => {
                    let c = crate::commute::catalog()?;
                    match Level::from(*l) {
                        Level::Airy => {
                            return Err(CliError::Usage("the airy level has a single reference operator".into()));
                        }
                        Level::One => (c.s1.to_operator(), c.s1_tilde.to_operator()),
                        Level::Two => (c.s2.to_operator(), c.s2_tilde.to_operator()),
                    }
                }
                _ => return Err(CliError::Usage("give two operators or --level".into())),
            };
            let weight = b.weight.unwrap_or(xo.order() * yo.order() / 2);
            let c = bc_relation(&xo, &yo, weight)?;
            let zero = c.evaluate()?.is_zero();
            curve_text(&c, &mut text)?;
            writeln!(text, "substitution gives the zero operator: {}", pass(zero)).ok();
            code = if zero { 0 } else { 1 };
            json = json!({"curve": curve_json(&c), "verified": zero});
        }
        Command::KernelCheck { operator, wave, t2 } => {
            let (w, _) = resolve_wave(wave)?;
            let t2 = t2.as_deref().map(rf_arg).transpose()?.unwrap_or_else(|| RationalFunction::var(Var::new("t2")));
            let k = build_kernel(&w, &t2)?;
            let sym = k.is_symmetric()?;
            writeln!(text, "K(z,w) = {k}").ok();
            writeln!(text, "symmetry K(z,w) = K(w,z): {}", pass(sym)).ok();
            let deriv = match k.derivative_t2() {
                Ok(d) => Some(d == KernelExpr::wave_product(&w, &t2)?),
                Err(_) => None,
            };
            if let Some(ok) = deriv {
                writeln!(text, "dK/dt2 = Psi(t2,z)Psi(t2,w): {}", pass(ok)).ok();
            }
            let master = match operator {
                Some(s) => {
                    let s = op_arg(s, Var::z())?;
                    let ok = verify_master_symmetry(&s, &k)?;
                    writeln!(text, "S_z K = S_w K: {}", pass(ok)).ok();
                    Some(ok)
                }
                None => None,
            };
            let all = sym && deriv.unwrap_or(true) && master.unwrap_or(true);
            code = if all { 0 } else { 1 };
            json = json!({
                "t2": t2.to_string(),
                "coeffs": k.coeffs.iter().map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "symmetric": sym,
                "t2_derivative": deriv,
                "master_symmetry": master,
            });
        }
        Command::Concomitant { operator, at, var } => {
            let v = match var.as_str() {
                "x" | "z" | "w" => Var::new(var),
                other => return Err(CliError::Usage(format!("unknown variable `{other}`"))),
            };
            let op = op_arg(operator, v)?;
            let p = rf_arg(at)?;
            let m = concomitant_matrix(&op, &p)?;
            let rows: Vec<Vec<String>> =
                (0..m.size()).map(|i| m.entries.row(i).iter().map(|c| c.to_string()).collect()).collect();
            writeln!(text, "C({operator}; {at}) =").ok();
            for r in &rows {
                writeln!(text, "  [{}]", r.join(", ")).ok();
            }
            json = json!({"point": p.to_string(), "matrix": rows, "zero": m.is_zero()});
        }
    }
    Ok(Report { text, json, code })
}

/// Parses arguments, runs, prints, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(r) => {
            match cli.format {
                Format::Text => print!("{}", r.text),
                Format::Structured => println!("{}", serde_json::to_string_pretty(&r.json).expect("json serializes")),
            }
            r.code
        }
        Err(e) => {
            let (kind, msg) = match &e {
                CliError::Usage(m) => ("usage", m),
                CliError::Math(m) => ("failure", m),
            };
            match cli.format {
                Format::Text => eprintln!("{kind}: {msg}"),
                Format::Structured => println!("{}", json!({"status": "FAIL", "error": kind, "message": msg})),
            }
            e.code()
        }
    }
}
