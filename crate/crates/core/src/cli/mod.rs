//! Command-line front end: argument definitions, the expression evaluator and
//! the commands. The `hexa` binary only forwards to [`execute`].

pub mod parser;

use std::fmt::Write as _;

use clap::{Args, Parser as ClapParser, Subcommand};

use crate::algebra::{HexaNumber, Variant, ZERO_DIVISOR_REL};
use crate::calculus::{self, FunctionUnderTest, Path};
use crate::canonical::{self, Canonical};
use crate::cosexp::{self, Family, Grid};
use crate::elementary;
use crate::error::HexaError;
use crate::polyfactor::{self, HexaPolynomial};

use parser::{BinOp, Expr, ExprKind, Func, ParseError, Span};

/// Significant digits of human-readable numbers.
pub const HUMAN_DIGITS: usize = 12;

#[derive(Debug, ClapParser)]
#[command(name = "hexa", version, about = "Polar and planar 6-complex numbers")]
pub struct Cli {
    #[command(flatten)]
    pub config: CliConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CliConfig {
    /// Use polar 6-complex numbers (default)
    #[arg(long, global = true, conflicts_with = "planar")]
    pub polar: bool,
    /// Use planar 6-complex numbers
    #[arg(long, global = true)]
    pub planar: bool,
    /// Relative threshold under which a canonical component counts as zero
    #[arg(long, global = true, value_name = "REAL")]
    pub tol: Option<f64>,
    /// Table range `a:b:step`
    #[arg(long, global = true, value_name = "A:B:STEP", allow_hyphen_values = true)]
    pub range: Option<String>,
    /// Number of samples on an integration contour
    #[arg(long, global = true, value_name = "N")]
    pub samples: Option<usize>,
    /// Print up to this many distinct factorizations
    #[arg(long, global = true, value_name = "LIMIT")]
    pub all: Option<usize>,
}

impl CliConfig {
    pub fn variant(&self) -> Variant {
        if self.planar {
            Variant::Planar
        } else {
            Variant::Polar
        }
    }

    pub fn tolerance(&self) -> f64 {
        self.tol.unwrap_or(ZERO_DIVISOR_REL)
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(4096)
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Evaluate an expression
    Eval { expr: String },
    /// Canonical variables and geometry of an expression
    Canon { expr: String },
    /// Factor the monic polynomial u^m + a1 u^(m-1) + ... + am
    Factor {
        /// Coefficients a1 .. am, each an expression
        #[arg(required = true, allow_hyphen_values = true)]
        coeffs: Vec<String>,
    },
    /// CSV table of the cosexponential functions (g polar, f planar)
    Table { family: String },
    /// Contour integral of f(u)/(u - u0) against the residue formula
    Integrate {
        /// exp, sin, cos, one, u, u2 or u3
        function: String,
        /// Pole u0
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        center: String,
        /// Comma-separated planes the loop winds around once
        #[arg(long, default_value = "1")]
        planes: String,
        /// Loop radius in each plane
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
    },
    /// Matrix representation and its block-diagonal form
    Repr { expr: String },
}

#[derive(Debug)]
pub enum CliError {
    Parse { source: String, error: ParseError },
    Usage(String),
    Domain(String),
}

impl CliError {
    /// 2 for malformed input, 1 for mathematical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    pub fn render(&self) -> String {
        match self {
            CliError::Parse { source, error } => {
                let line = source.lines().nth(error.line - 1).unwrap_or("");
                let width = (error.span.end - error.span.start).max(1);
                format!(
                    "parse error: {error}\n  {line}\n  {}{}",
                    " ".repeat(error.column - 1),
                    "^".repeat(width.min(line.len().saturating_sub(error.column - 1).max(1)))
                )
            }
            CliError::Usage(m) => format!("error: {m}"),
            CliError::Domain(m) => format!("error: {m}"),
        }
    }
}

impl From<HexaError> for CliError {
    fn from(e: HexaError) -> Self {
        match e {
            HexaError::Invalid(m) => CliError::Usage(m),
            other => CliError::Domain(other.to_string()),
        }
    }
}

/// Evaluation failure at a node of the expression tree.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalError {
    pub span: Span,
    pub error: HexaError,
}

/// Evaluates an expression; `tol` is the zero-divisor threshold of `/` and `inv`.
pub fn evaluate(expr: &Expr, variant: Variant, tol: f64) -> Result<HexaNumber, EvalError> {
    let at = |error: HexaError| EvalError { span: expr.span, error };
    match &expr.kind {
        ExprKind::Number(v) => HexaNumber::new(variant, [*v, 0.0, 0.0, 0.0, 0.0, 0.0]).map_err(at),
        ExprKind::Basis(k) => Ok(HexaNumber::basis(variant, *k)),
        ExprKind::Neg(e) => Ok(-evaluate(e, variant, tol)?),
        ExprKind::Binary(op, a, b) => {
            let (a, b) = (evaluate(a, variant, tol)?, evaluate(b, variant, tol)?);
            let r = match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a * b.inverse_with_tol(tol).map_err(at)?,
            };
            finite(r).map_err(at)
        }
        ExprKind::Pow(e, n) => {
            let base = evaluate(e, variant, tol)?;
            let base = if *n < 0 { base.inverse_with_tol(tol).map_err(at)? } else { base };
            finite(base.powi(n.unsigned_abs() as i64).map_err(at)?).map_err(at)
        }
        ExprKind::Call(func, args) => {
            let u = evaluate(&args[0], variant, tol)?;
            let r = match func {
                Func::Exp => elementary::exp(&u),
                Func::Ln => elementary::ln(&u).map_err(at)?,
                Func::Sin => elementary::sin(&u),
                Func::Cos => elementary::cos(&u),
                Func::Sinh => elementary::sinh(&u),
                Func::Cosh => elementary::cosh(&u),
                Func::Inv => u.inverse_with_tol(tol).map_err(at)?,
                Func::Pow => {
                    let m = evaluate(&args[1], variant, tol)?;
                    if m.components()[1..].iter().any(|&v| v != 0.0) {
                        return Err(EvalError {
                            span: args[1].span,
                            error: HexaError::Domain("pow exponent must be real".into()),
                        });
                    }
                    elementary::pow_real(&u, m[0]).map_err(at)?
                }
            };
            finite(r).map_err(at)
        }
    }
}

fn finite(u: HexaNumber) -> Result<HexaNumber, HexaError> {
    HexaNumber::new(u.variant(), u.components())
}

/// Parses and evaluates `text` in the configured variant.
pub fn eval_text(text: &str, config: &CliConfig) -> Result<HexaNumber, CliError> {
    let expr = parser::parse(text).map_err(|error| CliError::Parse {
        source: text.to_string(),
        error,
    })?;
    evaluate(&expr, config.variant(), config.tolerance()).map_err(|e| {
        let snippet = &text[e.span.start.min(text.len())..e.span.end.min(text.len())];
        CliError::Domain(format!("{} (in '{snippet}')", e.error))
    })
}

/// `digits` significant digits, shortest form.
pub fn format_real(v: f64, digits: usize) -> String {
    let r: f64 = format!("{v:.*e}", digits.saturating_sub(1)).parse().unwrap_or(v);
    if r == 0.0 {
        "0".to_string()
    } else if (1e-4..1e15).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn format_hexa(u: &HexaNumber) -> String {
    u.round_sig(HUMAN_DIGITS).to_string()
}

/// Runs one command and returns its standard output.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let config = &cli.config;
    match &cli.command {
        Command::Eval { expr } => Ok(format!("{}\n", format_hexa(&eval_text(expr, config)?))),
        Command::Canon { expr } => cmd_canon(expr, config),
        Command::Factor { coeffs } => cmd_factor(coeffs, config),
        Command::Table { family } => cmd_table(family, config),
        Command::Integrate {
            function,
            center,
            planes,
            radius,
        } => cmd_integrate(function, center, planes, *radius, config),
        Command::Repr { expr } => cmd_repr(expr, config),
    }
}

fn cmd_canon(expr: &str, config: &CliConfig) -> Result<String, CliError> {
    let u = eval_text(expr, config)?;
    let mut out = String::new();
    let f = |v: f64| format_real(v, HUMAN_DIGITS);
    match canonical::to_canonical(&u) {
        Canonical::Polar(c) => {
            let _ = writeln!(out, "v+={}", f(c.v_plus));
            let _ = writeln!(out, "v-={}", f(c.v_minus));
            for (k, z) in c.pairs.iter().enumerate() {
                let _ = writeln!(out, "v{}={}\n~v{}={}", k + 1, f(z.re), k + 1, f(z.im));
            }
        }
        Canonical::Planar(c) => {
            for (k, z) in c.pairs.iter().enumerate() {
                let _ = writeln!(out, "v{}={}\n~v{}={}", k + 1, f(z.re), k + 1, f(z.im));
            }
        }
    }
    for (key, value) in canonical::geometry(&u).entries() {
        let _ = writeln!(out, "{key}={}", f(value));
    }
    Ok(out)
}

fn cmd_factor(coeffs: &[String], config: &CliConfig) -> Result<String, CliError> {
    let values = coeffs
        .iter()
        .map(|c| eval_text(c, config))
        .collect::<Result<Vec<_>, _>>()?;
    let p = HexaPolynomial::new(values)?;
    let list = match config.all {
        Some(limit) => polyfactor::enumerate_factorizations(&p, limit)?,
        None => vec![polyfactor::factor(&p)?],
    };
    let mut out = String::new();
    for f in &list {
        let _ = writeln!(out, "{p:.12} = {f:.12}");
    }
    if list.first().is_some_and(|f| f.repeated_roots) {
        eprintln!("note: repeated component roots; factorizations are counted as distinct assignments");
    }
    Ok(out)
}

fn parse_range(text: &str) -> Result<Grid, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, step] = parts[..] else {
        return Err(CliError::Usage(format!("range '{text}' is not of the form a:b:step")));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("'{s}' in range '{text}' is not a number")))
    };
    Ok(Grid::new(num(a)?, num(b)?, num(step)?)?)
}

fn cmd_table(family: &str, config: &CliConfig) -> Result<String, CliError> {
    let family: Family = family.parse()?;
    let grid = match &config.range {
        Some(r) => parse_range(r)?,
        None => Grid::default(),
    };
    Ok(cosexp::table_csv(family, &grid))
}

fn cmd_integrate(
    function: &str,
    center: &str,
    planes: &str,
    radius: f64,
    config: &CliConfig,
) -> Result<String, CliError> {
    let variant = config.variant();
    let f = FunctionUnderTest::by_name(function, variant)?;
    let u0 = eval_text(center, config)?;
    let planes: Vec<usize> = planes
        .split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("plane '{p}' is not an index")))
        })
        .collect::<Result<_, _>>()?;
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(CliError::Usage(format!("radius must be positive (got {radius})")));
    }
    // keep every canonical component of u - u0 away from zero off the loop planes
    let c = canonical::to_canonical(&HexaNumber::zero(variant));
    let reals = vec![2.0; c.reals().len()];
    let mut pairs = vec![num_complex::Complex64::new(2.0, 0.0); c.pairs().len()];
    for &k in &planes {
        if k == 0 || k > pairs.len() {
            return Err(CliError::Usage(format!("no plane {k} for {variant} numbers")));
        }
        pairs[k - 1] = num_complex::Complex64::new(0.0, 0.0);
    }
    let offset = canonical::from_canonical(&Canonical::from_parts(variant, &reals, &pairs));
    let loops: Vec<(usize, f64, i32)> = planes.iter().map(|&k| (k, radius, 1)).collect();
    let path = Path::loop_in_planes(&(u0 + offset), &loops, config.samples())?;
    let result = calculus::residue_integral(|u| f.eval(u), &path, &u0)?;
    let windings: Vec<String> = result.windings.iter().map(|w| w.to_string()).collect();
    let mut out = String::new();
    let _ = writeln!(out, "function={}", f.name);
    let _ = writeln!(out, "windings={}", windings.join(","));
    let _ = writeln!(out, "numeric={}", format_hexa(&result.numeric));
    let _ = writeln!(out, "formula={}", format_hexa(&result.formula));
    let _ = writeln!(out, "error={}", format_real(result.error(), 3));
    Ok(out)
}

fn write_matrix(out: &mut String, m: &crate::algebra::Matrix6) {
    for row in &m.0 {
        let cells: Vec<String> = row.iter().map(|v| format!("{:>20}", format_real(*v, HUMAN_DIGITS))).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
}

fn cmd_repr(expr: &str, config: &CliConfig) -> Result<String, CliError> {
    let u = eval_text(expr, config)?;
    let rep = u.irreducible_rep();
    let mut out = String::from("U =\n");
    write_matrix(&mut out, &u.to_matrix());
    out.push_str("T U T^-1 =\n");
    let mut cleaned = rep.matrix;
    let floor = 1e-12 * u.modulus().max(f64::MIN_POSITIVE);
    for row in cleaned.0.iter_mut() {
        for v in row.iter_mut() {
            if v.abs() <= floor {
                *v = 0.0;
            }
        }
    }
    write_matrix(&mut out, &cleaned);
    let _ = writeln!(out, "off_block_max={}", format_real(rep.off_block_max, 3));
    Ok(out)
}
