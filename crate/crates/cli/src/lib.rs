//! Command-line front end: reads polynomial-map files, runs checks,
//! inversions and block tables, and prints text or JSON reports.
//!
//! [`run`] takes the argument list and two writers so that it can be driven
//! in-process; `main` only forwards the process arguments and exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use jacinv_core::blocks::{block_size, det_exponent};
use jacinv_core::generators::{random_bcw, random_section42, random_tame, KnownInverse, LinearKind, TameParams};
use jacinv_core::{
    check_det_law, check_jacobi, default_cap, invert_block_scheme, invert_oracle, parse_map, residuum_report,
    verify_inverse, BigRational, BlockMatrix, Error as CoreError, Exponent, InversionResult, InversionStatus,
    ParseError, PolyMap, RationalMatrix,
};
use serde_json::{json, Value};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "jacinv", version, about = "Exact inversion of polynomial maps with constant Jacobian")]
pub struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads for the parallel solves (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the Jacobian constant M and every violated Jacobi condition.
    Check { file: PathBuf },
    /// Compute the inverse block by block.
    Invert {
        file: PathBuf,
        /// Largest inverse degree to compute (default: (deg F)^(n-1)).
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long, value_enum, default_value_t = MethodArg::Block)]
        method: MethodArg,
        /// Print the residuum vectors of every block degree.
        #[arg(long)]
        emit_residuum: bool,
    },
    /// Check that two maps are mutually inverse.
    Verify { map: PathBuf, inverse: PathBuf },
    /// Print the degree-d block of a linear map and its determinant.
    Blocks {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: u32,
        /// Map file whose linear part is used (default: the identity).
        #[arg(long)]
        linear: Option<PathBuf>,
    },
    /// Block sizes and determinant powers for degrees 1..=max.
    Detpattern {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_degree: u32,
    },
    /// Generate a map with a known inverse.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
        #[arg(long, global = true, default_value_t = 0)]
        seed: u64,
        /// Also write the known inverse to this file.
        #[arg(long, global = true)]
        inverse_out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenFamily {
    /// Composition of linear maps and elementary shears.
    Tame {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        steps: usize,
        /// Bound on the degree of both the map and its inverse.
        #[arg(long)]
        max_degree: Option<u32>,
        /// Allow linear steps with determinant other than 1.
        #[arg(long)]
        general: bool,
    },
    /// u = x - c (ell . x)^3 with ell . c = 0.
    Bcw {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Plane pair (f, g) with g linear.
    Sec42 {
        #[arg(long, default_value_t = 3)]
        k: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Block,
    Oracle,
    Both,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: Box<ParseError> },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io { .. } | Self::Parse { .. } | Self::Usage(_) => EXIT_USAGE,
            Self::Domain(_) | Self::Core(_) => EXIT_DOMAIN,
        }
    }
}

/// A finished command: the text or JSON report and the exit code.
struct Report {
    text: String,
    json: Value,
    code: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Self {
            text,
            json,
            code: EXIT_OK,
        }
    }
}

/// Runs one command line. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(CliError::Usage(format!("cannot start {n} threads: {e}"))),
        },
        None => execute(&cli),
    };
    match result {
        Ok(report) => {
            let written = if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("valid JSON"))
            } else {
                write!(out, "{}", report.text)
            };
            if written.is_err() {
                return EXIT_USAGE;
            }
            report.code
        }
        Err(e) => {
            if cli.json {
                let body = json!({ "error": e.to_string(), "exit_code": e.exit_code() });
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("valid JSON"));
            }
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Check { file } => check(file),
        Command::Invert {
            file,
            cap,
            method,
            emit_residuum,
        } => invert(file, *cap, *method, *emit_residuum),
        Command::Verify { map, inverse } => verify(map, inverse),
        Command::Blocks { n, degree, linear } => blocks(*n, *degree, linear.as_deref()),
        Command::Detpattern { n, max_degree } => detpattern(*n, *max_degree),
        Command::Gen {
            family,
            seed,
            inverse_out,
        } => generate(family, *seed, inverse_out.as_deref()),
    }
}

pub fn read_map(path: &Path) -> Result<PolyMap, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_map(&text).map(|doc| doc.map).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source: Box::new(source),
    })
}

fn rat(r: &BigRational) -> Value {
    Value::String(r.to_string())
}

fn rats(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

fn monomial(e: &Exponent) -> String {
    let m = e.fmt_monomial("x");
    if m.is_empty() {
        "1".into()
    } else {
        m
    }
}

fn components(map: &PolyMap, var: &str) -> Value {
    Value::Array(map.components().iter().map(|p| Value::String(p.to_text(var))).collect())
}

fn matrix_json(m: &RationalMatrix) -> Value {
    Value::Array(m.row_vecs().iter().map(|r| rats(r)).collect())
}

fn check(file: &Path) -> Result<Report, CliError> {
    let map = read_map(file)?;
    let report = check_jacobi(&map);
    let mut text = format!("M = {}\n", report.principle_value);
    if report.is_constant {
        text.push_str("Jacobian determinant is constant\n");
    } else {
        text.push_str(&format!("violations: {}\n", report.violations.len()));
        for (e, c) in &report.violations {
            text.push_str(&format!("  {}: {c}\n", monomial(e)));
        }
    }
    let singular = report.principle_value == BigRational::from_integer(0.into());
    if singular {
        text.push_str("linear part is singular\n");
    }
    let json = json!({
        "command": "check",
        "num_vars": map.num_vars(),
        "principle_value": rat(&report.principle_value),
        "constant": report.is_constant,
        "violations": report.violations.iter().map(|(e, c)| json!({
            "monomial": monomial(e),
            "exponent": e.entries(),
            "value": rat(c),
        })).collect::<Vec<_>>(),
    });
    Ok(Report {
        text,
        json,
        code: if report.is_constant && !singular { EXIT_OK } else { EXIT_DOMAIN },
    })
}

fn status_text(status: &InversionStatus) -> String {
    match status {
        InversionStatus::PolynomialInverseCertified { degree } => format!("certified, degree {degree}"),
        InversionStatus::CapReached { cap } => format!("cap reached at degree {cap}, not certified"),
        InversionStatus::InternalInconsistency { detail } => format!("internal inconsistency: {detail}"),
    }
}

fn status_json(status: &InversionStatus) -> Value {
    match status {
        InversionStatus::PolynomialInverseCertified { degree } => json!({ "kind": "certified", "degree": degree }),
        InversionStatus::CapReached { cap } => json!({ "kind": "cap_reached", "cap": cap }),
        InversionStatus::InternalInconsistency { detail } => {
            json!({ "kind": "internal_inconsistency", "detail": detail })
        }
    }
}

fn residuum_text(result: &InversionResult) -> String {
    let mut text = String::new();
    for &d in result.residuum.keys() {
        let report = residuum_report(result, d).expect("key present");
        let names: Vec<String> = report.monomials.iter().map(monomial).collect();
        text.push_str(&format!("# residuum d = {d} over [{}]\n", names.join(", ")));
        for e in &report.entries {
            let values: Vec<String> = e.values.iter().map(ToString::to_string).collect();
            text.push_str(&format!(
                "#   x{} / u{}: [{}]\n",
                e.component + 1,
                e.variable + 1,
                values.join(", ")
            ));
        }
    }
    text
}

fn residuum_json(result: &InversionResult) -> Value {
    Value::Array(
        result
            .residuum
            .keys()
            .map(|&d| {
                let report = residuum_report(result, d).expect("key present");
                json!({
                    "degree": d,
                    "monomials": report.monomials.iter().map(monomial).collect::<Vec<_>>(),
                    "entries": report.entries.iter().map(|e| json!({
                        "component": e.component + 1,
                        "variable": e.variable + 1,
                        "values": rats(&e.values),
                        "zero": e.is_zero,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

fn result_json(result: &InversionResult, cap: u32, emit_residuum: bool) -> Value {
    let mut body = json!({
        "method": match result.method {
            jacinv_core::Method::BlockScheme => "block",
            jacinv_core::Method::Oracle => "oracle",
        },
        "cap": cap,
        "jacobian_constant": rat(&result.jacobian_constant),
        "status": status_json(&result.status),
        "certificate": result.certificate,
        "inverse": components(&result.inverse(), "u"),
        "blocks": result.inverse_blocks.iter().enumerate().map(|(k, b)| json!({
            "degree": k + 1,
            "components": components(b, "u"),
        })).collect::<Vec<_>>(),
    });
    if emit_residuum {
        body["residuum"] = residuum_json(result);
    }
    body
}

fn invert(file: &Path, cap: Option<u32>, method: MethodArg, emit_residuum: bool) -> Result<Report, CliError> {
    let map = read_map(file)?;
    let cap = cap.unwrap_or_else(|| default_cap(&map));
    if cap == 0 {
        return Err(CliError::Usage("--cap must be at least 1".into()));
    }
    let mut runs = Vec::new();
    if method != MethodArg::Oracle {
        runs.push(invert_block_scheme(&map, cap)?);
    }
    if method != MethodArg::Block {
        runs.push(invert_oracle(&map, cap)?);
    }
    let primary = &runs[0];
    let agree = runs.windows(2).all(|w| w[0].inverse_blocks == w[1].inverse_blocks);

    let mut text = primary.inverse().to_text("x", "u");
    text.push_str(&format!("# jacobian constant: {}\n", primary.jacobian_constant));
    for r in &runs {
        let name = match r.method {
            jacinv_core::Method::BlockScheme => "block",
            jacinv_core::Method::Oracle => "oracle",
        };
        text.push_str(&format!("# status ({name}): {}\n", status_text(&r.status)));
    }
    if runs.len() == 2 {
        text.push_str(&format!("# methods agree: {}\n", if agree { "yes" } else { "no" }));
    }
    if emit_residuum {
        text.push_str(&residuum_text(primary));
    }

    let json = json!({
        "command": "invert",
        "num_vars": map.num_vars(),
        "results": runs.iter().map(|r| result_json(r, cap, emit_residuum)).collect::<Vec<_>>(),
        "methods_agree": agree,
    });
    let certified = runs.iter().all(|r| r.certificate);
    Ok(Report {
        text,
        json,
        code: if certified && agree { EXIT_OK } else { EXIT_DOMAIN },
    })
}

fn verify(map_path: &Path, inverse_path: &Path) -> Result<Report, CliError> {
    let f = read_map(map_path)?;
    let g = read_map(inverse_path)?;
    if f.num_vars() != g.num_vars() {
        return Err(CliError::Domain(format!(
            "the maps have {} and {} variables",
            f.num_vars(),
            g.num_vars()
        )));
    }
    let ok = verify_inverse(&f, &g);
    let text = format!("inverse: {}\n", if ok { "yes" } else { "no" });
    Ok(Report {
        text,
        json: json!({ "command": "verify", "inverse": ok }),
        code: if ok { EXIT_OK } else { EXIT_DOMAIN },
    })
}

fn blocks(n: usize, degree: u32, linear: Option<&Path>) -> Result<Report, CliError> {
    if n == 0 || degree == 0 {
        return Err(CliError::Usage("--n and --degree must be at least 1".into()));
    }
    let l = match linear {
        Some(path) => {
            let map = read_map(path)?;
            if map.num_vars() != n {
                return Err(CliError::Usage(format!(
                    "{} has {} variables, expected {n}",
                    path.display(),
                    map.num_vars()
                )));
            }
            map.linear_part()
        }
        None => RationalMatrix::identity(n),
    };
    let block = BlockMatrix::symmetric_power(&l, degree)?;
    let law = check_det_law(&l, degree)?;
    let names: Vec<String> = block.monomials().iter().map(monomial).collect();
    let mut text = format!("block degree {degree}, size {}\n", block.size());
    text.push_str(&format!("monomials: {}\n", names.join(" ")));
    text.push_str(&block.entries().to_string());
    if !text.ends_with('\n') {
        text.push('\n');
    }
    text.push_str(&format!(
        "det = {} = ({})^{} : {}\n",
        law.det_block,
        law.det_linear,
        law.exponent,
        if law.holds { "holds" } else { "FAILS" }
    ));
    let json = json!({
        "command": "blocks",
        "num_vars": n,
        "degree": degree,
        "size": block.size(),
        "monomials": names,
        "matrix": matrix_json(block.entries()),
        "det_linear": rat(&law.det_linear),
        "det_block": rat(&law.det_block),
        "exponent": law.exponent,
        "law_holds": law.holds,
    });
    Ok(Report {
        text,
        json,
        code: if law.holds { EXIT_OK } else { EXIT_DOMAIN },
    })
}

fn detpattern(n: usize, max_degree: u32) -> Result<Report, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let rows: Vec<(u32, u64, u64)> = (1..=max_degree)
        .map(|d| (d, block_size(n, d), det_exponent(n, d)))
        .collect();
    let mut text = format!("n = {n}\n{:>6} {:>8} {:>8}\n", "degree", "size", "power");
    for (d, size, power) in &rows {
        text.push_str(&format!("{d:>6} {size:>8} {power:>8}\n"));
    }
    let json = json!({
        "command": "detpattern",
        "num_vars": n,
        "rows": rows.iter().map(|(d, s, p)| json!({ "degree": d, "size": s, "power": p })).collect::<Vec<_>>(),
    });
    Ok(Report::ok(text, json))
}

fn generate(family: &GenFamily, seed: u64, inverse_out: Option<&Path>) -> Result<Report, CliError> {
    let known: KnownInverse = match family {
        GenFamily::Tame {
            n,
            steps,
            max_degree,
            general,
        } => {
            if *n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            let mut params = TameParams::new(*n);
            params.max_steps = (*steps).max(1);
            params.max_degree = *max_degree;
            if *general {
                params.linear = LinearKind::General;
            }
            random_tame(&params, seed)?
        }
        GenFamily::Bcw { n } => random_bcw(*n, seed).map_err(|e| match e {
            CoreError::UnexpectedShape { .. } => CliError::Usage(e.to_string()),
            other => other.into(),
        })?,
        GenFamily::Sec42 { k } => {
            if *k < 1 {
                return Err(CliError::Usage("--k must be at least 1".into()));
            }
            let map = random_section42(*k, seed);
            let inverse = jacinv_core::invert_special_42(map.component(0), map.component(1))?;
            KnownInverse {
                map,
                inverse,
                jacobian_constant: BigRational::from_integer(1.into()),
            }
        }
    };
    let inverse_text = known.inverse.to_text("x", "u");
    if let Some(path) = inverse_out {
        std::fs::write(path, &inverse_text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    let text = format!(
        "# seed {seed}, jacobian constant {}\n{}",
        known.jacobian_constant,
        known.map.to_text("u", "x")
    );
    let json = json!({
        "command": "gen",
        "seed": seed,
        "num_vars": known.map.num_vars(),
        "map": components(&known.map, "x"),
        "inverse": components(&known.inverse, "u"),
        "jacobian_constant": rat(&known.jacobian_constant),
    });
    Ok(Report::ok(text, json))
}
