//! Command-line surface: series tables, genus polynomials, thermodynamic
//! sweeps, density profiles, identity verification suites, and the index
//! integral, emitted as CSV or JSON.
//!
//! Exit codes: 0 on success, 1 when a verification suite fails or a
//! numerical routine does not converge, 2 on flag validation errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use thermogenus::asymmetry::{self, ChNormalization, IndexDensitySpec};
use thermogenus::genus::{self, GenusKind};
use thermogenus::rational::format_rational;
use thermogenus::series::{PowerSeries, DEFAULT_ORDER};
use thermogenus::thermo;
use thermogenus::trace_geom;

/// Directory used to resolve relative `--output` paths.
const OUTPUT_DIR_ENV: &str = "THERMOGENUS_OUTPUT_DIR";

#[derive(Parser)]
#[command(
    name = "thermogenus",
    about = "Exact genus series, oscillator thermodynamics, and their identities",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Write to this file instead of standard output. Relative paths resolve
    /// against THERMOGENUS_OUTPUT_DIR when that variable is set.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the generating series of a genus kind.
    Series {
        /// L, AHAT, TODD or COSH_HALF.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Expand the multiplicative sequence into class polynomials, optionally
    /// pairing them against characteristic numbers from a manifold file.
    Genus {
        /// L, AHAT, TODD or COSH_HALF.
        #[arg(long)]
        kind: String,
        /// Expansion degree; defaults to the manifold's top degree when a
        /// manifold file supplies one.
        #[arg(long, required_unless_present = "manifold")]
        degree: Option<u32>,
        /// Number of formal roots; defaults to degree + 2.
        #[arg(long)]
        roots: Option<u32>,
        /// JSON file with name, l, characteristic_numbers and
        /// chern_character_numbers; adds genus and index evaluations.
        #[arg(long)]
        manifold: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sweep the dimensionless thermodynamic quantities over an x grid.
    Thermo {
        /// Grid a:b:n (n points from a to b inclusive).
        #[arg(long = "x-grid")]
        x_grid: String,
        /// Geometric instead of linear spacing.
        #[arg(long)]
        logspace: bool,
        /// Level spacing; beta is recovered as x divided by this.
        #[arg(long = "hbar-omega", default_value_t = 1.0)]
        hbar_omega: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Thermal position density over a spatial grid.
    Density {
        #[arg(long)]
        x: f64,
        /// Highest level retained in the truncated density.
        #[arg(long)]
        levels: u32,
        /// Grid a:b:n; values may be negative.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run an identity verification suite; nonzero exit when any check fails.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
    /// Mode decomposition of the thermal derivative over an x grid.
    Asymmetry {
        #[arg(long = "x-grid")]
        x_grid: String,
        #[arg(long)]
        logspace: bool,
        /// Inverse temperature carried by the 1/beta prefactors.
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Integrate the index density over the thermal interval.
    IndexIntegral {
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        /// canonical (1/(2 sinh)) or paper (1/sinh).
        #[arg(long, default_value = "paper")]
        norm: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Subcommand)]
enum VerifySuite {
    /// The four identity blocks: both series equalities, the factorization,
    /// and the finite-difference reading of the mode decomposition.
    All {
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: u32,
        /// Grid a:b:n, geometrically spaced (the identities span decades).
        #[arg(long = "x-grid", default_value = "0.01:20:200")]
        x_grid: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Matsubara product versus the closed trace across the grid.
    TraceFunctorial {
        /// Grid a:b:n, geometrically spaced.
        #[arg(long = "x-grid", default_value = "0.5:20:40")]
        x_grid: String,
        #[arg(long, default_value_t = 100_000)]
        modes: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// Failure that should exit with code 1 (numerical) or 2 (validation).
enum CliError {
    Validation(String),
    Numerical(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn validation<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Validation(e.to_string())
}

fn numerical<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Numerical(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run with --help for usage");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Series {
            kind,
            order,
            format,
            out,
        } => {
            let kind = GenusKind::from_str(&kind).map_err(validation)?;
            let series = genus::generating_series(kind, order);
            let text = match format {
                Format::Text => format!("{series}\n"),
                Format::Json => format!(
                    "{}\n",
                    serde_json::to_string_pretty(&series).map_err(numerical)?
                ),
            };
            emit(&out, text)?;
            Ok(true)
        }
        Command::Genus {
            kind,
            degree,
            roots,
            manifold,
            format,
            out,
        } => {
            let kind = GenusKind::from_str(&kind).map_err(validation)?;
            let data = match &manifold {
                Some(path) => {
                    let text = std::fs::read_to_string(path)?;
                    Some(
                        serde_json::from_str::<genus::ManifoldClassData>(&text)
                            .map_err(validation)?,
                    )
                }
                None => None,
            };
            let degree = match (degree, &data) {
                (Some(d), _) => d,
                (None, Some(data)) => data.l,
                (None, None) => unreachable!("clap enforces degree or manifold"),
            };
            if let Some(data) = &data {
                if data.l > degree {
                    return Err(CliError::Validation(format!(
                        "manifold needs degree {} but only {} was expanded",
                        data.l, degree
                    )));
                }
            }
            let roots = roots.unwrap_or_else(|| genus::default_num_roots(degree));
            let polys = genus::multiplicative_sequence(kind, degree, roots).map_err(validation)?;
            let evaluation = match &data {
                Some(data) => {
                    let value = genus::evaluate_genus(&polys, data).map_err(validation)?;
                    let mut block = serde_json::Map::new();
                    block.insert("name".into(), json!(data.name));
                    block.insert("l".into(), json!(data.l));
                    block.insert("genus".into(), json!(format_rational(&value)));
                    if kind == GenusKind::L {
                        let index = genus::signature_index(data).map_err(validation)?;
                        block.insert("signature_index".into(), json!(format_rational(&index)));
                    }
                    Some(serde_json::Value::Object(block))
                }
                None => None,
            };
            let text = match format {
                Format::Json => {
                    let body = match evaluation {
                        Some(eval) => json!({"polynomials": polys, "evaluation": eval}),
                        None => serde_json::to_value(&polys).map_err(numerical)?,
                    };
                    format!(
                        "{}\n",
                        serde_json::to_string_pretty(&body).map_err(numerical)?
                    )
                }
                Format::Text => {
                    let zero = thermogenus::rational::rat(0, 1);
                    let mut buf = String::new();
                    for poly in &polys {
                        let mut body = String::new();
                        for (m, c) in &poly.terms {
                            let negative = *c < zero;
                            if body.is_empty() {
                                if negative {
                                    body.push('-');
                                }
                            } else {
                                body.push_str(if negative { " - " } else { " + " });
                            }
                            let mag = format_rational(&if negative { -c } else { c.clone() });
                            if m.indices().is_empty() {
                                body.push_str(&mag);
                            } else {
                                body.push_str(&format!("{mag} {}", m.format(poly.variable)));
                            }
                        }
                        if body.is_empty() {
                            body.push('0');
                        }
                        writeln!(buf, "K{} = {body}", poly.degree).expect("string write");
                    }
                    if let Some(eval) = &evaluation {
                        writeln!(buf, "evaluation: {eval}").expect("string write");
                    }
                    buf
                }
            };
            emit(&out, text)?;
            Ok(true)
        }
        Command::Thermo {
            x_grid,
            logspace,
            hbar_omega,
            out,
        } => {
            let grid = parse_grid(&x_grid, logspace)?;
            let spec = thermo::OscillatorSpec::new(hbar_omega).map_err(validation)?;
            let mut csv = String::from("x,Z,U,betaU\n");
            for &x in &grid {
                let point = thermo::thermo_point(x / hbar_omega, &spec).map_err(validation)?;
                writeln!(csv, "{x},{},{},{}", point.z, point.u, point.beta_u)
                    .expect("string write");
            }
            emit(&out, csv)?;
            Ok(true)
        }
        Command::Density {
            x,
            levels,
            grid,
            out,
        } => {
            let points = parse_grid(&grid, false)?;
            let mut csv = String::from("q,rho\n");
            for &q in &points {
                let rho = trace_geom::thermal_density(q, x, levels).map_err(validation)?;
                writeln!(csv, "{q},{rho}").expect("string write");
            }
            emit(&out, csv)?;
            Ok(true)
        }
        Command::Verify { suite } => match suite {
            VerifySuite::All { order, x_grid, out } => verify_all(order, &x_grid, &out),
            VerifySuite::TraceFunctorial { x_grid, modes, out } => {
                verify_trace_functorial(&x_grid, modes, &out)
            }
        },
        Command::Asymmetry {
            x_grid,
            logspace,
            beta,
            out,
        } => {
            if !(beta > 0.0 && beta.is_finite()) {
                return Err(CliError::Validation("beta must be positive".to_string()));
            }
            let grid = parse_grid(&x_grid, logspace)?;
            let mut csv = String::from("x,f_plus,f_minus,diff,fd_check\n");
            for &x in &grid {
                let point = asymmetry::f_decomposition(x, beta).map_err(validation)?;
                let diff = point.f_plus - point.f_minus;
                // Centered finite difference of Z in beta at fixed level
                // spacing hbar omega = x / beta.
                let h = 1e-6;
                let zp = thermo::partition_closed(x * (1.0 + h)).map_err(numerical)?;
                let zm = thermo::partition_closed(x * (1.0 - h)).map_err(numerical)?;
                let fd = -(zp - zm) / (2.0 * h * beta);
                writeln!(csv, "{x},{},{},{diff},{fd}", point.f_plus, point.f_minus)
                    .expect("string write");
            }
            emit(&out, csv)?;
            Ok(true)
        }
        Command::IndexIntegral {
            beta,
            hbar,
            norm,
            tol,
            out,
        } => {
            let normalization = ChNormalization::from_str(&norm).map_err(validation)?;
            let spec = IndexDensitySpec::new(beta, hbar, normalization).map_err(validation)?;
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(CliError::Validation("tol must be positive".to_string()));
            }
            let result = asymmetry::index_integral(&spec, tol).map_err(numerical)?;
            let report = json!({
                "beta": beta,
                "hbar": hbar,
                "normalization": normalization.to_string(),
                "tolerance": tol,
                "value": result.value,
                "error_estimate": result.error_estimate,
                "evaluations": result.evaluations,
            });
            emit(
                &out,
                format!(
                    "{}\n",
                    serde_json::to_string_pretty(&report).map_err(numerical)?
                ),
            )?;
            Ok(true)
        }
    }
}

fn verify_all(order: u32, x_grid: &str, out: &OutputArgs) -> Result<bool, CliError> {
    let grid = parse_grid(x_grid, true)?;
    let mut identities = Vec::new();

    // Dimensionless energy series against the L series, exact.
    let energy_series = thermo::beta_u_series(order);
    let l_series = genus::generating_series(GenusKind::L, order);
    identities.push(exact_block(
        "dimensionless_energy_series_matches_l",
        &energy_series.sub(&l_series),
    ));

    // Partition-times-x built from exponentials against the A-hat series.
    let half_x = PowerSeries::monomial(thermogenus::rational::rat(1, 2), 1, order + 1);
    let denominator = half_x
        .exp()
        .map_err(numerical)?
        .sub(&half_x.neg().exp().map_err(numerical)?)
        .divide_by_x(1)
        .map_err(numerical)?;
    let z_times_x = PowerSeries::one(order)
        .div(&denominator)
        .map_err(numerical)?;
    let residual = z_times_x.sub(&genus::generating_series(GenusKind::AHat, order));
    identities.push(exact_block("partition_times_x_matches_a_hat", &residual));

    // Factorization of L through A-hat and the cosh factor.
    identities.push(exact_block(
        "l_matches_a_hat_times_cosh",
        &genus::verify_la_identity(order),
    ));

    // Mode decomposition against the centered finite difference, beta = x.
    let tolerance = 1e-6;
    let mut worst: f64 = 0.0;
    for &x in &grid {
        let point = asymmetry::f_decomposition(x, x).map_err(numerical)?;
        let h = 1e-6 * x;
        let zp = thermo::partition_closed(x + h).map_err(numerical)?;
        let zm = thermo::partition_closed(x - h).map_err(numerical)?;
        let fd = -(zp - zm) / (2.0 * h);
        let rel = ((point.f_plus - point.f_minus) - fd).abs() / fd.abs();
        worst = worst.max(rel);
    }
    identities.push(json!({
        "name": "derivative_split_matches_finite_difference",
        "pass": worst <= tolerance,
        "max_relative_residual": worst,
        "tolerance": tolerance,
        "grid_points": grid.len(),
    }));

    let all_pass = identities
        .iter()
        .all(|block| block["pass"].as_bool().unwrap_or(false));
    let report = json!({
        "order": order,
        "identities": identities,
        "all_pass": all_pass,
    });
    emit(
        out,
        format!(
            "{}\n",
            serde_json::to_string_pretty(&report).map_err(numerical)?
        ),
    )?;
    Ok(all_pass)
}

fn exact_block(name: &str, residual: &PowerSeries) -> serde_json::Value {
    let zero = thermogenus::rational::rat(0, 1);
    let max_residual = residual
        .coeffs()
        .iter()
        .map(|c| if *c < zero { -c } else { c.clone() })
        .max()
        .map(|c| format_rational(&c))
        .unwrap_or_else(|| "0".to_string());
    json!({
        "name": name,
        "pass": residual.is_zero(),
        "max_residual": max_residual,
        "comparison": "exact rational",
    })
}

fn verify_trace_functorial(x_grid: &str, modes: u32, out: &OutputArgs) -> Result<bool, CliError> {
    let grid = parse_grid(x_grid, true)?;
    if modes == 0 {
        return Err(CliError::Validation("modes must be at least 1".to_string()));
    }
    let mut points = Vec::new();
    let mut all_pass = true;
    for &x in &grid {
        let product = trace_geom::matsubara_partition(x, modes).map_err(numerical)?;
        let trace = thermo::partition_closed(x).map_err(numerical)?;
        let residual = (product - trace).abs() / trace;
        let bound = x * x / (4.0 * std::f64::consts::PI.powi(2) * modes as f64) * 1.1;
        let pass = residual <= bound;
        all_pass &= pass;
        points.push(json!({
            "x": x,
            "relative_residual": residual,
            "bound": bound,
            "pass": pass,
        }));
    }
    let report = json!({
        "modes": modes,
        "points": points,
        "all_pass": all_pass,
    });
    emit(
        out,
        format!(
            "{}\n",
            serde_json::to_string_pretty(&report).map_err(numerical)?
        ),
    )?;
    Ok(all_pass)
}

/// Parses `a:b:n` into `n` inclusive points, linear or geometric.
fn parse_grid(text: &str, logspace: bool) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Validation(format!(
            "grid {text:?} is not of the form a:b:n"
        )));
    }
    let a: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::Validation(format!("bad grid start {:?}", parts[0])))?;
    let b: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Validation(format!("bad grid stop {:?}", parts[1])))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| CliError::Validation(format!("bad grid count {:?}", parts[2])))?;
    if n == 0 {
        return Err(CliError::Validation(
            "grid needs at least one point".to_string(),
        ));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(CliError::Validation(
            "grid bounds must be finite".to_string(),
        ));
    }
    if logspace && (a <= 0.0 || b <= 0.0) {
        return Err(CliError::Validation(
            "logspace grids need positive bounds".to_string(),
        ));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n)
        .map(|i| {
            let s = i as f64 / (n - 1) as f64;
            if logspace {
                a * (b / a).powf(s)
            } else {
                a + (b - a) * s
            }
        })
        .collect())
}

fn emit(out: &OutputArgs, text: String) -> Result<(), CliError> {
    match &out.output {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => {
            let resolved = if path.is_relative() {
                match std::env::var_os(OUTPUT_DIR_ENV) {
                    Some(dir) => PathBuf::from(dir).join(path),
                    None => path.clone(),
                }
            } else {
                path.clone()
            };
            if let Some(parent) = resolved.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(&resolved, text)?;
            Ok(())
        }
    }
}
