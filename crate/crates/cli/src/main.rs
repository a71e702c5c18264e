//! Command-line front end: verification suites over catalog examples and
//! user-described manifolds, contact products, period arithmetic, and
//! prequantization reports.
//!
//! Exit codes: 0 all checks pass, 1 at least one check failed, 2 input or
//! evaluation error.

mod manifold;
mod report;
mod suite;

use clap::{Parser, Subcommand, ValueEnum};
use reebkit::catalog::{load, CatalogId, ExampleKind, KnownPeriod};
use reebkit::contact::ContactChart;
use reebkit::prequant::{darboux_circle_data, PrincipalContactData};
use reebkit::products::{principal_product_period, torus_first_return, Component};
use reebkit::rational::{Period, Rational};
use report::{all_pass, print_table, to_json, Report};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;
use suite::{SuiteConfig, VerifySpec};

#[derive(Parser)]
#[command(
    name = "reebkit",
    about = "Chart-based verification toolkit for contact forms, Reeb dynamics, and prequantization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Sample points per check
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,

    /// RNG seed (reports are byte-identical for a fixed seed)
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Override the per-check tolerance defaults
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// RK4 step size
    #[arg(long, global = true, default_value_t = 1e-3)]
    step: f64,

    /// Quadrature grid, e.g. 64,64
    #[arg(long, global = true, default_value = "64,64", value_parser = parse_grid)]
    grid: (usize, usize),

    /// Flow horizon for period detection
    #[arg(long, global = true, default_value_t = 100.0)]
    horizon: f64,

    /// Write the machine-readable report stream (newline-delimited JSON) here
    #[arg(long, global = true)]
    json: Option<PathBuf>,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected n1,n2")?;
    let a = a.trim().parse().map_err(|_| "bad grid")?;
    let b = b.trim().parse().map_err(|_| "bad grid")?;
    Ok((a, b))
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ComponentArg {
    Pos,
    Neg,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite on a catalog id or a manifold file
    Verify { target: String },
    /// Build the contact product of two targets and verify it
    Product {
        target1: String,
        target2: String,
        /// Fiber component of the product chart
        #[arg(long, value_enum, default_value = "pos")]
        component: ComponentArg,
    },
    /// Product period arithmetic: exact rationals like 6, 4, 3/2, or inf
    Period { rho1: String, rho2: String },
    /// Prequantization report on a normal-form target ("darboux-data" for
    /// the circle-bundle calibration fixture)
    Prequant {
        target: String,
        /// Hamiltonian over the base coordinates, e.g. "q" or "(q^2+p^2)/2"
        #[arg(long = "hamiltonian", short = 'H')]
        hamiltonian: String,
        /// Planck constant for infinite-period targets
        #[arg(long)]
        hbar: Option<f64>,
    },
}

fn digest_of(parts: &[&str]) -> String {
    let mut hasher = Sha256::new();
    for p in parts {
        hasher.update(p.as_bytes());
        hasher.update([0]);
    }
    let hex = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect::<String>();
    hex[..16].to_string()
}

/// A resolved verify target: either a contact spec or the torus fixture.
enum Target {
    Contact {
        spec: VerifySpec,
        /// file content or catalog id, for the digest
        input: String,
    },
    Torus {
        k: i64,
        l: i64,
        input: String,
    },
}

fn resolve_target(raw: &str, cfg: &SuiteConfig) -> reebkit::Result<Target> {
    if let Ok(id) = CatalogId::from_str(raw) {
        if let CatalogId::TorusFixture(k, l) = id {
            return Ok(Target::Torus {
                k,
                l,
                input: raw.to_string(),
            });
        }
        let descriptor = load(id, cfg.samples, cfg.seed)?;
        let ExampleKind::Contact(example) = descriptor.kind else {
            unreachable!("torus ids handled above");
        };
        let (projection, section, declared_omega) = match example.reduction {
            Some(r) => (Some(r.projection), Some(r.section), Some(r.omega)),
            None => (None, None, None),
        };
        return Ok(Target::Contact {
            spec: VerifySpec {
                eta: example.contact.eta().clone(),
                projection,
                section,
                declared_omega,
                integrality: example.integrality,
                declared_period: Some(match example.period {
                    KnownPeriod::Finite(rho) => rho,
                    KnownPeriod::Infinite => f64::INFINITY,
                }),
            },
            input: raw.to_string(),
        });
    }
    let path = PathBuf::from(raw);
    if !path.exists() {
        return Err(reebkit::Error::Invalid(format!(
            "`{raw}` is neither a catalog id nor a readable file"
        )));
    }
    let text = std::fs::read_to_string(&path)
        .map_err(|e| reebkit::Error::Invalid(format!("reading {raw}: {e}")))?;
    let loaded = manifold::load_spec(&text)?;
    Ok(Target::Contact {
        spec: loaded,
        input: text,
    })
}

/// Load a target all the way to a validated contact chart (for product and
/// prequant, which need working inputs).
fn resolve_contact(raw: &str, cfg: &SuiteConfig) -> reebkit::Result<(ContactChart, String)> {
    match resolve_target(raw, cfg)? {
        Target::Contact { spec, input } => {
            let contact = ContactChart::new(spec.eta, cfg.samples, cfg.seed)?;
            Ok((contact, input))
        }
        Target::Torus { .. } => Err(reebkit::Error::Invalid(format!(
            "`{raw}` is a period fixture, not a contact chart"
        ))),
    }
}

fn emit(reports: &[Report], json: &Option<PathBuf>) -> std::io::Result<ExitCode> {
    let mut stdout = std::io::stdout().lock();
    print_table(reports, &mut stdout)?;
    if let Some(path) = json {
        std::fs::write(path, to_json(reports))?;
    }
    Ok(if all_pass(reports) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run(cli: Cli) -> reebkit::Result<std::io::Result<ExitCode>> {
    let cfg = SuiteConfig {
        samples: cli.samples,
        seed: cli.seed,
        tol: cli.tol,
        step: cli.step,
        grid: cli.grid,
        horizon: cli.horizon,
    };
    match &cli.command {
        Command::Verify { target } => {
            match resolve_target(target, &cfg)? {
                Target::Contact { spec, input } => {
                    let digest = digest_of(&["verify", &input, &format!("{cfg:?}")]);
                    let reports = suite::run_verify(&spec, &cfg, &digest)?;
                    Ok(emit(&reports, &cli.json))
                }
                Target::Torus { k, l, input } => {
                    let digest = digest_of(&["verify", &input, &format!("{cfg:?}")]);
                    let reports = torus_reports(k, l, &cfg, &digest)?;
                    Ok(emit(&reports, &cli.json))
                }
            }
        }
        Command::Product {
            target1,
            target2,
            component,
        } => {
            let (c1, input1) = resolve_contact(target1, &cfg)?;
            let (c2, input2) = resolve_contact(target2, &cfg)?;
            let digest = digest_of(&["product", &input1, &input2, &format!("{cfg:?}")]);
            let component = match component {
                ComponentArg::Pos => Component::Pos,
                ComponentArg::Neg => Component::Neg,
            };
            let (product, reports) = suite::run_product(
                &c1,
                &c2,
                component,
                target1 == target2,
                &cfg,
                &digest,
            )?;
            if let Some(product) = product {
                println!(
                    "contact product chart: {} (dim {}, fiber `{}`)",
                    product.chart().name(),
                    product.chart().dim(),
                    product.t_name()
                );
            }
            Ok(emit(&reports, &cli.json))
        }
        Command::Period { rho1, rho2 } => {
            let rho1: Period = rho1.parse()?;
            let rho2: Period = rho2.parse()?;
            let digest = digest_of(&["period", &rho1.to_string(), &rho2.to_string()]);
            let start = Instant::now();
            let result = principal_product_period(rho1, rho2)?;
            let mut reports = vec![Report::new(
                "period_product",
                &digest,
                cli.seed,
                0,
                0.0,
                0.0,
                true,
                start.elapsed().as_secs_f64() * 1e3,
            )];
            match result.pair.ratio {
                Some((k, l)) => println!("rho = {}, k = {k}, l = {l}", result.rho),
                None => println!("rho = {}", result.rho),
            }
            if let (Period::Finite(r1), Period::Finite(r2)) = (rho1, rho2) {
                let start = Instant::now();
                let brute = torus_first_return(
                    r1.recip()?,
                    r2.recip()?,
                    Rational::new(1, 2)?,
                    Rational::new(1, 2)?,
                    64,
                )?;
                let agrees = result.rho == Period::Finite(brute);
                reports.push(Report::new(
                    "period_lattice_oracle",
                    &digest,
                    cli.seed,
                    129 * 129,
                    if agrees { 0.0 } else { f64::INFINITY },
                    0.0,
                    agrees,
                    start.elapsed().as_secs_f64() * 1e3,
                ));
            }
            Ok(emit(&report::sort(reports), &cli.json))
        }
        Command::Prequant {
            target,
            hamiltonian,
            hbar,
        } => {
            let digest = digest_of(&["prequant", target, hamiltonian, &format!("{cfg:?}")]);
            let pcd = if target == "darboux-data" {
                darboux_circle_data(Rational::one(), cfg.samples.min(50), cfg.seed)?
            } else {
                let (contact, _) = resolve_contact(target, &cfg)?;
                normal_form_data(contact, &cfg)?
            };
            let reports = suite::run_prequant(&pcd, hamiltonian, *hbar, &cfg, &digest)?;
            Ok(emit(&reports, &cli.json))
        }
    }
}

/// Interpret a contact chart as principal normal-form data: the fiber is the
/// coordinate whose eta-coefficient is the constant 1. The period is taken
/// as infinite (supply --hbar); the darboux-data fixture covers the circle
/// case.
fn normal_form_data(
    contact: ContactChart,
    cfg: &SuiteConfig,
) -> reebkit::Result<PrincipalContactData> {
    let chart = contact.chart().clone();
    let fiber = (0..chart.dim())
        .find(|&i| contact.eta().coeff(&[i]).as_const() == Some(1.0))
        .ok_or_else(|| {
            reebkit::Error::NotNormalForm(
                "no coordinate with a constant-1 eta coefficient".into(),
            )
        })?;
    let name = chart.coord(fiber).to_string();
    PrincipalContactData::new(contact, &name, Period::Infinite, cfg.samples.min(50), cfg.seed)
}

fn torus_reports(k: i64, l: i64, cfg: &SuiteConfig, digest: &str) -> reebkit::Result<Vec<Report>> {
    use reebkit::dynamics::minimal_period;

    let descriptor = load(CatalogId::TorusFixture(k, l), cfg.samples, cfg.seed)?;
    let fixture = descriptor.torus_fixture().unwrap();
    let mut reports = Vec::new();

    let start = Instant::now();
    let result = minimal_period(
        &fixture.field,
        &[0.15, 0.7],
        4.0 * fixture.expected_point_return,
        1e-4,
        cfg.step,
    )?;
    let residual = result
        .period()
        .map(|p| (p - fixture.expected_point_return).abs())
        .unwrap_or(f64::INFINITY);
    reports.push(Report::new(
        "torus_point_return",
        digest,
        cfg.seed,
        1,
        residual,
        1e-8,
        residual < 1e-8,
        start.elapsed().as_secs_f64() * 1e3,
    ));

    let start = Instant::now();
    let closed = principal_product_period(
        Period::finite(fixture.rho1)?,
        Period::finite(fixture.rho2)?,
    )?;
    let brute = torus_first_return(
        fixture.rho1.recip()?,
        fixture.rho2.recip()?,
        Rational::new(1, 2)?,
        Rational::new(1, 2)?,
        64,
    )?;
    let agrees = closed.rho == Period::Finite(brute);
    println!("rho = {}, k = {k}, l = {l}", closed.rho);
    reports.push(Report::new(
        "torus_period_lemma",
        digest,
        cfg.seed,
        129 * 129,
        if agrees { 0.0 } else { f64::INFINITY },
        0.0,
        agrees,
        start.elapsed().as_secs_f64() * 1e3,
    ));
    Ok(report::sort(reports))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Ok(code)) => code,
        Ok(Err(io_err)) => {
            let _ = writeln!(std::io::stderr(), "io error: {io_err}");
            ExitCode::from(2)
        }
        Err(err) => {
            let _ = writeln!(std::io::stderr(), "error: {err}");
            ExitCode::from(2)
        }
    }
}
