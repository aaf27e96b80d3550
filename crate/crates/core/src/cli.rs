//! The `drops` command line tool.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{verify_pendent, verify_sessile};
use crate::error::{DropError, Result};
use crate::geometry::{pendent_volume, volumes, NoGravityProfile};
use crate::integrate::integrate_ivp;
use crate::io::{
    emit, family_csv, profile_csv, read_document, to_json, AnalysisDoc, Document, SolutionDoc,
};
use crate::params::{default_h_init, CapillaryParams, IvpConfig};
use crate::pendent::{
    analyze, default_scan_radius, extrema_decay_check, max_drop_bounds, ratio_bounds_check,
};
use crate::profile::DropProfile;
use crate::shooting::{ContactData, Shooter, ShootingResult};
use crate::sweep::{foliate, Execution};
use crate::tables::{estimate_table, height_table, render_estimates, render_heights};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BRACKET: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "drops",
    version,
    about = "Stationary spacelike capillary drops in Lorentz-Minkowski space"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    #[value(name = "1")]
    Heights,
    #[value(name = "2")]
    Estimates,
}

#[derive(Debug, Clone, Args)]
pub struct Tolerances {
    /// Relative tolerance of the integrator.
    #[arg(long, default_value_t = 1e-10)]
    pub rel_tol: f64,
    /// Absolute tolerance of the integrator.
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
}

impl Tolerances {
    fn config(&self) -> Result<IvpConfig> {
        let cfg = IvpConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            h_init: default_h_init(self.rel_tol),
            ..IvpConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Output file; standard output when omitted. Relative paths are placed
    /// under $DROPS_OUTPUT_DIR when it is set.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a boundary value problem for a drop with contact angle beta.
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        /// Contact radius.
        #[arg(long, group = "mode")]
        radius: Option<f64>,
        /// Height of the supporting plane (use with kappa > 0; pendent drops hang from u = 0).
        #[arg(long, group = "mode", allow_hyphen_values = true)]
        plane: Option<f64>,
        /// Prescribed volume.
        #[arg(long, group = "mode")]
        volume: Option<f64>,
        /// Pendent drop hanging from the plane u = 0 (kappa < 0 only).
        #[arg(long, group = "mode")]
        hanging: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Attach the bounds report (sessile and pendent drops).
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        tol: Tolerances,
        #[command(flatten)]
        out: Output,
    },
    /// Zeros, extrema and inflections of a pendent profile.
    Analyze {
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long, allow_hyphen_values = true)]
        u0: f64,
        /// Scan radius (default 25 / sqrt(-kappa)).
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        tol: Tolerances,
        #[command(flatten)]
        out: Output,
    },
    /// Check the a priori estimates; exits with status 4 on any failure.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        /// Apex height (with --radius for sessile drops, alone for pendent ones).
        #[arg(long, allow_hyphen_values = true)]
        u0: Option<f64>,
        /// Contact angle (sessile drops, with --radius).
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        #[arg(long)]
        radius: Option<f64>,
        /// Scan radius for pendent profiles.
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        tol: Tolerances,
        #[command(flatten)]
        out: Output,
    },
    /// Sessile-drop tables over kappa = 1..4, u0 = 1..5.
    Table {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
        /// Compute rows on one thread.
        #[arg(long)]
        sequential: bool,
        #[command(flatten)]
        tol: Tolerances,
        #[command(flatten)]
        out: Output,
    },
    /// Profiles u(r; u0) for evenly spaced apex heights.
    Foliate {
        #[arg(long, allow_hyphen_values = true)]
        kappa: f64,
        #[arg(long, allow_hyphen_values = true)]
        u0_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        u0_max: f64,
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long)]
        r_max: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        sequential: bool,
        #[command(flatten)]
        tol: Tolerances,
        #[command(flatten)]
        out: Output,
    },
    /// Re-serialize a stored JSON document, or its profile as CSV.
    Export {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        out: Output,
    },
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit status.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &DropError) -> i32 {
    match e {
        DropError::InvalidArgument(_) | DropError::InvalidConfig(_) => EXIT_USAGE,
        DropError::BracketFailure(_) => EXIT_BRACKET,
        _ => EXIT_FAILURE,
    }
}

fn usage(msg: impl Into<String>) -> DropError {
    DropError::InvalidArgument(msg.into())
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

pub fn run(command: Command) -> Result<i32> {
    match command {
        Command::Solve {
            kappa,
            beta,
            radius,
            plane,
            volume,
            hanging,
            format,
            verify,
            tol,
            out,
        } => {
            let shooter = Shooter {
                ivp: tol.config()?,
                ..Shooter::default()
            };
            let (mode, solution) = solve(&shooter, kappa, beta, radius, plane, volume, hanging)?;
            let drop_volume = drop_volume(&solution, kappa)?;
            let report = if verify && solution.contact.beta > 0.0 && solution.u0 != 0.0 {
                Some(if kappa > 0.0 {
                    verify_sessile(&solution.profile, &solution.contact, &shooter.ivp)?
                } else if kappa < 0.0 {
                    verify_pendent(&solution.profile)?
                } else {
                    return Err(usage("--verify needs kappa != 0"));
                })
            } else {
                None
            };
            let failed = report.as_ref().is_some_and(|r| !r.all_pass());
            let text = match format {
                Format::Json => to_json(&Document::Solution(SolutionDoc {
                    mode: mode.into(),
                    solution,
                    volume: drop_volume,
                    report,
                }))?,
                Format::Csv => profile_csv(&solution.profile)?,
            };
            emit(out.output.as_deref(), &text)?;
            Ok(if failed { EXIT_VERIFY } else { EXIT_OK })
        }
        Command::Analyze {
            kappa,
            u0,
            r_max,
            format,
            tol,
            out,
        } => {
            let cfg = tol.config()?;
            if !(kappa < 0.0) {
                return Err(usage("analyze needs kappa < 0"));
            }
            let params = CapillaryParams::with_kappa(kappa)?;
            let r_max = r_max.unwrap_or_else(|| default_scan_radius(kappa));
            let profile = integrate_ivp(&params, u0, r_max, &cfg)?;
            let features = analyze(&profile)?;
            let text = match format {
                Format::Csv => profile_csv(&profile)?,
                Format::Json => {
                    let mut report = extrema_decay_check(&features);
                    report.extend(ratio_bounds_check(&profile, &features)?);
                    report.extend(max_drop_bounds(&profile, &features)?);
                    to_json(&Document::Analysis(AnalysisDoc {
                        features,
                        report,
                        profile,
                    }))?
                }
            };
            emit(out.output.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            kappa,
            u0,
            beta,
            radius,
            r_max,
            json,
            tol,
            out,
        } => {
            let cfg = tol.config()?;
            let params = CapillaryParams::with_kappa(kappa)?;
            let report = if kappa > 0.0 {
                let radius = radius.ok_or_else(|| usage("sessile verification needs --radius"))?;
                let (profile, contact) = match (u0, beta) {
                    (Some(u0), None) => {
                        let p = integrate_ivp(&params, u0, radius, &cfg)?;
                        let c = ContactData::at(&p, radius)?;
                        (p, c)
                    }
                    (None, Some(beta)) => {
                        let shooter = Shooter {
                            ivp: cfg,
                            ..Shooter::default()
                        };
                        let s = shooter.sessile_by_radius(kappa, beta, radius)?;
                        (s.profile, s.contact)
                    }
                    _ => return Err(usage("give exactly one of --u0 and --beta")),
                };
                verify_sessile(&profile, &contact, &cfg)?
            } else if kappa < 0.0 {
                let u0 = u0.ok_or_else(|| usage("pendent verification needs --u0"))?;
                let r_max = r_max.unwrap_or_else(|| default_scan_radius(kappa));
                let profile = integrate_ivp(&params, u0, r_max, &cfg)?;
                verify_pendent(&profile)?
            } else {
                return Err(usage("verification needs kappa != 0"));
            };
            let text = if json {
                to_json(&report)?
            } else {
                report.to_string()
            };
            emit(out.output.as_deref(), &text)?;
            let t = report.tally();
            eprintln!(
                "{} passed, {} failed, {} informational",
                t.passed, t.failed, t.informational
            );
            Ok(if report.all_pass() {
                EXIT_OK
            } else {
                EXIT_VERIFY
            })
        }
        Command::Table {
            which,
            format,
            sequential,
            tol,
            out,
        } => {
            let cfg = tol.config()?;
            let exec = execution(sequential);
            let text = match which {
                Which::Heights => {
                    let rows = height_table(&cfg, exec)?;
                    match format {
                        TableFormat::Text => render_heights(&rows),
                        TableFormat::Json => to_json(&rows)?,
                        TableFormat::Csv => table_csv(
                            "kappa,u0,beta,q,q_bound,volume,volume_bound",
                            rows.iter().map(|r| (r.kappa, r.u0, r.values().to_vec())),
                        ),
                    }
                }
                Which::Estimates => {
                    let rows = estimate_table(&cfg, exec)?;
                    match format {
                        TableFormat::Text => render_estimates(&rows),
                        TableFormat::Json => to_json(&rows)?,
                        TableFormat::Csv => table_csv(
                            "kappa,u0,beta,lower,u,upper",
                            rows.iter().map(|r| (r.kappa, r.u0, r.values().to_vec())),
                        ),
                    }
                }
            };
            emit(out.output.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Foliate {
            kappa,
            u0_min,
            u0_max,
            count,
            r_max,
            format,
            sequential,
            tol,
            out,
        } => {
            let cfg = tol.config()?;
            if count == 0 || !(u0_min <= u0_max) {
                return Err(usage("need count >= 1 and u0_min <= u0_max"));
            }
            let u0s: Vec<f64> = if count == 1 {
                vec![u0_min]
            } else {
                (0..count)
                    .map(|i| u0_min + (u0_max - u0_min) * i as f64 / (count - 1) as f64)
                    .collect()
            };
            let family = foliate(kappa, &u0s, r_max, &cfg, execution(sequential))?;
            let text = match format {
                Format::Csv => family_csv(&family)?,
                Format::Json => to_json(&family)?,
            };
            emit(out.output.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Export { input, format, out } => {
            let doc = read_document(&input)?;
            let text = match format {
                Format::Json => to_json(&doc)?,
                Format::Csv => profile_csv(doc.profile())?,
            };
            emit(out.output.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
    }
}

fn table_csv(header: &str, rows: impl Iterator<Item = (f64, f64, Vec<f64>)>) -> String {
    let mut out = format!("{header}\n");
    for (k, u0, vals) in rows {
        out.push_str(&format!("{k},{u0}"));
        for v in vals {
            out.push(',');
            out.push_str(&crate::io::fmt_f64(v));
        }
        out.push('\n');
    }
    out
}

fn solve(
    shooter: &Shooter,
    kappa: f64,
    beta: f64,
    radius: Option<f64>,
    plane: Option<f64>,
    volume: Option<f64>,
    hanging: bool,
) -> Result<(&'static str, ShootingResult)> {
    if kappa == 0.0 {
        let radius =
            radius.ok_or_else(|| usage("kappa = 0 is solved in closed form and needs --radius"))?;
        return Ok(("no_gravity", no_gravity(beta, radius)?));
    }
    match (radius, plane, volume, hanging, kappa > 0.0) {
        (Some(r), None, None, false, true) => {
            Ok(("sessile_radius", shooter.sessile_by_radius(kappa, beta, r)?))
        }
        (Some(r), None, None, false, false) => {
            Ok(("pendent_radius", shooter.pendent_by_radius(kappa, beta, r)?))
        }
        (None, Some(c), None, false, true) => {
            Ok(("sessile_plane", shooter.sessile_by_plane(kappa, beta, c)?))
        }
        (None, None, None, true, false) => {
            Ok(("pendent_plane", shooter.pendent_by_plane(kappa, beta)?))
        }
        (None, None, Some(v), false, true) => {
            Ok(("sessile_volume", shooter.sessile_by_volume(kappa, beta, v)?))
        }
        (None, None, Some(v), false, false) => {
            Ok(("pendent_volume", shooter.pendent_by_volume(kappa, beta, v)?))
        }
        (None, None, None, false, _) => {
            Err(usage("give one of --radius, --plane, --volume, --hanging"))
        }
        (None, Some(_), None, false, false) => {
            Err(usage("pendent drops hang from u = 0; use --hanging"))
        }
        _ => Err(usage("--hanging applies to kappa < 0 only")),
    }
}

/// Zero-gravity cap through the contact circle at height 0, with
/// `lambda = 2 sinh(beta) / R` so that the profile satisfies the ODE.
fn no_gravity(beta: f64, radius: f64) -> Result<ShootingResult> {
    let cap = NoGravityProfile::new(beta, radius, 0.0)?;
    let params = CapillaryParams::new(0.0, 2.0 * beta.sinh() / radius)?;
    let samples = cap.samples(200);
    let u0 = samples[0].u;
    let profile = DropProfile::from_samples(params, u0, samples)?;
    Ok(ShootingResult {
        contact: ContactData {
            radius,
            beta,
            u_r: cap.u(radius),
        },
        profile,
        u0,
        iterations: 0,
        bracket: (u0, u0),
        notes: Vec::new(),
    })
}

fn drop_volume(solution: &ShootingResult, kappa: f64) -> Result<Option<f64>> {
    if solution.contact.beta <= 0.0 || solution.u0 == 0.0 || kappa == 0.0 {
        return Ok(None);
    }
    if kappa > 0.0 {
        Ok(Some(volumes(&solution.profile, &solution.contact)?.drop))
    } else {
        Ok(pendent_volume(&solution.profile, solution.contact.radius).ok())
    }
}
