use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dismantle_cli::commands::{self, Caps, ExportFormat};
use dismantle_cli::corpus::Bounds;

#[derive(Parser)]
#[command(name = "dismantle", version, about = "Subgroup lattices of finite groups and their dismantlability")]
struct Cli {
    #[command(flatten)]
    caps: CapArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CapArgs {
    /// Largest group order that will be built.
    #[arg(long, global = true, env = "DISMANTLE_ORDER_CAP", default_value_t = dismantle::group::DEFAULT_ORDER_CAP)]
    order_cap: usize,
    /// Largest number of subgroups that will be enumerated
    /// [default: 20000, or 40000 for verify-paper].
    #[arg(long, global = true, env = "DISMANTLE_SUBGROUP_LIMIT")]
    subgroup_limit: Option<usize>,
    /// Largest crown searched for a certificate (default: automatic).
    #[arg(long, global = true, env = "DISMANTLE_CROWN_BOUND")]
    crown_bound: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one group; exits non-zero when prediction and computation disagree.
    Check {
        spec: String,
        /// Print the JSON report instead of text.
        #[arg(long)]
        json: bool,
        /// Include wall-clock timings in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Run the classification suite over the built-in corpus.
    VerifyPaper {
        #[arg(long, default_value_t = 48)]
        dihedral_max: usize,
        #[arg(long, default_value_t = 128)]
        abelian_max: usize,
        /// Largest dihedral, quaternion and quasi-dihedral 2-group.
        #[arg(long, default_value_t = 64)]
        two_group_max: usize,
        #[arg(long)]
        json: bool,
    },
    /// Membership and metacyclicity for each conjugacy class of subgroups.
    Survey {
        spec: String,
        #[arg(long, default_value_t = 1)]
        min_order: usize,
        #[arg(long)]
        json: bool,
    },
    /// Write the Hasse diagram or the JSON report.
    Export {
        spec: String,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

const EXIT_DISAGREE: u8 = 1;
const EXIT_ERROR: u8 = 2;

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn run(cli: Cli) -> Result<u8, String> {
    let default_limit = match cli.command {
        Command::VerifyPaper { .. } => commands::SUITE_SUBGROUP_LIMIT,
        _ => dismantle::subgroups::DEFAULT_SUBGROUP_LIMIT,
    };
    let caps = Caps {
        order_cap: cli.caps.order_cap,
        subgroup_limit: cli.caps.subgroup_limit.unwrap_or(default_limit),
        crown_bound: cli.caps.crown_bound,
    };
    match cli.command {
        Command::Check {
            spec,
            json: as_json,
            timings,
        } => {
            let r = commands::check(&spec, &caps, timings).map_err(|e| e.to_string())?;
            print!("{}", if as_json { json(&r) } else { commands::render_report(&r) });
            Ok(if r.agrees { 0 } else { EXIT_DISAGREE })
        }
        Command::VerifyPaper {
            dihedral_max,
            abelian_max,
            two_group_max,
            json: as_json,
        } => {
            let bounds = Bounds {
                dihedral_max,
                abelian_max,
                two_group_max,
            };
            let suite = commands::verify_paper(&bounds, &caps);
            print!("{}", if as_json { json(&suite) } else { commands::render_suite(&suite) });
            Ok(if suite.passed() { 0 } else { EXIT_DISAGREE })
        }
        Command::Survey {
            spec,
            min_order,
            json: as_json,
        } => {
            let s = commands::survey(&spec, min_order, &caps).map_err(|e| e.to_string())?;
            print!("{}", if as_json { json(&s) } else { commands::render_survey(&s) });
            Ok(0)
        }
        Command::Export { spec, format, out } => {
            let format = match format {
                Format::Dot => ExportFormat::Dot,
                Format::Json => ExportFormat::Json,
            };
            let text = commands::export(&spec, format, &caps).map_err(|e| e.to_string())?;
            match out {
                Some(path) => std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
