use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pizzeria_core::blowup::{hsiang_pati_data, resolve};
use pizzeria_core::exact::set_truncation_cap;
use pizzeria_core::invariants::{contact_via_resolution, nu_by_substitution, width};
use pizzeria_core::pizza::{build_pizza, decide_contact_equivalence, Verdict};
use pizzeria_core::puiseux::newton_puiseux;
use pizzeria_core::validation::{run_criterion, CRITERIA};
use pizzeria_core::{parse_arc, parse_germ, Error};

const CAP_VARIABLE: &str = "PIZZERIA_TRUNC_CAP";

#[derive(Parser)]
#[command(
    name = "pizzeria",
    version,
    about = "Exact metric invariants of real plane function germs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Puiseux branches of a germ on the four sides.
    Puiseux { germ: String },
    /// Embedded resolution: components with (l, m, lbar, r) and the dual graph.
    Resolve {
        germ: String,
        /// Also write the dual graph in DOT format to this file.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Contact order of two arcs, from the resolution of the germ.
    Contact {
        germ: String,
        first: String,
        second: String,
    },
    /// Normalized order of the germ along an arc.
    Nu { germ: String, arc: String },
    /// Width of the germ along an arc.
    Width { germ: String, arc: String },
    /// Canonical pizza of a germ.
    Pizza {
        germ: String,
        #[arg(long)]
        json: bool,
    },
    /// Decide contact equivalence; exit 0 when equivalent, 1 otherwise.
    Equiv { first: String, second: String },
    /// Run the built-in corpus and oracle cross-checks.
    Selftest,
}

enum Failure {
    Usage(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::NotAGerm(_) | Error::ExponentBelowOne(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Engine(other),
        }
    }
}

fn apply_cap() -> Result<(), Failure> {
    let Ok(text) = std::env::var(CAP_VARIABLE) else {
        return Ok(());
    };
    match text.trim().parse::<u64>() {
        Ok(cap) if cap > 0 => {
            set_truncation_cap(cap);
            Ok(())
        }
        _ => Err(Failure::Usage(format!(
            "{CAP_VARIABLE} must be a positive integer, got {text:?}"
        ))),
    }
}

fn run(command: Command) -> Result<(String, ExitCode), Failure> {
    apply_cap()?;
    let mut out = String::new();
    let mut code = ExitCode::SUCCESS;
    match command {
        Command::Puiseux { germ } => {
            let f = parse_germ(&germ)?;
            let branches = newton_puiseux(&f);
            if branches.is_empty() {
                out.push_str("no branches\n");
            }
            for b in branches {
                let _ = writeln!(out, "{}", b.to_text());
            }
        }
        Command::Resolve { germ, dot } => {
            let f = parse_germ(&germ)?;
            let (tree, _) = resolve(&f)?;
            tree.certify()?;
            let measured = hsiang_pati_data(&tree)?;
            for c in &tree.components {
                let lbar = measured.get(&c.id).map_or(c.lbar, |d| d.lbar);
                let _ = writeln!(out, "lbar={lbar} E{} l={} m={} r={}", c.id, c.l, c.m, c.r);
            }
            let (edges, incidences) = tree.dual_graph();
            for (a, b) in edges {
                let _ = writeln!(out, "edge E{a} -- E{b}");
            }
            for (component, branch) in incidences {
                let _ = writeln!(out, "branch B{branch} meets E{component}");
            }
            if let Some(path) = dot {
                std::fs::write(&path, tree.to_dot())
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
        }
        Command::Contact {
            germ,
            first,
            second,
        } => {
            let f = parse_germ(&germ)?;
            let (a, b) = (parse_arc(&first)?, parse_arc(&second)?);
            let (tree, _) = resolve(&f)?;
            let la = pizzeria_core::blowup::land_arc(&tree, &a)?;
            let lb = pizzeria_core::blowup::land_arc(&tree, &b)?;
            let _ = writeln!(out, "{}", contact_via_resolution(&tree, &la, &lb)?);
        }
        Command::Nu { germ, arc } => {
            let (f, a) = (parse_germ(&germ)?, parse_arc(&arc)?);
            let _ = writeln!(out, "{}", nu_by_substitution(&f, &a)?);
        }
        Command::Width { germ, arc } => {
            let (f, a) = (parse_germ(&germ)?, parse_arc(&arc)?);
            let _ = writeln!(out, "{}", width(&f, &a)?);
        }
        Command::Pizza { germ, json } => {
            let pizza = build_pizza(&parse_germ(&germ)?)?.canonicalize();
            if json {
                let _ = writeln!(out, "{}", pizza.to_json());
            } else {
                let _ = writeln!(out, "germ {}", pizza.germ);
                for (k, slice) in pizza.slices.iter().enumerate() {
                    let _ = write!(out, "slice {k}: {}", slice.datum());
                    if let Some((from, to)) = &slice.boundary {
                        let side = |b: &pizzeria_core::pizza::Boundary| {
                            b.arc
                                .as_ref()
                                .map_or_else(|| "generic arc".to_string(), |a| a.to_text())
                        };
                        let _ = write!(out, " from {} to {}", side(from), side(to));
                    }
                    out.push('\n');
                }
            }
        }
        Command::Equiv { first, second } => {
            let verdict = decide_contact_equivalence(&parse_germ(&first)?, &parse_germ(&second)?)?;
            if matches!(verdict, Verdict::NotEquivalent(_)) {
                code = ExitCode::from(1);
            }
            let _ = writeln!(out, "{verdict}");
        }
        Command::Selftest => {
            let mut passed = true;
            for criterion in CRITERIA {
                let report = run_criterion(criterion);
                passed &= report.passed();
                let _ = writeln!(out, "{report}");
            }
            let _ = writeln!(
                out,
                "{}",
                if passed {
                    "selftest passed"
                } else {
                    "selftest FAILED"
                }
            );
            if !passed {
                code = ExitCode::from(1);
            }
        }
    }
    Ok((out, code))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok((out, code)) => {
            print!("{out}");
            code
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
