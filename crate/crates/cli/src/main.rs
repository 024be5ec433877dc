use std::io::Read as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nijlie::oracle::EnumerationBudget;
use nijlie::Field;

use nijlie_cli::document::{self, Document};
use nijlie_cli::ops::{self, CmdOutput, Format, Globals};
use nijlie_cli::{exit_code, CliError};

/// Exact tools for Nijenhuis Lie algebras: validation, deformation,
/// extensions, cohomology, inducibility, and brute-force cross-checks.
#[derive(Parser)]
#[command(name = "nijlie", version, max_term_width = 100)]
struct Cli {
    /// Candidate ceiling for exhaustive searches (default from
    /// NIJLIE_BUDGET, then 1048576)
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Field the documents must live over: Q or F<p> (for `catalog`,
    /// the field to construct over)
    #[arg(long, global = true)]
    field: Option<String>,

    /// Output style
    #[arg(long, global = true, value_enum, default_value_t = Format::Report)]
    format: Format,

    /// Skip validating every document object on load
    #[arg(long, global = true)]
    no_validate: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate every object of a document (or one, with --object)
    Check {
        /// Document path, or - for stdin
        file: String,
        /// Restrict the check to one named object
        #[arg(long)]
        object: Option<String>,
    },
    /// Emit the deformed algebra of a Nijenhuis object
    Deform {
        file: String,
        /// Name of a nijenhuis object
        #[arg(long)]
        object: String,
    },
    /// Second cohomology of a module context
    #[command(name = "h2")]
    H2 {
        file: String,
        /// Name of a nij_representation object
        #[arg(long)]
        context: String,
    },
    /// Build the extension a cocycle encodes
    Extend {
        file: String,
        /// Name of a cocycle_nab or cocycle_ab object
        #[arg(long)]
        cocycle: String,
    },
    /// Extract the cocycle of an extension at a section
    Extract {
        file: String,
        /// Name of an extension object
        #[arg(long)]
        extension: String,
        /// Name of a linear_map to use as the section (default: the
        /// canonical section)
        #[arg(long)]
        section: Option<String>,
    },
    /// Decide whether two cocycles are equivalent
    Equiv {
        file: String,
        /// First cocycle name
        #[arg(long, visible_alias = "first")]
        a: String,
        /// Second cocycle name
        #[arg(long, visible_alias = "second")]
        b: String,
    },
    /// Decide inducibility of a pair on an extension
    Wells {
        #[command(subcommand)]
        cmd: WellsCmd,
    },
    /// Group/space bookkeeping along the induced map of an extension
    Sequence {
        #[command(subcommand)]
        cmd: SequenceCmd,
    },
    /// Exhaustive brute-force cross-checks over prime fields
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
    /// Emit a built-in example document
    Catalog {
        /// Entry name; an unknown name lists the catalog
        name: String,
        /// Dimension (identity-nijenhuis over the abelian algebra only)
        #[arg(long)]
        dim: Option<usize>,
        /// Base algebra for identity-nijenhuis: abelian, aff1,
        /// heisenberg, or sl2
        #[arg(long)]
        algebra: Option<String>,
    },
}

#[derive(Subcommand)]
enum WellsCmd {
    /// Automorphism pairs (beta on the kernel, alpha on the base)
    Aut {
        file: String,
        #[arg(long)]
        extension: String,
        /// Name of a pair object: kernel_map beta, base_map alpha
        #[arg(long)]
        pair: String,
    },
    /// Derivation pairs (d_V on the module, d_G on the base)
    Der {
        file: String,
        #[arg(long)]
        extension: String,
        /// Name of a pair object: kernel_map d_V, base_map d_G
        #[arg(long)]
        pair: String,
    },
}

#[derive(Subcommand)]
enum SequenceCmd {
    /// Automorphism groups: orders, restriction image, inducible pairs
    Aut {
        file: String,
        #[arg(long)]
        extension: String,
    },
    /// Derivation spaces: dimensions along the sequence
    Der {
        file: String,
        #[arg(long)]
        extension: String,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Count all Nijenhuis operators on an algebra by sweeping matrices
    Nijenhuis {
        file: String,
        #[arg(long)]
        algebra: String,
    },
    /// Sweep module cocycles and compare class counts with cohomology
    Cocycles {
        file: String,
        #[arg(long)]
        context: String,
    },
    /// Compare cocycle equivalence with extension isomorphism classes
    Correspondence {
        file: String,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
    /// Compare structured inducibility verdicts with exhaustive lifting
    Crosscheck {
        #[command(subcommand)]
        cmd: WellsCmd,
    },
}

fn parse_field(s: &str) -> Result<Field, CliError> {
    if s.eq_ignore_ascii_case("q") {
        return Ok(Field::Rational);
    }
    if let Some(rest) = s.strip_prefix('F').or_else(|| s.strip_prefix('f')) {
        if let Ok(p) = rest.parse::<u64>() {
            return Ok(Field::prime(p)?);
        }
    }
    Err(CliError::Usage(format!(
        "--field takes Q or F<p>, got '{s}'"
    )))
}

fn load(path: &str) -> Result<Document, CliError> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read '{path}': {e}")))?
    };
    Ok(document::parse(&text)?)
}

fn budget_from(cli_budget: Option<u64>) -> Result<u64, CliError> {
    if let Some(b) = cli_budget {
        return Ok(b);
    }
    match std::env::var("NIJLIE_BUDGET") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("NIJLIE_BUDGET must be an integer, got '{s}'"))),
        Err(_) => Ok(EnumerationBudget::default().max_candidates),
    }
}

fn run(cli: Cli) -> Result<CmdOutput, CliError> {
    let globals = Globals {
        budget: budget_from(cli.budget)?,
        format: cli.format,
    };
    let required_field = cli.field.as_deref().map(parse_field).transpose()?;

    // Catalog builds documents rather than reading them.
    if let Cmd::Catalog { name, dim, algebra } = &cli.cmd {
        let f = required_field.unwrap_or(Field::Rational);
        return ops::run_catalog(name, *dim, algebra.as_deref(), f, &globals);
    }

    let (path, skip_gate): (&str, bool) = match &cli.cmd {
        Cmd::Check { file, .. } => (file, true),
        Cmd::Deform { file, .. }
        | Cmd::H2 { file, .. }
        | Cmd::Extend { file, .. }
        | Cmd::Extract { file, .. }
        | Cmd::Equiv { file, .. } => (file, false),
        Cmd::Wells { cmd }
        | Cmd::Oracle {
            cmd: OracleCmd::Crosscheck { cmd },
        } => match cmd {
            WellsCmd::Aut { file, .. } | WellsCmd::Der { file, .. } => (file, false),
        },
        Cmd::Sequence { cmd } => match cmd {
            SequenceCmd::Aut { file, .. } | SequenceCmd::Der { file, .. } => (file, false),
        },
        Cmd::Oracle {
            cmd: OracleCmd::Nijenhuis { file, .. },
        }
        | Cmd::Oracle {
            cmd: OracleCmd::Cocycles { file, .. },
        }
        | Cmd::Oracle {
            cmd: OracleCmd::Correspondence { file, .. },
        } => (file, false),
        Cmd::Catalog { .. } => unreachable!("handled above"),
    };

    let doc = load(path)?;
    if let Some(f) = required_field {
        if f != doc.field {
            return Err(CliError::Usage(format!(
                "document is over {}, but --field {f} was required",
                doc.field
            )));
        }
    }
    if !skip_gate && !cli.no_validate {
        if let Some(failure) = ops::preflight(&doc)? {
            return Ok(failure);
        }
    }

    match &cli.cmd {
        Cmd::Check { object, .. } => ops::run_check(&doc, object.as_deref(), &globals),
        Cmd::Deform { object, .. } => ops::run_deform(&doc, object, &globals),
        Cmd::H2 { context, .. } => ops::run_h2(&doc, context, &globals),
        Cmd::Extend { cocycle, .. } => ops::run_extend(&doc, cocycle, &globals),
        Cmd::Extract {
            extension, section, ..
        } => ops::run_extract(&doc, extension, section.as_deref(), &globals),
        Cmd::Equiv { a, b, .. } => ops::run_equiv(&doc, a, b, &globals),
        Cmd::Wells {
            cmd: WellsCmd::Aut {
                extension, pair, ..
            },
        } => ops::run_wells_aut(&doc, extension, pair, &globals),
        Cmd::Wells {
            cmd: WellsCmd::Der {
                extension, pair, ..
            },
        } => ops::run_wells_der(&doc, extension, pair, &globals),
        Cmd::Sequence {
            cmd: SequenceCmd::Aut { extension, .. },
        } => ops::run_sequence_aut(&doc, extension, &globals),
        Cmd::Sequence {
            cmd: SequenceCmd::Der { extension, .. },
        } => ops::run_sequence_der(&doc, extension, &globals),
        Cmd::Oracle {
            cmd: OracleCmd::Nijenhuis { algebra, .. },
        } => ops::run_oracle_nijenhuis(&doc, algebra, &globals),
        Cmd::Oracle {
            cmd: OracleCmd::Cocycles { context, .. },
        } => ops::run_oracle_cocycles(&doc, context, &globals),
        Cmd::Oracle {
            cmd: OracleCmd::Correspondence { source, target, .. },
        } => ops::run_oracle_correspondence(&doc, source, target, &globals),
        Cmd::Oracle {
            cmd:
                OracleCmd::Crosscheck {
                    cmd:
                        WellsCmd::Aut {
                            extension, pair, ..
                        },
                },
        } => ops::run_oracle_crosscheck(&doc, extension, pair, false, &globals),
        Cmd::Oracle {
            cmd:
                OracleCmd::Crosscheck {
                    cmd:
                        WellsCmd::Der {
                            extension, pair, ..
                        },
                },
        } => ops::run_oracle_crosscheck(&doc, extension, pair, true, &globals),
        Cmd::Catalog { .. } => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(3);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            eprint!("{}", out.stderr);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
