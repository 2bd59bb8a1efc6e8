use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "sofic-wb",
    version,
    about = "Finite permutation group workbench"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Group catalog file; defaults to $SOFIC_WB_CATALOG_DIR/default.catalog.
    #[arg(long, global = true, value_name = "FILE")]
    pub catalog: Option<PathBuf>,

    /// Element-set cap for enumerated groups and materialized permutations.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub cap: u64,

    /// Candidate-assignment budget for searches and solvers.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub budget: u64,

    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Report file (a directory for `replay`).
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LengthChoice {
    Hamming,
    Cayley,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hamming length of an element, and its Cayley-conjugation length when --X is given.
    Length {
        #[arg(long)]
        group: String,
        #[arg(long)]
        perm: String,
        /// Base elements of the Cayley-conjugation length.
        #[arg(long = "X")]
        x: Vec<String>,
        /// Scale of the Cayley-conjugation length.
        #[arg(long)]
        n: Option<u32>,
    },
    /// The set C_n(X) of products of exactly n conjugates of X^{±1}.
    Consequences {
        #[arg(long)]
        group: String,
        #[arg(long = "X", required = true)]
        x: Vec<String>,
        #[arg(long)]
        n: usize,
        /// Omit the element lists.
        #[arg(long)]
        summary: bool,
    },
    /// Is Y disjoint from C_n(X)?
    Separate {
        #[arg(long)]
        group: String,
        #[arg(long = "X", required = true)]
        x: Vec<String>,
        #[arg(long = "Y", required = true)]
        y: Vec<String>,
        #[arg(long)]
        n: usize,
    },
    /// Ball-in-consequences check on an alternating group of degree at least 5.
    BrennerVerify {
        #[arg(long)]
        group: String,
        #[arg(long = "X", required = true)]
        x: Vec<String>,
        #[arg(long)]
        n: usize,
    },
    /// Even permutations supported in supp(x) lie in class(x)^4.
    SupportCover {
        #[arg(long)]
        group: String,
        /// A single element; all class representatives when omitted.
        #[arg(long = "X")]
        x: Option<String>,
    },
    /// Least consequence depths over class representatives.
    CoveringConstant {
        #[arg(long)]
        group: String,
        /// Also write the table as CSV.
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
    /// Re-verify a certificate (or a report carrying one).
    ApproxCheck {
        #[arg(long, value_name = "FILE")]
        cert: PathBuf,
    },
    /// Search the catalog for a homomorphism separating Y from Phi.
    ApproxSearch {
        #[arg(long, value_name = "FILE")]
        presentation: PathBuf,
        #[arg(long)]
        n: usize,
        /// Comma-separated group names; the whole catalog when omitted.
        #[arg(long)]
        groups: Option<String>,
        /// Skip tuples that are not least in their conjugation orbit.
        #[arg(long)]
        prune: bool,
    },
    /// Search for a homomorphism with ‖y‖ ≥ 1/2 and ‖x‖ < eps after amplification.
    SoficSearch {
        #[arg(long, value_name = "FILE")]
        presentation: PathBuf,
        #[arg(long, value_name = "P/Q")]
        eps: String,
        #[arg(long)]
        groups: Option<String>,
    },
    /// Solvability of a system in one group.
    EqSolve {
        #[arg(long)]
        group: String,
        #[arg(long, value_name = "FILE")]
        system: PathBuf,
        /// Record a witness for every constant tuple.
        #[arg(long)]
        witnesses: bool,
        /// Only visit constant tuples up to simultaneous conjugation.
        #[arg(long)]
        orbits: bool,
    },
    /// Solvability of a system across a catalog.
    EqSys {
        #[arg(long, value_name = "FILE")]
        system: PathBuf,
        #[arg(long)]
        groups: Option<String>,
    },
    /// Solvability over a group inside supplied overgroups.
    EqOver {
        #[arg(long)]
        group: String,
        #[arg(long, value_name = "FILE")]
        system: PathBuf,
        /// `H:diagonal` or `H:img1;img2;...` (images of the group's generators).
        #[arg(long)]
        embed: Vec<String>,
        #[arg(long)]
        witnesses: bool,
    },
    /// Exhaustive check of the length-function axioms.
    AxiomsCheck {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value_t = LengthChoice::Hamming)]
        length: LengthChoice,
        #[arg(long = "X")]
        x: Vec<String>,
        #[arg(long)]
        n: Option<u32>,
        /// Lines `p/q (cycles)`; unlisted elements get 0.
        #[arg(long, value_name = "FILE")]
        table: Option<PathBuf>,
    },
    /// Run every entry of a manifest and write the reports into --out.
    Replay {
        #[arg(long, value_name = "FILE")]
        manifest: PathBuf,
    },
    /// Re-run the command recorded in a report and compare results.
    VerifyReport {
        #[arg(long, value_name = "FILE")]
        report: PathBuf,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Length { .. } => "length",
            Command::Consequences { .. } => "consequences",
            Command::Separate { .. } => "separate",
            Command::BrennerVerify { .. } => "brenner-verify",
            Command::SupportCover { .. } => "support-cover",
            Command::CoveringConstant { .. } => "covering-constant",
            Command::ApproxCheck { .. } => "approx-check",
            Command::ApproxSearch { .. } => "approx-search",
            Command::SoficSearch { .. } => "sofic-search",
            Command::EqSolve { .. } => "eq-solve",
            Command::EqSys { .. } => "eq-sys",
            Command::EqOver { .. } => "eq-over",
            Command::AxiomsCheck { .. } => "axioms-check",
            Command::Replay { .. } => "replay",
            Command::VerifyReport { .. } => "verify-report",
        }
    }
}
