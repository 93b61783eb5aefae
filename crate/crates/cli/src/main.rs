//! `pmalg`: command-line access to finite pm-algebra computations.

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pmalg::algebra::{validate_capped, AlgebraFile, FiniteAlgebra};
use pmalg::constructions::{automorphisms, homomorphisms_capped, surjective_homs, DEFAULT_HOM_CAP};
use pmalg::free_bpk0::{oracle_sur_count_capped, DEFAULT_ORACLE_CAP};
use pmalg::terms::variety::{variety_membership_with, BetaRoute, JoinKind, MembershipQuery};
use pmalg::terms::{holds_capped, parse_identity};
use pmalg::{Error, ExactCountTable, SiDescriptor};

#[derive(Parser)]
#[command(name = "pmalg", version, about = "Finite pseudocomplemented De Morgan algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    StructuredText,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Expect {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Route {
    Dual,
    Exhaustive,
}

#[derive(Args, Clone)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,
    /// Largest accepted algebra.
    #[arg(long, env = "PMALG_CAP_ELEMENTS", default_value_t = 4096, global = true)]
    cap_elements: usize,
    /// Largest number of assignments or tuples to enumerate.
    #[arg(long, env = "PMALG_CAP_EVALS", default_value_t = 10_000_000, global = true)]
    cap_evals: u64,
}

#[derive(Args)]
struct AlgebraArg {
    /// Algebra document (JSON).
    #[arg(long)]
    algebra: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Check the pm-algebra axioms and report every violation.
    Validate {
        #[command(flatten)]
        input: AlgebraArg,
        #[command(flatten)]
        common: Common,
    },
    /// Print the dual space of prime filters.
    Dual {
        #[command(flatten)]
        input: AlgebraArg,
        #[command(flatten)]
        common: Common,
    },
    /// Print the congruence lattice with its C-subsets.
    Congruences {
        #[command(flatten)]
        input: AlgebraArg,
        #[command(flatten)]
        common: Common,
    },
    /// Decide simplicity and subdirect irreducibility.
    Classify {
        #[command(flatten)]
        input: AlgebraArg,
        #[command(flatten)]
        common: Common,
    },
    /// Check an identity such as "x & x' <= y | y'" exhaustively.
    Check {
        identity: String,
        #[command(flatten)]
        input: AlgebraArg,
        /// Exit with status 1 unless the outcome matches.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
        #[command(flatten)]
        common: Common,
    },
    /// Print membership in the varieties between PK and BPK0.
    Variety {
        #[command(flatten)]
        input: AlgebraArg,
        /// Largest n for V(B(n,m)) and the join varieties.
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        /// How the beta identities are decided.
        #[arg(long, value_enum, default_value = "dual")]
        beta_route: Route,
        #[command(flatten)]
        common: Common,
    },
    /// Emit B(i,m) as an algebra document.
    Build {
        /// Descriptor `i,m`.
        #[arg(long)]
        si: SiDescriptor,
        #[command(flatten)]
        common: Common,
    },
    /// Emit the direct product of the given algebras.
    Product {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Count (and optionally list) homomorphisms from A to B.
    Homs {
        a: PathBuf,
        /// Target; defaults to A.
        b: Option<PathBuf>,
        #[arg(long, conflicts_with = "auto")]
        surjective: bool,
        /// Automorphisms of A.
        #[arg(long)]
        auto: bool,
        /// Print every map.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Direct decomposition of the free BPK0-algebra on n generators.
    FreeDecomp {
        n: u32,
        /// Compare the counting formula with tuple enumeration for these k.
        #[arg(long, value_delimiter = ',')]
        oracle_verify: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Re-emit an algebra as a normalized document (or its lattice as DOT).
    Export {
        #[command(flatten)]
        input: AlgebraArg,
        #[command(flatten)]
        common: Common,
    },
}

/// A failure with its exit status.
struct Failure {
    message: String,
    code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            message: e.to_string(),
            code: 1,
        }
    }
}

type Outcome = Result<u8, Failure>;

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        message: format!("io error: cannot read {}: {e}", path.display()),
        code: 1,
    })
}

fn load(path: &Path, common: &Common) -> Result<FiniteAlgebra, Failure> {
    let file = AlgebraFile::from_json(&read_text(path)?)?;
    Ok(FiniteAlgebra::from_file_capped(&file, common.cap_elements)?)
}

fn emit(text: String) {
    print!("{text}");
    if !text.ends_with('\n') {
        println!();
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { input, common } => {
            let file = AlgebraFile::from_json(&read_text(&input.algebra)?)?;
            let report = validate_capped(&file, common.cap_elements)?;
            emit(render::validation(&report, common.format));
            Ok(u8::from(!report.passed))
        }
        Command::Dual { input, common } => {
            let alg = load(&input.algebra, &common)?;
            emit(render::dual(&alg, common.format));
            Ok(0)
        }
        Command::Congruences { input, common } => {
            let alg = load(&input.algebra, &common)?;
            emit(render::congruences(&alg, common.format));
            Ok(0)
        }
        Command::Classify { input, common } => {
            let alg = load(&input.algebra, &common)?;
            emit(render::classification(&alg, common.format));
            Ok(0)
        }
        Command::Check {
            identity,
            input,
            expect,
            common,
        } => {
            let alg = load(&input.algebra, &common)?;
            let id = parse_identity(&identity)?;
            let out = holds_capped(&alg, &id, common.cap_evals)?;
            emit(render::check(&alg, &id, &out, common.format));
            let ok = match expect {
                None => true,
                Some(Expect::Pass) => out.holds(),
                Some(Expect::Fail) => !out.holds(),
            };
            Ok(u8::from(!ok))
        }
        Command::Variety {
            input,
            max_n,
            beta_route,
            common,
        } => {
            let alg = load(&input.algebra, &common)?;
            let query = MembershipQuery {
                generated: (1..=max_n).flat_map(|n| (1..=3).map(move |m| (n, m))).collect(),
                joins: (1..=max_n)
                    .flat_map(|n| [(JoinKind::Bpk0, n), (JoinKind::Bpk1, n)])
                    .collect(),
                beta_route: match beta_route {
                    Route::Dual => BetaRoute::Dual,
                    Route::Exhaustive => BetaRoute::Exhaustive,
                },
                eval_cap: common.cap_evals,
            };
            let record = variety_membership_with(&alg, &query)?;
            emit(render::membership(&record, common.format));
            Ok(0)
        }
        Command::Build { si, common } => {
            let alg = pmalg::build_si(si);
            emit(render::algebra(&alg, common.format));
            Ok(0)
        }
        Command::Product { files, common } => {
            let mut alg = load(&files[0], &common)?;
            for path in &files[1..] {
                let next = load(path, &common)?;
                if alg.size() * next.size() > common.cap_elements {
                    return Err(Error::CapExceeded {
                        what: "product size",
                        needed: (alg.size() * next.size()).to_string(),
                        limit: common.cap_elements.to_string(),
                    }
                    .into());
                }
                alg = alg.direct_product(&next);
            }
            emit(render::algebra(&alg, common.format));
            Ok(0)
        }
        Command::Homs {
            a,
            b,
            surjective,
            auto,
            list,
            common,
        } => {
            let src = load(&a, &common)?;
            let dst = match &b {
                Some(path) => load(path, &common)?,
                None => src.clone(),
            };
            let (kind, maps) = if auto {
                ("automorphisms", automorphisms(&src)?)
            } else if surjective {
                ("surjective homomorphisms", surjective_homs(&src, &dst)?)
            } else {
                ("homomorphisms", homomorphisms_capped(&src, &dst, DEFAULT_HOM_CAP.max(common.cap_evals))?)
            };
            emit(render::homs(kind, &maps, list, common.format));
            Ok(0)
        }
        Command::FreeDecomp {
            n,
            oracle_verify,
            common,
        } => {
            let mut table = ExactCountTable::new();
            let dec = table.free_decomposition(n)?;
            let mut checks = Vec::new();
            for k in oracle_verify {
                let formula = if k == 0 {
                    table.m_k(n, 0)?
                } else {
                    table.sur_count(n, k as u64)?
                };
                let cap = common.cap_evals.max(DEFAULT_ORACLE_CAP);
                let oracle = oracle_sur_count_capped(n, k, cap)?;
                checks.push((k, formula, oracle));
            }
            let agree = checks.iter().all(|(_, f, o)| *f == (*o).into());
            emit(render::free(&dec, &checks, common.format));
            Ok(u8::from(!agree))
        }
        Command::Export { input, common } => {
            let alg = load(&input.algebra, &common)?;
            emit(render::algebra(&alg, common.format));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
