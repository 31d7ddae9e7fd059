use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ordcov::covering_graph::{build_prefix, restrict_by_degree_word};
use ordcov::degree_word::{canonicalize, degree_word};
use ordcov::fundamental::{chain, covers, fund_seq, up_set, CoverWitness};
use ordcov::hopda::{build_exprs, decode_iso, decode_raw, encode_iso, enumerate_domain, in_relation, Membership};
use ordcov::strict_sets::{c_set, s_alpha, trace_tree};
use ordcov::syntax::{parse_op_expr, parse_ordinal, parse_stack, parse_word};
use ordcov::verify::{self, Params};
use ordcov::{Error, Ordinal};

#[derive(Parser)]
#[command(name = "ordcov", version, about = "Covering graphs of ordinals below epsilon_0")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Normalise an ordinal expression.
    Eval { expr: String },
    /// Compare two ordinals; prints LT, EQ or GT.
    Cmp { a: String, b: String },
    /// First terms of the fundamental sequence of a limit.
    Fund {
        a: String,
        #[arg(long, default_value_t = 5)]
        count: u64,
    },
    /// Decide whether A covers into B.
    Covers { a: String, b: String },
    /// Out-neighbours of L in the covering graph below BOUND.
    Upset {
        l: String,
        #[arg(long)]
        bound: String,
    },
    /// A covering path from A to B.
    Chain { a: String, b: String },
    /// Degree word of A.
    Word {
        a: String,
        #[arg(long)]
        compact: bool,
    },
    /// Export a prefix of the covering graph.
    Graph {
        a: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        #[arg(long)]
        annotate: bool,
    },
    /// Restrict a prefix of the graph of A along a degree word.
    Restrict {
        a: String,
        /// A degree word, or an ordinal whose degree word is used.
        #[arg(long)]
        to: String,
        #[arg(long)]
        depth: usize,
    },
    /// Stack encodings and the stack relations.
    #[command(subcommand)]
    Stack(StackCmd),
    /// List the set C^K_N.
    Cset { n: u32, k: u64 },
    /// The strict set of A inside the graph of the ambient bound.
    Salpha {
        a: String,
        #[arg(long)]
        ambient: String,
        #[arg(long, default_value_t = 4096)]
        cap: usize,
    },
    /// DOT export of the trace tree.
    Tree {
        n: u32,
        #[arg(long)]
        spine: usize,
    },
    /// Run a property suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum StackCmd {
    /// Encode an ordinal below omega^^LEVEL as a stack.
    Encode {
        a: String,
        #[arg(long)]
        level: usize,
    },
    /// Decode a stack to an ordinal.
    Decode {
        s: String,
        /// Use the plain decoding instead of the bijective one.
        #[arg(long)]
        raw: bool,
    },
    /// Decide (S, T) in the relation of EXPR (dom, inc, dec or an operation expression).
    Rel {
        s: String,
        t: String,
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 2)]
        level: usize,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
    /// Enumerate the domain of the given level.
    Domain {
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_parser = verify_name)]
    name: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, short = 'K', alias = "K")]
    k: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    level: Option<usize>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    max: Option<u64>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    prefix: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Wall-clock budget for suites that sweep exhaustively.
    #[arg(long)]
    seconds: Option<u64>,
}

fn verify_name(s: &str) -> Result<String, String> {
    if s == "all" || verify::SUITES.contains(&s) {
        Ok(s.to_string())
    } else {
        Err(format!("expected one of: {}, all", verify::SUITES.join(", ")))
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. } => Failure::Usage(e.to_string()),
            e => Failure::Runtime(e.to_string()),
        }
    }
}

fn ord(text: &str) -> Result<Ordinal, Failure> {
    parse_ordinal(text).map_err(|e| Failure::Usage(format!("'{text}': {e}")))
}

fn lines<T: ToString>(xs: impl IntoIterator<Item = T>) {
    for x in xs {
        println!("{}", x.to_string());
    }
}

/// Returns whether the command's check passed.
fn run(cmd: Cmd) -> Result<bool, Failure> {
    match cmd {
        Cmd::Eval { expr } => println!("{}", ord(&expr)?),
        Cmd::Cmp { a, b } => {
            let tag = match ord(&a)?.cmp(&ord(&b)?) {
                std::cmp::Ordering::Less => "LT",
                std::cmp::Ordering::Equal => "EQ",
                std::cmp::Ordering::Greater => "GT",
            };
            println!("{tag}");
        }
        Cmd::Fund { a, count } => {
            let a = ord(&a)?;
            lines((0..count).map(|n| fund_seq(&a, n)).collect::<Result<Vec<_>, _>>()?);
        }
        Cmd::Covers { a, b } => match covers(&ord(&a)?, &ord(&b)?) {
            Some(CoverWitness::SuccessorStep) => println!("yes successor"),
            Some(CoverWitness::FundIndex(k)) => println!("yes fund {k}"),
            None => {
                println!("no");
                return Ok(false);
            }
        },
        Cmd::Upset { l, bound } => lines(up_set(&ord(&l)?, &ord(&bound)?)),
        Cmd::Chain { a, b } => lines(chain(&ord(&a)?, &ord(&b)?)?),
        Cmd::Word { a, compact } => {
            let w = canonicalize(&degree_word(&ord(&a)?)?);
            if compact {
                println!("{}", w.to_compact_string());
            } else {
                println!("{w}");
            }
        }
        Cmd::Graph {
            a,
            depth,
            format,
            annotate,
        } => {
            let g = build_prefix(&ord(&a)?, depth)?;
            match format {
                Format::Dot => print!("{}", g.to_dot(annotate)),
                Format::Json => println!("{}", g.to_json()?),
            }
        }
        Cmd::Restrict { a, to, depth } => {
            let word = match parse_word(&to) {
                Ok(w) => w,
                Err(_) => degree_word(&ord(&to)?)?,
            };
            let g = build_prefix(&ord(&a)?, depth)?;
            print!("{}", restrict_by_degree_word(&g, &word)?.to_dot(false));
        }
        Cmd::Stack(s) => return run_stack(s),
        Cmd::Cset { n, k } => lines(c_set(n, k)?),
        Cmd::Salpha { a, ambient, cap } => lines(s_alpha(&ord(&a)?, &ord(&ambient)?, cap)?),
        Cmd::Tree { n, spine } => print!("{}", trace_tree(n, spine)?.to_dot()),
        Cmd::Verify(v) => {
            let params = Params {
                n: v.n,
                k: v.k,
                samples: v.samples,
                level: v.level,
                budget: v.budget,
                max: v.max,
                alpha: v.alpha.as_deref().map(ord).transpose()?,
                prefix: v.prefix,
                depth: v.depth,
                seed: v.seed,
                seconds: v.seconds,
            };
            let reports = verify::run(&v.name, &params)?;
            lines(&reports);
            return Ok(reports.iter().all(|r| r.passed));
        }
    }
    Ok(true)
}

fn run_stack(cmd: StackCmd) -> Result<bool, Failure> {
    let stack = |t: &str| parse_stack(t).map_err(|e| Failure::Usage(format!("'{t}': {e}")));
    match cmd {
        StackCmd::Encode { a, level } => println!("{}", encode_iso(&ord(&a)?, level)?),
        StackCmd::Decode { s, raw } => {
            let s = stack(&s)?;
            println!("{}", if raw { decode_raw(&s) } else { decode_iso(&s) });
        }
        StackCmd::Rel {
            s,
            t,
            expr,
            level,
            budget,
        } => {
            let e = match expr.as_str() {
                "dom" | "inc" | "dec" => {
                    let ex = build_exprs(level)?;
                    match expr.as_str() {
                        "dom" => ex.dom,
                        "inc" => ex.inc,
                        _ => ex.dec,
                    }
                }
                text => parse_op_expr(text)?,
            };
            let m = in_relation(&stack(&s)?, &stack(&t)?, &e, budget);
            println!("{m:?}");
            return match m {
                Membership::Yes => Ok(true),
                Membership::No => Ok(false),
                Membership::BudgetExhausted => Err(Failure::Runtime("search budget exhausted".into())),
            };
        }
        StackCmd::Domain { level, count, budget } => {
            let e = build_exprs(level)?;
            lines(enumerate_domain(&e.dom, level, budget).into_iter().take(count));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
