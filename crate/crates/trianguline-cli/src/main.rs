//! Batch command-line surface over the local-model toolkit. All structured
//! output is UTF-8 JSON with stable key order (CSV for tangent tables); all
//! numbers are exact. Exit codes: 0 success, 1 usage or parse error,
//! 2 genericity violation, 3 multiplicity-matrix guard, 4 suite failure.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand};

use trianguline::check::{self, SuiteOptions};
use trianguline::companion::{self, CrystallineParam};
use trianguline::cycles::{self, AMatrix};
use trianguline::flags::probe_conjecture;
use trianguline::kl::KlContext;
use trianguline::weyl::{self, EmbeddingShape, WeylElement};
use trianguline::{cartan, schubert, Error};

#[derive(Parser)]
#[command(
    name = "trianguline",
    about = "Exact invariants for local models of trianguline varieties",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ShapeArgs {
    /// Matrix size per factor.
    #[arg(long)]
    n: usize,
    /// Number of embedding factors.
    #[arg(long, default_value_t = 1)]
    sigma: usize,
}

impl ShapeArgs {
    fn shape(&self) -> Result<EmbeddingShape, Error> {
        EmbeddingShape::new(self.n, self.sigma)
    }

    fn parse_elt(&self, s: &str) -> Result<WeylElement, Error> {
        WeylElement::parse(s, self.shape()?)
    }
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, default_value = "json")]
    format: String,
    /// Worker count for fan-out commands; the output is identical for any value.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// One Kazhdan-Lusztig polynomial, or the full table with --table.
    Kl {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        table: bool,
        /// Optional polynomial cache; read if present, written on exit.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bruhat-order comparison of two elements.
    Bruhat {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Displacement rank, fixed-space dimension and the distinct-simple test.
    Dw {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        w: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Companion points of a crystalline parameter.
    Companions {
        /// Path to the parameter JSON.
        #[arg(long, conflicts_with = "param_json")]
        param: Option<PathBuf>,
        /// Inline parameter JSON.
        #[arg(long)]
        param_json: Option<String>,
        /// The flag invariant of the refinement.
        #[arg(long)]
        wx: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cycle classes in the component basis.
    Cycle {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Standard class of w.
        #[arg(long)]
        verma: Option<String>,
        /// Simple class of w.
        #[arg(long)]
        simple: Option<String>,
        /// Fiber class: two elements `w` then `w_x`.
        #[arg(long, num_args = 2)]
        fiber: Option<Vec<String>>,
        /// Multiplicity decomposition: two elements `w` then `w_x`.
        #[arg(long, num_args = 2)]
        bm: Option<Vec<String>>,
        /// Path to an injected component-multiplicity matrix.
        #[arg(long)]
        a_matrix: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Constituent multiplicity `P_{w0 w, w0 w'}(1)`.
    Multiplicity {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        w: String,
        #[arg(long)]
        wp: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tangent report for a pair, or the full fixed-point table with --table.
    Tangent {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        w: Option<String>,
        #[arg(long)]
        wx: Option<String>,
        #[arg(long)]
        table: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Singularity verdict for a flag invariant.
    Singular {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        wx: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Symbolic replay of the companion induction.
    Replay {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        wy: String,
        /// Constant multiplicity carried through the induction.
        #[arg(long, default_value_t = 1)]
        m: i64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Degeneration probe for a pair of cell indices.
    Probe {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        w: String,
        #[arg(long)]
        wp: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a named cross-validation suite.
    Check {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        sigma: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are successful exits; anything else is usage
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            let code = match &err {
                Error::GenericityViolation { i, j, ratio } => {
                    let payload = serde_json::json!({
                        "error": "genericity",
                        "i": i,
                        "j": j,
                        "ratio": ratio,
                    });
                    eprintln!("{payload}");
                    2
                }
                Error::AMatrixGuard { .. } => {
                    eprintln!("{err}");
                    3
                }
                _ => {
                    eprintln!("error: {err}");
                    1
                }
            };
            std::process::exit(code);
        }
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Kl {
            shape,
            x,
            y,
            table,
            cache,
            output,
        } => {
            let sh = shape.shape()?;
            let ctx = KlContext::new();
            if let Some(path) = cache.as_ref().filter(|p| p.exists()) {
                ctx.load_cache(path)?;
            }
            if table {
                let mut all = WeylElement::all(sh);
                weyl::sort_canonical(&mut all);
                let pairs: Vec<(WeylElement, WeylElement)> = all
                    .iter()
                    .flat_map(|x| all.iter().map(move |y| (x.clone(), y.clone())))
                    .collect();
                let rows = parallel_map(&pairs, output.jobs, |(x, y)| {
                    ctx.kl_polynomial(x, y).map(|p| (x.serialized(), y.serialized(), p))
                })?;
                let mut map = BTreeMap::new();
                for (xs, ys, p) in rows {
                    if !p.is_zero() {
                        map.insert(format!("{xs}:{ys}"), p.display());
                    }
                }
                emit(&output, &serde_json::to_value(&map)?)?;
            } else {
                let (Some(x), Some(y)) = (x, y) else {
                    return Err(Error::Parse("kl needs --x and --y, or --table".into()));
                };
                let p = ctx.kl_polynomial(&shape.parse_elt(&x)?, &shape.parse_elt(&y)?)?;
                emit(&output, &serde_json::Value::String(p.display()))?;
            }
            if let Some(path) = cache {
                ctx.save_cache(&path)?;
            }
            Ok(0)
        }
        Command::Bruhat { shape, x, y, output } => {
            let leq = weyl::bruhat_leq(&shape.parse_elt(&x)?, &shape.parse_elt(&y)?)?;
            emit(&output, &serde_json::json!({ "x": x, "y": y, "leq": leq }))?;
            Ok(0)
        }
        Command::Dw { shape, w, output } => {
            let elt = shape.parse_elt(&w)?;
            let payload = serde_json::json!({
                "w": elt.serialized(),
                "length": weyl::length(&elt),
                "d": cartan::d_of(&elt),
                "fixed_space_dim": cartan::fixed_space_dim(&elt),
                "distinct_simple_product": weyl::is_distinct_simple_product(&elt),
            });
            emit(&output, &payload)?;
            Ok(0)
        }
        Command::Companions {
            param,
            param_json,
            wx,
            output,
        } => {
            let value: serde_json::Value = match (param, param_json) {
                (Some(path), None) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
                (None, Some(inline)) => serde_json::from_str(&inline)?,
                _ => return Err(Error::Parse("companions needs --param or --param-json".into())),
            };
            let p = CrystallineParam::from_json(&value)?;
            let wx = WeylElement::parse(&wx, p.shape)?;
            let set = companion::companion_set(&p, &wx)?;
            emit(&output, &serde_json::to_value(&set)?)?;
            Ok(0)
        }
        Command::Cycle {
            shape,
            verma,
            simple,
            fiber,
            bm,
            a_matrix,
            output,
        } => {
            let sh = shape.shape()?;
            let a = match a_matrix {
                Some(path) => {
                    let value: serde_json::Value =
                        serde_json::from_str(&std::fs::read_to_string(path)?)?;
                    AMatrix::from_json(&value)?
                }
                None => AMatrix::default_identity(sh)?,
            };
            let ctx = KlContext::new();
            let payload = if let Some(w) = verma {
                serde_json::to_value(cycles::verma_cycle(&ctx, &shape.parse_elt(&w)?, &a)?)?
            } else if let Some(w) = simple {
                serde_json::to_value(cycles::simple_cycle(&shape.parse_elt(&w)?, &a)?)?
            } else if let Some(args) = fiber {
                let w = shape.parse_elt(&args[0])?;
                let wx = shape.parse_elt(&args[1])?;
                serde_json::to_value(cycles::fiber_cycle(&ctx, &w, &wx, &a)?)?
            } else if let Some(args) = bm {
                let w = shape.parse_elt(&args[0])?;
                let wx = shape.parse_elt(&args[1])?;
                let dec = cycles::breuil_mezard_decomposition(&ctx, &w, &wx, &a)?;
                let map: BTreeMap<String, serde_json::Value> = dec
                    .iter()
                    .map(|(wp, (m, c))| {
                        (
                            wp.serialized(),
                            serde_json::json!({ "multiplicity": m, "cycle": c }),
                        )
                    })
                    .collect();
                serde_json::to_value(&map)?
            } else {
                return Err(Error::Parse(
                    "cycle needs one of --verma, --simple, --fiber, --bm".into(),
                ));
            };
            emit(&output, &payload)?;
            Ok(0)
        }
        Command::Multiplicity { shape, w, wp, output } => {
            let ctx = KlContext::new();
            let m = cycles::pi_multiplicity(&ctx, &shape.parse_elt(&w)?, &shape.parse_elt(&wp)?)?;
            emit(&output, &serde_json::json!({ "multiplicity": m }))?;
            Ok(0)
        }
        Command::Tangent {
            shape,
            w,
            wx,
            table,
            output,
        } => {
            let sh = shape.shape()?;
            if table {
                let rows = tangent_table_parallel(sh, output.jobs)?;
                if output.format == "csv" {
                    let mut text = String::from("w,v,dim_cell,tangent_dim,smooth\n");
                    for r in &rows {
                        text.push_str(&format!(
                            "{},{},{},{},{}\n",
                            csv_field(&r.w),
                            csv_field(&r.v),
                            r.dim_cell,
                            r.tangent_dim,
                            r.smooth
                        ));
                    }
                    write_text(&output, &text)?;
                } else {
                    emit(&output, &serde_json::to_value(&rows)?)?;
                }
                return Ok(0);
            }
            let (Some(w), Some(wx)) = (w, wx) else {
                return Err(Error::Parse("tangent needs --w and --wx, or --table".into()));
            };
            let report =
                schubert::trianguline_tangent_report(&shape.parse_elt(&w)?, &shape.parse_elt(&wx)?)?;
            emit(&output, &serde_json::to_value(&report)?)?;
            Ok(0)
        }
        Command::Singular { shape, wx, output } => {
            let verdict = schubert::singularity_verdict(&shape.parse_elt(&wx)?);
            let text = if verdict { "singular" } else { "not-detected" };
            emit(&output, &serde_json::json!({ "wx": wx, "verdict": text }))?;
            Ok(0)
        }
        Command::Replay { shape, wy, m, output } => {
            let ctx = KlContext::new();
            let trace = cycles::replay_companion_induction(&ctx, &shape.parse_elt(&wy)?, m)?;
            let ok = trace.succeeded();
            emit(&output, &serde_json::to_value(&trace)?)?;
            Ok(if ok { 0 } else { 4 })
        }
        Command::Probe {
            shape,
            w,
            wp,
            trials,
            seed,
            output,
        } => {
            let report =
                probe_conjecture(&shape.parse_elt(&w)?, &shape.parse_elt(&wp)?, trials, seed)?;
            emit(&output, &serde_json::to_value(&report)?)?;
            Ok(0)
        }
        Command::Check {
            suite,
            n,
            sigma,
            samples,
            seed,
            output,
        } => {
            let opts = SuiteOptions { n, sigma, samples, seed };
            let report = check::run_suite(&suite, &opts)?;
            let pass = report.pass;
            eprintln!("suite {suite} finished in {} ms", report.elapsed_ms);
            emit(&output, &serde_json::to_value(&report)?)?;
            Ok(if pass { 0 } else { 4 })
        }
    }
}

/// Deterministic fan-out: worker `k` of `jobs` handles items `k, k + jobs, ..`
/// and results are reassembled by index, so the output does not depend on the
/// worker count.
fn parallel_map<T: Sync, R: Send>(
    items: &[T],
    jobs: usize,
    f: impl Fn(&T) -> Result<R, Error> + Sync,
) -> Result<Vec<R>, Error> {
    let jobs = jobs.max(1);
    let results: Mutex<Vec<Option<Result<R, Error>>>> =
        Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for worker in 0..jobs {
            let results = &results;
            let f = &f;
            scope.spawn(move || {
                let mut k = worker;
                while k < items.len() {
                    let r = f(&items[k]);
                    results.lock().unwrap()[k] = Some(r);
                    k += jobs;
                }
            });
        }
    });
    results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("all indices covered"))
        .collect()
}

fn tangent_table_parallel(
    sh: EmbeddingShape,
    jobs: usize,
) -> Result<Vec<schubert::TangentTableRow>, Error> {
    let mut all = WeylElement::all(sh);
    weyl::sort_canonical(&mut all);
    let mut pairs = Vec::new();
    for w in &all {
        for v in &all {
            if weyl::bruhat_leq(v, w)? {
                pairs.push((w.clone(), v.clone()));
            }
        }
    }
    parallel_map(&pairs, jobs, |(w, v)| {
        let dim_cell = sh.dim_gb() + weyl::length(w);
        let tangent_dim = schubert::schubert_tangent_dim(w, v)?;
        Ok(schubert::TangentTableRow {
            w: w.serialized(),
            v: v.serialized(),
            dim_cell,
            tangent_dim,
            smooth: tangent_dim == dim_cell,
        })
    })
}

fn csv_field(s: &str) -> String {
    if s.contains(',') {
        format!("\"{s}\"")
    } else {
        s.to_string()
    }
}

fn emit(output: &OutputArgs, value: &serde_json::Value) -> Result<(), Error> {
    if output.format != "json" && output.format != "csv" {
        return Err(Error::Parse(format!("unknown format {}", output.format)));
    }
    let text = format!("{}\n", serde_json::to_string_pretty(value)?);
    write_text(output, &text)
}

fn write_text(output: &OutputArgs, text: &str) -> Result<(), Error> {
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}
