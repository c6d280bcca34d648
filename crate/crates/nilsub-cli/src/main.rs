//! Command-line front end: Hom spaces, decompositions, τ-orbits, catalogs,
//! verification cases, AR quivers, graded covers and group layers.

use clap::{Parser, Subcommand, ValueEnum};
use nilsub::ar::{ar_quiver, ar_sequence, tau_orbit, tau_s, ArError};
use nilsub::catalog::{describe_end, enumerate, verify_case, Catalog, CatalogError, EnumerateOptions, Strategy, CASES};
use nilsub::covering::hom_formula_check;
use nilsub::hom::hom_basis;
use nilsub::io::{self, IoError};
use nilsub::krull::{decompose, DecomposeOptions};
use nilsub::rep::{RepError, RepObject, Shape};
use nilsub::rng::{seeded, SEED_ENV};
use nilsub::zpn::{layer_filtration, to_graded, LayerFunctor, ZpnError};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "nilsub", version, about = "Invariant subspaces of nilpotent operators over prime fields")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 0)]
    seed: u64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the main result to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension (and optionally a basis) of Hom(X, Y).
    Hom {
        x: PathBuf,
        y: PathBuf,
        #[arg(long)]
        basis: bool,
    },
    /// Splits an object into indecomposable summands and writes each to disk.
    Decompose {
        x: PathBuf,
        /// Directory receiving `summand_<k>.toml`.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Applies the relative AR translate `steps` times.
    Tau {
        x: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Builds the almost split sequence ending at an indecomposable.
    ArSequence { x: PathBuf },
    /// Walks the τ-orbit of an indecomposable.
    Orbit {
        x: PathBuf,
        #[arg(long, default_value_t = 60)]
        max_steps: usize,
    },
    /// Enumerates the indecomposables of S_m(k[T]/T^n) over F_p.
    Enumerate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value = "combined")]
        strategy: Strategy,
        /// Maximum number of sampling rounds.
        #[arg(long, default_value_t = 5000)]
        budget: usize,
        /// Rounds without a new class before sampling stops.
        #[arg(long, default_value_t = 150)]
        stable_rounds: usize,
    },
    /// Runs a named verification case.
    Verify {
        /// One of the case identifiers; `list` prints them.
        case: String,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
    /// Builds the AR quiver of a catalog.
    Arquiver {
        /// A saved catalog; otherwise one is enumerated from --m, --n, --p.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Emit Graphviz DOT.
        #[arg(long)]
        dot: bool,
    },
    /// Pushes a graded object down along the covering functor.
    Cover {
        graded: PathBuf,
        /// Also compare both sides of the Hom-sum formula against this graded object.
        #[arg(long)]
        hom_with: Option<PathBuf>,
    },
    /// Layer filtration of a group embedding and its F_p-representation.
    ZpnLayers {
        embedding: PathBuf,
        /// Which layer functor to apply.
        #[arg(long, value_enum, default_value_t = Functor::S3n7)]
        functor: Functor,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Functor {
    S3n7,
    S4n6,
}

/// Failures mapped to exit codes.
#[derive(Debug)]
enum Failure {
    /// A verification assertion failed.
    Assertion(String),
    /// Bad input: unreadable or malformed files, invalid parameters.
    Input(String),
    /// The budget ran out before the stopping rule was met.
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Assertion(_) => 1,
            Failure::Input(_) => 2,
            Failure::Budget(_) => 3,
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Input(e.to_string())
    }
}
impl From<RepError> for Failure {
    fn from(e: RepError) -> Self {
        Failure::Input(e.to_string())
    }
}
impl From<ArError> for Failure {
    fn from(e: ArError) -> Self {
        Failure::Input(e.to_string())
    }
}
impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        Failure::Input(e.to_string())
    }
}
impl From<ZpnError> for Failure {
    fn from(e: ZpnError) -> Self {
        Failure::Input(e.to_string())
    }
}
impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn load_object(path: &Path) -> Result<RepObject, Failure> {
    let text = io::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    io::parse_object(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn config(cli: &Cli) -> serde_json::Value {
    json!({
        "command": format!("{:?}", cli.command),
        "seed": cli.seed,
        "format": format!("{:?}", cli.format).to_lowercase(),
        "output": cli.output.as_ref().map(|p| p.display().to_string()),
    })
}

fn matrix_rows(m: &nilsub::linalg::Mat) -> Vec<Vec<u64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let mut rng = seeded(cli.seed);
    let opts = DecomposeOptions::default();
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Hom { x, y, basis } => {
            let (a, b) = (load_object(x)?, load_object(y)?);
            let h = hom_basis(&a, &b)?;
            if json {
                let maps: Vec<_> = h.maps.iter().map(|f| json!({"g": matrix_rows(&f.g), "h": matrix_rows(&f.h)})).collect();
                let mut v = json!({"dim": h.dim()});
                if *basis {
                    v["basis"] = json!(maps);
                }
                emit(cli, &format!("{v}\n"))
            } else {
                let mut s = format!("dim Hom = {}\n", h.dim());
                if *basis {
                    for (k, f) in h.maps.iter().enumerate() {
                        s += &format!("basis {k}: g = {:?}, h = {:?}\n", matrix_rows(&f.g), matrix_rows(&f.h));
                    }
                }
                emit(cli, &s)
            }
        }
        Command::Decompose { x, out_dir } => {
            let a = load_object(x)?;
            let d = decompose(&a, &mut rng, &opts);
            std::fs::create_dir_all(out_dir)?;
            let classes = d.classes(&mut rng);
            let mut written = Vec::new();
            for (k, piece) in d.pieces.iter().enumerate() {
                let path = out_dir.join(format!("summand_{k}.toml"));
                std::fs::write(&path, io::write_object(&piece.object))?;
                written.push(path.display().to_string());
            }
            let rows: Vec<_> = classes
                .iter()
                .map(|&(i, mult)| {
                    let pc = &d.pieces[i];
                    json!({"dims": pc.object.dims().to_string(), "multiplicity": mult, "status": format!("{:?}", pc.status), "file": written[i]})
                })
                .collect();
            let text = if json {
                format!("{}\n", json!({"pieces": d.pieces.len(), "complete": d.is_complete(), "classes": rows}))
            } else {
                let mut s = format!("{} summands, complete = {}\n", d.pieces.len(), d.is_complete());
                for r in &rows {
                    s += &format!(
                        "{} x{} {} ({})\n",
                        r["dims"].as_str().unwrap(),
                        r["multiplicity"],
                        r["status"].as_str().unwrap(),
                        r["file"].as_str().unwrap()
                    );
                }
                s
            };
            emit(cli, &text)?;
            if !d.is_complete() {
                return Err(Failure::Budget("some summands could not be certified".into()));
            }
            Ok(())
        }
        Command::Tau { x, steps } => {
            let mut cur = load_object(x)?;
            for _ in 0..*steps {
                cur = tau_s(&cur)?;
            }
            if json {
                emit(cli, &format!("{}\n", serde_json::to_string(&io::RawObject::from_object(&cur)).expect("serializable")))
            } else {
                emit(cli, &io::write_object(&cur))
            }
        }
        Command::ArSequence { x } => {
            let a = load_object(x)?;
            let r = ar_sequence(&a, &mut rng, &opts)?;
            let d = decompose(&r.middle, &mut rng, &opts);
            let summands: Vec<String> = d.pieces.iter().map(|pc| pc.object.dims().to_string()).collect();
            let text = if json {
                format!(
                    "{}\n",
                    json!({
                        "tau": io::RawObject::from_object(&r.tau_x),
                        "middle": io::RawObject::from_object(&r.middle),
                        "middle_summands": summands,
                        "dims_add": r.dims_add,
                        "composition_zero": r.composition_zero,
                        "exact": r.exact,
                        "non_split": r.non_split,
                    })
                )
            } else {
                format!(
                    "0 -> τX {} -> E {} -> X {} -> 0\nmiddle summands: {}\nverified: dims add {}, composition zero {}, exact {}, non-split {}\n",
                    r.tau_x.dims(),
                    r.middle.dims(),
                    r.x.dims(),
                    summands.join(" "),
                    r.dims_add,
                    r.composition_zero,
                    r.exact,
                    r.non_split
                )
            };
            emit(cli, &text)?;
            if !r.verified() {
                return Err(Failure::Assertion("sequence checks failed".into()));
            }
            Ok(())
        }
        Command::Orbit { x, max_steps } => {
            let a = load_object(x)?;
            let r = tau_orbit(&a, *max_steps)?;
            let dims: Vec<String> = r.members.iter().map(|m| m.dims().to_string()).collect();
            if json {
                emit(cli, &format!("{}\n", json!({"length": r.len(), "period": r.period(), "end": describe_end(&r.end), "members": dims})))
            } else {
                let period = r.period().map_or("none".to_string(), |q| q.to_string());
                emit(cli, &format!("length {}\nperiod {period}\nend: {}\nmembers: {}\n", r.len(), describe_end(&r.end), dims.join(" ")))
            }
        }
        Command::Enumerate { m, n, p, strategy, budget, stable_rounds } => {
            let shape = Shape::new(*p, *m, *n)?;
            let eo = EnumerateOptions { strategy: *strategy, budget: *budget, stable_rounds: *stable_rounds, seed: cli.seed, ..Default::default() };
            let cat = enumerate(shape, &eo)?;
            let mut buf = Vec::new();
            cat.write_to(&mut buf)?;
            emit(cli, std::str::from_utf8(&buf).expect("JSON is UTF-8"))?;
            eprintln!("{} classes after {} rounds, complete = {}", cat.len(), cat.rounds, cat.complete);
            if !cat.complete {
                return Err(Failure::Budget(format!("budget of {budget} rounds exhausted before stabilization")));
            }
            Ok(())
        }
        Command::Verify { case, p } => {
            if case == "list" {
                return emit(cli, &format!("{}\n", CASES.join("\n")));
            }
            let r = verify_case(case, *p, cli.seed)?;
            let text = if json {
                format!("{}\n", serde_json::to_string(&r).expect("serializable"))
            } else {
                let mut s = String::new();
                for c in &r.claims {
                    s += &format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                }
                s += &format!("{} {} ({:.1}s)\n", if r.passed() { "PASS" } else { "FAIL" }, r.id, r.seconds);
                s
            };
            emit(cli, &text)?;
            if !r.passed() {
                return Err(Failure::Assertion(format!("case {case} failed")));
            }
            Ok(())
        }
        Command::Arquiver { catalog, m, n, p, dot } => {
            let cat = match (catalog, m, n) {
                (Some(path), _, _) => Catalog::load(path)?,
                (None, Some(m), Some(n)) => {
                    let c = enumerate(Shape::new(*p, *m, *n)?, &EnumerateOptions { seed: cli.seed, ..Default::default() })?;
                    if !c.complete {
                        return Err(Failure::Budget("catalog did not stabilize".into()));
                    }
                    c
                }
                _ => return Err(Failure::Input("give --catalog or both --m and --n".into())),
            };
            let q = ar_quiver(&cat.objects(), &mut rng)?;
            if *dot || cli.format == Format::Dot {
                emit(cli, &q.to_dot())
            } else {
                let fails = q.mesh_failures();
                let text = if json {
                    format!(
                        "{}\n",
                        json!({"nodes": q.nodes.len(), "arrows": q.total_arrows(), "connected": q.is_connected(), "mesh_failures": fails.len(), "orbits": q.orbits.iter().map(|(c, s)| json!({"len": c.len(), "stable": s})).collect::<Vec<_>>()})
                    )
                } else {
                    format!("{} nodes, {} arrows, connected = {}, mesh failures = {}\n", q.nodes.len(), q.total_arrows(), q.is_connected(), fails.len())
                };
                emit(cli, &text)?;
                if !fails.is_empty() {
                    return Err(Failure::Assertion(format!("{} mesh failures", fails.len())));
                }
                Ok(())
            }
        }
        Command::Cover { graded, hom_with } => {
            let g = io::parse_graded(&io::read(graded)?)?;
            let x = g.cover();
            match hom_with {
                Some(other) => {
                    let h = io::parse_graded(&io::read(other)?)?;
                    let r = hom_formula_check(&g, &h)?;
                    let text = if json {
                        format!("{}\n", json!({"left": r.left, "right": r.right, "holds": r.holds()}))
                    } else {
                        format!("dim Hom(FM, FN) = {}\nsum over shifts = {}\n", r.left, r.right)
                    };
                    emit(cli, &text)?;
                    if !r.holds() {
                        return Err(Failure::Assertion("Hom-sum formula violated".into()));
                    }
                    Ok(())
                }
                None => emit(cli, &io::write_object(&x)),
            }
        }
        Command::ZpnLayers { embedding, functor } => {
            let emb = io::parse_embedding(&io::read(embedding)?)?;
            let f = match functor {
                Functor::S3n7 => LayerFunctor::s3n7(),
                Functor::S4n6 => LayerFunctor::s4n6(),
            };
            let filt = layer_filtration(&emb, &f)?;
            let g = to_graded(&emb, &f)?;
            let x = g.cover();
            let dims = filt.quotient_dims();
            let text = if json {
                format!(
                    "{}\n",
                    json!({"lo": filt.lo, "quotient_dims": dims, "graded_sub_dims": g.sub_dims(), "representation": io::RawObject::from_object(&x)})
                )
            } else {
                format!(
                    "layers from degree {}: quotient dims {:?}\nsubgroup layer dims {:?}\n# induced representation\n{}",
                    filt.lo,
                    dims,
                    g.sub_dims(),
                    io::write_object(&x)
                )
            };
            emit(cli, &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    eprintln!("config: {}", config(&cli));
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Assertion(m) | Failure::Input(m) | Failure::Budget(m) => m,
            };
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
