//! Argument handling and dispatch for the `conelift` binary. Each command
//! returns the text it would print and an exit code, so tests can drive it
//! without spawning processes.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use conelift::factorization::{
    block_augmentation_bound, nn_rank_decide, psd_rank_lower_bound, verify_factorization, Decision, RankKind,
    SearchOptions,
};
use conelift::io::{self, PolyFile};
use conelift::lift::{build_lift_from_slack, eliminate_presentation, verify_lift};
use conelift::polar::compute_d_sets;
use conelift::slack::{build_slack, canonical_slack, check_rank_theorem, is_slack_matrix};
use conelift::{ConeKind, Factorization, Matrix, Polyhedron, Scalar, Vector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Parser, Debug)]
#[command(name = "conelift", version, about = "Exact polars, slack matrices, cone factorizations and lifts")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for the factorization search (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the other representation (H to V or V to H).
    Convert { poly: PathBuf },
    /// Generators of the polar set.
    Polar { poly: PathBuf },
    /// The D-sets of the polar.
    Dsets { poly: PathBuf },
    /// Slack matrix of an H file against a generator file, or of the
    /// minimal representation when no generators are given.
    Slack {
        poly: PathBuf,
        gens: Option<PathBuf>,
        /// Facet rows scaled to right-hand side 1, 0 or -1.
        #[arg(long)]
        canonical: bool,
    },
    /// Compares the slack rank with the dimension of the line-free part plus one.
    RankCheck { poly: PathBuf },
    /// Decides whether a nonnegative matrix has an R₊^k factorization.
    Nnrank {
        matrix: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget_iters: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        restarts: u64,
    },
    /// Lower bounds on the psd rank.
    PsdBound { poly: PathBuf },
    /// Checks S = U V with rows of U and columns of V in the cone.
    VerifyFact {
        s: PathBuf,
        u: PathBuf,
        v: PathBuf,
        /// `orthant m` or `psd k`; defaults to the orthant of U's width.
        #[arg(long)]
        cone: Option<String>,
    },
    /// Builds the lift induced by a factorization of the slack matrix.
    LiftBuild {
        poly: PathBuf,
        gens: PathBuf,
        u: PathBuf,
        v: PathBuf,
        #[arg(long)]
        cone: Option<String>,
    },
    /// Checks a lift against a polyhedron.
    LiftVerify { poly: PathBuf, lift: PathBuf },
    /// Decides whether a matrix is the slack matrix of a polyhedron.
    IdentifySlack { matrix: PathBuf },
    /// Solves the lift equations for an H file and a row factor matrix U.
    Eliminate { poly: PathBuf, u: PathBuf },
}

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
}

#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Res<T> = std::result::Result<T, InputError>;

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn at<T>(path: &Path, r: conelift::Result<T>) -> Res<T> {
    r.map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn poly_file(path: &Path) -> Res<PolyFile> {
    at(path, io::parse_poly_file(&read(path)?))
}

fn polyhedron(path: &Path) -> Res<Polyhedron> {
    at(path, poly_file(path)?.polyhedron())
}

fn matrix(path: &Path) -> Res<Matrix> {
    at(path, io::parse_matrix(&read(path)?))
}

fn strs(v: &[Scalar]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn join(v: &[Scalar]) -> String {
    strs(v).join(" ")
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn factorization(u: &Matrix, v: &Matrix, cone: Option<&str>) -> Res<Factorization> {
    let mut f = Factorization::from_matrices(u, v)?;
    if let Some(c) = cone {
        let c: ConeKind = c.parse()?;
        if c.ambient_dim() != u.ncols() {
            return Err(InputError(format!("cone `{c}` has {} coordinates, U has {}", c.ambient_dim(), u.ncols())));
        }
        f.cone = c;
    }
    Ok(f)
}

struct Out {
    code: i32,
    text: String,
    json: Value,
}

impl Out {
    fn ok(text: String, json: Value) -> Self {
        Out { code: EXIT_OK, text, json }
    }
    fn verdict(pass: bool, text: String, json: Value) -> Self {
        Out { code: if pass { EXIT_OK } else { EXIT_NEGATIVE }, text, json }
    }
}

fn execute(cmd: &Command) -> Res<Out> {
    Ok(match cmd {
        Command::Convert { poly } => {
            let f = poly_file(poly)?;
            let p = at(poly, f.polyhedron())?;
            let (text, rep) = match f {
                PolyFile::H { domain, .. } => (io::write_vrep(p.vrep(), domain), to_json(p.vrep())),
                PolyFile::V { domain, .. } => (io::write_hrep(p.hrep(), domain), to_json(p.hrep())),
            };
            Out::ok(text, rep)
        }
        Command::Polar { poly } => {
            let p = polyhedron(poly)?;
            let pd = at(poly, compute_d_sets(&p))?;
            let v = pd.polar_set.vrep();
            Out::ok(io::write_vrep(v, p.domain()), to_json(v))
        }
        Command::Dsets { poly } => {
            let p = polyhedron(poly)?;
            let pd = at(poly, compute_d_sets(&p))?;
            let mut text = String::new();
            let sets = [("d1", &pd.d1), ("d2", &pd.d2), ("d3", &pd.d3), ("d32", &pd.d32), ("lineality", &pd.l_two_basis)];
            for (tag, vs) in sets {
                if vs.is_empty() && tag != "lineality" {
                    text.push_str(&format!("{tag} none\n"));
                }
                for x in vs {
                    text.push_str(&format!("{tag} {}\n", join(x)));
                }
            }
            let json = json!({
                "d1": to_json(&pd.d1), "d2": to_json(&pd.d2), "d3": to_json(&pd.d3),
                "d32": to_json(&pd.d32), "lineality": to_json(&pd.l_two_basis),
            });
            Out::ok(text, json)
        }
        Command::Slack { poly, gens, canonical } => {
            let s = if *canonical {
                if gens.is_some() {
                    return Err(InputError("--canonical takes no generator file".into()));
                }
                at(poly, canonical_slack(&polyhedron(poly)?))?
            } else if let Some(g) = gens {
                let PolyFile::H { rep: h, .. } = poly_file(poly)? else {
                    return Err(InputError(format!("{}: expected an H file", poly.display())));
                };
                let PolyFile::V { rep: v, .. } = poly_file(g)? else {
                    return Err(InputError(format!("{}: expected a V file", g.display())));
                };
                build_slack(&h, &v)?
            } else {
                let p = polyhedron(poly)?;
                build_slack(p.hrep(), p.vrep())?
            };
            Out::ok(s.to_string(), to_json(&s))
        }
        Command::RankCheck { poly } => {
            let r = at(poly, check_rank_theorem(&polyhedron(poly)?))?;
            let holds = match r.holds() {
                Some(true) => "yes",
                Some(false) => "no",
                None => "not applicable (translated cone)",
            };
            let text = format!("rank {}\nexpected {}\nholds {holds}\n", r.rank, r.expected);
            Out::verdict(r.holds() != Some(false), text, json!({"report": to_json(&r), "holds": r.holds()}))
        }
        Command::Nnrank { matrix: path, k, budget_iters, seed, restarts } => {
            let m = matrix(path)?;
            if !m.is_nonneg() {
                return Err(InputError(format!("{}: matrix has negative entries", path.display())));
            }
            let opts = SearchOptions { budget_iters: *budget_iters, seed: *seed, restarts: *restarts, warm_start: None };
            match nn_rank_decide(&m, *k, &opts) {
                Decision::Yes(f) => {
                    let (u, v) = f.to_matrices();
                    let text = format!("yes\n# U\n{}# V\n{}", io::write_matrix(&u), io::write_matrix(&v));
                    Out::ok(text, json!({"decision": "yes", "u": to_json(&u), "v": to_json(&v)}))
                }
                Decision::No(b) => {
                    let text = format!("no\n{b}");
                    Out::verdict(false, text, json!({"decision": "no", "bound": to_json(&b)}))
                }
                Decision::Unknown => {
                    Out::verdict(false, "unknown\n".into(), json!({"decision": "unknown"}))
                }
            }
        }
        Command::PsdBound { poly } => {
            let p = polyhedron(poly)?;
            let dim = at(poly, psd_rank_lower_bound(&p))?;
            let s = at(poly, canonical_slack(&p))?;
            let b = block_augmentation_bound(&s.matrix, RankKind::Psd);
            let best = dim.max(b.value);
            let text = format!("psd rank >= {best}\ndimension >= {dim}\n{b}");
            Out::ok(text, json!({"bound": best, "dimension": dim, "slack": to_json(&b)}))
        }
        Command::VerifyFact { s, u, v, cone } => {
            let f = factorization(&matrix(u)?, &matrix(v)?, cone.as_deref())?;
            let verdict = verify_factorization(&matrix(s)?, &f)?;
            let text = match &verdict.violation {
                None => "ok\n".to_string(),
                Some(why) => format!("rejected: {why}\n"),
            };
            Out::verdict(verdict.ok, text, to_json(&verdict))
        }
        Command::LiftBuild { poly, gens, u, v, cone } => {
            let PolyFile::H { rep: h, .. } = poly_file(poly)? else {
                return Err(InputError(format!("{}: expected an H file", poly.display())));
            };
            let PolyFile::V { rep: g, .. } = poly_file(gens)? else {
                return Err(InputError(format!("{}: expected a V file", gens.display())));
            };
            let s = build_slack(&h, &g)?;
            let f = factorization(&matrix(u)?, &matrix(v)?, cone.as_deref())?;
            let lift = build_lift_from_slack(&s, &f)?;
            Out::ok(io::write_lift(&lift), to_json(&lift))
        }
        Command::LiftVerify { poly, lift } => {
            let p = polyhedron(poly)?;
            let l = at(lift, io::parse_lift(&read(lift)?))?;
            let r = verify_lift(&p, &l)?;
            Out::verdict(r.passed(), r.to_string(), json!({"passed": r.passed(), "report": to_json(&r)}))
        }
        Command::IdentifySlack { matrix: path } => {
            let id = at(path, is_slack_matrix(&matrix(path)?))?;
            let mut text = format!("{}\n", if id.accepted { "accepted" } else { "rejected" });
            let line = |tag: &str, v: &Option<Vector>| v.as_ref().map(|v| format!("{tag} {}\n", join(v)));
            text.extend(line("points", &id.zero_one));
            text.extend(line("witness", &id.witness));
            text.push_str(&format!("cone criterion {}\n", if id.literal_cone_criterion { "holds" } else { "fails" }));
            text.extend(line("cone witness", &id.literal_witness));
            Out::verdict(id.accepted, text, to_json(&id))
        }
        Command::Eliminate { poly, u } => {
            let PolyFile::H { rep: h, .. } = poly_file(poly)? else {
                return Err(InputError(format!("{}: expected an H file", poly.display())));
            };
            let a = eliminate_presentation(&h.normals(), &matrix(u)?, &h.rhs())?;
            Out::ok(io::write_affine(&a), to_json(&a))
        }
    })
}

/// Runs an already parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    match execute(&cli.command) {
        Ok(out) => {
            let text = match cli.global.format {
                Format::Text => out.text,
                Format::Json => {
                    let doc = json!({"exit": out.code, "result": out.json});
                    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
                }
            };
            Outcome { code: out.code, text }
        }
        Err(InputError(msg)) => Outcome { code: EXIT_INPUT, text: single_line(&msg) },
    }
}

fn single_line(msg: &str) -> String {
    format!("error: {}\n", msg.split_whitespace().collect::<Vec<_>>().join(" "))
}

/// Full entry point: parse, configure threads, run. Returns the exit code
/// together with text for stdout and for stderr.
pub fn main_with_args<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    (EXIT_OK, e.to_string(), String::new())
                }
                _ => {
                    let first = e.to_string().lines().next().unwrap_or("bad arguments").to_string();
                    let first = first.strip_prefix("error: ").unwrap_or(&first).to_string();
                    (EXIT_INPUT, String::new(), single_line(&first))
                }
            };
        }
    };
    if cli.global.threads > 0 {
        // only fails when a pool already exists, which is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.global.threads).build_global();
    }
    let out = run(&cli);
    if out.code == EXIT_INPUT {
        return (out.code, String::new(), out.text);
    }
    if let Some(path) = &cli.global.out {
        if let Err(e) = std::fs::write(path, &out.text) {
            return (EXIT_INPUT, String::new(), single_line(&format!("{}: {e}", path.display())));
        }
        return (out.code, String::new(), String::new());
    }
    (out.code, out.text, String::new())
}
