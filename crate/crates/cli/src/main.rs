//! `qindex` command-line front end.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qindex::angles::{self, render_angles, StrictOutcome};
use qindex::engine::{self, divergence_probe, BaseClass, IndexRequest, IndexResult, Limits, Probe, Verdict};
use qindex::pachner::{apply_move, parse_paths, verify_path, verify_path_with_efficiency, MoveSpec, PachnerError};
use qindex::series::{HalfInt, TruncatedSeries};
use qindex::surfaces::{efficiency_report, render_report};
use qindex::tetindex::{generating_sum_zero, pentagon_sides, quadratic_identity_lhs};
use qindex::tri::{decode_isosig, encode_isosig, load_gluing_matrix, qmatching_matrix, GluingData, TriError, Triangulation};

#[derive(Parser)]
#[command(name = "qindex", version, about = "3D-index of ideal triangulations via Q-normal classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Args)]
struct Input {
    /// Isomorphism signature of the triangulation.
    #[arg(long)]
    isosig: Option<String>,
    /// Gluing matrix file (`n r` header, edge rows, optional cusp rows).
    #[arg(long)]
    gluing: Option<PathBuf>,
}

#[derive(Args)]
struct SumOpts {
    /// Truncation order as a q-exponent, halves allowed (e.g. `21/2`).
    #[arg(long, default_value = "10")]
    order: HalfInt,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Exit with status 3 unless the sum converged.
    #[arg(long)]
    strict_convergence: bool,
    #[arg(long, default_value_t = 4)]
    initial_radius: u32,
    #[arg(long, default_value_t = 24)]
    max_radius: u32,
    #[arg(long, default_value_t = 2)]
    stabilization: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Print the gluing table of a signature.
    Decode {
        #[arg(long)]
        isosig: String,
    },
    /// Canonical signature of a gluing table file or of any signature.
    Encode {
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        isosig: Option<String>,
    },
    /// Edge equation matrix of a signature.
    Edges {
        #[arg(long)]
        isosig: String,
    },
    /// Q-matching matrix `B`.
    Qmatch {
        #[command(flatten)]
        input: Input,
    },
    /// Index sum over the coset of a class (default 0).
    Index {
        #[command(flatten)]
        input: Input,
        /// Base class as quad coordinates, e.g. "0 1 0 0 0 1 0 0 1".
        #[arg(long)]
        class: Option<String>,
        /// Also run the divergence probe on the base class.
        #[arg(long)]
        probe: bool,
        #[command(flatten)]
        opts: SumOpts,
    },
    /// Index at a peripheral class `Σ p_k μ_k + q_k λ_k`.
    IndexPeripheral {
        #[command(flatten)]
        input: Input,
        /// Coefficients "p1 q1 p2 q2 …", halves allowed.
        #[arg(long)]
        peripheral: String,
        #[command(flatten)]
        opts: SumOpts,
    },
    /// A generalised angle structure (vanishing holonomy when cusp rows exist).
    Angles {
        #[command(flatten)]
        input: Input,
    },
    /// Strict angle structure or an obstructing class.
    Strict {
        #[command(flatten)]
        input: Input,
    },
    /// Extreme rays and 1-efficiency verdicts.
    Efficiency {
        #[command(flatten)]
        input: Input,
    },
    /// Apply one move, e.g. `2-3:0`, `3-2:2`, `0-2:1:0:1`, `2-0:3`, or a table code.
    Move {
        #[arg(long)]
        isosig: String,
        #[arg(long = "move", allow_hyphen_values = true)]
        mv: String,
    },
    /// Replay every path in a path file.
    VerifyPath {
        #[arg(long)]
        file: PathBuf,
        /// Also report 1-efficiency of each triangulation on the path.
        #[arg(long)]
        efficiency: bool,
    },
    /// Check the quadratic and pentagon identities and `Σ_e I_Δ(0,e) q^e = 0`.
    Identities {
        #[arg(long, default_value = "6")]
        order: HalfInt,
    },
}

enum CliError {
    Usage(String),
    Io(String),
    Math(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Math(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Math(m) => m,
        }
    }
}

fn tri_err(e: TriError) -> CliError {
    match e {
        TriError::MalformedSignature(_) => CliError::Usage(e.to_string()),
        TriError::Parse { .. } | TriError::Shape(_) => CliError::Io(e.to_string()),
        TriError::InvalidTriangulation(_) => CliError::Math(e.to_string()),
    }
}

fn pachner_err(e: PachnerError) -> CliError {
    match e {
        PachnerError::PathParse { .. } => CliError::Io(e.to_string()),
        PachnerError::Tri(t) => tri_err(t),
        other => CliError::Math(other.to_string()),
    }
}

fn math<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Math(e.to_string())
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn decode(sig: &str) -> Result<Triangulation, CliError> {
    let t = decode_isosig(sig).map_err(tri_err)?;
    t.validate().map_err(tri_err)?;
    Ok(t)
}

fn load(input: &Input) -> Result<GluingData, CliError> {
    match (&input.gluing, &input.isosig) {
        (Some(path), None) => load_gluing_matrix(&read(path)?).map_err(tri_err),
        (None, Some(sig)) => decode(sig)?.gluing_data().map_err(tri_err),
        _ => Err(CliError::Usage("give exactly one of --gluing or --isosig".into())),
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>, CliError> {
    s.split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|_| CliError::Usage(format!("bad integer `{t}`"))))
        .collect()
}

fn parse_halves(s: &str) -> Result<Vec<HalfInt>, CliError> {
    s.split_whitespace()
        .map(|t| t.parse::<HalfInt>().map_err(|e| CliError::Usage(e.to_string())))
        .collect()
}

fn rows_text(rows: &[Vec<i64>]) -> String {
    rows.iter().map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(" ") + "\n").collect()
}

fn series_out(s: &TruncatedSeries, format: Format) -> String {
    match format {
        Format::Text => s.to_text(),
        Format::Machine => s.to_machine(),
    }
}

fn run_sum(g: GluingData, base: BaseClass, opts: &SumOpts) -> Result<(String, IndexResult), CliError> {
    let limits = Limits {
        initial_radius: opts.initial_radius,
        max_radius: opts.max_radius,
        stabilization_shells: opts.stabilization,
    };
    let req = IndexRequest { gluing: g, base, order: opts.order, limits };
    let r = engine::index(&req).map_err(math)?;
    let mut out = series_out(&r.series, opts.format) + "\n";
    let lim = &r.limits;
    match opts.format {
        Format::Text => {
            let _ = writeln!(out, "# verdict: {}", r.verdict);
            let _ = writeln!(
                out,
                "# terms: {}, shells: {}, limits: initial {} max {} stabilization {}",
                r.terms_included, r.shells_explored, lim.initial_radius, lim.max_radius, lim.stabilization_shells
            );
        }
        Format::Machine => {
            let _ = writeln!(
                out,
                "verdict={} terms={} shells={} initial_radius={} max_radius={} stabilization_shells={}",
                r.verdict.to_string().replace(' ', "_"),
                r.terms_included,
                r.shells_explored,
                lim.initial_radius,
                lim.max_radius,
                lim.stabilization_shells
            );
        }
    }
    if opts.strict_convergence && r.verdict != Verdict::Converged {
        print!("{out}");
        return Err(CliError::Math(format!("sum did not converge: {}", r.verdict)));
    }
    Ok((out, r))
}

fn identities(order: HalfInt) -> (String, bool) {
    let mut out = String::new();
    let mut ok_all = true;
    let mut report = |name: &str, failures: Vec<String>, total: usize| {
        ok_all &= failures.is_empty();
        if failures.is_empty() {
            let cases = if total == 1 { String::new() } else { format!("{total} cases, ") };
            let _ = writeln!(out, "{name}: ok ({cases}order {order})");
        } else {
            let _ = writeln!(out, "{name}: FAILED {} of {total}: {}", failures.len(), failures.join(", "));
        }
    };
    let mut fails = Vec::new();
    for m in -3..=3 {
        for c in -3..=3 {
            let want = if c == 0 { TruncatedSeries::one(order) } else { TruncatedSeries::zero(order) };
            if quadratic_identity_lhs(m, c, order) != want {
                fails.push(format!("(m={m}, c={c})"));
            }
        }
    }
    report("quadratic", fails, 49);
    let mut fails = Vec::new();
    let r = [-1i64, 0, 1];
    for &m1 in &r {
        for &m2 in &r {
            for &x1 in &r {
                for &x2 in &r {
                    for &x3 in &r {
                        let (l, rr) = pentagon_sides(m1, m2, x1, x2, x3, order);
                        if l != rr {
                            fails.push(format!("({m1},{m2},{x1},{x2},{x3})"));
                        }
                    }
                }
            }
        }
    }
    report("pentagon", fails, 243);
    let z = generating_sum_zero(order);
    report("generating", if z.is_zero() { Vec::new() } else { vec![z.to_text()] }, 1);
    (out, ok_all)
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Decode { isosig } => Ok(decode(&isosig)?.to_table()),
        Command::Encode { file, isosig } => {
            let t = match (file, isosig) {
                (Some(f), None) => Triangulation::from_table(&read(&f)?).map_err(tri_err)?,
                (None, Some(s)) => decode(&s)?,
                _ => return Err(CliError::Usage("give exactly one of --file or --isosig".into())),
            };
            Ok(encode_isosig(&t) + "\n")
        }
        Command::Edges { isosig } => Ok(decode(&isosig)?.gluing_data().map_err(tri_err)?.to_text()),
        Command::Qmatch { input } => Ok(rows_text(&qmatching_matrix(&load(&input)?))),
        Command::Index { input, class, probe, opts } => {
            let g = load(&input)?;
            let base = match class {
                Some(c) => parse_ints(&c)?,
                None => vec![0; 3 * g.n],
            };
            let (mut out, r) = run_sum(g.clone(), BaseClass::Class(base), &opts)?;
            if probe {
                match divergence_probe(&g, &r.base_class).map_err(math)? {
                    Probe::Converges => out.push_str("# probe: converges\n"),
                    Probe::Witness { direction, degrees, .. } => {
                        let _ = writeln!(out, "# probe: witness direction {direction:?} doubled degrees {degrees:?}");
                    }
                }
            }
            Ok(out)
        }
        Command::IndexPeripheral { input, peripheral, opts } => {
            let g = load(&input)?;
            Ok(run_sum(g, BaseClass::Peripheral(parse_halves(&peripheral)?), &opts)?.0)
        }
        Command::Angles { input } => {
            let g = load(&input)?;
            let (alpha, kind) = if g.cusp_rows.is_some() {
                (angles::solve_vanishing_holonomy(&g).map_err(math)?, "vanishing holonomy")
            } else {
                (angles::solve_generalized(&g).map_err(math)?, "generalised")
            };
            Ok(format!("# {kind}, units of pi\n{}\n", render_angles(&alpha)))
        }
        Command::Strict { input } => {
            let g = load(&input)?;
            let holonomy = g.cusp_rows.is_some();
            let out = if holonomy {
                angles::strict_exists_vanishing_holonomy(&g)
            } else {
                angles::strict_exists(&g)
            }
            .map_err(math)?;
            Ok(match out {
                StrictOutcome::Strict(a) => format!("strict {}\n", render_angles(&a)),
                StrictOutcome::Witness { class, chi } => format!("witness {} chi={chi}\n", rows_text(&[class]).trim_end()),
            })
        }
        Command::Efficiency { input } => Ok(render_report(&efficiency_report(&load(&input)?).map_err(math)?)),
        Command::Move { isosig, mv } => {
            let m: MoveSpec = mv.parse().map_err(CliError::Usage)?;
            let t = apply_move(&decode(&isosig)?, m).map_err(pachner_err)?;
            Ok(encode_isosig(&t) + "\n")
        }
        Command::VerifyPath { file, efficiency } => {
            let mut out = String::new();
            for p in parse_paths(&read(&file)?).map_err(pachner_err)? {
                let r = if efficiency { verify_path_with_efficiency(&p) } else { verify_path(&p) }.map_err(pachner_err)?;
                if efficiency {
                    let clean = r.efficiency.iter().filter(|v| v.is_clean()).count();
                    let _ = writeln!(out, "OK {} steps, {clean}/{} 1-efficient", r.steps, r.efficiency.len());
                } else {
                    let _ = writeln!(out, "OK {} steps", r.steps);
                }
            }
            Ok(out)
        }
        Command::Identities { order } => {
            let (out, ok) = identities(order);
            if ok {
                Ok(out)
            } else {
                print!("{out}");
                Err(CliError::Math("identity check failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
