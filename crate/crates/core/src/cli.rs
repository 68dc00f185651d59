//! The `nvt` command line.
//!
//! Element arguments are resolved in this order: a path to an existing file
//! (element file, diagram or word inside), then a diagram `T | [..] | T`,
//! then a word. Output files are written to a temporary name and renamed, so
//! a failed command never leaves a partial file behind.
//!
//! | variable | flag |
//! |----------|------|
//! | `NVT_DIM` | `--dim` |
//! | `NVT_MAX_LEVEL` | `--max-level` |
//! | `NVT_OUT_DIR` | `--out-dir` |
//! | `NVT_RADIUS` | `--radius` |
//! | `NVT_BUDGET` | `--budget` |
//! | `NVT_SEED` | `--seed` |

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::dyadic::set_max_level;
use crate::element::{canonical_serialize, compose, invert, random_element, Element};
use crate::error::{Error, Result};
use crate::generators::{evaluate_word, parse_word, symmetric_generating_set, RelationTable};
use crate::metrics::{
    bfs_ball, c0_csv, check_bounds, distortion_csv, experiment_c0_growth, experiment_distortion, genericity_table,
    DEFAULT_BALL_BUDGET,
};
use crate::normal_form::{decompose, upper_bound_length};
use crate::render::{render_diagram, render_tree_ascii, render_tree_partition, render_tree_svg, Format};
use crate::tree::{diagram_to_element, element_to_diagram, CaretTree, TreePairDiagram};

#[derive(Debug, Parser)]
#[command(name = "nvt", version, about = "Exact computations in Brin's groups nV")]
pub struct Cli {
    /// Dimension used for words and diagrams.
    #[arg(long, global = true, env = "NVT_DIM", default_value_t = 2)]
    pub dim: usize,
    /// Largest dyadic level any interval may reach.
    #[arg(long, global = true, env = "NVT_MAX_LEVEL", default_value_t = 64)]
    pub max_level: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Experiment {
    Ball,
    C0,
    Distortion,
    Counts,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RenderFormat {
    Ascii,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a word and print the reduced element.
    Eval {
        word: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exit 0 when the two elements are equal, 1 otherwise.
    Eq { a: String, b: String },
    /// Product of the arguments, the first applied first.
    Mul {
        #[arg(required = true)]
        items: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Inv {
        item: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Read an element, diagram or word and print its reduced form.
    Reduce {
        item: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print a verified word for the element.
    Decompose {
        item: String,
        /// Rewrite onto the finite generating set.
        #[arg(long)]
        finite: bool,
        /// Also print the shift relations used for the rewriting.
        #[arg(long)]
        relations: bool,
    },
    /// Certified upper bound on the word length; exact length with `--radius`.
    Wordlength {
        item: String,
        /// Search the Cayley ball up to this radius for the exact length.
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long, env = "NVT_BUDGET", default_value_t = DEFAULT_BALL_BUDGET)]
        budget: usize,
    },
    /// Run an experiment and write its CSV and a run manifest.
    Experiment {
        name: Experiment,
        #[arg(long, env = "NVT_OUT_DIR", default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, env = "NVT_RADIUS", default_value_t = 4)]
        radius: usize,
        /// Largest `n` for c0, distortion and counts.
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, env = "NVT_BUDGET", default_value_t = DEFAULT_BALL_BUDGET)]
        budget: usize,
        #[arg(long, env = "NVT_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Draw a tree's partition, or an element as two numbered partitions.
    Render {
        item: String,
        #[arg(long, value_enum, default_value_t = RenderFormat::Ascii)]
        format: RenderFormat,
        /// Draw the caret tree itself instead of its partition.
        #[arg(long)]
        tree: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print a random element (for fixtures and experiments).
    Random {
        #[arg(long, env = "NVT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        carets: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ParseError { .. } | Error::InvalidSymbol { .. } => 2,
        Error::UnverifiedDecomposition(_) | Error::RelationTableFailure(_) => 4,
        Error::BallTooLarge { .. } => 5,
        Error::UnsupportedDimension(_) => 6,
        _ => 3,
    }
}

/// Writes `contents` to `path` through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

enum Input {
    Element(Element),
    Diagram(TreePairDiagram),
    Tree(CaretTree),
}

fn parse_text(text: &str, dim: usize) -> Result<Input> {
    let t = text.trim();
    if t.lines().any(|l| l.trim_start().starts_with("dim")) {
        return Ok(Input::Element(text.parse()?));
    }
    if t.contains('|') {
        return Ok(Input::Diagram(TreePairDiagram::parse(t, dim)?));
    }
    if t.starts_with('(') || t == "L" {
        return Ok(Input::Tree(t.parse()?));
    }
    Ok(Input::Element(evaluate_word(&parse_word(t)?, dim)?))
}

fn read_input(arg: &str, dim: usize) -> Result<Input> {
    let path = Path::new(arg);
    if !arg.is_empty() && path.is_file() {
        return parse_text(&fs::read_to_string(path)?, dim);
    }
    parse_text(arg, dim)
}

fn read_element(arg: &str, dim: usize) -> Result<Element> {
    match read_input(arg, dim)? {
        Input::Element(e) => Ok(e),
        Input::Diagram(d) => diagram_to_element(&d),
        Input::Tree(_) => Err(Error::parse(0, "expected an element, diagram or word, found a tree")),
    }
}

fn summary(e: &Element) -> String {
    format!(
        "# blocks {}\n# carets {}\n# depth {}\n",
        e.block_count(),
        e.caret_count(),
        e.depth()
    )
}

fn emit(out: &mut dyn std::io::Write, text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn emit_element(out: &mut dyn std::io::Write, e: &Element, output: Option<&Path>) -> Result<()> {
    emit(out, &e.to_string(), output)?;
    Ok(out.write_all(summary(e).as_bytes())?)
}

fn manifest(cli_args: &[OsString], lines: &[(&str, String)]) -> String {
    let mut s = String::from("# nvt run manifest\n");
    s.push_str(&format!("version = {}\n", env!("CARGO_PKG_VERSION")));
    let args: Vec<String> = cli_args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    s.push_str(&format!("command = {}\n", args.join(" ")));
    for (k, v) in lines {
        s.push_str(&format!("{k} = {v}\n"));
    }
    s
}

/// Runs a parsed command, writing normal output to `out`. Returns the exit
/// status for successful runs (`eq` uses 1 for "not equal").
pub fn run(cli: &Cli, args: &[OsString], out: &mut dyn std::io::Write) -> Result<i32> {
    set_max_level(cli.max_level)?;
    let dim = cli.dim;
    if dim == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    match &cli.command {
        Command::Eval { word, output } => {
            let e = evaluate_word(&parse_word(word)?, dim)?;
            emit_element(out, &e, output.as_deref())?;
        }
        Command::Eq { a, b } => {
            let (x, y) = (read_element(a, dim)?, read_element(b, dim)?);
            let equal = x == y;
            writeln!(out, "{}", if equal { "equal" } else { "not equal" })?;
            return Ok(if equal { 0 } else { 1 });
        }
        Command::Mul { items, output } => {
            let mut acc: Option<Element> = None;
            for item in items {
                let e = read_element(item, dim)?;
                acc = Some(match acc {
                    None => e,
                    Some(a) => compose(&a, &e)?,
                });
            }
            emit_element(out, &acc.expect("at least one factor"), output.as_deref())?;
        }
        Command::Inv { item, output } => {
            emit_element(out, &invert(&read_element(item, dim)?), output.as_deref())?;
        }
        Command::Reduce { item, output } => {
            emit_element(out, &read_element(item, dim)?, output.as_deref())?;
        }
        Command::Decompose { item, finite, relations } => {
            let e = read_element(item, dim)?;
            if *relations {
                write!(out, "{}", RelationTable::get(e.dim())?)?;
            }
            let w = if *finite { upper_bound_length(&e)?.0 } else { decompose(&e)? };
            writeln!(out, "{w}")?;
            writeln!(out, "# verified: {} symbols evaluate to the input", w.len())?;
        }
        Command::Wordlength { item, radius, budget } => {
            let e = read_element(item, dim)?;
            let (_, bound) = upper_bound_length(&e)?;
            writeln!(out, "upper_bound {bound}")?;
            if let Some(r) = radius {
                let key = canonical_serialize(&e);
                let ball = bfs_ball((*r).min(bound), e.dim(), &symmetric_generating_set(e.dim()), *budget)?;
                match ball.get(&key) {
                    Some(rec) => writeln!(out, "exact {}", rec.length)?,
                    None => writeln!(out, "exact > {r}")?,
                }
            }
        }
        Command::Experiment {
            name,
            out_dir,
            radius,
            n_max,
            budget,
            seed,
        } => {
            let started = Instant::now();
            let (file, csv, mut extra): (&str, String, Vec<(&str, String)>) = match name {
                Experiment::Ball => {
                    let ball = bfs_ball(*radius, dim, &symmetric_generating_set(dim), *budget)?;
                    let report = check_bounds(&ball)?;
                    write!(out, "{report}")?;
                    let spheres: Vec<String> = ball.sphere_sizes().iter().map(|n| n.to_string()).collect();
                    (
                        "ball.csv",
                        ball.to_csv(),
                        vec![
                            ("radius", radius.to_string()),
                            ("budget", budget.to_string()),
                            ("elements", ball.len().to_string()),
                            ("sphere_sizes", spheres.join(",")),
                        ],
                    )
                }
                Experiment::C0 => {
                    let n = n_max.unwrap_or(14);
                    ("c0.csv", c0_csv(&experiment_c0_growth(n)?), vec![("n_max", n.to_string())])
                }
                Experiment::Distortion => {
                    let n = n_max.unwrap_or(10);
                    (
                        "distortion.csv",
                        distortion_csv(&experiment_distortion(n)?),
                        vec![("n_max", n.to_string())],
                    )
                }
                Experiment::Counts => {
                    let n = n_max.unwrap_or(20).min(64);
                    ("counts.csv", genericity_table(n).to_csv(), vec![("n_max", n.to_string())])
                }
            };
            let path = out_dir.join(file);
            write_atomic(&path, csv.as_bytes())?;
            extra.extend([
                ("experiment", format!("{name:?}").to_lowercase()),
                ("dim", dim.to_string()),
                ("max_level", cli.max_level.to_string()),
                ("seed", seed.to_string()),
                ("output", file.to_string()),
                ("seconds", format!("{:.3}", started.elapsed().as_secs_f64())),
            ]);
            write_atomic(&out_dir.join("manifest.txt"), manifest(args, &extra).as_bytes())?;
            writeln!(out, "wrote {}", path.display())?;
        }
        Command::Render {
            item,
            format,
            tree,
            output,
        } => {
            let fmt = match format {
                RenderFormat::Ascii => Format::Ascii,
                RenderFormat::Svg => Format::Svg,
            };
            let text = match read_input(item, dim)? {
                Input::Tree(t) if *tree => match fmt {
                    Format::Ascii => render_tree_ascii(&t),
                    Format::Svg => render_tree_svg(&t),
                },
                Input::Tree(t) => render_tree_partition(&t, dim, fmt, true)?,
                Input::Diagram(d) => render_diagram(&d, fmt)?,
                Input::Element(e) => render_diagram(&element_to_diagram(&e), fmt)?,
            };
            emit(out, &text, output.as_deref())?;
        }
        Command::Random { seed, carets, output } => {
            emit_element(out, &random_element(*seed, *carets, dim)?, output.as_deref())?;
        }
    }
    Ok(0)
}

/// Entry point used by the binary; returns the process exit status.
pub fn main() -> i32 {
    let args: Vec<OsString> = std::env::args_os().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &args, &mut lock) {
        Ok(code) => code,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
