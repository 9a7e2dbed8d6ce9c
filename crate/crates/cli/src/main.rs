use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qmvtm::algebra::{AxiomReport, CheckMode, Family, FiniteAlgebra};
use qmvtm::harness::{self, equiv_check, Corpus, Mode, Verdict};
use qmvtm::io::{self, AlgebraSource};
use qmvtm::machine::{Machine, SymbolId};
use qmvtm::semantics::{eval_depth, eval_width, Budget};
use qmvtm::transforms::{self, Sidecar, WidthVariant};

const PASS: u8 = 0;
const VIOLATION: u8 = 1;
const USAGE: u8 = 2;
const INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qmvtm",
    version,
    about = "Turing machines valued in finite QMV algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Algebra tables.
    Algebra {
        #[command(subcommand)]
        command: AlgebraCommand,
    },
    /// Evaluate a machine on one input.
    Run {
        machine: PathBuf,
        input: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Depth)]
        mode: ModeArg,
        #[arg(long, default_value_t = 500)]
        max_steps: usize,
        /// Turn off dominance pruning in depth-first search.
        #[arg(long)]
        no_prune: bool,
        #[arg(long)]
        json: bool,
    },
    /// Apply a construction and write the resulting machine.
    Transform {
        machine: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Largest closure (S_M or R_M⊞) the transition constructions may build.
        #[arg(long, default_value_t = 64)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Aligned)]
        variant: VariantArg,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Compare two machines' values over a set of inputs.
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Depth)]
        mode: ModeArg,
        /// One input per line; `#` starts a comment.
        #[arg(long, conflicts_with = "max_len")]
        inputs: Option<PathBuf>,
        /// Every input up to this length.
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 500)]
        max_steps: usize,
        /// Sidecar with the input encoding for the right machine. Defaults to
        /// `<right>.sidecar.json` from a transitions-depth transform, if present.
        #[arg(long)]
        encode: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Run the built-in checks.
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum AlgebraCommand {
    /// Check axiom families on a built-in name or an algebra file.
    Check {
        algebra: String,
        /// A family name (S, MV, QMV, EFFECT, LATTICE, ...) or `all`.
        #[arg(long, default_value = "all")]
        family: String,
        /// Report every violating tuple instead of the first.
        #[arg(long)]
        all_violations: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Depth,
    Width,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Depth => Mode::Depth,
            ModeArg::Width => Mode::Width,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Initial,
    Final,
    Both,
    TransitionsWidth,
    TransitionsDepth,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Aligned,
    Literal,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyTarget {
    Corpus,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}

fn dispatch(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Algebra {
            command:
                AlgebraCommand::Check {
                    algebra,
                    family,
                    all_violations,
                    json,
                },
        } => algebra_check(&algebra, &family, all_violations, json),
        Command::Run {
            machine,
            input,
            mode,
            max_steps,
            no_prune,
            json,
        } => run(
            &machine,
            &input,
            mode.into(),
            budget(max_steps, no_prune)?,
            json,
        ),
        Command::Transform {
            machine,
            kind,
            cap,
            variant,
            output,
        } => transform(&machine, kind, cap, variant, &output),
        Command::Equiv {
            left,
            right,
            mode,
            inputs,
            max_len,
            max_steps,
            encode,
            json,
        } => equiv(
            &left,
            &right,
            mode.into(),
            inputs.as_deref(),
            max_len,
            max_steps,
            encode.as_deref(),
            json,
        ),
        Command::Verify {
            target: VerifyTarget::Corpus,
            json,
        } => verify(json),
    }
}

fn budget(max_steps: usize, no_prune: bool) -> Result<Budget> {
    if max_steps == 0 {
        bail!("--max-steps must be at least 1");
    }
    Ok(if no_prune {
        Budget::unpruned(max_steps)
    } else {
        Budget::new(max_steps)
    })
}

fn load_machine(path: &Path) -> Result<Machine> {
    io::load_machine(path).with_context(|| format!("loading {}", path.display()))
}

fn load_algebra(reference: &str) -> Result<AlgebraSource> {
    let path = Path::new(reference);
    if path.is_file() {
        return io::load_algebra_source(path).with_context(|| format!("loading {reference}"));
    }
    Ok(AlgebraSource::Total(Box::new(io::resolve_algebra(
        reference, None,
    )?)))
}

fn print_report(r: &AxiomReport) {
    match r.first() {
        None => println!("{:<18} pass", r.family.to_string()),
        Some(v) => {
            println!("{:<18} FAIL  {v}", r.family.to_string());
            for v in r.violations.iter().skip(1) {
                println!("{:<18}       {v}", "");
            }
        }
    }
}

fn algebra_check(reference: &str, family: &str, all_violations: bool, json: bool) -> Result<u8> {
    let mode = if all_violations {
        CheckMode::AllViolations
    } else {
        CheckMode::FirstViolation
    };
    let source = load_algebra(reference)?;
    let families: Vec<Family> = if family.eq_ignore_ascii_case("all") {
        Family::TOTAL.to_vec()
    } else {
        vec![family.parse::<Family>().map_err(anyhow::Error::msg)?]
    };

    let all = family.eq_ignore_ascii_case("all");
    let only_effect = families == [Family::Effect];
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    let alg: FiniteAlgebra = match source {
        AlgebraSource::Effect(table) => {
            let r = table.check_axioms(mode);
            let ok = r.pass;
            if all || only_effect || !ok {
                reports.push(r);
            }
            if only_effect {
                return finish_check(reference, &reports, &skipped, json);
            }
            if !ok {
                skipped.push("not an effect algebra, so it has no total extension".to_string());
                return finish_check(reference, &reports, &skipped, json);
            }
            table.extend()?
        }
        AlgebraSource::Total(a) => {
            if only_effect {
                bail!("EFFECT applies to partial effect tables; `{reference}` is a total algebra");
            }
            *a
        }
    };
    for f in families {
        match alg.check_axioms(f, mode) {
            Ok(r) => reports.push(r),
            Err(e) if all => skipped.push(format!("{f}: {e}")),
            Err(e) => return Err(e.into()),
        }
    }
    finish_check(alg.name(), &reports, &skipped, json)
}

fn finish_check(name: &str, reports: &[AxiomReport], skipped: &[String], json: bool) -> Result<u8> {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(
                &json!({ "algebra": name, "reports": reports, "skipped": skipped })
            )?
        );
    } else {
        println!("{name}");
        for r in reports {
            print_report(r);
        }
        for s in skipped {
            println!("skipped: {s}");
        }
    }
    Ok(if reports.iter().all(|r| r.pass) {
        PASS
    } else {
        VIOLATION
    })
}

fn run(path: &Path, input: &str, mode: Mode, budget: Budget, json: bool) -> Result<u8> {
    let m = load_machine(path)?;
    let s = m.parse_input(input)?;
    let r = match mode {
        Mode::Depth => eval_depth(&m, &s, &budget)?,
        Mode::Width => eval_width(&m, &s, &budget)?,
    };
    let alg = m.algebra();
    if json {
        println!("{}", r.to_json(alg));
    } else {
        println!("{}", r.display(alg));
    }
    Ok(if r.complete { PASS } else { INCONCLUSIVE })
}

/// The `"algebra"` field for a machine written to `output`, given the one read
/// next to `source`.
fn algebra_ref_for(source: &Path, output: &Path) -> Result<String> {
    let text =
        std::fs::read_to_string(source).with_context(|| format!("reading {}", source.display()))?;
    let reference = io::machine_algebra_ref(&text)?;
    let src_dir = source.parent().unwrap_or(Path::new(""));
    let file = src_dir.join(&reference);
    if !file.is_file() {
        return Ok(reference);
    }
    let out_dir = output.parent().unwrap_or(Path::new(""));
    let same = |a: &Path, b: &Path| match (a.canonicalize(), b.canonicalize()) {
        (Ok(x), Ok(y)) => x == y,
        _ => a == b,
    };
    if same(src_dir, out_dir) || Path::new(&reference).is_absolute() {
        return Ok(reference);
    }
    Ok(file.canonicalize()?.to_string_lossy().into_owned())
}

fn sidecar_path(output: &Path) -> PathBuf {
    output.with_extension("sidecar.json")
}

fn transform(
    path: &Path,
    kind: Kind,
    cap: usize,
    variant: VariantArg,
    output: &Path,
) -> Result<u8> {
    let m = load_machine(path)?;
    let (out, sidecar) = match kind {
        Kind::Initial => {
            let o = transforms::classicalize_initial(&m);
            let s = Sidecar::new("initial", &m, &o);
            (o, s)
        }
        Kind::Final => {
            let o = transforms::classicalize_final(&m);
            let s = Sidecar::new("final", &m, &o);
            (o, s)
        }
        Kind::Both => {
            let o = transforms::classicalize_both(&m);
            let s = Sidecar::new("both", &m, &o);
            (o, s)
        }
        Kind::TransitionsWidth => {
            let v = match variant {
                VariantArg::Aligned => WidthVariant::Aligned,
                VariantArg::Literal => WidthVariant::Literal,
            };
            transforms::classicalize_transitions_width(&m, cap, v)?
        }
        Kind::TransitionsDepth => transforms::classicalize_transitions_depth(&m, cap)?,
    };
    let reference = algebra_ref_for(path, output)?;
    std::fs::write(output, io::machine_to_json(&out, &reference))
        .with_context(|| format!("writing {}", output.display()))?;
    let side = sidecar_path(output);
    std::fs::write(
        &side,
        serde_json::to_string_pretty(&serde_json::to_value(&sidecar)?)?,
    )
    .with_context(|| format!("writing {}", side.display()))?;
    println!(
        "{}: {} states, {} transitions -> {}",
        out.name(),
        out.states().len(),
        out.transitions().count(),
        output.display()
    );
    Ok(PASS)
}

fn read_inputs(m: &Machine, file: &Path) -> Result<Vec<Vec<SymbolId>>> {
    let text =
        std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(
            m.parse_input(line)
                .with_context(|| format!("{}:{}", file.display(), n + 1))?,
        );
    }
    Ok(out)
}

fn encoding_for(right: &Path, explicit: Option<&Path>) -> Result<Option<BTreeMap<String, String>>> {
    let path = match explicit {
        Some(p) => p.to_path_buf(),
        None => {
            let p = sidecar_path(right);
            if !p.is_file() {
                return Ok(None);
            }
            p
        }
    };
    let text =
        std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let side: Sidecar =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    match side.encoding {
        Some(e) => Ok(Some(e)),
        None if explicit.is_some() => bail!("{} has no input encoding", path.display()),
        None => Ok(None),
    }
}

#[allow(clippy::too_many_arguments)]
fn equiv(
    left: &Path,
    right: &Path,
    mode: Mode,
    inputs: Option<&Path>,
    max_len: usize,
    max_steps: usize,
    encode: Option<&Path>,
    json: bool,
) -> Result<u8> {
    let m1 = load_machine(left)?;
    let m2 = load_machine(right)?;
    if m1.algebra().id() != m2.algebra().id() {
        bail!(
            "{} and {} are over different algebras",
            left.display(),
            right.display()
        );
    }
    let inputs = match inputs {
        Some(f) => read_inputs(&m1, f)?,
        None => harness::all_inputs(&m1, max_len),
    };
    let encoding = encoding_for(right, encode)?;
    let r = equiv_check(
        &m1,
        &m2,
        mode,
        &inputs,
        &budget(max_steps, false)?,
        encoding.as_ref(),
    )?;
    if json {
        println!("{}", serde_json::to_string_pretty(&r.to_json())?);
    } else {
        print!("{r}");
    }
    Ok(match r.verdict {
        Verdict::Holds => PASS,
        Verdict::Violated => VIOLATION,
        Verdict::Inconclusive => INCONCLUSIVE,
    })
}

fn verify(json: bool) -> Result<u8> {
    let r = harness::verify(&Corpus::standard())?;
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::to_value(&r)?)?
        );
    } else {
        println!("{r}");
    }
    Ok(if r.passed() { PASS } else { VIOLATION })
}
