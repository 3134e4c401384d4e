mod commands;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use extrikit::instances::bundle::{load_instance, to_bundle_json};
use extrikit::instances::{fixture, ExtriInstance, FIXTURES};
use extrikit::{Fp, Rational, Scalar};
use sha2::{Digest, Sha256};

use commands::Outcome;

#[derive(Parser, Debug)]
#[command(name = "extrikit", version, about = "Extension reports for finite extriangulated instances")]
struct Cli {
    /// Exit nonzero on findings (unbalanced pairs, failed conditions), not
    /// only on violated identities.
    #[arg(long, global = true)]
    strict: bool,
    /// Permit --nmax / --pos / --neg above 8.
    #[arg(long, global = true)]
    allow_large: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Depth {
    #[arg(long, default_value_t = 4)]
    nmax: usize,
}

#[derive(Subcommand, Debug, Clone)]
enum Cmd {
    /// Full instance validation.
    Validate { bundle: String },
    /// Dimension tables for positive or negative extensions.
    Ext {
        bundle: String,
        #[arg(long, conflicts_with = "neg", required_unless_present = "neg")]
        pos: Option<usize>,
        #[arg(long)]
        neg: Option<usize>,
        /// Restrict to pairs `C,A` (repeatable).
        #[arg(long)]
        pairs: Vec<String>,
        #[arg(long, value_enum)]
        method: Option<Method>,
        /// Compute with both methods and report differences.
        #[arg(long)]
        cross_check: bool,
    },
    /// Exactness of the long exact sequences over the conflation table.
    LesCheck {
        bundle: String,
        #[command(flatten)]
        depth: Depth,
    },
    /// Negative-extension balance and the conditions around it.
    Balance {
        bundle: String,
        #[command(flatten)]
        depth: Depth,
    },
    /// Positive global dimension, or a lower bound.
    Gldim {
        bundle: String,
        #[command(flatten)]
        depth: Depth,
    },
    /// Defect dimensions and stable-Yoneda checks.
    Defect {
        bundle: String,
        #[arg(long)]
        reflect: bool,
    },
    /// Cohomology of the connected-sequence complexes and the generated
    /// sub-bifunctor.
    Relstruct {
        bundle: String,
        #[command(flatten)]
        depth: Depth,
    },
    /// Everything, as JSON.
    Report {
        bundle: String,
        #[arg(long)]
        json: PathBuf,
        #[command(flatten)]
        depth: Depth,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Coend,
    Satellite,
    End,
    Kernel,
}

impl Cmd {
    fn bundle(&self) -> &str {
        match self {
            Cmd::Validate { bundle }
            | Cmd::Ext { bundle, .. }
            | Cmd::LesCheck { bundle, .. }
            | Cmd::Balance { bundle, .. }
            | Cmd::Gldim { bundle, .. }
            | Cmd::Defect { bundle, .. }
            | Cmd::Relstruct { bundle, .. }
            | Cmd::Report { bundle, .. } => bundle,
        }
    }

    fn depth(&self) -> usize {
        match self {
            Cmd::Ext { pos, neg, .. } => pos.or(*neg).unwrap_or(0),
            Cmd::LesCheck { depth, .. }
            | Cmd::Balance { depth, .. }
            | Cmd::Gldim { depth, .. }
            | Cmd::Relstruct { depth, .. }
            | Cmd::Report { depth, .. } => depth.nmax,
            _ => 0,
        }
    }
}

fn field_override() -> Result<Option<u32>> {
    match std::env::var("EXTRIKIT_FIELD") {
        Err(_) => Ok(None),
        Ok(v) => {
            let v = v.trim();
            if v.eq_ignore_ascii_case("q") || v == "0" {
                return Ok(Some(0));
            }
            let p: u32 = v.parse().with_context(|| format!("EXTRIKIT_FIELD={v:?} is neither Q nor a prime"))?;
            Ok(Some(p))
        }
    }
}

fn bundle_characteristic(path: &Path) -> Result<u32> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: serde_json::Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(v.pointer("/field/characteristic").and_then(|c| c.as_u64()).unwrap_or(0) as u32)
}

fn load<S: Scalar>(bundle: &str, characteristic: u32) -> Result<ExtriInstance<S>> {
    let path = Path::new(bundle);
    if path.exists() {
        return Ok(load_instance(path, Some(characteristic))?);
    }
    if FIXTURES.contains(&bundle) {
        return Ok(fixture(bundle, characteristic)?);
    }
    bail!("{bundle:?} is neither a file nor a fixture ({})", FIXTURES.join(", "))
}

fn instance_hash<S: Scalar>(inst: &ExtriInstance<S>) -> String {
    hex::encode(Sha256::digest(to_bundle_json(inst).as_bytes()))
}

fn run<S: Scalar>(cli: &Cli, characteristic: u32) -> Result<Outcome> {
    let inst: ExtriInstance<S> = load(cli.cmd.bundle(), characteristic)?;
    let hash = instance_hash(&inst);
    let mut out = match &cli.cmd {
        Cmd::Validate { .. } => commands::validate(&inst),
        Cmd::Ext {
            pos,
            neg,
            pairs,
            method,
            cross_check,
            ..
        } => commands::ext(&inst, *pos, *neg, pairs, *method, *cross_check)?,
        Cmd::LesCheck { depth, .. } => commands::les_check(&inst, depth.nmax)?,
        Cmd::Balance { depth, .. } => commands::balance(&inst, depth.nmax)?,
        Cmd::Gldim { depth, .. } => commands::gldim(&inst, depth.nmax)?,
        Cmd::Defect { reflect, .. } => commands::defect(&inst, *reflect)?,
        Cmd::Relstruct { depth, .. } => commands::relstruct(&inst, depth.nmax)?,
        Cmd::Report { depth, .. } => commands::report(&inst, depth.nmax)?,
    };
    out.json.insert("instance".into(), inst.name.clone().into());
    out.json.insert("instance_sha256".into(), hash.into());
    out.json.insert("characteristic".into(), characteristic.into());
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match try_main(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn try_main(cli: &Cli) -> Result<ExitCode> {
    if cli.cmd.depth() > 8 && !cli.allow_large {
        bail!("depth {} exceeds 8; pass --allow-large to proceed", cli.cmd.depth());
    }
    let path = Path::new(cli.cmd.bundle());
    let characteristic = match field_override()? {
        Some(p) => p,
        None if path.exists() => bundle_characteristic(path)?,
        None => 0,
    };
    let mut out = if characteristic == 0 {
        run::<Rational>(cli, 0)?
    } else {
        run::<Fp>(cli, characteristic)?
    };
    out.json.insert("command".into(), std::env::args().skip(1).collect::<Vec<_>>().join(" ").into());
    out.json.insert("schema".into(), "extrikit-report/1".into());
    out.json.insert("violations".into(), out.violations.clone().into());
    out.json.insert("findings".into(), out.findings.clone().into());
    for line in &out.text {
        println!("{line}");
    }
    if let Cmd::Report { json, .. } = &cli.cmd {
        let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(out.json.clone()))?;
        s.push('\n');
        std::fs::write(json, s).with_context(|| format!("writing {}", json.display()))?;
        println!("wrote {}", json.display());
    }
    for v in &out.violations {
        println!("VIOLATION {v}");
    }
    for f in &out.findings {
        println!("finding {f}");
    }
    let fail = !out.violations.is_empty() || (cli.strict && !out.findings.is_empty());
    Ok(if fail { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}
