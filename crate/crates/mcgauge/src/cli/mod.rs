//! The `mcgauge` command line.
//!
//! Every command prints a short human-readable summary followed by a JSON
//! block. Exit codes: 0 when a verdict was computed, 1 when a precondition
//! fails, 2 for unreadable or malformed input, 3 when an internal
//! verification fails.

pub mod certificate;
pub mod format;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::ainf::{mc_residual, to_unshifted, AinfError, OpSeries};
use crate::formality::{
    formality_sequence, homotopy_obstruction, kaledin_obstruction_consistency, kaledin_truncated, lie_for,
    FormalityError, ObstructionReport, ObstructionVerdict,
};
use crate::graded::{check_complex, make_contraction, Contraction, GradedError, GradedSpace};
use crate::highconn::{minimal_model_pipeline, GaugeMethod, HighconnError};
use crate::lie::{equivalence_degree, Degree, LieError, WitnessChoice};
use crate::linalg::Field;
use crate::transfer::{transfer, TransferError};
use certificate::{Certificate, CertificateFile};
use format::{build, emit, Algebra, BuildOptions, FormatError, Grading, InputFile};

/// Command line arguments.
#[derive(Debug, Parser)]
#[command(name = "mcgauge", version, about = "Exact obstruction theory for A-infinity structures")]
pub struct Cli {
    /// Largest arity kept in every computation.
    #[arg(long, global = true, default_value_t = 6)]
    pub arity_max: usize,
    /// Largest weight kept; lowers the arity bound to `weight + 1`.
    #[arg(long, global = true)]
    pub weight_max: Option<usize>,
    /// Overrides the grading declared in the input file.
    #[arg(long, global = true, value_enum)]
    pub grading: Option<Grading>,
    /// Overrides the field declared in the input file (`Q` or `Fp:<p>`).
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Picks the gauge witnesses from a seeded offset in the solution space.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Writes the emitted certificates to this file.
    #[arg(long, global = true)]
    pub certificate: Option<PathBuf>,
    /// The command.
    #[command(subcommand)]
    pub command: Command,
}

/// Level of an obstruction computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    /// Gauge equivalence in the convolution algebra (characteristic zero).
    Gauge,
    /// ∞-isotopies (any field).
    Isotopy,
}

/// The subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Checks the Stasheff identities and lists the failing input tuples.
    CheckMc {
        /// Input file.
        input: PathBuf,
    },
    /// Transfers the structure to the homology of the underlying complex.
    Transfer {
        /// Input file.
        input: PathBuf,
        /// Writes the transferred structure here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the obstruction sequence against a second structure.
    Obstruction {
        /// Input file.
        input: PathBuf,
        /// Structure to compare with; the binary part when omitted.
        #[arg(long)]
        against: Option<PathBuf>,
        /// Gauge or isotopy level.
        #[arg(long, value_enum, default_value_t = Level::Gauge)]
        level: Level,
    },
    /// Computes the equivalence degree in the convolution algebra.
    Degree {
        /// Input file.
        input: PathBuf,
        /// Structure to compare with; the binary part when omitted.
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Computes truncated Kaledin classes.
    Kaledin {
        /// Truncation order; every admissible order when omitted.
        #[arg(long)]
        n: Option<usize>,
        /// Input file.
        input: PathBuf,
    },
    /// Decides formality up to the truncation.
    Formality {
        /// Input file.
        input: PathBuf,
    },
    /// Runs the minimal model pipeline for highly connected Poincaré algebras.
    HighconnPipeline {
        /// Input file with a `poincare` section.
        input: PathBuf,
        /// Writes the final structure here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-checks the certificates in a file.
    Verify {
        /// Certificate file.
        certificate: PathBuf,
    },
}

/// A failure with its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// A hypothesis of the command does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The input cannot be read or parsed.
    #[error("{0}")]
    Input(String),
    /// A computed result failed its own check.
    #[error("internal verification failed: {0}")]
    Internal(String),
}

impl CliError {
    /// The process exit code.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Precondition(_) => 1,
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<AinfError> for CliError {
    fn from(e: AinfError) -> CliError {
        match e {
            AinfError::TooLarge { .. } => CliError::Precondition(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<LieError> for CliError {
    fn from(e: LieError) -> CliError {
        match e {
            LieError::Audit(_) | LieError::OwnerMismatch | LieError::DegreeMismatch { .. } => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<FormalityError> for CliError {
    fn from(e: FormalityError) -> CliError {
        match e {
            FormalityError::Audit(_) => CliError::Internal(e.to_string()),
            FormalityError::Lie(l) => l.into(),
            FormalityError::Ainf(a) => a.into(),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<TransferError> for CliError {
    fn from(e: TransferError) -> CliError {
        match e {
            TransferError::Verification(_) => CliError::Internal(e.to_string()),
            TransferError::Ainf(a) => a.into(),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<HighconnError> for CliError {
    fn from(e: HighconnError) -> CliError {
        match e {
            HighconnError::Verification(_) => CliError::Internal(e.to_string()),
            HighconnError::Transfer(t) => t.into(),
            HighconnError::Formality(f) => f.into(),
            HighconnError::Ainf(a) => a.into(),
            HighconnError::Lie(l) => l.into(),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<GradedError> for CliError {
    fn from(e: GradedError) -> CliError {
        CliError::Precondition(e.to_string())
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> CliError {
        CliError::Input(e.to_string())
    }
}

impl From<certificate::CertificateError> for CliError {
    fn from(e: certificate::CertificateError) -> CliError {
        match e {
            certificate::CertificateError::Format(f) => f.into(),
            certificate::CertificateError::Ainf(a) => a.into(),
            certificate::CertificateError::Lie(l) => l.into(),
        }
    }
}

/// The output of a successful command.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    /// Human-readable lines.
    pub lines: Vec<String>,
    /// Machine-readable summary.
    pub json: Value,
    /// Exit code; 0 unless a verification command found a failing check.
    pub code: i32,
}

impl Report {
    /// The text written to standard output.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            let _ = writeln!(s, "{l}");
        }
        let _ = writeln!(s);
        s.push_str(&serde_json::to_string_pretty(&self.json).expect("serializable"));
        s.push('\n');
        s
    }
}

/// Parses arguments, runs the command and returns the exit code together
/// with the standard output and standard error text.
pub fn main_with_args<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (0, text, String::new()) } else { (2, String::new(), text) };
        }
    };
    match run(&cli) {
        Ok(r) => (r.code, r.render(), String::new()),
        Err(e) => (e.exit_code(), String::new(), format!("error: {e}\n")),
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    arity_max: usize,
    field: Option<Field>,
}

impl Ctx<'_> {
    fn options(&self) -> BuildOptions {
        BuildOptions { field: self.field, grading: self.cli.grading, arity_max: self.arity_max }
    }

    fn load(&self, path: &Path) -> Result<(InputFile, Algebra), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let file = InputFile::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let alg = build(&file, self.options()).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Ok((file, alg))
    }

    /// The structure on homology, transferring when the differential is nonzero.
    fn minimal(&self, alg: &Algebra, lines: &mut Vec<String>) -> Result<OpSeries, CliError> {
        if alg.space.has_zero_differential() {
            return Ok(alg.structure.clone());
        }
        let c = contraction(&alg.space)?;
        let t = transfer(&alg.structure, &c, self.arity_max)?;
        lines.push(format!(
            "transferred to homology: {} -> {} basis elements",
            alg.space.dim(),
            c.small.dim()
        ));
        Ok(t.structure)
    }

    fn write_certificates(&self, certs: Vec<Certificate>, lines: &mut Vec<String>) -> Result<(), CliError> {
        let Some(path) = &self.cli.certificate else {
            if !certs.is_empty() {
                lines.push(format!("{} certificate(s) available; pass --certificate to write them", certs.len()));
            }
            return Ok(());
        };
        let n = certs.len();
        let file = CertificateFile { certificates: certs };
        let mut text = serde_json::to_string_pretty(&file).expect("serializable");
        text.push('\n');
        std::fs::write(path, text).map_err(|e| CliError::Precondition(format!("{}: {e}", path.display())))?;
        lines.push(format!("wrote {n} certificate(s) to {}", path.display()));
        Ok(())
    }
}

fn contraction(space: &GradedSpace) -> Result<Contraction, CliError> {
    if !check_complex(space) {
        return Err(CliError::Precondition("the differential does not square to zero".into()));
    }
    Ok(make_contraction(space)?)
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let field = match &cli.field {
        Some(f) => Some(Field::from_tag(f).map_err(|e| CliError::Input(format!("--field: {e}")))?),
        None => None,
    };
    let arity_max = match cli.weight_max {
        Some(w) => cli.arity_max.min(w + 1),
        None => cli.arity_max,
    };
    if arity_max < 2 {
        return Err(CliError::Precondition("the arity bound must be at least 2".into()));
    }
    let ctx = Ctx { cli, arity_max, field };
    match &cli.command {
        Command::CheckMc { input } => check_mc(&ctx, input),
        Command::Transfer { input, out } => transfer_cmd(&ctx, input, out.as_deref()),
        Command::Obstruction { input, against, level } => obstruction(&ctx, input, against.as_deref(), *level),
        Command::Degree { input, against } => degree(&ctx, input, against.as_deref()),
        Command::Kaledin { n, input } => kaledin(&ctx, input, *n),
        Command::Formality { input } => formality(&ctx, input),
        Command::HighconnPipeline { input, out } => highconn(&ctx, input, out.as_deref()),
        Command::Verify { certificate } => verify(certificate),
    }
}

fn header(command: &str, input: &Path, alg: &Algebra, arity_max: usize) -> Vec<String> {
    vec![
        format!("{command}: {}", input.display()),
        format!(
            "field {}, dimension {}, arity bound {arity_max}",
            alg.space.field(),
            alg.space.dim()
        ),
    ]
}

fn entries_json(space: &GradedSpace, family: &OpSeries) -> Value {
    json!(format::op_entries(space, family))
}

fn check_mc(ctx: &Ctx<'_>, input: &Path) -> Result<Report, CliError> {
    let (_, alg) = ctx.load(input)?;
    let mut lines = header("check-mc", input, &alg, ctx.arity_max);
    let complex = check_complex(&alg.space);
    let residual = to_unshifted(&mc_residual(&alg.structure)?);
    let mut violations = Vec::new();
    for (k, comp) in residual.components() {
        for (t, col) in &comp.entries {
            let names: Vec<&str> = t.iter().map(|&i| alg.space.name(i as usize)).collect();
            lines.push(format!("  fails at arity {k} on ({}): {}", names.join(", "), alg.space.show(col)));
            violations.push(json!({"arity": k, "inputs": names, "value": alg.space.show(col)}));
        }
    }
    let holds = complex && violations.is_empty();
    if !complex {
        lines.push("the differential does not square to zero".into());
    }
    lines.push(if holds {
        format!("verdict: the Stasheff identities hold through arity {}", ctx.arity_max)
    } else {
        format!("verdict: the Stasheff identities fail on {} input tuple(s)", violations.len())
    });
    let json = json!({"command": "check-mc", "holds": holds, "complex": complex, "violations": violations});
    Ok(Report { lines, json, code: 0 })
}

fn transfer_cmd(ctx: &Ctx<'_>, input: &Path, out: Option<&Path>) -> Result<Report, CliError> {
    let (file, alg) = ctx.load(input)?;
    let mut lines = header("transfer", input, &alg, ctx.arity_max);
    let c = contraction(&alg.space)?;
    let t = transfer(&alg.structure, &c, ctx.arity_max)?;
    let names: Vec<String> = (0..c.small.dim())
        .map(|i| format!("{} ({})", c.small.name(i), -c.small.degree(i)))
        .collect();
    lines.push(format!("homology basis: {}", names.join(", ")));
    lines.push(format!("nonzero arities: {:?}", t.structure.arities()));
    let emitted = emit(&c.small, &t.structure, ctx.cli.grading.unwrap_or(file.grading), alg.poincare.clone());
    if let Some(path) = out {
        std::fs::write(path, emitted.to_json()).map_err(|e| CliError::Precondition(format!("{}: {e}", path.display())))?;
        lines.push(format!("wrote the transferred structure to {}", path.display()));
    }
    let json = json!({"command": "transfer", "arities": t.structure.arities(), "structure": emitted});
    Ok(Report { lines, json, code: 0 })
}

fn against(ctx: &Ctx<'_>, phi: &OpSeries, path: Option<&Path>, lines: &mut Vec<String>) -> Result<OpSeries, CliError> {
    let Some(path) = path else {
        lines.push("compared with the binary part".into());
        return Ok(phi.part(2));
    };
    let (_, other) = ctx.load(path)?;
    let psi = ctx.minimal(&other, lines)?;
    if **psi.src() != **phi.src() {
        return Err(CliError::Precondition("the two structures live on different spaces".into()));
    }
    lines.push(format!("compared with {}", path.display()));
    // rebuild on the same space handle
    let space: &Arc<GradedSpace> = phi.src();
    let rebuilt = format::read_family(space, -1, ctx.arity_max, &format::op_entries(psi.src(), &psi), "against")?;
    Ok(rebuilt)
}

fn verdict_name(v: &ObstructionVerdict) -> String {
    match v {
        ObstructionVerdict::FormalCertified => "formal (certified)".into(),
        ObstructionVerdict::Equivalent => "equivalent (certified)".into(),
        ObstructionVerdict::EquivalentModTruncation => "equivalent modulo the truncation".into(),
        ObstructionVerdict::NotFormal => "not formal".into(),
        ObstructionVerdict::NotEquivalent => "not equivalent".into(),
        ObstructionVerdict::Inconclusive(why) => format!("inconclusive: {why}"),
    }
}

fn report_json(level: &str, r: &ObstructionReport) -> Value {
    let steps: Vec<Value> = r.steps.iter().map(|s| json!({"index": s.index, "vanishes": s.vanishes})).collect();
    json!({
        "level": level,
        "verdict": verdict_name(&r.verdict),
        "degree": r.degree.to_string(),
        "cap": r.cap,
        "bound": r.bound,
        "steps": steps,
    })
}

fn report_lines(level: &str, r: &ObstructionReport, lines: &mut Vec<String>) {
    for s in &r.steps {
        if s.index >= 2 {
            lines.push(format!(
                "  {level} class {}: {}",
                s.index,
                if s.vanishes { "vanishes" } else { "nonzero" }
            ));
        }
    }
    if let Some(eta) = r.bound {
        lines.push(format!("  no degree -1 operations from weight {eta} on"));
    }
    lines.push(format!("{level} level: degree {}, verdict {}", r.degree, verdict_name(&r.verdict)));
}

fn gauge_certificates(phi: &OpSeries, psi: &OpSeries, r: &ObstructionReport, arity_max: usize) -> Vec<Certificate> {
    let exact = matches!(r.verdict, ObstructionVerdict::FormalCertified | ObstructionVerdict::Equivalent);
    match (&r.gauge, exact) {
        (Some(g), true) => vec![Certificate::gauge(phi, arity_max, g, psi)],
        _ => Vec::new(),
    }
}

fn isotopy_certificates(phi: &OpSeries, r: &ObstructionReport, arity_max: usize) -> Vec<Certificate> {
    let Some(f) = &r.isotopy else { return Vec::new() };
    match r.steps.last() {
        Some(s) if !s.vanishes => match &s.certificate {
            Some(y) => vec![Certificate::obstruction(phi, arity_max, s.index, f, &s.representative, y)],
            None => Vec::new(),
        },
        _ => vec![Certificate::isotopy(phi, arity_max, f, &r.final_structure)],
    }
}

fn obstruction(ctx: &Ctx<'_>, input: &Path, other: Option<&Path>, level: Level) -> Result<Report, CliError> {
    let (_, alg) = ctx.load(input)?;
    let mut lines = header("obstruction", input, &alg, ctx.arity_max);
    let phi = ctx.minimal(&alg, &mut lines)?;
    let psi = against(ctx, &phi, other, &mut lines)?;
    let (json, certs) = match level {
        Level::Gauge => {
            let r = homotopy_obstruction(&phi, &psi, ctx.arity_max)?;
            report_lines("gauge", &r, &mut lines);
            (report_json("gauge", &r), gauge_certificates(&phi, &psi, &r, ctx.arity_max))
        }
        Level::Isotopy => {
            if psi != phi.part(2) {
                return Err(CliError::Precondition("the isotopy level compares with the binary part only".into()));
            }
            let r = formality_sequence(&phi, ctx.arity_max)?;
            report_lines("isotopy", &r, &mut lines);
            (report_json("isotopy", &r), isotopy_certificates(&phi, &r, ctx.arity_max))
        }
    };
    ctx.write_certificates(certs, &mut lines)?;
    Ok(Report { lines, json: json!({"command": "obstruction", "report": json}), code: 0 })
}

fn degree(ctx: &Ctx<'_>, input: &Path, other: Option<&Path>) -> Result<Report, CliError> {
    let (_, alg) = ctx.load(input)?;
    let mut lines = header("degree", input, &alg, ctx.arity_max);
    let phi = ctx.minimal(&alg, &mut lines)?;
    if let Field::Prime(p) = phi.field() {
        return Err(CliError::Precondition(format!("gauge equivalence needs characteristic zero, found {p}")));
    }
    let psi = against(ctx, &phi, other, &mut lines)?;
    let g = lie_for(phi.src(), ctx.arity_max);
    let choice = match ctx.cli.seed {
        Some(s) => WitnessChoice::KernelOffset(s),
        None => WitnessChoice::Canonical,
    };
    let r = equivalence_degree(&g, &g.element(&phi)?, &g.element(&psi)?, choice)?;
    let degree = r.sequence.degree;
    lines.push(match degree {
        Degree::Finite(n) => format!("degree {n}: the class of index {n} is the first nonzero one"),
        Degree::AtLeast(n) => format!("degree at least {n}: every class within the truncation vanishes"),
    });
    lines.push(format!("agreement verified modulo weight {}", r.agreement));
    let json = json!({
        "command": "degree",
        "degree": degree.to_string(),
        "finite": matches!(degree, Degree::Finite(_)),
        "agreement": r.agreement,
        "seed": ctx.cli.seed,
    });
    Ok(Report { lines, json, code: 0 })
}

fn kaledin(ctx: &Ctx<'_>, input: &Path, order: Option<usize>) -> Result<Report, CliError> {
    let (_, alg) = ctx.load(input)?;
    let mut lines = header("kaledin", input, &alg, ctx.arity_max);
    let phi = ctx.minimal(&alg, &mut lines)?;
    let field = phi.field();
    let orders: Vec<usize> = match order {
        Some(n) => vec![n],
        None => (1..=ctx.arity_max.saturating_sub(2)).take_while(|&n| field.factorial_is_unit(n as u64)).collect(),
    };
    let mut results = Vec::new();
    let mut certs = Vec::new();
    for n in orders {
        let k = kaledin_truncated(&phi, n, ctx.arity_max)?;
        let consistency = kaledin_obstruction_consistency(&phi, n + 1, ctx.arity_max)?;
        if !consistency.consistent() {
            return Err(CliError::Internal(format!("order {n} disagrees with the obstruction classes")));
        }
        lines.push(format!(
            "  order {n}: {}",
            if k.vanishes { "vanishes" } else { "nonzero" }
        ));
        if let (Some(f), Some(psi)) = (&k.witness, &k.normalized) {
            certs.push(Certificate::isotopy(&phi, ctx.arity_max, f, psi));
        }
        results.push(json!({"n": n, "vanishes": k.vanishes, "classes_vanish": consistency.classes_vanish}));
    }
    lines.push("every order agrees with the obstruction classes".into());
    ctx.write_certificates(certs, &mut lines)?;
    Ok(Report { lines, json: json!({"command": "kaledin", "orders": results}), code: 0 })
}

fn formality(ctx: &Ctx<'_>, input: &Path) -> Result<Report, CliError> {
    let (_, alg) = ctx.load(input)?;
    let mut lines = header("formality", input, &alg, ctx.arity_max);
    let phi = ctx.minimal(&alg, &mut lines)?;
    let psi = phi.part(2);
    let mut certs = Vec::new();
    let mut levels = Vec::new();
    let verdict = if phi.field() == Field::Rational {
        let r = homotopy_obstruction(&phi, &psi, ctx.arity_max)?;
        report_lines("gauge", &r, &mut lines);
        certs.extend(gauge_certificates(&phi, &psi, &r, ctx.arity_max));
        levels.push(report_json("gauge", &r));
        Some(r.verdict)
    } else {
        None
    };
    let r = formality_sequence(&phi, ctx.arity_max)?;
    report_lines("isotopy", &r, &mut lines);
    certs.extend(isotopy_certificates(&phi, &r, ctx.arity_max));
    levels.push(report_json("isotopy", &r));
    if let Some(v) = &verdict {
        let formal = |v: &ObstructionVerdict| matches!(v, ObstructionVerdict::FormalCertified);
        let not_formal = |v: &ObstructionVerdict| matches!(v, ObstructionVerdict::NotFormal);
        if (formal(v) && not_formal(&r.verdict)) || (not_formal(v) && formal(&r.verdict)) {
            return Err(CliError::Internal("the gauge and isotopy levels disagree".into()));
        }
    }
    let verdict = verdict.unwrap_or(r.verdict);
    lines.push(format!("verdict: {}", verdict_name(&verdict)));
    ctx.write_certificates(certs, &mut lines)?;
    let json = json!({"command": "formality", "verdict": verdict_name(&verdict), "levels": levels});
    Ok(Report { lines, json, code: 0 })
}

fn method_name(m: &GaugeMethod) -> String {
    match m {
        GaugeMethod::ClosedForm => "closed form".into(),
        GaugeMethod::LinearSolve(why) => format!("linear solve ({why})"),
        GaugeMethod::Degenerate => "not needed".into(),
    }
}

fn highconn(ctx: &Ctx<'_>, input: &Path, out: Option<&Path>) -> Result<Report, CliError> {
    let (file, alg) = ctx.load(input)?;
    let mut lines = header("highconn-pipeline", input, &alg, ctx.arity_max);
    let section = alg
        .poincare
        .clone()
        .ok_or_else(|| CliError::Precondition("the input has no poincare section".into()))?;
    let c = contraction(&alg.space)?;
    let transferred = transfer(&alg.structure, &c, ctx.arity_max)?.structure;
    let p = section.resolve(&transferred)?;
    let r = minimal_model_pipeline(&alg.structure, &c, &p, ctx.arity_max)?;
    lines.push(format!("k = {}, n = {}, ell = {}", p.k, p.n, p.ell));
    let admissible: Vec<String> =
        r.audit.iter().filter(|a| a.admissible > 0).map(|a| format!("{}", a.arity)).collect();
    lines.push(format!(
        "arities at or above ell with admissible degrees: {}",
        if admissible.is_empty() { "none".into() } else { admissible.join(", ") }
    ));
    lines.push(format!("λ: {}", method_name(&r.lambda.method)));
    lines.push(format!("β: {}", method_name(&r.beta.method)));
    lines.push(format!("final arities: {:?}", r.final_structure.arities()));
    let cert = Certificate::minimal_model(
        &r.transferred,
        ctx.arity_max,
        p.ell,
        &r.lambda.component,
        &r.beta.component,
        &r.final_structure,
    );
    let emitted = emit(&c.small, &r.final_structure, ctx.cli.grading.unwrap_or(file.grading), Some(section));
    if let Some(path) = out {
        std::fs::write(path, emitted.to_json()).map_err(|e| CliError::Precondition(format!("{}: {e}", path.display())))?;
        lines.push(format!("wrote the final structure to {}", path.display()));
    }
    ctx.write_certificates(vec![cert], &mut lines)?;
    let json = json!({
        "command": "highconn-pipeline",
        "lambda": method_name(&r.lambda.method),
        "beta": method_name(&r.beta.method),
        "lambda_entries": entries_json(&c.small, &r.lambda.component),
        "final_arities": r.final_structure.arities(),
        "structure": emitted,
    });
    Ok(Report { lines, json, code: 0 })
}

fn verify(path: &Path) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let file: CertificateFile = serde_json::from_str(&text).map_err(|e| {
        CliError::Input(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column()))
    })?;
    let mut lines = vec![format!("verify: {}", path.display())];
    let mut results = Vec::new();
    let mut all = true;
    for (i, c) in file.certificates.iter().enumerate() {
        let v = c.verify()?;
        lines.push(format!("certificate {i} ({}): {}", v.kind, if v.holds() { "verified" } else { "REJECTED" }));
        for ch in &v.checks {
            lines.push(format!("  [{}] {}", if ch.holds { "ok" } else { "fail" }, ch.name));
        }
        all &= v.holds();
        results.push(json!({"kind": v.kind, "holds": v.holds(), "checks": v.checks}));
    }
    if file.certificates.is_empty() {
        lines.push("no certificates in the file".into());
    }
    lines.push(format!("verdict: {}", if all { "all certificates verified" } else { "rejected" }));
    let json = json!({"command": "verify", "holds": all, "certificates": results});
    Ok(Report { lines, json, code: if all { 0 } else { 1 } })
}
