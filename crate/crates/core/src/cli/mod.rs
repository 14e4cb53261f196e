//! Command-line front end: single-module queries, lift tools, and the
//! `analyze` report over a module catalog.

pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::coeff::{CoeffError, Fp, LocalAlgebra, RingSurjection};
use crate::deform::{
    extend_search, first_order_classes, paper_lift_family, udr_evidence, verify_lift, DeformError, ExtendOutcome,
    Family, Lift, LiftRecord, LiftVerdict, DEFAULT_MAX_LEVEL,
};
use crate::homalg::{
    band_parameters, ext1_dim, hom_space, iso_test, proj_factoring_subspace, projective_cover, stable_end_dim,
    strip_projectives, syzygy, Classifier, HomError, HomMap,
};
use crate::json;
use crate::presentation::Presentation;
use crate::repbuild::{enumerate_strings, ModuleSpec, RepError, Representation};

pub use report::{analyze, verify_report, AnalyzeConfig, AnalyzeOptions, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

pub const MAX_DIM_ENV: &str = "BRAUER_UDR_MAX_DIM";
pub const DEFAULT_MAX_DIM: usize = 64;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("{source} (module {module})")]
    Module { module: String, source: Box<CliError> },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Hom(HomError),
    #[error(transparent)]
    Deform(DeformError),
}

impl From<HomError> for CliError {
    fn from(e: HomError) -> Self {
        match e {
            HomError::Inconclusive(why) => CliError::Inconclusive(why),
            other => CliError::Hom(other),
        }
    }
}

impl From<DeformError> for CliError {
    fn from(e: DeformError) -> Self {
        match e {
            DeformError::Inconclusive(why) | DeformError::Hom(HomError::Inconclusive(why)) => {
                CliError::Inconclusive(why)
            }
            other => CliError::Deform(other),
        }
    }
}

impl CliError {
    pub fn with_module(self, module: &str) -> CliError {
        match self {
            e @ CliError::Module { .. } => e,
            e => CliError::Module {
                module: module.to_string(),
                source: Box::new(e),
            },
        }
    }

    fn root(&self) -> &CliError {
        match self {
            CliError::Module { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.root() {
            CliError::Input(_) | CliError::Rep(RepError::Parse { .. }) => "input",
            CliError::Inconclusive(_) => "inconclusive",
            CliError::Io(_) => "io",
            CliError::Rep(_) | CliError::Coeff(_) | CliError::Hom(_) | CliError::Deform(_) => "computation",
            CliError::Internal(_) | CliError::Module { .. } => "internal",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.root() {
            CliError::Inconclusive(_) => EXIT_INCONCLUSIVE,
            _ => EXIT_INTERNAL,
        }
    }

    pub fn to_json(&self) -> String {
        let module = match self {
            CliError::Module { module, .. } => Some(module.clone()),
            _ => None,
        };
        serde_json::to_string(&json!({"error": self.kind(), "message": self.to_string(), "module": module})).unwrap()
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "brauer-udr",
    version,
    about = "Stable endomorphism rings and deformation-ring evidence for Brauer star algebras over GF(p)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct AlgebraArgs {
    /// Number of edges `e` of the star.
    #[arg(long)]
    pub edges: usize,
    /// Characteristic of the ground field.
    #[arg(long)]
    pub prime: u32,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ModuleArgs {
    #[command(flatten)]
    pub algebra: AlgebraArgs,
    /// Module spec: `S(i)`, `P(i)`, `str:<letters>`, `str@v:<letters>`, `band:<n>,<lambda>`, or sums with `+`.
    #[arg(long)]
    pub module: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LiftSource {
    /// A serialized lift.
    #[arg(long, conflicts_with = "family")]
    pub lift: Option<PathBuf>,
    /// A built-in lift family: W-star, W-star-printed, V-nonperiodic, Se, S1-e1, band.
    #[arg(long)]
    pub family: Option<String>,
    /// Truncation level `N` of `k[t]/(t^N)` for a family.
    #[arg(long, default_value_t = 2)]
    pub level: u32,
    /// Band parameter for the band family.
    #[arg(long, default_value_t = 2)]
    pub lambda: u32,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub algebra: AlgebraArgs,
    #[arg(long, default_value_t = 12)]
    pub max_string_len: usize,
    #[arg(long, default_value_t = 2)]
    pub bands: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
    pub max_level: u32,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Omit the timestamp so identical flags give identical bytes.
    #[arg(long)]
    pub reproducible: bool,
    /// Exit 0 even when some rows are inconclusive.
    #[arg(long)]
    pub allow_inconclusive: bool,
    /// Exit 2 when a secondary note (stated count, printed matrix) differs from the measurement.
    #[arg(long)]
    pub strict_claims: bool,
    /// Re-check all certificates of the generated report.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify every catalog module, string and band, and check the classification.
    Analyze(AnalyzeArgs),
    /// Dimensions, radical layers, cover and component of one module.
    ModuleInfo(ModuleArgs),
    /// Dimensions of End, of the maps factoring through projectives, and of the stable End.
    StableEnd(ModuleArgs),
    /// The syzygy, identified as a named module where possible, with an isomorphism.
    Syzygy(ModuleArgs),
    /// dim Ext^1(V,V) by syzygies and by linearized relations.
    Ext1(ModuleArgs),
    /// Check a lift's relations, freeness and reduction.
    LiftVerify {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        source: LiftSource,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Extend a lift along the natural surjection from `--ring` onto its ring.
    LiftSearch {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[command(flatten)]
        source: LiftSource,
        /// Target ring spec, e.g. `k[t]/(t^3)`.
        #[arg(long)]
        ring: String,
        /// Write the extended lift here.
        #[arg(long)]
        save: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Tangent dimension and level-by-level lift evidence for the deformation ring.
    UdrEvidence {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
        max_level: u32,
    },
    /// Re-check the certificates of a saved report.
    Verify {
        #[arg(long)]
        report: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Cap on total module dimension from the environment.
pub fn max_dim() -> Result<usize, CliError> {
    match std::env::var(MAX_DIM_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{MAX_DIM_ENV} must be a positive integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

struct Algebra {
    pres: Arc<Presentation>,
    field: Fp,
}

impl AlgebraArgs {
    fn open(&self) -> Result<Algebra, CliError> {
        Ok(Algebra {
            pres: Arc::new(Presentation::new(self.edges).map_err(|e| CliError::Input(e.to_string()))?),
            field: Fp::new(self.prime)?,
        })
    }
}

impl Algebra {
    fn module(&self, spec: &str) -> Result<(ModuleSpec, Representation), CliError> {
        let attach = |e: CliError| e.with_module(spec);
        let parsed = ModuleSpec::parse(&self.pres, self.field, spec).map_err(|e| attach(e.into()))?;
        let v = parsed.build(&self.pres, self.field).map_err(|e| attach(e.into()))?;
        let cap = max_dim()?;
        if v.total_dim() > cap {
            return Err(attach(CliError::Input(format!(
                "total dimension {} exceeds {MAX_DIM_ENV}={cap}",
                v.total_dim()
            ))));
        }
        Ok((parsed, v))
    }
}

fn emit(output: &OutputArgs, json: String, text: String) -> Result<(), CliError> {
    let body = match output.format {
        Format::Json => json,
        Format::Text => text,
        Format::Csv => return Err(CliError::Input("csv output is only available for analyze".into())),
    };
    write_out(output.out.as_deref(), &body)
}

fn write_out(path: Option<&Path>, body: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn pretty<T: Serialize>(x: &T) -> String {
    json::to_pretty(&serde_json::to_value(x).expect("serializable"))
}

fn hom_rows(h: &HomMap) -> Vec<Vec<Vec<u32>>> {
    h.0.iter()
        .map(|m| (0..m.rows()).map(|i| m.row(i).to_vec()).collect())
        .collect()
}

/// A named module isomorphic to `v`, with an isomorphism `v → named`.
pub fn identify(pres: &Arc<Presentation>, f: Fp, v: &Representation) -> Result<Option<(ModuleSpec, HomMap)>, CliError> {
    let try_spec = |s: ModuleSpec| -> Result<Option<(ModuleSpec, HomMap)>, CliError> {
        let m = s.build(pres, f)?;
        if m.dims() != v.dims() {
            return Ok(None);
        }
        Ok(match iso_test(v, &m)? {
            crate::homalg::IsoVerdict::Isomorphic(w) => Some((s, w)),
            _ => None,
        })
    };
    if let Some((n, lambda)) = band_parameters(v)? {
        return try_spec(ModuleSpec::Band { n, lambda });
    }
    for i in 0..pres.num_vertices() {
        for s in [ModuleSpec::Simple(i), ModuleSpec::Projective(i)] {
            if let Some(hit) = try_spec(s)? {
                return Ok(Some(hit));
            }
        }
    }
    let n = v.total_dim();
    if (2..=40).contains(&n) {
        for w in enumerate_strings(pres, n - 1).into_iter().filter(|w| w.len() == n - 1) {
            if let Some(hit) = try_spec(ModuleSpec::String(w))? {
                return Ok(Some(hit));
            }
        }
    }
    Ok(None)
}

fn cmd_module_info(a: &ModuleArgs) -> Result<i32, CliError> {
    let alg = a.algebra.open()?;
    let (spec, v) = alg.module(&a.module)?;
    let cover = projective_cover(&v);
    let (core, removed) = strip_projectives(&v);
    let classification = if v.total_dim() > 0 && removed.is_empty() {
        let c = Classifier::new(&v)?.classify(&v)?;
        Some(json!({
            "label": c.label,
            "band": c.band,
            "period": c.period,
            "seed": c.seed,
        }))
    } else {
        None
    };
    let radical: Vec<usize> = (0..=v.loewy_length()).map(|k| v.radical_power_dim(k)).collect();
    let out = json!({
        "spec": spec.canonical_text(&alg.pres),
        "name": spec.display_name(&alg.pres),
        "dim_vector": v.dims(),
        "total_dim": v.total_dim(),
        "loewy_length": v.loewy_length(),
        "radical_power_dims": radical,
        "socle_dim": v.socle_basis().len(),
        "composition_multiplicities": v.composition_multiplicities(),
        "projective_cover": cover.multiplicities(),
        "projective_summands": removed,
        "projective_free_dim": core.total_dim(),
        "classification": classification,
    });
    let text = format!(
        "{}  dims {:?}  Loewy length {}  cover {:?}  component {}\n",
        spec.display_name(&alg.pres),
        v.dims(),
        v.loewy_length(),
        cover.multiplicities(),
        out["classification"]["label"].as_str().unwrap_or("-")
    );
    emit(&a.output, json::to_pretty(&out), text)?;
    Ok(EXIT_OK)
}

fn cmd_stable_end(a: &ModuleArgs) -> Result<i32, CliError> {
    let alg = a.algebra.open()?;
    let (spec, v) = alg.module(&a.module)?;
    let end = hom_space(&v, &v)?;
    let proj = proj_factoring_subspace(&end)?;
    let s = stable_end_dim(&v)?;
    let out = json!({
        "spec": spec.canonical_text(&alg.pres),
        "end_dim": end.dim(),
        "projective_factoring_dim": proj.len(),
        "stable_end_dim": s,
    });
    emit(&a.output, json::to_pretty(&out), format!("{s}\n"))?;
    Ok(EXIT_OK)
}

fn cmd_syzygy(a: &ModuleArgs) -> Result<i32, CliError> {
    let alg = a.algebra.open()?;
    let (spec, v) = alg.module(&a.module)?;
    let omega = syzygy(&v);
    let id = identify(&alg.pres, alg.field, &omega)?;
    let out = json!({
        "spec": spec.canonical_text(&alg.pres),
        "syzygy_dim_vector": omega.dims(),
        "syzygy_total_dim": omega.total_dim(),
        "identified": id.as_ref().map(|(s, _)| s.canonical_text(&alg.pres)),
        "iso_witness": id.as_ref().map(|(_, w)| hom_rows(w)),
        "arrows": omega.arrows().iter().map(|m| (0..m.rows()).map(|i| m.row(i).to_vec()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    let text = match &id {
        Some((s, _)) => format!("{}\n", s.canonical_text(&alg.pres)),
        None => format!("unidentified module with dims {:?}\n", omega.dims()),
    };
    emit(&a.output, json::to_pretty(&out), text)?;
    Ok(EXIT_OK)
}

fn cmd_ext1(a: &ModuleArgs) -> Result<i32, CliError> {
    let alg = a.algebra.open()?;
    let (spec, v) = alg.module(&a.module)?;
    let r = ext1_dim(&v)?;
    let fo = first_order_classes(&v);
    let out = json!({
        "spec": spec.canonical_text(&alg.pres),
        "ext1_dim": r,
        "linearized": {"r": fo.r, "cocycle_dim": fo.cocycle_dim, "coboundary_dim": fo.coboundary_dim},
    });
    emit(&a.output, json::to_pretty(&out), format!("{r}\n"))?;
    Ok(if r == fo.r { EXIT_OK } else { EXIT_MISMATCH })
}

fn load_lift(alg: &Algebra, src: &LiftSource) -> Result<Lift, CliError> {
    match (&src.lift, &src.family) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)?;
            let rec = LiftRecord::from_json(&text)?;
            if rec.e != alg.pres.e() || rec.p != alg.field.p() {
                return Err(CliError::Input(format!(
                    "lift is for e={} p={}, not e={} p={}",
                    rec.e,
                    rec.p,
                    alg.pres.e(),
                    alg.field.p()
                )));
            }
            Ok(rec.to_lift()?)
        }
        (None, Some(name)) => {
            let family: Family = name.parse()?;
            Ok(paper_lift_family(family, &alg.pres, alg.field, src.level, src.lambda)?)
        }
        _ => Err(CliError::Input("give exactly one of --lift or --family".into())),
    }
}

fn cmd_lift_verify(algebra: &AlgebraArgs, src: &LiftSource, output: &OutputArgs) -> Result<i32, CliError> {
    let alg = algebra.open()?;
    let l = load_lift(&alg, src)?;
    let verdict = verify_lift(&l);
    let out = json!({"ring": l.ring_spec, "base": l.base_spec, "result": verdict});
    let text = match &verdict {
        LiftVerdict::Valid => "Valid\n".to_string(),
        LiftVerdict::RelationViolated(v) => {
            format!(
                "RelationViolated {} at ({},{}): residue {}\n",
                v.relation, v.row, v.col, v.residue
            )
        }
        other => format!("{other:?}\n"),
    };
    emit(output, json::to_pretty(&out), text)?;
    Ok(if verdict == LiftVerdict::Valid {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}

fn cmd_lift_search(
    algebra: &AlgebraArgs,
    src: &LiftSource,
    ring: &str,
    save: Option<&Path>,
    output: &OutputArgs,
) -> Result<i32, CliError> {
    let alg = algebra.open()?;
    let l = load_lift(&alg, src)?;
    let upper = LocalAlgebra::from_spec(ring, alg.field)?;
    let proj = RingSurjection::natural(&upper, l.ring())?;
    let (out, text) = match extend_search(&l, ring, &proj)? {
        ExtendOutcome::Extended(next) => {
            let rec = LiftRecord::from_lift(&next);
            if let Some(p) = save {
                std::fs::write(p, rec.to_json())?;
            }
            (
                json!({"result": "Extended", "lift": rec}),
                format!("Extended to {ring}\n"),
            )
        }
        ExtendOutcome::NoExtension(o) => {
            let text = format!(
                "NoExtension at {}: {} ({},{}) residue {} obstruction {}\n",
                o.ring, o.relation, o.row, o.col, o.residue, o.obstruction
            );
            (json!({"result": "NoExtension", "obstruction": o}), text)
        }
    };
    emit(output, json::to_pretty(&out), text)?;
    Ok(EXIT_OK)
}

fn cmd_udr_evidence(a: &ModuleArgs, max_level: u32) -> Result<i32, CliError> {
    let alg = a.algebra.open()?;
    let (spec, v) = alg.module(&a.module)?;
    let text_spec = spec.canonical_text(&alg.pres);
    match udr_evidence(&v, &text_spec, max_level) {
        Ok(ev) => {
            let text = format!("{}: r = {}, {} ({})\n", ev.module, ev.r, ev.verdict, ev.summary);
            emit(&a.output, pretty(&ev), text)?;
            Ok(EXIT_OK)
        }
        Err(DeformError::StableEndTooLarge(s)) => {
            let out = json!({
                "module": text_spec,
                "stable_end_dim": s,
                "verdict": null,
                "summary": format!("stable endomorphism ring has dimension {s}; no verdict attempted"),
            });
            emit(
                &a.output,
                json::to_pretty(&out),
                format!("{text_spec}: stable End dimension {s}, no verdict\n"),
            )?;
            Ok(EXIT_OK)
        }
        Err(e) => Err(CliError::from(e).with_module(&text_spec)),
    }
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<i32, CliError> {
    let opts = AnalyzeOptions {
        e: a.algebra.edges,
        p: a.algebra.prime,
        config: AnalyzeConfig {
            max_string_len: a.max_string_len,
            bands: a.bands,
            max_level: a.max_level,
            max_dim: max_dim()?,
        },
        reproducible: a.reproducible,
    };
    let report = analyze(&opts)?;
    let body = match a.output.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
        Format::Text => report.to_text(),
    };
    write_out(a.output.out.as_deref(), &body)?;
    if a.verify {
        let v = verify_report(&report)?;
        if !v.failures.is_empty() {
            eprintln!("{}", serde_json::to_string(&v).unwrap());
            return Ok(EXIT_MISMATCH);
        }
    }
    Ok(analyze_exit_code(&report, a.allow_inconclusive, a.strict_claims))
}

/// Exit code of an analysis: inconclusive rows first, then failed claims,
/// then (with `strict`) differing notes.
pub fn analyze_exit_code(report: &Report, allow_inconclusive: bool, strict: bool) -> i32 {
    if report.summary.inconclusive > 0 && !allow_inconclusive {
        let rows: Vec<(&str, &str)> = report
            .rows
            .iter()
            .filter(|r| r.status == report::RowStatus::Inconclusive)
            .map(|r| (r.spec.as_str(), r.detail.as_str()))
            .collect();
        eprintln!("{}", json!({"error": "inconclusive", "rows": rows}));
        return EXIT_INCONCLUSIVE;
    }
    if !report.summary.theorem_holds || (strict && !report.summary.notes_hold) {
        return EXIT_MISMATCH;
    }
    EXIT_OK
}

fn cmd_verify(path: &Path, output: &OutputArgs) -> Result<i32, CliError> {
    let report = Report::from_json(&std::fs::read_to_string(path)?)?;
    let v = verify_report(&report)?;
    let text = if v.failures.is_empty() {
        format!("all {} certificates check\n", v.checked)
    } else {
        format!(
            "{} of {} certificates fail:\n{}\n",
            v.failures.len(),
            v.checked,
            v.failures.join("\n")
        )
    };
    emit(output, pretty(&v), text)?;
    Ok(if v.failures.is_empty() { EXIT_OK } else { EXIT_MISMATCH })
}

pub fn execute(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::ModuleInfo(a) => cmd_module_info(a),
        Command::StableEnd(a) => cmd_stable_end(a),
        Command::Syzygy(a) => cmd_syzygy(a),
        Command::Ext1(a) => cmd_ext1(a),
        Command::LiftVerify {
            algebra,
            source,
            output,
        } => cmd_lift_verify(algebra, source, output),
        Command::LiftSearch {
            algebra,
            source,
            ring,
            save,
            output,
        } => cmd_lift_search(algebra, source, ring, save.as_deref(), output),
        Command::UdrEvidence { module, max_level } => cmd_udr_evidence(module, *max_level),
        Command::Verify { report, output } => cmd_verify(report, output),
    }
}

/// Parse arguments, run, and return the process exit code. Errors are
/// written to stderr as one JSON object.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INTERNAL } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
