use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{large_stable_end, RingVerdict};
use crate::coeff::{Fp, LocalAlgebra, RingSurjection};
use crate::deform::{
    check_obstruction, first_order_classes, is_trivial_lift, paper_lift_family, udr_evidence, verify_lift, DeformError,
    Family, LiftVerdict, UdrEvidence,
};
use crate::homalg::{ext1_dim, hom_space, stable_end_dim, stable_hom_dim, Classifier, ComponentLabel, HomError};
use crate::presentation::Presentation;
use crate::repbuild::{enumerate_strings, ModuleSpec, Representation};

use super::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeConfig {
    pub max_string_len: usize,
    pub bands: usize,
    pub max_level: u32,
    pub max_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub schema_version: u32,
    pub e: usize,
    pub p: u32,
    pub config: AnalyzeConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    /// All fields computed; a verdict is present iff the stable endomorphism ring is `k`.
    Ok,
    /// Total dimension above the cap.
    Skipped,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRef {
    pub seed: String,
    pub shift: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub spec: String,
    pub name: String,
    pub origin: Vec<String>,
    pub dim_vector: Vec<usize>,
    pub total_dim: usize,
    pub component: Option<ComponentLabel>,
    pub orbit: Option<OrbitRef>,
    pub band: Option<(usize, u32)>,
    pub period: Option<usize>,
    pub stable_end_dim: Option<usize>,
    pub ext1_dim: Option<usize>,
    pub udr_verdict: Option<RingVerdict>,
    pub predicted_verdict: Option<RingVerdict>,
    pub status: RowStatus,
    pub detail: String,
    pub evidence: Option<UdrEvidence>,
}

/// One Ω-orbit of the catalog with its measured verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSummary {
    pub seed: String,
    pub component: ComponentLabel,
    pub predicted: RingVerdict,
    pub measured: Option<RingVerdict>,
    /// Report rows in this orbit, as `(shift, spec)`.
    pub members: Vec<(i64, String)>,
}

/// A checked statement; `holds` is the measured outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub statement: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub rows: usize,
    pub verdicts: usize,
    pub inconclusive: usize,
    pub skipped: usize,
    pub theorem_holds: bool,
    pub notes_hold: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub header: Header,
    pub rows: Vec<Row>,
    pub orbits: Vec<OrbitSummary>,
    /// Classification statements; any failure is a verdict mismatch.
    pub claims: Vec<Claim>,
    /// Secondary statements: typo repairs exercised and stated counts re-measured.
    pub notes: Vec<Claim>,
    pub summary: Summary,
}

impl Report {
    pub fn to_json(&self) -> String {
        crate::json::to_pretty(&serde_json::to_value(self).expect("serializable"))
    }

    pub fn from_json(src: &str) -> Result<Report, CliError> {
        serde_json::from_str(src).map_err(|e| CliError::Input(format!("report: {e}")))
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(CsvRow::from(r))
                .map_err(|e| CliError::Internal(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("utf8"))
    }

    pub fn to_text(&self) -> String {
        let h = &self.header;
        let mut s = format!("brauer-udr {}  e={} p={}\n", h.version, h.e, h.p);
        let w = self
            .rows
            .iter()
            .map(|r| r.name.chars().count())
            .max()
            .unwrap_or(0)
            .max(6);
        s += &format!(
            "{:<w$} {:<12} {:<16} {:>6} {:>5}  {:<28} {}\n",
            "module", "dims", "component", "stEnd", "ext1", "verdict", "status"
        );
        let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
        for r in &self.rows {
            let dims: Vec<String> = r.dim_vector.iter().map(|d| d.to_string()).collect();
            s += &format!(
                "{:<w$} {:<12} {:<16} {:>6} {:>5}  {:<28} {:?}\n",
                r.name,
                dims.join(","),
                r.component.map(|c| c.as_str()).unwrap_or("-"),
                opt(r.stable_end_dim),
                opt(r.ext1_dim),
                r.udr_verdict.map(|v| v.as_str()).unwrap_or("-"),
                r.status
            );
        }
        s += "\norbits\n";
        for o in &self.orbits {
            s += &format!(
                "  {:<24} {:<16} predicted {:<28} measured {}\n",
                o.seed,
                o.component.as_str(),
                o.predicted.as_str(),
                o.measured.map(|v| v.as_str()).unwrap_or("-")
            );
        }
        s += "\nclaims\n";
        for c in &self.claims {
            s += &format!("  {} {}: {}\n", if c.holds { "PASS" } else { "FAIL" }, c.id, c.detail);
        }
        s += "\nnotes\n";
        for c in &self.notes {
            s += &format!(
                "  {} {}: {}\n",
                if c.holds { "holds" } else { "differs" },
                c.id,
                c.detail
            );
        }
        s
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    spec: &'a str,
    name: &'a str,
    origin: String,
    dim_vector: String,
    total_dim: usize,
    component: &'static str,
    seed: &'a str,
    shift: Option<i64>,
    band_n: Option<usize>,
    band_lambda: Option<u32>,
    period: Option<usize>,
    stable_end_dim: Option<usize>,
    ext1_dim: Option<usize>,
    udr_verdict: &'static str,
    predicted_verdict: &'static str,
    status: &'static str,
    detail: &'a str,
}

impl<'a> From<&'a Row> for CsvRow<'a> {
    fn from(r: &'a Row) -> Self {
        CsvRow {
            spec: &r.spec,
            name: &r.name,
            origin: r.origin.join(" "),
            dim_vector: r.dim_vector.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" "),
            total_dim: r.total_dim,
            component: r.component.map(|c| c.as_str()).unwrap_or(""),
            seed: r.orbit.as_ref().map(|o| o.seed.as_str()).unwrap_or(""),
            shift: r.orbit.as_ref().map(|o| o.shift),
            band_n: r.band.map(|b| b.0),
            band_lambda: r.band.map(|b| b.1),
            period: r.period,
            stable_end_dim: r.stable_end_dim,
            ext1_dim: r.ext1_dim,
            udr_verdict: r.udr_verdict.map(|v| v.as_str()).unwrap_or(""),
            predicted_verdict: r.predicted_verdict.map(|v| v.as_str()).unwrap_or(""),
            status: match r.status {
                RowStatus::Ok => "ok",
                RowStatus::Skipped => "skipped",
                RowStatus::Inconclusive => "inconclusive",
            },
            detail: &r.detail,
        }
    }
}

/// Strings in canonical orientation, length-0 strings as simples.
pub fn canonical_spec(pres: &Presentation, s: &ModuleSpec) -> ModuleSpec {
    match s {
        ModuleSpec::String(w) if w.is_empty() => ModuleSpec::Simple(w.base),
        ModuleSpec::String(w) => ModuleSpec::String(w.canonical(pres)),
        other => other.clone(),
    }
}

/// The modules analyzed: catalog seeds, the large-stable-end catalog
/// strings, simples, strings up to `max_len`, and bands `B(n, λ)` for
/// `n ≤ bands`, each with the list of sources that produced it.
pub fn analyze_modules(pres: &Presentation, f: Fp, max_len: usize, bands: usize) -> BTreeMap<ModuleSpec, Vec<String>> {
    let mut out: BTreeMap<ModuleSpec, Vec<String>> = BTreeMap::new();
    let mut add = |s: &ModuleSpec, origin: &str| {
        let v = out.entry(canonical_spec(pres, s)).or_default();
        if !v.iter().any(|o| o == origin) {
            v.push(origin.to_string());
        }
    };
    for s in crate::catalog::seeds(pres) {
        add(&s.spec, "catalog");
    }
    for (_, s) in large_stable_end(pres) {
        add(&s, "catalog-large");
    }
    for v in 0..pres.num_vertices() {
        add(&ModuleSpec::Simple(v), "simple");
    }
    for w in enumerate_strings(pres, max_len) {
        add(&ModuleSpec::String(w), "string");
    }
    for n in 1..=bands {
        for lambda in f.units() {
            add(&ModuleSpec::Band { n, lambda }, "band");
        }
    }
    out
}

struct Ctx {
    pres: Arc<Presentation>,
    field: Fp,
    classifier: Classifier,
    max_level: u32,
    max_dim: usize,
}

fn inconclusive_row(mut row: Row, why: String) -> Row {
    row.status = RowStatus::Inconclusive;
    row.detail = why;
    row
}

fn analyze_row(ctx: &Ctx, spec: &ModuleSpec, origin: &[String]) -> Result<Row, CliError> {
    let pres = &ctx.pres;
    let text = spec.canonical_text(pres);
    let attach = |e: CliError| e.with_module(&text);
    let v = spec.build(pres, ctx.field).map_err(|e| attach(e.into()))?;
    let mut row = Row {
        spec: text.clone(),
        name: spec.display_name(pres),
        origin: origin.to_vec(),
        dim_vector: v.dims().to_vec(),
        total_dim: v.total_dim(),
        component: None,
        orbit: None,
        band: None,
        period: None,
        stable_end_dim: None,
        ext1_dim: None,
        udr_verdict: None,
        predicted_verdict: None,
        status: RowStatus::Ok,
        detail: String::new(),
        evidence: None,
    };
    if v.total_dim() > ctx.max_dim {
        row.status = RowStatus::Skipped;
        row.detail = format!("total dimension {} exceeds the cap {}", v.total_dim(), ctx.max_dim);
        return Ok(row);
    }
    let class = match ctx.classifier.classify(&v) {
        Ok(c) => c,
        Err(HomError::Inconclusive(why)) => return Ok(inconclusive_row(row, why)),
        Err(e) => return Err(attach(e.into())),
    };
    row.component = Some(class.label);
    row.band = class.band;
    row.period = class.period;
    if let Some((i, shift)) = class.seed {
        let seed = &ctx.classifier.seeds()[i];
        row.orbit = Some(OrbitRef {
            seed: seed.name.clone(),
            shift,
        });
        row.predicted_verdict = Some(seed.predicted);
    }
    let s = stable_end_dim(&v).map_err(|e| attach(e.into()))?;
    row.stable_end_dim = Some(s);
    if s == 0 {
        row.detail = "projective".into();
        return Ok(row);
    }
    row.ext1_dim = Some(ext1_dim(&v).map_err(|e| attach(e.into()))?);
    if class.band.is_some() && s == 1 {
        row.predicted_verdict = Some(RingVerdict::PowerSeries);
    }
    if s != 1 {
        row.detail = format!("stable endomorphism ring has dimension {s}; no deformation ring verdict attempted");
        return Ok(row);
    }
    match udr_evidence(&v, &text, ctx.max_level) {
        Ok(ev) => {
            row.udr_verdict = Some(ev.verdict);
            row.detail = ev.summary.clone();
            row.evidence = Some(ev);
            Ok(row)
        }
        Err(DeformError::Inconclusive(why)) | Err(DeformError::Hom(HomError::Inconclusive(why))) => {
            Ok(inconclusive_row(row, why))
        }
        Err(e) => Err(attach(e.into())),
    }
}

fn claim(id: &str, statement: &str, failures: Vec<String>, ok_detail: String) -> Claim {
    Claim {
        id: id.into(),
        statement: statement.into(),
        holds: failures.is_empty(),
        detail: if failures.is_empty() {
            ok_detail
        } else {
            failures.join("; ")
        },
    }
}

fn verdict_list(vs: &[RingVerdict]) -> String {
    vs.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(", ")
}

fn theorem_claims(e: usize, f: Fp, rows: &[Row], orbits: &[OrbitSummary]) -> Vec<Claim> {
    let with_verdict = |label: ComponentLabel| -> Vec<&Row> {
        rows.iter()
            .filter(|r| r.component == Some(label) && r.stable_end_dim == Some(1))
            .collect()
    };
    let check_allowed = |label: ComponentLabel, allowed: &[RingVerdict]| -> (Vec<String>, usize) {
        let rs = with_verdict(label);
        let bad = rs
            .iter()
            .filter(|r| r.status == RowStatus::Ok && !r.udr_verdict.is_some_and(|v| allowed.contains(&v)))
            .map(|r| format!("{}: {}", r.name, r.udr_verdict.map(|v| v.as_str()).unwrap_or("none")))
            .collect();
        (bad, rs.len())
    };
    let mut out = Vec::new();

    let bad: Vec<String> = rows
        .iter()
        .filter(|r| r.origin.iter().any(|o| o == "catalog") && r.stable_end_dim.is_some_and(|s| s != 1))
        .chain(
            rows.iter()
                .filter(|r| r.origin.iter().any(|o| o == "catalog-large") && r.stable_end_dim.is_some_and(|s| s < 2)),
        )
        .map(|r| format!("{}: stable End dimension {}", r.name, r.stable_end_dim.unwrap()))
        .collect();
    out.push(claim(
        "catalog-stable-end",
        "catalog seeds have stable endomorphism ring k; the large catalog strings do not",
        bad,
        "all catalog rows as listed".into(),
    ));

    let bad: Vec<String> = rows
        .iter()
        .filter(|r| {
            r.stable_end_dim == Some(1) && r.orbit.is_none() && r.component != Some(ComponentLabel::HomogeneousTube)
        })
        .map(|r| format!("{} has stable End k outside the catalog orbits", r.name))
        .collect();
    let n1 = rows.iter().filter(|r| r.stable_end_dim == Some(1)).count();
    out.push(claim(
        "stable-end-k-in-catalog",
        "every analyzed non-band module with stable endomorphism ring k lies in a catalog orbit",
        bad,
        format!("{n1} rows with stable End k"),
    ));

    let (bad, n) = check_allowed(
        ComponentLabel::ExceptionalTube,
        &[RingVerdict::K, RingVerdict::PowerSeries],
    );
    out.push(claim(
        "exceptional-tube-verdicts",
        "modules in exceptional tubes with stable End k have deformation ring k or k[[t]]",
        bad,
        format!("{n} rows"),
    ));

    let allowed: &[RingVerdict] = if e >= 2 {
        &[RingVerdict::K, RingVerdict::DualNumbers]
    } else {
        &[RingVerdict::TwoVariable]
    };
    let (bad, n) = check_allowed(ComponentLabel::NonPeriodic, allowed);
    out.push(claim(
        "non-periodic-verdicts",
        if e >= 2 {
            "modules in the non-periodic component with stable End k have deformation ring k or k[t]/(t^2)"
        } else {
            "for e = 1, modules in the non-periodic component with stable End k have deformation ring k[[t1,t2]]/(t1^2-t2^2,t1t2)"
        },
        bad,
        format!("{n} rows"),
    ));

    let (mut bad, n) = check_allowed(ComponentLabel::HomogeneousTube, &[RingVerdict::PowerSeries]);
    for r in rows.iter().filter(|r| r.band.is_some()) {
        let (n_band, lambda) = r.band.unwrap();
        let admissible = n_band == 1 && f.mul(lambda, lambda) != f.neg(1);
        if let Some(s) = r.stable_end_dim {
            if (s == 1) != admissible {
                bad.push(format!("{}: stable End dimension {s}", r.name));
            }
        }
    }
    let gated: Vec<&Row> = rows
        .iter()
        .filter(|r| r.component == Some(ComponentLabel::HomogeneousTube) && r.stable_end_dim.is_some_and(|s| s != 1))
        .collect();
    bad.extend(
        rows.iter()
            .filter(|r| {
                r.component == Some(ComponentLabel::HomogeneousTube)
                    && r.stable_end_dim == Some(1)
                    && r.status != RowStatus::Ok
            })
            .map(|r| format!("{}: {:?}", r.name, r.status)),
    );
    out.push(claim(
        "homogeneous-tube-verdicts",
        "bands have stable End k exactly when n = 1 and λ^2 ≠ -1, and then a deformation ring consistent with k[[t]]",
        bad,
        format!("{n} admissible band rows, {} gated", gated.len()),
    ));

    let mut bad = Vec::new();
    for o in orbits {
        let vs: Vec<RingVerdict> = rows
            .iter()
            .filter(|r| r.orbit.as_ref().is_some_and(|x| x.seed == o.seed))
            .filter_map(|r| r.udr_verdict)
            .collect();
        if vs.iter().any(|v| Some(*v) != o.measured) {
            bad.push(format!("orbit of {}: verdicts {}", o.seed, verdict_list(&vs)));
        }
    }
    out.push(claim(
        "orbit-invariance",
        "the verdict is constant along each Ω-orbit",
        bad,
        format!("{} orbits", orbits.len()),
    ));

    let count = |label: ComponentLabel, v: RingVerdict| {
        orbits
            .iter()
            .filter(|o| o.component == label && o.measured == Some(v))
            .count()
    };
    let total = |label: ComponentLabel| orbits.iter().filter(|o| o.component == label).count();
    let (exc, non) = if e >= 2 {
        (
            vec![(RingVerdict::PowerSeries, 1), (RingVerdict::K, e - 1)],
            vec![(RingVerdict::DualNumbers, 2), (RingVerdict::K, e - 2)],
        )
    } else {
        (vec![(RingVerdict::PowerSeries, 1)], vec![(RingVerdict::TwoVariable, 1)])
    };
    for (id, label, want) in [
        ("exceptional-tube-orbit-counts", ComponentLabel::ExceptionalTube, exc),
        ("non-periodic-orbit-counts", ComponentLabel::NonPeriodic, non),
    ] {
        let expected: usize = want.iter().map(|w| w.1).sum();
        let mut bad: Vec<String> = want
            .iter()
            .filter(|(v, k)| count(label, *v) != *k)
            .map(|(v, k)| format!("{} orbits with verdict {}, expected {k}", count(label, *v), v.as_str()))
            .collect();
        if total(label) != expected {
            bad.push(format!("{} orbits in total, expected {expected}", total(label)));
        }
        let statement = want
            .iter()
            .map(|(v, k)| format!("{k} with verdict {}", v.as_str()))
            .collect::<Vec<_>>()
            .join(", ");
        out.push(claim(
            id,
            &format!(
                "Ω-orbits with stable End k in the {} component: {statement}",
                label.as_str()
            ),
            bad,
            statement.clone(),
        ));
    }

    let bad: Vec<String> = orbits
        .iter()
        .filter(|o| o.measured != Some(o.predicted))
        .map(|o| {
            format!(
                "{}: measured {}, predicted {}",
                o.seed,
                o.measured.map(|v| v.as_str()).unwrap_or("none"),
                o.predicted.as_str()
            )
        })
        .collect();
    out.push(claim(
        "seed-verdicts",
        "each catalog orbit has its predicted deformation ring",
        bad,
        format!("{} orbits", orbits.len()),
    ));
    out
}

fn note(id: &str, statement: &str, holds: bool, detail: String) -> Claim {
    Claim {
        id: id.into(),
        statement: statement.into(),
        holds,
        detail,
    }
}

fn secondary_notes(ctx: &Ctx, rows: &[Row]) -> Result<Vec<Claim>, CliError> {
    let pres = &ctx.pres;
    let f = ctx.field;
    let e = pres.e();
    let mut out = Vec::new();

    // band hom dimensions for distinct parameters
    let units: Vec<u32> = f.units().collect();
    if units.len() >= 2 {
        let (lambda, mu) = if units.len() >= 3 {
            (units[1], units[2])
        } else {
            (units[0], units[1])
        };
        let mut measured = Vec::new();
        let mut holds = true;
        for m in 1..=2 {
            for n in 1..=2 {
                let a = Representation::band(pres, f, m, lambda)?;
                let b = Representation::band(pres, f, n, mu)?;
                let h = hom_space(&a, &b)?.dim();
                let st = stable_hom_dim(&a, &b)?;
                holds &= h == n * n;
                measured.push(format!(
                    "(m,n)=({m},{n}): dim Hom = {h} (stated {}), stable {st}",
                    n * n
                ));
            }
        }
        out.push(note(
            "band-hom-dimension",
            &format!("dim Hom(B(m,λ),B(n,μ)) = n^2 for λ ≠ μ (λ={lambda}, μ={mu})"),
            holds,
            measured.join("; "),
        ));
    }

    if e >= 2 {
        let printed = paper_lift_family(Family::WStarPrinted, pres, f, 3, 1)?;
        let printed_verdict = verify_lift(&printed);
        let mut repaired_ok = true;
        for level in 2..=ctx.max_level.max(2) {
            let l = paper_lift_family(Family::WStar, pres, f, level, 1)?;
            repaired_ok &= verify_lift(&l) == LiftVerdict::Valid;
        }
        let detail = match &printed_verdict {
            LiftVerdict::RelationViolated(v) => format!(
                "α_{{e-1}} = t·E_{{e,e-1}} violates {} at ({},{}) with residue {}; t·E_{{e+1,e-1}} is {} through k[t]/(t^{})",
                v.relation,
                v.row,
                v.col,
                v.residue,
                if repaired_ok { "valid" } else { "NOT valid" },
                ctx.max_level.max(2)
            ),
            other => format!("α_{{e-1}} = t·E_{{e,e-1}} gives {other:?}"),
        };
        out.push(note(
            "w-family-matrix",
            "the W-family lift with α_{e-1} = t·E_{e,e-1} satisfies the relations",
            printed_verdict == LiftVerdict::Valid,
            detail,
        ));

        let mut measured = Vec::new();
        let mut holds = true;
        for i in 1..e {
            let text: Vec<String> = (i..e).rev().map(|j| format!("a{j}")).collect();
            let name = format!("M({})", text.join("*"));
            let v = rows.iter().find(|r| r.name == name).and_then(|r| r.udr_verdict);
            holds &= v == Some(RingVerdict::K);
            measured.push(format!("i={i}: {}", v.map(|x| x.as_str()).unwrap_or("none")));
        }
        out.push(note(
            "w-i-range",
            "M(α_{e-1}⋯α_i) has deformation ring k for every 1 ≤ i ≤ e-1",
            holds,
            measured.join("; "),
        ));
    }
    Ok(out)
}

pub struct AnalyzeOptions {
    pub e: usize,
    pub p: u32,
    pub config: AnalyzeConfig,
    pub reproducible: bool,
}

pub fn analyze(opts: &AnalyzeOptions) -> Result<Report, CliError> {
    let pres = Arc::new(Presentation::new(opts.e).map_err(|e| CliError::Input(e.to_string()))?);
    let field = Fp::new(opts.p)?;
    let probe = Representation::simple(&pres, field, 0)?;
    let ctx = Ctx {
        pres: Arc::clone(&pres),
        field,
        // strings of length L can sit up to about L steps from their seed
        classifier: Classifier::with_depth(&probe, 2 * opts.e + 2 + opts.config.max_string_len)?,
        max_level: opts.config.max_level,
        max_dim: opts.config.max_dim,
    };
    let modules: Vec<(ModuleSpec, Vec<String>)> =
        analyze_modules(&pres, field, opts.config.max_string_len, opts.config.bands)
            .into_iter()
            .collect();
    let rows: Vec<Row> = modules
        .par_iter()
        .map(|(spec, origin)| analyze_row(&ctx, spec, origin))
        .collect::<Result<_, _>>()?;

    let mut orbits = Vec::new();
    for s in ctx.classifier.seeds() {
        let seed_text = canonical_spec(&pres, &s.spec).canonical_text(&pres);
        let measured = rows.iter().find(|r| r.spec == seed_text).and_then(|r| r.udr_verdict);
        let members = rows
            .iter()
            .filter_map(|r| {
                r.orbit
                    .as_ref()
                    .filter(|o| o.seed == s.name)
                    .map(|o| (o.shift, r.spec.clone()))
            })
            .collect();
        orbits.push(OrbitSummary {
            seed: s.name.clone(),
            component: s.component,
            predicted: s.predicted,
            measured,
            members,
        });
    }
    let claims = theorem_claims(opts.e, field, &rows, &orbits);
    let notes = secondary_notes(&ctx, &rows)?;
    let summary = Summary {
        rows: rows.len(),
        verdicts: rows.iter().filter(|r| r.udr_verdict.is_some()).count(),
        inconclusive: rows.iter().filter(|r| r.status == RowStatus::Inconclusive).count(),
        skipped: rows.iter().filter(|r| r.status == RowStatus::Skipped).count(),
        theorem_holds: claims.iter().all(|c| c.holds),
        notes_hold: notes.iter().all(|c| c.holds),
    };
    let generated_unix = if opts.reproducible {
        None
    } else {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs())
    };
    Ok(Report {
        header: Header {
            tool: "brauer-udr".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            schema_version: SCHEMA_VERSION,
            e: opts.e,
            p: opts.p,
            config: opts.config.clone(),
            generated_unix,
        },
        rows,
        orbits,
        claims,
        notes,
        summary,
    })
}

/// Outcome of re-checking a report's certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub checked: usize,
    pub failures: Vec<String>,
}

fn check_row(pres: &Arc<Presentation>, f: Fp, row: &Row) -> Result<Option<String>, CliError> {
    let (Some(verdict), Some(ev)) = (row.udr_verdict, row.evidence.as_ref()) else {
        return Ok(if row.udr_verdict.is_some() {
            Some("verdict without evidence".into())
        } else {
            None
        });
    };
    if ev.verdict != verdict || ev.module != row.spec {
        return Ok(Some("evidence does not belong to this row".into()));
    }
    let v = ModuleSpec::parse(pres, f, &row.spec)?.build(pres, f)?;
    if v.dims() != row.dim_vector.as_slice() {
        return Ok(Some("dimension vector differs from the module spec".into()));
    }
    let valid_lift = |rec: &crate::deform::LiftRecord| -> Result<Option<crate::deform::Lift>, CliError> {
        if rec.base != row.spec || rec.e != pres.e() || rec.p != f.p() {
            return Ok(None);
        }
        let l = rec.to_lift()?;
        Ok((verify_lift(&l) == LiftVerdict::Valid).then_some(l))
    };
    let ring = |spec: &str| -> Result<Arc<LocalAlgebra>, CliError> { Ok(LocalAlgebra::from_spec(spec, f)?) };
    let fail = |s: &str| Ok(Some(s.to_string()));
    match verdict {
        RingVerdict::K => {
            if ev.r != 0 || first_order_classes(&v).r != 0 {
                return fail("tangent space is not zero");
            }
        }
        RingVerdict::PowerSeries => {
            let Some(w) = ev.witness.as_ref() else {
                return fail("missing witness");
            };
            let Some(l) = valid_lift(w)? else {
                return fail("witness lift does not verify");
            };
            if !w.ring.starts_with("k[t]/(t^") || w.ring == "k[t]/(t^2)" {
                return fail("witness is not over a truncated power series ring of level at least 3");
            }
            let s = RingSurjection::natural(l.ring(), &ring("k[t]/(t^2)")?)?;
            if is_trivial_lift(&l.push_forward(&s, "k[t]/(t^2)"))? {
                return fail("witness is trivial to first order");
            }
        }
        RingVerdict::DualNumbers => {
            let Some(o) = ev.obstructed.as_ref() else {
                return fail("missing obstruction");
            };
            let Some(l) = valid_lift(&o.lift)? else {
                return fail("obstructed lift does not verify");
            };
            if o.lift.ring != "k[t]/(t^2)" || o.target_ring != "k[t]/(t^3)" || is_trivial_lift(&l)? {
                return fail("obstruction is not for a nontrivial first-order lift");
            }
            let s = RingSurjection::natural(&ring(&o.target_ring)?, l.ring())?;
            if !check_obstruction(&l, &s, &o.obstruction)? {
                return fail("obstruction certificate does not check");
            }
        }
        RingVerdict::TwoVariable => {
            let Some(o) = ev.obstructed.as_ref() else {
                return fail("missing obstruction");
            };
            let Some(l) = valid_lift(&o.lift)? else {
                return fail("obstructed lift does not verify");
            };
            if ev.r != 2 || first_order_classes(&v).r != 2 {
                return fail("tangent space is not 2-dimensional");
            }
            let s = RingSurjection::natural(&ring(&o.target_ring)?, l.ring())?;
            if !check_obstruction(&l, &s, &o.obstruction)? {
                return fail("obstruction certificate does not check");
            }
        }
    }
    Ok(None)
}

/// Re-check every verdict's witness or obstruction certificate.
pub fn verify_report(report: &Report) -> Result<VerifyOutcome, CliError> {
    let pres = Arc::new(Presentation::new(report.header.e).map_err(|e| CliError::Input(e.to_string()))?);
    let f = Fp::new(report.header.p)?;
    let results: Vec<(String, Option<String>)> = report
        .rows
        .par_iter()
        .map(|r| check_row(&pres, f, r).map(|x| (r.spec.clone(), x)))
        .collect::<Result<_, _>>()?;
    let checked = report.rows.iter().filter(|r| r.udr_verdict.is_some()).count();
    let failures = results
        .into_iter()
        .filter_map(|(s, x)| x.map(|why| format!("{s}: {why}")))
        .collect();
    Ok(VerifyOutcome { checked, failures })
}
