//! Fact files, reports and the commands behind the `udisc` binary. Each
//! command returns its rendered output together with the process exit
//! code so the binary stays a thin wrapper.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::parse_rational;
use crate::brauer::{render_pair, BrauerClassQ};
use crate::deduce::{resolve, CharacterFactSheet, DeductionReport, Outcome, PlaceStatus, Relation};
use crate::error::{Error, Result};
use crate::hermforms::HermitianGram;
use crate::quadfield::{ImagQuadField, QuadElem};
use crate::symbols::{hilbert_sq, relevant_places, Place, SquareClassQ};

pub const EXIT_UNIQUE: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_CANDIDATES: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

/// A Gram matrix over `Q(sqrt(-delta0))`; each entry is
/// `[x_num, x_den, y_num, y_den]` for `x + y sqrt(-delta0)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GramSpec {
    pub delta0: u64,
    pub entries: Vec<Vec<[i64; 4]>>,
}

impl GramSpec {
    pub fn build(&self) -> Result<HermitianGram> {
        let l = ImagQuadField::new(self.delta0)?;
        let mut rows = Vec::with_capacity(self.entries.len());
        for (i, row) in self.entries.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (j, e) in row.iter().enumerate() {
                if e[1] == 0 || e[3] == 0 {
                    return Err(Error::Parse(format!("gram entry ({i},{j}) has a zero denominator")));
                }
                let x = BigRational::new(BigInt::from(e[0]), BigInt::from(e[1]));
                let y = BigRational::new(BigInt::from(e[2]), BigInt::from(e[3]));
                out.push(QuadElem::new(x, y, &l));
            }
            rows.push(out);
        }
        HermitianGram::new(&l, rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportKind {
    Unique,
    Candidates,
    UnderDetermined,
    Error,
}

/// What a corpus file claims the engine should produce.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub kind: ReportKind,
    #[serde(default)]
    pub disc: Option<SquareClassQ>,
    #[serde(default)]
    pub ram: Option<BrauerClassQ>,
    #[serde(default)]
    pub candidates: Option<Vec<SquareClassQ>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactFile {
    #[serde(default)]
    pub source: Option<String>,
    #[serde(default)]
    pub note: Option<String>,
    /// Documentation-only rows the engine does not model.
    #[serde(default)]
    pub out_of_scope: bool,
    #[serde(default)]
    pub metadata: Option<serde_json::Value>,
    #[serde(default)]
    pub character: Option<CharacterFactSheet>,
    #[serde(default)]
    pub gram: Option<GramSpec>,
    #[serde(default)]
    pub relations: Vec<Relation>,
    #[serde(default)]
    pub expected: Option<Expected>,
}

impl FactFile {
    pub fn parse(text: &str, origin: &str) -> Result<FactFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("{origin}:{}:{}: {e}", e.line(), e.column())))
    }

    pub fn load(path: &Path) -> Result<FactFile> {
        let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// The sheet with any top-level relations folded in.
    pub fn sheet(&self) -> Result<CharacterFactSheet> {
        let mut s = self
            .character
            .clone()
            .ok_or_else(|| Error::InvalidSheet("fact file has no \"character\" block".into()))?;
        s.relations.extend(self.relations.iter().cloned());
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub id: String,
    pub kind: ReportKind,
    /// Discriminant representatives, one per class (absent when the
    /// character is not quasi-split).
    pub discs: Vec<Option<SquareClassQ>>,
    pub classes: Vec<BrauerClassQ>,
    pub presentation: Option<String>,
    pub unknown: Vec<Place>,
    pub statuses: BTreeMap<Place, PlaceStatus>,
    pub trace: Vec<String>,
    pub error: Option<String>,
}

impl Report {
    pub fn from_deduction(r: &DeductionReport) -> Report {
        let (kind, cands, unknown) = match &r.outcome {
            Outcome::Unique(c) => (ReportKind::Unique, vec![c.clone()], Vec::new()),
            Outcome::Candidates { candidates } => (ReportKind::Candidates, candidates.clone(), Vec::new()),
            Outcome::UnderDetermined { unknown } => (ReportKind::UnderDetermined, Vec::new(), unknown.clone()),
        };
        let presentation = match &r.outcome {
            Outcome::Unique(c) => c.class.presentation().map(|(a, b)| render_pair(&a, &b)),
            _ => None,
        };
        Report {
            id: r.id.clone(),
            kind,
            discs: cands.iter().map(|c| c.disc.clone()).collect(),
            classes: cands.iter().map(|c| c.class.clone()).collect(),
            presentation,
            unknown,
            statuses: r.statuses.clone(),
            trace: r.trace.iter().map(|t| t.to_string()).collect(),
            error: None,
        }
    }

    pub fn from_error(id: &str, e: &Error) -> Report {
        Report {
            id: id.to_string(),
            kind: ReportKind::Error,
            discs: Vec::new(),
            classes: Vec::new(),
            presentation: None,
            unknown: Vec::new(),
            statuses: BTreeMap::new(),
            trace: Vec::new(),
            error: Some(e.to_string()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ReportKind::Unique => EXIT_UNIQUE,
            ReportKind::Candidates | ReportKind::UnderDetermined => EXIT_CANDIDATES,
            ReportKind::Error => EXIT_ERROR,
        }
    }

    /// `"disc = -1, Delta = (-1,-3)_Q, ram{inf,3}"` for unique results.
    pub fn summary(&self) -> String {
        match self.kind {
            ReportKind::Unique => {
                let disc = match &self.discs[0] {
                    Some(d) => d.to_string(),
                    None => "n/a (not quasi-split)".into(),
                };
                let pres = self.presentation.clone().unwrap_or_else(|| "?".into());
                format!("disc = {disc}, Delta = {pres}, {}", self.classes[0])
            }
            ReportKind::Candidates => {
                let ds: Vec<String> = self
                    .discs
                    .iter()
                    .zip(&self.classes)
                    .map(|(d, c)| d.as_ref().map_or_else(|| c.to_string(), |d| d.to_string()))
                    .collect();
                format!("candidates {{{}}}", ds.join(", "))
            }
            ReportKind::UnderDetermined => {
                let u: Vec<String> = self.unknown.iter().map(|v| v.to_string()).collect();
                format!("under-determined, unknown places {{{}}}", u.join(","))
            }
            ReportKind::Error => format!("error: {}", self.error.clone().unwrap_or_default()),
        }
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "id: {}", self.id);
        let _ = writeln!(s, "{}", self.summary());
        if self.kind == ReportKind::Candidates {
            for (d, c) in self.discs.iter().zip(&self.classes) {
                let d = d.as_ref().map_or("-".to_string(), |d| d.to_string());
                let _ = writeln!(s, "  {d}: {c}");
            }
        }
        if !self.statuses.is_empty() {
            let st: Vec<String> = self.statuses.iter().map(|(v, x)| format!("{v}:{x}")).collect();
            let _ = writeln!(s, "places: {}", st.join(" "));
        }
        if !self.trace.is_empty() {
            let _ = writeln!(s, "trace:");
            for t in &self.trace {
                let _ = writeln!(s, "  {t}");
            }
        }
        s
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            serde_json::to_string_pretty(self).expect("report serializes") + "\n"
        } else {
            self.render_text()
        }
    }
}

pub fn deduce_file(path: &Path) -> Report {
    let id = path.display().to_string();
    let run = || -> Result<Report> {
        let file = FactFile::load(path)?;
        let sheet = file.sheet()?;
        match resolve(&sheet) {
            Ok(r) => Ok(Report::from_deduction(&r)),
            Err(e) => Ok(Report::from_error(&sheet.id, &e)),
        }
    };
    run().unwrap_or_else(|e| Report::from_error(&id, &e))
}

pub fn cmd_deduce(path: &Path, json: bool) -> (String, i32) {
    let r = deduce_file(path);
    (r.render(json), r.exit_code())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HformReport {
    pub dim: usize,
    pub delta0: u64,
    pub diagonal: Vec<String>,
    pub disc: SquareClassQ,
    pub ram: BrauerClassQ,
    pub positive_definite: bool,
    pub transfer_dim: usize,
    pub transfer_disc: SquareClassQ,
    pub transfer_signature: (usize, usize),
    pub transfer_hasse: BTreeMap<Place, i8>,
    pub clifford: BrauerClassQ,
    pub clifford_matches: bool,
}

impl HformReport {
    pub fn compute(h: &HermitianGram) -> Result<HformReport> {
        let q = h.transfer_quadratic()?;
        let inv = q.invariants();
        let ram = h.delta()?;
        let clifford = q.clifford_invariant();
        Ok(HformReport {
            dim: h.dim(),
            delta0: h.field().delta0(),
            diagonal: h.diagonalize()?.iter().map(|a| a.to_string()).collect(),
            disc: h.disc()?,
            clifford_matches: clifford == ram,
            ram,
            positive_definite: h.is_positive_definite()?,
            transfer_dim: inv.dim,
            transfer_disc: inv.disc,
            transfer_signature: (inv.positive, inv.negative),
            transfer_hasse: inv.hasse,
            clifford,
        })
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "dim={} field=Q(sqrt(-{}))", self.dim, self.delta0);
        let _ = writeln!(s, "diagonal: {}", self.diagonal.join(", "));
        let verdict = if self.clifford_matches { "OK" } else { "MISMATCH" };
        let _ = writeln!(s, "disc={} {} clifford={verdict}", self.disc, self.ram);
        let _ = writeln!(s, "definite: {}", if self.positive_definite { "yes" } else { "no" });
        let hasse: Vec<String> = self.transfer_hasse.iter().map(|(v, x)| format!("{v}:{x:+}")).collect();
        let _ = writeln!(
            s,
            "transfer: dim {} disc {} signature ({},{}) hasse {} clifford {}",
            self.transfer_dim,
            self.transfer_disc,
            self.transfer_signature.0,
            self.transfer_signature.1,
            hasse.join(" "),
            self.clifford
        );
        s
    }
}

fn load_gram(path: &Path) -> Result<HermitianGram> {
    let file = FactFile::load(path)?;
    file.gram.ok_or_else(|| Error::InvalidSheet(format!("{}: no \"gram\" block", path.display())))?.build()
}

pub fn cmd_hform(path: &Path, json: bool) -> (String, i32) {
    match load_gram(path).and_then(|h| HformReport::compute(&h)) {
        Ok(r) if json => (serde_json::to_string_pretty(&r).expect("serializes") + "\n", EXIT_UNIQUE),
        Ok(r) => (r.render_text(), EXIT_UNIQUE),
        Err(e) => (render_error(&e, json), EXIT_ERROR),
    }
}

fn render_error(e: &Error, json: bool) -> String {
    if json {
        serde_json::json!({ "error": e.to_string() }).to_string() + "\n"
    } else {
        format!("error: {e}\n")
    }
}

pub fn cmd_symbol(a: &str, b: &str, place: Option<&str>, json: bool) -> (String, i32) {
    let run = || -> Result<Vec<(Place, i8)>> {
        let a = SquareClassQ::from_rational(&parse_rational(a)?)?;
        let b = SquareClassQ::from_rational(&parse_rational(b)?)?;
        let places: Vec<Place> = match place {
            Some(p) => vec![p.parse()?],
            None => relevant_places(&a, &b).into_iter().collect(),
        };
        Ok(places.into_iter().map(|v| {
            let s = hilbert_sq(&a, &b, &v);
            (v, s)
        }).collect())
    };
    match run() {
        Ok(vals) if json => {
            let m: BTreeMap<String, i8> = vals.iter().map(|(v, s)| (v.to_string(), *s)).collect();
            (serde_json::to_string(&m).expect("serializes") + "\n", EXIT_UNIQUE)
        }
        Ok(vals) => {
            let parts: Vec<String> = vals.iter().map(|(v, s)| format!("{v}:{s}")).collect();
            (parts.join(" ") + "\n", EXIT_UNIQUE)
        }
        Err(e) => (render_error(&e, json), EXIT_ERROR),
    }
}

pub fn cmd_isnorm(a: &str, delta0: &str, json: bool) -> (String, i32) {
    let run = || -> Result<(bool, BTreeMap<String, i8>, Vec<Place>)> {
        let a = parse_rational(a)?;
        let d: u64 = delta0.trim().parse().map_err(|_| Error::Parse(format!("malformed delta0 {delta0:?}")))?;
        let l = ImagQuadField::new(d)?;
        let nc: Vec<Place> = l.norm_class(&a)?.into_iter().collect();
        Ok((nc.is_empty(), BTreeMap::new(), nc))
    };
    match run() {
        Ok((ok, _, nc)) if json => {
            let v = serde_json::json!({ "a": a, "delta0": delta0, "is_norm": ok, "norm_class": nc });
            (v.to_string() + "\n", EXIT_UNIQUE)
        }
        Ok((ok, _, _)) => (format!("{ok}\n"), EXIT_UNIQUE),
        Err(e) => (render_error(&e, json), EXIT_ERROR),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRow {
    pub file: String,
    pub id: String,
    pub expected: String,
    pub got: String,
    pub status: RowStatus,
}

fn describe_expected(e: &Expected) -> String {
    match e.kind {
        ReportKind::Candidates => {
            let c: Vec<String> = e.candidates.iter().flatten().map(|d| d.to_string()).collect();
            format!("candidates {{{}}}", c.join(", "))
        }
        _ => {
            let mut s = e.disc.as_ref().map_or_else(|| format!("{:?}", e.kind).to_lowercase(), |d| d.to_string());
            if let Some(r) = &e.ram {
                s = format!("{s} {r}");
            }
            s
        }
    }
}

fn describe_report(r: &Report) -> String {
    match r.kind {
        ReportKind::Unique => {
            let d = r.discs[0].as_ref().map_or("n/a".to_string(), |d| d.to_string());
            format!("{d} {}", r.classes[0])
        }
        _ => r.summary(),
    }
}

/// Discriminants are compared as norm classes over `L` when the field is
/// known, since several representatives name the same class.
fn matches_expected(e: &Expected, r: &Report, field: Option<&ImagQuadField>) -> bool {
    if e.kind != r.kind {
        return false;
    }
    let same = |want: &SquareClassQ, got: &SquareClassQ| match field {
        Some(l) => BrauerClassQ::of_norm_class(l, want) == BrauerClassQ::of_norm_class(l, got),
        None => want == got,
    };
    match e.kind {
        ReportKind::Unique => {
            e.disc.as_ref().is_none_or(|d| r.discs[0].as_ref().is_some_and(|g| same(d, g)))
                && e.ram.as_ref().is_none_or(|c| &r.classes[0] == c)
        }
        ReportKind::Candidates => {
            let want = e.candidates.clone().unwrap_or_default();
            let got: Vec<SquareClassQ> = r.discs.iter().flatten().cloned().collect();
            want.len() == got.len()
                && want.iter().all(|w| got.iter().any(|g| same(w, g)))
                && got.iter().all(|g| want.iter().any(|w| same(w, g)))
        }
        ReportKind::UnderDetermined | ReportKind::Error => true,
    }
}

fn run_corpus_file(path: &Path) -> CorpusRow {
    let file_name = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let fail = |id: String, expected: String, got: String| CorpusRow {
        file: file_name.clone(),
        id,
        expected,
        got,
        status: RowStatus::Fail,
    };
    let file = match FactFile::load(path) {
        Ok(f) => f,
        Err(e) => return fail(String::new(), "-".into(), format!("error: {e}")),
    };
    let id = file.character.as_ref().map(|c| c.id.clone()).unwrap_or_else(|| file_name.trim_end_matches(".json").to_string());
    if file.out_of_scope {
        return CorpusRow { file: file_name.clone(), id, expected: "-".into(), got: "out of scope".into(), status: RowStatus::Skip };
    }
    let Some(expected) = &file.expected else {
        return fail(id, "-".into(), "no expected block".into());
    };
    let want = describe_expected(expected);
    let report = if file.character.is_some() {
        match file.sheet() {
            Ok(s) => match resolve(&s) {
                Ok(r) => Report::from_deduction(&r),
                Err(e) => Report::from_error(&id, &e),
            },
            Err(e) => Report::from_error(&id, &e),
        }
    } else if let Some(g) = &file.gram {
        match g.build().and_then(|h| Ok((h.disc()?, h.delta()?))) {
            Ok((d, c)) => Report {
                id: id.clone(),
                kind: ReportKind::Unique,
                discs: vec![Some(d)],
                classes: vec![c],
                presentation: None,
                unknown: Vec::new(),
                statuses: BTreeMap::new(),
                trace: Vec::new(),
                error: None,
            },
            Err(e) => Report::from_error(&id, &e),
        }
    } else {
        Report::from_error(&id, &Error::InvalidSheet("neither \"character\" nor \"gram\" given".into()))
    };
    let got = describe_report(&report);
    let field = file.character.as_ref().map(|c| c.field.clone()).or_else(|| file.gram.as_ref().and_then(|g| ImagQuadField::new(g.delta0).ok()));
    let status = if matches_expected(expected, &report, field.as_ref()) { RowStatus::Pass } else { RowStatus::Fail };
    CorpusRow { file: file_name, id, expected: want, got, status }
}

pub fn run_corpus(dir: &Path) -> Result<Vec<CorpusRow>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files.par_iter().map(|p| run_corpus_file(p)).collect())
}

pub fn cmd_corpus(dir: &Path, json: bool) -> (String, i32) {
    let rows = match run_corpus(dir) {
        Ok(r) => r,
        Err(e) => return (render_error(&e, json), EXIT_ERROR),
    };
    let failed = rows.iter().filter(|r| r.status == RowStatus::Fail).count();
    let passed = rows.iter().filter(|r| r.status == RowStatus::Pass).count();
    let skipped = rows.len() - failed - passed;
    let code = if failed > 0 { EXIT_MISMATCH } else { EXIT_UNIQUE };
    if json {
        let v = serde_json::json!({ "rows": rows, "passed": passed, "failed": failed, "skipped": skipped });
        return (serde_json::to_string_pretty(&v).expect("serializes") + "\n", code);
    }
    let mut s = String::new();
    if !rows.is_empty() {
        let w = rows.iter().map(|r| r.file.len()).max().unwrap_or(4).max(4);
        let we = rows.iter().map(|r| r.expected.len()).max().unwrap_or(8).max(8);
        let wg = rows.iter().map(|r| r.got.len()).max().unwrap_or(3).max(3);
        let _ = writeln!(s, "{:w$}  {:we$}  {:wg$}  status", "file", "expected", "got");
        for r in &rows {
            let st = format!("{:?}", r.status).to_lowercase();
            let _ = writeln!(s, "{:w$}  {:we$}  {:wg$}  {st}", r.file, r.expected, r.got);
        }
    }
    let _ = writeln!(s, "{} sheets: {passed} passed, {failed} failed, {skipped} skipped", rows.len());
    (s, code)
}
