//! Paradigm regression suites and lexicon coverage statistics.
//!
//! A suite is a line-based file of `analysis: surface` entries:
//!
//! ```text
//! # comment
//! algg+N+Sg+Gen: aalǥ
//! algg+N+Sg+Loc+PxSg1: [alǥstan, aalǥstan]
//! ```
//!
//! Repeated analyses merge their surface sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fst::enumerate_paths;
use crate::lexc::{self, LexiconAst};
use crate::lookup::Pipeline;
use crate::symtab::SymbolId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct SuiteError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestCase {
    pub analysis: String,
    pub expected: BTreeSet<String>,
    pub line: usize,
}

pub fn parse_suite(source: &str) -> Result<Vec<TestCase>, SuiteError> {
    let mut cases: IndexMap<String, TestCase> = IndexMap::new();
    for (n, raw) in source.lines().enumerate() {
        let line = n + 1;
        let err = |message: &str| SuiteError { line, message: message.to_string() };
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let (analysis, rest) = text.split_once(':').ok_or_else(|| err("expected 'analysis: surface'"))?;
        let analysis = analysis.trim();
        if analysis.is_empty() {
            return Err(err("empty analysis"));
        }
        let rest = rest.trim();
        let forms: Vec<&str> = match rest.strip_prefix('[') {
            Some(inner) => inner
                .strip_suffix(']')
                .ok_or_else(|| err("unterminated list"))?
                .split(',')
                .map(str::trim)
                .collect(),
            None => vec![rest],
        };
        if forms.iter().any(|f| f.is_empty()) {
            return Err(err("empty surface"));
        }
        let case = cases.entry(analysis.to_string()).or_insert_with(|| TestCase {
            analysis: analysis.to_string(),
            expected: BTreeSet::new(),
            line,
        });
        case.expected.extend(forms.into_iter().map(String::from));
    }
    Ok(cases.into_values().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Gen,
    Ana,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Directions {
    Gen,
    Ana,
    #[default]
    Both,
}

impl std::str::FromStr for Directions {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gen" => Ok(Directions::Gen),
            "ana" => Ok(Directions::Ana),
            "both" => Ok(Directions::Both),
            _ => Err(format!("unknown direction {s:?} (expected gen, ana or both)")),
        }
    }
}

impl Directions {
    fn list(self) -> &'static [Direction] {
        match self {
            Directions::Gen => &[Direction::Gen],
            Directions::Ana => &[Direction::Ana],
            Directions::Both => &[Direction::Gen, Direction::Ana],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub direction: Direction,
    pub analysis: String,
    pub expected: Vec<String>,
    /// Generated surfaces, or for analysis every reading of the expected surfaces.
    pub got: Vec<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Totals {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TestReport {
    pub results: Vec<CaseResult>,
}

impl TestReport {
    pub fn totals(&self, d: Direction) -> Totals {
        let mut t = Totals::default();
        for r in self.results.iter().filter(|r| r.direction == d) {
            match r.status {
                Status::Pass => t.passed += 1,
                Status::Fail => t.failed += 1,
            }
        }
        t
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.results.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let dir = match r.direction {
                Direction::Gen => "gen",
                Direction::Ana => "ana",
            };
            match r.status {
                Status::Pass => writeln!(out, "PASS {dir} {}: {}", r.analysis, r.expected.join(", ")),
                Status::Fail => writeln!(
                    out,
                    "FAIL {dir} {}: expected [{}] got [{}]{}",
                    r.analysis,
                    r.expected.join(", "),
                    r.got.join(", "),
                    r.error.as_ref().map(|e| format!(" ({e})")).unwrap_or_default()
                ),
            }
            .unwrap();
        }
        for (d, name) in [(Direction::Gen, "gen"), (Direction::Ana, "ana")] {
            let t = self.totals(d);
            if t.passed + t.failed > 0 {
                writeln!(out, "{name}: {}/{} passed", t.passed, t.passed + t.failed).unwrap();
            }
        }
        out
    }

    /// One JSON object per case.
    pub fn to_json_lines(&self) -> String {
        self.results
            .iter()
            .map(|r| serde_json::to_string(r).expect("serializable") + "\n")
            .collect()
    }
}

fn run_case(p: &Pipeline, case: &TestCase, d: Direction) -> CaseResult {
    let expected: Vec<String> = case.expected.iter().cloned().collect();
    let (got, ok, error) = match d {
        Direction::Gen => match p.generate(&case.analysis) {
            Ok(forms) => {
                let ok = forms.iter().cloned().collect::<BTreeSet<_>>() == case.expected;
                (forms, ok, None)
            }
            Err(e) => (Vec::new(), false, Some(e.to_string())),
        },
        Direction::Ana => {
            let mut got = BTreeSet::new();
            let mut ok = true;
            let mut error = None;
            for s in &case.expected {
                match p.analyze(s) {
                    Ok(readings) => {
                        ok &= readings.iter().any(|a| a.text == case.analysis && !a.relaxed);
                        got.extend(readings.into_iter().map(|a| a.text));
                    }
                    Err(e) => {
                        ok = false;
                        error.get_or_insert(e.to_string());
                    }
                }
            }
            (got.into_iter().collect(), ok, error)
        }
    };
    CaseResult {
        direction: d,
        analysis: case.analysis.clone(),
        expected,
        got,
        status: if ok { Status::Pass } else { Status::Fail },
        error,
    }
}

/// Runs every case in each requested direction. Cases are evaluated in
/// parallel; the report lists generation results first, in file order.
pub fn run_suite(p: &Pipeline, cases: &[TestCase], directions: Directions) -> TestReport {
    let work: Vec<(Direction, &TestCase)> = directions
        .list()
        .iter()
        .flat_map(|&d| cases.iter().map(move |c| (d, c)))
        .collect();
    TestReport {
        results: work.par_iter().map(|&(d, c)| run_case(p, c, d)).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StatsBounds {
    /// Longest analysis, in symbols, that enumeration visits.
    pub max_len: usize,
    pub max_count: usize,
}

impl Default for StatsBounds {
    fn default() -> Self {
        StatsBounds { max_len: 64, max_count: 200_000 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PosStats {
    pub lemmas: usize,
    pub glossed: usize,
    pub unglossed: usize,
    /// Distinct tag sequences without a derivational tag.
    pub inflections: usize,
    /// Distinct tag sequences with at least one derivational tag.
    pub derivations: usize,
    /// Analysis-surface pairs of the generator.
    pub forms: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoverageStats {
    pub by_pos: BTreeMap<String, PosStats>,
    pub truncated: bool,
}

/// `+Dimin` and anything spelled `+Der...`.
pub fn is_derivation_tag(text: &str) -> bool {
    text == "+Dimin" || text.starts_with("+Der")
}

/// Counts lemmas, glosses and paradigm cells per part of speech from the
/// lexicon's analyses, and forms from the generator.
pub fn coverage_stats(ast: &LexiconAst, p: &Pipeline, bounds: StatsBounds) -> CoverageStats {
    let table = &p.table;
    let mut stats = CoverageStats::default();
    let mut lemmas: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut cells: BTreeMap<String, BTreeSet<Vec<SymbolId>>> = BTreeMap::new();

    let lexicon = if p.lexicon.num_states() > 0 {
        p.lexicon.clone()
    } else {
        lexc::compile_lexicon(ast, table)
    };
    let paths = enumerate_paths(&lexicon, bounds.max_len, bounds.max_count);
    stats.truncated |= paths.truncated;
    for (analysis, _) in &paths.pairs {
        let Some(pos) = lexc::pos_of(table, analysis) else { continue };
        let (lemma, tags) = lexc::split_analysis(table, analysis);
        lemmas.entry(pos.clone()).or_default().insert(table.render(&lemma));
        cells.entry(pos).or_default().insert(tags);
    }
    for (pos, ls) in &lemmas {
        let glossed = ls.iter().filter(|l| !p.glosses.get(l, pos).is_empty()).count();
        let (der, infl): (Vec<_>, Vec<_>) = cells[pos]
            .iter()
            .partition(|tags| tags.iter().any(|&t| is_derivation_tag(table.text(t))));
        stats.by_pos.insert(
            pos.clone(),
            PosStats {
                lemmas: ls.len(),
                glossed,
                unglossed: ls.len() - glossed,
                inflections: infl.len(),
                derivations: der.len(),
                forms: 0,
            },
        );
    }

    let forms = enumerate_paths(&p.generator, bounds.max_len, bounds.max_count);
    stats.truncated |= forms.truncated;
    for (analysis, _) in &forms.pairs {
        if let Some(pos) = lexc::pos_of(table, analysis) {
            if let Some(s) = stats.by_pos.get_mut(&pos) {
                s.forms += 1;
            }
        }
    }
    stats
}

fn word_class(pos: &str) -> &str {
    match pos {
        "+N" => "Noun",
        "+V" => "Verb",
        "+A" => "Adjective",
        "+Adv" => "Adverb",
        "+Num" => "Numeral",
        "+Pron" => "Pronoun",
        "+Pcle" => "Particle",
        "+Interj" => "Interjection",
        "+CC" => "Coordinating conj.",
        "+CS" => "Subordinating conj.",
        "+Pr" => "Preposition",
        "+Po" => "Postposition",
        "+Det" => "Determiner",
        other => other,
    }
}

impl fmt::Display for CoverageStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let header = ["Word Class", "glossed", "unglossed", "inflections", "derivations", "forms"];
        let mut rows: Vec<[String; 6]> = vec![header.map(String::from)];
        let mut total = PosStats::default();
        for (pos, s) in &self.by_pos {
            rows.push([
                word_class(pos).to_string(),
                s.glossed.to_string(),
                s.unglossed.to_string(),
                s.inflections.to_string(),
                s.derivations.to_string(),
                s.forms.to_string(),
            ]);
            total.glossed += s.glossed;
            total.unglossed += s.unglossed;
            total.inflections += s.inflections;
            total.derivations += s.derivations;
            total.forms += s.forms;
        }
        rows.push([
            "Total".into(),
            total.glossed.to_string(),
            total.unglossed.to_string(),
            total.inflections.to_string(),
            total.derivations.to_string(),
            total.forms.to_string(),
        ]);
        let widths: Vec<usize> = (0..6)
            .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        for r in &rows {
            let mut line = format!("{:<w$}", r[0], w = widths[0]);
            for c in 1..6 {
                line.push_str(&format!("  {:>w$}", r[c], w = widths[c]));
            }
            writeln!(f, "{}", line.trim_end())?;
        }
        if self.truncated {
            writeln!(f, "note: enumeration bounds were reached; counts are lower bounds")?;
        }
        Ok(())
    }
}
