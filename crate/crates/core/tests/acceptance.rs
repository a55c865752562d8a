//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::*;
use morphfst::fst::att::{read_att, write_att};
use morphfst::fst::{
    complement, compose, determinize, enumerate_paths, equivalent_acceptors, intersect, is_empty, minimize,
    Side,
};
use morphfst::lexc::{self, LexiconAst};
use morphfst::lookup::{apply, build_orthography_filter, build_pipeline, compile_sources, parse_mapping, Mode, Pipeline, PipelineConfig};
use morphfst::symtab::{SymbolId, SymbolTable};
use morphfst::testkit::{coverage_stats, parse_suite, run_suite, Directions, StatsBounds};
use morphfst::twol::{check_rule, combine_rules, compile_rule, parse_twol, Strategy};

const FIXTURE_TIME_LIMIT: Duration = Duration::from_secs(5);
const RULE_ORACLE_TIME_LIMIT: Duration = Duration::from_secs(60);
const INVERSION_PATH_BOUND: usize = 5000;
const RULE_CASES: usize = 1000;
const RULE_STRING_LEN: usize = 6;
const RANDOM_RULE_SETS: u64 = 200;
const RANDOM_ACCEPTORS: u64 = 200;
const RANDOM_COMPOSE_PAIRS: u64 = 200;
const WORD_LEN: usize = 8;
const ENUMERATION_LEN: usize = 64;
const ENUMERATION_COUNT: usize = 100_000;

type Outcome = Result<String, String>;

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/sms-mini").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn config(mode: Mode) -> PipelineConfig {
    PipelineConfig {
        mode,
        ortho: parse_mapping(&fixture("ortho.txt")).unwrap(),
        relax: parse_mapping(&fixture("relax.txt")).unwrap(),
        ..Default::default()
    }
}

fn build(mode: Mode) -> (Pipeline, LexiconAst) {
    compile_sources(&[("sms.lexc", &fixture("sms.lexc"))], &fixture("sms.twol"), &config(mode)).unwrap()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn generated(p: &Pipeline, analysis: &str) -> BTreeSet<String> {
    p.generate(analysis).unwrap().into_iter().collect()
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn paper_forms() -> Outcome {
    let start = Instant::now();
    let (p, _) = build(Mode::Pedagogical);
    let report = run_suite(&p, &parse_suite(&fixture("sms.yaml")).unwrap(), Directions::Both);
    let elapsed = start.elapsed();
    check(report.all_passed(), || format!("fixture suite failed:\n{}", report.to_text()))?;
    let exact = [
        ("algg+N+Sg+Nom", "algg"),
        ("algg+N+Sg+Gen", "aalǥ"),
        ("algg+N+Sg+Ill", "aʹlǧǧe"),
        ("algg+N+Dimin+N+Sg+Gen", "aaʹlje"),
        ("veʹrdd+N+Sg+Nom", "veʹrdd"),
        ("veʹrdd+N+Sg+Gen", "veeʹrd"),
        ("veʹrdd+N+Sg+Ill", "vẹrdda"),
        ("veʹrdd+N+Pl+Gen", "viiʹrdi"),
        ("veʹrdd+N+Sg+Loc+PxSg3", "veʹrdstes"),
        ("veʹrdd+N+Dimin+N+Sg+Nom", "vẹẹrdaž"),
        ("tieʹtted+V+Pot+Sg3", "tieʹđež"),
        ("radio+N+Sg+Nom", "radio"),
    ];
    for (analysis, form) in exact {
        let got = generated(&p, analysis);
        check(got == set(&[form]), || format!("{analysis}: expected {{{form}}}, got {got:?}"))?;
    }
    let loc = generated(&p, "algg+N+Sg+Loc+PxSg1");
    check(loc.contains("alǥstan"), || format!("algg+N+Sg+Loc+PxSg1 lacks alǥstan: {loc:?}"))?;
    check(elapsed < FIXTURE_TIME_LIMIT, || format!("compile+test took {elapsed:?}"))?;
    Ok(format!("{} cited forms exact; compile+test {elapsed:.2?}", exact.len() + 1))
}

fn allegro_largo() -> Outcome {
    let (p, _) = build(Mode::Pedagogical);
    // The paper glosses the lemma as "begin"; the fixture lemma is algg.
    let got = generated(&p, "algg+N+Sg+Loc+PxSg1");
    check(got == set(&["alǥstan", "aalǥstan"]), || format!("got {got:?}"))?;
    Ok("{alǥstan, aalǥstan}".into())
}

fn inversion() -> Outcome {
    let (p, _) = build(Mode::Pedagogical);
    let paths = enumerate_paths(&p.generator, ENUMERATION_LEN, INVERSION_PATH_BOUND);
    let mut violations = Vec::new();
    for (a, s) in &paths.pairs {
        let (analysis, surface) = (p.table.render(a), p.table.render(s));
        let analyses: Vec<String> = p.analyze(&surface).unwrap().into_iter().map(|x| x.text).collect();
        if !analyses.contains(&analysis) || !p.generate(&analysis).unwrap().contains(&surface) {
            violations.push(format!("{analysis} / {surface}"));
        }
    }
    check(violations.is_empty(), || format!("violations: {violations:?}"))?;
    check(!paths.pairs.is_empty(), || "no paths".into())?;
    Ok(format!("{} pairs, 0 violations", paths.pairs.len()))
}

fn rule_soundness() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    let mut disagreements = Vec::new();
    let mut seed = 0;
    while cases < RULE_CASES {
        let mut rng = rng(10_000 + seed);
        seed += 1;
        let (table, pairs) = random_alphabet(&mut rng);
        let rule = random_rule(&mut rng, &pairs, "r");
        let t = compile_rule(&rule, &pairs, table.id()).map_err(|e| e.to_string())?;
        for _ in 0..4 {
            let s = random_pair_string(&mut rng, &pairs, RULE_STRING_LEN);
            cases += 1;
            if accepts(&t, &s) != check_rule(&rule, &pairs, &s).map_err(|e| e.to_string())? {
                disagreements.push(format!("{rule:?} on {s:?}"));
            }
        }
    }
    let elapsed = start.elapsed();
    check(disagreements.is_empty(), || format!("{} disagreements, first {}", disagreements.len(), disagreements[0]))?;
    check(elapsed < RULE_ORACLE_TIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("{cases} cases, 0 disagreements, {elapsed:.2?}"))
}

fn strategy_equivalence() -> Outcome {
    for seed in 0..RANDOM_RULE_SETS {
        let mut rng = rng(20_000 + seed);
        let (table, pairs) = random_alphabet(&mut rng);
        let rs = random_ruleset(&mut rng, &pairs, 3);
        let d = combine_rules(&rs, &table, Strategy::Direct).map_err(|e| e.to_string())?;
        let r = combine_rules(&rs, &table, Strategy::Reversed).map_err(|e| e.to_string())?;
        let same = equivalent_acceptors(&d.acceptor, &r.acceptor, WORD_LEN).map_err(|e| e.to_string())?;
        check(same, || format!("seed {seed}: strategies differ"))?;
    }
    let mut table = SymbolTable::new();
    lexc::parse_lexc(&fixture("sms.lexc"), &mut table).unwrap();
    let rs = parse_twol(&fixture("sms.twol"), &mut table).unwrap();
    let d = combine_rules(&rs, &table, Strategy::Direct).unwrap().acceptor;
    let r = combine_rules(&rs, &table, Strategy::Reversed).unwrap().acceptor;
    check(equivalent_acceptors(&d, &r, WORD_LEN).unwrap(), || "fixture strategies differ".into())?;
    Ok(format!("{RANDOM_RULE_SETS} random rule sets + fixture ({} states), 0 counterexamples", d.num_states()))
}

fn acceptor_algebra() -> Outcome {
    for seed in 0..RANDOM_ACCEPTORS {
        let (mut rng, table, sigma) = setup(30_000 + seed);
        let a = random_acceptor(&mut rng, &table, &sigma);
        let words = all_words(&sigma, WORD_LEN);
        let expected = language(&a, &words);
        let d = determinize(&a).unwrap();
        let m = minimize(&a).unwrap();
        check(language(&d, &words) == expected, || format!("seed {seed}: determinize changed the language"))?;
        check(language(&m, &words) == expected, || format!("seed {seed}: minimize changed the language"))?;
        let c = complement(&a, &sigma.iter().copied().collect()).unwrap();
        check(is_empty(&intersect(&a, &c).unwrap()), || format!("seed {seed}: a ∩ ¬a not empty"))?;
    }
    Ok(format!("{RANDOM_ACCEPTORS} acceptors, 0 violations"))
}

fn composition_oracle() -> Outcome {
    let mut with_eps = 0;
    for seed in 0..RANDOM_COMPOSE_PAIRS {
        let (mut rng, table, sigma) = setup(40_000 + seed);
        let a = random_dag(&mut rng, &table, &sigma);
        let b = random_dag(&mut rng, &table, &sigma);
        if a.all_arcs().chain(b.all_arcs()).any(|(_, x)| x.input.is_epsilon() || x.output.is_epsilon()) {
            with_eps += 1;
        }
        let c = compose(&a, &b).unwrap();
        let paths = enumerate_paths(&c, ENUMERATION_LEN, ENUMERATION_COUNT);
        check(!paths.truncated, || format!("seed {seed}: enumeration truncated"))?;
        let got: Rel = paths.pairs.into_iter().collect();
        check(got == join(&relation(&a), &relation(&b)), || format!("seed {seed}: compose differs from join"))?;
    }
    check(with_eps > 0, || "no epsilon cases generated".into())?;
    Ok(format!("{RANDOM_COMPOSE_PAIRS} pairs ({with_eps} with epsilon arcs), 0 violations"))
}

fn orthography() -> Outcome {
    let (mut ped, _) = build(Mode::Pedagogical);
    let alphabet = ped.generator.side_alphabet(Side::Output);
    let filter = build_orthography_filter(&mut ped.table, &config(Mode::Pedagogical).ortho, &alphabet).unwrap();
    let input: Vec<SymbolId> = "kuẹʹtt".chars().map(|c| ped.table.get(&c.to_string()).unwrap()).collect();
    let mapped: BTreeSet<String> = apply(&filter, &input).iter().map(|o| ped.table.render(o)).collect();
    check(mapped == set(&["kueʹtt"]), || format!("filter gives {mapped:?}"))?;

    let paths = enumerate_paths(&ped.generator, ENUMERATION_LEN, ENUMERATION_COUNT);
    let mut pairs = 0;
    for (_, s) in &paths.pairs {
        let surface = ped.table.render(s);
        if !surface.contains('ẹ') {
            continue;
        }
        pairs += 1;
        let norm = surface.replace('ẹ', "e");
        let (a, b) = (ped.analyze(&surface).unwrap(), ped.analyze(&norm).unwrap());
        check(!a.is_empty() && a == b, || format!("{surface} {a:?} vs {norm} {b:?}"))?;
    }
    check(pairs > 0, || "no pedagogical spellings in the fixture".into())?;

    let (norm, _) = build(Mode::Normative);
    let paths = enumerate_paths(&norm.generator, ENUMERATION_LEN, ENUMERATION_COUNT);
    let bad: Vec<String> = paths
        .outputs()
        .into_iter()
        .map(|s| norm.table.render(s))
        .filter(|s| s.contains('ẹ'))
        .collect();
    check(bad.is_empty(), || format!("normative surfaces with ẹ: {bad:?}"))?;
    check(generated(&norm, "kueʹtt+N+Sg+Nom") == set(&["kueʹtt"]), || "normative kueʹtt".into())?;
    Ok(format!("kuẹʹtt -> kueʹtt; {pairs} two-spelling forms agree; {} normative forms without ẹ", paths.pairs.len()))
}

fn mutation_sensitivity() -> Outcome {
    let cases = parse_suite(&fixture("sms.yaml")).unwrap();
    let (p, _) = build(Mode::Pedagogical);
    let base = run_suite(&p, &cases, Directions::Both);
    check(base.all_passed(), || format!("unmutated suite fails:\n{}", base.to_text()))?;

    let mut table = SymbolTable::new();
    let names: Vec<String> = {
        lexc::parse_lexc(&fixture("sms.lexc"), &mut table).unwrap();
        parse_twol(&fixture("sms.twol"), &mut table).unwrap().rules.iter().map(|r| r.name.clone()).collect()
    };
    let mut survivors = Vec::new();
    let mut unbuildable = 0;
    for name in &names {
        let mut table = SymbolTable::new();
        let ast = lexc::parse_lexc(&fixture("sms.lexc"), &mut table).unwrap();
        let rules = parse_twol(&fixture("sms.twol"), &mut table).unwrap().without(name);
        let lexicon = lexc::compile_lexicon(&ast, &table);
        let glosses = lexc::extract_glosses(&ast, &table);
        // A pipeline that cannot even be built counts as a failing suite.
        let Ok(p) = build_pipeline(table, lexicon, &rules, glosses, &config(Mode::Pedagogical)) else {
            unbuildable += 1;
            continue;
        };
        if run_suite(&p, &cases, Directions::Both).all_passed() {
            survivors.push(name.clone());
        }
    }
    check(survivors.is_empty(), || format!("suite still passes without {survivors:?}"))?;
    Ok(format!(
        "{} rules, every deletion caught ({unbuildable} by an empty pipeline); unmutated suite 100% both directions",
        names.len()
    ))
}

/// Independent count: walks continuation lexicons directly.
fn ast_analyses(ast: &LexiconAst) -> BTreeSet<Vec<SymbolId>> {
    fn walk(ast: &LexiconAst, lex: &str, prefix: &mut Vec<SymbolId>, out: &mut BTreeSet<Vec<SymbolId>>) {
        for e in &ast.lexicons[lex] {
            let n = prefix.len();
            prefix.extend(e.analysis.iter().filter(|s| !s.is_epsilon()));
            if e.contlex == "#" {
                out.insert(prefix.clone());
            } else {
                walk(ast, &e.contlex, prefix, out);
            }
            prefix.truncate(n);
        }
    }
    let mut out = BTreeSet::new();
    walk(ast, "Root", &mut Vec::new(), &mut out);
    out
}

fn stats_table() -> Outcome {
    let (p, ast) = build(Mode::Pedagogical);
    let stats = coverage_stats(&ast, &p, StatsBounds::default());
    check(!stats.truncated, || "fixture stats truncated".into())?;

    let is_tag = |s: SymbolId| {
        let t = p.table.text(s);
        t.len() > 1 && t.starts_with('+')
    };
    let pos_list = ["+N", "+V", "+A", "+Adv", "+Num", "+Pron", "+Pcle", "+Interj", "+CC", "+CS", "+Pr", "+Po", "+Det"];
    let mut lemmas: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut cells: BTreeMap<String, BTreeSet<Vec<SymbolId>>> = BTreeMap::new();
    let mut forms: BTreeMap<String, usize> = BTreeMap::new();
    for a in ast_analyses(&ast) {
        let cut = a.iter().position(|&s| is_tag(s)).unwrap_or(a.len());
        let Some(&first) = a.get(cut) else { continue };
        let pos = p.table.text(first).to_string();
        if !pos_list.contains(&pos.as_str()) {
            continue;
        }
        let lemma: String = a[..cut].iter().map(|&s| p.table.text(s)).collect();
        *forms.entry(pos.clone()).or_default() += p.generate(&p.table.render(&a)).unwrap().len();
        lemmas.entry(pos.clone()).or_default().insert(lemma);
        cells.entry(pos).or_default().insert(a[cut..].to_vec());
    }
    let mut glossed_keys = BTreeSet::new();
    for (_, e) in ast.entries() {
        if e.gloss.is_some() {
            let cut = e.analysis.iter().position(|&s| is_tag(s)).unwrap_or(e.analysis.len());
            let lemma: String = e.analysis[..cut].iter().map(|&s| p.table.text(s)).collect();
            if let Some(&pos) = e.analysis.get(cut) {
                glossed_keys.insert((lemma, p.table.text(pos).to_string()));
            }
        }
    }
    check(stats.by_pos.keys().eq(lemmas.keys()), || format!("POS mismatch: {:?}", stats.by_pos.keys()))?;
    for (pos, ls) in &lemmas {
        let s = &stats.by_pos[pos];
        let glossed = ls.iter().filter(|l| glossed_keys.contains(&(l.to_string(), pos.clone()))).count();
        let der = cells[pos]
            .iter()
            .filter(|tags| tags.iter().any(|&t| p.table.text(t) == "+Dimin" || p.table.text(t).starts_with("+Der")))
            .count();
        let want = (ls.len(), glossed, ls.len() - glossed, cells[pos].len() - der, der, forms[pos]);
        let got = (s.lemmas, s.glossed, s.unglossed, s.inflections, s.derivations, s.forms);
        check(got == want, || format!("{pos}: got {got:?}, oracle {want:?}"))?;
        check(s.glossed + s.unglossed == s.lemmas, || format!("{pos}: glossed + unglossed != lemmas"))?;
    }
    let rendered = stats.to_string();
    let header: Vec<&str> = rendered.lines().next().unwrap_or("").split("  ").map(str::trim).filter(|s| !s.is_empty()).collect();
    check(
        header[..5] == ["Word Class", "glossed", "unglossed", "inflections", "derivations"],
        || format!("header {header:?}"),
    )?;
    let n = &stats.by_pos["+N"];
    Ok(format!(
        "columns match; nouns {} lemmas ({} glossed), {} inflections, {} derivations, {} forms",
        n.lemmas, n.glossed, n.inflections, n.derivations, n.forms
    ))
}

fn att_round_trip() -> Outcome {
    let (p, _) = build(Mode::Pedagogical);
    let machines = [("generator", &p.generator), ("analyzer", &p.recognizer), ("lexicon", &p.lexicon), ("rules", &p.rules)];
    for (name, m) in machines {
        let first = write_att(m, &p.table);
        let mut same = SymbolTable::from_tsv(&p.table.to_tsv()).unwrap();
        let second = write_att(&read_att(&first, &mut same).map_err(|e| e.to_string())?, &same);
        check(first == second, || format!("{name}: export differs after import"))?;
        let mut fresh = SymbolTable::new();
        let third = write_att(&read_att(&first, &mut fresh).map_err(|e| e.to_string())?, &fresh);
        check(first == third, || format!("{name}: export differs after import into a fresh table"))?;
    }
    Ok("generator, analyzer, lexicon, rules byte-identical".into())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("paper-form reproduction", paper_forms),
        ("allegro/largo variation", allegro_largo),
        ("inversion property", inversion),
        ("rule-compiler soundness", rule_soundness),
        ("strategy equivalence", strategy_equivalence),
        ("acceptor algebra", acceptor_algebra),
        ("composition oracle", composition_oracle),
        ("orthography filter", orthography),
        ("test harness sensitivity", mutation_sensitivity),
        ("stats table", stats_table),
        ("AT&T round-trip", att_round_trip),
    ];
    let mut failed = Vec::new();
    for (n, (name, f)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", n + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL {name}: {why}", n + 1);
                failed.push(n + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
