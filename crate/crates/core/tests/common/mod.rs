//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use morphfst::fst::{Arc, StateId, Transducer};
use morphfst::symtab::{SymbolId, SymbolTable};
use morphfst::twol::{Context, FeasiblePairs, Op, Regex, RuleSet, TwolRule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rel = BTreeSet<(Vec<SymbolId>, Vec<SymbolId>)>;

pub fn table(n: usize) -> (SymbolTable, Vec<SymbolId>) {
    let mut t = SymbolTable::new();
    let ids = ('a'..).take(n).map(|c| t.intern(&c.to_string()).unwrap()).collect();
    (t, ids)
}

pub fn label(rng: &mut ChaCha8Rng, sigma: &[SymbolId], eps: bool) -> SymbolId {
    if eps && rng.gen_bool(0.25) {
        SymbolId::EPSILON
    } else {
        sigma[rng.gen_range(0..sigma.len())]
    }
}

/// Acyclic transducer: arcs only go to higher-numbered states.
pub fn random_dag(rng: &mut ChaCha8Rng, table: &SymbolTable, sigma: &[SymbolId]) -> Transducer {
    let n = rng.gen_range(1..=4);
    let mut t = Transducer::new(table.id());
    for _ in 1..n {
        t.add_state();
    }
    for s in 0..n as StateId {
        t.set_final(s, rng.gen_bool(0.4));
        for d in s + 1..n as StateId {
            for _ in 0..rng.gen_range(0..=2) {
                let i = label(rng, sigma, true);
                let o = label(rng, sigma, true);
                t.add_arc(s, Arc::new(i, o, d));
            }
        }
    }
    t
}

/// Possibly cyclic acceptor with epsilon arcs.
pub fn random_acceptor(rng: &mut ChaCha8Rng, table: &SymbolTable, sigma: &[SymbolId]) -> Transducer {
    let n = rng.gen_range(1..=5);
    let mut t = Transducer::new(table.id());
    for _ in 1..n {
        t.add_state();
    }
    for s in 0..n as StateId {
        t.set_final(s, rng.gen_bool(0.4));
        for _ in 0..rng.gen_range(0..=3) {
            let l = label(rng, sigma, true);
            t.add_arc(s, Arc::new(l, l, rng.gen_range(0..n as StateId)));
        }
    }
    t
}

/// Full relation of an acyclic machine by plain DFS.
pub fn relation(t: &Transducer) -> Rel {
    fn go(t: &Transducer, s: StateId, i: &mut Vec<SymbolId>, o: &mut Vec<SymbolId>, out: &mut Rel) {
        if t.is_final(s) {
            out.insert((i.clone(), o.clone()));
        }
        for a in t.arcs(s) {
            let (pi, po) = (!a.input.is_epsilon(), !a.output.is_epsilon());
            if pi {
                i.push(a.input);
            }
            if po {
                o.push(a.output);
            }
            go(t, a.target, i, o, out);
            if pi {
                i.pop();
            }
            if po {
                o.pop();
            }
        }
    }
    let mut out = Rel::new();
    if t.num_states() > 0 {
        go(t, t.start(), &mut Vec::new(), &mut Vec::new(), &mut out);
    }
    out
}

pub fn join(a: &Rel, b: &Rel) -> Rel {
    let mut out = Rel::new();
    for (x, y) in a {
        for (y2, z) in b {
            if y == y2 {
                out.insert((x.clone(), z.clone()));
            }
        }
    }
    out
}

/// NFA membership by simulation with epsilon closure.
pub fn accepts(t: &Transducer, word: &[SymbolId]) -> bool {
    let close = |set: &mut HashSet<StateId>| {
        let mut stack: Vec<StateId> = set.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for a in t.arcs(s) {
                if a.input.is_epsilon() && set.insert(a.target) {
                    stack.push(a.target);
                }
            }
        }
    };
    if t.num_states() == 0 {
        return false;
    }
    let mut cur = HashSet::from([t.start()]);
    close(&mut cur);
    for &c in word {
        let mut next = HashSet::new();
        for &s in &cur {
            for a in t.arcs(s) {
                if a.input == c {
                    next.insert(a.target);
                }
            }
        }
        close(&mut next);
        cur = next;
    }
    cur.iter().any(|&s| t.is_final(s))
}

pub fn all_words(sigma: &[SymbolId], max_len: usize) -> Vec<Vec<SymbolId>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &c in sigma {
                let mut v: Vec<SymbolId> = w.clone();
                v.push(c);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn language(t: &Transducer, words: &[Vec<SymbolId>]) -> Vec<bool> {
    words.iter().map(|w| accepts(t, w)).collect()
}

pub fn setup(seed: u64) -> (ChaCha8Rng, SymbolTable, Vec<SymbolId>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=3);
    let (table, sigma) = table(k);
    (rng, table, sigma)
}


/// A random feasible-pair alphabet: identities plus a few substitutions and
/// deletions over 2..=4 symbols.
pub fn random_alphabet(rng: &mut ChaCha8Rng) -> (SymbolTable, FeasiblePairs) {
    let (mut table, sigma) = table(rng.gen_range(2..=4));
    let mut pairs = FeasiblePairs::new();
    for &s in &sigma {
        pairs.insert(&mut table, s, s).unwrap();
    }
    for _ in 0..rng.gen_range(1..=3) {
        let u = sigma[rng.gen_range(0..sigma.len())];
        let l = if rng.gen_bool(0.3) { SymbolId::EPSILON } else { sigma[rng.gen_range(0..sigma.len())] };
        pairs.insert(&mut table, u, l).unwrap();
    }
    (table, pairs)
}

pub fn random_regex(rng: &mut ChaCha8Rng, pi: &[SymbolId], depth: usize) -> Regex {
    let class = |rng: &mut ChaCha8Rng| {
        let mut c = BTreeSet::new();
        for _ in 0..rng.gen_range(1..=2) {
            c.insert(pi[rng.gen_range(0..pi.len())]);
        }
        Regex::Class(c)
    };
    if depth == 0 {
        return if rng.gen_bool(0.2) { Regex::empty() } else { class(rng) };
    }
    match rng.gen_range(0..7) {
        0 | 1 => class(rng),
        2 => Regex::Seq((0..rng.gen_range(0..=2)).map(|_| random_regex(rng, pi, depth - 1)).collect()),
        3 => Regex::Alt((0..2).map(|_| random_regex(rng, pi, depth - 1)).collect()),
        4 => Regex::Star(Box::new(random_regex(rng, pi, depth - 1))),
        5 => Regex::Plus(Box::new(random_regex(rng, pi, depth - 1))),
        _ => Regex::Opt(Box::new(random_regex(rng, pi, depth - 1))),
    }
}

pub fn random_rule(rng: &mut ChaCha8Rng, pairs: &FeasiblePairs, name: &str) -> TwolRule {
    let all: Vec<(SymbolId, SymbolId, SymbolId)> = pairs.iter().collect();
    let pi: Vec<SymbolId> = all.iter().map(|p| p.0).collect();
    let (_, u, l) = all[rng.gen_range(0..all.len())];
    let op = [Op::Restrict, Op::Coerce, Op::Both, Op::Exclude][rng.gen_range(0..4)];
    let contexts = (0..rng.gen_range(1..=2))
        .map(|_| Context {
            left: random_regex(rng, &pi, 2),
            right: random_regex(rng, &pi, 2),
            left_anchored: rng.gen_bool(0.2),
            right_anchored: rng.gen_bool(0.2),
        })
        .collect();
    TwolRule { name: name.to_string(), center: (u, l), op, contexts, line: 0 }
}

pub fn random_ruleset(rng: &mut ChaCha8Rng, pairs: &FeasiblePairs, max_rules: usize) -> RuleSet {
    RuleSet {
        alphabet: pairs.clone(),
        sets: Default::default(),
        rules: (0..rng.gen_range(1..=max_rules)).map(|i| random_rule(rng, pairs, &format!("r{i}"))).collect(),
    }
}

pub fn random_pair_string(rng: &mut ChaCha8Rng, pairs: &FeasiblePairs, max_len: usize) -> Vec<SymbolId> {
    let pi: Vec<SymbolId> = pairs.ids().into_iter().collect();
    (0..rng.gen_range(0..=max_len)).map(|_| pi[rng.gen_range(0..pi.len())]).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
