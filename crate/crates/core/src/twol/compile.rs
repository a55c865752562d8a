use std::collections::BTreeSet;
use std::str::FromStr;

use rayon::prelude::*;

use super::{Context, FeasiblePairs, Op, RuleSet, TwolError, TwolErrorKind, TwolRule};
use crate::fst::{
    complement, concat_all, difference, intersect, intersect_all, is_empty, minimize,
    reversed_intersect, union_all, Transducer,
};
use crate::symtab::{SymbolId, SymbolTable, TableId};

/// Brackets the center occurrence while compiling `=>`. Never interned.
const MARKER: SymbolId = SymbolId(u32::MAX);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Direct,
    Reversed,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "direct" => Ok(Strategy::Direct),
            "reversed" => Ok(Strategy::Reversed),
            _ => Err(format!("unknown strategy {s:?} (expected direct or reversed)")),
        }
    }
}

struct Env {
    table: TableId,
    pi: BTreeSet<SymbolId>,
    pi_star: Transducer,
}

impl Env {
    fn new(alphabet: &FeasiblePairs, table: TableId) -> Self {
        let pi = alphabet.ids();
        let pi_star = Transducer::universal(table, pi.iter().copied());
        Env { table, pi, pi_star }
    }

    fn class(&self, ids: impl IntoIterator<Item = SymbolId>) -> Transducer {
        Transducer::symbol_class(self.table, ids)
    }

    /// Left and right context languages, extended by Π* at unanchored edges.
    fn contexts(&self, ctx: &Context) -> Result<(Transducer, Transducer), TwolError> {
        let l = ctx.left.compile(self.table)?;
        let r = ctx.right.compile(self.table)?;
        let lc = if ctx.left_anchored { l } else { concat_all([&self.pi_star, &l])? };
        let rc = if ctx.right_anchored { r } else { concat_all([&r, &self.pi_star])? };
        Ok((lc, rc))
    }

    fn restrict(&self, rule: &TwolRule, center: SymbolId) -> Result<Transducer, TwolError> {
        let m = Transducer::acceptor(self.table, &[MARKER]);
        let c = self.class([center]);
        let marked = concat_all([&m, &c, &m])?;
        let all = concat_all([&self.pi_star, &marked, &self.pi_star])?;
        let mut licensed = Vec::new();
        for ctx in &rule.contexts {
            let (lc, rc) = self.contexts(ctx)?;
            licensed.push(concat_all([&lc, &marked, &rc])?);
        }
        let bad = difference(&minimize(&all)?, &minimize(&union_all(&licensed)?)?)?;
        let unmarked = bad.map_labels(|i, o| {
            if i == MARKER {
                (SymbolId::EPSILON, SymbolId::EPSILON)
            } else {
                (i, o)
            }
        });
        Ok(complement(&unmarked, &self.pi)?)
    }

    fn forbid(&self, rule: &TwolRule, pairs: &BTreeSet<SymbolId>) -> Result<Transducer, TwolError> {
        if pairs.is_empty() {
            return Ok(self.pi_star.clone());
        }
        let c = self.class(pairs.iter().copied());
        let mut bad = Vec::new();
        for ctx in &rule.contexts {
            let (lc, rc) = self.contexts(ctx)?;
            bad.push(concat_all([&lc, &c, &rc])?);
        }
        Ok(complement(&union_all(&bad)?, &self.pi)?)
    }
}

/// Compiles one rule to a minimal acceptor over the pair symbols of
/// `alphabet`.
pub fn compile_rule(rule: &TwolRule, alphabet: &FeasiblePairs, table: TableId) -> Result<Transducer, TwolError> {
    let (a, b) = rule.center;
    let center = alphabet.find(a, b).ok_or_else(|| {
        TwolError::new(rule.line, TwolErrorKind::InfeasiblePair(format!("center of {:?}", rule.name)))
    })?;
    if rule.contexts.is_empty() {
        return Err(TwolError::new(rule.line, TwolErrorKind::EmptyContexts(rule.name.clone())));
    }
    let env = Env::new(alphabet, table);
    let coerced = || {
        let mut others = alphabet.with_lexical(a);
        others.remove(&center);
        env.forbid(rule, &others)
    };
    let machine = match rule.op {
        Op::Restrict => env.restrict(rule, center)?,
        Op::Coerce => coerced()?,
        Op::Both => intersect(&minimize(&env.restrict(rule, center)?)?, &minimize(&coerced()?)?)?,
        Op::Exclude => env.forbid(rule, &BTreeSet::from([center]))?,
    };
    Ok(minimize(&machine)?)
}

/// Compiles every rule, in parallel, preserving rule order.
pub fn compile_rules(rules: &RuleSet, table: TableId) -> Result<Vec<Transducer>, TwolError> {
    rules
        .rules
        .par_iter()
        .map(|r| compile_rule(r, &rules.alphabet, table))
        .collect()
}

#[derive(Debug, Clone)]
pub struct Combined {
    pub acceptor: Transducer,
    pub warnings: Vec<String>,
}

/// Intersects all rule acceptors. Contradictions are reported as warnings.
pub fn combine_rules(rules: &RuleSet, table: &SymbolTable, strategy: Strategy) -> Result<Combined, TwolError> {
    let env = Env::new(&rules.alphabet, table.id());
    let compiled = compile_rules(rules, table.id())?;
    let acceptor = if compiled.is_empty() {
        minimize(&env.pi_star)?
    } else {
        match strategy {
            Strategy::Direct => intersect_all(&compiled)?,
            Strategy::Reversed => reversed_intersect(&compiled)?,
        }
    };
    let mut warnings = Vec::new();
    if is_empty(&acceptor) {
        warnings.push("rules are contradictory: no pair string satisfies all of them".to_string());
    } else {
        // Every state of a trimmed machine lies on an accepting path, so a
        // pair can occur exactly when some arc carries it.
        let used: BTreeSet<SymbolId> = acceptor.all_arcs().map(|(_, a)| a.input).collect();
        let mut seen = BTreeSet::new();
        for rule in &rules.rules {
            let Some(center) = rules.alphabet.find(rule.center.0, rule.center.1) else { continue };
            if seen.insert(center) && !used.contains(&center) {
                warnings.push(format!(
                    "rules are contradictory: pair {} can never occur (rule {:?})",
                    table.text(center),
                    rule.name
                ));
            }
        }
    }
    Ok(Combined { acceptor, warnings })
}

/// Reads each pair-symbol arc `a:b` as input `a`, output `b`.
pub fn pairs_to_transducer(acceptor: &Transducer, table: &SymbolTable) -> Result<Transducer, TwolError> {
    let mut bad = None;
    let t = acceptor.map_labels(|i, o| {
        if i.is_epsilon() {
            return (i, o);
        }
        match table.pair_components(i) {
            Some(p) => p,
            None => {
                bad.get_or_insert(i);
                (i, o)
            }
        }
    });
    match bad {
        Some(id) => Err(TwolError::new(0, TwolErrorKind::NotAPair(id))),
        None => Ok(t),
    }
}
