//! Direct evaluation of rule semantics on a pair string. Shares nothing with
//! the automaton compiler beyond the regex AST.

use super::{Context, FeasiblePairs, Op, TwolError, TwolErrorKind, TwolRule};
use crate::symtab::SymbolId;

fn holds(ctx: &Context, s: &[SymbolId], i: usize) -> bool {
    let left = if ctx.left_anchored {
        ctx.left.ends(s, 0).contains(&i)
    } else {
        (0..=i).any(|j| ctx.left.ends(s, j).contains(&i))
    };
    if !left {
        return false;
    }
    let ends = ctx.right.ends(s, i + 1);
    if ctx.right_anchored {
        ends.contains(&s.len())
    } else {
        !ends.is_empty()
    }
}

/// True when `s`, a string of feasible pair symbols, satisfies `rule`.
pub fn check_rule(rule: &TwolRule, alphabet: &FeasiblePairs, s: &[SymbolId]) -> Result<bool, TwolError> {
    let pairs = s
        .iter()
        .map(|&id| {
            alphabet
                .components(id)
                .ok_or_else(|| TwolError::new(0, TwolErrorKind::InfeasiblePair(format!("#{}", id.0))))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (a, b) = rule.center;
    let licensed = |i: usize| rule.contexts.iter().any(|c| holds(c, s, i));
    let restrict = || (0..s.len()).all(|i| pairs[i] != (a, b) || licensed(i));
    let coerce = || (0..s.len()).all(|i| pairs[i].0 != a || pairs[i].1 == b || !licensed(i));
    let exclude = || (0..s.len()).all(|i| pairs[i] != (a, b) || !licensed(i));
    Ok(match rule.op {
        Op::Restrict => restrict(),
        Op::Coerce => coerce(),
        Op::Both => restrict() && coerce(),
        Op::Exclude => exclude(),
    })
}
