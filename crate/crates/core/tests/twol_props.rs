mod common;

use common::*;
use morphfst::fst::{equivalent_acceptors, intersect, is_empty};
use morphfst::twol::{check_rule, combine_rules, compile_rule, Op, Strategy};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn compiled_rule_agrees_with_oracle(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (table, pairs) = random_alphabet(&mut rng);
        let rule = random_rule(&mut rng, &pairs, "r");
        let t = compile_rule(&rule, &pairs, table.id()).unwrap();
        for _ in 0..20 {
            let s = random_pair_string(&mut rng, &pairs, 6);
            prop_assert_eq!(accepts(&t, &s), check_rule(&rule, &pairs, &s).unwrap(), "{:?} on {:?}", rule, s);
        }
    }

    #[test]
    fn both_is_restrict_and_coerce(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (table, pairs) = random_alphabet(&mut rng);
        let mut rule = random_rule(&mut rng, &pairs, "r");
        rule.op = Op::Both;
        let both = compile_rule(&rule, &pairs, table.id()).unwrap();
        rule.op = Op::Restrict;
        let r = compile_rule(&rule, &pairs, table.id()).unwrap();
        rule.op = Op::Coerce;
        let c = compile_rule(&rule, &pairs, table.id()).unwrap();
        prop_assert!(equivalent_acceptors(&both, &intersect(&r, &c).unwrap(), 6).unwrap());
    }

    #[test]
    fn strategies_agree_and_rules_only_narrow(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (table, pairs) = random_alphabet(&mut rng);
        let rs = random_ruleset(&mut rng, &pairs, 3);
        let direct = combine_rules(&rs, &table, Strategy::Direct).unwrap().acceptor;
        let reversed = combine_rules(&rs, &table, Strategy::Reversed).unwrap().acceptor;
        prop_assert!(equivalent_acceptors(&direct, &reversed, 8).unwrap());
        let fewer = combine_rules(&rs.without("r0"), &table, Strategy::Direct).unwrap().acceptor;
        let extra = morphfst::fst::difference(&direct, &fewer).unwrap();
        prop_assert!(is_empty(&extra));
    }

    #[test]
    fn compiled_rules_are_minimal_dfas(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (table, pairs) = random_alphabet(&mut rng);
        let rule = random_rule(&mut rng, &pairs, "r");
        let t = compile_rule(&rule, &pairs, table.id()).unwrap();
        prop_assert!(morphfst::fst::is_deterministic(&t));
        prop_assert_eq!(morphfst::fst::minimize(&t).unwrap().num_states(), t.num_states());
    }
}
