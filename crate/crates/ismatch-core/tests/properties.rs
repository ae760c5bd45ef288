//! Property tests for the invariants the modules promise.

use ismatch_core::baselines::{
    jaccard, monge_elkan, soft_tfidf, tfidf_cosine, token_levenshtein, TfidfWeights,
};
use ismatch_core::char_metrics::{jaro, jaro_winkler};
use ismatch_core::hybrid::{hybrid_distance, hybrid_similarity, MatchParams};
use ismatch_core::{normalize_name, FrequencyTable, NormalizationRules, TokenizedName};
use proptest::prelude::*;

const PARAM_GRID: [f64; 6] = [0.0, 0.1, 0.3, 0.5, 0.7, 1.0];

fn raw_name_fragment() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec![
        "د.",
        "أ.د.",
        "السيد",
        "دكتور",
        "م.",
        "/د",
        "عبد",
        "الدين",
        "أحمد",
        "محمد",
        "مصطفي",
        "على",
        "نور",
        "إبراهيم",
        "حسن",
        "محمود",
        "آمال",
        "حسين",
        "فوزي",
        "،",
        "-",
        ".",
    ])
}

fn raw_name() -> impl Strategy<Value = String> {
    (
        prop::collection::vec(raw_name_fragment(), 0..8),
        prop::collection::vec(prop::sample::select(vec![" ", "  ", " \t "]), 0..8),
    )
        .prop_map(|(frags, seps)| {
            let mut out = String::new();
            for (i, f) in frags.iter().enumerate() {
                out.push_str(f);
                out.push_str(seps.get(i).copied().unwrap_or(" "));
            }
            out
        })
}

fn token() -> impl Strategy<Value = String> {
    prop::sample::select(vec![
        "محمد",
        "احمد",
        "حسن",
        "زرياب",
        "فوزى",
        "نادر",
        "كامل",
        "سالم",
    ])
    .prop_map(str::to_string)
}

fn tokenized_name(max_len: usize) -> impl Strategy<Value = TokenizedName> {
    prop::collection::vec(token(), 1..=max_len)
        .prop_map(|tokens| TokenizedName::new(tokens).expect("valid tokens"))
}

fn frequency_table() -> impl Strategy<Value = FrequencyTable> {
    prop::collection::btree_map(token(), 0.005f64..0.2, 1..6)
        .prop_map(|m| FrequencyTable::from_entries(m).expect("proportions in range"))
}

fn unit_param() -> impl Strategy<Value = f64> {
    prop::sample::select(PARAM_GRID.to_vec())
}

proptest! {
    #[test]
    fn normalization_is_idempotent(raw in raw_name()) {
        let rules = NormalizationRules::default();
        let once = normalize_name(&raw, &rules);
        let twice = normalize_name(&once.joined(), &rules);
        prop_assert_eq!(&once, &twice, "raw input: {:?}", raw);
    }

    #[test]
    fn normalized_tokens_carry_no_variant_characters(raw in raw_name()) {
        let rules = NormalizationRules::default();
        for token in normalize_name(&raw, &rules).tokens() {
            prop_assert!(!token.is_empty());
            prop_assert!(!token.chars().any(char::is_whitespace));
            prop_assert!(!token.contains(['أ', 'إ', 'آ']), "token {:?}", token);
            prop_assert!(!token.ends_with('ي'), "token {:?}", token);
        }
    }

    #[test]
    fn jaro_family_bounds_and_symmetry(a in "[a-d]{0,6}", b in "[a-d]{0,6}") {
        let j = jaro(&a, &b);
        prop_assert!((0.0..=1.0).contains(&j));
        prop_assert!((j - jaro(&b, &a)).abs() < 1e-12);
        let jw = jaro_winkler(&a, &b, 0.1).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&jw));
        prop_assert!(jw >= j - 1e-12, "winkler must not fall below jaro");
        prop_assert!((jw - jaro_winkler(&b, &a, 0.1).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn hybrid_similarity_range_and_identity(
        a in tokenized_name(5),
        b in tokenized_name(5),
        alpha in unit_param(),
        beta in unit_param(),
        theta in unit_param(),
        table in frequency_table(),
    ) {
        let params = MatchParams::new(alpha, beta, theta).unwrap();
        let sim = hybrid_similarity(&a, &b, &params, &table).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&sim), "similarity {} out of range", sim);
        let self_sim = hybrid_similarity(&a, &a, &params, &table).unwrap();
        prop_assert!((self_sim - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hybrid_similarity_monotone_in_each_parameter(
        a in tokenized_name(5),
        b in tokenized_name(5),
        fixed in unit_param(),
        other in unit_param(),
        table in frequency_table(),
    ) {
        // Non-decreasing in theta.
        let sims: Vec<f64> = PARAM_GRID
            .iter()
            .map(|&theta| {
                let p = MatchParams::new(fixed, other, theta).unwrap();
                hybrid_similarity(&a, &b, &p, &table).unwrap()
            })
            .collect();
        for w in sims.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12, "theta monotonicity violated: {:?}", sims);
        }
        // Non-increasing in beta.
        let sims: Vec<f64> = PARAM_GRID
            .iter()
            .map(|&beta| {
                let p = MatchParams::new(fixed, beta, other).unwrap();
                hybrid_similarity(&a, &b, &p, &table).unwrap()
            })
            .collect();
        for w in sims.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12, "beta monotonicity violated: {:?}", sims);
        }
        // Non-decreasing in alpha.
        let sims: Vec<f64> = PARAM_GRID
            .iter()
            .map(|&alpha| {
                let p = MatchParams::new(alpha, fixed, other).unwrap();
                hybrid_similarity(&a, &b, &p, &table).unwrap()
            })
            .collect();
        for w in sims.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12, "alpha monotonicity violated: {:?}", sims);
        }
    }

    #[test]
    fn token_levenshtein_is_the_degenerate_hybrid(
        a in tokenized_name(5),
        b in tokenized_name(5),
    ) {
        let h = hybrid_distance(&a, &b, &MatchParams::unit_cost(), &FrequencyTable::empty())
            .unwrap();
        prop_assert_eq!(h.cost, token_levenshtein(&a, &b) as f64);
    }

    #[test]
    fn jaccard_bounds_and_symmetry(a in tokenized_name(5), b in tokenized_name(5)) {
        let j = jaccard(&a, &b);
        prop_assert!((0.0..=1.0).contains(&j));
        prop_assert_eq!(j, jaccard(&b, &a));
        prop_assert_eq!(jaccard(&a, &a), 1.0);
    }

    #[test]
    fn monge_elkan_bounded_both_directions(a in tokenized_name(4), b in tokenized_name(4)) {
        let inner = |x: &str, y: &str| jaro_winkler(x, y, 0.1).unwrap();
        for (l, r) in [(&a, &b), (&b, &a)] {
            let s = monge_elkan(l, r, inner).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&s));
        }
    }

    #[test]
    fn soft_tfidf_with_exact_inner_theta_one_is_cosine(
        corpus in prop::collection::vec(tokenized_name(4), 2..8),
        qa in 0usize..8,
        qb in 0usize..8,
    ) {
        let weights = TfidfWeights::build(&corpus).unwrap();
        let a = &corpus[qa % corpus.len()];
        let b = &corpus[qb % corpus.len()];
        let exact = |x: &str, y: &str| if x == y { 1.0 } else { 0.0 };
        let soft = soft_tfidf(a, b, &weights, 1.0, exact);
        let cosine = tfidf_cosine(a, b, &weights);
        prop_assert!((soft - cosine).abs() < 1e-12);
    }

    #[test]
    fn frequency_table_proportions_sum_to_one(
        names in prop::collection::vec(tokenized_name(5), 1..10),
    ) {
        let table = FrequencyTable::from_names(&names).unwrap();
        let sum: f64 = table.iter().map(|(_, p)| p).sum();
        prop_assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn tfidf_cosine_bounded_and_symmetric(
        corpus in prop::collection::vec(tokenized_name(4), 2..8),
        qa in 0usize..8,
        qb in 0usize..8,
    ) {
        let weights = TfidfWeights::build(&corpus).unwrap();
        let a = &corpus[qa % corpus.len()];
        let b = &corpus[qb % corpus.len()];
        let ab = tfidf_cosine(a, b, &weights);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        prop_assert!((ab - tfidf_cosine(b, a, &weights)).abs() < 1e-12);
    }

    #[test]
    fn normalization_never_grows_token_count(raw in raw_name()) {
        let rules = NormalizationRules::default();
        let unified = ismatch_core::normalize::unify_characters(&raw, &rules);
        let split_count = unified.split_whitespace().count();
        let name = normalize_name(&raw, &rules);
        // Title stripping and composite joining only ever remove or
        // merge tokens after the whitespace split.
        prop_assert!(name.token_count() <= split_count);
        let joined = ismatch_core::normalize::join_composites(&name, &rules);
        prop_assert!(joined.token_count() <= name.token_count());
    }
}
