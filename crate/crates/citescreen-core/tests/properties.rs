//! Property suites: invariants that must hold on randomly generated
//! inputs, with the synthetic generator serving as the corpus source.

use std::collections::BTreeSet;

use proptest::prelude::*;

use citescreen_core::author::{normalize_author, AliasMap};
use citescreen_core::corpus::{Corpus, EditorTenure, YearMonth};
use citescreen_core::metrics::{citation_series, h_index, h_index_series, HVariant};
use citescreen_core::pipeline::{
    collection_b, collection_c, run_pipeline_with_tenure, Classification,
};
use citescreen_core::stats::{chi_square, chi_square_pvalue, ContingencyTable};
use citescreen_core::synth::{author_name, generate, journal_name, CoercionConfig, SynthConfig};

// ---------------------------------------------------------------------------
// author normalization
// ---------------------------------------------------------------------------

fn name_strategy() -> impl Strategy<Value = String> {
    prop_oneof![
        // Name-shaped strings, with and without a comma.
        proptest::string::string_regex("[A-Za-zÀ-ÿĀ-ž' -]{1,16}(, [A-Za-zÀ-ÿ. -]{1,10})?")
            .unwrap(),
        // Anything at all, including exotic unicode.
        any::<String>(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn normalization_is_idempotent(raw in name_strategy()) {
        let aliases = AliasMap::new();
        if let Ok(once) = normalize_author(&raw, &aliases) {
            let twice = normalize_author(once.as_str(), &aliases)
                .expect("canonical keys stay normalizable");
            prop_assert_eq!(&twice, &once, "raw = {:?}", raw);
        }
    }
}

// ---------------------------------------------------------------------------
// h-index
// ---------------------------------------------------------------------------

/// Brute-force threshold scan, kept independent of the implementation.
fn h_oracle(counts: &[u64]) -> u64 {
    (0..=counts.len() as u64)
        .filter(|&h| counts.iter().filter(|&&c| c >= h).count() as u64 >= h)
        .max()
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn h_index_matches_brute_force(counts in proptest::collection::vec(0u64..10_000, 0..64)) {
        prop_assert_eq!(h_index(&counts), h_oracle(&counts));
    }
}

proptest! {
    #[test]
    fn h_index_is_permutation_invariant_and_bounded(
        counts in proptest::collection::vec(0u64..500, 0..80),
    ) {
        let h = h_index(&counts);
        let mut sorted = counts.clone();
        sorted.sort_unstable();
        let mut reversed = counts.clone();
        reversed.reverse();
        prop_assert_eq!(h_index(&sorted), h);
        prop_assert_eq!(h_index(&reversed), h);
        prop_assert!(h <= counts.len() as u64);
        prop_assert!(h <= counts.iter().copied().max().unwrap_or(0));
    }

    #[test]
    fn adding_a_citation_never_decreases_h(
        counts in proptest::collection::vec(0u64..500, 1..80),
        pick in any::<prop::sample::Index>(),
    ) {
        let h = h_index(&counts);
        let mut bumped = counts.clone();
        let i = pick.index(bumped.len());
        bumped[i] += 1;
        prop_assert!(h_index(&bumped) >= h);
    }
}

// ---------------------------------------------------------------------------
// pipeline chain on random corpora
// ---------------------------------------------------------------------------

prop_compose! {
    fn synth_config()(
        seed in any::<u64>(),
        n_authors in 2u32..24,
        n_journals in 1u32..6,
        n_years in 2u32..9,
        papers_per_year in 1u32..22,
        baseline_refs_mean in 0u32..7,
        special_issue_rate in 0.0f64..1.0,
        preferential in any::<bool>(),
        coerce in any::<bool>(),
        editor_pick in any::<u32>(),
        journal_pick in any::<u32>(),
        tenure_offset in 0u32..9,
        p in 0.0f64..1.0,
        k in 1u32..3,
        boost in 1.0f64..3.0,
    ) -> SynthConfig {
        let coercion = coerce.then(|| CoercionConfig {
            editor: format!("author{}", 1 + editor_pick % n_authors),
            journal_id: journal_name(1 + journal_pick % n_journals),
            tenure_start: YearMonth::new(1996 + (tenure_offset % n_years) as i32, 1).unwrap(),
            insertion_probability: p,
            items_per_insertion: k,
            special_issue_boost: boost,
        });
        SynthConfig {
            seed,
            n_authors,
            n_journals,
            n_years,
            papers_per_year,
            baseline_refs_mean,
            base_year: 1996,
            special_issue_rate,
            preferential,
            coercion,
        }
    }
}

fn transpose_holds(corpus: &Corpus) -> bool {
    // q ∈ references(p) ⟺ p ∈ reverse_index(q), for resolvable q.
    for p in corpus.publications() {
        for q in &p.references {
            if corpus.publication(q).is_some()
                && !corpus.citers_of(q).contains(&p.pub_id)
            {
                return false;
            }
        }
    }
    for p in corpus.publications() {
        for citer in corpus.citers_of(&p.pub_id) {
            let record = corpus.publication(citer).expect("citer resolves");
            if !record.references.contains(&p.pub_id) {
                return false;
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn chain_invariants_on_random_corpora(
        config in synth_config(),
        focal_pick in any::<u32>(),
        journal_pick in any::<u32>(),
        tenure_year_pick in any::<u32>(),
    ) {
        let (corpus, _truth) = match generate(&config) {
            Ok(generated) => generated,
            // A random coercion setup may demand more prior editor works
            // than exist; that error path has its own tests.
            Err(_) => return Ok(()),
        };

        prop_assert!(corpus.validate().is_clean());
        prop_assert!(transpose_holds(&corpus));

        let focal = author_name(1 + focal_pick % config.n_authors);
        let journal = journal_name(1 + journal_pick % config.n_journals);
        let tenure = EditorTenure {
            author: focal.clone(),
            journal_id: journal.clone(),
            role: "editor".into(),
            start: YearMonth::new(
                config.base_year + (tenure_year_pick % config.n_years) as i32,
                1,
            )
            .unwrap(),
            end: None,
        };
        let chain = run_pipeline_with_tenure(&corpus, &focal, &tenure).unwrap();

        // Monotone chain.
        let counts = chain.counts();
        prop_assert!(counts.collection_a >= counts.collection_b);
        prop_assert!(counts.collection_b >= counts.collection_c);
        prop_assert!(counts.collection_c >= counts.collection_d);
        prop_assert!(counts.collection_d >= counts.collection_e);

        // Every event of one citing document carries one classification,
        // and the classes partition Collection C.
        let mut class_of = std::collections::BTreeMap::new();
        for event in &chain.coll_b {
            let prev = class_of.insert(event.citing.clone(), event.classification);
            prop_assert!(prev.is_none_or(|p| p == event.classification));
        }
        let by_class = |c: Classification| -> BTreeSet<_> {
            class_of
                .iter()
                .filter(|(_, &cls)| cls == c)
                .map(|(id, _)| id.clone())
                .collect()
        };
        let selfs = by_class(Classification::SelfCitation);
        let semis = by_class(Classification::SemiSelfCitation);
        let indep = by_class(Classification::Independent);
        prop_assert_eq!(selfs.len() + semis.len() + indep.len(), chain.coll_c.len());
        let union: BTreeSet<_> = selfs.union(&semis).chain(indep.iter()).cloned().collect();
        prop_assert_eq!(&union, &chain.coll_c);

        // Step order D-then-E equals a single pass keeping independents.
        prop_assert_eq!(&chain.coll_e, &indep);
        let d_expected: BTreeSet<_> = chain.coll_c.difference(&selfs).cloned().collect();
        prop_assert_eq!(&chain.coll_d, &d_expected);

        // collection_c is idempotent: one representative event per citing
        // document dedups to the same set.
        let mut singletons = Vec::new();
        let mut seen = BTreeSet::new();
        for event in &chain.coll_b {
            if seen.insert(event.citing.clone()) {
                singletons.push(event.clone());
            }
        }
        prop_assert_eq!(&collection_c(&singletons), &chain.coll_c);

        // A tenure open since forever makes B exactly the in-journal part
        // of A.
        let open_tenure = EditorTenure {
            start: YearMonth::MIN,
            end: None,
            ..tenure.clone()
        };
        let open_b = collection_b(&chain.coll_a, &open_tenure);
        let in_journal: Vec<_> = chain
            .coll_a
            .iter()
            .filter(|e| e.citing_journal == journal)
            .cloned()
            .collect();
        prop_assert_eq!(open_b, in_journal);

        // Series invariants over the full corpus window.
        let last_year = config.base_year + config.n_years as i32 - 1;
        let years = config.base_year..=last_year;
        let all = h_index_series(&corpus, &focal, years.clone(), &HVariant::All);
        let excluding = h_index_series(
            &corpus,
            &focal,
            years.clone(),
            &HVariant::ExcludingJournal(journal.clone()),
        );
        let mut prev = 0;
        for year in years.clone() {
            prop_assert!(excluding.values[&year] <= all.values[&year]);
            prop_assert!(all.values[&year] >= prev);
            prev = all.values[&year];
        }
        let series = citation_series(&corpus, &focal, &journal, years);
        prop_assert_eq!(series.total() as usize, counts.collection_a);
    }
}

// ---------------------------------------------------------------------------
// chi-square
// ---------------------------------------------------------------------------

fn nonzero_table() -> impl Strategy<Value = Vec<Vec<u64>>> {
    (2usize..4, 2usize..5).prop_flat_map(|(rows, cols)| {
        proptest::collection::vec(
            proptest::collection::vec(1u64..150, cols..=cols),
            rows..=rows,
        )
    })
}

fn labelled(observed: Vec<Vec<u64>>) -> ContingencyTable {
    let rows = observed.len();
    let cols = observed[0].len();
    ContingencyTable::new(
        (0..rows).map(|r| format!("r{r}")).collect(),
        (0..cols).map(|c| format!("c{c}")).collect(),
        observed,
    )
    .unwrap()
}

proptest! {
    #[test]
    fn statistic_is_invariant_under_margin_permutations(observed in nonzero_table()) {
        let base = chi_square(&labelled(observed.clone()), 0.05).unwrap();

        let mut rows_swapped = observed.clone();
        rows_swapped.swap(0, 1);
        let swapped = chi_square(&labelled(rows_swapped), 0.05).unwrap();
        prop_assert!((base.statistic - swapped.statistic).abs() < 1e-9);

        let cols = observed[0].len();
        let mut cols_swapped = observed.clone();
        for row in &mut cols_swapped {
            row.swap(0, cols - 1);
        }
        let swapped = chi_square(&labelled(cols_swapped), 0.05).unwrap();
        prop_assert!((base.statistic - swapped.statistic).abs() < 1e-9);
    }

    #[test]
    fn scaling_cells_scales_the_statistic(observed in nonzero_table(), k in 2u64..6) {
        let base = chi_square(&labelled(observed.clone()), 0.05).unwrap();
        let scaled: Vec<Vec<u64>> = observed
            .iter()
            .map(|row| row.iter().map(|&v| v * k).collect())
            .collect();
        let scaled = chi_square(&labelled(scaled), 0.05).unwrap();
        prop_assert!(
            (scaled.statistic - k as f64 * base.statistic).abs()
                < 1e-7 * (1.0 + base.statistic.abs())
        );
    }

    #[test]
    fn statistic_is_zero_iff_observed_equals_expected(
        observed in nonzero_table(),
        row_weights in proptest::collection::vec(1u64..6, 2..4),
        col_weights in proptest::collection::vec(1u64..6, 2..5),
    ) {
        // Outer-product tables have observed == expected exactly.
        let product: Vec<Vec<u64>> = row_weights
            .iter()
            .map(|&r| col_weights.iter().map(|&c| r * c).collect())
            .collect();
        let result = chi_square(&labelled(product), 0.05).unwrap();
        prop_assert!(result.statistic.abs() < 1e-9);
        prop_assert!((result.p_value - 1.0).abs() < 1e-9);

        // Conversely, a vanishing statistic means every cell sits on its
        // expectation.
        let table = labelled(observed.clone());
        let result = chi_square(&table, 0.05).unwrap();
        if result.statistic < 1e-12 {
            let grand = table.grand_total() as f64;
            let row_totals = table.row_totals();
            let col_totals = table.col_totals();
            for (r, row) in observed.iter().enumerate() {
                for (c, &obs) in row.iter().enumerate() {
                    let expected = row_totals[r] as f64 * col_totals[c] as f64 / grand;
                    prop_assert!((obs as f64 - expected).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn df2_pvalue_matches_the_closed_form(x in 0.0f64..100.0) {
        prop_assert!((chi_square_pvalue(x, 2) - (-x / 2.0).exp()).abs() <= 1e-10);
    }
}

// ---------------------------------------------------------------------------
// dates
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn year_month_round_trips(year in -9999i32..9999, month in 1u8..=12) {
        let date = YearMonth::new(year, month).unwrap();
        let parsed: YearMonth = date.to_string().parse().unwrap();
        prop_assert_eq!(parsed, date);
        let json = serde_json::to_string(&date).unwrap();
        let back: YearMonth = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, date);
    }
}
