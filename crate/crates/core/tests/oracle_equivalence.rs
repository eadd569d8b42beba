// Copyright 2026 The gpar-miner Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Matcher and miner against the brute-force oracle on random small graphs.

mod common;

use gpar_miner::matcher::match_counts;
use gpar_miner::oracle::{oracle_counts, oracle_mine, oracle_pairs};
use gpar_miner::{all_templates, mine, MiningConfig, RelationId, Rule};
use num_rational::Ratio;
use rand::Rng;

#[test]
fn match_counts_equal_oracle_for_random_rules() {
    let mut rng = common::seeded(7);
    for case in 0..200 {
        let g = common::random_small_graph(&mut rng, 12, 40, 3);
        let injective = case % 2 == 0;
        let labels = g.relation_count() as u32;
        for t in all_templates() {
            let body: Vec<RelationId> = (0..t.body_len()).map(|_| RelationId(rng.random_range(0..labels))).collect();
            let Ok(rule) = Rule::new(*t, body, RelationId(rng.random_range(0..labels))) else { continue };
            let expected = oracle_counts(&g, &rule, injective).unwrap();
            let got = match_counts(&g, &rule, injective);
            assert_eq!(got, expected, "case {case} template {} injective {injective}", t.id);
            assert!(got.support <= got.pca_pairs && got.pca_pairs <= got.body_pairs);
        }
    }
}

#[test]
fn mine_equals_oracle_mine_with_varied_thresholds() {
    let mut rng = common::seeded(11);
    for case in 0..60 {
        let g = common::random_small_graph(&mut rng, 16, 60, 4);
        let config = MiningConfig {
            injective: case % 3 != 0,
            min_head_coverage: Ratio::new(rng.random_range(0..4), 10),
            min_support: rng.random_range(1..3),
            top_k: if case % 5 == 0 { Some(10) } else { None },
            ..Default::default()
        };
        assert_eq!(mine(&g, &config).unwrap(), oracle_mine(&g, &config).unwrap(), "case {case} {config:?}");
    }
}

#[test]
fn support_equals_pairs_of_body_tightened_with_head() {
    let mut rng = common::seeded(3);
    for case in 0..100 {
        let g = common::random_small_graph(&mut rng, 10, 30, 3);
        let labels = g.relation_count() as u32;
        let injective = case % 2 == 0;
        for t in all_templates() {
            let body: Vec<RelationId> = (0..t.body_len()).map(|_| RelationId(rng.random_range(0..labels))).collect();
            let Ok(rule) = Rule::new(*t, body, RelationId(rng.random_range(0..labels))) else { continue };
            let mut atoms: Vec<_> = rule.body_atoms().collect();
            atoms.push(rule.head_atom());
            let tightened = oracle_pairs(&g, &atoms, injective).unwrap().len() as u64;
            assert_eq!(match_counts(&g, &rule, injective).support, tightened, "case {case} template {}", t.id);
        }
    }
}

#[test]
fn body_pairs_never_shrink_when_facts_are_added() {
    let mut rng = common::seeded(5);
    for _ in 0..30 {
        let mut facts: Vec<(String, String, String)> = Vec::new();
        let mut previous: Vec<u64> = Vec::new();
        for _ in 0..25 {
            facts.push((
                format!("e{}", rng.random_range(0..8)),
                format!("p{}", rng.random_range(0..2)),
                format!("e{}", rng.random_range(0..8)),
            ));
            // Fixed relation names p0, p1 interned in a stable order.
            let mut b = gpar_miner::GraphBuilder::new();
            b.add_fact("anchor0", "p0", "anchor1").unwrap();
            b.add_fact("anchor0", "p1", "anchor1").unwrap();
            for (s, r, o) in &facts {
                b.add_fact(s, r, o).unwrap();
            }
            let g = b.build();
            let mut current = Vec::new();
            for t in all_templates() {
                for labels in 0..(1u32 << (t.body_len() + 1)) {
                    let rel = |i: usize| RelationId(labels >> i & 1);
                    let body = (0..t.body_len()).map(rel).collect();
                    if let Ok(rule) = Rule::new(*t, body, rel(t.body_len())) {
                        current.push(match_counts(&g, &rule, false).body_pairs);
                    }
                }
            }
            if !previous.is_empty() {
                assert!(current.iter().zip(&previous).all(|(c, p)| c >= p));
            }
            previous = current;
        }
    }
}
