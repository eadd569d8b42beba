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

#![allow(dead_code)]

use gpar_miner::{Graph, GraphBuilder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};

pub const G1_TSV: &str = "alice\tisMarriedTo\tbob\n\
alice\thasChild\tcarl\n\
bob\thasChild\tcarl\n\
dave\tisMarriedTo\teve\n\
dave\thasChild\tfrank\n";

pub const MARRIAGE_RULE: &str = "?v1 <isMarriedTo> ?v0 & ?v1 <hasChild> ?v2 => ?v0 <hasChild> ?v2";

pub fn g1() -> Graph {
    gpar_miner::load_facts(G1_TSV.as_bytes(), gpar_miner::FactFormat::Tsv).unwrap()
}

/// Small random graph: up to `max_nodes` nodes, `max_facts` facts and
/// `max_labels` relation labels. Dense enough that paths of length three
/// close regularly.
pub fn random_small_graph(rng: &mut ChaCha8Rng, max_nodes: usize, max_facts: usize, max_labels: usize) -> Graph {
    let nodes = rng.random_range(2..=max_nodes);
    let labels = rng.random_range(1..=max_labels);
    let facts = rng.random_range(1..=max_facts);
    let mut b = GraphBuilder::new();
    for _ in 0..facts {
        let s = rng.random_range(0..nodes);
        // Occasional self loops.
        let o = if rng.random_bool(0.03) { s } else { rng.random_range(0..nodes) };
        let r = rng.random_range(0..labels);
        b.add_fact(&format!("e{s}"), &format!("p{r}"), &format!("e{o}")).unwrap();
    }
    b.build()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Synthetic knowledge base with Zipf-distributed node degrees and relation
/// frequencies. Subjects and objects are drawn from independent Zipf ranks
/// mapped through different permutations so the biggest hubs differ.
pub fn zipf_facts(seed: u64, facts: usize, nodes: usize, relations: usize, exponent: f64) -> Vec<(u32, u32, u32)> {
    let mut rng = seeded(seed);
    let node_dist = Zipf::new(nodes as f64, exponent).unwrap();
    let rel_dist = Zipf::new(relations as f64, 1.0).unwrap();
    let mut seen = std::collections::HashSet::with_capacity(facts);
    let mut out = Vec::with_capacity(facts);
    let scramble = |rank: u64, mult: u64| ((rank * mult) % nodes as u64) as u32;
    while out.len() < facts {
        let s = scramble(node_dist.sample(&mut rng) as u64 - 1, 7_919);
        let o = scramble(node_dist.sample(&mut rng) as u64 - 1, 104_729);
        let r = rel_dist.sample(&mut rng) as u32 - 1;
        if seen.insert((s, r, o)) {
            out.push((s, r, o));
        }
    }
    out
}

pub fn zipf_tsv(seed: u64, facts: usize, nodes: usize, relations: usize, exponent: f64) -> String {
    let mut s = String::new();
    for (a, r, b) in zipf_facts(seed, facts, nodes, relations, exponent) {
        s.push_str(&format!("ent{a}\trel{r}\tent{b}\n"));
    }
    s
}

pub fn zipf_graph(seed: u64, facts: usize, nodes: usize, relations: usize, exponent: f64) -> Graph {
    gpar_miner::load_facts(zipf_tsv(seed, facts, nodes, relations, exponent).as_bytes(), gpar_miner::FactFormat::Tsv)
        .unwrap()
}
