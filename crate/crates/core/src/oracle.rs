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

//! Brute-force reference counts for testing the matcher and miner.
//!
//! Nothing here touches the adjacency indexes. The fact set is copied into a
//! dense `node x node` relation-bitmask matrix, every variable assignment is
//! tried in nested loops (skipping the rest of an assignment as soon as one
//! atom fails), and the three counts come from set cardinalities. Only usable
//! on small graphs.

use std::collections::{BTreeSet, HashMap};

use num_rational::Ratio;
use thiserror::Error;

use crate::graph::{Graph, NodeId, RelationId};
use crate::matcher::MatchCounts;
use crate::miner::{rank_by_std, MiningConfig, RuleStats};
use crate::patterns::{render_rule, Atom, PatternError, Rule};

/// Largest graph the oracle accepts.
pub const MAX_NODES: usize = 64;
/// Largest label vocabulary [`oracle_mine`] accepts.
pub const MAX_LABELS: usize = 8;

pub type OracleCounts = MatchCounts;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("graph has {0} nodes; the oracle handles at most {MAX_NODES}")]
    TooManyNodes(usize),
    #[error("graph has {0} relation labels; the oracle handles at most {1}")]
    TooManyLabels(usize, usize),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("invalid configuration: {0}")]
    Config(String),
}

struct Dense {
    n: usize,
    cell: Vec<u64>,
}

impl Dense {
    fn new(g: &Graph, max_labels: usize) -> Result<Dense, OracleError> {
        let n = g.node_count();
        if n > MAX_NODES {
            return Err(OracleError::TooManyNodes(n));
        }
        if g.relation_count() > max_labels {
            return Err(OracleError::TooManyLabels(g.relation_count(), max_labels));
        }
        let mut cell = vec![0u64; n * n];
        for f in g.facts() {
            cell[f.subject.index() * n + f.object.index()] |= 1 << f.relation.0;
        }
        Ok(Dense { n, cell })
    }

    fn holds(&self, s: usize, r: RelationId, o: usize) -> bool {
        r.index() < 64 && self.cell[s * self.n + o] >> r.0 & 1 == 1
    }

    fn any_object(&self, s: usize, r: RelationId) -> bool {
        (0..self.n).any(|z| self.holds(s, r, z))
    }

    fn relation_size(&self, r: RelationId) -> u64 {
        self.cell.iter().filter(|&&c| r.index() < 64 && c >> r.0 & 1 == 1).count() as u64
    }

    /// Distinct `(V0, Vk)` over every assignment satisfying `atoms`, where
    /// `Vk` is the highest variable any atom mentions.
    fn body_pairs(&self, atoms: &[Atom], injective: bool) -> BTreeSet<(usize, usize)> {
        let k = atoms.iter().map(|a| a.subject.max(a.object)).max().unwrap_or(0);
        let mut out = BTreeSet::new();
        let mut assignment = vec![0usize; k + 1];
        self.extend(atoms, injective, &mut assignment, 0, &mut out);
        out
    }

    fn extend(
        &self,
        atoms: &[Atom],
        injective: bool,
        assignment: &mut Vec<usize>,
        depth: usize,
        out: &mut BTreeSet<(usize, usize)>,
    ) {
        let k = assignment.len() - 1;
        if depth == k + 1 {
            out.insert((assignment[0], assignment[k]));
            return;
        }
        for v in 0..self.n {
            if injective && assignment[..depth].contains(&v) {
                continue;
            }
            assignment[depth] = v;
            // Check each atom as soon as its later variable is assigned.
            let ok = atoms
                .iter()
                .filter(|a| a.subject.max(a.object) == depth)
                .all(|a| self.holds(assignment[a.subject], a.relation, assignment[a.object]));
            if ok {
                self.extend(atoms, injective, assignment, depth + 1, out);
            }
        }
    }

    fn counts(&self, pairs: &BTreeSet<(usize, usize)>, head: Atom) -> OracleCounts {
        let mut c = OracleCounts { body_pairs: pairs.len() as u64, ..Default::default() };
        for &(first, last) in pairs {
            let var = |i: usize| if i == 0 { first } else { last };
            let (s, o) = (var(head.subject), var(head.object));
            if self.holds(s, head.relation, o) {
                c.support += 1;
            }
            if self.any_object(s, head.relation) {
                c.pca_pairs += 1;
            }
        }
        c
    }
}

/// Support, body pairs and PCA pairs of `rule` by exhaustive assignment.
pub fn oracle_counts(g: &Graph, rule: &Rule, injective: bool) -> Result<OracleCounts, OracleError> {
    let dense = Dense::new(g, 64)?;
    let atoms: Vec<Atom> = rule.body_atoms().collect();
    Ok(dense.counts(&dense.body_pairs(&atoms, injective), rule.head_atom()))
}

/// Distinct `(V0, Vk)` node pairs over all assignments satisfying every atom.
///
/// Atoms may join any two variables, so a rule body can be tightened with
/// extra constraints such as its own head atom.
pub fn oracle_pairs(g: &Graph, atoms: &[Atom], injective: bool) -> Result<BTreeSet<(NodeId, NodeId)>, OracleError> {
    let dense = Dense::new(g, 64)?;
    Ok(dense.body_pairs(atoms, injective).into_iter().map(|(a, b)| (NodeId(a as u32), NodeId(b as u32))).collect())
}

/// Reference miner: every label assignment of every selected template,
/// scored by brute force, filtered and ranked like the real miner.
pub fn oracle_mine(g: &Graph, config: &MiningConfig) -> Result<Vec<RuleStats>, OracleError> {
    config.validate().map_err(|e| OracleError::Config(e.to_string()))?;
    let dense = Dense::new(g, MAX_LABELS)?;
    let labels: Vec<RelationId> = (0..g.relation_count() as u32).map(RelationId).collect();
    let mut body_cache: HashMap<Vec<Atom>, BTreeSet<(usize, usize)>> = HashMap::new();
    let mut out = Vec::new();

    for t in config.templates() {
        let k = t.body_len();
        // Cross product labels^k for the body, then every head label.
        let mut bodies: Vec<Vec<RelationId>> = vec![vec![]];
        for _ in 0..k {
            bodies = bodies
                .into_iter()
                .flat_map(|prefix| {
                    labels.iter().map(move |&r| {
                        let mut next = prefix.clone();
                        next.push(r);
                        next
                    })
                })
                .collect();
        }
        for body in &bodies {
            for &head in &labels {
                let rule = match Rule::new(t, body.clone(), head) {
                    Ok(rule) => rule,
                    Err(PatternError::Tautology) => continue,
                    Err(e) => return Err(e.into()),
                };
                let atoms: Vec<Atom> = rule.body_atoms().collect();
                let pairs = body_cache.entry(atoms).or_insert_with_key(|a| dense.body_pairs(a, config.injective));
                let counts = dense.counts(pairs, rule.head_atom());
                let head_size = dense.relation_size(head);
                if counts.support < config.min_support || head_size == 0 {
                    continue;
                }
                if Ratio::new(counts.support, head_size) < config.min_head_coverage {
                    continue;
                }
                let text = render_rule(&rule, g)?;
                if let Some(stats) = RuleStats::from_counts(rule, text, counts, head_size) {
                    out.push(stats);
                }
            }
        }
    }
    out.sort_by(rank_by_std);
    if let Some(k) = config.top_k {
        out.truncate(k);
    }
    Ok(out)
}
