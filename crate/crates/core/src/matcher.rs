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

//! Match counting for rule bodies and heads.
//!
//! All counts are over distinct projected head pairs `(x, y)`: the nodes
//! bound to the head atom's subject and object variables. Intermediate path
//! variables only have to exist; how many witnesses they have is irrelevant.
//!
//! The walk starts at whichever end of the body path has the rarer relation
//! and expands one edge at a time through the adjacency indexes, collecting
//! the distinct far-end nodes reachable from each start node. Those end sets
//! are then checked against the head relation (support) and against the head
//! subject's outgoing edges (PCA denominator).

use crate::graph::{Graph, NodeId, RelationId};
use crate::patterns::{Direction, Rule};

/// Numerators and denominators of the confidence measures.
///
/// Always `support <= pca_pairs <= body_pairs`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct MatchCounts {
    /// Distinct head pairs where body and head both hold.
    pub support: u64,
    /// Distinct head pairs where the body holds.
    pub body_pairs: u64,
    /// Distinct body pairs whose head subject has some outgoing head-relation fact.
    pub pca_pairs: u64,
}

/// Head relation and orientation, sharing a body with other heads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HeadSpec {
    pub relation: RelationId,
    pub direction: Direction,
}

/// Reusable per-worker buffers sized to the graph's node count.
#[derive(Debug)]
pub struct Scratch {
    epoch: u32,
    mid_stamp: Vec<u32>,
    mid_witness: Vec<NodeId>,
    mid_multi: Vec<bool>,
    mids: Vec<NodeId>,
    end_stamp: Vec<u32>,
    end_bits: Vec<u64>,
    ends: Vec<NodeId>,
    visit_pool: Vec<Vec<u32>>,
}

impl Scratch {
    pub fn new(g: &Graph) -> Scratch {
        let n = g.node_count();
        Scratch {
            epoch: 0,
            mid_stamp: vec![0; n],
            mid_witness: vec![NodeId(0); n],
            mid_multi: vec![false; n],
            mids: Vec::new(),
            end_stamp: vec![0; n],
            end_bits: vec![0; n],
            ends: Vec::new(),
            visit_pool: Vec::new(),
        }
    }

    fn next_epoch(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.mid_stamp.fill(0);
            self.end_stamp.fill(0);
            self.epoch = 1;
        }
        self.mids.clear();
        self.ends.clear();
    }

    #[inline]
    fn mark_end(&mut self, e: NodeId) {
        let slot = &mut self.end_stamp[e.index()];
        if *slot != self.epoch {
            *slot = self.epoch;
            self.ends.push(e);
        }
    }

    #[inline]
    fn is_end(&self, e: NodeId) -> bool {
        self.end_stamp[e.index()] == self.epoch
    }

    /// Fill `mids` with the distinct nodes reachable from `start` along the
    /// one or two `prefix` steps, recording for each a first-hop witness
    /// (or `start` after a single step) and whether a second witness exists.
    fn collect_mids(&mut self, g: &Graph, start: NodeId, prefix: &[(RelationId, Direction)], injective: bool) {
        self.next_epoch();
        let epoch = self.epoch;
        match *prefix {
            [(r0, d0)] => {
                for &m in g.neighbors(start, r0, d0) {
                    if injective && m == start {
                        continue;
                    }
                    let i = m.index();
                    self.mid_stamp[i] = epoch;
                    self.mid_witness[i] = start;
                    self.mid_multi[i] = false;
                    self.mids.push(m);
                }
            }
            [(r0, d0), (r1, d1)] => {
                for &m1 in g.neighbors(start, r0, d0) {
                    if injective && m1 == start {
                        continue;
                    }
                    for &m2 in g.neighbors(m1, r1, d1) {
                        if injective && (m2 == start || m2 == m1) {
                            continue;
                        }
                        let i = m2.index();
                        if self.mid_stamp[i] != epoch {
                            self.mid_stamp[i] = epoch;
                            self.mid_witness[i] = m1;
                            self.mid_multi[i] = false;
                            self.mids.push(m2);
                        } else if self.mid_witness[i] != m1 {
                            self.mid_multi[i] = true;
                        }
                    }
                }
            }
            _ => unreachable!("walk prefixes have 1 or 2 steps"),
        }
    }

    /// Fill `ends` with the distinct nodes reachable from `start` along `steps`.
    ///
    /// With `injective`, every node on the path (start, intermediates, end)
    /// must be distinct.
    fn collect_ends(&mut self, g: &Graph, start: NodeId, steps: &[(RelationId, Direction)], injective: bool) {
        self.next_epoch();
        match *steps {
            [(r0, d0)] => {
                for &e in g.neighbors(start, r0, d0) {
                    if injective && e == start {
                        continue;
                    }
                    self.mark_end(e);
                }
            }
            [(r0, d0), (r1, d1)] => {
                for &m in g.neighbors(start, r0, d0) {
                    if injective && m == start {
                        continue;
                    }
                    for &e in g.neighbors(m, r1, d1) {
                        if injective && (e == start || e == m) {
                            continue;
                        }
                        self.mark_end(e);
                    }
                }
            }
            [(r0, d0), (r1, d1), (r2, d2)] => {
                let epoch = self.epoch;
                for &m1 in g.neighbors(start, r0, d0) {
                    if injective && m1 == start {
                        continue;
                    }
                    for &m2 in g.neighbors(m1, r1, d1) {
                        if injective && (m2 == start || m2 == m1) {
                            continue;
                        }
                        let i = m2.index();
                        if self.mid_stamp[i] != epoch {
                            self.mid_stamp[i] = epoch;
                            self.mid_witness[i] = m1;
                            self.mid_multi[i] = false;
                            self.mids.push(m2);
                        } else if self.mid_witness[i] != m1 {
                            self.mid_multi[i] = true;
                        }
                    }
                }
                let mids = std::mem::take(&mut self.mids);
                for &m2 in &mids {
                    // A second distinct witness means some first hop always
                    // differs from the end node.
                    let witness = self.mid_witness[m2.index()];
                    let multi = self.mid_multi[m2.index()];
                    for &e in g.neighbors(m2, r2, d2) {
                        if injective && (e == start || e == m2 || (e == witness && !multi)) {
                            continue;
                        }
                        self.mark_end(e);
                    }
                }
                self.mids = mids;
            }
            _ => unreachable!("body paths have 1 to 3 edges"),
        }
    }
}

/// Node-indexed visit counters allowed per walk group, in entries.
const VISIT_BUDGET: usize = 1 << 24;

/// Walk plan for one body: which end to start from and the steps to take.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Plan {
    pub(crate) from_v0: bool,
    pub(crate) steps: Vec<(RelationId, Direction)>,
}

impl Plan {
    pub(crate) fn new(g: &Graph, dirs: &[Direction], relations: &[RelationId]) -> Plan {
        debug_assert_eq!(dirs.len(), relations.len());
        let size = |r: RelationId| if r.index() < g.relation_count() { g.relation_facts(r).len() } else { 0 };
        let from_v0 = size(relations[0]) <= size(relations[relations.len() - 1]);
        let steps = if from_v0 {
            relations.iter().copied().zip(dirs.iter().copied()).collect()
        } else {
            relations.iter().rev().copied().zip(dirs.iter().rev().map(|d| d.flip())).collect()
        };
        Plan { from_v0, steps }
    }
}

fn start_nodes(g: &Graph, (r, d): (RelationId, Direction)) -> &[NodeId] {
    match d {
        Direction::Forward => g.subjects_of(r),
        Direction::Backward => g.objects_of(r),
    }
}

/// Head tallies for one body while its start nodes are visited.
struct BodyTally<'h> {
    heads: &'h [HeadSpec],
    subject_at_start: Vec<bool>,
    end_subject_mask: Vec<u64>,
    /// How many start nodes reached each end node; only kept when some head
    /// has its subject at the end.
    visits: Vec<u32>,
    visited: Vec<NodeId>,
    counts: Vec<MatchCounts>,
}

impl<'h> BodyTally<'h> {
    fn new(g: &Graph, heads: &'h [HeadSpec], from_v0: bool, pool: &mut Vec<Vec<u32>>) -> BodyTally<'h> {
        // Head subject sits at the walk's start node iff the head points away
        // from V0 and we started at V0, or the reverse.
        let subject_at_start: Vec<bool> =
            heads.iter().map(|h| (h.direction == Direction::Forward) == from_v0).collect();
        let mut end_subject_mask = vec![0u64; g.relation_words()];
        for (h, &at_start) in heads.iter().zip(&subject_at_start) {
            if !at_start && h.relation.index() < g.relation_count() {
                end_subject_mask[h.relation.index() / 64] |= 1u64 << (h.relation.index() % 64);
            }
        }
        let visits = if end_subject_mask.iter().any(|&w| w != 0) {
            pool.pop().unwrap_or_else(|| vec![0; g.node_count()])
        } else {
            Vec::new()
        };
        BodyTally {
            heads,
            subject_at_start,
            end_subject_mask,
            visits,
            visited: Vec::new(),
            counts: vec![MatchCounts::default(); heads.len()],
        }
    }

    /// Account for the distinct `ends` reached from `start`.
    fn record(&mut self, g: &Graph, start: NodeId, ends: &[NodeId], is_end: impl Fn(NodeId) -> bool) {
        let reach = ends.len() as u64;
        for ((h, &at_start), c) in self.heads.iter().zip(&self.subject_at_start).zip(self.counts.iter_mut()) {
            c.body_pairs += reach;
            if h.relation.index() >= g.relation_count() {
                continue;
            }
            if at_start {
                // h(start, e) for e in ends
                c.support +=
                    g.neighbors(start, h.relation, Direction::Forward).iter().filter(|&&e| is_end(e)).count() as u64;
                if g.has_outgoing(start, h.relation) {
                    c.pca_pairs += reach;
                }
            } else {
                // h(e, start) for e in ends
                c.support +=
                    g.neighbors(start, h.relation, Direction::Backward).iter().filter(|&&e| is_end(e)).count() as u64;
            }
        }
        if !self.visits.is_empty() {
            for &e in ends {
                let v = &mut self.visits[e.index()];
                if *v == 0 {
                    self.visited.push(e);
                }
                *v += 1;
            }
        }
    }

    fn finish(mut self, g: &Graph, pool: &mut Vec<Vec<u32>>) -> Vec<MatchCounts> {
        if self.visits.is_empty() {
            return self.counts;
        }
        let mut hits = vec![0u64; self.end_subject_mask.len() * 64];
        for &e in &self.visited {
            let n = u64::from(std::mem::take(&mut self.visits[e.index()]));
            for (w, (&out, &mask)) in g.outgoing_relation_words(e).iter().zip(&self.end_subject_mask).enumerate() {
                let mut bits = out & mask;
                while bits != 0 {
                    hits[w * 64 + bits.trailing_zeros() as usize] += n;
                    bits &= bits - 1;
                }
            }
        }
        pool.push(std::mem::take(&mut self.visits));
        for ((h, &at_start), c) in self.heads.iter().zip(&self.subject_at_start).zip(self.counts.iter_mut()) {
            if !at_start && h.relation.index() < g.relation_count() {
                c.pca_pairs = hits[h.relation.index()];
            }
        }
        self.counts
    }
}

/// Count one body against several heads in a single traversal.
///
/// `dirs` and `relations` describe the body path `V0 .. Vk`. The returned
/// vector is parallel to `heads`.
pub fn count_body_group(
    g: &Graph,
    dirs: &[Direction],
    relations: &[RelationId],
    heads: &[HeadSpec],
    injective: bool,
    scratch: &mut Scratch,
) -> Vec<MatchCounts> {
    if relations.iter().any(|r| r.index() >= g.relation_count()) {
        return vec![MatchCounts::default(); heads.len()];
    }
    let plan = Plan::new(g, dirs, relations);
    let mut pool = std::mem::take(&mut scratch.visit_pool);
    let mut tally = BodyTally::new(g, heads, plan.from_v0, &mut pool);
    for &start in start_nodes(g, plan.steps[0]) {
        scratch.collect_ends(g, start, &plan.steps, injective);
        if !scratch.ends.is_empty() {
            tally.record(g, start, &scratch.ends, |e| scratch.is_end(e));
        }
    }
    let counts = tally.finish(g, &mut pool);
    scratch.visit_pool = pool;
    counts
}

/// Count several bodies whose walks agree on every step but the last.
///
/// `prefix` holds the shared steps (one or two), `last_dir` the direction
/// of the final step, and `lasts` the final-step relation of each body with
/// its heads. The walk starts at V0 iff `from_v0`. The result is parallel
/// to `lasts`, each entry parallel to its heads.
pub(crate) fn count_walk_group(
    g: &Graph,
    from_v0: bool,
    prefix: &[(RelationId, Direction)],
    last_dir: Direction,
    lasts: &[(RelationId, &[HeadSpec])],
    injective: bool,
    scratch: &mut Scratch,
) -> Vec<Vec<MatchCounts>> {
    debug_assert!(matches!(prefix.len(), 1 | 2));
    let mut out = Vec::with_capacity(lasts.len());
    if prefix.iter().any(|&(r, _)| r.index() >= g.relation_count()) {
        out.resize(lasts.len(), Vec::new());
        for (o, &(_, heads)) in out.iter_mut().zip(lasts) {
            *o = vec![MatchCounts::default(); heads.len()];
        }
        return out;
    }
    let mut pool = std::mem::take(&mut scratch.visit_pool);
    let mut slot_of = vec![u32::MAX; g.relation_count()];
    let chunk_len = (VISIT_BUDGET / g.node_count().max(1)).clamp(1, 64);
    let mut ends: Vec<Vec<NodeId>> = vec![Vec::new(); chunk_len.min(lasts.len())];
    // One bit per body in a chunk, so a chunk holds at most 64 bodies.
    for chunk in lasts.chunks(chunk_len) {
        let mut tallies: Vec<BodyTally> =
            chunk.iter().map(|&(_, heads)| BodyTally::new(g, heads, from_v0, &mut pool)).collect();
        slot_of.fill(u32::MAX);
        for (slot, &(r, _)) in chunk.iter().enumerate() {
            if r.index() < g.relation_count() {
                slot_of[r.index()] = slot as u32;
            }
        }
        for &start in start_nodes(g, prefix[0]) {
            scratch.collect_mids(g, start, prefix, injective);
            ends.iter_mut().for_each(Vec::clear);
            let epoch = scratch.epoch;
            for &m in &scratch.mids {
                let witness = scratch.mid_witness[m.index()];
                let multi = scratch.mid_multi[m.index()];
                for (r, targets) in g.adjacency(m, last_dir) {
                    let slot = slot_of[r.index()];
                    if slot == u32::MAX {
                        continue;
                    }
                    let bit = 1u64 << slot;
                    for &e in targets {
                        if injective && (e == start || e == m || (e == witness && !multi)) {
                            continue;
                        }
                        let i = e.index();
                        if scratch.end_stamp[i] != epoch {
                            scratch.end_stamp[i] = epoch;
                            scratch.end_bits[i] = 0;
                        }
                        if scratch.end_bits[i] & bit == 0 {
                            scratch.end_bits[i] |= bit;
                            ends[slot as usize].push(e);
                        }
                    }
                }
            }
            for (slot, (slot_ends, tally)) in ends.iter().zip(tallies.iter_mut()).enumerate() {
                if slot_ends.is_empty() {
                    continue;
                }
                let bit = 1u64 << slot;
                let is_end =
                    |e: NodeId| scratch.end_stamp[e.index()] == epoch && scratch.end_bits[e.index()] & bit != 0;
                tally.record(g, start, slot_ends, is_end);
            }
        }
        out.extend(tallies.into_iter().map(|t| t.finish(g, &mut pool)));
    }
    scratch.visit_pool = pool;
    out
}

/// Support, body pairs and PCA pairs of `rule`, from one traversal.
pub fn match_counts(g: &Graph, rule: &Rule, injective: bool) -> MatchCounts {
    let mut scratch = Scratch::new(g);
    let head = HeadSpec { relation: rule.head_relation(), direction: rule.template().head_dir };
    count_body_group(g, rule.template().body_dirs, rule.body_relations(), &[head], injective, &mut scratch)[0]
}

/// Distinct head pairs `(x, y)` for which the body holds.
pub fn count_body_pairs(g: &Graph, rule: &Rule, injective: bool) -> u64 {
    match_counts(g, rule, injective).body_pairs
}

/// Distinct body pairs for which the head fact is also present.
pub fn count_support(g: &Graph, rule: &Rule, injective: bool) -> u64 {
    match_counts(g, rule, injective).support
}

/// Distinct body pairs whose head subject has at least one head-relation fact.
pub fn count_pca_pairs(g: &Graph, rule: &Rule, injective: bool) -> u64 {
    match_counts(g, rule, injective).pca_pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{template, Rule};

    fn g1() -> Graph {
        Graph::from_triples([
            ("alice", "isMarriedTo", "bob"),
            ("alice", "hasChild", "carl"),
            ("bob", "hasChild", "carl"),
            ("dave", "isMarriedTo", "eve"),
            ("dave", "hasChild", "frank"),
        ])
        .unwrap()
    }

    fn rule(g: &Graph, id: u8, body: &[&str], head: &str) -> Rule {
        let body = body.iter().map(|r| g.relation_id(r).unwrap()).collect();
        Rule::new(template(id).unwrap(), body, g.relation_id(head).unwrap()).unwrap()
    }

    fn marriage_rule(g: &Graph) -> Rule {
        // ?v1 <isMarriedTo> ?v0 & ?v1 <hasChild> ?v2 => ?v0 <hasChild> ?v2
        rule(g, 7, &["isMarriedTo", "hasChild"], "hasChild")
    }

    #[test]
    fn g1_fixture_counts() {
        let g = g1();
        let r = marriage_rule(&g);
        assert_eq!(count_body_pairs(&g, &r, true), 2);
        assert_eq!(count_support(&g, &r, true), 1);
        assert_eq!(count_pca_pairs(&g, &r, true), 1);
        assert_eq!(match_counts(&g, &r, true), MatchCounts { support: 1, body_pairs: 2, pca_pairs: 1 });
        assert_eq!(match_counts(&g, &r, false), MatchCounts { support: 1, body_pairs: 2, pca_pairs: 1 });
    }

    #[test]
    fn empty_graph_counts_zero() {
        let empty = Graph::from_triples([]).unwrap();
        let g = g1();
        let r = marriage_rule(&g);
        assert_eq!(match_counts(&empty, &r, true), MatchCounts::default());
    }

    #[test]
    fn body_relation_without_facts() {
        let g = g1();
        let ghost = Rule::new(template(7).unwrap(), vec![RelationId(7), RelationId(1)], RelationId(1)).unwrap();
        assert_eq!(match_counts(&g, &ghost, true), MatchCounts::default());
    }

    #[test]
    fn head_relation_without_facts_gives_zero_pca() {
        let g = Graph::from_triples([("a", "r1", "b"), ("c", "r2", "d")]).unwrap();
        let body_only = Rule::new(template(2).unwrap(), vec![RelationId(0)], RelationId(5)).unwrap();
        let c = match_counts(&g, &body_only, true);
        assert_eq!((c.support, c.body_pairs, c.pca_pairs), (0, 1, 0));
    }

    #[test]
    fn inverse_rule_toy() {
        let g = Graph::from_triples([("a", "r1", "b"), ("b", "r2", "a")]).unwrap();
        let r = rule(&g, 1, &["r1"], "r2");
        assert_eq!(count_support(&g, &r, true), 1);
    }

    #[test]
    fn head_direction_coherence() {
        let inverse = Graph::from_triples([("a", "r1", "b"), ("b", "r2", "a")]).unwrap();
        let parallel = Graph::from_triples([("a", "r1", "b"), ("a", "r2", "b")]).unwrap();
        for g in [&inverse, &parallel] {
            let t1 = rule(g, 1, &["r1"], "r2");
            let t2 = rule(g, 2, &["r1"], "r2");
            let expect_inverse = std::ptr::eq(g, &inverse);
            assert_eq!(count_support(g, &t1, true), u64::from(expect_inverse));
            assert_eq!(count_support(g, &t2, true), u64::from(!expect_inverse));
        }
    }

    #[test]
    fn pca_equals_body_when_every_subject_has_a_head_fact() {
        let g = Graph::from_triples([("a", "p", "b"), ("c", "p", "d"), ("a", "q", "x"), ("c", "q", "y")]).unwrap();
        let r = rule(&g, 2, &["p"], "q");
        let c = match_counts(&g, &r, true);
        assert_eq!(c.pca_pairs, c.body_pairs);
        assert_eq!((c.support, c.body_pairs), (0, 2));
    }

    #[test]
    fn projected_pairs_ignore_witness_multiplicity() {
        // Two middle nodes connect a to z; still one pair.
        let g = Graph::from_triples([
            ("a", "p", "m1"),
            ("a", "p", "m2"),
            ("m1", "q", "z"),
            ("m2", "q", "z"),
            ("a", "h", "z"),
        ])
        .unwrap();
        let r = rule(&g, 3, &["p", "q"], "h");
        assert_eq!(match_counts(&g, &r, true), MatchCounts { support: 1, body_pairs: 1, pca_pairs: 1 });
    }

    #[test]
    fn injectivity_blocks_variable_collapse() {
        // a -p-> b -q-> a : end equals start.
        let g = Graph::from_triples([("a", "p", "b"), ("b", "q", "a"), ("a", "h", "a")]).unwrap();
        let r = rule(&g, 3, &["p", "q"], "h");
        assert_eq!(match_counts(&g, &r, true), MatchCounts::default());
        assert_eq!(match_counts(&g, &r, false), MatchCounts { support: 1, body_pairs: 1, pca_pairs: 1 });
    }

    #[test]
    fn three_hop_witness_tracking() {
        // s -p-> m1 -q-> m2 -r-> m1: the only route ends on its own first hop.
        let g = Graph::from_triples([("s", "p", "m1"), ("m1", "q", "m2"), ("m2", "r", "m1")]).unwrap();
        let r = rule(&g, 9, &["p", "q", "r"], "p");
        assert_eq!(count_body_pairs(&g, &r, true), 0);
        assert_eq!(count_body_pairs(&g, &r, false), 1);
        // A second first hop m3 -q-> m2 makes (s, m1) reachable injectively.
        let g = Graph::from_triples([
            ("s", "p", "m1"),
            ("m1", "q", "m2"),
            ("m2", "r", "m1"),
            ("s", "p", "m3"),
            ("m3", "q", "m2"),
        ])
        .unwrap();
        let r = rule(&g, 9, &["p", "q", "r"], "p");
        assert_eq!(count_body_pairs(&g, &r, true), 1);
        assert_eq!(match_counts(&g, &r, true).support, 1);
    }

    #[test]
    fn grouped_counts_match_single_rule_counts() {
        let g = g1();
        let dirs = template(7).unwrap().body_dirs;
        let body = [g.relation_id("isMarriedTo").unwrap(), g.relation_id("hasChild").unwrap()];
        let heads: Vec<HeadSpec> = g
            .relations()
            .flat_map(|r| {
                [Direction::Forward, Direction::Backward].map(|direction| HeadSpec { relation: r, direction })
            })
            .collect();
        let mut scratch = Scratch::new(&g);
        let grouped = count_body_group(&g, dirs, &body, &heads, true, &mut scratch);
        for (h, c) in heads.iter().zip(grouped) {
            let id = if h.direction == Direction::Forward { 7 } else { 8 };
            let r = Rule::new(template(id).unwrap(), body.to_vec(), h.relation).unwrap();
            assert_eq!(match_counts(&g, &r, true), c, "{h:?}");
        }
    }

    #[test]
    fn walk_groups_match_per_body_counts() {
        // Small dense graph with a hub so shared prefixes fan out.
        let mut triples = Vec::new();
        let names: Vec<String> = (0..9).map(|i| format!("n{i}")).collect();
        let labels = ["a", "b", "c"];
        for i in 0..9usize {
            for j in 0..9usize {
                if (i * 7 + j * 3) % 5 == 0 || i == 0 {
                    triples.push((names[i].as_str(), labels[(i + j) % 3], names[j].as_str()));
                }
            }
        }
        let g = Graph::from_triples(triples).unwrap();
        let heads: Vec<HeadSpec> = g
            .relations()
            .flat_map(|r| {
                [Direction::Forward, Direction::Backward].map(|direction| HeadSpec { relation: r, direction })
            })
            .collect();
        let mut scratch = Scratch::new(&g);
        for id in [3, 5, 9, 11, 13, 15, 17, 19] {
            let dirs = template(id).unwrap().body_dirs;
            for injective in [true, false] {
                for first in g.relations() {
                    for mid in g.relations() {
                        let prefix_rel: Vec<RelationId> = [first, mid][..dirs.len() - 1].to_vec();
                        let prefix: Vec<(RelationId, Direction)> =
                            prefix_rel.iter().copied().zip(dirs.iter().copied()).collect();
                        let lasts: Vec<(RelationId, &[HeadSpec])> =
                            g.relations().map(|r| (r, heads.as_slice())).collect();
                        let grouped =
                            count_walk_group(&g, true, &prefix, dirs[dirs.len() - 1], &lasts, injective, &mut scratch);
                        for (&(last, _), counts) in lasts.iter().zip(grouped) {
                            let mut body = prefix_rel.clone();
                            body.push(last);
                            // Same orientation as the group walk.
                            let single = count_from_v0(&g, dirs, &body, &heads, injective, &mut scratch);
                            assert_eq!(counts, single, "template {id} body {body:?} injective {injective}");
                        }
                        if dirs.len() == 2 {
                            break;
                        }
                    }
                }
            }
        }
    }

    /// Single-body counting with the walk pinned to start at V0.
    fn count_from_v0(
        g: &Graph,
        dirs: &[Direction],
        relations: &[RelationId],
        heads: &[HeadSpec],
        injective: bool,
        scratch: &mut Scratch,
    ) -> Vec<MatchCounts> {
        let steps: Vec<(RelationId, Direction)> = relations.iter().copied().zip(dirs.iter().copied()).collect();
        let mut pool = Vec::new();
        let mut tally = BodyTally::new(g, heads, true, &mut pool);
        for &start in start_nodes(g, steps[0]) {
            scratch.collect_ends(g, start, &steps, injective);
            if !scratch.ends.is_empty() {
                tally.record(g, start, &scratch.ends, |e| scratch.is_end(e));
            }
        }
        tally.finish(g, &mut pool)
    }
}
