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

//! Immutable, indexed fact store.
//!
//! Facts `r(x, y)` are loaded once, interned to dense ids and then frozen
//! into CSR-style adjacency indexes keyed by `(node, relation)` in both
//! directions. Nothing in a [`Graph`] changes after [`GraphBuilder::build`],
//! so a `&Graph` can be shared freely between matcher workers.

use std::fmt;
use std::io::{BufRead, Write};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::patterns::Direction;

/// Dense handle for an entity node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

/// Dense handle for an interned relation label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RelationId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl RelationId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub name: String,
    pub type_label: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fact {
    pub subject: NodeId,
    pub relation: RelationId,
    pub object: NodeId,
}

/// Input encodings accepted by [`load_facts`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FactFormat {
    /// `subject TAB relation TAB object [TAB subject_type]`, one fact per line,
    /// `#` starts a comment line.
    #[default]
    Tsv,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: expected 3 or 4 tab-separated fields, found {found}")]
    FieldCount { line: usize, found: usize },
    #[error("line {line}: empty {field} field")]
    EmptyField { line: usize, field: &'static str },
    #[error("line {line}: input is not valid UTF-8")]
    Utf8 { line: usize },
    #[error("read error at line {line}: {source}")]
    Io {
        line: usize,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown relation id {0}")]
    UnknownRelation(RelationId),
    #[error("too many {0} for 32-bit ids")]
    Overflow(&'static str),
}

impl GraphError {
    /// 1-based input line the error refers to, when there is one.
    pub fn line(&self) -> Option<usize> {
        match self {
            GraphError::FieldCount { line, .. }
            | GraphError::EmptyField { line, .. }
            | GraphError::Utf8 { line }
            | GraphError::Io { line, .. } => Some(*line),
            _ => None,
        }
    }
}

/// Read facts from `source` and build a frozen [`Graph`].
///
/// Blank lines and lines starting with `#` are skipped. A trailing `\r` is
/// stripped so CRLF files load unchanged. Duplicate triples collapse to one
/// fact.
pub fn load_facts<R: BufRead>(mut source: R, format: FactFormat) -> Result<Graph, GraphError> {
    let FactFormat::Tsv = format;
    let mut builder = GraphBuilder::new();
    let mut buf = Vec::new();
    let mut line_no = 0usize;
    loop {
        buf.clear();
        line_no += 1;
        let n = source.read_until(b'\n', &mut buf).map_err(|source| GraphError::Io { line: line_no, source })?;
        if n == 0 {
            break;
        }
        let line = std::str::from_utf8(&buf).map_err(|_| GraphError::Utf8 { line: line_no })?;
        let line = line.strip_suffix('\n').unwrap_or(line);
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 && fields.len() != 4 {
            return Err(GraphError::FieldCount { line: line_no, found: fields.len() });
        }
        for (field, name) in fields.iter().zip(["subject", "relation", "object"]) {
            if field.is_empty() {
                return Err(GraphError::EmptyField { line: line_no, field: name });
            }
        }
        let subject_type = fields.get(3).copied().filter(|t| !t.is_empty());
        builder.add_typed_fact(fields[0], fields[1], fields[2], subject_type)?;
    }
    Ok(builder.build())
}

/// Accumulates interned facts; [`GraphBuilder::build`] freezes them.
#[derive(Default, Debug)]
pub struct GraphBuilder {
    node_names: Vec<String>,
    node_types: Vec<Option<String>>,
    node_lookup: FxHashMap<String, NodeId>,
    relation_names: Vec<String>,
    relation_lookup: FxHashMap<String, RelationId>,
    facts: Vec<Fact>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern_node(&mut self, name: &str) -> Result<NodeId, GraphError> {
        if let Some(&id) = self.node_lookup.get(name) {
            return Ok(id);
        }
        let id = NodeId(u32::try_from(self.node_names.len()).map_err(|_| GraphError::Overflow("nodes"))?);
        self.node_names.push(name.to_owned());
        self.node_types.push(None);
        self.node_lookup.insert(name.to_owned(), id);
        Ok(id)
    }

    fn intern_relation(&mut self, name: &str) -> Result<RelationId, GraphError> {
        if let Some(&id) = self.relation_lookup.get(name) {
            return Ok(id);
        }
        let id = RelationId(u32::try_from(self.relation_names.len()).map_err(|_| GraphError::Overflow("relations"))?);
        self.relation_names.push(name.to_owned());
        self.relation_lookup.insert(name.to_owned(), id);
        Ok(id)
    }

    pub fn add_fact(&mut self, subject: &str, relation: &str, object: &str) -> Result<(), GraphError> {
        self.add_typed_fact(subject, relation, object, None)
    }

    /// The first type label seen for a node wins.
    pub fn add_typed_fact(
        &mut self,
        subject: &str,
        relation: &str,
        object: &str,
        subject_type: Option<&str>,
    ) -> Result<(), GraphError> {
        let s = self.intern_node(subject)?;
        let r = self.intern_relation(relation)?;
        let o = self.intern_node(object)?;
        if let Some(t) = subject_type {
            let slot = &mut self.node_types[s.index()];
            if slot.is_none() {
                *slot = Some(t.to_owned());
            }
        }
        self.facts.push(Fact { subject: s, relation: r, object: o });
        Ok(())
    }

    pub fn build(self) -> Graph {
        let GraphBuilder { node_names, node_types, node_lookup, relation_names, relation_lookup, mut facts } = self;
        facts.sort_unstable_by_key(|f| (f.relation, f.subject, f.object));
        facts.dedup();

        let n = node_names.len();
        let num_rel = relation_names.len();

        let mut relation_offsets = vec![0usize; num_rel + 1];
        for f in &facts {
            relation_offsets[f.relation.index() + 1] += 1;
        }
        for r in 0..num_rel {
            relation_offsets[r + 1] += relation_offsets[r];
        }

        let mut subjects = vec![Vec::new(); num_rel];
        let mut objects = vec![Vec::new(); num_rel];
        for f in &facts {
            let subj: &mut Vec<NodeId> = &mut subjects[f.relation.index()];
            if subj.last() != Some(&f.subject) {
                subj.push(f.subject);
            }
            objects[f.relation.index()].push(f.object);
        }
        for objs in &mut objects {
            objs.sort_unstable();
            objs.dedup();
        }

        let out_adj = Adjacency::build(n, facts.iter().map(|f| (f.subject, f.relation, f.object)));
        let in_adj = Adjacency::build(n, facts.iter().map(|f| (f.object, f.relation, f.subject)));

        let rel_words = num_rel.div_ceil(64).max(1);
        let mut out_relation_bits = vec![0u64; n * rel_words];
        for f in &facts {
            let r = f.relation.index();
            out_relation_bits[f.subject.index() * rel_words + r / 64] |= 1u64 << (r % 64);
        }

        Graph {
            nodes: node_names,
            node_types,
            node_lookup,
            relation_names,
            relation_lookup,
            facts,
            relation_offsets,
            subjects,
            objects,
            out_adj,
            in_adj,
            rel_words,
            out_relation_bits,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct AdjGroup {
    relation: RelationId,
    start: u32,
    end: u32,
}

/// Per-node adjacency grouped by relation, targets sorted within a group.
#[derive(Debug, Default)]
struct Adjacency {
    node_offsets: Vec<u32>,
    groups: Vec<AdjGroup>,
    targets: Vec<NodeId>,
}

impl Adjacency {
    fn build(n: usize, edges: impl Iterator<Item = (NodeId, RelationId, NodeId)>) -> Self {
        let mut edges: Vec<(NodeId, RelationId, NodeId)> = edges.collect();
        edges.sort_unstable();
        let mut node_offsets = Vec::with_capacity(n + 1);
        let mut groups: Vec<AdjGroup> = Vec::new();
        let mut targets = Vec::with_capacity(edges.len());
        let mut i = 0;
        for v in 0..n {
            let node_start = groups.len();
            node_offsets.push(node_start as u32);
            while i < edges.len() && edges[i].0.index() == v {
                let (_, rel, target) = edges[i];
                let len = groups.len();
                match groups.last_mut() {
                    Some(g) if len > node_start && g.relation == rel => {
                        g.end += 1;
                    }
                    _ => {
                        let start = targets.len() as u32;
                        groups.push(AdjGroup { relation: rel, start, end: start + 1 });
                    }
                }
                targets.push(target);
                i += 1;
            }
        }
        node_offsets.push(groups.len() as u32);
        Adjacency { node_offsets, groups, targets }
    }

    #[inline]
    fn node_groups(&self, v: NodeId) -> &[AdjGroup] {
        let i = v.index();
        if i + 1 >= self.node_offsets.len() {
            return &[];
        }
        &self.groups[self.node_offsets[i] as usize..self.node_offsets[i + 1] as usize]
    }

    #[inline]
    fn neighbors(&self, v: NodeId, r: RelationId) -> &[NodeId] {
        let groups = self.node_groups(v);
        match groups.binary_search_by_key(&r, |g| g.relation) {
            Ok(k) => &self.targets[groups[k].start as usize..groups[k].end as usize],
            Err(_) => &[],
        }
    }

    #[inline]
    fn degree(&self, v: NodeId) -> usize {
        match self.node_groups(v) {
            [] => 0,
            gs => (gs[gs.len() - 1].end - gs[0].start) as usize,
        }
    }
}

/// Frozen fact store with label-directed traversal indexes.
#[derive(Debug)]
pub struct Graph {
    nodes: Vec<String>,
    node_types: Vec<Option<String>>,
    node_lookup: FxHashMap<String, NodeId>,
    relation_names: Vec<String>,
    relation_lookup: FxHashMap<String, RelationId>,
    /// Sorted by `(relation, subject, object)`.
    facts: Vec<Fact>,
    relation_offsets: Vec<usize>,
    subjects: Vec<Vec<NodeId>>,
    objects: Vec<Vec<NodeId>>,
    out_adj: Adjacency,
    in_adj: Adjacency,
    rel_words: usize,
    out_relation_bits: Vec<u64>,
}

impl Graph {
    /// Build a graph directly from string triples.
    pub fn from_triples<'a, I>(triples: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (&'a str, &'a str, &'a str)>,
    {
        let mut b = GraphBuilder::new();
        for (s, r, o) in triples {
            b.add_fact(s, r, o)?;
        }
        Ok(b.build())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn relation_count(&self) -> usize {
        self.relation_names.len()
    }

    pub fn fact_count(&self) -> usize {
        self.facts.len()
    }

    pub fn node(&self, id: NodeId) -> Option<Node> {
        let name = self.nodes.get(id.index())?;
        Some(Node { id, name: name.clone(), type_label: self.node_types[id.index()].clone() })
    }

    pub fn node_name(&self, id: NodeId) -> Option<&str> {
        self.nodes.get(id.index()).map(String::as_str)
    }

    pub fn node_type(&self, id: NodeId) -> Option<&str> {
        self.node_types.get(id.index()).and_then(|t| t.as_deref())
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.node_lookup.get(name).copied()
    }

    pub fn relation_name(&self, id: RelationId) -> Option<&str> {
        self.relation_names.get(id.index()).map(String::as_str)
    }

    pub fn relation_id(&self, name: &str) -> Option<RelationId> {
        self.relation_lookup.get(name).copied()
    }

    pub fn relation_names(&self) -> &[String] {
        &self.relation_names
    }

    pub fn relations(&self) -> impl Iterator<Item = RelationId> + '_ {
        (0..self.relation_names.len() as u32).map(RelationId)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    /// All facts, ordered by `(relation, subject, object)`.
    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    /// Facts carrying relation `r`, ordered by `(subject, object)`.
    pub fn relation_facts(&self, r: RelationId) -> &[Fact] {
        match self.relation_offsets.get(r.index()..=r.index() + 1) {
            Some(&[a, b]) => &self.facts[a..b],
            _ => &[],
        }
    }

    /// Number of facts with relation `r`; the `|r|` head-size denominator.
    pub fn relation_size(&self, r: RelationId) -> Result<usize, GraphError> {
        if r.index() >= self.relation_count() {
            return Err(GraphError::UnknownRelation(r));
        }
        Ok(self.relation_facts(r).len())
    }

    /// Distinct nodes with at least one outgoing `r` edge, sorted.
    pub fn subjects_of(&self, r: RelationId) -> &[NodeId] {
        self.subjects.get(r.index()).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Distinct nodes with at least one incoming `r` edge, sorted.
    pub fn objects_of(&self, r: RelationId) -> &[NodeId] {
        self.objects.get(r.index()).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Forward yields objects of `r(v, ·)`, Backward yields subjects of `r(·, v)`.
    /// The slice is sorted and free of duplicates.
    #[inline]
    pub fn neighbors(&self, v: NodeId, r: RelationId, direction: Direction) -> &[NodeId] {
        match direction {
            Direction::Forward => self.out_adj.neighbors(v, r),
            Direction::Backward => self.in_adj.neighbors(v, r),
        }
    }

    /// Every `(relation, neighbors)` group incident to `v` in `direction`,
    /// ordered by relation.
    pub fn adjacency(&self, v: NodeId, direction: Direction) -> impl Iterator<Item = (RelationId, &[NodeId])> + '_ {
        let adj = match direction {
            Direction::Forward => &self.out_adj,
            Direction::Backward => &self.in_adj,
        };
        adj.node_groups(v).iter().map(move |g| (g.relation, &adj.targets[g.start as usize..g.end as usize]))
    }

    /// Total edge count at `v` in `direction`, over all relations.
    #[inline]
    pub fn degree(&self, v: NodeId, direction: Direction) -> usize {
        match direction {
            Direction::Forward => self.out_adj.degree(v),
            Direction::Backward => self.in_adj.degree(v),
        }
    }

    /// Number of distinct relations on the edges at `v` in `direction`.
    #[inline]
    pub fn label_count(&self, v: NodeId, direction: Direction) -> usize {
        match direction {
            Direction::Forward => self.out_adj.node_groups(v).len(),
            Direction::Backward => self.in_adj.node_groups(v).len(),
        }
    }

    #[inline]
    pub fn has_fact(&self, subject: NodeId, r: RelationId, object: NodeId) -> bool {
        let objs = self.out_adj.neighbors(subject, r);
        // Groups are short in practice; fall back to binary search on hubs.
        if objs.len() <= 16 {
            objs.contains(&object)
        } else {
            objs.binary_search(&object).is_ok()
        }
    }

    /// Whether `v` has any outgoing `r` fact.
    #[inline]
    pub fn has_outgoing(&self, v: NodeId, r: RelationId) -> bool {
        if r.index() >= self.relation_names.len() {
            return false;
        }
        let i = v.index() * self.rel_words + r.index() / 64;
        match self.out_relation_bits.get(i) {
            Some(word) => word & (1u64 << (r.index() % 64)) != 0,
            None => false,
        }
    }

    /// Bitset words of the relations `v` has outgoing facts for.
    #[inline]
    pub(crate) fn outgoing_relation_words(&self, v: NodeId) -> &[u64] {
        let start = v.index() * self.rel_words;
        &self.out_relation_bits[start..start + self.rel_words]
    }

    pub(crate) fn relation_words(&self) -> usize {
        self.rel_words
    }

    /// Write the fact set back out as TSV, one fact per line.
    pub fn write_tsv<W: Write>(&self, mut sink: W) -> std::io::Result<()> {
        for f in &self.facts {
            writeln!(
                sink,
                "{}\t{}\t{}",
                self.nodes[f.subject.index()],
                self.relation_names[f.relation.index()],
                self.nodes[f.object.index()]
            )?;
        }
        Ok(())
    }

    /// Facts resolved to their strings, for comparisons across graphs.
    pub fn fact_strings(&self) -> Vec<(&str, &str, &str)> {
        self.facts
            .iter()
            .map(|f| {
                (
                    self.nodes[f.subject.index()].as_str(),
                    self.relation_names[f.relation.index()].as_str(),
                    self.nodes[f.object.index()].as_str(),
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

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

    #[test]
    fn loads_three_line_tsv() {
        let input = "alice\tisMarriedTo\tbob\nbob\thasChild\tcarl\nalice\thasChild\tcarl\n";
        let g = load_facts(input.as_bytes(), FactFormat::Tsv).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.relation_count(), 2);
        assert_eq!(g.fact_count(), 3);
        let ids: Vec<u32> = g.nodes().map(|n| n.0).collect();
        assert_eq!(ids, vec![0, 1, 2]);
    }

    #[test]
    fn empty_input_is_an_empty_graph() {
        let g = load_facts("".as_bytes(), FactFormat::Tsv).unwrap();
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.fact_count(), 0);
        assert_eq!(g.relation_count(), 0);
    }

    #[test]
    fn duplicate_lines_collapse() {
        let g = load_facts("a\tr\tb\na\tr\tb\n".as_bytes(), FactFormat::Tsv).unwrap();
        assert_eq!(g.fact_count(), 1);
        assert_eq!(g.relation_size(RelationId(0)).unwrap(), 1);
    }

    #[test]
    fn comments_blank_lines_and_crlf() {
        let input = "# header\n\na\tr\tb\r\n   \nb\tr\ta\n";
        let g = load_facts(input.as_bytes(), FactFormat::Tsv).unwrap();
        assert_eq!(g.fact_count(), 2);
        assert_eq!(g.node_id("b"), Some(NodeId(1)));
    }

    #[test]
    fn wrong_field_count_reports_line() {
        let input = "a\tr\tb\n# ok\na\tr\n";
        let err = load_facts(input.as_bytes(), FactFormat::Tsv).unwrap_err();
        assert!(matches!(err, GraphError::FieldCount { line: 3, found: 2 }), "{err}");
        assert_eq!(err.line(), Some(3));

        let err = load_facts("a\tr\tb\tt\tx\n".as_bytes(), FactFormat::Tsv).unwrap_err();
        assert!(matches!(err, GraphError::FieldCount { line: 1, found: 5 }));
    }

    #[test]
    fn empty_field_is_rejected() {
        let err = load_facts("a\t\tb\n".as_bytes(), FactFormat::Tsv).unwrap_err();
        assert!(matches!(err, GraphError::EmptyField { line: 1, field: "relation" }));
    }

    #[test]
    fn invalid_utf8_reports_line() {
        let err = load_facts(&b"a\tr\tb\n\xff\tr\tb\n"[..], FactFormat::Tsv).unwrap_err();
        assert!(matches!(err, GraphError::Utf8 { line: 2 }));
    }

    #[test]
    fn fourth_column_sets_subject_type() {
        let g =
            load_facts("john\thasRead\tbook1\tperson\nbook1\tauthor\tian\tbook\n".as_bytes(), FactFormat::Tsv).unwrap();
        let john = g.node_id("john").unwrap();
        assert_eq!(g.node_type(john), Some("person"));
        assert_eq!(g.node(g.node_id("book1").unwrap()).unwrap().type_label.as_deref(), Some("book"));
        assert_eq!(g.node_type(g.node_id("ian").unwrap()), None);
    }

    #[test]
    fn names_compare_byte_exactly() {
        let g = Graph::from_triples([("Bob", "r", "bob"), ("bob", "R", "Bob")]).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.relation_count(), 2);
    }

    #[test]
    fn relation_size_on_g1() {
        let g = g1();
        let has_child = g.relation_id("hasChild").unwrap();
        assert_eq!(g.relation_size(has_child).unwrap(), 3);
        assert!(matches!(g.relation_size(RelationId(9)), Err(GraphError::UnknownRelation(_))));
        let single = Graph::from_triples([("a", "r", "b")]).unwrap();
        assert_eq!(single.relation_size(RelationId(0)).unwrap(), 1);
    }

    #[test]
    fn neighbors_on_g1() {
        let g = g1();
        let alice = g.node_id("alice").unwrap();
        let bob = g.node_id("bob").unwrap();
        let married = g.relation_id("isMarriedTo").unwrap();
        assert_eq!(g.neighbors(alice, married, Direction::Forward), &[bob]);
        assert!(g.neighbors(alice, married, Direction::Backward).is_empty());
        assert_eq!(g.neighbors(bob, married, Direction::Backward), &[alice]);
        let frank = g.node_id("frank").unwrap();
        assert!(g.neighbors(frank, married, Direction::Forward).is_empty());
        assert!(g.has_outgoing(alice, married));
        assert!(!g.has_outgoing(bob, married));
    }

    #[test]
    fn isolated_node_has_no_neighbors() {
        let g = Graph::from_triples([("a", "r", "b"), ("c", "s", "c")]).unwrap();
        let b = g.node_id("b").unwrap();
        for r in g.relations() {
            for d in [Direction::Forward, Direction::Backward] {
                if d == Direction::Backward && r == RelationId(0) {
                    continue;
                }
                assert!(g.neighbors(b, r, d).is_empty());
            }
        }
        assert_eq!(g.degree(b, Direction::Forward), 0);
    }

    #[test]
    fn self_loops_are_stored() {
        let g = Graph::from_triples([("x", "r", "x")]).unwrap();
        let x = g.node_id("x").unwrap();
        assert_eq!(g.neighbors(x, RelationId(0), Direction::Forward), &[x]);
        assert_eq!(g.neighbors(x, RelationId(0), Direction::Backward), &[x]);
    }

    fn triples_strategy() -> impl Strategy<Value = Vec<(u8, u8, u8)>> {
        prop::collection::vec((0u8..12, 0u8..5, 0u8..12), 0..80)
    }

    fn build(triples: &[(u8, u8, u8)]) -> Graph {
        let strings: Vec<(String, String, String)> =
            triples.iter().map(|(s, r, o)| (format!("e{s}"), format!("p{r}"), format!("e{o}"))).collect();
        Graph::from_triples(strings.iter().map(|(s, r, o)| (s.as_str(), r.as_str(), o.as_str()))).unwrap()
    }

    proptest! {
        #[test]
        fn indexes_are_consistent(triples in triples_strategy()) {
            let g = build(&triples);
            let total: usize = g.relations().map(|r| g.relation_size(r).unwrap()).sum();
            prop_assert_eq!(total, g.fact_count());
            for r in g.relations() {
                prop_assert!(g.relation_size(r).unwrap() >= 1);
            }
            for f in g.facts() {
                prop_assert!(g.neighbors(f.subject, f.relation, Direction::Forward).contains(&f.object));
                prop_assert!(g.neighbors(f.object, f.relation, Direction::Backward).contains(&f.subject));
                prop_assert!(g.has_fact(f.subject, f.relation, f.object));
                prop_assert!(g.has_outgoing(f.subject, f.relation));
            }
            let adjacency_total: usize = g.nodes().map(|v| g.degree(v, Direction::Forward)).sum();
            prop_assert_eq!(adjacency_total, g.fact_count());
            let mut distinct: Vec<_> = triples.clone();
            distinct.sort();
            distinct.dedup();
            prop_assert_eq!(distinct.len(), g.fact_count());
        }

        #[test]
        fn reserialize_then_reload_is_identity(triples in triples_strategy()) {
            let g = build(&triples);
            let mut buf = Vec::new();
            g.write_tsv(&mut buf).unwrap();
            let h = load_facts(buf.as_slice(), FactFormat::Tsv).unwrap();
            let mut a = g.fact_strings();
            let mut b = h.fact_strings();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }
}
