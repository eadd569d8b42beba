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

//! The twenty path-closure rule templates and concrete rules over them.
//!
//! A template is a body path `V0 - V1 - ... - Vk` (k in 1..=3) whose edges
//! each carry a [`Direction`], plus a head edge joining `V0` and `Vk`.
//! Binding every edge to a relation label gives a [`Rule`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, RelationId};

/// Orientation of a pattern edge.
///
/// For body edge `i`, `Forward` points from `V(i)` to `V(i+1)`. For the head
/// edge, `Forward` points from `V0` to `Vk`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    #[inline]
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

use Direction::{Backward as B, Forward as F};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PatternTemplate {
    pub id: u8,
    pub body_dirs: &'static [Direction],
    pub head_dir: Direction,
}

impl PatternTemplate {
    /// Number of body edges, `k`.
    pub fn body_len(&self) -> usize {
        self.body_dirs.len()
    }

    /// Templates `2n-1` and `2n` share a body and differ only in the head.
    pub fn body_class(&self) -> u8 {
        self.id.div_ceil(2)
    }
}

macro_rules! template {
    ($id:expr, [$($d:expr),+], $h:expr) => {
        PatternTemplate { id: $id, body_dirs: &[$($d),+], head_dir: $h }
    };
}

// Row n of the table gives ids 2n-1 and 2n, in the order the row lists its
// two association rules.
static TEMPLATES: [PatternTemplate; 20] = [
    template!(1, [F], B),
    template!(2, [F], F),
    template!(3, [F, F], F),
    template!(4, [F, F], B),
    template!(5, [F, B], F),
    template!(6, [F, B], B),
    template!(7, [B, F], F),
    template!(8, [B, F], B),
    template!(9, [F, F, F], F),
    template!(10, [F, F, F], B),
    template!(11, [F, F, B], F),
    template!(12, [F, F, B], B),
    template!(13, [B, F, F], F),
    template!(14, [B, F, F], B),
    template!(15, [B, F, B], F),
    template!(16, [B, F, B], B),
    template!(17, [F, B, F], F),
    template!(18, [F, B, F], B),
    template!(19, [F, B, B], F),
    template!(20, [F, B, B], B),
];

/// All twenty templates in ascending id order.
pub fn all_templates() -> &'static [PatternTemplate] {
    &TEMPLATES
}

pub fn template(id: u8) -> Option<PatternTemplate> {
    TEMPLATES.get(usize::from(id).checked_sub(1)?).copied()
}

/// A directed labelled edge between two pattern variables, `relation(subject, object)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub subject: usize,
    pub relation: RelationId,
    pub object: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("template {template} needs {expected} body relations, got {got}")]
    BodyLength { template: u8, expected: usize, got: usize },
    #[error("head atom repeats a body atom")]
    Tautology,
    #[error("no template with id {0}")]
    UnknownTemplate(u8),
    #[error("no template with body {body:?} and head {head:?}")]
    NoSuchShape { body: Vec<Direction>, head: Direction },
    #[error("relation {0} has no name")]
    UnknownRelation(RelationId),
    #[error("unknown relation label {0:?}")]
    UnknownLabel(String),
    #[error("cannot parse rule {text:?}: {reason}")]
    Parse { text: String, reason: &'static str },
}

/// A template with a relation bound to every body edge and to the head.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    template: PatternTemplate,
    body_relations: Vec<RelationId>,
    head_relation: RelationId,
}

impl Rule {
    /// Fails on a body of the wrong length or a head that repeats a body atom.
    pub fn new(
        template: PatternTemplate,
        body_relations: Vec<RelationId>,
        head_relation: RelationId,
    ) -> Result<Rule, PatternError> {
        if body_relations.len() != template.body_len() {
            return Err(PatternError::BodyLength {
                template: template.id,
                expected: template.body_len(),
                got: body_relations.len(),
            });
        }
        let rule = Rule { template, body_relations, head_relation };
        if rule.is_tautological() {
            return Err(PatternError::Tautology);
        }
        Ok(rule)
    }

    pub fn template(&self) -> PatternTemplate {
        self.template
    }

    pub fn body_relations(&self) -> &[RelationId] {
        &self.body_relations
    }

    pub fn head_relation(&self) -> RelationId {
        self.head_relation
    }

    pub fn body_len(&self) -> usize {
        self.body_relations.len()
    }

    pub fn body_atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.template.body_dirs.iter().zip(&self.body_relations).enumerate().map(|(i, (dir, &r))| match dir {
            Direction::Forward => Atom { subject: i, relation: r, object: i + 1 },
            Direction::Backward => Atom { subject: i + 1, relation: r, object: i },
        })
    }

    pub fn head_atom(&self) -> Atom {
        head_atom(self)
    }

    fn is_tautological(&self) -> bool {
        let head = self.head_atom();
        self.body_atoms().any(|a| a == head)
    }

    /// Every relation the rule mentions, body first.
    pub fn relations(&self) -> impl Iterator<Item = RelationId> + '_ {
        self.body_relations.iter().copied().chain(std::iter::once(self.head_relation))
    }
}

/// Head edge of `rule` as `(subject var, relation, object var)`.
pub fn head_atom(rule: &Rule) -> Atom {
    let last = rule.body_len();
    match rule.template.head_dir {
        Direction::Forward => Atom { subject: 0, relation: rule.head_relation, object: last },
        Direction::Backward => Atom { subject: last, relation: rule.head_relation, object: 0 },
    }
}

/// Relation label lookup used when rendering rules.
pub trait RelationNames {
    fn relation_label(&self, id: RelationId) -> Option<&str>;
}

impl RelationNames for Graph {
    fn relation_label(&self, id: RelationId) -> Option<&str> {
        self.relation_name(id)
    }
}

impl RelationNames for [String] {
    fn relation_label(&self, id: RelationId) -> Option<&str> {
        self.get(id.index()).map(String::as_str)
    }
}

impl RelationNames for Vec<String> {
    fn relation_label(&self, id: RelationId) -> Option<&str> {
        self.as_slice().relation_label(id)
    }
}

struct AtomText<'a>(Atom, &'a str);

impl fmt::Display for AtomText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?v{} <{}> ?v{}", self.0.subject, self.1, self.0.object)
    }
}

/// Canonical text form: `?v0 <r1> ?v1 & ... => ?vi <rh> ?vj`.
///
/// Each atom is printed subject first, so direction flags are folded into
/// argument order.
pub fn render_rule<N: RelationNames + ?Sized>(rule: &Rule, names: &N) -> Result<String, PatternError> {
    let label = |r: RelationId| names.relation_label(r).ok_or(PatternError::UnknownRelation(r));
    let mut out = String::new();
    for (i, atom) in rule.body_atoms().enumerate() {
        if i > 0 {
            out.push_str(" & ");
        }
        out.push_str(&AtomText(atom, label(atom.relation)?).to_string());
    }
    out.push_str(" => ");
    let head = rule.head_atom();
    out.push_str(&AtomText(head, label(head.relation)?).to_string());
    Ok(out)
}

fn parse_atom(text: &str, whole: &str) -> Result<(usize, String, usize), PatternError> {
    let err = |reason| PatternError::Parse { text: whole.to_owned(), reason };
    let var = |s: &str| -> Result<usize, PatternError> {
        s.strip_prefix("?v").and_then(|d| d.parse().ok()).ok_or_else(|| err("bad variable"))
    };
    let (subject, rest) = text.split_once(" <").ok_or_else(|| err("missing relation"))?;
    let (label, object) = rest.rsplit_once("> ").ok_or_else(|| err("missing relation"))?;
    Ok((var(subject.trim())?, label.to_owned(), var(object.trim())?))
}

/// Inverse of [`render_rule`]; `resolve` maps labels back to ids.
pub fn parse_rule<F>(text: &str, mut resolve: F) -> Result<Rule, PatternError>
where
    F: FnMut(&str) -> Option<RelationId>,
{
    let err = |reason| PatternError::Parse { text: text.to_owned(), reason };
    let (body, head) = text.split_once(" => ").ok_or_else(|| err("missing ' => '"))?;
    let mut dirs = Vec::new();
    let mut relations = Vec::new();
    for (i, atom) in body.split(" & ").enumerate() {
        let (s, label, o) = parse_atom(atom, text)?;
        let dir = if (s, o) == (i, i + 1) {
            Direction::Forward
        } else if (s, o) == (i + 1, i) {
            Direction::Backward
        } else {
            return Err(err("body atoms must form the path ?v0 .. ?vk"));
        };
        dirs.push(dir);
        relations.push(resolve(&label).ok_or(PatternError::UnknownLabel(label))?);
    }
    let k = dirs.len();
    let (s, label, o) = parse_atom(head, text)?;
    let head_dir = if (s, o) == (0, k) {
        Direction::Forward
    } else if (s, o) == (k, 0) {
        Direction::Backward
    } else {
        return Err(err("head must join ?v0 and the last body variable"));
    };
    let head_relation = resolve(&label).ok_or(PatternError::UnknownLabel(label))?;
    let template = TEMPLATES
        .iter()
        .find(|t| t.body_dirs == dirs.as_slice() && t.head_dir == head_dir)
        .copied()
        .ok_or(PatternError::NoSuchShape { body: dirs, head: head_dir })?;
    Rule::new(template, relations, head_relation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn names() -> Vec<String> {
        ["isMarriedTo", "hasChild", "r1", "r2", "r3", "r4"].iter().map(|s| s.to_string()).collect()
    }

    fn lookup(label: &str) -> Option<RelationId> {
        names().iter().position(|n| n == label).map(|i| RelationId(i as u32))
    }

    #[test]
    fn twenty_templates_in_id_order() {
        let ts = all_templates();
        assert_eq!(ts.len(), 20);
        for (i, t) in ts.iter().enumerate() {
            assert_eq!(usize::from(t.id), i + 1);
        }
        let by_len = |k| ts.iter().filter(|t| t.body_len() == k).count();
        assert_eq!((by_len(1), by_len(2), by_len(3)), (2, 6, 12));
        let distinct: HashSet<_> = ts.iter().map(|t| (t.body_dirs, t.head_dir)).collect();
        assert_eq!(distinct.len(), 20);
    }

    #[test]
    fn template_one_is_the_inverse_rule() {
        let t = template(1).unwrap();
        assert_eq!(t.body_dirs, &[F]);
        assert_eq!(t.head_dir, B);
        assert_eq!(template(2).unwrap().head_dir, F);
        assert!(template(0).is_none());
        assert!(template(21).is_none());
    }

    #[test]
    fn table_rows_share_bodies() {
        for pair in all_templates().chunks(2) {
            assert_eq!(pair[0].body_dirs, pair[1].body_dirs);
            assert_ne!(pair[0].head_dir, pair[1].head_dir);
            assert_eq!(pair[0].body_class(), pair[1].body_class());
        }
    }

    #[test]
    fn excluded_body_tuples_are_path_reversals_of_included_ones() {
        // Reading a path from the other end reverses edge order and flips
        // every direction.
        let reverse = |dirs: &[Direction]| -> Vec<Direction> { dirs.iter().rev().map(|d| d.flip()).collect() };
        for k in 1..=3usize {
            let included: HashSet<Vec<Direction>> =
                all_templates().iter().filter(|t| t.body_len() == k).map(|t| t.body_dirs.to_vec()).collect();
            for mask in 0..(1u32 << k) {
                let dirs: Vec<Direction> = (0..k).map(|i| if mask >> i & 1 == 1 { B } else { F }).collect();
                if !included.contains(&dirs) {
                    assert!(included.contains(&reverse(&dirs)), "{dirs:?} not covered");
                }
            }
        }
    }

    #[test]
    fn head_atom_orientation() {
        let t1 = Rule::new(template(1).unwrap(), vec![RelationId(2)], RelationId(3)).unwrap();
        assert_eq!(t1.head_atom(), Atom { subject: 1, relation: RelationId(3), object: 0 });
        let t2 = Rule::new(template(2).unwrap(), vec![RelationId(2)], RelationId(3)).unwrap();
        assert_eq!(head_atom(&t2), Atom { subject: 0, relation: RelationId(3), object: 1 });
        for t in all_templates().iter().filter(|t| t.body_len() == 3 && t.head_dir == F) {
            let r = Rule::new(*t, vec![RelationId(0); 3], RelationId(1)).unwrap();
            assert_eq!(r.head_atom(), Atom { subject: 0, relation: RelationId(1), object: 3 });
        }
    }

    #[test]
    fn tautologies_and_bad_lengths_rejected() {
        let t2 = template(2).unwrap();
        assert_eq!(Rule::new(t2, vec![RelationId(1)], RelationId(1)), Err(PatternError::Tautology));
        // Same label against the edge direction is a different atom.
        assert!(Rule::new(template(1).unwrap(), vec![RelationId(1)], RelationId(1)).is_ok());
        assert!(matches!(
            Rule::new(template(9).unwrap(), vec![RelationId(1)], RelationId(1)),
            Err(PatternError::BodyLength { template: 9, expected: 3, got: 1 })
        ));
        // Repeated body labels are fine.
        assert!(
            Rule::new(template(15).unwrap(), vec![RelationId(0), RelationId(4), RelationId(4)], RelationId(0)).is_ok()
        );
    }

    #[test]
    fn render_marriage_rule() {
        let rule = Rule::new(template(7).unwrap(), vec![RelationId(0), RelationId(1)], RelationId(1)).unwrap();
        assert_eq!(
            render_rule(&rule, &names()).unwrap(),
            "?v1 <isMarriedTo> ?v0 & ?v1 <hasChild> ?v2 => ?v0 <hasChild> ?v2"
        );
    }

    #[test]
    fn render_k1_inverse() {
        let rule = Rule::new(template(1).unwrap(), vec![RelationId(2)], RelationId(3)).unwrap();
        assert_eq!(render_rule(&rule, &names()).unwrap(), "?v0 <r1> ?v1 => ?v1 <r2> ?v0");
    }

    #[test]
    fn render_unknown_relation_fails() {
        let rule = Rule::new(template(1).unwrap(), vec![RelationId(42)], RelationId(3)).unwrap();
        assert_eq!(render_rule(&rule, &names()), Err(PatternError::UnknownRelation(RelationId(42))));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(parse_rule("nonsense", lookup), Err(PatternError::Parse { .. })));
        assert!(matches!(parse_rule("?v0 <r1> ?v2 => ?v2 <r2> ?v0", lookup), Err(PatternError::Parse { .. })));
        assert!(matches!(parse_rule("?v1 <r1> ?v0 => ?v0 <r2> ?v1", lookup), Err(PatternError::NoSuchShape { .. })));
        assert!(matches!(parse_rule("?v0 <nope> ?v1 => ?v1 <r2> ?v0", lookup), Err(PatternError::UnknownLabel(_))));
    }

    fn any_rule() -> impl Strategy<Value = Rule> {
        (1u8..=20, prop::collection::vec(0u32..6, 3), 0u32..6).prop_filter_map("tautology", |(id, body, head)| {
            let t = template(id).unwrap();
            let body = body[..t.body_len()].iter().map(|&r| RelationId(r)).collect();
            Rule::new(t, body, RelationId(head)).ok()
        })
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(rule in any_rule()) {
            let text = render_rule(&rule, &names()).unwrap();
            prop_assert_eq!(parse_rule(&text, lookup).unwrap(), rule);
        }

        #[test]
        fn render_is_injective(a in any_rule(), b in any_rule()) {
            let ta = render_rule(&a, &names()).unwrap();
            let tb = render_rule(&b, &names()).unwrap();
            prop_assert_eq!(ta == tb, a == b);
        }
    }
}
