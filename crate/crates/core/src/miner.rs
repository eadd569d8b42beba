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

//! Rule enumeration and scoring.
//!
//! [`enumerate_rules`] discovers, for every selected template, the relation
//! label tuples that actually close around some head fact, together with
//! their support. Discovery is driven by the head facts: each head fact
//! fixes both end variables of the body path, so only label tuples realised
//! between those two nodes are visited.
//!
//! [`score_rules`] then counts body pairs and PCA pairs for each discovered
//! rule, grouping rules that share a body so each body is walked once, and
//! derives head coverage, standard confidence and PCA confidence as exact
//! rationals.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::graph::{Graph, NodeId, RelationId};
use crate::matcher::{count_body_group, count_walk_group, HeadSpec, MatchCounts, Plan, Scratch};
use crate::patterns::{all_templates, render_rule, template, Direction, PatternError, PatternTemplate, Rule};

/// Exact non-negative rational used for thresholds and scores.
pub type Rational = Ratio<u64>;

#[derive(Debug, Error)]
pub enum MinerError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("rule refers to relation {0}, which the graph does not contain")]
    UnknownRelation(RelationId),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiningConfig {
    pub min_head_coverage: Rational,
    /// Distinct pattern variables must bind distinct nodes.
    pub injective: bool,
    /// Sorted, deduplicated template ids in `1..=20`.
    pub template_ids: Vec<u8>,
    pub min_support: u64,
    pub top_k: Option<usize>,
}

impl Default for MiningConfig {
    fn default() -> Self {
        MiningConfig {
            min_head_coverage: Ratio::new(1, 100),
            injective: true,
            template_ids: (1..=20).collect(),
            min_support: 1,
            top_k: None,
        }
    }
}

impl MiningConfig {
    pub fn validate(&self) -> Result<(), MinerError> {
        if self.min_head_coverage > Ratio::from_integer(1) {
            return Err(MinerError::InvalidConfig(format!(
                "min head coverage {} is above 1",
                format_ratio(self.min_head_coverage, 6)
            )));
        }
        if self.min_support < 1 {
            return Err(MinerError::InvalidConfig("min support must be at least 1".into()));
        }
        if self.template_ids.is_empty() {
            return Err(MinerError::InvalidConfig("no templates selected".into()));
        }
        if let Some(bad) = self.template_ids.iter().find(|&&id| template(id).is_none()) {
            return Err(MinerError::InvalidConfig(format!("unknown template id {bad}")));
        }
        Ok(())
    }

    /// The selected templates, in id order.
    pub fn templates(&self) -> Vec<PatternTemplate> {
        let mut ids = self.template_ids.clone();
        ids.sort_unstable();
        ids.dedup();
        ids.into_iter().filter_map(template).collect()
    }
}

/// Parse `"0.01"`, `"1"`, `".5"` or `"1/3"` into an exact rational.
pub fn parse_ratio(text: &str) -> Result<Rational, MinerError> {
    let bad = || MinerError::InvalidConfig(format!("{text:?} is not a non-negative decimal or fraction"));
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        let d: u64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) || frac.len() > 18 {
        return Err(bad());
    }
    let den = 10u64.pow(frac.len() as u32);
    let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    let num = int.checked_mul(den).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
    Ok(Ratio::new(num, den))
}

/// Round `value` half-up to `places` decimals.
pub fn format_ratio(value: Rational, places: u32) -> String {
    let scale = 10u128.pow(places);
    let num = u128::from(*value.numer());
    let den = u128::from(*value.denom());
    let scaled = (2 * num * scale + den) / (2 * den);
    let int = scaled / scale;
    if places == 0 {
        return int.to_string();
    }
    format!("{int}.{:0width$}", scaled % scale, width = places as usize)
}

/// A discovered rule and its support count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollectedRule {
    pub rule: Rule,
    pub count: u64,
}

/// Output of [`enumerate_rules`]; rules are unique and ordered by
/// `(template, head relation, body relations)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleCollection {
    pub entries: Vec<CollectedRule>,
}

impl RuleCollection {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Scores of one rule. Ratios are exact; formatting is a presentation step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleStats {
    pub rule: Rule,
    /// Canonical rendering, see [`render_rule`].
    pub text: String,
    pub support: u64,
    pub body_pairs: u64,
    pub pca_pairs: u64,
    /// Number of facts carrying the head relation.
    pub head_size: u64,
    pub head_coverage: Rational,
    pub std_conf: Rational,
    pub pca_conf: Rational,
}

impl RuleStats {
    /// `None` when a denominator is zero.
    pub fn from_counts(rule: Rule, text: String, counts: MatchCounts, head_size: u64) -> Option<RuleStats> {
        if head_size == 0 || counts.body_pairs == 0 || counts.pca_pairs == 0 {
            return None;
        }
        Some(RuleStats {
            rule,
            text,
            support: counts.support,
            body_pairs: counts.body_pairs,
            pca_pairs: counts.pca_pairs,
            head_size,
            head_coverage: Ratio::new(counts.support, head_size),
            std_conf: Ratio::new(counts.support, counts.body_pairs),
            pca_conf: Ratio::new(counts.support, counts.pca_pairs),
        })
    }

    pub fn counts(&self) -> MatchCounts {
        MatchCounts { support: self.support, body_pairs: self.body_pairs, pca_pairs: self.pca_pairs }
    }
}

impl fmt::Display for RuleStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}  supp={} hc={} std={} pca={}",
            self.text,
            self.support,
            format_ratio(self.head_coverage, 6),
            format_ratio(self.std_conf, 6),
            format_ratio(self.pca_conf, 6)
        )
    }
}

/// Output order: standard confidence descending, then support descending,
/// then canonical text ascending.
pub fn rank_by_std(a: &RuleStats, b: &RuleStats) -> Ordering {
    b.std_conf.cmp(&a.std_conf).then(b.support.cmp(&a.support)).then_with(|| a.text.cmp(&b.text))
}

/// Same as [`rank_by_std`] with PCA confidence as the leading key.
pub fn rank_by_pca(a: &RuleStats, b: &RuleStats) -> Ordering {
    b.pca_conf.cmp(&a.pca_conf).then(b.support.cmp(&a.support)).then_with(|| a.text.cmp(&b.text))
}

const NO_RELATION: RelationId = RelationId(u32::MAX);
type LabelTuple = [RelationId; 3];

/// Label tuples found for one (template, head relation) work unit.
type UnitTally = (u8, RelationId, Vec<(LabelTuple, u64)>);

/// Head facts per discovery work unit.
const DISCOVERY_CHUNK: usize = 256;

/// Node-keyed multimap `node -> [relation]`, reset in O(1) between uses.
struct SideMap {
    epoch: u32,
    stamp: Vec<u32>,
    first: Vec<u32>,
    entries: Vec<(RelationId, u32)>,
    keys: Vec<NodeId>,
}

const END: u32 = u32::MAX;

impl SideMap {
    fn new(n: usize) -> SideMap {
        SideMap { epoch: 0, stamp: vec![0; n], first: vec![END; n], entries: Vec::new(), keys: Vec::new() }
    }

    fn clear(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        self.entries.clear();
        self.keys.clear();
    }

    #[inline]
    fn insert(&mut self, v: NodeId, r: RelationId) {
        let i = v.index();
        let next = if self.stamp[i] == self.epoch {
            self.first[i]
        } else {
            self.keys.push(v);
            END
        };
        self.stamp[i] = self.epoch;
        self.first[i] = self.entries.len() as u32;
        self.entries.push((r, next));
    }

    #[inline]
    fn contains(&self, v: NodeId) -> bool {
        self.stamp[v.index()] == self.epoch
    }

    #[inline]
    fn for_each(&self, v: NodeId, mut f: impl FnMut(RelationId)) {
        if !self.contains(v) {
            return;
        }
        let mut at = self.first[v.index()];
        while at != END {
            let (r, next) = self.entries[at as usize];
            f(r);
            at = next;
        }
    }

    /// Insert the `direction` neighbours of `v` with their relations,
    /// skipping `exclude` under injective matching.
    fn fill(&mut self, g: &Graph, v: NodeId, direction: Direction, exclude: Option<[NodeId; 2]>) {
        self.clear();
        for (r, ms) in g.adjacency(v, direction) {
            for &m in ms {
                if exclude.is_some_and(|ex| ex.contains(&m)) {
                    continue;
                }
                self.insert(m, r);
            }
        }
    }
}

/// Largest dense tally table, in label tuples.
const DENSE_TALLY_LIMIT: usize = 1 << 21;

/// Per-worker count of head facts connected by each label tuple. A tuple
/// found several times for one fact counts once.
struct TupleTally {
    width: usize,
    len: usize,
    dense: bool,
    fact: u32,
    stamp: Vec<u32>,
    count: Vec<u64>,
    touched: Vec<u32>,
    found: Vec<LabelTuple>,
    sparse: FxHashMap<LabelTuple, u64>,
}

impl TupleTally {
    fn new(relations: usize) -> TupleTally {
        TupleTally {
            width: relations.max(1),
            len: 1,
            dense: true,
            fact: 0,
            stamp: Vec::new(),
            count: Vec::new(),
            touched: Vec::new(),
            found: Vec::new(),
            sparse: FxHashMap::default(),
        }
    }

    fn reset(&mut self, body_len: usize) {
        for &i in &self.touched {
            self.count[i as usize] = 0;
        }
        self.touched.clear();
        self.sparse.clear();
        self.len = body_len;
        let size = self.width.checked_pow(body_len as u32).filter(|&n| n <= DENSE_TALLY_LIMIT);
        self.dense = size.is_some();
        if let Some(n) = size {
            if self.stamp.len() < n {
                self.stamp.resize(n, 0);
                self.count.resize(n, 0);
            }
        }
    }

    fn begin_fact(&mut self) {
        if self.dense {
            self.fact = self.fact.wrapping_add(1);
            if self.fact == 0 {
                self.stamp.fill(0);
                self.fact = 1;
            }
        } else {
            self.found.clear();
        }
    }

    #[inline]
    fn add(&mut self, t: LabelTuple) {
        if !self.dense {
            self.found.push(t);
            return;
        }
        let mut i = 0;
        for r in &t[..self.len] {
            i = i * self.width + r.index();
        }
        if self.stamp[i] != self.fact {
            self.stamp[i] = self.fact;
            if self.count[i] == 0 {
                self.touched.push(i as u32);
            }
            self.count[i] += 1;
        }
    }

    fn end_fact(&mut self) {
        if !self.dense {
            self.found.sort_unstable();
            self.found.dedup();
            for &t in &self.found {
                *self.sparse.entry(t).or_insert(0) += 1;
            }
        }
    }

    fn drain(&mut self) -> Vec<(LabelTuple, u64)> {
        if !self.dense {
            return self.sparse.drain().collect();
        }
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            let mut rest = i as usize;
            let mut t = [NO_RELATION; 3];
            for slot in t[..self.len].iter_mut().rev() {
                *slot = RelationId((rest % self.width) as u32);
                rest /= self.width;
            }
            out.push((t, self.count[i as usize]));
            self.count[i as usize] = 0;
        }
        self.touched.clear();
        out
    }
}

/// Sum of `dir2`-degrees over the `dir1`-neighbours of `v`.
fn two_hop_cost(g: &Graph, v: NodeId, dir1: Direction, dir2: Direction) -> usize {
    g.adjacency(v, dir1).map(|(_, ns)| ns.iter().map(|&m| g.degree(m, dir2)).sum::<usize>()).sum()
}

struct Sides {
    near: SideMap,
    far: SideMap,
}

/// Add every label tuple `(r1, .., rk)` for which a path `u = V0 .. Vk = w`
/// with the given edge directions exists.
fn body_labels_between(
    g: &Graph,
    dirs: &[Direction],
    u: NodeId,
    w: NodeId,
    injective: bool,
    sides: &mut Sides,
    tally: &mut TupleTally,
) {
    let exclude = injective.then_some([u, w]);
    match *dirs {
        [d1] => {
            for (r1, ns) in g.adjacency(u, d1) {
                if ns.binary_search(&w).is_ok() {
                    tally.add([r1, NO_RELATION, NO_RELATION]);
                }
            }
        }
        [d1, d2] => {
            let far = &mut sides.far;
            far.fill(g, w, d2.flip(), exclude);
            for (r1, ms) in g.adjacency(u, d1) {
                for &m in ms {
                    far.for_each(m, |r2| tally.add([r1, r2, NO_RELATION]));
                }
            }
        }
        [d1, d2, d3] => {
            // Expand the middle edge from the end with the smaller two-hop
            // frontier; `near` holds that end's first hop, `far` the other's.
            let forward = two_hop_cost(g, u, d1, d2) <= two_hop_cost(g, w, d3.flip(), d2.flip());
            let (a, da, dm, b, db) = if forward { (u, d1, d2, w, d3.flip()) } else { (w, d3.flip(), d2.flip(), u, d1) };
            let Sides { near, far } = sides;
            near.fill(g, a, da, exclude);
            far.fill(g, b, db, exclude);
            if far.keys.is_empty() {
                return;
            }
            let mut emit = |ma: NodeId, r2: RelationId, mb: NodeId| {
                near.for_each(ma, |la| {
                    far.for_each(mb, |lb| tally.add(if forward { [la, r2, lb] } else { [lb, r2, la] }))
                })
            };
            for &ma in &near.keys {
                // A hub in the middle is cheaper to probe than to scan.
                let scan = g.degree(ma, dm);
                let probe = far.keys.len() * g.label_count(ma, dm) * 4;
                if scan <= probe {
                    for (r2, mbs) in g.adjacency(ma, dm) {
                        for &mb in mbs {
                            if far.contains(mb) && !(injective && mb == ma) {
                                emit(ma, r2, mb);
                            }
                        }
                    }
                } else {
                    for &mb in &far.keys {
                        if injective && mb == ma {
                            continue;
                        }
                        for (r2, mbs) in g.adjacency(ma, dm) {
                            if mbs.binary_search(&mb).is_ok() {
                                emit(ma, r2, mb);
                            }
                        }
                    }
                }
            }
        }
        _ => unreachable!("body paths have 1 to 3 edges"),
    }
}

struct DiscoveryUnit {
    template: PatternTemplate,
    head: RelationId,
    start: usize,
    end: usize,
}

/// Least support meeting both thresholds for a head relation of `head_size`
/// facts.
fn support_floor(config: &MiningConfig, head_size: u64) -> u64 {
    let hc = config.min_head_coverage;
    // ceil(hc * head_size) without overflow for realistic sizes.
    let need = (u128::from(*hc.numer()) * u128::from(head_size)).div_ceil(u128::from(*hc.denom()));
    config.min_support.max(need as u64)
}

/// Discover every non-tautological rule over the selected templates whose
/// support reaches both `config.min_support` and `config.min_head_coverage`.
pub fn enumerate_rules(g: &Graph, config: &MiningConfig) -> Result<RuleCollection, MinerError> {
    config.validate()?;
    let templates = config.templates();
    let mut units = Vec::new();
    for &t in &templates {
        for h in g.relations() {
            let n = g.relation_facts(h).len();
            for start in (0..n).step_by(DISCOVERY_CHUNK) {
                units.push(DiscoveryUnit { template: t, head: h, start, end: (start + DISCOVERY_CHUNK).min(n) });
            }
        }
    }

    let injective = config.injective;
    let partials: Vec<UnitTally> = units
        .par_iter()
        .map_init(
            || {
                let n = g.node_count();
                (Sides { near: SideMap::new(n), far: SideMap::new(n) }, TupleTally::new(g.relation_count()))
            },
            |(sides, tally), unit| {
                tally.reset(unit.template.body_len());
                for fact in &g.relation_facts(unit.head)[unit.start..unit.end] {
                    let (u, w) = match unit.template.head_dir {
                        Direction::Forward => (fact.subject, fact.object),
                        Direction::Backward => (fact.object, fact.subject),
                    };
                    if injective && u == w {
                        continue;
                    }
                    tally.begin_fact();
                    body_labels_between(g, unit.template.body_dirs, u, w, injective, sides, tally);
                    tally.end_fact();
                }
                (unit.template.id, unit.head, tally.drain())
            },
        )
        .collect();

    let mut merged: FxHashMap<(u8, RelationId, LabelTuple), u64> = FxHashMap::default();
    for (tid, head, list) in partials {
        for (labels, c) in list {
            *merged.entry((tid, head, labels)).or_insert(0) += c;
        }
    }
    let mut keys: Vec<((u8, RelationId, LabelTuple), u64)> = merged
        .into_iter()
        .filter(|&((_, head, _), c)| c >= support_floor(config, g.relation_facts(head).len() as u64))
        .collect();
    keys.sort_unstable();

    let mut entries = Vec::with_capacity(keys.len());
    for ((tid, head, labels), count) in keys {
        let t = template(tid).expect("selected template");
        let body = labels[..t.body_len()].to_vec();
        match Rule::new(t, body, head) {
            Ok(rule) => entries.push(CollectedRule { rule, count }),
            Err(PatternError::Tautology) => {}
            Err(e) => return Err(e.into()),
        }
    }
    log::debug!("enumerated {} candidate rules over {} templates", entries.len(), templates.len());
    Ok(RuleCollection { entries })
}

/// Compute exact scores for every collected rule and keep those meeting the
/// head-coverage and support thresholds, ranked by [`rank_by_std`].
pub fn score_rules(
    g: &Graph,
    collection: &RuleCollection,
    config: &MiningConfig,
) -> Result<Vec<RuleStats>, MinerError> {
    config.validate()?;
    for entry in &collection.entries {
        if let Some(r) = entry.rule.relations().find(|r| r.index() >= g.relation_count()) {
            return Err(MinerError::UnknownRelation(r));
        }
    }

    // Rules sharing a body are counted in one walk; bodies sharing all but
    // the last walk step are walked together.
    type WalkKey = (u8, bool, Vec<(RelationId, Direction)>, Direction);
    type Lasts = Vec<(RelationId, Vec<usize>)>;
    let mut walks: FxHashMap<WalkKey, FxHashMap<RelationId, Vec<usize>>> = FxHashMap::default();
    for (i, entry) in collection.entries.iter().enumerate() {
        let t = entry.rule.template();
        let plan = Plan::new(g, t.body_dirs, entry.rule.body_relations());
        let (&(last, last_dir), prefix) = plan.steps.split_last().expect("non-empty body");
        // One-edge bodies have no shared prefix; key them by the whole walk.
        let prefix = if prefix.is_empty() { plan.steps.clone() } else { prefix.to_vec() };
        walks.entry((t.body_class(), plan.from_v0, prefix, last_dir)).or_default().entry(last).or_default().push(i);
    }
    let mut walks: Vec<(WalkKey, Lasts)> = walks
        .into_iter()
        .map(|(key, lasts)| {
            let mut lasts: Lasts = lasts.into_iter().collect();
            lasts.sort_unstable();
            (key, lasts)
        })
        .collect();
    walks.sort_unstable();

    let injective = config.injective;
    let head_of = |i: usize| {
        let rule = &collection.entries[i].rule;
        HeadSpec { relation: rule.head_relation(), direction: rule.template().head_dir }
    };
    let counted: Vec<(usize, MatchCounts)> = walks
        .par_iter()
        .map_init(
            || Scratch::new(g),
            |scratch, ((_, from_v0, prefix, last_dir), lasts)| {
                let heads: Vec<Vec<HeadSpec>> =
                    lasts.iter().map(|(_, members)| members.iter().map(|&i| head_of(i)).collect()).collect();
                let counts: Vec<Vec<MatchCounts>> = if lasts.len() == 1 {
                    let rule = &collection.entries[lasts[0].1[0]].rule;
                    vec![count_body_group(
                        g,
                        rule.template().body_dirs,
                        rule.body_relations(),
                        &heads[0],
                        injective,
                        scratch,
                    )]
                } else {
                    let specs: Vec<(RelationId, &[HeadSpec])> =
                        lasts.iter().zip(&heads).map(|((r, _), h)| (*r, h.as_slice())).collect();
                    count_walk_group(g, *from_v0, prefix, *last_dir, &specs, injective, scratch)
                };
                lasts
                    .iter()
                    .zip(counts)
                    .flat_map(|((_, members), c)| members.iter().copied().zip(c))
                    .collect::<Vec<_>>()
            },
        )
        .flatten()
        .collect();

    let mut stats = Vec::new();
    for (i, counts) in counted {
        let entry = &collection.entries[i];
        if counts.support < config.min_support {
            continue;
        }
        let head_size = g.relation_facts(entry.rule.head_relation()).len() as u64;
        if Ratio::new(counts.support, head_size) < config.min_head_coverage {
            continue;
        }
        let text = render_rule(&entry.rule, g)?;
        match RuleStats::from_counts(entry.rule.clone(), text, counts, head_size) {
            Some(s) => stats.push(s),
            None => log::warn!("dropping rule with an undefined confidence: {:?}", entry.rule),
        }
    }
    stats.sort_by(rank_by_std);
    if let Some(k) = config.top_k {
        stats.truncate(k);
    }
    Ok(stats)
}

/// [`enumerate_rules`] followed by [`score_rules`].
pub fn mine(g: &Graph, config: &MiningConfig) -> Result<Vec<RuleStats>, MinerError> {
    let collection = enumerate_rules(g, config)?;
    score_rules(g, &collection, config)
}

/// Every template id, for callers building a config by hand.
pub fn all_template_ids() -> Vec<u8> {
    all_templates().iter().map(|t| t.id).collect()
}
