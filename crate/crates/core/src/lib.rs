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

//! Graph-pattern association rule mining over fact-triple knowledge bases.
//!
//! A [`Graph`] is loaded from TSV facts, rules are enumerated over twenty
//! fixed path-closure templates, and every rule is scored with support,
//! head coverage, standard confidence and PCA confidence.
//!
//! ```
//! use gpar_miner::{mine, Graph, MiningConfig};
//!
//! let g = Graph::from_triples([
//!     ("alice", "isMarriedTo", "bob"),
//!     ("alice", "hasChild", "carl"),
//!     ("bob", "hasChild", "carl"),
//! ])
//! .unwrap();
//! let rules = mine(&g, &MiningConfig::default()).unwrap();
//! assert!(!rules.is_empty());
//! ```

pub mod cli;
pub mod graph;
pub mod matcher;
pub mod miner;
pub mod oracle;
pub mod patterns;
pub mod report;

pub use graph::{load_facts, Fact, FactFormat, Graph, GraphBuilder, GraphError, Node, NodeId, RelationId};
pub use matcher::{count_body_pairs, count_pca_pairs, count_support, match_counts, MatchCounts};
pub use miner::{enumerate_rules, mine, score_rules, MinerError, MiningConfig, Rational, RuleCollection, RuleStats};
pub use patterns::{all_templates, head_atom, parse_rule, render_rule, Atom, Direction, PatternTemplate, Rule};
pub use report::{build_report, write_report, write_rules, ComparisonReport, OutputFormat, Percentage};
