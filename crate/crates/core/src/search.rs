//! Bounded breadth-first search over prefix-overhang configurations.
//!
//! Two partial products that can still grow into a match must be
//! prefix-comparable, so only the part by which one exceeds the other
//! matters. A configuration keeps that overhang and forgets the common
//! prefix. When overhangs stay bounded the reachable configuration graph is
//! finite, and exhausting it without reaching the balanced configuration
//! proves that no match exists.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filters::Certificate;
use crate::model::{Domino, MatchSeq, PairSystem, TriSystem, Word};

/// Which track of a pair is longer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    First,
    Second,
}

/// Relation between two prefix-comparable partial products. An empty
/// overhang means the products are equal; `ahead` is then `First`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairConfig {
    ahead: Side,
    overhang: Word,
}

impl PairConfig {
    /// Equal (empty) products.
    pub fn start() -> Self {
        PairConfig {
            ahead: Side::First,
            overhang: Word::empty(),
        }
    }

    pub fn new(ahead: Side, overhang: impl Into<Word>) -> Self {
        let overhang = overhang.into();
        let ahead = if overhang.is_empty() {
            Side::First
        } else {
            ahead
        };
        PairConfig { ahead, overhang }
    }

    /// Configuration of two arbitrary products, or `None` when they are not
    /// prefix-comparable.
    pub fn from_products(first: &[u8], second: &[u8]) -> Option<Self> {
        if first.len() >= second.len() {
            first
                .starts_with(second)
                .then(|| PairConfig::new(Side::First, &first[second.len()..]))
        } else {
            second
                .starts_with(first)
                .then(|| PairConfig::new(Side::Second, &second[first.len()..]))
        }
    }

    pub fn ahead(&self) -> Side {
        self.ahead
    }

    pub fn overhang(&self) -> &Word {
        &self.overhang
    }

    pub fn is_balanced(&self) -> bool {
        self.overhang.is_empty()
    }

    fn tracks(&self) -> (&[u8], &[u8]) {
        match self.ahead {
            Side::First => (self.overhang.as_bytes(), &[]),
            Side::Second => (&[], self.overhang.as_bytes()),
        }
    }
}

impl fmt::Display for PairConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_balanced() {
            f.write_str("equal")
        } else {
            let side = match self.ahead {
                Side::First => "first",
                Side::Second => "second",
            };
            write!(f, "{side} ahead by {:?}", self.overhang.to_string())
        }
    }
}

/// Appends one pair to both tracks. `None` when the extended products stop
/// being prefix-comparable.
pub fn step_pair(config: &PairConfig, pair: (&Word, &Word)) -> Option<PairConfig> {
    let (a, b) = config.tracks();
    let first = [a, pair.0.as_bytes()].concat();
    let second = [b, pair.1.as_bytes()].concat();
    PairConfig::from_products(&first, &second)
}

/// Relation between three pairwise prefix-comparable partial products.
///
/// Stored as the three residues left after removing the longest common
/// prefix; at least one residue is empty and the others are prefixes of the
/// longest one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriConfig {
    top: Vec<u8>,
    middle: Vec<u8>,
    bottom: Vec<u8>,
}

impl TriConfig {
    pub fn start() -> Self {
        TriConfig {
            top: Vec::new(),
            middle: Vec::new(),
            bottom: Vec::new(),
        }
    }

    /// `None` unless the three products are pairwise prefix-comparable.
    pub fn from_products(top: &[u8], middle: &[u8], bottom: &[u8]) -> Option<Self> {
        let comparable = |x: &[u8], y: &[u8]| x.starts_with(y) || y.starts_with(x);
        if !(comparable(top, middle) && comparable(top, bottom) && comparable(middle, bottom)) {
            return None;
        }
        let common = top.len().min(middle.len()).min(bottom.len());
        Some(TriConfig {
            top: top[common..].to_vec(),
            middle: middle[common..].to_vec(),
            bottom: bottom[common..].to_vec(),
        })
    }

    /// Signed overhang of top over middle.
    pub fn top_middle(&self) -> PairConfig {
        PairConfig::from_products(&self.top, &self.middle).expect("residues are comparable")
    }

    /// Signed overhang of top over bottom.
    pub fn top_bottom(&self) -> PairConfig {
        PairConfig::from_products(&self.top, &self.bottom).expect("residues are comparable")
    }

    /// Residues after the common prefix, in row order.
    pub fn residues(&self) -> (&[u8], &[u8], &[u8]) {
        (&self.top, &self.middle, &self.bottom)
    }

    pub fn is_balanced(&self) -> bool {
        self.top.is_empty() && self.middle.is_empty() && self.bottom.is_empty()
    }

    /// Longest pairwise overhang.
    pub fn max_overhang(&self) -> usize {
        self.top.len().max(self.middle.len()).max(self.bottom.len())
    }
}

/// Appends one domino to the three tracks.
pub fn step_triple(config: &TriConfig, domino: &Domino) -> Option<TriConfig> {
    let top = [&config.top[..], domino.top.as_bytes()].concat();
    let middle = [&config.middle[..], domino.middle.as_bytes()].concat();
    let bottom = [&config.bottom[..], domino.bottom.as_bytes()].concat();
    TriConfig::from_products(&top, &middle, &bottom)
}

/// A system whose matches are searched for through configurations.
pub trait ConfigGraph {
    type Config: Clone + Eq + Hash;

    fn moves(&self) -> usize;

    /// Extend by the 1-based domino `index`.
    fn step(&self, config: &Self::Config, index: usize) -> Option<Self::Config>;

    fn is_balanced(config: &Self::Config) -> bool;

    fn overhang_len(config: &Self::Config) -> usize;
}

impl ConfigGraph for PairSystem {
    type Config = PairConfig;

    fn moves(&self) -> usize {
        self.len()
    }

    fn step(&self, config: &PairConfig, index: usize) -> Option<PairConfig> {
        let (a, b) = &self.pairs()[index - 1];
        step_pair(config, (a, b))
    }

    fn is_balanced(config: &PairConfig) -> bool {
        config.is_balanced()
    }

    fn overhang_len(config: &PairConfig) -> usize {
        config.overhang.len()
    }
}

impl ConfigGraph for TriSystem {
    type Config = TriConfig;

    fn moves(&self) -> usize {
        self.len()
    }

    fn step(&self, config: &TriConfig, index: usize) -> Option<TriConfig> {
        step_triple(config, &self.dominoes()[index - 1])
    }

    fn is_balanced(config: &TriConfig) -> bool {
        config.is_balanced()
    }

    fn overhang_len(config: &TriConfig) -> usize {
        config.max_overhang()
    }
}

/// Resource limits for one search run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_depth: usize,
    pub max_overhang: usize,
    pub max_states: usize,
}

impl SearchBounds {
    pub fn new(max_depth: usize, max_overhang: usize, max_states: usize) -> Result<Self> {
        if max_depth == 0 || max_overhang == 0 || max_states == 0 {
            return Err(Error::InvalidParams(
                "search bounds must be positive".into(),
            ));
        }
        Ok(SearchBounds {
            max_depth,
            max_overhang,
            max_states,
        })
    }
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_depth: 64,
            max_overhang: 64,
            max_states: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Depth,
    Overhang,
    States,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bound::Depth => "depth bound",
            Bound::Overhang => "overhang bound",
            Bound::States => "state bound",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Distinct configurations stored, the initial one included.
    pub states: usize,
    /// Deepest list length at which a configuration was stored.
    pub depth_reached: usize,
}

/// Why a search gave up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exhausted {
    /// The first bound that pruned a transition.
    pub bound: Bound,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(MatchSeq),
    CertifiedNo(Certificate),
    Unknown(Exhausted),
}

impl fmt::Display for SearchOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchOutcome::Found(m) => write!(f, "found {m}"),
            SearchOutcome::CertifiedNo(c) => write!(f, "no match: {c}"),
            SearchOutcome::Unknown(e) => write!(
                f,
                "unknown: {} hit after {} states, depth {}",
                e.bound, e.stats.states, e.stats.depth_reached
            ),
        }
    }
}

#[derive(Debug, Clone)]
struct Node<C> {
    config: C,
    parent: Option<usize>,
    /// 1-based domino that led here from `parent`.
    index: usize,
    depth: usize,
}

/// Breadth-first tree of every configuration a run stored, with parent
/// pointers.
#[derive(Debug, Clone)]
pub struct SearchTree<C> {
    nodes: Vec<Node<C>>,
}

impl<C> SearchTree<C> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn config(&self, node: usize) -> &C {
        &self.nodes[node].config
    }

    pub fn depth(&self, node: usize) -> usize {
        self.nodes[node].depth
    }

    /// Index sequence along tree edges from the root to `node`; its length is
    /// the node's depth.
    pub fn reconstruct(&self, node: usize) -> Vec<usize> {
        let mut path = Vec::with_capacity(self.nodes[node].depth);
        let mut cur = node;
        while let Some(parent) = self.nodes[cur].parent {
            path.push(self.nodes[cur].index);
            cur = parent;
        }
        path.reverse();
        path
    }
}

/// Result of a traced search run.
#[derive(Debug, Clone)]
pub struct Exploration<C> {
    pub outcome: SearchOutcome,
    pub stats: SearchStats,
    pub tree: SearchTree<C>,
    /// Tree node of the accepting configuration, when one was reached.
    pub accept: Option<usize>,
}

/// Breadth-first search from `initial` for a nonempty extension that
/// balances every track.
///
/// Dominoes are tried in ascending index order, so the first balanced
/// configuration generated is reached by the lexicographically least among
/// the shortest completions. The balanced configuration is accepting only
/// after at least one move; `initial` itself never counts.
pub fn explore<G: ConfigGraph>(
    graph: &G,
    initial: G::Config,
    bounds: &SearchBounds,
) -> Exploration<G::Config> {
    let mut tree = SearchTree { nodes: Vec::new() };
    let mut seen: HashMap<G::Config, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut pruned: Option<Bound> = None;
    let mut stats = SearchStats {
        states: 1,
        depth_reached: 0,
    };

    seen.insert(initial.clone(), 0);
    tree.nodes.push(Node {
        config: initial,
        parent: None,
        index: 0,
        depth: 0,
    });
    queue.push_back(0usize);

    while let Some(node) = queue.pop_front() {
        let depth = tree.nodes[node].depth;
        for index in 1..=graph.moves() {
            let Some(next) = graph.step(&tree.nodes[node].config, index) else {
                continue;
            };
            if depth == bounds.max_depth {
                pruned.get_or_insert(Bound::Depth);
                break;
            }
            if G::is_balanced(&next) {
                tree.nodes.push(Node {
                    config: next,
                    parent: Some(node),
                    index,
                    depth: depth + 1,
                });
                let accept = tree.nodes.len() - 1;
                let m = MatchSeq::new(tree.reconstruct(accept)).expect("accept has depth >= 1");
                return Exploration {
                    outcome: SearchOutcome::Found(m),
                    stats,
                    tree,
                    accept: Some(accept),
                };
            }
            if G::overhang_len(&next) > bounds.max_overhang {
                pruned.get_or_insert(Bound::Overhang);
                continue;
            }
            if seen.contains_key(&next) {
                continue;
            }
            if stats.states >= bounds.max_states {
                pruned.get_or_insert(Bound::States);
                continue;
            }
            tree.nodes.push(Node {
                config: next.clone(),
                parent: Some(node),
                index,
                depth: depth + 1,
            });
            let id = tree.nodes.len() - 1;
            seen.insert(next, id);
            queue.push_back(id);
            stats.states += 1;
            stats.depth_reached = stats.depth_reached.max(depth + 1);
        }
    }

    let outcome = match pruned {
        None => SearchOutcome::CertifiedNo(Certificate::ClosedStateGraph {
            states_explored: stats.states,
            depth_reached: stats.depth_reached,
        }),
        Some(bound) => SearchOutcome::Unknown(Exhausted { bound, stats }),
    };
    Exploration {
        outcome,
        stats,
        tree,
        accept: None,
    }
}

/// Semi-decision for a pair system: a shortest match, a closed-graph
/// certificate, or the bound that stopped the run.
pub fn search_pair(system: &PairSystem, bounds: &SearchBounds) -> Result<SearchOutcome> {
    system.validate().map_err(Error::InvalidSystem)?;
    Ok(explore(system, PairConfig::start(), bounds).outcome)
}

/// Semi-decision for the threefold game of a system.
pub fn search_triple(system: &TriSystem, bounds: &SearchBounds) -> Result<SearchOutcome> {
    system.validate().map_err(Error::InvalidSystem)?;
    Ok(explore(system, TriConfig::start(), bounds).outcome)
}
