//! Verification predicates for μ-way trades.
//!
//! Every check reports its findings as [`Violation`]s inside a [`Verdict`]
//! rather than failing fast, so a caller can print everything wrong with an
//! input at once.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::model::{degree_table, Block, Element, MuWayTrade};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Degenerate,
    BlockSize,
    VolumeMismatch,
    FoundationMismatch,
    CoverageMismatch,
    SharedBlock,
    RepeatedSubset,
    Replication,
    Divisibility,
    FoundationSize,
    // Latin trade axioms
    CellRange,
    DuplicateCell,
    CellSymbols,
    RowCount,
    ColumnCount,
    RowRepeat,
    ColumnRepeat,
    RowSymbols,
    ColumnSymbols,
    SymbolCount,
    // triple systems
    PairCover,
    ParallelClass,
    GroupPair,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::Degenerate => "degenerate",
            Rule::BlockSize => "block-size",
            Rule::VolumeMismatch => "volume-mismatch",
            Rule::FoundationMismatch => "foundation-mismatch",
            Rule::CoverageMismatch => "coverage-mismatch",
            Rule::SharedBlock => "shared-block",
            Rule::RepeatedSubset => "repeated-subset",
            Rule::Replication => "replication",
            Rule::Divisibility => "divisibility",
            Rule::FoundationSize => "foundation-size",
            Rule::CellRange => "cell-range",
            Rule::DuplicateCell => "duplicate-cell",
            Rule::CellSymbols => "cell-symbols",
            Rule::RowCount => "row-count",
            Rule::ColumnCount => "column-count",
            Rule::RowRepeat => "row-repeat",
            Rule::ColumnRepeat => "column-repeat",
            Rule::RowSymbols => "row-symbols",
            Rule::ColumnSymbols => "column-symbols",
            Rule::SymbolCount => "symbol-count",
            Rule::PairCover => "pair-cover",
            Rule::ParallelClass => "parallel-class",
            Rule::GroupPair => "group-pair",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub message: String,
    /// Offending blocks or subsets.
    pub witness: Vec<Vec<Element>>,
}

impl Violation {
    pub fn new(rule: Rule, message: impl Into<String>, witness: Vec<Vec<Element>>) -> Self {
        Violation { rule, message: message.into(), witness }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.rule.id(), self.message)
    }
}

/// Outcome of a check; valid exactly when there are no violations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Verdict {
    valid: bool,
    violations: Vec<Violation>,
}

impl Verdict {
    pub fn ok() -> Self {
        Verdict { valid: true, violations: Vec::new() }
    }

    pub fn from_violations(violations: Vec<Violation>) -> Self {
        Verdict { valid: violations.is_empty(), violations }
    }

    pub fn is_valid(&self) -> bool {
        self.valid
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    pub fn and(mut self, other: Verdict) -> Verdict {
        self.violations.extend(other.violations);
        Verdict::from_violations(self.violations)
    }
}

/// Occurrence counts of every covered `t`-subset, one count per collection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCoverage {
    mu: usize,
    counts: BTreeMap<Vec<Element>, Vec<usize>>,
}

impl PairCoverage {
    pub fn count(&self, subset: &[Element], collection: usize) -> usize {
        let mut key = subset.to_vec();
        key.sort_unstable();
        self.counts.get(&key).map_or(0, |c| c[collection])
    }

    pub fn counts(&self, subset: &[Element]) -> Vec<usize> {
        let mut key = subset.to_vec();
        key.sort_unstable();
        self.counts.get(&key).cloned().unwrap_or_else(|| vec![0; self.mu])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<Element>, &Vec<usize>)> {
        self.counts.iter()
    }

    /// Sum of counts in one collection.
    pub fn total(&self, collection: usize) -> usize {
        self.counts.values().map(|c| c[collection]).sum()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

pub fn pair_coverage(trade: &MuWayTrade) -> PairCoverage {
    let mu = trade.mu();
    let mut counts: BTreeMap<Vec<Element>, Vec<usize>> = BTreeMap::new();
    for (i, c) in trade.collections().iter().enumerate() {
        for b in c.blocks() {
            for s in b.subsets(trade.t()) {
                counts.entry(s).or_insert_with(|| vec![0; mu])[i] += 1;
            }
        }
    }
    PairCoverage { mu, counts }
}

fn fmt_set(s: &[Element]) -> String {
    let inner: Vec<String> = s.iter().map(ToString::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

/// Trade axioms: equal volumes, equal foundations, equal `t`-subset coverage,
/// and pairwise block-disjoint collections.
pub fn verify_trade(trade: &MuWayTrade) -> Verdict {
    let mut out = Vec::new();
    let mu = trade.mu();
    if mu < 2 {
        out.push(Violation::new(Rule::Degenerate, format!("a trade needs at least 2 collections, got {mu}"), vec![]));
    }
    if trade.collections().iter().any(|c| c.is_empty()) {
        out.push(Violation::new(Rule::Degenerate, "empty collection", vec![]));
    }
    if !out.is_empty() {
        return Verdict::from_violations(out);
    }

    let m = trade.volume();
    for (i, c) in trade.collections().iter().enumerate().skip(1) {
        if c.len() != m {
            out.push(Violation::new(
                Rule::VolumeMismatch,
                format!("collection {} has {} blocks, collection 1 has {m}", i + 1, c.len()),
                vec![],
            ));
        }
    }

    let first = trade.collections()[0].elements();
    for (i, c) in trade.collections().iter().enumerate().skip(1) {
        let e = c.elements();
        if e != first {
            let diff: Vec<Element> = first.symmetric_difference(&e).copied().collect();
            out.push(Violation::new(
                Rule::FoundationMismatch,
                format!("collection {} covers a different element set (differs on {})", i + 1, fmt_set(&diff)),
                vec![diff],
            ));
        }
    }

    let cov = pair_coverage(trade);
    for (s, counts) in cov.iter() {
        if counts.iter().any(|&c| c != counts[0]) {
            out.push(Violation::new(
                Rule::CoverageMismatch,
                format!("{}-subset {} covered {:?} times", trade.t(), fmt_set(s), counts),
                vec![s.clone()],
            ));
        }
    }

    let mut owner: BTreeMap<&Block, usize> = BTreeMap::new();
    for (i, c) in trade.collections().iter().enumerate() {
        for b in c.blocks().iter().collect::<BTreeSet<_>>() {
            if let Some(&j) = owner.get(b) {
                out.push(Violation::new(
                    Rule::SharedBlock,
                    format!("block {} occurs in collections {} and {}", fmt_set(b.elements()), j + 1, i + 1),
                    vec![b.elements().to_vec()],
                ));
            } else {
                owner.insert(b, i);
            }
        }
    }
    Verdict::from_violations(out)
}

/// Every `t`-subset occurs at most once in every collection.
pub fn verify_steiner(trade: &MuWayTrade) -> Verdict {
    let mut out = Vec::new();
    let t = trade.t();
    for (i, c) in trade.collections().iter().enumerate() {
        let mut first_seen: BTreeMap<Vec<Element>, &Block> = BTreeMap::new();
        for b in c.blocks() {
            for s in b.subsets(t) {
                if let Some(prev) = first_seen.get(&s) {
                    out.push(Violation::new(
                        Rule::RepeatedSubset,
                        format!(
                            "collection {}: {} lies in blocks {} and {}",
                            i + 1,
                            fmt_set(&s),
                            fmt_set(prev.elements()),
                            fmt_set(b.elements())
                        ),
                        vec![s.clone(), prev.elements().to_vec(), b.elements().to_vec()],
                    ));
                } else {
                    first_seen.insert(s, b);
                }
            }
        }
    }
    Verdict::from_violations(out)
}

/// Every foundation element lies in exactly `d` blocks of every collection.
pub fn verify_homogeneous(trade: &MuWayTrade, d: usize) -> Verdict {
    let mut out = Vec::new();
    let elements = trade.elements();
    for (i, c) in trade.collections().iter().enumerate() {
        let deg = degree_table(c);
        for &x in &elements {
            let r = deg.get(&x).copied().unwrap_or(0);
            if r != d {
                out.push(Violation::new(
                    Rule::Replication,
                    format!("collection {}: element {x} lies in {r} blocks, expected {d}", i + 1),
                    vec![vec![x]],
                ));
            }
        }
    }
    Verdict::from_violations(out)
}

/// All three checks at once, as used for catalog objects and witnesses.
pub fn verify_homogeneous_steiner(trade: &MuWayTrade, d: usize) -> Verdict {
    verify_trade(trade).and(verify_steiner(trade)).and(verify_homogeneous(trade, d))
}

/// Counting conditions on a 3-way `d`-homogeneous `(v,3,2)` Steiner trade:
/// the volume `dv/3` is an integer and `v >= 2d + 1`.
pub fn necessary_conditions(d: usize, v: usize) -> Verdict {
    let mut out = Vec::new();
    if !(d * v).is_multiple_of(3) {
        out.push(Violation::new(
            Rule::Divisibility,
            format!("volume d*v/3 = {}/3 is not an integer", d * v),
            vec![],
        ));
    }
    if v < 2 * d + 1 {
        out.push(Violation::new(
            Rule::FoundationSize,
            format!("v = {v} < 2d+1 = {}", 2 * d + 1),
            vec![],
        ));
    }
    Verdict::from_violations(out)
}
