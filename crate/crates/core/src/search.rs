//! Isomorphism-free exhaustive search, canonical forms and subtrade discovery.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::engine::{Engine, EngineConfig};
use crate::error::{Error, Result};
use crate::model::{Element, MuWayTrade};

/// Largest foundation the exact canonical form accepts.
/// A point's color with its incidence profile.
type Signature = (usize, Vec<Vec<Vec<usize>>>);

pub const EXACT_CAP: usize = 12;

/// Relabeling-invariant image of a trade.
///
/// With `exact`, equal forms mean isomorphic trades. Otherwise the form is a
/// refinement fingerprint: isomorphic trades still agree, but distinct forms
/// are all that can be concluded.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub exact: bool,
    pub mu: usize,
    pub k: usize,
    pub t: usize,
    pub collections: Vec<Vec<Vec<Element>>>,
}

impl CanonicalForm {
    /// The canonical representative as a trade on `0..v`.
    pub fn to_trade(&self) -> MuWayTrade {
        MuWayTrade::from_lists(self.k, self.t, &self.collections).expect("canonical form is well formed")
    }
}

struct Structure {
    points: Vec<Element>,
    /// per collection, blocks as point indices
    blocks: Vec<Vec<Vec<usize>>>,
    /// per point, (collection, block index) incidences
    incid: Vec<Vec<(usize, usize)>>,
    merge_collections: bool,
}

impl Structure {
    fn new(trade: &MuWayTrade, merge_collections: bool) -> Self {
        let points: Vec<Element> = trade.elements().into_iter().collect();
        let index: BTreeMap<Element, usize> = points.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let blocks: Vec<Vec<Vec<usize>>> = trade
            .collections()
            .iter()
            .map(|c| c.blocks().iter().map(|b| b.elements().iter().map(|x| index[x]).collect()).collect())
            .collect();
        let mut incid = vec![Vec::new(); points.len()];
        for (r, c) in blocks.iter().enumerate() {
            for (bi, b) in c.iter().enumerate() {
                for &p in b {
                    incid[p].push((r, bi));
                }
            }
        }
        Structure { points, blocks, incid, merge_collections }
    }

    fn n(&self) -> usize {
        self.points.len()
    }

    /// Split color classes until stable. Colors are `0..`, ordered by an
    /// invariant comparison of signatures, so the map is equivariant.
    fn refine(&self, colors: &mut Vec<usize>) {
        loop {
            let sigs: Vec<(usize, Vec<Vec<Vec<usize>>>)> = (0..self.n())
                .map(|x| {
                    let mut per: Vec<Vec<Vec<usize>>> = vec![Vec::new(); self.blocks.len()];
                    for &(r, bi) in &self.incid[x] {
                        let mut others: Vec<usize> =
                            self.blocks[r][bi].iter().filter(|&&p| p != x).map(|&p| colors[p]).collect();
                        others.sort_unstable();
                        per[r].push(others);
                    }
                    for v in &mut per {
                        v.sort();
                    }
                    if self.merge_collections {
                        per.sort();
                    }
                    (colors[x], per)
                })
                .collect();
            let distinct: BTreeSet<&Signature> = sigs.iter().collect();
            let rank: BTreeMap<&Signature, usize> =
                distinct.into_iter().enumerate().map(|(i, s)| (s, i)).collect();
            let next: Vec<usize> = sigs.iter().map(|s| rank[s]).collect();
            let before = colors.iter().collect::<BTreeSet<_>>().len();
            let after = rank.len();
            *colors = next;
            if after == before {
                return;
            }
        }
    }

    fn image(&self, label: &[usize]) -> Vec<Vec<Vec<Element>>> {
        let mut cols: Vec<Vec<Vec<Element>>> = self
            .blocks
            .iter()
            .map(|c| {
                let mut bs: Vec<Vec<Element>> = c
                    .iter()
                    .map(|b| {
                        let mut v: Vec<Element> = b.iter().map(|&p| label[p] as Element).collect();
                        v.sort_unstable();
                        v
                    })
                    .collect();
                bs.sort();
                bs
            })
            .collect();
        if self.merge_collections {
            cols.sort();
        }
        cols
    }

    fn search(&self, colors: Vec<usize>, best: &mut Option<Vec<Vec<Vec<Element>>>>) {
        let mut colors = colors;
        self.refine(&mut colors);
        let ncolors = colors.iter().collect::<BTreeSet<_>>().len();
        if ncolors == self.n() {
            let img = self.image(&colors);
            if best.as_ref().is_none_or(|b| img.cmp(b) == Ordering::Less) {
                *best = Some(img);
            }
            return;
        }
        // first non-singleton cell
        let mut size = vec![0usize; self.n()];
        for &c in &colors {
            size[c] += 1;
        }
        let target = (0..self.n()).find(|&c| size[c] > 1).expect("non-discrete coloring");
        for x in (0..self.n()).filter(|&x| colors[x] == target) {
            // x goes first in its cell; everything above shifts up
            let child: Vec<usize> = colors
                .iter()
                .enumerate()
                .map(|(y, &c)| if c > target || (c == target && y != x) { c + 1 } else { c })
                .collect();
            self.search(child, best);
        }
    }
}

/// Exact canonical form: the least image over every relabeling of the
/// foundation onto `0..v`, and over collection orders when
/// `allow_collection_permutation`.
pub fn canonical_form(trade: &MuWayTrade, allow_collection_permutation: bool) -> Result<CanonicalForm> {
    let s = Structure::new(trade, allow_collection_permutation);
    if s.n() > EXACT_CAP {
        return Err(Error::FoundationTooLarge { size: s.n(), cap: EXACT_CAP });
    }
    let mut best = None;
    s.search(vec![0; s.n()], &mut best);
    Ok(CanonicalForm {
        exact: true,
        mu: trade.mu(),
        k: trade.k(),
        t: trade.t(),
        collections: best.unwrap_or_default(),
    })
}

/// Refinement fingerprint for any foundation size; `exact` is false.
pub fn fingerprint(trade: &MuWayTrade, allow_collection_permutation: bool) -> CanonicalForm {
    let s = Structure::new(trade, allow_collection_permutation);
    let mut colors = vec![0; s.n()];
    s.refine(&mut colors);
    CanonicalForm {
        exact: false,
        mu: trade.mu(),
        k: trade.k(),
        t: trade.t(),
        collections: s.image(&colors),
    }
}

/// Exact form when the foundation allows it, fingerprint otherwise.
pub fn canonical_or_fingerprint(trade: &MuWayTrade, allow_collection_permutation: bool) -> CanonicalForm {
    canonical_form(trade, allow_collection_permutation).unwrap_or_else(|_| fingerprint(trade, allow_collection_permutation))
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub mu: usize,
    pub k: usize,
    pub t: usize,
    pub volume: usize,
    pub homogeneity: Option<usize>,
    /// Defaults to `k * volume`, the most points `volume` blocks can touch.
    pub max_foundation: Option<usize>,
    pub budget: u64,
    /// Merge isomorphic results; collections may be permuted when
    /// `collection_permutation` is also set.
    pub isomorph_reduction: bool,
    pub collection_permutation: bool,
}

impl SearchSpec {
    pub fn steiner(mu: usize, k: usize, t: usize, volume: usize) -> Self {
        SearchSpec {
            mu,
            k,
            t,
            volume,
            homogeneity: None,
            max_foundation: None,
            budget: 100_000_000,
            isomorph_reduction: true,
            collection_permutation: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// One trade per class, ascending by canonical form.
    pub trades: Vec<MuWayTrade>,
    pub exhausted: bool,
    pub nodes: u64,
    /// Whether every class was separated by an exact canonical form.
    pub exact_classes: bool,
}

/// All Steiner trades matching `spec`, one per isomorphism class.
///
/// Only `k = t + 1` with `t ∈ {1, 2}` is supported.
pub fn exhaustive_search(spec: &SearchSpec) -> Result<SearchOutcome> {
    if spec.mu < 2 || spec.t >= spec.k || spec.volume == 0 {
        return Err(Error::ParameterMismatch(format!(
            "need mu >= 2, t < k, volume >= 1 (got mu={}, k={}, t={}, volume={})",
            spec.mu, spec.k, spec.t, spec.volume
        )));
    }
    if spec.k != spec.t + 1 || !(1..=2).contains(&spec.t) {
        return Err(Error::Unsupported(format!("search covers k = t + 1 with t in {{1, 2}}, got k={} t={}", spec.k, spec.t)));
    }
    let points = spec.max_foundation.unwrap_or(spec.k * spec.volume);
    let res = Engine::new(EngineConfig {
        mu: spec.mu,
        t: spec.t,
        class_sizes: vec![points],
        transversal: false,
        fresh_labels: true,
        homogeneity: spec.homogeneity,
        volume: spec.volume,
        allowed: None,
        min_point: 0,
        start_point: None,
        budget: spec.budget,
        max_solutions: None,
    })
    .run();
    let mut exact_classes = true;
    let trades = if spec.isomorph_reduction {
        let mut classes: BTreeMap<CanonicalForm, MuWayTrade> = BTreeMap::new();
        for t in res.solutions {
            let form = canonical_or_fingerprint(&t, spec.collection_permutation);
            exact_classes &= form.exact;
            classes.entry(form.clone()).or_insert_with(|| form.to_trade());
        }
        classes.into_values().collect()
    } else {
        res.solutions
    };
    Ok(SearchOutcome { trades, exhausted: res.exhausted, nodes: res.nodes, exact_classes })
}

/// A subtrade of `trade` with `target_volume` blocks per collection,
/// `d`-homogeneous on its own foundation, or `None` once every candidate
/// has been ruled out.
pub fn find_homogeneous_subtrade(trade: &MuWayTrade, target_volume: usize, d: usize) -> Option<MuWayTrade> {
    if target_volume == 0 || target_volume > trade.volume() || trade.k() != trade.t() + 1 || !(1..=2).contains(&trade.t()) {
        return None;
    }
    let n = trade.max_label().map_or(0, |x| x as usize + 1);
    let allowed: Vec<HashSet<Vec<Element>>> =
        trade.collections().iter().map(|c| c.blocks().iter().map(|b| b.elements().to_vec()).collect()).collect();
    let res = Engine::new(EngineConfig {
        mu: trade.mu(),
        t: trade.t(),
        class_sizes: vec![n],
        transversal: false,
        fresh_labels: false,
        homogeneity: Some(d),
        volume: target_volume,
        allowed: Some(allowed),
        min_point: 0,
        start_point: None,
        budget: u64::MAX,
        max_solutions: Some(1),
    })
    .run();
    res.solutions.into_iter().next()
}
