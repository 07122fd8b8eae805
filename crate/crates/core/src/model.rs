//! Blocks, collections and μ-way trades.
//!
//! A [`MuWayTrade`] is `mu` collections of `k`-element blocks; it is a trade
//! when every `t`-subset is covered equally often by every collection. The
//! predicates that decide this live in [`crate::verify`]; this module holds
//! the data and the structural operations (restriction, relabeling, union).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Element label. Labels are 0-based internally.
pub type Element = u32;

/// A sorted set of distinct elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block(Vec<Element>);

impl Block {
    pub fn new<I: IntoIterator<Item = Element>>(elements: I) -> Result<Self> {
        let mut v: Vec<Element> = elements.into_iter().collect();
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidBlock(format!("repeated element in {v:?}")));
        }
        Ok(Block(v))
    }

    /// Builds a block from elements already known to be distinct.
    pub(crate) fn from_sorted(v: Vec<Element>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Block(v)
    }

    pub fn elements(&self) -> &[Element] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// All `t`-subsets of the block, each sorted, in lexicographic order.
    pub fn subsets(&self, t: usize) -> Vec<Vec<Element>> {
        subsets_of(&self.0, t)
    }

    pub fn map(&self, f: impl Fn(Element) -> Element) -> Result<Block> {
        Block::new(self.0.iter().map(|&x| f(x)))
    }

    pub fn without(&self, x: Element) -> Block {
        Block(self.0.iter().copied().filter(|&y| y != x).collect())
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

pub(crate) fn subsets_of(elems: &[Element], t: usize) -> Vec<Vec<Element>> {
    fn rec(elems: &[Element], t: usize, start: usize, cur: &mut Vec<Element>, out: &mut Vec<Vec<Element>>) {
        if cur.len() == t {
            out.push(cur.clone());
            return;
        }
        for i in start..elems.len() {
            if elems.len() - i < t - cur.len() {
                break;
            }
            cur.push(elems[i]);
            rec(elems, t, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if t <= elems.len() {
        rec(elems, t, 0, &mut Vec::with_capacity(t), &mut out);
    }
    out
}

/// Blocks of one side of a trade, kept in presentation order.
///
/// Equality and hashing use the sorted block multiset, so two collections
/// listing the same blocks in a different order compare equal.
#[derive(Clone, Debug, Default)]
pub struct Collection {
    blocks: Vec<Block>,
}

impl Collection {
    pub fn new(blocks: Vec<Block>) -> Self {
        Collection { blocks }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn push(&mut self, b: Block) {
        self.blocks.push(b);
    }

    pub fn sorted(&self) -> Vec<Block> {
        let mut v = self.blocks.clone();
        v.sort();
        v
    }

    pub fn elements(&self) -> BTreeSet<Element> {
        self.blocks.iter().flat_map(|b| b.elements().iter().copied()).collect()
    }

    pub fn contains(&self, b: &Block) -> bool {
        self.blocks.contains(b)
    }

    pub(crate) fn multiset(&self) -> BTreeMap<&Block, usize> {
        let mut m = BTreeMap::new();
        for b in &self.blocks {
            *m.entry(b).or_insert(0) += 1;
        }
        m
    }
}

impl PartialEq for Collection {
    fn eq(&self, other: &Self) -> bool {
        self.sorted() == other.sorted()
    }
}

impl Eq for Collection {}

impl std::hash::Hash for Collection {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.sorted().hash(state);
    }
}

impl FromIterator<Block> for Collection {
    fn from_iter<I: IntoIterator<Item = Block>>(iter: I) -> Self {
        Collection::new(iter.into_iter().collect())
    }
}

/// `mu` collections of `k`-blocks compared on `t`-subsets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MuWayTrade {
    k: usize,
    t: usize,
    collections: Vec<Collection>,
}

impl MuWayTrade {
    pub fn new(k: usize, t: usize, collections: Vec<Collection>) -> Result<Self> {
        if t > k {
            return Err(Error::ParameterMismatch(format!("t={t} exceeds k={k}")));
        }
        for (i, c) in collections.iter().enumerate() {
            if let Some(b) = c.blocks().iter().find(|b| b.len() != k) {
                return Err(Error::InvalidBlock(format!(
                    "collection {} has block {{{b}}} of size {}, expected {k}",
                    i + 1,
                    b.len()
                )));
            }
        }
        Ok(MuWayTrade { k, t, collections })
    }

    /// Convenience constructor from raw element lists.
    pub fn from_lists(k: usize, t: usize, lists: &[Vec<Vec<Element>>]) -> Result<Self> {
        let collections = lists
            .iter()
            .map(|c| c.iter().map(|b| Block::new(b.iter().copied())).collect::<Result<Vec<_>>>().map(Collection::new))
            .collect::<Result<Vec<_>>>()?;
        MuWayTrade::new(k, t, collections)
    }

    pub fn mu(&self) -> usize {
        self.collections.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn collections(&self) -> &[Collection] {
        &self.collections
    }

    /// Number of blocks in the first collection.
    pub fn volume(&self) -> usize {
        self.collections.first().map_or(0, Collection::len)
    }

    /// Union of all elements over all collections.
    pub fn elements(&self) -> BTreeSet<Element> {
        self.collections.iter().flat_map(|c| c.elements()).collect()
    }

    pub fn max_label(&self) -> Option<Element> {
        self.elements().last().copied()
    }

    /// Elements of collection 1; every other collection must cover the same set.
    pub fn foundation(&self) -> Result<BTreeSet<Element>> {
        let Some(first) = self.collections.first() else {
            return Ok(BTreeSet::new());
        };
        let found = first.elements();
        for (i, c) in self.collections.iter().enumerate().skip(1) {
            if c.elements() != found {
                return Err(Error::FoundationMismatch { collection: i + 1 });
            }
        }
        Ok(found)
    }

    /// `r_x` for each collection.
    pub fn replication(&self, x: Element) -> Result<Vec<usize>> {
        if !self.elements().contains(&x) {
            return Err(Error::UnknownElement(x));
        }
        Ok(self
            .collections
            .iter()
            .map(|c| c.blocks().iter().filter(|b| b.contains(x)).count())
            .collect())
    }

    /// Restrict to blocks through `x` and delete `x`: a `(k-1, t-1)` trade of volume `r_x`.
    pub fn derived_trade(&self, x: Element) -> Result<MuWayTrade> {
        if self.t == 0 || self.k < 2 {
            return Err(Error::ParameterMismatch(format!(
                "derived trade needs t >= 1 and k >= 2, have k={} t={}",
                self.k, self.t
            )));
        }
        if !self.elements().contains(&x) {
            return Err(Error::UnknownElement(x));
        }
        let collections = self
            .collections
            .iter()
            .map(|c| c.blocks().iter().filter(|b| b.contains(x)).map(|b| b.without(x)).collect())
            .collect();
        MuWayTrade::new(self.k - 1, self.t - 1, collections)
    }

    /// Apply `pi` to every block (blocks re-sorted, presentation order kept).
    pub fn relabel(&self, pi: &Permutation) -> MuWayTrade {
        let collections = self
            .collections
            .iter()
            .map(|c| {
                c.blocks()
                    .iter()
                    .map(|b| {
                        let mut v: Vec<Element> = b.elements().iter().map(|&x| pi.apply(x)).collect();
                        v.sort_unstable();
                        Block::from_sorted(v)
                    })
                    .collect()
            })
            .collect();
        MuWayTrade { k: self.k, t: self.t, collections }
    }

    /// Order-preserving relabeling of the element set onto `offset..offset+n`.
    pub fn compact(&self, offset: Element) -> MuWayTrade {
        let index: BTreeMap<Element, Element> =
            self.elements().into_iter().enumerate().map(|(i, x)| (x, offset + i as Element)).collect();
        let collections = self
            .collections
            .iter()
            .map(|c| {
                c.blocks()
                    .iter()
                    .map(|b| Block::from_sorted(b.elements().iter().map(|x| index[x]).collect()))
                    .collect()
            })
            .collect();
        MuWayTrade { k: self.k, t: self.t, collections }
    }

    /// Componentwise union after moving `other` onto fresh labels above ours.
    pub fn disjoint_union(&self, other: &MuWayTrade) -> Result<MuWayTrade> {
        if self.mu() != other.mu() || self.k != other.k || self.t != other.t {
            return Err(Error::ParameterMismatch(format!(
                "cannot join (mu={}, k={}, t={}) with (mu={}, k={}, t={})",
                self.mu(),
                self.k,
                self.t,
                other.mu(),
                other.k,
                other.t
            )));
        }
        let offset = self.max_label().map_or(0, |m| m + 1);
        let shifted = other.compact(offset);
        let collections = self
            .collections
            .iter()
            .zip(shifted.collections)
            .map(|(a, b)| {
                let mut blocks = a.blocks().to_vec();
                blocks.extend(b.blocks);
                Collection::new(blocks)
            })
            .collect();
        Ok(MuWayTrade { k: self.k, t: self.t, collections })
    }

    /// True when each collection of `self` is a sub-multiset of the matching collection of `full`.
    pub fn is_subtrade_of(&self, full: &MuWayTrade) -> Result<bool> {
        if self.mu() != full.mu() || self.k != full.k || self.t != full.t {
            return Err(Error::ParameterMismatch("subtrade parameters differ".into()));
        }
        Ok(self.collections.iter().zip(&full.collections).all(|(s, f)| {
            let fm = f.multiset();
            s.multiset().into_iter().all(|(b, n)| fm.get(b).is_some_and(|&m| m >= n))
        }))
    }

    /// Collections in the given order.
    pub fn reordered(&self, order: &[usize]) -> MuWayTrade {
        MuWayTrade {
            k: self.k,
            t: self.t,
            collections: order.iter().map(|&i| self.collections[i].clone()).collect(),
        }
    }

    /// The two-collection trade `{T_i, T_j}`.
    pub fn pair(&self, i: usize, j: usize) -> MuWayTrade {
        self.reordered(&[i, j])
    }

    /// Remove the blocks of `sub` (multiset difference, per collection).
    pub fn minus(&self, sub: &MuWayTrade) -> Result<MuWayTrade> {
        if !sub.is_subtrade_of(self)? {
            return Err(Error::ParameterMismatch("not a subtrade".into()));
        }
        let collections = self
            .collections
            .iter()
            .zip(&sub.collections)
            .map(|(c, s)| {
                let mut remove = s.multiset().into_iter().map(|(b, n)| (b.clone(), n)).collect::<BTreeMap<_, _>>();
                c.blocks()
                    .iter()
                    .filter(|b| match remove.get_mut(*b) {
                        Some(n) if *n > 0 => {
                            *n -= 1;
                            false
                        }
                        _ => true,
                    })
                    .cloned()
                    .collect()
            })
            .collect();
        Ok(MuWayTrade { k: self.k, t: self.t, collections })
    }
}

/// `4 4 2 ...`: element -> number of blocks containing it, per collection.
pub(crate) fn degree_table(c: &Collection) -> BTreeMap<Element, usize> {
    let mut m = BTreeMap::new();
    for b in c.blocks() {
        for &x in b.elements() {
            *m.entry(x).or_insert(0) += 1;
        }
    }
    m
}
