//! Property checks shared by the proptest suite and the acceptance runner.

use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use trade_core::catalog::{self, base_8_3_2, pair_trades_volume3, three_disjoint_packings_12, trade_14, trade_15, trade_16};
use trade_core::constructor::{existence_verdict, Construction, Constructor, ConstructorOptions};
use trade_core::latin::{construct_3_3_m, cyclic_from_hint, full_cyclic, latin_to_steiner, verify_latin_trade, CellEntry, LatinTradeTriple};
use trade_core::perm::Permutation;
use trade_core::search::canonical_form;
use trade_core::verify::{pair_coverage, verify_homogeneous, verify_steiner, verify_trade, Verdict};
use trade_core::{Block, Collection, Element, MuWayTrade};

/// Labels used by every pool trade are below this.
pub const LABELS: usize = 48;

/// Verified 3-way `(v,3,2)` Steiner trades with their homogeneity.
pub fn steiner_pool() -> &'static [(MuWayTrade, usize)] {
    static POOL: OnceLock<Vec<(MuWayTrade, usize)>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut pool = vec![
            (base_8_3_2(), 3),
            (catalog::emit("cyclic-9", 1).unwrap(), 3),
            (catalog::emit("sts-9", 1).unwrap(), 4),
            (catalog::emit("sts-13", 1).unwrap(), 6),
            (three_disjoint_packings_12(), 5),
            (trade_14(), 6),
            (trade_15(), 6),
            (trade_16(), 6),
        ];
        let mut c = Constructor::new(ConstructorOptions::default());
        for (d, v) in [(3, 17), (3, 26), (4, 12), (4, 21), (5, 21), (6, 26), (7, 21), (8, 27)] {
            match c.construct(d, v) {
                Construction::Built(t) => pool.push((t, d)),
                other => panic!("pool member ({d},{v}) not built: {other:?}"),
            }
        }
        pool
    })
}

/// Pool trades plus non-Steiner-shaped ones (`k = 2`, `t = 1`).
pub fn any_pool() -> &'static [MuWayTrade] {
    static POOL: OnceLock<Vec<MuWayTrade>> = OnceLock::new();
    POOL.get_or_init(|| {
        let (a, b) = pair_trades_volume3();
        let mut pool: Vec<MuWayTrade> = steiner_pool().iter().map(|(t, _)| t.clone()).collect();
        pool.push(a);
        pool.push(b);
        pool.push(base_8_3_2().derived_trade(0).unwrap());
        pool
    })
}

pub fn label_permutation() -> impl Strategy<Value = Vec<Element>> {
    Just((0..LABELS as Element).collect::<Vec<_>>()).prop_shuffle()
}

/// A pool trade, possibly with one block swapped for an arbitrary one.
pub fn maybe_perturbed() -> impl Strategy<Value = MuWayTrade> {
    (0..any_pool().len(), any::<bool>(), any::<prop::sample::Index>(), any::<prop::sample::Index>(), prop::collection::btree_set(0..20 as Element, 3))
        .prop_map(|(i, perturb, col, blk, replacement)| {
            let t = &any_pool()[i];
            if !perturb || t.k() != 3 {
                return t.clone();
            }
            let ci = col.index(t.mu());
            let mut collections: Vec<Collection> = t.collections().to_vec();
            let mut blocks = collections[ci].blocks().to_vec();
            let bi = blk.index(blocks.len());
            blocks[bi] = Block::new(replacement).unwrap();
            collections[ci] = Collection::new(blocks);
            MuWayTrade::new(t.k(), t.t(), collections).unwrap()
        })
}

fn rules(v: &Verdict) -> Vec<String> {
    let mut r: Vec<String> = v.violations().iter().map(|x| x.rule.id().to_owned()).collect();
    r.sort();
    r
}

pub fn relabel_invariance(t: &MuWayTrade, images: &[Element]) -> Result<(), TestCaseError> {
    let pi = Permutation::from_images(images).unwrap();
    let u = t.relabel(&pi);
    prop_assert_eq!(rules(&verify_trade(t)), rules(&verify_trade(&u)));
    prop_assert_eq!(rules(&verify_steiner(t)), rules(&verify_steiner(&u)));
    for d in 1..=8 {
        prop_assert_eq!(verify_homogeneous(t, d).is_valid(), verify_homogeneous(&u, d).is_valid());
    }
    Ok(())
}

pub fn union_laws(i: usize, j: usize) -> Result<(), TestCaseError> {
    let (a, da) = &steiner_pool()[i];
    let (b, db) = &steiner_pool()[j];
    let u = a.disjoint_union(b).unwrap();
    let (va, vb) = (a.foundation().unwrap().len(), b.foundation().unwrap().len());
    prop_assert_eq!(u.volume(), a.volume() + b.volume());
    prop_assert_eq!(u.foundation().unwrap().len(), va + vb);
    prop_assert!(verify_trade(&u).is_valid());
    prop_assert!(verify_steiner(&u).is_valid());
    prop_assert_eq!(verify_homogeneous(&u, *da).is_valid(), da == db);
    Ok(())
}

pub fn derived_law(t: &MuWayTrade, pick: prop::sample::Index) -> Result<(), TestCaseError> {
    let found: Vec<Element> = t.foundation().unwrap().into_iter().collect();
    let x = found[pick.index(found.len())];
    let r = t.replication(x).unwrap();
    let dt = t.derived_trade(x).unwrap();
    prop_assert_eq!((dt.k(), dt.t(), dt.mu()), (t.k() - 1, t.t() - 1, t.mu()));
    prop_assert!(r.iter().all(|&c| c == r[0]));
    prop_assert_eq!(dt.volume(), r[0]);
    // with t = 0 equal coverage no longer forces equal foundations
    if t.t() < 2 {
        return Ok(());
    }
    prop_assert!(verify_trade(&dt).is_valid());
    if verify_steiner(t).is_valid() {
        prop_assert!(verify_steiner(&dt).is_valid());
    }
    Ok(())
}

pub fn pairwise_two_way(t: &MuWayTrade) -> Result<(), TestCaseError> {
    prop_assert!(verify_trade(t).is_valid());
    for i in 0..t.mu() {
        for j in i + 1..t.mu() {
            prop_assert!(verify_trade(&t.pair(i, j)).is_valid(), "pair ({}, {})", i, j);
        }
    }
    Ok(())
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Coverage totals are `m·C(k,t)`; for `(3,2)` each `r_x` is half the
/// coverage summed over pairs through `x`.
pub fn coverage_totals(t: &MuWayTrade) -> Result<(), TestCaseError> {
    let cov = pair_coverage(t);
    for c in 0..t.mu() {
        prop_assert_eq!(cov.total(c), t.volume() * binom(t.k(), t.t()));
    }
    if (t.k(), t.t()) == (3, 2) {
        for x in t.foundation().unwrap() {
            let r = t.replication(x).unwrap();
            for c in 0..t.mu() {
                let through: usize = cov.iter().filter(|(s, _)| s.contains(&x)).map(|(_, n)| n[c]).sum();
                prop_assert_eq!(r[c], through / 2);
            }
        }
    }
    Ok(())
}

pub fn oracle_consistency(d: usize, v: usize) -> Result<(), TestCaseError> {
    let verdict = existence_verdict(d, v);
    match Constructor::new(ConstructorOptions::default()).construct(d, v) {
        Construction::Built(t) => {
            prop_assert!(verdict.exists(), "built ({}, {}) but verdict {}", d, v, verdict);
            prop_assert!(verify_trade(&t).is_valid() && verify_steiner(&t).is_valid());
            prop_assert!(verify_homogeneous(&t, d).is_valid());
            prop_assert_eq!(t.foundation().unwrap().len(), v);
            prop_assert_eq!(t.volume(), d * v / 3);
        }
        Construction::Declined(_) => prop_assert!(!verdict.exists()),
        other => return Err(TestCaseError::fail(format!("({d}, {v}): {other:?}"))),
    }
    Ok(())
}

pub fn latin_sources() -> &'static [LatinTradeTriple] {
    static POOL: OnceLock<Vec<LatinTradeTriple>> = OnceLock::new();
    POOL.get_or_init(|| {
        vec![
            full_cyclic(3),
            full_cyclic(5),
            construct_3_3_m(6).unwrap(),
            cyclic_from_hint(5, 8).unwrap(),
            cyclic_from_hint(7, 10).unwrap(),
            full_cyclic(4).direct_sum(&full_cyclic(4)).unwrap(),
        ]
    })
}

/// An isotopic image (rows, columns and symbols permuted independently).
pub fn isotope(l: &LatinTradeTriple, rows: &[u32], cols: &[u32], syms: &[u32]) -> LatinTradeTriple {
    let m = l.order();
    let pick = |p: &[u32], x: u32| p.iter().copied().filter(|&y| (y as usize) < m).nth(x as usize).unwrap();
    let cells = l
        .cells()
        .iter()
        .map(|c| CellEntry { row: pick(rows, c.row), col: pick(cols, c.col), symbols: c.symbols.map(|s| pick(syms, s)) })
        .collect();
    LatinTradeTriple::new(m, l.d(), cells)
}

/// Isotopes verify, and their images are Steiner trades in which two labels
/// of one coordinate class never share a block.
pub fn latin_bridge(l: &LatinTradeTriple) -> Result<(), TestCaseError> {
    prop_assert!(verify_latin_trade(l).is_valid());
    let t = latin_to_steiner(l).unwrap();
    let m = l.order() as Element;
    prop_assert!(verify_steiner(&t).is_valid() && verify_homogeneous(&t, l.d()).is_valid());
    prop_assert_eq!(t.volume(), l.d() * l.order());
    for (pair, _) in pair_coverage(&t).iter() {
        prop_assert_ne!(pair[0] / m, pair[1] / m);
    }
    Ok(())
}

/// Trades small enough for exact canonical forms.
pub fn small_pool() -> Vec<MuWayTrade> {
    any_pool().iter().filter(|t| t.foundation().map(|f| f.len() <= 9).unwrap_or(false)).cloned().collect()
}

pub fn canonical_invariance(t: &MuWayTrade, images: &[Element], order: &[usize]) -> Result<(), TestCaseError> {
    let pi = Permutation::from_images(images).unwrap();
    let u = t.relabel(&pi).reordered(order);
    prop_assert_eq!(canonical_form(t, true).unwrap(), canonical_form(&u, true).unwrap());
    Ok(())
}
