//! Explicit small designs and trades, plus searchers for the auxiliary
//! designs that are only known to exist (disjoint triple systems, packings).
//!
//! Printed objects are kept as strings in the compact one-character
//! notation of [`crate::notation`] so they can be compared character by
//! character against their printed source.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dlx::Dlx;
use crate::error::{Error, Result};
use crate::model::{Block, Collection, Element, MuWayTrade};
use crate::notation::parse_blocks;
use crate::perm::Permutation;
use crate::verify::{Rule, Verdict, Violation};

const BASE_8_T1: &str = "123 147 158 248 267 357 368 456";
const BASE_8_T2: &str = "124 138 157 237 268 467 458 356";
const BASE_8_T3: &str = "127 135 148 246 238 367 457 568";

const PAIR_A: [&str; 3] = ["12 34 56", "13 26 45", "14 25 36"];
const PAIR_B: [&str; 3] = ["12 34 56", "13 26 45", "15 24 36"];

const KTS15_A: &str = "123 48c 5ae 6bd 79f 145 28a 3df 69e 7bc 167 29b 3ce 4af 58d 189 2cf 356 4be \
                       7ad 1ab 2de 347 59c 68f 1cd 246 39a 5bf 78e 1ef 257 38b 49d 6ac";
pub const PI_1: &str = "(1 e)(2 4)(3 7)(5 6)(8 b)(a c)(9 d)";
pub const PI_2: &str = "(9 7)(3 d)(4 a)(2 c)(6 8)(5 b)(1 e)";
/// The seven triples shared by the first listing and its two images.
pub const COMMON_14: &str = "79f 3df 4af 2cf 68f 5bf 1ef";

const KTS15_B1: &str = "12f 345 678 9ab cde";
const KTS15_B2: &str = "36f 15e 24a 7bc 89d 9cf 147 2be 38a 56d 7af \
                        16c 258 3bd 49e 4df 18b 269 37e 5ac 8ef 1ad 23c 46b 579 5bf 139 27d 48c 6ae";
pub const PI_15: &str = "(6 7 8)(9 b a)(c d e)";

const FRAME_D: &str = "59e 6cg 7af 8bd 5bf 6ad 7ce 89g 19f 2bg 3cd 4ae 1ag 2cf 3be 49d 15d 28e 36f \
                       47g 16e 27d 35g 48f 17b 269 38a 45c 18c 25a 379 46b";
pub const FRAME_GROUPS: &str = "1234 5678 9abc defg";
pub const PI_3: &str = "(1 2)(3 4)(5 6)(7 8)";
pub const PI_4: &str = "(1 3)(2 4)(5 7)(6 8)(9 a)(b c)";

fn blocks(s: &str) -> Collection {
    parse_blocks(s).expect("embedded block list parses")
}

fn perm(s: &str) -> Permutation {
    Permutation::parse_cycles(s).expect("embedded permutation parses")
}

fn image(c: &Collection, pi: &Permutation) -> Collection {
    c.blocks().iter().map(|b| b.map(|x| pi.apply(x)).expect("permutation image")).collect()
}

fn trade(k: usize, t: usize, collections: Vec<Collection>) -> MuWayTrade {
    MuWayTrade::new(k, t, collections).expect("embedded trade is well formed")
}

/// Eight blocks per collection on eight points, every point in three blocks.
pub fn base_8_3_2() -> MuWayTrade {
    trade(3, 2, vec![blocks(BASE_8_T1), blocks(BASE_8_T2), blocks(BASE_8_T3)])
}

/// The two 3-way `(6,2,1)` Steiner trades of volume 3, as printed.
/// The union graph of the first is the triangular prism, of the second `K_{3,3}`.
pub fn pair_trades_volume3() -> (MuWayTrade, MuWayTrade) {
    let mk = |s: [&str; 3]| trade(2, 1, s.iter().map(|c| blocks(c)).collect());
    (mk(PAIR_A), mk(PAIR_B))
}

/// Whether the graph formed by all blocks of a `k = 2` trade is bipartite.
pub fn union_graph_is_bipartite(t: &MuWayTrade) -> bool {
    let mut adj: HashMap<Element, Vec<Element>> = HashMap::new();
    for c in t.collections() {
        for b in c.blocks() {
            let e = b.elements();
            adj.entry(e[0]).or_default().push(e[1]);
            adj.entry(e[1]).or_default().push(e[0]);
        }
    }
    let mut side: HashMap<Element, bool> = HashMap::new();
    let mut starts: Vec<Element> = adj.keys().copied().collect();
    starts.sort();
    for s in starts {
        if side.contains_key(&s) {
            continue;
        }
        side.insert(s, false);
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            let sx = side[&x];
            for &y in &adj[&x] {
                match side.get(&y) {
                    Some(&sy) if sy == sx => return false,
                    Some(_) => {}
                    None => {
                        side.insert(y, !sx);
                        stack.push(y);
                    }
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleSystem {
    pub v: usize,
    pub triples: Collection,
    /// Parallel classes as indices into `triples`, when known.
    pub resolution: Option<Vec<Vec<usize>>>,
}

impl TripleSystem {
    pub fn new(v: usize, triples: Collection) -> Self {
        TripleSystem { v, triples, resolution: None }
    }

    /// Every pair of `0..v` in exactly one triple; each parallel class, if
    /// given, partitions the points.
    pub fn verify(&self) -> Verdict {
        let mut out = Vec::new();
        let mut seen: HashMap<(Element, Element), usize> = HashMap::new();
        for (i, b) in self.triples.blocks().iter().enumerate() {
            if b.len() != 3 || b.elements().iter().any(|&x| x as usize >= self.v) {
                out.push(Violation::new(Rule::BlockSize, format!("block {b} is not a triple on 0..{}", self.v), vec![]));
                continue;
            }
            for p in b.subsets(2) {
                if let Some(j) = seen.insert((p[0], p[1]), i) {
                    out.push(Violation::new(
                        Rule::PairCover,
                        format!("pair {{{},{}}} lies in blocks {j} and {i}", p[0], p[1]),
                        vec![p.clone()],
                    ));
                }
            }
        }
        for x in 0..self.v as Element {
            for y in x + 1..self.v as Element {
                if !seen.contains_key(&(x, y)) {
                    out.push(Violation::new(Rule::PairCover, format!("pair {{{x},{y}}} is not covered"), vec![vec![x, y]]));
                }
            }
        }
        if let Some(classes) = &self.resolution {
            for (ci, class) in classes.iter().enumerate() {
                let mut pts = BTreeSet::new();
                let mut count = 0;
                for &i in class {
                    for &x in self.triples.blocks()[i].elements() {
                        pts.insert(x);
                        count += 1;
                    }
                }
                if pts.len() != self.v || count != self.v {
                    out.push(Violation::new(
                        Rule::ParallelClass,
                        format!("class {ci} does not partition the points"),
                        vec![],
                    ));
                }
            }
        }
        Verdict::from_violations(out)
    }
}

/// First printed KTS(15), the base of the 14-point trade.
pub fn kts15_a() -> TripleSystem {
    TripleSystem::new(15, blocks(KTS15_A))
}

/// Second printed KTS(15), listed as `B1 ∪ B2` with `B1` a parallel class.
pub fn kts15_b() -> TripleSystem {
    let mut all = blocks(KTS15_B1).blocks().to_vec();
    all.extend(blocks(KTS15_B2).blocks().iter().cloned());
    TripleSystem::new(15, Collection::new(all))
}

pub fn kts15_b_parts() -> (Collection, Collection) {
    (blocks(KTS15_B1), blocks(KTS15_B2))
}

/// Triples common to `B`, `π1(B)` and `π2(B)`, computed.
pub fn common_triples_14() -> BTreeSet<Block> {
    let b = kts15_a().triples;
    let one: HashSet<Block> = image(&b, &perm(PI_1)).blocks().iter().cloned().collect();
    let two: HashSet<Block> = image(&b, &perm(PI_2)).blocks().iter().cloned().collect();
    b.blocks().iter().filter(|x| one.contains(x) && two.contains(x)).cloned().collect()
}

/// `B ∖ C`, `π1(B) ∖ C`, `π2(B) ∖ C` on the 14 points other than `f`.
pub fn trade_14() -> MuWayTrade {
    let b = kts15_a().triples;
    let c: HashSet<Block> = blocks(COMMON_14).blocks().iter().cloned().collect();
    let strip = |col: Collection| col.blocks().iter().filter(|x| !c.contains(x)).cloned().collect::<Collection>();
    let t1 = strip(b.clone());
    let t2 = strip(image(&b, &perm(PI_1)));
    let t3 = strip(image(&b, &perm(PI_2)));
    trade(3, 2, vec![t1, t2, t3])
}

/// `B2`, `π(B2)`, `π²(B2)` for the order-3 permutation fixing the first five points.
pub fn trade_15() -> MuWayTrade {
    let (_, b2) = kts15_b_parts();
    let pi = perm(PI_15);
    let c2 = image(&b2, &pi);
    let c3 = image(&c2, &pi);
    trade(3, 2, vec![b2, c2, c3])
}

/// `D`, `π3(D)`, `π4(D)` over the 4^4 frame.
pub fn trade_16() -> MuWayTrade {
    let d = blocks(FRAME_D);
    let t2 = image(&d, &perm(PI_3));
    let t3 = image(&d, &perm(PI_4));
    trade(3, 2, vec![d, t2, t3])
}

/// The four groups of the 16-point frame, 0-based.
pub fn frame_groups() -> Vec<Block> {
    blocks(FRAME_GROUPS).blocks().to_vec()
}

/// No block of any collection meets a group in two points.
pub fn verify_frame(t: &MuWayTrade, groups: &[Block]) -> Verdict {
    let mut out = Vec::new();
    for (ci, c) in t.collections().iter().enumerate() {
        for b in c.blocks() {
            for g in groups {
                let hit = b.elements().iter().filter(|&&x| g.contains(x)).count();
                if hit > 1 {
                    out.push(Violation::new(
                        Rule::GroupPair,
                        format!("collection {}: block {b} meets group {g} twice", ci + 1),
                        vec![b.elements().to_vec()],
                    ));
                }
            }
        }
    }
    Verdict::from_violations(out)
}

fn admissible_sts(v: usize) -> bool {
    matches!(v % 6, 1 | 3) && v != 7
}

fn cyclic_sts(v: usize, base: &[[Element; 3]], short_orbit: Option<[Element; 3]>) -> Collection {
    let n = v as Element;
    let mut out = BTreeSet::new();
    for i in 0..n {
        for b in base {
            out.insert(Block::new(b.iter().map(|&x| (x + i) % n)).expect("distinct"));
        }
        if let Some(b) = short_orbit {
            out.insert(Block::new(b.iter().map(|&x| (x + i) % n)).expect("distinct"));
        }
    }
    out.into_iter().collect()
}

/// Points `(x, y)` of `Z_3 × Z_3` as `3x + y`, lines as triples.
fn affine_plane_3() -> Collection {
    let mut out = BTreeSet::new();
    for x in 0..3u32 {
        for y in 0..3u32 {
            for (dx, dy) in [(0u32, 1u32), (1, 0), (1, 1), (1, 2)] {
                let pts = (0..3).map(|s| 3 * ((x + s * dx) % 3) + (y + s * dy) % 3);
                out.insert(Block::new(pts).expect("line has three points"));
            }
        }
    }
    out.into_iter().collect()
}

/// Any STS(v) avoiding `forbidden`, by exact cover over the pairs.
/// Rows are shuffled with `rng` so repeated calls explore different regions.
fn sts_by_exact_cover(v: usize, forbidden: &HashSet<Block>, rng: &mut ChaCha8Rng, budget: u64) -> Option<Collection> {
    let pair_index = |a: Element, b: Element| -> usize {
        let (a, b) = (a as usize, b as usize);
        a * v - a * (a + 1) / 2 + (b - a - 1)
    };
    let mut rows: Vec<Block> = Vec::new();
    for a in 0..v as Element {
        for b in a + 1..v as Element {
            for c in b + 1..v as Element {
                let blk = Block::from_sorted(vec![a, b, c]);
                if !forbidden.contains(&blk) {
                    rows.push(blk);
                }
            }
        }
    }
    rows.shuffle(rng);
    let mut dlx = Dlx::new(v * (v - 1) / 2, 0);
    for r in &rows {
        let e = r.elements();
        dlx.add_row(&[pair_index(e[0], e[1]), pair_index(e[0], e[2]), pair_index(e[1], e[2])]);
    }
    let res = dlx.solve(budget, 1);
    res.solutions.first().map(|s| s.iter().map(|&i| rows[i].clone()).collect())
}

fn base_sts(v: usize, rng: &mut ChaCha8Rng, budget: u64) -> Option<Collection> {
    match v {
        3 => Some(blocks("123")),
        9 => Some(affine_plane_3()),
        13 => Some(cyclic_sts(13, &[[0, 1, 4], [0, 2, 7]], None)),
        15 => Some(cyclic_sts(15, &[[0, 1, 4], [0, 2, 8]], Some([0, 5, 10]))),
        _ => sts_by_exact_cover(v, &HashSet::new(), rng, budget),
    }
}

fn random_permutation(v: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut images: Vec<Element> = (0..v as Element).collect();
    images.shuffle(rng);
    Permutation::from_images(&images).expect("shuffle is a bijection")
}

/// Three pairwise block-disjoint STS(v), packaged as a 3-way
/// `((v-1)/2)`-homogeneous `(v,3,2)` Steiner trade.
///
/// Random relabelings of one base system are tried first; if they keep
/// colliding, exact cover searches for systems avoiding the blocks already
/// used. `budget` bounds both phases.
pub fn three_disjoint_sts(v: usize, seed: u64, budget: u64) -> Result<MuWayTrade> {
    if !admissible_sts(v) || v < 9 {
        return Err(Error::NotAdmissible(v));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = base_sts(v, &mut rng, budget).ok_or(Error::BudgetExhausted(budget))?;
    let mut chosen = vec![base];
    let mut used: HashSet<Block> = chosen[0].blocks().iter().cloned().collect();
    let mut spent = 0u64;
    let attempts = (budget / 64).clamp(1_000, 2_000_000);
    'outer: while chosen.len() < 3 {
        for _ in 0..attempts {
            spent += 1;
            let cand = image(&chosen[0], &random_permutation(v, &mut rng));
            if cand.blocks().iter().all(|b| !used.contains(b)) {
                used.extend(cand.blocks().iter().cloned());
                chosen.push(cand);
                continue 'outer;
            }
        }
        let rest = budget.saturating_sub(spent);
        match sts_by_exact_cover(v, &used, &mut rng, rest) {
            Some(c) => {
                used.extend(c.blocks().iter().cloned());
                chosen.push(c);
            }
            None => return Err(Error::BudgetExhausted(budget)),
        }
    }
    Ok(trade(3, 2, chosen))
}

fn packings_12_search() -> MuWayTrade {
    const V: usize = 12;
    // leave: {0,1},{2,3},...,{10,11}
    let in_leave = |a: Element, b: Element| a / 2 == b / 2;
    let pair_ids: Vec<(Element, Element)> = (0..V as Element)
        .flat_map(|a| (a + 1..V as Element).map(move |b| (a, b)))
        .filter(|&(a, b)| !in_leave(a, b))
        .collect();
    let pid: HashMap<(Element, Element), usize> = pair_ids.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut all = Vec::new();
    for a in 0..V as Element {
        for b in a + 1..V as Element {
            for c in b + 1..V as Element {
                if !in_leave(a, b) && !in_leave(a, c) && !in_leave(b, c) {
                    all.push(Block::from_sorted(vec![a, b, c]));
                }
            }
        }
    }
    let decompose = |forbidden: &HashSet<Block>, rng: &mut ChaCha8Rng| -> Option<Collection> {
        let mut rows: Vec<&Block> = all.iter().filter(|b| !forbidden.contains(*b)).collect();
        rows.shuffle(rng);
        let mut dlx = Dlx::new(pair_ids.len(), 0);
        for r in &rows {
            let e = r.elements();
            dlx.add_row(&[pid[&(e[0], e[1])], pid[&(e[0], e[2])], pid[&(e[1], e[2])]]);
        }
        let res = dlx.solve(2_000_000, 1);
        res.solutions.first().map(|s| s.iter().map(|&i| rows[i].clone()).collect())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    loop {
        let mut used = HashSet::new();
        let mut chosen = Vec::new();
        while chosen.len() < 3 {
            match decompose(&used, &mut rng) {
                Some(c) => {
                    used.extend(c.blocks().iter().cloned());
                    chosen.push(c);
                }
                None => break,
            }
        }
        if chosen.len() == 3 {
            return trade(3, 2, chosen);
        }
    }
}

/// Three pairwise block-disjoint decompositions of `K_12` minus the perfect
/// matching `{0,1},{2,3},…,{10,11}` into triples: a 3-way 5-homogeneous
/// `(12,3,2)` Steiner trade of volume 20. Found once, then cached.
pub fn three_disjoint_packings_12() -> MuWayTrade {
    static CACHE: OnceLock<MuWayTrade> = OnceLock::new();
    CACHE.get_or_init(packings_12_search).clone()
}

/// Name, one-line description.
pub const NAMES: &[(&str, &str)] = &[
    ("base-8-3-2", "3-way 3-homogeneous (8,3,2) Steiner trade, volume 8"),
    ("pair-prism", "3-way (6,2,1) Steiner trade, volume 3, non-bipartite union graph"),
    ("pair-k33", "3-way (6,2,1) Steiner trade, volume 3, bipartite union graph"),
    ("cyclic-9", "3-way 3-homogeneous (9,3,2) Steiner trade from the cyclic order-3 Latin trade"),
    ("kts15-a", "KTS(15) underlying trade-14, as a single collection"),
    ("kts15-b", "KTS(15) underlying trade-15, as a single collection"),
    ("trade-14", "3-way 6-homogeneous (14,3,2) Steiner trade, volume 28"),
    ("trade-15", "3-way 6-homogeneous (15,3,2) Steiner trade, volume 30"),
    ("trade-16", "3-way 6-homogeneous (16,3,2) Steiner trade, volume 32"),
    ("sts-9", "three disjoint STS(9): 4-homogeneous, volume 12"),
    ("sts-13", "three disjoint STS(13): 6-homogeneous, volume 26"),
    ("sts-15", "three disjoint STS(15): 7-homogeneous, volume 35"),
    ("packings-12", "three disjoint packings of K12 minus a perfect matching: 5-homogeneous, volume 20"),
];

pub fn emit(name: &str, seed: u64) -> Option<MuWayTrade> {
    let sts = |v| three_disjoint_sts(v, seed, 100_000_000).ok();
    let single = |s: TripleSystem| MuWayTrade::new(3, 2, vec![s.triples]).ok();
    match name {
        "base-8-3-2" => Some(base_8_3_2()),
        "pair-prism" => Some(pair_trades_volume3().0),
        "pair-k33" => Some(pair_trades_volume3().1),
        "cyclic-9" => crate::latin::latin_to_steiner(&crate::latin::full_cyclic(3)).ok(),
        "kts15-a" => single(kts15_a()),
        "kts15-b" => single(kts15_b()),
        "trade-14" => Some(trade_14()),
        "trade-15" => Some(trade_15()),
        "trade-16" => Some(trade_16()),
        "sts-9" => sts(9),
        "sts-13" => sts(13),
        "sts-15" => sts(15),
        "packings-12" => Some(three_disjoint_packings_12()),
        _ => None,
    }
}
