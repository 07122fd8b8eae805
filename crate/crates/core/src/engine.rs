//! Propagation search for μ-way Steiner trades with `k = t + 1`.
//!
//! The search grows all collections at once. A `t`-subset covered by some
//! collections but not by all of them is *unbalanced*; every unbalanced
//! subset must eventually be completed in each collection missing it, and
//! because `k = t + 1` such a completion is fixed by a single extra point.
//! Each node completes the unbalanced subset with the fewest viable extra
//! points. When nothing is unbalanced the partial object is itself a trade;
//! if it is not yet large enough a new block is seeded into collection 0.
//!
//! Labels inside a class are interchangeable until first used, so in the
//! fresh-label mode only the smallest unused label of a class is ever tried.
//! Every trade is found up to relabeling, which is what exhaustion certifies.

use std::collections::HashSet;

use crate::model::{Block, Collection, Element, MuWayTrade};

const MAX_POINTS: usize = 250;
const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub(crate) struct EngineConfig {
    pub mu: usize,
    /// Coverage order; blocks have `t + 1` points.
    pub t: usize,
    /// Label ranges; points are `0..sum(class_sizes)`.
    pub class_sizes: Vec<usize>,
    /// Every block meets each class exactly once (needs `class_sizes.len() == t + 1`).
    pub transversal: bool,
    /// Unused labels of a class are interchangeable.
    pub fresh_labels: bool,
    pub homogeneity: Option<usize>,
    pub volume: usize,
    /// Restrict collection `r` to these blocks (fixed-label mode).
    pub allowed: Option<Vec<HashSet<Vec<Element>>>>,
    /// Points below this label are never used.
    pub min_point: usize,
    /// Points that must belong to the foundation of any solution's first seed.
    pub start_point: Option<usize>,
    pub budget: u64,
    pub max_solutions: Option<usize>,
}

#[derive(Debug, Default)]
pub(crate) struct EngineResult {
    pub solutions: Vec<MuWayTrade>,
    /// Search space fully explored (no budget stop, no solution cap stop).
    pub exhausted: bool,
    pub budget_hit: bool,
    pub nodes: u64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Flow {
    Continue,
    Stop,
}

struct IndexedSet {
    pos: Vec<u32>,
    items: Vec<u32>,
}

impl IndexedSet {
    fn new(n: usize) -> Self {
        IndexedSet { pos: vec![NONE; n], items: Vec::new() }
    }
    fn insert(&mut self, x: u32) {
        if self.pos[x as usize] == NONE {
            self.pos[x as usize] = self.items.len() as u32;
            self.items.push(x);
        }
    }
    fn remove(&mut self, x: u32) {
        let p = self.pos[x as usize];
        if p == NONE {
            return;
        }
        let last = self.items.pop().unwrap();
        if last != x {
            self.items[p as usize] = last;
            self.pos[last as usize] = p;
        }
        self.pos[x as usize] = NONE;
    }
}

pub(crate) struct Engine {
    cfg: EngineConfig,
    n: usize,
    k: usize,
    class_of: Vec<usize>,
    class_start: Vec<usize>,
    /// per class: number of labels in use (a prefix of the class range in fresh mode)
    class_used: Vec<usize>,
    cover: Vec<bool>,
    ecount: Vec<u8>,
    block_owner: Vec<u8>,
    allowed_keys: Option<Vec<HashSet<usize>>>,
    deg: Vec<u16>,
    touch: Vec<u16>,
    /// E-neighbours of x in class c: `union[x * nclasses + c]`
    union: Vec<u16>,
    union_cap: Option<u16>,
    vol: Vec<usize>,
    unbalanced: IndexedSet,
    placed: Vec<([usize; 3], usize)>,
    nodes: u64,
    budget_hit: bool,
    solutions: Vec<MuWayTrade>,
}

impl Engine {
    pub fn new(cfg: EngineConfig) -> Self {
        assert!(cfg.t == 1 || cfg.t == 2, "engine supports t in {{1, 2}}");
        assert!(cfg.mu >= 2 && cfg.mu < 255);
        let n: usize = cfg.class_sizes.iter().sum();
        assert!(n <= MAX_POINTS, "engine supports at most {MAX_POINTS} points");
        let k = cfg.t + 1;
        if cfg.transversal {
            assert_eq!(cfg.class_sizes.len(), k);
        }
        let mut class_of = Vec::with_capacity(n);
        let mut class_start = Vec::new();
        for (c, &s) in cfg.class_sizes.iter().enumerate() {
            class_start.push(class_of.len());
            class_of.extend(std::iter::repeat_n(c, s));
        }
        let nt = n.pow(cfg.t as u32);
        let nk = n.pow(k as u32);
        let nclasses = cfg.class_sizes.len();
        let union_cap = match (cfg.homogeneity, cfg.t) {
            (Some(d), 2) if cfg.transversal => Some(d as u16),
            (Some(d), 2) => Some(2 * d as u16),
            _ => None,
        };
        let allowed_keys = cfg.allowed.as_ref().map(|sets| {
            sets.iter()
                .map(|s| s.iter().map(|b| block_key(n, &b.iter().map(|&x| x as usize).collect::<Vec<_>>())).collect())
                .collect()
        });
        Engine {
            n,
            k,
            class_of,
            class_start,
            class_used: vec![0; nclasses],
            cover: vec![false; cfg.mu * nt],
            ecount: vec![0; nt],
            block_owner: vec![0; nk],
            allowed_keys,
            deg: vec![0; cfg.mu * n],
            touch: vec![0; n],
            union: vec![0; n * nclasses],
            union_cap,
            vol: vec![0; cfg.mu],
            unbalanced: IndexedSet::new(nt),
            placed: Vec::new(),
            nodes: 0,
            budget_hit: false,
            solutions: Vec::new(),
            cfg,
        }
    }

    pub fn run(mut self) -> EngineResult {
        let flow = self.dfs();
        let capped = flow == Flow::Stop && !self.budget_hit;
        EngineResult {
            exhausted: !self.budget_hit && !capped,
            budget_hit: self.budget_hit,
            nodes: self.nodes,
            solutions: self.solutions,
        }
    }

    fn nt(&self) -> usize {
        self.n.pow(self.cfg.t as u32)
    }

    fn subset_key(&self, s: &[usize]) -> usize {
        match s.len() {
            1 => s[0],
            _ => s[0] * self.n + s[1],
        }
    }

    fn key_points(&self, key: usize) -> [usize; 2] {
        if self.cfg.t == 1 {
            [key, usize::MAX]
        } else {
            [key / self.n, key % self.n]
        }
    }

    fn covered(&self, r: usize, key: usize) -> bool {
        self.cover[r * self.nt() + key]
    }

    fn deg(&self, r: usize, x: usize) -> usize {
        self.deg[r * self.n + x] as usize
    }

    fn deg_full(&self, r: usize, x: usize) -> bool {
        self.cfg.homogeneity.is_some_and(|d| self.deg(r, x) >= d)
    }

    fn nclasses(&self) -> usize {
        self.cfg.class_sizes.len()
    }

    /// Points that may be introduced in class `c`, given `extra` labels of
    /// that class already claimed by the block under construction.
    fn class_points(&self, c: usize, extra: usize) -> std::ops::Range<usize> {
        let start = self.class_start[c];
        let size = self.cfg.class_sizes[c];
        if self.cfg.fresh_labels {
            let end = (self.class_used[c] + extra + 1).min(size);
            start..start + end
        } else {
            start.max(self.cfg.min_point).min(start + size)..start + size
        }
    }

    fn place(&mut self, pts: [usize; 3], r: usize) {
        let k = self.k;
        let mut p = pts;
        p[..k].sort_unstable();
        let bkey = block_key(self.n, &p[..k]);
        debug_assert_eq!(self.block_owner[bkey], 0);
        self.block_owner[bkey] = r as u8 + 1;
        let nt = self.nt();
        for_each_subset(&p[..k], self.cfg.t, |s| {
            let key = self.subset_key(s);
            debug_assert!(!self.cover[r * nt + key]);
            self.cover[r * nt + key] = true;
            self.ecount[key] += 1;
            let e = self.ecount[key] as usize;
            if e == 1 {
                if self.cfg.t == 2 {
                    let (a, b) = (s[0], s[1]);
                    let nc = self.nclasses();
                    self.union[a * nc + self.class_of[b]] += 1;
                    self.union[b * nc + self.class_of[a]] += 1;
                }
                self.unbalanced.insert(key as u32);
            }
            if e == self.cfg.mu {
                self.unbalanced.remove(key as u32);
            }
        });
        for &x in &p[..k] {
            self.deg[r * self.n + x] += 1;
            self.touch[x] += 1;
            if self.touch[x] == 1 {
                self.class_used[self.class_of[x]] += 1;
            }
        }
        self.vol[r] += 1;
        self.placed.push((p, r));
    }

    fn unplace(&mut self) {
        let (p, r) = self.placed.pop().expect("unplace without place");
        let k = self.k;
        self.vol[r] -= 1;
        for &x in &p[..k] {
            self.deg[r * self.n + x] -= 1;
            self.touch[x] -= 1;
            if self.touch[x] == 0 {
                self.class_used[self.class_of[x]] -= 1;
            }
        }
        let nt = self.nt();
        for_each_subset(&p[..k], self.cfg.t, |s| {
            let key = self.subset_key(s);
            self.cover[r * nt + key] = false;
            let e = self.ecount[key] as usize;
            if e == self.cfg.mu {
                self.unbalanced.insert(key as u32);
            }
            self.ecount[key] -= 1;
            if e == 1 {
                if self.cfg.t == 2 {
                    let (a, b) = (s[0], s[1]);
                    let nc = self.nclasses();
                    self.union[a * nc + self.class_of[b]] -= 1;
                    self.union[b * nc + self.class_of[a]] -= 1;
                }
                self.unbalanced.remove(key as u32);
            }
        });
        let bkey = block_key(self.n, &p[..k]);
        self.block_owner[bkey] = 0;
    }

    /// Can block `s ∪ {c}` be added to collection `r`? `s` is already known
    /// to be uncovered in `r` with room at its points.
    fn fits(&self, s: &[usize], c: usize, r: usize) -> bool {
        if s.contains(&c) || self.deg_full(r, c) || c < self.cfg.min_point {
            return false;
        }
        let mut pts = [0usize; 3];
        pts[..s.len()].copy_from_slice(s);
        pts[s.len()] = c;
        let k = self.k;
        pts[..k].sort_unstable();
        let bkey = block_key(self.n, &pts[..k]);
        if self.block_owner[bkey] != 0 {
            return false;
        }
        if let Some(allowed) = &self.allowed_keys {
            if !allowed[r].contains(&bkey) {
                return false;
            }
        }
        if self.cfg.t == 1 {
            let key = c;
            return !self.covered(r, key);
        }
        // t == 2: pairs {a,c} and {b,c}
        let nc = self.nclasses();
        let mut grow_c = [0u16; 4];
        for &a in s {
            let key = if a < c { a * self.n + c } else { c * self.n + a };
            if self.covered(r, key) {
                return false;
            }
            if let Some(cap) = self.union_cap {
                if self.ecount[key] == 0 {
                    if self.union[a * nc + self.class_of[c]] + 1 > cap {
                        return false;
                    }
                    let slot = self.class_of[a].min(3);
                    grow_c[slot] += 1;
                    if self.union[c * nc + self.class_of[a]] + grow_c[slot] > cap {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn candidate_range(&self, s: &[usize]) -> Vec<std::ops::Range<usize>> {
        if self.cfg.transversal {
            let mut present = vec![false; self.nclasses()];
            for &x in s {
                present[self.class_of[x]] = true;
            }
            match present.iter().position(|p| !p) {
                Some(c) => vec![self.class_points(c, 0)],
                None => vec![],
            }
        } else {
            (0..self.nclasses()).map(|c| self.class_points(c, 0)).collect()
        }
    }

    fn subset_live(&self, s: &[usize], r: usize) -> bool {
        self.vol[r] < self.cfg.volume && s.iter().all(|&x| !self.deg_full(r, x))
    }

    fn count_candidates(&self, s: &[usize], r: usize, limit: usize) -> usize {
        if !self.subset_live(s, r) {
            return 0;
        }
        let mut n = 0;
        for range in self.candidate_range(s) {
            for c in range {
                if self.fits(s, c, r) {
                    n += 1;
                    if n >= limit {
                        return n;
                    }
                }
            }
        }
        n
    }

    fn candidates(&self, s: &[usize], r: usize) -> Vec<usize> {
        if !self.subset_live(s, r) {
            return Vec::new();
        }
        self.candidate_range(s).into_iter().flatten().filter(|&c| self.fits(s, c, r)).collect()
    }

    fn dfs(&mut self) -> Flow {
        self.nodes += 1;
        if self.nodes > self.cfg.budget {
            self.budget_hit = true;
            return Flow::Stop;
        }
        if self.unbalanced.items.is_empty() {
            return self.balanced();
        }
        // Most constrained (subset, collection) first.
        let mut best: Option<(usize, usize, usize)> = None;
        let t = self.cfg.t;
        for i in 0..self.unbalanced.items.len() {
            let key = self.unbalanced.items[i] as usize;
            let kp = self.key_points(key);
            let s = &kp[..t];
            for r in 0..self.cfg.mu {
                if self.covered(r, key) {
                    continue;
                }
                let limit = best.map_or(usize::MAX, |b| b.2);
                let cnt = self.count_candidates(s, r, limit);
                if cnt == 0 {
                    return Flow::Continue;
                }
                if best.is_none_or(|b| cnt < b.2) {
                    best = Some((key, r, cnt));
                }
            }
            if best.is_some_and(|b| b.2 == 1) {
                break;
            }
        }
        let (key, r, _) = best.expect("unbalanced subset present");
        let kp = self.key_points(key);
        let s: Vec<usize> = kp[..t].to_vec();
        for c in self.candidates(&s, r) {
            let mut pts = [0usize; 3];
            pts[..t].copy_from_slice(&s);
            pts[t] = c;
            self.place(pts, r);
            let f = self.dfs();
            self.unplace();
            if f == Flow::Stop {
                return Flow::Stop;
            }
        }
        Flow::Continue
    }

    fn used_points(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&x| self.touch[x] > 0)
    }

    fn balanced(&mut self) -> Flow {
        if self.vol[0] == self.cfg.volume {
            if let Some(d) = self.cfg.homogeneity {
                for x in self.used_points().collect::<Vec<_>>() {
                    if (0..self.cfg.mu).any(|r| self.deg(r, x) != d) {
                        return Flow::Continue;
                    }
                }
            }
            self.record();
            if self.cfg.max_solutions.is_some_and(|m| self.solutions.len() >= m) {
                return Flow::Stop;
            }
            return Flow::Continue;
        }
        if self.vol[0] > self.cfg.volume {
            return Flow::Continue;
        }
        for seed in self.seed_blocks() {
            self.place(seed, 0);
            let f = self.dfs();
            self.unplace();
            if f == Flow::Stop {
                return Flow::Stop;
            }
        }
        Flow::Continue
    }

    /// Blocks that may open the next piece in collection 0.
    fn seed_blocks(&self) -> Vec<[usize; 3]> {
        let anchor = if self.placed.is_empty() {
            match self.cfg.start_point {
                Some(x) => Some(x),
                // every block meets class 0 and its labels are interchangeable
                None if self.cfg.fresh_labels && (self.cfg.transversal || self.nclasses() == 1) => {
                    self.class_points(0, 0).next()
                }
                None => None,
            }
        } else if self.cfg.homogeneity.is_some() {
            let deficient = self.used_points().find(|&x| !self.deg_full(0, x));
            match deficient {
                Some(x) => Some(x),
                None if self.cfg.fresh_labels => {
                    let c0 = self.class_start[0] + self.class_used[0];
                    (self.class_used[0] < self.cfg.class_sizes[0]).then_some(c0)
                }
                // a further piece on unused labels
                None => None,
            }
        } else {
            None
        };
        let mut out = Vec::new();
        match anchor {
            Some(x) => self.blocks_through(x, &mut out),
            None if self.placed.is_empty() || self.cfg.homogeneity.is_none() || !self.cfg.fresh_labels => {
                let pts: Vec<usize> = (self.cfg.min_point..self.n)
                    .filter(|&x| self.touch[x] > 0 || !self.cfg.fresh_labels || self.is_next_fresh(x, 0))
                    .collect();
                for &x in &pts {
                    if self.touch[x] == 0 && self.cfg.fresh_labels {
                        // a block whose smallest point is fresh: only the first fresh label
                        if !self.is_next_fresh(x, 0) {
                            continue;
                        }
                    }
                    self.blocks_through_min(x, &mut out);
                }
            }
            None => {}
        }
        out
    }

    fn is_next_fresh(&self, x: usize, extra: usize) -> bool {
        let c = self.class_of[x];
        x == self.class_start[c] + self.class_used[c] + extra
    }

    fn point_ok_for_seed(&self, x: usize) -> bool {
        x >= self.cfg.min_point && !self.deg_full(0, x)
    }

    /// Blocks of collection 0 containing `x`, respecting fresh-label order.
    fn blocks_through(&self, x: usize, out: &mut Vec<[usize; 3]>) {
        self.enumerate_seed(x, false, out)
    }

    /// Blocks of collection 0 whose least point is `x`.
    fn blocks_through_min(&self, x: usize, out: &mut Vec<[usize; 3]>) {
        self.enumerate_seed(x, true, out)
    }

    fn enumerate_seed(&self, x: usize, x_is_min: bool, out: &mut Vec<[usize; 3]>) {
        if self.vol[0] >= self.cfg.volume || !self.point_ok_for_seed(x) {
            return;
        }
        let avail = |c: usize, extra: usize| -> Vec<usize> {
            let mut v: Vec<usize> = self.class_points(c, extra).collect();
            if self.cfg.fresh_labels && extra > 0 {
                // labels claimed earlier in this block are excluded by position
                v.retain(|&y| y < self.class_start[c] + self.class_used[c] || y >= self.class_start[c] + self.class_used[c] + extra);
            }
            v
        };
        let classes_for = |used: &[usize]| -> Vec<usize> {
            if self.cfg.transversal {
                let mut present = vec![false; self.nclasses()];
                for &p in used {
                    present[self.class_of[p]] = true;
                }
                (0..self.nclasses()).filter(|&c| !present[c]).collect()
            } else {
                (0..self.nclasses()).collect()
            }
        };
        let claimed = |c: usize, pts: &[usize]| -> usize {
            if !self.cfg.fresh_labels {
                return 0;
            }
            pts.iter().filter(|&&p| self.class_of[p] == c && self.touch[p] == 0).count()
        };
        let cover0 = |a: usize, b: usize| {
            let key = if a < b { a * self.n + b } else { b * self.n + a };
            self.covered(0, key)
        };
        for cy in classes_for(&[x]) {
            for y in avail(cy, claimed(cy, &[x])) {
                if y == x || (x_is_min && y < x) || !self.point_ok_for_seed(y) {
                    continue;
                }
                if self.cfg.t == 1 {
                    if self.covered(0, y) || self.covered(0, x) {
                        continue;
                    }
                    if self.fits(&[x], y, 0) && (self.touch[y] > 0 || self.fresh_in_order(&[x], y)) {
                        out.push([x, y, 0]);
                    }
                    continue;
                }
                if cover0(x, y) {
                    continue;
                }
                if self.cfg.fresh_labels && self.touch[y] == 0 && !self.fresh_in_order(&[x], y) {
                    continue;
                }
                for cz in classes_for(&[x, y]) {
                    for z in avail(cz, claimed(cz, &[x, y])) {
                        if z == x || z <= y || (x_is_min && z < x) {
                            continue;
                        }
                        if self.cfg.fresh_labels && self.touch[z] == 0 && !self.fresh_in_order(&[x, y], z) {
                            continue;
                        }
                        let mut s = [x, y];
                        s.sort_unstable();
                        if self.fits(&s, z, 0) && self.seed_caps_ok(x, y, z) {
                            out.push([x, y, z]);
                        }
                    }
                }
            }
        }
    }

    /// Fresh labels of a class enter in increasing order.
    fn fresh_in_order(&self, earlier: &[usize], y: usize) -> bool {
        let c = self.class_of[y];
        let claimed = earlier.iter().filter(|&&p| self.class_of[p] == c && self.touch[p] == 0).count();
        y == self.class_start[c] + self.class_used[c] + claimed
    }

    /// Union-degree check for the pair {x,y} that `fits` does not see.
    fn seed_caps_ok(&self, x: usize, y: usize, z: usize) -> bool {
        let Some(cap) = self.union_cap else { return true };
        let nc = self.nclasses();
        let key = if x < y { x * self.n + y } else { y * self.n + x };
        if self.ecount[key] != 0 {
            return true;
        }
        // fits() accounted for {x,z} and {y,z}; add {x,y}
        let extra = |p: usize, q: usize, other: usize| -> u16 {
            let mut e = 1;
            let k2 = if p < other { p * self.n + other } else { other * self.n + p };
            if self.ecount[k2] == 0 && self.class_of[other] == self.class_of[q] {
                e += 1;
            }
            e
        };
        self.union[x * nc + self.class_of[y]] + extra(x, y, z) <= cap && self.union[y * nc + self.class_of[x]] + extra(y, x, z) <= cap
    }

    fn record(&mut self) {
        let mut cols: Vec<Collection> = vec![Collection::default(); self.cfg.mu];
        for (p, r) in &self.placed {
            cols[*r].push(Block::from_sorted(p[..self.k].iter().map(|&x| x as Element).collect()));
        }
        let trade = MuWayTrade::new(self.k, self.cfg.t, cols).expect("engine blocks have size k");
        self.solutions.push(trade);
    }
}

fn block_key(n: usize, pts: &[usize]) -> usize {
    pts.iter().fold(0, |acc, &x| acc * n + x)
}

fn for_each_subset(pts: &[usize], t: usize, mut f: impl FnMut(&[usize])) {
    match t {
        1 => {
            for &a in pts {
                f(&[a]);
            }
        }
        2 => {
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    f(&[pts[i], pts[j]]);
                }
            }
        }
        _ => unreachable!(),
    }
}
