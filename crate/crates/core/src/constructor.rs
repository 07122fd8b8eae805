//! Existence oracle and witness construction for 3-way `d`-homogeneous
//! `(v,3,2)` Steiner trades.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::catalog::{base_8_3_2, three_disjoint_packings_12, three_disjoint_sts, trade_14, trade_15, trade_16};
use crate::error::{Error, Result};
use crate::latin::{
    construct_3_3_m, cyclic_latin_trade, full_cyclic, latin_to_steiner, search_latin_trade, LatinSearchOutcome, LatinTradeTriple,
};
use crate::model::MuWayTrade;
use crate::search::find_homogeneous_subtrade;
use crate::verify::verify_homogeneous_steiner;

/// `v = 9·nines + 8·eights`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Representation {
    pub nines: usize,
    pub eights: usize,
}

/// Lexicographically least `(ℓ, ℓ′)` with `9ℓ + 8ℓ′ = v`.
pub fn represent_8_9(v: usize) -> Option<Representation> {
    representations_8_9(v).into_iter().next()
}

/// Every representation, ascending in `nines`.
pub fn representations_8_9(v: usize) -> Vec<Representation> {
    if v == 0 {
        return Vec::new();
    }
    (0..=v / 9)
        .filter(|l| (v - 9 * l).is_multiple_of(8))
        .map(|l| Representation { nines: l, eights: (v - 9 * l) / 8 })
        .collect()
}

/// Values of `v` without a 3-homogeneous trade.
pub fn d3_exception(v: usize) -> bool {
    matches!(v, 10..=15 | 19..=23 | 28..=31 | 37..=39 | 46 | 47 | 55)
}

/// The six `v` left undecided for `d = 6`.
pub const D6_OPEN: [usize; 6] = [17, 19, 20, 22, 23, 25];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Exists,
    NotExists,
    OpenInPaper,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Exists => "Exists",
            Status::NotExists => "NotExists",
            Status::OpenInPaper => "OpenInPaper",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Clause {
    ZeroDegree,
    Divisibility,
    TooFewPoints,
    SmallVolume,
    D3Exception,
    D5Open,
    D6Open,
    /// `m = 30` or `m = 42`, or `m = 7` with `d = 4`, inside the mod-5 or mod-7 clause.
    LatinOpen,
    NotCovered,
    D4,
    D5,
    SmallD,
    D15,
    LargeOrder,
    Mod5,
    Mod7,
    SixMPlusOne,
    SixMPlusThree,
    D3,
    D6,
}

impl Clause {
    pub fn id(self) -> &'static str {
        match self {
            Clause::ZeroDegree => "zero-degree",
            Clause::Divisibility => "divisibility",
            Clause::TooFewPoints => "too-few-points",
            Clause::SmallVolume => "small-volume",
            Clause::D3Exception => "d3-exception",
            Clause::D5Open => "d5-open",
            Clause::D6Open => "d6-open",
            Clause::LatinOpen => "latin-open",
            Clause::NotCovered => "not-covered",
            Clause::D4 => "I(a)",
            Clause::D5 => "I(b)",
            Clause::SmallD => "I(c)",
            Clause::D15 => "I(d)",
            Clause::LargeOrder => "I(e)",
            Clause::Mod5 => "I(f)",
            Clause::Mod7 => "I(g)",
            Clause::SixMPlusOne => "II",
            Clause::SixMPlusThree => "III",
            Clause::D3 => "IV(a)",
            Clause::D6 => "IV(b)",
        }
    }

    pub fn citation(self) -> &'static str {
        match self {
            Clause::ZeroDegree => "d must be positive",
            Clause::Divisibility => "Remark 2",
            Clause::TooFewPoints => "Remark 3",
            Clause::SmallVolume => "Proposition 1",
            Clause::D3Exception => "Theorem 14",
            Clause::D5Open => "Theorem 19",
            Clause::D6Open => "Theorem 21",
            Clause::LatinOpen => "Theorem 6",
            Clause::NotCovered => "Main Theorem",
            Clause::D4 => "Main Theorem I(a)",
            Clause::D5 => "Main Theorem I(b)",
            Clause::SmallD => "Main Theorem I(c)",
            Clause::D15 => "Main Theorem I(d)",
            Clause::LargeOrder => "Main Theorem I(e)",
            Clause::Mod5 => "Main Theorem I(f)",
            Clause::Mod7 => "Main Theorem I(g)",
            Clause::SixMPlusOne => "Main Theorem II",
            Clause::SixMPlusThree => "Main Theorem III",
            Clause::D3 => "Main Theorem IV(a)",
            Clause::D6 => "Main Theorem IV(b)",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExistenceVerdict {
    pub status: Status,
    pub clause: Clause,
}

impl ExistenceVerdict {
    fn new(status: Status, clause: Clause) -> Self {
        ExistenceVerdict { status, clause }
    }

    pub fn citation(&self) -> &'static str {
        self.clause.citation()
    }

    pub fn exists(&self) -> bool {
        self.status == Status::Exists
    }
}

impl fmt::Display for ExistenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.status, self.citation())
    }
}

/// What is known about a 3-way `d`-homogeneous `(v,3,2)` Steiner trade.
///
/// Necessary conditions come first, then the finite exception and open
/// sets, then the existence clauses in order; the first match is reported.
/// A clause's own "except possibly" values only end the scan if no later
/// clause covers `(d, v)`.
pub fn existence_verdict(d: usize, v: usize) -> ExistenceVerdict {
    use Clause::*;
    use Status::*;
    let verdict = ExistenceVerdict::new;
    if d == 0 {
        return verdict(NotExists, ZeroDegree);
    }
    if !(d * v).is_multiple_of(3) {
        return verdict(NotExists, Divisibility);
    }
    if v < 2 * d + 1 {
        return verdict(NotExists, TooFewPoints);
    }
    if d * v / 3 <= 7 {
        return verdict(NotExists, SmallVolume);
    }
    if d == 3 && d3_exception(v) {
        return verdict(NotExists, D3Exception);
    }
    if d == 5 && v == 18 {
        return verdict(OpenInPaper, D5Open);
    }
    if d == 6 && D6_OPEN.contains(&v) {
        return verdict(OpenInPaper, D6Open);
    }
    let mut clause_local_open = false;
    if v.is_multiple_of(3) {
        let m = v / 3;
        if d == 4 && m >= 3 {
            return verdict(Exists, D4);
        }
        if d == 5 && m >= 4 && m != 6 {
            return verdict(Exists, D5);
        }
        if (7..=13).contains(&d) && m >= d {
            return verdict(Exists, SmallD);
        }
        if d == 15 && m >= d {
            return verdict(Exists, D15);
        }
        if d >= 4 && m >= d * d {
            return verdict(Exists, LargeOrder);
        }
        if d >= 4 && m.is_multiple_of(5) && m >= d {
            if m != 30 {
                return verdict(Exists, Mod5);
            }
            clause_local_open = true;
        }
        if d >= 4 && m.is_multiple_of(7) && m >= d {
            if m != 42 && !(m == 7 && d == 4) {
                return verdict(Exists, Mod7);
            }
            clause_local_open = true;
        }
    }
    if v == 2 * d + 1 && d.is_multiple_of(3) && d >= 6 {
        return verdict(Exists, SixMPlusOne);
    }
    if v == 2 * d + 1 && d % 3 == 1 && d >= 4 {
        return verdict(Exists, SixMPlusThree);
    }
    if d == 3 && v >= 8 {
        return verdict(Exists, D3);
    }
    if d == 6 && v >= 13 {
        return verdict(Exists, D6);
    }
    if clause_local_open {
        return verdict(OpenInPaper, LatinOpen);
    }
    verdict(OpenInPaper, NotCovered)
}

#[derive(Clone, Copy, Debug)]
pub struct ConstructorOptions {
    /// Node budget for each Latin-trade search.
    pub budget: u64,
    pub seed: u64,
}

impl Default for ConstructorOptions {
    fn default() -> Self {
        ConstructorOptions { budget: 100_000_000, seed: 1 }
    }
}

#[derive(Clone, Debug)]
pub enum Construction {
    Built(MuWayTrade),
    /// The oracle does not report existence.
    Declined(ExistenceVerdict),
    /// A search needed by every route ran out of budget.
    BudgetExhausted,
    /// Existence is reported but no route here produced a witness.
    NoRoute,
}

impl Construction {
    pub fn trade(self) -> Option<MuWayTrade> {
        match self {
            Construction::Built(t) => Some(t),
            _ => None,
        }
    }
}

type LatinCache = HashMap<(usize, usize), Option<LatinTradeTriple>>;

/// Latin pieces are shared across constructors; entries never change once set.
fn latin_cache() -> &'static Mutex<LatinCache> {
    static CACHE: OnceLock<Mutex<LatinCache>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds witnesses by disjoint unions of fixed pieces and Latin-trade images.
pub struct Constructor {
    opts: ConstructorOptions,
    steiner: HashMap<(usize, usize, bool), Option<MuWayTrade>>,
    budget_hit: bool,
}

impl Constructor {
    pub fn new(opts: ConstructorOptions) -> Self {
        Constructor { opts, steiner: HashMap::new(), budget_hit: false }
    }

    pub fn construct(&mut self, d: usize, v: usize) -> Construction {
        let verdict = existence_verdict(d, v);
        if !verdict.exists() {
            return Construction::Declined(verdict);
        }
        self.budget_hit = false;
        let built = if d == 3 { self.d3(v) } else { self.build(d, v, false).or_else(|| self.build(d, v, true)) };
        match built {
            Some(t) => {
                assert!(
                    verify_homogeneous_steiner(&t, d).is_valid() && t.volume() == d * v / 3,
                    "constructed ({d},{v}) witness failed verification"
                );
                Construction::Built(t)
            }
            None if self.budget_hit => Construction::BudgetExhausted,
            None => Construction::NoRoute,
        }
    }

    /// As many 9-point pieces as possible, then 8-point ones.
    fn d3(&mut self, v: usize) -> Option<MuWayTrade> {
        let rep = *representations_8_9(v).last()?;
        let nine = latin_to_steiner(&full_cyclic(3)).expect("cyclic triple verifies");
        let eight = base_8_3_2();
        let mut pieces = std::iter::repeat_n(&nine, rep.nines).chain(std::iter::repeat_n(&eight, rep.eights));
        let first = pieces.next()?.clone();
        Some(pieces.fold(first, |acc, p| acc.disjoint_union(p).expect("same parameters")))
    }

    /// Pieces with a fixed foundation size for this `d`.
    fn fixed_piece(&mut self, d: usize, v: usize) -> Option<MuWayTrade> {
        if v == 2 * d + 1 && matches!(v % 6, 1 | 3) && v >= 9 {
            return match three_disjoint_sts(v, self.opts.seed, self.opts.budget) {
                Ok(t) => Some(t),
                Err(Error::BudgetExhausted(_)) => {
                    self.budget_hit = true;
                    None
                }
                Err(_) => None,
            };
        }
        match (d, v) {
            (5, 12) => Some(three_disjoint_packings_12()),
            (6, 14) => Some(trade_14()),
            (6, 15) => Some(trade_15()),
            (6, 16) => Some(trade_16()),
            _ => None,
        }
    }

    fn fixed_sizes(d: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let v = 2 * d + 1;
        if matches!(v % 6, 1 | 3) && v >= 9 {
            out.push(v);
        }
        match d {
            5 => out.push(12),
            6 => out.extend([14, 15, 16]),
            _ => {}
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn build(&mut self, d: usize, v: usize, search: bool) -> Option<MuWayTrade> {
        if let Some(hit) = self.steiner.get(&(d, v, search)) {
            return hit.clone();
        }
        let out = self.build_uncached(d, v, search);
        self.steiner.insert((d, v, search), out.clone());
        out
    }

    fn build_uncached(&mut self, d: usize, v: usize, search: bool) -> Option<MuWayTrade> {
        if v < 2 * d + 1 {
            return None;
        }
        if let Some(t) = self.fixed_piece(d, v) {
            return Some(t);
        }
        if v.is_multiple_of(3) {
            if let Some(l) = self.latin(d, v / 3, search) {
                return Some(latin_to_steiner(&l).expect("Latin pieces verify"));
            }
        }
        for a in Self::fixed_sizes(d) {
            if v > a + 2 * d {
                let Some(rest) = self.build(d, v - a, search) else { continue };
                let piece = self.fixed_piece(d, a)?;
                return Some(piece.disjoint_union(&rest).expect("same parameters"));
            }
        }
        None
    }

    /// A `(3, d, m)` Latin trade: cyclic pieces, block-diagonal sums, then
    /// (with `search`) the exhaustive engine.
    pub fn latin(&mut self, d: usize, m: usize, search: bool) -> Option<LatinTradeTriple> {
        if let Some(hit) = latin_cache().lock().expect("cache lock").get(&(d, m)) {
            return hit.clone();
        }
        let cheap = latin_cheap(d, m);
        if cheap.is_some() || !search {
            if cheap.is_some() {
                latin_cache().lock().expect("cache lock").insert((d, m), cheap.clone());
            }
            return cheap;
        }
        let found = match cyclic_latin_trade(d, m, self.opts.budget) {
            Some(t) => Some(t),
            None => match search_latin_trade(d, m, self.opts.budget).outcome {
                LatinSearchOutcome::Found(t) => Some(t),
                LatinSearchOutcome::Exhausted => None,
                LatinSearchOutcome::BudgetExhausted => {
                    self.budget_hit = true;
                    return None;
                }
            },
        };
        latin_cache().lock().expect("cache lock").insert((d, m), found.clone());
        found
    }
}

/// Budget-free routes only; `None` means "not by these routes".
fn latin_cheap(d: usize, m: usize) -> Option<LatinTradeTriple> {
    fn go(d: usize, m: usize, memo: &mut HashMap<usize, Option<LatinTradeTriple>>) -> Option<LatinTradeTriple> {
        if let Some(hit) = memo.get(&m) {
            return hit.clone();
        }
        let out = if m < d || d < 3 {
            None
        } else if d == 3 {
            construct_3_3_m(m).ok()
        } else if m == d {
            Some(full_cyclic(m))
        } else if let Some(t) = crate::latin::cyclic_from_hint(d, m) {
            Some(t)
        } else if m >= 2 * d {
            (d..=m / 2).find_map(|a| {
                let x = go(d, a, memo)?;
                let y = go(d, m - a, memo)?;
                Some(x.direct_sum(&y).expect("same d"))
            })
        } else if d == 4 && (m == 8 || m == 9) {
            // small enough for the engine to settle at once
            match search_latin_trade(d, m, 1_000_000).outcome {
                LatinSearchOutcome::Found(t) => Some(t),
                _ => None,
            }
        } else {
            cyclic_latin_trade(d, m, 200_000)
        };
        memo.insert(m, out.clone());
        out
    }
    go(d, m, &mut HashMap::new())
}

/// `construct` with default options.
pub fn construct(d: usize, v: usize) -> Option<MuWayTrade> {
    Constructor::new(ConstructorOptions::default()).construct(d, v).trade()
}

/// Split a 3-homogeneous trade of volume `v` on `v` points into subtrades
/// of volume 8 or 9, each 3-homogeneous on its own foundation.
///
/// Removing such a piece leaves a trade of the same kind, so pieces are
/// taken greedily.
pub fn decompose_3homogeneous(trade: &MuWayTrade) -> Result<Vec<MuWayTrade>> {
    let v = trade.foundation().map_err(|e| Error::NotDecomposable(e.to_string()))?.len();
    if trade.mu() != 3 || !verify_homogeneous_steiner(trade, 3).is_valid() || trade.volume() != v {
        return Err(Error::NotDecomposable("input is not a 3-way 3-homogeneous (v,3,2) Steiner trade of volume v".into()));
    }
    let mut rest = trade.clone();
    let mut pieces = Vec::new();
    while rest.volume() > 0 {
        let piece = find_homogeneous_subtrade(&rest, 8, 3)
            .or_else(|| find_homogeneous_subtrade(&rest, 9, 3))
            .ok_or_else(|| Error::NotDecomposable(format!("no piece of volume 8 or 9 in a remainder of volume {}", rest.volume())))?;
        rest = rest.minus(&piece)?;
        pieces.push(piece);
    }
    Ok(pieces)
}
