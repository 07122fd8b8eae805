//! Text and JSON codecs for trades and Latin trades.
//!
//! Trade text format:
//!
//! ```text
//! trade mu=3 k=3 t=2
//! collection 1
//! 0 1 2
//! 0 3 6
//! collection 2
//! ...
//! ```
//!
//! `#` starts a comment line and blank lines are ignored. The JSON form is
//! `{"mu":3,"k":3,"t":2,"collections":[[[0,1,2],...],...]}`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::latin::{CellEntry, LatinTradeTriple};
use crate::model::{Block, Collection, Element, MuWayTrade};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse { line: 0, msg: format!("unknown format {other:?}") }),
        }
    }
}

/// Guess the format from the first significant character.
pub fn sniff(input: &str) -> Format {
    match input.trim_start().chars().next() {
        Some('{') => Format::Json,
        _ => Format::Text,
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct TradeDoc {
    mu: usize,
    k: usize,
    t: usize,
    collections: Vec<Vec<Vec<Element>>>,
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_header<'a>(line: &'a str, lineno: usize, keyword: &str, keys: &[&str]) -> Result<Vec<usize>> {
    let mut words = line.split_whitespace();
    if words.next() != Some(keyword) {
        return Err(err(lineno, format!("expected `{keyword} ...` header")));
    }
    let fields: Vec<(&'a str, &'a str)> = words
        .map(|w| w.split_once('=').ok_or_else(|| err(lineno, format!("malformed field {w:?}"))))
        .collect::<Result<_>>()?;
    if fields.len() != keys.len() {
        return Err(err(lineno, format!("expected fields {}", keys.join(", "))));
    }
    keys.iter()
        .zip(fields)
        .map(|(want, (k, v))| {
            if *want != k {
                return Err(err(lineno, format!("expected field {want}, found {k}")));
            }
            v.parse().map_err(|_| err(lineno, format!("{k} is not a non-negative integer")))
        })
        .collect()
}

fn significant_lines(input: &str) -> impl Iterator<Item = (usize, &str)> {
    input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_trade_text(input: &str) -> Result<MuWayTrade> {
    let mut lines = significant_lines(input);
    let (n, header) = lines.next().ok_or_else(|| err(0, "empty input"))?;
    let h = parse_header(header, n, "trade", &["mu", "k", "t"])?;
    let (mu, k, t) = (h[0], h[1], h[2]);
    let mut collections: Vec<Collection> = Vec::new();
    for (n, line) in lines {
        if let Some(rest) = line.strip_prefix("collection") {
            let idx: usize = rest.trim().parse().map_err(|_| err(n, "collection index is not an integer"))?;
            if idx != collections.len() + 1 {
                return Err(err(n, format!("expected collection {}, found {idx}", collections.len() + 1)));
            }
            collections.push(Collection::default());
            continue;
        }
        let cur = collections.last_mut().ok_or_else(|| err(n, "block before the first `collection` line"))?;
        let elems = line
            .split_whitespace()
            .map(|w| w.parse::<Element>().map_err(|_| err(n, format!("bad element {w:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if elems.windows(2).any(|w| w[0] >= w[1]) {
            return Err(err(n, "block elements must be strictly ascending"));
        }
        if elems.len() != k {
            return Err(err(n, format!("block has {} elements, expected k={k}", elems.len())));
        }
        cur.push(Block::from_sorted(elems));
    }
    if collections.len() != mu {
        return Err(err(0, format!("header says mu={mu} but {} collections follow", collections.len())));
    }
    MuWayTrade::new(k, t, collections)
}

/// Canonical text form. With `one_based`, labels are printed shifted up by one.
pub fn write_trade_text(trade: &MuWayTrade, one_based: bool) -> String {
    let shift = u32::from(one_based);
    let mut s = format!("trade mu={} k={} t={}\n", trade.mu(), trade.k(), trade.t());
    for (i, c) in trade.collections().iter().enumerate() {
        let _ = writeln!(s, "collection {}", i + 1);
        for b in c.blocks() {
            let words: Vec<String> = b.elements().iter().map(|x| (x + shift).to_string()).collect();
            s.push_str(&words.join(" "));
            s.push('\n');
        }
    }
    s
}

pub fn parse_trade_json(input: &str) -> Result<MuWayTrade> {
    let doc: TradeDoc = serde_json::from_str(input)?;
    if doc.collections.len() != doc.mu {
        return Err(err(0, format!("mu={} but {} collections", doc.mu, doc.collections.len())));
    }
    for c in &doc.collections {
        for b in c {
            if b.windows(2).any(|w| w[0] >= w[1]) {
                return Err(err(0, format!("block {b:?} is not strictly ascending")));
            }
        }
    }
    MuWayTrade::from_lists(doc.k, doc.t, &doc.collections)
}

pub fn write_trade_json(trade: &MuWayTrade, one_based: bool) -> String {
    let shift = u32::from(one_based);
    let doc = TradeDoc {
        mu: trade.mu(),
        k: trade.k(),
        t: trade.t(),
        collections: trade
            .collections()
            .iter()
            .map(|c| c.blocks().iter().map(|b| b.elements().iter().map(|x| x + shift).collect()).collect())
            .collect(),
    };
    let mut s = serde_json::to_string(&doc).expect("trade document serializes");
    s.push('\n');
    s
}

pub fn parse_trade(input: &str, format: Format) -> Result<MuWayTrade> {
    match format {
        Format::Text => parse_trade_text(input),
        Format::Json => parse_trade_json(input),
    }
}

pub fn write_trade(trade: &MuWayTrade, format: Format, one_based: bool) -> String {
    match format {
        Format::Text => write_trade_text(trade, one_based),
        Format::Json => write_trade_json(trade, one_based),
    }
}

/// Several trades in one stream, separated by the `trade` header lines.
pub fn parse_trades_text(input: &str) -> Result<Vec<MuWayTrade>> {
    let mut chunks: Vec<String> = Vec::new();
    for line in input.lines() {
        let trimmed = line.trim();
        if trimmed.starts_with("trade ") || trimmed == "trade" {
            chunks.push(String::new());
        }
        if let Some(c) = chunks.last_mut() {
            c.push_str(line);
            c.push('\n');
        }
    }
    chunks.iter().map(|c| parse_trade_text(c)).collect()
}

pub fn parse_latin_text(input: &str) -> Result<LatinTradeTriple> {
    let mut lines = significant_lines(input);
    let (n, header) = lines.next().ok_or_else(|| err(0, "empty input"))?;
    let h = parse_header(header, n, "latin", &["m", "d"])?;
    let mut cells = Vec::new();
    for (n, line) in lines {
        let v = line
            .split_whitespace()
            .map(|w| w.parse::<u32>().map_err(|_| err(n, format!("bad integer {w:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if v.len() != 5 {
            return Err(err(n, "expected `row col s1 s2 s3`"));
        }
        cells.push(CellEntry { row: v[0], col: v[1], symbols: [v[2], v[3], v[4]] });
    }
    Ok(LatinTradeTriple::new(h[0], h[1], cells))
}

pub fn write_latin_text(triple: &LatinTradeTriple) -> String {
    let mut s = format!("latin m={} d={}\n", triple.order(), triple.d());
    for c in triple.cells() {
        let _ = writeln!(s, "{} {} {} {} {}", c.row, c.col, c.symbols[0], c.symbols[1], c.symbols[2]);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::base_8_3_2;

    #[test]
    fn text_round_trip_is_byte_identical() {
        let text = write_trade_text(&base_8_3_2(), false);
        assert!(text.starts_with("trade mu=3 k=3 t=2\ncollection 1\n0 1 2\n"));
        let parsed = parse_trade_text(&text).unwrap();
        assert_eq!(write_trade_text(&parsed, false), text);
    }

    #[test]
    fn json_and_text_agree() {
        let t = base_8_3_2();
        let json = write_trade_json(&t, false);
        assert_eq!(sniff(&json), Format::Json);
        let back = parse_trade_json(&json).unwrap();
        assert_eq!(write_trade_text(&back, false), write_trade_text(&t, false));
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let src = "# header comment\ntrade mu=2 k=2 t=1\n\ncollection 1\n0 1\n# mid\ncollection 2\n0 1\n";
        let t = parse_trade_text(src).unwrap();
        assert_eq!(t.mu(), 2);
        assert_eq!(t.volume(), 1);
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_trade_text("").is_err());
        assert!(parse_trade_text("trade mu=1 k=3\n").is_err());
        assert!(parse_trade_text("trade mu=1 k=3 t=2\n0 1 2\n").is_err());
        assert!(parse_trade_text("trade mu=1 k=3 t=2\ncollection 1\n0 2 1\n").is_err());
        assert!(parse_trade_text("trade mu=1 k=3 t=2\ncollection 1\n0 1\n").is_err());
        assert!(parse_trade_text("trade mu=2 k=3 t=2\ncollection 1\n0 1 2\n").is_err());
        assert!(parse_trade_text("trade mu=1 k=3 t=2\ncollection 2\n").is_err());
        assert!(parse_trade_json("{\"mu\":1,\"k\":2,\"t\":1,\"collections\":[[[1,0]]]}").is_err());
    }

    #[test]
    fn one_based_display() {
        let t = MuWayTrade::from_lists(2, 1, &[vec![vec![0, 1]], vec![vec![0, 1]]]).unwrap();
        assert!(write_trade_text(&t, true).contains("\n1 2\n"));
    }

    #[test]
    fn multiple_trades_in_one_stream() {
        let t = base_8_3_2();
        let mut s = write_trade_text(&t, false);
        s.push_str(&write_trade_text(&t, false));
        s.push_str("exhausted=true classes=2\n");
        // status lines after the last trade are not blocks; strip them first
        let body: String = s.lines().filter(|l| !l.starts_with("exhausted=")).map(|l| format!("{l}\n")).collect();
        assert_eq!(parse_trades_text(&body).unwrap().len(), 2);
    }

    #[test]
    fn latin_round_trip() {
        let tri = crate::latin::construct_3_3_m(3).unwrap();
        let text = write_latin_text(&tri);
        assert!(text.starts_with("latin m=3 d=3\n0 0 0 1 2\n"));
        assert_eq!(parse_latin_text(&text).unwrap(), tri);
    }
}
