//! Compact printed notation for small designs.
//!
//! Printed tables write each block as a run of one-character labels counted
//! from 1, with `a`..`g` standing for 10..16 (`"12f"` is the block
//! {1, 2, 15}). Parsing shifts every label down by one so data lands on the
//! 0-based labels used everywhere else.

use crate::error::{Error, Result};
use crate::model::{Block, Collection, Element};

/// `'1'..='9'` and `'a'..='g'` to 0-based labels.
pub fn decode_symbol(c: char) -> Option<Element> {
    match c {
        '1'..='9' => Some(c as Element - '1' as Element),
        'a'..='g' => Some(c as Element - 'a' as Element + 9),
        _ => None,
    }
}

/// Inverse of [`decode_symbol`].
pub fn encode_symbol(x: Element) -> Option<char> {
    match x {
        0..=8 => char::from_digit(x + 1, 10),
        9..=15 => char::from_u32('a' as u32 + (x - 9)),
        _ => None,
    }
}

pub fn parse_block(word: &str) -> Result<Block> {
    let elems = word
        .chars()
        .map(|c| decode_symbol(c).ok_or_else(|| Error::Parse { line: 1, msg: format!("bad symbol {c:?} in {word:?}") }))
        .collect::<Result<Vec<_>>>()?;
    Block::new(elems)
}

/// Blocks separated by whitespace or commas.
pub fn parse_blocks(s: &str) -> Result<Collection> {
    s.split(|c: char| c.is_whitespace() || c == ',').filter(|w| !w.is_empty()).map(parse_block).collect()
}

pub fn format_block(b: &Block) -> Option<String> {
    b.elements().iter().map(|&x| encode_symbol(x)).collect()
}
