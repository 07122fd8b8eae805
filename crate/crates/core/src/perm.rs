//! Permutations of element labels.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::Element;
use crate::notation;

/// A bijection on element labels; unmentioned labels are fixed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Permutation {
    moved: BTreeMap<Element, Element>,
}

impl Permutation {
    pub fn identity() -> Self {
        Permutation::default()
    }

    /// From an explicit image table over `0..images.len()`.
    pub fn from_images(images: &[Element]) -> Result<Self> {
        Self::from_pairs(images.iter().enumerate().map(|(i, &y)| (i as Element, y)))
    }

    /// From `(x, pi(x))` pairs. The pairs must be injective and map their
    /// domain onto itself.
    pub fn from_pairs<I: IntoIterator<Item = (Element, Element)>>(pairs: I) -> Result<Self> {
        let mut moved = BTreeMap::new();
        for (x, y) in pairs {
            if moved.insert(x, y).is_some_and(|old| old != y) {
                return Err(Error::NotABijection(format!("{x} mapped twice")));
            }
        }
        let mut domain: Vec<Element> = moved.keys().copied().collect();
        let mut image: Vec<Element> = moved.values().copied().collect();
        image.sort_unstable();
        if image.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotABijection("two labels share an image".into()));
        }
        domain.sort_unstable();
        if domain != image {
            return Err(Error::NotABijection("image is not the domain".into()));
        }
        moved.retain(|x, y| x != y);
        Ok(Permutation { moved })
    }

    pub fn from_cycles(cycles: &[&[Element]]) -> Result<Self> {
        let mut pairs = Vec::new();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                pairs.push((x, cycle[(i + 1) % cycle.len()]));
            }
        }
        let mut seen: Vec<Element> = pairs.iter().map(|p| p.0).collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotABijection("cycles are not disjoint".into()));
        }
        Self::from_pairs(pairs)
    }

    /// Parses cycle notation whose entries use the one-character digit/letter
    /// labels of printed designs, e.g. `(1 e)(2 4)(3 7)`.
    pub fn parse_cycles(s: &str) -> Result<Self> {
        let mut cycles: Vec<Vec<Element>> = Vec::new();
        let mut cur: Option<Vec<Element>> = None;
        for ch in s.chars() {
            match ch {
                '(' => {
                    if cur.is_some() {
                        return Err(parse_err("nested '('"));
                    }
                    cur = Some(Vec::new());
                }
                ')' => cycles.push(cur.take().ok_or_else(|| parse_err("unmatched ')'"))?),
                c if c.is_whitespace() || c == ',' => {}
                c => {
                    let x = notation::decode_symbol(c).ok_or_else(|| parse_err(&format!("bad symbol {c:?}")))?;
                    cur.as_mut().ok_or_else(|| parse_err("symbol outside a cycle"))?.push(x);
                }
            }
        }
        if cur.is_some() {
            return Err(parse_err("unterminated cycle"));
        }
        let refs: Vec<&[Element]> = cycles.iter().map(Vec::as_slice).collect();
        Self::from_cycles(&refs)
    }

    pub fn apply(&self, x: Element) -> Element {
        self.moved.get(&x).copied().unwrap_or(x)
    }

    pub fn inverse(&self) -> Permutation {
        Permutation { moved: self.moved.iter().map(|(&x, &y)| (y, x)).collect() }
    }

    /// `self` after `other`: `x -> self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let keys: Vec<Element> = self.moved.keys().chain(other.moved.keys()).copied().collect();
        let mut moved = BTreeMap::new();
        for x in keys {
            let y = self.apply(other.apply(x));
            if y != x {
                moved.insert(x, y);
            }
        }
        Permutation { moved }
    }

    pub fn is_identity(&self) -> bool {
        self.moved.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = Element> + '_ {
        self.moved.keys().copied()
    }
}

fn parse_err(msg: &str) -> Error {
    Error::Parse { line: 1, msg: msg.to_string() }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moved.is_empty() {
            return f.write_str("()");
        }
        let mut done = std::collections::BTreeSet::new();
        for &start in self.moved.keys() {
            if !done.insert(start) {
                continue;
            }
            write!(f, "({start}")?;
            let mut x = self.apply(start);
            while x != start {
                done.insert(x);
                write!(f, " {x}")?;
                x = self.apply(x);
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation_round_trip() {
        let p = Permutation::parse_cycles("(6 7 8)(9 b a)(c d e)").unwrap();
        // one-based printed labels: 6 -> label 5, b -> 10, e -> 13
        assert_eq!(p.apply(5), 6);
        assert_eq!(p.apply(7), 5);
        assert_eq!(p.apply(8), 10);
        assert_eq!(p.apply(0), 0);
        let cube = p.compose(&p).compose(&p);
        assert!(cube.is_identity());
        assert_eq!(p.to_string(), "(5 6 7)(8 10 9)(11 12 13)");
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(&[0, 0, 1]).is_err());
        assert!(Permutation::from_pairs([(0, 5)]).is_err());
        assert!(Permutation::from_cycles(&[&[0, 1], &[1, 2]]).is_err());
        assert!(Permutation::parse_cycles("(1 2").is_err());
    }

    #[test]
    fn inverse_composes_to_identity() {
        let p = Permutation::from_images(&[2, 0, 3, 1]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
    }
}
