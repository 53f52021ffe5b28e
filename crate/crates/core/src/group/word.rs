use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// A generator or its inverse. Generators are numbered `a1, b1, a2, b2, …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Self { generator: self.generator, inverse: !self.inverse }
    }

    /// Position in the shortlex alphabet `a1 < A1 < b1 < B1 < …`.
    pub fn code(self) -> usize {
        2 * self.generator + self.inverse as usize
    }

    pub fn from_code(code: usize) -> Self {
        Self { generator: code / 2, inverse: code % 2 == 1 }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match (self.generator % 2, self.inverse) {
            (0, false) => 'a',
            (0, true) => 'A',
            (_, false) => 'b',
            (_, true) => 'B',
        };
        write!(f, "{}{}", base, self.generator / 2 + 1)
    }
}

/// A freely reduced word in the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self { letters: out }
    }

    pub fn generator(index: usize) -> Self {
        Self { letters: alloc::vec![Letter::new(index, false)] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self::new(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn append(&self, letter: Letter) -> Self {
        self.concat(&Self { letters: alloc::vec![letter] })
    }

    /// Shortlex comparison key.
    pub fn shortlex_cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.iter().map(|l| l.code()).cmp(other.letters.iter().map(|l| l.code())))
    }

    /// Parses space-separated letters such as `"a1 B2"`; `"e"` or `""` is the empty word.
    pub fn parse(text: &str, genus: usize) -> Result<Self> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            if token == "e" {
                continue;
            }
            let mut chars = token.chars();
            let head = chars.next().ok_or_else(|| Error::InvalidInput(String::from(token)))?;
            let index: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::InvalidInput(alloc::format!("bad letter {token}")))?;
            if index == 0 || index > genus {
                return Err(Error::InvalidInput(alloc::format!("letter {token} outside genus {genus}")));
            }
            let (offset, inverse) = match head {
                'a' => (0, false),
                'A' => (0, true),
                'b' => (1, false),
                'B' => (1, true),
                _ => return Err(Error::InvalidInput(alloc::format!("bad letter {token}"))),
            };
            letters.push(Letter::new(2 * (index - 1) + offset, inverse));
        }
        Ok(Self::new(letters))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.shortlex_cmp(other)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// The standard presentation `⟨a1, b1, …, ak, bk | [a1,b1]···[ak,bk]⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SurfacePresentation {
    pub genus: usize,
}

impl SurfacePresentation {
    pub fn new(genus: usize) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidInput(alloc::format!("genus must be at least 2, got {genus}")));
        }
        Ok(Self { genus })
    }

    pub fn generator_count(&self) -> usize {
        2 * self.genus
    }

    pub fn relator(&self) -> Word {
        let mut letters = Vec::with_capacity(4 * self.genus);
        for i in 0..self.genus {
            let (a, b) = (2 * i, 2 * i + 1);
            letters.extend([
                Letter::new(a, false),
                Letter::new(b, false),
                Letter::new(a, true),
                Letter::new(b, true),
            ]);
        }
        Word::new(letters)
    }

    /// All letters, in shortlex order.
    pub fn alphabet(&self) -> Vec<Letter> {
        (0..2 * self.generator_count()).map(Letter::from_code).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_inverse() {
        let w = Word::parse("a1 b1 B1 A1 a2", 2).unwrap();
        assert_eq!(w, Word::parse("a2", 2).unwrap());
        let v = Word::parse("a1 B2 b1", 2).unwrap();
        assert!(v.concat(&v.inverse()).is_empty());
        assert_eq!(alloc::format!("{v}"), "a1 B2 b1");
        assert!(Word::parse("c1", 2).is_err());
        assert!(Word::parse("a3", 2).is_err());
    }

    #[test]
    fn relator_shape() {
        let p = SurfacePresentation::new(2).unwrap();
        assert_eq!(alloc::format!("{}", p.relator()), "a1 b1 A1 B1 a2 b2 A2 B2");
        assert!(SurfacePresentation::new(1).is_err());
    }

    #[test]
    fn shortlex() {
        let a = Word::parse("a1 b1", 2).unwrap();
        let b = Word::parse("A1 a2", 2).unwrap();
        let c = Word::parse("b2", 2).unwrap();
        assert_eq!(a.shortlex_cmp(&b), core::cmp::Ordering::Less);
        assert_eq!(c.shortlex_cmp(&a), core::cmp::Ordering::Less);
    }
}
