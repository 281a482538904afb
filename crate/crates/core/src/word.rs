use std::cmp::Ordering;
use std::fmt;
use std::ops::{Deref, Range};
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite word over byte letters.
///
/// Letters compare by numeric value, and the derived `Ord` is the
/// lexicographic order in which a proper prefix is smaller than the word.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl Into<Vec<u8>>) -> Self {
        Word(letters.into())
    }

    /// Parses printable ASCII (`!` through `~`); the empty string is ε.
    pub fn parse_ascii(s: &str) -> Result<Self> {
        match s.bytes().find(|b| !b.is_ascii_graphic()) {
            Some(b) => Err(Error::InvalidLetter(b)),
            None => Ok(Word(s.as_bytes().to_vec())),
        }
    }

    /// Parses a string of hex byte pairs, e.g. `"00010001"`.
    pub fn parse_hex(s: &str) -> Result<Self> {
        let s = s.trim();
        if !s.len().is_multiple_of(2) {
            return Err(Error::InvalidHex(s.to_owned()));
        }
        (0..s.len())
            .step_by(2)
            .map(|i| {
                u8::from_str_radix(&s[i..i + 2], 16).map_err(|_| Error::InvalidHex(s.to_owned()))
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.0
    }

    pub fn slice(&self, range: Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    /// Number of distinct letters.
    pub fn alphabet_size(&self) -> usize {
        let mut seen = [false; 256];
        self.0.iter().for_each(|&b| seen[b as usize] = true);
        seen.iter().filter(|&&s| s).count()
    }

    /// Renames letters to `a`, `b`, ... in order of first occurrence.
    pub fn canonical(&self) -> Word {
        let mut map = [None::<u8>; 256];
        let mut next = 0u8;
        Word(
            self.0
                .iter()
                .map(|&b| {
                    *map[b as usize].get_or_insert_with(|| {
                        next += 1;
                        b'a' + next - 1
                    })
                })
                .collect(),
        )
    }

    /// True when every letter is printable ASCII.
    pub fn is_printable(&self) -> bool {
        self.0.iter().all(u8::is_ascii_graphic)
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Order by length first, then lexicographically.
pub fn shortlex(a: &[u8], b: &[u8]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl Deref for Word {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl From<&[u8]> for Word {
    fn from(s: &[u8]) -> Self {
        Word(s.to_vec())
    }
}

impl From<Vec<u8>> for Word {
    fn from(v: Vec<u8>) -> Self {
        Word(v)
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Word::parse_ascii(s)
    }
}

impl fmt::Display for Word {
    /// Printable words render as text; anything else as `0x` + hex bytes.
    /// The empty word renders as the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_printable() {
            // ASCII graphic bytes are valid UTF-8.
            f.write_str(std::str::from_utf8(&self.0).unwrap_or_default())
        } else {
            write!(f, "0x{}", self.to_hex())
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("ε")
        } else {
            write!(f, "{self}")
        }
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
