//! Palindromic tree (eertree) with an undo journal.
//!
//! Appending a letter creates at most one new distinct palindrome: the
//! longest palindromic suffix of the extended word, if it did not occur
//! before. A word is rich exactly when every append creates one.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,
    #[error("letter {letter} outside alphabet of size {q}")]
    InvalidLetter { letter: u32, q: u32 },
    #[error("character {0:?} is not a letter ('a'..'z' then '0'..'9')")]
    InvalidChar(char),
    #[error("pop on an empty journal")]
    EmptyJournal,
}

/// A letter of the alphabet `{0, .., q-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u32);

/// Characters used at the text boundary, in letter order.
const GLYPHS: &[u8; 36] = b"abcdefghijklmnopqrstuvwxyz0123456789";

impl Letter {
    pub fn from_char(c: char) -> Result<Letter, WordError> {
        GLYPHS
            .iter()
            .position(|&g| g as char == c)
            .map(|i| Letter(i as u32))
            .ok_or(WordError::InvalidChar(c))
    }

    /// Text glyph, for letters below 36.
    pub fn to_char(self) -> Option<char> {
        GLYPHS.get(self.0 as usize).map(|&g| g as char)
    }
}

/// A finite word over the integer alphabet `{0, .., q-1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn from_indices(xs: &[u32]) -> Word {
        Word(xs.iter().map(|&x| Letter(x)).collect())
    }

    /// Parse text using `a..z` then `0..9`; every letter must be below `q`.
    pub fn parse(text: &str, q: u32) -> Result<Word, WordError> {
        if q == 0 {
            return Err(WordError::EmptyAlphabet);
        }
        let w = text
            .chars()
            .map(Letter::from_char)
            .collect::<Result<Vec<_>, _>>()?;
        Word(w).validate(q)
    }

    pub fn validate(self, q: u32) -> Result<Word, WordError> {
        if let Some(&Letter(letter)) = self.0.iter().find(|l| l.0 >= q) {
            return Err(WordError::InvalidLetter { letter, q });
        }
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn is_palindrome(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            match l.to_char() {
                Some(c) => write!(f, "{c}")?,
                None => write!(f, "<{}>", l.0)?,
            }
        }
        Ok(())
    }
}

const NONE: u32 = u32::MAX;
const IMAGINARY: u32 = 0;
const EMPTY: u32 = 1;

#[derive(Debug, Clone, Copy)]
struct Entry {
    prev_last: u32,
    /// Node that received the new edge, when a palindrome was created.
    parent: u32,
}

/// Incremental palindromic tree over a `q`-letter alphabet.
#[derive(Debug, Clone)]
pub struct PalTree {
    q: u32,
    len: Vec<i32>,
    link: Vec<u32>,
    /// `next[node * q + letter]`
    next: Vec<u32>,
    word: Vec<u32>,
    last: u32,
    journal: Vec<Entry>,
    corrupt_links: bool,
}

impl PalTree {
    pub fn new(q: u32) -> Result<PalTree, WordError> {
        if q == 0 {
            return Err(WordError::EmptyAlphabet);
        }
        Ok(PalTree {
            q,
            len: vec![-1, 0],
            link: vec![IMAGINARY, IMAGINARY],
            next: vec![NONE; 2 * q as usize],
            word: Vec::new(),
            last: EMPTY,
            journal: Vec::new(),
            corrupt_links: false,
        })
    }

    /// Tree whose new nodes get a suffix link to the empty palindrome.
    /// Only meant to demonstrate that verification catches a broken tree.
    #[doc(hidden)]
    pub fn with_corrupted_links(q: u32) -> Result<PalTree, WordError> {
        let mut t = PalTree::new(q)?;
        t.corrupt_links = true;
        Ok(t)
    }

    pub fn alphabet_size(&self) -> u32 {
        self.q
    }

    /// Number of distinct non-empty palindromic factors of the current word.
    pub fn pal_count(&self) -> usize {
        self.len.len() - 2
    }

    pub fn word_len(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> Word {
        Word::from_indices(&self.word)
    }

    /// Length of the longest palindromic suffix.
    pub fn longest_pal_suffix(&self) -> usize {
        self.len[self.last as usize] as usize
    }

    /// `|w|` minus the number of distinct palindromic factors.
    pub fn defect(&self) -> usize {
        self.word.len() - self.pal_count()
    }

    pub fn is_rich(&self) -> bool {
        self.defect() == 0
    }

    #[inline]
    fn edge(&self, node: u32, c: u32) -> u32 {
        self.next[node as usize * self.q as usize + c as usize]
    }

    /// Walk suffix links from `node` until `X` with `c X c` a suffix.
    #[inline]
    fn extendable(&self, mut node: u32, c: u32) -> u32 {
        let pos = self.word.len() - 1;
        loop {
            let l = self.len[node as usize];
            let before = pos as i64 - l as i64 - 1;
            if before >= 0 && self.word[before as usize] == c {
                return node;
            }
            if l == -1 {
                // the imaginary root always matches: c X c = c
                return node;
            }
            node = self.link[node as usize];
        }
    }

    /// Append a letter; true iff a new distinct palindrome appeared.
    pub fn push(&mut self, c: Letter) -> Result<bool, WordError> {
        if c.0 >= self.q {
            return Err(WordError::InvalidLetter {
                letter: c.0,
                q: self.q,
            });
        }
        Ok(self.push_unchecked(c.0))
    }

    pub(crate) fn push_unchecked(&mut self, c: u32) -> bool {
        self.word.push(c);
        let prev_last = self.last;
        let parent = self.extendable(self.last, c);
        let existing = self.edge(parent, c);
        if existing != NONE {
            self.last = existing;
            self.journal.push(Entry {
                prev_last,
                parent: NONE,
            });
            return false;
        }
        let new_len = self.len[parent as usize] + 2;
        let suffix = if new_len == 1 || self.corrupt_links {
            EMPTY
        } else {
            let w = self.extendable(self.link[parent as usize], c);
            self.edge(w, c)
        };
        let id = self.len.len() as u32;
        self.len.push(new_len);
        self.link.push(suffix);
        self.next.extend(std::iter::repeat_n(NONE, self.q as usize));
        self.next[parent as usize * self.q as usize + c as usize] = id;
        self.last = id;
        self.journal.push(Entry { prev_last, parent });
        true
    }

    /// Undo the most recent push.
    pub fn pop(&mut self) -> Result<(), WordError> {
        let e = self.journal.pop().ok_or(WordError::EmptyJournal)?;
        let c = self.word.pop().expect("journal and word stay in step");
        if e.parent != NONE {
            self.next[e.parent as usize * self.q as usize + c as usize] = NONE;
            self.len.pop();
            self.link.pop();
            let keep = self.len.len() * self.q as usize;
            self.next.truncate(keep);
        }
        self.last = e.prev_last;
        Ok(())
    }

    /// Push all letters; returns how many of them created a palindrome.
    pub fn extend(&mut self, w: &Word) -> Result<usize, WordError> {
        let mut created = 0;
        for &c in w.letters() {
            created += usize::from(self.push(c)?);
        }
        Ok(created)
    }

    /// Lengths of all distinct palindromes, sorted; a cheap fingerprint for
    /// comparing trees.
    pub fn palindrome_lengths(&self) -> Vec<i32> {
        let mut v = self.len[2..].to_vec();
        v.sort_unstable();
        v
    }
}

/// Richness test: every append must create a new palindrome.
pub fn is_rich(w: &Word) -> bool {
    let q = w.letters().iter().map(|l| l.0 + 1).max().unwrap_or(1);
    let mut t = PalTree::new(q).expect("q >= 1");
    w.letters().iter().all(|&c| t.push_unchecked(c.0))
}

/// Number of distinct non-empty palindromic factors, via the tree.
pub fn palindromic_factor_count(w: &Word) -> usize {
    let q = w.letters().iter().map(|l| l.0 + 1).max().unwrap_or(1);
    let mut t = PalTree::new(q).expect("q >= 1");
    for &c in w.letters() {
        t.push_unchecked(c.0);
    }
    t.pal_count()
}

/// Every distinct non-empty palindromic factor, by checking all substrings.
/// Cubic; an oracle for small words only.
pub fn palindromic_factors_naive(w: &Word) -> BTreeSet<Word> {
    let s = w.letters();
    let mut out = BTreeSet::new();
    for i in 0..s.len() {
        for j in i + 1..=s.len() {
            let f = &s[i..j];
            if f.iter().eq(f.iter().rev()) {
                out.insert(Word(f.to_vec()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 26).unwrap()
    }

    fn pushes(s: &str) -> Vec<bool> {
        let mut t = PalTree::new(26).unwrap();
        w(s).letters().iter().map(|&c| t.push(c).unwrap()).collect()
    }

    #[test]
    fn new_tree_and_errors() {
        assert_eq!(PalTree::new(2).unwrap().pal_count(), 0);
        assert_eq!(PalTree::new(0).unwrap_err(), WordError::EmptyAlphabet);
        let mut t = PalTree::new(1).unwrap();
        assert!(t.push(Letter(0)).unwrap());
        assert_eq!(t.pal_count(), 1);
        assert_eq!(
            t.push(Letter(1)),
            Err(WordError::InvalidLetter { letter: 1, q: 1 })
        );
        assert_eq!(PalTree::new(3).unwrap().pop(), Err(WordError::EmptyJournal));
    }

    #[test]
    fn push_results() {
        assert_eq!(pushes("aa"), vec![true, true]);
        assert_eq!(pushes("abca"), vec![true, true, true, false]);
        assert_eq!(pushes("abba"), vec![true; 4]);
        let mut t = PalTree::new(2).unwrap();
        t.extend(&Word::parse("aa", 2).unwrap()).unwrap();
        assert_eq!(t.pal_count(), 2);
    }

    #[test]
    fn pop_restores() {
        let mut t = PalTree::new(2).unwrap();
        t.push(Letter(0)).unwrap();
        t.pop().unwrap();
        assert_eq!(t.pal_count(), 0);

        t.extend(&Word::parse("ab", 2).unwrap()).unwrap();
        t.pop().unwrap();
        t.pop().unwrap();
        t.push(Letter(1)).unwrap();
        let mut fresh = PalTree::new(2).unwrap();
        fresh.push(Letter(1)).unwrap();
        assert_eq!(t.pal_count(), 1);
        assert_eq!(t.palindrome_lengths(), fresh.palindrome_lengths());
    }

    #[test]
    fn richness_examples() {
        assert!(is_rich(&w("abba")));
        assert!(!is_rich(&w("abca")));
        assert!(is_rich(&Word::default()));
        assert!(is_rich(&w("noon")));
        // shortest non-rich binary words have length 8
        assert!(is_rich(&w("aababb")));
        assert!(!is_rich(&w("aababbaa")));
        assert!(is_rich(&w("aababba")));
    }

    #[test]
    fn naive_factors() {
        let set: Vec<String> = palindromic_factors_naive(&w("noon"))
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(set, vec!["n", "noon", "o", "oo"]);
        assert_eq!(palindromic_factors_naive(&w("aaa")).len(), 3);
        assert_eq!(palindromic_factors_naive(&w("abca")).len(), 3);
        assert!(palindromic_factors_naive(&Word::default()).is_empty());
    }

    #[test]
    fn text_mapping() {
        assert_eq!(
            Word::parse("a0", 36).unwrap().letters(),
            &[Letter(0), Letter(26)]
        );
        assert_eq!(
            Word::parse("abc", 2),
            Err(WordError::InvalidLetter { letter: 2, q: 2 })
        );
        assert_eq!(Word::parse("aB", 2), Err(WordError::InvalidChar('B')));
        assert_eq!(Word::parse("", 0), Err(WordError::EmptyAlphabet));
        assert_eq!(w("abba").to_string(), "abba");
    }

    #[test]
    fn corrupted_links_change_counts() {
        // "abab" has palindromes a, b, aba, bab
        let mut t = PalTree::with_corrupted_links(2).unwrap();
        let created: Vec<bool> = Word::parse("abab", 2)
            .unwrap()
            .letters()
            .iter()
            .map(|&c| t.push(c).unwrap())
            .collect();
        assert_ne!(created, vec![true; 4]);
    }
}
