//! Dominoes, threefold and pair systems, the four games, and match checking.
//!
//! A [`TriSystem`] is an ordered list of dominoes, each carrying a top, middle
//! and bottom word. Reading a list of dominoes left to right yields three
//! words; a list wins a game when the rows the game names spell the same word.
//! All indices on public surfaces are 1-based.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered set of distinct single-character letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<u8>,
}

impl Alphabet {
    /// Builds an alphabet, rejecting empty lists, duplicates and characters
    /// that cannot appear in the instance text format.
    pub fn new(letters: impl AsRef<[u8]>) -> Result<Self> {
        let alphabet = Alphabet {
            letters: letters.as_ref().to_vec(),
        };
        let violations = alphabet.violations();
        if violations.is_empty() {
            Ok(alphabet)
        } else {
            Err(Error::InvalidSystem(violations))
        }
    }

    /// No checks; pair with [`TriSystem::validate`].
    pub fn new_unchecked(letters: impl AsRef<[u8]>) -> Self {
        Alphabet {
            letters: letters.as_ref().to_vec(),
        }
    }

    /// The first `size` letters of `a..z`.
    pub fn first_letters(size: usize) -> Result<Self> {
        if size == 0 || size > 26 {
            return Err(Error::InvalidParams(format!(
                "alphabet size must be in [1, 26], got {size}"
            )));
        }
        Ok(Alphabet {
            letters: (b'a'..b'a' + size as u8).collect(),
        })
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, letter: u8) -> bool {
        self.letters.contains(&letter)
    }

    /// Position of `letter` in the alphabet.
    pub fn rank(&self, letter: u8) -> Option<usize> {
        self.letters.iter().position(|&l| l == letter)
    }

    fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.letters.is_empty() {
            out.push(Violation::EmptyAlphabet);
        }
        for (i, &l) in self.letters.iter().enumerate() {
            if !is_letter_char(l) {
                out.push(Violation::UnusableLetter { letter: l as char });
            }
            if self.letters[..i].contains(&l) {
                out.push(Violation::DuplicateLetter { letter: l as char });
            }
        }
        out
    }
}

/// Printable ASCII, minus the characters the instance format reserves.
pub(crate) fn is_letter_char(c: u8) -> bool {
    c.is_ascii_graphic() && c != b'|' && c != b'#' && c != b','
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.letters))
    }
}

/// A finite sequence of letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: impl Into<Vec<u8>>) -> Self {
        Word(letters.into())
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    pub(crate) fn push_str(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }
}

impl From<Vec<u8>> for Word {
    fn from(v: Vec<u8>) -> Self {
        Word(v)
    }
}

impl From<&[u8]> for Word {
    fn from(b: &[u8]) -> Self {
        Word::new(b.to_vec())
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Word(s.as_bytes().to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.0))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Ok(Word::from(s.as_str()))
    }
}

/// One of the three rows of a domino.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Row {
    Top,
    Middle,
    Bottom,
}

impl Row {
    pub const ALL: [Row; 3] = [Row::Top, Row::Middle, Row::Bottom];
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Row::Top => "top",
            Row::Middle => "middle",
            Row::Bottom => "bottom",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Domino {
    pub top: Word,
    pub middle: Word,
    pub bottom: Word,
}

impl Domino {
    pub fn new(top: impl Into<Word>, middle: impl Into<Word>, bottom: impl Into<Word>) -> Self {
        Domino {
            top: top.into(),
            middle: middle.into(),
            bottom: bottom.into(),
        }
    }

    pub fn row(&self, row: Row) -> &Word {
        match row {
            Row::Top => &self.top,
            Row::Middle => &self.middle,
            Row::Bottom => &self.bottom,
        }
    }
}

impl From<(&str, &str, &str)> for Domino {
    fn from((t, m, b): (&str, &str, &str)) -> Self {
        Domino::new(t, m, b)
    }
}

/// The four solitaire games of a threefold system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Game {
    #[serde(rename = "tmb")]
    TopMiddleBottom,
    #[serde(rename = "tm")]
    TopMiddle,
    #[serde(rename = "tb")]
    TopBottom,
    #[serde(rename = "mb")]
    MiddleBottom,
}

impl Game {
    pub const ALL: [Game; 4] = [
        Game::TopMiddleBottom,
        Game::TopMiddle,
        Game::TopBottom,
        Game::MiddleBottom,
    ];
    pub const PAIRS: [Game; 3] = [Game::TopMiddle, Game::TopBottom, Game::MiddleBottom];

    /// The two rows a pair game compares; `None` for the threefold game.
    pub fn pair_rows(self) -> Option<(Row, Row)> {
        match self {
            Game::TopMiddleBottom => None,
            Game::TopMiddle => Some((Row::Top, Row::Middle)),
            Game::TopBottom => Some((Row::Top, Row::Bottom)),
            Game::MiddleBottom => Some((Row::Middle, Row::Bottom)),
        }
    }

    pub fn is_pair(self) -> bool {
        self != Game::TopMiddleBottom
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Game::TopMiddleBottom => "tmb",
            Game::TopMiddle => "tm",
            Game::TopBottom => "tb",
            Game::MiddleBottom => "mb",
        }
    }
}

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.short_name())
    }
}

impl FromStr for Game {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "tmb" => Ok(Game::TopMiddleBottom),
            "tm" => Ok(Game::TopMiddle),
            "tb" => Ok(Game::TopBottom),
            "mb" => Ok(Game::MiddleBottom),
            other => Err(format!("unknown game {other:?}, expected tmb|tm|tb|mb")),
        }
    }
}

/// A nonempty, 1-based index sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct MatchSeq(Vec<usize>);

impl MatchSeq {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptyIndexSequence);
        }
        Ok(MatchSeq(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Concatenation of the sequence with itself.
    pub fn repeated(&self) -> MatchSeq {
        MatchSeq(self.0.iter().chain(&self.0).copied().collect())
    }
}

impl TryFrom<Vec<usize>> for MatchSeq {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        MatchSeq::new(v)
    }
}

impl From<MatchSeq> for Vec<usize> {
    fn from(m: MatchSeq) -> Self {
        m.0
    }
}

impl fmt::Display for MatchSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// A broken invariant of an alphabet or system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyAlphabet,
    DuplicateLetter {
        letter: char,
    },
    UnusableLetter {
        letter: char,
    },
    NoDominoes,
    /// `domino` is 1-based.
    EmptyWord {
        domino: usize,
        row: Row,
    },
    LetterNotInAlphabet {
        domino: usize,
        row: Row,
        letter: char,
    },
}

impl Violation {
    /// Short description without location details.
    pub fn summary(&self) -> &'static str {
        match self {
            Violation::EmptyAlphabet => "alphabet must be nonempty",
            Violation::DuplicateLetter { .. } => "duplicate letter in alphabet",
            Violation::UnusableLetter { .. } => {
                "alphabet letter must be printable ASCII other than | # ,"
            }
            Violation::NoDominoes => "n ≥ 1 required",
            Violation::EmptyWord { .. } => "empty word",
            Violation::LetterNotInAlphabet { .. } => "letter not in alphabet",
        }
    }

    /// The 1-based domino the violation concerns, if any.
    pub fn domino(&self) -> Option<usize> {
        match self {
            Violation::EmptyWord { domino, .. } | Violation::LetterNotInAlphabet { domino, .. } => {
                Some(*domino)
            }
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateLetter { letter } | Violation::UnusableLetter { letter } => {
                write!(f, "{} ({letter:?})", self.summary())
            }
            Violation::EmptyWord { domino, row } => {
                write!(f, "{} in domino {domino} ({row})", self.summary())
            }
            Violation::LetterNotInAlphabet {
                domino,
                row,
                letter,
            } => {
                write!(
                    f,
                    "{} ({letter:?} in domino {domino}, {row})",
                    self.summary()
                )
            }
            _ => f.write_str(self.summary()),
        }
    }
}

/// A threefold Post correspondence system.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriSystem {
    alphabet: Alphabet,
    dominoes: Vec<Domino>,
}

impl TriSystem {
    pub fn new(alphabet: Alphabet, dominoes: Vec<Domino>) -> Result<Self> {
        let system = TriSystem { alphabet, dominoes };
        system.validate().map_err(Error::InvalidSystem)?;
        Ok(system)
    }

    /// Builds a system without checking it; [`validate`](Self::validate)
    /// reports what is wrong.
    pub fn new_unchecked(alphabet: Alphabet, dominoes: Vec<Domino>) -> Self {
        TriSystem { alphabet, dominoes }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn dominoes(&self) -> &[Domino] {
        &self.dominoes
    }

    pub fn len(&self) -> usize {
        self.dominoes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dominoes.is_empty()
    }

    /// 1-based domino lookup.
    pub fn domino(&self, index: usize) -> Result<&Domino> {
        check_index(index, self.dominoes.len())?;
        Ok(&self.dominoes[index - 1])
    }

    /// Collects every broken invariant instead of stopping at the first.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut out = self.alphabet.violations();
        if self.dominoes.is_empty() {
            out.push(Violation::NoDominoes);
        }
        for (i, d) in self.dominoes.iter().enumerate() {
            for row in Row::ALL {
                let word = d.row(row);
                if word.is_empty() {
                    out.push(Violation::EmptyWord { domino: i + 1, row });
                }
                for &l in word.as_bytes() {
                    if !self.alphabet.contains(l) {
                        out.push(Violation::LetterNotInAlphabet {
                            domino: i + 1,
                            row,
                            letter: l as char,
                        });
                    }
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Left-to-right concatenation of `row` over the listed dominoes.
    /// The empty list gives the empty word.
    pub fn concat_row(&self, row: Row, indices: &[usize]) -> Result<Word> {
        let mut out = Word::empty();
        for &i in indices {
            out.push_str(self.domino(i)?.row(row));
        }
        Ok(out)
    }

    /// Whether `indices` wins `game`. Every index is range-checked before any
    /// comparison, and an empty list is an error rather than a trivial win.
    pub fn verify_match(&self, indices: &[usize], game: Game) -> Result<bool> {
        if indices.is_empty() {
            return Err(Error::EmptyIndexSequence);
        }
        let n = self.dominoes.len();
        for &i in indices {
            check_index(i, n)?;
        }
        let words = |row| self.concat_row(row, indices);
        Ok(match game.pair_rows() {
            Some((a, b)) => words(a)? == words(b)?,
            None => {
                let top = words(Row::Top)?;
                top == words(Row::Middle)? && top == words(Row::Bottom)?
            }
        })
    }

    /// The pair system a pair game plays on.
    pub fn project(&self, game: Game) -> Result<PairSystem> {
        let (a, b) = game.pair_rows().ok_or(Error::NotAPairGame(game))?;
        Ok(PairSystem {
            alphabet: self.alphabet.clone(),
            pairs: self
                .dominoes
                .iter()
                .map(|d| (d.row(a).clone(), d.row(b).clone()))
                .collect(),
        })
    }
}

/// A Post correspondence system: a list of word pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairSystem {
    alphabet: Alphabet,
    pairs: Vec<(Word, Word)>,
}

impl PairSystem {
    pub fn new(alphabet: Alphabet, pairs: Vec<(Word, Word)>) -> Result<Self> {
        let system = PairSystem { alphabet, pairs };
        system.validate().map_err(Error::InvalidSystem)?;
        Ok(system)
    }

    /// Convenience constructor: the alphabet is every letter used, in order
    /// of first occurrence.
    pub fn from_strs(pairs: &[(&str, &str)]) -> Result<Self> {
        let mut letters = Vec::new();
        for (a, b) in pairs {
            for &l in a.as_bytes().iter().chain(b.as_bytes()) {
                if !letters.contains(&l) {
                    letters.push(l);
                }
            }
        }
        let pairs = pairs
            .iter()
            .map(|&(a, b)| (Word::from(a), Word::from(b)))
            .collect();
        PairSystem::new(Alphabet::new_unchecked(letters), pairs)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn pairs(&self) -> &[(Word, Word)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let as_tri = TriSystem {
            alphabet: self.alphabet.clone(),
            dominoes: self
                .pairs
                .iter()
                .map(|(a, b)| Domino {
                    top: a.clone(),
                    middle: b.clone(),
                    bottom: a.clone(),
                })
                .collect(),
        };
        as_tri.validate()
    }

    /// Concatenations of the first and second words over `indices`.
    pub fn concat(&self, indices: &[usize]) -> Result<(Word, Word)> {
        let mut first = Word::empty();
        let mut second = Word::empty();
        for &i in indices {
            check_index(i, self.pairs.len())?;
            let (a, b) = &self.pairs[i - 1];
            first.push_str(a);
            second.push_str(b);
        }
        Ok((first, second))
    }

    pub fn verify_match(&self, indices: &[usize]) -> Result<bool> {
        if indices.is_empty() {
            return Err(Error::EmptyIndexSequence);
        }
        let (a, b) = self.concat(indices)?;
        Ok(a == b)
    }
}

fn check_index(index: usize, n: usize) -> Result<()> {
    if index == 0 || index > n {
        Err(Error::IndexOutOfRange { index, n })
    } else {
        Ok(())
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::from(s)
    }

    #[test]
    fn concat_row_examples() {
        let s = sys1();
        assert_eq!(s.concat_row(Row::Top, &[1, 2, 3]).unwrap(), w("ababbb"));
        assert_eq!(s.concat_row(Row::Top, &[1]).unwrap(), w("ab"));
        assert_eq!(s.concat_row(Row::Middle, &[]).unwrap(), w(""));
        assert_eq!(
            s.concat_row(Row::Bottom, &[5]),
            Err(Error::IndexOutOfRange { index: 5, n: 4 })
        );
        assert_eq!(
            s.concat_row(Row::Bottom, &[0]),
            Err(Error::IndexOutOfRange { index: 0, n: 4 })
        );
    }

    #[test]
    fn verify_match_examples() {
        let s = sys1();
        assert!(s.verify_match(&[1, 2, 3], Game::TopMiddleBottom).unwrap());
        assert!(s.verify_match(&[3], Game::TopMiddle).unwrap());
        assert!(!s.verify_match(&[3], Game::TopMiddleBottom).unwrap());
        assert!(s
            .verify_match(&[1, 2, 3, 1, 2, 3], Game::TopMiddleBottom)
            .unwrap());
        assert_eq!(
            s.verify_match(&[], Game::TopMiddle),
            Err(Error::EmptyIndexSequence)
        );
        assert!(matches!(
            s.verify_match(&[1, 9], Game::TopMiddle),
            Err(Error::IndexOutOfRange { index: 9, .. })
        ));
    }

    #[test]
    fn project_examples() {
        let s = sys1();
        let tm = s.project(Game::TopMiddle).unwrap();
        let expect: Vec<(Word, Word)> = [("ab", "a"), ("abb", "babb"), ("b", "b"), ("bba", "baaa")]
            .iter()
            .map(|&(a, b)| (w(a), w(b)))
            .collect();
        assert_eq!(tm.pairs(), &expect[..]);
        assert_eq!(tm.alphabet(), s.alphabet());

        let mb = s.project(Game::MiddleBottom).unwrap();
        let expect: Vec<(Word, Word)> = [("a", "ab"), ("babb", "ab"), ("b", "bb"), ("baaa", "ba")]
            .iter()
            .map(|&(a, b)| (w(a), w(b)))
            .collect();
        assert_eq!(mb.pairs(), &expect[..]);

        let id = single("a", "a", "a").project(Game::TopBottom).unwrap();
        assert_eq!(id.pairs(), &[(w("a"), w("a"))]);

        assert_eq!(
            s.project(Game::TopMiddleBottom),
            Err(Error::NotAPairGame(Game::TopMiddleBottom))
        );
    }

    #[test]
    fn validate_examples() {
        assert!(sys1().validate().is_ok());

        let empty = TriSystem::new_unchecked(Alphabet::new("ab").unwrap(), vec![]);
        let v = empty.validate().unwrap_err();
        assert_eq!(v, vec![Violation::NoDominoes]);
        assert_eq!(v[0].to_string(), "n ≥ 1 required");

        let bad =
            TriSystem::new_unchecked(Alphabet::new("ab").unwrap(), vec![("ac", "a", "a").into()]);
        let v = bad.validate().unwrap_err();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].summary(), "letter not in alphabet");
    }

    #[test]
    fn validate_collects_every_violation() {
        let bad = TriSystem::new_unchecked(
            Alphabet::new_unchecked("aa"),
            vec![("", "c", "a").into(), ("a", "a", "d").into()],
        );
        let v = bad.validate().unwrap_err();
        assert_eq!(
            v,
            vec![
                Violation::DuplicateLetter { letter: 'a' },
                Violation::EmptyWord {
                    domino: 1,
                    row: Row::Top
                },
                Violation::LetterNotInAlphabet {
                    domino: 1,
                    row: Row::Middle,
                    letter: 'c'
                },
                Violation::LetterNotInAlphabet {
                    domino: 2,
                    row: Row::Bottom,
                    letter: 'd'
                },
            ]
        );
        assert!(Alphabet::new("").is_err());
        assert!(Alphabet::new("a|").is_err());
    }

    #[test]
    fn game_names_round_trip() {
        for g in Game::ALL {
            assert_eq!(g.short_name().parse::<Game>().unwrap(), g);
        }
        assert!("xy".parse::<Game>().is_err());
    }

    fn small_system() -> impl Strategy<Value = TriSystem> {
        let word = proptest::collection::vec(prop_oneof![Just(b'a'), Just(b'b')], 1..4);
        let domino = (word.clone(), word.clone(), word).prop_map(|(t, m, b)| Domino::new(t, m, b));
        proptest::collection::vec(domino, 1..4)
            .prop_map(|d| TriSystem::new(Alphabet::new("ab").unwrap(), d).unwrap())
    }

    fn system_and_lists() -> impl Strategy<Value = (TriSystem, Vec<usize>, Vec<usize>)> {
        small_system().prop_flat_map(|s| {
            let n = s.len();
            (
                Just(s),
                proptest::collection::vec(1..=n, 0..6),
                proptest::collection::vec(1..=n, 0..6),
            )
        })
    }

    proptest! {
        #[test]
        fn concat_is_a_homomorphism((s, p, q) in system_and_lists()) {
            for row in Row::ALL {
                let mut pq = p.clone();
                pq.extend(&q);
                let mut joined = s.concat_row(row, &p).unwrap();
                joined.push_str(&s.concat_row(row, &q).unwrap());
                prop_assert_eq!(s.concat_row(row, &pq).unwrap(), joined);
            }
        }

        #[test]
        fn threefold_is_conjunction_of_pairs((s, p, _q) in system_and_lists()) {
            prop_assume!(!p.is_empty());
            let tmb = s.verify_match(&p, Game::TopMiddleBottom).unwrap();
            let tm = s.verify_match(&p, Game::TopMiddle).unwrap();
            let tb = s.verify_match(&p, Game::TopBottom).unwrap();
            let mb = s.verify_match(&p, Game::MiddleBottom).unwrap();
            prop_assert_eq!(tmb, tm && tb);
            if tmb {
                prop_assert!(tm && tb && mb);
            }
            for g in Game::PAIRS {
                let proj = s.project(g).unwrap();
                let (a, b) = proj.concat(&p).unwrap();
                prop_assert_eq!(s.verify_match(&p, g).unwrap(), a == b);
            }
        }

        #[test]
        fn repeating_a_match_is_a_match((s, p, _q) in system_and_lists()) {
            prop_assume!(!p.is_empty());
            let m = MatchSeq::new(p).unwrap();
            for g in Game::ALL {
                if s.verify_match(m.indices(), g).unwrap() {
                    prop_assert!(s.verify_match(m.repeated().indices(), g).unwrap());
                }
            }
        }
    }
}
