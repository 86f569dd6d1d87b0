//! Instance sources: exhaustive canonical enumeration, seeded random
//! instances, and instances with a planted threefold match.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64` (rand_chacha 0.3) and
//! `Rng::gen_range` (rand 0.8), which are stable across platforms, so a
//! `(seed, params)` pair names the same instance everywhere.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Alphabet, Domino, MatchSeq, Row, TriSystem, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumParams {
    pub max_dominoes: usize,
    pub max_word_len: usize,
    pub alphabet_size: usize,
}

impl EnumParams {
    pub fn new(max_dominoes: usize, max_word_len: usize, alphabet_size: usize) -> Result<Self> {
        let p = EnumParams {
            max_dominoes,
            max_word_len,
            alphabet_size,
        };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        if self.max_dominoes == 0 || self.max_word_len == 0 {
            return Err(Error::InvalidParams(
                "domino count and word length must be positive".into(),
            ));
        }
        Alphabet::first_letters(self.alphabet_size).map(|_| ())
    }
}

/// Canonical representative of a system under letter renaming and domino
/// reordering.
///
/// Among all bijections from the used letters onto the first alphabet
/// positions, picks the one whose sorted domino list is least. That list
/// names its letters in order of first occurrence and is sorted, and because
/// it is a minimum over the whole orbit the operation is idempotent. The
/// alphabet itself is kept. Cost grows with the factorial of the number of
/// distinct letters used.
pub fn canonicalize(system: &TriSystem) -> TriSystem {
    let alphabet = system.alphabet();
    let ranked: Vec<[Vec<usize>; 3]> = system
        .dominoes()
        .iter()
        .map(|d| {
            Row::ALL.map(|r| {
                d.row(r)
                    .as_bytes()
                    .iter()
                    .map(|&l| alphabet.rank(l).expect("validated"))
                    .collect()
            })
        })
        .collect();

    let mut used: Vec<usize> = ranked.iter().flatten().flatten().copied().collect();
    used.sort_unstable();
    used.dedup();

    // perm[j] is the new rank of used[j]
    let mut perm: Vec<usize> = (0..used.len()).collect();
    let mut best: Option<Vec<[Vec<usize>; 3]>> = None;
    loop {
        let mut relabel = vec![usize::MAX; alphabet.len()];
        for (j, &old) in used.iter().enumerate() {
            relabel[old] = perm[j];
        }
        let mut candidate: Vec<[Vec<usize>; 3]> = ranked
            .iter()
            .map(|rows| {
                rows.clone()
                    .map(|w| w.into_iter().map(|r| relabel[r]).collect())
            })
            .collect();
        candidate.sort();
        if best.as_ref().is_none_or(|b| candidate < *b) {
            best = Some(candidate);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }

    let letters = alphabet.letters();
    let dominoes = best
        .expect("at least one permutation")
        .into_iter()
        .map(|[t, m, b]| {
            let word =
                |w: Vec<usize>| Word::new(w.into_iter().map(|r| letters[r]).collect::<Vec<u8>>());
            Domino {
                top: word(t),
                middle: word(m),
                bottom: word(b),
            }
        })
        .collect();
    TriSystem::new_unchecked(alphabet.clone(), dominoes)
}

/// Lexicographic successor; `false` after the last permutation.
fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let Some(i) = (0..p.len() - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..p.len())
        .rev()
        .find(|&j| p[j] > p[i])
        .expect("exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

fn all_words(letters: &[u8], max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| letters.iter().map(move |&l| [&w[..], &[l]].concat()))
            .collect();
        out.extend(layer.iter().cloned().map(Word::new));
    }
    out
}

/// Every canonical system with `1..=max_dominoes` dominoes, word lengths in
/// `1..=max_word_len`, over the first `alphabet_size` letters, sorted by
/// domino list. Lists may repeat a domino.
pub fn enumerate(params: EnumParams) -> Result<Vec<TriSystem>> {
    params.check()?;
    let alphabet = Alphabet::first_letters(params.alphabet_size)?;
    let words = all_words(alphabet.letters(), params.max_word_len);
    let mut universe = Vec::with_capacity(words.len().pow(3));
    for t in &words {
        for m in &words {
            for b in &words {
                universe.push(Domino {
                    top: t.clone(),
                    middle: m.clone(),
                    bottom: b.clone(),
                });
            }
        }
    }
    universe.sort();

    let mut out = Vec::new();
    for n in 1..=params.max_dominoes {
        // nondecreasing index tuples give each sorted multiset once
        let mut idx = vec![0usize; n];
        loop {
            let dominoes: Vec<Domino> = idx.iter().map(|&i| universe[i].clone()).collect();
            let system = TriSystem::new_unchecked(alphabet.clone(), dominoes);
            if canonicalize(&system) == system {
                out.push(system);
            }
            let Some(pos) = (0..n).rev().find(|&p| idx[p] + 1 < universe.len()) else {
                break;
            };
            let v = idx[pos] + 1;
            for slot in &mut idx[pos..] {
                *slot = v;
            }
        }
    }
    out.sort_by(|a, b| a.dominoes().cmp(b.dominoes()));
    Ok(out)
}

/// Uniform choices of domino count, word lengths and letters, determined by
/// `seed` and `params`.
pub fn random_instance(seed: u64, params: EnumParams) -> Result<TriSystem> {
    params.check()?;
    let alphabet = Alphabet::first_letters(params.alphabet_size)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let letters = alphabet.letters().to_vec();
    let word = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(1..=params.max_word_len);
        Word::new(
            (0..len)
                .map(|_| letters[rng.gen_range(0..letters.len())])
                .collect::<Vec<u8>>(),
        )
    };
    let n = rng.gen_range(1..=params.max_dominoes);
    let dominoes = (0..n)
        .map(|_| {
            let top = word(&mut rng);
            let middle = word(&mut rng);
            let bottom = word(&mut rng);
            Domino {
                top,
                middle,
                bottom,
            }
        })
        .collect();
    TriSystem::new(alphabet, dominoes)
}

/// Draws a word and cuts it three independent ways into `pieces` nonempty
/// segments; domino `i` holds the `i`-th segment of each cut, so
/// `1, 2, ..., pieces` is a threefold match.
pub fn plant_match(
    seed: u64,
    word_len: usize,
    pieces: usize,
    alphabet_size: usize,
) -> Result<(TriSystem, MatchSeq)> {
    if pieces == 0 || pieces > word_len {
        return Err(Error::InvalidCut { pieces, word_len });
    }
    let alphabet = Alphabet::first_letters(alphabet_size)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let letters = alphabet.letters();
    let word: Vec<u8> = (0..word_len)
        .map(|_| letters[rng.gen_range(0..letters.len())])
        .collect();
    let cut = |rng: &mut ChaCha8Rng| {
        let mut points: Vec<usize> = sample(rng, word_len - 1, pieces - 1)
            .into_iter()
            .map(|p| p + 1)
            .collect();
        points.sort_unstable();
        let mut lengths = Vec::with_capacity(pieces);
        let mut prev = 0;
        for p in points.into_iter().chain(std::iter::once(word_len)) {
            lengths.push(p - prev);
            prev = p;
        }
        lengths
    };
    let top = cut(&mut rng);
    let middle = cut(&mut rng);
    let bottom = cut(&mut rng);
    plant_with_cuts(alphabet, &Word::new(word), [&top, &middle, &bottom])
}

/// Splits `word` by the given segment lengths for each row.
pub fn plant_with_cuts(
    alphabet: Alphabet,
    word: &Word,
    cuts: [&[usize]; 3],
) -> Result<(TriSystem, MatchSeq)> {
    let pieces = cuts[0].len();
    let bad =
        |c: &[usize]| c.len() != pieces || c.contains(&0) || c.iter().sum::<usize>() != word.len();
    if pieces == 0 || cuts.iter().any(|c| bad(c)) {
        return Err(Error::InvalidCut {
            pieces,
            word_len: word.len(),
        });
    }
    let split = |lengths: &[usize]| {
        let mut at = 0;
        lengths
            .iter()
            .map(|&l| {
                let w = Word::from(&word.as_bytes()[at..at + l]);
                at += l;
                w
            })
            .collect::<Vec<_>>()
    };
    let [t, m, b] = cuts.map(split);
    let dominoes = t
        .into_iter()
        .zip(m)
        .zip(b)
        .map(|((top, middle), bottom)| Domino {
            top,
            middle,
            bottom,
        })
        .collect();
    let system = TriSystem::new(alphabet, dominoes)?;
    Ok((system, MatchSeq::new((1..=pieces).collect())?))
}
