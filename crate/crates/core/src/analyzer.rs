//! Runs filters and bounded search on all four games of a system, applies
//! the closure between the threefold game and its pair games, and tallies
//! how often at least one game gets decided.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filters::{filter_pair, filter_triple, Certificate};
use crate::model::{Game, MatchSeq, TriSystem};
use crate::search::{explore, Exhausted, PairConfig, SearchBounds, SearchOutcome, TriConfig};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameStatus {
    DecidedYes(MatchSeq),
    DecidedNo(Certificate),
    Unknown(Exhausted),
}

impl GameStatus {
    pub fn is_decided(&self) -> bool {
        !matches!(self, GameStatus::Unknown(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            GameStatus::DecidedYes(_) => "yes",
            GameStatus::DecidedNo(_) => "no",
            GameStatus::Unknown(_) => "unknown",
        }
    }
}

impl From<SearchOutcome> for GameStatus {
    fn from(o: SearchOutcome) -> Self {
        match o {
            SearchOutcome::Found(m) => GameStatus::DecidedYes(m),
            SearchOutcome::CertifiedNo(c) => GameStatus::DecidedNo(c),
            SearchOutcome::Unknown(e) => GameStatus::Unknown(e),
        }
    }
}

/// Which procedure produced a status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Via {
    /// A filter on the game's own pair system.
    Filter,
    /// A filter on the named projection, for the threefold game.
    ProjectionFilter(Game),
    Search,
    /// Carried over from the named game.
    Closure(Game),
}

impl Via {
    pub fn label(&self) -> String {
        match self {
            Via::Filter => "filter".into(),
            Via::ProjectionFilter(g) => format!("projection_filter:{g}"),
            Via::Search => "search".into(),
            Via::Closure(g) => format!("closure:{g}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameReport {
    pub game: Game,
    pub status: GameStatus,
    pub via: Via,
    /// The game's own result when closure replaced it.
    pub superseded: Option<(GameStatus, Via)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    /// In [`Game::ALL`] order.
    pub games: Vec<GameReport>,
    pub conjecture_witnessed: bool,
    /// Configurations stored across all searches.
    pub states_used: usize,
}

impl AnalysisReport {
    pub fn game(&self, game: Game) -> &GameReport {
        self.games
            .iter()
            .find(|r| r.game == game)
            .expect("all four games present")
    }

    pub fn status(&self, game: Game) -> &GameStatus {
        &self.game(game).status
    }
}

pub fn analyze(system: &TriSystem, bounds: &SearchBounds) -> Result<AnalysisReport> {
    system.validate().map_err(Error::InvalidSystem)?;
    let mut states_used = 0;
    let mut games = Vec::with_capacity(4);

    let (status, via) = match filter_triple(system) {
        Some((g, cert)) => (GameStatus::DecidedNo(cert), Via::ProjectionFilter(g)),
        None => {
            let run = explore(system, TriConfig::start(), bounds);
            states_used += run.stats.states;
            (run.outcome.into(), Via::Search)
        }
    };
    games.push(GameReport {
        game: Game::TopMiddleBottom,
        status,
        via,
        superseded: None,
    });

    for g in Game::PAIRS {
        let projection = system.project(g)?;
        let (status, via) = match filter_pair(&projection) {
            Some(cert) => (GameStatus::DecidedNo(cert), Via::Filter),
            None => {
                let run = explore(&projection, PairConfig::start(), bounds);
                states_used += run.stats.states;
                (run.outcome.into(), Via::Search)
            }
        };
        games.push(GameReport {
            game: g,
            status,
            via,
            superseded: None,
        });
    }

    apply_closure(&mut games);
    let conjecture_witnessed = games.iter().any(|r| r.status.is_decided());
    Ok(AnalysisReport {
        games,
        conjecture_witnessed,
        states_used,
    })
}

/// A threefold match wins every pair game; a refuted pair game refutes the
/// threefold game.
fn apply_closure(games: &mut [GameReport]) {
    let (threefold, pairs) = games.split_first_mut().expect("four games");
    match &threefold.status {
        GameStatus::DecidedYes(m) => {
            let won = GameStatus::DecidedYes(m.clone());
            for p in pairs.iter_mut() {
                if p.status != won {
                    let old = std::mem::replace(&mut p.status, won.clone());
                    p.superseded = Some((old, p.via));
                    p.via = Via::Closure(Game::TopMiddleBottom);
                }
            }
        }
        GameStatus::DecidedNo(_) => {}
        GameStatus::Unknown(_) => {
            let refuted = pairs.iter().find_map(|p| match &p.status {
                GameStatus::DecidedNo(c) => Some((p.game, c.clone())),
                _ => None,
            });
            if let Some((g, cert)) = refuted {
                let old = std::mem::replace(&mut threefold.status, GameStatus::DecidedNo(cert));
                threefold.superseded = Some((old, threefold.via));
                threefold.via = Via::Closure(g);
            }
        }
    }
}

/// Decided/unknown counts for one game.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub yes: usize,
    pub no: usize,
    pub unknown: usize,
}

impl Tally {
    fn add(&mut self, s: &GameStatus) {
        match s {
            GameStatus::DecidedYes(_) => self.yes += 1,
            GameStatus::DecidedNo(_) => self.no += 1,
            GameStatus::Unknown(_) => self.unknown += 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub instances: usize,
    pub errors: usize,
    /// Analyzed instances with at least one decided game.
    pub witnessed: usize,
    /// `witnessed / (instances - errors)`, or 0 when nothing was analyzed.
    pub witnessed_fraction: f64,
    pub per_game: BTreeMap<Game, Tally>,
    /// Final certificate kinds over all games.
    pub certificates: BTreeMap<String, usize>,
    pub states_used: usize,
}

impl SweepSummary {
    pub fn add(&mut self, outcome: &Result<AnalysisReport>) {
        self.instances += 1;
        match outcome {
            Err(_) => self.errors += 1,
            Ok(report) => {
                if report.conjecture_witnessed {
                    self.witnessed += 1;
                }
                self.states_used += report.states_used;
                for r in &report.games {
                    self.per_game.entry(r.game).or_default().add(&r.status);
                    if let GameStatus::DecidedNo(c) = &r.status {
                        *self.certificates.entry(c.kind().to_string()).or_default() += 1;
                    }
                }
            }
        }
        let analyzed = self.instances - self.errors;
        self.witnessed_fraction = if analyzed == 0 {
            0.0
        } else {
            self.witnessed as f64 / analyzed as f64
        };
    }
}

/// One analyzed instance of a sweep.
#[derive(Debug, Clone)]
pub struct SweepItem {
    /// 0-based position in the source stream.
    pub seq: usize,
    pub system: TriSystem,
    pub outcome: Result<AnalysisReport>,
}

const SWEEP_CHUNK: usize = 256;

/// Analyzes every instance of `source`, handing items to `sink` in stream
/// order. Chunks of instances are analyzed in parallel; the output does not
/// depend on scheduling.
pub fn sweep<I, F>(source: I, bounds: &SearchBounds, mut sink: F) -> SweepSummary
where
    I: IntoIterator<Item = TriSystem>,
    F: FnMut(&SweepItem),
{
    let mut summary = SweepSummary::default();
    let mut source = source.into_iter().enumerate().peekable();
    while source.peek().is_some() {
        let chunk: Vec<(usize, TriSystem)> = source.by_ref().take(SWEEP_CHUNK).collect();
        let items: Vec<SweepItem> = chunk
            .into_par_iter()
            .map(|(seq, system)| {
                let outcome = analyze(&system, bounds);
                SweepItem {
                    seq,
                    system,
                    outcome,
                }
            })
            .collect();
        for item in &items {
            summary.add(&item.outcome);
            sink(item);
        }
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{enumerate, random_instance, EnumParams};
    use crate::model::fixtures::{single, sys1};
    use crate::model::Alphabet;
    use proptest::prelude::*;

    fn yes(v: &[usize]) -> GameStatus {
        GameStatus::DecidedYes(MatchSeq::new(v.to_vec()).unwrap())
    }

    #[test]
    fn analyze_sys1() {
        let r = analyze(&sys1(), &SearchBounds::default()).unwrap();
        for g in Game::ALL {
            assert_eq!(r.status(g), &yes(&[1, 2, 3]), "{g}");
        }
        assert_eq!(r.game(Game::TopMiddleBottom).via, Via::Search);
        let tm = r.game(Game::TopMiddle);
        assert_eq!(tm.via, Via::Closure(Game::TopMiddleBottom));
        assert_eq!(tm.superseded, Some((yes(&[3]), Via::Search)));
        assert!(r.conjecture_witnessed);
    }

    #[test]
    fn analyze_stuck_domino() {
        let r = analyze(&single("a", "a", "b"), &SearchBounds::default()).unwrap();
        assert_eq!(r.status(Game::TopMiddle), &yes(&[1]));
        for g in [Game::TopBottom, Game::MiddleBottom, Game::TopMiddleBottom] {
            assert_eq!(
                r.status(g),
                &GameStatus::DecidedNo(Certificate::NoStarter),
                "{g}"
            );
        }
        assert_eq!(
            r.game(Game::TopMiddleBottom).via,
            Via::ProjectionFilter(Game::TopBottom)
        );
        assert!(r.conjecture_witnessed);
    }

    #[test]
    fn analyze_growing_middle() {
        let tiny = SearchBounds::new(2, 2, 10).unwrap();
        let r = analyze(&single("a", "aa", "a"), &tiny).unwrap();
        assert_eq!(r.status(Game::TopBottom), &yes(&[1]));
        assert_eq!(
            r.status(Game::TopMiddle),
            &GameStatus::DecidedNo(Certificate::LengthImbalance)
        );
        assert_eq!(
            r.status(Game::MiddleBottom),
            &GameStatus::DecidedNo(Certificate::LengthImbalance)
        );
        assert!(matches!(
            r.status(Game::TopMiddleBottom),
            GameStatus::DecidedNo(_)
        ));
        assert!(r.conjecture_witnessed);
    }

    #[test]
    fn closure_refutes_threefold_from_pair_search() {
        // Every projection passes every filter. Top/middle can only cycle
        // through "top ahead by b" and its search closes; the threefold search
        // follows 1,2,2,... with bottom pulling ahead and hits the overhang
        // bound, so only closure decides it.
        let s = TriSystem::new(
            Alphabet::new("ab").unwrap(),
            vec![
                ("ab", "a", "a").into(),
                ("ab", "ba", "baba").into(),
                ("b", "ab", "b").into(),
            ],
        )
        .unwrap();
        assert_eq!(filter_triple(&s), None);
        let r = analyze(&s, &SearchBounds::new(12, 12, 10_000).unwrap()).unwrap();
        assert!(matches!(
            r.status(Game::TopMiddle),
            GameStatus::DecidedNo(Certificate::ClosedStateGraph {
                states_explored: 2,
                ..
            })
        ));
        let tmb = r.game(Game::TopMiddleBottom);
        assert_eq!(tmb.via, Via::Closure(Game::TopMiddle));
        assert!(matches!(
            tmb.status,
            GameStatus::DecidedNo(Certificate::ClosedStateGraph { .. })
        ));
        assert!(matches!(
            &tmb.superseded,
            Some((
                GameStatus::Unknown(Exhausted {
                    bound: crate::search::Bound::Overhang,
                    ..
                }),
                Via::Search
            ))
        ));
        check_consistency(&r, &s);
    }

    #[test]
    fn invalid_system_is_an_error() {
        let bad = TriSystem::new_unchecked(Alphabet::new("a").unwrap(), vec![]);
        assert!(matches!(
            analyze(&bad, &SearchBounds::default()),
            Err(Error::InvalidSystem(_))
        ));
    }

    fn check_consistency(r: &AnalysisReport, s: &TriSystem) {
        assert_eq!(
            r.conjecture_witnessed,
            r.games.iter().any(|g| g.status.is_decided())
        );
        if let GameStatus::DecidedYes(m) = r.status(Game::TopMiddleBottom) {
            for g in Game::PAIRS {
                assert_eq!(r.status(g), &GameStatus::DecidedYes(m.clone()));
            }
        }
        if Game::PAIRS
            .iter()
            .any(|&g| matches!(r.status(g), GameStatus::DecidedNo(_)))
        {
            assert!(matches!(
                r.status(Game::TopMiddleBottom),
                GameStatus::DecidedNo(_)
            ));
        }
        for g in &r.games {
            if let GameStatus::DecidedYes(m) = &g.status {
                assert!(s.verify_match(m.indices(), g.game).unwrap());
            }
            if let Some((GameStatus::DecidedYes(m), _)) = &g.superseded {
                assert!(s.verify_match(m.indices(), g.game).unwrap());
            }
        }
    }

    #[test]
    fn sweep_examples() {
        let bounds = SearchBounds::default();
        let one = enumerate(EnumParams::new(1, 1, 1).unwrap()).unwrap();
        let summary = sweep(one, &bounds, |_| {});
        assert_eq!(summary.instances, 1);
        assert_eq!(summary.witnessed_fraction, 1.0);

        let four = enumerate(EnumParams::new(1, 1, 2).unwrap()).unwrap();
        let summary = sweep(four, &bounds, |_| {});
        assert_eq!(summary.instances, 4);
        assert_eq!(summary.witnessed, 4);
        assert_eq!(summary.witnessed_fraction, 1.0);
    }

    #[test]
    fn sweep_reports_invalid_instances_and_keeps_going() {
        let bad =
            TriSystem::new_unchecked(Alphabet::new("a").unwrap(), vec![("b", "a", "a").into()]);
        let source = vec![sys1(), bad, single("a", "a", "a")];
        let mut seen = Vec::new();
        let summary = sweep(source, &SearchBounds::default(), |item| {
            seen.push((item.seq, item.outcome.is_ok()))
        });
        assert_eq!(seen, vec![(0, true), (1, false), (2, true)]);
        assert_eq!(summary.errors, 1);
        assert_eq!(summary.witnessed, 2);
        assert_eq!(summary.witnessed_fraction, 1.0);
    }

    #[test]
    fn sweep_accounting_matches_records() {
        let bounds = SearchBounds::new(10, 10, 5_000).unwrap();
        let p = EnumParams::new(3, 3, 2).unwrap();
        let source: Vec<TriSystem> = (0..300).map(|s| random_instance(s, p).unwrap()).collect();
        let mut items = Vec::new();
        let summary = sweep(source, &bounds, |item| items.push(item.clone()));
        let mut recount = SweepSummary::default();
        let mut per_game: BTreeMap<Game, Tally> = BTreeMap::new();
        let mut witnessed = 0;
        for item in &items {
            recount.add(&item.outcome);
            let r = item.outcome.as_ref().unwrap();
            witnessed += r.conjecture_witnessed as usize;
            for g in &r.games {
                let t = per_game.entry(g.game).or_default();
                match g.status {
                    GameStatus::DecidedYes(_) => t.yes += 1,
                    GameStatus::DecidedNo(_) => t.no += 1,
                    GameStatus::Unknown(_) => t.unknown += 1,
                }
            }
        }
        assert_eq!(recount, summary);
        assert_eq!(summary.per_game, per_game);
        assert_eq!(summary.witnessed, witnessed);
        assert_eq!(
            items.iter().map(|i| i.seq).collect::<Vec<_>>(),
            (0..300).collect::<Vec<_>>()
        );
    }

    #[test]
    fn larger_budget_never_loses_a_decision() {
        let small = SearchBounds::new(6, 6, 500).unwrap();
        let large = SearchBounds::new(24, 24, 50_000).unwrap();
        let p = EnumParams::new(3, 3, 2).unwrap();
        for seed in 0..200 {
            let s = random_instance(seed, p).unwrap();
            let a = analyze(&s, &small).unwrap();
            let b = analyze(&s, &large).unwrap();
            for g in Game::ALL {
                match (a.status(g), b.status(g)) {
                    (GameStatus::Unknown(_), _) => {}
                    (GameStatus::DecidedYes(_), GameStatus::DecidedYes(_)) => {}
                    (GameStatus::DecidedNo(_), GameStatus::DecidedNo(_)) => {}
                    (x, y) => panic!("seed {seed} game {g}: {x:?} became {y:?}"),
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn reports_are_consistent(seed in any::<u64>()) {
            let p = EnumParams::new(3, 3, 2).unwrap();
            let s = random_instance(seed, p).unwrap();
            let r = analyze(&s, &SearchBounds::new(10, 10, 5_000).unwrap()).unwrap();
            check_consistency(&r, &s);
        }
    }
}
