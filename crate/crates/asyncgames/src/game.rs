//! Finite Bayesian underlying games with exact rational payoffs.
//!
//! An [`UnderlyingGame`] is a normal-form Bayesian game: a finite type
//! space with a rational prior, a finite action set per player, and a
//! total utility table mapping (type profile, action profile) to a
//! rational payoff vector. Games are immutable after construction and
//! safe to share read-only across parallel workers.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_q, parse_q, q, qi, Q};

/// Index into a player's type list.
pub type TypeIx = u16;
/// Index into a player's action list.
pub type ActionIx = u16;
/// Participant id. The mediator is id 0; players are 1..=n.
pub type Pid = u8;

/// One entry of an action profile: a move from the player's action set,
/// or the deadlock marker `⊥` recorded when the infinite-play policy
/// failed to supply a move. Games like the parity game also contain `⊥`
/// as a genuine action; that case is a `Move` naming the action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PlayedAction {
    Move(ActionIx),
    Bot,
}

/// One action (or deadlock marker) per player.
pub type ActionProfile = Vec<PlayedAction>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("game has no players")]
    NoPlayers,
    #[error("player {player} has an empty action set")]
    EmptyActions { player: usize },
    #[error("prior sums to {got}, expected exactly 1")]
    PriorNotOne { got: String },
    #[error("duplicate type profile {profile:?} in prior")]
    DuplicateTypeProfile { profile: Vec<String> },
    #[error("utility table is missing an entry for types {types:?}, actions {actions:?}")]
    MissingUtility { types: Vec<String>, actions: Vec<String> },
    #[error("utility table miss: unknown {what} key {key:?}")]
    TableMiss { what: &'static str, key: String },
    #[error("action profile contains unresolved ⊥ marker at player {player}")]
    UnresolvedBot { player: usize },
    #[error("payoff vector for types {types:?}, actions {actions:?} has {got} entries, expected {expected}")]
    BadPayoffArity { types: Vec<String>, actions: Vec<String>, got: usize, expected: usize },
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("{path}: {msg}")]
    FileField { path: String, msg: String },
    #[error("utility entry for types {types:?}, actions {actions:?} exceeds declared bound M/2 = {bound}")]
    BoundViolated { types: Vec<String>, actions: Vec<String>, bound: String },
}

/// A finite Bayesian normal-form game.
#[derive(Clone)]
pub struct UnderlyingGame {
    pub name: String,
    pub n: usize,
    /// Per-player type names.
    pub types: Vec<Vec<String>>,
    /// Per-player action names.
    pub actions: Vec<Vec<String>>,
    /// The type space 𝒯 with its prior; weights sum to exactly 1.
    pub prior: Vec<(Vec<TypeIx>, Q)>,
    /// Row index per type profile, for utility lookup.
    type_rows: BTreeMap<Vec<TypeIx>, usize>,
    /// utility[row][flat action index] = payoff vector.
    utility: Vec<Vec<Vec<Q>>>,
}

impl fmt::Debug for UnderlyingGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnderlyingGame")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("types", &self.types.iter().map(Vec::len).collect::<Vec<_>>())
            .field("actions", &self.actions.iter().map(Vec::len).collect::<Vec<_>>())
            .finish()
    }
}

impl UnderlyingGame {
    /// Build a game from explicit tables, validating every invariant.
    pub fn new(
        name: impl Into<String>,
        types: Vec<Vec<String>>,
        actions: Vec<Vec<String>>,
        prior: Vec<(Vec<TypeIx>, Q)>,
        mut utility_entries: BTreeMap<(Vec<TypeIx>, Vec<ActionIx>), Vec<Q>>,
    ) -> Result<Self, GameError> {
        let n = actions.len();
        if n == 0 {
            return Err(GameError::NoPlayers);
        }
        assert_eq!(types.len(), n, "types and actions must list the same player count");
        for (player, acts) in actions.iter().enumerate() {
            if acts.is_empty() {
                return Err(GameError::EmptyActions { player: player + 1 });
            }
        }
        let total: Q = prior.iter().map(|(_, w)| w.clone()).sum();
        if !total.is_one() {
            return Err(GameError::PriorNotOne { got: format_q(&total) });
        }
        let mut type_rows = BTreeMap::new();
        for (row, (profile, _)) in prior.iter().enumerate() {
            assert_eq!(profile.len(), n);
            if type_rows.insert(profile.clone(), row).is_some() {
                return Err(GameError::DuplicateTypeProfile {
                    profile: profile.iter().enumerate().map(|(i, &t)| types[i][t as usize].clone()).collect(),
                });
            }
        }
        let game = UnderlyingGame {
            name: name.into(),
            n,
            types,
            actions,
            prior,
            type_rows,
            utility: Vec::new(),
        };
        // Totality: every (type profile, action profile) combination must
        // have an entry of the right arity.
        let mut utility = Vec::with_capacity(game.prior.len());
        for (profile, _) in &game.prior {
            let mut row = Vec::with_capacity(game.action_profile_count());
            for flat in 0..game.action_profile_count() {
                let acts = game.unflatten_actions(flat);
                match utility_entries.remove(&(profile.clone(), acts.clone())) {
                    Some(v) if v.len() == game.n => row.push(v),
                    Some(v) => {
                        return Err(GameError::BadPayoffArity {
                            types: game.type_profile_names(profile),
                            actions: game.action_profile_names(&acts),
                            got: v.len(),
                            expected: game.n,
                        })
                    }
                    None => {
                        return Err(GameError::MissingUtility {
                            types: game.type_profile_names(profile),
                            actions: game.action_profile_names(&acts),
                        })
                    }
                }
            }
            utility.push(row);
        }
        Ok(UnderlyingGame { utility, ..game })
    }

    pub fn action_profile_count(&self) -> usize {
        self.actions.iter().map(Vec::len).product()
    }

    /// Decode a flat action index into one action per player.
    pub fn unflatten_actions(&self, mut flat: usize) -> Vec<ActionIx> {
        let mut out = vec![0; self.n];
        for i in (0..self.n).rev() {
            let m = self.actions[i].len();
            out[i] = (flat % m) as ActionIx;
            flat /= m;
        }
        out
    }

    pub fn flatten_actions(&self, acts: &[ActionIx]) -> usize {
        let mut flat = 0usize;
        for i in 0..self.n {
            flat = flat * self.actions[i].len() + acts[i] as usize;
        }
        flat
    }

    pub fn type_profile_names(&self, x: &[TypeIx]) -> Vec<String> {
        x.iter().enumerate().map(|(i, &t)| self.types[i][t as usize].clone()).collect()
    }

    pub fn action_profile_names(&self, a: &[ActionIx]) -> Vec<String> {
        a.iter().enumerate().map(|(i, &ix)| self.actions[i][ix as usize].clone()).collect()
    }

    /// Look up an action by name for a player (1-based player number).
    pub fn action_ix(&self, player: usize, name: &str) -> Option<ActionIx> {
        self.actions[player - 1].iter().position(|a| a == name).map(|p| p as ActionIx)
    }

    pub fn type_ix(&self, player: usize, name: &str) -> Option<TypeIx> {
        self.types[player - 1].iter().position(|t| t == name).map(|p| p as TypeIx)
    }

    /// All type profiles in 𝒯 with their prior weights.
    pub fn type_space(&self) -> &[(Vec<TypeIx>, Q)] {
        &self.prior
    }

    pub fn prior_of(&self, x: &[TypeIx]) -> Option<&Q> {
        self.type_rows.get(x).map(|&row| &self.prior[row].1)
    }

    fn resolve(&self, x: &[TypeIx], a: &ActionProfile) -> Result<(usize, usize), GameError> {
        let &row = self.type_rows.get(x).ok_or_else(|| GameError::TableMiss {
            what: "type profile",
            key: format!("{x:?}"),
        })?;
        assert_eq!(a.len(), self.n, "action profile length must equal player count");
        let mut acts = Vec::with_capacity(self.n);
        for (i, pa) in a.iter().enumerate() {
            match pa {
                PlayedAction::Move(ix) => {
                    if *ix as usize >= self.actions[i].len() {
                        return Err(GameError::TableMiss {
                            what: "action",
                            key: format!("player {} action index {ix}", i + 1),
                        });
                    }
                    acts.push(*ix);
                }
                PlayedAction::Bot => return Err(GameError::UnresolvedBot { player: i + 1 }),
            }
        }
        Ok((row, self.flatten_actions(&acts)))
    }
}

/// A game together with a replacement utility table bounded by M/2.
///
/// Same type space and action sets as the base game; only payoffs differ.
#[derive(Clone, Debug)]
pub struct UtilityVariant {
    pub base: Arc<UnderlyingGame>,
    /// Replacement table, indexed like the base game's.
    utility: Vec<Vec<Vec<Q>>>,
    /// Declared bound: every payoff lies in [-M/2, M/2].
    pub bound_m: Q,
}

impl UtilityVariant {
    pub fn new(
        base: Arc<UnderlyingGame>,
        entries: BTreeMap<(Vec<TypeIx>, Vec<ActionIx>), Vec<Q>>,
        bound_m: Q,
    ) -> Result<Self, GameError> {
        let replacement = UnderlyingGame::new(
            base.name.clone(),
            base.types.clone(),
            base.actions.clone(),
            base.prior.clone(),
            entries,
        )?;
        let variant = UtilityVariant { base, utility: replacement.utility, bound_m };
        variant.check_bound()?;
        Ok(variant)
    }

    /// Scan the table and confirm the declared bound M is respected.
    pub fn check_bound(&self) -> Result<(), GameError> {
        let half = &self.bound_m / qi(2);
        for (row, (profile, _)) in self.base.prior.iter().enumerate() {
            for flat in 0..self.base.action_profile_count() {
                for v in &self.utility[row][flat] {
                    if v > &half || v < &(-half.clone()) {
                        return Err(GameError::BoundViolated {
                            types: self.base.type_profile_names(profile),
                            actions: self.base.action_profile_names(&self.base.unflatten_actions(flat)),
                            bound: format_q(&half),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Something a payoff can be read from: an [`UnderlyingGame`] or one of
/// its [`UtilityVariant`]s.
pub trait Payoffs {
    fn game(&self) -> &UnderlyingGame;
    /// Exact payoff vector for a type profile and fully resolved action
    /// profile. Unknown keys produce a table-miss error naming the key;
    /// an unresolved `⊥` marker is rejected.
    fn payoff(&self, x: &[TypeIx], a: &ActionProfile) -> Result<Vec<Q>, GameError>;
}

impl Payoffs for UnderlyingGame {
    fn game(&self) -> &UnderlyingGame {
        self
    }
    fn payoff(&self, x: &[TypeIx], a: &ActionProfile) -> Result<Vec<Q>, GameError> {
        let (row, flat) = self.resolve(x, a)?;
        Ok(self.utility[row][flat].clone())
    }
}

impl Payoffs for UtilityVariant {
    fn game(&self) -> &UnderlyingGame {
        &self.base
    }
    fn payoff(&self, x: &[TypeIx], a: &ActionProfile) -> Result<Vec<Q>, GameError> {
        let (row, flat) = self.base.resolve(x, a)?;
        Ok(self.utility[row][flat].clone())
    }
}

/// The parity counterexample game: actions {0, 1, ⊥} per player.
///
/// Payoffs: all 11/10 if at least k+1 players play ⊥; all 1 if at most
/// k play ⊥ and the rest play only 0; all 2 if at most k play ⊥ and the
/// rest play only 1; all 0 otherwise. Requires n > 3k.
pub fn build_parity_game(n: usize, k: usize) -> Result<UnderlyingGame, GameError> {
    if n <= 3 * k {
        return Err(GameError::Parameter(format!("parity game requires n > 3k, got n={n}, k={k}")));
    }
    let types = vec![vec!["·".to_string()]; n];
    let actions = vec![vec!["0".to_string(), "1".to_string(), "⊥".to_string()]; n];
    let prior = vec![(vec![0; n], qi(1))];
    let mut utility = BTreeMap::new();
    let counts = 3usize.pow(n as u32);
    for flat in 0..counts {
        let mut acts = vec![0 as ActionIx; n];
        let mut rest = flat;
        for slot in acts.iter_mut().rev() {
            *slot = (rest % 3) as ActionIx;
            rest /= 3;
        }
        let bots = acts.iter().filter(|&&a| a == 2).count();
        let zeros = acts.iter().filter(|&&a| a == 0).count();
        let ones = acts.iter().filter(|&&a| a == 1).count();
        let v = if bots >= k + 1 {
            q(11, 10)
        } else if ones == 0 {
            qi(1)
        } else if zeros == 0 {
            qi(2)
        } else {
            qi(0)
        };
        utility.insert((vec![0; n], acts), vec![v; n]);
    }
    UnderlyingGame::new(format!("parity(n={n},k={k})"), types, actions, prior, utility)
}

// ---------------------------------------------------------------------------
// Game-description file format (JSON-compatible).

#[derive(Serialize, Deserialize)]
pub struct GameFile {
    pub name: String,
    pub types: Vec<Vec<String>>,
    pub actions: Vec<Vec<String>>,
    pub prior: Vec<PriorEntry>,
    pub utility: Vec<UtilityEntry>,
}

#[derive(Serialize, Deserialize)]
pub struct PriorEntry {
    pub profile: Vec<String>,
    pub weight: String,
}

#[derive(Serialize, Deserialize)]
pub struct UtilityEntry {
    pub types: Vec<String>,
    pub actions: Vec<String>,
    pub payoffs: Vec<String>,
}

impl GameFile {
    pub fn from_game(g: &UnderlyingGame) -> Self {
        let mut utility = Vec::new();
        for (profile, _) in &g.prior {
            for flat in 0..g.action_profile_count() {
                let acts = g.unflatten_actions(flat);
                let pay = g.payoff(profile, &acts.iter().map(|&a| PlayedAction::Move(a)).collect()).unwrap();
                utility.push(UtilityEntry {
                    types: g.type_profile_names(profile),
                    actions: g.action_profile_names(&acts),
                    payoffs: pay.iter().map(format_q).collect(),
                });
            }
        }
        GameFile {
            name: g.name.clone(),
            types: g.types.clone(),
            actions: g.actions.clone(),
            prior: g
                .prior
                .iter()
                .map(|(p, w)| PriorEntry { profile: g.type_profile_names(p), weight: format_q(w) })
                .collect(),
            utility,
        }
    }

    pub fn into_game(self) -> Result<UnderlyingGame, GameError> {
        let field = |path: &str, msg: String| GameError::FileField { path: path.to_string(), msg };
        let n = self.actions.len();
        if self.types.len() != n {
            return Err(field("types", format!("{} entries but {} action lists", self.types.len(), n)));
        }
        let lookup = |lists: &[Vec<String>], i: usize, name: &str, path: String| -> Result<u16, GameError> {
            lists[i]
                .iter()
                .position(|t| t == name)
                .map(|p| p as u16)
                .ok_or_else(|| field(&path, format!("unknown name {name:?} for player {}", i + 1)))
        };
        let mut prior = Vec::new();
        for (row, e) in self.prior.iter().enumerate() {
            if e.profile.len() != n {
                return Err(field(&format!("prior[{row}].profile"), format!("expected {n} entries")));
            }
            let mut profile = Vec::new();
            for (i, t) in e.profile.iter().enumerate() {
                profile.push(lookup(&self.types, i, t, format!("prior[{row}].profile[{i}]"))?);
            }
            let w = parse_q(&e.weight).map_err(|m| field(&format!("prior[{row}].weight"), m))?;
            prior.push((profile, w));
        }
        let mut utility = BTreeMap::new();
        for (row, e) in self.utility.iter().enumerate() {
            let mut tp = Vec::new();
            let mut ap = Vec::new();
            for (i, t) in e.types.iter().enumerate() {
                tp.push(lookup(&self.types, i, t, format!("utility[{row}].types[{i}]"))?);
            }
            for (i, a) in e.actions.iter().enumerate() {
                ap.push(lookup(&self.actions, i, a, format!("utility[{row}].actions[{i}]"))?);
            }
            let mut pay = Vec::new();
            for (i, p) in e.payoffs.iter().enumerate() {
                pay.push(parse_q(p).map_err(|m| field(&format!("utility[{row}].payoffs[{i}]"), m))?);
            }
            utility.insert((tp, ap), pay);
        }
        UnderlyingGame::new(self.name, self.types, self.actions, prior, utility)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn moves(g: &UnderlyingGame, names: &[&str]) -> ActionProfile {
        names
            .iter()
            .enumerate()
            .map(|(i, n)| PlayedAction::Move(g.action_ix(i + 1, n).unwrap()))
            .collect()
    }

    #[test]
    fn parity_payoffs_match_description() {
        let g = build_parity_game(4, 1).unwrap();
        let x = vec![0; 4];
        // All four players play 1: payoff 2 for all.
        assert_eq!(g.payoff(&x, &moves(&g, &["1", "1", "1", "1"])).unwrap(), vec![qi(2); 4]);
        // All play ⊥ (≥ k+1 = 2 players): 11/10 for all.
        assert_eq!(g.payoff(&x, &moves(&g, &["⊥", "⊥", "⊥", "⊥"])).unwrap(), vec![q(11, 10); 4]);
        // All zeros: payoff 1.
        assert_eq!(g.payoff(&x, &moves(&g, &["0", "0", "0", "0"])).unwrap(), vec![qi(1); 4]);
        // Mixed 0s and 1s: payoff 0.
        assert_eq!(g.payoff(&x, &moves(&g, &["1", "1", "0", "0"])).unwrap(), vec![qi(0); 4]);
        // (⊥,⊥,1,1): two players play ⊥, so 11/10 for all.
        assert_eq!(g.payoff(&x, &moves(&g, &["⊥", "⊥", "1", "1"])).unwrap(), vec![q(11, 10); 4]);
        // Determinism: identical calls give identical vectors.
        let a = moves(&g, &["0", "⊥", "1", "0"]);
        assert_eq!(g.payoff(&x, &a).unwrap(), g.payoff(&x, &a).unwrap());
    }

    #[test]
    fn parity_requires_n_over_3k() {
        assert!(matches!(build_parity_game(3, 1), Err(GameError::Parameter(_))));
        assert!(build_parity_game(4, 1).is_ok());
    }

    #[test]
    fn parity_payoff_symmetric_under_player_permutation() {
        // Quantified over all 3^4 profiles at n=4: permuting the action
        // profile never changes the (common) payoff.
        let g = build_parity_game(4, 1).unwrap();
        let x = vec![0; 4];
        for flat in 0..81 {
            let acts = g.unflatten_actions(flat);
            let base = g.payoff(&x, &acts.iter().map(|&a| PlayedAction::Move(a)).collect()).unwrap();
            let mut rev = acts.clone();
            rev.reverse();
            let mut rot = acts.clone();
            rot.rotate_left(1);
            for perm in [rev, rot] {
                let p = g.payoff(&x, &perm.iter().map(|&a| PlayedAction::Move(a)).collect()).unwrap();
                assert_eq!(p, base, "profile {acts:?} vs {perm:?}");
            }
        }
    }

    #[test]
    fn bot_marker_rejected_in_payoff() {
        let g = build_parity_game(4, 1).unwrap();
        let mut a = moves(&g, &["0", "0", "0", "0"]);
        a[2] = PlayedAction::Bot;
        assert_eq!(g.payoff(&vec![0; 4], &a), Err(GameError::UnresolvedBot { player: 3 }));
    }

    #[test]
    fn table_miss_names_key() {
        let g = build_parity_game(4, 1).unwrap();
        let err = g.payoff(&vec![1; 4], &moves(&g, &["0", "0", "0", "0"])).unwrap_err();
        assert!(matches!(err, GameError::TableMiss { what: "type profile", .. }));
    }

    #[test]
    fn prior_must_sum_to_one() {
        let err = UnderlyingGame::new(
            "bad",
            vec![vec!["t".into()]],
            vec![vec!["a".into()]],
            vec![(vec![0], q(1, 2))],
            BTreeMap::from([((vec![0], vec![0]), vec![qi(0)])]),
        )
        .unwrap_err();
        assert!(matches!(err, GameError::PriorNotOne { .. }));
    }

    #[test]
    fn utility_must_be_total() {
        let err = UnderlyingGame::new(
            "bad",
            vec![vec!["t".into()]],
            vec![vec!["a".into(), "b".into()]],
            vec![(vec![0], qi(1))],
            BTreeMap::from([((vec![0], vec![0]), vec![qi(0)])]),
        )
        .unwrap_err();
        assert!(matches!(err, GameError::MissingUtility { .. }));
    }

    #[test]
    fn utility_variant_bound_checked() {
        let base = Arc::new(build_parity_game(4, 1).unwrap());
        let mut entries = BTreeMap::new();
        for flat in 0..base.action_profile_count() {
            let acts = base.unflatten_actions(flat);
            entries.insert((vec![0; 4], acts), vec![qi(1); 4]);
        }
        // Bound 2 means payoffs must lie in [-1, 1]: ok.
        assert!(UtilityVariant::new(base.clone(), entries.clone(), qi(2)).is_ok());
        // Bound 1 means payoffs must lie in [-1/2, 1/2]: violated.
        let err = UtilityVariant::new(base, entries, qi(1)).unwrap_err();
        assert!(matches!(err, GameError::BoundViolated { .. }));
    }

    #[test]
    fn game_file_round_trip() {
        let g = build_parity_game(4, 1).unwrap();
        let json = serde_json::to_string(&GameFile::from_game(&g)).unwrap();
        let back: GameFile = serde_json::from_str(&json).unwrap();
        let g2 = back.into_game().unwrap();
        let x = vec![0; 4];
        for flat in 0..81 {
            let a: ActionProfile =
                g.unflatten_actions(flat).iter().map(|&ix| PlayedAction::Move(ix)).collect();
            assert_eq!(g.payoff(&x, &a).unwrap(), g2.payoff(&x, &a).unwrap());
        }
    }
}
