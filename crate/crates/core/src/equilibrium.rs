//! Named scenarios and Nash equilibrium checks by unilateral deviation.
//!
//! A deviating player may pick, in every period, any whole-number vote in
//! `[0, endowment]` and any contribution on a grid of the given step, while
//! everyone else keeps their policy. Because every policy here reacts only
//! to the period and the current productivity, the best deviation is found
//! by dynamic programming over `(period, productivity)` instead of
//! enumerating whole deviation tables.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{median_unchecked, period_payoff, run_game, GameParams, Trajectory};
use crate::optimizer::closed_form_optimum;
use crate::scalar::Scalar;
use crate::strategy::{Phase, Policy, StrategyProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Invest everything, never contribute.
    Lowest,
    /// Build productivity to 1, then contribute everything.
    NashHighest,
    /// Never invest, never contribute.
    NashNoInvest,
    /// Build productivity to 1, then keep everything.
    NashLowest,
    /// Everyone switches at the optimal stage.
    SocialOptimal,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::Lowest,
        Scenario::NashHighest,
        Scenario::NashNoInvest,
        Scenario::NashLowest,
        Scenario::SocialOptimal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Lowest => "lowest",
            Scenario::NashHighest => "nash_highest",
            Scenario::NashNoInvest => "nash_no_invest",
            Scenario::NashLowest => "nash_lowest",
            Scenario::SocialOptimal => "social_optimal",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown scenario {s:?}")))
    }
}

/// Vote schedule investing fully until productivity reaches exactly 1,
/// with a fractional last vote if needed, and nothing afterwards.
fn schedule_to_unit_productivity<S: Scalar>(params: &GameParams<S>) -> Result<Vec<S>> {
    let one = S::one();
    let omega = params.endowment;
    let mut schedule = vec![S::zero(); params.n_periods];
    if params.base_productivity.approx_eq(one) {
        return Ok(schedule);
    }
    if params.base_productivity > one {
        return Err(Error::Infeasible(
            "base productivity already exceeds 1".into(),
        ));
    }
    let rate = params.productivity_rate * omega;
    if rate <= S::zero() {
        return Err(Error::Infeasible(
            "investment cannot raise productivity".into(),
        ));
    }
    let periods = (one - params.base_productivity) / rate;
    let (full, frac) = if periods.is_whole() {
        ((periods + S::ratio(1, 2)).floor(), S::zero())
    } else {
        (periods.floor(), periods - periods.floor())
    };
    let full = full.to_usize().unwrap_or(usize::MAX);
    let needed = full.saturating_add(usize::from(frac > S::zero()));
    if needed > params.n_periods {
        return Err(Error::Infeasible(format!(
            "productivity 1 needs {needed} investment periods, game has {}",
            params.n_periods
        )));
    }
    let last_vote = frac * omega;
    if frac > S::zero() && params.strict_integer_votes && !last_vote.is_whole() {
        return Err(Error::Infeasible(
            "productivity 1 is not reachable with whole-number votes".into(),
        ));
    }
    for slot in schedule.iter_mut().take(full) {
        *slot = omega;
    }
    if frac > S::zero() {
        schedule[full] = last_vote;
    }
    Ok(schedule)
}

/// The symmetric profile defining a named scenario.
pub fn scenario_profile<S: Scalar>(
    params: &GameParams<S>,
    name: Scenario,
) -> Result<StrategyProfile<S>> {
    params.validate()?;
    let zero = S::zero();
    let policy = match name {
        Scenario::Lowest => Policy::constant(params.endowment, zero),
        Scenario::NashNoInvest => Policy::threshold(vec![zero; params.n_periods], zero),
        Scenario::NashHighest => {
            Policy::threshold(schedule_to_unit_productivity(params)?, params.endowment)
        }
        Scenario::NashLowest => Policy::threshold(schedule_to_unit_productivity(params)?, zero),
        Scenario::SocialOptimal => Policy::switch(closed_form_optimum(params)?.x),
    };
    Ok(StrategyProfile::symmetric(policy, params.n_players))
}

pub fn scenario<S: Scalar>(params: &GameParams<S>, name: Scenario) -> Result<Trajectory<S>> {
    run_game(params, &scenario_profile(params, name)?)
}

struct DeviationSearch<'a, S> {
    params: &'a GameParams<S>,
    profile: &'a StrategyProfile<S>,
    player: usize,
    step: S,
    votes: Vec<S>,
    memo: HashMap<(usize, i64), S>,
}

impl<S: Scalar> DeviationSearch<'_, S> {
    /// Best total the deviator can collect from `period` to the end, given
    /// the productivity in force before that period's vote.
    fn value(&mut self, period: usize, productivity: S) -> Result<S> {
        if period > self.params.n_periods {
            return Ok(S::zero());
        }
        let key = (period, productivity.state_key());
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let params = self.params;
        let own = &self.profile.policies[self.player];
        let mut votes: Vec<S> = self
            .profile
            .policies
            .iter()
            .map(|p| p.decide(params, period, productivity, Phase::Investment))
            .collect();
        let mut vote_options = self.votes.clone();
        vote_options.push(votes[self.player]);

        let mut best: Option<S> = None;
        for vote in vote_options {
            votes[self.player] = vote;
            let investment = median_unchecked(&votes);
            let next = productivity + params.productivity_rate * investment;
            let remaining = params.endowment - investment;
            let phase = Phase::Contribution { remaining };
            let others: S = self
                .profile
                .policies
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != self.player)
                .fold(S::zero(), |acc, (_, p)| acc + p.decide(params, period, next, phase));

            let mut options = contribution_grid(remaining, self.step);
            options.push(own.decide(params, period, next, phase));
            let mut stage_best: Option<S> = None;
            for c in options {
                let payoff = period_payoff(params, next, investment, c, others + c)?;
                if stage_best.is_none_or(|b| payoff > b) {
                    stage_best = Some(payoff);
                }
            }
            let total = stage_best.expect("grid contains 0") + self.value(period + 1, next)?;
            if best.is_none_or(|b| total > b) {
                best = Some(total);
            }
        }
        let best = best.expect("at least one vote option");
        self.memo.insert(key, best);
        Ok(best)
    }
}

fn contribution_grid<S: Scalar>(remaining: S, step: S) -> Vec<S> {
    let mut grid = Vec::new();
    if remaining <= S::zero() {
        grid.push(S::zero());
        return grid;
    }
    for k in 0usize.. {
        let c = S::from_count(k) * step;
        if c > remaining {
            break;
        }
        grid.push(c);
    }
    grid.push(remaining);
    grid
}

fn vote_grid<S: Scalar>(endowment: S) -> Vec<S> {
    let top = endowment.floor().to_usize().unwrap_or(0);
    (0..=top).map(S::from_count).collect()
}

/// Largest payoff improvement `player` can get by deviating alone. Never
/// negative: the player's own choices are always among the options.
pub fn best_deviation_gain<S: Scalar>(
    params: &GameParams<S>,
    profile: &StrategyProfile<S>,
    player: usize,
    contribution_grid_step: S,
) -> Result<S> {
    if player >= params.n_players {
        return Err(Error::InvalidPlayer {
            index: player,
            players: params.n_players,
        });
    }
    if contribution_grid_step <= S::zero() {
        return Err(Error::NonPositiveStep(contribution_grid_step.to_f64_lossy()));
    }
    let baseline = run_game(params, profile)?.total_payoffs[player];
    let mut search = DeviationSearch {
        params,
        profile,
        player,
        step: contribution_grid_step,
        votes: vote_grid(params.endowment),
        memo: HashMap::new(),
    };
    let best = search.value(1, params.base_productivity)?;
    Ok((best - baseline).max_of(S::zero()))
}

/// Deviation gain of every player, evaluated in parallel.
pub fn deviation_gains<S: Scalar>(
    params: &GameParams<S>,
    profile: &StrategyProfile<S>,
    grid_step: S,
) -> Result<Vec<S>> {
    (0..params.n_players)
        .into_par_iter()
        .map(|i| best_deviation_gain(params, profile, i, grid_step))
        .collect()
}

pub fn is_nash<S: Scalar>(
    params: &GameParams<S>,
    profile: &StrategyProfile<S>,
    grid_step: S,
    epsilon: S,
) -> Result<bool> {
    if epsilon < S::zero() {
        return Err(Error::NegativeEpsilon(epsilon.to_f64_lossy()));
    }
    Ok(deviation_gains(params, profile, grid_step)?
        .into_iter()
        .all(|g| g <= epsilon))
}
