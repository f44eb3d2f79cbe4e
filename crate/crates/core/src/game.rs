//! Mechanics of a single game: the investment vote, productivity growth,
//! the contribution stage and per-period payoffs.
//!
//! Every period runs in two stages. Players first vote on a common
//! investment, the median vote is invested by everyone, and contribution
//! productivity grows additively:
//!
//! ```text
//! M_t = M_{t-1} + m * I_t
//! ```
//!
//! Each player then splits what is left between keeping it and the group
//! account. The account is multiplied by `M_t` and paid to every player:
//!
//! ```text
//! payoff_i = endowment - I_t - c_i + M_t * sum_j c_j
//! ```
//!
//! where the sum includes the player's own contribution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::strategy::{Phase, StrategyProfile};

/// Rule set of the game. Build with [`GameParams::new`] or start from the
/// default (4 players, 10 periods, endowment 10, `M0 = 0.30`, `m = 0.01`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameParams<S> {
    pub n_players: usize,
    pub n_periods: usize,
    pub endowment: S,
    pub base_productivity: S,
    pub productivity_rate: S,
    pub strict_integer_votes: bool,
}

impl<S: Scalar> Default for GameParams<S> {
    fn default() -> Self {
        Self {
            n_players: 4,
            n_periods: 10,
            endowment: S::from_count(10),
            base_productivity: S::ratio(3, 10),
            productivity_rate: S::ratio(1, 100),
            strict_integer_votes: false,
        }
    }
}

impl<S: Scalar> GameParams<S> {
    pub fn new(
        n_players: usize,
        n_periods: usize,
        endowment: S,
        base_productivity: S,
        productivity_rate: S,
    ) -> Result<Self> {
        let params = Self {
            n_players,
            n_periods,
            endowment,
            base_productivity,
            productivity_rate,
            strict_integer_votes: false,
        };
        params.validate()?;
        Ok(params)
    }

    /// Same rules, but votes must be whole numbers.
    pub fn strict(mut self) -> Self {
        self.strict_integer_votes = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParams(msg.to_string()));
        if self.n_players < 2 {
            return bad("at least 2 players required");
        }
        if self.n_periods < 1 {
            return bad("at least 1 period required");
        }
        if self.endowment < S::zero() {
            return bad("endowment must be non-negative");
        }
        if self.base_productivity <= S::zero() {
            return bad("base productivity must be positive");
        }
        if self.productivity_rate < S::zero() {
            return bad("productivity rate must be non-negative");
        }
        Ok(())
    }

    pub fn initial_state(&self) -> ProductivityState<S> {
        ProductivityState {
            period: 0,
            productivity: self.base_productivity,
        }
    }

    /// `N * endowment`, the scale factor of the per-player switch payoff.
    pub fn group_scale(&self) -> S {
        S::from_count(self.n_players) * self.endowment
    }
}

/// Productivity in force after `period` periods have been played.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductivityState<S> {
    pub period: usize,
    pub productivity: S,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodRecord<S> {
    pub period: usize,
    pub votes: Vec<S>,
    pub investment: S,
    pub productivity: S,
    pub contributions: Vec<S>,
    pub group_return: S,
    pub payoffs: Vec<S>,
}

impl<S: Scalar> PeriodRecord<S> {
    /// Money each player kept: endowment minus investment minus contribution.
    pub fn residuals(&self, params: &GameParams<S>) -> Vec<S> {
        self.contributions
            .iter()
            .map(|&c| params.endowment - self.investment - c)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<S> {
    pub params: GameParams<S>,
    pub records: Vec<PeriodRecord<S>>,
    pub total_payoffs: Vec<S>,
}

impl<S: Scalar> Trajectory<S> {
    /// Rebuild from records, recomputing the totals.
    pub fn from_records(params: GameParams<S>, records: Vec<PeriodRecord<S>>) -> Self {
        let mut total_payoffs = vec![S::zero(); params.n_players];
        for record in &records {
            for (total, &p) in total_payoffs.iter_mut().zip(&record.payoffs) {
                *total = *total + p;
            }
        }
        Self {
            params,
            records,
            total_payoffs,
        }
    }

    /// Running total of one player's payoff, one entry per period.
    pub fn cumulative_payoffs(&self, player: usize) -> Vec<S> {
        self.records
            .iter()
            .scan(S::zero(), |acc, r| {
                *acc = *acc + r.payoffs[player];
                Some(*acc)
            })
            .collect()
    }

    pub fn final_productivity(&self) -> S {
        self.records
            .last()
            .map(|r| r.productivity)
            .unwrap_or(self.params.base_productivity)
    }
}

fn check_vote<S: Scalar>(vote: S, params: &GameParams<S>) -> Result<()> {
    let tol = S::tolerance();
    if vote < -tol || vote > params.endowment + tol {
        return Err(Error::VoteOutOfRange {
            vote: vote.to_f64_lossy(),
            endowment: params.endowment.to_f64_lossy(),
        });
    }
    if params.strict_integer_votes && !vote.is_whole() {
        return Err(Error::NonIntegerVote(vote.to_f64_lossy()));
    }
    Ok(())
}

/// Median of the votes: the average of the two middle votes for an even
/// group, the middle vote for an odd one.
pub fn median_investment<S: Scalar>(votes: &[S], params: &GameParams<S>) -> Result<S> {
    if votes.len() != params.n_players {
        return Err(Error::WrongCount {
            expected: params.n_players,
            got: votes.len(),
        });
    }
    for &v in votes {
        check_vote(v, params)?;
    }
    Ok(median_unchecked(votes))
}

pub(crate) fn median_unchecked<S: Scalar>(votes: &[S]) -> S {
    let mut sorted = votes.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("votes are comparable"));
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / S::from_count(2)
    }
}

pub fn update_productivity<S: Scalar>(
    prev: ProductivityState<S>,
    investment: S,
    params: &GameParams<S>,
) -> Result<ProductivityState<S>> {
    if prev.period >= params.n_periods {
        return Err(Error::GameFinished(params.n_periods));
    }
    let tol = S::tolerance();
    if investment < -tol || investment > params.endowment + tol {
        return Err(Error::InvestmentOutOfRange {
            investment: investment.to_f64_lossy(),
            endowment: params.endowment.to_f64_lossy(),
        });
    }
    Ok(ProductivityState {
        period: prev.period + 1,
        productivity: prev.productivity + params.productivity_rate * investment,
    })
}

/// One player's payoff for one period. `total_contribution` includes the
/// player's own contribution.
pub fn period_payoff<S: Scalar>(
    params: &GameParams<S>,
    productivity: S,
    investment: S,
    own_contribution: S,
    total_contribution: S,
) -> Result<S> {
    let tol = S::tolerance();
    let available = params.endowment - investment;
    if own_contribution < -tol || own_contribution > available + tol {
        return Err(Error::ContributionOutOfRange {
            contribution: own_contribution.to_f64_lossy(),
            available: available.to_f64_lossy(),
        });
    }
    if total_contribution < own_contribution - tol {
        return Err(Error::InconsistentTotal {
            total: total_contribution.to_f64_lossy(),
            own: own_contribution.to_f64_lossy(),
        });
    }
    Ok(available - own_contribution + productivity * total_contribution)
}

/// Play one period from `state`: median vote, productivity update, then
/// payoffs for every player.
pub fn run_period<S: Scalar>(
    state: ProductivityState<S>,
    votes: &[S],
    contributions: &[S],
    params: &GameParams<S>,
) -> Result<(ProductivityState<S>, PeriodRecord<S>)> {
    let investment = median_investment(votes, params)?;
    let next = update_productivity(state, investment, params)?;
    if contributions.len() != params.n_players {
        return Err(Error::WrongCount {
            expected: params.n_players,
            got: contributions.len(),
        });
    }
    let total = contributions.iter().fold(S::zero(), |acc, &c| acc + c);
    let payoffs = contributions
        .iter()
        .map(|&c| period_payoff(params, next.productivity, investment, c, total))
        .collect::<Result<Vec<_>>>()?;
    let record = PeriodRecord {
        period: next.period,
        votes: votes.to_vec(),
        investment,
        productivity: next.productivity,
        contributions: contributions.to_vec(),
        group_return: next.productivity * total,
        payoffs,
    };
    Ok((next, record))
}

/// Play a whole game with every player following its policy.
pub fn run_game<S: Scalar>(
    params: &GameParams<S>,
    profile: &StrategyProfile<S>,
) -> Result<Trajectory<S>> {
    params.validate()?;
    profile.validate(params)?;
    let mut state = params.initial_state();
    let mut records = Vec::with_capacity(params.n_periods);
    for period in 1..=params.n_periods {
        let votes: Vec<S> = profile
            .policies
            .iter()
            .map(|p| p.decide(params, period, state.productivity, Phase::Investment))
            .collect();
        let investment = median_investment(&votes, params)?;
        let productivity = state.productivity + params.productivity_rate * investment;
        let remaining = params.endowment - investment;
        let contributions: Vec<S> = profile
            .policies
            .iter()
            .map(|p| p.decide(params, period, productivity, Phase::Contribution { remaining }))
            .collect();
        let (next, record) = run_period(state, &votes, &contributions, params)?;
        state = next;
        records.push(record);
    }
    Ok(Trajectory::from_records(*params, records))
}
