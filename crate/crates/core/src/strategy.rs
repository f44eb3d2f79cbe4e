//! Policies mapping the game state to a vote or a contribution.
//!
//! Three families cover the behaviours analysed for this game:
//!
//! * [`SwitchPolicy`]: invest everything, then contribute everything, with
//!   one fractional period at the switch.
//! * [`ThresholdPolicy`]: vote from a fixed schedule and contribute only
//!   when productivity makes contributing pay for the contributor.
//! * [`ConstantPolicy`]: the same vote and contribution share every period.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::GameParams;
use crate::scalar::Scalar;

/// Which stage of the period a decision is made for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase<S> {
    Investment,
    /// `remaining` is the endowment left after the group investment.
    Contribution { remaining: S },
}

/// Invest fully for `floor(x)` periods, invest the fraction `x - floor(x)`
/// in the next one and contribute the rest, then contribute everything.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwitchPolicy<S> {
    pub switch_stage: S,
}

impl<S: Scalar> SwitchPolicy<S> {
    pub fn new(switch_stage: S) -> Self {
        Self { switch_stage }
    }

    /// Number of full-investment periods and the fraction invested in the
    /// switch period.
    pub fn split(&self) -> (usize, S) {
        let whole = self.switch_stage.floor();
        let full = whole.to_usize().unwrap_or(0);
        (full, self.switch_stage - whole)
    }

    /// Share of the endowment invested in `period` (1-based).
    pub fn invest_share(&self, period: usize) -> S {
        let (full, frac) = self.split();
        if period <= full {
            S::one()
        } else if period == full + 1 {
            frac
        } else {
            S::zero()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPolicy<S> {
    /// Vote cast in each period, one entry per period.
    pub investment_vote_schedule: Vec<S>,
    /// Contribution made when productivity is exactly 1.
    pub tie_contribution: S,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantPolicy<S> {
    pub vote: S,
    /// Share of the post-investment balance contributed, in `[0, 1]`.
    pub contribution_fraction: S,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Policy<S> {
    Switch(SwitchPolicy<S>),
    Threshold(ThresholdPolicy<S>),
    Constant(ConstantPolicy<S>),
}

impl<S: Scalar> Policy<S> {
    pub fn switch(x: S) -> Self {
        Policy::Switch(SwitchPolicy::new(x))
    }

    pub fn threshold(schedule: Vec<S>, tie_contribution: S) -> Self {
        Policy::Threshold(ThresholdPolicy {
            investment_vote_schedule: schedule,
            tie_contribution,
        })
    }

    pub fn constant(vote: S, contribution_fraction: S) -> Self {
        Policy::Constant(ConstantPolicy {
            vote,
            contribution_fraction,
        })
    }

    pub fn validate(&self, params: &GameParams<S>) -> Result<()> {
        match self {
            Policy::Switch(s) => {
                let x = s.switch_stage;
                if x < S::zero() || x > S::from_count(params.n_periods) {
                    return Err(Error::SwitchOutOfRange {
                        x: x.to_f64_lossy(),
                        periods: params.n_periods,
                    });
                }
            }
            Policy::Threshold(t) => {
                if t.investment_vote_schedule.len() != params.n_periods {
                    return Err(Error::InvalidPolicy(format!(
                        "vote schedule has {} entries, game has {} periods",
                        t.investment_vote_schedule.len(),
                        params.n_periods
                    )));
                }
                if t.tie_contribution < S::zero() {
                    return Err(Error::InvalidPolicy(
                        "tie contribution must be non-negative".into(),
                    ));
                }
            }
            Policy::Constant(c) => {
                if c.vote < S::zero() || c.vote > params.endowment {
                    return Err(Error::InvalidPolicy(format!(
                        "constant vote {:?} outside [0, endowment]",
                        c.vote
                    )));
                }
                if c.contribution_fraction < S::zero() || c.contribution_fraction > S::one() {
                    return Err(Error::InvalidPolicy(format!(
                        "contribution fraction {:?} outside [0, 1]",
                        c.contribution_fraction
                    )));
                }
            }
        }
        Ok(())
    }

    /// Vote (investment phase) or contribution (contribution phase) for the
    /// 1-based `period`. `productivity` is the value in force when the
    /// decision is made: `M_{t-1}` for the vote, `M_t` for the contribution.
    ///
    /// Outputs are clamped into `[0, endowment]` and `[0, remaining]`.
    pub fn decide(
        &self,
        params: &GameParams<S>,
        period: usize,
        productivity: S,
        phase: Phase<S>,
    ) -> S {
        let omega = params.endowment;
        match phase {
            Phase::Investment => {
                let raw = match self {
                    Policy::Switch(s) => s.invest_share(period) * omega,
                    Policy::Threshold(t) => t
                        .investment_vote_schedule
                        .get(period.wrapping_sub(1))
                        .copied()
                        .unwrap_or_else(S::zero),
                    Policy::Constant(c) => c.vote,
                };
                clamp_logged(raw, omega, "vote")
            }
            Phase::Contribution { remaining } => {
                let remaining = remaining.max_of(S::zero());
                let raw = match self {
                    Policy::Switch(s) => (S::one() - s.invest_share(period)) * omega,
                    Policy::Threshold(t) => {
                        if productivity.approx_eq(S::one()) {
                            t.tie_contribution
                        } else if productivity < S::one() {
                            S::zero()
                        } else {
                            remaining
                        }
                    }
                    Policy::Constant(c) => c.contribution_fraction * remaining,
                };
                clamp_logged(raw, remaining, "contribution")
            }
        }
    }
}

fn clamp_logged<S: Scalar>(value: S, upper: S, what: &str) -> S {
    let clamped = value.clamp_to(S::zero(), upper);
    if clamped != value && !clamped.approx_eq(value) {
        log::debug!("{what} {value:?} clamped to {clamped:?}");
    }
    clamped
}

/// One policy per player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrategyProfile<S> {
    pub policies: Vec<Policy<S>>,
}

impl<S: Scalar> StrategyProfile<S> {
    pub fn new(policies: Vec<Policy<S>>) -> Self {
        Self { policies }
    }

    /// Every player follows `policy`.
    pub fn symmetric(policy: Policy<S>, n_players: usize) -> Self {
        Self {
            policies: vec![policy; n_players],
        }
    }

    pub fn len(&self) -> usize {
        self.policies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.policies.is_empty()
    }

    pub fn validate(&self, params: &GameParams<S>) -> Result<()> {
        if self.policies.len() != params.n_players {
            return Err(Error::WrongCount {
                expected: params.n_players,
                got: self.policies.len(),
            });
        }
        self.policies.iter().try_for_each(|p| p.validate(params))
    }
}
