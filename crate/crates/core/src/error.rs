use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("expected {expected} entries, got {got}")]
    WrongCount { expected: usize, got: usize },

    #[error("vote {vote} outside [0, {endowment}]")]
    VoteOutOfRange { vote: f64, endowment: f64 },

    #[error("vote {0} is not a whole number")]
    NonIntegerVote(f64),

    #[error("investment {investment} outside [0, {endowment}]")]
    InvestmentOutOfRange { investment: f64, endowment: f64 },

    #[error("contribution {contribution} outside [0, {available}]")]
    ContributionOutOfRange { contribution: f64, available: f64 },

    #[error("total contribution {total} below own contribution {own}")]
    InconsistentTotal { total: f64, own: f64 },

    #[error("game already finished after {0} periods")]
    GameFinished(usize),

    #[error("switch stage {x} outside [0, {periods}]")]
    SwitchOutOfRange { x: f64, periods: usize },

    #[error("invalid policy: {0}")]
    InvalidPolicy(String),

    #[error("player index {index} out of range for {players} players")]
    InvalidPlayer { index: usize, players: usize },

    #[error("step must be positive, got {0}")]
    NonPositiveStep(f64),

    #[error("epsilon must be non-negative, got {0}")]
    NegativeEpsilon(f64),

    #[error("scenario infeasible: {0}")]
    Infeasible(String),

    #[error("search space of {0} plans exceeds the cap")]
    SearchTooLarge(u128),

    #[error("need at least 3 distinct x values, got {0}")]
    RankDeficient(usize),

    #[error("degenerate parabola (leading coefficient is zero)")]
    Degenerate,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
