//! Parameter sweep comparing three routes to the optimal switch stage:
//! grid search by simulation, the closed-form vertex, and the vertex of a
//! quadratic fitted to the grid samples.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::GameParams;
use crate::optimizer::{closed_form_optimum, grid_search};
use crate::regression::{fit_quadratic, vertex};
use crate::scalar::{format_sig12, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRanges<S> {
    pub productivity_rate: Vec<S>,
    pub endowment: Vec<S>,
    pub base_productivity: Vec<S>,
    pub n_periods: Vec<usize>,
    pub n_players: Vec<usize>,
}

impl<S: Scalar> Default for SweepRanges<S> {
    /// 4 x 3 x 5 x 3 x 3 = 540 combinations.
    fn default() -> Self {
        Self {
            productivity_rate: vec![
                S::ratio(5, 1000),
                S::ratio(10, 1000),
                S::ratio(15, 1000),
                S::ratio(20, 1000),
            ],
            endowment: vec![S::from_count(5), S::from_count(10), S::from_count(20)],
            base_productivity: vec![
                S::ratio(1, 10),
                S::ratio(3, 10),
                S::ratio(7, 10),
                S::ratio(10, 10),
                S::ratio(15, 10),
            ],
            n_periods: vec![5, 10, 20],
            n_players: vec![2, 4, 8],
        }
    }
}

impl<S: Scalar> SweepRanges<S> {
    pub fn combinations(&self) -> Result<Vec<GameParams<S>>> {
        if self.productivity_rate.is_empty()
            || self.endowment.is_empty()
            || self.base_productivity.is_empty()
            || self.n_periods.is_empty()
            || self.n_players.is_empty()
        {
            return Err(Error::InvalidParams("sweep range is empty".into()));
        }
        let mut out = Vec::new();
        for &m in &self.productivity_rate {
            for &w in &self.endowment {
                for &m0 in &self.base_productivity {
                    for &t in &self.n_periods {
                        for &n in &self.n_players {
                            out.push(GameParams {
                                n_players: n,
                                n_periods: t,
                                endowment: w,
                                base_productivity: m0,
                                productivity_rate: m,
                                strict_integer_votes: false,
                            });
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome<S> {
    pub grid_x: S,
    pub grid_payoff: S,
    pub closed_form_x: S,
    pub closed_form_payoff: S,
    pub clamped: bool,
    /// Fitted vertex clamped into `[0, T]`.
    pub fit_x: S,
    pub fit_rss: S,
    /// All three positions within one grid step of each other.
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<S> {
    pub params: GameParams<S>,
    /// Per-row failure, reported instead of aborting the sweep.
    pub outcome: std::result::Result<SweepOutcome<S>, Error>,
}

impl<S: Scalar> SweepRow<S> {
    pub fn agrees(&self) -> bool {
        self.outcome.as_ref().is_ok_and(|o| o.agree)
    }
}

pub fn evaluate<S: Scalar>(params: &GameParams<S>, step: S) -> Result<SweepOutcome<S>> {
    let grid = grid_search(params, step)?;
    let closed = closed_form_optimum(params)?;
    let model = fit_quadratic(&grid.samples)?;
    let periods = S::from_count(params.n_periods);
    let fit_x = vertex(&model)?.0.clamp_to(S::zero(), periods);
    let limit = step + S::tolerance();
    let close = |a: S, b: S| (a - b).abs() <= limit;
    let agree = close(grid.best_x, closed.x) && close(fit_x, closed.x) && close(grid.best_x, fit_x);
    Ok(SweepOutcome {
        grid_x: grid.best_x,
        grid_payoff: grid.best_payoff,
        closed_form_x: closed.x,
        closed_form_payoff: closed.payoff,
        clamped: closed.clamped,
        fit_x,
        fit_rss: model.rss,
        agree,
    })
}

/// Evaluate every combination in parallel; rows keep enumeration order.
pub fn run_sweep<S: Scalar>(ranges: &SweepRanges<S>, step: S) -> Result<Vec<SweepRow<S>>> {
    if step <= S::zero() {
        return Err(Error::NonPositiveStep(step.to_f64_lossy()));
    }
    let combos = ranges.combinations()?;
    Ok(combos
        .into_par_iter()
        .map(|params| SweepRow {
            params,
            outcome: params.validate().and_then(|_| evaluate(&params, step)),
        })
        .collect())
}

#[derive(Serialize)]
struct CsvRow {
    productivity_rate: String,
    endowment: String,
    base_productivity: String,
    n_periods: usize,
    n_players: usize,
    grid_x: String,
    grid_payoff: String,
    closed_form_x: String,
    closed_form_payoff: String,
    fit_x: String,
    fit_rss: String,
    clamped: String,
    agree: bool,
    error: String,
}

pub fn rows_to_csv<S: Scalar>(rows: &[SweepRow<S>]) -> Result<String> {
    let f = |v: S| format_sig12(v.to_f64_lossy());
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        let p = &row.params;
        let mut out = CsvRow {
            productivity_rate: f(p.productivity_rate),
            endowment: f(p.endowment),
            base_productivity: f(p.base_productivity),
            n_periods: p.n_periods,
            n_players: p.n_players,
            grid_x: String::new(),
            grid_payoff: String::new(),
            closed_form_x: String::new(),
            closed_form_payoff: String::new(),
            fit_x: String::new(),
            fit_rss: String::new(),
            clamped: String::new(),
            agree: false,
            error: String::new(),
        };
        match &row.outcome {
            Ok(o) => {
                out.grid_x = f(o.grid_x);
                out.grid_payoff = f(o.grid_payoff);
                out.closed_form_x = f(o.closed_form_x);
                out.closed_form_payoff = f(o.closed_form_payoff);
                out.fit_x = f(o.fit_x);
                out.fit_rss = f(o.fit_rss);
                out.clamped = o.clamped.to_string();
                out.agree = o.agree;
            }
            Err(e) => out.error = e.to_string(),
        }
        w.serialize(out).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}
