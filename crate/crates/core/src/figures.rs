//! Data series behind the outcome figures: cumulative payoff per period for
//! each named scenario, and the payoff curve over the switch stage.

use crate::equilibrium::{scenario, Scenario};
use crate::error::Result;
use crate::game::GameParams;
use crate::optimizer::grid_search;
use crate::scalar::{format_sig12, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub file_name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl FigureData {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_sig12(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn cumulative_series<S: Scalar>(
    params: &GameParams<S>,
    name: Scenario,
    number: usize,
) -> Result<FigureData> {
    let t = scenario(params, name)?;
    let mut rows = vec![vec![0.0, 0.0, 0.0]];
    let cumulative = t.cumulative_payoffs(0);
    for (r, c) in t.records.iter().zip(cumulative) {
        rows.push(vec![
            r.period as f64,
            r.payoffs[0].to_f64_lossy(),
            c.to_f64_lossy(),
        ]);
    }
    Ok(FigureData {
        file_name: format!("figure{number}_{name}.csv"),
        header: vec!["period", "payoff", "cumulative_payoff"],
        rows,
    })
}

/// Six series: figures 1-4 and 6 are per-period payoffs of player 1 in the
/// scenarios, figure 5 is `(x, payoff)` on a grid of `step`.
pub fn figure_data<S: Scalar>(params: &GameParams<S>, step: S) -> Result<Vec<FigureData>> {
    let mut out = vec![
        cumulative_series(params, Scenario::Lowest, 1)?,
        cumulative_series(params, Scenario::NashHighest, 2)?,
        cumulative_series(params, Scenario::NashNoInvest, 3)?,
        cumulative_series(params, Scenario::NashLowest, 4)?,
    ];
    let grid = grid_search(params, step)?;
    out.push(FigureData {
        file_name: "figure5_switch_curve.csv".into(),
        header: vec!["x", "payoff"],
        rows: grid
            .samples
            .iter()
            .map(|&(x, y)| vec![x.to_f64_lossy(), y.to_f64_lossy()])
            .collect(),
    });
    out.push(cumulative_series(params, Scenario::SocialOptimal, 6)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_figures() {
        let figs = figure_data(&GameParams::<f64>::default(), 0.5).unwrap();
        let names: Vec<_> = figs.iter().map(|f| f.file_name.as_str()).collect();
        assert_eq!(
            names,
            [
                "figure1_lowest.csv",
                "figure2_nash_highest.csv",
                "figure3_nash_no_invest.csv",
                "figure4_nash_lowest.csv",
                "figure5_switch_curve.csv",
                "figure6_social_optimal.csv"
            ]
        );
        assert_eq!(figs[0].rows.last().unwrap()[2], 0.0);
        for row in &figs[2].rows {
            assert!((row[2] - 10.0 * row[0]).abs() < 1e-9);
        }
        let at = figs[4].rows.iter().find(|r| r[0] == 3.5).unwrap();
        assert!((at[1] - 169.0).abs() < 1e-9);
        assert!(figs[1].to_csv().ends_with("10,40,120\n"));
    }
}
