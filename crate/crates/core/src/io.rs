//! CSV and JSON forms of a [`Trajectory`].
//!
//! Both formats carry numbers at 12 significant digits. The CSV holds one
//! row per period with columns
//! `period, vote_1..vote_N, investment, productivity,
//! contribution_1..contribution_N, group_return, payoff_1..payoff_N`;
//! the JSON document additionally carries the game parameters and totals.

use crate::error::{Error, Result};
use crate::game::{GameParams, PeriodRecord, Trajectory};
use crate::scalar::{format_sig12, Scalar};

/// Round to 12 significant digits.
pub fn round_sig12(v: f64) -> f64 {
    format_sig12(v).parse().unwrap_or(v)
}

fn to_f64_vec<S: Scalar>(v: &[S]) -> Vec<f64> {
    v.iter().map(|x| round_sig12(x.to_f64_lossy())).collect()
}

/// Lossy conversion to `f64` with every number rounded to 12 digits.
pub fn to_f64_trajectory<S: Scalar>(t: &Trajectory<S>) -> Trajectory<f64> {
    let p = &t.params;
    let params = GameParams {
        n_players: p.n_players,
        n_periods: p.n_periods,
        endowment: round_sig12(p.endowment.to_f64_lossy()),
        base_productivity: round_sig12(p.base_productivity.to_f64_lossy()),
        productivity_rate: round_sig12(p.productivity_rate.to_f64_lossy()),
        strict_integer_votes: p.strict_integer_votes,
    };
    let records = t
        .records
        .iter()
        .map(|r| PeriodRecord {
            period: r.period,
            votes: to_f64_vec(&r.votes),
            investment: round_sig12(r.investment.to_f64_lossy()),
            productivity: round_sig12(r.productivity.to_f64_lossy()),
            contributions: to_f64_vec(&r.contributions),
            group_return: round_sig12(r.group_return.to_f64_lossy()),
            payoffs: to_f64_vec(&r.payoffs),
        })
        .collect();
    Trajectory {
        params,
        records,
        total_payoffs: to_f64_vec(&t.total_payoffs),
    }
}

pub fn csv_header(n_players: usize) -> Vec<String> {
    let mut h = vec!["period".to_string()];
    h.extend((1..=n_players).map(|i| format!("vote_{i}")));
    h.push("investment".into());
    h.push("productivity".into());
    h.extend((1..=n_players).map(|i| format!("contribution_{i}")));
    h.push("group_return".into());
    h.extend((1..=n_players).map(|i| format!("payoff_{i}")));
    h
}

pub fn trajectory_to_csv<S: Scalar>(t: &Trajectory<S>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(csv_header(t.params.n_players)).map_err(io_err)?;
    let f = |v: S| format_sig12(v.to_f64_lossy());
    for r in &t.records {
        let mut row = vec![r.period.to_string()];
        row.extend(r.votes.iter().map(|&v| f(v)));
        row.push(f(r.investment));
        row.push(f(r.productivity));
        row.extend(r.contributions.iter().map(|&v| f(v)));
        row.push(f(r.group_return));
        row.extend(r.payoffs.iter().map(|&v| f(v)));
        w.write_record(&row).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

/// Read the CSV back. The CSV has no parameter block, so `params` supplies
/// the rules; the player count must match the header.
pub fn trajectory_from_csv(params: GameParams<f64>, text: &str) -> Result<Trajectory<f64>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let n = params.n_players;
    if header != csv_header(n) {
        return Err(Error::Parse(format!(
            "header does not match a {n}-player trajectory"
        )));
    }
    let mut records = Vec::new();
    for (line, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::Parse(e.to_string()))?;
        let nums = row
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: {s:?}: {e}", line + 2)))
            })
            .collect::<Result<Vec<f64>>>()?;
        let vec_at = |start: usize| nums[start..start + n].to_vec();
        records.push(PeriodRecord {
            period: nums[0] as usize,
            votes: vec_at(1),
            investment: nums[1 + n],
            productivity: nums[2 + n],
            contributions: vec_at(3 + n),
            group_return: nums[3 + 2 * n],
            payoffs: vec_at(4 + 2 * n),
        });
    }
    let mut t = Trajectory::from_records(params, records);
    t.total_payoffs = t.total_payoffs.into_iter().map(round_sig12).collect();
    Ok(t)
}

pub fn trajectory_to_json<S: Scalar>(t: &Trajectory<S>) -> Result<String> {
    serde_json::to_string_pretty(&to_f64_trajectory(t)).map_err(|e| Error::Parse(e.to_string()))
}

pub fn trajectory_from_json(text: &str) -> Result<Trajectory<f64>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{scenario, Scenario};

    #[test]
    fn csv_layout() {
        let t = scenario(&GameParams::<f64>::default(), Scenario::NashHighest).unwrap();
        let text = trajectory_to_csv(&t).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "period,vote_1,vote_2,vote_3,vote_4,investment,productivity,\
             contribution_1,contribution_2,contribution_3,contribution_4,\
             group_return,payoff_1,payoff_2,payoff_3,payoff_4"
        );
        assert_eq!(lines.next().unwrap(), "1,10,10,10,10,10,0.4,0,0,0,0,0,0,0,0,0");
        assert_eq!(
            text.lines().last().unwrap(),
            "10,0,0,0,0,0,1,10,10,10,10,40,40,40,40,40"
        );
    }

    #[test]
    fn csv_rejects_wrong_header() {
        let p = GameParams::<f64>::default();
        assert!(trajectory_from_csv(p, "period,vote_1\n1,2\n").is_err());
    }

    #[test]
    fn json_contains_params() {
        let t = scenario(&GameParams::<f64>::default(), Scenario::Lowest).unwrap();
        let text = trajectory_to_json(&t).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["params"]["n_players"], 4);
        assert_eq!(v["records"].as_array().unwrap().len(), 10);
        assert_eq!(v["total_payoffs"][0], 0.0);
    }
}
