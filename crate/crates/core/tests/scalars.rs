//! The same checks across every scalar type the crate supports.

use vcm_core::{
    closed_form_optimum, is_nash, payoff_of_switch, scenario, scenario_profile, Exact,
    ExactParams, GameParams, Params32, Scalar, Scenario,
};

fn scenario_totals<S: Scalar>(params: &GameParams<S>) -> Vec<f64> {
    Scenario::ALL
        .into_iter()
        .map(|s| scenario(params, s).unwrap().total_payoffs[0].to_f64_lossy())
        .collect()
}

#[test]
fn scenarios_agree_across_scalars() {
    let want = [0.0, 120.0, 100.0, 30.0, 169.0];
    let f64s = scenario_totals(&GameParams::<f64>::default());
    let f32s = scenario_totals(&Params32::default());
    let exact = scenario_totals(&ExactParams::default());
    for i in 0..5 {
        assert!((f64s[i] - want[i]).abs() < 1e-9);
        assert!((f32s[i] - want[i]).abs() < 1e-3);
        assert_eq!(exact[i], want[i]);
    }
}

#[test]
fn exact_equilibria() {
    let params = ExactParams::default();
    let one = Exact::from_integer(1);
    let zero = Exact::from_integer(0);
    for name in [Scenario::NashHighest, Scenario::NashLowest, Scenario::NashNoInvest] {
        let profile = scenario_profile(&params, name).unwrap();
        assert!(is_nash(&params, &profile, one, zero).unwrap(), "{name}");
    }
    let social = scenario_profile(&params, Scenario::SocialOptimal).unwrap();
    assert!(!is_nash(&params, &social, one, zero).unwrap());
}

#[test]
fn exact_switch_curve_is_the_quadratic() {
    let params = ExactParams::default();
    for k in 0..=20 {
        let x = Exact::new(k, 2);
        let want = Exact::from_integer(40)
            * (Exact::new(3, 10) + Exact::new(1, 10) * x)
            * (Exact::from_integer(10) - x);
        assert_eq!(payoff_of_switch(&params, x).unwrap(), want);
    }
    let opt = closed_form_optimum(&params).unwrap();
    assert_eq!((opt.x, opt.payoff), (Exact::new(7, 2), Exact::from_integer(169)));
}
