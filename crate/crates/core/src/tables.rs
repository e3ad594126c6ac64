//! Built-in worked examples and their published values.

use indexmap::IndexMap;

use crate::axioms::{Cell, PropertyRow};
use crate::io::{ResultTable, ScenarioSet};
use crate::measure::{MeasureId, MeasureSpec};
use crate::profile::{MovementProfile, StatusTransform};
use crate::stats::VarianceConvention;

/// Origin incomes shared by the seven scenarios.
pub const BASE: [f64; 3] = [10.0, 20.0, 40.0];

/// Destination incomes, in column order.
pub const SCENARIOS: [(&str, [f64; 3]); 7] = [
    ("1a", [20.0, 40.0, 80.0]),
    ("1b", [15.0, 25.0, 45.0]),
    ("1c", [20.0, 40.0, 10.0]),
    ("1d", [40.0, 80.0, 20.0]),
    ("1e", [25.0, 45.0, 15.0]),
    ("1f", [10.0, 30.0, 40.0]),
    ("1g", [10.0, 40.0, 160.0]),
];

pub fn scenario_set() -> ScenarioSet {
    let map: IndexMap<String, Vec<f64>> = SCENARIOS.iter().map(|(k, v)| (k.to_string(), v.to_vec())).collect();
    ScenarioSet::new(BASE.to_vec(), map).expect("built-in data is valid")
}

/// Log-income cases for the regression-based indices.
pub const REGRESSION_CASES: [(&str, [f64; 3], [f64; 3]); 2] = [
    ("case 1", [1.0, 2.0, 3.0], [3.0, 2.0, 3.0]),
    ("case 2", [1.0, 2.0, 3.0], [3.0, 1.0, 5.0]),
];

/// Row labels and specs of the classical-index comparison.
pub fn legacy_roster() -> Vec<(&'static str, MeasureSpec)> {
    use MeasureId::*;
    let log = |id| MeasureSpec::new(id).with_status(StatusTransform::Log);
    vec![
        ("1-beta", log(Elasticity)),
        ("1-rho", log(Pearson)),
        ("FO1", MeasureSpec::new(FO1)),
        ("FO2", MeasureSpec::new(FO2)),
        ("S_Theil", MeasureSpec::new(ShorrocksTheil)),
        ("S_Gini", MeasureSpec::new(ShorrocksGini)),
        ("RG1", MeasureSpec::new(RG1).with_alpha(1.0)),
        ("RG2", MeasureSpec::new(RG2).with_alpha(1.0)),
        ("BC_D", MeasureSpec::new(BCD).with_alpha(1.0)),
        ("BC_U", MeasureSpec::new(BCU).with_alpha(1.0)),
    ]
}

/// Row labels and specs of the new-measure comparison (sensitivity 0,
/// linear weights, sample variance for the half-variance row).
pub fn class_roster() -> Vec<(&'static str, MeasureSpec)> {
    use MeasureId::*;
    let g1 = |id| MeasureSpec::new(id).with_gamma(1).expect("gamma 1 is valid");
    vec![
        ("A1", MeasureSpec::new(A1).with_alpha(0.0)),
        ("A2", g1(A2)),
        ("S1", MeasureSpec::new(S1).with_alpha(0.0)),
        ("S2", g1(S2)),
        (
            "T1",
            MeasureSpec::new(T1)
                .with_alpha(0.0)
                .with_variance(VarianceConvention::Sample),
        ),
        ("T2", g1(T2)),
    ]
}

fn scenario_table(roster: &[(&str, MeasureSpec)]) -> ResultTable {
    let set = scenario_set();
    let columns: Vec<String> = set.labels().map(String::from).collect();
    let cells = roster
        .iter()
        .map(|(_, spec)| {
            columns
                .iter()
                .map(|c| spec.evaluate(&set.profile(c).expect("known label")).ok())
                .collect()
        })
        .collect();
    ResultTable {
        rows: roster.iter().map(|(l, _)| l.to_string()).collect(),
        columns,
        cells,
    }
}

/// Regression-based indices on the two log-income cases; rows are cases.
pub fn regression_table() -> ResultTable {
    let specs = [
        MeasureSpec::new(MeasureId::Pearson),
        MeasureSpec::new(MeasureId::Elasticity),
    ];
    let cells = REGRESSION_CASES
        .iter()
        .map(|(_, u, v)| {
            let p = MovementProfile::new(u.to_vec(), v.to_vec()).expect("valid");
            specs.iter().map(|s| s.evaluate(&p).ok()).collect()
        })
        .collect();
    ResultTable {
        rows: REGRESSION_CASES.iter().map(|(l, _, _)| l.to_string()).collect(),
        columns: vec!["1-rho".into(), "1-beta".into()],
        cells,
    }
}

/// Computes table `which` (1, 2 or 4).
pub fn builtin_table(which: u8) -> Option<ResultTable> {
    match which {
        1 => Some(regression_table()),
        2 => Some(scenario_table(&legacy_roster())),
        4 => Some(scenario_table(&class_roster())),
        _ => None,
    }
}

/// Published values, same layout as [`builtin_table`].
pub fn published(which: u8) -> Option<Vec<Vec<f64>>> {
    Some(match which {
        1 => vec![vec![1.0, 1.0], vec![0.5, 0.0]],
        2 => vec![
            vec![0.0, 0.208, 1.500, 1.500, 1.368, 0.0, -1.000],
            vec![0.0, 0.001, 1.500, 1.500, 1.465, 0.053, 0.0],
            vec![23.333, 5.000, 20.000, 36.667, 21.667, 3.333, 46.667],
            vec![0.693, 0.249, 0.924, 1.155, 0.903, 0.135, 0.693],
            vec![0.0, 0.011, 0.736, 0.680, 0.739, 0.034, 0.053],
            vec![0.0, 0.0, 0.500, 0.444, 0.500, 0.0, 0.0],
            vec![0.693, 0.306, 0.0, 0.693, 0.306, 0.100, 0.288],
            vec![0.0, 0.112, 0.0, 0.0, 0.112, -0.033, -0.811],
            vec![0.0, 0.0, 0.250, 0.167, 0.208, 0.0, 0.0],
            vec![1.000, 0.292, 0.667, 2.000, 0.917, 0.167, 1.333],
        ],
        4 => vec![
            vec![32.347, 5.654, 9.242, 50.831, 14.896, 4.055, 83.178],
            vec![15.0, 2.5, 5.556, 12.778, 6.389, 2.778, 36.667],
            vec![0.0, 0.005, 0.396, 0.396, 0.332, 0.019, 0.090],
            vec![0.0, 0.025, 0.238, 0.238, 0.213, 0.054, 0.095],
            vec![116.667, 0.0, 350.0, 816.667, 350.0, 16.667, 2066.667],
            vec![3.333, 0.0, 5.556, 8.889, 5.556, 1.111, 13.333],
        ],
        _ => return None,
    })
}

/// Cells of the classical-index table printed as exact zeros, as
/// (row, column) indices. Each is an analytic zero of the index.
pub const LEGACY_EXACT_ZEROS: [(usize, usize); 17] = [
    (0, 0),
    (0, 5),
    (1, 0),
    (1, 6),
    (4, 0),
    (5, 0),
    (5, 1),
    (5, 5),
    (5, 6),
    (6, 2),
    (7, 0),
    (7, 2),
    (7, 3),
    (8, 0),
    (8, 1),
    (8, 5),
    (8, 6),
];

/// Published property matrix, one row per roster measure.
pub fn reference_matrix() -> Vec<PropertyRow> {
    use Cell::{Blank as B, Full as F, Partial as P};
    let row = |m: &str, a2: bool, a2p: bool, sc, tr, ud: bool, ex: bool, di: bool| PropertyRow {
        measure: m.to_string(),
        axiom2: a2,
        axiom2_prime: a2p,
        scale: sc,
        translation: tr,
        up_down: ud,
        exchange: ex,
        directional: di,
    };
    vec![
        row("A1", true, false, P, B, true, false, true),
        row("A2", true, false, B, P, true, true, true),
        row("S1", false, true, F, B, true, false, true),
        row("S2", false, true, F, B, true, true, true),
        row("T1", false, true, B, F, true, false, true),
        row("T2", false, true, B, F, true, true, true),
        row("1-beta", false, false, P, B, false, false, false),
        row("1-rho", false, false, F, F, false, false, false),
        row("FO1", true, false, B, P, true, true, false),
        row("FO2", true, false, P, B, true, true, false),
        row("S_Theil", true, false, P, B, false, false, false),
        row("S_Gini", true, false, P, B, false, false, false),
        row("RG1", false, false, P, B, false, false, true),
        row("RG2", false, false, F, B, false, false, true),
        row("BC_D", true, false, P, B, true, false, true),
        row("BC_U", true, false, P, B, true, false, true),
    ]
}
