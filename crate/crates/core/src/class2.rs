//! Rank-weighted mobility measures built from sorted status differences,
//! with the up/down and structural/exchange/growth decompositions.

use serde::{Deserialize, Serialize};

use crate::class1::{Component, DecompositionResult};
use crate::error::{MobilityError, Result};
use crate::inequality::absolute_gini;
use crate::profile::MovementProfile;
use crate::stats::{ascending_order, mean, sorted_ascending};

/// Per-person distance between origin and destination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DistanceConcept {
    /// `v - u`
    #[default]
    Absolute,
    /// `v/μ_v - u/μ_u`
    ScaleNormalised,
    /// `(v - u) - (μ_v - μ_u)`
    TranslationNormalised,
}

/// How the downward-mover share behind the weights is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PMode {
    /// Share of histories with `v < u`.
    #[serde(rename = "status")]
    StatusBased,
    /// Share of histories with negative distance.
    #[default]
    #[serde(rename = "distance")]
    DistanceBased,
}

/// Positional weights: binary signs at `gamma = 0`, odd powers otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightScheme {
    gamma: u32,
    pub p_mode: PMode,
}

impl WeightScheme {
    pub fn new(gamma: i64, p_mode: PMode) -> Result<Self> {
        Ok(WeightScheme {
            gamma: check_gamma(gamma)?,
            p_mode,
        })
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }
}

/// Accepts 0 or a positive odd integer.
pub fn check_gamma(gamma: i64) -> Result<u32> {
    if gamma < 0 {
        Err(MobilityError::NegativeGamma(gamma))
    } else if gamma != 0 && gamma % 2 == 0 {
        Err(MobilityError::EvenGamma(gamma))
    } else {
        u32::try_from(gamma).map_err(|_| MobilityError::UnsupportedGamma {
            gamma: u32::MAX,
            context: "power weights",
        })
    }
}

fn distances_raw(u: &[f64], v: &[f64], c: DistanceConcept) -> Result<Vec<f64>> {
    let pairs = u.iter().zip(v);
    Ok(match c {
        DistanceConcept::Absolute => pairs.map(|(a, b)| b - a).collect(),
        DistanceConcept::ScaleNormalised => {
            let (mu, mv) = (mean(u), mean(v));
            if mu == 0.0 || mv == 0.0 {
                return Err(MobilityError::ZeroMean);
            }
            pairs.map(|(a, b)| b / mv - a / mu).collect()
        }
        DistanceConcept::TranslationNormalised => {
            let gap = mean(v) - mean(u);
            pairs.map(|(a, b)| (b - a) - gap).collect()
        }
    })
}

/// Distances in the original history order.
pub fn distances(p: &MovementProfile, c: DistanceConcept) -> Result<Vec<f64>> {
    distances_raw(p.u(), p.v(), c)
}

/// Weights for n sorted positions with `downward` negative movers:
/// `aᵢ = ((2i - 2k - 1)/(2n))^γ`, or `∓1` split at `k` when `gamma = 0`.
pub fn positional_weights(n: usize, downward: usize, gamma: u32) -> Result<Vec<f64>> {
    if downward > n {
        return Err(MobilityError::BadDownwardCount { count: downward, n });
    }
    if gamma != 0 && gamma % 2 == 0 {
        return Err(MobilityError::EvenGamma(gamma as i64));
    }
    let nn = 2.0 * n as f64;
    Ok((1..=n)
        .map(|i| match gamma {
            0 if i <= downward => -1.0,
            0 => 1.0,
            g => (((2 * i) as f64 - (2 * downward) as f64 - 1.0) / nn).powi(g as i32),
        })
        .collect())
}

/// Weights from a proportion; `n·p` must be a whole number.
pub fn weights(n: usize, p: f64, gamma: i64) -> Result<Vec<f64>> {
    let g = check_gamma(gamma)?;
    let k = (p * n as f64).round();
    if !(0.0..=1.0).contains(&p) || (k - p * n as f64).abs() > 1e-9 {
        return Err(MobilityError::DomainError(format!(
            "proportion {p} is not a multiple of 1/{n} in [0, 1]"
        )));
    }
    positional_weights(n, k as usize, g)
}

fn downward_count(u: &[f64], v: &[f64], d: &[f64], mode: PMode) -> usize {
    match mode {
        PMode::StatusBased => u.iter().zip(v).filter(|(a, b)| b < a).count(),
        PMode::DistanceBased => d.iter().filter(|&&x| x < 0.0).count(),
    }
}

fn weighted_sorted_sum(a: &[f64], sorted: &[f64]) -> f64 {
    a.iter().zip(sorted).map(|(w, d)| w * d).sum::<f64>()
}

fn gamma_kernel(u: &[f64], v: &[f64], c: DistanceConcept, w: WeightScheme) -> Result<f64> {
    let d = distances_raw(u, v, c)?;
    let k = downward_count(u, v, &d, w.p_mode);
    let a = positional_weights(d.len(), k, w.gamma)?;
    Ok(weighted_sorted_sum(&a, &sorted_ascending(&d)) / d.len() as f64)
}

/// `(1/n) Σ aᵢ d₍ᵢ₎` over ascending distances. The concept selects the
/// absolute, scale-independent or translation-independent member.
pub fn gamma_measure(p: &MovementProfile, c: DistanceConcept, w: WeightScheme) -> Result<f64> {
    gamma_kernel(p.u(), p.v(), c, w)
}

/// Absolute Gini of the distances, `(1/2n²) ΣΣ |dᵢ - dⱼ|`.
pub fn gini_of_differences(p: &MovementProfile, c: DistanceConcept) -> Result<f64> {
    Ok(absolute_gini(&distances(p, c)?))
}

/// Splits the measure into downward and upward groups plus a between term.
///
/// Groups are `v < u` under status-based counting and `d < 0` under
/// distance-based counting. Within each group distances are recomputed with
/// the group's own means. Distance-based counting is only supported for
/// `gamma ≤ 1`.
pub fn decompose_updown(p: &MovementProfile, c: DistanceConcept, w: WeightScheme) -> Result<DecompositionResult> {
    if w.p_mode == PMode::DistanceBased && w.gamma > 1 {
        return Err(MobilityError::UnsupportedGamma {
            gamma: w.gamma,
            context: "distance-based downward share in the up/down split",
        });
    }
    let (u, v) = (p.u(), p.v());
    let n = u.len();
    let d = distances(p, c)?;
    let down: Vec<bool> = match w.p_mode {
        PMode::StatusBased => u.iter().zip(v).map(|(a, b)| b < a).collect(),
        PMode::DistanceBased => d.iter().map(|&x| x < 0.0).collect(),
    };
    let k = down.iter().filter(|&&x| x).count();
    if k == 0 || k == n {
        return Err(MobilityError::DegeneratePartition);
    }
    let a = positional_weights(n, k, w.gamma)?;
    let total = weighted_sorted_sum(&a, &sorted_ascending(&d)) / n as f64;

    let group = |flag: bool| -> Result<Vec<f64>> {
        let idx: Vec<usize> = (0..n).filter(|&i| down[i] == flag).collect();
        let sub = p.select(&idx);
        Ok(sorted_ascending(&distances_raw(&sub.u, &sub.v, c)?))
    };
    let (dd, du) = (group(true)?, group(false)?);
    let pf = k as f64 / n as f64;
    let e = w.gamma as i32 + 1;
    let (wd, wu) = (pf.powi(e), (1.0 - pf).powi(e));
    let gd = weighted_sorted_sum(&a[..k], &dd) / (n as f64 * wd);
    let gu = weighted_sorted_sum(&a[k..], &du) / (n as f64 * wu);
    let mut ddu = dd;
    ddu.extend(du);
    let between = a
        .iter()
        .zip(sorted_ascending(&d).iter().zip(&ddu))
        .map(|(ai, (x, y))| ai * (x - y))
        .sum::<f64>()
        / n as f64;
    Ok(DecompositionResult::assemble(
        vec![
            Component {
                label: "down".into(),
                weight: wd,
                value: gd,
            },
            Component {
                label: "up".into(),
                weight: wu,
                value: gu,
            },
        ],
        between,
        total,
    ))
}

/// Origin values rearranged so that each person holds the origin value whose
/// rank matches their destination rank. Ties in `v` keep index order.
pub fn rerank_origin(p: &MovementProfile) -> Vec<f64> {
    let su = sorted_ascending(p.u());
    let mut out = vec![0.0; p.len()];
    for (k, i) in ascending_order(p.v()).into_iter().enumerate() {
        out[i] = su[k];
    }
    out
}

/// Structural / exchange (/ growth, absolute only) split of the `gamma = 1`
/// measure with distance-based counting.
///
/// Structural mobility is the measure from the reranked origin to the
/// destination; exchange prices the reranking with the reranked weights;
/// growth is the change in downward share times the mean change.
pub fn decompose_seg(p: &MovementProfile, c: DistanceConcept) -> Result<DecompositionResult> {
    let w = WeightScheme {
        gamma: 1,
        p_mode: PMode::DistanceBased,
    };
    let (u, v) = (p.u(), p.v());
    let n = u.len();
    let nf = n as f64;
    let total = gamma_measure(p, c, w)?;
    let u2 = rerank_origin(p);
    let structural = gamma_kernel(&u2, v, c, w)?;
    let d = distances(p, c)?;
    let d2 = distances_raw(&u2, v, c)?;
    let k = d.iter().filter(|&&x| x < 0.0).count();
    let k2 = d2.iter().filter(|&&x| x < 0.0).count();
    let a2 = positional_weights(n, k2, 1)?;
    let exchange = a2
        .iter()
        .zip(sorted_ascending(&d).iter().zip(sorted_ascending(&d2)))
        .map(|(ai, (x, y))| ai * (x - y))
        .sum::<f64>()
        / nf;
    let mut comps = vec![
        Component {
            label: "structural".into(),
            weight: 1.0,
            value: structural,
        },
        Component {
            label: "exchange".into(),
            weight: 1.0,
            value: exchange,
        },
    ];
    if c == DistanceConcept::Absolute {
        let growth = (k2 as f64 - k as f64) / nf * (mean(v) - mean(u));
        comps.push(Component {
            label: "growth".into(),
            weight: 1.0,
            value: growth,
        });
    }
    Ok(DecompositionResult::assemble(comps, 0.0, total))
}
