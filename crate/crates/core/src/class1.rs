//! Power-function mobility measures: absolute, scale-independent,
//! translation-independent and intermediate forms, with their subgroup
//! decompositions.

use serde::{Deserialize, Serialize};

use crate::error::{MobilityError, Result};
use crate::profile::MovementProfile;
use crate::stats::{mean, real_pow, VarianceConvention};

/// One labelled term of a decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub label: String,
    pub weight: f64,
    pub value: f64,
}

/// A measure split into weighted components plus a between term.
///
/// `residual = total - (Σ weight·value + between)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionResult {
    pub components: Vec<Component>,
    pub between: f64,
    pub total: f64,
    pub residual: f64,
}

impl DecompositionResult {
    pub(crate) fn assemble(components: Vec<Component>, between: f64, total: f64) -> Self {
        let explained: f64 = components.iter().map(|c| c.weight * c.value).sum::<f64>() + between;
        DecompositionResult {
            residual: total - explained,
            components,
            between,
            total,
        }
    }

    pub fn component(&self, label: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.label == label)
    }
}

/// Assignment of each history to a group, stored as index lists in order of
/// first appearance of the label.
#[derive(Debug, Clone, PartialEq)]
pub struct SubgroupPartition {
    labels: Vec<String>,
    members: Vec<Vec<usize>>,
    n: usize,
}

impl SubgroupPartition {
    /// Builds a partition from one label per history.
    pub fn from_labels<S: AsRef<str>>(group_of: &[S]) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (i, g) in group_of.iter().enumerate() {
            let g = g.as_ref();
            match labels.iter().position(|l| l == g) {
                Some(k) => members[k].push(i),
                None => {
                    labels.push(g.to_string());
                    members.push(vec![i]);
                }
            }
        }
        if labels.is_empty() {
            return Err(MobilityError::EmptyDistribution);
        }
        Ok(SubgroupPartition {
            labels,
            members,
            n: group_of.len(),
        })
    }

    /// Upward group `U` (`u ≤ v`) and downward group `D` (`u > v`), in that
    /// order. Fails if either is empty.
    pub fn up_down(p: &MovementProfile) -> Result<Self> {
        let labels: Vec<&str> = p.histories().map(|(u, v)| if u <= v { "U" } else { "D" }).collect();
        let mut part = Self::from_labels(&labels)?;
        if part.labels.len() != 2 {
            return Err(MobilityError::DegeneratePartition);
        }
        if part.labels[0] != "U" {
            part.labels.swap(0, 1);
            part.members.swap(0, 1);
        }
        Ok(part)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn check(&self, p: &MovementProfile) -> Result<()> {
        if self.n != p.len() {
            return Err(MobilityError::PartitionLength {
                expected: p.len(),
                got: self.n,
            });
        }
        Ok(())
    }
}

/// Swaps origin and destination in every history.
pub fn reverse_profile(p: &MovementProfile) -> MovementProfile {
    p.reversed()
}

fn domain(msg: &str, i: usize, x: f64) -> MobilityError {
    MobilityError::DomainError(format!("{msg} (position {i}, value {x})"))
}

fn require_positive(u: &[f64], v: &[f64]) -> Result<()> {
    for (i, (&a, &b)) in u.iter().zip(v).enumerate() {
        if a <= 0.0 {
            return Err(domain("status must be positive", i, a));
        }
        if b <= 0.0 {
            return Err(domain("status must be positive", i, b));
        }
    }
    Ok(())
}

fn a1_kernel(u: &[f64], v: &[f64], alpha: f64) -> Result<f64> {
    let n = u.len() as f64;
    let (mu, mv) = (mean(u), mean(v));
    if alpha == 0.0 {
        require_positive(u, v)?;
        return Ok(-u.iter().zip(v).map(|(&a, &b)| b * (a / b).ln()).sum::<f64>() / n);
    }
    if alpha == 1.0 {
        // exact comparison would misfire on rounding in the means
        if (mu - mv).abs() > 1e-12 * mu.abs().max(mv.abs()) {
            return Ok(f64::INFINITY);
        }
        require_positive(u, v)?;
        return Ok(u.iter().zip(v).map(|(&a, &b)| a * (a / b).ln()).sum::<f64>() / n);
    }
    let mut s = 0.0;
    for (i, (&a, &b)) in u.iter().zip(v).enumerate() {
        let pa = real_pow(a, alpha).ok_or_else(|| domain("power undefined", i, a))?;
        let pb = real_pow(b, 1.0 - alpha).ok_or_else(|| domain("power undefined", i, b))?;
        s += pa * pb - mv;
    }
    Ok(s / (alpha * (alpha - 1.0) * n))
}

fn s1_kernel(u: &[f64], v: &[f64], alpha: f64) -> Result<f64> {
    require_positive(u, v)?;
    let n = u.len() as f64;
    let (mu, mv) = (mean(u), mean(v));
    let pairs = u.iter().zip(v).map(|(&a, &b)| (a / mu, b / mv));
    Ok(if alpha == 0.0 {
        -pairs.map(|(x, y)| y * (x / y).ln()).sum::<f64>() / n
    } else if alpha == 1.0 {
        pairs.map(|(x, y)| x * (x / y).ln()).sum::<f64>() / n
    } else {
        // x^α y^(1-α) - 1 summed, minus the zero-mean terms α(x-1) + (1-α)(y-1),
        // expanded around whichever of α = 0 or α = 1 is closer
        pairs
            .map(|(x, y)| {
                if alpha <= 0.5 {
                    y * (alpha * (x / y).ln()).exp_m1() - alpha * (x - y)
                } else {
                    x * ((1.0 - alpha) * (y / x).ln()).exp_m1() - (1.0 - alpha) * (y - x)
                }
            })
            .sum::<f64>()
            / (alpha * (alpha - 1.0) * n)
    })
}

fn t1_kernel(u: &[f64], v: &[f64], alpha: f64, var: VarianceConvention) -> f64 {
    let (mu, mv) = (mean(u), mean(v));
    if alpha == 0.0 {
        if u.len() < 2 {
            return 0.0;
        }
        let d: Vec<f64> = u.iter().zip(v).map(|(a, b)| b - a).collect();
        return 0.5 * var.variance(&d);
    }
    let n = u.len() as f64;
    // the linear term sums to zero; dropping it keeps precision near alpha = 0
    u.iter()
        .zip(v)
        .map(|(&a, &b)| {
            let e = alpha * (a - mu - b + mv);
            e.exp_m1() - e
        })
        .sum::<f64>()
        / (n * alpha * alpha)
}

/// Absolute class-1 measure. Returns `+∞` at `alpha = 1` when the period
/// means differ.
pub fn a1(p: &MovementProfile, alpha: f64) -> Result<f64> {
    a1_kernel(p.u(), p.v(), alpha)
}

/// Scale-independent class-1 measure on mean-normalised status.
pub fn s1(p: &MovementProfile, alpha: f64) -> Result<f64> {
    s1_kernel(p.u(), p.v(), alpha)
}

/// Translation-independent class-1 measure; half the variance of `v - u` at
/// `alpha = 0`.
pub fn t1(p: &MovementProfile, alpha: f64, var: VarianceConvention) -> f64 {
    t1_kernel(p.u(), p.v(), alpha, var)
}

/// Sensitivity schedule `γ + αc` for the intermediate family.
pub fn affine_alpha_tilde(gamma: f64, alpha: f64, c: f64) -> f64 {
    gamma + alpha * c
}

/// Intermediate measures between scale- and translation-independence: the
/// scale-independent form applied to `u + c`, `v + c` and rescaled by
/// `(1 + c²)/(α̃² - α̃)`.
pub fn intermediate(p: &MovementProfile, c: f64, alpha_tilde: f64) -> Result<f64> {
    if !(c >= 0.0) {
        return Err(MobilityError::DomainError(format!(
            "location shift c must be nonnegative, got {c}"
        )));
    }
    if alpha_tilde == 0.0 || alpha_tilde == 1.0 || !alpha_tilde.is_finite() {
        return Err(MobilityError::BadAlphaTilde(alpha_tilde));
    }
    let (mu, mv) = (mean(p.u()), mean(p.v()));
    for (i, (u, v)) in p.histories().enumerate() {
        if u + c <= 0.0 {
            return Err(domain("shifted status must be positive", i, u));
        }
        if v + c <= 0.0 {
            return Err(domain("shifted status must be positive", i, v));
        }
    }
    let theta = (1.0 + c * c) / (alpha_tilde * alpha_tilde - alpha_tilde);
    // ln((u+c)/(μu+c)) = ln_1p((u-μu)/(μu+c)) keeps precision for large c
    let s: f64 = p
        .histories()
        .map(|(u, v)| {
            let (rx, ry) = ((u - mu) / (mu + c), (v - mv) / (mv + c));
            let (lx, ly) = (rx.ln_1p(), ry.ln_1p());
            // same rearrangement as the scale-independent kernel
            if alpha_tilde <= 0.5 {
                (1.0 + ry) * (alpha_tilde * (lx - ly)).exp_m1() - alpha_tilde * (rx - ry)
            } else {
                (1.0 + rx) * ((1.0 - alpha_tilde) * (ly - lx)).exp_m1() - (1.0 - alpha_tilde) * (ry - rx)
            }
        })
        .sum();
    Ok(theta * s / p.len() as f64)
}

fn group_means(p: &MovementProfile, g: &SubgroupPartition) -> Vec<(f64, f64, f64)> {
    let n = p.len() as f64;
    g.members
        .iter()
        .map(|idx| {
            let sub = p.select(idx);
            (idx.len() as f64 / n, mean(&sub.u), mean(&sub.v))
        })
        .collect()
}

/// Splits the scale-independent measure into within-group terms weighted by
/// `p_k (μ_uk/μ_u)^α (μ_vk/μ_v)^(1-α)` and a between-group term.
pub fn decompose_s1_subgroups(p: &MovementProfile, alpha: f64, g: &SubgroupPartition) -> Result<DecompositionResult> {
    g.check(p)?;
    let total = s1(p, alpha)?;
    let (mu, mv) = (mean(p.u()), mean(p.v()));
    let stats = group_means(p, g);
    let mut comps = Vec::with_capacity(stats.len());
    let mut between = 0.0;
    let mut wsum = 0.0;
    for ((label, idx), &(pk, muk, mvk)) in g.labels.iter().zip(&g.members).zip(&stats) {
        let sub = p.select(idx);
        let value = s1_kernel(&sub.u, &sub.v, alpha)?;
        let (ru, rv) = (muk / mu, mvk / mv);
        let weight = if alpha == 0.0 {
            between -= pk * rv * (ru / rv).ln();
            pk * rv
        } else if alpha == 1.0 {
            between += pk * ru * (ru / rv).ln();
            pk * ru
        } else {
            let w = pk * (alpha * ru.ln() + (1.0 - alpha) * rv.ln()).exp();
            wsum += w;
            w
        };
        comps.push(Component {
            label: label.clone(),
            weight,
            value,
        });
    }
    if alpha != 0.0 && alpha != 1.0 {
        between = (wsum - 1.0) / (alpha * alpha - alpha);
    }
    Ok(DecompositionResult::assemble(comps, between, total))
}

/// Splits the translation-independent measure into within-group terms
/// weighted by `(n_k/n) e^{α(μ_uk - μ_u - μ_vk + μ_v)}` and a between term.
/// Uses the population variance convention at `alpha = 0`, where the
/// identity is exact.
pub fn decompose_t1_subgroups(p: &MovementProfile, alpha: f64, g: &SubgroupPartition) -> Result<DecompositionResult> {
    g.check(p)?;
    let var = VarianceConvention::Population;
    let total = t1(p, alpha, var);
    let (mu, mv) = (mean(p.u()), mean(p.v()));
    let md = mv - mu;
    let stats = group_means(p, g);
    let mut comps = Vec::with_capacity(stats.len());
    let mut acc = 0.0;
    for ((label, idx), &(pk, muk, mvk)) in g.labels.iter().zip(&g.members).zip(&stats) {
        let sub = p.select(idx);
        let value = t1_kernel(&sub.u, &sub.v, alpha, var);
        let weight = if alpha == 0.0 {
            let mdk = mvk - muk;
            acc += pk * mdk * mdk;
            pk
        } else {
            let w = pk * (alpha * (muk - mu - mvk + mv)).exp();
            acc += w;
            w
        };
        comps.push(Component {
            label: label.clone(),
            weight,
            value,
        });
    }
    let between = if alpha == 0.0 {
        0.5 * (acc - md * md)
    } else {
        (acc - 1.0) / (alpha * alpha)
    };
    Ok(DecompositionResult::assemble(comps, between, total))
}

/// The absolute measure is population-share additive across groups, so the
/// between term is zero. Not defined at `alpha = 1`.
pub fn decompose_a1_subgroups(p: &MovementProfile, alpha: f64, g: &SubgroupPartition) -> Result<DecompositionResult> {
    g.check(p)?;
    if alpha == 1.0 {
        return Err(MobilityError::BadAlpha(alpha));
    }
    let total = a1(p, alpha)?;
    let n = p.len() as f64;
    let mut comps = Vec::new();
    for (label, idx) in g.labels.iter().zip(&g.members) {
        let sub = p.select(idx);
        comps.push(Component {
            label: label.clone(),
            weight: idx.len() as f64 / n,
            value: a1_kernel(&sub.u, &sub.v, alpha)?,
        });
    }
    Ok(DecompositionResult::assemble(comps, 0.0, total))
}
