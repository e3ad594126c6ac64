//! Single-period inequality measures and the reduction of mobility measures
//! to inequality measures when the destination is perfectly equal.

use serde::Serialize;

use crate::error::{MobilityError, Result};
use crate::measure::MeasureSpec;
use crate::profile::MovementProfile;
use crate::stats::{mean, sorted_ascending, VarianceConvention};

/// Values of one distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(MobilityError::EmptyDistribution);
        }
        if let Some(index) = values.iter().position(|x| !x.is_finite()) {
            return Err(MobilityError::NonFinite { index });
        }
        Ok(Distribution(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn mean(&self) -> f64 {
        mean(&self.0)
    }
}

/// Absolute or mean-relative version of a dispersion index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GiniVariant {
    Absolute,
    #[default]
    Relative,
}

fn require_positive(xs: &[f64]) -> Result<()> {
    match xs.iter().position(|&x| x <= 0.0) {
        Some(i) => Err(MobilityError::DomainError(format!(
            "value at position {i} is {}, must be positive",
            xs[i]
        ))),
        None => Ok(()),
    }
}

/// Generalised entropy index; `alpha = 0` is the mean log deviation and
/// `alpha = 1` the Theil index.
pub fn generalized_entropy(x: &Distribution, alpha: f64) -> Result<f64> {
    ge_kernel(x.values(), alpha)
}

pub(crate) fn ge_kernel(xs: &[f64], alpha: f64) -> Result<f64> {
    require_positive(xs)?;
    let mu = mean(xs);
    let s = xs.iter().map(|&x| x / mu);
    Ok(if alpha == 0.0 {
        -s.map(f64::ln).sum::<f64>() / xs.len() as f64
    } else if alpha == 1.0 {
        s.map(|r| r * r.ln()).sum::<f64>() / xs.len() as f64
    } else {
        s.map(|r| r.powf(alpha) - 1.0).sum::<f64>() / (alpha * (alpha - 1.0) * xs.len() as f64)
    })
}

/// Theil index (generalised entropy at 1).
pub fn theil(xs: &[f64]) -> Result<f64> {
    ge_kernel(xs, 1.0)
}

/// Kolm-type translation-invariant index; half the variance at `alpha = 0`.
pub fn kolm_family(x: &Distribution, alpha: f64, var: VarianceConvention) -> f64 {
    let xs = x.values();
    if alpha == 0.0 {
        if xs.len() < 2 && var == VarianceConvention::Sample {
            return 0.0;
        }
        return 0.5 * var.variance(xs);
    }
    let mu = mean(xs);
    xs.iter()
        .map(|&v| {
            let e = alpha * (v - mu);
            e.exp_m1() - e
        })
        .sum::<f64>()
        / (xs.len() as f64 * alpha * alpha)
}

/// Pairwise-difference Gini: `(1/2n²) ΣΣ|xᵢ - xⱼ|`, divided by the mean for
/// the relative variant.
pub fn gini(x: &Distribution, variant: GiniVariant) -> Result<f64> {
    gini_kernel(x.values(), variant)
}

pub(crate) fn absolute_gini(xs: &[f64]) -> f64 {
    // sorted form of the pairwise mean: (1/n²) Σ (2i - n - 1) x_(i)
    let n = xs.len() as f64;
    sorted_ascending(xs)
        .iter()
        .enumerate()
        .map(|(i, &x)| (2.0 * (i as f64 + 1.0) - n - 1.0) * x)
        .sum::<f64>()
        / (n * n)
}

pub(crate) fn gini_kernel(xs: &[f64], variant: GiniVariant) -> Result<f64> {
    let g = absolute_gini(xs);
    match variant {
        GiniVariant::Absolute => Ok(g),
        GiniVariant::Relative => {
            let mu = mean(xs);
            if mu == 0.0 {
                Err(MobilityError::ZeroMean)
            } else {
                Ok(g / mu)
            }
        }
    }
}

/// Rank-weighted extended Gini, `(1/n) Σ cᵢ x₍ᵢ₎` over ascending values with
/// `cᵢ = aᵢ^γ - mean(a^γ)`, `aᵢ = (i - ½)/n - q` and `q` the share of values
/// at or below the mean. At `gamma = 1` this is half the Gini index.
pub fn extended_gini(x: &Distribution, gamma: i64, variant: GiniVariant) -> Result<f64> {
    if gamma < 0 {
        return Err(MobilityError::NegativeGamma(gamma));
    }
    if gamma % 2 == 0 {
        return Err(MobilityError::EvenGamma(gamma));
    }
    let xs = x.values();
    let n = xs.len() as f64;
    let mu = mean(xs);
    let q = xs.iter().filter(|&&v| v <= mu).count() as f64 / n;
    let a: Vec<f64> = (1..=xs.len())
        .map(|i| ((i as f64 - 0.5) / n - q).powi(gamma as i32))
        .collect();
    let abar = mean(&a);
    let g = sorted_ascending(xs)
        .iter()
        .zip(&a)
        .map(|(&v, &ai)| (ai - abar) * v)
        .sum::<f64>()
        / n;
    match variant {
        GiniVariant::Absolute => Ok(g),
        GiniVariant::Relative if mu == 0.0 => Err(MobilityError::ZeroMean),
        GiniVariant::Relative => Ok(g / mu),
    }
}

/// Mean absolute deviation from the mean.
pub fn mean_absolute_deviation(x: &Distribution) -> f64 {
    let mu = x.mean();
    mean(&x.values().iter().map(|v| (v - mu).abs()).collect::<Vec<_>>())
}

/// Mean absolute log-deviation, `(1/n) Σ |ln xᵢ - ln μ|`.
pub fn mean_absolute_log_deviation(x: &Distribution) -> Result<f64> {
    require_positive(x.values())?;
    let lm = x.mean().ln();
    Ok(mean(
        &x.values().iter().map(|v| (v.ln() - lm).abs()).collect::<Vec<_>>(),
    ))
}

/// Evaluates `spec` on the profile that moves `x` to its own mean.
pub fn reduce_mobility(x: &Distribution, spec: &MeasureSpec) -> Result<f64> {
    let mu = x.mean();
    let p = MovementProfile::new(x.values().to_vec(), vec![mu; x.values().len()])?;
    spec.evaluate(&p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(xs: &[f64]) -> Distribution {
        Distribution::new(xs.to_vec()).unwrap()
    }

    fn pairwise_gini(xs: &[f64]) -> f64 {
        let n = xs.len() as f64;
        let mut s = 0.0;
        for a in xs {
            for b in xs {
                s += (a - b).abs();
            }
        }
        s / (2.0 * n * n)
    }

    fn ge_direct(xs: &[f64], alpha: f64) -> f64 {
        let n = xs.len() as f64;
        let mu = xs.iter().sum::<f64>() / n;
        let mut s = 0.0;
        for &x in xs {
            s += if alpha == 0.0 {
                -(x / mu).ln()
            } else if alpha == 1.0 {
                x / mu * (x / mu).ln()
            } else {
                ((x / mu).powf(alpha) - 1.0) / (alpha * (alpha - 1.0))
            };
        }
        s / n
    }

    #[test]
    fn theil_example() {
        let t = generalized_entropy(&d(&[10.0, 20.0, 40.0]), 1.0).unwrap();
        assert!((t - 0.14291).abs() < 5e-6, "{t}");
        assert!((t - ge_direct(&[10.0, 20.0, 40.0], 1.0)).abs() < 1e-15);
    }

    #[test]
    fn ge_matches_direct_sum_on_small_integer_grid() {
        // every multiset of size <= 4 from {1..5}, alphas across all branches
        fn rec(cur: &mut Vec<f64>, start: u32, out: &mut Vec<Vec<f64>>) {
            if !cur.is_empty() {
                out.push(cur.clone());
            }
            if cur.len() == 4 {
                return;
            }
            for k in start..=5 {
                cur.push(k as f64);
                rec(cur, k, out);
                cur.pop();
            }
        }
        let mut all = Vec::new();
        rec(&mut Vec::new(), 1, &mut all);
        for xs in &all {
            for alpha in [-1.0, 0.0, 0.5, 1.0, 2.0] {
                let got = generalized_entropy(&d(xs), alpha).unwrap();
                assert!((got - ge_direct(xs, alpha)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn equal_distribution_is_zero() {
        let x = d(&[7.0, 7.0, 7.0]);
        for a in [-1.0, 0.0, 1.0, 3.0] {
            assert!(generalized_entropy(&x, a).unwrap().abs() < 1e-15);
            assert!(kolm_family(&x, a, VarianceConvention::Population).abs() < 1e-15);
        }
        assert_eq!(gini(&x, GiniVariant::Relative).unwrap(), 0.0);
        assert_eq!(extended_gini(&x, 3, GiniVariant::Absolute).unwrap(), 0.0);
    }

    #[test]
    fn kolm_half_variance() {
        let k = kolm_family(&d(&[10.0, 20.0, 40.0]), 0.0, VarianceConvention::Population);
        assert!((k - 700.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn gini_examples() {
        let x = [10.0, 20.0, 40.0];
        let a = gini(&d(&x), GiniVariant::Absolute).unwrap();
        assert!((a - pairwise_gini(&x)).abs() < 1e-12);
        assert!((a - 20.0 / 3.0).abs() < 1e-12);
        let r = gini(&d(&x), GiniVariant::Relative).unwrap();
        assert!((r - 2.0 / 7.0).abs() < 1e-12);
        let r2 = gini(&d(&[30.0, 60.0, 50.0]), GiniVariant::Relative).unwrap();
        assert!((r2 - 1.0 / 7.0).abs() < 1e-12);
        assert_eq!(
            gini(&d(&[-1.0, 1.0]), GiniVariant::Relative),
            Err(MobilityError::ZeroMean)
        );
    }

    #[test]
    fn extended_gini_gamma_one_is_half_gini() {
        let x = [10.0, 20.0, 40.0];
        let e = extended_gini(&d(&x), 1, GiniVariant::Absolute).unwrap();
        assert!((e - 10.0 / 3.0).abs() < 1e-12);
        assert_eq!(
            extended_gini(&d(&x), 2, GiniVariant::Absolute),
            Err(MobilityError::EvenGamma(2))
        );
    }

    #[test]
    fn deviation_measures() {
        let x = d(&[10.0, 20.0, 40.0]);
        let mu: f64 = 70.0 / 3.0;
        let want = ((mu - 10.0) + (mu - 20.0) + (40.0 - mu)) / 3.0;
        assert!((mean_absolute_deviation(&x) - want).abs() < 1e-12);
        let wl = ((mu.ln() - 10f64.ln()) + (mu.ln() - 20f64.ln()) + (40f64.ln() - mu.ln())) / 3.0;
        assert!((mean_absolute_log_deviation(&x).unwrap() - wl).abs() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn positive_on_unequal(xs in prop::collection::vec(1.0f64..100.0, 2..10)) {
                let spread = xs.iter().cloned().fold(f64::MIN, f64::max)
                    - xs.iter().cloned().fold(f64::MAX, f64::min);
                prop_assume!(spread > 1e-6);
                let x = d(&xs);
                prop_assert!(gini(&x, GiniVariant::Relative).unwrap() > 0.0);
                prop_assert!(generalized_entropy(&x, 0.5).unwrap() > 0.0);
                prop_assert!(kolm_family(&x, 0.1, VarianceConvention::Population) > 0.0);
                prop_assert!(extended_gini(&x, 3, GiniVariant::Absolute).unwrap() > 0.0);
            }

            #[test]
            fn gini_invariances(xs in prop::collection::vec(1.0f64..100.0, 2..10),
                                lam in 0.1f64..10.0, delta in -50.0f64..50.0) {
                let x = d(&xs);
                let scaled = d(&xs.iter().map(|v| v * lam).collect::<Vec<_>>());
                let shifted = d(&xs.iter().map(|v| v + delta).collect::<Vec<_>>());
                let r = gini(&x, GiniVariant::Relative).unwrap();
                prop_assert!((r - gini(&scaled, GiniVariant::Relative).unwrap()).abs() < 1e-12);
                let a = gini(&x, GiniVariant::Absolute).unwrap();
                prop_assert!((a - gini(&shifted, GiniVariant::Absolute).unwrap()).abs() < 1e-12 * (1.0 + a));
                let k = kolm_family(&x, 0.05, VarianceConvention::Population);
                let ks = kolm_family(&shifted, 0.05, VarianceConvention::Population);
                prop_assert!((k - ks).abs() <= 1e-10 * (1.0 + k.abs()));
            }
        }
    }
}
