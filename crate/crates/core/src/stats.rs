//! Small numeric helpers shared by the measure modules.

use std::cmp::Ordering;

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Which denominator a variance uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarianceConvention {
    /// Divide by n.
    #[default]
    Population,
    /// Divide by n - 1.
    Sample,
}

impl VarianceConvention {
    pub fn variance(self, xs: &[f64]) -> f64 {
        let m = mean(xs);
        let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
        match self {
            VarianceConvention::Population => ss / xs.len() as f64,
            VarianceConvention::Sample => ss / (xs.len() as f64 - 1.0),
        }
    }
}

/// Indices that sort `xs` ascending; ties keep their original order.
pub fn ascending_order(xs: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap_or(Ordering::Equal));
    idx
}

pub fn sorted_ascending(xs: &[f64]) -> Vec<f64> {
    ascending_order(xs).into_iter().map(|i| xs[i]).collect()
}

/// `base^exp`, refusing cases that have no real value.
pub fn real_pow(base: f64, exp: f64) -> Option<f64> {
    if base > 0.0 {
        Some(base.powf(exp))
    } else if base == 0.0 {
        (exp > 0.0).then_some(0.0)
    } else if exp.fract() == 0.0 {
        Some(base.powf(exp))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variance_conventions() {
        let xs = [10.0, 20.0, 40.0];
        let pop = VarianceConvention::Population.variance(&xs);
        let smp = VarianceConvention::Sample.variance(&xs);
        assert!((pop - 1400.0 / 9.0 * 1.0).abs() < 1e-9);
        assert!((smp - pop * 3.0 / 2.0).abs() < 1e-9);
    }

    #[test]
    fn stable_order_on_ties() {
        assert_eq!(ascending_order(&[2.0, 1.0, 2.0, 1.0]), vec![1, 3, 0, 2]);
    }

    #[test]
    fn real_pow_domain() {
        assert_eq!(real_pow(-2.0, 2.0), Some(4.0));
        assert_eq!(real_pow(-2.0, 0.5), None);
        assert_eq!(real_pow(0.0, -1.0), None);
        assert_eq!(real_pow(0.0, 2.0), Some(0.0));
    }
}
