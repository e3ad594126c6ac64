//! Movement profiles: paired status vectors for the same n individuals.
//!
//! A profile holds each person's status in period 0 (`u`) and period 1
//! (`v`). Every measure in this crate consumes a [`MovementProfile`]; the
//! order of histories carries no meaning beyond the pairing of `u[i]` with
//! `v[i]`.

use serde::{Deserialize, Serialize};

use crate::error::{MobilityError, Result};
use crate::stats::{ascending_order, mean};

/// Status values of n individuals in one period.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct StatusVector(Vec<f64>);

impl StatusVector {
    /// Builds a status vector of length at least 2 with finite entries.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(MobilityError::TooSmall(values.len()));
        }
        if let Some(index) = values.iter().position(|x| !x.is_finite()) {
            return Err(MobilityError::NonFinite { index });
        }
        Ok(StatusVector(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mean(&self) -> f64 {
        mean(&self.0)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Deref for StatusVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// How raw observations are turned into status before measuring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatusTransform {
    #[default]
    Identity,
    /// Natural logarithm; inputs must be strictly positive.
    Log,
    /// Fractional position i/n within the period, ties averaged.
    Rank,
}

/// Period means and population size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummaryStats {
    pub mu_u: f64,
    pub mu_v: f64,
    pub n: usize,
}

/// Paired origin/destination status for n individuals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MovementProfile {
    u: StatusVector,
    v: StatusVector,
}

impl MovementProfile {
    /// Validates and pairs two status vectors.
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(MobilityError::LengthMismatch { u: u.len(), v: v.len() });
        }
        Ok(MovementProfile {
            u: StatusVector::new(u)?,
            v: StatusVector::new(v)?,
        })
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn summary(&self) -> SummaryStats {
        SummaryStats {
            mu_u: self.u.mean(),
            mu_v: self.v.mean(),
            n: self.len(),
        }
    }

    /// The histories `(u_i, v_i)` in stored order.
    pub fn histories(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.u.iter().copied().zip(self.v.iter().copied())
    }

    /// Applies `t` to each period independently.
    pub fn transform(&self, t: StatusTransform) -> Result<Self> {
        match t {
            StatusTransform::Identity => Ok(self.clone()),
            StatusTransform::Log => MovementProfile::new(log_status(&self.u)?, log_status(&self.v)?),
            StatusTransform::Rank => MovementProfile::new(rank_status(&self.u), rank_status(&self.v)),
        }
    }

    /// Repeats every history `r` times.
    pub fn replicate(&self, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(MobilityError::BadReplication);
        }
        let rep = |xs: &[f64]| -> Vec<f64> { (0..r).flat_map(|_| xs.iter().copied()).collect() };
        MovementProfile::new(rep(&self.u), rep(&self.v))
    }

    /// Swaps origin and destination of every history.
    pub fn reversed(&self) -> Self {
        MovementProfile {
            u: self.v.clone(),
            v: self.u.clone(),
        }
    }

    /// Histories at `indices`, in that order. Needs at least one index; a
    /// single-history sub-profile is allowed here because subgroup
    /// decompositions work with arbitrary group sizes.
    pub(crate) fn select(&self, indices: &[usize]) -> SubProfile {
        SubProfile {
            u: indices.iter().map(|&i| self.u[i]).collect(),
            v: indices.iter().map(|&i| self.v[i]).collect(),
        }
    }
}

/// Unvalidated profile slice used inside decompositions, where groups may
/// hold a single history.
#[derive(Debug, Clone)]
pub(crate) struct SubProfile {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

/// Validates a pair of status lists into a profile.
pub fn validate_profile(u: &[f64], v: &[f64]) -> Result<MovementProfile> {
    MovementProfile::new(u.to_vec(), v.to_vec())
}

/// Applies a status transform to a profile.
pub fn transform_status(p: &MovementProfile, t: StatusTransform) -> Result<MovementProfile> {
    p.transform(t)
}

/// Repeats each history `r` times.
pub fn replicate(p: &MovementProfile, r: usize) -> Result<MovementProfile> {
    p.replicate(r)
}

/// Period means of a profile.
pub fn summary(p: &MovementProfile) -> SummaryStats {
    p.summary()
}

fn log_status(xs: &[f64]) -> Result<Vec<f64>> {
    xs.iter()
        .enumerate()
        .map(|(index, &x)| {
            if x > 0.0 {
                Ok(x.ln())
            } else {
                Err(MobilityError::NonPositiveForLog { index, value: x })
            }
        })
        .collect()
}

/// Fractional ranks in (0, 1]; tied values share the mean of their positions.
pub fn rank_status(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let order = ascending_order(xs);
    let mut out = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && xs[order[end]] == xs[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end share their average
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            out[i] = avg / n as f64;
        }
        start = end;
    }
    out
}
