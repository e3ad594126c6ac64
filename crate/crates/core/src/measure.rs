//! Uniform handle over every index in the crate.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::class1;
use crate::class2::{self, check_gamma, DistanceConcept, PMode, WeightScheme};
use crate::error::{MobilityError, Result};
use crate::legacy::{self, Direction, FoVariant, InequalityFunctional, RgVariant};
use crate::profile::{MovementProfile, StatusTransform};
use crate::stats::VarianceConvention;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MeasureId {
    Elasticity,
    Pearson,
    FO1,
    FO2,
    ShorrocksTheil,
    ShorrocksGini,
    RG1,
    RG2,
    BCD,
    BCU,
    A1,
    S1,
    T1,
    A2,
    S2,
    T2,
    Intermediate,
}

impl MeasureId {
    pub const ALL: [MeasureId; 17] = [
        MeasureId::Elasticity,
        MeasureId::Pearson,
        MeasureId::FO1,
        MeasureId::FO2,
        MeasureId::ShorrocksTheil,
        MeasureId::ShorrocksGini,
        MeasureId::RG1,
        MeasureId::RG2,
        MeasureId::BCD,
        MeasureId::BCU,
        MeasureId::A1,
        MeasureId::S1,
        MeasureId::T1,
        MeasureId::A2,
        MeasureId::S2,
        MeasureId::T2,
        MeasureId::Intermediate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureId::Elasticity => "elasticity",
            MeasureId::Pearson => "pearson",
            MeasureId::FO1 => "FO1",
            MeasureId::FO2 => "FO2",
            MeasureId::ShorrocksTheil => "S_Theil",
            MeasureId::ShorrocksGini => "S_Gini",
            MeasureId::RG1 => "RG1",
            MeasureId::RG2 => "RG2",
            MeasureId::BCD => "BCD",
            MeasureId::BCU => "BCU",
            MeasureId::A1 => "A1",
            MeasureId::S1 => "S1",
            MeasureId::T1 => "T1",
            MeasureId::A2 => "A2",
            MeasureId::S2 => "S2",
            MeasureId::T2 => "T2",
            MeasureId::Intermediate => "intermediate",
        }
    }

    fn uses_alpha(self) -> bool {
        matches!(
            self,
            MeasureId::RG1
                | MeasureId::RG2
                | MeasureId::BCD
                | MeasureId::BCU
                | MeasureId::A1
                | MeasureId::S1
                | MeasureId::T1
                | MeasureId::Intermediate
        )
    }

    fn uses_gamma(self) -> bool {
        matches!(self, MeasureId::A2 | MeasureId::S2 | MeasureId::T2)
    }

    fn default_alpha(self) -> f64 {
        match self {
            MeasureId::RG1 | MeasureId::RG2 | MeasureId::BCD | MeasureId::BCU => 1.0,
            MeasureId::Intermediate => 0.5,
            _ => 0.0,
        }
    }

    /// Status space in which a matched mean-preserving transfer is judged.
    pub fn normalisation(self) -> Normalisation {
        match self {
            MeasureId::S1 | MeasureId::S2 => Normalisation::Scale,
            MeasureId::T1 | MeasureId::T2 => Normalisation::Translation,
            _ => Normalisation::Raw,
        }
    }

    /// Has a closed-form split into upward and downward movers.
    pub fn up_down_decomposable(self) -> bool {
        matches!(
            self,
            MeasureId::A1
                | MeasureId::A2
                | MeasureId::S1
                | MeasureId::S2
                | MeasureId::T1
                | MeasureId::T2
                | MeasureId::FO1
                | MeasureId::FO2
                | MeasureId::BCD
                | MeasureId::BCU
                | MeasureId::Intermediate
        )
    }

    /// Separates reranking from changes in the marginal distributions.
    pub fn exchange_decomposable(self) -> bool {
        matches!(
            self,
            MeasureId::A2 | MeasureId::S2 | MeasureId::T2 | MeasureId::FO1 | MeasureId::FO2
        )
    }

    /// Carries a parameter that tilts weight towards one direction of movement.
    pub fn directional(self) -> bool {
        matches!(
            self,
            MeasureId::A1
                | MeasureId::A2
                | MeasureId::S1
                | MeasureId::S2
                | MeasureId::T1
                | MeasureId::T2
                | MeasureId::RG1
                | MeasureId::RG2
                | MeasureId::BCD
                | MeasureId::BCU
                | MeasureId::Intermediate
        )
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let key = s.to_ascii_lowercase().replace(['-', '_'], "");
        Ok(match key.as_str() {
            "elasticity" | "beta" => MeasureId::Elasticity,
            "pearson" | "rho" => MeasureId::Pearson,
            "fo1" => MeasureId::FO1,
            "fo2" => MeasureId::FO2,
            "shorrocks" | "stheil" | "shorrockstheil" => MeasureId::ShorrocksTheil,
            "sgini" | "shorrocksgini" => MeasureId::ShorrocksGini,
            "rg1" => MeasureId::RG1,
            "rg2" => MeasureId::RG2,
            "bcd" => MeasureId::BCD,
            "bcu" => MeasureId::BCU,
            "a1" => MeasureId::A1,
            "s1" => MeasureId::S1,
            "t1" => MeasureId::T1,
            "a2" => MeasureId::A2,
            "s2" => MeasureId::S2,
            "t2" => MeasureId::T2,
            "intermediate" => MeasureId::Intermediate,
            _ => return Err(format!("unknown measure '{s}'")),
        })
    }
}

/// Which status space a measure's matched-transfer test lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalisation {
    Raw,
    Scale,
    Translation,
}

/// A measure plus all of its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub id: MeasureId,
    /// Sensitivity for class-1, RG and BC measures; `α̃` for the
    /// intermediate family.
    pub alpha: f64,
    pub gamma: u32,
    /// Location shift of the intermediate family.
    pub c: f64,
    pub status: StatusTransform,
    pub p_mode: PMode,
    pub variance: VarianceConvention,
}

impl MeasureSpec {
    /// Spec with the default parameters for `id`.
    pub fn new(id: MeasureId) -> Self {
        MeasureSpec {
            id,
            alpha: id.default_alpha(),
            gamma: 1,
            c: 1.0,
            status: StatusTransform::Identity,
            p_mode: PMode::DistanceBased,
            variance: VarianceConvention::Population,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_gamma(mut self, gamma: i64) -> Result<Self> {
        self.gamma = check_gamma(gamma)?;
        Ok(self)
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn with_status(mut self, status: StatusTransform) -> Self {
        self.status = status;
        self
    }

    pub fn with_p_mode(mut self, p_mode: PMode) -> Self {
        self.p_mode = p_mode;
        self
    }

    pub fn with_variance(mut self, variance: VarianceConvention) -> Self {
        self.variance = variance;
        self
    }

    /// Distance concept of a class-2 measure.
    pub fn concept(&self) -> Option<DistanceConcept> {
        match self.id {
            MeasureId::A2 => Some(DistanceConcept::Absolute),
            MeasureId::S2 => Some(DistanceConcept::ScaleNormalised),
            MeasureId::T2 => Some(DistanceConcept::TranslationNormalised),
            _ => None,
        }
    }

    pub fn weight_scheme(&self) -> Result<WeightScheme> {
        WeightScheme::new(self.gamma as i64, self.p_mode)
    }

    /// Short label such as `S1(alpha=0)` or `T2(gamma=1)`.
    pub fn label(&self) -> String {
        let mut s = self.id.name().to_string();
        if self.id == MeasureId::Intermediate {
            s += &format!("(c={},alpha_tilde={})", self.c, self.alpha);
        } else if self.id.uses_alpha() {
            s += &format!("(alpha={})", self.alpha);
        } else if self.id.uses_gamma() {
            s += &format!("(gamma={})", self.gamma);
        }
        if self.status != StatusTransform::Identity {
            s += &format!("[{:?}]", self.status).to_lowercase();
        }
        s
    }

    /// Applies the status transform, then the measure.
    pub fn evaluate(&self, p: &MovementProfile) -> Result<f64> {
        let transformed;
        let p = if self.status == StatusTransform::Identity {
            p
        } else {
            transformed = p.transform(self.status)?;
            &transformed
        };
        self.evaluate_status(p)
    }

    fn evaluate_status(&self, p: &MovementProfile) -> Result<f64> {
        let a = self.alpha;
        match self.id {
            MeasureId::Elasticity => legacy::elasticity_mobility(p),
            MeasureId::Pearson => legacy::pearson_mobility(p),
            MeasureId::FO1 => legacy::fields_ok(p, FoVariant::Income),
            MeasureId::FO2 => legacy::fields_ok(p, FoVariant::Log),
            MeasureId::ShorrocksTheil => legacy::shorrocks(p, InequalityFunctional::Theil),
            MeasureId::ShorrocksGini => legacy::shorrocks(p, InequalityFunctional::RelativeGini),
            MeasureId::RG1 => legacy::ray_genicot(p, RgVariant::Absolute, a),
            MeasureId::RG2 => legacy::ray_genicot(p, RgVariant::Relative, a),
            MeasureId::BCD => legacy::barcena_canto(p, Direction::Down, a),
            MeasureId::BCU => legacy::barcena_canto(p, Direction::Up, a),
            MeasureId::A1 => class1::a1(p, a),
            MeasureId::S1 => class1::s1(p, a),
            MeasureId::T1 => Ok(class1::t1(p, a, self.variance)),
            MeasureId::Intermediate => class1::intermediate(p, self.c, a),
            MeasureId::A2 | MeasureId::S2 | MeasureId::T2 => {
                class2::gamma_measure(p, self.concept().expect("class-2 id"), self.weight_scheme()?)
            }
        }
    }
}

impl From<MeasureId> for MeasureSpec {
    fn from(id: MeasureId) -> Self {
        MeasureSpec::new(id)
    }
}

/// Rejects parameter combinations a measure can never accept.
pub fn validate_spec(spec: &MeasureSpec) -> Result<()> {
    if !spec.alpha.is_finite() {
        return Err(MobilityError::BadAlpha(spec.alpha));
    }
    match spec.id {
        MeasureId::RG1 | MeasureId::RG2 if spec.alpha <= 0.0 => Err(MobilityError::BadAlpha(spec.alpha)),
        MeasureId::BCD | MeasureId::BCU if spec.alpha < 0.0 => Err(MobilityError::BadAlpha(spec.alpha)),
        MeasureId::Intermediate if spec.alpha == 0.0 || spec.alpha == 1.0 => {
            Err(MobilityError::BadAlphaTilde(spec.alpha))
        }
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in MeasureId::ALL {
            assert_eq!(id.name().parse::<MeasureId>().unwrap(), id);
        }
        assert_eq!("shorrocks".parse::<MeasureId>().unwrap(), MeasureId::ShorrocksTheil);
        assert!("nope".parse::<MeasureId>().is_err());
    }

    #[test]
    fn evaluate_dispatches() {
        let p = MovementProfile::new(vec![10.0, 20.0, 40.0], vec![20.0, 40.0, 80.0]).unwrap();
        let a2 = MeasureSpec::new(MeasureId::A2).evaluate(&p).unwrap();
        assert!((a2 - 15.0).abs() < 1e-12);
        let beta = MeasureSpec::new(MeasureId::Elasticity)
            .with_status(StatusTransform::Log)
            .evaluate(&p)
            .unwrap();
        assert!(beta.abs() < 1e-12);
        assert_eq!(
            MeasureSpec::new(MeasureId::A1).with_alpha(1.0).evaluate(&p).unwrap(),
            f64::INFINITY
        );
        assert_eq!(
            MeasureSpec::new(MeasureId::S2).with_gamma(2),
            Err(MobilityError::EvenGamma(2))
        );
    }

    #[test]
    fn labels() {
        assert_eq!(MeasureSpec::new(MeasureId::S1).label(), "S1(alpha=0)");
        assert_eq!(MeasureSpec::new(MeasureId::T2).label(), "T2(gamma=1)");
        assert_eq!(
            MeasureSpec::new(MeasureId::Pearson)
                .with_status(StatusTransform::Log)
                .label(),
            "pearson[log]"
        );
    }
}
