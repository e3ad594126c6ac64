//! Established mobility indices used for comparison: regression and
//! correlation based, mean absolute change, inequality-reduction, and
//! directional indices.

use serde::{Deserialize, Serialize};

use crate::error::{MobilityError, Result};
use crate::inequality::{gini_kernel, theil, GiniVariant};
use crate::profile::MovementProfile;
use crate::stats::mean;

/// Income or log-income differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FoVariant {
    #[default]
    Income,
    Log,
}

/// Inequality index plugged into the inequality-reduction index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum InequalityFunctional {
    #[default]
    Theil,
    RelativeGini,
}

impl InequalityFunctional {
    fn eval(self, xs: &[f64]) -> Result<f64> {
        match self {
            InequalityFunctional::Theil => theil(xs),
            InequalityFunctional::RelativeGini => gini_kernel(xs, GiniVariant::Relative),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RgVariant {
    #[default]
    Absolute,
    Relative,
}

/// Which movers a directional index counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Down,
    Up,
}

fn centred_moments(p: &MovementProfile) -> (f64, f64, f64) {
    let (mu, mv) = (mean(p.u()), mean(p.v()));
    let n = p.len() as f64;
    let (mut suu, mut svv, mut suv) = (0.0, 0.0, 0.0);
    for (u, v) in p.histories() {
        let (a, b) = (u - mu, v - mv);
        suu += a * a;
        svv += b * b;
        suv += a * b;
    }
    (suu / n, svv / n, suv / n)
}

/// One minus the OLS slope of destination on origin status.
pub fn elasticity_mobility(p: &MovementProfile) -> Result<f64> {
    let (vu, _, c) = centred_moments(p);
    if vu == 0.0 {
        return Err(MobilityError::DegenerateOrigin);
    }
    Ok(1.0 - c / vu)
}

/// One minus the correlation of origin and destination status.
pub fn pearson_mobility(p: &MovementProfile) -> Result<f64> {
    let (vu, vv, c) = centred_moments(p);
    if vu == 0.0 || vv == 0.0 {
        return Err(MobilityError::DegenerateVariance);
    }
    Ok(1.0 - c / (vu * vv).sqrt())
}

/// Mean absolute change in income or log-income.
pub fn fields_ok(p: &MovementProfile, variant: FoVariant) -> Result<f64> {
    let mut s = 0.0;
    for (i, (u, v)) in p.histories().enumerate() {
        s += match variant {
            FoVariant::Income => (v - u).abs(),
            FoVariant::Log => {
                if u <= 0.0 {
                    return Err(MobilityError::NonPositiveForLog { index: i, value: u });
                }
                if v <= 0.0 {
                    return Err(MobilityError::NonPositiveForLog { index: i, value: v });
                }
                (v.ln() - u.ln()).abs()
            }
        };
    }
    Ok(s / p.len() as f64)
}

/// Share of inequality removed by pooling the two periods' incomes.
pub fn shorrocks(p: &MovementProfile, ineq: InequalityFunctional) -> Result<f64> {
    let (y0, y1) = (p.u(), p.v());
    let pooled: Vec<f64> = p.histories().map(|(a, b)| a + b).collect();
    let (m0, m1) = (mean(y0), mean(y1));
    let m01 = m0 + m1;
    let denom = m0 / m01 * ineq.eval(y0)? + m1 / m01 * ineq.eval(y1)?;
    if denom == 0.0 {
        return Err(MobilityError::ZeroDenominator);
    }
    Ok(1.0 - ineq.eval(&pooled)? / denom)
}

fn check_incomes(xs: &[f64]) -> Result<()> {
    match xs.iter().position(|&x| x <= 0.0) {
        Some(index) => Err(MobilityError::NonPositiveIncome {
            index,
            value: xs[index],
        }),
        None => Ok(()),
    }
}

/// Upward-mobility indices built on power means with negative exponent.
pub fn ray_genicot(p: &MovementProfile, variant: RgVariant, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(MobilityError::BadAlpha(alpha));
    }
    check_incomes(p.u())?;
    check_incomes(p.v())?;
    let s0: f64 = p.u().iter().map(|y| y.powf(-alpha)).sum();
    let s1: f64 = p.v().iter().map(|y| y.powf(-alpha)).sum();
    let rg1 = -(s1 / s0).ln() / alpha;
    Ok(match variant {
        RgVariant::Absolute => rg1,
        RgVariant::Relative => {
            let (t0, t1): (f64, f64) = (p.u().iter().sum(), p.v().iter().sum());
            rg1 + (t0 / t1).ln()
        }
    })
}

/// Directional index: `(1/n) Σ (|vᵢ - uᵢ| / uᵢ)^α` over strict movers in the
/// chosen direction. `alpha = 0` gives the incidence of such movers.
pub fn barcena_canto(p: &MovementProfile, direction: Direction, alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(MobilityError::BadAlpha(alpha));
    }
    let mut s = 0.0;
    for (index, (u, v)) in p.histories().enumerate() {
        let moved = match direction {
            Direction::Down => v < u,
            Direction::Up => v > u,
        };
        if !moved {
            continue;
        }
        if u <= 0.0 {
            return Err(MobilityError::NonPositiveOrigin { index });
        }
        s += ((v - u).abs() / u).powf(alpha);
    }
    Ok(s / p.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::StatusTransform;

    fn prof(u: &[f64], v: &[f64]) -> MovementProfile {
        MovementProfile::new(u.to_vec(), v.to_vec()).unwrap()
    }

    const U: [f64; 3] = [10.0, 20.0, 40.0];

    #[test]
    fn regression_indices_on_log_status_examples() {
        // statuses given directly as log-income
        let case1 = prof(&[1.0, 2.0, 3.0], &[3.0, 2.0, 3.0]);
        assert!((elasticity_mobility(&case1).unwrap() - 1.0).abs() < 1e-12);
        assert!((pearson_mobility(&case1).unwrap() - 1.0).abs() < 1e-12);
        let case2 = prof(&[1.0, 2.0, 3.0], &[3.0, 1.0, 5.0]);
        assert!(elasticity_mobility(&case2).unwrap().abs() < 1e-12);
        assert!((pearson_mobility(&case2).unwrap() - 0.5).abs() < 1e-12);
        let swap = prof(&[1.0, 2.0, 3.0], &[2.0, 0.0, 4.0]);
        assert!(elasticity_mobility(&swap).unwrap().abs() < 1e-12);
        let affine = prof(&[1.0, 2.0, 3.0], &[0.0, 2.0, 4.0]);
        assert!(pearson_mobility(&affine).unwrap().abs() < 1e-12);
    }

    #[test]
    fn degenerate_moments() {
        let flat = prof(&[2.0, 2.0], &[1.0, 3.0]);
        assert_eq!(elasticity_mobility(&flat), Err(MobilityError::DegenerateOrigin));
        assert_eq!(pearson_mobility(&flat), Err(MobilityError::DegenerateVariance));
    }

    #[test]
    fn fields_ok_examples() {
        let p = prof(&U, &[20.0, 40.0, 80.0]);
        assert!((fields_ok(&p, FoVariant::Income).unwrap() - 70.0 / 3.0).abs() < 1e-12);
        assert_eq!(fields_ok(&prof(&U, &U), FoVariant::Income).unwrap(), 0.0);
        let g = prof(&U, &[10.0, 40.0, 160.0]);
        assert!((fields_ok(&g, FoVariant::Log).unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn shorrocks_examples() {
        let a = prof(&U, &[20.0, 40.0, 80.0]);
        assert!(shorrocks(&a, InequalityFunctional::Theil).unwrap().abs() < 1e-12);
        let c = prof(&U, &[20.0, 40.0, 10.0]);
        // pooled (30,60,50) has relative Gini 1/7; each period has 2/7
        assert!((shorrocks(&c, InequalityFunctional::RelativeGini).unwrap() - 0.5).abs() < 1e-12);
        let b = prof(&U, &[15.0, 25.0, 45.0]);
        assert!(shorrocks(&b, InequalityFunctional::RelativeGini).unwrap().abs() < 1e-12);
        let eq = prof(&[5.0, 5.0], &[5.0, 5.0]);
        assert_eq!(
            shorrocks(&eq, InequalityFunctional::Theil),
            Err(MobilityError::ZeroDenominator)
        );
    }

    #[test]
    fn ray_genicot_examples() {
        let a = prof(&U, &[20.0, 40.0, 80.0]);
        assert!((ray_genicot(&a, RgVariant::Absolute, 1.0).unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!(ray_genicot(&a, RgVariant::Relative, 1.0).unwrap().abs() < 1e-12);
        let c = prof(&U, &[20.0, 40.0, 10.0]);
        assert!(ray_genicot(&c, RgVariant::Absolute, 1.0).unwrap().abs() < 1e-12);
        let f = prof(&U, &[10.0, 30.0, 40.0]);
        assert!((ray_genicot(&f, RgVariant::Absolute, 1.0).unwrap() - 0.100).abs() < 5e-4);
        assert_eq!(
            ray_genicot(&a, RgVariant::Absolute, 0.0),
            Err(MobilityError::BadAlpha(0.0))
        );
        let neg = prof(&[1.0, -1.0], &[1.0, 1.0]);
        assert!(matches!(
            ray_genicot(&neg, RgVariant::Absolute, 1.0),
            Err(MobilityError::NonPositiveIncome { index: 1, .. })
        ));
    }

    #[test]
    fn barcena_canto_examples() {
        let a = prof(&U, &[20.0, 40.0, 80.0]);
        assert!((barcena_canto(&a, Direction::Up, 1.0).unwrap() - 1.0).abs() < 1e-12);
        let c = prof(&U, &[20.0, 40.0, 10.0]);
        assert!((barcena_canto(&c, Direction::Down, 1.0).unwrap() - 0.25).abs() < 1e-12);
        assert!((barcena_canto(&c, Direction::Down, 0.0).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let z = prof(&[0.0, 1.0], &[1.0, 1.0]);
        assert_eq!(
            barcena_canto(&z, Direction::Up, 1.0),
            Err(MobilityError::NonPositiveOrigin { index: 0 })
        );
    }

    #[test]
    fn log_transform_feeds_regression_indices() {
        let p = prof(&U, &[20.0, 40.0, 80.0]).transform(StatusTransform::Log).unwrap();
        assert!(elasticity_mobility(&p).unwrap().abs() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn profile() -> impl Strategy<Value = MovementProfile> {
            (3usize..10).prop_flat_map(|n| {
                (
                    prop::collection::vec(1.0f64..100.0, n),
                    prop::collection::vec(1.0f64..100.0, n),
                )
                    .prop_map(|(u, v)| MovementProfile::new(u, v).unwrap())
            })
        }

        proptest! {
            #[test]
            fn pearson_zero_on_affine_destination(u in prop::collection::vec(1.0f64..100.0, 3..10),
                                                  a in 0.1f64..5.0, b in -20.0f64..20.0) {
                prop_assume!(u.iter().any(|x| (x - u[0]).abs() > 1e-3));
                let v = u.iter().map(|x| a * x + b).collect();
                let p = MovementProfile::new(u, v).unwrap();
                prop_assert!(pearson_mobility(&p).unwrap().abs() < 1e-12);
            }

            #[test]
            fn elasticity_zero_on_counterexample_family(x01 in -10.0f64..10.0, k in 0.1f64..5.0,
                                                        x11 in -10.0f64..10.0, x12 in -10.0f64..10.0) {
                let p = MovementProfile::new(
                    vec![x01, x01 + k, x01 + 2.0 * k],
                    vec![x11, x12, x11 + 2.0 * k],
                ).unwrap();
                prop_assert!(elasticity_mobility(&p).unwrap().abs() < 1e-10);
            }

            #[test]
            fn rg_relative_scale_invariant(p in profile(), l0 in 0.1f64..10.0, l1 in 0.1f64..10.0,
                                           alpha in 0.2f64..3.0) {
                let q = MovementProfile::new(
                    p.u().iter().map(|x| x * l0).collect(),
                    p.v().iter().map(|x| x * l1).collect(),
                ).unwrap();
                let a = ray_genicot(&p, RgVariant::Relative, alpha).unwrap();
                let b = ray_genicot(&q, RgVariant::Relative, alpha).unwrap();
                prop_assert!((a - b).abs() < 1e-10 * (1.0 + a.abs()));
            }
        }
    }
}
