//! Numeric audit of mobility measures against movement and invariance
//! principles.
//!
//! Each check draws seeded random profiles (n in 3..=10, status uniform on
//! [1, 100]), perturbs them, and compares measure values. Checks are
//! value-level: invariance means the measure value is unchanged, not merely
//! the induced ordering. Every failure carries a [`Witness`] that can be
//! re-evaluated independently.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::measure::{MeasureId, MeasureSpec, Normalisation};
use crate::profile::MovementProfile;
use crate::stats::mean;
use crate::tables;

/// Required gain for a "strict increase": `STRICT_MARGIN · (1 + |value|)`.
pub const STRICT_MARGIN: f64 = 1e-9;
/// Allowed relative drift for "unchanged": `INVARIANCE_TOL · (1 + |value|)`.
pub const INVARIANCE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Property {
    Monotonicity,
    Monotonicity2,
    ScaleIndependence,
    ProfileScale,
    TranslationIndependence,
    ProfileTranslation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    /// Holds for upward movement only or downward movement only.
    Weak,
    Fail,
}

/// What the probe expected of the two profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    /// `first` must measure strictly above `second`.
    Increase,
    /// `first` and `second` must measure the same.
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileData {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl ProfileData {
    fn of(p: &MovementProfile) -> Self {
        ProfileData {
            u: p.u().to_vec(),
            v: p.v().to_vec(),
        }
    }

    pub fn to_profile(&self) -> crate::Result<MovementProfile> {
        MovementProfile::new(self.u.clone(), self.v.clone())
    }
}

/// A concrete pair of profiles on which a property fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Which perturbation produced the pair, e.g. `U`, `D`, `transfer`.
    pub probe: String,
    pub expect: Expectation,
    pub first: ProfileData,
    pub second: ProfileData,
    pub first_value: f64,
    pub second_value: f64,
}

fn violates(expect: Expectation, a: f64, b: f64) -> bool {
    match expect {
        Expectation::Increase => !(a - b > STRICT_MARGIN * (1.0 + a.abs())),
        Expectation::Equal => !((a - b).abs() <= INVARIANCE_TOL * (1.0 + a.abs())),
    }
}

impl Witness {
    /// Recomputes both values and confirms the property still fails.
    pub fn reverify(&self, spec: &MeasureSpec) -> bool {
        let eval = |d: &ProfileData| d.to_profile().and_then(|p| spec.evaluate(&p));
        match (eval(&self.first), eval(&self.second)) {
            (Ok(a), Ok(b)) => violates(self.expect, a, b),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyVerdict {
    pub property: Property,
    pub verdict: Verdict,
    /// Probe directions that failed (`U`, `D`) for monotonicity.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub failed_directions: Vec<String>,
    pub witness: Option<Witness>,
    pub probes: usize,
    /// Probes where the measure was undefined.
    pub skipped: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InvarianceMode {
    /// Separate factors for the two periods.
    Independent,
    /// One common factor for both periods.
    Profile,
}

/// Outcome of one probe.
enum Probe {
    Held,
    Skipped,
    Failed(Witness),
}

fn run_probe(
    spec: &MeasureSpec,
    probe: &str,
    expect: Expectation,
    first: &MovementProfile,
    second: &MovementProfile,
) -> Probe {
    match (spec.evaluate(first), spec.evaluate(second)) {
        (Ok(a), Ok(b)) if a.is_finite() && b.is_finite() => {
            if violates(expect, a, b) {
                Probe::Failed(Witness {
                    probe: probe.to_string(),
                    expect,
                    first: ProfileData::of(first),
                    second: ProfileData::of(second),
                    first_value: a,
                    second_value: b,
                })
            } else {
                Probe::Held
            }
        }
        _ => Probe::Skipped,
    }
}

/// Seeded generator for trial `t` of probe family `tag`.
fn trial_rng(seed: u64, tag: u64, t: usize) -> ChaCha8Rng {
    let mix = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(tag.wrapping_mul(0xD1B5_4A32_D192_ED03))
        .wrapping_add(t as u64);
    ChaCha8Rng::seed_from_u64(mix)
}

/// Random profile with n in 3..=10 and status uniform on [1, 100].
pub fn random_profile<R: Rng>(rng: &mut R) -> MovementProfile {
    let n = rng.gen_range(3..=10);
    let u = (0..n).map(|_| rng.gen_range(1.0..=100.0)).collect();
    let v = (0..n).map(|_| rng.gen_range(1.0..=100.0)).collect();
    MovementProfile::new(u, v).expect("finite, n >= 3")
}

fn with_v(p: &MovementProfile, v: Vec<f64>) -> MovementProfile {
    MovementProfile::new(p.u().to_vec(), v).expect("finite")
}

struct Tally {
    probes: usize,
    skipped: usize,
    witness: Option<Witness>,
}

/// Keeps the first failure in trial order, so results do not depend on
/// thread scheduling.
fn tally(outcomes: Vec<Probe>) -> Tally {
    let mut t = Tally {
        probes: 0,
        skipped: 0,
        witness: None,
    };
    for o in outcomes {
        match o {
            Probe::Held => t.probes += 1,
            Probe::Skipped => t.skipped += 1,
            Probe::Failed(w) => {
                t.probes += 1;
                if t.witness.is_none() {
                    t.witness = Some(w);
                }
            }
        }
    }
    t
}

/// Fixed movement pairs tried before the random ones: the pair on which a
/// regression-slope index cannot see a reduced downward move, and every
/// single-history undo of the built-in scenarios.
fn fixed_movement_pairs() -> Vec<(&'static str, MovementProfile, MovementProfile)> {
    let mut out = Vec::new();
    let x0 = vec![1.0, 2.0, 3.0];
    out.push((
        "D",
        MovementProfile::new(x0.clone(), vec![2.0, 0.0, 4.0]).expect("valid"),
        MovementProfile::new(x0, vec![2.0, 1.0, 4.0]).expect("valid"),
    ));
    for (_, v) in tables::SCENARIOS {
        let p = MovementProfile::new(tables::BASE.to_vec(), v.to_vec()).expect("valid");
        for i in 0..v.len() {
            let (ui, vi) = (tables::BASE[i], v[i]);
            if ui == vi {
                continue;
            }
            let mut undone = v.to_vec();
            undone[i] = ui;
            out.push((if vi > ui { "U" } else { "D" }, p.clone(), with_v(&p, undone)));
        }
    }
    out
}

/// Moving one destination further from its origin, in either direction, must
/// strictly increase mobility.
pub fn check_monotonicity(spec: &MeasureSpec, trials: usize, seed: u64) -> PropertyVerdict {
    let fixed: Vec<Probe> = fixed_movement_pairs()
        .iter()
        .map(|(d, a, b)| run_probe(spec, d, Expectation::Increase, a, b))
        .collect();
    let (fixed_up, fixed_down): (Vec<_>, Vec<_>) = fixed_movement_pairs()
        .into_iter()
        .map(|(d, _, _)| d)
        .zip(fixed)
        .partition(|(d, _)| *d == "U");

    let random = |up: bool| -> Vec<Probe> {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(seed, if up { 1 } else { 2 }, t);
                let p = random_profile(&mut rng);
                let i = rng.gen_range(0..p.len());
                let ui = p.u()[i];
                let (far, near) = if up {
                    let far = ui + rng.gen_range(1.0..50.0);
                    (far, ui + (far - ui) * rng.gen_range(0.0..1.0))
                } else {
                    let far = ui * rng.gen_range(0.05..0.95);
                    (far, far + (ui - far) * rng.gen_range(0.0..=1.0))
                };
                let mut v1 = p.v().to_vec();
                v1[i] = far;
                let mut v0 = v1.clone();
                v0[i] = near;
                run_probe(
                    spec,
                    if up { "U" } else { "D" },
                    Expectation::Increase,
                    &with_v(&p, v1),
                    &with_v(&p, v0),
                )
            })
            .collect()
    };

    let mut up: Vec<Probe> = fixed_up.into_iter().map(|(_, o)| o).collect();
    up.extend(random(true));
    let mut down: Vec<Probe> = fixed_down.into_iter().map(|(_, o)| o).collect();
    down.extend(random(false));
    let (tu, td) = (tally(up), tally(down));

    let mut failed = Vec::new();
    if tu.witness.is_some() {
        failed.push("U".to_string());
    }
    if td.witness.is_some() {
        failed.push("D".to_string());
    }
    let verdict = match failed.len() {
        0 => Verdict::Pass,
        1 => Verdict::Weak,
        _ => Verdict::Fail,
    };
    PropertyVerdict {
        property: Property::Monotonicity,
        verdict,
        failed_directions: failed,
        witness: td.witness.or(tu.witness),
        probes: tu.probes + td.probes,
        skipped: tu.skipped + td.skipped,
    }
}

/// Normalised distance used to classify upward and downward movers.
fn normalised_distance(p: &MovementProfile, norm: Normalisation) -> Vec<f64> {
    let (mu, mv) = (mean(p.u()), mean(p.v()));
    p.histories()
        .map(|(u, v)| match norm {
            Normalisation::Raw => v - u,
            Normalisation::Scale => v / mv - u / mu,
            Normalisation::Translation => (v - mv) - (u - mu),
        })
        .collect()
}

/// A mean-preserving pair of moves, one upward mover pushed further up and
/// one downward mover pushed further down, must strictly increase mobility.
/// Up and down are judged in the measure's own normalised status.
pub fn check_monotonicity2(spec: &MeasureSpec, trials: usize, seed: u64) -> PropertyVerdict {
    let norm = spec.id.normalisation();
    let outcomes: Vec<Probe> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, 3, t);
            let p = random_profile(&mut rng);
            let d = normalised_distance(&p, norm);
            let ups: Vec<usize> = (0..d.len()).filter(|&i| d[i] >= 0.0).collect();
            let downs: Vec<usize> = (0..d.len()).filter(|&i| d[i] <= 0.0).collect();
            if ups.is_empty() || downs.is_empty() {
                return Probe::Skipped;
            }
            let i = ups[rng.gen_range(0..ups.len())];
            let others: Vec<usize> = downs.into_iter().filter(|&j| j != i).collect();
            if others.is_empty() {
                return Probe::Skipped;
            }
            let j = others[rng.gen_range(0..others.len())];
            let delta = rng.gen_range(0.0..0.9) * p.v()[j];
            let mut v = p.v().to_vec();
            v[i] += delta;
            v[j] -= delta;
            run_probe(spec, "transfer", Expectation::Increase, &with_v(&p, v), &p)
        })
        .collect();
    let t = tally(outcomes);
    PropertyVerdict {
        property: Property::Monotonicity2,
        verdict: if t.witness.is_some() {
            Verdict::Fail
        } else {
            Verdict::Pass
        },
        failed_directions: Vec::new(),
        witness: t.witness,
        probes: t.probes,
        skipped: t.skipped,
    }
}

fn check_invariance(
    spec: &MeasureSpec,
    property: Property,
    trials: usize,
    seed: u64,
    tag: u64,
    transform: impl Fn(&mut ChaCha8Rng, &MovementProfile) -> MovementProfile + Sync,
) -> PropertyVerdict {
    let outcomes: Vec<Probe> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, tag, t);
            let p = random_profile(&mut rng);
            let q = transform(&mut rng, &p);
            run_probe(spec, "invariance", Expectation::Equal, &p, &q)
        })
        .collect();
    let t = tally(outcomes);
    PropertyVerdict {
        property,
        verdict: if t.witness.is_some() {
            Verdict::Fail
        } else {
            Verdict::Pass
        },
        failed_directions: Vec::new(),
        witness: t.witness,
        probes: t.probes,
        skipped: t.skipped,
    }
}

fn map_profile(p: &MovementProfile, fu: impl Fn(f64) -> f64, fv: impl Fn(f64) -> f64) -> MovementProfile {
    MovementProfile::new(
        p.u().iter().map(|&x| fu(x)).collect(),
        p.v().iter().map(|&x| fv(x)).collect(),
    )
    .expect("finite")
}

/// Value invariance under rescaling both periods, separately or jointly.
pub fn check_scale(spec: &MeasureSpec, mode: InvarianceMode, trials: usize, seed: u64) -> PropertyVerdict {
    match mode {
        InvarianceMode::Independent => {
            check_invariance(spec, Property::ScaleIndependence, trials, seed, 4, |rng, p| {
                let (a, b) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
                map_profile(p, |x| a * x, |x| b * x)
            })
        }
        InvarianceMode::Profile => check_invariance(spec, Property::ProfileScale, trials, seed, 5, |rng, p| {
            let a = rng.gen_range(0.1..10.0);
            map_profile(p, |x| a * x, |x| a * x)
        }),
    }
}

/// Value invariance under shifting both periods, separately or jointly.
/// Shifts stay above -0.5 so status remains positive.
pub fn check_translation(spec: &MeasureSpec, mode: InvarianceMode, trials: usize, seed: u64) -> PropertyVerdict {
    match mode {
        InvarianceMode::Independent => {
            check_invariance(spec, Property::TranslationIndependence, trials, seed, 6, |rng, p| {
                let (a, b) = (rng.gen_range(-0.5..30.0), rng.gen_range(-0.5..30.0));
                map_profile(p, |x| x + a, |x| x + b)
            })
        }
        InvarianceMode::Profile => check_invariance(spec, Property::ProfileTranslation, trials, seed, 7, |rng, p| {
            let a = rng.gen_range(-0.5..30.0);
            map_profile(p, |x| x + a, |x| x + a)
        }),
    }
}

/// Check mark, parenthetical (joint-transformation only), or blank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cell {
    Full,
    Partial,
    Blank,
}

/// One row of the property matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyRow {
    pub measure: String,
    pub axiom2: bool,
    pub axiom2_prime: bool,
    pub scale: Cell,
    pub translation: Cell,
    pub up_down: bool,
    pub exchange: bool,
    pub directional: bool,
}

impl PropertyRow {
    /// Names of the columns where `self` and `other` disagree.
    pub fn differences(&self, other: &PropertyRow) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.axiom2 != other.axiom2 {
            out.push("axiom 2");
        }
        if self.axiom2_prime != other.axiom2_prime {
            out.push("axiom 2'");
        }
        if self.scale != other.scale {
            out.push("scale");
        }
        if self.translation != other.translation {
            out.push("translation");
        }
        if self.up_down != other.up_down {
            out.push("up/down");
        }
        if self.exchange != other.exchange {
            out.push("exchange");
        }
        if self.directional != other.directional {
            out.push("directional");
        }
        out
    }

    /// Tab-separated rendering with check marks and parentheticals.
    pub fn render(&self) -> String {
        let mark = |b: bool| if b { "✓" } else { "" };
        let cell = |c: Cell, weak: &'static str| match c {
            Cell::Full => "✓",
            Cell::Partial => weak,
            Cell::Blank => "",
        };
        [
            self.measure.as_str(),
            mark(self.axiom2),
            mark(self.axiom2_prime),
            cell(self.scale, "(PSI)"),
            cell(self.translation, "(PTI)"),
            mark(self.up_down),
            mark(self.exchange),
            mark(self.directional),
        ]
        .join("\t")
    }
}

/// All property verdicts for one measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub measure: String,
    pub spec: MeasureSpec,
    pub monotonicity: PropertyVerdict,
    pub monotonicity2: PropertyVerdict,
    pub scale: PropertyVerdict,
    pub scale_profile: PropertyVerdict,
    pub translation: PropertyVerdict,
    pub translation_profile: PropertyVerdict,
    pub up_down: bool,
    pub exchange: bool,
    pub directional: bool,
}

fn invariance_cell(independent: &PropertyVerdict, joint: &PropertyVerdict) -> Cell {
    if independent.verdict == Verdict::Pass {
        Cell::Full
    } else if joint.verdict == Verdict::Pass {
        Cell::Partial
    } else {
        Cell::Blank
    }
}

impl MeasureReport {
    pub fn verdicts(&self) -> [&PropertyVerdict; 6] {
        [
            &self.monotonicity,
            &self.monotonicity2,
            &self.scale,
            &self.scale_profile,
            &self.translation,
            &self.translation_profile,
        ]
    }

    /// Collapses the verdicts to matrix cells. Monotonicity counts when it
    /// holds in at least one direction; the transfer version is only marked
    /// when plain monotonicity is not, since the former implies the latter.
    pub fn row(&self) -> PropertyRow {
        let axiom2 = self.monotonicity.verdict != Verdict::Fail;
        PropertyRow {
            measure: self.measure.clone(),
            axiom2,
            axiom2_prime: !axiom2 && self.monotonicity2.verdict == Verdict::Pass,
            scale: invariance_cell(&self.scale, &self.scale_profile),
            translation: invariance_cell(&self.translation, &self.translation_profile),
            up_down: self.up_down,
            exchange: self.exchange,
            directional: self.directional,
        }
    }
}

/// Runs every check on one measure.
pub fn measure_report(label: &str, spec: &MeasureSpec, trials: usize, seed: u64) -> MeasureReport {
    MeasureReport {
        measure: label.to_string(),
        spec: *spec,
        monotonicity: check_monotonicity(spec, trials, seed),
        monotonicity2: check_monotonicity2(spec, trials, seed),
        scale: check_scale(spec, InvarianceMode::Independent, trials, seed),
        scale_profile: check_scale(spec, InvarianceMode::Profile, trials, seed),
        translation: check_translation(spec, InvarianceMode::Independent, trials, seed),
        translation_profile: check_translation(spec, InvarianceMode::Profile, trials, seed),
        up_down: spec.id.up_down_decomposable(),
        exchange: spec.id.exchange_decomposable(),
        directional: spec.id.directional(),
    }
}

/// Property matrix over a roster, in roster order.
pub fn property_report(specs: &[(String, MeasureSpec)], trials: usize, seed: u64) -> Vec<MeasureReport> {
    specs
        .par_iter()
        .map(|(label, spec)| measure_report(label, spec, trials, seed))
        .collect()
}

/// The sixteen audited measures: sensitivity 0 for the power-function
/// families, linear weights for the rank-weighted ones, sensitivity 1 for the
/// power-mean and directional indices, all on raw status.
pub fn default_roster() -> Vec<(String, MeasureSpec)> {
    use MeasureId::*;
    let g1 = |id| MeasureSpec::new(id).with_gamma(1).expect("valid");
    let a = |id, al: f64| MeasureSpec::new(id).with_alpha(al);
    vec![
        ("A1", a(A1, 0.0)),
        ("A2", g1(A2)),
        ("S1", a(S1, 0.0)),
        ("S2", g1(S2)),
        ("T1", a(T1, 0.0)),
        ("T2", g1(T2)),
        ("1-beta", MeasureSpec::new(Elasticity)),
        ("1-rho", MeasureSpec::new(Pearson)),
        ("FO1", MeasureSpec::new(FO1)),
        ("FO2", MeasureSpec::new(FO2)),
        ("S_Theil", MeasureSpec::new(ShorrocksTheil)),
        ("S_Gini", MeasureSpec::new(ShorrocksGini)),
        ("RG1", a(RG1, 1.0)),
        ("RG2", a(RG2, 1.0)),
        ("BC_D", a(BCD, 1.0)),
        ("BC_U", a(BCU, 1.0)),
    ]
    .into_iter()
    .map(|(l, s)| (l.to_string(), s))
    .collect()
}
