//! Strong (but not very strong) interference: rate splitting at
//! transmitter 1, layered dirty-paper coding against `S1`, and successive
//! cancellation at receiver 1.
//!
//! Receiver 1 decodes `U1`, then `V`, then `U2`. Each step is a dirty-paper
//! stage against whatever is left of `S1`, so receiver 1 alone reaches any
//! point on the sum-capacity line `R1 + R2 = ½log(1 + P1 + a²P2)`. Whether
//! the point survives depends on receiver 2's decoding.

use serde::Serialize;

use crate::channel::names::*;
use crate::channel::{
    build_scene, check_split, classify, decompose, Channel, Direction, IcParams, RegimeKind, SceneVariant,
};
use crate::error::{Error, Result};
use crate::gaussian::{GaussianScene, LogBase, RandVec};
use crate::report::{Condition, ConditionReport, RegionBounds, SumRatePoint, VERDICT_TOL};
use crate::very_strong::{check_support, scene_with};

pub const U1: &str = "U1";
pub const U2: &str = "U2";
pub const V: &str = "V";

/// Default number of uniform `P1''` grid points on `[0, P1]`.
pub const DEFAULT_SPLIT_STEPS: usize = 201;

/// Auxiliaries `U1 = X1' + α1·S1`, `U2 = X1'' + α2·S1`, `V = a·X2 + β·S1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrongScheme {
    pub p1_prime: f64,
    pub p1_doubleprime: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
}

/// Per-layer rates at receiver 1 with full state cancellation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LayerRates {
    /// `½log(1 + P1'/(a²P2 + P1'' + 1))`
    pub u1: f64,
    /// `½log(1 + P1'')`
    pub u2: f64,
    /// `½log(1 + a²P2/(P1'' + 1))`
    pub v: f64,
}

impl LayerRates {
    pub fn sum(&self) -> f64 {
        self.u1 + self.u2 + self.v
    }

    pub fn rate_point(&self, p1_doubleprime: f64) -> SumRatePoint {
        SumRatePoint {
            r1: self.u1 + self.u2,
            r2: self.v,
            p1_doubleprime,
        }
    }
}

fn scheme_unchecked(params: &IcParams, p1_doubleprime: f64) -> Result<StrongScheme> {
    check_split(params, p1_doubleprime)?;
    let IcParams { a, p1, p2, .. } = *params;
    let total = p1 + a * a * p2 + 1.0;
    let p1_prime = p1 - p1_doubleprime;
    Ok(StrongScheme {
        p1_prime,
        p1_doubleprime,
        alpha1: p1_prime / total,
        alpha2: p1_doubleprime / total,
        beta: a * a * p2 / total,
    })
}

fn strong_channel(params: &IcParams) -> Channel {
    if params.b == 0.0 {
        Channel::Zic
    } else {
        Channel::Ic
    }
}

fn require(params: &IcParams, channel: Channel, expected: RegimeKind) -> Result<crate::channel::Regime> {
    let regime = classify(params, channel)?;
    if regime.kind != expected {
        return Err(Error::WrongRegime {
            expected: expected.as_str(),
            found: regime.kind,
        });
    }
    Ok(regime)
}

/// Scheme coefficients for the split `P1 = P1' + P1''`. Parameters with
/// `b = 0` are classified as a Z-IC, otherwise as an IC.
pub fn strong_scheme(params: &IcParams, p1_doubleprime: f64) -> Result<StrongScheme> {
    check_split(params, p1_doubleprime)?;
    let channel = strong_channel(params);
    let expected = match channel {
        Channel::Ic => RegimeKind::StrongNotVeryStrongIc,
        Channel::Zic => RegimeKind::StrongNotVeryStrongZic,
    };
    require(params, channel, expected)?;
    scheme_unchecked(params, p1_doubleprime)
}

pub fn layer_rates(params: &IcParams, p1_doubleprime: f64, base: LogBase) -> Result<LayerRates> {
    check_split(params, p1_doubleprime)?;
    let IcParams { a, p1, p2, .. } = *params;
    let ia = a * a * p2;
    let p1p = p1 - p1_doubleprime;
    Ok(LayerRates {
        u1: base.half_log(1.0 + p1p / (ia + p1_doubleprime + 1.0)),
        u2: base.half_log(1.0 + p1_doubleprime),
        v: base.half_log(1.0 + ia / (p1_doubleprime + 1.0)),
    })
}

/// The point on the sum-capacity line selected by `P1''`.
pub fn strong_ic_rate_point(params: &IcParams, p1_doubleprime: f64, base: LogBase) -> Result<SumRatePoint> {
    strong_scheme(params, p1_doubleprime)?;
    Ok(layer_rates(params, p1_doubleprime, base)?.rate_point(p1_doubleprime))
}

/// Strong-regime scene with `U1`, `U2`, `V` defined.
pub fn strong_scene(params: &IcParams, p1_doubleprime: f64) -> Result<(GaussianScene, StrongScheme)> {
    let variant = if params.b == 0.0 {
        SceneVariant::StrongZic { p1_doubleprime }
    } else {
        SceneVariant::StrongIc { p1_doubleprime }
    };
    let mut scene = build_scene(params, variant)?;
    let k = scheme_unchecked(params, p1_doubleprime)?;
    scene.define(U1, &[(X1_COMMON, 1.0), (S1, k.alpha1)])?;
    scene.define(U2, &[(X1_PRIVATE, 1.0), (S1, k.alpha2)])?;
    scene.define(V, &[(X2, params.a), (S1, k.beta)])?;
    Ok((scene, k))
}

/// Achievable per-layer rates at one receiver `y`:
/// `I(U1;Y) - I(U1;S1)`, `I(U2;V,Y|U1) - I(U2;S1|U1)` and
/// `I(V;U1,Y) - I(V;S1)`.
fn layer_mis(scene: &GaussianScene, y: &str, base: LogBase) -> Result<LayerRates> {
    Ok(LayerRates {
        u1: scene.mutual_info(&[U1], &[y], base)? - scene.mutual_info(&[U1], &[S1], base)?,
        u2: scene.cond_mutual_info(&[U2], &[V, y], &[U1], base)? - scene.cond_mutual_info(&[U2], &[S1], &[U1], base)?,
        v: scene.mutual_info(&[V], &[U1, y], base)? - scene.mutual_info(&[V], &[S1], base)?,
    })
}

fn y1_identities(scene: &GaussianScene, target: &LayerRates, base: LogBase) -> Result<Vec<Condition>> {
    let at_rx1 = layer_mis(scene, Y1, base)?;
    Ok(vec![
        Condition::at_least("u1_at_rx1", at_rx1.u1, target.u1),
        Condition::at_least("u2_at_rx1", at_rx1.u2, target.u2),
        Condition::at_least("v_at_rx1", at_rx1.v, target.v),
    ])
}

/// Evaluates the strong IC conditions without checking regime or ordering.
///
/// Each layer decoded by receiver 2 must support at least the rate it
/// carries at receiver 1:
///
/// ```text
/// I(U1;Y2) - I(U1;S1)              >= ½log(1 + P1'/(a²P2 + P1'' + 1))
/// I(U2;V,Y2|U1) - I(U2;S1|U1)      >= ½log(1 + P1'')
/// I(V;U1,Y2) - I(V;S1)             >= ½log(1 + a²P2/(P1'' + 1))
/// ```
pub fn strong_ic_evaluate(params: &IcParams, p1_doubleprime: f64, base: LogBase) -> Result<ConditionReport> {
    let (scene, _) = strong_scene(params, p1_doubleprime)?;
    let target = layer_rates(params, p1_doubleprime, base)?;
    let at_rx2 = layer_mis(&scene, Y2, base)?;
    let conditions = vec![
        Condition::at_least("u1_at_rx2", at_rx2.u1, target.u1),
        Condition::at_least("u2_at_rx2", at_rx2.u2, target.u2),
        Condition::at_least("v_at_rx2", at_rx2.v, target.v),
    ];
    let mut report = ConditionReport::new(conditions, y1_identities(&scene, &target, base)?);
    if report.achieves_capacity {
        report.rate_point = Some(target.rate_point(p1_doubleprime));
    }
    Ok(report)
}

/// Sum-capacity point check for the strong IC. Requires the ordering
/// `P1 + a²P2 + 1 <= b²P1 + P2 + 1`; swap the transmitter labels if it
/// fails.
pub fn strong_ic_check(params: &IcParams, p1_doubleprime: f64, base: LogBase) -> Result<ConditionReport> {
    check_split(params, p1_doubleprime)?;
    let regime = require(params, Channel::Ic, RegimeKind::StrongNotVeryStrongIc)?;
    if regime.needs_index_swap {
        let IcParams { a, b, p1, p2, .. } = *params;
        return Err(Error::OrderingViolated {
            lhs: p1 + a * a * p2 + 1.0,
            rhs: b * b * p1 + p2 + 1.0,
        });
    }
    strong_ic_evaluate(params, p1_doubleprime, base)
}

/// Closed-form Z-IC condition as `(lhs, rhs)`:
///
/// ```text
/// a²P2(P2 + c²Q1 + Q2' + 1) / ((ac - β)²Q1P2 + (a²P2 + β²Q1)(Q2' + 1))  >=  1 + a²P2/(P1'' + 1)
/// ```
///
/// with `β = a²P2/(P1 + a²P2 + 1)`. Equivalent to `I(V;U1,Y1) <= I(V;Y2)`.
/// The left side does not depend on `P1''` and the right side decreases in
/// it, so passing at one split implies passing at every larger one.
pub fn strong_zic_closed_form(params: &IcParams, p1_doubleprime: f64) -> (f64, f64) {
    let dec = decompose(params, Direction::S2OnS1);
    let (c, q2r) = (dec.slope, dec.residual_var);
    let IcParams { a, p1, p2, q1, .. } = *params;
    let ia = a * a * p2;
    let beta = ia / (p1 + ia + 1.0);
    let num = ia * (p2 + c * c * q1 + q2r + 1.0);
    let den = (a * c - beta).powi(2) * q1 * p2 + (ia + beta * beta * q1) * (q2r + 1.0);
    (num / den, 1.0 + ia / (p1_doubleprime + 1.0))
}

/// Evaluates the strong Z-IC condition without checking the regime. The
/// verdict follows the closed form; the MI gate and the receiver-1 layer
/// identities are cross checks.
pub fn strong_zic_evaluate(params: &IcParams, p1_doubleprime: f64, base: LogBase) -> Result<ConditionReport> {
    let (scene, _) = strong_scene(params, p1_doubleprime)?;
    let target = layer_rates(params, p1_doubleprime, base)?;
    let (lhs, rhs) = strong_zic_closed_form(params, p1_doubleprime);
    let conditions = vec![Condition::at_least("closed_form", lhs, rhs)];
    let mut cross_checks = vec![Condition::at_most(
        "mi_gate",
        scene.mutual_info(&[V], &[U1, Y1], base)?,
        scene.mutual_info(&[V], &[Y2], base)?,
    )];
    cross_checks.extend(y1_identities(&scene, &target, base)?);
    let mut report = ConditionReport::new(conditions, cross_checks);
    if report.achieves_capacity {
        report.rate_point = Some(target.rate_point(p1_doubleprime));
    }
    Ok(report)
}

/// Sum-capacity point check for the strong Z-IC (`1 <= a² < 1 + P1`).
pub fn strong_zic_check(params: &IcParams, p1_doubleprime: f64, base: LogBase) -> Result<ConditionReport> {
    check_split(params, p1_doubleprime)?;
    require(params, Channel::Zic, RegimeKind::StrongNotVeryStrongZic)?;
    strong_zic_evaluate(params, p1_doubleprime, base)
}

/// Certified part of the sum-capacity line, from the smallest passing grid
/// split up to `P1'' = P1` (point B).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    /// Smallest passing grid split; `None` when nothing passes.
    pub p1dp_min: Option<f64>,
    /// Grid spacing in `P1''`.
    pub resolution: f64,
    pub rates: Vec<SumRatePoint>,
    /// `a²P2` is numerically zero, so the line collapses to `R2 = 0` and
    /// nothing is certified.
    pub degenerate: bool,
}

impl Segment {
    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }
}

/// Uniform grid of `steps` points on `[0, hi]`.
pub fn split_grid(hi: f64, steps: usize) -> Vec<f64> {
    let n = steps.max(2);
    (0..n)
        .map(|i| if i + 1 == n { hi } else { hi * i as f64 / (n - 1) as f64 })
        .collect()
}

pub fn strong_zic_segment(params: &IcParams, grid_steps: usize, base: LogBase) -> Result<Segment> {
    require(params, Channel::Zic, RegimeKind::StrongNotVeryStrongZic)?;
    if grid_steps < 2 {
        return Err(Error::InvalidParams(format!(
            "grid needs at least 2 steps, got {grid_steps}"
        )));
    }
    let resolution = params.p1 / (grid_steps - 1) as f64;
    let ia = params.a * params.a * params.p2;
    if ia <= 1e-12 * (1.0 + params.p1) {
        return Ok(Segment {
            p1dp_min: None,
            resolution,
            rates: Vec::new(),
            degenerate: true,
        });
    }
    let mut rates = Vec::new();
    for x in split_grid(params.p1, grid_steps) {
        // Only the closed form decides, so skip scene construction for
        // failing splits.
        let (l, r) = strong_zic_closed_form(params, x);
        if l - r >= -VERDICT_TOL {
            let report = strong_zic_evaluate(params, x, base)?;
            if let Some(p) = report.rate_point {
                rates.push(p);
            }
        }
    }
    Ok(Segment {
        p1dp_min: rates.first().map(|p| p.p1_doubleprime),
        resolution,
        rates,
        degenerate: false,
    })
}

const AUX_SUPPORT: [&str; 3] = [X1_COMMON, X1_PRIVATE, S1];
const V_SUPPORT: [&str; 2] = [X2, S1];

fn nan_guard(x: f64, what: &str) -> Result<f64> {
    if x.is_nan() {
        Err(Error::Degenerate(vec![what.to_owned()]))
    } else {
        Ok(x)
    }
}

/// IC achievable region with rate splitting, for arbitrary linear Gaussian
/// auxiliaries in a strong scene:
///
/// ```text
/// R1 <= min{I(U1;Y1), I(U1;Y2)} + min{I(U2;V,Y1|U1), I(U2;V,Y2|U1)} - I(U1,U2;S1)
/// R2 <= min{I(V;U1,Y1), I(V;U1,Y2)} - I(V;S1)
/// ```
pub fn prop3_region(
    scene: &GaussianScene,
    u1: &RandVec,
    u2: &RandVec,
    v: &RandVec,
    base: LogBase,
) -> Result<RegionBounds> {
    let scene = scene_with(scene, &[u1, u2, v])?;
    check_support(&scene, u1, &AUX_SUPPORT)?;
    check_support(&scene, u2, &AUX_SUPPORT)?;
    check_support(&scene, v, &V_SUPPORT)?;
    let (a, b, c) = (u1.name.as_str(), u2.name.as_str(), v.name.as_str());
    let mi = |x: &[&str], y: &[&str]| scene.mutual_info(x, y, base);
    let cmi = |x: &[&str], y: &[&str], z: &[&str]| scene.cond_mutual_info(x, y, z, base);
    let r1 = mi(&[a], &[Y1])?.min(mi(&[a], &[Y2])?) + cmi(&[b], &[c, Y1], &[a])?.min(cmi(&[b], &[c, Y2], &[a])?)
        - mi(&[a, b], &[S1])?;
    let r2 = mi(&[c], &[a, Y1])?.min(mi(&[c], &[a, Y2])?) - mi(&[c], &[S1])?;
    Ok(RegionBounds::clamped(nan_guard(r1, a)?, nan_guard(r2, c)?))
}

/// Z-IC achievable region, valid when `I(V;U1,Y1) <= I(V;Y2)`:
///
/// ```text
/// R1 <= I(U1;Y1) + I(U2;V,Y1|U1) - I(S1;U1,U2)
/// R2 <= I(V;U1,Y1) - I(S1;V)
/// ```
pub fn prop4_region(
    scene: &GaussianScene,
    u1: &RandVec,
    u2: &RandVec,
    v: &RandVec,
    base: LogBase,
) -> Result<RegionBounds> {
    let scene = scene_with(scene, &[u1, u2, v])?;
    check_support(&scene, u1, &AUX_SUPPORT)?;
    check_support(&scene, u2, &AUX_SUPPORT)?;
    check_support(&scene, v, &V_SUPPORT)?;
    let (a, b, c) = (u1.name.as_str(), u2.name.as_str(), v.name.as_str());
    let lhs = scene.mutual_info(&[c], &[a, Y1], base)?;
    let rhs = scene.mutual_info(&[c], &[Y2], base)?;
    if rhs - lhs < -VERDICT_TOL {
        return Err(Error::GateViolated {
            lhs,
            rhs,
            slack: rhs - lhs,
        });
    }
    let r1 = scene.mutual_info(&[a], &[Y1], base)? + scene.cond_mutual_info(&[b], &[c, Y1], &[a], base)?
        - scene.mutual_info(&[S1], &[a, b], base)?;
    let r2 = lhs - scene.mutual_info(&[S1], &[c], base)?;
    Ok(RegionBounds::clamped(nan_guard(r1, a)?, nan_guard(r2, c)?))
}
