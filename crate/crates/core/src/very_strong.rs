//! Very strong interference: cooperative dirty-paper coding against both
//! states so that each receiver reaches its interference-free,
//! state-free point-to-point capacity.
//!
//! Receiver 1 decodes `V` first, subtracts `a·V`, then decodes `U`;
//! receiver 2 does the same with the roles swapped (IC) or decodes only `V`
//! (Z-IC). The auxiliaries are linear in the input and the state basis
//! `S1'`, `S2` of the decomposition `S1 = d·S2 + S1'`.

use serde::Serialize;

use crate::channel::names::*;
use crate::channel::{
    build_scene, classify, decompose, Channel, Direction, IcParams, RegimeKind, SceneVariant, StateDecomp,
};
use crate::error::{Error, Result};
use crate::gaussian::{GaussianScene, LogBase, RandVec};
use crate::report::{Condition, ConditionReport, RegionBounds};

pub const U: &str = "U";
pub const V: &str = "V";

/// Largest allowed disagreement between entropy-form and MI-form values of
/// the same condition.
const FORM_AGREEMENT_TOL: f64 = 1e-9;

/// Dirty-paper weights for the very strong IC:
/// `U = X1 + α1·S1' + α2·S2`, `V = X2 + β1·S1' + β2·S2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VsIcCoefficients {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

/// Dirty-paper weights for the very strong Z-IC:
/// `U = X1 + α1·S2 + α2·S1'`, `V = X2 + β·S2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VsZicCoefficients {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
}

fn require_s1_on_s2(decomp: &StateDecomp) -> Result<f64> {
    match decomp.direction {
        Direction::S1OnS2 => Ok(decomp.slope),
        Direction::S2OnS1 => Err(Error::InvalidParams(
            "very strong coefficients use the S1 = d·S2 + S1' decomposition".into(),
        )),
    }
}

/// Solves the joint cancellation system: after receiver 1 removes `a·V` and
/// receiver 2 removes `b·U`, each auxiliary must be the single-user
/// dirty-paper codeword `X + P/(P+1)·(remaining state)`.
pub fn vs_ic_coefficients(params: &IcParams, decomp: &StateDecomp) -> Result<VsIcCoefficients> {
    let d = require_s1_on_s2(decomp)?;
    let IcParams { a, b, p1, p2, .. } = *params;
    let den = (p1 + 1.0) * (p2 + 1.0) - a * b * p1 * p2;
    if den.abs() <= 1e-9 {
        return Err(Error::SingularDenominator(den));
    }
    Ok(VsIcCoefficients {
        alpha1: p1 * (1.0 + p2) / den,
        alpha2: p1 * (d + d * p2 - a * p2) / den,
        // Negative: receiver 2 sees -b·α1·S1' after subtracting b·U.
        beta1: -b * p1 * p2 / den,
        beta2: p2 * (p1 + 1.0 - b * d * p1) / den,
    })
}

pub fn vs_zic_coefficients(params: &IcParams, decomp: &StateDecomp) -> Result<VsZicCoefficients> {
    let d = require_s1_on_s2(decomp)?;
    let IcParams { a, p1, p2, .. } = *params;
    let k1 = p1 / (p1 + 1.0);
    let k2 = p2 / (p2 + 1.0);
    Ok(VsZicCoefficients {
        alpha1: k1 * (d - a * k2),
        alpha2: k1,
        beta: k2,
    })
}

/// Very strong IC scene with `U` and `V` defined.
pub fn vs_ic_scene(params: &IcParams) -> Result<(GaussianScene, VsIcCoefficients)> {
    let mut scene = build_scene(params, SceneVariant::VeryStrongIc)?;
    let k = vs_ic_coefficients(params, &decompose(params, Direction::S1OnS2))?;
    scene.define(U, &[(X1, 1.0), (S1_RESIDUAL, k.alpha1), (S2, k.alpha2)])?;
    scene.define(V, &[(X2, 1.0), (S1_RESIDUAL, k.beta1), (S2, k.beta2)])?;
    Ok((scene, k))
}

/// Very strong Z-IC scene with `U` and `V` defined. Requires `b = 0`.
pub fn vs_zic_scene(params: &IcParams) -> Result<(GaussianScene, VsZicCoefficients)> {
    let mut scene = build_scene(params, SceneVariant::VeryStrongZic)?;
    let k = vs_zic_coefficients(params, &decompose(params, Direction::S1OnS2))?;
    scene.define(U, &[(X1, 1.0), (S2, k.alpha1), (S1_RESIDUAL, k.alpha2)])?;
    scene.define(V, &[(X2, 1.0), (S2, k.beta)])?;
    Ok((scene, k))
}

fn require_regime(params: &IcParams, channel: Channel, expected: RegimeKind) -> Result<()> {
    let regime = classify(params, channel)?;
    if regime.kind != expected {
        return Err(Error::WrongRegime {
            expected: expected.as_str(),
            found: regime.kind,
        });
    }
    Ok(())
}

/// Both sides of the exponentiated conditions
/// `1+P1 <= exp(2·(h(X1)-h(U,Y2)+h(Y2)))` and
/// `1+P2 <= exp(2·(h(X2)-h(V,Y1)+h(Y1)))`; independent of the log base.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VsIcCurves {
    pub lhs1: f64,
    pub rhs1: f64,
    pub lhs2: f64,
    pub rhs2: f64,
}

fn entropy_form(scene: &GaussianScene, input: &str, aux: &str, output: &str) -> Result<f64> {
    let n = LogBase::NATS;
    Ok(scene.entropy(&[input], n)? - scene.entropy(&[aux, output], n)? + scene.entropy(&[output], n)?)
}

pub fn vs_ic_curves(params: &IcParams) -> Result<VsIcCurves> {
    let (scene, _) = vs_ic_scene(params)?;
    Ok(VsIcCurves {
        lhs1: 1.0 + params.p1,
        rhs1: (2.0 * entropy_form(&scene, X1, U, Y2)?).exp(),
        lhs2: 1.0 + params.p2,
        rhs2: (2.0 * entropy_form(&scene, X2, V, Y1)?).exp(),
    })
}

/// Evaluates the very strong IC conditions without checking the regime.
///
/// Conditions (entropy form): `½log(1+P1) <= h(X1)-h(U,Y2)+h(Y2)` and
/// `½log(1+P2) <= h(X2)-h(V,Y1)+h(Y1)`. The MI forms
/// `I(U;Y2)-I(S1,S2;U)` and `I(V;Y1)-I(S1,S2;V)` are evaluated as cross
/// checks and must agree to within 1e-9.
pub fn vs_ic_evaluate(params: &IcParams, base: LogBase) -> Result<ConditionReport> {
    let (scene, _) = vs_ic_scene(params)?;
    let states = [S1, S2];
    let cap1 = base.half_log(1.0 + params.p1);
    let cap2 = base.half_log(1.0 + params.p2);

    let h1 = base.from_nats(entropy_form(&scene, X1, U, Y2)?);
    let h2 = base.from_nats(entropy_form(&scene, X2, V, Y1)?);
    let mi1 = scene.mutual_info(&[U], &[Y2], base)? - scene.mutual_info(&states, &[U], base)?;
    let mi2 = scene.mutual_info(&[V], &[Y1], base)? - scene.mutual_info(&states, &[V], base)?;
    for (name, h, mi) in [("rx2_decodes_u", h1, mi1), ("rx1_decodes_v", h2, mi2)] {
        let diff = (h - mi).abs();
        if diff.is_nan() || diff > FORM_AGREEMENT_TOL {
            return Err(Error::InconsistentForms {
                condition: name.into(),
                diff,
            });
        }
    }
    let own1 = scene.mutual_info(&[U], &[V, Y1], base)? - scene.mutual_info(&states, &[U], base)?;
    let own2 = scene.mutual_info(&[V], &[U, Y2], base)? - scene.mutual_info(&states, &[V], base)?;

    let conditions = vec![
        Condition::at_most("rx2_decodes_u", cap1, h1),
        Condition::at_most("rx1_decodes_v", cap2, h2),
    ];
    let cross_checks = vec![
        Condition::at_most("rx2_decodes_u_mi", cap1, mi1),
        Condition::at_most("rx1_decodes_v_mi", cap2, mi2),
        Condition::at_least("rx1_own_rate", own1, cap1),
        Condition::at_least("rx2_own_rate", own2, cap2),
    ];
    let mut report = ConditionReport::new(conditions, cross_checks);
    if report.achieves_capacity {
        report.capacity_rect = Some((cap1, cap2));
    }
    Ok(report)
}

/// Capacity-achievability check for the very strong IC.
pub fn vs_ic_check(params: &IcParams, base: LogBase) -> Result<ConditionReport> {
    require_regime(params, Channel::Ic, RegimeKind::VeryStrongIc)?;
    vs_ic_evaluate(params, base)
}

/// Closed-form condition for the very strong Z-IC as `(lhs, rhs)`:
///
/// ```text
/// (P1 + a²P2 + d²Q2 + Q1' + 1) / ((d - aβ)²Q2P2 + (P2 + β²Q2)(P1 + Q1' + 1))  >=  (P2+1)/P2
/// ```
///
/// with `β = P2/(P2+1)`. The left side is `var(Y1)·var(V)/det Cov(V,Y1)`
/// divided by `var(V)`, i.e. the condition is `I(V;Y2) <= I(V;Y1)`.
pub fn vs_zic_closed_form(params: &IcParams) -> (f64, f64) {
    let dec = decompose(params, Direction::S1OnS2);
    let (d, q1r) = (dec.slope, dec.residual_var);
    let IcParams { a, p1, p2, q2, .. } = *params;
    let beta = p2 / (p2 + 1.0);
    let num = p1 + a * a * p2 + d * d * q2 + q1r + 1.0;
    let den = (d - a * beta).powi(2) * q2 * p2 + (p2 + beta * beta * q2) * (p1 + q1r + 1.0);
    (num / den, (p2 + 1.0) / p2)
}

/// Evaluates the very strong Z-IC condition without checking the regime.
/// The verdict follows the closed form; the MI gate
/// `I(V;Y2) <= I(V;Y1)` is reported as a cross check.
pub fn vs_zic_evaluate(params: &IcParams, base: LogBase) -> Result<ConditionReport> {
    let (scene, _) = vs_zic_scene(params)?;
    let cap1 = base.half_log(1.0 + params.p1);
    let cap2 = base.half_log(1.0 + params.p2);
    let (lhs, rhs) = vs_zic_closed_form(params);

    let v_at_rx2 = scene.mutual_info(&[V], &[Y2], base)?;
    let v_at_rx1 = scene.mutual_info(&[V], &[Y1], base)?;
    let own1 = scene.mutual_info(&[U], &[V, Y1], base)? - scene.mutual_info(&[S1, S2], &[U], base)?;
    let own2 = v_at_rx2 - scene.mutual_info(&[S2], &[V], base)?;

    let conditions = vec![Condition::at_least("closed_form", lhs, rhs)];
    let cross_checks = vec![
        Condition::at_most("mi_gate", v_at_rx2, v_at_rx1),
        Condition::at_least("rx1_own_rate", own1, cap1),
        Condition::at_least("rx2_own_rate", own2, cap2),
    ];
    let mut report = ConditionReport::new(conditions, cross_checks);
    if report.achieves_capacity {
        report.capacity_rect = Some((cap1, cap2));
    }
    Ok(report)
}

/// Capacity-achievability check for the very strong Z-IC.
pub fn vs_zic_check(params: &IcParams, base: LogBase) -> Result<ConditionReport> {
    require_regime(params, Channel::Zic, RegimeKind::VeryStrongZic)?;
    vs_zic_evaluate(params, base)
}

/// Adds `rv` to a copy of `scene`, accepting an existing variable of the
/// same name only if its coefficients match.
pub(crate) fn scene_with(scene: &GaussianScene, rvs: &[&RandVec]) -> Result<GaussianScene> {
    let mut out = scene.clone();
    for rv in rvs {
        match scene.var(&rv.name) {
            Ok(existing) if existing.coeffs == rv.coeffs => {}
            Ok(_) => return Err(Error::DuplicateName(rv.name.clone())),
            Err(_) => out.insert((*rv).clone())?,
        }
    }
    Ok(out)
}

/// Fails with `BadFactorization` if `rv` loads on a basis element outside
/// `allowed`.
pub(crate) fn check_support(scene: &GaussianScene, rv: &RandVec, allowed: &[&str]) -> Result<()> {
    for (e, &c) in scene.basis().elements().iter().zip(&rv.coeffs) {
        if c != 0.0 && !allowed.contains(&e.name.as_str()) {
            return Err(Error::BadFactorization {
                aux: rv.name.clone(),
                element: e.name.clone(),
            });
        }
    }
    Ok(())
}

fn finite_or_degenerate(x: f64, what: &str) -> Result<f64> {
    if x.is_nan() {
        Err(Error::Degenerate(vec![what.to_owned()]))
    } else {
        Ok(x)
    }
}

/// IC achievable region for arbitrary linear Gaussian auxiliaries in a
/// very strong IC scene:
///
/// ```text
/// R1 <= min{I(U;V,Y1), I(U;Y2)} - I(S1,S2;U)
/// R2 <= min{I(V;U,Y2), I(V;Y1)} - I(S1,S2;V)
/// ```
pub fn inner_region(scene: &GaussianScene, u: &RandVec, v: &RandVec, base: LogBase) -> Result<RegionBounds> {
    let scene = scene_with(scene, &[u, v])?;
    check_support(&scene, u, &[X1, S1_RESIDUAL, S2])?;
    check_support(&scene, v, &[X2, S1_RESIDUAL, S2])?;
    let (un, vn) = (u.name.as_str(), v.name.as_str());
    let states = [S1, S2];
    let r1 = scene
        .mutual_info(&[un], &[vn, Y1], base)?
        .min(scene.mutual_info(&[un], &[Y2], base)?)
        - scene.mutual_info(&states, &[un], base)?;
    let r2 = scene
        .mutual_info(&[vn], &[un, Y2], base)?
        .min(scene.mutual_info(&[vn], &[Y1], base)?)
        - scene.mutual_info(&states, &[vn], base)?;
    Ok(RegionBounds::clamped(
        finite_or_degenerate(r1, un)?,
        finite_or_degenerate(r2, vn)?,
    ))
}

/// Z-IC achievable region; `V` may depend only on `X2` and `S2`:
///
/// ```text
/// R1 <= I(U;V,Y1) - I(S1,S2;U)
/// R2 <= min{I(V;Y2), I(V;Y1)} - I(S2;V)
/// ```
pub fn prop2_region(scene: &GaussianScene, u: &RandVec, v: &RandVec, base: LogBase) -> Result<RegionBounds> {
    let scene = scene_with(scene, &[u, v])?;
    check_support(&scene, u, &[X1, S1_RESIDUAL, S2])?;
    check_support(&scene, v, &[X2, S2])?;
    let (un, vn) = (u.name.as_str(), v.name.as_str());
    let r1 = scene.mutual_info(&[un], &[vn, Y1], base)? - scene.mutual_info(&[S1, S2], &[un], base)?;
    let r2 = scene
        .mutual_info(&[vn], &[Y2], base)?
        .min(scene.mutual_info(&[vn], &[Y1], base)?)
        - scene.mutual_info(&[S2], &[vn], base)?;
    Ok(RegionBounds::clamped(
        finite_or_degenerate(r1, un)?,
        finite_or_degenerate(r2, vn)?,
    ))
}
