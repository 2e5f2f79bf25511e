//! Weak interference: independent dirty-paper coding at both transmitters,
//! with the cross signal treated as noise. Only the sum capacity is known,
//! and it does not depend on the state correlation.

use crate::channel::names::*;
use crate::channel::{build_scene, classify, Channel, IcParams, RegimeKind, SceneVariant};
use crate::error::{Error, Result};
use crate::gaussian::LogBase;

fn require(params: &IcParams, channel: Channel, expected: RegimeKind) -> Result<()> {
    let kind = classify(params, channel)?.kind;
    if kind != expected {
        return Err(Error::WrongRegime {
            expected: expected.as_str(),
            found: kind,
        });
    }
    Ok(())
}

/// `½log(1 + P1/(a²P2 + 1)) + ½log(1 + P2/(b²P1 + 1))`
pub fn weak_ic_sum_capacity(params: &IcParams, base: LogBase) -> Result<f64> {
    require(params, Channel::Ic, RegimeKind::WeakIc)?;
    let IcParams { a, b, p1, p2, .. } = *params;
    Ok(base.half_log(1.0 + p1 / (a * a * p2 + 1.0)) + base.half_log(1.0 + p2 / (b * b * p1 + 1.0)))
}

/// `½log(1 + P1/(a²P2 + 1)) + ½log(1 + P2)`
pub fn weak_zic_sum_capacity(params: &IcParams, base: LogBase) -> Result<f64> {
    require(params, Channel::Zic, RegimeKind::WeakZic)?;
    let IcParams { a, p1, p2, .. } = *params;
    Ok(base.half_log(1.0 + p1 / (a * a * p2 + 1.0)) + base.half_log(1.0 + p2))
}

/// Sum rate of per-receiver dirty-paper coding with interference treated as
/// noise, evaluated directly as `I(U;Y1) - I(U;S1,S2) + I(V;Y2) - I(V;S1,S2)`.
///
/// `U = X1 + k1·S1` with `k1 = P1/(P1 + a²P2 + 1)` and
/// `V = X2 + k2·S2` with `k2 = P2/(P2 + b²P1 + 1)`: the Costa weights when
/// the cross signal is lumped with the noise. No regime check.
pub fn tin_sum_rate(params: &IcParams, base: LogBase) -> Result<f64> {
    let IcParams { a, b, p1, p2, .. } = *params;
    let mut scene = build_scene(params, SceneVariant::VeryStrongIc)?;
    let k1 = p1 / (p1 + a * a * p2 + 1.0);
    let k2 = p2 / (p2 + b * b * p1 + 1.0);
    let s1 = scene.var(S1)?.clone();
    let mut u = scene.combination("U", &[(X1, 1.0)])?;
    for (c, s) in u.coeffs.iter_mut().zip(&s1.coeffs) {
        *c += k1 * s;
    }
    scene.insert(u)?;
    scene.define("V", &[(X2, 1.0), (S2, k2)])?;
    let states = [S1, S2];
    let r1 = scene.mutual_info(&["U"], &[Y1], base)? - scene.mutual_info(&["U"], &states, base)?;
    let r2 = scene.mutual_info(&["V"], &[Y2], base)? - scene.mutual_info(&["V"], &states, base)?;
    Ok(r1 + r2)
}
