//! Channel parameters, state decompositions, regime classification and
//! scene construction.
//!
//! The two-user channel is
//!
//! ```text
//! Y1 = X1 + a·X2 + S1 + N1
//! Y2 = b·X1 + X2 + S2 + N2
//! ```
//!
//! with unit-variance noise, powers `P1`, `P2`, and jointly Gaussian states of
//! variances `Q1`, `Q2` and correlation `rho`. The Z channel has `b = 0`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{Basis, GaussianScene};

/// Variable names used by the scenes built here.
pub mod names {
    pub const X1: &str = "X1";
    pub const X1_COMMON: &str = "X1'";
    pub const X1_PRIVATE: &str = "X1''";
    pub const X2: &str = "X2";
    pub const S1: &str = "S1";
    pub const S2: &str = "S2";
    pub const S1_RESIDUAL: &str = "S1'";
    pub const S2_RESIDUAL: &str = "S2'";
    pub const N1: &str = "N1";
    pub const N2: &str = "N2";
    pub const Y1: &str = "Y1";
    pub const Y2: &str = "Y2";
}

use names::*;

/// Relative band for non-strict comparisons.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IcParams {
    pub a: f64,
    pub b: f64,
    pub p1: f64,
    pub p2: f64,
    pub q1: f64,
    pub q2: f64,
    pub rho: f64,
}

impl IcParams {
    pub fn new(a: f64, b: f64, p1: f64, p2: f64, q1: f64, q2: f64, rho: f64) -> Result<Self> {
        let p = IcParams {
            a,
            b,
            p1,
            p2,
            q1,
            q2,
            rho,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters from the `S1 = d·S2 + S1'` form, with `Q1' = var(S1')`.
    pub fn from_s1_on_s2(a: f64, b: f64, p1: f64, p2: f64, q2: f64, d: f64, q1_residual: f64) -> Result<Self> {
        if q1_residual.is_nan() || q1_residual < 0.0 {
            return Err(Error::InvalidParams(format!(
                "residual Q1' = {q1_residual} must be >= 0"
            )));
        }
        let q1 = d * d * q2 + q1_residual;
        let rho = if q1 > 0.0 && q2 > 0.0 {
            clamp_rho(d * (q2 / q1).sqrt())
        } else {
            0.0
        };
        Self::new(a, b, p1, p2, q1, q2, rho)
    }

    /// Parameters from the `S2 = c·S1 + S2'` form, with `Q2' = var(S2')`.
    pub fn from_s2_on_s1(a: f64, b: f64, p1: f64, p2: f64, q1: f64, c: f64, q2_residual: f64) -> Result<Self> {
        if q2_residual.is_nan() || q2_residual < 0.0 {
            return Err(Error::InvalidParams(format!(
                "residual Q2' = {q2_residual} must be >= 0"
            )));
        }
        let q2 = c * c * q1 + q2_residual;
        let rho = if q1 > 0.0 && q2 > 0.0 {
            clamp_rho(c * (q1 / q2).sqrt())
        } else {
            0.0
        };
        Self::new(a, b, p1, p2, q1, q2, rho)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.a, self.b, self.p1, self.p2, self.q1, self.q2, self.rho];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams(format!("non-finite parameter in {self:?}")));
        }
        for (name, v) in [("P1", self.p1), ("P2", self.p2), ("Q1", self.q1), ("Q2", self.q2)] {
            if v <= 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be > 0, got {v}")));
            }
        }
        if self.rho.abs() > 1.0 {
            return Err(Error::InvalidParams(format!("|rho| must be <= 1, got {}", self.rho)));
        }
        Ok(())
    }

    /// Same parameters with the receiver-2 cross gain removed.
    pub fn as_zic(&self) -> IcParams {
        IcParams { b: 0.0, ..*self }
    }
}

fn clamp_rho(rho: f64) -> f64 {
    if rho.abs() > 1.0 && rho.abs() <= 1.0 + 1e-12 {
        rho.signum()
    } else {
        rho
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Channel {
    #[serde(rename = "IC")]
    Ic,
    #[serde(rename = "ZIC")]
    Zic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// `S1 = d·S2 + S1'`
    S1OnS2,
    /// `S2 = c·S1 + S2'`
    S2OnS1,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateDecomp {
    pub direction: Direction,
    /// `d` or `c`.
    pub slope: f64,
    /// `Q1'` or `Q2'`.
    pub residual_var: f64,
}

pub fn decompose(params: &IcParams, direction: Direction) -> StateDecomp {
    let shrink = (1.0 - params.rho * params.rho).max(0.0);
    let (slope, residual_var) = match direction {
        Direction::S1OnS2 => (params.rho * (params.q1 / params.q2).sqrt(), params.q1 * shrink),
        Direction::S2OnS1 => (params.rho * (params.q2 / params.q1).sqrt(), params.q2 * shrink),
    };
    StateDecomp {
        direction,
        slope,
        residual_var,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeKind {
    #[serde(rename = "VeryStrongIC")]
    VeryStrongIc,
    #[serde(rename = "StrongNotVeryStrongIC")]
    StrongNotVeryStrongIc,
    #[serde(rename = "WeakIC")]
    WeakIc,
    #[serde(rename = "VeryStrongZIC")]
    VeryStrongZic,
    #[serde(rename = "StrongNotVeryStrongZIC")]
    StrongNotVeryStrongZic,
    #[serde(rename = "WeakZIC")]
    WeakZic,
    Unclassified,
}

impl RegimeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeKind::VeryStrongIc => "VeryStrongIC",
            RegimeKind::StrongNotVeryStrongIc => "StrongNotVeryStrongIC",
            RegimeKind::WeakIc => "WeakIC",
            RegimeKind::VeryStrongZic => "VeryStrongZIC",
            RegimeKind::StrongNotVeryStrongZic => "StrongNotVeryStrongZIC",
            RegimeKind::WeakZic => "WeakZIC",
            RegimeKind::Unclassified => "Unclassified",
        }
    }
}

/// Classification result. Each margin is `lhs - rhs` of a defining
/// inequality written as `lhs > rhs` or `lhs >= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Regime {
    pub kind: RegimeKind,
    pub margins: BTreeMap<String, f64>,
    /// Strong IC only: the ordering `P1+a²P2+1 <= b²P1+P2+1` fails, so the
    /// transmitter labels have to be swapped before the strong-IC results
    /// apply.
    pub needs_index_swap: bool,
}

fn geq(margin: f64, scale: f64) -> bool {
    margin >= -TIE_TOL * scale.max(1.0)
}

pub fn classify(params: &IcParams, channel: Channel) -> Result<Regime> {
    params.validate()?;
    let IcParams { a, b, p1, p2, .. } = *params;
    let (a2, b2) = (a * a, b * b);
    let mut margins = BTreeMap::new();
    let mut needs_index_swap = false;

    let kind = match channel {
        Channel::Zic => {
            if b != 0.0 {
                return Err(Error::InvalidZic(b));
            }
            let vs = a2 - (1.0 + p1);
            let weak = 1.0 - a2;
            margins.insert("very_strong".into(), vs);
            margins.insert("strong_lower".into(), a2 - 1.0);
            margins.insert("weak".into(), weak);
            // a² = 1 satisfies both "1 <= a²" and "a² <= 1"; the weak result is
            // exact there, so the tie goes to the weak regime.
            if vs > 0.0 {
                RegimeKind::VeryStrongZic
            } else if geq(weak, a2) {
                RegimeKind::WeakZic
            } else if vs < 0.0 {
                RegimeKind::StrongNotVeryStrongZic
            } else {
                RegimeKind::Unclassified
            }
        }
        Channel::Ic => {
            let prod = (1.0 + p1) * (1.0 + p2);
            let rx1 = p1 + a2 * p2 + 1.0;
            let rx2 = b2 * p1 + p2 + 1.0;
            let weak_lhs = (a * (1.0 + b2 * p1)).abs() + (b * (1.0 + a2 * p2)).abs();
            margins.insert("very_strong_rx1".into(), rx1 - prod);
            margins.insert("very_strong_rx2".into(), rx2 - prod);
            margins.insert("strong_a".into(), a2 - 1.0);
            margins.insert("strong_b".into(), b2 - 1.0);
            margins.insert("strong_not_very_strong".into(), prod - rx1.min(rx2));
            margins.insert("strong_ordering".into(), rx2 - rx1);
            margins.insert("weak".into(), 1.0 - weak_lhs);

            if rx1 > prod && rx2 > prod {
                RegimeKind::VeryStrongIc
            } else if geq(a2 - 1.0, a2) && geq(b2 - 1.0, b2) && geq(prod - rx1.min(rx2), prod) {
                needs_index_swap = !geq(rx2 - rx1, rx2);
                RegimeKind::StrongNotVeryStrongIc
            } else if geq(1.0 - weak_lhs, weak_lhs) {
                RegimeKind::WeakIc
            } else {
                RegimeKind::Unclassified
            }
        }
    };
    Ok(Regime {
        kind,
        margins,
        needs_index_swap,
    })
}

/// Which re-parameterized channel model to lay out as a scene.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SceneVariant {
    /// `S1 = d·S2 + S1'`; basis X1, X2, S1', S2, N1, N2.
    VeryStrongIc,
    /// As `VeryStrongIc` with `b = 0`.
    VeryStrongZic,
    /// `S2 = c·S1 + S2'`, `X1 = X1' + X1''` with `var(X1'') = P1''`.
    StrongIc { p1_doubleprime: f64 },
    /// As `StrongIc` with `b = 0`.
    StrongZic { p1_doubleprime: f64 },
}

/// Lays out the channel as a [`GaussianScene`] containing the basis
/// variables, the reconstructed states `S1`, `S2`, `X1` (strong variants)
/// and the outputs `Y1`, `Y2`.
pub fn build_scene(params: &IcParams, variant: SceneVariant) -> Result<GaussianScene> {
    params.validate()?;
    let zic = matches!(variant, SceneVariant::VeryStrongZic | SceneVariant::StrongZic { .. });
    if zic && params.b != 0.0 {
        return Err(Error::InvalidZic(params.b));
    }
    let IcParams { a, b, p1, p2, .. } = *params;

    match variant {
        SceneVariant::VeryStrongIc | SceneVariant::VeryStrongZic => {
            let dec = decompose(params, Direction::S1OnS2);
            let basis = Basis::new()
                .with(X1, p1)?
                .with(X2, p2)?
                .with(S1_RESIDUAL, dec.residual_var)?
                .with(S2, params.q2)?
                .with(N1, 1.0)?
                .with(N2, 1.0)?;
            let mut scene = GaussianScene::new(basis);
            scene.define(S1, &[(S2, dec.slope), (S1_RESIDUAL, 1.0)])?;
            scene.define(
                Y1,
                &[(X1, 1.0), (X2, a), (S2, dec.slope), (S1_RESIDUAL, 1.0), (N1, 1.0)],
            )?;
            scene.define(Y2, &[(X1, b), (X2, 1.0), (S2, 1.0), (N2, 1.0)])?;
            Ok(scene)
        }
        SceneVariant::StrongIc { p1_doubleprime } | SceneVariant::StrongZic { p1_doubleprime } => {
            check_split(params, p1_doubleprime)?;
            let dec = decompose(params, Direction::S2OnS1);
            let basis = Basis::new()
                .with(X1_COMMON, (p1 - p1_doubleprime).max(0.0))?
                .with(X1_PRIVATE, p1_doubleprime)?
                .with(X2, p2)?
                .with(S1, params.q1)?
                .with(S2_RESIDUAL, dec.residual_var)?
                .with(N1, 1.0)?
                .with(N2, 1.0)?;
            let mut scene = GaussianScene::new(basis);
            scene.define(X1, &[(X1_COMMON, 1.0), (X1_PRIVATE, 1.0)])?;
            scene.define(S2, &[(S1, dec.slope), (S2_RESIDUAL, 1.0)])?;
            scene.define(Y1, &[(X1, 1.0), (X2, a), (S1, 1.0), (N1, 1.0)])?;
            scene.define(
                Y2,
                &[(X1, b), (X2, 1.0), (S1, dec.slope), (S2_RESIDUAL, 1.0), (N2, 1.0)],
            )?;
            Ok(scene)
        }
    }
}

pub(crate) fn check_split(params: &IcParams, p1_doubleprime: f64) -> Result<()> {
    if !(p1_doubleprime >= 0.0 && p1_doubleprime <= params.p1) {
        return Err(Error::BadSplit {
            p1_doubleprime,
            p1: params.p1,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::LogBase;

    fn params(a: f64, b: f64, p1: f64, p2: f64) -> IcParams {
        IcParams::new(a, b, p1, p2, 1.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn decompose_examples() {
        let p = IcParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let d = decompose(&p, Direction::S1OnS2);
        assert_eq!((d.slope, d.residual_var), (1.0, 0.0));

        let p = IcParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 4.0, 0.0).unwrap();
        let c = decompose(&p, Direction::S2OnS1);
        assert_eq!((c.slope, c.residual_var), (0.0, 4.0));

        let p = IcParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.5).unwrap();
        let d = decompose(&p, Direction::S1OnS2);
        assert!((d.slope - 0.5).abs() < 1e-15);
        assert!((d.residual_var - 0.75).abs() < 1e-15);
        assert!((d.slope * d.slope * p.q2 + d.residual_var - p.q1).abs() < 1e-12 * p.q1);
    }

    #[test]
    fn residual_constructors_round_trip() {
        let p = IcParams::from_s1_on_s2(1.6, 1.2, 1.0, 1.0, 0.9, 0.5, 0.675).unwrap();
        assert!((p.q1 - 0.9).abs() < 1e-15);
        let dec = decompose(&p, Direction::S1OnS2);
        assert!((dec.slope - 0.5).abs() < 1e-12);
        assert!((dec.residual_var - 0.675).abs() < 1e-12);

        let p = IcParams::from_s2_on_s1(1.2, 0.0, 2.0, 0.7, 0.4, 0.8, 0.5).unwrap();
        let dec = decompose(&p, Direction::S2OnS1);
        assert!((dec.slope - 0.8).abs() < 1e-12);
        assert!((dec.residual_var - 0.5).abs() < 1e-12);

        assert!(IcParams::from_s1_on_s2(1.0, 1.0, 1.0, 1.0, 1.0, 0.5, -0.1).is_err());
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(IcParams::new(1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(IcParams::new(1.0, 1.0, 1.0, 1.0, -1.0, 1.0, 0.0).is_err());
        assert!(IcParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.5).is_err());
        assert!(IcParams::new(f64::NAN, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn classify_examples() {
        let r = classify(&params(2.0, 2.0, 1.0, 1.0), Channel::Ic).unwrap();
        assert_eq!(r.kind, RegimeKind::VeryStrongIc);
        assert_eq!(r.margins["very_strong_rx1"], 2.0);

        let r = classify(&params(2.0, 0.0, 2.0, 1.0), Channel::Zic).unwrap();
        assert_eq!(r.kind, RegimeKind::VeryStrongZic);
        assert_eq!(r.margins["very_strong"], 1.0);

        let r = classify(&params(0.5, 0.2, 1.0, 1.0), Channel::Ic).unwrap();
        assert_eq!(r.kind, RegimeKind::WeakIc);
        // |0.5·1.04| + |0.2·1.25| = 0.77
        assert!((r.margins["weak"] - 0.23).abs() < 1e-15);
    }

    #[test]
    fn classify_strong_and_ordering() {
        let r = classify(&params(1.2, 1.1, 2.0, 0.7), Channel::Ic).unwrap();
        assert_eq!(r.kind, RegimeKind::StrongNotVeryStrongIc);
        assert!(!r.needs_index_swap);
        // b just above 1 breaks P1+a²P2+1 <= b²P1+P2+1
        let r = classify(&params(1.2, 1.01, 2.0, 0.7), Channel::Ic).unwrap();
        assert_eq!(r.kind, RegimeKind::StrongNotVeryStrongIc);
        assert!(r.needs_index_swap);

        let r = classify(&params(1.2, 0.0, 2.0, 0.7), Channel::Zic).unwrap();
        assert_eq!(r.kind, RegimeKind::StrongNotVeryStrongZic);
    }

    #[test]
    fn zic_ties_and_errors() {
        let r = classify(&params(1.0, 0.0, 2.0, 1.0), Channel::Zic).unwrap();
        assert_eq!(r.kind, RegimeKind::WeakZic);
        let r = classify(&params(-0.5, 0.0, 2.0, 1.0), Channel::Zic).unwrap();
        assert_eq!(r.kind, RegimeKind::WeakZic);
        // a² = 1 + P1 exactly: neither strict nor strong-not-very-strong
        let r = classify(&params(2.0, 0.0, 3.0, 1.0), Channel::Zic).unwrap();
        assert_eq!(r.kind, RegimeKind::Unclassified);
        assert!(matches!(
            classify(&params(2.0, 0.5, 1.0, 1.0), Channel::Zic),
            Err(Error::InvalidZic(_))
        ));
    }

    #[test]
    fn mixed_interference_is_unclassified() {
        let r = classify(&params(2.0, 0.5, 1.0, 1.0), Channel::Ic).unwrap();
        assert_eq!(r.kind, RegimeKind::Unclassified);
    }

    #[test]
    fn scene_coefficients() {
        let p = IcParams::new(1.6, 1.2, 1.0, 1.0, 0.9, 0.9, 0.5).unwrap();
        let s = build_scene(&p, SceneVariant::VeryStrongIc).unwrap();
        let y2 = s.var(Y2).unwrap();
        let bi = |n| s.basis().index_of(n).unwrap();
        assert_eq!(y2.coeff(bi(X1)), 1.2);
        assert_eq!(y2.coeff(bi(X2)), 1.0);
        assert_eq!(y2.coeff(bi(S2)), 1.0);
        assert_eq!(y2.coeff(bi(N2)), 1.0);
        assert_eq!(y2.coeff(bi(S1_RESIDUAL)), 0.0);

        let pz = p.as_zic();
        let s = build_scene(&pz, SceneVariant::VeryStrongZic).unwrap();
        let var_y2 = s.covariance(&[Y2]).unwrap()[(0, 0)];
        assert!((var_y2 - (pz.p2 + pz.q2 + 1.0)).abs() < 1e-14);
        assert!(matches!(
            build_scene(&p, SceneVariant::VeryStrongZic),
            Err(Error::InvalidZic(_))
        ));
    }

    #[test]
    fn strong_scene_power_split() {
        let p = IcParams::new(1.2, 1.5, 2.0, 0.7, 0.4, 0.5, 0.3).unwrap();
        let s = build_scene(&p, SceneVariant::StrongIc { p1_doubleprime: 0.8 }).unwrap();
        let var_y1 = s.covariance(&[Y1]).unwrap()[(0, 0)];
        let expect = p.p1 + p.a * p.a * p.p2 + p.q1 + 1.0;
        assert!((var_y1 - expect).abs() < 1e-13);
        assert!(matches!(
            build_scene(&p, SceneVariant::StrongIc { p1_doubleprime: 2.5 }),
            Err(Error::BadSplit { .. })
        ));
        assert!(matches!(
            build_scene(&p, SceneVariant::StrongIc { p1_doubleprime: -0.1 }),
            Err(Error::BadSplit { .. })
        ));
    }

    #[test]
    fn state_reconstruction_matches_correlation() {
        for rho in [-1.0, -0.7, 0.0, 0.3, 1.0] {
            let p = IcParams::new(2.0, 2.0, 1.0, 1.0, 0.6, 1.7, rho).unwrap();
            for v in [
                SceneVariant::VeryStrongIc,
                SceneVariant::StrongIc { p1_doubleprime: 0.5 },
            ] {
                let s = build_scene(&p, v).unwrap();
                let cov = s.covariance(&[S1, S2]).unwrap();
                assert!((cov[(0, 1)] - rho * (p.q1 * p.q2).sqrt()).abs() < 1e-12);
                assert!((cov[(0, 0)] - p.q1).abs() < 1e-12);
                assert!((cov[(1, 1)] - p.q2).abs() < 1e-12);
                assert!(s.is_psd());
            }
        }
    }

    #[test]
    fn perfectly_correlated_states_are_finite() {
        let p = IcParams::new(2.0, 2.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let s = build_scene(&p, SceneVariant::VeryStrongIc).unwrap();
        let i = s.mutual_info(&[S1, S2], &[Y1], LogBase::BITS).unwrap();
        assert!(i.is_finite() && i > 0.0);
    }
}
