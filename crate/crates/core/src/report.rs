use serde::Serialize;

/// Slack below which a condition still counts as satisfied.
pub const VERDICT_TOL: f64 = 1e-9;

/// One evaluated inequality `lhs <= rhs`.
///
/// `margin = rhs - lhs` (or the equivalent slack of a ratio form), so a
/// positive margin always means "satisfied with room to spare".
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
}

impl Condition {
    /// Condition `lhs <= rhs`.
    pub fn at_most(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let margin = rhs - lhs;
        Condition {
            name: name.into(),
            lhs,
            rhs,
            margin,
            holds: margin >= -VERDICT_TOL,
        }
    }

    /// Condition `lhs >= rhs`.
    pub fn at_least(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let margin = lhs - rhs;
        Condition {
            name: name.into(),
            lhs,
            rhs,
            margin,
            holds: margin >= -VERDICT_TOL,
        }
    }
}

/// A rate pair on the sum-capacity line, parameterized by the private power
/// `P1''` of transmitter 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumRatePoint {
    pub r1: f64,
    pub r2: f64,
    pub p1_doubleprime: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    /// The achievability conditions; the verdict is their conjunction.
    pub conditions: Vec<Condition>,
    /// Alternative forms and identities evaluated alongside, for
    /// cross-validation. They never affect the verdict.
    pub cross_checks: Vec<Condition>,
    pub achieves_capacity: bool,
    /// `(R1_max, R2_max)` of the interference-free rectangle, when achieved.
    pub capacity_rect: Option<(f64, f64)>,
    /// Certified point on the sum-capacity line, when achieved.
    pub rate_point: Option<SumRatePoint>,
}

impl ConditionReport {
    pub(crate) fn new(conditions: Vec<Condition>, cross_checks: Vec<Condition>) -> Self {
        let achieves_capacity = conditions.iter().all(|c| c.holds);
        ConditionReport {
            conditions,
            cross_checks,
            achieves_capacity,
            capacity_rect: None,
            rate_point: None,
        }
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions
            .iter()
            .chain(&self.cross_checks)
            .find(|c| c.name == name)
    }
}

/// Rate bounds of an achievable region evaluated for given auxiliaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionBounds {
    pub r1: f64,
    pub r2: f64,
    /// The raw `R1` bound was negative and has been clamped to zero.
    pub r1_clamped: bool,
    pub r2_clamped: bool,
}

impl RegionBounds {
    pub(crate) fn clamped(r1: f64, r2: f64) -> Self {
        RegionBounds {
            r1: r1.max(0.0),
            r2: r2.max(0.0),
            r1_clamped: r1 < 0.0,
            r2_clamped: r2 < 0.0,
        }
    }
}
