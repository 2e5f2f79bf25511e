//! Parameter sweeps over one or two axes with CSV and JSON emission.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{classify, Channel, IcParams, RegimeKind};
use crate::error::{Error, Result};
use crate::gaussian::LogBase;
use crate::report::ConditionReport;
use crate::{strong, very_strong, weak};

pub const SCHEMA_VERSION: &str = "1";

/// Recognized parameter names. `d`, `c` and `rho` are alternative ways of
/// specifying the state correlation; `q1p`/`q2p` are the residual
/// variances `Q1'`/`Q2'` of the matching decomposition; `p1dp` is the
/// strong-regime split `P1''`.
pub const PARAM_NAMES: [&str; 12] = ["a", "b", "p1", "p2", "q1", "q2", "rho", "d", "c", "q1p", "q2p", "p1dp"];

/// A partial assignment of named parameters.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ParamSet(BTreeMap<String, f64>);

impl ParamSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !PARAM_NAMES.contains(&name) {
            return Err(Error::InvalidParams(format!("unknown parameter `{name}`")));
        }
        self.0.insert(name.to_owned(), value);
        Ok(())
    }

    pub fn with(mut self, name: &str, value: f64) -> Result<Self> {
        self.set(name, value)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Values from `other` override values here.
    pub fn merged(&self, other: &ParamSet) -> ParamSet {
        let mut out = self.clone();
        out.0.extend(other.0.iter().map(|(k, v)| (k.clone(), *v)));
        out
    }

    fn need(&self, name: &str) -> Result<f64> {
        self.get(name)
            .ok_or_else(|| Error::InvalidParams(format!("missing parameter `{name}`")))
    }

    /// Structural checks that do not depend on values: at most one of
    /// `rho`, `d`, `c`, and residual variances only with the matching
    /// decomposition.
    pub fn check_structure(&self) -> Result<()> {
        let given: Vec<&str> = ["rho", "d", "c"].into_iter().filter(|n| self.contains(n)).collect();
        if given.len() > 1 {
            return Err(Error::InvalidParams(format!(
                "state correlation given more than once ({}); use exactly one of rho, d, c",
                given.join(", ")
            )));
        }
        let mode = given.first().copied().unwrap_or("rho");
        let forbid = |names: &[&str]| -> Result<()> {
            for n in names {
                if self.contains(n) {
                    return Err(Error::InvalidParams(format!("`{n}` cannot be combined with `{mode}`")));
                }
            }
            Ok(())
        };
        match mode {
            "d" => {
                forbid(&["q2p"])?;
                if self.contains("q1") && self.contains("q1p") {
                    return Err(Error::InvalidParams("give either q1 or q1p with d, not both".into()));
                }
            }
            "c" => {
                forbid(&["q1p"])?;
                if self.contains("q2") && self.contains("q2p") {
                    return Err(Error::InvalidParams("give either q2 or q2p with c, not both".into()));
                }
            }
            _ => forbid(&["q1p", "q2p"])?,
        }
        Ok(())
    }

    /// [`check_structure`](Self::check_structure) plus presence of every
    /// parameter [`resolve`](Self::resolve) will read.
    pub fn check_complete(&self) -> Result<()> {
        self.check_structure()?;
        let mut need = vec!["a", "p1", "p2"];
        if self.contains("d") {
            need.push("q2");
            if !self.contains("q1p") {
                need.push("q1");
            }
        } else if self.contains("c") {
            need.push("q1");
            if !self.contains("q2p") {
                need.push("q2");
            }
        } else {
            need.extend(["q1", "q2"]);
        }
        need.into_iter().try_for_each(|n| self.need(n).map(drop))
    }

    /// Builds channel parameters. `b` defaults to 0 and `rho` to 0 when no
    /// correlation is given.
    pub fn resolve(&self) -> Result<IcParams> {
        self.check_complete()?;
        let a = self.need("a")?;
        let b = self.get("b").unwrap_or(0.0);
        let (p1, p2) = (self.need("p1")?, self.need("p2")?);
        if let Some(d) = self.get("d") {
            let q2 = self.need("q2")?;
            let q1r = match self.get("q1p") {
                Some(r) => r,
                None => self.need("q1")? - d * d * q2,
            };
            IcParams::from_s1_on_s2(a, b, p1, p2, q2, d, q1r)
        } else if let Some(c) = self.get("c") {
            let q1 = self.need("q1")?;
            let q2r = match self.get("q2p") {
                Some(r) => r,
                None => self.need("q2")? - c * c * q1,
            };
            IcParams::from_s2_on_s1(a, b, p1, p2, q1, c, q2r)
        } else {
            let rho = self.get("rho").unwrap_or(0.0);
            IcParams::new(a, b, p1, p2, self.need("q1")?, self.need("q2")?, rho)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    ClassifyIc,
    ClassifyZic,
    VsIc,
    VsIcCurves,
    VsZic,
    StrongIc,
    StrongZic,
    WeakIc,
    WeakZic,
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "classify" | "classify-ic" => CheckKind::ClassifyIc,
            "classify-zic" => CheckKind::ClassifyZic,
            "vs-ic" => CheckKind::VsIc,
            "vs-ic-curves" => CheckKind::VsIcCurves,
            "vs-zic" => CheckKind::VsZic,
            "strong-ic" => CheckKind::StrongIc,
            "strong-zic" => CheckKind::StrongZic,
            "weak" | "weak-ic" => CheckKind::WeakIc,
            "weak-zic" => CheckKind::WeakZic,
            other => return Err(Error::InvalidParams(format!("unknown check `{other}`"))),
        })
    }
}

const IC_MARGINS: [&str; 7] = [
    "very_strong_rx1",
    "very_strong_rx2",
    "strong_a",
    "strong_b",
    "strong_not_very_strong",
    "strong_ordering",
    "weak",
];
const ZIC_MARGINS: [&str; 3] = ["very_strong", "strong_lower", "weak"];

impl CheckKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::ClassifyIc => "classify-ic",
            CheckKind::ClassifyZic => "classify-zic",
            CheckKind::VsIc => "vs-ic",
            CheckKind::VsIcCurves => "vs-ic-curves",
            CheckKind::VsZic => "vs-zic",
            CheckKind::StrongIc => "strong-ic",
            CheckKind::StrongZic => "strong-zic",
            CheckKind::WeakIc => "weak-ic",
            CheckKind::WeakZic => "weak-zic",
        }
    }

    pub fn channel(self) -> Channel {
        match self {
            CheckKind::ClassifyZic | CheckKind::VsZic | CheckKind::StrongZic | CheckKind::WeakZic => Channel::Zic,
            _ => Channel::Ic,
        }
    }

    fn regime(self) -> Option<RegimeKind> {
        match self {
            CheckKind::ClassifyIc | CheckKind::ClassifyZic | CheckKind::VsIcCurves => None,
            CheckKind::VsIc => Some(RegimeKind::VeryStrongIc),
            CheckKind::VsZic => Some(RegimeKind::VeryStrongZic),
            CheckKind::StrongIc => Some(RegimeKind::StrongNotVeryStrongIc),
            CheckKind::StrongZic => Some(RegimeKind::StrongNotVeryStrongZic),
            CheckKind::WeakIc => Some(RegimeKind::WeakIc),
            CheckKind::WeakZic => Some(RegimeKind::WeakZic),
        }
    }

    /// Margin (or curve) columns, in output order.
    pub fn margin_columns(self) -> &'static [&'static str] {
        match self {
            CheckKind::ClassifyIc => &IC_MARGINS,
            CheckKind::ClassifyZic => &ZIC_MARGINS,
            CheckKind::VsIc => &["rx2_decodes_u", "rx1_decodes_v"],
            CheckKind::VsIcCurves => &["lhs1", "rhs1", "lhs2", "rhs2"],
            CheckKind::VsZic | CheckKind::StrongZic => &["closed_form", "mi_gate"],
            CheckKind::StrongIc => &["u1_at_rx2", "u2_at_rx2", "v_at_rx2"],
            CheckKind::WeakIc | CheckKind::WeakZic => &["weak"],
        }
    }

    pub fn rate_columns(self) -> &'static [&'static str] {
        match self {
            CheckKind::ClassifyIc | CheckKind::ClassifyZic | CheckKind::VsIcCurves => &[],
            CheckKind::VsIc | CheckKind::VsZic => &["r1_max", "r2_max"],
            CheckKind::StrongIc | CheckKind::StrongZic => &["r1", "r2"],
            CheckKind::WeakIc | CheckKind::WeakZic => &["sum_capacity"],
        }
    }

    pub fn needs_split(self) -> bool {
        matches!(self, CheckKind::StrongIc | CheckKind::StrongZic)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(name: &str, lo: f64, hi: f64, steps: usize) -> Result<Self> {
        if !PARAM_NAMES.contains(&name) {
            return Err(Error::InvalidParams(format!("unknown axis parameter `{name}`")));
        }
        if steps < 2 {
            return Err(Error::InvalidParams(format!("axis `{name}` needs at least 2 steps")));
        }
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::InvalidParams(format!("axis `{name}` needs finite lo < hi")));
        }
        Ok(Axis {
            name: name.to_owned(),
            lo,
            hi,
            steps,
        })
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.steps {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.steps - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// `name:lo:hi:steps`
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("axis `{s}` is not name:lo:hi:steps"));
        let parts: Vec<&str> = s.split(':').collect();
        let [name, lo, hi, steps] = parts[..] else {
            return Err(bad());
        };
        Axis::new(
            name,
            lo.parse().map_err(|_| bad())?,
            hi.parse().map_err(|_| bad())?,
            steps.parse().map_err(|_| bad())?,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub check: CheckKind,
    pub axes: Vec<Axis>,
    pub fixed: ParamSet,
    #[serde(skip)]
    pub base: LogBase,
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub coords: Vec<f64>,
    /// Regime of the cell's parameters; `None` if they are invalid.
    pub regime: Option<RegimeKind>,
    /// `ok`, `wrong_regime`, or the error kind that prevented evaluation.
    pub status: String,
    /// In the check's regime and every condition holds.
    pub verdict: bool,
    /// Aligned with `margin_columns` then `rate_columns`.
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub schema_version: &'static str,
    pub check: CheckKind,
    pub axes: Vec<Axis>,
    pub fixed: ParamSet,
    pub columns: Vec<String>,
    pub cells: Vec<SweepCell>,
}

impl SweepGrid {
    pub fn new(check: CheckKind, axes: Vec<Axis>, fixed: ParamSet, base: LogBase) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::InvalidParams(format!(
                "a sweep needs 1 or 2 axes, got {}",
                axes.len()
            )));
        }
        if axes.len() == 2 && axes[0].name == axes[1].name {
            return Err(Error::InvalidParams(format!("axis `{}` given twice", axes[0].name)));
        }
        let mut probe = fixed.clone();
        for ax in &axes {
            probe.set(&ax.name, ax.lo)?;
        }
        probe.check_complete()?;
        if check.needs_split() && !probe.contains("p1dp") {
            return Err(Error::InvalidParams(format!(
                "check `{}` needs p1dp (fixed or as an axis)",
                check.as_str()
            )));
        }
        Ok(SweepGrid {
            check,
            axes,
            fixed,
            base,
        })
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.steps).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinates of cell `k` in row-major order (last axis fastest).
    pub fn coords(&self, k: usize) -> Vec<f64> {
        let mut rem = k;
        let mut out = vec![0.0; self.axes.len()];
        for (i, ax) in self.axes.iter().enumerate().rev() {
            out[i] = ax.value(rem % ax.steps);
            rem /= ax.steps;
        }
        out
    }

    pub fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = self.axes.iter().map(|a| a.name.clone()).collect();
        cols.extend(["verdict", "regime", "status"].map(String::from));
        cols.extend(self.check.margin_columns().iter().map(|s| s.to_string()));
        cols.extend(self.check.rate_columns().iter().map(|s| s.to_string()));
        cols
    }

    pub fn cell_params(&self, coords: &[f64]) -> Result<ParamSet> {
        let mut p = self.fixed.clone();
        for (ax, &v) in self.axes.iter().zip(coords) {
            p.set(&ax.name, v)?;
        }
        Ok(p)
    }

    pub fn evaluate(&self, coords: Vec<f64>) -> SweepCell {
        let n = self.check.margin_columns().len() + self.check.rate_columns().len();
        let mut cell = SweepCell {
            coords,
            regime: None,
            status: "ok".into(),
            verdict: false,
            values: vec![None; n],
        };
        if let Err(e) = self.fill(&mut cell) {
            cell.status = e.kind().to_owned();
            cell.verdict = false;
        }
        cell
    }

    fn fill(&self, cell: &mut SweepCell) -> Result<()> {
        let set = self.cell_params(&cell.coords)?;
        let params = set.resolve()?;
        let check = self.check;
        let channel = check.channel();
        if channel == Channel::Zic && params.b != 0.0 {
            return Err(Error::InvalidZic(params.b));
        }
        let regime = classify(&params, channel)?;
        cell.regime = Some(regime.kind);
        let in_regime = check.regime().is_none_or(|k| k == regime.kind);
        if !in_regime {
            cell.status = "wrong_regime".into();
        }
        let base = self.base;
        let split = || set.need("p1dp");
        let margins = |r: &ConditionReport| -> Vec<Option<f64>> {
            check
                .margin_columns()
                .iter()
                .map(|n| r.condition(n).map(|c| c.margin))
                .collect()
        };
        let (values, verdict) = match check {
            CheckKind::ClassifyIc | CheckKind::ClassifyZic => {
                let v = check
                    .margin_columns()
                    .iter()
                    .map(|n| regime.margins.get(*n).copied())
                    .collect();
                (v, regime.kind != RegimeKind::Unclassified)
            }
            CheckKind::VsIcCurves => {
                let c = very_strong::vs_ic_curves(&params)?;
                let v = [c.lhs1, c.rhs1, c.lhs2, c.rhs2].map(Some).to_vec();
                (v, c.lhs1 <= c.rhs1 && c.lhs2 <= c.rhs2)
            }
            CheckKind::VsIc | CheckKind::VsZic => {
                let r = if check == CheckKind::VsIc {
                    very_strong::vs_ic_evaluate(&params, base)?
                } else {
                    very_strong::vs_zic_evaluate(&params, base)?
                };
                let mut v = margins(&r);
                let (r1, r2) = (base.half_log(1.0 + params.p1), base.half_log(1.0 + params.p2));
                let ok = in_regime && r.achieves_capacity;
                v.extend(if ok { [Some(r1), Some(r2)] } else { [None, None] });
                (v, ok)
            }
            CheckKind::StrongIc | CheckKind::StrongZic => {
                let x = split()?;
                let r = if check == CheckKind::StrongIc {
                    strong::strong_ic_evaluate(&params, x, base)?
                } else {
                    strong::strong_zic_evaluate(&params, x, base)?
                };
                let ordered = !(check == CheckKind::StrongIc && regime.needs_index_swap);
                if in_regime && !ordered {
                    cell.status = "ordering_violated".into();
                }
                let mut v = margins(&r);
                let pt = strong::layer_rates(&params, x, base)?.rate_point(x);
                v.extend([Some(pt.r1), Some(pt.r2)]);
                (v, in_regime && ordered && r.achieves_capacity)
            }
            CheckKind::WeakIc | CheckKind::WeakZic => {
                let mut v = vec![regime.margins.get("weak").copied()];
                let cap = if !in_regime {
                    None
                } else if check == CheckKind::WeakIc {
                    Some(weak::weak_ic_sum_capacity(&params, base)?)
                } else {
                    Some(weak::weak_zic_sum_capacity(&params, base)?)
                };
                v.push(cap);
                (v, in_regime)
            }
        };
        cell.values = values;
        cell.verdict = verdict;
        Ok(())
    }

    /// Evaluates every cell in parallel; cells come back in row-major order.
    pub fn run(&self) -> SweepResult {
        let cells = (0..self.len())
            .into_par_iter()
            .map(|k| self.evaluate(self.coords(k)))
            .collect();
        SweepResult {
            schema_version: SCHEMA_VERSION,
            check: self.check,
            axes: self.axes.clone(),
            fixed: self.fixed.clone(),
            columns: self.columns(),
            cells,
        }
    }
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros
/// trimmed, scientific notation outside `[1e-5, 1e12)`.
pub fn format_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp) as usize, x);
        trim_zeros(&s).to_owned()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mant), sign, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

impl SweepResult {
    /// CSV with a `#schema_version=N` first line, then a header row.
    /// Missing values are empty fields.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "#schema_version={SCHEMA_VERSION}");
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for cell in &self.cells {
            let mut fields: Vec<String> = cell.coords.iter().map(|&x| format_g(x)).collect();
            fields.push(cell.verdict.to_string());
            fields.push(cell.regime.map(|r| r.as_str()).unwrap_or("").to_owned());
            fields.push(cell.status.clone());
            fields.extend(cell.values.iter().map(|v| v.map(format_g).unwrap_or_default()));
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format() {
        assert_eq!(format_g(0.5), "0.5");
        assert_eq!(format_g(1.0), "1");
        assert_eq!(format_g(-2.25), "-2.25");
        assert_eq!(format_g(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_g(123456789012.0), "123456789012");
        assert_eq!(format_g(1e12), "1e+12");
        assert_eq!(format_g(1.5e-7), "1.5e-07");
        assert_eq!(format_g(9.9999999999996), "10");
        assert_eq!(format_g(0.0001), "0.0001");
        assert_eq!(format_g(f64::NAN), "nan");
    }

    #[test]
    fn axis_parsing() {
        let ax: Axis = "a:1.5:6:200".parse().unwrap();
        assert_eq!((ax.lo, ax.hi, ax.steps), (1.5, 6.0, 200));
        assert_eq!(ax.value(199), 6.0);
        assert!("a:1:0:5".parse::<Axis>().is_err());
        assert!("a:0:1:1".parse::<Axis>().is_err());
        assert!("zz:0:1:5".parse::<Axis>().is_err());
        assert!("a:0:1".parse::<Axis>().is_err());
    }

    #[test]
    fn correlation_resolution() {
        let base = ParamSet::new()
            .with("a", 2.0)
            .unwrap()
            .with("p1", 1.0)
            .unwrap()
            .with("p2", 1.0)
            .unwrap();
        let p = base
            .clone()
            .with("q1", 0.9)
            .unwrap()
            .with("q2", 0.9)
            .unwrap()
            .with("d", 0.5)
            .unwrap();
        let r = p.resolve().unwrap();
        assert!((r.rho - 0.5).abs() < 1e-15);
        let both = p.clone().with("rho", 0.1).unwrap();
        assert!(both.resolve().is_err());
        let resid = base
            .clone()
            .with("q1", 0.4)
            .unwrap()
            .with("c", 1.0)
            .unwrap()
            .with("q2p", 0.5)
            .unwrap();
        let r = resid.resolve().unwrap();
        assert!((r.q2 - 0.9).abs() < 1e-15);
        assert!(base
            .clone()
            .with("q1", 0.4)
            .unwrap()
            .with("q2", 1.0)
            .unwrap()
            .with("q1p", 0.1)
            .unwrap()
            .resolve()
            .is_err());
        assert!(base.with("q1", 1.0).unwrap().resolve().is_err());
    }

    #[test]
    fn row_major_order() {
        let fixed = ParamSet::new()
            .with("p1", 2.0)
            .unwrap()
            .with("p2", 2.0)
            .unwrap()
            .with("q1", 1.0)
            .unwrap()
            .with("q2", 1.0)
            .unwrap();
        let grid = SweepGrid::new(
            CheckKind::VsZic,
            vec![
                Axis::new("a", 2.0, 3.0, 3).unwrap(),
                Axis::new("d", 0.0, 1.0, 2).unwrap(),
            ],
            fixed,
            LogBase::BITS,
        )
        .unwrap();
        let res = grid.run();
        let coords: Vec<_> = res.cells.iter().map(|c| c.coords.clone()).collect();
        assert_eq!(
            coords,
            vec![
                vec![2.0, 0.0],
                vec![2.0, 1.0],
                vec![2.5, 0.0],
                vec![2.5, 1.0],
                vec![3.0, 0.0],
                vec![3.0, 1.0]
            ]
        );
        let csv = res.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("#schema_version=1"));
        assert_eq!(
            lines.next(),
            Some("a,d,verdict,regime,status,closed_form,mi_gate,r1_max,r2_max")
        );
        assert_eq!(csv.lines().count(), 8);
    }

    #[test]
    fn split_required_for_strong_checks() {
        let fixed = ParamSet::new().with("p1", 2.0).unwrap();
        let axes = vec![Axis::new("c", -1.0, 1.0, 3).unwrap()];
        assert!(SweepGrid::new(CheckKind::StrongZic, axes, fixed, LogBase::BITS).is_err());
    }

    #[test]
    fn out_of_regime_cells_are_flagged() {
        let fixed = ParamSet::new()
            .with("p1", 2.0)
            .unwrap()
            .with("p2", 2.0)
            .unwrap()
            .with("q1", 1.0)
            .unwrap()
            .with("q2", 1.0)
            .unwrap();
        let grid = SweepGrid::new(
            CheckKind::VsZic,
            vec![Axis::new("a", 1.0, 4.0, 4).unwrap()],
            fixed,
            LogBase::BITS,
        )
        .unwrap();
        let res = grid.run();
        assert_eq!(res.cells[0].status, "wrong_regime");
        assert!(!res.cells[0].verdict);
        assert_eq!(res.cells[0].regime, Some(RegimeKind::WeakZic));
    }

    #[test]
    fn invalid_cells_carry_error_kind() {
        // q1 < d²q2 leaves a negative residual at d = 1.
        let fixed = ParamSet::new()
            .with("a", 3.0)
            .unwrap()
            .with("p1", 2.0)
            .unwrap()
            .with("p2", 2.0)
            .unwrap()
            .with("q1", 0.5)
            .unwrap()
            .with("q2", 1.0)
            .unwrap();
        let grid = SweepGrid::new(
            CheckKind::VsZic,
            vec![Axis::new("d", 0.0, 1.0, 2).unwrap()],
            fixed,
            LogBase::BITS,
        )
        .unwrap();
        let res = grid.run();
        assert_eq!(res.cells[0].status, "ok");
        assert_eq!(res.cells[1].status, "InvalidParams");
    }
}
