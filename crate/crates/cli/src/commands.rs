use std::fmt::Write as _;

use serde_json::{json, Value};

use sdic_core::channel::names::{S1, S2, X1, Y1, Y2};
use sdic_core::mc::{self, McQuery, MiTerm};
use sdic_core::sweep::{format_g, Axis, CheckKind, ParamSet, SweepGrid, SCHEMA_VERSION};
use sdic_core::{classify, decompose, strong, very_strong, weak, Channel, ConditionReport, Direction, IcParams};

use crate::args::{Command, Common, SceneArg};
use crate::CliError;

/// Result of one subcommand: the JSON document for stdout and, if the
/// command has a tabular form, the CSV body for `--out`.
pub struct Output {
    pub json: Value,
    pub csv: Option<String>,
}

fn resolve(set: &ParamSet) -> Result<IcParams, CliError> {
    set.check_complete().map_err(|e| CliError::Usage(e.to_string()))?;
    set.resolve().map_err(CliError::Domain)
}

fn split(set: &ParamSet) -> Result<f64, CliError> {
    set.get("p1dp")
        .ok_or_else(|| CliError::Usage("missing parameter `p1dp` (the private power P1'')".into()))
}

fn params_json(p: &IcParams) -> Value {
    let s1 = decompose(p, Direction::S1OnS2);
    let s2 = decompose(p, Direction::S2OnS1);
    json!({
        "a": p.a, "b": p.b, "p1": p.p1, "p2": p.p2, "q1": p.q1, "q2": p.q2, "rho": p.rho,
        "d": s1.slope, "q1p": s1.residual_var, "c": s2.slope, "q2p": s2.residual_var,
    })
}

fn envelope(command: &str, common: &Common, params: &IcParams) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    m.insert("unit".into(), json!(common.unit()));
    m.insert("params".into(), params_json(params));
    m
}

fn report_csv(r: &ConditionReport) -> String {
    let mut out = format!("#schema_version={SCHEMA_VERSION}\nname,kind,lhs,rhs,margin,holds\n");
    let rows = r
        .conditions
        .iter()
        .map(|c| ("condition", c))
        .chain(r.cross_checks.iter().map(|c| ("cross_check", c)));
    for (kind, c) in rows {
        let _ = writeln!(
            out,
            "{},{kind},{},{},{},{}",
            c.name,
            format_g(c.lhs),
            format_g(c.rhs),
            format_g(c.margin),
            c.holds
        );
    }
    out
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub fn run(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Classify { common, channel } => {
            let p = resolve(&common.params()?)?;
            let regime = classify(&p, (*channel).into()).map_err(CliError::Domain)?;
            let mut m = envelope("classify", common, &p);
            m.insert("channel".into(), to_value(&Channel::from(*channel)));
            m.insert("regime".into(), json!(regime.kind.as_str()));
            m.insert("margins".into(), to_value(&regime.margins));
            m.insert("needs_index_swap".into(), json!(regime.needs_index_swap));
            let mut csv = format!("#schema_version={SCHEMA_VERSION}\nregime,margin,value\n");
            for (k, v) in &regime.margins {
                let _ = writeln!(csv, "{},{k},{}", regime.kind.as_str(), format_g(*v));
            }
            Ok(Output {
                json: Value::Object(m),
                csv: Some(csv),
            })
        }
        Command::VsIc { common } => {
            let p = resolve(&common.params()?)?;
            let base = common.base();
            let report = very_strong::vs_ic_check(&p, base).map_err(CliError::Domain)?;
            let coeffs =
                very_strong::vs_ic_coefficients(&p, &decompose(&p, Direction::S1OnS2)).map_err(CliError::Domain)?;
            let curves = very_strong::vs_ic_curves(&p).map_err(CliError::Domain)?;
            let mut m = envelope("vs-ic", common, &p);
            m.insert("coefficients".into(), to_value(&coeffs));
            m.insert("curves".into(), to_value(&curves));
            m.insert("report".into(), to_value(&report));
            Ok(Output {
                json: Value::Object(m),
                csv: Some(report_csv(&report)),
            })
        }
        Command::VsZic { common } => {
            let p = resolve(&common.params()?)?;
            let report = very_strong::vs_zic_check(&p, common.base()).map_err(CliError::Domain)?;
            let coeffs =
                very_strong::vs_zic_coefficients(&p, &decompose(&p, Direction::S1OnS2)).map_err(CliError::Domain)?;
            let mut m = envelope("vs-zic", common, &p);
            m.insert("coefficients".into(), to_value(&coeffs));
            m.insert("report".into(), to_value(&report));
            Ok(Output {
                json: Value::Object(m),
                csv: Some(report_csv(&report)),
            })
        }
        Command::StrongIc { common } | Command::StrongZic { common } => {
            let set = common.params()?;
            let p = resolve(&set)?;
            let x = split(&set)?;
            let base = common.base();
            let zic = matches!(command, Command::StrongZic { .. });
            let report = if zic {
                strong::strong_zic_check(&p, x, base)
            } else {
                strong::strong_ic_check(&p, x, base)
            }
            .map_err(CliError::Domain)?;
            let scheme = strong::strong_scheme(&p, x).map_err(CliError::Domain)?;
            let target = strong::layer_rates(&p, x, base).map_err(CliError::Domain)?;
            let mut m = envelope(if zic { "strong-zic" } else { "strong-ic" }, common, &p);
            m.insert("scheme".into(), to_value(&scheme));
            m.insert("target".into(), to_value(&target.rate_point(x)));
            m.insert("report".into(), to_value(&report));
            Ok(Output {
                json: Value::Object(m),
                csv: Some(report_csv(&report)),
            })
        }
        Command::Weak { common, channel } => {
            let p = resolve(&common.params()?)?;
            let base = common.base();
            let cap = match Channel::from(*channel) {
                Channel::Ic => weak::weak_ic_sum_capacity(&p, base),
                Channel::Zic => weak::weak_zic_sum_capacity(&p, base),
            }
            .map_err(CliError::Domain)?;
            let mut m = envelope("weak", common, &p);
            m.insert("channel".into(), to_value(&Channel::from(*channel)));
            m.insert("sum_capacity".into(), json!(cap));
            let csv = format!("#schema_version={SCHEMA_VERSION}\nsum_capacity\n{}\n", format_g(cap));
            Ok(Output {
                json: Value::Object(m),
                csv: Some(csv),
            })
        }
        Command::Sweep { common, check, axes } => {
            let check: CheckKind = check
                .parse()
                .map_err(|e: sdic_core::Error| CliError::Usage(e.to_string()))?;
            let axes = axes
                .iter()
                .map(|s| s.parse::<Axis>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let grid = SweepGrid::new(check, axes, common.params()?, common.base())
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let result = grid.run();
            let passing = result.cells.iter().filter(|c| c.verdict).count();
            let csv = result.to_csv();
            let json = if common.out.is_some() {
                json!({
                    "schema_version": SCHEMA_VERSION,
                    "command": "sweep",
                    "unit": common.unit(),
                    "check": check.as_str(),
                    "axes": to_value(&result.axes),
                    "fixed": to_value(&result.fixed),
                    "columns": result.columns,
                    "cells": result.cells.len(),
                    "passing": passing,
                })
            } else {
                let mut v = to_value(&result);
                v["command"] = json!("sweep");
                v["unit"] = json!(common.unit());
                v["passing"] = json!(passing);
                v
            };
            Ok(Output { json, csv: Some(csv) })
        }
        Command::Segment { common, steps } => {
            let p = resolve(&common.params()?)?;
            let seg = strong::strong_zic_segment(&p, *steps, common.base()).map_err(CliError::Domain)?;
            let mut m = envelope("segment", common, &p);
            m.insert("steps".into(), json!(steps));
            m.insert("segment".into(), to_value(&seg));
            let mut csv = format!("#schema_version={SCHEMA_VERSION}\np1dp,r1,r2\n");
            for pt in &seg.rates {
                let _ = writeln!(
                    csv,
                    "{},{},{}",
                    format_g(pt.p1_doubleprime),
                    format_g(pt.r1),
                    format_g(pt.r2)
                );
            }
            Ok(Output {
                json: Value::Object(m),
                csv: Some(csv),
            })
        }
        Command::ValidateMc {
            common,
            scene,
            n,
            seed,
            tol,
            composite_tol,
        } => {
            let set = common.params()?;
            let p = resolve(&set)?;
            let base = common.base();
            let (sc, single, composite) = mc_queries(&p, &set, *scene)?;
            let a = mc::validate(&sc, &single, *n, *seed, *tol, base).map_err(CliError::Domain)?;
            let b = mc::validate(&sc, &composite, *n, seed.wrapping_add(1), *composite_tol, base)
                .map_err(CliError::Domain)?;
            let pass = a.pass && b.pass;
            let mut m = envelope("validate-mc", common, &p);
            m.insert("terms".into(), to_value(&a));
            m.insert("identities".into(), to_value(&b));
            m.insert("pass".into(), json!(pass));
            let mut csv = format!("#schema_version={SCHEMA_VERSION}\ndescription,analytic,empirical,abs_err,tol\n");
            for (r, t) in [(&a, tol), (&b, composite_tol)] {
                for q in &r.pairs {
                    let _ = writeln!(
                        csv,
                        "\"{}\",{},{},{},{}",
                        q.description,
                        format_g(q.analytic),
                        format_g(q.empirical),
                        format_g(q.abs_err),
                        format_g(*t)
                    );
                }
            }
            Ok(Output {
                json: Value::Object(m),
                csv: Some(csv),
            })
        }
    }
}

type Queries = (sdic_core::GaussianScene, Vec<McQuery>, Vec<McQuery>);

fn term(a: &[&str], b: &[&str], c: &[&str]) -> MiTerm {
    MiTerm::new(a, b, c)
}

fn mc_queries(p: &IcParams, set: &ParamSet, scene: SceneArg) -> Result<Queries, CliError> {
    use sdic_core::very_strong::{U, V};
    let states = [S1, S2];
    Ok(match scene {
        SceneArg::VsIc | SceneArg::VsZic => {
            let sc = if scene == SceneArg::VsIc {
                very_strong::vs_ic_scene(p).map_err(CliError::Domain)?.0
            } else {
                very_strong::vs_zic_scene(p).map_err(CliError::Domain)?.0
            };
            let single = vec![
                McQuery::mi(&[X1], &[Y1]),
                McQuery::mi(&[U], &[Y2]),
                McQuery::mi(&[V], &[Y1]),
                McQuery::mi(&[V], &[Y2]),
                McQuery::mi(&[U], &[V, Y1]),
                McQuery::mi(&states, &[U]),
                McQuery::mi(&states, &[V]),
            ];
            let mut composite = vec![McQuery::combo(
                "I(U;V,Y1)-I(S1,S2;U)",
                vec![(1.0, term(&[U], &[V, Y1], &[])), (-1.0, term(&states, &[U], &[]))],
            )];
            if scene == SceneArg::VsIc {
                composite.push(McQuery::combo(
                    "I(V;U,Y2)-I(S1,S2;V)",
                    vec![(1.0, term(&[V], &[U, Y2], &[])), (-1.0, term(&states, &[V], &[]))],
                ));
            } else {
                composite.push(McQuery::combo(
                    "I(V;Y2)-I(S2;V)",
                    vec![(1.0, term(&[V], &[Y2], &[])), (-1.0, term(&[S2], &[V], &[]))],
                ));
            }
            (sc, single, composite)
        }
        SceneArg::StrongIc | SceneArg::StrongZic => {
            use sdic_core::strong::{U1, U2, V};
            if scene == SceneArg::StrongZic && p.b != 0.0 {
                return Err(CliError::Domain(sdic_core::Error::InvalidZic(p.b)));
            }
            let (sc, _) = strong::strong_scene(p, split(set)?).map_err(CliError::Domain)?;
            let single = vec![
                McQuery::mi(&[U1], &[Y1]),
                McQuery::mi(&[U1], &[Y2]),
                McQuery::mi(&[V], &[U1, Y1]),
                McQuery::mi(&[V], &[Y2]),
                McQuery::cmi(&[U2], &[V, Y1], &[U1]),
                McQuery::mi(&[U1, U2], &[S1]),
            ];
            let composite = vec![
                McQuery::combo(
                    "I(U1;Y1)-I(U1;S1)",
                    vec![(1.0, term(&[U1], &[Y1], &[])), (-1.0, term(&[U1], &[S1], &[]))],
                ),
                McQuery::combo(
                    "I(U2;V,Y1|U1)-I(U2;S1|U1)",
                    vec![(1.0, term(&[U2], &[V, Y1], &[U1])), (-1.0, term(&[U2], &[S1], &[U1]))],
                ),
                McQuery::combo(
                    "I(V;U1,Y1)-I(V;S1)",
                    vec![(1.0, term(&[V], &[U1, Y1], &[])), (-1.0, term(&[V], &[S1], &[]))],
                ),
            ];
            (sc, single, composite)
        }
    })
}
