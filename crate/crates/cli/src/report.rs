//! Report emission in canonical JSON, CSV, and human-readable text.
//!
//! JSON output is canonical: object keys are sorted and every float is
//! written with 17 significant digits, so identical inputs produce
//! byte-identical documents. CSV column orders are fixed and documented
//! in the README. Wall-clock time appears only in text output.

use std::collections::BTreeMap;

use opframe::frames::FrameClassification;
use opframe::harness::{CampaignConfig, CampaignReport};
use opframe::{Certificate, FrameBounds};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(format!(
                "unknown format `{other}` (expected json, csv, or text)"
            )),
        }
    }
}

/// 17 significant digits; round-trips every finite f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

/// Minimal JSON document model with canonical rendering.
pub enum Val {
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Val>),
    Obj(BTreeMap<String, Val>),
}

impl Val {
    pub fn obj(pairs: Vec<(&str, Val)>) -> Val {
        Val::Obj(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            Val::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Val::Int(i) => out.push_str(&i.to_string()),
            Val::Num(x) => out.push_str(&fmt_f64(*x)),
            Val::Str(s) => out.push_str(&serde_json::to_string(s).expect("string encodes")),
            Val::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Val::Obj(map) => {
                out.push('{');
                for (i, (k, v)) in map.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&serde_json::to_string(k).expect("string encodes"));
                    out.push(':');
                    v.write(out);
                }
                out.push('}');
            }
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn bounds_val(b: &FrameBounds) -> Val {
    Val::obj(vec![
        ("lower", Val::Num(b.lower)),
        ("upper", Val::Num(b.upper)),
    ])
}

fn certificate_val(cert: &Certificate) -> Val {
    Val::obj(vec![
        ("theorem", Val::Str(cert.theorem.name().to_string())),
        ("hypothesis_ok", Val::Bool(cert.hypothesis_ok)),
        ("hypothesis_margin", Val::Num(cert.hypothesis_margin)),
        ("certified", bounds_val(&cert.certified)),
        ("observed", bounds_val(&cert.observed)),
        ("lower_slack", Val::Num(cert.lower_slack)),
        ("upper_slack", Val::Num(cert.upper_slack)),
        ("encloses", Val::Bool(cert.encloses())),
        ("notes", Val::Str(cert.notes.clone())),
    ])
}

pub const CERTIFICATE_CSV_HEADER: &str = "theorem,hypothesis_ok,hypothesis_margin,certified_lower,certified_upper,observed_lower,observed_upper,lower_slack,upper_slack,encloses,notes";

fn certificate_csv_row(cert: &Certificate) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        cert.theorem.name(),
        cert.hypothesis_ok,
        fmt_f64(cert.hypothesis_margin),
        fmt_f64(cert.certified.lower),
        fmt_f64(cert.certified.upper),
        fmt_f64(cert.observed.lower),
        fmt_f64(cert.observed.upper),
        fmt_f64(cert.lower_slack),
        fmt_f64(cert.upper_slack),
        cert.encloses(),
        csv_field(&cert.notes),
    )
}

pub fn certificate_report(cert: &Certificate, format: Format) -> String {
    match format {
        Format::Json => certificate_val(cert).render(),
        Format::Csv => format!("{CERTIFICATE_CSV_HEADER}\n{}\n", certificate_csv_row(cert)),
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!("theorem            {}\n", cert.theorem.name()));
            out.push_str(&format!(
                "hypothesis         {}\n",
                if cert.hypothesis_ok {
                    "satisfied"
                } else {
                    "NOT satisfied"
                }
            ));
            out.push_str(&format!(
                "hypothesis margin  {:.6e}\n",
                cert.hypothesis_margin
            ));
            out.push_str(&format!(
                "certified bounds   [{:.6e}, {:.6e}]\n",
                cert.certified.lower, cert.certified.upper
            ));
            out.push_str(&format!(
                "observed bounds    [{:.6e}, {:.6e}]\n",
                cert.observed.lower, cert.observed.upper
            ));
            out.push_str(&format!(
                "slack              lower {:.6e}, upper {:.6e}\n",
                cert.lower_slack, cert.upper_slack
            ));
            out.push_str(&format!("encloses           {}\n", cert.encloses()));
            out.push_str(&format!("notes              {}\n", cert.notes));
            out
        }
    }
}

fn campaign_config_val(cfg: &CampaignConfig) -> Val {
    Val::obj(vec![
        ("seed", Val::Int(cfg.seed as i64)),
        ("trials", Val::Int(cfg.trials as i64)),
        (
            "dims",
            Val::Arr(
                cfg.dims
                    .iter()
                    .map(|&(d, n, m)| Val::Str(format!("{d}x{n}x{m}")))
                    .collect(),
            ),
        ),
        (
            "theorems",
            Val::Arr(
                cfg.theorems
                    .iter()
                    .map(|t| Val::Str(t.name().to_string()))
                    .collect(),
            ),
        ),
        ("tol_rel", Val::Num(cfg.tolerance.rel)),
        ("tol_abs", Val::Num(cfg.tolerance.abs_floor)),
    ])
}

/// Canonical JSON body of a campaign: configuration echo plus per-theorem
/// aggregates. Deliberately excludes wall time so identical seeds give
/// identical bytes.
pub fn campaign_json(cfg: &CampaignConfig, report: &CampaignReport) -> String {
    let mut theorems = BTreeMap::new();
    for (id, stats) in &report.stats {
        theorems.insert(
            id.name().to_string(),
            Val::obj(vec![
                ("trials", Val::Int(stats.trials as i64)),
                (
                    "hypotheses_satisfied",
                    Val::Int(stats.hypotheses_satisfied as i64),
                ),
                (
                    "enclosure_failures",
                    Val::Int(stats.enclosure_failures as i64),
                ),
                ("min_lower_slack", Val::Num(stats.min_lower_slack)),
                ("min_upper_slack", Val::Num(stats.min_upper_slack)),
                (
                    "tightness_histogram",
                    Val::Arr(
                        stats
                            .tightness_histogram
                            .iter()
                            .map(|&c| Val::Int(c as i64))
                            .collect(),
                    ),
                ),
            ]),
        );
    }
    Val::obj(vec![
        ("config", campaign_config_val(cfg)),
        ("theorems", Val::Obj(theorems)),
        (
            "total_enclosure_failures",
            Val::Int(report.total_enclosure_failures() as i64),
        ),
        (
            "total_hypothesis_failures",
            Val::Int(report.total_hypothesis_failures() as i64),
        ),
    ])
    .render()
}

pub const CAMPAIGN_CSV_HEADER: &str = "theorem,trial,hypothesis_ok,hypothesis_margin,certified_lower,certified_upper,observed_lower,observed_upper,lower_slack,upper_slack,encloses,notes";

/// One row per (theorem, trial).
pub fn campaign_csv(report: &CampaignReport) -> String {
    let mut out = String::with_capacity(64 * report.records.len());
    out.push_str(CAMPAIGN_CSV_HEADER);
    out.push('\n');
    for rec in &report.records {
        let c = &rec.certificate;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            rec.theorem.name(),
            rec.trial,
            c.hypothesis_ok,
            fmt_f64(c.hypothesis_margin),
            fmt_f64(c.certified.lower),
            fmt_f64(c.certified.upper),
            fmt_f64(c.observed.lower),
            fmt_f64(c.observed.upper),
            fmt_f64(c.lower_slack),
            fmt_f64(c.upper_slack),
            c.encloses(),
            csv_field(&c.notes),
        ));
    }
    out
}

pub fn campaign_text(cfg: &CampaignConfig, report: &CampaignReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "campaign: seed={} trials={} theorems={}\n",
        cfg.seed,
        cfg.trials,
        report.stats.len()
    ));
    out.push_str(
        "theorem                    trials  ok      encl_fail  min_lower_slack  min_upper_slack\n",
    );
    for (id, s) in &report.stats {
        out.push_str(&format!(
            "{:<26} {:>6}  {:>6}  {:>9}  {:>15.6e}  {:>15.6e}\n",
            id.name(),
            s.trials,
            s.hypotheses_satisfied,
            s.enclosure_failures,
            s.min_lower_slack,
            s.min_upper_slack
        ));
    }
    out.push_str(&format!(
        "totals: enclosure_failures={} hypothesis_failures={} wall_time={:.3}s\n",
        report.total_enclosure_failures(),
        report.total_hypothesis_failures(),
        report.wall_time.as_secs_f64()
    ));
    out
}

/// Analysis of a single instance: classification plus optional K bounds.
pub struct Analysis {
    pub classification: FrameClassification,
    pub k_bounds: Option<(FrameBounds, bool)>,
    pub remark_lower: Option<f64>,
}

pub fn analysis_report(a: &Analysis, format: Format) -> String {
    match format {
        Format::Json => {
            let mut pairs = vec![
                ("bounds", bounds_val(&a.classification.bounds)),
                ("is_bessel", Val::Bool(a.classification.is_bessel)),
                ("is_frame", Val::Bool(a.classification.is_frame)),
                ("is_tight", Val::Bool(a.classification.is_tight)),
                ("is_parseval", Val::Bool(a.classification.is_parseval)),
            ];
            if let Some((kb, is_k)) = &a.k_bounds {
                pairs.push(("k_bounds", bounds_val(kb)));
                pairs.push(("is_k_frame", Val::Bool(*is_k)));
            }
            if let Some(r) = a.remark_lower {
                pairs.push(("k_lower_from_frame_bound", Val::Num(r)));
            }
            Val::obj(pairs).render()
        }
        Format::Csv => {
            let mut header = String::from("lower,upper,is_bessel,is_frame,is_tight,is_parseval");
            let mut row = format!(
                "{},{},{},{},{},{}",
                fmt_f64(a.classification.bounds.lower),
                fmt_f64(a.classification.bounds.upper),
                a.classification.is_bessel,
                a.classification.is_frame,
                a.classification.is_tight,
                a.classification.is_parseval
            );
            if let Some((kb, is_k)) = &a.k_bounds {
                header.push_str(",k_lower,k_upper,is_k_frame");
                row.push_str(&format!(
                    ",{},{},{}",
                    fmt_f64(kb.lower),
                    fmt_f64(kb.upper),
                    is_k
                ));
            }
            format!("{header}\n{row}\n")
        }
        Format::Text => {
            let b = &a.classification.bounds;
            let mut out = format!("optimal bounds     [{:.6e}, {:.6e}]\n", b.lower, b.upper);
            out.push_str(&format!(
                "classification     bessel={} frame={} tight={} parseval={}\n",
                a.classification.is_bessel,
                a.classification.is_frame,
                a.classification.is_tight,
                a.classification.is_parseval
            ));
            if let Some((kb, is_k)) = &a.k_bounds {
                out.push_str(&format!(
                    "K bounds           [{:.6e}, {:.6e}] k_frame={}\n",
                    kb.lower, kb.upper, is_k
                ));
            }
            if let Some(r) = a.remark_lower {
                out.push_str(&format!(
                    "A/\u{2016}K\u{2016}\u{00b2} lower bound {r:.6e}\n"
                ));
            }
            out
        }
    }
}

/// Pencil-versus-oracle cross-check of one instance.
pub struct OracleCheck {
    pub pencil_sup: Option<f64>,
    pub oracle_sup: Option<f64>,
    pub sup_agrees: bool,
    pub pencil_inf: f64,
    pub oracle_inf: Option<f64>,
    pub inf_agrees: bool,
    pub effective_rank: usize,
    pub samples: usize,
}

pub fn oracle_report(o: &OracleCheck, format: Format) -> String {
    let sup_str = |v: &Option<f64>| v.map_or("unbounded".to_string(), |x| format!("{x:.12e}"));
    match format {
        Format::Json => Val::obj(vec![
            (
                "pencil_sup",
                o.pencil_sup.map_or(Val::Str("unbounded".into()), Val::Num),
            ),
            (
                "oracle_sup",
                o.oracle_sup.map_or(Val::Str("none".into()), Val::Num),
            ),
            ("sup_agrees", Val::Bool(o.sup_agrees)),
            ("pencil_inf", Val::Num(o.pencil_inf)),
            (
                "oracle_inf",
                o.oracle_inf.map_or(Val::Str("none".into()), Val::Num),
            ),
            ("inf_agrees", Val::Bool(o.inf_agrees)),
            ("effective_rank", Val::Int(o.effective_rank as i64)),
            ("samples", Val::Int(o.samples as i64)),
        ])
        .render(),
        Format::Csv => format!(
            "pencil_sup,oracle_sup,sup_agrees,pencil_inf,oracle_inf,inf_agrees,effective_rank,samples\n{},{},{},{},{},{},{},{}\n",
            o.pencil_sup.map_or("unbounded".to_string(), fmt_f64),
            o.oracle_sup.map_or("none".to_string(), fmt_f64),
            o.sup_agrees,
            fmt_f64(o.pencil_inf),
            o.oracle_inf.map_or("none".to_string(), fmt_f64),
            o.inf_agrees,
            o.effective_rank,
            o.samples,
        ),
        Format::Text => format!(
            "pencil sup       {}\noracle sup       {}\nsup agrees       {}\npencil inf       {:.12e}\noracle inf       {}\ninf agrees       {}\neffective rank   {}\nsamples          {}\n",
            sup_str(&o.pencil_sup),
            sup_str(&o.oracle_sup),
            o.sup_agrees,
            o.pencil_inf,
            sup_str(&o.oracle_inf),
            o.inf_agrees,
            o.effective_rank,
            o.samples,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use opframe::harness::run_campaign;
    use opframe::perturbation::TheoremId;
    use opframe::Tolerance;

    #[test]
    fn campaign_csv_has_one_row_per_trial_and_theorem() {
        let cfg = CampaignConfig {
            seed: 5,
            trials: 2,
            dims: vec![(1, 2, 2)],
            theorems: vec![TheoremId::BesselSumPlus, TheoremId::MinCondition],
            tolerance: Tolerance::default(),
        };
        let report = run_campaign(&cfg).unwrap();
        let csv = campaign_csv(&report);
        let rows: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(rows.len(), 1 + 2 * 2);
        assert_eq!(rows[0], CAMPAIGN_CSV_HEADER);
    }

    #[test]
    fn empty_campaign_emits_valid_tables() {
        let cfg = CampaignConfig {
            seed: 0,
            trials: 1,
            dims: vec![(1, 1, 1)],
            theorems: vec![],
            tolerance: Tolerance::default(),
        };
        let report = opframe::harness::CampaignReport {
            stats: vec![],
            records: vec![],
            wall_time: std::time::Duration::ZERO,
        };
        let json = campaign_json(&cfg, &report);
        assert!(serde_json::from_str::<serde_json::Value>(&json).is_ok());
        assert_eq!(campaign_csv(&report), format!("{CAMPAIGN_CSV_HEADER}\n"));
        assert!(!campaign_text(&cfg, &report).is_empty());
    }

    #[test]
    fn certificate_json_is_repeatable() {
        let cfg = CampaignConfig {
            seed: 5,
            trials: 1,
            dims: vec![(1, 2, 2)],
            theorems: vec![TheoremId::Weighted],
            tolerance: Tolerance::default(),
        };
        let report = run_campaign(&cfg).unwrap();
        let cert = &report.records[0].certificate;
        let a = certificate_report(cert, Format::Json);
        let b = certificate_report(cert, Format::Json);
        assert_eq!(a.as_bytes(), b.as_bytes());
        assert!(serde_json::from_str::<serde_json::Value>(&a).is_ok());
    }

    #[test]
    fn fmt_f64_round_trips() {
        for &x in &[
            0.0,
            1.0,
            -2.5e-3,
            std::f64::consts::PI,
            1.0 / 3.0,
            1e300,
            -1e-300,
        ] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn json_objects_sort_keys() {
        let v = Val::obj(vec![("zebra", Val::Int(1)), ("apple", Val::Bool(true))]);
        assert_eq!(v.render(), "{\"apple\":true,\"zebra\":1}");
    }

    #[test]
    fn csv_fields_escape_commas_and_quotes() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
