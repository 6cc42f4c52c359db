//! Command dispatch: one [`Command`] against one [`Config`] gives one report
//! and an exit code.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use gradsym::algebroid::{
    decode_section, dorfman, encode_section, module_basis, render_basis, verify_courant, verify_leibniz, Section,
};
use gradsym::cartan::DiffForm;
use gradsym::genmetric::{act, build_gen_metric, extract, Background, GenMetric, Matrix};
use gradsym::npq::{
    master_equation, q_square_check, twist_closure, twist_potential, Hamiltonian, TwistPotential, DEFAULT_Q_SAMPLES,
};
use gradsym::report::{CheckOutcome, Report, Status};
use serde_json::{json, Value};

use crate::config::{Config, FormTerm, VectorTerm};
use crate::error::CliError;
use crate::expr::render_poly;

pub const DEFAULT_AXIOM_TRIALS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Courant,
    Leibniz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenmetricOp {
    Build,
    Act,
    Extract,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    CheckMaster,
    QSquare { samples: Option<usize>, seed: Option<u64> },
    Bracket { a: String, b: String },
    Axioms { suite: Suite, trials: Option<usize>, seed: Option<u64> },
    Rank { n: Option<u32> },
    Classify,
    Genmetric(GenmetricOp),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckMaster => "master equation",
            Command::QSquare { .. } => "q-square",
            Command::Bracket { .. } => "bracket",
            Command::Axioms { suite: Suite::Courant, .. } => "axioms courant",
            Command::Axioms { suite: Suite::Leibniz, .. } => "axioms leibniz",
            Command::Rank { .. } => "rank",
            Command::Classify => "classify",
            Command::Genmetric(GenmetricOp::Build) => "genmetric build",
            Command::Genmetric(GenmetricOp::Act) => "genmetric act",
            Command::Genmetric(GenmetricOp::Extract) => "genmetric extract",
        }
    }
}

/// Settings that come from flags or the environment rather than the config.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Options {
    pub max_coeff_degree: Option<u32>,
    /// Seed used when neither the command nor the config gives one.
    pub env_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub check: String,
    pub report: Option<Report>,
    pub error: Option<CliError>,
    /// Extra human-readable lines after the report.
    pub details: Vec<String>,
    /// Extra fields of the machine report.
    pub extra: BTreeMap<String, Value>,
}

impl Outcome {
    fn from_report(report: Report) -> Self {
        Outcome { check: report.check.clone(), report: Some(report), error: None, details: Vec::new(), extra: BTreeMap::new() }
    }

    pub fn error(check: &str, error: CliError) -> Self {
        Outcome { check: check.into(), report: None, error: Some(error), details: Vec::new(), extra: BTreeMap::new() }
    }

    fn detail(mut self, line: impl Into<String>) -> Self {
        self.details.push(line.into());
        self
    }

    fn field(mut self, key: &str, v: Value) -> Self {
        self.extra.insert(key.into(), v);
        self
    }

    /// 0 = every check passed, 1 = a verified violation, 2 = input error.
    pub fn exit_code(&self) -> i32 {
        match (&self.error, &self.report) {
            (Some(_), _) => 2,
            (None, Some(r)) if r.passed() => 0,
            _ => 1,
        }
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        if let Some(e) = &self.error {
            let _ = writeln!(out, "{}: ERROR", self.check);
            let _ = writeln!(out, "  error: {e}");
            return out;
        }
        if let Some(r) = &self.report {
            out.push_str(&r.to_string());
        }
        for d in &self.details {
            let _ = writeln!(out, "{d}");
        }
        out
    }

    pub fn render_json(&self) -> String {
        let mut v = match (&self.report, &self.error) {
            (_, Some(e)) => json!({ "check": self.check, "status": "ERROR", "error": e.to_string(), "witnesses": [] }),
            (Some(r), None) => serde_json::to_value(r).expect("report serializes"),
            (None, None) => unreachable!("an outcome carries a report or an error"),
        };
        if let Value::Object(map) = &mut v {
            for (k, x) in &self.extra {
                map.insert(k.clone(), x.clone());
            }
        }
        let mut s = serde_json::to_string_pretty(&v).expect("json value");
        s.push('\n');
        s
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            self.render_json()
        } else {
            self.render_human()
        }
    }
}

fn input(field: impl Into<String>, e: impl ToString) -> CliError {
    CliError::Input { field: field.into(), message: e.to_string() }
}

fn resolve_seed(flag: Option<u64>, cfg: &Config, opts: &Options) -> u64 {
    flag.or(cfg.harness.seed).or(opts.env_seed).unwrap_or(0)
}

/// Executes one command; never panics on bad input.
pub fn run(cmd: &Command, cfg: &Config, opts: &Options) -> Outcome {
    match run_inner(cmd, cfg, opts) {
        Ok(o) => o,
        Err(e) => Outcome::error(cmd.name(), e),
    }
}

fn run_inner(cmd: &Command, cfg: &Config, opts: &Options) -> Result<Outcome, CliError> {
    let chart = cfg.chart()?;
    let spec = cfg.random_spec(opts.max_coeff_degree);
    match cmd {
        Command::CheckMaster => {
            let theta = cfg.theta(&chart)?;
            let (tt, ok) = master_equation(&theta);
            let mut item = CheckOutcome::new("(Θ, Θ) = 0");
            item.record(0, ok, || tt.witnesses(3));
            let closed = twist_closure(&theta).iter().all(|(_, w)| w.is_zero());
            let report = Report::from_items(cmd.name(), vec![item], None, None)
                .with_note(format!("de Rham closure of the twist: {}", Status::from_bool(closed)));
            Ok(Outcome::from_report(report))
        }
        Command::QSquare { samples, seed } => {
            let theta = cfg.theta(&chart)?;
            let samples = samples.or(cfg.harness.trials).unwrap_or(DEFAULT_Q_SAMPLES);
            let seed = resolve_seed(*seed, cfg, opts);
            Ok(Outcome::from_report(q_square_check(&theta, samples, seed, &spec)))
        }
        Command::Bracket { a, b } => {
            let theta = cfg.theta(&chart)?;
            let sa = cfg.section(&chart, a)?;
            let sb = cfg.section(&chart, b)?;
            let ea = encode_section(&chart, &sa).map_err(|e| input(format!("sections.{a}"), e))?;
            let eb = encode_section(&chart, &sb).map_err(|e| input(format!("sections.{b}"), e))?;
            let l = dorfman(&theta, &ea, &eb).map_err(|e| input("sections", e))?;
            let mut item = CheckOutcome::new("result is a section");
            let decoded = decode_section(&chart, &l);
            item.record(0, decoded.is_ok(), || l.witnesses(3));
            let mut out = Outcome::from_report(Report::from_items(cmd.name(), vec![item], None, None))
                .detail(format!("L_{a} {b} = {l}"))
                .field("result", Value::String(l.to_string()));
            if let Ok(s) = decoded {
                for line in render_section(&s) {
                    out = out.detail(format!("  {line}"));
                }
                out = out.field("section", section_json(&s));
            }
            Ok(out)
        }
        Command::Axioms { suite, trials, seed } => {
            let theta = cfg.theta(&chart)?;
            let trials = trials.or(cfg.harness.trials).unwrap_or(DEFAULT_AXIOM_TRIALS);
            let seed = resolve_seed(*seed, cfg, opts);
            let report = match suite {
                Suite::Courant => verify_courant(&theta, trials, seed, &spec),
                Suite::Leibniz => verify_leibniz(&theta, trials, seed, &spec),
            }
            .map_err(|e| input("chart", e))?;
            Ok(Outcome::from_report(report))
        }
        Command::Rank { n } => {
            let degrees: Vec<u32> = match n {
                Some(n) => vec![*n],
                None => (0..=chart.p).collect(),
            };
            let mut table = Vec::new();
            let mut lines = Vec::new();
            let mut notes = Vec::new();
            for k in degrees {
                let mb = module_basis(&chart, k).map_err(|e| input("--n", e))?;
                lines.push(format!("n={k}: {}", mb.basis.len()));
                if let Some(w) = &mb.warning {
                    notes.push(w.clone());
                }
                table.push(json!({ "n": k, "rank": mb.basis.len(), "basis": render_basis(&chart, &mb.basis) }));
            }
            let mut report = Report::from_items(cmd.name(), Vec::new(), None, None);
            report.notes = notes;
            let mut out = Outcome::from_report(report).field("table", Value::Array(table));
            for l in lines {
                out = out.detail(l);
            }
            Ok(out)
        }
        Command::Classify => {
            let theta = cfg.theta(&chart)?;
            classify(cmd, &theta)
        }
        Command::Genmetric(op) => genmetric(cmd, *op, cfg),
    }
}

fn classify(cmd: &Command, theta: &Hamiltonian) -> Result<Outcome, CliError> {
    let items: Vec<CheckOutcome> = twist_closure(theta)
        .into_iter()
        .map(|(name, w)| {
            let mut item = CheckOutcome::new(format!("{name} = 0"));
            item.record(0, w.is_zero(), || vec![w.to_string()]);
            item
        })
        .collect();
    let report = Report::from_items(cmd.name(), items, None, None);
    if !report.passed() {
        return Ok(Outcome::from_report(report).detail("twist is not closed; no algebroid"));
    }
    let potential = twist_potential(theta).map_err(|e| input("theta", e))?;
    let out = Outcome::from_report(report);
    Ok(match potential {
        TwistPotential::None => out.detail("untwisted").field("class", json!("untwisted")),
        TwistPotential::Beta(k) => out
            .detail("class: trivial (every closed form on a chart is exact)")
            .detail(format!("  β = dκ with κ = {k}"))
            .field("class", json!("trivial"))
            .field("potential", json!({ "kappa": form_json(&k) })),
        TwistPotential::M5 { c3, c6 } => out
            .detail("class: trivial (every closed form on a chart is exact)")
            .detail(format!("  F4 = dC with C = {c3}"))
            .detail(format!("  F7 + 1/2 C∧F4 = dC6 with C6 = {c6}"))
            .field("class", json!("trivial"))
            .field("potential", json!({ "C3": form_json(&c3), "C6": form_json(&c6) })),
    })
}

fn genmetric(cmd: &Command, op: GenmetricOp, cfg: &Config) -> Result<Outcome, CliError> {
    let g = cfg.matrix("g")?.ok_or_else(|| input("matrices.g", "required"))?;
    let b = cfg.matrix("b")?.unwrap_or_else(|| Matrix::zeros(g.rows(), g.cols()));
    let bg = Background::new(g, b).map_err(|e| input("matrices", e))?;
    let h = build_gen_metric(&bg).map_err(|e| input("matrices", e))?;
    let target = match op {
        GenmetricOp::Build => h,
        GenmetricOp::Act | GenmetricOp::Extract => match cfg.matrix("O")? {
            Some(o) => act(&o, &h).map_err(|e| input("matrices.O", e))?,
            None if op == GenmetricOp::Act => return Err(input("matrices.O", "required")),
            None => h,
        },
    };
    let items = invariant_items(&target);
    let mut out = Outcome::from_report(Report::from_items(cmd.name(), items, None, None))
        .detail("H =")
        .detail(indent(&target.h().to_string()))
        .field("H", matrix_json(target.h()));
    if op != GenmetricOp::Build {
        let back = extract(&target).map_err(|e| input("matrices", e))?;
        out = out
            .detail("g =")
            .detail(indent(&back.g().to_string()))
            .detail("b =")
            .detail(indent(&back.b().to_string()))
            .field("g", matrix_json(back.g()))
            .field("b", matrix_json(back.b()));
    }
    Ok(out)
}

fn invariant_items(h: &GenMetric) -> Vec<CheckOutcome> {
    let mut sym = CheckOutcome::new("H symmetric");
    sym.record(0, h.h().is_symmetric(), || vec![h.h().to_string()]);
    let mut odd = CheckOutcome::new("H η H = η");
    odd.record(0, h.invariants_hold(), || vec![h.h().to_string()]);
    vec![sym, odd]
}

fn indent(block: &str) -> String {
    block.lines().map(|l| format!("  {l}")).collect::<Vec<_>>().join("\n")
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| json!(m.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>())).collect())
}

fn form_terms(w: &DiffForm) -> Vec<FormTerm> {
    w.components()
        .map(|(idx, c)| FormTerm { indices: idx.iter().map(|i| i + 1).collect(), coeff: render_poly(c) })
        .collect()
}

fn form_json(w: &DiffForm) -> Value {
    serde_json::to_value(form_terms(w)).expect("terms serialize")
}

fn section_json(s: &Section) -> Value {
    let v: Vec<VectorTerm> = s
        .v
        .0
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| VectorTerm { index: i + 1, coeff: render_poly(c) })
        .collect();
    let mut out = json!({ "v": v, "lambda": form_json(&s.lambda) });
    if let Some(sigma) = &s.sigma {
        out["sigma"] = form_json(sigma);
    }
    out
}

fn render_section(s: &Section) -> Vec<String> {
    let v: Vec<String> = s
        .v
        .0
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| format!("({c}) ∂{}", i + 1))
        .collect();
    let mut out = vec![
        format!("v = {}", if v.is_empty() { "0".into() } else { v.join(" + ") }),
        format!("lambda = {}", s.lambda),
    ];
    if let Some(sigma) = &s.sigma {
        out.push(format!("sigma = {sigma}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn cfg(text: &str) -> Config {
        parse_config(text).unwrap()
    }

    const CLOSED: &str = r#"{ "chart": { "kind": "vinogradov", "d": 3, "p": 2 },
        "theta": { "type": "vinogradov", "beta": [ { "indices": [1, 2, 3], "coeff": "1" } ] } }"#;
    const OPEN: &str = r#"{ "chart": { "kind": "vinogradov", "d": 4, "p": 2 },
        "theta": { "type": "vinogradov", "beta": [ { "indices": [1, 2, 3], "coeff": "x4" } ] } }"#;

    #[test]
    fn check_master_pass_and_fail() {
        let o = run(&Command::CheckMaster, &cfg(CLOSED), &Options::default());
        assert_eq!(o.exit_code(), 0);
        assert!(o.render_human().starts_with("master equation: PASS\n"));
        let o = run(&Command::CheckMaster, &cfg(OPEN), &Options::default());
        assert_eq!(o.exit_code(), 1);
        assert!(o.render_human().contains("ψ1ψ2ψ3ψ4"));
    }

    #[test]
    fn leibniz_on_open_twist_fails_with_witness() {
        let cmd = Command::Axioms { suite: Suite::Leibniz, trials: Some(20), seed: Some(1) };
        let o = run(&cmd, &cfg(OPEN), &Options::default());
        assert_eq!(o.exit_code(), 1);
        assert!(!o.report.unwrap().witnesses.is_empty());
    }

    #[test]
    fn courant_needs_p2() {
        let c = cfg(r#"{ "chart": { "kind": "vinogradov", "d": 3, "p": 3 } }"#);
        let cmd = Command::Axioms { suite: Suite::Courant, trials: Some(2), seed: None };
        assert_eq!(run(&cmd, &c, &Options::default()).exit_code(), 2);
    }

    #[test]
    fn rank_table() {
        let c = cfg(r#"{ "chart": { "kind": "m5", "d": 6 } }"#);
        let o = run(&Command::Rank { n: None }, &c, &Options::default());
        assert!(o.render_human().contains("n=5: 27\n"));
        assert_eq!(run(&Command::Rank { n: Some(7) }, &c, &Options::default()).exit_code(), 2);
        let c = cfg(r#"{ "chart": { "kind": "vinogradov", "d": 4, "p": 3 } }"#);
        assert!(run(&Command::Rank { n: Some(2) }, &c, &Options::default()).render_human().contains("n=2: 10"));
    }

    #[test]
    fn seed_precedence() {
        let c = cfg(r#"{ "chart": { "kind": "vinogradov", "d": 2, "p": 2 }, "harness": { "seed": 5 } }"#);
        let env = Options { env_seed: Some(9), ..Options::default() };
        assert_eq!(resolve_seed(Some(1), &c, &env), 1);
        assert_eq!(resolve_seed(None, &c, &env), 5);
        let bare = cfg(r#"{ "chart": { "kind": "vinogradov", "d": 2, "p": 2 } }"#);
        assert_eq!(resolve_seed(None, &bare, &env), 9);
        assert_eq!(resolve_seed(None, &bare, &Options::default()), 0);
    }

    #[test]
    fn bracket_of_named_sections() {
        let c = cfg(r#"{ "chart": { "kind": "vinogradov", "d": 2, "p": 2 },
            "sections": { "A": { "v": [ { "index": 1, "coeff": "1" } ] },
                          "B": { "v": [ { "index": 2, "coeff": "x1" } ] } } }"#);
        let o = run(&Command::Bracket { a: "A".into(), b: "B".into() }, &c, &Options::default());
        assert_eq!(o.exit_code(), 0);
        assert_eq!(o.extra["section"]["v"], json!([{ "index": 2, "coeff": "1" }]));
        let missing = run(&Command::Bracket { a: "A".into(), b: "Z".into() }, &c, &Options::default());
        assert_eq!(missing.exit_code(), 2);
    }

    #[test]
    fn classify_closed_and_open() {
        let o = run(&Command::Classify, &cfg(CLOSED), &Options::default());
        assert_eq!(o.exit_code(), 0);
        assert_eq!(o.extra["class"], json!("trivial"));
        assert_eq!(run(&Command::Classify, &cfg(OPEN), &Options::default()).exit_code(), 1);
    }

    #[test]
    fn genmetric_commands() {
        let c = cfg(r#"{ "chart": { "kind": "vinogradov", "d": 1, "p": 2 },
            "matrices": { "g": [["2"]], "O": [["0", "1"], ["1", "0"]] } }"#);
        let o = run(&Command::Genmetric(GenmetricOp::Extract), &c, &Options::default());
        assert_eq!(o.exit_code(), 0);
        assert_eq!(o.extra["g"], json!([["1/2"]]));
        let bad = cfg(r#"{ "chart": { "kind": "vinogradov", "d": 1, "p": 2 },
            "matrices": { "g": [["2"]], "O": [["2", "0"], ["0", "2"]] } }"#);
        assert_eq!(run(&Command::Genmetric(GenmetricOp::Act), &bad, &Options::default()).exit_code(), 2);
    }

    #[test]
    fn json_report_fields() {
        let o = run(&Command::CheckMaster, &cfg(CLOSED), &Options::default());
        let v: Value = serde_json::from_str(&o.render_json()).unwrap();
        for key in ["check", "status", "witnesses", "seed", "trials"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}
