//! JSON configuration documents and their validation into engine values.

use std::collections::BTreeMap;
use std::sync::Arc;

use gradsym::algebra::{make_chart, ChartKind, ChartSpec, Poly};
use gradsym::algebroid::Section;
use gradsym::cartan::{DiffForm, VectorField};
use gradsym::genmetric::Matrix;
use gradsym::npq::{theta_m5, theta_vinogradov, Hamiltonian};
use gradsym::random::RandomSpec;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::expr::{parse_poly, parse_rational, render_poly};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub chart: ChartConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaConfig>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sections: BTreeMap<String, SectionConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<MatricesConfig>,
    #[serde(default)]
    pub harness: HarnessConfig,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartConfig {
    pub kind: String,
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaConfig {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<FormTerm>>,
    #[serde(rename = "F4", default, skip_serializing_if = "Option::is_none")]
    pub f4: Option<Vec<FormTerm>>,
    #[serde(rename = "F7", default, skip_serializing_if = "Option::is_none")]
    pub f7: Option<Vec<FormTerm>>,
}

/// One component `coeff dx^{indices}`; indices are 1-based and ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormTerm {
    pub indices: Vec<usize>,
    pub coeff: String,
}

/// One component `coeff ∂_index` of a vector field, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorTerm {
    pub index: usize,
    pub coeff: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionConfig {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub v: Vec<VectorTerm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lambda: Vec<FormTerm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sigma: Vec<FormTerm>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatricesConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<String>>>,
    #[serde(rename = "O", default, skip_serializing_if = "Option::is_none")]
    pub o: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarnessConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_coeff_degree: Option<u32>,
}

pub fn parse_config(text: &str) -> Result<Config, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })
}

pub fn render_config(cfg: &Config) -> String {
    serde_json::to_string_pretty(cfg).expect("config serializes")
}

fn input(field: impl Into<String>, message: impl ToString) -> CliError {
    CliError::Input { field: field.into(), message: message.to_string() }
}

impl Config {
    /// Rewrites every coefficient and matrix entry in canonical rendering.
    pub fn canonical(&self) -> Result<Config, CliError> {
        let mut out = self.clone();
        let d = self.chart.d;
        let canon = |s: &mut String, field: String| -> Result<(), CliError> {
            *s = render_poly(&parse_poly(s, d).map_err(|e| input(field, e))?);
            Ok(())
        };
        if let Some(th) = out.theta.as_mut() {
            for (name, terms) in [("beta", &mut th.beta), ("F4", &mut th.f4), ("F7", &mut th.f7)] {
                for (i, t) in terms.iter_mut().flatten().enumerate() {
                    canon(&mut t.coeff, format!("theta.{name}[{i}].coeff"))?;
                }
            }
        }
        for (name, s) in out.sections.iter_mut() {
            for (i, t) in s.v.iter_mut().enumerate() {
                canon(&mut t.coeff, format!("sections.{name}.v[{i}].coeff"))?;
            }
            for (part, terms) in [("lambda", &mut s.lambda), ("sigma", &mut s.sigma)] {
                for (i, t) in terms.iter_mut().enumerate() {
                    canon(&mut t.coeff, format!("sections.{name}.{part}[{i}].coeff"))?;
                }
            }
        }
        if let Some(m) = out.matrices.as_mut() {
            for (name, rows) in [("g", &mut m.g), ("b", &mut m.b), ("O", &mut m.o)] {
                for (i, row) in rows.iter_mut().flatten().enumerate() {
                    for (j, e) in row.iter_mut().enumerate() {
                        let q = parse_rational(e).map_err(|err| input(format!("matrices.{name}[{i}][{j}]"), err))?;
                        *e = q.to_string();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn chart(&self) -> Result<Arc<ChartSpec>, CliError> {
        let c = &self.chart;
        let kind = match c.kind.as_str() {
            "vinogradov" => ChartKind::Vinogradov { d: c.d, p: c.p.ok_or_else(|| input("chart.p", "required for a vinogradov chart"))? },
            "m5" => {
                if c.p.is_some_and(|p| p != 6) {
                    return Err(input("chart.p", "an m5 chart has p = 6"));
                }
                ChartKind::M5 { d: c.d }
            }
            other => return Err(input("chart.kind", format!("unknown chart kind '{other}' (expected vinogradov or m5)"))),
        };
        make_chart(kind).map_err(|e| input("chart", e))
    }

    pub fn theta(&self, chart: &Arc<ChartSpec>) -> Result<Hamiltonian, CliError> {
        let d = chart.d;
        let Some(th) = &self.theta else {
            return Ok(Hamiltonian::untwisted(chart));
        };
        match th.kind.as_str() {
            "vinogradov" => {
                if th.f4.is_some() || th.f7.is_some() {
                    return Err(input("theta", "F4/F7 belong to an m5 hamiltonian"));
                }
                let rank = chart.p as usize + 1;
                let beta = form_of(th.beta.as_deref().unwrap_or_default(), d, rank, "theta.beta")?;
                theta_vinogradov(chart, &beta).map_err(|e| input("theta.type", e))
            }
            "m5" => {
                if th.beta.is_some() {
                    return Err(input("theta.beta", "beta belongs to a vinogradov hamiltonian"));
                }
                let f4 = form_of(th.f4.as_deref().unwrap_or_default(), d, 4, "theta.F4")?;
                let f7 = form_of(th.f7.as_deref().unwrap_or_default(), d, 7, "theta.F7")?;
                theta_m5(chart, &f4, &f7).map_err(|e| input("theta.type", e))
            }
            other => Err(input("theta.type", format!("unknown hamiltonian type '{other}' (expected vinogradov or m5)"))),
        }
    }

    pub fn section(&self, chart: &Arc<ChartSpec>, name: &str) -> Result<Section, CliError> {
        let s = self
            .sections
            .get(name)
            .ok_or_else(|| input(format!("sections.{name}"), "no such section"))?;
        let d = chart.d;
        let field = |part: &str| format!("sections.{name}.{part}");
        let mut v = VectorField::zero(d);
        for (i, t) in s.v.iter().enumerate() {
            if t.index == 0 || t.index > d {
                return Err(input(format!("{}[{i}].index", field("v")), format!("index must lie in 1..={d}")));
            }
            let c = parse_poly(&t.coeff, d).map_err(|e| input(format!("{}[{i}].coeff", field("v")), e))?;
            v.0[t.index - 1] = &v.0[t.index - 1] + &c;
        }
        let lambda = form_of(&s.lambda, d, Section::lambda_rank(chart), &field("lambda"))?;
        let sigma = if chart.is_m5() {
            Some(form_of(&s.sigma, d, 5, &field("sigma"))?)
        } else if !s.sigma.is_empty() {
            return Err(input(field("sigma"), "sigma is only meaningful on an m5 chart"));
        } else {
            None
        };
        Ok(Section { v, lambda, sigma })
    }

    pub fn matrix(&self, name: &str) -> Result<Option<Matrix>, CliError> {
        let Some(m) = &self.matrices else { return Ok(None) };
        let rows = match name {
            "g" => &m.g,
            "b" => &m.b,
            _ => &m.o,
        };
        let Some(rows) = rows else { return Ok(None) };
        let field = format!("matrices.{name}");
        let parsed = rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, e)| parse_rational(e).map_err(|err| input(format!("{field}[{i}][{j}]"), err)))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Matrix::from_rows(parsed).map(Some).map_err(|e| input(field, e))
    }

    pub fn random_spec(&self, max_coeff_degree: Option<u32>) -> RandomSpec {
        let deg = max_coeff_degree.or(self.harness.max_coeff_degree).unwrap_or(RandomSpec::default().max_degree);
        RandomSpec::default().with_max_degree(deg)
    }
}

fn form_of(terms: &[FormTerm], d: usize, rank: usize, field: &str) -> Result<DiffForm, CliError> {
    let mut out = DiffForm::zero(d, rank);
    for (i, t) in terms.iter().enumerate() {
        let at = format!("{field}[{i}]");
        if t.indices.len() != rank {
            return Err(input(format!("{at}.indices"), format!("expected {rank} indices, got {}", t.indices.len())));
        }
        if !t.indices.windows(2).all(|w| w[0] < w[1]) {
            return Err(input(format!("{at}.indices"), "indices must be strictly ascending"));
        }
        if t.indices.iter().any(|&k| k == 0 || k > d) {
            return Err(input(format!("{at}.indices"), format!("indices must lie in 1..={d}")));
        }
        let c: Poly = parse_poly(&t.coeff, d).map_err(|e| input(format!("{at}.coeff"), e))?;
        let idx: Vec<usize> = t.indices.iter().map(|k| k - 1).collect();
        out = &out + &DiffForm::term(d, &idx, c).map_err(|e| input(at, e))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{ "chart": { "kind": "vinogradov", "d": 3, "p": 2 } }"#;

    #[test]
    fn minimal_config() {
        let cfg = parse_config(MINIMAL).unwrap();
        let chart = cfg.chart().unwrap();
        assert_eq!(chart.d, 3);
        assert_eq!(cfg.theta(&chart).unwrap(), Hamiltonian::untwisted(&chart));
    }

    #[test]
    fn beta_rank_error_names_the_field() {
        let cfg = parse_config(
            r#"{ "chart": { "kind": "vinogradov", "d": 3, "p": 2 },
                 "theta": { "type": "vinogradov", "beta": [ { "indices": [1, 2], "coeff": "1" } ] } }"#,
        )
        .unwrap();
        let err = cfg.theta(&cfg.chart().unwrap()).unwrap_err();
        assert!(matches!(&err, CliError::Input { field, .. } if field == "theta.beta[0].indices"), "{err}");
    }

    #[test]
    fn syntax_errors_have_a_location() {
        let err = parse_config("{ \"chart\": \n { \"kind\": 3 } }").unwrap_err();
        assert!(matches!(err, CliError::Syntax { line: 2, .. }), "{err}");
        assert!(parse_config(r#"{ "chart": { "kind": "m5", "d": 6 }, "extra": 1 }"#).is_err());
    }

    #[test]
    fn render_parse_round_trip() {
        let text = r#"{ "chart": { "kind": "m5", "d": 6 },
            "theta": { "type": "m5", "F4": [ { "indices": [1,2,3,4], "coeff": "x5 - 3/2*x1^2" } ] },
            "sections": { "A": { "v": [ { "index": 2, "coeff": "x1" } ], "lambda": [ { "indices": [1,2], "coeff": "x3" } ] } },
            "matrices": { "g": [["2"]], "b": [["0"]] },
            "harness": { "trials": 5, "seed": 9 } }"#;
        let cfg = parse_config(text).unwrap();
        assert_eq!(parse_config(&render_config(&cfg)).unwrap(), cfg);
        let canon = cfg.canonical().unwrap();
        assert_eq!(canon.canonical().unwrap(), canon);
        assert_eq!(canon.theta.as_ref().unwrap().f4.as_ref().unwrap()[0].coeff, "-3/2*x1^2 + x5");
    }

    #[test]
    fn sections_and_matrices() {
        let cfg = parse_config(
            r#"{ "chart": { "kind": "vinogradov", "d": 2, "p": 2 },
                 "sections": { "A": { "v": [ { "index": 1, "coeff": "1" } ] }, "B": { "lambda": [ { "indices": [2], "coeff": "x1" } ] } },
                 "matrices": { "g": [["1", "0"], ["0", "3/2"]] } }"#,
        )
        .unwrap();
        let chart = cfg.chart().unwrap();
        assert_eq!(cfg.section(&chart, "A").unwrap().v, VectorField::coordinate(2, 0, Poly::one(2)));
        assert!(cfg.section(&chart, "C").is_err());
        assert_eq!(cfg.matrix("g").unwrap().unwrap().rows(), 2);
        assert_eq!(cfg.matrix("b").unwrap(), None);
    }
}
