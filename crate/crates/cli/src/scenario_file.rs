//! Scenario JSON files.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use k3twist_core::{Scenario, ScenarioSpec};
use serde::{Deserialize, Serialize};

pub const DEFAULT_SCENARIO: &str = include_str!("../scenarios/default.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub ambient: Vec<String>,
    pub h: Vec<i64>,
    #[serde(rename = "B_num")]
    pub b_num: Vec<i64>,
    #[serde(rename = "B_den")]
    pub b_den: i64,
    #[serde(rename = "K")]
    pub k: Vec<i64>,
    pub pic_generators: Vec<Vec<i64>>,
    pub lambda: Vec<i64>,
}

impl From<ScenarioFile> for ScenarioSpec {
    fn from(f: ScenarioFile) -> Self {
        ScenarioSpec {
            ambient: f.ambient,
            h: f.h,
            b_num: f.b_num,
            b_den: f.b_den,
            k: f.k,
            pic_generators: f.pic_generators,
            lambda: f.lambda,
        }
    }
}

impl From<&ScenarioSpec> for ScenarioFile {
    fn from(s: &ScenarioSpec) -> Self {
        ScenarioFile {
            ambient: s.ambient.clone(),
            h: s.h.clone(),
            b_num: s.b_num.clone(),
            b_den: s.b_den,
            k: s.k.clone(),
            pic_generators: s.pic_generators.clone(),
            lambda: s.lambda.clone(),
        }
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let file: ScenarioFile = serde_json::from_str(text).context("malformed scenario JSON")?;
    Ok(Scenario::from_spec(&file.into())?)
}

/// Loads `path`, or the built-in scenario when absent.
pub fn load_scenario(path: Option<&Path>) -> Result<Scenario> {
    match path {
        None => parse_scenario(DEFAULT_SCENARIO),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            parse_scenario(&text)
        }
    }
}
