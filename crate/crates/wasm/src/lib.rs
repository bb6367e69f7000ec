//! wasm-bindgen bindings behind the interactive demo page in `www/`.
//!
//! Three operations, each returning a JSON string the page renders
//! directly: the residue table for a chosen modulus, classification of a
//! single index, and the fixed-valuation survey. All math lives in the
//! `catalan2k` crate; this layer only shapes output.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use catalan2k::catalan::{
    classify, even_residue_survey, odd_residue_class_set, stabilization_rank, Classification,
};
use catalan2k::oracle::Oracle;
use catalan2k::Result;

/// Scan cap for the in-browser survey; keeps interactions under ~100ms.
const SURVEY_SCAN_CAP: u64 = 2_000_000;

#[derive(Serialize)]
struct TablePayload {
    k: u32,
    stabilization_rank: u32,
    entries: Vec<TableRow>,
}

#[derive(Serialize)]
struct TableRow {
    m: u64,
    residue: u64,
}

fn table_payload(k: u32) -> Result<String> {
    let table = odd_residue_class_set(k)?;
    let payload = TablePayload {
        k,
        stabilization_rank: stabilization_rank(k)?,
        entries: table
            .entries()
            .iter()
            .map(|e| TableRow {
                m: e.m,
                residue: e.residue.value(),
            })
            .collect(),
    };
    Ok(serde_json::to_string(&payload).expect("payload serializes"))
}

#[derive(Serialize)]
#[serde(tag = "parity", rename_all = "snake_case")]
enum ClassifyPayload {
    Odd {
        n: u64,
        exponent: u64,
        residue: u64,
    },
    Even {
        n: u64,
        valuation: u64,
        residue: u64,
    },
}

fn classify_payload(n: u64, k: u32) -> Result<String> {
    let oracle = Oracle::default();
    let payload = match classify(n, k, &oracle)? {
        Classification::Odd { exponent, residue } => ClassifyPayload::Odd {
            n,
            exponent,
            residue: residue.value(),
        },
        Classification::Even { valuation, residue } => ClassifyPayload::Even {
            n,
            valuation: valuation.0,
            residue: residue.value(),
        },
    };
    Ok(serde_json::to_string(&payload).expect("payload serializes"))
}

#[derive(Serialize)]
struct SurveyPayload {
    k: u32,
    v: u64,
    n_max: u64,
    entries: Vec<SurveyRow>,
}

#[derive(Serialize)]
struct SurveyRow {
    residue: u64,
    witness: u64,
}

fn survey_payload(k: u32, v: u64, n_max: u64) -> Result<String> {
    let oracle = Oracle::default();
    let n_max = n_max.min(SURVEY_SCAN_CAP);
    let report = even_residue_survey(k, v, n_max, &oracle)?;
    let payload = SurveyPayload {
        k,
        v,
        n_max,
        entries: report
            .entries
            .iter()
            .map(|e| SurveyRow {
                residue: e.residue,
                witness: e.witness,
            })
            .collect(),
    };
    Ok(serde_json::to_string(&payload).expect("payload serializes"))
}

fn to_js<T>(result: Result<T>) -> std::result::Result<T, JsValue> {
    result.map_err(|e| JsValue::from_str(&e.to_string()))
}

/// JSON residue table for `2^k`: `{k, stabilization_rank, entries}`.
#[wasm_bindgen]
pub fn residue_table_json(k: u32) -> std::result::Result<String, JsValue> {
    to_js(table_payload(k))
}

/// JSON classification of `C_n mod 2^k`.
#[wasm_bindgen]
pub fn classify_json(n: u32, k: u32) -> std::result::Result<String, JsValue> {
    to_js(classify_payload(u64::from(n), k))
}

/// JSON survey of residues with `nu2(C_n) = v` for `n <= n_max`.
#[wasm_bindgen]
pub fn survey_json(k: u32, v: u32, n_max: u32) -> std::result::Result<String, JsValue> {
    to_js(survey_payload(k, u64::from(v), u64::from(n_max)))
}
