//! File formats: the JSON space document, witness functions, profile CSV.
//!
//! The space document is
//! `{"n": int, "dist": [[real]], "weight": [real], "labels": [string]?}`.
//! The writer emits every real at 17 significant digits, which is enough
//! for a bit-exact reload; the loader runs full validation.

use std::fs;
use std::path::Path;

use crate::concentration::ConcentrationProfile;
use crate::error::{Error, Result};
use crate::lipschitz::LipschitzFunction;
use crate::space::MetricMeasureSpace;

/// 17 significant digits: round-trips any `f64` exactly.
pub fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes a space (plus optional point labels) as a JSON document.
pub fn write_space(space: &MetricMeasureSpace<f64>, labels: Option<&[String]>) -> String {
    let n = space.n();
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"n\": {n},\n"));
    out.push_str("  \"dist\": [\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| g17(space.dist(i, j))).collect();
        out.push_str(&format!("    [{}]{}\n", row.join(", "), if i + 1 < n { "," } else { "" }));
    }
    out.push_str("  ],\n");
    let weights: Vec<String> = (0..n).map(|i| g17(space.weight(i))).collect();
    out.push_str(&format!("  \"weight\": [{}]", weights.join(", ")));
    if let Some(labels) = labels {
        let quoted: Vec<String> =
            labels.iter().map(|l| serde_json::Value::String(l.clone()).to_string()).collect();
        out.push_str(&format!(",\n  \"labels\": [{}]", quoted.join(", ")));
    }
    out.push_str("\n}\n");
    out
}

/// Parses and validates a space document.
pub fn read_space(text: &str) -> Result<(MetricMeasureSpace<f64>, Option<Vec<String>>)> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let object = value.as_object().ok_or_else(|| Error::Parse("expected a JSON object".into()))?;

    let n = object
        .get("n")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::Parse("missing integer field \"n\"".into()))? as usize;

    let dist_value = object
        .get("dist")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Parse("missing array field \"dist\"".into()))?;
    let mut dist: Vec<Vec<f64>> = Vec::with_capacity(dist_value.len());
    for row in dist_value {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse("\"dist\" must be an array of arrays".into()))?;
        dist.push(
            row.iter()
                .map(|x| x.as_f64().ok_or_else(|| Error::Parse("non-numeric distance".into())))
                .collect::<Result<Vec<f64>>>()?,
        );
    }

    let weight = object
        .get("weight")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Parse("missing array field \"weight\"".into()))?
        .iter()
        .map(|x| x.as_f64().ok_or_else(|| Error::Parse("non-numeric weight".into())))
        .collect::<Result<Vec<f64>>>()?;

    if dist.len() != n || weight.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "document declares n = {n} but carries a {}x? matrix and {} weights",
            dist.len(),
            weight.len()
        )));
    }

    let labels = match object.get("labels") {
        None | Some(serde_json::Value::Null) => None,
        Some(serde_json::Value::Array(items)) => {
            if items.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "{} labels for {n} points",
                    items.len()
                )));
            }
            Some(
                items
                    .iter()
                    .map(|l| {
                        l.as_str()
                            .map(str::to_owned)
                            .ok_or_else(|| Error::Parse("labels must be strings".into()))
                    })
                    .collect::<Result<Vec<String>>>()?,
            )
        }
        Some(_) => return Err(Error::Parse("\"labels\" must be an array".into())),
    };

    Ok((MetricMeasureSpace::new(dist, weight)?, labels))
}

pub fn save_space(
    path: &Path,
    space: &MetricMeasureSpace<f64>,
    labels: Option<&[String]>,
) -> Result<()> {
    fs::write(path, write_space(space, labels))?;
    Ok(())
}

pub fn load_space(path: &Path) -> Result<(MetricMeasureSpace<f64>, Option<Vec<String>>)> {
    let text = fs::read_to_string(path)?;
    read_space(&text)
}

/// Companion format for witness observables: `{"f": [real], "lip": real}`.
pub fn write_witness(f: &LipschitzFunction<f64>) -> String {
    let values: Vec<String> = f.values().iter().map(|v| g17(*v)).collect();
    format!("{{\"f\": [{}], \"lip\": {}}}\n", values.join(", "), g17(f.lip()))
}

/// Profile export for external plotting: `r,alpha,witness_mask_hex`.
pub fn profile_csv(profile: &ConcentrationProfile<f64>) -> String {
    let mut out = String::from("r,alpha,witness_mask_hex\n");
    for ((r, alpha), witness) in
        profile.radii.iter().zip(&profile.values).zip(&profile.witnesses)
    {
        out.push_str(&format!("{},{},{}\n", g17(*r), g17(*alpha), witness.to_hex()));
    }
    out
}
