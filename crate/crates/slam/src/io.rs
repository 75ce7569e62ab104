//! File I/O for datasets, labelings and configs.
//!
//! Dataset CSV: header `spot_id,x,y[,a1..ag]`, UTF-8, `.` decimal separator.
//! Labeling CSV: header `spot_id,label`. Config: JSON mirroring
//! [`EvaluationConfig`].

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SlamError};
use crate::model::{EvaluationConfig, Labeling, RoleTag, SpatialDataset};

/// Supported dataset file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetFormat {
    Csv,
    Json,
}

#[derive(Serialize, Deserialize)]
struct DatasetJson {
    spot_ids: Vec<String>,
    coords: Vec<[f64; 2]>,
    #[serde(default)]
    attributes: Option<Vec<Vec<f64>>>,
}

fn parse_float(raw: &str, row: usize, column: &str) -> Result<f64> {
    let v: f64 = raw.trim().parse().map_err(|_| SlamError::MalformedRow {
        row,
        reason: format!("column `{column}`: `{raw}` is not a number"),
    })?;
    if !v.is_finite() {
        return Err(SlamError::NonFinite {
            row,
            column: column.to_string(),
        });
    }
    Ok(v)
}

pub fn load_dataset(path: &Path, format: DatasetFormat) -> Result<SpatialDataset> {
    match format {
        DatasetFormat::Json => {
            let text = std::fs::read_to_string(path)?;
            let parsed: DatasetJson = serde_json::from_str(&text)?;
            SpatialDataset::new(parsed.spot_ids, parsed.coords, parsed.attributes)
        }
        DatasetFormat::Csv => load_dataset_csv(path),
    }
}

fn load_dataset_csv(path: &Path) -> Result<SpatialDataset> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.len() < 3 || &headers[0] != "spot_id" || &headers[1] != "x" || &headers[2] != "y" {
        return Err(SlamError::MalformedRow {
            row: 0,
            reason: "expected header `spot_id,x,y[,a1..]`".into(),
        });
    }
    let g = headers.len() - 3;
    let mut spot_ids = Vec::new();
    let mut coords = Vec::new();
    let mut attrs: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record?;
        if record.len() != headers.len() {
            return Err(SlamError::MalformedRow {
                row,
                reason: format!("expected {} fields, got {}", headers.len(), record.len()),
            });
        }
        spot_ids.push(record[0].trim().to_string());
        let x = parse_float(&record[1], row, "x")?;
        let y = parse_float(&record[2], row, "y")?;
        coords.push([x, y]);
        if g > 0 {
            let mut a = Vec::with_capacity(g);
            for j in 0..g {
                a.push(parse_float(&record[3 + j], row, &headers[3 + j])?);
            }
            attrs.push(a);
        }
    }
    let attributes = if g > 0 { Some(attrs) } else { None };
    SpatialDataset::new(spot_ids, coords, attributes)
}

pub fn save_dataset(dataset: &SpatialDataset, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    let g = dataset.attr_dim().unwrap_or(0);
    let mut header = vec!["spot_id".to_string(), "x".into(), "y".into()];
    for j in 0..g {
        header.push(format!("a{}", j + 1));
    }
    writer.write_record(&header)?;
    for (i, id) in dataset.spot_ids().iter().enumerate() {
        let c = dataset.coords()[i];
        let mut record = vec![id.clone(), format!("{}", c[0]), format!("{}", c[1])];
        if let Some(attrs) = dataset.attributes() {
            for v in &attrs[i] {
                record.push(format!("{v}"));
            }
        }
        writer.write_record(&record)?;
    }
    writer.flush()?;
    Ok(())
}

/// Load a labeling CSV and align it to the dataset's spot order,
/// regardless of file row order.
pub fn load_labeling(path: &Path, dataset: &SpatialDataset, role: RoleTag) -> Result<Labeling> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "spot_id" || &headers[1] != "label" {
        return Err(SlamError::MalformedRow {
            row: 0,
            reason: "expected header `spot_id,label`".into(),
        });
    }
    let mut labels: Vec<Option<String>> = vec![None; dataset.n()];
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record?;
        if record.len() != 2 {
            return Err(SlamError::MalformedRow {
                row,
                reason: format!("expected 2 fields, got {}", record.len()),
            });
        }
        let id = record[0].trim().to_string();
        let label = record[1].trim().to_string();
        if label.is_empty() {
            return Err(SlamError::EmptyLabel { id });
        }
        let idx = dataset
            .spot_index(&id)
            .ok_or(SlamError::UnknownSpot { id: id.clone() })?;
        if labels[idx].is_some() {
            return Err(SlamError::DuplicateSpotId { id, row });
        }
        labels[idx] = Some(label);
    }
    let labels: Vec<String> = labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| {
            l.ok_or_else(|| SlamError::MissingSpot {
                id: dataset.spot_ids()[i].clone(),
            })
        })
        .collect::<Result<_>>()?;
    Labeling::new(labels, role)
}

pub fn save_labeling(labeling: &Labeling, dataset: &SpatialDataset, path: &Path) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["spot_id", "label"])?;
    for (id, label) in dataset.spot_ids().iter().zip(labeling.labels()) {
        writer.write_record([id.as_str(), label.as_str()])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn load_config(path: &Path) -> Result<EvaluationConfig> {
    let text = std::fs::read_to_string(path)?;
    let cfg: EvaluationConfig = serde_json::from_str(&text)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Rebuild a labeling with a declared label space from dataset-aligned
/// tokens. Used by the harness generators.
pub fn labeling_with_space(
    labels: Vec<String>,
    space: &[&str],
    role: RoleTag,
) -> Result<Labeling> {
    let space: BTreeSet<String> = space.iter().map(|s| s.to_string()).collect();
    Labeling::with_label_space(labels, space, role)
}
