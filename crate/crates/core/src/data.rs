//! Tabular datasets, stratified cross-validation folds and the grow/validation
//! split used by the genetic search.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::Read;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

/// Number of distinct numeric values above which a column is typed continuous.
pub const CONTINUOUS_THRESHOLD: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Continuous,
    Discrete,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
    /// `(min, max)` of the column after imputation.
    pub observed_range: (f64, f64),
    /// Category strings indexed by their ordinal code. Empty for continuous
    /// features.
    pub categories: Vec<String>,
}

impl FeatureSpec {
    pub fn category_count(&self) -> usize {
        self.categories.len()
    }

    /// Maps an encoded discrete value back to its category string.
    pub fn decode(&self, value: f64) -> Option<&str> {
        if self.kind != FeatureKind::Discrete || value < 0.0 || value.fract() != 0.0 {
            return None;
        }
        self.categories.get(value as usize).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub features: Vec<FeatureSpec>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset from already-encoded values, checking the shape
    /// invariants. Feature ranges are recomputed from `rows`.
    pub fn new(
        mut features: Vec<FeatureSpec>,
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        let k = features.len();
        if rows.is_empty() {
            return Err(Error::validation("dataset has no rows"));
        }
        if rows.len() != labels.len() {
            return Err(Error::validation(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != k) {
            return Err(Error::validation(format!(
                "row {i} has {} values, expected {k}",
                row.len()
            )));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::validation("dataset contains non-finite values"));
        }
        if class_names.len() < 2 {
            return Err(Error::validation(format!(
                "need at least 2 classes, found {}",
                class_names.len()
            )));
        }
        let mut counts = vec![0usize; class_names.len()];
        for &label in &labels {
            match counts.get_mut(label) {
                Some(c) => *c += 1,
                None => return Err(Error::validation(format!("label {label} out of range"))),
            }
        }
        if let Some(c) = counts.iter().position(|&c| c == 0) {
            return Err(Error::validation(format!(
                "class '{}' has no samples",
                class_names[c]
            )));
        }
        for (j, spec) in features.iter_mut().enumerate() {
            let (lo, hi) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                (lo.min(r[j]), hi.max(r[j]))
            });
            spec.observed_range = (lo, hi);
        }
        Ok(Dataset {
            features,
            rows,
            labels,
            class_names,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.rows.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    pub fn count_kind(&self, kind: FeatureKind) -> usize {
        self.features.iter().filter(|f| f.kind == kind).count()
    }

    pub fn all_indices(&self) -> Vec<usize> {
        (0..self.n_samples()).collect()
    }
}

/// Column typing hints read from a JSON manifest.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ColumnManifest {
    #[serde(default)]
    pub kind: Option<FeatureKind>,
    #[serde(default)]
    pub label_column: bool,
}

/// `{ "column name": { "kind": "discrete", "label_column": false }, ... }`
pub type Manifest = BTreeMap<String, ColumnManifest>;

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    let file = File::open(path.as_ref())?;
    Ok(serde_json::from_reader(file)?)
}

/// Loads a CSV file using a manifest for the label column and kind overrides.
/// `label_column` wins over the manifest's flag when given.
pub fn load_csv_with_manifest(
    path: impl AsRef<Path>,
    label_column: Option<&str>,
    manifest: &Manifest,
) -> Result<Dataset> {
    let flagged: Vec<&String> = manifest
        .iter()
        .filter(|(_, c)| c.label_column)
        .map(|(name, _)| name)
        .collect();
    let label = match (label_column, flagged.as_slice()) {
        (Some(l), _) => l.to_string(),
        (None, [one]) => one.to_string(),
        (None, []) => return Err(Error::config("no label column given or flagged in manifest")),
        (None, _) => return Err(Error::config("manifest flags more than one label column")),
    };
    let kinds: HashMap<String, FeatureKind> = manifest
        .iter()
        .filter_map(|(name, c)| c.kind.map(|k| (name.clone(), k)))
        .collect();
    load_csv(path, &label, Some(&kinds))
}

pub fn load_csv(
    path: impl AsRef<Path>,
    label_column: &str,
    feature_kinds: Option<&HashMap<String, FeatureKind>>,
) -> Result<Dataset> {
    let path = path.as_ref();
    let mut file = File::open(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })?;
    let mut text = String::new();
    file.read_to_string(&mut text)?;
    parse_csv(&text, label_column, feature_kinds)
}

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell == "?"
}

/// Parses CSV text (header row, comma separated). Empty cells and `?` are
/// missing and get imputed: median for continuous columns, mode for discrete.
pub fn parse_csv(
    text: &str,
    label_column: &str,
    feature_kinds: Option<&HashMap<String, FeatureKind>>,
) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(csv_error)?
        .iter()
        .map(str::to_string)
        .collect();
    let label_idx = headers
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::config(format!("label column '{label_column}' not found")))?;
    if let Some(kinds) = feature_kinds {
        if let Some(unknown) = kinds.keys().find(|k| !headers.contains(k)) {
            return Err(Error::config(format!(
                "feature kind override for unknown column '{unknown}'"
            )));
        }
    }

    let mut cells: Vec<Vec<String>> = Vec::new();
    let mut lines = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != headers.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
        }
        cells.push(record.iter().map(str::to_string).collect());
        lines.push(line);
    }
    if cells.is_empty() {
        return Err(Error::validation("no data rows"));
    }

    let mut class_names: Vec<String> = Vec::new();
    let mut labels = Vec::with_capacity(cells.len());
    for (row, &line) in cells.iter().zip(&lines) {
        let cell = &row[label_idx];
        if is_missing(cell) {
            return Err(Error::Parse {
                line,
                message: "missing class label".into(),
            });
        }
        let idx = match class_names.iter().position(|c| c == cell) {
            Some(i) => i,
            None => {
                class_names.push(cell.clone());
                class_names.len() - 1
            }
        };
        labels.push(idx);
    }

    let mut features = Vec::new();
    let mut columns = Vec::new();
    for (j, name) in headers.iter().enumerate() {
        if j == label_idx {
            continue;
        }
        let raw: Vec<&str> = cells.iter().map(|r| r[j].as_str()).collect();
        let forced = feature_kinds.and_then(|k| k.get(name)).copied();
        let (spec, values) = encode_column(name, &raw, forced, &lines)?;
        features.push(spec);
        columns.push(values);
    }

    let rows = (0..cells.len())
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    Dataset::new(features, rows, labels, class_names)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

fn encode_column(
    name: &str,
    raw: &[&str],
    forced: Option<FeatureKind>,
    lines: &[u64],
) -> Result<(FeatureSpec, Vec<f64>)> {
    let present: Vec<(usize, &str)> = raw
        .iter()
        .enumerate()
        .filter(|(_, c)| !is_missing(c))
        .map(|(i, c)| (i, *c))
        .collect();
    if present.is_empty() {
        return Err(Error::validation(format!("column '{name}' has no values")));
    }
    let numeric: Option<Vec<f64>> = present
        .iter()
        .map(|(_, c)| c.parse::<f64>().ok().filter(|v| v.is_finite()))
        .collect();

    let kind = match forced {
        Some(FeatureKind::Continuous) => {
            if numeric.is_none() {
                let (i, c) = present
                    .iter()
                    .find(|(_, c)| c.parse::<f64>().is_err())
                    .copied()
                    .unwrap_or(present[0]);
                return Err(Error::Parse {
                    line: lines[i],
                    message: format!("column '{name}' forced continuous but '{c}' is not a number"),
                });
            }
            FeatureKind::Continuous
        }
        Some(FeatureKind::Discrete) => FeatureKind::Discrete,
        None => match &numeric {
            Some(vals) => {
                let mut sorted = vals.clone();
                sorted.sort_by(f64::total_cmp);
                sorted.dedup();
                if sorted.len() > CONTINUOUS_THRESHOLD {
                    FeatureKind::Continuous
                } else {
                    FeatureKind::Discrete
                }
            }
            None => FeatureKind::Discrete,
        },
    };

    let mut values = vec![f64::NAN; raw.len()];
    let mut categories = Vec::new();
    match kind {
        FeatureKind::Continuous => {
            let vals = numeric.expect("checked numeric");
            for (&(i, _), v) in present.iter().zip(&vals) {
                values[i] = *v;
            }
            let fill = median(&vals);
            values.iter_mut().filter(|v| v.is_nan()).for_each(|v| *v = fill);
        }
        FeatureKind::Discrete => {
            // Numeric categories keep their natural order; text categories
            // are coded by first appearance.
            let mut order: Vec<&str> = Vec::new();
            for (_, c) in &present {
                if !order.contains(c) {
                    order.push(c);
                }
            }
            if let Some(vals) = &numeric {
                let mut pairs: Vec<(f64, &str)> = Vec::new();
                for (v, (_, c)) in vals.iter().zip(&present) {
                    if !pairs.iter().any(|(p, _)| p == v) {
                        pairs.push((*v, c));
                    }
                }
                pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
                order = pairs.into_iter().map(|(_, c)| c).collect();
                for (&(i, _), v) in present.iter().zip(vals) {
                    let code = order
                        .iter()
                        .position(|c| c.parse::<f64>().ok() == Some(*v))
                        .expect("category registered");
                    values[i] = code as f64;
                }
            } else {
                for &(i, c) in &present {
                    values[i] = order.iter().position(|o| *o == c).expect("registered") as f64;
                }
            }
            let mut counts = vec![0usize; order.len()];
            for &(i, _) in &present {
                counts[values[i] as usize] += 1;
            }
            let mode = counts
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                .map(|(c, _)| c)
                .unwrap_or(0);
            values
                .iter_mut()
                .filter(|v| v.is_nan())
                .for_each(|v| *v = mode as f64);
            categories = order.into_iter().map(str::to_string).collect();
        }
    }
    Ok((
        FeatureSpec {
            name: name.to_string(),
            kind,
            observed_range: (0.0, 0.0),
            categories,
        },
        values,
    ))
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Repeated stratified k-fold assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub n_folds: usize,
    pub n_repeats: usize,
    pub seed: u64,
    /// `assignments[repeat][sample]` is the fold holding that sample.
    pub assignments: Vec<Vec<usize>>,
}

impl FoldPlan {
    pub fn test_indices(&self, repeat: usize, fold: usize) -> Vec<usize> {
        self.assignments[repeat]
            .iter()
            .enumerate()
            .filter(|(_, &f)| f == fold)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn train_indices(&self, repeat: usize, fold: usize) -> Vec<usize> {
        self.assignments[repeat]
            .iter()
            .enumerate()
            .filter(|(_, &f)| f != fold)
            .map(|(i, _)| i)
            .collect()
    }

    /// FNV-1a digest of the assignments; equal plans give equal digests.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut eat = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        eat(self.n_folds as u64);
        eat(self.n_repeats as u64);
        for rep in &self.assignments {
            for &f in rep {
                eat(f as u64);
            }
        }
        h
    }
}

pub fn make_folds(dataset: &Dataset, n_folds: usize, n_repeats: usize, seed: u64) -> Result<FoldPlan> {
    if n_folds < 2 {
        return Err(Error::validation(format!("n_folds must be >= 2, got {n_folds}")));
    }
    if n_repeats < 1 {
        return Err(Error::validation("n_repeats must be >= 1"));
    }
    let by_class = indices_by_class(dataset, &dataset.all_indices());
    for (c, members) in by_class.iter().enumerate() {
        if members.len() < n_folds {
            return Err(Error::validation(format!(
                "class '{}' has {} samples, fewer than {n_folds} folds",
                dataset.class_names[c],
                members.len()
            )));
        }
    }
    let assignments = (0..n_repeats)
        .map(|r| {
            let mut rng = seed::derived_rng(seed, &[r as u64]);
            let mut assignment = vec![0; dataset.n_samples()];
            // The counter runs across classes so fold totals stay balanced too.
            let mut next = 0usize;
            for members in &by_class {
                let mut members = members.clone();
                members.shuffle(&mut rng);
                for i in members {
                    assignment[i] = next % n_folds;
                    next += 1;
                }
            }
            assignment
        })
        .collect();
    Ok(FoldPlan {
        n_folds,
        n_repeats,
        seed,
        assignments,
    })
}

fn indices_by_class(dataset: &Dataset, indices: &[usize]) -> Vec<Vec<usize>> {
    let mut by_class = vec![Vec::new(); dataset.n_classes()];
    for &i in indices {
        by_class[dataset.labels[i]].push(i);
    }
    by_class
}

/// Stratified 50/50 split of `indices` into `(grow, validation)`. The grow
/// half gets the extra sample when the count is odd.
pub fn split_half(dataset: &Dataset, indices: &[usize], seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if indices.len() < 2 {
        return Err(Error::validation(format!(
            "need at least 2 samples to split, got {}",
            indices.len()
        )));
    }
    let mut rng = seed::rng(seed);
    let mut grow = Vec::with_capacity(indices.len() / 2 + 1);
    let mut validation = Vec::with_capacity(indices.len() / 2);
    let mut next = 0usize;
    for mut members in indices_by_class(dataset, indices) {
        members.shuffle(&mut rng);
        for i in members {
            if next % 2 == 0 {
                grow.push(i);
            } else {
                validation.push(i);
            }
            next += 1;
        }
    }
    grow.sort_unstable();
    validation.sort_unstable();
    Ok((grow, validation))
}
