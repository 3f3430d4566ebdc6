//! Compression ratios of every variant over a set of datasets, with mean
//! ranks (rank 1 = best ratio on a dataset, ties share the average rank).

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sprintz::{compress_samples, decompress_samples};

use crate::dataset::Dataset;
use crate::external::ExternalCodec;
use crate::variant::Variant;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RatioRow {
    pub dataset: String,
    pub codec: String,
    pub ratio: f64,
    pub rank: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
    pub mean_ranks: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
    /// Built-in codecs whose output failed verification.
    pub failures: Vec<String>,
}

impl RatioReport {
    pub fn ratio(&self, dataset: &str, codec: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.dataset == dataset && r.codec == codec)
            .map(|r| r.ratio)
    }
}

/// Ranks in descending order of value; tied values get the mean of the
/// ranks they span.
pub fn ranks_with_ties(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let shared = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = shared;
        }
        i = j + 1;
    }
    ranks
}

/// Compressed size of `ds` under a built-in variant, or `None` if the
/// output did not decode back to the input.
pub fn builtin_size(variant: Variant, ds: &Dataset) -> Option<usize> {
    let config = variant.config(ds.width(), ds.ncols);
    let bytes = compress_samples(&ds.samples, &config).ok()?;
    match decompress_samples(&bytes) {
        Ok((_, back)) if back == ds.samples => Some(bytes.len()),
        _ => None,
    }
}

pub fn evaluate(
    datasets: &[Dataset],
    variants: &[Variant],
    externals: &[ExternalCodec],
    scratch: &Path,
) -> RatioReport {
    let mut report = RatioReport::default();

    // Adapters that cannot round-trip a probe are dropped up front.
    let mut live = Vec::new();
    for ext in externals {
        match ext.measure(&[0, 1, 2, 3, 4, 5, 6, 7, 8, 9], scratch) {
            Ok(_) => live.push(ext),
            Err(e) => report
                .warnings
                .push(format!("skipping external codec {}: {e:#}", ext.name)),
        }
    }

    let mut rank_sums: BTreeMap<String, (f64, usize)> = BTreeMap::new();
    for ds in datasets {
        let raw = ds.raw_bytes();
        if raw.is_empty() {
            report
                .warnings
                .push(format!("skipping empty dataset {}", ds.name));
            continue;
        }
        let mut entries: Vec<(String, f64)> = Vec::new();
        for &v in variants {
            match builtin_size(v, ds) {
                Some(size) => entries.push((v.name().to_string(), raw.len() as f64 / size as f64)),
                None => report
                    .failures
                    .push(format!("{} failed verification on {}", v.name(), ds.name)),
            }
        }
        for ext in &live {
            match ext.measure(&raw, scratch) {
                Ok(size) => entries.push((ext.name.clone(), raw.len() as f64 / size.max(1) as f64)),
                Err(e) => report
                    .warnings
                    .push(format!("{} on {}: {e:#}", ext.name, ds.name)),
            }
        }
        let ratios: Vec<f64> = entries.iter().map(|e| e.1).collect();
        for ((codec, ratio), rank) in entries.into_iter().zip(ranks_with_ties(&ratios)) {
            let s = rank_sums.entry(codec.clone()).or_default();
            s.0 += rank;
            s.1 += 1;
            report.rows.push(RatioRow {
                dataset: ds.name.clone(),
                codec,
                ratio,
                rank,
            });
        }
    }
    report.mean_ranks = rank_sums
        .into_iter()
        .map(|(k, (sum, n))| (k, sum / n as f64))
        .collect();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use sprintz::Samples;

    #[test]
    fn ranks_average_ties() {
        assert_eq!(ranks_with_ties(&[3.0, 1.0, 2.0]), vec![1.0, 3.0, 2.0]);
        assert_eq!(ranks_with_ties(&[2.0, 2.0, 1.0]), vec![1.5, 1.5, 3.0]);
        assert_eq!(ranks_with_ties(&[5.0, 5.0, 5.0]), vec![2.0, 2.0, 2.0]);
        assert!(ranks_with_ties(&[]).is_empty());
    }

    #[test]
    fn constant_dataset_compresses_well() {
        let ds = Dataset {
            name: "flat".into(),
            ncols: 1,
            samples: Samples::U16(vec![1234; 50_000]),
            quant: None,
        };
        let dir = tempfile::tempdir().unwrap();
        let report = evaluate(&[ds], &Variant::ALL, &[], dir.path());
        assert_eq!(report.rows.len(), 3);
        assert!(report.rows.iter().all(|r| r.ratio > 50.0), "{:?}", report.rows);
        assert!(report.failures.is_empty());
    }

    #[test]
    fn copy_adapter_ranks_last_on_compressible_data() {
        let ds = Dataset {
            name: "ramp".into(),
            ncols: 2,
            samples: Samples::U8((0..20_000u32).map(|i| (i / 64) as u8).collect()),
            quant: None,
        };
        let dir = tempfile::tempdir().unwrap();
        let cp = ExternalCodec::new("copy", "cat {in} > {out}", "cat {in} > {out}");
        let missing = ExternalCodec::new("missing", "definitely-not-installed-zz {in}", "true");
        let report = evaluate(&[ds], &Variant::ALL, &[cp, missing], dir.path());
        assert_eq!(report.ratio("ramp", "copy"), Some(1.0));
        assert_eq!(report.mean_ranks["copy"], 4.0);
        assert!(!report.mean_ranks.contains_key("missing"));
        assert_eq!(report.warnings.len(), 1);
    }
}
