use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::importance::{Importance, ImportanceTable};
use super::periods::{PeriodAssignment, Region};
use super::schedule::CoalescingSchedule;
use super::CoalescingError;

pub const SCHEDULE_FORMAT_NAME: &str = "chemtrotter-schedule";
pub const SCHEDULE_FORMAT_VERSION: u32 = 1;

/// Counts of `log₁₀ I` per bin and region. Zero importances go to a bin
/// with edges `(-inf, -inf)` and maximal ones to `(inf, inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramRow {
    pub low: f64,
    pub high: f64,
    pub region: Region,
    pub count: usize,
}

/// Horizontal axis of the importance histogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HistogramAxis {
    /// `log₁₀ I`.
    Log10,
    /// `(log₁₀ I − μ) / σ`; falls back to `log₁₀ I − μ` when `σ = 0`.
    Standardized,
}

pub fn importance_histogram(
    table: &ImportanceTable,
    assignment: &PeriodAssignment,
    bin_width: f64,
    axis: HistogramAxis,
) -> Vec<HistogramRow> {
    assert!(bin_width > 0.0, "bin width must be positive");
    let (shift, scale) = match (axis, table.log_mean, table.log_std) {
        (HistogramAxis::Standardized, Some(mu), Some(sigma)) => {
            (mu, if sigma > 0.0 { sigma } else { 1.0 })
        }
        _ => (0.0, 1.0),
    };
    let mut counts: BTreeMap<(i64, Region), usize> = BTreeMap::new();
    for e in &table.entries {
        let bin = match (e.importance, e.importance.log10()) {
            (Importance::Maximal, _) => i64::MAX,
            (_, Some(l)) => ((l - shift) / scale / bin_width).floor() as i64,
            (_, None) => i64::MIN,
        };
        let region = assignment
            .region_of(e.term)
            .expect("every four-index term has a region");
        *counts.entry((bin, region)).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|((bin, region), count)| {
            let (low, high) = match bin {
                i64::MAX => (f64::INFINITY, f64::INFINITY),
                i64::MIN => (f64::NEG_INFINITY, f64::NEG_INFINITY),
                b => (b as f64 * bin_width, (b + 1) as f64 * bin_width),
            };
            HistogramRow {
                low,
                high,
                region,
                count,
            }
        })
        .collect()
}

/// Columns `log10_low,log10_high,region,count`, or `z_low,z_high,…` on the
/// standardized axis.
pub fn write_histogram_csv<W: Write>(
    rows: &[HistogramRow],
    axis: HistogramAxis,
    out: W,
) -> Result<(), CoalescingError> {
    let mut w = csv::Writer::from_writer(out);
    let edges = match axis {
        HistogramAxis::Log10 => ["log10_low", "log10_high"],
        HistogramAxis::Standardized => ["z_low", "z_high"],
    };
    w.write_record([edges[0], edges[1], "region", "count"])?;
    for r in rows {
        w.write_record([
            r.low.to_string(),
            r.high.to_string(),
            r.region.label().to_string(),
            r.count.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct ScheduleFile {
    format: String,
    version: u32,
    #[serde(flatten)]
    schedule: CoalescingSchedule,
}

pub fn serialize_schedule(s: &CoalescingSchedule) -> String {
    let file = ScheduleFile {
        format: SCHEDULE_FORMAT_NAME.into(),
        version: SCHEDULE_FORMAT_VERSION,
        schedule: s.clone(),
    };
    serde_json::to_string_pretty(&file).expect("schedule serializes")
}

pub fn deserialize_schedule(text: &str) -> Result<CoalescingSchedule, CoalescingError> {
    let file: ScheduleFile =
        serde_json::from_str(text).map_err(|e| CoalescingError::Format(e.to_string()))?;
    if file.format != SCHEDULE_FORMAT_NAME || file.version != SCHEDULE_FORMAT_VERSION {
        return Err(CoalescingError::Format(format!(
            "unsupported schedule format {} v{}",
            file.format, file.version
        )));
    }
    Ok(file.schedule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalescing::{build_schedule, ImportanceEntry};
    use crate::terms::TermOrder;

    #[test]
    fn histogram_bins_and_csv() {
        let entries = [
            Importance::Finite(0.5),
            Importance::Finite(0.6),
            Importance::Maximal,
            Importance::Finite(0.0),
        ]
        .into_iter()
        .enumerate()
        .map(|(term, importance)| ImportanceEntry {
            term,
            importance,
            denominator: 1.0,
            representative: 1.0,
            annihilates_hf: true,
        })
        .collect();
        let table = ImportanceTable {
            n_terms: 4,
            entries,
            log_mean: None,
            log_std: None,
            occupied: Default::default(),
        };
        let assignment = PeriodAssignment {
            periods: vec![16, 16, 1, 64],
            regions: vec![
                (0, Region::C),
                (1, Region::C),
                (2, Region::A),
                (3, Region::E),
            ],
            log_upper_cutoff: None,
            log_lower_cutoff: None,
        };
        let rows = importance_histogram(&table, &assignment, 0.5, HistogramAxis::Log10);
        assert_eq!(rows.len(), 3);
        assert_eq!(
            (rows[0].low, rows[0].region, rows[0].count),
            (f64::NEG_INFINITY, Region::E, 1)
        );
        assert_eq!((rows[1].low, rows[1].high, rows[1].count), (-0.5, 0.0, 2));
        assert_eq!((rows[2].high, rows[2].region), (f64::INFINITY, Region::A));
        let mut buf = Vec::new();
        write_histogram_csv(&rows, HistogramAxis::Log10, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next(),
            Some("log10_low,log10_high,region,count")
        );
        assert_eq!(text.lines().nth(2), Some("-0.5,0,C,2"));

        let standardized = ImportanceTable {
            log_mean: Some(-0.5),
            log_std: Some(0.25),
            ..table
        };
        let rows =
            importance_histogram(&standardized, &assignment, 1.0, HistogramAxis::Standardized);
        // log10 0.5 and 0.6 sit 0.796 and 1.113 standard deviations above the mean
        assert_eq!((rows[1].low, rows[1].high, rows[1].count), (0.0, 1.0, 1));
        assert_eq!((rows[2].low, rows[2].high, rows[2].count), (1.0, 2.0, 1));
    }

    #[test]
    fn schedule_round_trip() {
        let s = build_schedule(&[1, 2, 4], 0.05, &TermOrder::identity(3)).unwrap();
        let text = serialize_schedule(&s);
        assert_eq!(deserialize_schedule(&text).unwrap(), s);
        let bumped = text.replace("\"version\": 1", "\"version\": 2");
        assert!(matches!(
            deserialize_schedule(&bumped),
            Err(CoalescingError::Format(_))
        ));
    }
}
