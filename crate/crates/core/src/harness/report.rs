use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::indices::{record_fields, ExponentRecord};
use crate::multiplier::fit_loglog_slope;

/// Distribution of a ratio column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub count: usize,
    pub max: f64,
    pub p95: f64,
    pub median: f64,
}

impl Stats {
    /// Nearest-rank percentiles; `None` for no values.
    pub fn of(values: &[f64]) -> Option<Stats> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let rank = |p: f64| v[((p * v.len() as f64).ceil() as usize).clamp(1, v.len()) - 1];
        Some(Stats {
            count: v.len(),
            max: v[v.len() - 1],
            p95: rank(0.95),
            median: rank(0.5),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridStats {
    pub grid_n: usize,
    #[serde(flatten)]
    pub stats: Stats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub experiment: String,
    pub record: ExponentRecord,
    pub config: BTreeMap<String, String>,
    pub flags: Vec<String>,
    pub rows: usize,
    /// Degenerate or inadmissible rows left out of the statistics.
    pub excluded: usize,
    pub ratio_column: Option<String>,
    pub ratio: Option<Stats>,
    pub by_grid: Vec<GridStats>,
    /// Least-squares slope of `log2(max ratio)` against `log2 N`.
    pub trend_slope: Option<f64>,
    pub extra: BTreeMap<String, f64>,
}

/// Rows share one schema; every row ends with the exponent record, in
/// columns prefixed `record_`.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub experiment: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: Summary,
}

fn fmt(x: f64) -> String {
    format!("{x}")
}

/// Builder for one report.
pub struct ReportBuilder {
    experiment: String,
    columns: Vec<String>,
    ratio_column: Option<String>,
    rows: Vec<Vec<String>>,
    flags: Vec<String>,
    extra: BTreeMap<String, f64>,
}

/// A cell value.
pub enum Cell {
    F(f64),
    I(i64),
    U(u64),
    B(bool),
    S(String),
}

impl Cell {
    fn render(self) -> String {
        match self {
            Cell::F(x) => fmt(x),
            Cell::I(x) => x.to_string(),
            Cell::U(x) => x.to_string(),
            Cell::B(x) => x.to_string(),
            Cell::S(x) => x,
        }
    }
}

impl ReportBuilder {
    pub fn new(experiment: &str, columns: &[&str], ratio_column: Option<&str>) -> Self {
        Self {
            experiment: experiment.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ratio_column: ratio_column.map(str::to_string),
            rows: Vec::new(),
            flags: Vec::new(),
            extra: BTreeMap::new(),
        }
    }

    /// Appends a row; `record` fills the trailing record columns.
    pub fn row(&mut self, cells: Vec<Cell>, record: &ExponentRecord) {
        assert_eq!(cells.len(), self.columns.len(), "row width");
        let mut row: Vec<String> = cells.into_iter().map(Cell::render).collect();
        row.extend(record_fields(record).into_iter().map(|(_, v)| v));
        self.rows.push(row);
    }

    pub fn flag(&mut self, flag: impl Into<String>) {
        let flag = flag.into();
        if !self.flags.contains(&flag) {
            self.flags.push(flag);
        }
    }

    pub fn extra(&mut self, key: impl Into<String>, value: f64) {
        self.extra.insert(key.into(), value);
    }

    pub fn finish(self, record: &ExponentRecord, config: &super::ExperimentConfig) -> Report {
        let mut columns = self.columns;
        columns.extend(record_fields(record).into_iter().map(|(k, _)| format!("record_{k}")));
        let mut summary = summarize(&self.experiment, &columns, &self.rows, self.ratio_column.as_deref(), record);
        summary.config = config.entries().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        summary.flags = self.flags;
        summary.extra = self.extra;
        Report {
            experiment: self.experiment,
            columns,
            rows: self.rows,
            summary,
        }
    }
}

/// Statistics of `ratio_column` over the rows that are neither degenerate
/// nor inadmissible, overall and per `grid_n`.
pub fn summarize(
    experiment: &str,
    columns: &[String],
    rows: &[Vec<String>],
    ratio_column: Option<&str>,
    record: &ExponentRecord,
) -> Summary {
    let col = |name: &str| columns.iter().position(|c| c == name);
    let mut summary = Summary {
        experiment: experiment.into(),
        record: record.clone(),
        config: BTreeMap::new(),
        flags: Vec::new(),
        rows: rows.len(),
        excluded: 0,
        ratio_column: ratio_column.map(str::to_string),
        ratio: None,
        by_grid: Vec::new(),
        trend_slope: None,
        extra: BTreeMap::new(),
    };
    let Some(ratio) = ratio_column.and_then(col) else {
        return summary;
    };
    let (degenerate, admissible, grid) = (col("degenerate"), col("admissible"), col("grid_n"));
    let mut all = Vec::new();
    let mut per_grid: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for row in rows {
        let skip = degenerate.is_some_and(|c| row[c] == "true") || admissible.is_some_and(|c| row[c] == "false");
        let value: f64 = row[ratio].parse().unwrap_or(f64::NAN);
        if skip || !value.is_finite() {
            summary.excluded += 1;
            continue;
        }
        all.push(value);
        if let Some(c) = grid {
            per_grid.entry(row[c].parse().unwrap_or(0)).or_default().push(value);
        }
    }
    summary.ratio = Stats::of(&all);
    summary.by_grid = per_grid
        .into_iter()
        .filter_map(|(n, v)| Stats::of(&v).map(|stats| GridStats { grid_n: n, stats }))
        .collect();
    if summary.by_grid.len() >= 2 {
        let ns: Vec<f64> = summary.by_grid.iter().map(|g| g.grid_n as f64).collect();
        let maxes: Vec<f64> = summary.by_grid.iter().map(|g| g.stats.max).collect();
        let slope = fit_loglog_slope(&ns, &maxes);
        summary.trend_slope = slope.is_finite().then_some(slope);
    }
    summary
}

impl Report {
    /// Recomputes the statistics from the rows alone.
    pub fn resummarize(&self) -> Summary {
        let mut s = summarize(
            &self.experiment,
            &self.columns,
            &self.rows,
            self.summary.ratio_column.as_deref(),
            &self.summary.record,
        );
        s.config = self.summary.config.clone();
        s.flags = self.summary.flags.clone();
        s.extra = self.summary.extra.clone();
        s
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of a numeric column, unparsable cells as NaN.
    pub fn values(&self, name: &str) -> Vec<f64> {
        let Some(c) = self.column(name) else {
            return Vec::new();
        };
        self.rows.iter().map(|r| r[c].parse().unwrap_or(f64::NAN)).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("utf-8")
    }

    /// Writes `<experiment>.csv` and `<experiment>.json` under `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir)?;
        let csv_path = dir.join(format!("{}.csv", self.experiment));
        let json_path = dir.join(format!("{}.json", self.experiment));
        self.write_csv(File::create(&csv_path)?)?;
        let mut f = File::create(&json_path)?;
        serde_json::to_writer_pretty(&mut f, &self.summary)?;
        writeln!(f)?;
        Ok((csv_path, json_path))
    }
}
