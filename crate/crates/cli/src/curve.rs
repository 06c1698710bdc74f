//! Enrichment curve CSV: `rank,concept_id,category,mentions,gain,cumulative`.
//! Rank 0 is the seed baseline (empty concept and category, gain 0). Floats
//! are written in shortest round-trip form so a re-read curve is bit-exact.

use trialonto_core::coverage_opt::{check_curve, CoverageSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub rank: usize,
    pub concept_id: String,
    pub category: String,
    pub mentions: u64,
    pub gain: f64,
    pub cumulative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub baseline: Option<f64>,
    pub rows: Vec<CurveRow>,
}

impl Curve {
    pub fn gains(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.gain).collect()
    }

    pub fn cumulative(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.cumulative).collect()
    }

    /// Re-checks the curve invariants. Without a baseline row the baseline is
    /// inferred from the first addition.
    pub fn check(&self) -> Result<(), String> {
        let baseline = match (self.baseline, self.rows.first()) {
            (Some(b), _) => b,
            (None, Some(r)) => r.cumulative - r.gain,
            (None, None) => return Ok(()),
        };
        for (i, r) in self.rows.iter().enumerate() {
            if r.rank != i + 1 {
                return Err(format!("row {}: rank {} out of sequence", i + 1, r.rank));
            }
        }
        check_curve(baseline, self.rows.iter().map(|r| (r.gain, r.cumulative)))
    }
}

pub fn write_curve(series: &CoverageSeries) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["rank", "concept_id", "category", "mentions", "gain", "cumulative"])
        .expect("in-memory write");
    w.write_record(["0", "", "", &series.baseline_mentions.to_string(), "0", &series.baseline.to_string()])
        .expect("in-memory write");
    for a in &series.additions {
        w.write_record([
            a.rank.to_string(),
            a.concept_id.clone(),
            a.category.to_string(),
            a.mentions.to_string(),
            a.gain.to_string(),
            a.cumulative.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

/// Reads a curve. Only the `gain` and `cumulative` columns are required;
/// missing `rank` columns are numbered in file order.
pub fn read_curve(text: &str) -> Result<Curve, String> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers().map_err(|e| e.to_string())?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim() == name);
    let gain_col = col("gain").ok_or("missing `gain` column")?;
    let cum_col = col("cumulative").ok_or("missing `cumulative` column")?;
    let (rank_col, id_col, cat_col, mentions_col) = (col("rank"), col("concept_id"), col("category"), col("mentions"));

    let mut curve = Curve { baseline: None, rows: Vec::new() };
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| format!("line {line}: {e}"))?;
        let field = |c: Option<usize>| c.and_then(|c| rec.get(c)).map(str::trim).unwrap_or("");
        let num = |c: usize, name: &str| -> Result<f64, String> {
            let s = rec.get(c).map(str::trim).unwrap_or("");
            let v: f64 = s.parse().map_err(|_| format!("line {line}: {name} {s:?} is not a number"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("line {line}: {name} is not finite"))
            }
        };
        let rank = match rank_col {
            Some(_) => field(rank_col)
                .parse::<usize>()
                .map_err(|_| format!("line {line}: rank {:?} is not an integer", field(rank_col)))?,
            None => curve.rows.len() + 1,
        };
        let gain = num(gain_col, "gain")?;
        let cumulative = num(cum_col, "cumulative")?;
        if rank == 0 {
            if curve.baseline.is_some() || !curve.rows.is_empty() {
                return Err(format!("line {line}: baseline row must come first"));
            }
            curve.baseline = Some(cumulative);
            continue;
        }
        let mentions = match mentions_col {
            Some(_) => field(mentions_col)
                .parse()
                .map_err(|_| format!("line {line}: mentions {:?} is not an integer", field(mentions_col)))?,
            None => 0,
        };
        curve.rows.push(CurveRow {
            rank,
            concept_id: field(id_col).to_string(),
            category: field(cat_col).to_string(),
            mentions,
            gain,
            cumulative,
        });
    }
    Ok(curve)
}
