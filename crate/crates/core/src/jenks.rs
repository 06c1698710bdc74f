//! Jenks natural breaks: optimal partition of a sorted 1-D series into
//! contiguous classes minimizing the sum of squared deviations from class
//! means (SDCM), plus the two-class threshold finder used on enrichment gains.
//!
//! The optimizer is the Fisher dynamic program over suffixes, O(k·n²) time and
//! O(k·n) memory. Class costs come from prefix sums of the mean-centred values
//! and their squares; both prefix sums use Neumaier compensation. The SDCM
//! that is reported is recomputed directly from the chosen classes (two-pass
//! mean and squared deviations), not taken from the prefix sums.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum JenksError {
    #[error("no values to classify")]
    Empty,
    #[error("class count {class_count} is outside 1..={len}")]
    ClassCount { class_count: usize, len: usize },
    #[error("value at index {0} is not finite")]
    NonFinite(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct JenksResult {
    pub sorted_values: Vec<f64>,
    /// `class_count - 1` split indices into `sorted_values`; class j holds
    /// `sorted_values[b[j-1]..b[j]]` with implicit `b[-1] = 0`, `b[k-1] = n`.
    pub class_boundaries: Vec<usize>,
    pub sdcm: f64,
    pub gvf: f64,
}

impl JenksResult {
    pub fn class_count(&self) -> usize {
        self.class_boundaries.len() + 1
    }

    /// Half-open index ranges of each class.
    pub fn class_ranges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::with_capacity(self.class_boundaries.len() + 2);
        edges.push(0);
        edges.extend_from_slice(&self.class_boundaries);
        edges.push(self.sorted_values.len());
        edges.windows(2).map(|w| (w[0], w[1])).collect()
    }

    pub fn classes(&self) -> Vec<&[f64]> {
        self.class_ranges()
            .into_iter()
            .map(|(a, b)| &self.sorted_values[a..b])
            .collect()
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Sum of squared deviations from the mean of `values` (two-pass).
pub fn squared_deviation(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mean = compensated_sum(values.iter().copied()) / values.len() as f64;
    compensated_sum(values.iter().map(|v| (v - mean) * (v - mean)))
}

fn sorted_copy(values: &[f64]) -> Result<Vec<f64>, JenksError> {
    if values.is_empty() {
        return Err(JenksError::Empty);
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(JenksError::NonFinite(i));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted)
}

struct PrefixCosts {
    sum: Vec<f64>,
    sq: Vec<f64>,
}

impl PrefixCosts {
    fn new(sorted: &[f64]) -> Self {
        let shift = compensated_sum(sorted.iter().copied()) / sorted.len() as f64;
        let mut sum = Vec::with_capacity(sorted.len() + 1);
        let mut sq = Vec::with_capacity(sorted.len() + 1);
        let (mut s, mut q) = (CompensatedSum::default(), CompensatedSum::default());
        sum.push(0.0);
        sq.push(0.0);
        for v in sorted {
            let c = v - shift;
            s.add(c);
            q.add(c * c);
            sum.push(s.value());
            sq.push(q.value());
        }
        PrefixCosts { sum, sq }
    }

    /// SDCM of the class `[a, b)`.
    fn cost(&self, a: usize, b: usize) -> f64 {
        let n = (b - a) as f64;
        let s = self.sum[b] - self.sum[a];
        let cost = (self.sq[b] - self.sq[a]) - s * s / n;
        cost.max(0.0)
    }
}

pub fn jenks_breaks(values: &[f64], class_count: usize) -> Result<JenksResult, JenksError> {
    let sorted = sorted_copy(values)?;
    let n = sorted.len();
    if class_count == 0 || class_count > n {
        return Err(JenksError::ClassCount { class_count, len: n });
    }
    let costs = PrefixCosts::new(&sorted);
    let sdam = squared_deviation(&sorted);
    // Costs within this margin are treated as tied; ties go to the
    // lexicographically smallest boundary vector.
    let tol = 1e-12 * costs.cost(0, n).max(f64::MIN_POSITIVE);

    // best[j][s]: optimal cost of splitting sorted[s..n] into j + 1 classes.
    let mut best: Vec<Vec<f64>> = Vec::with_capacity(class_count);
    best.push((0..=n).map(|s| if s < n { costs.cost(s, n) } else { f64::INFINITY }).collect());
    for j in 1..class_count {
        let prev = &best[j - 1];
        let mut row = vec![f64::INFINITY; n + 1];
        for (s, slot) in row.iter_mut().enumerate().take(n - j) {
            *slot = (s + 1..=n - j).map(|t| costs.cost(s, t) + prev[t]).fold(f64::INFINITY, f64::min);
        }
        best.push(row);
    }

    let mut boundaries = Vec::with_capacity(class_count - 1);
    let mut s = 0;
    for j in (1..class_count).rev() {
        let target = best[j][s] + tol;
        let t = (s + 1..=n - j)
            .find(|&t| costs.cost(s, t) + best[j - 1][t] <= target)
            .expect("the minimizing split satisfies its own bound");
        boundaries.push(t);
        s = t;
    }

    let mut result = JenksResult {
        sorted_values: sorted,
        class_boundaries: boundaries,
        sdcm: 0.0,
        gvf: 0.0,
    };
    result.sdcm = compensated_sum(result.classes().into_iter().map(squared_deviation));
    result.gvf = gvf_from(sdam, result.sdcm);
    Ok(result)
}

fn gvf_from(sdam: f64, sdcm: f64) -> f64 {
    if sdam == 0.0 {
        1.0
    } else {
        ((sdam - sdcm) / sdam).clamp(0.0, 1.0)
    }
}

/// Goodness of variance fit of `result` against the values it classified.
pub fn gvf(values: &[f64], result: &JenksResult) -> f64 {
    gvf_from(squared_deviation(values), result.sdcm)
}

/// Splits a non-increasing gain series into a high-impact prefix and a long
/// tail; returns the prefix length.
pub fn threshold_from_gains(gains: &[f64]) -> Result<usize, JenksError> {
    let n = gains.len();
    if n == 0 {
        return Err(JenksError::Empty);
    }
    if gains.iter().all(|g| *g == gains[0]) {
        return Ok(n);
    }
    let result = jenks_breaks(gains, 2)?;
    Ok(n - result.class_boundaries[0])
}

/// Same split made on the non-decreasing cumulative curve instead of the
/// gains: the prefix is the lower class (ranks before the plateau).
pub fn threshold_from_cumulative(cumulative: &[f64]) -> Result<usize, JenksError> {
    let n = cumulative.len();
    if n == 0 {
        return Err(JenksError::Empty);
    }
    if cumulative.iter().all(|c| *c == cumulative[0]) {
        return Ok(n);
    }
    let result = jenks_breaks(cumulative, 2)?;
    Ok(result.class_boundaries[0])
}
