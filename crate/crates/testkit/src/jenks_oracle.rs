//! Exhaustive search over every contiguous partition, in exact rational
//! arithmetic (each f64 converts to a rational without rounding).

use num::{BigRational, Zero};

pub fn exact(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite value")
}

/// Exact sum of squared deviations from the class mean.
pub fn exact_class_cost(values: &[BigRational]) -> BigRational {
    if values.is_empty() {
        return BigRational::zero();
    }
    let n = BigRational::from_integer(values.len().into());
    let mean = values.iter().fold(BigRational::zero(), |acc, v| acc + v) / n;
    values.iter().fold(BigRational::zero(), |acc, v| {
        let d = v - &mean;
        acc + &d * &d
    })
}

/// Exact SDCM of a boundary vector over sorted values.
pub fn exact_sdcm(sorted: &[f64], boundaries: &[usize]) -> BigRational {
    let exact_vals: Vec<BigRational> = sorted.iter().map(|v| exact(*v)).collect();
    let mut edges = vec![0];
    edges.extend_from_slice(boundaries);
    edges.push(sorted.len());
    edges
        .windows(2)
        .map(|w| exact_class_cost(&exact_vals[w[0]..w[1]]))
        .fold(BigRational::zero(), |a, b| a + b)
}

#[derive(Debug, Clone)]
pub struct Exhaustive {
    pub sorted: Vec<f64>,
    pub min_sdcm: BigRational,
    /// Every optimal boundary vector, lexicographically ascending.
    pub optimal: Vec<Vec<usize>>,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    // strictly increasing (k-1)-subsets of 1..n
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for b in start..n {
            if n - b < left {
                break;
            }
            cur.push(b);
            rec(b + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k - 1, &mut Vec::new(), &mut out);
    out
}

pub fn exhaustive_jenks(values: &[f64], class_count: usize) -> Exhaustive {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    let exact_vals: Vec<BigRational> = sorted.iter().map(|v| exact(*v)).collect();
    let mut interval = vec![vec![BigRational::zero(); n + 1]; n + 1];
    for a in 0..n {
        for b in a + 1..=n {
            interval[a][b] = exact_class_cost(&exact_vals[a..b]);
        }
    }
    let mut min: Option<BigRational> = None;
    let mut optimal = Vec::new();
    for bounds in combinations(n, class_count) {
        let mut edges = vec![0];
        edges.extend_from_slice(&bounds);
        edges.push(n);
        let cost = edges
            .windows(2)
            .fold(BigRational::zero(), |acc, w| acc + &interval[w[0]][w[1]]);
        match &min {
            Some(m) if cost > *m => {}
            Some(m) if cost == *m => optimal.push(bounds),
            _ => {
                min = Some(cost);
                optimal = vec![bounds];
            }
        }
    }
    optimal.sort();
    Exhaustive { sorted, min_sdcm: min.expect("at least one partition"), optimal }
}

/// Two-class threshold by enumeration: gains are ranked descending and the
/// high class is the size-p prefix. Ties in cost go to the largest prefix
/// (the smallest ascending boundary); all-equal gains give the whole series.
pub fn exhaustive_threshold(gains: &[f64]) -> usize {
    let n = gains.len();
    if n == 1 || gains.iter().all(|g| *g == gains[0]) {
        return n;
    }
    let mut desc = gains.to_vec();
    desc.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // exact prefix sums of x and x²; class cost = Σx² − (Σx)²/m
    let mut sum = vec![BigRational::zero()];
    let mut sq = vec![BigRational::zero()];
    for v in desc.iter().map(|v| exact(*v)) {
        let s = sum.last().unwrap() + &v;
        let q = sq.last().unwrap() + &v * &v;
        sum.push(s);
        sq.push(q);
    }
    let cost = |a: usize, b: usize| {
        let s = &sum[b] - &sum[a];
        let m = BigRational::from_integer((b - a).into());
        (&sq[b] - &sq[a]) - &s * &s / m
    };
    let mut best: Option<(BigRational, usize)> = None;
    // iterate p from largest to smallest so the first minimum wins ties
    for p in (1..n).rev() {
        let c = cost(0, p) + cost(p, n);
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, p));
        }
    }
    best.expect("n >= 2").1
}
