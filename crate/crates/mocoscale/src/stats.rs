//! Friedman, Wilcoxon rank-sum and Holm, and the better/equal/worse tables
//! built from them.

use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("need at least {0} values per group")]
    TooFewValues(usize),
    #[error("need at least two groups")]
    TooFewGroups,
    #[error("groups have different run counts")]
    UnequalGroups,
    #[error("non-finite sample value")]
    NonFinite,
    #[error("p-values must lie in [0, 1]")]
    InvalidPValue,
}

pub type Result<T> = std::result::Result<T, StatsError>;

/// Final HV values of one algorithm in one setting.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub algorithm: String,
    pub problem: String,
    pub dim: usize,
    pub budget: u64,
    pub hv_values: Vec<f64>,
}

impl SampleSet {
    pub fn mean(&self) -> f64 {
        mean(&self.hv_values)
    }

    pub fn sd(&self) -> f64 {
        sd(&self.hv_values)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ComparisonCell {
    pub better: usize,
    pub equal: usize,
    pub worse: usize,
}

impl std::fmt::Display for ComparisonCell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}/{}", self.better, self.equal, self.worse)
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation; zero for fewer than two values.
pub fn sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let mu = mean(xs);
    (xs.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// 1-based ranks with ties sharing their average rank.
pub fn midranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && xs[order[j]] == xs[order[i]] {
            j += 1;
        }
        let r = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    ranks
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

fn check_finite(xs: &[f64]) -> Result<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(StatsError::NonFinite)
    }
}

/// Friedman rank-sum test. `groups[j][i]` is treatment `j` in block `i`.
pub fn friedman_test(groups: &[Vec<f64>]) -> Result<TestResult> {
    let k = groups.len();
    if k < 2 {
        return Err(StatsError::TooFewGroups);
    }
    let n = groups[0].len();
    if groups.iter().any(|g| g.len() != n) {
        return Err(StatsError::UnequalGroups);
    }
    if n < 2 {
        return Err(StatsError::TooFewValues(2));
    }
    for g in groups {
        check_finite(g)?;
    }
    let mut rank_sums = vec![0.0; k];
    for i in 0..n {
        let block: Vec<f64> = groups.iter().map(|g| g[i]).collect();
        for (s, r) in rank_sums.iter_mut().zip(midranks(&block)) {
            *s += r;
        }
    }
    let (kf, nf) = (k as f64, n as f64);
    let centre = (kf + 1.0) / 2.0;
    let q = 12.0 * nf / (kf * (kf + 1.0)) * rank_sums.iter().map(|s| (s / nf - centre).powi(2)).sum::<f64>();
    let p = if q <= 0.0 { 1.0 } else { ChiSquared::new(kf - 1.0).unwrap().sf(q) };
    Ok(TestResult { statistic: q, p_value: p })
}

/// Largest combined sample size for which the exact null distribution is
/// enumerated.
pub const EXACT_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WilcoxonMethod {
    /// Exact for tie-free samples with `n1 + n2 <= EXACT_LIMIT`, normal
    /// approximation otherwise.
    Auto,
    Exact,
    Normal,
}

/// Two-sided Wilcoxon rank-sum (Mann-Whitney) test. The statistic is
/// `U = W - n1(n1+1)/2` where `W` is the rank sum of `a`.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Result<TestResult> {
    wilcoxon_rank_sum_with(a, b, WilcoxonMethod::Auto)
}

/// As [`wilcoxon_rank_sum`] with the p-value method forced. `Exact` ignores
/// ties in the null distribution.
pub fn wilcoxon_rank_sum_with(a: &[f64], b: &[f64], method: WilcoxonMethod) -> Result<TestResult> {
    let (n1, n2) = (a.len(), b.len());
    if n1 < 2 || n2 < 2 {
        return Err(StatsError::TooFewValues(2));
    }
    check_finite(a)?;
    check_finite(b)?;
    let all: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&all);
    let w: f64 = ranks[..n1].iter().sum();
    let u = w - (n1 * (n1 + 1)) as f64 / 2.0;
    let exact = match method {
        WilcoxonMethod::Auto => n1 + n2 <= EXACT_LIMIT && !has_ties(&all),
        WilcoxonMethod::Exact => true,
        WilcoxonMethod::Normal => false,
    };
    let p = if exact {
        exact_p(n1, n2, u.round() as usize)
    } else {
        normal_p(n1, n2, u, &all)
    };
    Ok(TestResult { statistic: u, p_value: p })
}

fn has_ties(xs: &[f64]) -> bool {
    let mut s = xs.to_vec();
    s.sort_by(f64::total_cmp);
    s.windows(2).any(|w| w[0] == w[1])
}

/// Counts of `U` values over all `C(n1+n2, n1)` rank assignments.
fn u_distribution(n1: usize, n2: usize) -> Vec<f64> {
    // ways[i][u]: choices of i ranks among those seen so far with U = u.
    let max_u = n1 * n2;
    let mut ways = vec![vec![0.0f64; max_u + 1]; n1 + 1];
    ways[0][0] = 1.0;
    for r in 0..n1 + n2 {
        // Rank r (0-based) picked as the i-th smallest of `a` adds r - i to U.
        for i in (0..n1).rev() {
            if r < i {
                continue;
            }
            let add = r - i;
            if add > n2 {
                continue;
            }
            for u in (0..=max_u - add).rev() {
                let c = ways[i][u];
                if c != 0.0 {
                    ways[i + 1][u + add] += c;
                }
            }
        }
    }
    ways.pop().unwrap()
}

fn exact_p(n1: usize, n2: usize, u: usize) -> f64 {
    let counts = u_distribution(n1, n2);
    let total: f64 = counts.iter().sum();
    let lower: f64 = counts[..=u].iter().sum::<f64>() / total;
    let upper: f64 = counts[u..].iter().sum::<f64>() / total;
    (2.0 * lower.min(upper)).min(1.0)
}

fn normal_p(n1: usize, n2: usize, u: f64, all: &[f64]) -> f64 {
    let (f1, f2) = (n1 as f64, n2 as f64);
    let n = f1 + f2;
    let mut sorted = all.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&x| x == sorted[i]).count();
        let t = j as f64;
        tie_term += t * t * t - t;
        i += j;
    }
    let var = f1 * f2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((u - f1 * f2 / 2.0).abs() - 0.5).max(0.0) / var.sqrt();
    statrs::function::erf::erfc(z / std::f64::consts::SQRT_2).min(1.0)
}

/// Holm step-down adjustment, returned in input order.
pub fn holm_adjust(p: &[f64]) -> Result<Vec<f64>> {
    if p.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(StatsError::InvalidPValue);
    }
    let m = p.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p[a].total_cmp(&p[b]).then(a.cmp(&b)));
    let mut out = vec![0.0; m];
    let mut running: f64 = 0.0;
    for (rank, &i) in order.iter().enumerate() {
        running = running.max(((m - rank) as f64 * p[i]).min(1.0));
        out[i] = running;
    }
    Ok(out)
}

/// Raw two-sided Wilcoxon p-value for every unordered pair `(i, j)`, `i < j`.
pub fn pairwise_p_values(samples: &[SampleSet]) -> Result<Vec<(usize, usize, f64)>> {
    let mut out = Vec::new();
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            let t = wilcoxon_rank_sum(&samples[i].hv_values, &samples[j].hv_values)?;
            out.push((i, j, t.p_value));
        }
    }
    Ok(out)
}

/// Turns already-adjusted pairwise p-values into one cell per sample.
pub fn cells_from_adjusted(samples: &[SampleSet], pairs: &[(usize, usize, f64)], alpha: f64) -> Vec<ComparisonCell> {
    let mut cells = vec![ComparisonCell::default(); samples.len()];
    for &(i, j, p) in pairs {
        if p >= alpha {
            cells[i].equal += 1;
            cells[j].equal += 1;
            continue;
        }
        let (mi, mj) = (samples[i].mean(), samples[j].mean());
        if mi > mj {
            cells[i].better += 1;
        } else {
            cells[i].worse += 1;
        }
        if mj > mi {
            cells[j].better += 1;
        } else {
            cells[j].worse += 1;
        }
    }
    cells
}

/// Better/equal/worse counts for each sample against all others in one
/// setting, with Holm applied over all pairs of the setting.
pub fn comparison_table(samples: &[SampleSet], alpha: f64) -> Result<Vec<ComparisonCell>> {
    let pairs = pairwise_p_values(samples)?;
    let raw: Vec<f64> = pairs.iter().map(|p| p.2).collect();
    let adjusted = holm_adjust(&raw)?;
    let pairs: Vec<_> = pairs.iter().zip(adjusted).map(|(&(i, j, _), p)| (i, j, p)).collect();
    Ok(cells_from_adjusted(samples, &pairs, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midranks_average_ties() {
        assert_eq!(midranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn u_distribution_small() {
        // n1 = n2 = 2: U takes 0,1,2,2,3,4 over the six assignments.
        assert_eq!(u_distribution(2, 2), vec![1.0, 1.0, 2.0, 1.0, 1.0]);
        assert_eq!(u_distribution(3, 3).iter().sum::<f64>(), 20.0);
    }

    #[test]
    fn sd_of_one_value_is_zero() {
        assert_eq!(sd(&[4.0]), 0.0);
        assert!((sd(&[1.0, 2.0, 3.0, 4.0]) - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}
