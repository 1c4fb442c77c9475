use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Upper `alpha` quantile of the chi-square distribution.
pub fn chi_square_critical(df: usize, alpha: f64) -> f64 {
    ChiSquared::new(df as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(1.0 - alpha)
}

/// Pearson statistic and degrees of freedom for independence of rows and
/// columns. Empty rows and columns are dropped.
pub fn contingency_chi_square(table: &[Vec<u64>]) -> (f64, usize) {
    let cols = table.first().map_or(0, Vec::len);
    let row_sums: Vec<u64> = table.iter().map(|r| r.iter().sum()).collect();
    let col_sums: Vec<u64> = (0..cols).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    let total: u64 = row_sums.iter().sum();
    let mut stat = 0.0;
    for (row, &rs) in table.iter().zip(&row_sums) {
        for (&o, &cs) in row.iter().zip(&col_sums) {
            if rs == 0 || cs == 0 {
                continue;
            }
            let e = rs as f64 * cs as f64 / total as f64;
            stat += (o as f64 - e).powi(2) / e;
        }
    }
    let r = row_sums.iter().filter(|&&s| s > 0).count();
    let c = col_sums.iter().filter(|&&s| s > 0).count();
    (stat, (r.saturating_sub(1) * c.saturating_sub(1)).max(1))
}
