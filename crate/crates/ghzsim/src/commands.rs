//! The `sweep`, `coeffs`, `detect` and `boxes` commands, writing CSV.

use std::io::Write;

use anyhow::{ensure, Result};
use csv::{Terminator, WriterBuilder};

use ghzsim_core::analytics::{e1_closed, Estimate};
use ghzsim_core::coefficients::{index_to_harmonic, CoefficientTable, OddSeries};
use ghzsim_core::detection::DetectionScheme;

use crate::engine::{Engine, GridPoint, Protocol, Summary, Workload};

/// Reals are written with 17 significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(out)
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub protocol: Protocol,
    pub grid: Vec<GridPoint>,
    pub trials: u64,
    pub seed: u64,
    pub n_parties: usize,
    pub scheme: DetectionScheme,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        ensure!(self.trials >= 1, "trials must be at least 1");
        ensure!(!self.grid.is_empty(), "the grid is empty");
        ensure!(self.n_parties >= 3, "at least three parties are required");
        ensure!(
            self.protocol == Protocol::Nparty || self.n_parties == 3,
            "--n-parties applies only to the nparty protocol"
        );
        Ok(())
    }

    fn workload<'a>(&self, point: GridPoint, table: &'a CoefficientTable) -> Workload<'a> {
        Workload {
            protocol: self.protocol,
            point,
            n_parties: self.n_parties,
            table,
            scheme: self.scheme,
        }
    }
}

/// One grid point of a sweep.
#[derive(Clone, Copy, Debug)]
pub struct PointResult {
    pub point: GridPoint,
    pub summary: Summary,
}

impl PointResult {
    pub fn phi(&self) -> f64 {
        self.point.sum()
    }

    pub fn correlation(&self) -> Estimate {
        self.summary.tally.correlation()
    }
}

/// Runs every grid point; point `k` uses stream `k`.
pub fn run_grid(engine: &Engine, config: &SweepConfig, table: &CoefficientTable) -> Result<Vec<PointResult>> {
    config.validate()?;
    config
        .grid
        .iter()
        .enumerate()
        .map(|(k, &point)| {
            let summary = engine.run_workload(&config.workload(point, table), config.seed, k as u64, config.trials)?;
            Ok(PointResult { point, summary })
        })
        .collect()
}

/// Columns: phi, estimate, stderr, n, oracle_e1, oracle_cos, protocol, seed.
pub fn write_sweep<W: Write>(out: W, config: &SweepConfig, rows: &[PointResult]) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["phi", "estimate", "stderr", "n", "oracle_e1", "oracle_cos", "protocol", "seed"])?;
    for r in rows {
        let est = r.correlation();
        let phi = r.phi();
        w.write_record([
            real(phi),
            real(est.mean),
            real(est.stderr),
            est.n.to_string(),
            real(e1_closed(phi)),
            real(phi.cos()),
            config.protocol.name().to_string(),
            config.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Columns: index, e, p, cumulative_p.
pub fn write_coeffs<W: Write>(out: W, table: &CoefficientTable) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["index", "e", "p", "cumulative_p"])?;
    for (k, ((e, p), c)) in table.e().iter().zip(table.p()).zip(table.cumulative()).enumerate() {
        w.write_record([index_to_harmonic(k).to_string(), real(*e), real(*p), real(*c)])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CoeffTarget {
    MaxHarmonic(u32),
    Epsilon(f64),
}

pub fn coefficient_table(target: CoeffTarget) -> Result<CoefficientTable> {
    Ok(match target {
        CoeffTarget::MaxHarmonic(m) => CoefficientTable::with_max_harmonic(OddSeries::E1, m)?,
        CoeffTarget::Epsilon(eps) => {
            ensure!(eps > 0.0 && eps.is_finite(), "epsilon must be positive");
            CoefficientTable::certified(OddSeries::E1, eps)?
        }
    })
}

/// Columns: phi, detect_rate_a, detect_rate_b, detect_rate_c, triple_rate,
/// conditional_corr, stderr, n. `n` counts attempts; `stderr` refers to the
/// triple-detection subsample.
pub fn write_detect<W: Write>(out: W, rows: &[PointResult]) -> Result<()> {
    let mut w = writer(out);
    w.write_record([
        "phi",
        "detect_rate_a",
        "detect_rate_b",
        "detect_rate_c",
        "triple_rate",
        "conditional_corr",
        "stderr",
        "n",
    ])?;
    for r in rows {
        let [a, b, c] = r.summary.detection_rates();
        let est = r.correlation();
        w.write_record([
            real(r.phi()),
            real(a),
            real(b),
            real(c),
            real(r.summary.triple_rate()),
            real(est.mean),
            real(est.stderr),
            r.summary.attempts.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Columns: phi, estimate, stderr, n, oracle_cos, box_uses_per_run.
pub fn write_boxes<W: Write>(out: W, rows: &[PointResult]) -> Result<()> {
    let mut w = writer(out);
    w.write_record(["phi", "estimate", "stderr", "n", "oracle_cos", "box_uses_per_run"])?;
    for r in rows {
        let est = r.correlation();
        w.write_record([
            real(r.phi()),
            real(est.mean),
            real(est.stderr),
            est.n.to_string(),
            real(r.phi().cos()),
            real(r.summary.box_uses as f64 / r.summary.attempts as f64),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(real(0.1), "1.0000000000000001e-1");
        assert_eq!(real(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(real(-1.0), "-1.0000000000000000e0");
    }

    #[test]
    fn single_harmonic_table() {
        let t = coefficient_table(CoeffTarget::MaxHarmonic(1)).unwrap();
        let mut buf = Vec::new();
        write_coeffs(&mut buf, &t).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        let p: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
        assert!((p - 3.0 * std::f64::consts::PI.powi(2) / 32.0).abs() < 1e-15);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn invalid_targets() {
        assert!(coefficient_table(CoeffTarget::MaxHarmonic(0)).is_err());
        assert!(coefficient_table(CoeffTarget::Epsilon(-1.0)).is_err());
    }
}
