//! Per-trial runners for every protocol form and the parallel driver.
//!
//! Trial `i` of stream `s` always runs on `TrialRng::new(seed, s, i)`, and
//! trials are grouped into fixed-size chunks whose tallies are exact integer
//! sums, so results do not depend on the number of lanes.

use anyhow::{bail, ensure, Context, Result};
use clap::ValueEnum;
use rayon::prelude::*;

use ghzsim_core::analytics::{Tally, TrialOutcome};
use ghzsim_core::boxes::run_box_protocol;
use ghzsim_core::coefficients::CoefficientTable;
use ghzsim_core::detection::{run_detection, DetectionScheme, Guesses};
use ghzsim_core::protocols::{
    run_nparty, run_protocol1, run_protocol2, run_two_bit, run_variant, sector_bits, RunOutcome,
    Settings, TwoBitShared, Variant,
};
use ghzsim_core::randomness::{random_angle, sample_shared, Angle, Mixing, TrialRng};
use ghzsim_core::Sign;

/// Trials per work unit.
pub const CHUNK: u64 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum Protocol {
    P1,
    P2,
    V1prime,
    V1doubleprime,
    V1tripleprime,
    Twobit,
    Nparty,
    Boxes,
    Detect,
}

impl Protocol {
    pub const ALL: [Protocol; 9] = [
        Protocol::P1,
        Protocol::P2,
        Protocol::V1prime,
        Protocol::V1doubleprime,
        Protocol::V1tripleprime,
        Protocol::Twobit,
        Protocol::Nparty,
        Protocol::Boxes,
        Protocol::Detect,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::P1 => "p1",
            Protocol::P2 => "p2",
            Protocol::V1prime => "v1prime",
            Protocol::V1doubleprime => "v1doubleprime",
            Protocol::V1tripleprime => "v1tripleprime",
            Protocol::Twobit => "twobit",
            Protocol::Nparty => "nparty",
            Protocol::Boxes => "boxes",
            Protocol::Detect => "detect",
        }
    }

    /// Whether the harmonic index is drawn from the mixture table, making the
    /// target correlation `cos φ` instead of `E1(φ)`.
    pub fn uses_mixture(self) -> bool {
        matches!(self, Protocol::P2 | Protocol::Boxes | Protocol::Detect)
    }

    /// Communication bits every run must carry.
    pub fn budget(self, n_parties: usize) -> usize {
        match self {
            Protocol::P1
            | Protocol::P2
            | Protocol::V1prime
            | Protocol::V1doubleprime
            | Protocol::V1tripleprime => 3,
            Protocol::Twobit => 2,
            Protocol::Nparty => (n_parties - 1) * sector_bits(n_parties) as usize,
            Protocol::Boxes | Protocol::Detect => 0,
        }
    }

    fn variant(self) -> Option<Variant> {
        match self {
            Protocol::V1prime => Some(Variant::Prime),
            Protocol::V1doubleprime => Some(Variant::DoublePrime),
            Protocol::V1tripleprime => Some(Variant::TriplePrime),
            _ => None,
        }
    }
}

impl std::fmt::Display for Protocol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One point of a sweep grid, in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GridPoint {
    /// Settings drawn uniformly per trial subject to the given sum.
    Sum(f64),
    Triple([f64; 3]),
}

impl GridPoint {
    pub fn sum(&self) -> f64 {
        match *self {
            GridPoint::Sum(s) => s,
            GridPoint::Triple([a, b, c]) => a + b + c,
        }
    }

    /// `n` equally spaced sums on `[0, 2π)`.
    pub fn uniform_grid(n: usize) -> Vec<GridPoint> {
        (0..n)
            .map(|k| GridPoint::Sum(std::f64::consts::TAU * k as f64 / n as f64))
            .collect()
    }

    fn settings(&self, rng: &mut TrialRng) -> Settings {
        match *self {
            GridPoint::Sum(sum) => {
                let phi_a = random_angle(rng);
                let phi_b = random_angle(rng);
                Settings {
                    phi_a,
                    phi_b,
                    phi_c: Angle::new(sum - phi_a.radians() - phi_b.radians()),
                }
            }
            GridPoint::Triple([a, b, c]) => Settings::new(a, b, c),
        }
    }

    fn n_settings(&self, n: usize, rng: &mut TrialRng) -> Result<Vec<Angle>> {
        match *self {
            GridPoint::Sum(sum) => {
                let mut v: Vec<Angle> = (0..n - 1).map(|_| random_angle(rng)).collect();
                let rest = v.iter().fold(sum, |acc, a| acc - a.radians());
                v.push(Angle::new(rest));
                Ok(v)
            }
            GridPoint::Triple([a, b, c]) if n == 3 => Ok(vec![Angle::new(a), Angle::new(b), Angle::new(c)]),
            GridPoint::Triple(_) => bail!("explicit triples need exactly three parties"),
        }
    }
}

/// What one trial contributes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sample {
    /// `None` when some party did not detect.
    pub outcome: Option<TrialOutcome>,
    pub detected: [bool; 3],
    pub box_uses: u32,
}

impl Sample {
    fn complete(outcome: TrialOutcome) -> Sample {
        Sample {
            outcome: Some(outcome),
            detected: [true; 3],
            box_uses: 0,
        }
    }
}

/// Aggregate over many trials; merging is exact and order-independent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub attempts: u64,
    pub detected: [u64; 3],
    pub box_uses: u64,
    /// Trials in which every party produced an output.
    pub tally: Tally,
}

impl Summary {
    pub fn record(&mut self, s: Sample) {
        self.attempts += 1;
        for (count, d) in self.detected.iter_mut().zip(s.detected) {
            *count += d as u64;
        }
        self.box_uses += s.box_uses as u64;
        if let Some(o) = s.outcome {
            self.tally.record(o);
        }
    }

    pub fn merge(self, o: Summary) -> Summary {
        Summary {
            attempts: self.attempts + o.attempts,
            detected: [0, 1, 2].map(|k| self.detected[k] + o.detected[k]),
            box_uses: self.box_uses + o.box_uses,
            tally: self.tally.merge(o.tally),
        }
    }

    pub fn detection_rates(&self) -> [f64; 3] {
        self.detected.map(|d| d as f64 / self.attempts as f64)
    }

    pub fn triple_rate(&self) -> f64 {
        self.tally.n as f64 / self.attempts as f64
    }
}

/// Everything a trial needs besides its random stream.
#[derive(Clone, Copy, Debug)]
pub struct Workload<'a> {
    pub protocol: Protocol,
    pub point: GridPoint,
    pub n_parties: usize,
    pub table: &'a CoefficientTable,
    pub scheme: DetectionScheme,
}

fn checked(out: RunOutcome, budget: usize, resamples: u32) -> Result<Sample> {
    let bits = out.transcript.total_bits();
    ensure!(bits == budget, "transcript carried {bits} bits, expected {budget}");
    Ok(Sample::complete(TrialOutcome {
        signs: out.signs(),
        resamples,
    }))
}

impl Workload<'_> {
    pub fn trial(&self, rng: &mut TrialRng) -> Result<Sample> {
        let budget = self.protocol.budget(self.n_parties);
        let mixing = if self.protocol.uses_mixture() {
            Mixing::Mixture(self.table)
        } else {
            Mixing::Plain
        };
        match self.protocol {
            Protocol::Twobit => {
                let settings = self.point.settings(rng);
                let shared = TwoBitShared {
                    phi_b: random_angle(rng),
                    phi_c: random_angle(rng),
                };
                checked(run_two_bit(&settings, &shared), budget, 0)
            }
            Protocol::Nparty => {
                let settings = self.point.n_settings(self.n_parties, rng)?;
                let shared: Vec<Angle> = (1..self.n_parties).map(|_| random_angle(rng)).collect();
                let out = run_nparty(&settings, &shared)?;
                let bits = out.transcript.total_bits();
                ensure!(bits == budget, "transcript carried {bits} bits, expected {budget}");
                let rest = out.outputs[2..].iter().fold(Sign::Plus, |acc, &s| acc * s);
                Ok(Sample::complete([out.outputs[0], out.outputs[1], rest].into()))
            }
            Protocol::Boxes => {
                let settings = self.point.settings(rng);
                let draw = sample_shared(rng, mixing);
                let run = run_box_protocol(&settings.harmonic(draw.shared.m), &draw.shared, rng)?;
                let uses = run.network.total_uses();
                let mut s = checked(run.outcome, budget, draw.resamples)?;
                s.box_uses = uses;
                Ok(s)
            }
            Protocol::Detect => {
                let settings = self.point.settings(rng);
                let draw = sample_shared(rng, mixing);
                let guesses = Guesses::sample(rng);
                let out = run_detection(
                    self.scheme,
                    &settings.harmonic(draw.shared.m),
                    &draw.shared,
                    guesses,
                )?;
                Ok(Sample {
                    outcome: out.signs().map(|signs| TrialOutcome {
                        signs,
                        resamples: draw.resamples,
                    }),
                    detected: out.detected(),
                    box_uses: 0,
                })
            }
            p => {
                let settings = self.point.settings(rng);
                let draw = sample_shared(rng, mixing);
                let out = match p.variant() {
                    Some(v) => run_variant(v, &settings, &draw.shared)?,
                    None if p == Protocol::P2 => run_protocol2(&settings, &draw.shared)?,
                    None => run_protocol1(&settings, &draw.shared)?,
                };
                checked(out, budget, draw.resamples)
            }
        }
    }
}

/// A fixed-size worker pool.
pub struct Engine {
    pool: rayon::ThreadPool,
}

impl Engine {
    /// `lanes = 0` uses every available core.
    pub fn new(lanes: usize) -> Result<Engine> {
        let lanes = if lanes == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            lanes
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(lanes)
            .build()
            .context("building worker pool")?;
        Ok(Engine { pool })
    }

    pub fn lanes(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Runs trials `0..n` of `(seed, stream)`.
    pub fn run<F>(&self, seed: u64, stream: u64, n: u64, trial: F) -> Result<Summary>
    where
        F: Fn(&mut TrialRng) -> Result<Sample> + Sync,
    {
        let chunks = n.div_ceil(CHUNK);
        self.pool.install(|| {
            (0..chunks)
                .into_par_iter()
                .map(|k| {
                    let mut s = Summary::default();
                    for i in k * CHUNK..((k + 1) * CHUNK).min(n) {
                        let mut rng = TrialRng::new(seed, stream, i);
                        s.record(trial(&mut rng).with_context(|| format!("trial {i}"))?);
                    }
                    Ok(s)
                })
                .try_reduce(Summary::default, |a, b| Ok(a.merge(b)))
        })
    }

    pub fn run_workload(&self, w: &Workload<'_>, seed: u64, stream: u64, n: u64) -> Result<Summary> {
        self.run(seed, stream, n, |rng| w.trial(rng))
    }
}
