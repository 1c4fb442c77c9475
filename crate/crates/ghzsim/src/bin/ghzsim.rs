use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use ghzsim::acceptance::{Level, Suite};
use ghzsim::commands::{
    coefficient_table, run_grid, write_boxes, write_coeffs, write_detect, write_sweep, CoeffTarget,
    SweepConfig,
};
use ghzsim::engine::{Engine, GridPoint, Protocol};
use ghzsim_core::coefficients::DEFAULT_TAIL_TARGET;
use ghzsim_core::detection::DetectionScheme;

/// Classical simulation of three-party GHZ correlations.
///
/// Angles on the command line are in units of π: `--phi 0.25` means π/4.
/// CSV output writes angles in radians.
#[derive(Parser, Debug)]
#[command(name = "ghzsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate the three-party correlation over a grid of setting sums.
    Sweep {
        #[arg(long, value_enum, default_value_t = Protocol::P2)]
        protocol: Protocol,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Emit the mixture weights that turn E1 into a cosine.
    Coeffs {
        /// Largest odd harmonic to tabulate.
        #[arg(long, conflicts_with = "epsilon")]
        m_max: Option<u32>,
        /// Certified bound on the weight left out of the table.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance checks; the exit code is 0 iff all pass.
    Verify {
        #[arg(long, value_enum, default_value_t = Level::Fast)]
        level: Level,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        lanes: usize,
    },
    /// Detection-loophole rates and conditional correlations.
    Detect {
        #[arg(long, value_enum, default_value_t = Scheme::TriplePrime)]
        scheme: Scheme,
        #[command(flatten)]
        run: RunArgs,
    },
    /// PR-box protocol correlations and no-signaling tests.
    Boxes {
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum Scheme {
    Prime,
    DoublePrime,
    TriplePrime,
}

impl From<Scheme> for DetectionScheme {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::Prime => DetectionScheme::Prime,
            Scheme::DoublePrime => DetectionScheme::DoublePrime,
            Scheme::TriplePrime => DetectionScheme::TriplePrime,
        }
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Setting sums in units of π, or `a:b:c` triples of settings.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "grid")]
    phi: Vec<String>,
    /// Number of equally spaced sums on [0, 2π).
    #[arg(long, default_value_t = 25)]
    grid: usize,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    lanes: usize,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Target for the certified tail weight of the mixture table.
    #[arg(long, default_value_t = DEFAULT_TAIL_TARGET)]
    epsilon: f64,
    /// Party count for the nparty protocol.
    #[arg(long, default_value_t = 3)]
    n_parties: usize,
}

fn parse_point(text: &str) -> Result<GridPoint> {
    let pi = std::f64::consts::PI;
    let parse = |s: &str| -> Result<f64> {
        let v: f64 = s.trim().parse().with_context(|| format!("not a number: {s:?}"))?;
        if !v.is_finite() {
            bail!("not finite: {s:?}");
        }
        Ok(v * pi)
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [s] => Ok(GridPoint::Sum(parse(s)?)),
        [a, b, c] => Ok(GridPoint::Triple([parse(a)?, parse(b)?, parse(c)?])),
        _ => bail!("expected a sum or an a:b:c triple, got {text:?}"),
    }
}

impl RunArgs {
    fn config(&self, protocol: Protocol, scheme: DetectionScheme) -> Result<SweepConfig> {
        let grid = if self.phi.is_empty() {
            GridPoint::uniform_grid(self.grid)
        } else {
            self.phi.iter().map(|s| parse_point(s)).collect::<Result<_>>()?
        };
        let config = SweepConfig {
            protocol,
            grid,
            trials: self.trials,
            seed: self.seed,
            n_parties: self.n_parties,
            scheme,
        };
        config.validate()?;
        Ok(config)
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Sweep { protocol, run } => {
            let config = run.config(protocol, DetectionScheme::default())?;
            let table = coefficient_table(CoeffTarget::Epsilon(run.epsilon))?;
            let rows = run_grid(&Engine::new(run.lanes)?, &config, &table)?;
            write_sweep(output(&run.out)?, &config, &rows)?;
        }
        Command::Coeffs { m_max, epsilon, out } => {
            let target = match m_max {
                Some(m) => CoeffTarget::MaxHarmonic(m),
                None => CoeffTarget::Epsilon(epsilon.unwrap_or(DEFAULT_TAIL_TARGET)),
            };
            let table = coefficient_table(target)?;
            let mut w = output(&out)?;
            write_coeffs(&mut w, &table)?;
            w.flush()?;
            drop(w);
            let summary = format!(
                "max_harmonic = {}\ntail_epsilon = {:e}\nc_three_halves = {}\n",
                table.max_harmonic(),
                table.tail_epsilon(),
                table.c_three_halves()
            );
            if out.is_some() {
                print!("{summary}");
            } else {
                eprint!("{summary}");
            }
        }
        Command::Verify { level, seed, lanes } => {
            let engine = Engine::new(lanes)?;
            let suite = Suite::new(&engine, level, seed)?;
            let mut all = true;
            for id in 1..=10 {
                let c = suite.run(id)?;
                println!("{c}");
                all &= c.passed;
            }
            println!("{}", if all { "all criteria passed" } else { "some criteria failed" });
            return Ok(all);
        }
        Command::Detect { scheme, run } => {
            let config = run.config(Protocol::Detect, scheme.into())?;
            let table = coefficient_table(CoeffTarget::Epsilon(run.epsilon))?;
            let rows = run_grid(&Engine::new(run.lanes)?, &config, &table)?;
            write_detect(output(&run.out)?, &rows)?;
        }
        Command::Boxes { run } => {
            let config = run.config(Protocol::Boxes, DetectionScheme::default())?;
            let table = coefficient_table(CoeffTarget::Epsilon(run.epsilon))?;
            let engine = Engine::new(run.lanes)?;
            let rows = run_grid(&engine, &config, &table)?;
            write_boxes(output(&run.out)?, &rows)?;
            let mut all = true;
            for t in Suite::new(&engine, Level::Fast, run.seed)?.no_signaling()? {
                eprintln!("{t} {}", if t.passed() { "ok" } else { "REJECTED" });
                all &= t.passed();
            }
            return Ok(all);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
