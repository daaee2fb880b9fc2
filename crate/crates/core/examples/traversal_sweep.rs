//! Trains toy GANs across latent dimensions and prints traversal dip depths.
//!
//! cargo run --release --example traversal_sweep -- [steps] [dims...]

use std::time::Instant;

use latentgeom::geometry::PathKind;
use latentgeom::priors::PriorFamily;
use latentgeom::toygan::{dimension_sweep, sweep_csv, GanConfig, SweepSettings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let steps: usize = args.first().map(|s| s.parse()).transpose()?.unwrap_or(5000);
    let dims: Vec<usize> = if args.len() > 1 {
        args[1..].iter().map(|s| s.parse()).collect::<Result<_, _>>()?
    } else {
        vec![2, 8, 32, 64]
    };
    let base = GanConfig {
        train_steps: steps,
        ..GanConfig::default()
    };
    let start = Instant::now();
    let rows = dimension_sweep(
        &base,
        &dims,
        &[PriorFamily::Normal, PriorFamily::GammaRadius],
        &[0, 1, 2],
        &[PathKind::Linear, PathKind::Spherical],
        SweepSettings::default(),
    )?;
    print!("{}", sweep_csv(&rows));
    eprintln!("{} models in {:.1?}", rows.len(), start.elapsed());
    Ok(())
}
