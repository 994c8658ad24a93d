//! Builds a Hamilton cycle of a Gilbert graph from a tessellation of the box
//! and prints the stage log and structural checks.
//!
//!     cargo run --release --example construct_cycle [side]

use rgg_lab::algorithms::{verify_hamilton_cycle, SearchBudget};
use rgg_lab::construct::{construct_hamilton, ConstructionParams};
use rgg_lab::geometry::{sample_poisson, BoxSpec, Norm};
use rgg_lab::graph::build_gilbert;
use rgg_lab::hitting::{hitting_radius, MonotoneProperty};

fn main() -> rgg_lab::Result<()> {
    let side: Option<f64> = std::env::args().nth(1).and_then(|s| s.parse().ok());
    let ps = sample_poisson(BoxSpec::planar(2000.0)?, 11);
    let r = 3.0 * hitting_radius(&ps, MonotoneProperty::KConnected(2), Norm::EUCLIDEAN, SearchBudget::default())?.radius;
    let params = ConstructionParams { square_side: Some(side.unwrap_or(r / 2.0)), ..Default::default() };
    let report = construct_hamilton(&ps, r, &params, Norm::EUCLIDEAN)?;

    for log in &report.stage_log {
        println!("{}: {:?}", log.stage, log.stats);
    }
    for check in &report.assumption_checks {
        println!("  {:<36} held={} ({} evaluated)", check.name, check.held, check.evaluated);
    }
    for w in &report.warnings {
        println!("warning: {w}");
    }
    match report.cycle() {
        Some(cycle) => {
            let g = build_gilbert(&ps, r, Norm::EUCLIDEAN)?;
            println!("cycle through {} points, verified = {}", cycle.len(), verify_hamilton_cycle(&g, &cycle));
        }
        None => {
            let (stage, why) = report.failure().unwrap();
            println!("failed at {stage}: {why}");
        }
    }
    Ok(())
}
