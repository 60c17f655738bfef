//! Runs the protocol many times at a fixed strategy and writes a trajectory.
//!
//! `cargo run --example simulate_sequence -- trajectory.csv` also saves the
//! first 10,000 experiments as CSV.

use std::fs::File;
use std::io::BufWriter;

use sleeping_kelly::growth::experiment_multiplier;
use sleeping_kelly::montecarlo::{simulate_with_trajectory, write_trajectory_csv, SimulationConfig, TRAJECTORY_ROW_CAP};
use sleeping_kelly::Strategy;

fn main() -> sleeping_kelly::Result<()> {
    let strategy = Strategy::new(0.0, 1.0 / 3.0)?;
    let analytic = experiment_multiplier(strategy);

    for seed in 1..=5 {
        let cfg = SimulationConfig::new(strategy, 100_000, seed)?;
        let (report, rows) = simulate_with_trajectory(&cfg, TRAJECTORY_ROW_CAP);
        let rel = (report.empirical_multiplier - analytic) / analytic;
        println!(
            "seed {seed}: {} heads / {} tails, empirical {:.6}, analytic {analytic:.6}, rel err {rel:+.2e}",
            report.heads_count, report.tails_count, report.empirical_multiplier
        );
        if seed == 1 {
            if let Some(path) = std::env::args().nth(1) {
                write_trajectory_csv(&rows, BufWriter::new(File::create(&path)?))?;
                println!("wrote {} rows to {path}", rows.len());
            }
        }
    }
    Ok(())
}
