//! Writes the wealth-multiplier surface over the full strategy box as CSV,
//! the input for a heatmap.
//!
//! `cargo run --example surface_csv -- surface.csv`

use std::fs::File;
use std::io::BufWriter;

use sleeping_kelly::growth::{surface_grid, SurfaceBounds};

fn main() -> sleeping_kelly::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "surface.csv".into());
    let grid = surface_grid(SurfaceBounds::FULL, 201)?;
    grid.write_csv(BufWriter::new(File::create(&path)?))?;
    let best = grid.argmax();
    println!(
        "wrote {} cells to {path}; peak {:.6} at a={:.2}, b={:.2}; at the origin {}",
        grid.cells.len(),
        best.multiplier,
        best.a,
        best.b,
        grid.nearest(0.0, 0.0).multiplier
    );
    Ok(())
}
