//! Print one exact ladder row in the value / value-over-length layout.
//!
//! Usage: cargo run --example ladder_row -- [rungs]

use pmg_core::families::ladder;
use pmg_core::invariants::ComputeOptions;
use pmg_core::io::{compute_report, ReportFormat};
use pmg_core::scalar::{rat, ScalarMode};

fn main() -> Result<(), pmg_core::Error> {
    let rungs: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("rung count"))
        .unwrap_or(5);
    let graph = ladder(rungs, &rat("1"), &rat("1"))?;
    let report = compute_report(
        &graph,
        ScalarMode::Exact,
        &ComputeOptions::default(),
        12,
        false,
    )?;
    print!("{}", report.emit(ReportFormat::Table));
    Ok(())
}
