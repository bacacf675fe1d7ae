//! A small parallel sweep over seeds with a CSV summary.

use regfree::experiment::{summarize, summary_csv, sweep, Check, SweepConfig};

fn main() -> regfree::error::Result<()> {
    let cfg = SweepConfig::new(
        vec![32, 8, 2],
        0..16,
        vec![
            Check::Certify4,
            Check::Detect4,
            Check::ChifExact,
            Check::Degeneracy,
        ],
    );
    let records = sweep(&cfg)?;
    for r in records.iter().take(3) {
        println!("{}", r.deterministic_json());
    }
    print!("{}", summary_csv(&summarize(&records))?);
    Ok(())
}
