//! Exact chromatic numbers next to fractional ones.

use regfree::fractional::{chi_f_exact, chromatic_number_exact};
use regfree::graph::Graph;
use regfree::rational;

fn main() -> regfree::error::Result<()> {
    for (name, g) in [
        ("C5", Graph::cycle(5)),
        ("Petersen", Graph::petersen()),
        ("cube", Graph::cube()),
        ("K6", Graph::complete(6)),
    ] {
        let chi = chromatic_number_exact(&g)?;
        let chi_f = chi_f_exact(&g)?.value;
        println!(
            "{name:>8}: chi = {chi}, chi_f = {}",
            rational::to_string(&chi_f)
        );
    }
    Ok(())
}
