//! Fractional chromatic numbers by column generation, with the optimal
//! fractional coloring and the dual weights that certify it.

use regfree::construction::{build, explicit_params};
use regfree::fractional::{chi_f_exact, chi_f_lower_bound};
use regfree::graph::Graph;
use regfree::rational;

fn main() -> regfree::error::Result<()> {
    for (name, g) in [
        ("C5", Graph::cycle(5)),
        ("C7", Graph::cycle(7)),
        ("Petersen", Graph::petersen()),
    ] {
        let r = chi_f_exact(&g)?;
        println!("{name}: chi_f = {}", rational::to_string(&r.value));
        for c in &r.primal.columns {
            println!(
                "  {:?} x {}",
                c.set.as_slice(),
                rational::to_string(&c.coefficient)
            );
        }
        println!("  dual weights {:?}", r.dual.weights.to_strings());
    }
    let lg = build(&explicit_params(&[32, 8, 2], 0)?)?;
    let exact = chi_f_exact(lg.graph())?;
    let lb = chi_f_lower_bound(lg.graph(), &lg.paper_weighting())?;
    println!(
        "layered [32,8,2]: chi_f = {}, layer-weighted lower bound {}, {} pricing rounds",
        rational::to_string(&exact.value),
        rational::to_string(&lb),
        exact.trace.len()
    );
    Ok(())
}
