//! Prefix-density certificates on two ladders: a small one where the
//! certificate is issued and the usual desk-scale one where it is not.

use regfree::construction::{build, explicit_params};
use regfree::density::{default_threshold, prefix_certificate_4reg};
use regfree::rational;

fn main() -> regfree::error::Result<()> {
    let threshold = default_threshold();
    for sizes in [vec![32, 8, 2], vec![256, 64, 16, 4]] {
        let lg = build(&explicit_params(&sizes, 0)?)?;
        let c = prefix_certificate_4reg(&lg, &threshold);
        println!("{sizes:?}: {:?}", c.verdict);
        for p in &c.checks {
            let d = p
                .max_density
                .as_ref()
                .map_or("-".into(), rational::to_string);
            println!(
                "  i={} prefix {:>3} active {:<5} side {:<5} density {d}",
                p.i,
                p.prefix_vertices,
                p.active,
                p.side_condition.map_or("-".into(), |b| b.to_string()),
            );
        }
    }
    Ok(())
}
