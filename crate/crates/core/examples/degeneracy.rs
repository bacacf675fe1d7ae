//! Degeneracy orderings and k-cores of a layered graph.

use regfree::construction::{build, explicit_params};

fn main() -> regfree::error::Result<()> {
    let lg = build(&explicit_params(&[256, 64, 16, 4], 3)?)?;
    let g = lg.graph();
    let (d, ord) = g.degeneracy();
    println!("degeneracy {d}, ordering valid: {}", ord.validate(g));
    println!("first vertices removed: {:?}", &ord.order[..10]);
    for k in 1..=4 {
        println!("{k}-core: {} vertices", g.k_core(k).len());
    }
    Ok(())
}
