//! Build a layered graph and print its shape.
//!
//! cargo run --example construct -- 256,64,16,4 7

use regfree::construction::{build, explicit_params};

fn main() -> regfree::error::Result<()> {
    let mut args = std::env::args().skip(1);
    let sizes: Vec<usize> = args
        .next()
        .unwrap_or_else(|| "256,64,16,4".into())
        .split(',')
        .map(|s| s.trim().parse().expect("layer size"))
        .collect();
    let seed = args.next().map_or(0, |s| s.parse().expect("seed"));
    let lg = build(&explicit_params(&sizes, seed)?)?;
    let g = lg.graph();
    println!(
        "layers {:?}, {} vertices, {} edges",
        lg.layer_sizes(),
        g.vertex_count(),
        g.edge_count()
    );
    println!("expected edges {}", lg.expected_edge_count());
    println!(
        "max degree {}, degeneracy {}",
        g.max_degree(),
        g.degeneracy().0
    );
    match lg.check_construction_invariants() {
        Ok(()) => println!("construction invariants hold"),
        Err(e) => println!("invariant violated: {e}"),
    }
    Ok(())
}
