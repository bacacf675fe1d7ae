//! Exact densest subgraph via parametric minimum cut.

use regfree::density::max_density_subgraph;
use regfree::graph::Graph;
use regfree::rational;

fn main() -> regfree::error::Result<()> {
    // K5 with a pendant path hanging off vertex 4.
    let g = Graph::new(
        8,
        Graph::complete(5)
            .edges()
            .iter()
            .copied()
            .chain([(4, 5), (5, 6), (6, 7)]),
    )?;
    let r = max_density_subgraph(&g)?;
    println!(
        "densest set {:?}: {} edges, density {}",
        r.subgraph.as_slice(),
        r.num_edges,
        rational::to_string(&r.density)
    );
    let r = max_density_subgraph(&Graph::petersen())?;
    println!("Petersen: density {}", rational::to_string(&r.density));
    Ok(())
}
