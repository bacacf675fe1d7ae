//! Exact search for k-regular subgraphs on a few classic graphs and on the
//! bipartite variant of a layered graph.

use regfree::construction::{build, explicit_params};
use regfree::graph::Graph;
use regfree::regular::{find_k_regular, verify_witness, Detection, DEFAULT_BUDGET};

fn show(name: &str, g: &Graph, k: usize) {
    let r = find_k_regular(g, k, DEFAULT_BUDGET);
    let detail = match &r.outcome {
        Detection::Found(w) => format!(
            "{} vertices, witness valid: {}",
            w.vertices.len(),
            verify_witness(g, w)
        ),
        _ => String::new(),
    };
    println!(
        "{name:>22} k={k}: {:<15} nodes {:>6} {detail}",
        r.outcome.label(),
        r.nodes_expanded
    );
}

fn main() -> regfree::error::Result<()> {
    show("K5", &Graph::complete(5), 4);
    show("Petersen", &Graph::petersen(), 3);
    show("cube", &Graph::cube(), 3);
    show("C9", &Graph::cycle(9), 3);
    let lg = build(&explicit_params(&[256, 64, 16, 4], 0)?)?;
    show("layered [256,64,16,4]", lg.graph(), 4);
    show("bipartite variant", lg.bipartite_variant().graph(), 3);
    Ok(())
}
