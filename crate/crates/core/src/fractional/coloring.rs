//! Exact chromatic number for small graphs.

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_VERTEX_LIMIT: usize = 64;

pub fn chromatic_number_exact(g: &Graph) -> Result<usize> {
    chromatic_number_exact_with_limit(g, DEFAULT_VERTEX_LIMIT)
}

/// Tries `k` colors for `k` from a greedy clique size up to a DSATUR
/// coloring's size, with a DSATUR-ordered backtracking search.
pub fn chromatic_number_exact_with_limit(g: &Graph, limit: usize) -> Result<usize> {
    let n = g.vertex_count();
    if n > limit {
        return Err(Error::SizeLimit { vertices: n, limit });
    }
    if n == 0 {
        return Ok(0);
    }
    let lower = greedy_clique(g);
    let upper = dsatur_greedy(g);
    for k in lower..upper {
        let mut colors = vec![usize::MAX; n];
        if color_with(g, k, &mut colors, 0) {
            return Ok(k);
        }
    }
    Ok(upper)
}

fn greedy_clique(g: &Graph) -> usize {
    (0..g.vertex_count())
        .map(|start| {
            let mut clique = vec![start];
            let mut cands: Vec<usize> = g.neighbors(start).to_vec();
            cands.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
            for v in cands {
                if clique.iter().all(|&u| g.has_edge(u, v)) {
                    clique.push(v);
                }
            }
            clique.len()
        })
        .max()
        .unwrap_or(0)
}

/// Uncolored vertex with the most distinct neighbor colors, then the
/// highest degree, then the lowest index.
fn pick(g: &Graph, colors: &[usize]) -> Option<usize> {
    (0..g.vertex_count())
        .filter(|&v| colors[v] == usize::MAX)
        .max_by_key(|&v| {
            let mut seen: Vec<usize> = g
                .neighbors(v)
                .iter()
                .map(|&u| colors[u])
                .filter(|&c| c != usize::MAX)
                .collect();
            seen.sort_unstable();
            seen.dedup();
            (seen.len(), g.degree(v), std::cmp::Reverse(v))
        })
}

fn dsatur_greedy(g: &Graph) -> usize {
    let mut colors = vec![usize::MAX; g.vertex_count()];
    while let Some(v) = pick(g, &colors) {
        colors[v] = (0..)
            .find(|&c| g.neighbors(v).iter().all(|&u| colors[u] != c))
            .unwrap();
    }
    colors.iter().max().map_or(0, |&c| c + 1)
}

fn color_with(g: &Graph, k: usize, colors: &mut [usize], used: usize) -> bool {
    let Some(v) = pick(g, colors) else {
        return true;
    };
    // A fresh color is interchangeable with any other fresh one.
    for c in 0..k.min(used + 1) {
        if g.neighbors(v).iter().all(|&u| colors[u] != c) {
            colors[v] = c;
            if color_with(g, k, colors, used.max(c + 1)) {
                return true;
            }
        }
    }
    colors[v] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(chromatic_number_exact(&Graph::cycle(5)).unwrap(), 3);
        assert_eq!(chromatic_number_exact(&Graph::cycle(6)).unwrap(), 2);
        assert_eq!(chromatic_number_exact(&Graph::petersen()).unwrap(), 3);
        assert_eq!(chromatic_number_exact(&Graph::complete(7)).unwrap(), 7);
        assert_eq!(chromatic_number_exact(&Graph::empty(4)).unwrap(), 1);
        assert_eq!(chromatic_number_exact(&Graph::empty(0)).unwrap(), 0);
    }

    #[test]
    fn size_limit() {
        assert!(matches!(
            chromatic_number_exact(&Graph::empty(65)),
            Err(Error::SizeLimit {
                vertices: 65,
                limit: 64
            })
        ));
        assert_eq!(
            chromatic_number_exact_with_limit(&Graph::empty(65), 100).unwrap(),
            1
        );
    }
}
