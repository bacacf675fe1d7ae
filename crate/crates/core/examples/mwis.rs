//! Maximum-weight independent sets with exact rational weights.

use regfree::fractional::mwis;
use regfree::graph::Graph;
use regfree::rational;
use regfree::weighting::Weighting;

fn main() -> regfree::error::Result<()> {
    let g = Graph::petersen();
    let (s, w) = mwis(&g, &Weighting::uniform(10));
    println!(
        "Petersen, unit weights: {:?} weight {}",
        s.as_slice(),
        rational::to_string(&w)
    );
    let weights = Weighting::new((1..=10).map(|v| rational::ratio(v, 7)).collect())?;
    let (s, w) = mwis(&g, &weights);
    println!(
        "Petersen, weights v/7: {:?} weight {}",
        s.as_slice(),
        rational::to_string(&w)
    );
    Ok(())
}
