//! Random triangle-free subsampling along a degeneracy ordering.

use regfree::construction::{build, explicit_params};
use regfree::rational;
use regfree::subsample::{claim_probability_bounds, run_trials, SubsampleParams};

fn main() -> regfree::error::Result<()> {
    let lg = build(&explicit_params(&[256, 64, 16, 4], 0)?)?;
    let g = lg.graph();
    let (d, ord) = g.degeneracy();
    let params = SubsampleParams::new(rational::ratio(1, 4), d, 0)?;
    let w = lg.paper_weighting();
    let s = run_trials(g, &ord, &params, &w, 500)?;
    println!("500 trials, p = 1/4, threshold {d}");
    println!(
        "mean |X| {:.2}, mean retained weight {:.4}",
        s.mean_x_size,
        rational::to_f64(&s.mean_retained_weight)
    );
    for v in [0, 300, 339] {
        let (markov, indep) = claim_probability_bounds(g, &ord, &params, v);
        println!(
            "vertex {v}: Pr[v in X] ~ {:.3}, bounds markov {} indep {}",
            s.membership_counts[v] as f64 / 500.0,
            rational::to_string(&markov),
            rational::to_string(&indep)
        );
    }
    Ok(())
}
