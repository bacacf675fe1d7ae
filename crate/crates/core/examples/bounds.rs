//! Replay the probability estimates at n = e^(e^40) in 50-digit arithmetic.

use regfree::bounds::{
    frac_chain, reg_chain, union_bounds, with_reverification, ChainReport, Density,
};
use regfree::hiprec::{Hp, SizeExpr};

fn print(r: &ChainReport) {
    println!(
        "{} (all hold: {}, stable: {:?})",
        r.chain, r.all_hold, r.stable_at_double_precision
    );
    for s in &r.steps {
        println!("  [{}] {}", if s.holds { "ok" } else { "FAIL" }, s.label);
    }
}

fn main() -> regfree::error::Result<()> {
    let text = "e^e^40";
    let n = SizeExpr::parse(text)?;
    let mut hp = Hp::new(50);
    let r = reg_chain(&n, text, 2, 10, &mut hp)?;
    print(&with_reverification(r, |hp| {
        reg_chain(&n, text, 2, 10, hp)
    })?);
    print(&frac_chain(&n, text, 2, &Density::Minimal, &mut hp)?);
    print(&union_bounds(&n, text, &mut hp)?);
    Ok(())
}
