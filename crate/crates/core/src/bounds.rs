//! Step-by-step numerical replay of the probability estimates behind the
//! construction, at a configurable decimal precision.
//!
//! Every quantity is carried by its natural log, because for `n = e^(e^40)`
//! the quantities themselves leave every floating-point range. The
//! fractional chain is further divided by `|B_i|`: its bounds have the shape
//! `exp(|B_i| · f)` and only `f` is representable.
//!
//! A step holds when `left <= right` up to a relative tolerance of
//! `10^-digits`. Identity steps must agree to that tolerance instead.

use astro_float::BigFloat;
use serde::{Deserialize, Serialize};

use crate::construction::{ln_layer_size, paper_params, PaperParams};
use crate::error::{Error, Result};
use crate::hiprec::{Hp, LogValue, SizeExpr};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// One link `left <= right` of a displayed chain.
    Chain,
    /// A link that is an algebraic identity; must hold with equality.
    Identity,
    /// A hypothesis the chain relies on.
    Side,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub label: String,
    pub kind: StepKind,
    /// What `left` and `right` measure, e.g. `ln` or `ln / |B_i|`.
    pub scale: String,
    pub left: String,
    pub right: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub chain: String,
    pub n: String,
    pub parameters: Vec<(String, String)>,
    pub digits: usize,
    pub steps: Vec<Step>,
    pub first_failure: Option<usize>,
    pub all_hold: bool,
    /// Chain links only: first left value is at most the last right value.
    pub endpoints_ordered: bool,
    /// Set by [`with_reverification`].
    pub stable_at_double_precision: Option<bool>,
}

struct Builder<'a> {
    hp: &'a mut Hp,
    steps: Vec<Step>,
    ends: Option<(LogValue, LogValue)>,
}

impl<'a> Builder<'a> {
    fn new(hp: &'a mut Hp) -> Self {
        Builder {
            hp,
            steps: Vec::new(),
            ends: None,
        }
    }

    fn push(
        &mut self,
        label: impl Into<String>,
        kind: StepKind,
        scale: &str,
        left: LogValue,
        right: LogValue,
    ) {
        let digits = self.hp.digits();
        let holds = match kind {
            StepKind::Identity => equal(self.hp, &left, &right, digits),
            _ => at_most(self.hp, &left, &right, digits),
        };
        if kind != StepKind::Side {
            self.ends = Some(match self.ends.take() {
                None => (left.clone(), right.clone()),
                Some((first, _)) => (first, right.clone()),
            });
        }
        let (l, r) = (left.display(self.hp), right.display(self.hp));
        self.steps.push(Step {
            label: label.into(),
            kind,
            scale: scale.to_string(),
            left: l,
            right: r,
            holds,
        });
    }

    fn finish(self, chain: &str, n: &str, parameters: Vec<(String, String)>) -> ChainReport {
        let digits = self.hp.digits();
        let first_failure = self.steps.iter().position(|s| !s.holds);
        let endpoints_ordered = match &self.ends {
            Some((a, b)) => at_most(self.hp, a, b, digits),
            None => true,
        };
        ChainReport {
            chain: chain.to_string(),
            n: n.to_string(),
            parameters,
            digits,
            all_hold: first_failure.is_none(),
            first_failure,
            steps: self.steps,
            endpoints_ordered,
            stable_at_double_precision: None,
        }
    }
}

fn at_most(hp: &mut Hp, a: &LogValue, b: &LogValue, digits: usize) -> bool {
    match (a, b) {
        (LogValue::Zero, _) => true,
        (_, LogValue::Zero) => false,
        (LogValue::Ln(x), LogValue::Ln(y)) => {
            if x.cmp(y).is_some_and(|c| c <= 0) {
                return true;
            }
            hp.approx_eq(x, y, digits)
        }
    }
}

fn equal(hp: &mut Hp, a: &LogValue, b: &LogValue, digits: usize) -> bool {
    match (a, b) {
        (LogValue::Zero, LogValue::Zero) => true,
        (LogValue::Ln(x), LogValue::Ln(y)) => hp.approx_eq(x, y, digits),
        _ => false,
    }
}

fn v(x: BigFloat) -> LogValue {
    LogValue::Ln(x)
}

fn ratio(hp: &mut Hp, a: i64, b: i64) -> BigFloat {
    hp.rational(&rational::ratio(a, b))
}

fn regime(n: &SizeExpr, hp: &mut Hp) -> Result<PaperParams> {
    paper_params(n, hp).map_err(|e| Error::Domain(e.to_string()))
}

/// `ln |B_i|` from the real-valued size formula, for any `i >= 0`.
fn ln_b(hp: &mut Hp, pp: &PaperParams, i: usize) -> BigFloat {
    ln_layer_size(hp, &pp.ln_n, &pp.epsilon, i as i64)
}

/// `ln Σ e^{t}` over `terms`; `Zero` for an empty sum.
fn log_sum_exp(hp: &mut Hp, terms: &[BigFloat]) -> LogValue {
    let Some(max) = terms.iter().cloned().reduce(|a, b| {
        if b.cmp(&a).is_some_and(|c| c > 0) {
            b
        } else {
            a
        }
    }) else {
        return LogValue::Zero;
    };
    let mut sum = hp.int(0);
    for t in terms {
        let d = hp.sub(&max, t);
        let e = hp.recip_from_ln(&d);
        sum = hp.add(&sum, &e);
    }
    let l = hp.ln(&sum);
    v(hp.add(&max, &l))
}

/// `ln (N)_k / k!` for real `N` by the falling-factorial definition. `None`
/// when `N < k`, where the count of `k`-subsets is zero.
fn ln_binom_small(hp: &mut Hp, big_n: &BigFloat, k: u64) -> Option<BigFloat> {
    let kf = hp.int(k as i64);
    if big_n.cmp(&kf).is_some_and(|c| c < 0) {
        return None;
    }
    let one = hp.int(1);
    let a = hp.ln_gamma(&hp.add(big_n, &one));
    let rest = hp.add(&hp.sub(big_n, &kf), &one);
    let b = hp.ln_gamma(&rest);
    let c = hp.ln_gamma(&hp.add(&kf, &one));
    Some(hp.sub(&hp.sub(&a, &b), &c))
}

const MAX_DIRECT_FACTORS: u64 = 1_000_000;

/// `ln binom(n, x)` for `n` given by its log.
fn ln_binom_large(hp: &mut Hp, ln_n: &BigFloat, x: u64) -> Result<Option<BigFloat>> {
    let xf = hp.int(x as i64);
    let ln_fact = hp.ln_gamma(&hp.add(&xf, &hp.int(1)));
    if hp.is_astronomical_ln(ln_n) {
        // ln(n - k) = ln n up to a relative error of k/n.
        return Ok(Some(hp.sub(&hp.mul(&xf, ln_n), &ln_fact)));
    }
    let n = hp.exp(ln_n);
    if n.cmp(&xf).is_some_and(|c| c < 0) {
        return Ok(None);
    }
    if x > MAX_DIRECT_FACTORS {
        return Err(Error::Domain(format!(
            "x = {x} is too large for a moderate n"
        )));
    }
    let mut acc = hp.int(0);
    for k in 0..x {
        let term = hp.sub(&n, &hp.int(k as i64));
        let l = hp.ln(&term);
        acc = hp.add(&acc, &l);
    }
    Ok(Some(hp.sub(&acc, &ln_fact)))
}

/// Replays the bound on the probability that the first `i - 1` layers
/// contain `x` vertices spanning at least `1.1x` edges.
pub fn reg_chain(n: &SizeExpr, n_text: &str, i: usize, x: u64, hp: &mut Hp) -> Result<ChainReport> {
    let pp = regime(n, hp)?;
    let c = pp.num_layers;
    if i < 2 || i > c + 1 {
        return Err(Error::Domain(format!("i = {i} must lie in 2..={}", c + 1)));
    }
    if x == 0 {
        return Err(Error::Domain("x must be positive".into()));
    }
    let ln_n = pp.ln_n.clone();
    let lb_prev = ln_b(hp, &pp, i - 1);
    let lb_i = ln_b(hp, &pp, i);
    let xf = hp.int(x as i64);
    let ln_x = hp.ln(&xf);
    let m = (11 * x).div_ceil(10);
    let mf = hp.int(m as i64);
    let ln_m = hp.ln(&mf);
    let one = hp.int(1);
    let c11 = ratio(hp, 11, 10);
    let c01 = ratio(hp, 1, 10);
    let ten = hp.int(10);
    let ln10 = hp.ln(&ten);
    let ln100 = hp.ln(&hp.int(100));

    // binom(n, x) binom(x^2/2, m) |B_{i-1}|^-m
    let half_sq = hp.div(&hp.mul(&xf, &xf), &hp.int(2));
    let l1 = match (
        ln_binom_large(hp, &ln_n, x)?,
        ln_binom_small(hp, &half_sq, m),
    ) {
        (Some(a), Some(b)) => v(hp.sub(&hp.add(&a, &b), &hp.mul(&mf, &lb_prev))),
        _ => LogValue::Zero,
    };
    // (en/x)^x (e x^2/2 / (|B_{i-1}| m))^m
    let en_x = hp.mul(&xf, &hp.sub(&hp.add(&one, &ln_n), &ln_x));
    let ln_half_sq = hp.ln(&half_sq);
    let inner = hp.sub(&hp.sub(&hp.add(&one, &ln_half_sq), &lb_prev), &ln_m);
    let l2 = hp.add(&en_x, &hp.mul(&mf, &inner));
    // (en/x)^x (ex/|B_{i-1}|)^{1.1x}
    let inner = hp.sub(&hp.add(&one, &ln_x), &lb_prev);
    let l3 = hp.add(&en_x, &hp.mul(&hp.mul(&c11, &xf), &inner));
    // (10 n x^0.1 / |B_{i-1}|^1.1)^x
    let inner = hp.add(&hp.add(&ln10, &ln_n), &hp.mul(&c01, &ln_x));
    let l4 = hp.mul(&xf, &hp.sub(&inner, &hp.mul(&c11, &lb_prev)));
    // (100 n |B_i|^0.1 / |B_{i-1}|^1.1)^x
    let inner = hp.add(&hp.add(&ln100, &ln_n), &hp.mul(&c01, &lb_i));
    let l5 = hp.mul(&xf, &hp.sub(&inner, &hp.mul(&c11, &lb_prev)));
    // (100 n^{-(9/10) 20^{i-1} ε})^x
    let c09 = ratio(hp, 9, 10);
    let p20 = hp.powi(&hp.int(20), i - 1);
    let expo = hp.mul(&hp.mul(&hp.mul(&c09, &p20), &pp.epsilon), &ln_n);
    let l6 = hp.mul(&xf, &hp.sub(&ln100, &expo));
    // e^{-x sqrt(ln n) / 2}
    let root = hp.sqrt(&ln_n);
    let l7 = hp.div(&hp.mul(&xf, &root), &hp.int(2)).neg();

    let mut b = Builder::new(hp);
    let s = "ln";
    b.push("binom(n,x) binom(x^2/2,m) |B_{i-1}|^-m <= (en/x)^x (e x^2/2 / (|B_{i-1}| m))^m, m = ceil(1.1x)", StepKind::Chain, s, l1, v(l2.clone()));
    b.push(
        "... <= (en/x)^x (ex/|B_{i-1}|)^{1.1x}",
        StepKind::Chain,
        s,
        v(l2),
        v(l3.clone()),
    );
    b.push(
        "... <= (10 n x^0.1 / |B_{i-1}|^1.1)^x",
        StepKind::Chain,
        s,
        v(l3),
        v(l4.clone()),
    );
    b.push(
        "... <= (100 n |B_i|^0.1 / |B_{i-1}|^1.1)^x",
        StepKind::Chain,
        s,
        v(l4),
        v(l5.clone()),
    );
    b.push(
        "... = (100 n^{-(9/10) 20^{i-1} eps})^x",
        StepKind::Identity,
        s,
        v(l5),
        v(l6.clone()),
    );
    b.push(
        "... <= e^{-x sqrt(ln n)/2}",
        StepKind::Chain,
        s,
        v(l6),
        v(l7),
    );
    let params = vec![
        ("i".to_string(), i.to_string()),
        ("x".to_string(), x.to_string()),
        ("m".to_string(), m.to_string()),
        ("C".to_string(), c.to_string()),
    ];
    Ok(b.finish("reg", n_text, params))
}

/// The layer density `p_i = |I ∩ B_i| / |B_i|`.
#[derive(Clone, Debug, PartialEq)]
pub enum Density {
    Rational(Rational),
    /// The smallest admissible value `ln C / C`.
    Minimal,
}

impl Density {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "min" | "minimal" => Ok(Density::Minimal),
            t => Ok(Density::Rational(rational::parse(t)?)),
        }
    }
}

/// `ln binom(B, pB) / B` for `B` given by its log, through Stirling's
/// formula with exact remainders.
fn ln_binom_per_b(hp: &mut Hp, ln_big_b: &BigFloat, p: &BigFloat) -> BigFloat {
    let one = hp.int(1);
    if p.cmp(&one).is_some_and(|c| c == 0) {
        return hp.int(0);
    }
    let q = hp.sub(&one, p);
    let ln_p = hp.ln(p);
    let ln_q = hp.ln(&q);
    let entropy = hp.add(&hp.mul(p, &ln_p), &hp.mul(&q, &ln_q)).neg();
    let inv_b = hp.recip_from_ln(ln_big_b);
    if inv_b.is_zero() {
        return entropy;
    }
    let pi = hp.pi();
    let two_pi_pq = hp.mul(&hp.mul(&pi, &hp.int(2)), &hp.mul(p, &q));
    let ln_two_pi_pq = hp.ln(&two_pi_pq);
    let half = ratio(hp, 1, 2);
    let log_term = hp.mul(&half, &hp.add(&ln_two_pi_pq, ln_big_b));
    let r_b = hp.stirling_remainder(ln_big_b);
    let r_pb = hp.stirling_remainder(&hp.add(ln_big_b, &ln_p));
    let r_qb = hp.stirling_remainder(&hp.add(ln_big_b, &ln_q));
    let rem = hp.sub(&hp.sub(&r_b, &r_pb), &r_qb);
    let corr = hp.mul(&hp.sub(&rem, &log_term), &inv_b);
    hp.add(&entropy, &corr)
}

/// Replays the bound on the probability that an independent set meets
/// `B_i` in a `p_i` fraction and weighs at least `9 ln C`. The no-edge
/// estimate is taken at the boundary `Σ_{j>i} p_j = 9 ln C - p_i`.
pub fn frac_chain(
    n: &SizeExpr,
    n_text: &str,
    i: usize,
    p: &Density,
    hp: &mut Hp,
) -> Result<ChainReport> {
    let pp = regime(n, hp)?;
    let c = pp.num_layers;
    if c < 2 {
        return Err(Error::Domain(format!(
            "C = {c}; need C >= 2 so that ln C > 0"
        )));
    }
    if i < 1 || i > c {
        return Err(Error::Domain(format!("i = {i} must lie in 1..={c}")));
    }
    let cf = hp.int(c as i64);
    let ln_c = hp.ln(&cf);
    let p_min = hp.div(&ln_c, &cf);
    let pv = match p {
        Density::Minimal => p_min.clone(),
        Density::Rational(r) => {
            let x = hp.rational(r);
            let one = hp.int(1);
            if x.cmp(&p_min).is_some_and(|o| o < 0) || x.cmp(&one).is_some_and(|o| o > 0) {
                return Err(Error::Domain(format!(
                    "p_i = {} must lie in [ln C / C, 1]",
                    rational::to_string(r)
                )));
            }
            x
        }
    };
    let ln_n = pp.ln_n.clone();
    let root = hp.sqrt(&ln_n);
    let five_root = hp.mul(&hp.int(5), &root);
    let a = hp.recip_from_ln(&five_root);
    let lb_i = ln_b(hp, &pp, i);
    let later: Vec<BigFloat> = (i + 1..=c).map(|j| ln_b(hp, &pp, j)).collect();
    let ln_s = log_sum_exp(hp, &later);
    // S / |B_i|
    let s_per_b = match &ln_s {
        LogValue::Zero => hp.int(0),
        LogValue::Ln(l) => {
            let d = hp.sub(&lb_i, l);
            hp.recip_from_ln(&d)
        }
    };
    let one = hp.int(1);
    let two = hp.int(2);
    let ln2 = hp.ln(&two);
    let ln_p = hp.ln(&pv);
    let eight_ln_c = hp.mul(&hp.int(8), &ln_c);
    let sigma = hp.sub(&hp.mul(&hp.int(9), &ln_c), &pv);

    let binom = ln_binom_per_b(hp, &lb_i, &pv);
    let count_exact = hp.add(&binom, &hp.mul(&s_per_b, &ln2));
    let no_edge_boundary = hp.mul(&pv, &sigma).neg();
    let no_edge = hp.mul(&pv, &eight_ln_c).neg();
    let v0 = hp.add(&no_edge_boundary, &count_exact);
    let v1 = hp.add(&no_edge, &count_exact);
    let e_over_p = hp.mul(&pv, &hp.sub(&one, &ln_p));
    let a_ln2 = hp.mul(&a, &ln2);
    let v2 = hp.add(&hp.add(&no_edge, &e_over_p), &a_ln2);
    let ln_inv_p = hp.ln(&hp.div(&one, &pv));
    let one_plus = hp.add(&one, &ln_inv_p);
    let counting = hp.mul(&one_plus, &pv);
    let v3 = hp.add(&hp.add(&no_edge, &counting), &a_ln2);
    let v4 = hp.add(&hp.add(&no_edge, &counting), &a);
    let two_p_ln_c = hp.mul(&hp.mul(&two, &pv), &ln_c);
    let v5 = hp.add(&hp.add(&no_edge, &two_p_ln_c), &a);
    let rate = hp.sub(&hp.div(&hp.mul(&hp.int(6), &hp.mul(&ln_c, &ln_c)), &cf), &a);
    let v6 = rate.neg();

    let mut b = Builder::new(hp);
    let s = "ln / |B_i|";
    b.push(
        "e^{-p_i|B_i| sum_{j>i} p_j} binom(|B_i|, p_i|B_i|) 2^{sum_{j>i}|B_j|} <= same with e^{-8 p_i|B_i| ln C}",
        StepKind::Chain, s, v(v0), v(v1.clone()),
    );
    b.push(
        "... <= e^{-8 p_i|B_i| ln C} (e/p_i)^{p_i|B_i|} 2^{|B_i| e^{-5 sqrt(ln n)}}",
        StepKind::Chain,
        s,
        v(v1),
        v(v2.clone()),
    );
    b.push(
        "... = e^{-8 p_i|B_i| ln C} e^{(1+ln(1/p_i)) p_i|B_i|} 2^{|B_i| e^{-5 sqrt(ln n)}}",
        StepKind::Identity,
        s,
        v(v2),
        v(v3.clone()),
    );
    b.push(
        "... <= exp(|B_i|(-8 p_i ln C + p_i(1+ln(1/p_i)) + e^{-5 sqrt(ln n)}))",
        StepKind::Chain,
        s,
        v(v3),
        v(v4.clone()),
    );
    b.push(
        "... <= exp(|B_i|(-8 p_i ln C + 2 p_i ln C + e^{-5 sqrt(ln n)}))",
        StepKind::Chain,
        s,
        v(v4),
        v(v5.clone()),
    );
    b.push(
        "... <= exp(-|B_i|(6 (ln C)^2/C - e^{-5 sqrt(ln n)}))",
        StepKind::Chain,
        s,
        v(v5),
        v(v6.clone()),
    );
    b.push(
        "... < 1, i.e. the exponent is negative",
        StepKind::Chain,
        s,
        v(v6),
        v(b.hp.int(0)),
    );
    let side_left = ln_s.clone();
    let side_right = v(b.hp.sub(&lb_i, &five_root));
    b.push(
        "side: sum_{j>i} |B_j| <= |B_i| e^{-5 sqrt(ln n)}",
        StepKind::Side,
        "ln",
        side_left,
        side_right,
    );
    let two_ln_c = b.hp.mul(&two, &ln_c);
    b.push(
        "side: 1 + ln(1/p_i) <= 2 ln C",
        StepKind::Side,
        "value",
        v(one_plus),
        v(two_ln_c),
    );
    let rate_text = b.hp.format(&rate);
    let p_text = b.hp.format(&pv);
    let params = vec![
        ("i".to_string(), i.to_string()),
        ("p_i".to_string(), p_text),
        ("C".to_string(), c.to_string()),
        ("exponent_rate".to_string(), rate_text),
    ];
    Ok(b.finish("frac", n_text, params))
}

/// Closes both lemmas: the geometric sum over `x` for the regular-subgraph
/// events and, per layer, `|B_i| e^{-rate |B_i|} <= e^{-sqrt n}` for the
/// independent-set events, with `rate = 6 (ln C)^2/C - e^{-5 sqrt(ln n)}`.
pub fn union_bounds(n: &SizeExpr, n_text: &str, hp: &mut Hp) -> Result<ChainReport> {
    let pp = regime(n, hp)?;
    let c = pp.num_layers;
    if c < 2 {
        return Err(Error::Domain(format!(
            "C = {c}; need C >= 2 so that ln C > 0"
        )));
    }
    let ln_n = pp.ln_n.clone();
    let root = hp.sqrt(&ln_n);
    let two = hp.int(2);
    let ln_r = hp.div(&root, &two).neg();
    let r = hp.recip_from_ln(&ln_r.neg());
    let one = hp.int(1);
    // partial sums 1 + r + r^2 + ... until terms fall below the precision
    let eps = hp.pow10_neg(hp.digits() + 10);
    let mut sum = one.clone();
    let mut term = one.clone();
    let mut terms = 1usize;
    loop {
        term = hp.mul(&term, &r);
        if term.cmp(&eps).map_or(true, |o| o < 0) {
            break;
        }
        sum = hp.add(&sum, &term);
        terms += 1;
    }
    let ln_sum = hp.ln(&sum);
    let partial = hp.add(&ln_r, &ln_sum);
    let one_minus_r = hp.sub(&one, &r);
    let ln_omr = hp.ln(&one_minus_r);
    let closed = hp.sub(&ln_r, &ln_omr);
    let ln2 = hp.ln(&two);
    let two_r = hp.add(&ln2, &ln_r);

    let cf = hp.int(c as i64);
    let ln_c = hp.ln(&cf);
    let five_root = hp.mul(&hp.int(5), &root);
    let a = hp.recip_from_ln(&five_root);
    let rate = hp.sub(&hp.div(&hp.mul(&hp.int(6), &hp.mul(&ln_c, &ln_c)), &cf), &a);
    let half_ln_n = hp.div(&ln_n, &two);
    let mut per_layer = Vec::new();
    for i in 1..=c {
        let lb = ln_b(hp, &pp, i);
        // ln(rate |B_i| - ln |B_i|), the log of the exponent's magnitude
        let right = if rate.is_positive() {
            let ln_rate = hp.ln(&rate);
            let main = hp.add(&ln_rate, &lb);
            let inv = hp.recip_from_ln(&main);
            let shrink = hp.mul(&lb, &inv);
            let factor = hp.sub(&one, &shrink);
            if factor.is_positive() {
                let lf = hp.ln(&factor);
                v(hp.add(&main, &lf))
            } else {
                LogValue::Zero
            }
        } else {
            LogValue::Zero
        };
        per_layer.push((i, right));
    }

    let mut b = Builder::new(hp);
    b.push(
        "sum_{x>=1} r^x = r/(1-r), r = e^{-sqrt(ln n)/2}",
        StepKind::Identity,
        "ln",
        v(partial),
        v(closed.clone()),
    );
    b.push("r/(1-r) <= 2r", StepKind::Chain, "ln", v(closed), v(two_r));
    for (i, right) in per_layer {
        b.push(
            format!("layer {i}: |B_i| e^{{-rate |B_i|}} <= e^{{-sqrt n}}, as sqrt n <= rate |B_i| - ln |B_i|"),
            StepKind::Side,
            "ln",
            v(half_ln_n.clone()),
            right,
        );
    }
    let rate_text = b.hp.format(&rate);
    let params = vec![
        ("C".to_string(), c.to_string()),
        ("geometric_terms".to_string(), terms.to_string()),
        ("exponent_rate".to_string(), rate_text),
    ];
    Ok(b.finish("union", n_text, params))
}

/// Recomputes a report at twice its precision and records whether every
/// step that held still holds.
pub fn with_reverification(
    mut report: ChainReport,
    compute: impl Fn(&mut Hp) -> Result<ChainReport>,
) -> Result<ChainReport> {
    let mut hp = Hp::new(2 * report.digits);
    let again = compute(&mut hp)?;
    let stable = report.steps.len() == again.steps.len()
        && report
            .steps
            .iter()
            .zip(&again.steps)
            .all(|(a, b)| !a.holds || b.holds);
    report.stable_at_double_precision = Some(stable);
    Ok(report)
}

/// One point of a parameter scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub n: String,
    pub all_hold: bool,
    pub first_failure: Option<usize>,
}

/// Evaluates `compute` at every `n` in `grid`. This locates where a chain
/// starts to hold on the grid; it proves nothing between grid points.
pub fn scan_grid(
    grid: &[String],
    hp: &mut Hp,
    mut compute: impl FnMut(&SizeExpr, &str, &mut Hp) -> Result<ChainReport>,
) -> Result<Vec<GridPoint>> {
    grid.iter()
        .map(|text| {
            let n = SizeExpr::parse(text)?;
            let r = compute(&n, text, hp)?;
            Ok(GridPoint {
                n: text.clone(),
                all_hold: r.all_hold,
                first_failure: r.first_failure,
            })
        })
        .collect()
}
