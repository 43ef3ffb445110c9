//! Test-only oracles, independent of the crate's numerical paths.
#![allow(dead_code)]

use tranche_core::{Loan, Portfolio};

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton on the Legendre
/// recurrence.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite 20-point Gauss-Legendre over [lo, hi] with `panels` panels,
/// splitting additionally at every point in `breaks` inside the interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, breaks: &[f64], panels: usize) -> f64 {
    let gl = gauss_legendre(20);
    let mut cuts = vec![lo];
    cuts.extend(breaks.iter().copied().filter(|&b| b > lo && b < hi));
    cuts.push(hi);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut total = 0.0;
    for seg in cuts.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let h = (b - a) / panels as f64;
        for p in 0..panels {
            let (pa, pb) = (a + p as f64 * h, a + (p + 1) as f64 * h);
            let (mid, half) = (0.5 * (pa + pb), 0.5 * (pb - pa));
            total += gl.iter().map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half;
        }
    }
    total
}

pub fn std_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Exact conditional law by looping over all bit patterns; returns
/// (loss, probability) pairs.
pub fn brute_force_law(portfolio: &Portfolio, factors: &[f64]) -> Vec<(f64, f64)> {
    let n = portfolio.len();
    let q: Vec<f64> = portfolio
        .loans()
        .iter()
        .map(|l| l.conditional_default_prob(factors))
        .collect();
    (0u32..(1 << n))
        .map(|mask| {
            let mut loss = 0.0;
            let mut prob = 1.0;
            for (i, l) in portfolio.loans().iter().enumerate() {
                if mask & (1 << i) != 0 {
                    loss += l.lgd();
                    prob *= q[i];
                } else {
                    prob *= 1.0 - q[i];
                }
            }
            (loss, prob)
        })
        .collect()
}

/// The standard test family evaluated at `n` names.
pub fn synth_like(n: usize) -> Portfolio {
    let loans = (0..n)
        .map(|k| {
            let s = k as f64 / (n - 1) as f64;
            Loan::new(1.0 / n as f64, 0.015 + 0.05 * s, 0.5 - 0.1 * s, vec![0.5 - 0.1 * s])
        })
        .collect();
    Portfolio::new(loans, 1)
}

/// Same family with loadings zeroed (independent defaults).
pub fn independent(n: usize) -> Portfolio {
    let loans = synth_like(n)
        .loans()
        .iter()
        .map(|l| Loan::new(l.notional_fraction(), l.default_prob(), l.recovery(), vec![0.0]))
        .collect();
    Portfolio::new(loans, 1)
}
