//! Text views of the JSON results.

use std::fmt::Write;

use symgen::construct::{Certificate, FailureReport, VerifyReport};
use symgen::families::CoverReport;
use symgen::lll::{LllReport, Sweep};
use symgen::oracles::clique::OmegaResult;
use symgen::oracles::generation::{Estimate, ExactGenerationStats, MonteCarloStats};
use symgen::oracles::setcover::SigmaResult;

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn cover(r: &CoverReport) -> String {
    let mut s = format!(
        "n={}  i={}  mode={:?}  covered={}\n",
        r.n,
        r.i,
        r.mode,
        yes(r.covered)
    );
    for ct in &r.uncovered_cycle_types {
        let _ = writeln!(s, "  uncovered {ct}");
    }
    s
}

fn log2_cell(x: Option<f64>) -> String {
    x.map_or_else(|| "zero".to_string(), |v| format!("{v:.3}"))
}

pub fn lll_report(r: &LllReport) -> String {
    let mut s = format!(
        "n={}  i={}  d={}  worst sizes {:?}\n",
        r.n, r.i, r.d, r.worst_sizes
    );
    for (j, v) in &r.bounds {
        let _ = writeln!(
            s,
            "  E{j}  log2 {:>12}  {:?}",
            log2_cell(*v),
            r.provenance[j]
        );
    }
    let _ = writeln!(s, "  total log2      {:.3}", r.total_log2);
    let _ = writeln!(
        s,
        "  2^-(n+3) target {:.3}  met {}",
        r.two_pow_target_log2,
        yes(r.thresholds.two_pow)
    );
    let _ = writeln!(
        s,
        "  1/(e(d+1))      {:.3}  met {}",
        r.lll_target_log2,
        yes(r.thresholds.lll)
    );
    if let Some(e) = &r.exact {
        let _ = writeln!(
            s,
            "  exact total log2 {:.3}  lll met {}",
            e.total_log2,
            yes(e.thresholds.lll)
        );
    }
    if !r.assumptions.is_empty() {
        let _ = writeln!(s, "  assumes: {}", r.assumptions.join("; "));
    }
    s
}

pub fn sweep(w: &Sweep) -> String {
    let mut s = format!(
        "{:>6} {:>12} {:>12} {:>12} {:>5} {:>5}\n",
        "n", "total", "2^-(n+3)", "1/(e(d+1))", "2pow", "lll"
    );
    for r in &w.rows {
        let _ = writeln!(
            s,
            "{:>6} {:>12.3} {:>12.3} {:>12.3} {:>5} {:>5}",
            r.n,
            r.total_log2,
            r.two_pow_target_log2,
            r.lll_target_log2,
            yes(r.thresholds.two_pow),
            yes(r.thresholds.lll)
        );
    }
    let show = |t: Option<usize>| t.map_or_else(|| "none".to_string(), |n| n.to_string());
    let _ = writeln!(
        s,
        "lll threshold {} (monotone {})  2^-(n+3) threshold {} (monotone {})",
        show(w.lll_threshold),
        yes(w.lll_monotone),
        show(w.two_pow_threshold),
        yes(w.two_pow_monotone)
    );
    s
}

pub fn certificate(c: &Certificate) -> String {
    match c {
        Certificate::Construction(c) => {
            let mut s = format!(
                "CONSTRUCTION n={} i={} seed={} strategy={} rounds={} |S|={}\n",
                c.n,
                c.i,
                c.seed,
                c.strategy,
                c.rounds,
                c.assignment.len()
            );
            for e in &c.assignment {
                let delta: Vec<String> = e.delta.iter().map(u32::to_string).collect();
                let _ = writeln!(s, "  {{{}}}  {}", delta.join(","), e.g);
            }
            let _ = writeln!(s, "checksum {}", c.checksum);
            s
        }
        Certificate::LllThreshold(c) => {
            format!(
                "LLL_THRESHOLD\n{}checksum {}\n",
                lll_report(&c.report),
                c.checksum
            )
        }
    }
}

pub fn failure(r: &FailureReport) -> String {
    let mut s = format!(
        "FAILURE n={} i={} seed={} strategy={} rounds={}/{} residual bad pairs {}\n",
        r.n, r.i, r.seed, r.strategy, r.rounds, r.max_rounds, r.residual_bad_pairs
    );
    if let Some([a, b]) = &r.first_bad_pair {
        let _ = writeln!(s, "  first bad pair {a:?} {b:?}");
    }
    s
}

pub fn verify(r: &VerifyReport) -> String {
    let mut s = format!("{} n={} valid={}\n", r.kind, r.n, yes(r.valid));
    for v in &r.violations {
        let _ = writeln!(s, "  {v}");
    }
    s
}

pub fn sigma(r: &SigmaResult) -> String {
    let mut s = format!(
        "sigma(S_{}) = {}  ({} maximal subgroups)\n",
        r.n, r.sigma, r.maximal_subgroups
    );
    for m in &r.cover {
        let _ = writeln!(s, "  order {:>4}  <{}>", m.order, m.generators.join(", "));
    }
    s
}

pub fn omega(r: &OmegaResult) -> String {
    format!(
        "omega(S_{}, {:?}) = {}\n  {}\n",
        r.n,
        r.mode,
        r.omega,
        r.clique.join(" ")
    )
}

pub fn generation_exact(r: &ExactGenerationStats) -> String {
    let mut s = format!("n={}\n", r.n);
    for (name, c) in [("p", &r.p), ("a", &r.a), ("b", &r.b), ("c", &r.c)] {
        let _ = writeln!(
            s,
            "  {name} = {}/{}  ({})",
            c.generating,
            c.pairs,
            c.ratio()
        );
    }
    let _ = writeln!(
        s,
        "  p = (a+b+2c)/4: {}   b = c: {}",
        yes(r.mixture_identity_holds()),
        yes(r.coset_identity_holds())
    );
    s
}

fn estimate_row(name: &str, e: &Estimate) -> String {
    format!(
        "  {name}  {:.6}  [{:.6}, {:.6}]\n",
        e.estimate, e.ci_low, e.ci_high
    )
}

pub fn probgen(r: &MonteCarloStats) -> String {
    let mut s = format!(
        "n={} trials={} seed={}  (99% Wilson intervals)\n",
        r.n, r.trials, r.seed
    );
    for (name, e) in [("p", &r.p), ("a", &r.a), ("b", &r.b), ("c", &r.c)] {
        s.push_str(&estimate_row(name, e));
    }
    let _ = writeln!(s, "  1 - 1/n = {:.6}", r.asymptotic);
    s
}
