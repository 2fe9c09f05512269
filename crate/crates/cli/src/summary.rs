//! Plain-text tables for the terminal.

use std::fmt::Write;

use iqa_core::dataset::{EvalReport, FTestComparison};

pub fn eval_table(report: &EvalReport) -> String {
    let mut s = String::new();
    for m in &report.methods {
        let _ = writeln!(s, "{}", m.method);
        let _ = writeln!(
            s,
            "  {:<12} {:>6} {:>8} {:>8} {:>8} {:>10} {:>10}",
            "database", "n", "SROCC", "KROCC", "PLCC", "MAE", "RMSE"
        );
        for (db, r) in &m.per_database {
            let r = &r.metrics;
            let _ = writeln!(
                s,
                "  {db:<12} {:>6} {:>8.4} {:>8.4} {:>8.4} {:>10.4} {:>10.4}",
                r.n, r.srocc, r.krocc, r.plcc, r.mae, r.rmse
            );
        }
        for (db, reason) in &m.unevaluated {
            let _ = writeln!(s, "  {db:<12} not evaluated: {reason}");
        }
        if let Some(avg) = &m.averages {
            for (label, row) in [("direct", &avg.direct), ("weighted", &avg.weighted)] {
                let _ = writeln!(
                    s,
                    "  {label:<12} {:>6} {:>8.4} {:>8.4} {:>8.4}",
                    row.n, row.srocc, row.krocc, row.plcc
                );
            }
        }
    }
    if !report.skipped.is_empty() {
        let _ = writeln!(s, "{} manifest rows skipped", report.skipped.len());
    }
    s
}

pub fn ftest_table(cmp: &FTestComparison) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} vs {} at {}% confidence",
        cmp.method_a,
        cmp.method_b,
        cmp.confidence * 100.0
    );
    for (db, v) in &cmp.verdicts {
        let _ = writeln!(s, "  {db:<12} {v:>2}");
    }
    let _ = writeln!(s, "improvement: {:.2}%", cmp.improvement_pct);
    s
}
