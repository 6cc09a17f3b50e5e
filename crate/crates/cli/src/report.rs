//! CSV reports and gnuplot data files.
//!
//! A CSV report has a header row, one row per shell or time, then footer rows
//! whose first column names their kind: `order`, `failure`, `diagnostic`,
//! `check` and finally `result`. Wall time is printed, never written, so two
//! runs of the same configuration give identical files.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use illposed_core::experiments::{fit_order, Check, GapReport, GapRow, LemmaReport, Relation};
use illposed_core::transport1d::CascadeTable;

fn num(v: f64) -> String {
    format!("{v:e}")
}

fn relation(r: Relation) -> &'static str {
    match r {
        Relation::AtMost => "<=",
        Relation::AtLeast => ">=",
    }
}

fn writer(path: &Path) -> io::Result<csv::Writer<File>> {
    Ok(csv::WriterBuilder::new().flexible(true).from_writer(File::create(path)?))
}

fn check_rows(w: &mut csv::Writer<File>, checks: &[Check]) -> csv::Result<()> {
    for c in checks {
        let verdict = if c.passed() { "pass" } else { "fail" };
        w.write_record(["check", &c.name, &num(c.value), relation(c.relation), &num(c.bound), verdict])?;
    }
    let all = checks.iter().all(Check::passed);
    w.write_record(["result", if all { "pass" } else { "fail" }])
}

pub const GAP_COLUMNS: [&str; 9] =
    ["n", "t_n", "init_dist", "block_gap", "besov_gap", "floor_estimate", "ap4_gap", "cascade_budget", "origin_gap"];

/// Gap table with fitted decay orders in `n` of the initial distance and the budget.
pub fn write_gap_csv(report: &GapReport, path: &Path) -> csv::Result<()> {
    let mut w = writer(path)?;
    w.write_record(GAP_COLUMNS)?;
    for r in &report.rows {
        w.write_record([
            r.n.to_string(),
            num(r.t_n),
            num(r.init_dist),
            num(r.block_gap),
            num(r.besov_gap),
            num(r.floor_estimate),
            num(r.ap4_gap),
            num(r.cascade_budget),
            num(r.origin_gap),
        ])?;
    }
    let ns: Vec<f64> = report.rows.iter().map(|r| r.n as f64).collect();
    let order = |column: fn(&GapRow) -> f64| {
        let values: Vec<f64> = report.rows.iter().map(column).collect();
        fit_order(&ns, &values).map(num).unwrap_or_default()
    };
    w.write_record(["order", "init_dist", &order(|r| r.init_dist)])?;
    w.write_record(["order", "cascade_budget", &order(|r| r.cascade_budget)])?;
    for f in &report.failures {
        w.write_record(["failure", &f.n.to_string(), &f.error.to_string()])?;
    }
    for d in &report.diagnostics {
        let n = d.n.map(|n| n.to_string()).unwrap_or_default();
        w.write_record(["diagnostic", &d.name, &n, &num(d.value)])?;
    }
    check_rows(&mut w, &report.checks())?;
    w.flush()?;
    Ok(())
}

/// Whitespace-separated gap-versus-n data.
pub fn write_gap_dat(report: &GapReport, path: &Path) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "# {} on {}", report.scenario, report.grid)?;
    writeln!(w, "# n block_gap besov_gap ap4_gap floor_estimate cascade_budget init_dist")?;
    for r in &report.rows {
        writeln!(
            w,
            "{} {:e} {:e} {:e} {:e} {:e} {:e}",
            r.n, r.block_gap, r.besov_gap, r.ap4_gap, r.floor_estimate, r.cascade_budget, r.init_dist
        )?;
    }
    w.flush()
}

pub const CASCADE_COLUMNS: [&str; 6] = ["n", "t", "err_ap1", "err_ap2", "err_ap3", "err_ap4"];

pub fn write_cascade_csv(tables: &[CascadeTable], checks: &[Check], path: &Path) -> csv::Result<()> {
    let mut w = writer(path)?;
    w.write_record(CASCADE_COLUMNS)?;
    for t in tables {
        for r in &t.rows {
            let mut rec = vec![t.n.to_string(), num(r.t)];
            rec.extend(r.errors().map(num));
            w.write_record(&rec)?;
        }
    }
    for t in tables {
        let mut rec = vec!["order".to_string(), t.n.to_string()];
        rec.extend(t.orders.map(|o| o.map(num).unwrap_or_default()));
        w.write_record(&rec)?;
    }
    check_rows(&mut w, checks)?;
    w.flush()?;
    Ok(())
}

/// Error-versus-t data, one gnuplot index block per shell.
pub fn write_cascade_dat(tables: &[CascadeTable], path: &Path) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for (i, t) in tables.iter().enumerate() {
        if i > 0 {
            writeln!(w, "\n")?;
        }
        writeln!(w, "# n = {}", t.n)?;
        writeln!(w, "# t err_ap1 err_ap2 err_ap3 err_ap4")?;
        for r in &t.rows {
            let [a, b, c, d] = r.errors();
            writeln!(w, "{:e} {a:e} {b:e} {c:e} {d:e}", r.t)?;
        }
    }
    w.flush()
}

pub fn write_lemma_csv(report: &LemmaReport, path: &Path) -> csv::Result<()> {
    let mut w = writer(path)?;
    w.write_record(["name", "value", "relation", "bound", "margin", "pass"])?;
    for c in &report.checks {
        let verdict = if c.passed() { "pass" } else { "fail" };
        w.write_record([&c.name, &num(c.value), relation(c.relation), &num(c.bound), &num(c.margin()), verdict])?;
    }
    w.write_record(["result", if report.passed() { "pass" } else { "fail" }])?;
    w.flush()?;
    Ok(())
}
