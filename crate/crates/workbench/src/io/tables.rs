use std::fmt::Write as _;
use std::path::Path;

use qubo_core::bpgnn::EpochRecord;
use qubo_core::eval::{EvalRecord, LandscapeGrid, SweepResult};

use super::{write_text, Result};
use crate::bench::BenchRow;

fn write_rows(path: &Path, header: &str, rows: impl Iterator<Item = String>) -> Result<()> {
    let mut out = String::from(header);
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    write_text(path, &out)
}

pub fn write_history_csv(history: &[EpochRecord], path: &Path) -> Result<()> {
    write_rows(
        path,
        "epoch,train_bce,val_bce,val_acc,val_relqubo",
        history
            .iter()
            .map(|r| format!("{},{},{},{},{}", r.epoch, r.train_bce, r.val_bce, r.val_acc, r.val_relqubo)),
    )
}

pub fn write_landscape_csv(grid: &LandscapeGrid, path: &Path) -> Result<()> {
    let mut rows = Vec::with_capacity(grid.s.len() * grid.t.len());
    for (i, s) in grid.s.iter().enumerate() {
        for (j, t) in grid.t.iter().enumerate() {
            rows.push(format!("{s},{t},{}", grid.phi[i][j]));
        }
    }
    write_rows(path, "s,t,phi", rows.into_iter())
}

pub fn write_sweep_csv(sweep: &SweepResult, path: &Path) -> Result<()> {
    write_rows(
        path,
        "b,changed",
        sweep
            .b_values
            .iter()
            .enumerate()
            .map(|(i, b)| format!("{b},{}", u8::from(sweep.changed(i)))),
    )
}

pub fn write_eval_csv(records: &[EvalRecord], path: &Path) -> Result<()> {
    write_rows(
        path,
        "method,dataset,accuracy,rel_qubo,elapsed_ms",
        records.iter().map(|r| {
            let mut s = String::new();
            write!(s, "{},{},{},{},{}", r.method, r.dataset, r.accuracy, r.rel_qubo, r.elapsed_ms).unwrap();
            s
        }),
    )
}

pub fn write_bench_csv(rows: &[BenchRow], path: &Path) -> Result<()> {
    write_rows(
        path,
        "method,k,acc_mean,acc_std,relqubo_mean,relqubo_std,time_ms_mean",
        rows.iter().map(|r| {
            format!(
                "{},{},{},{},{},{},{}",
                r.method, r.k, r.acc_mean, r.acc_std, r.relqubo_mean, r.relqubo_std, r.time_ms_mean
            )
        }),
    )
}
