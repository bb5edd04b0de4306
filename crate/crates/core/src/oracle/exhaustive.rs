use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;

use super::enumerate::{instance_rows, to_instance};
use super::verify::verify_two_factor;
use crate::engine::{solve, Outcome};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceStatus {
    Solved,
    Excluded,
    Falsified,
}

impl InstanceStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            InstanceStatus::Solved => "solved",
            InstanceStatus::Excluded => "excluded",
            InstanceStatus::Falsified => "falsified",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExhaustiveOptions {
    pub ps: Vec<usize>,
    /// Worker threads; 0 uses rayon's default.
    pub workers: usize,
    /// One representative per isomorphism class instead of every labeling.
    pub up_to_iso: bool,
    /// Progress file; an existing one with the same `k` and `ps` is resumed.
    pub cursor: Option<PathBuf>,
    /// Instances per chunk between cursor writes.
    pub chunk: usize,
}

impl ExhaustiveOptions {
    pub fn new(ps: Vec<usize>) -> Self {
        ExhaustiveOptions {
            ps,
            workers: 0,
            up_to_iso: false,
            cursor: None,
            chunk: 4096,
        }
    }
}

/// Counts are over `(instance, p)` runs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnumerationReport {
    pub k: usize,
    pub instances: usize,
    pub total: usize,
    pub solved: usize,
    pub excluded: usize,
    pub falsified: usize,
    /// Instance index where this run started (non-zero after a resume).
    pub resumed_from: usize,
    /// Instance text and diagnostics for every falsification.
    pub falsifications: Vec<String>,
    pub elapsed_ms: u128,
}

impl EnumerationReport {
    pub fn summary(&self) -> String {
        format!(
            "k={} instances={} runs={} solved={} excluded={} falsified={} resumed_from={} ms={}",
            self.k, self.instances, self.total, self.solved, self.excluded, self.falsified, self.resumed_from, self.elapsed_ms
        )
    }
}

struct RunResult {
    idx: usize,
    p: usize,
    status: InstanceStatus,
    ms: f64,
    detail: Option<String>,
}

fn run_one(k: usize, idx: usize, rows: &super::enumerate::Rows, p: usize) -> RunResult {
    let d = to_instance(k, rows);
    let start = Instant::now();
    let (status, detail) = match solve(&d, p) {
        Ok(Outcome::Excluded) => (InstanceStatus::Excluded, None),
        Ok(Outcome::Solved(cert)) => match verify_two_factor(&d, &cert) {
            Ok(()) => (InstanceStatus::Solved, None),
            Err(v) => (InstanceStatus::Falsified, Some(format!("idx={idx} p={p} certificate rejected: {v}\n{}", d.to_text()))),
        },
        Err(e) => (InstanceStatus::Falsified, Some(format!("idx={idx} p={p} {e}"))),
    };
    RunResult {
        idx,
        p,
        status,
        ms: start.elapsed().as_secs_f64() * 1e3,
        detail,
    }
}

fn cursor_header(k: usize, opts: &ExhaustiveOptions) -> String {
    let ps: Vec<String> = opts.ps.iter().map(|p| p.to_string()).collect();
    format!("k={k} ps={} iso={}", ps.join(","), opts.up_to_iso)
}

/// Reads `next solved excluded falsified` from a matching cursor file.
fn read_cursor(path: &PathBuf, header: &str) -> Option<[usize; 4]> {
    let text = std::fs::read_to_string(path).ok()?;
    let mut lines = text.lines();
    if lines.next()? != header {
        return None;
    }
    let nums: Vec<usize> = lines.next()?.split_whitespace().filter_map(|t| t.split_once('=')?.1.parse().ok()).collect();
    nums.try_into().ok()
}

fn write_cursor(path: &PathBuf, header: &str, r: &EnumerationReport, next: usize) -> Result<()> {
    let body = format!(
        "{header}\nnext={next} solved={} excluded={} falsified={}\n",
        r.solved, r.excluded, r.falsified
    );
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, body).and_then(|_| std::fs::rename(&tmp, path)).map_err(|e| Error::Precondition(format!("cursor file: {e}")))
}

/// Solves every enumerated instance for every `p` in `opts.ps`, verifying
/// each certificate. `sink` receives one line per run in index order.
pub fn run_exhaustive(k: usize, opts: &ExhaustiveOptions, sink: &mut dyn FnMut(&str)) -> Result<EnumerationReport> {
    let start = Instant::now();
    for &p in &opts.ps {
        if p < 2 || p + 2 > 2 * k {
            return Err(Error::POutOfRange { p, k, max: (2 * k).saturating_sub(2) });
        }
    }
    let rows = instance_rows(k, opts.up_to_iso)?;
    let header = cursor_header(k, opts);
    let mut report = EnumerationReport {
        k,
        instances: rows.len(),
        ..Default::default()
    };
    let mut next = 0;
    if let Some([n, s, e, f]) = opts.cursor.as_ref().and_then(|c| read_cursor(c, &header)) {
        next = n.min(rows.len());
        report.solved = s;
        report.excluded = e;
        report.falsified = f;
        report.total = s + e + f;
        report.resumed_from = next;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let chunk = opts.chunk.max(1);
    while next < rows.len() {
        let end = (next + chunk).min(rows.len());
        let jobs: Vec<(usize, usize)> = (next..end).flat_map(|i| opts.ps.iter().map(move |&p| (i, p))).collect();
        let results: Vec<RunResult> = pool.install(|| jobs.par_iter().map(|&(i, p)| run_one(k, i, &rows[i], p)).collect());
        for r in results {
            sink(&format!("idx={} status={} p={} ms={:.3}", r.idx, r.status.as_str(), r.p, r.ms));
            report.total += 1;
            match r.status {
                InstanceStatus::Solved => report.solved += 1,
                InstanceStatus::Excluded => report.excluded += 1,
                InstanceStatus::Falsified => report.falsified += 1,
            }
            report.falsifications.extend(r.detail);
        }
        next = end;
        if let Some(c) = &opts.cursor {
            write_cursor(c, &header, &report, next)?;
        }
    }
    report.elapsed_ms = start.elapsed().as_millis();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_all_solved_or_excluded() {
        let mut lines = Vec::new();
        let r = run_exhaustive(2, &ExhaustiveOptions::new(vec![2]), &mut |l| lines.push(l.to_string())).unwrap();
        assert_eq!(r.total, 90);
        assert_eq!(r.falsified, 0);
        assert_eq!(r.solved + r.excluded, r.total);
        assert!(r.excluded > 0);
        assert_eq!(lines.len(), 90);
        assert!(lines[0].starts_with("idx=0 status="));
    }

    #[test]
    fn resumes_from_cursor() {
        let dir = std::env::temp_dir().join(format!("rbt-cursor-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let cursor = dir.join("cursor");
        let mut opts = ExhaustiveOptions::new(vec![2]);
        opts.cursor = Some(cursor.clone());
        opts.chunk = 40;
        let full = run_exhaustive(2, &opts, &mut |_| {}).unwrap();
        // pretend the run stopped after the first chunk
        let text = std::fs::read_to_string(&cursor).unwrap();
        let header = text.lines().next().unwrap().to_string();
        let mut partial = EnumerationReport::default();
        let mut count = 0;
        run_exhaustive(2, &ExhaustiveOptions { cursor: None, ..opts.clone() }, &mut |l| {
            if count < 40 {
                match l.split(' ').nth(1).unwrap() {
                    "status=solved" => partial.solved += 1,
                    "status=excluded" => partial.excluded += 1,
                    _ => partial.falsified += 1,
                }
            }
            count += 1;
        })
        .unwrap();
        write_cursor(&cursor, &header, &partial, 40).unwrap();
        let mut resumed_lines = 0;
        let resumed = run_exhaustive(2, &opts, &mut |_| resumed_lines += 1).unwrap();
        assert_eq!(resumed.resumed_from, 40);
        assert_eq!(resumed_lines, 50);
        assert_eq!((resumed.solved, resumed.excluded, resumed.total), (full.solved, full.excluded, full.total));
        std::fs::remove_dir_all(&dir).ok();
    }
}
