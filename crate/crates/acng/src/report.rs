//! Text renderings of evaluation and build results.

use std::fmt::Write;

use acng_core::EvalRecord;
use serde::Serialize;

pub const CSV_HEADER: &str = "L,recall_at_k,mean_ndc,mean_hops";

/// One CSV row per queue size, in the order given.
pub fn eval_csv(records: &[EvalRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{},{},{}",
            r.queue_size, r.recall_at_k, r.mean_ndc, r.mean_hops
        )
        .expect("string write");
    }
    out
}

/// Pretty JSON with a trailing newline. Object keys come out sorted.
pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_one_row_per_record() {
        let rec = |l| EvalRecord {
            queue_size: l,
            recall_at_k: 0.5,
            mean_ndc: 12.0,
            mean_hops: 3.25,
        };
        let csv = eval_csv(&[rec(10), rec(20)]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines, [CSV_HEADER, "10,0.5,12,3.25", "20,0.5,12,3.25"]);
    }
}
