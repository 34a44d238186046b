//! One line per acceptance criterion; runs without the libtest harness so the lines always print.

use kummerlab::suite::{run, CRITERIA};

fn main() {
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let r = run(*id, 1, None);
        println!("[{}] {:>2}. {} ({} ms): {}", if r.pass { "PASS" } else { "FAIL" }, r.id, r.name, r.millis, r.detail);
        if !r.pass {
            failed.push(r.id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: {} of {} criteria pass", CRITERIA.len(), CRITERIA.len());
}
