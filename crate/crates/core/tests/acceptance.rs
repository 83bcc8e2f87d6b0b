use std::process::ExitCode;

use hermcov::suite::run_all;

fn main() -> ExitCode {
    let results = run_all();
    let mut failed = 0;
    for r in &results {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {verdict} {:<40} {:>7} ms / {:>6} ms budget",
            r.id, r.name, r.elapsed_ms, r.budget_ms
        );
        for f in &r.failures {
            println!("    failed: {f}");
        }
        if !r.within_budget {
            println!("    over budget");
        }
        for d in &r.discrepancies {
            println!("    noted: {d}");
        }
        failed += usize::from(!r.passed);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
