//! One pass/fail line per acceptance criterion. Tolerances are exact: every
//! criterion requires zero mismatches and zero failed witnesses.

use std::process::ExitCode;
use std::time::Instant;

use sympinv::verify::{self, SuiteReport, VerifyConfig};
use sympinv::Result;

type Check = fn(&VerifyConfig) -> Result<Vec<SuiteReport>>;

fn one(r: Result<SuiteReport>) -> Result<Vec<SuiteReport>> {
    r.map(|r| vec![r])
}

const CRITERIA: [(u32, &str, Check); 9] = [
    (1, "two skew-involutions: criterion = oracle = Sp-reversible", |c| one(verify::theorem4(c))),
    (2, "two involutions: decision = oracle, witnesses re-multiply", |c| one(verify::theorem2(c))),
    (3, "involution x skew-involution and the PSp predicate", |c| {
        Ok(vec![verify::theorem5(c)?, verify::corollary(c)?])
    }),
    (4, "witness soundness on random conjugates", |c| one(verify::witnesses(c))),
    (5, "Wall normal form, discriminant classes, quotient identity", |c| one(verify::wall(c))),
    (6, "Dickson transforms of invariant factors", |c| one(verify::dickson(c))),
    (7, "parity of dim Bahn^t on reversible classes", |c| one(verify::parity(c))),
    (8, "squares of (x^2+1)-primary elements", |c| one(verify::skew_squares(c))),
    (9, "group orders, elementary divisors, factorization", |c| one(verify::infrastructure(c))),
];

fn main() -> ExitCode {
    let filter: Vec<u32> = std::env::args().filter_map(|a| a.parse().ok()).collect();
    let cfg = VerifyConfig::default();
    let mut failed = 0;
    for (id, name, check) in CRITERIA {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let (ok, detail, failures, notes) = match check(&cfg) {
            Ok(reports) => {
                let checks: usize = reports.iter().map(|r| r.checks).sum();
                let failures: Vec<String> = reports.iter().flat_map(|r| r.failures.clone()).collect();
                let notes: Vec<String> = reports.iter().flat_map(|r| r.notes.clone()).collect();
                (failures.is_empty(), format!("{checks} checks, {} failures", failures.len()), failures, notes)
            }
            Err(e) => (false, format!("error: {e}"), vec![], vec![]),
        };
        println!(
            "criterion {id}: {} {name} ({detail}, tolerance 0, {:.1}s)",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        for f in failures.iter().take(10) {
            println!("    {f}");
        }
        for n in &notes {
            println!("    note: {n}");
        }
        if !ok {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
