use std::process::ExitCode;
use std::time::Instant;

use pizzeria_core::validation::{run_criterion, CRITERIA};

fn main() -> ExitCode {
    let mut all = true;
    for criterion in CRITERIA {
        let started = Instant::now();
        let report = run_criterion(criterion);
        all &= report.passed();
        println!("{report} [{:.1}s]", started.elapsed().as_secs_f64());
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
