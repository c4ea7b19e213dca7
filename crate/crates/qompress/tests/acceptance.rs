//! Runs every acceptance criterion and prints one line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use qompress::claims::{self, ClaimOptions};

fn main() -> ExitCode {
    let opts = ClaimOptions::default();
    let start = Instant::now();
    let dependent = claims::state_dependent_sweep(&opts);
    let independent = claims::state_independent_sweep(&opts);
    let checks: Vec<Box<dyn Fn() -> claims::Claim>> = vec![
        Box::new(|| claims::criterion_1(&dependent)),
        Box::new(|| claims::criterion_2(&dependent)),
        Box::new(|| claims::criterion_3(&opts)),
        Box::new(claims::criterion_4),
        Box::new(|| claims::criterion_5(&independent)),
        Box::new(claims::criterion_6),
        Box::new(|| claims::criterion_7(&opts)),
        Box::new(claims::criterion_8),
        Box::new(claims::criterion_9),
    ];
    let mut failed = 0;
    for check in checks {
        let claim = check();
        failed += usize::from(!claim.passed);
        println!("{claim}");
    }
    println!(
        "acceptance: {} of 9 criteria pass ({:.1} s)",
        9 - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
