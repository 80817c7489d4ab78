//! The numbered acceptance criteria, one verdict line each. Runs without
//! the test harness so the lines are always printed.

use funjohn::acceptance::run_all;

fn main() {
    let outcomes = run_all();
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria passed", outcomes.len());
}
