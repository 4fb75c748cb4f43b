// Runs every reference check and prints a one-line verdict for each.

pub fn run_example() -> qinfo::Result<()> {
    let table = qinfo::paper_table::run(0)?;
    for check in &table.checks {
        let mark = if check.passed { "pass" } else { "FAIL" };
        println!("[{mark}] {:>2} {:<58} {:.6}", check.criterion, check.name, check.value);
    }
    println!("{} checks, all passed: {}", table.checks.len(), table.passed);
    Ok(())
}

fn main() -> qinfo::Result<()> {
    run_example()
}
