//! Recompute both bundled reference tables and report deviations.
//!
//! Every cell is recomputed from scratch: the eigenvalue column with the
//! orthonormal basis, the annealing column at the printed-reference
//! temperature schedule. Cells run in parallel; cap workers with
//! BOUNDSCOPE_THREADS.
//!
//! ```bash
//! cargo run --example reproduce_tables
//! ```

use boundscope::cli::{init_thread_pool, reproduce_table, TableId};

fn main() -> boundscope::Result<()> {
    init_thread_pool();

    let metadata = reproduce_table(TableId::Table1, Some("table1_reproduction.csv".as_ref()))?;
    println!("corpus metadata:\n{}", metadata.summary());

    let bounds = reproduce_table(TableId::Table2, Some("table2_reproduction.csv".as_ref()))?;
    println!("bound table:\n{}", bounds.summary());

    println!("wrote table1_reproduction.csv and table2_reproduction.csv");
    if !(metadata.all_within() && bounds.all_within()) {
        std::process::exit(boundscope::cli::EXIT_TOLERANCE);
    }
    Ok(())
}
