//! Run the bundled configs and print the summary table.

use std::path::Path;

fn main() -> rnifs::Result<()> {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let summary = rnifs::harness::run_suite(&configs, Path::new("suite_out"), None)?;
    print!("{}", summary.to_csv());
    Ok(())
}
