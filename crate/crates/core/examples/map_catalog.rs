//! Print every registered map with its Lipschitz estimate on [-2, 2]².

use rnifs::{maps, Window};

fn main() -> rnifs::Result<()> {
    let window = Window::square(-2.0, 2.0);
    for m in maps::registry() {
        let l = maps::estimate_lipschitz(m, &window, 2_000, 0)?;
        println!("{:8} L ≈ {l:6.3}  {}", m.id(), m.formula());
    }
    Ok(())
}
