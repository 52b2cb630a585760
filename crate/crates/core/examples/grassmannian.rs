//! Euler characteristics of quiver Grassmannians of tube modules.

use tubecc::grassmannian::gr_support;
use tubecc::TubeModule;

fn main() -> tubecc::Result<()> {
    let m = TubeModule::parse(3, "E(1,2)+E(2,2)")?;
    println!("submodule dimension vectors of {m}:");
    for (e, chi) in gr_support(&m)? {
        println!("  chi(Gr_{e}) = {chi}");
    }
    Ok(())
}
