//! Characters from the defining sum and from the closed form.

use tubecc::{char_definitional, char_module, TubeModule};

fn main() -> tubecc::Result<()> {
    for (r, s) in [
        (1, "E(1,5)"),
        (2, "E(1,3)"),
        (2, "E(1,4)"),
        (3, "E(1,2)"),
        (4, "E(2,5)"),
        (4, "E(1,4)+E(2,1)"),
    ] {
        let m = TubeModule::parse(r, s)?;
        let x = char_module(&m);
        assert_eq!(x, char_definitional(&m)?);
        println!("r={r}  X[{m}] = {x}");
    }
    Ok(())
}
