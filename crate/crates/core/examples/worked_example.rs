//! Expanding a product of simple characters into uniserial chains.

use tubecc::{char_module, expand_simple_product, TubeModule};

fn main() -> tubecc::Result<()> {
    let r = 4;
    let word = [1, 2, 3, 4, 2];
    println!("X[E1] X[E2] X[E3] X[E4] X[E2] =");
    for (m, c) in expand_simple_product(r, &word)? {
        println!("  {c:>2} * X[{m}]");
    }

    let x = |s: &str| char_module(&TubeModule::parse(r, s).unwrap());
    let lhs = x("E(1,4)+E(2,1)");
    let rhs = &(&x("E(2,5)") + &x("E(2,2)+E(2,1)")) - &x("E(4,1)");
    assert_eq!(lhs, rhs);
    println!("X[E(1,4)+E(2,1)] = X[E(2,5)] + X[E(2,2)+E(2,1)] - X[E(4,1)]");
    Ok(())
}
