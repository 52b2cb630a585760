//! Certified product formulas between characters.

use tubecc::multiplication::{multiply_indecs, Dm1Kind};
use tubecc::{ar_product, cluster_mult, dm1_step, inductive_mult, Indec, TubeModule};

fn main() -> tubecc::Result<()> {
    let m = TubeModule::parse(3, "E(2,2)")?;
    println!("almost split:  {}", ar_product(&m)?);

    let (a, b) = (
        TubeModule::parse(4, "E(2,2)")?,
        TubeModule::parse(4, "E(1,1)")?,
    );
    println!("one extension: {}", cluster_mult(&a, &b)?);

    println!("dm1:           {}", dm1_step(3, Dm1Kind::ExtendTop, 1, 2)?);
    println!(
        "dm1:           {}",
        dm1_step(3, Dm1Kind::ExtendSocle, 1, 2)?
    );

    for (i, k, j, m, l) in [
        (3, 2, 1, 1, 1),
        (2, 2, 1, 1, 1),
        (1, 1, 3, 0, 2),
        (1, 2, 2, 1, 0),
    ] {
        let (e, case) = inductive_mult(3, i, k, j, m, l)?;
        println!("case {case}:      {e}");
    }

    let (e, case) = multiply_indecs(4, Indec::new(4, 2, 5)?, Indec::new(4, 1, 3)?)?;
    println!("case {case}:      {e}  verified={}", e.verified);
    Ok(())
}
