//! Enumerating rigid modules and checking that their characters are independent.

use tubecc::{enumerate_rigid, independence_check, DimVector, TubeModule};

fn main() -> tubecc::Result<()> {
    let bound = DimVector::new(vec![2, 1, 1])?;
    let family = enumerate_rigid(3, &bound)?;
    println!("{} rigid modules with dim <= {bound}:", family.len());
    for m in &family {
        println!("  {m}");
    }
    println!("independent: {}", independence_check(&family)?.independent);

    let pair = [TubeModule::parse(2, "E(1,1)+E(2,1)")?, TubeModule::zero(2)];
    let ind = independence_check(&pair)?;
    println!(
        "[E(1,1)+E(2,1), 0] independent: {}, relation {:?}",
        ind.independent, ind.relation
    );
    Ok(())
}
