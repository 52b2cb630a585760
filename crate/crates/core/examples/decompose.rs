//! Writing products of characters in the basis of rigid characters.

use tubecc::{decompose, DecomposeOptions, LaurentPoly, Target, TubeModule};

fn main() -> tubecc::Result<()> {
    let opts = DecomposeOptions::default();
    let targets = [
        (4, vec!["E(2,5)"]),
        (4, vec!["E(1,4)", "E(2,1)"]),
        (3, vec!["E(1,7)", "E(2,4)", "E(3,2)"]),
        (2, vec!["E(1,3)", "E(2,3)"]),
    ];
    for (r, factors) in targets {
        let ms = factors
            .iter()
            .map(|f| TubeModule::parse(r, f))
            .collect::<tubecc::Result<Vec<_>>>()?;
        let d = decompose(&Target::Product(ms), &opts)?;
        println!("r={r}  {} = {d}", factors.join(" * "));
    }
    let d = decompose(&Target::Poly(LaurentPoly::constant(3, 7)), &opts)?;
    println!("r=3  7 = {d}");
    println!(
        "{}",
        decompose(&Target::Module(TubeModule::parse(4, "E(2,5)")?), &opts)?.to_json_value()
    );
    Ok(())
}
