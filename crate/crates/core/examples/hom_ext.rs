//! Hom and Ext dimensions in a tube, and Auslander-Reiten duality.

use tubecc::{ext1_cluster_dim, ext1_dim, hom_dim, hom_space, is_rigid, TubeModule};

fn main() -> tubecc::Result<()> {
    let r = 4;
    let m = TubeModule::parse(r, "E(1,2)")?;
    let n = TubeModule::parse(r, "E(2,3)")?;
    println!("dim M = {}, dim N = {}", m.dim_vector(), n.dim_vector());
    println!("tau M = {}", m.tau());

    let space = hom_space(&m, &n)?;
    println!(
        "Hom(M, N) has dimension {}, basis commutes: {}",
        space.dim(),
        space.commutes()
    );
    for (k, maps) in space.basis.iter().enumerate() {
        let ranks: Vec<usize> = maps.iter().map(|a| a.rank()).collect();
        println!("  basis map {k}: vertex ranks {ranks:?}");
    }

    for (a, b) in [(&m, &n), (&n, &m)] {
        println!(
            "Ext^1({a}, {b}) = {} = dim Hom({b}, tau {a}) = {}",
            ext1_dim(a, b)?,
            hom_dim(b, &a.tau())?
        );
    }
    println!("symmetric Ext = {}", ext1_cluster_dim(&m, &n)?);
    for s in ["E(1,3)", "E(1,4)", "E(1,1)+E(3,1)", "E(1,1)+E(2,1)"] {
        println!("{s} rigid: {}", is_rigid(&TubeModule::parse(r, s)?)?);
    }
    Ok(())
}
