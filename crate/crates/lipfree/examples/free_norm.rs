//! Free-space norms of finite molecules by the Kantorovich-Rubinstein dual:
//! maximize pairing against Lipschitz functions vanishing at the base point.
//! The solver also returns the norming witness, whose Lipschitz constant
//! over the finite support certifies feasibility.

use lipfree::freenorm::{kr_norm, transport_norm, Molecule};
use lipfree::geometry::NormSpec;
use lipfree::lipcalc::finite_lipschitz_constant;
use lipfree::Result;

fn main() -> Result<()> {
    println!("Kantorovich-Rubinstein norms of point molecules");
    println!("===============================================");

    // a single unit mass: the norm is the distance to the base point
    let point = Molecule::new(vec![vec![3.0, 4.0]], vec![1.0])?;
    let (value, witness) = kr_norm(&point, &NormSpec::L2)?;
    println!("|| delta((3,4)) ||   (l2)  = {value:.9}   (distance 5 expected)");
    println!(
        "witness: values {:?}, Lipschitz constant {:.9}",
        witness.values,
        finite_lipschitz_constant(&witness, &NormSpec::L2)
    );

    // a dipole: the norm is weight times separation
    let dipole = Molecule::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![1.0, -1.0])?;
    for (name, norm) in [
        ("l1", NormSpec::L1),
        ("l2", NormSpec::L2),
        ("linf", NormSpec::Linf),
    ] {
        let (v, _) = kr_norm(&dipole, &norm)?;
        println!("|| delta((1,0)) - delta((0,1)) ||  ({name:4}) = {v:.9}");
    }

    // same value from the transport (earth-mover) formulation
    let kr = kr_norm(&dipole, &NormSpec::L2)?.0;
    let ot = transport_norm(&dipole, &NormSpec::L2)?;
    println!("duality cross-check: dual {kr:.9} vs transport {ot:.9} (diff {:.2e})", (kr - ot).abs());

    // an unbalanced three-atom molecule under a polyhedral norm
    let directions = vec![
        vec![1.0, 0.0],
        vec![-1.0, 0.0],
        vec![0.5, 0.5],
        vec![-0.5, -0.5],
    ];
    let hex = NormSpec::polyhedral(directions)?;
    let tri = Molecule::new(
        vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, -1.0]],
        vec![2.0, -1.0, 0.5],
    )?;
    let (v, w) = kr_norm(&tri, &hex)?;
    println!("three-atom molecule, polyhedral norm: {v:.9}");
    println!(
        "witness Lipschitz constant {:.9} (must be <= 1)",
        finite_lipschitz_constant(&w, &hex)
    );
    Ok(())
}
