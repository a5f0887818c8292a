//! The one-dimensional picture is exact: a bounded density on an interval
//! integrates (from the base point 0) to a Lipschitz function of norm equal
//! to the density's sup norm, and differentiation inverts the map. With
//! piecewise-constant densities this is plain arithmetic, no quadrature.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lipfree::interval::{random_density, PiecewiseConstant};
use lipfree::Result;

fn main() -> Result<()> {
    println!("Isometry between bounded densities and Lipschitz functions (1D)");
    println!("===============================================================");

    // the step density: 1 on (0,1), -1 elsewhere on (-2,2)
    let g = PiecewiseConstant::new(-2.0, 2.0, vec![0.0, 1.0], vec![-1.0, 1.0, -1.0])?;
    let f = g.integrate_from_zero();
    println!("step density: sup norm {:.1}", g.sup_norm());
    println!("integral Tg:  Lipschitz constant {:.1}, Tg(0) = {:.1}", f.lipschitz_constant(), f.value_at_zero());
    println!("node values of Tg:");
    for (x, v) in f.nodes.iter().zip(&f.values) {
        println!("  Tg({x:+.1}) = {v:+.4}");
    }
    let back = f.derivative();
    println!("derivative of Tg minus g, sup distance: {:.3e}", back.sup_distance(&g));

    // the identity is exact across random densities
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_norm = 0.0_f64;
    let mut worst_inverse = 0.0_f64;
    for _ in 0..100 {
        let g = random_density(&mut rng, 10);
        let f = g.integrate_from_zero();
        worst_norm = worst_norm.max((f.lipschitz_constant() - g.sup_norm()).abs());
        worst_inverse = worst_inverse.max(f.derivative().sup_distance(&g));
    }
    println!("\nover 100 random densities (<= 10 pieces):");
    println!("  worst | ||Tg||_L - ||g||_inf |  = {worst_norm:.3e}");
    println!("  worst sup distance of T^-1(Tg) from g = {worst_inverse:.3e}");
    Ok(())
}
