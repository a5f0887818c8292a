//! Lipschitz compatibility: a bounded field is a gradient exactly when its
//! segment integrals are path-consistent. The normalized residual
//! |integral along x->y + f(x) - f(y)| / ||y - x|| is zero for gradients
//! and order one for the rotation field.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lipfree::fieldcalc::{compatibility_residual, VectorField};
use lipfree::geometry::ConvexDomain;
use lipfree::Result;

fn main() -> Result<()> {
    println!("Compatibility residuals: gradients vs a curl");
    println!("============================================");

    let domain = ConvexDomain::make_box(vec![-1.0, -1.0], vec![1.0, 1.0])?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    let fields: Vec<(&str, VectorField)> = vec![
        ("constant gradient", VectorField::from_fn(2, |_| vec![0.75, -0.5])),
        ("radial gradient   ", VectorField::from_fn(2, |y| vec![y[0], y[1]])),
        (
            "smooth gradient   ",
            VectorField::from_fn(2, |y| vec![y[1].cos(), -y[0] * y[1].sin() + 2.0 * y[1]]),
        ),
        ("rotation (no f)   ", VectorField::from_fn(2, |y| vec![-y[1], y[0]])),
    ];

    for (name, g) in &fields {
        let mut worst = 0.0_f64;
        for _ in 0..200 {
            let x = domain.sample(&mut rng);
            let y = domain.sample(&mut rng);
            worst = worst.max(compatibility_residual(g, &x, &y, 256));
        }
        println!("{name}: max residual over 200 pairs = {worst:.6}");
    }

    // the canonical pair separates the rotation field decisively
    let rotation = VectorField::from_fn(2, |y| vec![-y[1], y[0]]);
    let r = compatibility_residual(&rotation, &[1.0, 0.0], &[0.0, 1.0], 256);
    println!("\nrotation field on (1,0)->(0,1): residual {r:.9}");
    println!("expected 1/sqrt(2) = {:.9}", std::f64::consts::FRAC_1_SQRT_2);
    Ok(())
}
