//! The segment-integration operator T and its inverse: a bounded vector
//! field g becomes the scalar function (Tg)(y) = integral of <g, y> along
//! the segment from 0 to y, and taking gradients recovers g. The round
//! trip gradient-then-integrate reproduces f - f(0) up to quadrature and
//! finite-difference error.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lipfree::fieldcalc::{gradient, roundtrip_error, scalar_from_field, VectorField};
use lipfree::geometry::{ConvexDomain, NormSpec};
use lipfree::lipcalc::{essential_lipschitz_estimate, ScalarField};
use lipfree::Result;

fn main() -> Result<()> {
    println!("Segment integration and its round trips");
    println!("=======================================");

    let domain = ConvexDomain::make_box(vec![-1.0, -1.0], vec![1.0, 1.0])?;
    let mut rng = ChaCha8Rng::seed_from_u64(42);

    // T applied to a constant field is the linear function <c, y>
    let constant = VectorField::from_fn(2, |_| vec![0.6, -0.8]);
    let t_const = scalar_from_field(&constant, 256);
    println!(
        "T(constant (0.6,-0.8)) at (1,1): {:.9}   (exact -0.2)",
        t_const.eval(&[1.0, 1.0])
    );

    // the Lipschitz constant of Tg matches the sup norm of g
    let lip = essential_lipschitz_estimate(&t_const, &domain, &NormSpec::L2, 20_000, &mut rng);
    println!("estimated Lipschitz constant of Tg: {lip:.9}   (field sup norm 1)");

    // gradient of a smooth function, then integrate back
    let f = ScalarField::from_fn(2, |y| (y[0] * y[1]).sin() + 0.5 * y[0]);
    let g = gradient(&f, &domain, 1e-5);
    let back = scalar_from_field(&g, 256);
    let probe = [0.7, -0.4];
    println!(
        "f(0.7,-0.4) - f(0) = {:.9}, T(grad f) there = {:.9}",
        f.eval(&probe) - f.eval(&[0.0, 0.0]),
        back.eval(&probe)
    );

    // the worst probe error over random points, per test function
    for (name, f, tol) in [
        ("affine", ScalarField::from_fn(2, |y| 2.0 * y[0] - y[1]), 1e-12),
        ("quadratic", ScalarField::from_fn(2, |y| y[0] * y[0] + 0.5 * y[1] * y[1]), 1e-6),
        ("euclidean", ScalarField::from_fn(2, |y| y[0].hypot(y[1])), 1e-3),
    ] {
        let err = roundtrip_error(&f, &domain, 1e-4, 256, 1000, &mut rng);
        println!("round trip on {name:10}: max error {err:.3e}  (budget {tol:.0e})");
    }
    Ok(())
}
