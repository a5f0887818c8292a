//! Extending sampled values to a globally Lipschitz function: the McShane
//! inf-convolution h(x) = min over data of f_i + L ||x - x_i|| agrees with
//! the data, never exceeds the prescribed constant, and is the pointwise
//! smallest such extension.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lipfree::geometry::{ConvexDomain, NormSpec};
use lipfree::lipcalc::{
    essential_lipschitz_estimate, finite_lipschitz_constant, mcshane_extension, PointData,
};
use lipfree::Result;

fn main() -> Result<()> {
    println!("McShane extension of scattered samples");
    println!("======================================");

    let data = PointData::new(
        vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![-1.0, -1.0],
            vec![0.5, 0.5],
        ],
        vec![0.0, 0.8, -0.3, 1.1, 0.25],
    )?;
    let norm = NormSpec::L2;
    let lip = finite_lipschitz_constant(&data, &norm);
    println!("finite Lipschitz constant of the data: {lip:.9}");

    let h = mcshane_extension(&data, lip, &norm)?;
    println!("\nagreement at the data points:");
    for (p, v) in data.points.iter().zip(&data.values) {
        println!(
            "  h({:+.1}, {:+.1}) = {:+.9}   sample {:+.9}",
            p[0],
            p[1],
            h.eval(p),
            v
        );
    }

    let domain = ConvexDomain::make_box(vec![-2.0, -2.0], vec![2.0, 2.0])?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let est = essential_lipschitz_estimate(&h, &domain, &norm, 20_000, &mut rng);
    println!("\nsampled Lipschitz constant of the extension: {est:.9} (<= {lip:.9})");

    println!("\nvalues along the diagonal:");
    for t in [-2.0, -1.0, 0.0, 0.5, 1.0, 2.0] {
        println!("  h({t:+.1}, {t:+.1}) = {:+.9}", h.eval(&[t, t]));
    }
    Ok(())
}
