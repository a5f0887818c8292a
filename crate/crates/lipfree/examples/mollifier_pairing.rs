//! Pairing a Lipschitz function with an integrable field through a
//! mollifier: smooth the function with a polynomial bump of width eps, then
//! integrate <grad f_eps, F> over the grid. As eps shrinks toward the
//! spacing, the pairing converges to the true dual pairing — here
//! f(y) = |y| against the indicator field of (0,1), whose pairing is 1.

use lipfree::fieldcalc::mollify_pairing;
use lipfree::geometry::{build_grid, Alignment, ConvexDomain};
use lipfree::lipcalc::ScalarField;
use lipfree::Result;

fn main() -> Result<()> {
    println!("Mollified pairing of |y| with the unit-interval field");
    println!("=====================================================");

    let domain = ConvexDomain::make_box(vec![-2.0], vec![2.0])?;
    let h = 1.0 / 2048.0;
    let grid = build_grid(&domain, h, Alignment::Offset)?;
    let field: Vec<Vec<f64>> = grid
        .centers
        .iter()
        .map(|c| vec![if c[0] > 0.0 && c[0] < 1.0 { 1.0 } else { 0.0 }])
        .collect();
    let f = ScalarField::from_fn(1, |y| y[0].abs());

    println!("grid spacing h = 1/2048; exact pairing is 1\n");
    println!("eps/h   pairing        error");
    for mult in [32.0, 16.0, 8.0, 4.0, 2.0] {
        let eps = mult * h;
        let p = mollify_pairing(&f, &grid, &field, eps)?;
        println!("{mult:5.0}   {p:.9}   {:.3e}", (p - 1.0).abs());
    }

    // smoothing commutes with affine functions: their pairing has no
    // eps-dependence at all
    let affine = ScalarField::from_fn(1, |y| 0.5 * y[0]);
    let wide = mollify_pairing(&affine, &grid, &field, 32.0 * h)?;
    let narrow = mollify_pairing(&affine, &grid, &field, 2.0 * h)?;
    println!("\naffine f: pairing at eps=32h is {wide:.12}, at eps=2h is {narrow:.12}");
    println!("difference {:.3e}", (wide - narrow).abs());
    Ok(())
}
