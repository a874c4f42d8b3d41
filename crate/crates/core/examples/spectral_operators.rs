//! Spectral derivatives, the Helmholtz inverse and the Sobolev norm on a Gaussian.
//!
//! cargo run --release --example spectral_operators

use dispersive_wave::spectral::{differentiate, helmholtz_inverse, hs_norm, GridSpec, SobolevIndex, StateField};

fn main() -> dispersive_wave::Result<()> {
    let grid = GridSpec::new(20.0, 512)?;
    let f = StateField::from_fn(grid.clone(), |x| (-x * x).exp())?;

    let fxx = differentiate(&f, 2)?;
    let exact = StateField::from_fn(grid.clone(), |x| (4.0 * x * x - 2.0) * (-x * x).exp())?;
    println!("max |f_xx - exact|      = {:.2e}", fxx.add_scaled(&exact, -1.0)?.max_abs());

    // (1 - d_xx) p*f recovers f
    let pf = helmholtz_inverse(&f)?;
    let back = pf.add_scaled(&differentiate(&pf, 2)?, -1.0)?;
    println!("max |(1 - d_xx)p*f - f| = {:.2e}", back.add_scaled(&f, -1.0)?.max_abs());

    for s in [0.0, 1.0, 2.0] {
        println!("||f||_H^{s}              = {:.12}", hs_norm(&f, SobolevIndex::new(s)?));
    }
    println!("(pi/2)^(1/4)            = {:.12}", (std::f64::consts::PI / 2.0).sqrt().sqrt());
    Ok(())
}
