//! Basis elements `c^(n)`, `c^(-1)` and partial expansions with exact
//! residual norms.

use fibspace::bandops::{self, BandMatrixSpec};
use fibspace::rational;
use fibspace::spaces::{self, SpaceTag};

fn main() -> fibspace::Result<()> {
    let c3 = spaces::basis_sequence(3, 8)?;
    println!(
        "c^(3) = {:?}",
        c3.iter().map(rational::format).collect::<Vec<_>>()
    );
    let e3 = bandops::apply(&BandMatrixSpec::Fhat, &c3)?;
    println!(
        "fhat(c^(3)) = {:?}",
        e3.iter().map(rational::format).collect::<Vec<_>>()
    );

    let e = bandops::apply(&BandMatrixSpec::Fhat, &spaces::basis_c_minus1(8))?;
    println!(
        "fhat(c^(-1)) = {:?}",
        e.iter().map(rational::format).collect::<Vec<_>>()
    );

    let x = spaces::counterexample("ratio_sum", 48)?;
    for m in [4, 8, 16, 32] {
        let r = spaces::reconstruct(&x, SpaceTag::CFhat, m, None, 8)?;
        println!(
            "m = {m:2}: residual norm ~ {}",
            rational::decimal(&r.residual_norm, 12)
        );
    }
    Ok(())
}
