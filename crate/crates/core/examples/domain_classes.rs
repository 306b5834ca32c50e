//! Classes with a domain space on either side.

use fibspace::bandops::{BandMatrixSpec, TruncatedMatrix};
use fibspace::classify;
use fibspace::spaces::SpaceTag;

fn main() -> fibspace::Result<()> {
    let fhat = TruncatedMatrix::from_spec(&BandMatrixSpec::Fhat, 40, 56);
    for target in [SpaceTag::C0, SpaceTag::C, SpaceTag::EllInf, SpaceTag::Bs] {
        let v = classify::classify(&fhat, SpaceTag::C0Fhat, target, 1e-8, 8)?;
        println!("fhat in (c0_fhat, {target}): {:?}", v.overall);
    }

    let inverse = TruncatedMatrix::from_spec(&BandMatrixSpec::FhatInverse, 48, 48);
    let v = classify::classify(&inverse, SpaceTag::C0, SpaceTag::C0Fhat, 1e-8, 8)?;
    println!(
        "fhat^-1 in (c0, c0_fhat): {:?} [{}]",
        v.overall,
        v.notes.join("; ")
    );
    Ok(())
}
