//! Classical matrix classes evaluated on a 200x200 corner of the transform.

use fibspace::bandops::{BandMatrixSpec, TruncatedMatrix};
use fibspace::classify;
use fibspace::spaces::SpaceTag;

fn main() -> fibspace::Result<()> {
    let a = TruncatedMatrix::from_spec(&BandMatrixSpec::Fhat, 200, 200);
    let pairs = [
        (SpaceTag::C0, SpaceTag::C0),
        (SpaceTag::C, SpaceTag::C),
        (SpaceTag::C, SpaceTag::C0),
        (SpaceTag::C0, SpaceTag::EllInf),
    ];
    for (source, target) in pairs {
        let v = classify::classify_pair(&a, source, target, 1e-8, 8)?;
        print!("({source}, {target}): {:?}", v.overall);
        if let Some(r) = v.first_violation() {
            let w = r.witness.as_ref().expect("violations carry a witness");
            print!(
                " at {} row {} value {}",
                r.id,
                w.row,
                fibspace::rational::decimal(&w.value, 10)
            );
        }
        println!();
    }
    Ok(())
}
