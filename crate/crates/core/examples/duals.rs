//! Membership of a few sequences in the four dual sets.

use fibspace::bandops::SeqPrefix;
use fibspace::classify;
use fibspace::Rational;
use num_bigint::BigInt;

fn main() -> fibspace::Result<()> {
    let samples = [
        ("unit0", SeqPrefix::unit(0, 48)),
        ("zero", SeqPrefix::zeros(48)),
        (
            "ones",
            SeqPrefix::from_fn(48, |_| Rational::from_integer(1.into())),
        ),
        (
            "1/8^k",
            SeqPrefix::from_fn(48, |k| {
                Rational::new(1.into(), BigInt::from(8).pow(k as u32))
            }),
        ),
    ];
    for (name, a) in samples {
        for r in classify::dual_all(&a, 1e-8, 8)? {
            println!("{name:6} {}: {:?}", r.set_id, r.report.verdict);
        }
    }
    Ok(())
}
