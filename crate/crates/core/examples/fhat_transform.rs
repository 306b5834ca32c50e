//! The Fibonacci difference transform, its explicit inverse, and the two
//! sequences whose transforms are known in closed form.

use fibspace::bandops::{self, BandMatrixSpec, TruncatedMatrix};
use fibspace::rational;
use fibspace::spaces::NamedSequence;

fn main() -> fibspace::Result<()> {
    let corner = TruncatedMatrix::from_spec(&BandMatrixSpec::Fhat, 5, 5);
    println!("fhat corner:");
    for row in corner.to_rows() {
        let cells: Vec<String> = row.iter().map(rational::format).collect();
        println!("  [{}]", cells.join(", "));
    }

    let squares = NamedSequence::FibSquares.generate(12);
    let y = bandops::apply(&BandMatrixSpec::Fhat, &squares)?;
    println!(
        "fhat(fib_squares) = {:?}",
        y.iter().map(rational::format).collect::<Vec<_>>()
    );

    let ratios = NamedSequence::RatioSum.generate(8);
    let y = bandops::apply(&BandMatrixSpec::Fhat, &ratios)?;
    println!(
        "fhat(ratio_sum)   = {:?}",
        y.iter().map(rational::format).collect::<Vec<_>>()
    );

    let back = bandops::apply_fhat_inverse(&y)?;
    println!(
        "inverse recovers ratio_sum: {}",
        back.terms() == ratios.terms()
    );

    let inverse = TruncatedMatrix::from_spec(&BandMatrixSpec::FhatInverse, 32, 32);
    let product = TruncatedMatrix::from_spec(&BandMatrixSpec::Fhat, 32, 32).matmul(&inverse)?;
    println!(
        "fhat * fhat^-1 is the 32x32 identity: {}",
        product.to_rows() == TruncatedMatrix::identity(32, 32).to_rows()
    );
    Ok(())
}
