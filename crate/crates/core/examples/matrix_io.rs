//! JSON and CSV exchange formats for prefixes, corners and reports.

use fibspace::bandops::{BandMatrixSpec, TruncatedMatrix};
use fibspace::classify;
use fibspace::io;
use fibspace::spaces::{self, SpaceTag};

fn main() -> fibspace::Result<()> {
    let x = spaces::counterexample("ratio_sum", 5)?;
    let json = io::to_json_string(&io::sequence_to_json(&x, Some(6)));
    print!("{json}");
    print!("{}", io::sequence_to_csv(&x, None));
    assert_eq!(io::sequence_from_json(&json)?.terms(), x.terms());

    let a = TruncatedMatrix::from_spec(&BandMatrixSpec::Fhat, 3, 3);
    print!("{}", io::to_json_string(&io::matrix_to_json(&a)));
    print!("{}", io::matrix_to_csv(&a));

    let big = TruncatedMatrix::from_spec(&BandMatrixSpec::Fhat, 64, 64);
    let v = classify::classify_pair(&big, SpaceTag::C, SpaceTag::C0, 1e-8, 8)?;
    print!("{}", io::report_to_csv(&v));
    Ok(())
}
