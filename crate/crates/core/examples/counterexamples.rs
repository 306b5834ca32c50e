//! Named sequences behind the membership and non-solidity examples.

use fibspace::bandops::{self, BandMatrixSpec};
use fibspace::rational;
use fibspace::spaces::{self, SpaceTag, DEFAULT_TOL, DEFAULT_WINDOW};

fn show(name: &str, len: usize) -> fibspace::Result<()> {
    let x = spaces::counterexample(name, len)?;
    println!("{name}:");
    for tag in [
        SpaceTag::EllInf,
        SpaceTag::C,
        SpaceTag::C0Fhat,
        SpaceTag::CFhat,
    ] {
        let v = spaces::membership_estimate(&x, tag, DEFAULT_TOL, DEFAULT_WINDOW)?;
        let witness = v
            .exact_witness
            .map(|w| format!(" ({w})"))
            .unwrap_or_default();
        println!("  {tag:8} {:?}{witness}", v.verdict);
    }
    Ok(())
}

fn main() -> fibspace::Result<()> {
    show("fib_squares", 120)?;
    show("ratio_sum", 120)?;
    show("nonsolid_uv", 120)?;

    let uv = spaces::counterexample("nonsolid_uv", 10)?;
    let y = bandops::apply(&BandMatrixSpec::Fhat, &uv)?;
    println!(
        "fhat(uv) = {:?}",
        y.iter().map(rational::format).collect::<Vec<_>>()
    );
    Ok(())
}
