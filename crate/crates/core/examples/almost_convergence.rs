//! Moving averages `t_mn` and the f-limit verdict.

use fibspace::rational;
use fibspace::spaces::{self, NamedSequence};

fn main() -> fibspace::Result<()> {
    let x = NamedSequence::Alternating.generate(256);
    let grid = spaces::t_matrix(&x, 4, 3)?;
    for (m, row) in grid.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(rational::format).collect();
        println!("t_{m},n = {}", cells.join("  "));
    }
    for seq in [
        NamedSequence::Alternating,
        NamedSequence::Staircase,
        NamedSequence::FibSquares,
    ] {
        let v = spaces::f_lim_estimate(&seq.generate(256), 5e-2)?;
        println!("{seq}: {:?}, limit ~ {:?}", v.verdict, v.limit_estimate);
    }
    Ok(())
}
