//! Fibonacci numbers with `f_0 = f_1 = 1`, the classical identities and the
//! ratio converging to the golden ratio.

use fibspace::fibcore::{self, GoldenRatio};
use fibspace::rational;

fn main() {
    let first: Vec<String> = (0..12).map(|n| fibcore::fib(n).to_string()).collect();
    println!("f_0..f_11: {}", first.join(" "));

    let cassini_ok = (1..=1000).all(|n| fibcore::cassini(n) == fibcore::alternating_sign(n));
    let variant_ok =
        (1..=1000).all(|n| fibcore::cassini_variant(n) == fibcore::alternating_sign(n));
    let prefix_ok = (0..=1000).all(|n| fibcore::fib_prefix_sum(n) == fibcore::fib(n + 2) - 1);
    println!("cassini {cassini_ok}, variant {variant_ok}, prefix sums {prefix_ok}");

    for n in [5, 10, 20, 40] {
        let r = fibcore::fib_ratio(n);
        println!(
            "f_{}/f_{n} = {} ~ {}",
            n + 1,
            rational::format(&r),
            rational::decimal(&r, 18)
        );
    }
    println!(
        "phi (30 digits, floor): {}",
        GoldenRatio::scaled_decimal(30)
    );
    println!(
        "sum 1/f_k, k <= 30: {}",
        rational::decimal(&fibcore::reciprocal_fib_partial(30), 15)
    );
}
