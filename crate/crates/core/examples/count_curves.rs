//! Prints the number of (-1)-classes of each degree.
use std::time::Instant;

use nkcy::curves::minus_one_classes_of_degree;

fn main() {
    let max: u32 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(12);
    for alpha in 0..=max {
        let t = Instant::now();
        let n = minus_one_classes_of_degree(alpha).len();
        println!("{alpha:>3} {n:>10} {:>8.3}s", t.elapsed().as_secs_f64());
    }
}
