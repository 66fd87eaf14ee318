use hamheavy::gen::{enumerate, GenFilter};
use std::time::Instant;
fn main() {
    let t = Instant::now();
    let count = enumerate(10, GenFilter::TwoConnected).unwrap().generated_len().unwrap();
    println!("n=10 TwoConnected: {count} graphs in {:?}", t.elapsed());
}
