//! Quantum CHSH value against every deterministic local strategy.

use toolate_sim::lhv::{all_chsh_strategies, enumerate_chsh_max};
use toolate_sim::spinlab::{chsh_value, Orientation};

fn main() {
    let [a, a2, b, b2] = [0.0, 90.0, 45.0, 135.0].map(Orientation::from_degrees);
    for s in all_chsh_strategies(a, a2, b, b2) {
        println!("A {:?}  B {:?}  S = {:+}", s.a_values, s.b_values, s.chsh().unwrap());
    }
    let best = enumerate_chsh_max(a, a2, b, b2);
    let q = chsh_value(a, a2, b, b2);
    println!("local maximum |S| = {}", best.max_s);
    println!("quantum S = {q:.9} (|S| - 2 = {:.6})", q.abs() - 2.0);
}
