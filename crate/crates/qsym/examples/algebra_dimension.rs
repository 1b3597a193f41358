//! Linear dimension of graph C*-algebras on acyclic graphs.
//!
//! On a connected acyclic loop-free graph, the monomials `S_γ S_μ*` over
//! pairs of paths into a common sink form a basis, so the dimension is
//! `Σ_{v sink} (#paths into v)²`. The chain on `n` vertices presents the
//! full matrix algebra `M_n(ℂ)`. Run with `cargo run --example algebra_dimension`.

use qsym::algebra::dimension;
use qsym::families::make_family;
use qsym::graph::parse_graph;

fn main() {
    println!("paths present matrix algebras:");
    for n in 2..=6 {
        let g = make_family("P", &[n]).expect("registry instance").graph;
        let d = dimension(&g).expect("acyclic");
        println!("  chain on {n} vertices: dimension {d} = {n}² (M_{n}(ℂ))");
    }

    // Two disjoint chains: a direct sum of matrix algebras, 2² + 3².
    let g = make_family("P23", &[]).expect("registry instance").graph;
    println!("\ndisjoint 2-chain ⊔ 3-chain: dimension {}", dimension(&g).unwrap());

    // A double edge into a sink: three paths arrive (two short, one empty),
    // presenting M_3(ℂ).
    let g = parse_graph("vertices: 2\ne12a: 1 -> 2\ne12b: 1 -> 2\n").expect("well-formed");
    println!("double edge: dimension {}", dimension(&g).unwrap());

    // Loops make the algebra infinite-dimensional; the engine says so
    // instead of guessing.
    let t = make_family("T", &[]).expect("registry instance").graph;
    println!("loop graph: {}", dimension(&t).unwrap_err());
}
