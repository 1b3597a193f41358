//! Canonical vertex orderings and the matrix shape that characterizes them.
//!
//! A graph passes the structural test exactly when some vertex ordering
//! makes its adjacency matrix upper triangular with every superdiagonal
//! entry equal to 1 — and that ordering, read off the spanning path, is
//! unique. Run with `cargo run --example canonical_form`.

use qsym::graph::{adjacency_matrix, canonical_ordering, parse_graph};

fn main() {
    // A path whose vertices arrive shuffled and renamed.
    let g = parse_graph("vertices: c,a,b\nx: b -> c\ny: a -> b\n").expect("well-formed");

    let natural = adjacency_matrix(&g, g.vertex_ids()).unwrap();
    println!("natural order: {:?}", names(&natural.order));
    print_rows(&natural.entries);
    println!("canonical in this order? {}\n", natural.is_canonical());

    let order = canonical_ordering(&g).expect("the graph is a relabeled path");
    let canonical = adjacency_matrix(&g, &order).unwrap();
    println!("canonical order: {:?}", names(&canonical.order));
    print_rows(&canonical.entries);
    println!("canonical in this order? {}\n", canonical.is_canonical());

    // No reordering fixes a 2-cycle.
    let k2 = parse_graph("vertices: 2\ne12: 1 -> 2\ne21: 2 -> 1\n").expect("well-formed");
    println!("two-cycle has canonical ordering: {:?}", canonical_ordering(&k2));
}

fn names(order: &[qsym::graph::VertexId]) -> Vec<&str> {
    order.iter().map(|v| v.as_str()).collect()
}

fn print_rows(entries: &[Vec<u32>]) {
    for row in entries {
        let cells: Vec<String> = row.iter().map(u32::to_string).collect();
        println!("  [{}]", cells.join(" "));
    }
}
