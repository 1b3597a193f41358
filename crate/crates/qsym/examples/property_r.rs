//! Decide the three structural requirements with witnesses.
//!
//! A connected directed multigraph is *rigid-eligible* when it has no cycle
//! of length ≥ 2 (loops are fine), admits a spanning path through all its
//! vertices, and carries no parallel edges. The report names a witness for
//! every failure. Run with `cargo run --example property_r`.

use qsym::graph::{check_property_r, parse_graph};

fn show(label: &str, text: &str) {
    let g = parse_graph(text).expect("well-formed input");
    let report = check_property_r(&g).expect("connected graph");
    println!("{label}: holds = {}", report.holds);
    if !report.violated.is_empty() {
        let tags: Vec<String> = report.violated.iter().map(|r| r.to_string()).collect();
        println!("  violated: {}", tags.join(", "));
    }
    if let Some(cycle) = &report.cycle {
        let ids: Vec<&str> = cycle.iter().map(|e| e.as_str()).collect();
        println!("  cycle witness: {}", ids.join(" "));
    }
    if let Some((a, b)) = &report.parallel_pair {
        println!("  parallel pair: {} {}", a.as_str(), b.as_str());
    }
    if let Some(path) = &report.spanning_path {
        let ids: Vec<&str> = path.iter().map(|e| e.as_str()).collect();
        println!("  spanning path: {}", ids.join(" "));
    }
    println!();
}

fn main() {
    // A chain with loops: every requirement satisfied.
    show(
        "loops over a chain",
        "vertices: 3\ne11: 1 -> 1\ne12: 1 -> 2\ne22: 2 -> 2\ne23: 2 -> 3\ne33: 3 -> 3\n",
    );

    // A 2-cycle is the canonical first failure.
    show("two-cycle", "vertices: 2\ne12: 1 -> 2\ne21: 2 -> 1\n");

    // Two disjoint loops: connected in the degree sense, but no path visits
    // both vertices.
    show("two loops", "vertices: 2\ne11: 1 -> 1\ne22: 2 -> 2\n");

    // Parallel edges.
    show("double edge", "vertices: 2\ne12a: 1 -> 2\ne12b: 1 -> 2\n");
}
