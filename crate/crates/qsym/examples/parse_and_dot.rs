//! Parse the text format and emit DOT.
//!
//! The file format is line-oriented: a `vertices:` header (either a count or
//! an explicit id list), then one `edge: src -> rng` line per edge, with `#`
//! comments anywhere. Run with `cargo run --example parse_and_dot`.

use qsym::graph::parse_graph;

fn main() {
    let text = "\
# a loop at 1 feeding a two-step chain
vertices: 1,2,3
e11: 1 -> 1
e12: 1 -> 2
e23: 2 -> 3
";
    let g = parse_graph(text).expect("well-formed input");

    println!("parsed {} vertices, {} edges", g.vertex_count(), g.edge_count());
    for e in g.edges() {
        println!("  {}: {} -> {}", e.id.as_str(), e.source.as_str(), e.range.as_str());
    }

    println!("\nround-tripped file form:\n{}", g.to_file_string());
    println!("DOT form (pipe into `dot -Tsvg`):\n{}", g.emit_dot());

    // Parse errors carry the offending line number.
    let bad = "vertices: 2\ne13: 1 -> 3\n";
    println!("error example: {}", parse_graph(bad).unwrap_err());
}
