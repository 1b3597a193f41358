//! Tour of the named graph families and their expected classifications.
//!
//! Each family instance carries the verdict the certifier should reach and,
//! where one is known, the standard C*-algebra the graph algebra presents.
//! Run with `cargo run --example families_tour`.

use qsym::certifier::{certify, CertifyOptions};
use qsym::families::{list_families, make_family};

fn main() {
    println!("{:<10} {:>5} {:>5}  {:<24} {}", "family", "|V|", "|E|", "verdict", "algebra");
    println!("{}", "-".repeat(88));

    let instances: Vec<(&str, Vec<usize>)> = vec![
        ("P", vec![4]),
        ("T", vec![]),
        ("L_odd", vec![2]),
        ("L_odd", vec![5]),
        ("L_bar", vec![2]),
        ("L_bar", vec![4]),
        ("M", vec![2]),
        ("K2", vec![]),
        ("L11", vec![]),
        ("Gamma0", vec![]),
        ("P23", vec![]),
        ("L2prime", vec![]),
        ("L3sup2", vec![]),
    ];

    let opts = CertifyOptions { record_trace: false, ..CertifyOptions::default() };
    for (name, params) in instances {
        let spec = make_family(name, &params).expect("registry instance");
        let cert = certify(&spec.graph, &opts).expect("connected fixture");
        assert_eq!(cert.verdict, spec.expected_verdict, "{name} diverged");
        let shown = if params.is_empty() {
            name.to_owned()
        } else {
            format!("{name}({})", params[0])
        };
        println!(
            "{:<10} {:>5} {:>5}  {:<24} {}",
            shown,
            spec.graph.vertex_count(),
            spec.graph.edge_count(),
            cert.verdict.to_string(),
            spec.algebra_label
        );
    }

    println!("\nregistry arities and backing results:");
    for info in list_families() {
        println!("  {:<8} arity {}  — {}", info.name, info.arity, info.citation);
    }
}
