//! The independent circle rotations that every graph algebra admits.
//!
//! Sending `S_e ↦ S_e ⊗ z_e` — one unitary circle generator per edge —
//! always satisfies the defining relations. For rigid graphs this diagonal
//! action is the *entire* linear quantum symmetry; here we build it and let
//! the checker confirm each relation symbolically. Run with
//! `cargo run --example diagonal_action`.

use qsym::action::{diagonal_action, verify_action};
use qsym::families::make_family;

fn main() {
    let g = make_family("Gamma0", &[]).expect("registry instance").graph;
    let spec = diagonal_action(&g);

    println!("images on the {} edges:", g.edge_count());
    for (e, image) in &spec.images {
        let terms: Vec<String> = image
            .iter()
            .map(|(f, w)| format!("S_{} ⊗ {w}", f.as_str()))
            .collect();
        println!("  α(S_{}) = {}", e.as_str(), terms.join(" + "));
    }

    let report = verify_action(&g, &spec).expect("connected graph");
    println!("\nrelation checks:");
    for check in &report.checks {
        println!("  {} {}", if check.ok { "ok  " } else { "FAIL" }, check.relation);
    }
    println!("passed: {}", report.passed);
}
