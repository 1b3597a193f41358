//! Refuting rigidity on a graph with parallel edges.
//!
//! Two parallel edges admit a *doubling* symmetry: a two-block coefficient
//! algebra whose second block swaps the parallel isometries. No family of
//! independent circle rotations contains a swap, so once the relations
//! check out, the quantum symmetry is strictly larger than the rigid
//! target. Run with `cargo run --example doubling_action`.

use qsym::action::{doubling_action, verify_action};
use qsym::families::make_family;
use qsym::graph::EdgeId;

fn main() {
    // Loop at 1, double edge 1 ⇉ 2: presents the quantum projective plane.
    let spec = make_family("L2prime", &[]).expect("registry instance");
    let g = spec.graph;
    println!("graph {} — {}", spec.name, spec.algebra_label);

    let action = doubling_action(&g, &EdgeId::new("e12a"), &EdgeId::new("e12b"))
        .expect("the two edges are parallel");

    println!("\nimages (slot 1, slot 2):");
    for (e, image) in &action.images {
        let terms: Vec<String> = image
            .iter()
            .map(|(f, w)| format!("S_{} ⊗ {w}", f.as_str()))
            .collect();
        println!("  α(S_{}) = {}", e.as_str(), terms.join(" + "));
    }

    // Every relation holds — in particular the per-edge identities, whose
    // proof is exactly the cancellation of all cross terms between the two
    // parallel isometries.
    let report = verify_action(&g, &action).expect("connected graph");
    for check in &report.checks {
        println!("{} {}", if check.ok { "ok  " } else { "FAIL" }, check.relation);
    }
    println!("passed: {}", report.passed);

    // Asking for a doubling on non-parallel edges is refused up front.
    let err = doubling_action(&g, &EdgeId::new("e11"), &EdgeId::new("e12a")).unwrap_err();
    println!("\nnon-parallel pair: {err}");
}
