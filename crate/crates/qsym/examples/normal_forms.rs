//! Reduce *-algebra words to their normal form.
//!
//! Generators: a projection `p.v` per vertex and a partial isometry `S.e`
//! per edge, subject to `S_e* S_e = p_{r(e)}` and, at every non-sink vertex,
//! `p_v = Σ_{s(f)=v} S_f S_f*`. Every word reduces to a rational combination
//! of monomials `S_γ S_μ*` over paths with a common range. Run with
//! `cargo run --example normal_forms`.

use qsym::algebra::{normal_form, parse_word};
use qsym::graph::parse_graph;

fn main() {
    // The loop-plus-edge graph: infinite-dimensional, still perfectly
    // rewritable.
    let g = parse_graph("vertices: 2\ne11: 1 -> 1\ne12: 1 -> 2\n").expect("well-formed");

    let words = [
        "S*.e11 S.e11",          // isometry relation: collapses to p.1
        "S.e11 S*.e11",          // a genuine range projection, already normal
        "p.1",                   // expands through the fan-out relation
        "S*.e12 S.e11",          // distinct edges annihilate
        "S.e11 S.e11 S.e12",     // a longer path survives as one monomial
        "p.2 S*.e12",            // projections absorb into matching ranges
    ];

    for text in words {
        let atoms = parse_word(text).expect("parseable word");
        let nf = normal_form(&g, &atoms).expect("word over this graph");
        println!("{text:<22} =  {nf}");
    }

    // The same engine exposes the reduction's bilinearity directly.
    let a = normal_form(&g, &parse_word("S.e11 S*.e11").unwrap()).unwrap();
    let b = normal_form(&g, &parse_word("S.e12 S*.e12").unwrap()).unwrap();
    println!("\nsum of the two range projections at vertex 1:\n  {}", a.add(&b));
    println!("(equals p.1 expanded — the fan-out relation in action)");
}
