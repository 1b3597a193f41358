//! The canonical state τ and the diagonal F matrix.
//!
//! τ evaluates two-step monomials by `τ(S_e S_f*) = δ_{ef}` and normalizes
//! sink projections to 1; the matrix `F_{ef} = τ(S_e* S_f)` computed through
//! the rewriting engine comes out diagonal with nonzero diagonal — the
//! invertibility that the whole linear-action setup rests on. Run with
//! `cargo run --example state_and_f_matrix`.

use qsym::algebra::{f_matrix, normal_form, parse_word, tau};
use qsym::families::make_family;

fn main() {
    let g = make_family("T", &[]).expect("registry instance").graph;

    for text in ["S.e11 S*.e11", "S.e11 S*.e12", "S*.e11 S.e11", "p.2"] {
        let nf = normal_form(&g, &parse_word(text).unwrap()).unwrap();
        let value = tau(&g, &nf).unwrap();
        println!("τ({text}) = {value}");
    }

    for name in ["T", "Gamma0", "L_bar"] {
        let params: &[usize] = if name == "L_bar" { &[2] } else { &[] };
        let g = make_family(name, params).expect("registry instance").graph;
        let f = f_matrix(&g).expect("state defined on all two-step monomials");
        println!("\nF matrix of {name} (edge order {:?}):", ids(&f.edge_order));
        for row in &f.entries {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            println!("  [{}]", cells.join(" "));
        }
        println!("diagonal and invertible: {}", f.is_diagonal_invertible());
    }
}

fn ids(edges: &[qsym::graph::EdgeId]) -> Vec<&str> {
    edges.iter().map(|e| e.as_str()).collect()
}
