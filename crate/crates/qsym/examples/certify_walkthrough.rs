//! A full certification, step by step, then replayed.
//!
//! The certifier saturates a matrix of vanishing flags over the action
//! coefficients: each rule consumes already-proven facts and produces new
//! ones, and the recorded derivation replays from scratch against the same
//! rule semantics — a tamper-evident proof object. Run with
//! `cargo run --example certify_walkthrough`.

use qsym::certifier::{certify, replay, CertifyOptions, Flag, Verdict};
use qsym::families::make_family;

fn main() {
    // The wedge with a 2-cycle straightened out: three vertices, three
    // edges, rigid but only after genuine work (every rule family fires).
    let g = make_family("Gamma0", &[]).expect("registry instance").graph;

    let opts = CertifyOptions { record_trace: true, ..CertifyOptions::default() };
    let cert = certify(&g, &opts).expect("connected graph");
    println!("verdict: {}", cert.verdict);
    assert_eq!(cert.verdict, Verdict::Rigid);

    println!("\nderivation ({} steps):", cert.steps.len());
    for (i, step) in cert.steps.iter().enumerate() {
        let produced: Vec<String> = step
            .produced
            .iter()
            .map(|f| match f {
                Flag::Zero { row, col } => format!("q[{},{}]=0", row.as_str(), col.as_str()),
                Flag::One { edge } => format!("Q[{0},{0}]=1", edge.as_str()),
            })
            .collect();
        println!(
            "  {:>2}. {:<14} consumes {:>2} fact(s), produces {}",
            i + 1,
            step.rule.rule_name(),
            step.consumed.len(),
            produced.join(", ")
        );
        println!("      why: {}", step.justification);
    }

    // Replay the recorded steps against a fresh all-unknown state.
    let flags = replay(&g, &cert.steps, &opts).expect("derivation is valid");
    println!("\nreplay reaches the fixed point: {}", flags.all_offdiagonal_zero());

    // Tampering is caught: drop the first step and the second can no longer
    // justify its consumed facts.
    let tampered: Vec<_> = cert.steps.iter().skip(1).cloned().collect();
    match replay(&g, &tampered, &opts) {
        Err(e) => println!("tampered derivation rejected: {e:?}"),
        Ok(_) => unreachable!("a gapped derivation must not replay"),
    }

    for cite in &cert.citations {
        println!("\ncitation: {cite}");
    }
}
