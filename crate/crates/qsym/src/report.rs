//! JSON report envelope shared by every command-line entry point.
//!
//! Every machine-readable command answer is wrapped in a [`Report`]: the
//! command name, a digest of the input file (when there is one), the result
//! payload, and the wall-clock time. Field order is fixed by declaration
//! order, so two runs over identical inputs emit byte-identical JSON once
//! `elapsed_ms` is masked — the property golden-file tests rely on.

use serde::Serialize;
use sha2::{Digest, Sha256};

// --- input provenance -----------------------------------------------------------------

/// Where the input came from and what it hashed to.
#[derive(Clone, Debug, Serialize)]
pub struct InputStamp {
    /// Path as given on the command line.
    pub path: String,
    /// SHA-256 of the raw file bytes, lowercase hex.
    pub sha256: String,
}

impl InputStamp {
    pub fn new(path: impl Into<String>, bytes: &[u8]) -> Self {
        InputStamp { path: path.into(), sha256: sha256_hex(bytes) }
    }
}

/// Lowercase-hex SHA-256 of a byte string.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

// --- envelope -------------------------------------------------------------------------

/// Wire envelope for one command invocation.
#[derive(Clone, Debug, Serialize)]
pub struct Report<T: Serialize> {
    /// Command name as dispatched (e.g. `"certify"`).
    pub command: String,
    /// Input provenance; absent for commands that read no file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputStamp>,
    /// Command-specific payload.
    pub result: T,
    /// Wall-clock milliseconds; masked in golden-file comparisons.
    pub elapsed_ms: u128,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &str, input: Option<InputStamp>, result: T, elapsed_ms: u128) -> Self {
        Report { command: command.to_owned(), input, result, elapsed_ms }
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

// ----------------------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_matches_the_reference_vector() {
        // SHA-256("abc") is a published test vector.
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn envelope_fields_keep_their_order() {
        let r = Report::new(
            "dim",
            Some(InputStamp::new("g.graph", b"vertices: 1\n")),
            serde_json::json!({ "dimension": 1 }),
            7,
        );
        let json = r.to_json();
        let cmd = json.find("\"command\"").unwrap();
        let input = json.find("\"input\"").unwrap();
        let result = json.find("\"result\"").unwrap();
        let elapsed = json.find("\"elapsed_ms\"").unwrap();
        assert!(cmd < input && input < result && result < elapsed);
    }

    #[test]
    fn inputless_reports_omit_the_stamp() {
        let r = Report::new("selfcheck", None, serde_json::json!({}), 0);
        assert!(!r.to_json().contains("\"input\""));
    }
}
