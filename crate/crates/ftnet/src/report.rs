//! Line-oriented `key: value` run reports.

use std::fmt;

use ftnet_core::{ArcId, Instance};
use sha2::{Digest, Sha256};

use crate::format::canonical_body;

/// Content hash of the canonical instance text (annotations excluded).
pub fn fingerprint(inst: &Instance) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(canonical_body(inst).as_bytes())))
}

pub fn id_list(ids: &[ArcId]) -> String {
    let parts: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Ordered fields; `wall_time_ms` is the only one that varies between runs
/// on identical input.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunReport {
    fields: Vec<(String, String)>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        let mut r = RunReport::default();
        r.push("command", command);
        r
    }

    pub fn push(&mut self, key: &str, value: impl fmt::Display) {
        self.fields.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn fields(&self) -> &[(String, String)] {
        &self.fields
    }

    pub fn parse(text: &str) -> RunReport {
        let fields = text
            .lines()
            .filter_map(|l| l.split_once(": "))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        RunReport { fields }
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.fields {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ftnet_core::{InstanceBuilder, Mode};

    #[test]
    fn render_and_parse_back() {
        let mut r = RunReport::new("solve 1ftp a.toml");
        r.push("cost", 2);
        r.push("arcs", id_list(&[0, 1]));
        let back = RunReport::parse(&r.to_string());
        assert_eq!(back, r);
        assert_eq!(back.get("arcs"), Some("[0, 1]"));
    }

    #[test]
    fn fingerprint_ignores_nothing_but_annotations() {
        let a = InstanceBuilder::new(Mode::Ftp { k: 1 }).arc("s", "t", 1, true).build().unwrap();
        let b = InstanceBuilder::new(Mode::Ftp { k: 1 }).arc("s", "t", 2, true).build().unwrap();
        assert_eq!(fingerprint(&a), fingerprint(&a.clone()));
        assert_ne!(fingerprint(&a), fingerprint(&b));
        assert!(fingerprint(&a).starts_with("sha256:"));
    }
}
