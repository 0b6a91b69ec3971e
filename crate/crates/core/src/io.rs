//! JSON family files: `{"points": [...], "blocks": [[...], ...]}`.
//!
//! Writers emit the canonical compact form followed by a newline, so two
//! equal families always produce identical bytes. Readers accept labels
//! and blocks in any order and canonicalize.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::family::SetFamily;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    points: Vec<String>,
    blocks: Vec<Vec<usize>>,
}

pub fn to_json(family: &SetFamily) -> String {
    let file = FamilyFile {
        points: family.labels().iter().map(|l| l.to_string()).collect(),
        blocks: family
            .blocks()
            .iter()
            .map(|b| b.indices().collect())
            .collect(),
    };
    let mut s = serde_json::to_string(&file).expect("family serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<SetFamily> {
    let file: FamilyFile = serde_json::from_str(text)?;
    SetFamily::new(file.points, file.blocks)
}

pub fn read_family(path: impl AsRef<Path>) -> Result<SetFamily> {
    from_json(&fs::read_to_string(path)?)
}

pub fn write_family(family: &SetFamily, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_json(family))?;
    Ok(())
}
