//! Output documents: every command emits one `OutputDoc` whose metadata
//! (tool version, precision, seed, command echo) is always present. JSON
//! documents round-trip through serde; CSV and SVG carry the metadata as
//! comment headers.

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "nexp-doc/1";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ToolMeta {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct OutputDoc {
    pub schema: String,
    pub tool: ToolMeta,
    pub precision_bits: u32,
    pub seed: u64,
    /// Echo of the resolved command and its inputs.
    pub command: String,
    pub format: String,
    pub payload: serde_json::Value,
}

impl OutputDoc {
    pub fn new(command: String, format: &str, precision_bits: u32, seed: u64, payload: serde_json::Value) -> Self {
        OutputDoc {
            schema: SCHEMA.to_string(),
            tool: ToolMeta {
                name: "nexp".to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
            precision_bits,
            seed,
            command,
            format: format.to_string(),
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// Metadata block for text formats, one `#`-prefixed line each.
    pub fn meta_comment(&self, prefix: &str) -> String {
        format!(
            "{prefix} schema={} tool={}/{} precision_bits={} seed={} command={}\n",
            self.schema, self.tool.name, self.tool.version, self.precision_bits, self.seed, self.command
        )
    }

    /// CSV document: metadata comment plus a `body` the caller provides.
    pub fn to_csv(&self, body: &str) -> String {
        format!("{}{}", self.meta_comment("#"), body)
    }

    /// SVG document: XML metadata comment spliced after the opening tag.
    pub fn to_svg(&self, svg_body: &str) -> String {
        match svg_body.find('\n') {
            Some(i) => {
                let (head, rest) = svg_body.split_at(i + 1);
                format!("{head}<!--{}-->\n{rest}", self.meta_comment("").trim_end())
            }
            None => svg_body.to_string(),
        }
    }
}
