//! Output formats and the metadata header every output carries. Headers
//! hold only the command, its parameters and the tool version, so equal
//! inputs give byte-identical files.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

pub struct Meta {
    command: &'static str,
    params: BTreeMap<String, String>,
}

impl Meta {
    pub fn new(command: &'static str) -> Self {
        Meta {
            command,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    fn line(&self) -> String {
        let mut s = format!("wtower {} {}", env!("CARGO_PKG_VERSION"), self.command);
        for (k, v) in &self.params {
            s.push_str(&format!(" {k}={v}"));
        }
        s
    }
}

pub fn json(meta: &Meta, result: serde_json::Value) -> String {
    let value = serde_json::json!({
        "meta": {
            "tool": "wtower",
            "version": env!("CARGO_PKG_VERSION"),
            "command": meta.command,
            "parameters": meta.params,
        },
        "result": result,
    });
    let mut s = serde_json::to_string_pretty(&value).expect("json serializes");
    s.push('\n');
    s
}

/// `#`-prefixed header line, then the body.
pub fn text(meta: &Meta, body: &str) -> String {
    format!("# {}\n{body}\n", meta.line())
}

pub fn dot(meta: &Meta, body: &str) -> String {
    format!("// {}\n{body}", meta.line())
}

pub fn emit(path: Option<&Path>, body: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, body),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()
        }
    }
}
