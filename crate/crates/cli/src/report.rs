use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// An output file in one of the library's text formats.
pub struct Artifact {
    pub text: String,
    pub path: Option<PathBuf>,
}

/// What a command prints: report lines, their JSON mirror, an optional
/// artifact and a final self-check.
#[derive(Default)]
pub struct Report {
    lines: Vec<String>,
    json: Map<String, Value>,
    artifact: Option<Artifact>,
    check: Option<(bool, String)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.json.insert("command".into(), command.into());
        r
    }

    pub fn line(&mut self, s: impl Into<String>) -> &mut Self {
        self.lines.push(s.into());
        self
    }

    pub fn field(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.json.insert(key.into(), v.into());
        self
    }

    pub fn artifact(&mut self, text: String, path: Option<PathBuf>) -> &mut Self {
        self.artifact = Some(Artifact { text, path });
        self
    }

    pub fn check(&mut self, pass: bool, detail: impl Into<String>) -> &mut Self {
        self.check = Some((pass, detail.into()));
        self
    }

    /// Writes the report; returns whether the self-check passed.
    pub fn emit(mut self, format: Format) -> anyhow::Result<bool> {
        let mut on_stdout = None;
        if let Some(a) = self.artifact.take() {
            match &a.path {
                Some(p) => {
                    fs::write(p, &a.text).with_context(|| format!("writing {}", p.display()))?;
                    self.json.insert("output".into(), p.display().to_string().into());
                }
                None => {
                    self.json.insert("artifact".into(), a.text.clone().into());
                    on_stdout = Some(a.text);
                }
            }
        }
        let pass = self.check.as_ref().is_none_or(|c| c.0);
        if let Some((ok, detail)) = &self.check {
            self.json.insert("check".into(), serde_json::json!({ "pass": ok, "detail": detail }));
        }
        let mut out = std::io::stdout().lock();
        match format {
            Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&Value::Object(self.json))?)?,
            Format::Text => {
                if let Some(t) = &on_stdout {
                    write!(out, "{t}")?;
                }
                // after an artifact on stdout, report lines are comments so the
                // stream still parses
                let prefix = if on_stdout.is_some() { "# " } else { "" };
                for l in &self.lines {
                    writeln!(out, "{prefix}{l}")?;
                }
                if let Some((ok, detail)) = &self.check {
                    writeln!(out, "{prefix}{}: {detail}", if *ok { "PASS" } else { "FAIL" })?;
                }
            }
        }
        Ok(pass)
    }
}
