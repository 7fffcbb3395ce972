use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{Format, RunConfig};
use crate::error::Result;

/// Collects one command's output. CSV gets `#` header comments; JSON gets a
/// `meta` object carrying the same information.
pub(crate) struct Sink {
    path: Option<PathBuf>,
    format: Format,
    comments: Vec<String>,
    meta: serde_json::Map<String, serde_json::Value>,
    body: String,
}

impl Sink {
    pub fn new(cfg: &RunConfig, command: &str) -> Result<Self> {
        let mut s = Self::raw(cfg.output.path.as_deref(), cfg.output.format)?;
        s.comments.push(format!(
            "parkcharge {command} seed={} config_sha256={}",
            cfg.simulation.seed,
            cfg.digest()
        ));
        s.meta.insert("command".into(), command.into());
        s.meta.insert("seed".into(), cfg.simulation.seed.into());
        s.meta.insert("config_sha256".into(), cfg.digest().into());
        Ok(s)
    }

    pub fn raw(path: Option<&Path>, format: Format) -> Result<Self> {
        Ok(Self {
            path: path.map(Path::to_path_buf),
            format,
            comments: Vec::new(),
            meta: serde_json::Map::new(),
            body: String::new(),
        })
    }

    pub fn comment(&mut self, line: &str) {
        self.comments.push(line.to_string());
    }

    pub fn csv<H, R>(&mut self, header: &[H], rows: R) -> Result<()>
    where
        H: AsRef<str>,
        R: IntoIterator<Item = Vec<String>>,
    {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header.iter().map(AsRef::as_ref))?;
        for row in rows {
            w.write_record(&row)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        self.body = String::from_utf8(bytes).expect("csv output is utf-8");
        Ok(())
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, value: &T) -> Result<()> {
        let mut meta = self.meta.clone();
        meta.insert("comments".into(), self.comments.clone().into());
        let doc = serde_json::json!({ "meta": meta, "data": value });
        self.body = serde_json::to_string_pretty(&doc)? + "\n";
        Ok(())
    }

    pub fn finish(self) -> Result<()> {
        let mut text = String::new();
        if self.format == Format::Csv {
            for c in &self.comments {
                text.push_str("# ");
                text.push_str(c);
                text.push('\n');
            }
        }
        text.push_str(&self.body);
        match &self.path {
            Some(p) => std::fs::write(p, text)?,
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}
