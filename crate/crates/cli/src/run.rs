//! Per-run output directory: `<root>/<command>-<UTC timestamp>/` holding
//! `manifest.txt`, tables, reports and `errors.txt`.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use chrono::Utc;

pub struct RunDir {
    path: PathBuf,
    errors: Vec<(String, String)>,
}

impl RunDir {
    /// Creates a fresh directory; a numeric suffix avoids collisions between
    /// runs started within the same millisecond.
    pub fn create(root: &Path, command: &str) -> io::Result<Self> {
        fs::create_dir_all(root)?;
        let stamp = Utc::now().format("%Y%m%dT%H%M%S%.3fZ");
        let base = format!("{command}-{stamp}");
        let mut path = root.join(&base);
        let mut n = 1;
        loop {
            match fs::create_dir(&path) {
                Ok(()) => break,
                Err(e) if e.kind() == io::ErrorKind::AlreadyExists => {
                    path = root.join(format!("{base}-{n}"));
                    n += 1;
                }
                Err(e) => return Err(e),
            }
        }
        Ok(Self { path, errors: Vec::new() })
    }

    pub fn file(&self, name: &str) -> PathBuf {
        self.path.join(name)
    }

    pub fn write(&self, name: &str, contents: impl AsRef<[u8]>) -> io::Result<PathBuf> {
        let p = self.file(name);
        if let Some(parent) = p.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&p, contents)?;
        Ok(p)
    }

    pub fn write_manifest(&self, command: &str, settings: &str, argv: &[String]) -> io::Result<()> {
        let mut m = String::new();
        m.push_str(&format!("# {} {}\n", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")));
        m.push_str(&format!("# library ambiguity-lab {}\n", ambiguity_lab::VERSION));
        m.push_str(&format!("# command: {command}\n"));
        m.push_str(&format!("# argv: {}\n", argv.join(" ")));
        m.push_str(&format!("# started: {}\n", Utc::now().to_rfc3339()));
        m.push_str("# Rerun with: ambiguity-lab --config <this file> ");
        m.push_str(command);
        m.push('\n');
        m.push_str(settings);
        self.write("manifest.txt", m).map(|_| ())
    }

    /// Records a failed step; `finish` turns any entry into a nonzero exit.
    pub fn error(&mut self, label: impl Into<String>, message: impl ToString) {
        let label = label.into();
        let message = message.to_string().replace('\n', " ");
        eprintln!("error [{label}]: {message}");
        self.errors.push((label, message));
    }

    /// Writes `errors.txt` (header only when clean) and returns the exit code.
    pub fn finish(self) -> io::Result<i32> {
        let mut s = String::from("label\tmessage\n");
        for (l, m) in &self.errors {
            s.push_str(&format!("{l}\t{m}\n"));
        }
        self.write("errors.txt", s)?;
        println!("outputs: {}", self.path.display());
        Ok(i32::from(!self.errors.is_empty()))
    }
}
