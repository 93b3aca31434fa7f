//! CSV output: one `#` metadata line of `key=value` pairs, a column header,
//! then rows. Numbers use Rust's shortest round-trip formatting, so equal
//! inputs give byte-identical files.

use std::fmt::Display;
use std::io::Write;

pub struct Table {
    meta: Vec<(String, String)>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

/// A CSV cell; non-finite floats print as `nan`, `inf`, `-inf`.
pub fn cell(x: impl Display) -> String {
    x.to_string().to_lowercase()
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Table {
        Table {
            meta: Vec::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Display) -> &mut Self {
        // spaces separate pairs in the header line
        self.meta.push((key.to_string(), value.to_string().replace(' ', "_")));
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns.len(), "row width");
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut s = String::from("#");
        for (k, v) in &self.meta {
            s.push_str(&format!(" {k}={v}"));
        }
        s.push('\n');
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }

    /// Writes to `path`, or to stdout when `path` is `None` or `-`.
    pub fn write(&self, path: Option<&str>) -> std::io::Result<()> {
        match path {
            None | Some("-") => std::io::stdout().lock().write_all(self.render().as_bytes()),
            Some(p) => std::fs::write(p, self.render()),
        }
    }
}

/// Splits a rendered CSV into its metadata pairs and column names.
pub fn read_header(text: &str) -> Option<(Vec<(String, String)>, Vec<String>)> {
    let mut lines = text.lines();
    let meta = lines.next()?.strip_prefix('#')?;
    let pairs = meta
        .split_whitespace()
        .filter_map(|p| p.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let cols = lines.next()?.split(',').map(str::to_string).collect();
    Some((pairs, cols))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_and_reads_back() {
        let mut t = Table::new(&["h", "norm"]);
        t.meta("command", "sweep-h").meta("note", "two words");
        t.row(vec![cell(0.1), cell(f64::NAN)]);
        t.row(vec![cell(0.05), cell(f64::INFINITY)]);
        let s = t.render();
        assert_eq!(s, "# command=sweep-h note=two_words\nh,norm\n0.1,nan\n0.05,inf\n");
        let (meta, cols) = read_header(&s).unwrap();
        assert_eq!(meta[1], ("note".to_string(), "two_words".to_string()));
        assert_eq!(cols, vec!["h", "norm"]);
        assert!(read_header("h,norm\n").is_none());
    }
}
