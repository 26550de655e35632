//! CSV emission. Floats use Rust's shortest round-trip formatting.

pub const SCHEMA: &str = "# divcorr-schema v1";

pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    notes: Vec<String>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new(), notes: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    /// A trailing `# ...` line.
    pub fn note(&mut self, s: String) {
        self.notes.push(s);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(SCHEMA);
        out.push('\n');
        out.push_str(&self.header.join(","));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        for n in &self.notes {
            out.push_str("# ");
            out.push_str(n);
            out.push('\n');
        }
        out
    }
}

pub fn f(x: f64) -> String {
    format!("{x:?}")
}

pub fn i<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}
