//! Deterministic report rendering: CSV and JSON with a fixed field order
//! and floats printed with 17 significant digits, so identical runs
//! produce byte-identical files and every value round-trips exactly.

use num_complex::Complex64;

/// 17 significant decimal digits: enough to reproduce any f64 exactly.
pub fn g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// One rectangular CSV section: a header plus zero or more rows.
pub struct CsvSection {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvSection {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Render sections as CSV, blank-line separated. An empty section is a
/// valid header-only table.
pub fn render_csv(sections: &[CsvSection]) -> String {
    let mut out = String::new();
    for (i, sec) in sections.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&sec.header.join(","));
        out.push('\n');
        for row in &sec.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
    }
    out
}

/// Minimal deterministic JSON value with insertion-ordered objects.
pub enum Json {
    Float(f64),
    Int(i64),
    Str(String),
    Complex(Complex64),
    Array(Vec<Json>),
    Object(Vec<(String, Json)>),
}

impl Json {
    pub fn object(fields: Vec<(&str, Json)>) -> Json {
        Json::Object(
            fields
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        )
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        self.write(&mut s);
        s
    }

    fn write(&self, out: &mut String) {
        match self {
            Json::Float(x) => out.push_str(&g17(*x)),
            Json::Int(n) => out.push_str(&n.to_string()),
            Json::Str(s) => {
                out.push('"');
                for ch in s.chars() {
                    match ch {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            Json::Complex(z) => {
                out.push('[');
                out.push_str(&g17(z.re));
                out.push(',');
                out.push_str(&g17(z.im));
                out.push(']');
            }
            Json::Array(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Json::Object(fields) => {
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    Json::Str(k.clone()).write(out);
                    out.push(':');
                    v.write(out);
                }
                out.push('}');
            }
        }
    }
}

pub fn complex_row(m: usize, z: Complex64) -> Vec<String> {
    vec![m.to_string(), g17(z.re), g17(z.im)]
}
