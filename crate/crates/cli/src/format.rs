//! Deterministic output encoding. Every float is rendered with 17
//! significant digits (`fmt_g17`), so identical inputs produce byte-identical
//! files; JSON is assembled by hand to keep key order and number formatting
//! fixed.

use pacs_wigner::phase_space::fmt_g17;

#[derive(Debug, Default)]
pub struct JsonObject {
    parts: Vec<String>,
}

impl JsonObject {
    pub fn new() -> Self {
        JsonObject::default()
    }

    pub fn num(mut self, key: &str, value: f64) -> Self {
        self.parts.push(format!("\"{}\":{}", key, fmt_g17(value)));
        self
    }

    pub fn int(mut self, key: &str, value: i64) -> Self {
        self.parts.push(format!("\"{}\":{}", key, value));
        self
    }

    pub fn boolean(mut self, key: &str, value: bool) -> Self {
        self.parts.push(format!("\"{}\":{}", key, value));
        self
    }

    pub fn string(mut self, key: &str, value: &str) -> Self {
        self.parts.push(format!("\"{}\":{}", key, quote(value)));
        self
    }

    pub fn raw(mut self, key: &str, value: &str) -> Self {
        self.parts.push(format!("\"{}\":{}", key, value));
        self
    }

    pub fn build(self) -> String {
        format!("{{{}}}", self.parts.join(","))
    }
}

pub fn json_array(items: &[String]) -> String {
    let mut out = String::from("[\n");
    for (i, item) in items.iter().enumerate() {
        out.push_str("  ");
        out.push_str(item);
        if i + 1 < items.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push(']');
    out.push('\n');
    out
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
