use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cx {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl Cx {
    pub fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }
}

/// One evaluated point. A document holds one point at top level and, for
/// sweeps, every point in `grid`.
#[derive(Debug, Clone, Serialize)]
pub struct Point {
    pub inputs: Map<String, Value>,
    pub value: Cx,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<Cx>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
}

impl Point {
    pub fn new(inputs: Map<String, Value>, value: Cx) -> Self {
        Self { inputs, value, exact: None, stderr: None, tail_bound: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub module: &'static str,
    pub paper_eq: &'static str,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Document {
    pub schema: u32,
    pub quantity: &'static str,
    #[serde(flatten)]
    pub point: Point,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<String>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub details: Map<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub grid: Vec<Point>,
    pub meta: Meta,
}

impl Document {
    pub fn new(quantity: &'static str, module: &'static str, formula: &'static str, point: Point) -> Self {
        Self {
            schema: SCHEMA,
            quantity,
            point,
            normalization: None,
            details: Map::new(),
            grid: Vec::new(),
            meta: Meta { module, paper_eq: formula, runtime_ms: 0 },
        }
    }

    pub fn detail(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.details.insert(key.to_owned(), v.into());
        self
    }

    fn rows(&self) -> Vec<&Point> {
        if self.grid.is_empty() {
            vec![&self.point]
        } else {
            self.grid.iter().collect()
        }
    }

    /// One row per point with a header; input columns are the union of keys.
    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        let rows = self.rows();
        let mut keys: Vec<&String> = rows.iter().flat_map(|p| p.inputs.keys()).collect();
        keys.sort();
        keys.dedup();
        let mut w = csv::Writer::from_path(path)?;
        let mut header = vec!["quantity".to_owned()];
        header.extend(keys.iter().map(|k| k.to_string()));
        header.extend(["re", "im", "exact", "stderr_re", "stderr_im", "tail_bound"].map(String::from));
        w.write_record(&header)?;
        let num = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        for p in rows {
            let mut rec = vec![self.quantity.to_owned()];
            for k in &keys {
                rec.push(match p.inputs.get(*k) {
                    Some(Value::String(s)) => s.clone(),
                    Some(v) => v.to_string(),
                    None => String::new(),
                });
            }
            rec.push(p.value.re.to_string());
            rec.push(p.value.im.to_string());
            rec.push(p.exact.clone().unwrap_or_default());
            rec.push(num(p.stderr.map(|s| s.re)));
            rec.push(num(p.stderr.map(|s| s.im)));
            rec.push(num(p.tail_bound));
            w.write_record(&rec)?;
        }
        w.flush()
    }

    pub fn print(&self) -> std::io::Result<()> {
        let mut out = std::io::stdout().lock();
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)
    }
}
