//! Report emission: pretty JSON or CSV, to stdout or `--out`.

use std::io::Write;

use horoboundary::horo::BoundaryFunction;
use horoboundary::pipeline::{Format, RunConfig};
use horoboundary::{Ball, PointedSpace};
use serde_json::{json, Value};

/// Rows for CSV output.
pub struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.rows.push(cells.to_vec());
    }

    fn render(&self) -> std::io::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner().map_err(|e| e.into_error())
    }
}

pub fn emit(cfg: &RunConfig, report: &Value, csv: impl FnOnce() -> Csv) -> std::io::Result<()> {
    let bytes = match cfg.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => csv().render()?,
    };
    match &cfg.out {
        Some(path) => std::fs::write(path, bytes),
        None => std::io::stdout().lock().write_all(&bytes),
    }
}

/// Index, geodesic word and normal form of a ball element.
pub fn element_json(ball: &Ball, p: usize) -> Value {
    json!({
        "index": p,
        "word": ball.gens().spell(&ball.geodesic_to_index(p)).to_string(),
        "element": ball.element(p).to_string(),
        "norm": ball.norm(p),
    })
}

pub fn function_json<S: PointedSpace + ?Sized>(
    space: &S,
    f: &BoundaryFunction,
    name: impl Fn(usize) -> Value,
) -> Value {
    json!({
        "values": f.function.values(),
        "provenance": f.provenance,
        "certified": f.certified,
        "source": name(f.source),
        "source_norm": space.norm(f.source),
    })
}
