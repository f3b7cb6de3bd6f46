//! Matrix files and report serialization.
//!
//! A matrix file is a JSON object `{"n": <int>, "entries": [[[re, im], ...], ...]}`
//! stored row-major. Matrices are written with the shortest decimal that
//! parses back to the same bits, so a write/parse round trip is exact.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;
use wradius_core::{Complex64, ComplexMatrix};

use crate::error::{HarnessError, Result};

/// Parses a matrix document, naming the offending row/column on failure.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| HarnessError::Parse(format!("line {} column {}: {}", e.line(), e.column(), e)))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| HarnessError::Parse("top level must be an object with \"n\" and \"entries\"".into()))?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| HarnessError::Parse("\"n\" must be a positive integer".into()))? as usize;
    if n == 0 {
        return Err(HarnessError::Parse("\"n\" must be a positive integer".into()));
    }
    let rows = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| HarnessError::Parse("\"entries\" must be an array of rows".into()))?;
    if rows.len() != n {
        return Err(HarnessError::Parse(format!("\"entries\" has {} rows, expected n = {n}", rows.len())));
    }
    let mut data = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| HarnessError::Parse(format!("row {i} is not an array")))?;
        if row.len() != n {
            return Err(HarnessError::Parse(format!("row {i} has {} entries, expected n = {n}", row.len())));
        }
        for (j, entry) in row.iter().enumerate() {
            data.push(parse_entry(entry).map_err(|msg| HarnessError::Parse(format!("row {i}, column {j}: {msg}")))?);
        }
    }
    Ok(ComplexMatrix::new(n, data)?)
}

fn parse_entry(v: &Value) -> std::result::Result<Complex64, String> {
    let pair = v.as_array().filter(|p| p.len() == 2).ok_or("entry must be a [re, im] pair")?;
    let part = |k: usize, name: &str| -> std::result::Result<f64, String> {
        let x = pair[k].as_f64().ok_or_else(|| format!("{name} part is not a number"))?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(format!("{name} part is not finite"))
        }
    };
    Ok(Complex64::new(part(0, "real")?, part(1, "imaginary")?))
}

/// Canonical text form: one matrix row per line.
pub fn write_matrix(m: &ComplexMatrix) -> String {
    let n = m.dim();
    let mut out = format!("{{\n  \"n\": {n},\n  \"entries\": [\n");
    for i in 0..n {
        out.push_str("    [");
        for j in 0..n {
            let z = m.get(i, j);
            if j > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "[{:?}, {:?}]", z.re, z.im);
        }
        out.push(']');
        if i + 1 < n {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn read_matrix_file(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_matrix(&text).map_err(|e| match e {
        HarnessError::Parse(msg) => HarnessError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| HarnessError::io(parent, e))?;
    }
    std::fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}

/// Serializes a matrix in the file layout `{"n", "entries"}` for embedding in reports.
pub fn serialize_entries<S: serde::Serializer>(m: &ComplexMatrix, ser: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let n = m.dim();
    let entries: Vec<Vec<[f64; 2]>> = (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j)).map(|z| [z.re, z.im]).collect())
        .collect();
    let mut st = ser.serialize_struct("Matrix", 2)?;
    st.serialize_field("n", &n)?;
    st.serialize_field("entries", &entries)?;
    st.end()
}

/// `x` with 17 significant digits in scientific notation.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pretty JSON whose finite floats carry 17 significant digits.
pub fn to_report_json<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17Formatter(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

struct Sig17Formatter<'a>(PrettyFormatter<'a>);

impl Formatter for Sig17Formatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(sig17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}
