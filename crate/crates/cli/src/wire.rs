//! Reading inputs and encoding outputs. Every number written by the tool goes through
//! [`num`], which keeps 17 significant digits.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

/// Everything that ends a run early, with its exit status.
#[derive(Debug)]
pub enum Failure {
    Io(String),
    /// Input does not match the expected schema; the message carries the location.
    Schema(String),
    Math(cuspidal::Error),
    /// Harness rows that did not pass.
    Harness(usize),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) | Failure::Harness(_) => 1,
            Failure::Schema(_) => 2,
            Failure::Math(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Io(m) => write!(f, "i/o error: {m}"),
            Failure::Schema(m) => write!(f, "schema error: {m}"),
            Failure::Math(e) => write!(f, "{}: {e}", e.name()),
            Failure::Harness(n) => write!(f, "harness: {n} invariant(s) failed"),
        }
    }
}

impl From<cuspidal::Error> for Failure {
    fn from(e: cuspidal::Error) -> Self {
        Failure::Math(e)
    }
}

pub type Outcome<T> = Result<T, Failure>;

/// Parses `path` (or standard input for `-`) as JSON. Syntax errors report line and column.
pub fn read_json(path: &Path) -> Outcome<Value> {
    let text = if path == Path::new("-") {
        io::read_to_string(io::stdin()).map_err(|e| Failure::Io(format!("stdin: {e}")))?
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Schema(format!("{}: {e}", path.display())))
}

/// Deserializes `value`, reporting the JSON path of the first offending field.
pub fn parse<T: DeserializeOwned>(value: Value, origin: &str) -> Outcome<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let at = e.path().to_string();
        Failure::Schema(format!("{origin}: at `{at}`: {}", e.inner()))
    })
}

pub fn schema(origin: &str, at: &str, msg: impl fmt::Display) -> Failure {
    Failure::Schema(format!("{origin}: at `{at}`: {msg}"))
}

pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Pretty JSON whose floats use [`num`].
struct Digits17(PrettyFormatter<'static>);

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, x: f64) -> io::Result<()> {
        w.write_all(num(x).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, x: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(x))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .expect("report types serialize to JSON");
    buf.push(b'\n');
    buf
}

pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Outcome<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| Failure::Io(e.to_string());
    w.write_record(header).map_err(io_err)?;
    for row in rows {
        w.write_record(row).map_err(io_err)?;
    }
    w.into_inner().map_err(|e| Failure::Io(e.to_string()))
}

/// Writes to `out`, or standard output when `None`.
pub fn emit(out: Option<&Path>, bytes: &[u8]) -> Outcome<()> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(format!("stdout: {e}")))
        }
    }
}
