//! Deterministic report emission: a small JSON writer and the sweep CSV
//! format.
//!
//! Reports are part of the tool's external contract — byte-identical output
//! for identical inputs — so serialization is done by hand rather than
//! through a generic serializer: keys appear exactly in insertion order,
//! floats are printed with 17 significant digits (`{:.16e}`, enough to
//! round-trip every finite `f64`), and the non-finite values that legitimately
//! occur (the `+inf` sentinel of an unbounded admissibility threshold) are
//! encoded as the strings `"+inf"` / `"-inf"` / `"nan"`.

use std::fmt::Write as _;

/// Formats a float under the report convention.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_owned()
    } else if v == f64::INFINITY {
        "+inf".to_owned()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_owned()
    } else {
        format!("{v:.16e}")
    }
}

/// Incremental JSON writer with explicit structure calls.
///
/// ```
/// use graphelliptic::report::JsonWriter;
/// let mut w = JsonWriter::new();
/// w.begin_object();
/// w.field_uint("schema", 1);
/// w.field_float("value", 0.5);
/// w.end_object();
/// assert_eq!(w.finish(), r#"{"schema":1,"value":5.0000000000000000e-1}"#);
/// ```
#[derive(Debug, Default)]
pub struct JsonWriter {
    buf: String,
    needs_comma: Vec<bool>,
    pending_key: bool,
}

impl JsonWriter {
    pub fn new() -> Self {
        Self {
            buf: String::new(),
            needs_comma: vec![false],
            pending_key: false,
        }
    }

    /// Comma bookkeeping before a value is placed.
    fn value_slot(&mut self) {
        if self.pending_key {
            self.pending_key = false;
            return;
        }
        if let Some(last) = self.needs_comma.last_mut() {
            if *last {
                self.buf.push(',');
            }
            *last = true;
        }
    }

    pub fn begin_object(&mut self) {
        self.value_slot();
        self.buf.push('{');
        self.needs_comma.push(false);
    }

    pub fn end_object(&mut self) {
        self.needs_comma.pop();
        self.buf.push('}');
    }

    pub fn begin_array(&mut self) {
        self.value_slot();
        self.buf.push('[');
        self.needs_comma.push(false);
    }

    pub fn end_array(&mut self) {
        self.needs_comma.pop();
        self.buf.push(']');
    }

    pub fn key(&mut self, name: &str) {
        if let Some(last) = self.needs_comma.last_mut() {
            if *last {
                self.buf.push(',');
            }
            *last = true;
        }
        self.push_escaped(name);
        self.buf.push(':');
        self.pending_key = true;
    }

    pub fn string(&mut self, s: &str) {
        self.value_slot();
        self.push_escaped(s);
    }

    /// Finite floats as `{:.16e}` JSON numbers; infinities and NaN as the
    /// sentinel strings.
    pub fn float(&mut self, v: f64) {
        self.value_slot();
        if v.is_finite() {
            write!(self.buf, "{v:.16e}").expect("writing to a String cannot fail");
        } else {
            self.push_escaped(&fmt_float(v));
        }
    }

    pub fn uint(&mut self, v: u64) {
        self.value_slot();
        write!(self.buf, "{v}").expect("writing to a String cannot fail");
    }

    pub fn boolean(&mut self, v: bool) {
        self.value_slot();
        self.buf.push_str(if v { "true" } else { "false" });
    }

    pub fn null(&mut self) {
        self.value_slot();
        self.buf.push_str("null");
    }

    pub fn field_str(&mut self, name: &str, v: &str) {
        self.key(name);
        self.string(v);
    }

    pub fn field_float(&mut self, name: &str, v: f64) {
        self.key(name);
        self.float(v);
    }

    pub fn field_uint(&mut self, name: &str, v: u64) {
        self.key(name);
        self.uint(v);
    }

    pub fn field_bool(&mut self, name: &str, v: bool) {
        self.key(name);
        self.boolean(v);
    }

    pub fn field_null(&mut self, name: &str) {
        self.key(name);
        self.null();
    }

    pub fn finish(self) -> String {
        self.buf
    }

    fn push_escaped(&mut self, s: &str) {
        self.buf.push('"');
        for c in s.chars() {
            match c {
                '"' => self.buf.push_str("\\\""),
                '\\' => self.buf.push_str("\\\\"),
                '\n' => self.buf.push_str("\\n"),
                '\r' => self.buf.push_str("\\r"),
                '\t' => self.buf.push_str("\\t"),
                c if (c as u32) < 0x20 => {
                    write!(self.buf, "\\u{:04x}", c as u32)
                        .expect("writing to a String cannot fail");
                }
                c => self.buf.push(c),
            }
        }
        self.buf.push('"');
    }
}

/// Header of the lambda-sweep CSV, fixed by the output contract.
pub const SWEEP_HEADER: &str = "lambda,n_solutions,min_energy,lambda_star,admissible";

/// One row of the lambda sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub lambda: f64,
    pub n_solutions: usize,
    /// NaN when no solution was found at this `lambda`.
    pub min_energy: f64,
    pub lambda_star: f64,
    pub admissible: bool,
}

/// Renders the sweep as CSV, one row per grid point, in grid order.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&fmt_float(r.lambda));
        out.push(',');
        write!(out, "{}", r.n_solutions).expect("writing to a String cannot fail");
        out.push(',');
        out.push_str(&fmt_float(r.min_energy));
        out.push(',');
        out.push_str(&fmt_float(r.lambda_star));
        out.push(',');
        out.push_str(if r.admissible { "true" } else { "false" });
        out.push('\n');
    }
    out
}
