//! Canonical JSON rendering: every float printed with 15 significant
//! digits through [`trop_core::num::fmt15`], keys in sorted order, no
//! whitespace. Identical values therefore serialize to identical bytes.

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};
use serde_json::Value;
use std::io;

struct Fmt15;

impl Formatter for Fmt15 {
    fn write_f64<W: io::Write + ?Sized>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(trop_core::num::fmt15(value).as_bytes())
    }

    fn write_f32<W: io::Write + ?Sized>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        w.write_all(trop_core::num::fmt15(f64::from(value)).as_bytes())
    }

    // everything else: compact defaults
    fn begin_array_value<W: io::Write + ?Sized>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        CompactFormatter.begin_array_value(w, first)
    }
}

pub fn to_string(v: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Fmt15);
    v.serialize(&mut ser).expect("serializing an in-memory value");
    String::from_utf8(out).expect("JSON is UTF-8")
}
