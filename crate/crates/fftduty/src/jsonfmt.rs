//! JSON emission with floats at 17 significant digits.
//!
//! Every machine-readable JSON artifact goes through here so that reals are
//! written as `d.dddddddddddddddde±x`. Seventeen significant digits recover
//! any f64 bit for bit, and the fixed width keeps outputs byte-stable from
//! run to run.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

struct SciFloats;

impl Formatter for SciFloats {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        // One leading digit plus 16 decimals = 17 significant digits.
        write!(writer, "{value:.16e}")
    }
}

pub(crate) fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, SciFloats);
    value
        .serialize(&mut ser)
        .expect("in-memory serialization cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}
