//! Fixed float formatting shared by every writer.

use std::io;

/// 17 significant digits in scientific notation; enough to round-trip any
/// `f64` and independent of the value's magnitude.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A compact JSON formatter that writes floats with [`fmt_f64`].
pub(crate) struct FixedFloats;

impl serde_json::ser::Formatter for FixedFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            writer.write_all(fmt_f64(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }
}

pub(crate) fn to_json_line<T: serde::Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats);
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub(crate) fn csv_writer<W: io::Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}
