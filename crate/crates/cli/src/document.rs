//! On-disk JSON and CSV forms of a basis set.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use ueb_core::{BasisKind, BasisSet, Certificate, Complex64, ComplexMatrix, Provenance};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Space {
    pub d: usize,
    pub dprime: usize,
    pub k: usize,
}

/// A basis set with each matrix stored as the normalized state `A / sqrt(k)`,
/// written as rows of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisSetDocument {
    pub schema_version: String,
    pub space: Space,
    pub kind: BasisKind,
    pub count: usize,
    pub provenance: Provenance,
    pub states: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(default)]
    pub certificate: Option<Certificate>,
}

impl BasisSetDocument {
    pub fn from_basis(set: &BasisSet) -> Self {
        let scale = 1.0 / (set.k() as f64).sqrt();
        let states = set
            .matrices()
            .iter()
            .map(|m| {
                (0..m.rows())
                    .map(|r| (0..m.cols()).map(|c| [m[(r, c)].re * scale, m[(r, c)].im * scale]).collect())
                    .collect()
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            space: Space {
                d: set.d(),
                dprime: set.dprime(),
                k: set.k(),
            },
            kind: set.kind(),
            count: set.len(),
            provenance: set.provenance().clone(),
            states,
            certificate: set.certificate().cloned(),
        }
    }

    pub fn to_basis(&self) -> Result<BasisSet, CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::invalid(format!("unsupported schema version {:?}", self.schema_version)));
        }
        if self.count != self.states.len() {
            return Err(CliError::invalid(format!(
                "count is {} but {} states are listed",
                self.count,
                self.states.len()
            )));
        }
        let Space { d, dprime, k } = self.space;
        if k == 0 {
            return Err(CliError::invalid("k must be positive"));
        }
        let scale = (k as f64).sqrt();
        let mut matrices = Vec::with_capacity(self.states.len());
        for (index, rows) in self.states.iter().enumerate() {
            if rows.len() != d || rows.iter().any(|r| r.len() != dprime) {
                return Err(CliError::invalid(format!("state {index} is not a {d}x{dprime} array")));
            }
            let entries = rows
                .iter()
                .flatten()
                .map(|&[re, im]| Complex64::new(re * scale, im * scale))
                .collect();
            matrices.push(ComplexMatrix::new(d, dprime, entries)?);
        }
        let mut set = BasisSet::new(d, dprime, k, matrices, self.kind, self.provenance.clone())?;
        set.set_certificate(self.certificate.clone());
        Ok(set)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::invalid(format!("malformed basis document: {e}")))
    }

    pub fn to_json(&self) -> String {
        to_json_string(self)
    }

    /// One row per entry: `state,i,j,re,im`, states in order, entries row-major.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("state,i,j,re,im\n");
        for (s, rows) in self.states.iter().enumerate() {
            for (i, row) in rows.iter().enumerate() {
                for (j, [re, im]) in row.iter().enumerate() {
                    out.push_str(&format!("{s},{i},{j},{re:.16e},{im:.16e}\n"));
                }
            }
        }
        out
    }
}

/// Pretty JSON with every float written to 17 significant digits.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats::default());
    value.serialize(&mut ser).expect("in-memory serialization does not fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Arrays nested this deep or deeper are written on one line, so a state
/// prints one matrix row per line.
const COMPACT_DEPTH: usize = 3;

#[derive(Default)]
struct ExactFloats {
    pretty: PrettyFormatter<'static>,
    depth: usize,
}

impl ExactFloats {
    fn compact(&self) -> bool {
        self.depth >= COMPACT_DEPTH
    }
}

impl Formatter for ExactFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.depth += 1;
        if self.compact() {
            writer.write_all(b"[")
        } else {
            self.pretty.begin_array(writer)
        }
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        let result = if self.compact() {
            writer.write_all(b"]")
        } else {
            self.pretty.end_array(writer)
        };
        self.depth -= 1;
        result
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        if self.compact() {
            if first {
                Ok(())
            } else {
                writer.write_all(b", ")
            }
        } else {
            self.pretty.begin_array_value(writer, first)
        }
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        if self.compact() {
            Ok(())
        } else {
            self.pretty.end_array_value(writer)
        }
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.pretty.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.pretty.end_object_value(writer)
    }
}
