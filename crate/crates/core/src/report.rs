//! Serde adapters for the JSON reports: reals are emitted as decimal strings
//! with 17 significant digits, matrices as `{rows, cols, entries}` with
//! row-major entries.

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::Serializer;

use crate::linalg::Matrix;
use crate::matrix_io::fmt_real;

pub fn real<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_real(*x))
}

pub fn opt_real<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&fmt_real(*v)),
        None => s.serialize_none(),
    }
}

pub fn reals<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&fmt_real(*x))?;
    }
    seq.end()
}

struct MatrixRef<'a>(&'a Matrix);

impl serde::Serialize for MatrixRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m = self.0;
        let entries: Vec<String> = (0..m.nrows())
            .flat_map(|r| (0..m.ncols()).map(move |c| fmt_real(m[(r, c)])))
            .collect();
        let mut st = s.serialize_struct("Matrix", 3)?;
        st.serialize_field("rows", &m.nrows())?;
        st.serialize_field("cols", &m.ncols())?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

pub fn matrix<S: Serializer>(m: &Matrix, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&MatrixRef(m), s)
}

pub fn opt_matrix<S: Serializer>(m: &Option<Matrix>, s: S) -> Result<S::Ok, S::Error> {
    match m {
        Some(m) => serde::Serialize::serialize(&MatrixRef(m), s),
        None => s.serialize_none(),
    }
}
