//! Recursive-descent parser for sequence-model expressions:
//!
//! ```text
//! model := geom(q) | pow(p) | supergeom(b) | shift(k, model)
//!        | scale(c, model) | samples(v1, v2, ...) | spectrum(path)
//! ```
//!
//! Whitespace is ignored between tokens. `spectrum(path)` loads a matrix in
//! the shared text format and keeps its positive singular values.

use std::path::Path;

use super::SequenceModel;
use crate::error::{Error, Result};
use crate::matrix_io::read_matrix_file;
use crate::spectra::singular_spectrum;

const SOURCE: &str = "<model>";

/// Parses a model, resolving `spectrum(path)` against the file system.
pub fn parse_model(text: &str) -> Result<SequenceModel> {
    parse_model_with(text, &|path| {
        let m = read_matrix_file(Path::new(path))?;
        Ok(singular_spectrum(&m)?.positive().to_vec())
    })
}

/// Parses a model with a custom resolver for `spectrum(path)`, which must
/// return the singular values to use.
pub fn parse_model_with(text: &str, resolve: &dyn Fn(&str) -> Result<Vec<f64>>) -> Result<SequenceModel> {
    let mut p = Parser { text, chars: text.char_indices().collect(), pos: 0, resolve };
    let m = p.model()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error_at(p.pos, "unexpected trailing input"));
    }
    Ok(m)
}

struct Parser<'a> {
    text: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    resolve: &'a dyn Fn(&str) -> Result<Vec<f64>>,
}

impl Parser<'_> {
    fn error_at(&self, pos: usize, message: impl Into<String>) -> Error {
        let mut line = 1;
        let mut column = 1;
        for &(_, ch) in self.chars.iter().take(pos) {
            if ch == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        Error::Parse { source_name: SOURCE.into(), line, column, message: message.into() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error_at(self.pos, format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error_at(self.pos, format!("expected `{want}`, found end of input"))),
        }
    }

    fn slice(&self, start: usize, end: usize) -> &str {
        let b0 = self.chars.get(start).map_or(self.text.len(), |&(b, _)| b);
        let b1 = self.chars.get(end).map_or(self.text.len(), |&(b, _)| b);
        &self.text[b0..b1]
    }

    fn ident(&mut self) -> Result<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error_at(start, "expected a model name"));
        }
        Ok((start, self.slice(start, self.pos).to_string()))
    }

    fn number(&mut self) -> Result<(usize, f64)> {
        self.skip_ws();
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '+' | '-'))
        {
            self.pos += 1;
        }
        let tok = self.slice(start, self.pos);
        if tok.is_empty() {
            return Err(self.error_at(start, "expected a number"));
        }
        match tok.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok((start, v)),
            _ => Err(self.error_at(start, format!("bad number `{tok}`"))),
        }
    }

    fn count(&mut self) -> Result<usize> {
        let (start, v) = self.number()?;
        if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
            return Err(self.error_at(start, format!("shift must be a nonnegative integer, found {v}")));
        }
        Ok(v as usize)
    }

    fn checked(&self, start: usize, m: SequenceModel) -> Result<SequenceModel> {
        m.validate().map_err(|e| self.error_at(start, e.to_string()))?;
        Ok(m)
    }

    fn model(&mut self) -> Result<SequenceModel> {
        let (start, name) = self.ident()?;
        self.expect('(')?;
        let m = match name.as_str() {
            "geom" => SequenceModel::Geometric(self.number()?.1),
            "pow" => SequenceModel::Power(self.number()?.1),
            "supergeom" => SequenceModel::SuperGeometric(self.number()?.1),
            "shift" => {
                let k = self.count()?;
                self.expect(',')?;
                SequenceModel::Shifted(k, Box::new(self.model()?))
            }
            "scale" => {
                let c = self.number()?.1;
                self.expect(',')?;
                SequenceModel::Scaled(c, Box::new(self.model()?))
            }
            "samples" => {
                let mut values = vec![self.number()?.1];
                loop {
                    self.skip_ws();
                    if self.peek() != Some(',') {
                        break;
                    }
                    self.pos += 1;
                    values.push(self.number()?.1);
                }
                SequenceModel::Samples(values)
            }
            "spectrum" => {
                self.skip_ws();
                let pstart = self.pos;
                while self.peek().is_some_and(|c| c != ')') {
                    self.pos += 1;
                }
                let path = self.slice(pstart, self.pos).trim().to_string();
                if path.is_empty() {
                    return Err(self.error_at(pstart, "expected a matrix file path"));
                }
                let values = (self.resolve)(&path).map_err(|e| match e {
                    e @ Error::Parse { .. } => e,
                    other => self.error_at(pstart, format!("{path}: {other}")),
                })?;
                if values.is_empty() {
                    return Err(self.error_at(pstart, format!("{path}: matrix has no positive singular values")));
                }
                SequenceModel::Samples(values)
            }
            other => {
                return Err(self.error_at(
                    start,
                    format!("unknown model `{other}` (expected geom, pow, supergeom, shift, scale, samples or spectrum)"),
                ))
            }
        };
        self.expect(')')?;
        self.checked(start, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_models_with_whitespace() {
        let m = parse_model(" scale( 2 , shift(1,supergeom(2)) ) ").unwrap();
        assert_eq!(
            m,
            SequenceModel::Scaled(2.0, Box::new(SequenceModel::Shifted(1, Box::new(SequenceModel::SuperGeometric(2.0)))))
        );
        assert_eq!(
            parse_model("samples(1, 0.5,1e-5)").unwrap(),
            SequenceModel::Samples(vec![1.0, 0.5, 1e-5])
        );
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_model("shift(1, gem(0.5))").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, column: 10, .. }), "{e}");
        let e = parse_model("geom(0.5").unwrap_err();
        assert!(matches!(e, Error::Parse { column: 9, .. }), "{e}");
        let e = parse_model("geom(2)").unwrap_err();
        assert!(e.to_string().contains("(0, 1)"), "{e}");
        assert!(parse_model("geom(0.5) x").is_err());
        assert!(parse_model("shift(1.5, geom(0.5))").is_err());
    }

    #[test]
    fn spectrum_uses_resolver() {
        let m = parse_model_with("spectrum( a.mat )", &|p| {
            assert_eq!(p, "a.mat");
            Ok(vec![3.0, 1.0])
        })
        .unwrap();
        assert_eq!(m, SequenceModel::Samples(vec![3.0, 1.0]));
    }
}
