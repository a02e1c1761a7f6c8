//! Persistence: Matrix Market `array complex general` files for matrices and
//! CSV rows for benchmark trials.

use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexDense, C64};

pub const MATRIX_MARKET_HEADER: &str = "%%MatrixMarket matrix array complex general";

pub const TRIAL_CSV_HEADER: [&str; 7] = [
    "algorithm",
    "n",
    "seed",
    "matrix_kind",
    "offdiag_error",
    "eig_rel_error",
    "wall_time_seconds",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    RandDiag,
    Schur,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::RandDiag => "randdiag",
            Algorithm::Schur => "schur",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Unitary,
    Normal,
    Thermal,
    Counterexample,
    File,
}

impl MatrixKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::Unitary => "unitary",
            MatrixKind::Normal => "normal",
            MatrixKind::Thermal => "thermal",
            MatrixKind::Counterexample => "counterexample",
            MatrixKind::File => "file",
        }
    }
}

/// One benchmark run. A failed trial is stored with `offdiag_error = NaN`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub algorithm: Algorithm,
    pub n: usize,
    pub seed: u64,
    pub matrix_kind: MatrixKind,
    pub offdiag_error: f64,
    pub eig_rel_error: Option<f64>,
    pub wall_time_seconds: f64,
}

impl TrialRecord {
    pub fn failed(&self) -> bool {
        self.offdiag_error.is_nan()
    }
}

/// Shortest decimal text that parses back to exactly `x` (at most 17
/// significant digits); exponent form outside a readable range.
fn format_real(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn write_matrix(path: impl AsRef<Path>, a: &ComplexDense) -> Result<()> {
    write_matrix_with_comments(path, a, &[])
}

/// Writes `a` with extra `%` comment lines after the header.
pub fn write_matrix_with_comments(
    path: impl AsRef<Path>,
    a: &ComplexDense,
    comments: &[&str],
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let write = |w: &mut BufWriter<File>| -> std::io::Result<()> {
        w.write_all(MATRIX_MARKET_HEADER.as_bytes())?;
        w.write_all(b"\n")?;
        for c in comments {
            writeln!(w, "% {c}")?;
        }
        writeln!(w, "{} {}", a.rows(), a.cols())?;
        for j in 0..a.cols() {
            for i in 0..a.rows() {
                let z = a[(i, j)];
                writeln!(w, "{} {}", format_real(z.re), format_real(z.im))?;
            }
        }
        w.flush()
    };
    write(&mut w).map_err(|e| Error::io(path, e))
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<ComplexDense> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix(&text, path)
}

fn parse_matrix(text: &str, path: &Path) -> Result<ComplexDense> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));

    let (line_no, header) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| err(1, "empty file, expected a MatrixMarket header".into()))?;
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(err(
            line_no,
            format!("expected `{MATRIX_MARKET_HEADER}`, found `{header}`"),
        ));
    }
    if tokens[2] != "array" {
        return Err(err(
            line_no,
            format!(
                "unsupported format `{}`, only dense `array` files are read",
                tokens[2]
            ),
        ));
    }
    if tokens[3] != "complex" {
        return Err(err(
            line_no,
            format!(
                "unsupported field `{}`; store matrices with the `complex` field (`re im` per entry)",
                tokens[3]
            ),
        ));
    }
    if tokens[4] != "general" {
        return Err(err(
            line_no,
            format!(
                "unsupported symmetry `{}`, only `general` is read",
                tokens[4]
            ),
        ));
    }

    let mut content = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (dim_line, dims) = content
        .next()
        .ok_or_else(|| err(line_no, "missing dimensions line".into()))?;
    let dims: Vec<&str> = dims.split_whitespace().collect();
    let parse_dim = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| err(dim_line, format!("invalid dimension `{s}`")))
    };
    if dims.len() != 2 {
        return Err(err(dim_line, "dimensions line must be `rows cols`".into()));
    }
    let (rows, cols) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
    let expected = rows * cols;

    let mut col_major = Vec::with_capacity(expected);
    let mut last_line = dim_line;
    for (no, l) in content {
        last_line = no;
        if col_major.len() == expected {
            return Err(err(
                no,
                format!("more data lines than the {expected} entries declared"),
            ));
        }
        let mut parts = l.split_whitespace();
        let (re, im) = match (parts.next(), parts.next(), parts.next()) {
            (Some(re), Some(im), None) => (re, im),
            _ => return Err(err(no, format!("expected `re im`, found `{l}`"))),
        };
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| err(no, format!("invalid number `{s}`")))
        };
        col_major.push(C64::new(parse(re)?, parse(im)?));
    }
    if col_major.len() != expected {
        return Err(err(
            last_line,
            format!(
                "declared {rows}x{cols} = {expected} entries but found {}",
                col_major.len()
            ),
        ));
    }
    Ok(ComplexDense::from_fn(rows, cols, |i, j| {
        col_major[j * rows + i]
    }))
}

/// Appends one CSV row, writing the header first if the file is new or empty.
pub fn append_trial(path: impl AsRef<Path>, record: &TrialRecord) -> Result<()> {
    append_trials(path, std::slice::from_ref(record))
}

pub fn append_trials(path: impl AsRef<Path>, records: &[TrialRecord]) -> Result<()> {
    let path = path.as_ref();
    let is_new = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file);
    if is_new {
        w.write_record(TRIAL_CSV_HEADER)?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_trials(path: impl AsRef<Path>) -> Result<Vec<TrialRecord>> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize()
        .map(|rec| rec.map_err(Error::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn record(eig: Option<f64>) -> TrialRecord {
        TrialRecord {
            algorithm: Algorithm::RandDiag,
            n: 8,
            seed: 3,
            matrix_kind: MatrixKind::Unitary,
            offdiag_error: 1.5e-14,
            eig_rel_error: eig,
            wall_time_seconds: 0.001234,
        }
    }

    #[test]
    fn identity_layout() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("i2.mtx");
        write_matrix(&p, &ComplexDense::identity(2)).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert_eq!(
            text,
            format!("{MATRIX_MARKET_HEADER}\n2 2\n1 0\n0 0\n0 0\n1 0\n")
        );
    }

    #[test]
    fn scalar_layout_and_column_major_order() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.mtx");
        write_matrix(&p, &ComplexDense::from_rows(&[[c(1.5, -2.25)]])).unwrap();
        assert!(fs::read_to_string(&p)
            .unwrap()
            .ends_with("1 1\n1.5 -2.25\n"));

        let a = ComplexDense::from_real_rows(&[[1.0, 2.0], [3.0, 4.0]]);
        write_matrix(&p, &a).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        let data: Vec<&str> = text.lines().skip(2).collect();
        assert_eq!(data, vec!["1 0", "3 0", "2 0", "4 0"]);
    }

    #[test]
    fn extreme_values_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.mtx");
        let a = ComplexDense::from_rows(&[
            [c(1e-300, -0.1), c(1.0 / 3.0, 6.02e23)],
            [c(-0.0, f64::MIN_POSITIVE), c(f64::MAX, 1e-7)],
        ]);
        write_matrix_with_comments(&p, &a, &["generated in a test"]).unwrap();
        let b = read_matrix(&p).unwrap();
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn reader_tolerates_comments_whitespace_and_crlf() {
        let text = "%%MatrixMarket matrix array complex general\r\n% a comment\r\n\r\n  2   1 \r\n 1.0\t2.0\r\n%mid\r\n-3  4e0\r\n";
        let a = parse_matrix(text, Path::new("mem")).unwrap();
        assert_eq!(a, ComplexDense::from_rows(&[[c(1.0, 2.0)], [c(-3.0, 4.0)]]));
    }

    #[test]
    fn reader_errors() {
        let p = Path::new("mem");
        let real = "%%MatrixMarket matrix array real general\n1 1\n1\n";
        let e = parse_matrix(real, p).unwrap_err().to_string();
        assert!(e.contains("complex"), "{e}");

        let short = format!("{MATRIX_MARKET_HEADER}\n3 1\n1 0\n2 0\n");
        let e = parse_matrix(&short, p).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, .. }), "{e}");
        assert!(e.to_string().contains("found 2"));

        let long = format!("{MATRIX_MARKET_HEADER}\n1 1\n1 0\n2 0\n");
        assert!(parse_matrix(&long, p).is_err());

        let garbled = "hello\n1 1\n1 0\n";
        assert!(matches!(
            parse_matrix(garbled, p),
            Err(Error::Parse { line: 1, .. })
        ));

        let bad_number = format!("{MATRIX_MARKET_HEADER}\n1 1\n1 zero\n");
        assert!(matches!(
            parse_matrix(&bad_number, p),
            Err(Error::Parse { line: 3, .. })
        ));

        assert!(parse_matrix("", p).is_err());
        assert!(matches!(
            read_matrix("/nonexistent/m.mtx"),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn csv_header_written_once() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        append_trial(&p, &record(Some(2.5e-15))).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(text.lines().next().unwrap(), TRIAL_CSV_HEADER.join(","));
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "randdiag,8,3,unitary,1.5e-14,2.5e-15,0.001234"
        );

        append_trial(&p, &record(None)).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert_eq!(
            text.lines().nth(2).unwrap(),
            "randdiag,8,3,unitary,1.5e-14,,0.001234"
        );

        let back = read_trials(&p).unwrap();
        assert_eq!(back, vec![record(Some(2.5e-15)), record(None)]);
    }
}
