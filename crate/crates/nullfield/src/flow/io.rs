//! Curve CSV files: header `param,x1,y1,x2,y2` (S³) or `param,x,y,z` (R³),
//! values with 17 significant digits, `\n` line endings.

use std::io::{Read, Write};

use super::Curve;
use crate::error::{Error, Result};
use crate::Real;

const S3_HEADER: [&str; 5] = ["param", "x1", "y1", "x2", "y2"];
const R3_HEADER: [&str; 4] = ["param", "x", "y", "z"];

/// A curve read back from CSV; the dimension comes from the header.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveCsv<T> {
    S3(Curve<T, 4>),
    R3(Curve<T, 3>),
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_curve_csv<T: Real, W: Write, const D: usize>(out: W, curve: &Curve<T, D>) -> Result<()> {
    let header: &[&str] = match D {
        4 => &S3_HEADER,
        3 => &R3_HEADER,
        _ => return Err(Error::InvalidArgument(format!("no CSV layout for dimension {D}"))),
    };
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(header)?;
    for (p, x) in curve.params.iter().zip(&curve.samples) {
        let mut rec = vec![fmt17(p.as_f64())];
        rec.extend(x.iter().map(|v| fmt17(v.as_f64())));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a curve. It is marked closed when its first and last samples agree
/// to within `closure_tol`.
pub fn read_curve_csv<T: Real, R: Read>(input: R, closure_tol: T) -> Result<CurveCsv<T>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let dim = if header == S3_HEADER {
        4
    } else if header == R3_HEADER {
        3
    } else {
        return Err(Error::InvalidArgument(format!("unrecognized curve header {header:?}")));
    };
    let mut params = Vec::new();
    let mut rows: Vec<Vec<T>> = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let vals = rec
            .iter()
            .map(|s| s.parse::<f64>().map(T::lit))
            .collect::<std::result::Result<Vec<T>, _>>()
            .map_err(|e| Error::InvalidArgument(format!("bad number in curve CSV: {e}")))?;
        params.push(vals[0]);
        rows.push(vals[1..].to_vec());
    }
    fn build<T: Real, const D: usize>(params: Vec<T>, rows: Vec<Vec<T>>, tol: T) -> Result<Curve<T, D>> {
        let samples: Vec<[T; D]> = rows.iter().map(|r| std::array::from_fn(|i| r[i])).collect();
        let closed = samples.len() >= 4 && crate::vector::dist(&samples[0], samples.last().unwrap()) <= tol;
        Curve::new(params, samples, None, closed)
    }
    Ok(if dim == 4 {
        CurveCsv::S3(build(params, rows, closure_tol)?)
    } else {
        CurveCsv::R3(build(params, rows, closure_tol)?)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let c = Curve::sample_periodic(
            1.0,
            8,
            |t: f64| [(t * 6.0).cos() / 3.0, (t * 6.0).sin() * 1e-7, 0.1 + t, -t],
            None::<fn(f64) -> [f64; 4]>,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_curve_csv(&mut buf, &c).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("param,x1,y1,x2,y2\n"));
        assert!(!text.contains('\r'));
        match read_curve_csv::<f64, _>(&buf[..], 1e-12).unwrap() {
            CurveCsv::S3(back) => {
                assert_eq!(back.samples, c.samples);
                assert_eq!(back.params, c.params);
                assert!(back.closed);
            }
            CurveCsv::R3(_) => panic!("wrong dimension"),
        }
    }

    #[test]
    fn rejects_unknown_header() {
        assert!(read_curve_csv::<f64, _>("t,a,b\n0,1,2\n".as_bytes(), 1e-9).is_err());
    }
}
