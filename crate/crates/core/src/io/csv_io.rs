use std::path::Path;
use std::str::FromStr;

use crate::dataset::Dataset;
use crate::error::{EifError, Result};
use crate::eval::{ConvergenceSeries, LevelSetStats, ScoreGrid};
use crate::scalar::Scalar;

/// Column holding 0/1 ground truth, by header name or 0-based position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    Index(usize),
}

impl FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => LabelColumn::Index(i),
            Err(_) => LabelColumn::Name(s.to_string()),
        })
    }
}

/// Reads a numeric CSV. All columns except the label column become coordinates.
pub fn read_csv<T: Scalar>(
    path: impl AsRef<Path>,
    has_header: bool,
    label_column: Option<&LabelColumn>,
) -> Result<(Dataset<T>, Option<Vec<u8>>)> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| EifError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .from_reader(std::io::BufReader::new(file));

    let csv_err = |e: csv::Error| EifError::Parse {
        line: e.position().map(|p| p.line()).unwrap_or(0),
        column: None,
        message: e.to_string(),
    };

    let header: Option<Vec<String>> = if has_header {
        Some(reader.headers().map_err(csv_err)?.iter().map(str::to_string).collect())
    } else {
        None
    };
    let mut width = header.as_ref().map(Vec::len);

    let label_idx = |width: usize| -> Result<Option<usize>> {
        match label_column {
            None => Ok(None),
            Some(LabelColumn::Index(i)) if *i < width => Ok(Some(*i)),
            Some(LabelColumn::Index(i)) => Err(EifError::Schema(format!(
                "label column {i} out of range for {width} columns"
            ))),
            Some(LabelColumn::Name(name)) => match &header {
                Some(h) => h
                    .iter()
                    .position(|c| c.trim() == name)
                    .map(Some)
                    .ok_or_else(|| EifError::Schema(format!("no column named {name:?}"))),
                None => Err(EifError::Schema(format!(
                    "label column {name:?} given by name but the file has no header"
                ))),
            },
        }
    };
    let mut label_at = match width {
        Some(w) => label_idx(w)?,
        None => None,
    };

    let mut values: Vec<T> = Vec::new();
    let mut labels: Vec<u8> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let w = match width {
            Some(w) => w,
            None => {
                width = Some(record.len());
                label_at = label_idx(record.len())?;
                record.len()
            }
        };
        if record.len() != w {
            return Err(EifError::Parse {
                line,
                column: None,
                message: format!("expected {w} fields, found {}", record.len()),
            });
        }
        for (c, cell) in record.iter().enumerate() {
            let v: f64 = cell.trim().parse().map_err(|_| EifError::Parse {
                line,
                column: Some(c + 1),
                message: format!("not a number: {cell:?}"),
            })?;
            if !v.is_finite() {
                return Err(EifError::Parse {
                    line,
                    column: Some(c + 1),
                    message: format!("non-finite value {cell:?}"),
                });
            }
            if Some(c) == label_at {
                if v == 0.0 || v == 1.0 {
                    labels.push(v as u8);
                } else {
                    return Err(EifError::Schema(format!(
                        "label {cell:?} on line {line} is not 0 or 1"
                    )));
                }
            } else {
                values.push(T::lit(v));
            }
        }
    }

    let width = width.ok_or_else(|| EifError::Parse {
        line: 1,
        column: None,
        message: "empty file".into(),
    })?;
    let dim = width - usize::from(label_at.is_some());
    if dim == 0 {
        return Err(EifError::Schema("no feature columns".into()));
    }
    let data = Dataset::new(dim, values)?;
    Ok((data, label_at.map(|_| labels)))
}

/// `v` rounded to 9 significant digits, in plain notation when reasonable.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.8e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        let fixed = format!("{v:.decimals$}");
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    } else {
        sci
    }
}

fn sig9<T: Scalar>(v: T) -> String {
    format_sig9(v.to_f64_lossless())
}

/// Header `index,score`, one row per score.
pub fn write_scores_csv<T: Scalar>(path: impl AsRef<Path>, ids: &[usize], scores: &[T]) -> Result<()> {
    if ids.len() != scores.len() {
        return Err(EifError::invalid(format!("{} ids for {} scores", ids.len(), scores.len())));
    }
    super::write_atomic(path.as_ref(), |w| {
        writeln!(w, "index,score")?;
        for (i, s) in ids.iter().zip(scores) {
            writeln!(w, "{i},{}", sig9(*s))?;
        }
        Ok(())
    })
}

/// Header `x,y,score`, x fastest.
pub fn write_grid_csv<T: Scalar>(path: impl AsRef<Path>, grid: &ScoreGrid<T>) -> Result<()> {
    super::write_atomic(path.as_ref(), |w| {
        writeln!(w, "x,y,score")?;
        for (x, y, s) in grid.cells() {
            writeln!(w, "{},{},{}", format_sig9(x), format_sig9(y), sig9(s))?;
        }
        Ok(())
    })
}

/// Header `level,mean,variance,n_probe`.
pub fn write_stats_csv(path: impl AsRef<Path>, stats: &[LevelSetStats]) -> Result<()> {
    super::write_atomic(path.as_ref(), |w| {
        writeln!(w, "level,mean,variance,n_probe")?;
        for s in stats {
            writeln!(
                w,
                "{},{},{},{}",
                format_sig9(s.level),
                format_sig9(s.mean),
                format_sig9(s.variance),
                s.n_probe
            )?;
        }
        Ok(())
    })
}

/// Header `t,mean,variance`.
pub fn write_convergence_csv(path: impl AsRef<Path>, series: &ConvergenceSeries) -> Result<()> {
    super::write_atomic(path.as_ref(), |w| {
        writeln!(w, "t,mean,variance")?;
        for p in &series.points {
            writeln!(w, "{},{},{}", p.t, format_sig9(p.mean), format_sig9(p.variance))?;
        }
        Ok(())
    })
}

/// Coordinates in shortest round-trip form under header `x0,x1,…`, plus a
/// trailing `label` column when labels are given.
pub fn write_dataset_csv<T: Scalar>(path: impl AsRef<Path>, data: &Dataset<T>, labels: Option<&[u8]>) -> Result<()> {
    if let Some(l) = labels {
        if l.len() != data.len() {
            return Err(EifError::invalid(format!("{} labels for {} rows", l.len(), data.len())));
        }
    }
    super::write_atomic(path.as_ref(), |w| {
        let mut head: Vec<String> = (0..data.dim()).map(|d| format!("x{d}")).collect();
        if labels.is_some() {
            head.push("label".into());
        }
        writeln!(w, "{}", head.join(","))?;
        for (i, row) in data.rows().enumerate() {
            let mut cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            if let Some(l) = labels {
                cells.push(l[i].to_string());
            }
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn reads_headered_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "a.csv", "x,y\n0,0\n1,2");
        let (d, l) = read_csv::<f64>(&p, true, None).unwrap();
        assert_eq!((d.len(), d.dim()), (2, 2));
        assert_eq!(d.row(1), &[1.0, 2.0]);
        assert!(l.is_none());
    }

    #[test]
    fn splits_labels() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "a.csv", "x,label,y\n0,1,5\n1,0,2\n");
        let (d, l) = read_csv::<f64>(&p, true, Some(&LabelColumn::Name("label".into()))).unwrap();
        assert_eq!(d.row(0), &[0.0, 5.0]);
        assert_eq!(l.unwrap(), vec![1, 0]);
        let (_, l) = read_csv::<f64>(&p, true, Some(&LabelColumn::Index(1))).unwrap();
        assert_eq!(l.unwrap(), vec![1, 0]);
        assert!(matches!(
            read_csv::<f64>(&p, true, Some(&LabelColumn::Name("nope".into()))),
            Err(EifError::Schema(_))
        ));
        let bad = write(&dir, "b.csv", "x,label\n0,2\n");
        assert!(matches!(
            read_csv::<f64>(&bad, true, Some(&LabelColumn::Name("label".into()))),
            Err(EifError::Schema(_))
        ));
    }

    #[test]
    fn ragged_row_names_its_line() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "a.csv", "x,y\n0,0\n1\n");
        match read_csv::<f64>(&p, true, None) {
            Err(EifError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_cell_names_row_and_column() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "a.csv", "1,2\n3,abc\n");
        match read_csv::<f64>(&p, false, None) {
            Err(EifError::Parse { line, column, .. }) => assert_eq!((line, column), (2, Some(2))),
            other => panic!("{other:?}"),
        }
        let n = write(&dir, "n.csv", "1,NaN\n");
        assert!(read_csv::<f64>(&n, false, None).is_err());
    }

    #[test]
    fn sig9_formatting() {
        assert_eq!(format_sig9(0.5), "0.5");
        assert_eq!(format_sig9(0.123456789123), "0.123456789");
        assert_eq!(format_sig9(1.0), "1");
        assert_eq!(format_sig9(0.99999999999), "1");
        assert_eq!(format_sig9(123456789.4), "123456789");
        assert_eq!(format_sig9(1.5e-7), "1.50000000e-7");
        for v in [0.7310585786300049, 1e-3 / 3.0, 2.0 / 3.0, 12345.6789012] {
            let s = format_sig9(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(format_sig9(back), s);
            assert!((back - v).abs() <= v.abs() * 1e-8);
        }
    }

    #[test]
    fn empty_scores_give_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        write_scores_csv::<f64>(&p, &[], &[]).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "index,score\n");
    }
}
