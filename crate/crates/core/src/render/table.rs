use crate::curves::{ChartKind, Curve};
use crate::error::{Error, Result};
use crate::render::format::format_significant;

pub const CSV_HEADER: &str = "chart,class,theta,x,y";

const DIGITS: usize = 17;

fn class_label(class_names: &[String], index: usize) -> String {
    class_names
        .get(index)
        .cloned()
        .unwrap_or_else(|| index.to_string())
}

/// Curve points as `chart,class,theta,x,y` rows, grouped by class index
/// with each curve's points in descending threshold order.
pub fn write_curve_csv(curves: &[Curve], class_names: &[String]) -> String {
    let mut ordered: Vec<&Curve> = curves.iter().collect();
    ordered.sort_by_key(|c| c.class_index);

    let mut out = ::csv::WriterBuilder::new()
        .terminator(::csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    out.write_record(CSV_HEADER.split(','))
        .expect("in-memory write");
    for curve in ordered {
        let class = class_label(class_names, curve.class_index);
        for p in &curve.points {
            out.write_record([
                curve.kind.name(),
                class.as_str(),
                &format_significant(p.theta, DIGITS),
                &format_significant(p.x, DIGITS),
                &format_significant(p.y, DIGITS),
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(out.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub chart: ChartKind,
    pub class: String,
    pub theta: f64,
    pub x: f64,
    pub y: f64,
}

/// Parses text produced by [`write_curve_csv`].
pub fn read_curve_csv(text: &str) -> Result<Vec<CurveRow>> {
    let mut reader = ::csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::parse(1, e.to_string()))?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if header != CSV_HEADER {
        return Err(Error::parse(
            1,
            format!("expected header {CSV_HEADER:?}, got {header:?}"),
        ));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| Error::parse(line, e.to_string()))?;
        if record.len() != 5 {
            return Err(Error::parse(
                line,
                format!("expected 5 fields, got {}", record.len()),
            ));
        }
        let num = |j: usize| -> Result<f64> {
            record[j]
                .parse::<f64>()
                .map_err(|_| Error::parse(line, format!("bad number {:?}", &record[j])))
        };
        rows.push(CurveRow {
            chart: record[0]
                .parse()
                .map_err(|e: Error| Error::parse(line, e.to_string()))?,
            class: record[1].to_string(),
            theta: num(2)?,
            x: num(3)?,
            y: num(4)?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::build_curve;
    use crate::sweep::ClassSweep;

    #[test]
    fn empty_is_header_only() {
        assert_eq!(write_curve_csv(&[], &[]), "chart,class,theta,x,y\n");
    }

    #[test]
    fn one_roc_curve() {
        let sweep = ClassSweep::from_scores(0, &[0.9, 0.1], &[true, false]).unwrap();
        let curve = build_curve(&sweep, ChartKind::Roc, 1.0).unwrap();
        let text = write_curve_csv(&[curve], &["pos".into(), "neg".into()]);
        assert_eq!(
            text,
            "chart,class,theta,x,y\nROC,pos,0.90000000000000002,0,0\nROC,pos,0.10000000000000001,0,1\nROC,pos,-inf,1,1\n"
        );
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn quotes_awkward_names() {
        let sweep = ClassSweep::from_scores(0, &[0.9, 0.1], &[true, false]).unwrap();
        let curve = build_curve(&sweep, ChartKind::Roc, 1.0).unwrap();
        let text = write_curve_csv(&[curve], &["a,b".into(), "c".into()]);
        let rows = read_curve_csv(&text).unwrap();
        assert_eq!(rows[0].class, "a,b");
    }

    #[test]
    fn bad_header() {
        assert!(matches!(
            read_curve_csv("a,b\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
