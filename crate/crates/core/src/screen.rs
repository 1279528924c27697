//! Batch application of a [`SignPolicy`] to many estimates.
//!
//! Input CSV has the header `id,estimate,se[,df]`; an empty or missing `df`
//! means the normal reference distribution. Output CSV has the header
//! `id,z,p1,decision,p_sign` with an empty `p_sign` when the null is not
//! rejected. Malformed rows are reported individually and do not stop the
//! batch.

use std::collections::HashSet;
use std::io::{Read, Write};

use crate::signpolicy::{decide, Decision, SignPolicy};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TestRecord {
    pub id: String,
    pub estimate: f64,
    pub se: f64,
    /// Degrees of freedom; `+inf` for a normal reference.
    pub df: f64,
}

impl TestRecord {
    pub fn new(id: impl Into<String>, estimate: f64, se: f64) -> Self {
        Self {
            id: id.into(),
            estimate,
            se,
            df: f64::INFINITY,
        }
    }

    pub fn with_df(mut self, df: f64) -> Self {
        self.df = df;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScreenResult {
    pub id: String,
    pub z: f64,
    pub p1: f64,
    pub decision: Decision,
    pub p_sign: Option<f64>,
}

/// A record that could not be screened.
#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    /// Zero-based position in the batch.
    pub index: usize,
    pub id: Option<String>,
    pub message: String,
}

impl std::fmt::Display for RowError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.id {
            Some(id) => write!(f, "row {} (id {id}): {}", self.index + 1, self.message),
            None => write!(f, "row {}: {}", self.index + 1, self.message),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScreenSummary {
    /// All rows, including rows with errors.
    pub n_total: usize,
    pub n_rejected: usize,
    pub n_sign_declared: usize,
    pub n_errors: usize,
    /// `n_sign_declared / n_rejected`, absent when nothing was rejected.
    pub fraction_sign_declared_of_rejected: Option<f64>,
}

impl std::fmt::Display for ScreenSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "n_total={} n_rejected={} n_sign_declared={} n_errors={} fraction_sign_declared_of_rejected=",
            self.n_total, self.n_rejected, self.n_sign_declared, self.n_errors
        )?;
        match self.fraction_sign_declared_of_rejected {
            Some(x) => write!(f, "{x}"),
            None => f.write_str("NA"),
        }
    }
}

pub type ScreenRow = std::result::Result<ScreenResult, RowError>;

#[derive(Debug, Clone, PartialEq)]
pub struct ScreenOutcome {
    /// One entry per input row, in input order.
    pub rows: Vec<ScreenRow>,
    pub summary: ScreenSummary,
}

impl ScreenOutcome {
    pub fn results(&self) -> impl Iterator<Item = &ScreenResult> {
        self.rows.iter().filter_map(|r| r.as_ref().ok())
    }

    pub fn errors(&self) -> impl Iterator<Item = &RowError> {
        self.rows.iter().filter_map(|r| r.as_ref().err())
    }

    /// Writes the successfully screened rows as CSV.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_results(self.results(), w)
    }
}

/// Screens every record. The policy must be fixed before looking at the data.
pub fn screen_batch(records: &[TestRecord], policy: &SignPolicy) -> ScreenOutcome {
    screen_rows(records.iter().cloned().map(Ok), policy)
}

/// Screens rows that may already carry parse errors.
pub fn screen_rows<I>(rows: I, policy: &SignPolicy) -> ScreenOutcome
where
    I: IntoIterator<Item = std::result::Result<TestRecord, RowError>>,
{
    let mut seen = HashSet::new();
    let mut summary = ScreenSummary::default();
    let rows: Vec<ScreenRow> = rows
        .into_iter()
        .enumerate()
        .map(|(index, row)| {
            summary.n_total += 1;
            let out = row.and_then(|rec| screen_one(index, rec, policy, &mut seen));
            match &out {
                Ok(r) => {
                    if r.decision.is_rejection() {
                        summary.n_rejected += 1;
                    }
                    if r.decision.declared_sign().is_some() {
                        summary.n_sign_declared += 1;
                    }
                }
                Err(_) => summary.n_errors += 1,
            }
            out
        })
        .collect();
    if summary.n_rejected > 0 {
        summary.fraction_sign_declared_of_rejected =
            Some(summary.n_sign_declared as f64 / summary.n_rejected as f64);
    }
    ScreenOutcome { rows, summary }
}

fn screen_one(
    index: usize,
    rec: TestRecord,
    policy: &SignPolicy,
    seen: &mut HashSet<String>,
) -> ScreenRow {
    let fail = |message: String| RowError {
        index,
        id: Some(rec.id.clone()),
        message,
    };
    if !(rec.se > 0.0) {
        return Err(fail(format!("se must be positive, got {}", rec.se)));
    }
    if seen.contains(&rec.id) {
        return Err(fail("duplicate id".to_string()));
    }
    let report = decide(rec.estimate, rec.se, rec.df, policy).map_err(|e| fail(e.to_string()))?;
    seen.insert(rec.id.clone());
    Ok(ScreenResult {
        id: rec.id,
        z: report.z,
        p1: report.p1,
        decision: report.decision,
        p_sign: report.p_sign,
    })
}

fn parse_number(field: &str, name: &str) -> std::result::Result<f64, String> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|_| format!("cannot parse {name} {field:?}"))
}

/// Reads `id,estimate,se[,df]` records. Header problems are fatal; problems
/// within a row become a [`RowError`] for that row.
pub fn read_records<R: Read>(input: R) -> Result<Vec<std::result::Result<TestRecord, RowError>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| Error::Input(format!("cannot read header: {e}")))?
        .clone();
    let names: Vec<&str> = headers.iter().collect();
    let has_df = match names.as_slice() {
        ["id", "estimate", "se"] => false,
        ["id", "estimate", "se", "df"] => true,
        _ => {
            return Err(Error::Input(format!(
                "expected header id,estimate,se[,df], got {}",
                names.join(",")
            )))
        }
    };

    let mut out = Vec::new();
    for (index, rec) in reader.records().enumerate() {
        let parsed = match rec {
            Err(e) => Err(RowError {
                index,
                id: None,
                message: e.to_string(),
            }),
            Ok(rec) => parse_record(&rec, has_df).map_err(|message| RowError {
                index,
                id: rec.get(0).map(str::to_string),
                message,
            }),
        };
        out.push(parsed);
    }
    Ok(out)
}

fn parse_record(rec: &csv::StringRecord, has_df: bool) -> std::result::Result<TestRecord, String> {
    let max = if has_df { 4 } else { 3 };
    if rec.len() < 3 || rec.len() > max {
        return Err(format!("expected {max} fields, got {}", rec.len()));
    }
    let id = rec[0].to_string();
    if id.is_empty() {
        return Err("empty id".to_string());
    }
    let estimate = parse_number(&rec[1], "estimate")?;
    let se = parse_number(&rec[2], "se")?;
    let df = match rec.get(3) {
        None | Some("") => f64::INFINITY,
        Some(s) => parse_number(s, "df")?,
    };
    Ok(TestRecord {
        id,
        estimate,
        se,
        df,
    })
}

/// Writes results with the header `id,z,p1,decision,p_sign`.
pub fn write_results<'a, I, W>(results: I, w: W) -> Result<()>
where
    I: IntoIterator<Item = &'a ScreenResult>,
    W: Write,
{
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    let io = |e: csv::Error| Error::Input(format!("cannot write results: {e}"));
    writer
        .write_record(["id", "z", "p1", "decision", "p_sign"])
        .map_err(io)?;
    for r in results {
        let p_sign = r.p_sign.map(|p| p.to_string()).unwrap_or_default();
        writer
            .write_record([
                r.id.as_str(),
                &r.z.to_string(),
                &r.p1.to_string(),
                r.decision.label(),
                &p_sign,
            ])
            .map_err(io)?;
    }
    writer
        .flush()
        .map_err(|e| Error::Input(format!("cannot write results: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signpolicy::{make_policy, Sign};

    fn policy() -> SignPolicy {
        make_policy(0.05, 0.001).unwrap()
    }

    #[test]
    fn three_record_example() {
        let recs = vec![
            TestRecord::new("a", 4.2, 1.0),
            TestRecord::new("b", 2.5, 1.0),
            TestRecord::new("c", -1.0, 1.0),
        ];
        let out = screen_batch(&recs, &policy());
        let decisions: Vec<Decision> = out.results().map(|r| r.decision).collect();
        assert_eq!(
            decisions,
            vec![
                Decision::SignificantWithSign(Sign::Positive),
                Decision::SignificantNoSign,
                Decision::NotSignificant,
            ]
        );
        let s = out.summary;
        assert_eq!((s.n_total, s.n_rejected, s.n_sign_declared), (3, 2, 1));
        assert_eq!(s.fraction_sign_declared_of_rejected, Some(0.5));
    }

    #[test]
    fn empty_batch() {
        let out = screen_batch(&[], &policy());
        assert!(out.rows.is_empty());
        assert_eq!(out.summary, ScreenSummary::default());
        assert_eq!(out.summary.fraction_sign_declared_of_rejected, None);
    }

    #[test]
    fn bad_rows_do_not_abort() {
        let recs = vec![
            TestRecord::new("a", 1.0, 0.0),
            TestRecord::new("b", 5.0, 1.0),
            TestRecord::new("b", 5.0, 1.0),
            TestRecord::new("c", 1.0, 1.0).with_df(-2.0),
        ];
        let out = screen_batch(&recs, &policy());
        assert_eq!(out.summary.n_errors, 3);
        assert_eq!(out.summary.n_total, 4);
        assert!(out.rows[1].is_ok());
        let errs: Vec<usize> = out.errors().map(|e| e.index).collect();
        assert_eq!(errs, vec![0, 2, 3]);
        assert!(out.rows[2].as_ref().unwrap_err().message.contains("duplicate"));
    }

    #[test]
    fn read_with_and_without_df() {
        let csv = "id,estimate,se,df\nx,1.5,0.5,10\ny,-2,1,\nz,3,1,inf\n";
        let recs = read_records(csv.as_bytes()).unwrap();
        let recs: Vec<TestRecord> = recs.into_iter().map(Result::unwrap).collect();
        assert_eq!(recs[0].df, 10.0);
        assert!(recs[1].df.is_infinite());
        assert!(recs[2].df.is_infinite());

        let recs = read_records("id,estimate,se\nq,1,2\n".as_bytes()).unwrap();
        assert_eq!(recs[0].as_ref().unwrap().se, 2.0);
    }

    #[test]
    fn read_row_errors() {
        let csv = "id,estimate,se\nx,abc,1\ny,1,1,1\n,1,1\nz,1,1\n";
        let recs = read_records(csv.as_bytes()).unwrap();
        assert_eq!(recs.len(), 4);
        assert!(recs[0].as_ref().unwrap_err().message.contains("estimate"));
        assert!(recs[1].is_err());
        assert!(recs[2].is_err());
        assert!(recs[3].is_ok());
    }

    #[test]
    fn bad_header_is_fatal() {
        assert!(matches!(
            read_records("a,b,c\n1,2,3\n".as_bytes()),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn output_format() {
        let out = screen_batch(
            &[TestRecord::new("a", 4.2, 1.0), TestRecord::new("c", -1.0, 1.0)],
            &policy(),
        );
        let mut buf = Vec::new();
        out.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "id,z,p1,decision,p_sign");
        assert!(lines[1].starts_with("a,4.2,"));
        assert!(lines[1].contains(",significant_pos,"));
        assert!(lines[2].ends_with(",not_significant,"));
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn summary_display() {
        let s = ScreenSummary {
            n_total: 3,
            n_rejected: 2,
            n_sign_declared: 1,
            n_errors: 0,
            fraction_sign_declared_of_rejected: Some(0.5),
        };
        assert_eq!(
            s.to_string(),
            "n_total=3 n_rejected=2 n_sign_declared=1 n_errors=0 fraction_sign_declared_of_rejected=0.5"
        );
    }
}
