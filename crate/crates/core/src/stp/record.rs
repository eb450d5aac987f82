use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Success,
    Timeout,
    Memlimit,
    Error,
}

impl RunStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Success => "success",
            RunStatus::Timeout => "timeout",
            RunStatus::Memlimit => "memlimit",
            RunStatus::Error => "error",
        }
    }
}

/// One row of `instance,algo,flags,k,cost,gap_permil,time_s,status`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub algo: String,
    pub flags: String,
    pub k: Option<usize>,
    pub cost: Option<f64>,
    pub gap_permil: Option<f64>,
    pub time_s: f64,
    pub status: RunStatus,
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("record {row}: cost must be present iff status is success")]
    CostStatusMismatch { row: usize },
}

impl RunRecord {
    fn check(&self, row: usize) -> Result<(), RecordError> {
        if self.cost.is_some() != (self.status == RunStatus::Success) {
            return Err(RecordError::CostStatusMismatch { row });
        }
        Ok(())
    }
}

pub fn write_records<W: Write>(out: W, records: &[RunRecord]) -> Result<(), RecordError> {
    let mut w = csv::Writer::from_writer(out);
    for (row, r) in records.iter().enumerate() {
        r.check(row + 1)?;
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<RunRecord>, RecordError> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut records = Vec::new();
    for (row, r) in rdr.deserialize().enumerate() {
        let r: RunRecord = r?;
        r.check(row + 1)?;
        records.push(r);
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let records = vec![
            RunRecord {
                instance: "b01".into(),
                algo: "gcf".into(),
                flags: "win=abs gen=voronoi sp=prefer".into(),
                k: Some(3),
                cost: Some(82.0),
                gap_permil: Some(0.0),
                time_s: 0.01,
                status: RunStatus::Success,
            },
            RunRecord {
                instance: "b02".into(),
                algo: "tm".into(),
                flags: String::new(),
                k: None,
                cost: None,
                gap_permil: None,
                time_s: 60.0,
                status: RunStatus::Timeout,
            },
        ];
        let mut buf = Vec::new();
        write_records(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("instance,algo,flags,k,cost,gap_permil,time_s,status\n"));
        assert_eq!(read_records(&buf[..]).unwrap(), records);
    }

    #[test]
    fn cost_requires_success() {
        let text = "instance,algo,flags,k,cost,gap_permil,time_s,status\nb01,tm,,,5,,0.1,timeout\n";
        assert!(matches!(
            read_records(text.as_bytes()),
            Err(RecordError::CostStatusMismatch { row: 1 })
        ));
    }
}
