//! CSV files of point clouds: header `x0,...,x{N-1}[,stratum][,s]`, with
//! `stratum` in {p, q} and `s` in [0, 1].

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::phi::strong_str;
use crate::sample_spaces::{PointCloud, StratifiedSample, StronglyStratifiedSample};

/// Contents of a point-cloud CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct CloudTable {
    pub cloud: PointCloud,
    /// `true` for rows marked `p`.
    pub stratum: Option<Vec<bool>>,
    pub s: Option<Vec<f64>>,
}

impl CloudTable {
    pub fn plain(cloud: PointCloud) -> Self {
        Self {
            cloud,
            stratum: None,
            s: None,
        }
    }

    /// Uses the `stratum` column, or else the points with `s = 0`.
    pub fn stratified(&self) -> Result<StratifiedSample> {
        match (&self.stratum, &self.s) {
            (Some(mask), _) => StratifiedSample::new(self.cloud.clone(), mask.clone()),
            (None, Some(s)) => {
                StratifiedSample::new(self.cloud.clone(), s.iter().map(|&v| v == 0.0).collect())
            }
            (None, None) => Err(Error::Data("neither a `stratum` nor an `s` column".into())),
        }
    }

    /// Uses the `s` column, or else the distance to the `p` rows.
    pub fn strongly_stratified(&self) -> Result<StronglyStratifiedSample> {
        match &self.s {
            Some(s) => StronglyStratifiedSample::new(self.cloud.clone(), s.clone()),
            None => Ok(strong_str(&self.stratified()?)),
        }
    }
}

impl From<&StratifiedSample> for CloudTable {
    fn from(s: &StratifiedSample) -> Self {
        Self {
            cloud: s.cloud().clone(),
            stratum: Some(s.singular_mask().to_vec()),
            s: None,
        }
    }
}

impl From<&StronglyStratifiedSample> for CloudTable {
    fn from(s: &StronglyStratifiedSample) -> Self {
        Self {
            cloud: s.cloud().clone(),
            stratum: None,
            s: Some(s.values().to_vec()),
        }
    }
}

pub fn read_table(reader: impl Read) -> Result<CloudTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    let mut dim = 0;
    let (mut stratum_col, mut s_col) = (None, None);
    for (k, name) in header.iter().enumerate() {
        match name {
            "stratum" => stratum_col = Some(k),
            "s" => s_col = Some(k),
            _ if name == format!("x{dim}") && k == dim => dim += 1,
            _ => return Err(Error::Data(format!("unexpected column `{name}`"))),
        }
    }
    if dim == 0 {
        return Err(Error::Data("no coordinate columns".into()));
    }
    let mut coords = Vec::new();
    let mut stratum = stratum_col.map(|_| Vec::new());
    let mut s = s_col.map(|_| Vec::new());
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let field = |k: usize| record.get(k).unwrap_or_default();
        let number = |k: usize| -> Result<f64> {
            field(k).parse().map_err(|_| {
                Error::Data(format!("row {}: `{}` is not a number", row + 1, field(k)))
            })
        };
        for k in 0..dim {
            coords.push(number(k)?);
        }
        if let (Some(k), Some(out)) = (stratum_col, stratum.as_mut()) {
            out.push(match field(k) {
                "p" => true,
                "q" => false,
                other => {
                    return Err(Error::Data(format!(
                        "row {}: stratum `{other}` is not p or q",
                        row + 1
                    )))
                }
            });
        }
        if let (Some(k), Some(out)) = (s_col, s.as_mut()) {
            out.push(number(k)?);
        }
    }
    Ok(CloudTable {
        cloud: PointCloud::from_flat(dim, coords)?,
        stratum,
        s,
    })
}

pub fn write_table(writer: impl Write, table: &CloudTable) -> Result<()> {
    let n = table.cloud.len();
    for (name, len) in [
        ("stratum", table.stratum.as_ref().map(Vec::len)),
        ("s", table.s.as_ref().map(Vec::len)),
    ] {
        if len.is_some_and(|l| l != n) {
            return Err(Error::Data(format!(
                "`{name}` column has {} entries for {n} points",
                len.unwrap_or(0)
            )));
        }
    }
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (0..table.cloud.dim()).map(|k| format!("x{k}")).collect();
    if table.stratum.is_some() {
        header.push("stratum".into());
    }
    if table.s.is_some() {
        header.push("s".into());
    }
    wtr.write_record(&header)?;
    for (i, p) in table.cloud.iter().enumerate() {
        let mut row: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        if let Some(mask) = &table.stratum {
            row.push(if mask[i] { "p" } else { "q" }.into());
        }
        if let Some(s) = &table.s {
            row.push(s[i].to_string());
        }
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_table_file(path: impl AsRef<Path>) -> Result<CloudTable> {
    read_table(File::open(path)?)
}

pub fn write_table_file(path: impl AsRef<Path>, table: &CloudTable) -> Result<()> {
    write_table(File::create(path)?, table)
}
