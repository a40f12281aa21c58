use std::path::Path;

use super::Design;
use crate::error::{Error, Result};

/// Samples from a user-supplied CSV: one row per sample, label in the last column.
#[derive(Clone, Debug, PartialEq)]
pub struct DesignData {
    pub design: Design,
    pub labels: Vec<f64>,
}

impl DesignData {
    /// Labels mapped to `{-1, +1}`: `0` becomes `-1`.
    pub fn signed_labels(&self) -> Result<Vec<f64>> {
        self.labels
            .iter()
            .map(|&y| match y {
                1.0 => Ok(1.0),
                0.0 | -1.0 => Ok(-1.0),
                other => Err(Error::Data(format!("binary label expected (0, 1 or -1), got {other}"))),
            })
            .collect()
    }
}

/// Reads a UTF-8, comma-separated, headerless file of floats. Every row needs
/// at least one feature column before the label.
pub fn load_design_csv(path: impl AsRef<Path>) -> Result<DesignData> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let values = record
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Data(format!("{}:{}: not a finite number: `{s}`", path.display(), line + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() < 2 {
            return Err(Error::Data(format!(
                "{}:{}: need at least one feature and a label",
                path.display(),
                line + 1
            )));
        }
        let (features, label) = values.split_at(values.len() - 1);
        rows.push(features.to_vec());
        labels.push(label[0]);
    }
    let design = Design::from_rows(&rows)?;
    Ok(DesignData { design, labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn reads_features_and_labels() {
        let f = write("1.0,2.0,1\n3.5, -4,0\n");
        let data = load_design_csv(f.path()).unwrap();
        assert_eq!(data.design.rows(), 2);
        assert_eq!(data.design.cols(), 2);
        assert_eq!(data.design.row(1), &[3.5, -4.0]);
        assert_eq!(data.labels, vec![1.0, 0.0]);
        assert_eq!(data.signed_labels().unwrap(), vec![1.0, -1.0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(load_design_csv(write("1.0,x,1\n").path()).is_err());
        assert!(load_design_csv(write("1.0\n").path()).is_err());
        assert!(load_design_csv(write("1,2,3\n1,2\n").path()).is_err());
        assert!(load_design_csv(write("").path()).is_err());
        let data = load_design_csv(write("1,2\n").path()).unwrap();
        assert!(DesignData { labels: vec![0.5], ..data }.signed_labels().is_err());
    }
}
