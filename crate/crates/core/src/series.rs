//! Curve containers and CSV emission. Every sweep the library produces is
//! funneled through [`CurveSeries`], which enforces a clean grid and writes
//! a stable four-column CSV (`snr_db,snr,value,normalized_value`) with
//! shortest-round-trip decimal formatting, so identical inputs yield
//! byte-identical files.

use std::fmt;
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Display normalization applied in the CSV's last column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Raw values.
    #[default]
    None,
    /// Degrees of freedom: value / (½·log(1+snr)); undefined at snr = 0.
    Dof,
    /// MMSE dimension: value · (1+snr).
    MmseDim,
}

impl Normalization {
    /// Normalized value, or `None` where the normalization is undefined.
    pub fn apply(self, snr: f64, value: f64) -> Option<f64> {
        match self {
            Normalization::None => Some(value),
            Normalization::Dof => {
                if snr == 0.0 {
                    None
                } else {
                    Some(value / (0.5 * (1.0 + snr).ln()))
                }
            }
            Normalization::MmseDim => Some(value * (1.0 + snr)),
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::None => "none",
            Normalization::Dof => "dof",
            Normalization::MmseDim => "mmse_dim",
        })
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Normalization::None),
            "dof" => Ok(Normalization::Dof),
            "mmse_dim" => Ok(Normalization::MmseDim),
            other => Err(Error::Argument(format!(
                "unknown normalization '{other}' (expected none, dof, or mmse_dim)"
            ))),
        }
    }
}

/// One labeled curve: `(snr, value)` samples on a strictly increasing,
/// nonnegative grid, with the normalization to apply on output.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub normalization: Normalization,
}

impl CurveSeries {
    /// Validates the grid: finite values, snr ≥ 0, strictly increasing.
    pub fn new(
        label: impl Into<String>,
        points: Vec<(f64, f64)>,
        normalization: Normalization,
    ) -> Result<Self> {
        let label = label.into();
        if points.is_empty() {
            return Err(Error::Argument(format!("curve '{label}' has no points")));
        }
        for &(snr, value) in &points {
            if !snr.is_finite() || snr < 0.0 {
                return Err(Error::Argument(format!(
                    "curve '{label}' has invalid snr {snr}"
                )));
            }
            if !value.is_finite() {
                return Err(Error::Argument(format!(
                    "curve '{label}' has non-finite value {value} at snr {snr}"
                )));
            }
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Argument(format!(
                "curve '{label}' snr grid is not strictly increasing"
            )));
        }
        Ok(CurveSeries { label, points, normalization })
    }

    /// The CSV rendering: header plus one row per point. Rows whose
    /// normalization is undefined (dof at snr = 0) are flagged as comment
    /// lines instead of being silently dropped.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("snr_db,snr,value,normalized_value\n");
        for &(snr, value) in &self.points {
            match self.normalization.apply(snr, value) {
                Some(norm) => {
                    let snr_db = 10.0 * snr.log10();
                    out.push_str(&format!("{snr_db},{snr},{value},{norm}\n"));
                }
                None => {
                    out.push_str(&format!(
                        "# skipped snr={snr}: {} normalization undefined\n",
                        self.normalization
                    ));
                }
            }
        }
        out
    }

    /// Writes the CSV to `path`, creating parent directories as needed.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)
                    .map_err(|e| Error::Argument(format!("cannot create {parent:?}: {e}")))?;
            }
        }
        let mut file = std::fs::File::create(path)
            .map_err(|e| Error::Argument(format!("cannot write {path:?}: {e}")))?;
        file.write_all(self.to_csv_string().as_bytes())
            .map_err(|e| Error::Argument(format!("cannot write {path:?}: {e}")))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_rejects_bad_grids() {
        assert!(CurveSeries::new("empty", vec![], Normalization::None).is_err());
        assert!(CurveSeries::new("neg", vec![(-1.0, 0.0)], Normalization::None).is_err());
        assert!(CurveSeries::new(
            "unsorted",
            vec![(2.0, 0.0), (1.0, 0.0)],
            Normalization::None
        )
        .is_err());
        assert!(CurveSeries::new(
            "dup",
            vec![(1.0, 0.0), (1.0, 0.0)],
            Normalization::None
        )
        .is_err());
        assert!(CurveSeries::new("nan", vec![(1.0, f64::NAN)], Normalization::None).is_err());
    }

    #[test]
    fn csv_layout_and_roundtrip_formatting() {
        let c = CurveSeries::new(
            "demo",
            vec![(0.1, 0.25), (1.0, 0.5), (100.0, 0.125)],
            Normalization::None,
        )
        .unwrap();
        let text = c.to_csv_string();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "snr_db,snr,value,normalized_value");
        assert_eq!(lines[1], "-10,0.1,0.25,0.25");
        assert_eq!(lines[2], "0,1,0.5,0.5");
        assert_eq!(lines[3], "20,100,0.125,0.125");
        // Shortest-round-trip: parsing back reproduces the exact bits.
        for line in &lines[1..] {
            let snr: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
            assert!(c.points.iter().any(|&(s, _)| s.to_bits() == snr.to_bits()));
        }
    }

    #[test]
    fn dof_skips_snr_zero_with_flag() {
        let c = CurveSeries::new(
            "dof",
            vec![(0.0, 0.0), (1.0, 0.3465735902799726)],
            Normalization::Dof,
        )
        .unwrap();
        let text = c.to_csv_string();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[1].starts_with("# skipped snr=0"));
        let norm: f64 = lines[2].rsplit(',').next().unwrap().parse().unwrap();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mmse_dim_normalization() {
        let c = CurveSeries::new(
            "gauss",
            vec![(1.0, 0.5), (3.0, 0.25)],
            Normalization::MmseDim,
        )
        .unwrap();
        let text = c.to_csv_string();
        for line in text.lines().skip(1) {
            let norm: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn normalization_parsing() {
        assert_eq!("none".parse::<Normalization>().unwrap(), Normalization::None);
        assert_eq!("dof".parse::<Normalization>().unwrap(), Normalization::Dof);
        assert_eq!("mmse_dim".parse::<Normalization>().unwrap(), Normalization::MmseDim);
        assert!("db".parse::<Normalization>().is_err());
        assert_eq!(Normalization::MmseDim.to_string(), "mmse_dim");
    }

    #[test]
    fn write_csv_creates_parents() {
        let dir = std::env::temp_dir().join(format!("series_test_{}", std::process::id()));
        let path = dir.join("nested/demo.csv");
        let c = CurveSeries::new("demo", vec![(1.0, 1.0)], Normalization::None).unwrap();
        c.write_csv(&path).unwrap();
        let body = std::fs::read_to_string(&path).unwrap();
        assert_eq!(body, c.to_csv_string());
        std::fs::remove_dir_all(&dir).ok();
    }
}
