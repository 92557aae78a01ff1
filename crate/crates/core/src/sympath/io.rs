use super::{Mat, SymplecticPath};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleJson {
    pub t: f64,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
}

/// `{ "n": int, "samples": [ { "t": float, "A": [[float]] } ] }`, row-major.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathJson {
    pub n: usize,
    pub samples: Vec<SampleJson>,
}

impl PathJson {
    pub fn from_path(p: &SymplecticPath) -> Self {
        PathJson {
            n: p.n(),
            samples: p
                .knots()
                .iter()
                .map(|k| SampleJson {
                    t: k.t,
                    a: (0..k.a.nrows()).map(|i| k.a.row(i).iter().copied().collect()).collect(),
                })
                .collect(),
        }
    }

    pub fn to_path(&self) -> Result<SymplecticPath> {
        let d = 2 * self.n;
        let mut samples = Vec::with_capacity(self.samples.len());
        for s in &self.samples {
            if s.a.len() != d || s.a.iter().any(|r| r.len() != d) {
                return Err(Error::Parse(format!("sample at t={} is not {d}x{d}", s.t)));
            }
            samples.push((s.t, Mat::from_fn(d, d, |i, j| s.a[i][j])));
        }
        SymplecticPath::new(self.n, samples)
    }
}

impl SymplecticPath {
    pub fn from_json(text: &str) -> Result<Self> {
        let pj: PathJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        pj.to_path()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PathJson::from_path(self)).expect("path serializes")
    }
}
