//! Scattered observation datasets and their construction from a reference
//! solution.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::point::{Region, SpaceTimePoint};
use crate::sampling::{rng_for, sample_uniform_points};

/// Anything a dataset can be sampled from: a closed-form solution or an
/// interpolated discrete trajectory.
pub trait Evaluable {
    fn n_components(&self) -> usize;
    /// Region the reference is defined on.
    fn domain(&self) -> Region;
    fn eval(&self, p: &SpaceTimePoint) -> Result<Vec<f64>, CoreError>;
}

/// Scattered space(-time) sample points with observed values.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Dataset {
    pub points: Vec<SpaceTimePoint>,
    /// One observation vector per point (length = solution components).
    pub observations: Vec<Vec<f64>>,
    pub region: Region,
    pub noise_std: f64,
    pub seed: u64,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn n_components(&self) -> usize {
        self.observations.first().map_or(0, Vec::len)
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if self.points.len() != self.observations.len() {
            return Err(CoreError::ShapeMismatch(format!(
                "{} points vs {} observations",
                self.points.len(),
                self.observations.len()
            )));
        }
        let nc = self.n_components();
        for (i, obs) in self.observations.iter().enumerate() {
            if obs.len() != nc {
                return Err(CoreError::ShapeMismatch(format!(
                    "observation {i} has {} components, expected {nc}",
                    obs.len()
                )));
            }
            if !obs.iter().all(|v| v.is_finite()) {
                return Err(CoreError::NonFinite(format!("observation {i}")));
            }
        }
        for (i, p) in self.points.iter().enumerate() {
            if !self.region.contains(p) {
                return Err(CoreError::ShapeMismatch(format!(
                    "point {i} ({}, {}, {}) outside the dataset region",
                    p.x, p.y, p.t
                )));
            }
        }
        Ok(())
    }
}

/// Samples `m` uniform points in `region`, evaluates `reference` there and
/// adds i.i.d. Gaussian noise of standard deviation `noise_std` (0 = clean).
/// Deterministic per `(region, m, seed, noise_std)`.
pub fn build_dataset(
    reference: &dyn Evaluable,
    region: &Region,
    m: usize,
    seed: u64,
    noise_std: f64,
) -> Result<Dataset, CoreError> {
    if !reference.domain().contains_region(region) {
        return Err(CoreError::ShapeMismatch(
            "dataset region extends outside the reference domain".into(),
        ));
    }
    let points = sample_uniform_points(region, m, seed)?;
    let mut observations = Vec::with_capacity(m);
    for p in &points {
        observations.push(reference.eval(p)?);
    }
    if noise_std > 0.0 {
        // Noise draws continue the same seeded stream family, one level up,
        // so clean and noisy datasets share point locations.
        let mut rng = rng_for(crate::sampling::derive_seed(seed, u64::MAX));
        let normal = Normal::new(0.0, noise_std)
            .map_err(|e| CoreError::InvalidField(format!("bad noise_std: {e}")))?;
        for obs in &mut observations {
            for v in obs.iter_mut() {
                *v += normal.sample(&mut rng);
            }
        }
    }
    let ds = Dataset {
        points,
        observations,
        region: *region,
        noise_std,
        seed,
    };
    ds.validate()?;
    Ok(ds)
}

/// Writes the dataset sample table as CSV with header `x,y,t,comp0[,comp1]`.
pub fn write_dataset_csv(dataset: &Dataset, path: &Path) -> Result<(), CoreError> {
    let mut w = BufWriter::new(File::create(path)?);
    let nc = dataset.n_components();
    let mut header = String::from("x,y,t");
    for c in 0..nc {
        header.push_str(&format!(",comp{c}"));
    }
    writeln!(w, "{header}")?;
    for (p, obs) in dataset.points.iter().zip(&dataset.observations) {
        write!(w, "{},{},{}", p.x, p.y, p.t)?;
        for v in obs {
            write!(w, ",{v}")?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a dataset CSV back into points and observation vectors.
pub fn read_dataset_csv(path: &Path) -> Result<(Vec<SpaceTimePoint>, Vec<Vec<f64>>), CoreError> {
    let r = BufReader::new(File::open(path)?);
    let mut lines = r.lines();
    let header = lines.next().ok_or(CoreError::Truncated)??;
    let cols: Vec<&str> = header.trim().split(',').collect();
    if cols.len() < 4 || cols[0] != "x" || cols[1] != "y" || cols[2] != "t" {
        return Err(CoreError::MalformedCsv {
            line: 1,
            msg: format!("unexpected header {header:?}"),
        });
    }
    let nc = cols.len() - 3;
    let mut points = Vec::new();
    let mut observations = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 3 + nc {
            return Err(CoreError::MalformedCsv {
                line: i + 2,
                msg: format!("expected {} fields, got {}", 3 + nc, fields.len()),
            });
        }
        let parse = |s: &str| -> Result<f64, CoreError> {
            s.parse().map_err(|e| CoreError::MalformedCsv {
                line: i + 2,
                msg: format!("bad float {s:?}: {e}"),
            })
        };
        points.push(SpaceTimePoint {
            x: parse(fields[0])?,
            y: parse(fields[1])?,
            t: parse(fields[2])?,
        });
        let obs: Result<Vec<f64>, _> = fields[3..].iter().map(|s| parse(s)).collect();
        observations.push(obs?);
    }
    Ok((points, observations))
}
