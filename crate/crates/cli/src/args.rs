//! Flag-value parsers: value ranges (`start..stopxCOUNT`), sweeps
//! (`start:stop:COUNT`), and grid overrides
//! (`qmin,qmax,pmin,pmax,nq,np`).

use std::str::FromStr;

use anyhow::{anyhow, bail};
use pacs_wigner::GridSpec;

/// Either a single value or a uniform range `start..stopxCOUNT`.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl ValueRange {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| self.start + i as f64 * step)
            .collect()
    }
}

impl FromStr for ValueRange {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some((span, count)) = s.rsplit_once('x') {
            let (start, stop) = span
                .split_once("..")
                .ok_or_else(|| anyhow!("expected start..stopxCOUNT, got {:?}", s))?;
            let range = ValueRange {
                start: start.parse()?,
                stop: stop.parse()?,
                count: count.parse()?,
            };
            if range.count == 0 {
                bail!("range count must be positive: {:?}", s);
            }
            if range.count > 1 && range.stop < range.start {
                bail!("range must be ascending: {:?}", s);
            }
            Ok(range)
        } else if s.contains("..") {
            bail!("range {:?} is missing its xCOUNT suffix", s);
        } else {
            let v: f64 = s.parse()?;
            Ok(ValueRange {
                start: v,
                stop: v,
                count: 1,
            })
        }
    }
}

/// Sweep syntax `start:stop:COUNT`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepRange {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| self.start + i as f64 * step)
            .collect()
    }
}

impl FromStr for SweepRange {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            bail!("expected start:stop:COUNT, got {:?}", s);
        }
        let sweep = SweepRange {
            start: parts[0].parse()?,
            stop: parts[1].parse()?,
            count: parts[2].parse()?,
        };
        if sweep.count == 0 {
            bail!("sweep count must be positive: {:?}", s);
        }
        Ok(sweep)
    }
}

/// Grid override `qmin,qmax,pmin,pmax,nq,np`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridArg(pub GridSpec);

impl FromStr for GridArg {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 6 {
            bail!("expected qmin,qmax,pmin,pmax,nq,np, got {:?}", s);
        }
        let spec = GridSpec::new(
            parts[0].parse()?,
            parts[1].parse()?,
            parts[2].parse()?,
            parts[3].parse()?,
            parts[4].parse()?,
            parts[5].parse()?,
        )?;
        Ok(GridArg(spec))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => bail!("unknown format {:?} (expected csv or json)", other),
        }
    }
}
