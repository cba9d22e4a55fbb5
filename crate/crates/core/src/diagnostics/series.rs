use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One sample of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRecord {
    pub step: u64,
    pub t: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub r_max: f64,
    #[serde(rename = "P")]
    pub power: f64,
    #[serde(rename = "H")]
    pub hamiltonian: f64,
    /// `‖Δψ‖²`, the scale of the kinetic part of `H`.
    pub kinetic: f64,
    pub dt: f64,
    pub n_core: usize,
    pub regrids: u64,
}

/// Per-regrid bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegridEvent {
    pub step: u64,
    pub t: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub power_before: f64,
    pub power_after: f64,
    pub spacing_ratio: f64,
    pub sweeps: usize,
}

impl RegridEvent {
    pub fn relative_power_jump(&self) -> f64 {
        (self.power_after - self.power_before).abs() / self.power_before.abs().max(f64::MIN_POSITIVE)
    }
}

/// Time series of a run, kept in step order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiagnosticsSeries {
    pub records: Vec<DiagnosticRecord>,
    pub regrids: Vec<RegridEvent>,
}

impl DiagnosticsSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Appends a record; times must increase strictly and `L` be positive.
    pub fn push(&mut self, rec: DiagnosticRecord) -> Result<()> {
        if let Some(prev) = self.records.last() {
            if !(rec.t > prev.t) {
                return Err(Error::InvalidInput(format!(
                    "series times must increase: {} after {}",
                    rec.t, prev.t
                )));
            }
        }
        if !(rec.l > 0.0) || !(rec.r_max >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "invalid record: L = {}, r_max = {}",
                rec.l, rec.r_max
            )));
        }
        self.records.push(rec);
        Ok(())
    }

    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.l).collect()
    }

    pub fn ring_radii(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.r_max).collect()
    }

    pub fn min_width(&self) -> Option<f64> {
        self.records.iter().map(|r| r.l).reduce(f64::min)
    }

    /// Largest `|P - P_0| / P_0` over the series.
    pub fn max_power_drift(&self) -> f64 {
        let Some(first) = self.records.first() else {
            return 0.0;
        };
        self.records
            .iter()
            .map(|r| (r.power - first.power).abs() / first.power.abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }

    /// Largest `|H - H_0|` relative to the current `‖Δψ‖²`.
    ///
    /// Both terms of `H` grow like `L^{-4}` during collapse and nearly cancel,
    /// so drift is measured against the size of the individual terms.
    pub fn max_hamiltonian_drift(&self) -> f64 {
        let Some(first) = self.records.first() else {
            return 0.0;
        };
        self.records
            .iter()
            .map(|r| (r.hamiltonian - first.hamiltonian).abs() / r.kinetic.max(first.kinetic).max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }

    pub fn max_regrid_power_jump(&self) -> f64 {
        self.regrids
            .iter()
            .map(RegridEvent::relative_power_jump)
            .fold(0.0, f64::max)
    }

    /// Comma-separated text with a header row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.records {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(input);
        let mut s = Self::new();
        for rec in rd.deserialize() {
            s.push(rec?)?;
        }
        Ok(s)
    }

    pub fn write_regrids_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.regrids {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_regrids_csv<R: Read>(input: R) -> Result<Vec<RegridEvent>> {
        let mut rd = csv::Reader::from_reader(input);
        rd.deserialize().map(|r| r.map_err(Error::from)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(step: u64, t: f64, l: f64) -> DiagnosticRecord {
        DiagnosticRecord {
            step,
            t,
            l,
            r_max: 5.0,
            power: 1.0,
            hamiltonian: 0.5,
            kinetic: 2.0,
            dt: 1e-3,
            n_core: 100,
            regrids: 0,
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let mut s = DiagnosticsSeries::new();
        for k in 0..5 {
            s.push(rec(k, 0.1 * k as f64 + 1e-17, 1.0 / (k as f64 + 1.3))).unwrap();
        }
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let header = String::from_utf8(buf.clone()).unwrap();
        assert!(header.starts_with("step,t,L,r_max,P,H,kinetic,dt,n_core,regrids"));
        let back = DiagnosticsSeries::read_csv(&buf[..]).unwrap();
        assert_eq!(back.records, s.records);
    }

    #[test]
    fn push_enforces_invariants() {
        let mut s = DiagnosticsSeries::new();
        s.push(rec(0, 0.0, 1.0)).unwrap();
        assert!(s.push(rec(1, 0.0, 1.0)).is_err());
        assert!(s.push(rec(1, 1.0, 0.0)).is_err());
    }
}
