//! Per-iteration training records and their CSV serialization.

use std::io::Write;

use serde::{Deserialize, Serialize};

/// Loss components at the start of one iteration. Fields are `None` for
/// models absent from the run (e.g. no physical loss in a pure-network
/// baseline).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct LossBreakdown {
    pub l_phy: Option<f64>,
    pub l_syn: Option<f64>,
    pub l_int: Option<f64>,
    /// beta * L_phy + w_int * L_int.
    pub l1: Option<f64>,
    /// alpha * L_syn + w_int * L_int.
    pub l2: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IterRecord {
    pub iter: usize,
    pub losses: LossBreakdown,
    /// Physical parameters (natural units) at the start of the iteration.
    pub lambda: Option<Vec<f64>>,
    /// FNV-1a hash of the network parameter bits; trajectory fingerprint.
    pub theta_checksum: Option<u64>,
    pub e_s_phy: Option<f64>,
    pub e_s_syn: Option<f64>,
    pub e_p: Option<f64>,
}

/// Full run record: per-iteration losses, parameter trajectory, metric
/// snapshots, the stopping iteration and wall-clock time.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TrainHistory {
    pub records: Vec<IterRecord>,
    /// Iteration at which the stopping rule fired, if it did.
    pub stopped_at: Option<usize>,
    pub wall_clock_secs: f64,
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl TrainHistory {
    pub const CSV_HEADER: &'static str = "iter,L_phy,L_syn,L_int,L1,L2,e_s_phy,e_s_syn,e_p";

    /// Streams the history as CSV. Unavailable cells stay empty; float cells
    /// use the shortest round-trip representation, so identical runs produce
    /// byte-identical files.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", Self::CSV_HEADER)?;
        for r in &self.records {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{}",
                r.iter,
                cell(r.losses.l_phy),
                cell(r.losses.l_syn),
                cell(r.losses.l_int),
                cell(r.losses.l1),
                cell(r.losses.l2),
                cell(r.e_s_phy),
                cell(r.e_s_syn),
                cell(r.e_p),
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec");
        String::from_utf8(buf).expect("CSV is ASCII")
    }

    /// Interaction-loss column, for stopping diagnostics and tests.
    pub fn interaction_history(&self) -> Vec<f64> {
        self.records
            .iter()
            .filter_map(|r| r.losses.l_int)
            .collect()
    }

    pub fn final_lambda(&self) -> Option<&[f64]> {
        self.records
            .iter()
            .rev()
            .find_map(|r| r.lambda.as_deref())
    }
}

/// FNV-1a over f64 bit patterns; fingerprints parameter vectors cheaply.
pub fn params_checksum(values: &[f64]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for v in values {
        for b in v.to_bits().to_le_bytes() {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    hash
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_empty_cells_for_missing_models() {
        let history = TrainHistory {
            records: vec![IterRecord {
                iter: 0,
                losses: LossBreakdown {
                    l_syn: Some(0.5),
                    l2: Some(0.5),
                    ..Default::default()
                },
                lambda: None,
                theta_checksum: Some(1),
                e_s_phy: None,
                e_s_syn: Some(0.1),
                e_p: None,
            }],
            stopped_at: None,
            wall_clock_secs: 0.0,
        };
        let csv = history.to_csv_string();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), TrainHistory::CSV_HEADER);
        assert_eq!(lines.next().unwrap(), "0,,0.5,,,0.5,,0.1,");
    }

    #[test]
    fn checksum_sensitive_to_bit_flips() {
        let a = params_checksum(&[1.0, 2.0]);
        let b = params_checksum(&[1.0, f64::from_bits(2.0f64.to_bits() + 1)]);
        assert_ne!(a, b);
        assert_eq!(a, params_checksum(&[1.0, 2.0]));
    }
}
