//! CSV export of swept S-parameters.
//!
//! One row per frequency point: the frequency in hertz, then each matrix
//! entry in row-major order as a magnitude in dB and a phase in degrees.
//! A two-port therefore has 9 columns, a three-port 19.

use teesplit_core::metrics::magnitude_db;
use teesplit_core::SParamBlock;

pub fn write_csv(block: &SParamBlock) -> String {
    let ports = block.ports();
    let mut out = String::from("freq_hz");
    for row in 0..ports {
        for col in 0..ports {
            out.push_str(&format!(
                ",s{}{}_db,s{}{}_deg",
                row + 1,
                col + 1,
                row + 1,
                col + 1
            ));
        }
    }
    out.push('\n');
    for (k, freq) in block.grid().iter().enumerate() {
        out.push_str(&format!("{freq}"));
        for row in 0..ports {
            for col in 0..ports {
                let s = block.s(k, row, col);
                out.push_str(&format!(",{},{}", magnitude_db(s), s.arg().to_degrees()));
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use teesplit_core::network::ComplexScalar;
    use teesplit_core::FrequencyGrid;

    #[test]
    fn three_port_has_nineteen_columns() {
        let grid = FrequencyGrid::uniform(1e9, 2e9, 2).unwrap();
        let half = ComplexScalar::new(0.5, 0.0);
        let block = SParamBlock::new(grid, 50.0, 3, vec![half; 18]).unwrap();
        let text = write_csv(&block);
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert_eq!(header.split(',').count(), 19);
        assert!(header.starts_with("freq_hz,s11_db,s11_deg,s12_db"));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 19);
        assert_eq!(first[0], "1000000000");
        let s11_db: f64 = first[1].parse().unwrap();
        assert!((s11_db - (-6.020_599_913_28)).abs() < 1e-9);
        let s11_deg: f64 = first[2].parse().unwrap();
        assert_eq!(s11_deg, 0.0);
    }

    #[test]
    fn two_port_has_nine_columns() {
        let grid = FrequencyGrid::uniform(1e9, 2e9, 2).unwrap();
        let j = ComplexScalar::new(0.0, 0.25);
        let block = SParamBlock::new(grid, 50.0, 2, vec![j; 8]).unwrap();
        let text = write_csv(&block);
        assert_eq!(text.lines().next().unwrap().split(',').count(), 9);
        let first: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        let s11_deg: f64 = first[2].parse().unwrap();
        assert_eq!(s11_deg, 90.0);
    }
}
