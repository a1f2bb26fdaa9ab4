use super::GridMeasure;
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::io::{BufRead, Write};

impl GridMeasure {
    /// CSV form: a header `m=<int>` followed by `i,j,mass` rows with 1-based
    /// indices and masses printed to 17 significant digits.
    pub fn to_csv_string(&self) -> String {
        let m = self.m();
        let mut s = String::with_capacity(32 * m * m + 16);
        let _ = writeln!(s, "m={m}");
        for i in 0..m {
            for j in 0..m {
                let _ = writeln!(s, "{},{},{:.16e}", i + 1, j + 1, self.mass(i, j));
            }
        }
        s
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(self.to_csv_string().as_bytes())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut m = None;
        let mut mass = Vec::new();
        let mut seen = Vec::new();
        for (n, line) in r.lines().enumerate() {
            let lineno = n + 1;
            let line = line.map_err(|e| Error::Parse {
                line: lineno,
                message: e.to_string(),
            })?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some(size) = m else {
                let v = line
                    .strip_prefix("m=")
                    .and_then(|v| v.trim().parse::<usize>().ok())
                    .filter(|&v| v > 0)
                    .ok_or_else(|| Error::Parse {
                        line: lineno,
                        message: "expected header m=<int>".into(),
                    })?;
                m = Some(v);
                mass = vec![0.0; v * v];
                seen = vec![false; v * v];
                continue;
            };
            let bad = |message: &str| Error::Parse {
                line: lineno,
                message: message.into(),
            };
            let mut parts = line.split(',').map(str::trim);
            let (Some(i), Some(j), Some(p), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
                return Err(bad("expected i,j,mass"));
            };
            let i: usize = i.parse().map_err(|_| bad("bad row index"))?;
            let j: usize = j.parse().map_err(|_| bad("bad column index"))?;
            let p: f64 = p.parse().map_err(|_| bad("bad mass"))?;
            if !(1..=size).contains(&i) || !(1..=size).contains(&j) {
                return Err(bad("index out of range"));
            }
            let k = (i - 1) * size + (j - 1);
            if seen[k] {
                return Err(bad("duplicate cell"));
            }
            seen[k] = true;
            mass[k] = p;
        }
        let m = m.ok_or(Error::Parse {
            line: 0,
            message: "missing header".into(),
        })?;
        if seen.iter().any(|s| !s) {
            return Err(Error::Parse {
                line: 0,
                message: "missing cells".into(),
            });
        }
        GridMeasure::new(m, mass)
    }

    pub fn from_csv_str(s: &str) -> Result<Self> {
        Self::read_csv(s.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomStream;

    #[test]
    fn round_trip_is_bit_exact() {
        let mut rng = RandomStream::new(3);
        let mu = GridMeasure::from_weights(9, (0..81).map(|_| rng.uniform()).collect()).unwrap();
        let back = GridMeasure::from_csv_str(&mu.to_csv_string()).unwrap();
        assert_eq!(mu, back);
    }

    #[test]
    fn malformed_input() {
        assert!(GridMeasure::from_csv_str("1,1,1.0\n").is_err());
        assert!(GridMeasure::from_csv_str("m=1\n1,2,1.0\n").is_err());
        assert!(GridMeasure::from_csv_str("m=2\n1,1,1.0\n").is_err());
        assert!(GridMeasure::from_csv_str("m=1\n# note\n1,1,1.0\n").is_ok());
    }
}
