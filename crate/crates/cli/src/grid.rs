//! Grid specifications: `0.1,0.5,1`, `lin:lo:hi:n` or `log:lo:hi:n`.

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    source: String,
    points: Vec<f64>,
}

impl Grid {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Rejects any point outside `[lo, hi]` (or the open interval when `open`).
    pub fn within(&self, name: &str, lo: f64, hi: f64, open: bool) -> Result<(), String> {
        for &p in &self.points {
            let ok = if open { p > lo && p < hi } else { p >= lo && p <= hi };
            if !ok {
                let (l, r) = if open { ('(', ')') } else { ('[', ']') };
                return Err(format!("{name} point {p} outside {l}{lo}, {hi}{r}"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("not finite: {s:?}"))
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let points = match parts.as_slice() {
            [kind @ ("lin" | "log"), lo, hi, n] => {
                let (lo, hi) = (number(lo)?, number(hi)?);
                let n: usize = n.trim().parse().map_err(|_| format!("bad point count {n:?}"))?;
                if n < 2 || !(hi > lo) {
                    return Err(format!("{s:?}: need n >= 2 and hi > lo"));
                }
                if *kind == "log" && lo <= 0.0 {
                    return Err(format!("{s:?}: log grids need lo > 0"));
                }
                (0..n)
                    .map(|i| {
                        let w = i as f64 / (n - 1) as f64;
                        match *kind {
                            "lin" => lo + (hi - lo) * w,
                            _ => (lo.ln() + (hi.ln() - lo.ln()) * w).exp(),
                        }
                    })
                    .collect()
            }
            [list] => list.split(',').map(number).collect::<Result<Vec<_>, _>>()?,
            _ => return Err(format!("unrecognised grid {s:?}; use a,b,c or lin:lo:hi:n or log:lo:hi:n")),
        };
        if points.is_empty() {
            return Err("empty grid".into());
        }
        Ok(Self { source: s.to_string(), points })
    }
}
