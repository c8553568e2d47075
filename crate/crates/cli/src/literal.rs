//! Parsers for complex literals (`re+imi`) and grids (`start:stop:count`).

use num_complex::Complex64;

type C = Complex64;

/// Parses `2`, `-1.5`, `2+0i`, `-2+0.5i`, `1e-3-2.5e2i`, `3i` or `-i`.
pub fn parse_complex(s: &str) -> Result<C, String> {
    let bad = || format!("invalid complex literal {s:?}, expected re+imi");
    let s = s.trim();
    if s.is_empty() || s.contains(char::is_whitespace) {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| C::new(re, 0.0)).map_err(|_| bad());
    };
    // the imaginary part starts at the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok(C::new(re, im))
}

/// Equispaced points from `start` to `stop` inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub start: C,
    pub stop: C,
    pub count: usize,
}

impl Grid {
    pub fn real(start: f64, stop: f64, count: usize) -> Self {
        Self {
            start: C::new(start, 0.0),
            stop: C::new(stop, 0.0),
            count,
        }
    }

    pub fn points(&self) -> Vec<C> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            m => (0..m)
                .map(|k| self.start + (self.stop - self.start) * (k as f64 / (m - 1) as f64))
                .collect(),
        }
    }
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(format!("invalid grid {s:?}, expected start:stop:count"));
    };
    let count = count
        .trim()
        .parse::<usize>()
        .map_err(|_| format!("invalid grid count {count:?}"))?;
    Ok(Grid {
        start: parse_complex(start)?,
        stop: parse_complex(stop)?,
        count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("2+0i").unwrap(), C::new(2.0, 0.0));
        assert_eq!(parse_complex("-2+0.5i").unwrap(), C::new(-2.0, 0.5));
        assert_eq!(parse_complex("1e-3-2.5e2i").unwrap(), C::new(1e-3, -250.0));
        assert_eq!(parse_complex("-1.5e+2+1E-1i").unwrap(), C::new(-150.0, 0.1));
        assert_eq!(parse_complex("3i").unwrap(), C::new(0.0, 3.0));
        assert_eq!(parse_complex("-i").unwrap(), C::new(0.0, -1.0));
        assert_eq!(parse_complex("1+i").unwrap(), C::new(1.0, 1.0));
        assert_eq!(parse_complex("-7").unwrap(), C::new(-7.0, 0.0));
        for bad in ["", "1 + 2i", "2+xi", "i2", "1+2j"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn grids() {
        let g = parse_grid("-10:10:5").unwrap();
        assert_eq!(g.points().iter().map(|z| z.re).collect::<Vec<_>>(), [-10.0, -5.0, 0.0, 5.0, 10.0]);
        assert!(parse_grid("0:1:0").unwrap().points().is_empty());
        assert_eq!(parse_grid("1+1i:2+2i:1").unwrap().points(), [C::new(1.0, 1.0)]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:-3").is_err());
    }
}
