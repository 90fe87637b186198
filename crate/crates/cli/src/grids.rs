//! Parsers for list-valued flags.

/// `10,100,1000` or `min:max:steps` (geometric, both ends included).
/// The result is positive and strictly increasing.
pub fn parse_time_grid(text: &str) -> Result<Vec<f64>, String> {
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [lo, hi, steps] = parts[..] else {
            return Err(format!("geometric grid '{text}' must be min:max:steps"));
        };
        let lo = parse_float(lo)?;
        let hi = parse_float(hi)?;
        let steps: usize = steps
            .trim()
            .parse()
            .map_err(|_| format!("step count '{steps}' is not a whole number"))?;
        if !(lo > 0.0) || !(hi > lo) || steps < 2 {
            return Err(format!("geometric grid needs 0 < min < max and at least 2 steps, got '{text}'"));
        }
        let span = hi / lo;
        (0..steps)
            .map(|i| if i + 1 == steps { hi } else { lo * span.powf(i as f64 / (steps - 1) as f64) })
            .collect()
    } else {
        parse_float_list(text)?
    };
    if values.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
        return Err(format!("times must be positive and finite, got '{text}'"));
    }
    if values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(format!("times must be strictly increasing, got '{text}'"));
    }
    Ok(values)
}

/// `0..6` (inclusive), `2`, or `0,2,4`.
pub fn parse_degrees(text: &str) -> Result<Vec<usize>, String> {
    let int = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| format!("degree '{s}' is not a non-negative integer"))
    };
    if let Some((lo, hi)) = text.split_once("..") {
        let (lo, hi) = (int(lo)?, int(hi.trim_start_matches('='))?);
        if hi < lo {
            return Err(format!("empty degree range '{text}'"));
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',').map(int).collect()
}

pub fn parse_float_list(text: &str) -> Result<Vec<f64>, String> {
    if text.trim().is_empty() {
        return Err("empty list".into());
    }
    text.split(',').map(parse_float).collect()
}

fn parse_float(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("'{s}' is not a finite number"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comma_lists() {
        assert_eq!(parse_time_grid("10,100, 1e3").unwrap(), vec![10.0, 100.0, 1000.0]);
        assert!(parse_time_grid("10,5").is_err());
        assert!(parse_time_grid("0,5").is_err());
        assert!(parse_time_grid("1,x").is_err());
    }

    #[test]
    fn geometric_grids_hit_both_ends() {
        let g = parse_time_grid("10:10000:4").unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g[0], 10.0);
        assert_eq!(g[3], 10000.0);
        assert!((g[1] - 100.0).abs() < 1e-12 && (g[2] - 1000.0).abs() < 1e-11);
        assert_eq!(parse_time_grid("0.25:4:5").unwrap(), vec![0.25, 0.5, 1.0, 2.0, 4.0]);
        assert_eq!(parse_time_grid("1:1024:11").unwrap()[10], 1024.0);
        for bad in ["1:10", "0:10:3", "10:1:3", "1:10:1", "1:10:x"] {
            assert!(parse_time_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn degree_specs() {
        assert_eq!(parse_degrees("0..6").unwrap(), (0..=6).collect::<Vec<_>>());
        assert_eq!(parse_degrees("1..=2").unwrap(), vec![1, 2]);
        assert_eq!(parse_degrees("3").unwrap(), vec![3]);
        assert_eq!(parse_degrees("0,4").unwrap(), vec![0, 4]);
        assert!(parse_degrees("4..1").is_err());
        assert!(parse_degrees("-1").is_err());
    }
}
