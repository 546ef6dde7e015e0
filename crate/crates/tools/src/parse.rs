//! Parsers for command-line values.

use rfc_core::{FieldSpec, LogBase, Ratio};

/// `start:end:step` (inclusive) or a comma-separated list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts[..] {
        [start, end, step] => {
            let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v}: {e}"));
            let (start, end, step) = (num(start)?, num(end)?, num(step)?);
            if !(step > 0.0) || end < start {
                return Err(format!("bad range {s}"));
            }
            let count = ((end - start) / step + 1e-9).floor() as usize + 1;
            // Round away accumulated binary noise, e.g. 0.15000000000000002.
            Ok((0..count)
                .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
                .collect())
        }
        [_] => s
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|e| format!("{v}: {e}")))
            .collect(),
        _ => Err(format!("bad grid {s}")),
    }
}

/// `6`, `9/2` or `4.5`.
pub fn parse_ratio(s: &str) -> Result<Ratio, String> {
    let s = s.trim();
    let r = if let Some((n, d)) = s.split_once('/') {
        Ratio::new(
            n.trim().parse().map_err(|e| format!("{s}: {e}"))?,
            d.trim().parse().map_err(|e| format!("{s}: {e}"))?,
        )
    } else if let Some((whole, frac)) = s.split_once('.') {
        if frac.len() > 6 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("{s}: too many decimals"));
        }
        let den = 10u32.pow(frac.len() as u32);
        let whole: u32 = if whole.is_empty() { 0 } else { whole.parse().map_err(|e| format!("{s}: {e}"))? };
        let frac: u32 = if frac.is_empty() { 0 } else { frac.parse().map_err(|e| format!("{s}: {e}"))? };
        let num = whole.checked_mul(den).and_then(|w| w.checked_add(frac)).ok_or(format!("{s}: overflow"))?;
        Ratio::new(num, den)
    } else {
        Ratio::integer(s.parse().map_err(|e| format!("{s}: {e}"))?)
    };
    if r.numerator == 0 || r.denominator == 0 {
        return Err(format!("{s}: must be positive"));
    }
    Ok(r.reduced())
}

/// 64-bit hex, with or without `0x`.
pub fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let t = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
    u64::from_str_radix(t, 16).map_err(|e| format!("{s}: {e}"))
}

pub fn parse_field(s: &str) -> Result<FieldSpec, String> {
    match s {
        "gf256" => Ok(FieldSpec::gf256()),
        "gf65536" => Ok(FieldSpec::gf65536()),
        _ => Err(format!("{s}: expected gf256 or gf65536")),
    }
}

pub fn parse_log_base(s: &str) -> Result<LogBase, String> {
    match s {
        "natural" | "e" | "ln" => Ok(LogBase::Natural),
        "base2" | "2" | "log2" => Ok(LogBase::Base2),
        _ => Err(format!("{s}: expected natural or base2")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = parse_grid("0:0.3:0.05").unwrap();
        assert_eq!(g, vec![0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3]);
        assert_eq!(parse_grid("0.1:0.5:0.05").unwrap().len(), 9);
        assert_eq!(parse_grid("0.1,0.2").unwrap(), vec![0.1, 0.2]);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn ratios() {
        assert_eq!(parse_ratio("6").unwrap(), Ratio::integer(6));
        assert_eq!(parse_ratio("9/2").unwrap(), Ratio::new(9, 2));
        assert_eq!(parse_ratio("4.5").unwrap(), Ratio::new(9, 2));
        assert_eq!(parse_ratio("4.0").unwrap(), Ratio::integer(4));
        assert!(parse_ratio("0").is_err());
        assert!(parse_ratio("3/0").is_err());
    }

    #[test]
    fn seeds() {
        assert_eq!(parse_seed("0xDEADBEEF").unwrap(), 0xDEAD_BEEF);
        assert_eq!(parse_seed("ff").unwrap(), 255);
        assert_eq!(parse_seed("ffffffffffffffff").unwrap(), u64::MAX);
        assert!(parse_seed("0x1ffffffffffffffff").is_err());
    }
}
