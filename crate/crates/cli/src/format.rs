//! Deterministic number formatting and the trajectory CSV.

use std::fmt::Write as _;

use phasespace_core::picture::TrajectorySample;

pub const CSV_HEADER: &str = "t,mean_x,mean_p,cov_xx,cov_xp,cov_pp";

/// 17 significant digits with a signed two-digit exponent: `-1.2500000000000000e-01`.
pub fn sci(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    let s = format!("{v:.16e}");
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let e: i32 = exp.parse().expect("exponent from float formatting");
            let sign = if e < 0 { '-' } else { '+' };
            format!("{mantissa}e{sign}{:02}", e.abs())
        }
        None => s,
    }
}

/// Fixed-point with ten decimals, negative zero folded to zero.
pub fn fixed(v: f64) -> String {
    let s = format!("{v:.10}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

pub fn trajectory_csv(samples: &[TrajectorySample]) -> String {
    let mut out = String::with_capacity(samples.len() * 150);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in samples {
        let (m, c) = (s.state.mean, s.state.cov);
        let _ = writeln!(out, "{},{},{},{},{},{}", sci(s.t), sci(m.x), sci(m.p), sci(c.xx()), sci(c.xp()), sci(c.pp()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scientific_has_17_digits() {
        assert_eq!(sci(1.0), "1.0000000000000000e+00");
        assert_eq!(sci(-0.125), "-1.2500000000000000e-01");
        assert_eq!(sci(6.02e23), "6.0200000000000000e+23");
        assert_eq!(sci(-0.0), "0.0000000000000000e+00");
        assert_eq!(sci(1e-5), "1.0000000000000001e-05");
        let x = std::f64::consts::PI;
        assert_eq!(sci(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn fixed_folds_negative_zero() {
        assert_eq!(fixed(-1e-13), "0.0000000000");
        assert_eq!(fixed(-0.5), "-0.5000000000");
        assert_eq!(fixed(240.0), "240.0000000000");
    }
}
