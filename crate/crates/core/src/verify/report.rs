use serde::{Deserialize, Serialize};

/// Half-width of the consistency band, in standard errors.
pub const CONSISTENCY_SIGMAS: f64 = 4.0;

pub const CSV_HEADER: &str = "quantity,estimate,std_error,n,seed,ks,claimed,verdict";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Consistent,
    Inconsistent,
    Informational,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Consistent => "Consistent",
            Verdict::Inconsistent => "Inconsistent",
            Verdict::Informational => "Informational",
        }
    }
}

/// One Monte-Carlo verification record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub quantity: String,
    pub estimate: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub ks_statistic: Option<f64>,
    pub claimed_value: Option<f64>,
    pub verdict: Verdict,
}

impl McReport {
    /// A report whose verdict follows the 4·SE rule against `claimed`.
    pub fn gated(
        quantity: impl Into<String>,
        estimate: f64,
        std_error: f64,
        n_samples: u64,
        seed: u64,
        ks_statistic: Option<f64>,
        claimed: f64,
    ) -> Self {
        let verdict = if (estimate - claimed).abs() <= CONSISTENCY_SIGMAS * std_error {
            Verdict::Consistent
        } else {
            Verdict::Inconsistent
        };
        Self {
            quantity: quantity.into(),
            estimate,
            std_error,
            n_samples,
            seed,
            ks_statistic,
            claimed_value: Some(claimed),
            verdict,
        }
    }

    pub fn informational(
        quantity: impl Into<String>,
        estimate: f64,
        std_error: f64,
        n_samples: u64,
        seed: u64,
        ks_statistic: Option<f64>,
        claimed: Option<f64>,
    ) -> Self {
        Self {
            quantity: quantity.into(),
            estimate,
            std_error,
            n_samples,
            seed,
            ks_statistic,
            claimed_value: claimed,
            verdict: Verdict::Informational,
        }
    }

    /// Distance from the claim in standard errors, if there is a claim.
    pub fn z_score(&self) -> Option<f64> {
        self.claimed_value
            .map(|c| (self.estimate - c).abs() / self.std_error.max(f64::MIN_POSITIVE))
    }

    /// CSV row matching [`CSV_HEADER`], numbers at 6 significant digits.
    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map(fmt_sig6).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.quantity,
            fmt_sig6(self.estimate),
            fmt_sig6(self.std_error),
            self.n_samples,
            self.seed,
            opt(self.ks_statistic),
            opt(self.claimed_value),
            self.verdict.name()
        )
    }
}

/// `%.6g`-style formatting.
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        trim_zeros(&fixed)
    } else {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { "-" } else { "+" }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_matches_printf_g() {
        assert_eq!(fmt_sig6(15.342640972002734), "15.3426");
        assert_eq!(fmt_sig6(0.1534264097), "0.153426");
        assert_eq!(fmt_sig6(100.0), "100");
        assert_eq!(fmt_sig6(-2.5), "-2.5");
        assert_eq!(fmt_sig6(1234567.0), "1.23457e+06");
        assert_eq!(fmt_sig6(0.0000123456789), "1.23457e-05");
        assert_eq!(fmt_sig6(0.000123456789), "0.000123457");
        assert_eq!(fmt_sig6(999999.5), "1e+06");
        assert_eq!(fmt_sig6(0.0), "0");
    }

    #[test]
    fn verdict_follows_four_sigma_rule() {
        let ok = McReport::gated("x", 1.0 + 3.9e-3, 1e-3, 10, 0, None, 1.0);
        assert_eq!(ok.verdict, Verdict::Consistent);
        let bad = McReport::gated("x", 1.0 + 4.1e-3, 1e-3, 10, 0, None, 1.0);
        assert_eq!(bad.verdict, Verdict::Inconsistent);
        let info = McReport::informational("x", 5.0, 1e-3, 10, 0, Some(0.2), Some(1.0));
        assert_eq!(info.verdict, Verdict::Informational);
    }

    #[test]
    fn csv_row_layout() {
        let r = McReport::gated("kl", 15.34271234, 0.00712, 1_000_000, 7, None, 15.342641);
        assert_eq!(r.csv_row(), "kl,15.3427,0.00712,1000000,7,,15.3426,Consistent");
        assert_eq!(r.csv_row().split(',').count(), CSV_HEADER.split(',').count());
    }
}
