//! Decibel conversions.

/// `10 log₁₀ x`.
pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln2_is_minus_1_59_db() {
        assert!((to_db(std::f64::consts::LN_2) + 1.5917).abs() < 1e-4);
        assert!((from_db(to_db(0.37)) - 0.37).abs() < 1e-15);
    }
}
