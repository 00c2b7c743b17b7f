//! Small numeric helpers shared across modules.

/// Round half-up: 0.5 always rounds toward +infinity.
///
/// All call sites feed non-negative values, where this matches the usual
/// "round half away from zero" convention.
pub(crate) fn round_half_up(v: f64) -> f64 {
    libm::floor(v + 0.5)
}

/// Round a non-negative intensity to `u8`, clamping to 255.
pub(crate) fn round_clamp_u8(v: f64) -> u8 {
    let r = round_half_up(if v < 0.0 { 0.0 } else { v });
    if r >= 255.0 {
        255
    } else {
        r as u8
    }
}

/// Lower median: for an even number of elements the smaller of the two
/// middle values is taken. Returns 0 for an empty slice.
pub(crate) fn lower_median(values: &mut [u32]) -> u32 {
    if values.is_empty() {
        return 0;
    }
    values.sort_unstable();
    values[(values.len() - 1) / 2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_half_up_at_half() {
        assert_eq!(round_half_up(2.5), 3.0);
        assert_eq!(round_half_up(2.4999), 2.0);
        assert_eq!(round_half_up(0.0), 0.0);
    }

    #[test]
    fn clamp_saturates() {
        assert_eq!(round_clamp_u8(255.4), 255);
        assert_eq!(round_clamp_u8(300.0), 255);
        assert_eq!(round_clamp_u8(-1.0), 0);
    }

    #[test]
    fn lower_median_rules() {
        assert_eq!(lower_median(&mut [10, 20, 30]), 20);
        assert_eq!(lower_median(&mut [20, 10]), 10);
        assert_eq!(lower_median(&mut []), 0);
    }
}
