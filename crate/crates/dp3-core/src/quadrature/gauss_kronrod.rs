//! The 15-point Kronrod extension of the 7-point Gauss rule.

use crate::scalar::Real;

/// Kronrod abscissae on `[-1, 1]`, non-negative half, decreasing.
pub const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

pub const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed Kronrod nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
pub const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// The 15 nodes of `[s0, s1]` in increasing order, with Kronrod and Gauss
/// weights (the latter zero on Kronrod-only nodes).
pub fn nodes<T: Real>(s0: T, s1: T) -> [(T, T, T); 15] {
    let center = (s0 + s1) * T::lit(0.5);
    let half = (s1 - s0) * T::lit(0.5);
    std::array::from_fn(|i| {
        // i = 0..7 left of center, 7 is the center, 8..15 right
        let (k, sign) = if i < 7 { (i, -1.0) } else { (14 - i, 1.0) };
        let x = center + half * T::lit(sign * XGK[k]);
        let wg = if k % 2 == 1 { WG[k / 2] } else { 0.0 };
        (x, half * T::lit(WGK[k]), half * T::lit(wg))
    })
}

/// Kronrod estimate and `|K - G|` for a scalar integrand.
pub fn gk15<T: Real, F: Fn(T) -> T>(f: F, s0: T, s1: T) -> (T, T) {
    let (mut k, mut g) = (T::zero(), T::zero());
    for (x, wk, wg) in nodes(s0, s1) {
        let v = f(x);
        k = k + wk * v;
        g = g + wg * v;
    }
    (k, (k - g).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_length() {
        let n = nodes(0.0f64, 2.0);
        let sk: f64 = n.iter().map(|x| x.1).sum();
        let sg: f64 = n.iter().map(|x| x.2).sum();
        assert!((sk - 2.0).abs() < 1e-14 && (sg - 2.0).abs() < 1e-14);
        assert!(n.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn exact_for_polynomials() {
        // Gauss 7 is exact to degree 13, Kronrod 15 to degree 22
        let (k, e) = gk15(|x: f64| x.powi(13), 0.0, 1.0);
        assert!((k - 1.0 / 14.0).abs() < 1e-15 && e < 1e-14);
        let (k, _) = gk15(|x: f64| x.powi(22), -1.0, 1.0);
        assert!((k - 2.0 / 23.0).abs() < 1e-14);
    }
}
