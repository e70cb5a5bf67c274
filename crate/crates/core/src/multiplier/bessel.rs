use std::f64::consts::PI;

const SMALL_ARG: f64 = 40.0;
const TRAPEZOID_INTERVALS: usize = 64;

/// Bessel function of the first kind of order zero.
///
/// For `|x| <= 40` the trapezoid rule on `J0(x) = (1/pi) int_0^pi cos(x sin t) dt`
/// is used; it is spectrally accurate since the integrand is periodic and the
/// aliased term is `2 J_128(x)`. Beyond that the Hankel asymptotic series.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SMALL_ARG {
        let h = PI / TRAPEZOID_INTERVALS as f64;
        let mut s = 0.5 * (1.0 + 1.0);
        for i in 1..TRAPEZOID_INTERVALS {
            s += (x * (i as f64 * h).sin()).cos();
        }
        s / TRAPEZOID_INTERVALS as f64
    } else {
        asymptotic(x)
    }
}

fn asymptotic(x: f64) -> f64 {
    // a_k = prod_{j=1..k} (2j-1)^2 / (k! 8^k)
    let mut p = 0.0;
    let mut q = 0.0;
    let mut term = 1.0;
    for k in 0..30 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            term *= odd * odd / (8.0 * k as f64 * x);
        }
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 0 {
            p += signed;
        } else {
            q += signed;
        }
        if term < 1e-17 {
            break;
        }
    }
    let phase = x - PI / 4.0;
    (2.0 / (PI * x)).sqrt() * (p * phase.cos() + q * phase.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // tabulated values
        let table = [
            (0.0, 1.0),
            (1.0, 0.765_197_686_557_966_6),
            (2.404_825_557_695_773, 0.0),
            (5.0, -0.177_596_771_314_338_3),
            (10.0, -0.245_935_764_451_348_3),
            (30.0, -0.086_367_983_581_040_23),
            (100.0, 0.019_985_850_304_223_12),
        ];
        for (x, v) in table {
            assert!((bessel_j0(x) - v).abs() < 1e-13, "J0({x}) = {}", bessel_j0(x));
        }
    }

    #[test]
    fn branches_agree_at_the_switch() {
        for x in [38.0, 40.0, 42.0] {
            let a = asymptotic(x);
            let h = PI / 256.0;
            let mut b = 1.0;
            for i in 1..256 {
                b += (x * (i as f64 * h).sin()).cos();
            }
            b /= 256.0;
            assert!((a - b).abs() < 1e-13, "{x}: {a} vs {b}");
        }
    }
}
