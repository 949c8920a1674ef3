//! Exponential expansion of trigonometric monomials `cosᵃx · sinᵇx`.

use num_complex::Complex64;

/// Integer coefficients of `(z + 1/z)ᵃ (z - 1/z)ᵇ`, indexed from `z^-(a+b)`.
pub fn laurent_coefficients(cos_power: u32, sin_power: u32) -> Vec<i64> {
    let mut poly = vec![1i64];
    let mut step = |sign: i64| {
        let mut next = vec![0i64; poly.len() + 2];
        for (k, &c) in poly.iter().enumerate() {
            // index j holds the coefficient of z^(j - degree)
            next[k] += sign * c;
            next[k + 2] += c;
        }
        poly = next;
    };
    for _ in 0..cos_power {
        step(1);
    }
    for _ in 0..sin_power {
        step(-1);
    }
    poly
}

/// `cosᵃx sinᵇx = Σ_ω d_ω e^{iωx}` as `(ω, d_ω)` pairs with non-zero `d_ω`.
///
/// Every `d_ω` is an integer times `2^-(a+b)`, times `(-i)ᵇ`, so it is exact
/// in binary floating point.
pub fn monomial_exponentials(cos_power: u32, sin_power: u32) -> Vec<(i64, Complex64)> {
    let degree = (cos_power + sin_power) as i64;
    let scale = 0.5f64.powi(degree as i32);
    let phase = match sin_power % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    laurent_coefficients(cos_power, sin_power)
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c != 0)
        .map(|(k, c)| (k as i64 - degree, phase * (c as f64 * scale)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(laurent_coefficients(0, 0), vec![1]);
        assert_eq!(laurent_coefficients(2, 0), vec![1, 0, 2, 0, 1]);
        assert_eq!(laurent_coefficients(0, 2), vec![1, 0, -2, 0, 1]);
        assert_eq!(laurent_coefficients(1, 1), vec![-1, 0, 0, 0, 1]);
        let cos = monomial_exponentials(1, 0);
        assert_eq!(cos, vec![(-1, Complex64::new(0.5, 0.0)), (1, Complex64::new(0.5, 0.0))]);
        let sin = monomial_exponentials(0, 1);
        assert_eq!(
            sin,
            vec![(-1, Complex64::new(0.0, 0.5)), (1, Complex64::new(0.0, -0.5))]
        );
    }

    #[test]
    fn expansion_matches_direct_evaluation() {
        for a in 0..6 {
            for b in 0..6 {
                let terms = monomial_exponentials(a, b);
                for k in 0..25 {
                    let x = -3.0 + 0.27 * k as f64;
                    let direct = x.cos().powi(a as i32) * x.sin().powi(b as i32);
                    let series: Complex64 = terms
                        .iter()
                        .map(|&(w, d)| d * Complex64::from_polar(1.0, w as f64 * x))
                        .sum();
                    assert!((series.re - direct).abs() < 1e-12 && series.im.abs() < 1e-12);
                }
            }
        }
    }
}
