//! Special functions: erfc, the incomplete-gamma kernel beta_{3/2}, E1 and divisor sums.

use crate::error::{Error, Result};
use crate::scalar::Real;

fn erf_series<R: Real>(x: R) -> R {
    // erf(x) = 2x e^{-x^2}/sqrt(pi) * sum (2x^2)^n / (1*3*...*(2n+1))
    let two_x2 = R::lit(2.0) * x * x;
    let mut term = R::one();
    let mut sum = R::one();
    let mut n = 0;
    while term > sum * R::lit(R::EPS) * R::lit(0.1) && n < 500 {
        n += 1;
        term = term * two_x2 / R::lit((2 * n + 1) as f64);
        sum = sum + term;
    }
    R::lit(2.0) * x * (-x * x).exp() / R::PI().sqrt() * sum
}

/// `e^{x^2} erfc(x)` for `x >= 2` by a Lentz continued fraction.
fn erfcx_cf<R: Real>(x: R) -> R {
    // erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let tiny = R::lit(1e-300).max(R::min_positive_value());
    let mut f = x;
    let mut c = x;
    let mut d = R::zero();
    for k in 1..2000 {
        let a = R::lit(k as f64 * 0.5);
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let delta = c * d;
        f = f * delta;
        if (delta - R::one()).abs() < R::lit(R::EPS) {
            break;
        }
    }
    R::one() / (f * R::PI().sqrt())
}

pub fn erfc<R: Real>(x: R) -> R {
    if x < R::zero() {
        return R::lit(2.0) - erfc(-x);
    }
    if x < R::lit(2.0) {
        R::one() - erf_series(x)
    } else {
        erfcx_cf(x) * (-x * x).exp()
    }
}

pub fn erfcx<R: Real>(x: R) -> R {
    if x >= R::lit(2.0) {
        erfcx_cf(x)
    } else {
        (x * x).exp() * erfc(x)
    }
}

/// `beta_{3/2}(t) = int_1^inf u^{-3/2} e^{-tu} du = 2e^{-t} - 2 sqrt(pi t) erfc(sqrt t)`.
pub fn beta32<R: Real>(t: R) -> Result<R> {
    if t < R::zero() {
        return Err(Error::NegativeArgument(t.to_f64().unwrap_or(f64::NAN)));
    }
    if t == R::zero() {
        return Ok(R::lit(2.0));
    }
    let s = t.sqrt();
    let two = R::lit(2.0);
    if s < two {
        Ok(two * (-t).exp() - two * (R::PI() * t).sqrt() * erfc(s))
    } else {
        Ok((-t).exp() * (two - two * R::PI().sqrt() * s * erfcx(s)))
    }
}

/// `beta_{3/2}(t) * e^{s}`, stable when both exponents are large.
pub fn beta32_scaled<R: Real>(t: R, s: R) -> Result<R> {
    if t < R::zero() {
        return Err(Error::NegativeArgument(t.to_f64().unwrap_or(f64::NAN)));
    }
    let r = t.sqrt();
    let two = R::lit(2.0);
    // e^{t} beta(t) = 2 - 2 sqrt(pi t) erfcx(sqrt t)
    let core = two - two * (R::PI() * t).sqrt() * erfcx(r);
    Ok((s - t).exp() * core)
}

/// Exponential integral `E1(x) = int_1^inf e^{-xu} du/u`, `x > 0`.
pub fn e1<R: Real>(x: R) -> R {
    assert!(x > R::zero(), "E1 needs a positive argument");
    let eps = R::lit(R::EPS);
    if x <= R::one() {
        let euler = R::lit(0.577_215_664_901_532_9);
        let mut sum = R::zero();
        let mut term = R::one();
        for k in 1..200 {
            term = -term * x / R::lit(k as f64);
            let add = term / R::lit(k as f64);
            sum = sum + add;
            if add.abs() < sum.abs() * eps {
                break;
            }
        }
        -euler - x.ln() - sum
    } else {
        let tiny = R::min_positive_value() / eps;
        let mut b = x + R::one();
        let mut c = R::one() / tiny;
        let mut d = R::one() / b;
        let mut h = d;
        for i in 1..1000 {
            let a = -R::lit((i * i) as f64);
            b = b + R::lit(2.0);
            d = R::one() / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h = h * del;
            if (del - R::one()).abs() < eps {
                break;
            }
        }
        h * (-x).exp()
    }
}

pub fn sigma1(n: u64) -> u64 {
    let mut s = 0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            s += d;
            if d * d != n {
                s += n / d;
            }
        }
        d += 1;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erfc_values() {
        assert!((erfc(0.5f64) - 0.479_500_122_186_953_5).abs() < 1e-15);
        assert!((erfc(1.0f64) - 0.157_299_207_050_285_13).abs() < 1e-15);
        assert!((erfc(3.0f64) - 2.209_049_699_858_544e-5).abs() < 1e-18);
        assert!((erfc(-1.0f64) - 1.842_700_792_949_715).abs() < 1e-15);
        assert!((erfc(1.0f32) - 0.157_299_2).abs() < 1e-6);
    }

    #[test]
    fn beta_basics() {
        assert_eq!(beta32(0.0f64).unwrap(), 2.0);
        assert!(beta32(-1.0f64).is_err());
        let b50 = beta32(50.0f64).unwrap();
        assert!(b50 > 0.0 && b50 <= 2.0 * (-50.0f64).exp());
        for &t in &[0.0f64, 0.3, 1.0, 3.9, 4.1, 20.0] {
            let a = beta32_scaled(t, 0.5 * t).unwrap();
            let b = beta32(t).unwrap() * (0.5 * t).exp();
            assert!((a - b).abs() < 1e-14 * b.max(1e-300), "{t}");
        }
    }

    #[test]
    fn e1_values() {
        assert!((e1(1.0f64) - 0.219_383_934_395_520_3).abs() < 1e-15);
        assert!((e1(0.1f64) - 1.822_923_958_419_390_7).abs() < 1e-14);
        assert!((e1(5.0f64) - 1.148_295_591_275_325_9e-3).abs() < 1e-17);
    }

    #[test]
    fn divisor_sums() {
        let v: Vec<u64> = (1..=6).map(sigma1).collect();
        assert_eq!(v, vec![1, 3, 4, 7, 6, 12]);
    }
}
