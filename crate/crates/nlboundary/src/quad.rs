//! Adaptive Gauss-Kronrod (7, 15) quadrature.

use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Segment<R> {
    a: R,
    b: R,
    value: Vec<R>,
    err: R,
}

fn gk15<R: Real, F: Fn(R) -> Vec<R>>(f: &F, a: R, b: R) -> Segment<R> {
    let half = (b - a) * R::lit(0.5);
    let mid = (a + b) * R::lit(0.5);
    let fc = f(mid);
    let dim = fc.len();
    let mut k: Vec<R> = fc.iter().map(|&v| v * R::lit(WGK[7])).collect();
    let mut g: Vec<R> = fc.iter().map(|&v| v * R::lit(WG[3])).collect();
    for j in 0..7 {
        let dx = half * R::lit(XGK[j]);
        let f1 = f(mid - dx);
        let f2 = f(mid + dx);
        for i in 0..dim {
            let s = f1[i] + f2[i];
            k[i] = k[i] + s * R::lit(WGK[j]);
            if j % 2 == 1 {
                g[i] = g[i] + s * R::lit(WG[j / 2]);
            }
        }
    }
    let value: Vec<R> = k.iter().map(|&v| v * half).collect();
    let err = k.iter().zip(&g).map(|(&x, &y)| ((x - y) * half).abs()).fold(R::zero(), R::max);
    Segment { a, b, value, err }
}

/// Integrate a vector-valued function over `[a, b]` to absolute tolerance `tol`.
/// Returns `None` when `max_segments` is exhausted.
pub fn integrate_vec<R: Real, F: Fn(R) -> Vec<R>>(f: F, a: R, b: R, tol: R, max_segments: usize) -> Option<(Vec<R>, R)> {
    let mut segs = vec![gk15(&f, a, b)];
    loop {
        let total_err = segs.iter().map(|s| s.err).fold(R::zero(), |x, y| x + y);
        if total_err <= tol {
            let dim = segs[0].value.len();
            let mut sum = vec![R::zero(); dim];
            // Sum in interval order for reproducibility.
            segs.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap());
            for s in &segs {
                for i in 0..dim {
                    sum[i] = sum[i] + s.value[i];
                }
            }
            return Some((sum, total_err));
        }
        if segs.len() >= max_segments {
            return None;
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap())
            .unwrap();
        let s = segs.swap_remove(idx);
        let m = (s.a + s.b) * R::lit(0.5);
        segs.push(gk15(&f, s.a, m));
        segs.push(gk15(&f, m, s.b));
    }
}

pub fn integrate<R: Real, F: Fn(R) -> R>(f: F, a: R, b: R, tol: R) -> Option<R> {
    integrate_vec(|x| vec![f(x)], a, b, tol, 4000).map(|(v, _)| v[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x: f64| x * x * x - 2.0 * x, 0.0, 2.0, 1e-14).unwrap();
        assert!((v - 0.0).abs() < 1e-13);
    }

    #[test]
    fn gaussian() {
        let v = integrate(|x: f64| (-x * x).exp(), -10.0, 10.0, 1e-13).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }
}
