//! Vector-valued q-expansions: lattice theta series, the unary series `R`,
//! the quasimodular `G2`, Eichler integrals and slash residuals.

use crate::error::{Error, Result};
use crate::exact::{to_rat, RatMatrix};
use crate::quad;
use crate::quadlattice::{discriminant_group, Lattice};
use crate::scalar::{rat, Real};
use crate::special::{beta32_scaled, sigma1};
use crate::weilrep::{Gen, Iota, MpWord, WeilRep};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// `c0 + c1/y + sum_r c_r y^{-1/2} beta_{3/2}(2 pi r y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffFn<R> {
    pub constant: Complex<R>,
    pub inv_y: Complex<R>,
    /// Keyed by `r`; the decay rate is `kappa = 2 pi r`.
    pub beta: BTreeMap<BigRational, Complex<R>>,
}

impl<R: Real> Default for CoeffFn<R> {
    fn default() -> Self {
        CoeffFn { constant: Complex::zero(), inv_y: Complex::zero(), beta: BTreeMap::new() }
    }
}

impl<R: Real> CoeffFn<R> {
    pub fn constant(c: R) -> Self {
        CoeffFn { constant: Complex::new(c, R::zero()), ..Default::default() }
    }

    pub fn inv_y(c: R) -> Self {
        CoeffFn { inv_y: Complex::new(c, R::zero()), ..Default::default() }
    }

    pub fn beta_half(c: R, rate: BigRational) -> Self {
        let mut beta = BTreeMap::new();
        beta.insert(rate, Complex::new(c, R::zero()));
        CoeffFn { beta, ..Default::default() }
    }

    pub fn is_holomorphic(&self) -> bool {
        self.inv_y.is_zero() && self.beta.values().all(|c| c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.is_holomorphic()
    }

    pub fn add_assign(&mut self, other: &CoeffFn<R>) {
        self.constant = self.constant + other.constant;
        self.inv_y = self.inv_y + other.inv_y;
        for (r, c) in &other.beta {
            let e = self.beta.entry(r.clone()).or_insert_with(Complex::zero);
            *e = *e + c;
        }
    }

    pub fn scale(&self, s: Complex<R>) -> Self {
        CoeffFn {
            constant: self.constant * s,
            inv_y: self.inv_y * s,
            beta: self.beta.iter().map(|(r, c)| (r.clone(), c * s)).collect(),
        }
    }

    pub fn eval(&self, y: R) -> Result<Complex<R>> {
        self.eval_scaled(y, R::zero())
    }

    /// Value at `y` times `e^{s}`.
    pub fn eval_scaled(&self, y: R, s: R) -> Result<Complex<R>> {
        let es = s.exp();
        let mut v = (self.constant + self.inv_y / y) * es;
        let two_pi = R::lit(2.0) * R::PI();
        for (r, c) in &self.beta {
            let b = beta32_scaled(two_pi * rat::<R>(r) * y, s)?;
            v = v + c * (b / y.sqrt());
        }
        Ok(v)
    }
}

/// A finite vector-valued q-expansion keyed by `(exponent, class)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VVQExpansion<R> {
    pub dim: usize,
    pub weight: BigRational,
    pub m_max: BigRational,
    pub coeffs: BTreeMap<(BigRational, usize), CoeffFn<R>>,
}

impl<R: Real> VVQExpansion<R> {
    pub fn zero(dim: usize, weight: BigRational, m_max: BigRational) -> Self {
        VVQExpansion { dim, weight, m_max, coeffs: BTreeMap::new() }
    }

    pub fn add_term(&mut self, m: BigRational, class: usize, c: &CoeffFn<R>) {
        assert!(class < self.dim, "class index out of range");
        self.coeffs.entry((m, class)).or_default().add_assign(c);
    }

    pub fn coeff(&self, m: &BigRational, class: usize) -> Option<&CoeffFn<R>> {
        self.coeffs.get(&(m.clone(), class))
    }

    pub fn is_holomorphic(&self) -> bool {
        self.coeffs.values().all(CoeffFn::is_holomorphic)
    }

    /// Sum of two expansions on the same representation.
    pub fn plus(&self, other: &VVQExpansion<R>) -> Result<VVQExpansion<R>> {
        if self.dim != other.dim {
            return Err(Error::ClassIndexMismatch(format!("{} vs {}", self.dim, other.dim)));
        }
        let mut out = self.clone();
        out.m_max = self.m_max.clone().min(other.m_max.clone());
        for ((m, j), c) in &other.coeffs {
            out.add_term(m.clone(), *j, c);
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex<R>) -> Self {
        VVQExpansion {
            coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), c.scale(s))).collect(),
            ..self.clone()
        }
    }

    /// Push the classes forward along a 0/1 intertwiner.
    pub fn push_forward(&self, iota: &Iota) -> Result<VVQExpansion<R>> {
        if iota.source_dim != self.dim {
            return Err(Error::ClassIndexMismatch(format!("iota source {} vs {}", iota.source_dim, self.dim)));
        }
        let mut out = VVQExpansion::zero(iota.target_dim, self.weight.clone(), self.m_max.clone());
        for ((m, j), c) in &self.coeffs {
            for &i in &iota.columns[*j] {
                out.add_term(m.clone(), i, c);
            }
        }
        Ok(out)
    }

    pub fn eval(&self, tau: Complex<R>) -> Result<Vec<Complex<R>>> {
        let mut out = vec![Complex::zero(); self.dim];
        let two_pi = R::lit(2.0) * R::PI();
        for ((m, j), c) in &self.coeffs {
            let mf: R = rat(m);
            // e^{2 pi i m tau} = e^{-2 pi m y} e^{2 pi i m x}
            let theta = two_pi * mf * tau.re;
            let ph = Complex::new(theta.cos(), theta.sin());
            out[*j] = out[*j] + c.eval_scaled(tau.im, -two_pi * mf * tau.im)? * ph;
        }
        Ok(out)
    }
}

/// Holomorphic expansion with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatSeries {
    pub dim: usize,
    pub weight: BigRational,
    pub m_max: BigRational,
    pub coeffs: BTreeMap<(BigRational, usize), BigRational>,
}

impl RatSeries {
    pub fn zero(dim: usize, weight: BigRational, m_max: BigRational) -> Self {
        RatSeries { dim, weight, m_max, coeffs: BTreeMap::new() }
    }

    pub fn add_term(&mut self, m: BigRational, class: usize, c: BigRational) {
        assert!(class < self.dim, "class index out of range");
        let e = self.coeffs.entry((m, class)).or_insert_with(BigRational::zero);
        *e += c;
    }

    pub fn get(&self, m: &BigRational, class: usize) -> BigRational {
        self.coeffs.get(&(m.clone(), class)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn prune(mut self) -> Self {
        self.coeffs.retain(|_, c| !c.is_zero());
        self
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        RatSeries { coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), c * s)).collect(), ..self.clone() }.prune()
    }

    pub fn plus(&self, other: &RatSeries) -> Result<RatSeries> {
        if self.dim != other.dim {
            return Err(Error::ClassIndexMismatch(format!("{} vs {}", self.dim, other.dim)));
        }
        let mut out = self.clone();
        out.m_max = self.m_max.clone().min(other.m_max.clone());
        for ((m, j), c) in &other.coeffs {
            out.add_term(m.clone(), *j, c.clone());
        }
        Ok(out.prune())
    }

    pub fn push_forward(&self, iota: &Iota) -> Result<RatSeries> {
        if iota.source_dim != self.dim {
            return Err(Error::ClassIndexMismatch(format!("iota source {} vs {}", iota.source_dim, self.dim)));
        }
        let mut out = RatSeries::zero(iota.target_dim, self.weight.clone(), self.m_max.clone());
        for ((m, j), c) in &self.coeffs {
            for &i in &iota.columns[*j] {
                out.add_term(m.clone(), i, c.clone());
            }
        }
        Ok(out.prune())
    }

    /// `q d/dq`.
    pub fn qddq(&self) -> RatSeries {
        RatSeries {
            coeffs: self.coeffs.iter().map(|((m, j), c)| ((m.clone(), *j), m * c)).collect(),
            ..self.clone()
        }
        .prune()
    }

    /// Product with `G2`, truncated at `m_max`; the weight goes up by 2.
    pub fn mul_g2(&self) -> RatSeries {
        let mut out = RatSeries::zero(self.dim, &self.weight + BigRational::from_integer(2.into()), self.m_max.clone());
        let Some(lo) = self.coeffs.keys().map(|(m, _)| m.clone()).min() else { return out };
        let span = (&self.m_max - &lo).floor().to_integer().to_u64().unwrap_or(0);
        let g2 = g2_qexp(span);
        for ((m, j), c) in &self.coeffs {
            for (n, g) in g2.iter().enumerate() {
                let e = m + BigRational::from_integer(n.into());
                if e > self.m_max {
                    break;
                }
                out.add_term(e, *j, c * g);
            }
        }
        out.prune()
    }

    /// `f -> q df/dq + 2k G2 f`.
    pub fn quasi_raise(&self, k: &BigRational) -> RatSeries {
        let two_k = k * BigRational::from_integer(2.into());
        let mut out = self.qddq().plus(&self.mul_g2().scale(&two_k)).expect("same dim");
        out.weight = &self.weight + BigRational::from_integer(2.into());
        out
    }

    pub fn to_expansion<R: Real>(&self) -> VVQExpansion<R> {
        let mut out = VVQExpansion::zero(self.dim, self.weight.clone(), self.m_max.clone());
        for ((m, j), c) in &self.coeffs {
            out.add_term(m.clone(), *j, &CoeffFn::constant(rat(c)));
        }
        out
    }
}

/// `v^T G v = sum_i d_i (v_i + sum_{j>i} u_ij v_j)^2`.
fn ldl(gram: &RatMatrix) -> Result<(Vec<BigRational>, Vec<Vec<BigRational>>)> {
    let n = gram.rows();
    let mut a = gram.to_rows();
    let mut d = Vec::with_capacity(n);
    let mut u = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let di = a[i][i].clone();
        if !di.is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        for j in i + 1..n {
            u[i][j] = &a[i][j] / &di;
        }
        for k in i + 1..n {
            for l in i + 1..n {
                let t = &a[k][i] * &a[i][l] / &di;
                a[k][l] -= t;
            }
        }
        d.push(di);
    }
    Ok((d, u))
}

fn isqrt_ceil_rat(r: &BigRational) -> BigInt {
    // Smallest integer s with s^2 >= r (for r >= 0).
    if !r.is_positive() {
        return BigInt::zero();
    }
    let c = r.ceil().to_integer();
    let s = c.sqrt();
    if &s * &s >= c {
        s
    } else {
        s + 1
    }
}

/// Visit every `v = shift + x`, `x` integral, with `v^T G v <= bound`, passing `x` and `v^T G v`.
/// Exact rational arithmetic throughout; visiting order is deterministic.
pub fn for_each_short_vector<F: FnMut(&[BigInt], &BigRational)>(
    gram: &RatMatrix,
    shift: &[BigRational],
    bound: &BigRational,
    mut visit: F,
) -> Result<()> {
    let n = gram.rows();
    if bound.is_negative() {
        return Ok(());
    }
    if n == 0 {
        visit(&[], &BigRational::zero());
        return Ok(());
    }
    let (d, u) = ldl(gram)?;
    let mut x = vec![BigInt::zero(); n];
    let mut v = vec![BigRational::zero(); n];
    fn rec<F: FnMut(&[BigInt], &BigRational)>(
        i: usize,
        budget: &BigRational,
        d: &[BigRational],
        u: &[Vec<BigRational>],
        shift: &[BigRational],
        bound: &BigRational,
        x: &mut Vec<BigInt>,
        v: &mut Vec<BigRational>,
        visit: &mut F,
    ) {
        let n = d.len();
        let mut c = shift[i].clone();
        for j in i + 1..n {
            c += &u[i][j] * &v[j];
        }
        // (t + c)^2 <= budget / d_i with t integral
        let r = budget / &d[i];
        let s = isqrt_ceil_rat(&r);
        let lo: BigInt = (-&c).floor().to_integer() - &s - 1;
        let hi = (-&c).ceil().to_integer() + &s + 1;
        let mut t = lo;
        while t <= hi {
            let z = BigRational::from_integer(t.clone()) + &c;
            let used = &d[i] * &z * &z;
            if used <= *budget {
                x[i] = t.clone();
                v[i] = &shift[i] + BigRational::from_integer(t.clone());
                let rest = budget - &used;
                if i == 0 {
                    let q = bound - &rest;
                    visit(x, &q);
                } else {
                    rec(i - 1, &rest, d, u, shift, bound, x, v, visit);
                }
            }
            t += 1;
        }
    }
    rec(n - 1, bound, &d, &u, shift, bound, &mut x, &mut v, &mut visit);
    Ok(())
}

/// Counts of `v in mu + L` with `Q(v, v) = 2m`, for `m <= m_max`.
pub fn rep_numbers(l: &Lattice, mu: &[BigRational], m_max: &BigRational) -> Result<BTreeMap<BigRational, u64>> {
    if !l.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    if mu.len() != l.rank() {
        return Err(Error::DimensionMismatch(format!("coset of length {} for rank {}", mu.len(), l.rank())));
    }
    let mut out = BTreeMap::new();
    let two = BigRational::from_integer(2.into());
    for_each_short_vector(&to_rat(l.gram()), mu, &(m_max * &two), |_, q| {
        *out.entry(q / &two).or_insert(0u64) += 1;
    })?;
    Ok(out)
}

/// `Theta_L` with exact coefficients, classes in discriminant-group order.
pub fn theta_series(l: &Lattice, m_max: &BigRational) -> Result<RatSeries> {
    if !l.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let a = discriminant_group(l);
    let weight = BigRational::new(BigInt::from(l.rank()), BigInt::from(2));
    let mut out = RatSeries::zero(a.len(), weight, m_max.clone());
    for (j, mu) in a.reps().iter().enumerate() {
        for (m, c) in rep_numbers(l, mu, m_max)? {
            out.add_term(m, j, BigRational::from_integer(c.into()));
        }
    }
    Ok(out)
}

pub fn theta_qexp<R: Real>(l: &Lattice, m_max: &BigRational) -> Result<VVQExpansion<R>> {
    Ok(theta_series(l, m_max)?.to_expansion())
}

/// `R(tau)_nu = (1/(4 pi sqrt y)) sum_{w in nu + L4} beta_{3/2}(2 pi y Q4(w,w)) q^{-Q4(w,w)/2}`,
/// keeping exponents down to `-m_max`.
pub fn unary_r<R: Real>(l4: &Lattice, m_max: &BigRational) -> Result<VVQExpansion<R>> {
    if l4.rank() != 1 {
        return Err(Error::WrongRank { expected: 1, found: l4.rank() });
    }
    if !l4.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let a = discriminant_group(l4);
    let c = R::one() / (R::lit(4.0) * R::PI());
    let mut out = VVQExpansion::zero(a.len(), BigRational::new(3.into(), 2.into()), m_max.clone());
    let two = BigRational::from_integer(2.into());
    for (j, nu) in a.reps().iter().enumerate() {
        for (m, count) in rep_numbers(l4, nu, m_max)? {
            let rate = &m * &two;
            out.add_term(-m, j, &CoeffFn::beta_half(c * R::lit(count as f64), rate));
        }
    }
    Ok(out)
}

/// Coefficients of `G2 = -1/24 + sum sigma_1(n) q^n` up to `q^{n_max}`.
pub fn g2_qexp(n_max: u64) -> Vec<BigRational> {
    let mut v = vec![BigRational::new((-1).into(), 24.into())];
    v.extend((1..=n_max).map(|n| BigRational::from_integer(sigma1(n).into())));
    v
}

/// `G2*(tau) = G2(q) + 1/(8 pi y)`.
pub fn g2_star<R: Real>(tau: Complex<R>, n_max: u64) -> Complex<R> {
    let two_pi_i_tau = Complex::new(R::zero(), R::lit(2.0) * R::PI()) * tau;
    let mut s = Complex::new(R::lit(-1.0 / 24.0), R::zero());
    for n in 1..=n_max {
        s = s + (two_pi_i_tau * R::lit(n as f64)).exp() * R::lit(sigma1(n) as f64);
    }
    s + R::one() / (R::lit(8.0) * R::PI() * tau.im)
}

/// `f -> q df/dq + 2k G2 f` on a holomorphic expansion.
pub fn quasi_raise<R: Real>(f: &VVQExpansion<R>, k: &BigRational) -> Result<VVQExpansion<R>> {
    if !f.is_holomorphic() {
        return Err(Error::NotHolomorphicInput);
    }
    let two_k: R = rat(&(k * BigRational::from_integer(2.into())));
    let mut out = VVQExpansion::zero(f.dim, &f.weight + BigRational::from_integer(2.into()), f.m_max.clone());
    let Some(lo) = f.coeffs.keys().map(|(m, _)| m.clone()).min() else { return Ok(out) };
    let span = (&f.m_max - &lo).floor().to_integer().to_u64().unwrap_or(0);
    let g2 = g2_qexp(span);
    for ((m, j), c) in &f.coeffs {
        let mut raised = c.scale(Complex::new(rat(m), R::zero()));
        raised.add_assign(&c.scale(Complex::new(two_k * rat::<R>(&g2[0]), R::zero())));
        out.add_term(m.clone(), *j, &raised);
        for (n, g) in g2.iter().enumerate().skip(1) {
            let e = m + BigRational::from_integer(n.into());
            if e > f.m_max {
                break;
            }
            out.add_term(e, *j, &c.scale(Complex::new(two_k * rat::<R>(g), R::zero())));
        }
    }
    Ok(out)
}

/// `(1/(4 pi i)) int_{-conj(tau)}^{i inf} Theta(z) ((z + tau)/i)^{-3/2} dz` per class,
/// along the vertical path; `theta` must be holomorphic with exponents `>= 0`.
pub fn eichler_integral<R: Real>(theta: &VVQExpansion<R>, tau: Complex<R>, tol: R) -> Result<Vec<Complex<R>>> {
    if !theta.is_holomorphic() {
        return Err(Error::NotHolomorphicInput);
    }
    if theta.coeffs.keys().any(|(m, _)| m.is_negative()) {
        return Err(Error::NotHolomorphicInput);
    }
    let (x, y) = (tau.re, tau.im);
    let two = R::lit(2.0);
    let two_pi = two * R::PI();
    // s = 2y(1/t^2 - 1) maps t in (0, 1] onto s in [0, inf); ds (2y+s)^{-3/2} = 2 (2y)^{-1/2} dt
    let pre = two / (two * y).sqrt() / (R::lit(4.0) * R::PI());
    let terms: Vec<(R, usize, Complex<R>)> =
        theta.coeffs.iter().map(|((m, j), c)| (rat::<R>(m), *j, c.constant)).collect();
    let dim = theta.dim;
    let integrand = |t: R| -> Vec<R> {
        let mut acc = vec![R::zero(); 2 * dim];
        let im_z = if t > R::zero() { y + two * y * (R::one() / (t * t) - R::one()) } else { R::infinity() };
        for &(m, j, c) in &terms {
            let v = if m.is_zero() {
                c
            } else {
                let mag = (-two_pi * m * im_z).exp();
                let th = -two_pi * m * x;
                c * Complex::new(th.cos(), th.sin()) * mag
            };
            acc[2 * j] = acc[2 * j] + v.re * pre;
            acc[2 * j + 1] = acc[2 * j + 1] + v.im * pre;
        }
        acc
    };
    let (v, _) = quad::integrate_vec(integrand, R::zero(), R::one(), tol, 20_000)
        .ok_or_else(|| Error::PathTruncationFailure(tol.to_f64().unwrap_or(f64::NAN)))?;
    Ok((0..dim).map(|j| Complex::new(v[2 * j], v[2 * j + 1])).collect())
}

/// `tau -> g tau` together with the metaplectic factor `phi_g(tau)`.
fn act<R: Real>(g: Gen, tau: Complex<R>) -> (Complex<R>, Complex<R>) {
    match g {
        Gen::S => (-tau.inv(), tau.sqrt()),
        Gen::T => (tau + R::one(), Complex::one()),
        Gen::TInv => (tau - R::one(), Complex::one()),
    }
}

/// `gamma tau` and `phi_gamma(tau)` for the word read as a product left to right.
pub fn act_word<R: Real>(word: &MpWord, tau: Complex<R>) -> (Complex<R>, Complex<R>) {
    let mut t = tau;
    let mut phi = Complex::one();
    for &g in word.0.iter().rev() {
        let (t2, p) = act(g, t);
        phi = phi * p;
        t = t2;
    }
    (t, phi)
}

/// `max_tau |f(gamma tau) - phi(tau)^{2k} rho(gamma) f(tau)|`.
pub fn slash_residual<R: Real, F>(f: F, k: &BigRational, rep: &WeilRep, word: &MpWord, taus: &[Complex<R>]) -> Result<R>
where
    F: Fn(Complex<R>) -> Result<Vec<Complex<R>>>,
{
    let two_k = k * BigRational::from_integer(2.into());
    if !two_k.is_integer() {
        return Err(Error::WeightMismatch { expected: "half-integral weight".into(), found: k.to_string() });
    }
    let e = two_k.to_integer().to_i32().expect("small weight");
    let rho = rep.rho_word::<R>(word);
    let mut worst = R::zero();
    for &tau in taus {
        let (gt, phi) = act_word(word, tau);
        let lhs = f(gt)?;
        let rhs = rho.mul_vec(&f(tau)?);
        if lhs.len() != rep.dim() {
            return Err(Error::ClassIndexMismatch(format!("{} components for rep of dim {}", lhs.len(), rep.dim())));
        }
        let fac = phi.powi(e);
        for (a, b) in lhs.iter().zip(&rhs) {
            worst = worst.max((a - fac * b).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat as q;

    fn c(x: f64, y: f64) -> Complex<f64> {
        Complex::new(x, y)
    }

    #[test]
    fn rep_numbers_unary() {
        let l = Lattice::from_rows(&[&[2]]).unwrap();
        let r = rep_numbers(&l, &[q(0, 1)], &q(9, 1)).unwrap();
        assert_eq!(r.get(&q(0, 1)), Some(&1));
        assert_eq!(r.get(&q(1, 1)), Some(&2));
        assert_eq!(r.get(&q(4, 1)), Some(&2));
        assert_eq!(r.get(&q(2, 1)), None);
        let r = rep_numbers(&l, &[q(1, 2)], &q(3, 1)).unwrap();
        assert_eq!(r.iter().next(), Some((&q(1, 4), &2)));
    }

    #[test]
    fn rank_zero_theta() {
        let l = Lattice::new(crate::exact::IntMatrix::zeros(0, 0), "0").unwrap();
        let t = theta_series(&l, &q(5, 1)).unwrap();
        assert_eq!(t.coeffs.len(), 1);
        assert_eq!(t.get(&q(0, 1), 0), q(1, 1));
    }

    #[test]
    fn not_posdef() {
        let l = Lattice::from_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(rep_numbers(&l, &[q(0, 1), q(0, 1)], &q(1, 1)), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn g2_coefficients() {
        let g = g2_qexp(6);
        assert_eq!(g[..5], [q(-1, 24), q(1, 1), q(3, 1), q(4, 1), q(7, 1)]);
        assert_eq!(g[6], q(12, 1));
    }

    #[test]
    fn quasi_raise_theta2() {
        let l = Lattice::from_rows(&[&[2]]).unwrap();
        let t = theta_series(&l, &q(10, 1)).unwrap();
        let raised = t.quasi_raise(&q(1, 2));
        assert_eq!(raised.get(&q(1, 1), 0), q(35, 12));
        assert_eq!(raised.get(&q(0, 1), 0), q(-1, 24));
        let f: VVQExpansion<f64> = t.to_expansion();
        let rf = quasi_raise(&f, &q(1, 2)).unwrap();
        let v = rf.coeff(&q(1, 1), 0).unwrap().constant.re;
        assert!((v - 35.0 / 12.0).abs() < 1e-14);
        let one = RatSeries { coeffs: [((q(0, 1), 0), q(1, 1))].into(), ..RatSeries::zero(1, q(0, 1), q(5, 1)) };
        assert!(one.quasi_raise(&q(0, 1)).coeffs.is_empty());
    }

    #[test]
    fn quasi_raise_rejects_nonholomorphic() {
        let mut f = VVQExpansion::<f64>::zero(1, q(1, 2), q(1, 1));
        f.add_term(q(0, 1), 0, &CoeffFn::inv_y(1.0));
        assert_eq!(quasi_raise(&f, &q(1, 2)), Err(Error::NotHolomorphicInput));
    }

    #[test]
    fn unary_r_constant_term() {
        let l = Lattice::from_rows(&[&[2]]).unwrap();
        let r: VVQExpansion<f64> = unary_r(&l, &q(4, 1)).unwrap();
        let c0 = r.coeff(&q(0, 1), 0).unwrap().eval(1.0).unwrap();
        assert!((c0.re - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
        assert!(r.coeff(&q(0, 1), 1).is_none());
        assert!(unary_r::<f64>(&Lattice::from_rows(&[&[2, 1], &[1, 2]]).unwrap(), &q(1, 1)).is_err());
    }

    #[test]
    fn eichler_constant() {
        let mut one = VVQExpansion::<f64>::zero(1, q(0, 1), q(1, 1));
        one.add_term(q(0, 1), 0, &CoeffFn::constant(1.0));
        let v = eichler_integral(&one, c(0.0, 1.0), 1e-13).unwrap();
        let expect = 2f64.sqrt() / (4.0 * std::f64::consts::PI);
        assert!((v[0].re - expect).abs() < 1e-12 && v[0].im.abs() < 1e-14);
    }

    #[test]
    fn words_compose() {
        let w: MpWord = "ST".parse().unwrap();
        let (t, phi) = act_word(&w, c(0.5, 1.0));
        // T first, then S
        let expect = -(c(1.5, 1.0)).inv();
        assert!((t - expect).norm() < 1e-15);
        assert!((phi - c(1.5, 1.0).sqrt()).norm() < 1e-15);
    }

    #[test]
    fn theta_modularity() {
        let taus = [c(0.0, 1.0), c(1.0 / 3.0, 1.0), c(0.0, 2.0)];
        for rows in [&[&[2i64][..]][..], &[&[4]], &[&[2, 0], &[0, 2]]] {
            let l = Lattice::from_rows(rows).unwrap();
            let t = theta_series(&l, &q(80, 1)).unwrap();
            let f: VVQExpansion<f64> = t.to_expansion();
            let rep = WeilRep::new(&l);
            for w in ["S", "T"] {
                let res = slash_residual(|z| f.eval(z), &t.weight, &rep, &w.parse().unwrap(), &taus).unwrap();
                assert!(res < 1e-10, "{rows:?} {w} {res}");
            }
            let k = &t.weight;
            let g: VVQExpansion<f64> = t.quasi_raise(k).to_expansion();
            let wk = k + q(2, 1);
            let res = slash_residual(|z| g.eval(z), &wk, &rep, &"S".parse().unwrap(), &taus).unwrap();
            assert!(res < 1e-5, "raised {rows:?} {res}");
        }
    }

    #[test]
    fn corrupted_theta_fails() {
        let l = Lattice::from_rows(&[&[2]]).unwrap();
        let mut t = theta_series(&l, &q(80, 1)).unwrap();
        t.coeffs.insert((q(1, 1), 0), q(3, 1));
        let f: VVQExpansion<f64> = t.to_expansion();
        let rep = WeilRep::new(&l);
        let res = slash_residual(|z| f.eval(z), &t.weight, &rep, &"S".parse().unwrap(), &[c(0.0, 1.0), c(0.0, 2.0)]).unwrap();
        assert!(res > 1e-2, "{res}");
    }

    #[test]
    fn g2_star_transforms() {
        let tau = c(0.5, 2.0);
        let lhs = g2_star(-tau.inv(), 200);
        let rhs = tau * tau * g2_star(tau, 200);
        assert!((lhs - rhs).norm() < 1e-8, "{}", (lhs - rhs).norm());
    }
}
