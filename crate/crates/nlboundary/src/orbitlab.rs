//! R-split nilpotent-orbit models for type II and III, and the numerical residue checks.

use crate::boundary::{z_minus_type_ii, z_minus_type_iii, Truncation};
use crate::degeneration::{invariants, DegenType, DegenerationData, Invariants};
use crate::error::{Error, Result};
use crate::exact::{coordinates, solve_integer, to_rat, to_rat_vec, RatMatrix, RatVector};
use crate::quad;
use crate::quadlattice::discriminant_group;
use crate::scalar::{rat, Real};
use crate::special::e1;
use crate::thetaforms::for_each_short_vector;
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type GaussRat = Complex<BigRational>;

#[derive(Clone, Debug)]
pub struct TypeIIBasis {
    pub e21: Vec<GaussRat>,
    /// `N e21`
    pub e10: Vec<GaussRat>,
}

#[derive(Clone, Debug)]
pub struct TypeIIIBasis {
    /// Rational generator `f` of `V4`; `e22 = f / sqrt(c)`.
    pub f: RatVector,
    pub nf: RatVector,
    pub n2f: RatVector,
    /// `c = Q(f, N^2 f)`
    pub c: BigRational,
}

#[derive(Clone, Debug)]
pub enum ModelBasis {
    II(TypeIIBasis),
    III(TypeIIIBasis),
}

#[derive(Clone, Debug)]
pub struct OrbitModel {
    pub d: DegenerationData,
    pub basis: ModelBasis,
    gram: RatMatrix,
}

fn gpair(g: &RatMatrix, x: &[GaussRat], y: &[GaussRat]) -> GaussRat {
    let mut acc = GaussRat::new(BigRational::zero(), BigRational::zero());
    for i in 0..x.len() {
        for j in 0..y.len() {
            let gij = &g[(i, j)];
            if gij.is_zero() {
                continue;
            }
            acc = acc + &x[i] * &y[j] * GaussRat::new(gij.clone(), BigRational::zero());
        }
    }
    acc
}

fn to_gauss(v: &[BigRational]) -> Vec<GaussRat> {
    v.iter().map(|x| GaussRat::new(x.clone(), BigRational::zero())).collect()
}

fn conj(v: &[GaussRat]) -> Vec<GaussRat> {
    v.iter().map(|z| z.conj()).collect()
}

fn invalid(msg: &str) -> Error {
    Error::InvalidModel(msg.into())
}

fn gauss_abs2(z: &GaussRat) -> BigRational {
    &z.re * &z.re + &z.im * &z.im
}

fn gauss_is(z: &GaussRat, re: i64, im: i64) -> bool {
    z.re == BigRational::from_integer(re.into()) && z.im == BigRational::from_integer(im.into())
}

impl OrbitModel {
    /// Type II model from the Gaussian-rational vector `e21 = re + i im`.
    pub fn type_ii(d: DegenerationData, re: RatVector, im: RatVector) -> Result<Self> {
        if d.kind != DegenType::II {
            return Err(Error::TypeMismatch { expected: "II".into(), found: d.kind.to_string() });
        }
        let n = d.host.rank();
        if re.len() != n || im.len() != n {
            return Err(Error::DimensionMismatch(format!("e21 has length {}, lattice rank {}", re.len(), n)));
        }
        let gram = to_rat(d.host.gram());
        let e21: Vec<GaussRat> = re.iter().zip(&im).map(|(a, b)| GaussRat::new(a.clone(), b.clone())).collect();
        let e10: Vec<GaussRat> = d.n.mul_vec(&re).into_iter().zip(d.n.mul_vec(&im)).map(|(a, b)| GaussRat::new(a, b)).collect();
        if e10.iter().all(|z| z.is_zero()) {
            return Err(invalid("e21 lies in W2"));
        }
        let e12 = conj(&e21);
        let e01 = conj(&e10);
        if !gpair(&gram, &e21, &e21).is_zero() || !gpair(&gram, &e21, &e12).is_zero() {
            return Err(invalid("e21 is not isotropic against V3"));
        }
        // i Q(e21, N e12) = 1
        if !gauss_is(&gpair(&gram, &e21, &e01), 0, -1) {
            return Err(invalid("e21 is not normalized by i Q(e21, N e12) = 1"));
        }
        Ok(OrbitModel { d, basis: ModelBasis::II(TypeIIBasis { e21, e10 }), gram })
    }

    /// Type III model from a rational generator `f` of the `V4` line.
    pub fn type_iii(d: DegenerationData, f: RatVector) -> Result<Self> {
        if d.kind != DegenType::III {
            return Err(Error::TypeMismatch { expected: "III".into(), found: d.kind.to_string() });
        }
        if f.len() != d.host.rank() {
            return Err(Error::DimensionMismatch(format!("f has length {}, lattice rank {}", f.len(), d.host.rank())));
        }
        let gram = to_rat(d.host.gram());
        let nf = d.n.mul_vec(&f);
        let n2f = d.n.mul_vec(&nf);
        let c = gram.pair(&f, &n2f);
        if !c.is_positive() {
            return Err(invalid("Q(f, N^2 f) must be positive"));
        }
        if !gram.pair(&f, &f).is_zero() {
            return Err(invalid("f is not isotropic"));
        }
        Ok(OrbitModel { d, basis: ModelBasis::III(TypeIIIBasis { f, nf, n2f, c }), gram })
    }

    pub fn kind(&self) -> DegenType {
        self.d.kind
    }

    /// Restriction of `Q` to the model block: `{e21, e12, e10, e01}` (II) or `{f, Nf, N^2 f}` (III).
    pub fn gram_block(&self) -> Vec<Vec<GaussRat>> {
        let vs: Vec<Vec<GaussRat>> = match &self.basis {
            ModelBasis::II(b) => vec![b.e21.clone(), conj(&b.e21), b.e10.clone(), conj(&b.e10)],
            ModelBasis::III(b) => vec![to_gauss(&b.f), to_gauss(&b.nf), to_gauss(&b.n2f)],
        };
        vs.iter().map(|x| vs.iter().map(|y| gpair(&self.gram, x, y)).collect()).collect()
    }

    fn in_w2(&self, v: &[BigRational]) -> bool {
        let w2 = to_rat(&self.d.w[2]);
        v.iter().all(Zero::is_zero) || coordinates(&w2, v).is_some()
    }

    /// `a(v)` for type II, with `v = v2 + a e10 + conj(a) e01`.
    fn a_ii(&self, b: &TypeIIBasis, v: &[BigRational]) -> GaussRat {
        // Q(e10, e12) = i, so a = -i Q(v, e12)
        let q = gpair(&self.gram, &to_gauss(v), &conj(&b.e21));
        q * GaussRat::new(BigRational::zero(), -BigRational::one())
    }

    /// `(a', b')` for type III with `a = a' sqrt(c)`, `b = b' sqrt(c)`.
    fn ab_iii(&self, b: &TypeIIIBasis, v: &[BigRational]) -> (BigRational, BigRational) {
        let bp = self.gram.pair(v, &b.f) / &b.c;
        let ap = -self.gram.pair(v, &b.nf) / &b.c;
        (ap, bp)
    }

    /// Exact `Q(v_2, v_2)` (II) or `Q(v_U, v_U)` (III).
    pub fn pure_part_norm(&self, v: &[BigRational]) -> Result<BigRational> {
        if !self.in_w2(v) {
            return Err(Error::NotInW2);
        }
        Ok(match &self.basis {
            ModelBasis::II(b) => {
                let a = self.a_ii(b, v);
                let v2: RatVector = v
                    .iter()
                    .zip(&b.e10)
                    .map(|(x, e)| {
                        let s = &a * e;
                        x - (&s.re + &s.re)
                    })
                    .collect();
                self.gram.pair(&v2, &v2)
            }
            ModelBasis::III(b) => {
                let (ap, bp) = self.ab_iii(b, v);
                let vu: RatVector = v.iter().zip(&b.nf).zip(&b.n2f).map(|((x, p), q)| x - &ap * p - &bp * q).collect();
                self.gram.pair(&vu, &vu)
            }
        })
    }

    /// Hodge norm `||v||^2` and `h(s_v)` at `z` in the upper half plane.
    pub fn hodge_norm<R: Real>(&self, v: &[BigRational], z: Complex<R>) -> Result<(R, R)> {
        let pure = self.pure_part_norm(v)?;
        let two = R::lit(2.0);
        Ok(match &self.basis {
            ModelBasis::II(b) => {
                let a2: R = rat(&gauss_abs2(&self.a_ii(b, v)));
                let h = a2 / z.im;
                (rat::<R>(&pure) + two * h, h)
            }
            ModelBasis::III(b) => {
                let (ap, bp) = self.ab_iii(b, v);
                let c: R = rat(&b.c);
                let (a, bb) = (rat::<R>(&ap), rat::<R>(&bp));
                let s = (bb - a * z.re) / z.im;
                let h = c * (a * a + s * s);
                (rat::<R>(&pure) + c * a * a + two * c * s * s, h)
            }
        })
    }

    /// `-Q(e_z, conj e_z)` for the period vector `e_z^{2,0}`.
    pub fn e20_norm<R: Real>(&self, z: Complex<R>) -> R {
        let g = &self.gram;
        let n = g.rows();
        let lift = |x: &GaussRat| Complex::new(rat::<R>(&x.re), rat::<R>(&x.im));
        let ez: Vec<Complex<R>> = match &self.basis {
            ModelBasis::II(b) => (0..n).map(|i| lift(&b.e21[i]) + z * lift(&b.e10[i])).collect(),
            ModelBasis::III(b) => {
                let s = rat::<R>(&b.c).sqrt();
                let half = R::lit(0.5);
                (0..n)
                    .map(|i| {
                        let v = Complex::new(rat::<R>(&b.f[i]), R::zero())
                            + z * rat::<R>(&b.nf[i])
                            + z * z * half * rat::<R>(&b.n2f[i]);
                        v / s
                    })
                    .collect()
            }
        };
        let mut acc = Complex::new(R::zero(), R::zero());
        for i in 0..n {
            for j in 0..n {
                acc = acc + ez[i] * ez[j].conj() * rat::<R>(&g[(i, j)]);
            }
        }
        -acc.re
    }

    /// Coefficient of `dz ^ dzbar / Im(z)^2` in the Chern form.
    pub fn chern_form_scale<R: Real>(&self) -> Complex<R> {
        let k = if self.kind() == DegenType::II { 8.0 } else { 4.0 };
        Complex::new(R::zero(), R::one() / (R::lit(k) * R::PI()))
    }

    /// `|det [[a1, conj a1], [a2, conj a2]]|^2` over a basis of `W1` (type II).
    pub fn alpha_det_sq(&self) -> Result<BigRational> {
        let ModelBasis::II(b) = &self.basis else {
            return Err(Error::TypeMismatch { expected: "II".into(), found: self.kind().to_string() });
        };
        let w1 = to_rat(&self.d.w[1]);
        let a1 = self.a_ii(b, w1.row(0));
        let a2 = self.a_ii(b, w1.row(1));
        // a1 conj(a2) - conj(a1) a2 = 2 i Im(a1 conj a2)
        let im = &a1.im * &a2.re - &a1.re * &a2.im;
        Ok(BigRational::from_integer(4.into()) * &im * &im)
    }

    /// `disc31 / r1` from the degeneration invariants, for comparison with [`Self::alpha_det_sq`].
    pub fn expected_alpha_det_sq(&self) -> Result<BigRational> {
        match invariants(&self.d)? {
            Invariants::II { r1, disc31, .. } => Ok(BigRational::new(disc31, r1)),
            _ => Err(Error::TypeMismatch { expected: "II".into(), found: self.kind().to_string() }),
        }
    }
}

/// Type II Kudla-Millson profile `e^{-pi|a|^2}(pi|a|^2 - 1)`.
pub fn km_profile_ii<R: Real>(a: Complex<R>) -> R {
    let s = R::PI() * a.norm_sqr();
    (-s).exp() * (s - R::one())
}

/// Type III profile `e^{-2 pi b^2}(4 pi b^2 - 1)`.
pub fn km_profile_iii<R: Real>(b: R) -> R {
    let s = R::PI() * b * b;
    (-(s + s)).exp() * (R::lit(4.0) * s - R::one())
}

/// Zeroth Fourier coefficient of the profile: polar quadrature over `C` (II) or the line (III).
pub fn km_zeroth_fourier<R: Real>(kind: DegenType, tol: R) -> Option<R> {
    let r_max = R::lit(12.0);
    match kind {
        DegenType::II => {
            let two_pi = R::lit(2.0) * R::PI();
            quad::integrate(|r: R| two_pi * r * km_profile_ii(Complex::new(r, R::zero())), R::zero(), r_max, tol)
        }
        DegenType::III => quad::integrate(km_profile_iii, -r_max, r_max, tol),
        DegenType::Trivial => None,
    }
}

/// `sum_k exp(-pi p (k + delta)^2)` by direct summation.
pub fn gaussian_line_sum<R: Real>(p: R, delta: R, eps: R) -> R {
    let d = delta - delta.floor();
    let reach = ((-eps.ln()) / (R::PI() * p)).sqrt() + R::lit(2.0);
    let kmax = reach.to_i64().unwrap_or(i64::MAX / 4);
    let mut acc = R::zero();
    for k in -kmax..=kmax {
        let x = R::lit(k as f64) + d;
        acc = acc + (-R::PI() * p * x * x).exp();
    }
    acc
}

/// The same sum after Poisson summation: `p^{-1/2} sum_n exp(-pi n^2/p) cos(2 pi n delta)`.
pub fn gaussian_line_sum_dual<R: Real>(p: R, delta: R, eps: R) -> R {
    let reach = ((-eps.ln()) * p / R::PI()).sqrt() + R::lit(2.0);
    let nmax = reach.to_i64().unwrap_or(i64::MAX / 4);
    let two_pi = R::lit(2.0) * R::PI();
    let mut acc = R::one();
    for n in 1..=nmax {
        let x = R::lit(n as f64);
        acc = acc + R::lit(2.0) * (-R::PI() * x * x / p).exp() * (two_pi * x * delta).cos();
    }
    acc / p.sqrt()
}

/// Lattice-sum cutoffs: terms with `2 pi y h` above `x_cut` are dropped.
#[derive(Clone, Debug)]
pub struct Cutoffs {
    pub x_cut: f64,
    pub tol: f64,
}

impl Default for Cutoffs {
    fn default() -> Self {
        Cutoffs { x_cut: 60.0, tol: 1e-12 }
    }
}

/// Vectors of `(mu + L) cap W2` with `Q(v, v) = 2m`, grouped by model data.
#[derive(Clone, Debug)]
enum Support {
    /// `|a(v)|^2` per vector (type II).
    II(Vec<BigRational>),
    /// Lines `v + k v0` (type III): `a'`, `b'` at `k = 0` and the step `b'(v0)`.
    III { c: BigRational, lines: Vec<(BigRational, BigRational, BigRational)> },
}

/// A point of `(mu + L) cap W2`, if any.
fn coset_point(d: &DegenerationData, mu: &[BigRational]) -> Option<RatVector> {
    let g = to_rat(d.host.gram());
    let w1 = to_rat(&d.w[1]);
    let a = &w1 * &g;
    // W2 = W1^perp: solve (W1 G) l = -(W1 G) mu over the integers
    let rhs = a.mul_vec(mu);
    let den = rhs.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
    let am = a.map(|x| (x * BigRational::from_integer(den.clone())).to_integer());
    let c: Vec<BigInt> = rhs.iter().map(|x| -(x * BigRational::from_integer(den.clone())).to_integer()).collect();
    let l = solve_integer(&am, &c)?;
    Some(mu.iter().zip(to_rat_vec(&l)).map(|(x, y)| x + y).collect())
}

impl OrbitModel {
    fn support(&self, m: &BigRational, mu: usize, a_max: &BigRational) -> Result<Support> {
        let fqm = discriminant_group(&self.d.host);
        if mu >= fqm.len() {
            return Err(Error::ClassIndexMismatch(format!("class {} of {}", mu, fqm.len())));
        }
        let two_m = m + m;
        let Some(p) = coset_point(&self.d, fqm.rep(mu)) else {
            return Ok(match &self.basis {
                ModelBasis::II(_) => Support::II(Vec::new()),
                ModelBasis::III(b) => Support::III { c: b.c.clone(), lines: Vec::new() },
            });
        };
        match &self.basis {
            ModelBasis::II(b) => {
                let basis = to_rat(&self.d.w[2]);
                let shift = coordinates(&basis, &p).expect("coset point lies in W2");
                let k = basis.rows();
                let avec: Vec<GaussRat> = (0..k).map(|i| self.a_ii(b, basis.row(i))).collect();
                let gb = &(&basis * &self.gram) * &basis.transpose();
                let mut maj = gb.clone();
                for i in 0..k {
                    for j in 0..k {
                        maj[(i, j)] += &avec[i].re * &avec[j].re + &avec[i].im * &avec[j].im;
                    }
                }
                let mut out = Vec::new();
                let bound = &two_m + a_max;
                for_each_short_vector(&maj, &shift, &bound, |x, _| {
                    let y: RatVector = shift.iter().zip(x).map(|(s, t)| s + BigRational::from_integer(t.clone())).collect();
                    if gb.pair(&y, &y) != two_m {
                        return;
                    }
                    let v = basis.transpose().mul_vec(&y);
                    let a2 = gauss_abs2(&self.a_ii(b, &v));
                    if &a2 <= a_max {
                        out.push(a2);
                    }
                })
                .map_err(|_| invalid("majorant is not positive definite"))?;
                Ok(Support::II(out))
            }
            ModelBasis::III(b) => {
                let g = self.d.graded()?;
                let v0 = to_rat(&self.d.w[0]).row_vec(0);
                let lifts = to_rat(&g.lifts[2]);
                let full = RatMatrix::from_rows(&[v0.clone()], v0.len()).vstack(&lifts);
                let sc = coordinates(&full, &p).expect("coset point lies in W2");
                let shift = sc[1..].to_vec();
                let k = lifts.rows();
                let gb = &(&lifts * &self.gram) * &lifts.transpose();
                let aps: Vec<BigRational> = (0..k).map(|i| self.ab_iii(b, lifts.row(i)).0).collect();
                let mut maj = gb.clone();
                let two = BigRational::from_integer(2.into());
                for i in 0..k {
                    for j in 0..k {
                        maj[(i, j)] += &two * &b.c * &aps[i] * &aps[j];
                    }
                }
                let (_, step) = self.ab_iii(b, &v0);
                let base0: RatVector = v0.iter().map(|x| x * &sc[0]).collect();
                let mut lines = Vec::new();
                let bound = &two_m + &two * &b.c * a_max;
                for_each_short_vector(&maj, &shift, &bound, |x, _| {
                    let y: RatVector = shift.iter().zip(x).map(|(s, t)| s + BigRational::from_integer(t.clone())).collect();
                    if gb.pair(&y, &y) != two_m {
                        return;
                    }
                    let mut v = lifts.transpose().mul_vec(&y);
                    for (vi, bi) in v.iter_mut().zip(&base0) {
                        *vi += bi;
                    }
                    let (ap, bp) = self.ab_iii(b, &v);
                    if &ap * &ap <= *a_max {
                        lines.push((ap, bp, step.clone()));
                    }
                })
                .map_err(|_| invalid("majorant is not positive definite"))?;
                Ok(Support::III { c: b.c.clone(), lines })
            }
        }
    }

    fn a_max_for<R: Real>(&self, y: R, im_z: R, cut: &Cutoffs) -> BigRational {
        // h >= |a|^2 / Im z (II) or c a'^2 (III)
        let x = R::lit(cut.x_cut) / (R::lit(2.0) * R::PI() * y);
        let lim = match &self.basis {
            ModelBasis::II(_) => x * im_z,
            ModelBasis::III(b) => x / rat::<R>(&b.c),
        };
        let lim = lim.to_f64().unwrap_or(f64::MAX).max(0.0);
        BigRational::from_float(lim).unwrap_or_else(BigRational::zero)
    }

    /// `Theta'(y)_{m,mu}` at `t` in the punctured disk: sum of `exp(-2 pi y h(s_v))` over
    /// `v in mu + L`, `v in W2`, `Q(v,v) = 2m`, with `Im z = -log|t| / 2 pi`.
    pub fn theta_prime_truncated<R: Real>(
        &self,
        y: R,
        t: Complex<R>,
        m: &BigRational,
        mu: usize,
        cut: &Cutoffs,
    ) -> Result<R> {
        let two_pi = R::lit(2.0) * R::PI();
        let z = Complex::new(t.arg() / two_pi, -t.norm().ln() / two_pi);
        if !(z.im > R::zero()) {
            return Err(Error::NegativeArgument(z.im.to_f64().unwrap_or(f64::NAN)));
        }
        let eps = R::lit(cut.tol) * R::lit(1e-4);
        let a_max = self.a_max_for(y, z.im, cut);
        let support = self.support(m, mu, &a_max)?;
        let mut acc = R::zero();
        let kept;
        match support {
            Support::II(a2s) => {
                for a2 in &a2s {
                    acc = acc + (-two_pi * y * rat::<R>(a2) / z.im).exp();
                }
                kept = a2s.len();
            }
            Support::III { c, lines } => {
                let c = rat::<R>(&c);
                for (ap, bp, step) in &lines {
                    let (ap, bp, st) = (rat::<R>(ap), rat::<R>(bp), rat::<R>(step));
                    let outer = (-two_pi * y * c * ap * ap).exp();
                    // exp(-2 pi y c (bp + k st - ap x)^2 / Y^2) = exp(-pi p (k + delta)^2)
                    let p = R::lit(2.0) * y * c * st * st / (z.im * z.im);
                    let delta = (bp - ap * z.re) / st;
                    let s = if p < R::one() { gaussian_line_sum_dual(p, delta, eps) } else { gaussian_line_sum(p, delta, eps) };
                    acc = acc + outer * s;
                }
                kept = lines.len();
            }
        }
        let tail = R::lit((kept as f64 + 1.0) * (-cut.x_cut).exp());
        if tail > R::lit(cut.tol) {
            return Err(Error::CutoffTooSmall { bound: tail.to_f64().unwrap_or(f64::NAN), tol: cut.tol });
        }
        Ok(acc)
    }

    /// `int_1^inf Theta'(uy) du/u` at `t = e^{-2 pi Y}`, i.e. the sum of `E1(2 pi y h(s_v))` over
    /// vectors with `h` not identically zero.
    pub fn residue_integral<R: Real>(&self, y: R, big_y: R, m: &BigRational, mu: usize, cut: &Cutoffs) -> Result<R> {
        let two_pi = R::lit(2.0) * R::PI();
        let x_cut = R::lit(cut.x_cut);
        let a_max = self.a_max_for(y, big_y, cut);
        let support = self.support(m, mu, &a_max)?;
        let mut acc = R::zero();
        let mut kept = 0usize;
        match support {
            Support::II(a2s) => {
                for a2 in a2s.iter().filter(|a| !a.is_zero()) {
                    acc = acc + e1(two_pi * y * rat::<R>(a2) / big_y);
                    kept += 1;
                }
            }
            Support::III { c, lines } => {
                let c = rat::<R>(&c);
                for (ap, bp, step) in &lines {
                    let (ap, bp, st) = (rat::<R>(ap), rat::<R>(bp), rat::<R>(step));
                    let base = two_pi * y * c * ap * ap;
                    if base > x_cut {
                        continue;
                    }
                    // 2 pi y c ((bp + k st)/Y)^2 <= x_cut - base
                    let w = ((x_cut - base) / (two_pi * y * c)).sqrt() * big_y / st.abs();
                    let center = -bp / st;
                    let lo = (center - w).floor().to_i64().unwrap_or(0);
                    let hi = (center + w).ceil().to_i64().unwrap_or(0);
                    for k in lo..=hi {
                        let s = (bp + R::lit(k as f64) * st) / big_y;
                        let arg = base + two_pi * y * c * s * s;
                        if arg.is_zero() {
                            continue;
                        }
                        acc = acc + e1(arg);
                        kept += 1;
                    }
                }
            }
        }
        let tail = R::lit((kept as f64 + 1.0) * (-cut.x_cut).exp() / cut.x_cut);
        if tail > R::lit(cut.tol) {
            return Err(Error::CutoffTooSmall { bound: tail.to_f64().unwrap_or(f64::NAN), tol: cut.tol });
        }
        Ok(acc)
    }

    /// The boundary coefficient `Z^-(y)_{m,mu}` this model's residue should reproduce.
    pub fn predicted_slope<R: Real>(&self, y: R, m: &BigRational, mu: usize) -> Result<R> {
        let m_max = if m.is_negative() { BigRational::zero() } else { m.ceil() };
        let series = match self.kind() {
            DegenType::II => z_minus_type_ii::<R>(&self.d, &m_max, "orbit")?.series,
            _ => {
                let tr = Truncation { m_max, w_max: None, tol: 1e-14 };
                z_minus_type_iii::<R>(&self.d, &tr, "orbit")?.series
            }
        };
        match series.coeff(m, mu) {
            Some(c) => Ok(c.eval(y)?.re),
            None => Ok(R::zero()),
        }
    }

    /// Fit the residue integral against `-log|t|^2 = 4 pi Y`.
    pub fn residue_slope<R: Real>(&self, y: R, m: &BigRational, mu: usize, ys: &[f64], cut: &Cutoffs) -> Result<ResidueFit<R>> {
        if ys.len() < 4 {
            return Err(Error::DimensionMismatch(format!("need at least 4 sample heights, got {}", ys.len())));
        }
        let four_pi = R::lit(4.0) * R::PI();
        let xs: Vec<R> = ys.iter().map(|&v| four_pi * R::lit(v)).collect();
        let gs: Vec<R> = ys.iter().map(|&v| self.residue_integral(y, R::lit(v), m, mu, cut)).collect::<Result<_>>()?;
        let predicted = self.predicted_slope(y, m, mu)?;
        let (coef, residual) = lstsq3(&xs, &gs);
        let scale = gs.iter().fold(R::one(), |a, g| a.max(g.abs()));
        if residual / scale > R::lit(1e-7f64.max(1e3 * R::EPS)) {
            return Err(Error::FitUnstable((residual / scale).to_f64().unwrap_or(f64::NAN)));
        }
        let rel = |s: R| {
            if predicted.abs() > R::lit(1e-300) {
                (s - predicted).abs() / predicted.abs()
            } else {
                s.abs()
            }
        };
        let secants: Vec<R> = (1..xs.len()).map(|i| (gs[i] - gs[i - 1]) / (xs[i] - xs[i - 1])).collect();
        Ok(ResidueFit {
            slope: coef[0],
            log_coeff: coef[1],
            intercept: coef[2],
            predicted,
            rel_error: rel(coef[0]),
            secant_errors: secants.iter().map(|&s| rel(s)).collect(),
            secant_slopes: secants,
            samples: xs.into_iter().zip(gs).collect(),
            residual,
        })
    }
}

#[derive(Clone, Debug)]
pub struct ResidueFit<R> {
    /// Coefficient of `-log|t|^2` in `alpha X + beta log X + C`.
    pub slope: R,
    pub log_coeff: R,
    pub intercept: R,
    pub predicted: R,
    /// Relative error of `slope` (absolute when the prediction is zero).
    pub rel_error: R,
    /// Slopes between consecutive samples and their errors.
    pub secant_slopes: Vec<R>,
    pub secant_errors: Vec<R>,
    /// `(X, value)` pairs.
    pub samples: Vec<(R, R)>,
    pub residual: R,
}

/// Least squares for `g = a X + b log X + c`; returns coefficients and the residual norm.
fn lstsq3<R: Real>(xs: &[R], gs: &[R]) -> ([R; 3], R) {
    let rows: Vec<[R; 3]> = xs.iter().map(|&x| [x, x.ln(), R::one()]).collect();
    let mut ata = [[R::zero(); 3]; 3];
    let mut atb = [R::zero(); 3];
    for (r, &g) in rows.iter().zip(gs) {
        for i in 0..3 {
            atb[i] = atb[i] + r[i] * g;
            for j in 0..3 {
                ata[i][j] = ata[i][j] + r[i] * r[j];
            }
        }
    }
    let coef = solve3(ata, atb);
    let residual = rows
        .iter()
        .zip(gs)
        .map(|(r, &g)| {
            let e = r[0] * coef[0] + r[1] * coef[1] + r[2] * coef[2] - g;
            e * e
        })
        .fold(R::zero(), |a, b| a + b)
        .sqrt();
    (coef, residual)
}

fn solve3<R: Real>(mut a: [[R; 3]; 3], mut b: [R; 3]) -> [R; 3] {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] = a[row][k] - f * a[col][k];
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = [R::zero(); 3];
    for i in (0..3).rev() {
        let mut s = b[i];
        for k in i + 1..3 {
            s = s - a[i][k] * x[k];
        }
        x[i] = s / a[i][i];
    }
    x
}

/// Type II seed model with `e21 = a1 + (i/2) a2`, padded by zeros for orthogonal summands.
pub fn seed_model_ii(d: DegenerationData) -> Result<OrbitModel> {
    let (re, im, den) = crate::fixtures::type_ii_e21();
    let n = d.host.rank();
    let lift = |v: &[BigInt]| -> RatVector {
        (0..n).map(|i| v.get(i).map_or_else(BigRational::zero, |x| BigRational::new(x.clone(), den.clone()))).collect()
    };
    OrbitModel::type_ii(d, lift(&re), lift(&im))
}

/// Type III model with `f = b1`.
pub fn seed_model_iii(d: DegenerationData) -> Result<OrbitModel> {
    let n = d.host.rank();
    let f = (0..n).map(|i| if i == 0 { BigRational::one() } else { BigRational::zero() }).collect();
    OrbitModel::type_iii(d, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat as q;
    use crate::fixtures;

    fn model_ii() -> OrbitModel {
        let (l, t) = fixtures::type_ii_seed();
        seed_model_ii(DegenerationData::from_monodromy(t, l).unwrap()).unwrap()
    }

    fn model_iii() -> OrbitModel {
        let (l, t) = fixtures::type_iii_seed();
        seed_model_iii(DegenerationData::from_monodromy(t, l).unwrap()).unwrap()
    }

    fn g(re: i64, im: i64) -> GaussRat {
        GaussRat::new(q(re, 1), q(im, 1))
    }

    #[test]
    fn gram_blocks() {
        let b = model_ii().gram_block();
        let want = [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]];
        // columns e21, e12, e10, e01; entries are multiples of i
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(b[i][j], g(0, want[i][j]), "({}, {})", i, j);
            }
        }
        let b = model_iii().gram_block();
        let want = [[0, 0, 2], [0, -2, 0], [2, 0, 0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(b[i][j], g(want[i][j], 0));
            }
        }
    }

    #[test]
    fn hodge_norm_examples() {
        let m = model_iii();
        let b3 = vec![q(0, 1), q(0, 1), q(1, 1), q(0, 1)];
        let (n, h) = m.hodge_norm(&b3, Complex::new(0.0f64, 1.0)).unwrap();
        // b(b3) = Q(b3, f)/sqrt(2) = 1/sqrt(2)
        assert!((h - 0.5).abs() < 1e-15);
        assert!((n - 1.0).abs() < 1e-15);
        let e1v = vec![q(1, 1), q(0, 1), q(0, 1), q(0, 1)];
        assert_eq!(m.hodge_norm::<f64>(&e1v, Complex::new(0.0, 1.0)), Err(Error::NotInW2));

        let (l, t) = fixtures::type_ii_seed_plus(2);
        let m = seed_model_ii(DegenerationData::from_monodromy(t, l).unwrap()).unwrap();
        let u = vec![q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(1, 1)];
        let (n, h) = m.hodge_norm(&u, Complex::new(0.3f64, 2.0)).unwrap();
        assert_eq!(h, 0.0);
        assert!((n - 2.0).abs() < 1e-15);
    }

    #[test]
    fn e20_norms() {
        for z in [Complex::new(0.0f64, 1.0), Complex::new(0.4, 2.5)] {
            assert!((model_ii().e20_norm(z) - 2.0 * z.im).abs() < 1e-13);
            assert!((model_iii().e20_norm(z) - 2.0 * z.im * z.im).abs() < 1e-12);
        }
    }

    #[test]
    fn chern_scales() {
        let a: Complex<f64> = model_ii().chern_form_scale();
        let b: Complex<f64> = model_iii().chern_form_scale();
        assert!((a.im - 1.0 / (8.0 * std::f64::consts::PI)).abs() < 1e-16);
        assert!((b.im / a.im - 2.0).abs() < 1e-14);
    }

    #[test]
    fn alpha_determinant() {
        let m = model_ii();
        assert_eq!(m.alpha_det_sq().unwrap(), m.expected_alpha_det_sq().unwrap());
        assert_eq!(m.alpha_det_sq().unwrap(), q(1, 1));
    }

    #[test]
    fn invalid_models() {
        let (l, t) = fixtures::type_ii_seed();
        let d = DegenerationData::from_monodromy(t, l).unwrap();
        let z = vec![q(0, 1); 4];
        let bad = vec![q(1, 1), q(0, 1), q(0, 1), q(0, 1)];
        assert!(matches!(OrbitModel::type_ii(d.clone(), bad.clone(), z.clone()), Err(Error::InvalidModel(_))));
        assert!(matches!(OrbitModel::type_iii(d, bad), Err(Error::TypeMismatch { .. })));
    }

    #[test]
    fn profiles() {
        assert_eq!(km_profile_ii(Complex::new(0.0f64, 0.0)), -1.0);
        assert_eq!(km_profile_iii(0.0f64), -1.0);
        assert!(km_zeroth_fourier::<f64>(DegenType::II, 1e-13).unwrap().abs() < 1e-10);
        assert!(km_zeroth_fourier::<f64>(DegenType::III, 1e-13).unwrap().abs() < 1e-10);
    }

    #[test]
    fn poisson_line_sums() {
        for (p, d) in [(0.3f64, 0.2), (1.0, 0.0), (2.5, 0.7)] {
            let a = gaussian_line_sum(p, d, 1e-18);
            let b = gaussian_line_sum_dual(p, d, 1e-18);
            assert!((a - b).abs() < 1e-12, "{} {}", a, b);
        }
    }

    #[test]
    fn theta_prime_limits() {
        let m = model_ii();
        let cut = Cutoffs::default();
        let near = m.theta_prime_truncated(1.0f64, Complex::new(0.9, 0.0), &q(0, 1), 0, &cut).unwrap();
        assert!((near - 1.0).abs() < 1e-12);
        // slope in Im z is 1/|D| = 1 for the seed, so steps of 10/2pi
        let step = 10.0 / (2.0 * std::f64::consts::PI);
        let mut prev = 0.0;
        for k in 1..=6 {
            let t = Complex::new((-10.0 * k as f64).exp(), 0.0);
            let v = m.theta_prime_truncated(1.0f64, t, &q(0, 1), 0, &cut).unwrap();
            if k > 1 {
                assert!(v > prev);
            }
            if k > 4 {
                assert!(((v - prev) / step - 1.0).abs() < 1e-2, "{}", v - prev);
            }
            prev = v;
        }
        let m3 = model_iii();
        let a = m3.theta_prime_truncated(1.0f64, Complex::new((-20.0f64).exp(), 0.0), &q(0, 1), 0, &cut).unwrap();
        let b = m3.theta_prime_truncated(1.0f64, Complex::new((-40.0f64).exp(), 0.0), &q(0, 1), 0, &cut).unwrap();
        assert!(b > a);
    }

    #[test]
    fn residue_slope_type_ii() {
        let m = model_ii();
        let fit = m.residue_slope(1.0f64, &q(0, 1), 0, &[8.0, 16.0, 32.0, 64.0], &Cutoffs::default()).unwrap();
        assert!((fit.predicted - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
        assert!(fit.rel_error < 0.01, "{:?}", fit);
        assert!(fit.secant_errors.windows(2).all(|w| w[1] < w[0]), "{:?}", fit.secant_errors);
    }

    #[test]
    fn residue_slope_type_iii() {
        let m = model_iii();
        let fit = m.residue_slope(1.0f64, &q(0, 1), 0, &[8.0, 16.0, 32.0, 64.0], &Cutoffs::default()).unwrap();
        assert!(fit.rel_error < 0.02, "{:?}", fit);
        assert!(fit.secant_errors.windows(2).all(|w| w[1] < w[0]), "{:?}", fit.secant_errors);
    }
}
