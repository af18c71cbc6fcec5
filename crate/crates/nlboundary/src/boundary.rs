//! Boundary series `Z^-` at type II and III cusps, their holomorphic replacements,
//! and assembly of the full generating series.

use crate::degeneration::{invariants, DegenType, DegenerationData, Invariants};
use crate::error::{Error, Result};
use crate::exact::to_rat;
use crate::quadlattice::{discriminant_group, Lattice};
use crate::scalar::{rat, Real};
use crate::thetaforms::{
    eichler_integral, for_each_short_vector, slash_residual, theta_qexp, theta_series, CoeffFn, RatSeries,
    VVQExpansion,
};
use crate::weilrep::{iota_for, iota_graded_tensor, Gen, MpWord, WeilRep};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::str::FromStr;

/// Exact content of a boundary series, before any floating-point constant enters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactTerms {
    /// Coefficient at `(m, class)` is `factor * count / (4 pi y)`.
    InvY { factor: BigRational, terms: BTreeMap<(BigRational, usize), BigInt> },
    /// Coefficient at `(m, class)` is `sqrt(factor_sq) * count / (4 pi) * y^{-1/2} beta_{3/2}(2 pi r y)`,
    /// keyed by `(m, class, r)`.
    Beta { factor_sq: BigRational, terms: BTreeMap<(BigRational, usize, BigRational), BigInt> },
}

impl ExactTerms {
    pub fn to_expansion<R: Real>(&self, dim: usize, weight: BigRational, m_max: BigRational) -> VVQExpansion<R> {
        let mut out = VVQExpansion::zero(dim, weight, m_max);
        let four_pi = R::lit(4.0) * R::PI();
        match self {
            ExactTerms::InvY { factor, terms } => {
                let f: R = rat(factor);
                for ((m, j), n) in terms {
                    out.add_term(m.clone(), *j, &CoeffFn::inv_y(f * R::lit(n.to_f64().unwrap()) / four_pi));
                }
            }
            ExactTerms::Beta { factor_sq, terms } => {
                let f = rat::<R>(factor_sq).sqrt();
                for ((m, j, r), n) in terms {
                    out.add_term(m.clone(), *j, &CoeffFn::beta_half(f * R::lit(n.to_f64().unwrap()) / four_pi, r.clone()));
                }
            }
        }
        out
    }
}

/// `Z^-` at one cusp, in the coordinates of `rho_L`.
#[derive(Clone, Debug)]
pub struct CuspContribution<R> {
    pub label: String,
    pub kind: DegenType,
    pub invariants: Invariants,
    pub exact: ExactTerms,
    pub series: VVQExpansion<R>,
    /// Bound on the omitted part of the `w`-sum at `y >= 1/2` (type III).
    pub tail_bound: Option<R>,
}

/// Truncation budget for boundary series.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub m_max: BigRational,
    /// Largest `Q4(w, w)/2` kept; chosen from `tol` when absent.
    pub w_max: Option<BigRational>,
    pub tol: f64,
}

impl Truncation {
    pub fn new(m_max: i64) -> Self {
        Truncation { m_max: BigRational::from_integer(m_max.into()), w_max: None, tol: 1e-12 }
    }
}

fn half_rank(l: &Lattice) -> BigRational {
    BigRational::new(BigInt::from(l.rank()), BigInt::from(2))
}

fn type_ii_factor(inv: &Invariants) -> Result<BigRational> {
    let Invariants::II { r1, disc31, deg_q3 } = inv else { unreachable!() };
    if deg_q3 * deg_q3 != r1 * disc31 {
        return Err(Error::InvariantInconsistency("deg(Q3)^2 != r1*disc31".into()));
    }
    // r1/deg(Q3) equals sqrt(r1/disc31)
    let c = BigRational::new(r1.clone(), deg_q3.clone());
    if &c * &c != BigRational::new(r1.clone(), disc31.clone()) {
        return Err(Error::InvariantInconsistency("prefactor forms disagree".into()));
    }
    Ok(c)
}

fn require(d: &DegenerationData, kind: DegenType) -> Result<Invariants> {
    if d.kind != kind {
        return Err(Error::TypeMismatch { expected: kind.to_string(), found: d.kind.to_string() });
    }
    invariants(d)
}

/// `iota(Theta_{Gr2})` with exact coefficients, in `rho_L` coordinates.
pub fn embedded_gr2_theta(d: &DegenerationData, m_max: &BigRational) -> Result<RatSeries> {
    let iso = iota_for(d)?;
    if !iso.gr2.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    theta_series(&iso.gr2, m_max)?.push_forward(&iso.iota)
}

pub fn z_minus_type_ii<R: Real>(d: &DegenerationData, m_max: &BigRational, label: &str) -> Result<CuspContribution<R>> {
    let inv = require(d, DegenType::II)?;
    let factor = type_ii_factor(&inv)?;
    let theta = embedded_gr2_theta(d, m_max)?;
    let terms = theta.coeffs.iter().map(|(k, c)| (k.clone(), c.to_integer())).collect();
    let exact = ExactTerms::InvY { factor, terms };
    let series = exact.to_expansion(theta.dim, half_rank(&d.host), m_max.clone());
    Ok(CuspContribution { label: label.into(), kind: DegenType::II, invariants: inv, exact, series, tail_bound: None })
}

/// Geometric tail `2 e^{-pi Q} / (1 - e^{-pi})` of the `w`-sum beyond `Q4(w, w) >= Q`, at `y >= 1/2`.
fn w_tail(q_next: f64) -> f64 {
    2.0 * (-std::f64::consts::PI * q_next).exp() / (1.0 - (-std::f64::consts::PI).exp())
}

/// Smallest `Q4(w, w)` over all classes that exceeds `2 w_max`.
fn next_gr4_norm(vol: &BigInt, w_max: &BigRational) -> BigRational {
    // w = (t + k) g with t = a/vol, Q4(w,w) = vol (t+k)^2; scan k around the cutoff.
    let two_w = w_max * BigRational::from_integer(2.into());
    let v = BigRational::from_integer(vol.clone());
    let mut best: Option<BigRational> = None;
    let vol_u = vol.to_u64().expect("small volume");
    let root: BigInt = (&two_w / &v).ceil().to_integer().sqrt();
    let kmax = ToPrimitive::to_i64(&(root + BigInt::from(2))).unwrap();
    for a in 0..vol_u {
        let t = BigRational::new(BigInt::from(a), vol.clone());
        for k in -kmax - 1..=kmax + 1 {
            let x = &t + BigRational::from_integer(k.into());
            let q = &v * &x * &x;
            if q > two_w && best.as_ref().is_none_or(|b| &q < b) {
                best = Some(q);
            }
        }
    }
    best.expect("nonempty scan")
}

fn choose_w_max(vol: &BigInt, tr: &Truncation) -> Result<(BigRational, f64)> {
    if let Some(w) = &tr.w_max {
        let bound = w_tail(rat::<f64>(&next_gr4_norm(vol, w)));
        if bound > tr.tol {
            return Err(Error::TruncationBudgetExceeded { bound, tol: tr.tol });
        }
        return Ok((w.clone(), bound));
    }
    let mut w = BigRational::zero();
    loop {
        let bound = w_tail(rat::<f64>(&next_gr4_norm(vol, &w)));
        if bound <= tr.tol {
            return Ok((w, bound));
        }
        w += BigRational::one();
        if w > BigRational::from_integer(10_000.into()) {
            return Err(Error::TruncationBudgetExceeded { bound, tol: tr.tol });
        }
    }
}

/// Enumerate `(class, Q/2)` counts of the positive definite `l` for `Q/2 <= bound`.
fn class_norm_counts(l: &Lattice, bound: &BigRational) -> Result<Vec<BTreeMap<BigRational, u64>>> {
    let a = discriminant_group(l);
    let gram = to_rat(l.gram());
    let two = BigRational::from_integer(2.into());
    let mut out = Vec::with_capacity(a.len());
    for mu in a.reps() {
        let mut counts = BTreeMap::new();
        for_each_short_vector(&gram, mu, &(bound * &two), |_, q| {
            *counts.entry(q / &two).or_insert(0u64) += 1;
        })?;
        out.push(counts);
    }
    Ok(out)
}

/// Index of each class of `Gr4 = [vol]` inside the discriminant group of `[-vol]`.
fn gr4_to_minus(gr4: &Lattice, minus: &Lattice) -> Result<Vec<usize>> {
    let a = discriminant_group(gr4);
    let b = discriminant_group(minus);
    a.reps()
        .iter()
        .map(|r| b.index_of(r).ok_or_else(|| Error::ClassIndexMismatch("Gr4 class".into())))
        .collect()
}

pub fn z_minus_type_iii<R: Real>(d: &DegenerationData, tr: &Truncation, label: &str) -> Result<CuspContribution<R>> {
    let inv = require(d, DegenType::III)?;
    let Invariants::III { r2, disc40, vol4 } = &inv else { unreachable!() };
    let factor_sq = BigRational::new(r2.clone(), BigInt::from(2) * disc40);
    let tens = iota_graded_tensor(d)?;
    let gr4 = d.gr4_lattice()?;
    let (w_max, tail) = choose_w_max(vol4, tr)?;
    let v_counts = class_norm_counts(&tens.prim, &(&tr.m_max + &w_max))?;
    let w_counts = class_norm_counts(&gr4, &w_max)?;
    let nu_idx = gr4_to_minus(&gr4, &tens.gr4_minus)?;
    let n4 = nu_idx.len();
    let two = BigRational::from_integer(2.into());
    let mut src: BTreeMap<(BigRational, usize, BigRational), BigInt> = BTreeMap::new();
    for (lam, vc) in v_counts.iter().enumerate() {
        for (nu, wc) in w_counts.iter().enumerate() {
            let j = lam * n4 + nu_idx[nu];
            for (qv, cv) in vc {
                for (qw, cw) in wc {
                    let m = qv - qw;
                    if m > tr.m_max {
                        continue;
                    }
                    *src.entry((m, j, qw * &two)).or_insert_with(BigInt::zero) += BigInt::from(cv * cw);
                }
            }
        }
    }
    let mut terms = BTreeMap::new();
    for ((m, j, r), c) in src {
        for &i in &tens.iota.columns[j] {
            *terms.entry((m.clone(), i, r.clone())).or_insert_with(BigInt::zero) += &c;
        }
    }
    let exact = ExactTerms::Beta { factor_sq, terms };
    let series = exact.to_expansion(tens.iota.target_dim, half_rank(&d.host), tr.m_max.clone());
    Ok(CuspContribution {
        label: label.into(),
        kind: DegenType::III,
        invariants: inv,
        exact,
        series,
        tail_bound: Some(R::lit(tail)),
    })
}

/// `(r2 / sqrt(Vol4)) iota(E(tau) (x) Theta_prim(tau))`, where `E` is the Eichler integral of
/// `Theta_{Gr4}`.
pub fn z_minus_integral_form_iii<R: Real>(d: &DegenerationData, tau: Complex<R>, tr: &Truncation) -> Result<Vec<Complex<R>>> {
    let inv = require(d, DegenType::III)?;
    let Invariants::III { r2, vol4, .. } = &inv else { unreachable!() };
    let tens = iota_graded_tensor(d)?;
    let gr4 = d.gr4_lattice()?;
    let (w_max, _) = choose_w_max(vol4, tr)?;
    let theta4: VVQExpansion<R> = theta_qexp(&gr4, &w_max)?;
    let e = eichler_integral(&theta4, tau, R::lit(tr.tol.max(R::EPS * 100.0)) * R::lit(1e-2))?;
    let theta_p: VVQExpansion<R> = theta_qexp(&tens.prim, &(&tr.m_max + &w_max))?;
    let tp = theta_p.eval(tau)?;
    let nu_idx = gr4_to_minus(&gr4, &tens.gr4_minus)?;
    let n4 = nu_idx.len();
    let mut src = vec![Complex::zero(); tens.iota.source_dim];
    for (lam, t) in tp.iter().enumerate() {
        for (nu, ev) in e.iter().enumerate() {
            src[lam * n4 + nu_idx[nu]] = src[lam * n4 + nu_idx[nu]] + t * ev;
        }
    }
    let pre = rat::<R>(&BigRational::from_integer(r2.clone())) / rat::<R>(&BigRational::from_integer(vol4.clone())).sqrt();
    Ok(tens.iota.apply(&src).into_iter().map(|z| z * pre).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Replacement {
    G2,
    Qddq,
}

impl FromStr for Replacement {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "g2" => Ok(Replacement::G2),
            "qddq" => Ok(Replacement::Qddq),
            _ => Err(format!("unknown replacement {s:?}; expected g2 or qddq")),
        }
    }
}

/// Holomorphic stand-ins for a type II `Z^-`, exact, in `rho_L` coordinates.
pub fn holomorphic_replacement_ii(d: &DegenerationData, variant: Replacement, m_max: &BigRational) -> Result<RatSeries> {
    let inv = require(d, DegenType::II)?;
    let c = type_ii_factor(&inv)?;
    let theta = embedded_gr2_theta(d, m_max)?;
    let rk = d.host.rank();
    let mut out = match variant {
        Replacement::G2 => theta.mul_g2().scale(&(c * BigRational::from_integer((-2).into()))),
        Replacement::Qddq => {
            if rk <= 4 {
                return Err(Error::RankTooSmall(rk));
            }
            theta.qddq().scale(&(c * BigRational::new(2.into(), BigInt::from(rk - 4))))
        }
    };
    out.weight = half_rank(&d.host);
    Ok(out)
}

/// Holomorphic part `2 (r1/deg Q3) G2 iota(Theta_{Gr2})`, whose sum with the type II `Z^-`
/// is `2 (r1/deg Q3) G2* iota(Theta_{Gr2})`.
pub fn synthetic_zplus_ii(d: &DegenerationData, m_max: &BigRational) -> Result<RatSeries> {
    let mut out = holomorphic_replacement_ii(d, Replacement::G2, m_max)?.scale(&BigRational::from_integer((-1).into()));
    out.weight = half_rank(&d.host);
    Ok(out)
}

/// User-supplied holomorphic part `Z^+`, including `-deg` at `(0, 0)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratingSeriesInput {
    pub coeffs: BTreeMap<(BigRational, usize), BigRational>,
}

impl GeneratingSeriesInput {
    pub fn from_series(s: &RatSeries) -> Self {
        GeneratingSeriesInput { coeffs: s.coeffs.clone() }
    }

    fn to_series(&self, l: &Lattice, m_max: &BigRational) -> Result<RatSeries> {
        let a = discriminant_group(l);
        let mut out = RatSeries::zero(a.len(), half_rank(l), m_max.clone());
        let half = BigRational::new(1.into(), 2.into());
        for ((m, j), c) in &self.coeffs {
            if *j >= a.len() {
                return Err(Error::ClassIndexMismatch(format!("class {} out of {}", j, a.len())));
            }
            if !(m - a.qvalue(*j) * &half).is_integer() {
                return Err(Error::ClassIndexMismatch(format!("exponent {} not in Q(mu)/2 + Z for class {}", m, j)));
            }
            if m <= m_max {
                out.add_term(m.clone(), *j, c.clone());
            }
        }
        Ok(out.prune())
    }
}

/// `Z = Z^+ + sum_P Z^-_P` with its representation.
#[derive(Clone, Debug)]
pub struct Assembled<R> {
    pub rep: WeilRep,
    pub weight: BigRational,
    pub zplus: RatSeries,
    pub cusps: Vec<VVQExpansion<R>>,
    pub total: VVQExpansion<R>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModularityReport<R> {
    pub s_residual: R,
    pub t_residual: R,
    /// Every stored exponent satisfies `m = Q(mu)/2 mod 1`.
    pub exponents_consistent: bool,
}

pub fn require_signature_n2(l: &Lattice) -> Result<()> {
    let (p, n) = l.signature();
    if n != 2 || p == 0 {
        return Err(Error::BadSignature(p, n));
    }
    Ok(())
}

pub fn assemble<R: Real>(
    zplus: &GeneratingSeriesInput,
    cusps: &[VVQExpansion<R>],
    l: &Lattice,
    m_max: &BigRational,
) -> Result<Assembled<R>> {
    require_signature_n2(l)?;
    let rep = WeilRep::new(l);
    let weight = half_rank(l);
    let zp = zplus.to_series(l, m_max)?;
    let mut total = zp.to_expansion::<R>();
    for c in cusps {
        if c.dim != rep.dim() {
            return Err(Error::ClassIndexMismatch(format!("cusp series of dim {} for rep of dim {}", c.dim, rep.dim())));
        }
        if c.weight != weight {
            return Err(Error::WeightMismatch { expected: weight.to_string(), found: c.weight.to_string() });
        }
        total = total.plus(c)?;
    }
    Ok(Assembled { rep, weight, zplus: zp, cusps: cusps.to_vec(), total })
}

impl<R: Real> Assembled<R> {
    pub fn eval(&self, tau: Complex<R>) -> Result<Vec<Complex<R>>> {
        self.total.eval(tau)
    }

    pub fn exponents_consistent(&self) -> bool {
        let a = &self.rep.module;
        let half = BigRational::new(1.into(), 2.into());
        self.total.coeffs.keys().all(|(m, j)| (m - a.qvalue(*j) * &half).is_integer())
    }

    pub fn modularity(&self, taus: &[Complex<R>]) -> Result<ModularityReport<R>> {
        let f = |z| self.eval(z);
        let s = slash_residual(f, &self.weight, &self.rep, &MpWord(vec![Gen::S]), taus)?;
        let t = slash_residual(f, &self.weight, &self.rep, &MpWord(vec![Gen::T]), taus)?;
        Ok(ModularityReport { s_residual: s, t_residual: t, exponents_consistent: self.exponents_consistent() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat as q;
    use crate::fixtures;

    fn degen(f: (Lattice, crate::exact::IntMatrix)) -> DegenerationData {
        DegenerationData::from_monodromy(f.1, f.0).unwrap()
    }

    #[test]
    fn type_ii_seed_value() {
        let d = degen(fixtures::type_ii_seed());
        let z: CuspContribution<f64> = z_minus_type_ii(&d, &q(5, 1), "P").unwrap();
        let v = z.series.eval(Complex::new(0.0, 1.0)).unwrap();
        assert!((v[0].re - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
        assert!(matches!(z_minus_type_iii::<f64>(&d, &Truncation::new(2), "P"), Err(Error::TypeMismatch { .. })));
    }

    #[test]
    fn type_ii_seed_plus_two() {
        let d = degen(fixtures::type_ii_seed_plus(2));
        let z: CuspContribution<f64> = z_minus_type_ii(&d, &q(4, 1), "P").unwrap();
        let ExactTerms::InvY { factor, terms } = &z.exact else { panic!() };
        assert_eq!(*factor, q(1, 1));
        let a = discriminant_group(&d.host);
        let zero = (0..a.len()).find(|&i| a.rep(i).iter().all(|x| x.is_zero())).unwrap();
        assert_eq!(terms.get(&(q(1, 1), zero)), Some(&BigInt::from(2)));
        assert_eq!(terms.get(&(q(4, 1), zero)), Some(&BigInt::from(2)));
    }

    #[test]
    fn type_iii_seed_terms() {
        let d = degen(fixtures::type_iii_seed());
        let z: CuspContribution<f64> = z_minus_type_iii(&d, &Truncation::new(3), "P").unwrap();
        let c0 = z.series.coeff(&q(0, 1), 0).unwrap();
        // (v, w) = (0, 0): sqrt(2/2) * 2 / (4 pi)
        let b0 = c0.beta.get(&q(0, 1)).unwrap().re;
        assert!((b0 - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
        let c1 = z.series.coeff(&q(1, 1), 0).unwrap().eval(1.0).unwrap().re;
        let from_zero_w = 2.0 * 2.0 / (4.0 * std::f64::consts::PI);
        assert!(c1 >= from_zero_w);
        assert!(z.tail_bound.unwrap() < 1e-12);
    }

    #[test]
    fn replacement_seed() {
        let d = degen(fixtures::type_ii_seed());
        let g = holomorphic_replacement_ii(&d, Replacement::G2, &q(4, 1)).unwrap();
        let got: Vec<BigRational> = (0..5).map(|m| g.get(&q(m, 1), 0)).collect();
        assert_eq!(got, vec![q(1, 12), q(-2, 1), q(-6, 1), q(-8, 1), q(-14, 1)]);
        assert_eq!(holomorphic_replacement_ii(&d, Replacement::Qddq, &q(4, 1)), Err(Error::RankTooSmall(4)));
        let d = degen(fixtures::type_ii_seed_plus(2));
        let h = holomorphic_replacement_ii(&d, Replacement::Qddq, &q(4, 1)).unwrap();
        let a = discriminant_group(&d.host);
        let zero = (0..a.len()).find(|&i| a.rep(i).iter().all(|x| x.is_zero())).unwrap();
        assert_eq!(h.get(&q(1, 1), zero), q(4, 1));
    }

    #[test]
    fn assemble_rejects_signature() {
        let l = Lattice::from_rows(&[&[2, 0], &[0, 2]]).unwrap();
        assert_eq!(
            assemble::<f64>(&GeneratingSeriesInput::default(), &[], &l, &q(1, 1)).unwrap_err(),
            Error::BadSignature(2, 0)
        );
    }

    #[test]
    fn type_iii_forms_agree() {
        for f in [fixtures::type_iii_seed(), fixtures::type_iii_glued()] {
            let d = degen(f);
            let tr = Truncation::new(12);
            let z: CuspContribution<f64> = z_minus_type_iii(&d, &tr, "P").unwrap();
            for tau in [Complex::new(0.0, 1.0), Complex::new(0.0, 2.0), Complex::new(1.0 / 3.0, 1.0)] {
                let a = z.series.eval(tau).unwrap();
                let b = z_minus_integral_form_iii(&d, tau, &tr).unwrap();
                let err = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
                assert!(err < 1e-6, "{tau} {err} {a:?} {b:?}");
            }
        }
    }

    #[test]
    fn synthetic_type_ii_modular() {
        let d = degen(fixtures::type_ii_seed_plus(2));
        let m = q(80, 1);
        let zp = synthetic_zplus_ii(&d, &m).unwrap();
        let zm: CuspContribution<f64> = z_minus_type_ii(&d, &m, "P").unwrap();
        let taus = [Complex::new(0.0, 1.0), Complex::new(1.0 / 3.0, 1.0), Complex::new(0.0, 2.0)];
        let a = assemble(&GeneratingSeriesInput::from_series(&zp), &[zm.series.clone()], &d.host, &m).unwrap();
        let rep = a.modularity(&taus).unwrap();
        assert!(rep.s_residual < 1e-8 && rep.t_residual < 1e-12 && rep.exponents_consistent, "{rep:?}");
        for v in [Replacement::G2, Replacement::Qddq] {
            let h = holomorphic_replacement_ii(&d, v, &m).unwrap().to_expansion::<f64>();
            let a = assemble(&GeneratingSeriesInput::from_series(&zp), &[h], &d.host, &m).unwrap();
            let rep = a.modularity(&taus).unwrap();
            assert!(rep.s_residual < 1e-5, "{v:?} {rep:?}");
        }
        let broken = assemble::<f64>(&GeneratingSeriesInput::from_series(&zp), &[], &d.host, &m).unwrap();
        assert!(broken.modularity(&taus).unwrap().s_residual > 1e-3);
    }
}
