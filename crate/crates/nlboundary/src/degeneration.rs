//! Monodromy logarithm, weight filtration, graded lattices and boundary invariants.

use crate::error::{Error, Result};
use crate::exact::{
    self, clear_denominators, complement_basis, coordinates, gcd_all, hermite_normal_form, saturate, saturate_rat,
    to_int, to_int_vec, to_rat, to_rat_vec, IntMatrix, IntVector, RatMatrix, RatVector,
};
use crate::quadlattice::{orthogonal_complement, Lattice};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

const MAX_ENTRY_BITS: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DegenType {
    Trivial,
    II,
    III,
}

impl fmt::Display for DegenType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DegenType::Trivial => "Trivial",
            DegenType::II => "II",
            DegenType::III => "III",
        })
    }
}

#[derive(Clone, Debug)]
pub struct MonodromyOperator {
    pub t: IntMatrix,
    pub host: Lattice,
    /// Smallest `e` with `(T^e - 1)^3 = 0`.
    pub exponent: BigInt,
}

fn too_big(m: &IntMatrix) -> bool {
    m.data().iter().any(|x| x.bits() > MAX_ENTRY_BITS)
}

fn pow_big(t: &IntMatrix, e: &BigInt) -> Option<IntMatrix> {
    let mut acc = IntMatrix::identity(t.rows());
    let bits = e.bits();
    for i in (0..bits).rev() {
        acc = &acc * &acc;
        if e.bit(i) {
            acc = &acc * t;
        }
        if too_big(&acc) {
            return None;
        }
    }
    Some(acc)
}

fn unipotent_power(t: &IntMatrix, e: &BigInt) -> bool {
    let Some(p) = pow_big(t, e) else { return false };
    let m = &p - &IntMatrix::identity(t.rows());
    (&(&m * &m) * &m).is_zero()
}

fn euler_phi(mut k: u64) -> u64 {
    let mut phi = k;
    let mut p = 2;
    while p * p <= k {
        if k % p == 0 {
            while k % p == 0 {
                k /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if k > 1 {
        phi -= phi / k;
    }
    phi
}

fn prime_factors(mut k: BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= k {
        while k.is_multiple_of(&p) {
            out.push(p.clone());
            k /= &p;
        }
        p += 1;
    }
    if k > BigInt::one() {
        out.push(k);
    }
    out
}

impl MonodromyOperator {
    pub fn new(t: IntMatrix, host: Lattice) -> Result<Self> {
        let n = host.rank();
        if t.rows() != n || t.cols() != n {
            return Err(Error::DimensionMismatch(format!("T is {}x{}, lattice rank {}", t.rows(), t.cols(), n)));
        }
        if &(&t.transpose() * host.gram()) * &t != *host.gram() {
            return Err(Error::NotIsometry);
        }
        let one = BigInt::one();
        if unipotent_power(&t, &one) {
            return Ok(MonodromyOperator { t, host, exponent: one });
        }
        // Eigenvalue orders k of an integral isometry satisfy phi(k) <= rank.
        let bound = 2 * (n as u64) * (n as u64) + 2;
        let l = (1..=bound)
            .filter(|&k| euler_phi(k) <= n as u64)
            .fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)));
        if !unipotent_power(&t, &l) {
            return Err(Error::NotQuasiUnipotent);
        }
        let mut e = l.clone();
        for p in prime_factors(l) {
            if e.is_multiple_of(&p) && unipotent_power(&t, &(&e / &p)) {
                e /= &p;
            }
        }
        Ok(MonodromyOperator { t, host, exponent: e })
    }

    pub fn effective_t(&self) -> IntMatrix {
        pow_big(&self.t, &self.exponent).expect("checked at construction")
    }
}

/// `N = (T^e - 1) - (T^e - 1)^2 / 2`.
pub fn monodromy_log(op: &MonodromyOperator) -> RatMatrix {
    let n = op.host.rank();
    let m = to_rat(&(&op.effective_t() - &IntMatrix::identity(n)));
    let m2 = &m * &m;
    &m - &m2.scale(&exact::rat(1, 2))
}

/// Graded pieces of the weight filtration, with bases lifted to the lattice.
#[derive(Clone, Debug)]
pub struct GradedData {
    /// Rows are lattice vectors lifting a basis of `Gr_k`, `k = 0..=4`.
    pub lifts: Vec<IntMatrix>,
    /// Gram matrix of `Q_2` on the lifted basis of `Gr_2`.
    pub q2: IntMatrix,
    /// `Q_3(v, w) = Q(v, N w)` on `Gr_3` (type II).
    pub q3: Option<IntMatrix>,
    /// `Q_4(v, v) = Q(v, N^2 v)` on the generator of `Gr_4` (type III).
    pub q4: Option<BigInt>,
    /// Primitive part of `Gr_2`, rows in `Gr_2` coordinates.
    pub prim: IntMatrix,
    pub prim_gram: IntMatrix,
    /// `N` of the `Gr_4` generator, in `Gr_2` coordinates (type III).
    pub n_gr4: Option<RatVector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Invariants {
    II { r1: BigInt, disc31: BigInt, deg_q3: BigInt },
    III { r2: BigInt, disc40: BigInt, vol4: BigInt },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaChecks {
    pub gr4_even: bool,
    pub n_gr4_integral: bool,
    pub dual_containment: bool,
}

impl LemmaChecks {
    pub fn all(&self) -> bool {
        self.gr4_even && self.n_gr4_integral && self.dual_containment
    }
}

#[derive(Clone, Debug)]
pub struct DegenerationData {
    pub host: Lattice,
    pub n: RatMatrix,
    pub kind: DegenType,
    pub exponent: BigInt,
    /// Saturated bases of `W_0, ..., W_4` in lattice coordinates.
    pub w: Vec<IntMatrix>,
    pub graded: Option<GradedData>,
}

fn image_rows(m: &RatMatrix) -> RatMatrix {
    m.transpose()
}

fn same_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    let ha = if a.rows() == 0 { a.clone() } else { hermite_normal_form(a) };
    let hb = if b.rows() == 0 { b.clone() } else { hermite_normal_form(b) };
    ha.rows() == hb.rows() && (ha.rows() == 0 || ha == hb)
}

fn n_apply(n: &RatMatrix, v: &[BigInt]) -> RatVector {
    n.mul_vec(&to_rat_vec(v))
}

/// Classify `N` and build the weight filtration.
pub fn classify_and_filter(n: RatMatrix, host: &Lattice) -> Result<DegenerationData> {
    let dim = host.rank();
    let n2 = &n * &n;
    if !(&n2 * &n).is_zero() {
        return Err(Error::NotNilpotentOrder3);
    }
    let zero = IntMatrix::zeros(0, dim);
    let all = IntMatrix::identity(dim);
    let (kind, w) = if n.is_zero() {
        (DegenType::Trivial, vec![zero.clone(), zero.clone(), zero, all.clone(), all])
    } else if n2.is_zero() {
        let w1 = saturate_rat(&image_rows(&n));
        let w2 = exact::kernel_saturated(&exact::clear_row_denominators(&n));
        (DegenType::II, vec![zero, w1, w2, all.clone(), all])
    } else {
        let w0 = saturate_rat(&image_rows(&n2));
        let ker = exact::kernel_saturated(&exact::clear_row_denominators(&n));
        let im = exact::clear_row_denominators(&image_rows(&n));
        let w2 = saturate(&im.vstack(&ker));
        (DegenType::III, vec![w0.clone(), w0, w2.clone(), w2, all])
    };
    Ok(DegenerationData { host: host.clone(), n, kind, exponent: BigInt::one(), w, graded: None })
}

impl DegenerationData {
    pub fn from_monodromy(t: IntMatrix, host: Lattice) -> Result<Self> {
        let op = MonodromyOperator::new(t, host)?;
        let n = monodromy_log(&op);
        let mut d = classify_and_filter(n, &op.host)?;
        d.exponent = op.exponent;
        d.check_structure()?;
        if d.kind != DegenType::Trivial {
            d.graded = Some(graded_data(&d)?);
        }
        Ok(d)
    }

    fn check_structure(&self) -> Result<()> {
        let g = to_rat(self.host.gram());
        let skew = &(&g * &self.n) + &(&self.n.transpose() * &g);
        if !skew.is_zero() {
            return Err(Error::InvariantInconsistency("N is not skew for Q".into()));
        }
        if self.kind == DegenType::Trivial {
            return Ok(());
        }
        for k in 2..=4 {
            let target = to_rat(&self.w[k - 2]);
            for i in 0..self.w[k].rows() {
                let image = n_apply(&self.n, self.w[k].row(i));
                if image.iter().all(Zero::is_zero) {
                    continue;
                }
                if target.rows() == 0 || coordinates(&target, &image).is_none() {
                    return Err(Error::InvariantInconsistency(format!("N W_{} not in W_{}", k, k - 2)));
                }
            }
        }
        for k in 0..=3 {
            let perp = orthogonal_complement(&self.host, &self.w[k]);
            if !same_lattice(&perp, &self.w[3 - k]) {
                return Err(Error::InvariantInconsistency(format!("W_{}^perp != W_{}", k, 3 - k)));
            }
        }
        Ok(())
    }

    pub fn graded(&self) -> Result<&GradedData> {
        self.graded.as_ref().ok_or_else(|| Error::TypeMismatch { expected: "II or III".into(), found: self.kind.to_string() })
    }

    pub fn require(&self, kind: DegenType) -> Result<&GradedData> {
        if self.kind != kind {
            return Err(Error::TypeMismatch { expected: kind.to_string(), found: self.kind.to_string() });
        }
        self.graded()
    }

    /// Coordinates in `Gr_k` of a rational vector lying in `W_k`.
    pub fn gr_coords(&self, k: usize, x: &[BigRational]) -> Option<RatVector> {
        let g = self.graded.as_ref()?;
        let below = if k == 0 { IntMatrix::zeros(0, self.host.rank()) } else { self.w[k - 1].clone() };
        let basis = below.vstack(&g.lifts[k]);
        if basis.rows() == 0 {
            return x.iter().all(Zero::is_zero).then(Vec::new);
        }
        let c = coordinates(&to_rat(&basis), x)?;
        Some(c[below.rows()..].to_vec())
    }

    pub fn gr2_lattice(&self) -> Result<Lattice> {
        Lattice::new(self.graded()?.q2.clone(), "Gr2")
    }

    pub fn prim_lattice(&self) -> Result<Lattice> {
        Lattice::new(self.graded()?.prim_gram.clone(), "Gr2prim")
    }

    pub fn gr4_lattice(&self) -> Result<Lattice> {
        let q4 = self.require(DegenType::III)?.q4.clone().expect("type III");
        Lattice::new(IntMatrix::from_vec(1, 1, vec![q4]), "Gr4")
    }
}

/// Graded lattices and their induced forms.
pub fn graded_data(d: &DegenerationData) -> Result<GradedData> {
    if d.kind == DegenType::Trivial {
        return Err(Error::TypeMismatch { expected: "II or III".into(), found: "Trivial".into() });
    }
    let dim = d.host.rank();
    let mut lifts = Vec::with_capacity(5);
    for k in 0..=4 {
        let below = if k == 0 { IntMatrix::zeros(0, dim) } else { d.w[k - 1].clone() };
        lifts.push(complement_basis(&below, &d.w[k]));
    }
    let q2 = d.host.restrict(&lifts[2]);
    let g = to_rat(d.host.gram());
    let mut out = GradedData {
        q2: q2.clone(),
        q3: None,
        q4: None,
        prim: IntMatrix::identity(lifts[2].rows()),
        prim_gram: q2.clone(),
        n_gr4: None,
        lifts,
    };
    let pairing = |a: &[BigInt], b: &RatVector| g.pair(&to_rat_vec(a), b);
    match d.kind {
        DegenType::II => {
            let l3 = &out.lifts[3];
            let mut q3 = RatMatrix::zeros(l3.rows(), l3.rows());
            for i in 0..l3.rows() {
                for j in 0..l3.rows() {
                    q3[(i, j)] = pairing(l3.row(i), &n_apply(&d.n, l3.row(j)));
                }
            }
            out.q3 = Some(to_int(&q3).ok_or_else(|| Error::InvariantInconsistency("Q3 not integral".into()))?);
            if !Lattice::new(q2.clone(), "").map(|l| l.is_positive_definite()).unwrap_or(q2.rows() == 0) {
                return Err(Error::InvariantInconsistency("Gr2 is not positive definite".into()));
            }
        }
        DegenType::III => {
            if out.lifts[4].rows() != 1 || out.lifts[0].rows() != 1 {
                return Err(Error::InvariantInconsistency("Gr4 and Gr0 must have rank 1".into()));
            }
            let v4 = out.lifts[4].row_vec(0);
            let n2v = n_apply(&(&d.n * &d.n), &v4);
            let q4 = pairing(&v4, &n2v);
            if !q4.is_integer() {
                return Err(Error::InvariantInconsistency("Q4 not integral".into()));
            }
            out.q4 = Some(q4.to_integer());
            // N on Gr2 lands in Gr0; the primitive part is its kernel.
            let l2 = &out.lifts[2];
            let mut map = RatMatrix::zeros(1, l2.rows());
            for j in 0..l2.rows() {
                let img = n_apply(&d.n, l2.row(j));
                let c = d.gr_coords_with(&out, 0, &img).ok_or_else(|| Error::InvariantInconsistency("N Gr2 not in W0".into()))?;
                map[(0, j)] = c[0].clone();
            }
            let prim = exact::kernel_saturated(&exact::clear_row_denominators(&map));
            out.prim_gram = &(&prim * &q2) * &prim.transpose();
            out.prim = prim;
            if !Lattice::new(out.prim_gram.clone(), "").map(|l| l.is_positive_definite()).unwrap_or(out.prim_gram.rows() == 0) {
                return Err(Error::InvariantInconsistency("Gr2prim is not positive definite".into()));
            }
            let nv = n_apply(&d.n, &v4);
            out.n_gr4 = Some(d.gr_coords_with(&out, 2, &nv).ok_or_else(|| Error::InvariantInconsistency("N Gr4 not in W2".into()))?);
        }
        DegenType::Trivial => unreachable!(),
    }
    Ok(out)
}

impl DegenerationData {
    fn gr_coords_with(&self, g: &GradedData, k: usize, x: &[BigRational]) -> Option<RatVector> {
        let below = if k == 0 { IntMatrix::zeros(0, self.host.rank()) } else { self.w[k - 1].clone() };
        let basis = below.vstack(&g.lifts[k]);
        let c = coordinates(&to_rat(&basis), x)?;
        Some(c[below.rows()..].to_vec())
    }
}

fn abs_det(m: &IntMatrix) -> BigInt {
    exact::det_int(m).abs()
}

/// Boundary invariants with all identities asserted.
pub fn invariants(d: &DegenerationData) -> Result<Invariants> {
    let g = d.graded()?;
    let gram = d.host.gram();
    match d.kind {
        DegenType::II => {
            let l3 = &g.lifts[3];
            let w1 = &d.w[1];
            let mut m = IntMatrix::zeros(w1.rows(), l3.rows());
            for j in 0..l3.rows() {
                let img = n_apply(&d.n, l3.row(j));
                let c = coordinates(&to_rat(w1), &img).and_then(|c| to_int_vec(&c));
                let c = c.ok_or_else(|| Error::InvariantInconsistency("N Gr3 not integral in Gr1".into()))?;
                for (i, ci) in c.into_iter().enumerate() {
                    m[(i, j)] = ci;
                }
            }
            if !m.is_square() {
                return Err(Error::InvariantInconsistency("rank Gr3 != rank Gr1".into()));
            }
            let r1 = match exact::cokernel_order(&m) {
                exact::CokernelOrder::Finite(r) => r,
                exact::CokernelOrder::Infinite => {
                    return Err(Error::InvariantInconsistency("N: Gr3 -> Gr1 not bijective".into()))
                }
            };
            let pairing = &(l3 * gram) * &w1.transpose();
            let disc31 = abs_det(&pairing);
            let sq = &r1 * &disc31;
            let deg_q3 = sq.sqrt();
            if &deg_q3 * &deg_q3 != sq {
                return Err(Error::InvariantInconsistency(format!("r1*disc31 = {} is not a square", sq)));
            }
            let q3 = g.q3.as_ref().expect("type II");
            if *q3 != -&q3.transpose() {
                return Err(Error::InvariantInconsistency("Q3 not antisymmetric".into()));
            }
            if abs_det(q3) != sq {
                return Err(Error::InvariantInconsistency("|det Q3| != r1*disc31".into()));
            }
            Ok(Invariants::II { r1, disc31, deg_q3 })
        }
        DegenType::III => {
            let v4 = g.lifts[4].row_vec(0);
            let v0 = g.lifts[0].row_vec(0);
            let n2v = n_apply(&(&d.n * &d.n), &v4);
            let c = coordinates(&to_rat(&g.lifts[0]), &n2v)
                .and_then(|c| to_int_vec(&c))
                .ok_or_else(|| Error::InvariantInconsistency("N^2 Gr4 not integral in Gr0".into()))?;
            let r2 = c[0].abs();
            if r2.is_zero() {
                return Err(Error::InvariantInconsistency("N^2: Gr4 -> Gr0 not bijective".into()));
            }
            let disc40 = d.host.pair_int(&v4, &v0).abs();
            let vol4 = g.q4.clone().expect("type III");
            if !vol4.is_positive() {
                return Err(Error::InvariantInconsistency("Q4 not positive".into()));
            }
            if vol4 != &r2 * &disc40 {
                return Err(Error::InvariantInconsistency(format!("Vol4 = {} != r2*disc40 = {}", vol4, &r2 * &disc40)));
            }
            let lemma = lemma_checks(d)?;
            if !lemma.all() {
                return Err(Error::InvariantInconsistency(format!("lattice integrality checks failed: {:?}", lemma)));
            }
            Ok(Invariants::III { r2, disc40, vol4 })
        }
        DegenType::Trivial => unreachable!(),
    }
}

/// The three integrality statements about `Gr_4` and `N(Gr_4)` inside `Gr_2`.
pub fn lemma_checks(d: &DegenerationData) -> Result<LemmaChecks> {
    let g = d.require(DegenType::III)?;
    let vol = g.q4.clone().expect("type III");
    let n = g.n_gr4.clone().expect("type III");
    let gr4_even = vol.is_even();
    let n_int = to_int_vec(&n);
    let n_gr4_integral = n_int.is_some();
    // (Gr2)^dual meets the line N(Gr4 V) in (1/g) Z n with g = gcd(Q2 n); N(Gr4 dual) is (1/Vol) Z n.
    let q2n = to_rat(&g.q2).mul_vec(&n);
    let gg = gcd_all(&clear_denominators(&q2n));
    let scale = q2n.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    // q2n = ints / scale, so gcd over Q is gg / scale.
    let gcd_q = BigRational::new(gg, scale);
    let dual_containment = !gcd_q.is_zero() && (BigRational::from_integer(vol) / gcd_q).is_integer();
    Ok(LemmaChecks { gr4_even, n_gr4_integral, dual_containment })
}

impl Invariants {
    /// Square of the scalar prefactor of the boundary term.
    pub fn prefactor_sq(&self) -> BigRational {
        match self {
            Invariants::II { r1, deg_q3, .. } => {
                let c = BigRational::new(r1.clone(), deg_q3.clone());
                &c * &c
            }
            Invariants::III { r2, disc40, .. } => BigRational::new(r2.clone(), 2 * disc40),
        }
    }

    pub fn to_u64s(&self) -> Vec<u64> {
        match self {
            Invariants::II { r1, disc31, deg_q3 } => vec![r1, disc31, deg_q3],
            Invariants::III { r2, disc40, vol4 } => vec![r2, disc40, vol4],
        }
        .into_iter()
        .map(|x| x.to_u64().unwrap_or(u64::MAX))
        .collect()
    }
}

pub fn rat_vec_is_integral(v: &[BigRational]) -> bool {
    to_int_vec(v).is_some()
}

pub fn int_rows(m: &IntMatrix) -> Vec<IntVector> {
    m.to_rows()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int_matrix, rat};
    use crate::fixtures;

    #[test]
    fn identity_is_trivial() {
        let (l, _) = fixtures::type_iii_seed();
        let d = DegenerationData::from_monodromy(IntMatrix::identity(4), l).unwrap();
        assert_eq!(d.kind, DegenType::Trivial);
        assert!(d.n.is_zero());
        assert!(invariants(&d).is_err());
    }

    #[test]
    fn type_iii_log() {
        let (l, t) = fixtures::type_iii_seed();
        let op = MonodromyOperator::new(t, l).unwrap();
        let n = monodromy_log(&op);
        let expected = to_rat(&int_matrix(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 2, 0, 0], &[0, 0, 0, 0]]));
        assert_eq!(n, expected);
    }

    #[test]
    fn type_iii_filtration() {
        let (l, t) = fixtures::type_iii_seed();
        let d = DegenerationData::from_monodromy(t, l).unwrap();
        assert_eq!(d.kind, DegenType::III);
        assert_eq!(d.w[0], int_matrix(&[&[0, 0, 1, 0]]));
        assert_eq!(d.w[2], int_matrix(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]));
        let g = d.graded().unwrap();
        assert_eq!(g.q4, Some(BigInt::from(2)));
        assert_eq!(g.prim_gram, int_matrix(&[&[2]]));
        let n = g.n_gr4.clone().unwrap();
        assert_eq!(to_rat(&g.q2).pair(&n, &n), rat(-2, 1));
        assert_eq!(
            invariants(&d).unwrap(),
            Invariants::III { r2: 2.into(), disc40: 1.into(), vol4: 2.into() }
        );
    }

    #[test]
    fn type_ii_seed() {
        let (l, t) = fixtures::type_ii_seed();
        let d = DegenerationData::from_monodromy(t.clone(), l).unwrap();
        assert_eq!(d.kind, DegenType::II);
        assert_eq!(d.n, to_rat(&(&t - &IntMatrix::identity(4))));
        assert_eq!(d.w[1], int_matrix(&[&[0, 0, 1, 0], &[0, 0, 0, 1]]));
        assert_eq!(d.w[2], d.w[1]);
        let g = d.graded().unwrap();
        assert_eq!(g.lifts[2].rows(), 0);
        assert_eq!(g.q3.clone().unwrap(), int_matrix(&[&[0, 1], &[-1, 0]]));
        assert_eq!(
            invariants(&d).unwrap(),
            Invariants::II { r1: 1.into(), disc31: 1.into(), deg_q3: 1.into() }
        );
    }

    #[test]
    fn type_ii_with_extra_block() {
        let (l, t) = fixtures::type_ii_seed_plus(2);
        let d = DegenerationData::from_monodromy(t, l).unwrap();
        assert_eq!(d.graded().unwrap().q2, int_matrix(&[&[2]]));
    }

    #[test]
    fn rejects_non_isometry() {
        let (l, _) = fixtures::type_iii_seed();
        let mut t = IntMatrix::identity(4);
        t[(0, 1)] = 1.into();
        assert_eq!(DegenerationData::from_monodromy(t, l).unwrap_err(), Error::NotIsometry);
    }

    #[test]
    fn quasi_unipotent_cover() {
        let (l, t) = fixtures::type_ii_seed();
        let minus = t.scale(&BigInt::from(-1));
        let d = DegenerationData::from_monodromy(minus, l).unwrap();
        assert_eq!(d.exponent, BigInt::from(2));
        assert_eq!(d.kind, DegenType::II);
    }

    #[test]
    fn finite_order_is_not_unipotent_but_covers_to_trivial() {
        let l = Lattice::from_rows(&[&[2, 0], &[0, 2]]).unwrap();
        let swap = int_matrix(&[&[0, 1], &[1, 0]]);
        let d = DegenerationData::from_monodromy(swap, l).unwrap();
        assert_eq!(d.exponent, BigInt::from(2));
        assert_eq!(d.kind, DegenType::Trivial);
    }

    #[test]
    fn infinite_order_isometry_rejected() {
        // Multiplication by the square of the golden ratio on Z[phi] with twice the norm form.
        let l = Lattice::from_rows(&[&[2, 1], &[1, -2]]).unwrap();
        let t = int_matrix(&[&[1, 1], &[1, 2]]);
        assert_eq!(MonodromyOperator::new(t, l).unwrap_err(), Error::NotQuasiUnipotent);
    }
}
