//! Weil representation of the metaplectic group on discriminant forms, and the
//! intertwiners from graded pieces into the ambient representation.

use crate::degeneration::{DegenType, DegenerationData};
use crate::error::{Error, Result};
use crate::exact::{self, coordinates, solve_integer, to_int_vec, to_rat, IntMatrix, Matrix};
use crate::quadlattice::{discriminant_group, orthogonal_complement, reduce_mod, FiniteQuadraticModule, Lattice};
use crate::scalar::{rat, Real};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;

pub type CMatrix<R> = Matrix<Complex<R>>;

/// `e^{pi i r}` for rational `r`, exact at multiples of one half.
pub fn phase<R: Real>(r: &BigRational) -> Complex<R> {
    let r = reduce_mod(r, 2);
    let two = BigRational::from_integer(2.into());
    let quarter = &r * &two;
    if quarter.is_integer() {
        let (z, o) = (R::zero(), R::one());
        return match quarter.to_integer().to_string().as_str() {
            "0" => Complex::new(o, z),
            "1" => Complex::new(z, o),
            "2" => Complex::new(-o, z),
            _ => Complex::new(z, -o),
        };
    }
    let theta = R::PI() * rat::<R>(&r);
    Complex::new(theta.cos(), theta.sin())
}

pub fn max_abs_diff<R: Real>(a: &CMatrix<R>, b: &CMatrix<R>) -> R {
    assert_eq!((a.rows(), a.cols()), (b.rows(), b.cols()));
    a.data().iter().zip(b.data()).map(|(x, y)| (x - y).norm()).fold(R::zero(), R::max)
}

pub fn adjoint<R: Real>(a: &CMatrix<R>) -> CMatrix<R> {
    a.transpose().map(|z| z.conj())
}

pub fn kron<R: Real>(a: &CMatrix<R>, b: &CMatrix<R>) -> CMatrix<R> {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    S,
    T,
    TInv,
}

/// A word in `S`, `T`, `T^{-1}`, multiplied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MpWord(pub Vec<Gen>);

impl MpWord {
    pub fn repeat(&self, n: usize) -> MpWord {
        MpWord(self.0.iter().copied().cycle().take(self.0.len() * n).collect())
    }
}

impl FromStr for MpWord {
    type Err = String;
    /// Letters `S`, `T` and `t` (for `T^{-1}`).
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'S' => Ok(Gen::S),
                'T' => Ok(Gen::T),
                't' => Ok(Gen::TInv),
                _ => Err(format!("unknown generator {:?}", c)),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(MpWord)
    }
}

impl fmt::Display for MpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.0 {
            f.write_str(match g {
                Gen::S => "S",
                Gen::T => "T",
                Gen::TInv => "t",
            })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct WeilRep {
    pub module: FiniteQuadraticModule,
}

impl WeilRep {
    pub fn new(l: &Lattice) -> Self {
        WeilRep { module: discriminant_group(l) }
    }

    pub fn dim(&self) -> usize {
        self.module.len()
    }

    pub fn signature(&self) -> (usize, usize) {
        self.module.signature()
    }

    pub fn rho_t<R: Real>(&self) -> CMatrix<R> {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = phase(self.module.qvalue(i));
        }
        m
    }

    pub fn rho_t_inv<R: Real>(&self) -> CMatrix<R> {
        self.rho_t::<R>().map(|z| z.conj())
    }

    pub fn rho_s<R: Real>(&self) -> CMatrix<R> {
        let n = self.dim();
        let (bp, bm) = self.signature();
        let sig = BigRational::new((bm as i64 - bp as i64).into(), 4.into());
        let pre = phase::<R>(&sig) / R::lit(n as f64).sqrt();
        let mut m = CMatrix::zeros(n, n);
        for l in 0..n {
            for mu in 0..n {
                let b = self.module.bform(mu, l);
                m[(l, mu)] = pre * phase::<R>(&(-b * BigRational::from_integer(2.into())));
            }
        }
        m
    }

    pub fn rho_generator<R: Real>(&self, g: Gen) -> CMatrix<R> {
        match g {
            Gen::S => self.rho_s(),
            Gen::T => self.rho_t(),
            Gen::TInv => self.rho_t_inv(),
        }
    }

    pub fn rho_word<R: Real>(&self, word: &MpWord) -> CMatrix<R> {
        let mut acc = CMatrix::identity(self.dim());
        for &g in &word.0 {
            acc = &acc * &self.rho_generator(g);
        }
        acc
    }

    /// Max-entry errors of `(ST)^3 = S^2`, `S^8 = 1` and unitarity of `S`, `T`.
    pub fn relation_errors<R: Real>(&self) -> (R, R, R) {
        let st3 = self.rho_word::<R>(&"STSTST".parse().unwrap());
        let s2 = self.rho_word::<R>(&"SS".parse().unwrap());
        let s8 = self.rho_word::<R>(&"SSSSSSSS".parse().unwrap());
        let id = CMatrix::identity(self.dim());
        let unit = [Gen::S, Gen::T]
            .iter()
            .map(|&g| {
                let m = self.rho_generator::<R>(g);
                max_abs_diff(&(&m * &adjoint(&m)), &id)
            })
            .fold(R::zero(), R::max);
        (max_abs_diff(&st3, &s2), max_abs_diff(&s8, &id), unit)
    }
}

/// A 0/1 linear map between group algebras, stored by column supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iota {
    pub source_dim: usize,
    pub target_dim: usize,
    pub columns: Vec<Vec<usize>>,
}

impl Iota {
    pub fn matrix<R: Real>(&self) -> CMatrix<R> {
        let mut m = CMatrix::zeros(self.target_dim, self.source_dim);
        for (j, col) in self.columns.iter().enumerate() {
            for &i in col {
                m[(i, j)] = Complex::one();
            }
        }
        m
    }

    pub fn apply<R: Real>(&self, v: &[Complex<R>]) -> Vec<Complex<R>> {
        let mut out = vec![Complex::zero(); self.target_dim];
        for (j, col) in self.columns.iter().enumerate() {
            for &i in col {
                out[i] = out[i] + v[j];
            }
        }
        out
    }

    /// `max |iota rho_src(g) - rho_tgt(g) iota|`.
    pub fn intertwining_error<R: Real>(&self, src: &CMatrix<R>, tgt: &CMatrix<R>) -> R {
        let m = self.matrix::<R>();
        max_abs_diff(&(&m * src), &(tgt * &m))
    }
}

/// The isotropic intertwiner `rho_{Gr2 L} -> rho_L` for `W1` isotropic, `W2 = W1^perp`.
#[derive(Clone, Debug)]
pub struct IsotropicIota {
    pub gr2: Lattice,
    /// Lattice vectors lifting the basis of `Gr2`.
    pub lifts: IntMatrix,
    pub w1: IntMatrix,
    pub iota: Iota,
}

pub fn iota_isotropic(l: &Lattice, w1: &IntMatrix, w2: Option<&IntMatrix>) -> Result<IsotropicIota> {
    if !l.restrict(w1).is_zero() {
        return Err(Error::NotIsotropic);
    }
    let perp = orthogonal_complement(l, w1);
    if let Some(w2) = w2 {
        let h = |m: &IntMatrix| if m.rows() == 0 { m.clone() } else { exact::hermite_normal_form(m) };
        if h(w2) != h(&perp) {
            return Err(Error::NotPerp);
        }
    }
    let lifts = exact::complement_basis(w1, &perp);
    build_isotropic(l, w1, lifts)
}

/// The isotropic intertwiner using the graded basis stored in `d`.
pub fn iota_for(d: &DegenerationData) -> Result<IsotropicIota> {
    let g = d.graded()?;
    build_isotropic(&d.host, &d.w[1], g.lifts[2].clone())
}

fn build_isotropic(l: &Lattice, w1: &IntMatrix, lifts: IntMatrix) -> Result<IsotropicIota> {
    let gr2 = Lattice::new(l.restrict(&lifts), "Gr2")?;
    let a_l = discriminant_group(l);
    let a_g = discriminant_group(&gr2);
    let m = w1 * l.gram();
    let basis = to_rat(&w1.vstack(&lifts));
    let mut columns = vec![Vec::new(); a_g.len()];
    for gamma in 0..a_l.len() {
        let x = a_l.rep(gamma);
        let c: Vec<BigRational> = to_rat(&m).mul_vec(x).into_iter().map(|v| -v).collect();
        let Some(c) = to_int_vec(&c) else { continue };
        let Some(shift) = solve_integer(&m, &c) else { continue };
        let xp: Vec<BigRational> = x.iter().zip(&shift).map(|(a, b)| a + BigRational::from_integer(b.clone())).collect();
        let y = if basis.rows() == 0 {
            Vec::new()
        } else {
            let co = coordinates(&basis, &xp).ok_or_else(|| Error::InvariantInconsistency("lift not in W2".into()))?;
            co[w1.rows()..].to_vec()
        };
        let j = a_g
            .index_of(&y)
            .ok_or_else(|| Error::InvariantInconsistency("graded image not in the dual".into()))?;
        columns[j].push(gamma);
    }
    let size = columns.first().map_or(0, Vec::len);
    if columns.iter().any(|c| c.len() != size || c.is_empty()) {
        return Err(Error::InvariantInconsistency("iota columns have unequal support".into()));
    }
    let iota = Iota { source_dim: a_g.len(), target_dim: a_l.len(), columns };
    Ok(IsotropicIota { gr2, lifts, w1: w1.clone(), iota })
}

/// `rho_{Gr2prim} (x) rho_{Gr4^-} -> rho_L` for a type III degeneration.
#[derive(Clone, Debug)]
pub struct GradedTensorIota {
    pub prim: Lattice,
    pub gr4_minus: Lattice,
    pub iso: IsotropicIota,
    /// Source index `lambda * |A_4| + nu`.
    pub iota: Iota,
}

pub fn iota_graded_tensor(d: &DegenerationData) -> Result<GradedTensorIota> {
    let g = d.require(DegenType::III)?;
    let iso = iota_for(d)?;
    let prim = d.prim_lattice()?;
    let vol = g.q4.clone().expect("type III");
    let gr4_minus = Lattice::new(IntMatrix::from_vec(1, 1, vec![-vol]), "Gr4-")?;
    let a_p = discriminant_group(&prim);
    let a_4 = discriminant_group(&gr4_minus);
    let a_g = discriminant_group(&iso.gr2);
    let n = g.n_gr4.clone().expect("type III");
    let p = to_rat(&g.prim);
    let mut columns = Vec::with_capacity(a_p.len() * a_4.len());
    for lam in 0..a_p.len() {
        let base = p.transpose().mul_vec(a_p.rep(lam));
        for nu in 0..a_4.len() {
            let t = &a_4.rep(nu)[0];
            let z: Vec<BigRational> = base.iter().zip(&n).map(|(b, ni)| b + t * ni).collect();
            match a_g.index_of(&z) {
                Some(j) => columns.push(iso.iota.columns[j].clone()),
                None => columns.push(Vec::new()),
            }
        }
    }
    let iota = Iota { source_dim: columns.len(), target_dim: iso.iota.target_dim, columns };
    Ok(GradedTensorIota { prim, gr4_minus, iso, iota })
}

impl GradedTensorIota {
    pub fn source_rho<R: Real>(&self, g: Gen) -> CMatrix<R> {
        kron(&WeilRep::new(&self.prim).rho_generator(g), &WeilRep::new(&self.gr4_minus).rho_generator(g))
    }
}
