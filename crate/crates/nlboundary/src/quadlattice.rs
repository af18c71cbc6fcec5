//! Even lattices, discriminant forms and sublattice calculus.

use crate::error::{Error, Result};
use crate::exact::{
    self, det_int, inverse_rat, kernel_saturated, smith_normal_form, to_int, to_rat, to_rat_vec, IntMatrix,
    IntVector, RatVector,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMatrix,
    pub label: String,
    even: bool,
}

pub fn make_lattice(gram: IntMatrix) -> Result<Lattice> {
    Lattice::new(gram, "")
}

impl Lattice {
    pub fn new(gram: IntMatrix, label: &str) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare);
        }
        if gram != gram.transpose() {
            return Err(Error::NotSymmetric);
        }
        if det_int(&gram).is_zero() {
            return Err(Error::Degenerate);
        }
        let even = (0..gram.rows()).all(|i| gram[(i, i)].is_even());
        Ok(Lattice { gram, label: label.to_string(), even })
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<Self> {
        if rows.is_empty() {
            return Self::new(IntMatrix::zeros(0, 0), "");
        }
        Self::new(exact::int_matrix(rows), "")
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn det(&self) -> BigInt {
        det_int(&self.gram)
    }

    pub fn require_even(&self) -> Result<()> {
        if self.even {
            Ok(())
        } else {
            Err(Error::NotEven)
        }
    }

    pub fn signature(&self) -> (usize, usize) {
        signature(self)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature() == (self.rank(), 0)
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let gram = self.gram.block_diag(&other.gram);
        let even = self.even && other.even;
        Lattice { gram, label: format!("{}+{}", self.label, other.label), even }
    }

    /// Gram matrix of the rows of `basis` (coordinates in this lattice).
    pub fn restrict(&self, basis: &IntMatrix) -> IntMatrix {
        &(basis * &self.gram) * &basis.transpose()
    }

    pub fn pair_int(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        self.gram.pair(x, y)
    }

    pub fn pair(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        to_rat(&self.gram).pair(x, y)
    }

    /// Whether a rational vector lies in the dual lattice.
    pub fn in_dual(&self, x: &[BigRational]) -> bool {
        to_rat(&self.gram).mul_vec(x).iter().all(|c| c.is_integer())
    }
}

/// Signature by exact congruence diagonalization.
pub fn signature(l: &Lattice) -> (usize, usize) {
    let mut a = to_rat(l.gram());
    let n = a.rows();
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        if a[(k, k)].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[(j, j)].is_zero()) {
                a.swap_rows(k, j);
                a.swap_cols(k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) {
                for c in 0..n {
                    let v = a[(j, c)].clone();
                    a[(k, c)] += v;
                }
                for r in 0..n {
                    let v = a[(r, j)].clone();
                    a[(r, k)] += v;
                }
            } else {
                continue;
            }
        }
        let p = a[(k, k)].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = &a[(i, k)] / &p;
            for c in 0..n {
                let v = &a[(k, c)] * &f;
                a[(i, c)] -= v;
            }
            for r in 0..n {
                let v = &a[(r, k)] * &f;
                a[(r, i)] -= v;
            }
        }
    }
    (pos, neg)
}

/// Reduce a rational into `[0, m)`.
pub fn reduce_mod(q: &BigRational, m: i64) -> BigRational {
    let m = BigRational::from_integer(m.into());
    let k = (q / &m).floor();
    q - k * m
}

/// The discriminant group `L^dual / L` with its quadratic form.
#[derive(Clone, Debug)]
pub struct FiniteQuadraticModule {
    gram: IntMatrix,
    signature: (usize, usize),
    /// Smith diagonal entries greater than one.
    orders: Vec<BigInt>,
    /// Rows of `D V^{-1}` for the nontrivial Smith entries.
    coord_rows: Vec<IntVector>,
    coords: Vec<Vec<BigInt>>,
    reps: Vec<RatVector>,
    qvalues: Vec<BigRational>,
}

pub fn discriminant_group(l: &Lattice) -> FiniteQuadraticModule {
    FiniteQuadraticModule::new(l)
}

pub fn dual_cosets(l: &Lattice) -> Vec<RatVector> {
    discriminant_group(l).reps
}

/// Saturated basis of the vectors of `l` orthogonal to the rows of `s`.
pub fn orthogonal_complement(l: &Lattice, s: &IntMatrix) -> IntMatrix {
    if s.rows() == 0 {
        return IntMatrix::identity(l.rank());
    }
    kernel_saturated(&(s * l.gram()))
}

impl FiniteQuadraticModule {
    fn new(l: &Lattice) -> Self {
        let n = l.rank();
        let g = l.gram();
        let (_, d, v) = smith_normal_form(g);
        let vinv = to_int(&inverse_rat(&to_rat(&v)).expect("unimodular")).expect("integral inverse");
        let mut orders = Vec::new();
        let mut coord_rows = Vec::new();
        let mut gens: Vec<RatVector> = Vec::new();
        for i in 0..n {
            let di = d[(i, i)].clone();
            if di > BigInt::one() {
                let row: IntVector = vinv.row(i).iter().map(|x| x * &di).collect();
                coord_rows.push(row);
                let col = v.col_vec(i);
                gens.push(col.iter().map(|x| BigRational::new(x.clone(), di.clone())).collect());
                orders.push(di);
            }
        }
        let total: usize = orders.iter().map(|o| o.to_usize().expect("small group")).product();
        let mut coords = Vec::with_capacity(total);
        let mut reps = Vec::with_capacity(total);
        let mut qvalues = Vec::with_capacity(total);
        let gr = to_rat(g);
        for idx in 0..total {
            let c = Self::split_index(&orders, idx);
            let mut x = vec![BigRational::zero(); n];
            for (a, gen) in c.iter().zip(&gens) {
                for (xi, gi) in x.iter_mut().zip(gen) {
                    *xi += gi * BigRational::from_integer(a.clone());
                }
            }
            for xi in x.iter_mut() {
                *xi = reduce_mod(xi, 1);
            }
            qvalues.push(reduce_mod(&gr.pair(&x, &x), 2));
            reps.push(x);
            coords.push(c);
        }
        FiniteQuadraticModule { gram: g.clone(), signature: l.signature(), orders, coord_rows, coords, reps, qvalues }
    }

    fn split_index(orders: &[BigInt], mut idx: usize) -> Vec<BigInt> {
        let mut c = vec![BigInt::zero(); orders.len()];
        for (ci, o) in c.iter_mut().zip(orders).rev() {
            let o = o.to_usize().unwrap();
            *ci = BigInt::from(idx % o);
            idx /= o;
        }
        c
    }

    fn join_index(&self, c: &[BigInt]) -> usize {
        let mut idx = 0usize;
        for (ci, o) in c.iter().zip(&self.orders) {
            idx = idx * o.to_usize().unwrap() + ci.mod_floor(o).to_usize().unwrap();
        }
        idx
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn rep(&self, i: usize) -> &RatVector {
        &self.reps[i]
    }

    pub fn reps(&self) -> &[RatVector] {
        &self.reps
    }

    /// `Q(mu, mu)` reduced into `[0, 2)`.
    pub fn qvalue(&self, i: usize) -> &BigRational {
        &self.qvalues[i]
    }

    /// `Q(mu, lambda)` reduced into `[0, 1)`.
    pub fn bform(&self, i: usize, j: usize) -> BigRational {
        reduce_mod(&to_rat(&self.gram).pair(&self.reps[i], &self.reps[j]), 1)
    }

    /// Class index of a dual vector, or `None` if `x` is not in the dual lattice.
    pub fn index_of(&self, x: &[BigRational]) -> Option<usize> {
        if !to_rat(&self.gram).mul_vec(x).iter().all(|c| c.is_integer()) {
            return None;
        }
        let c: Option<Vec<BigInt>> = self
            .coord_rows
            .iter()
            .map(|row| {
                let y = exact::rat_dot(&to_rat_vec(row), x);
                y.is_integer().then(|| y.to_integer())
            })
            .collect();
        Some(self.join_index(&c?))
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        let c: Vec<BigInt> = self.coords[i].iter().zip(&self.coords[j]).map(|(a, b)| a + b).collect();
        self.join_index(&c)
    }

    pub fn neg(&self, i: usize) -> usize {
        let c: Vec<BigInt> = self.coords[i].iter().map(|a| -a).collect();
        self.join_index(&c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int_matrix, rat};

    #[test]
    fn make_lattice_flags() {
        assert!(Lattice::from_rows(&[&[2]]).unwrap().is_even());
        assert!(!Lattice::from_rows(&[&[1]]).unwrap().is_even());
        assert_eq!(Lattice::from_rows(&[&[0]]), Err(Error::Degenerate));
        assert_eq!(Lattice::from_rows(&[&[0, 1], &[2, 0]]), Err(Error::NotSymmetric));
    }

    #[test]
    fn signatures() {
        assert_eq!(Lattice::from_rows(&[&[2]]).unwrap().signature(), (1, 0));
        assert_eq!(Lattice::from_rows(&[&[0, 1], &[1, 0]]).unwrap().signature(), (1, 1));
        let g3 = Lattice::from_rows(&[&[0, 0, 1], &[0, -2, 0], &[1, 0, 0]]).unwrap();
        assert_eq!(g3.signature(), (1, 2));
    }

    #[test]
    fn discriminant_of_2_and_4() {
        let a = discriminant_group(&Lattice::from_rows(&[&[2]]).unwrap());
        assert_eq!(a.len(), 2);
        assert_eq!(a.rep(1), &vec![rat(1, 2)]);
        assert_eq!(a.qvalue(1), &rat(1, 2));
        let b = discriminant_group(&Lattice::from_rows(&[&[4]]).unwrap());
        assert_eq!(b.len(), 4);
        assert_eq!(b.rep(1), &vec![rat(1, 4)]);
        assert_eq!(b.qvalue(1), &rat(1, 4));
        assert_eq!(b.add(1, 3), 0);
        assert_eq!(b.neg(1), 3);
    }

    #[test]
    fn unimodular_is_trivial() {
        let u = Lattice::from_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(dual_cosets(&u), vec![vec![rat(0, 1), rat(0, 1)]]);
    }

    #[test]
    fn diag22_cosets() {
        let c = dual_cosets(&Lattice::from_rows(&[&[2, 0], &[0, 2]]).unwrap());
        let h = rat(1, 2);
        let z = rat(0, 1);
        assert_eq!(c, vec![vec![z.clone(), z.clone()], vec![z.clone(), h.clone()], vec![h.clone(), z], vec![h.clone(), h]]);
    }

    #[test]
    fn complements() {
        let l = Lattice::from_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 2]]).unwrap();
        let c = orthogonal_complement(&l, &int_matrix(&[&[0, 0, 1]]));
        assert_eq!(c, int_matrix(&[&[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(orthogonal_complement(&l, &IntMatrix::zeros(0, 3)), IntMatrix::identity(3));
        let u = Lattice::from_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(orthogonal_complement(&u, &int_matrix(&[&[1, 0]])), int_matrix(&[&[1, 0]]));
    }

    #[test]
    fn index_round_trip() {
        let l = Lattice::from_rows(&[&[0, 0, 1, 0], &[0, -2, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 2]]).unwrap();
        let a = discriminant_group(&l);
        assert_eq!(a.len(), 4);
        for i in 0..a.len() {
            assert_eq!(a.index_of(a.rep(i)), Some(i));
            let shifted: Vec<_> = a.rep(i).iter().map(|x| x + rat(3, 1)).collect();
            assert_eq!(a.index_of(&shifted), Some(i));
        }
        assert_eq!(a.index_of(&[rat(1, 3), rat(0, 1), rat(0, 1), rat(0, 1)]), None);
    }
}
