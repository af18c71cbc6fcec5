//! Seed degenerations used by tests, the acceptance suite and the CLI examples.

use crate::exact::{int_matrix, IntMatrix, Matrix};
use crate::quadlattice::Lattice;
use num_bigint::BigInt;

/// Basis `a1, a2, b1, b2` with `Q(a1,b2) = 1`, `Q(a2,b1) = -1`; `T = 1 + N`, `N a_i = b_i`.
pub fn type_ii_seed() -> (Lattice, IntMatrix) {
    let gram = int_matrix(&[&[0, 0, 0, 1], &[0, 0, -1, 0], &[0, -1, 0, 0], &[1, 0, 0, 0]]);
    let t = int_matrix(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[1, 0, 1, 0], &[0, 1, 0, 1]]);
    (Lattice::new(gram, "typeII").unwrap(), t)
}

/// The type II seed plus an orthogonal vector `u` with `Q(u,u) = k`, fixed by `T`.
pub fn type_ii_seed_plus(k: i64) -> (Lattice, IntMatrix) {
    let (l, t) = type_ii_seed();
    let extra = Lattice::new(int_matrix(&[&[k]]), "u").unwrap();
    let l = Lattice::new(l.direct_sum(&extra).gram().clone(), &format!("typeII+[{}]", k)).unwrap();
    (l, t.block_diag(&Matrix::identity(1)))
}

/// `G3 = [[0,0,1],[0,-2,0],[1,0,0]]`.
pub fn g3() -> Lattice {
    Lattice::new(int_matrix(&[&[0, 0, 1], &[0, -2, 0], &[1, 0, 0]]), "G3").unwrap()
}

/// Basis `b1, b2, b3, u`, Gram `G3 + [k]`; `T b1 = b1+b2+b3`, `T b2 = b2+2b3`.
pub fn type_iii_with(k: i64) -> (Lattice, IntMatrix) {
    let gram = g3().gram().block_diag(&int_matrix(&[&[k]]));
    let t = int_matrix(&[&[1, 0, 0, 0], &[1, 1, 0, 0], &[1, 2, 1, 0], &[0, 0, 0, 1]]);
    (Lattice::new(gram, &format!("typeIII[{}]", k)).unwrap(), t)
}

pub fn type_iii_seed() -> (Lattice, IntMatrix) {
    type_iii_with(2)
}

/// Basis `b1, b2, w, b3` with `w = (b2 + u)/2`, `Q(u,u) = 10`. Here `Gr2prim + N Gr4` has index 2 in `Gr2`.
pub fn type_iii_glued() -> (Lattice, IntMatrix) {
    let gram = int_matrix(&[&[0, 0, 0, 1], &[0, -2, -1, 0], &[0, -1, 2, 0], &[1, 0, 0, 0]]);
    let t = int_matrix(&[&[1, 0, 0, 0], &[1, 1, 0, 0], &[0, 0, 1, 0], &[1, 2, 1, 1]]);
    (Lattice::new(gram, "typeIII-glued").unwrap(), t)
}

/// Gaussian-rational coordinates `(re, im)` of `e^{2,1}` for the type II seed: `a1 + (i/2) a2`.
pub fn type_ii_e21() -> (Vec<BigInt>, Vec<BigInt>, BigInt) {
    // numerators over a common denominator
    (vec![2.into(), 0.into(), 0.into(), 0.into()], vec![0.into(), 1.into(), 0.into(), 0.into()], 2.into())
}
